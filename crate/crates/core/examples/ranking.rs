// Every voted term with its five criteria, in rank order, and which ones
// the release step kept.
//
// cargo run -p adrcode --example ranking

use std::error::Error;

use adrcode::{encode_detailed, fixtures, EncoderConfig};

const REPORT: &str = "Reazione locale estesa, dolore locale; cefalea e febbre per due giorni";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let bundle = fixtures::italian_bundle();
    let enc = encode_detailed(REPORT, &bundle, &EncoderConfig::default());

    let surfaces: Vec<&str> = enc.tokens.iter().map(|t| t.surface.as_str()).collect();
    println!("tokens: {surfaces:?}\n");
    println!(
        "{:<4} {:<34} {:>5} {:>3} {:>6} {:>5} {:>3}  voters  released",
        "rank", "term", "c1", "c2", "c3", "c4", "c5"
    );
    for (rank, s) in enc.ranked.iter().enumerate() {
        let w = &s.weights;
        let term = bundle.dictionary().term(s.record.term);
        let released = enc.release.selected.iter().position(|&i| i == rank);
        println!(
            "{:<4} {:<34} {:>5.3} {:>3} {:>6.3} {:>5.2} {:>3}  {:<7} {}",
            rank + 1,
            term.text,
            w.c1,
            w.c2,
            w.c3,
            w.c4,
            w.c5,
            format!("{:?}", s.record.voters),
            released.map_or(String::new(), |n| format!("#{}", n + 1)),
        );
    }

    let mut kept: Vec<&str> = enc.result.selected.iter().map(|s| s.llt_text.as_str()).collect();
    kept.sort();
    assert_eq!(kept, ["Cefalea", "Dolore", "Febbre", "Reazione locale"]);
    // ranking is a total order on the criteria
    for pair in enc.ranked.windows(2) {
        assert!(pair[0].weights.cmp_criteria(&pair[1].weights).is_le());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
