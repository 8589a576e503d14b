// Encode a free-text report and print the released terms.
//
// cargo run -p adrcode --example encode_text -- "cefalea e febbre"

use std::error::Error;

use adrcode::{encode_detailed, fixtures, EncoderConfig};

const REPORT: &str = "Shock anafilattico (ipotensione + rash cutaneo) 1 h dopo assunzione x os del farmaco";

pub fn encode_and_print(text: &str) -> Vec<String> {
    let bundle = fixtures::italian_bundle();
    let enc = encode_detailed(text, &bundle, &EncoderConfig::default());
    let result = enc.result;
    println!("{text}");
    for s in &result.selected {
        let spans: Vec<&str> = s
            .voters
            .iter()
            .map(|&v| enc.tokens.tokens[v].span.slice(text))
            .collect();
        println!(
            "  {} {:<22} -> PT {} {:<24} from {:?}",
            s.llt_code, s.llt_text, s.pt_code, s.pt_text, spans
        );
    }
    let uncovered = result.covered_tokens.iter().filter(|c| !**c).count();
    println!("  {uncovered} token(s) not covered");
    result.selected.into_iter().map(|s| s.llt_text).collect()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut got = encode_and_print(REPORT);
    got.sort();
    assert_eq!(got, ["Ipotensione", "Rash cutaneo", "Shock anafilattico"]);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    match std::env::args().nth(1) {
        Some(text) => {
            encode_and_print(&text);
            Ok(())
        }
        None => run_example(),
    }
}
