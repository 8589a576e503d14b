// Build a bundle from terms constructed in code, with an English stemmer
// and a custom stop list.
//
// cargo run -p adrcode --example custom_dictionary

use std::error::Error;
use std::sync::Arc;

use adrcode::{encode, DictionaryBundle, EncoderConfig, Language, SnowballStemmer, StopWords, Term};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let rows = [
        ("E1", "Headache", "EP1", "Headache"),
        ("E2", "Back pain", "EP2", "Back pain"),
        ("E3", "Pain", "EP3", "Pain"),
        ("E4", "Swollen arm", "EP4", "Peripheral swelling"),
        ("E5", "Fever", "EP5", "Pyrexia"),
    ];
    let terms: Vec<Term> = rows
        .iter()
        .map(|&(c, t, pc, pt)| Term::new(c, t, pc, pt).ok_or("term without letters"))
        .collect::<Result<_, _>>()?;
    let stop = StopWords::parse("# one per line\nthe\nand\nin\nof\nmy\n");
    let bundle = DictionaryBundle::new(terms, stop, Arc::new(SnowballStemmer::new(Language::English)));

    let text = "Fever and pains in the back, my arm swollen";
    let result = encode(text, &bundle, &EncoderConfig::default());
    println!("{text}");
    for s in &result.selected {
        println!(
            "  {} {} (c1 {:.2}, stem {})",
            s.llt_code, s.llt_text, s.weights.c1, s.stem_used
        );
    }
    let codes: Vec<&str> = result.codes().collect();
    assert!(codes.contains(&"E5"));
    assert!(codes.contains(&"E4"));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
