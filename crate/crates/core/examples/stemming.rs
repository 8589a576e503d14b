// Tokenization, stop-word removal and stemming, and a term found only
// through its stem.
//
// cargo run -p adrcode --example stemming

use std::error::Error;

use adrcode::{encode, fixtures, preprocess, EncoderConfig, Language, SnowballStemmer, StopWords};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let stemmer = SnowballStemmer::new(Language::Italian);
    let text = "Forti tremori alle mani, dopo la seconda dose.";
    let seq = preprocess(text, &StopWords::italian(), &stemmer);
    println!("{text}");
    for t in &seq.tokens {
        println!(
            "  {:<10} stem {:<8} chars {}..{}",
            t.surface, t.stem, t.span.start, t.span.end
        );
    }
    assert!(seq.tokens.iter().all(|t| t.surface != "la" && t.surface != "alle"));

    let bundle = fixtures::italian_bundle();
    let result = encode("tremore ipertensiva", &bundle, &EncoderConfig::default());
    for s in &result.selected {
        println!("{} ({}) stem match: {}", s.llt_text, s.llt_code, s.stem_used);
    }
    let ipert = result
        .selected
        .iter()
        .find(|s| s.llt_text == "Ipertensivo")
        .ok_or("no stem match")?;
    assert!(ipert.stem_used);
    let english = SnowballStemmer::new(Language::English);
    println!("english: swelling -> {}", adrcode::Stemmer::stem(&english, "swelling"));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
