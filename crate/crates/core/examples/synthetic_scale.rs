// Build a large synthetic dictionary and time index construction and
// encoding.
//
// cargo run --release -p adrcode --example synthetic_scale -- 70000

use std::error::Error;
use std::sync::Arc;
use std::time::Instant;

use adrcode::synthetic::Generator;
use adrcode::{encode, DictionaryBundle, EncoderConfig, Language, SnowballStemmer, StopWords};

pub fn scale(terms: usize, descriptions: usize) -> Result<(), Box<dyn Error>> {
    let mut g = Generator::new(7, 20_000);
    let generated = g.terms(terms, 6);

    let t = Instant::now();
    let bundle = DictionaryBundle::new(
        generated,
        StopWords::empty(),
        Arc::new(SnowballStemmer::new(Language::Italian)),
    );
    println!(
        "built {terms} terms in {:?} ({} exact keys)",
        t.elapsed(),
        bundle.exact().len()
    );

    let texts: Vec<String> = (0..descriptions).map(|_| g.description(250)).collect();
    let mut times: Vec<f64> = Vec::with_capacity(texts.len());
    let mut released = 0;
    for text in &texts {
        let t = Instant::now();
        released += encode(text, &bundle, &EncoderConfig::default()).selected.len();
        times.push(t.elapsed().as_secs_f64() * 1e3);
    }
    times.sort_by(f64::total_cmp);
    println!(
        "{descriptions} descriptions of 250 chars: median {:.2} ms, max {:.2} ms, {released} terms released",
        times[times.len() / 2],
        times[times.len() - 1]
    );
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    scale(5_000, 20)
}

fn main() -> Result<(), Box<dyn Error>> {
    let terms = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(70_000);
    scale(terms, 200)
}
