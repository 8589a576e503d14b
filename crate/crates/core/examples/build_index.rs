// Load a dictionary CSV and look inside the two inverted indexes.
//
// cargo run -p adrcode --example build_index

use std::error::Error;
use std::sync::Arc;

use adrcode::{fixtures, load_dictionary, DictionaryBundle, Language, PostingSource, SnowballStemmer, StopWords};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let terms = load_dictionary(fixtures::ITALIAN_FIXTURE_CSV.as_bytes())?;
    let bundle = DictionaryBundle::new(
        terms,
        StopWords::italian(),
        Arc::new(SnowballStemmer::new(Language::Italian)),
    );

    println!("version       {}", bundle.version());
    println!("terms         {}", bundle.dictionary().len());
    println!(
        "exact keys    {} ({} postings)",
        bundle.exact().len(),
        bundle.exact().posting_count()
    );
    println!(
        "stemmed keys  {} ({} postings)",
        bundle.stemmed().len(),
        bundle.stemmed().posting_count()
    );

    let stem = bundle.stemmer().stem("vaccinazione");
    for (index, key) in [(bundle.exact(), "vaccinazione"), (bundle.stemmed(), stem.as_str())] {
        println!("\n{:?} {key:?}:", index.variant());
        for p in index.postings(key) {
            let t = bundle.dictionary().term(p.term);
            println!("  {:<34} positions {:?}", t.text, p.positions);
        }
    }
    assert_eq!(bundle.exact().postings("vaccinazione").len(), 4);
    // "tremore" and "tremori" share a stem
    assert_eq!(bundle.exact().postings("tremore").len(), 1);
    assert_eq!(bundle.stemmed().postings(&bundle.stemmer().stem("tremori")).len(), 2);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
