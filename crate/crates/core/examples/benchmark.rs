// Compare automatic coding with a small gold-standard corpus, per
// description-length bucket.
//
// cargo run -p adrcode --example benchmark

use std::error::Error;

use adrcode::benchmark::{load_corpus, run_benchmark};
use adrcode::{fixtures, EncoderConfig};

const CORPUS: &str = "\
report_id,description,gold_llt_codes
R1,cefalea,9100007
R2,febbre alta,9100013
R3,\"Shock anafilattico (ipotensione + rash cutaneo) 1 h dopo\",9100001;9100003;9100005
R4,\"Reazione locale estesa, dolore locale; cefalea e febbre per due giorni\",9100014;9100009;9100007;9100012
R5,nausea,9100099
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let corpus = load_corpus(CORPUS.as_bytes())?;
    let bundle = fixtures::italian_bundle();
    let report = run_benchmark(&corpus, &bundle, &EncoderConfig::default());

    println!(
        "{:<8} {:>3} {:>7} {:>9} {:>8}",
        "bucket", "n", "flagged", "identical", "jaccard"
    );
    for b in report.buckets.iter().chain(std::iter::once(&report.overall)) {
        println!(
            "{:<8} {:>3} {:>7} {:>9.3} {:>8.3}",
            b.bucket, b.n_reports, b.n_flagged, b.identical_rate, b.mean_jaccard
        );
    }
    for d in &report.details {
        if let Some(e) = &d.error {
            println!("{} flagged: {e}", d.report_id);
        }
    }
    // "febbre" maps to the same preferred term as the gold "piressia"
    assert!(report.details[1].identical);
    assert_eq!(report.flagged(), 1);
    assert_eq!(report.overall.identical_rate, 1.0);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
