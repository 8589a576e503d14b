//! Comparing automatic encodings with gold manual encodings.
//!
//! Both sides are lifted from low-level terms to preferred terms before the
//! comparison. Reports are bucketed by the character length of their raw
//! description: `<=20`, `20-40`, `40-100`, `100-250` and `>250`.

use std::collections::BTreeSet;
use std::io::{self, Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::DictionaryBundle;
use crate::dictionary::Dictionary;
use crate::encoder::{encode, EncoderConfig, EncodingResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldReport {
    pub report_id: String,
    pub description: String,
    pub gold_llt_codes: BTreeSet<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("i/o error reading corpus: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Csv { line: u64, source: csv::Error },
    #[error("line {line}: expected 3 columns (report_id, description, gold_llt_codes), found {found}")]
    ColumnCount { line: u64, found: usize },
    #[error("line {line}: duplicate report id {id:?}")]
    DuplicateId { line: u64, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BenchmarkError {
    #[error("unknown term code {0:?}")]
    UnknownCode(String),
    #[error("empty description")]
    EmptyDescription,
}

/// Read a corpus CSV: `report_id,description,gold_llt_codes` with codes
/// separated by `;`.
pub fn load_corpus<R: Read>(source: R) -> Result<Vec<GoldReport>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let mut out = Vec::new();
    let mut ids = BTreeSet::new();
    for row in reader.records() {
        let record = row.map_err(|source| CorpusError::Csv {
            line: source.position().map(|p| p.line()).unwrap_or(0),
            source,
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            return Err(CorpusError::ColumnCount {
                line,
                found: record.len(),
            });
        }
        let id = record[0].trim().to_string();
        if !ids.insert(id.clone()) {
            return Err(CorpusError::DuplicateId { line, id });
        }
        out.push(GoldReport {
            report_id: id,
            description: record[1].to_string(),
            gold_llt_codes: record[2]
                .split(';')
                .map(str::trim)
                .filter(|c| !c.is_empty())
                .map(String::from)
                .collect(),
        });
    }
    Ok(out)
}

/// Write a corpus in the format [`load_corpus`] reads.
pub fn write_corpus<W: Write>(corpus: &[GoldReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["report_id", "description", "gold_llt_codes"])?;
    for r in corpus {
        let codes: Vec<&str> = r.gold_llt_codes.iter().map(String::as_str).collect();
        w.write_record([r.report_id.as_str(), r.description.as_str(), &codes.join(";")])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LengthBucket {
    #[serde(rename = "<=20")]
    UpTo20,
    #[serde(rename = "20-40")]
    UpTo40,
    #[serde(rename = "40-100")]
    UpTo100,
    #[serde(rename = "100-250")]
    UpTo250,
    #[serde(rename = ">250")]
    Over250,
}

impl LengthBucket {
    pub const ALL: [LengthBucket; 5] = [
        LengthBucket::UpTo20,
        LengthBucket::UpTo40,
        LengthBucket::UpTo100,
        LengthBucket::UpTo250,
        LengthBucket::Over250,
    ];

    pub fn of(description: &str) -> Self {
        match description.chars().count() {
            0..=20 => LengthBucket::UpTo20,
            21..=40 => LengthBucket::UpTo40,
            41..=100 => LengthBucket::UpTo100,
            101..=250 => LengthBucket::UpTo250,
            _ => LengthBucket::Over250,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LengthBucket::UpTo20 => "<=20",
            LengthBucket::UpTo40 => "20-40",
            LengthBucket::UpTo100 => "40-100",
            LengthBucket::UpTo250 => "100-250",
            LengthBucket::Over250 => ">250",
        }
    }
}

/// Image of a set of low-level codes under the term -> preferred term map.
pub fn map_to_pt<'a, I>(codes: I, dictionary: &Dictionary) -> Result<BTreeSet<String>, BenchmarkError>
where
    I: IntoIterator<Item = &'a str>,
{
    codes
        .into_iter()
        .map(|c| {
            dictionary
                .by_code(c)
                .map(|t| t.pt_code.clone())
                .ok_or_else(|| BenchmarkError::UnknownCode(c.to_string()))
        })
        .collect()
}

/// `|a ∩ b| / |a ∪ b|`, 1 for two empty sets.
pub fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub identical: bool,
    pub jaccard: f64,
    pub gold_pts: BTreeSet<String>,
    pub auto_pts: BTreeSet<String>,
    /// Automatic preferred terms missing from the gold set.
    pub false_positives: usize,
    /// Gold preferred terms the automatic encoding missed.
    pub omissions: usize,
}

pub fn compare_pt_sets(gold_pts: BTreeSet<String>, auto_pts: BTreeSet<String>) -> Comparison {
    Comparison {
        identical: gold_pts == auto_pts,
        jaccard: jaccard(&gold_pts, &auto_pts),
        false_positives: auto_pts.difference(&gold_pts).count(),
        omissions: gold_pts.difference(&auto_pts).count(),
        gold_pts,
        auto_pts,
    }
}

/// Compare one report at preferred-term level using the full selected list.
pub fn compare_report(
    gold: &GoldReport,
    auto: &EncodingResult,
    dictionary: &Dictionary,
) -> Result<Comparison, BenchmarkError> {
    let gold_pts = map_to_pt(gold.gold_llt_codes.iter().map(String::as_str), dictionary)?;
    let auto_pts = map_to_pt(auto.codes(), dictionary)?;
    Ok(compare_pt_sets(gold_pts, auto_pts))
}

/// One line of the per-report audit stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDetail {
    pub report_id: String,
    pub bucket: LengthBucket,
    pub identical: bool,
    pub jaccard: f64,
    pub auto_pts: Vec<String>,
    pub gold_pts: Vec<String>,
    pub false_positives: usize,
    pub omissions: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketStats {
    pub bucket: String,
    pub n_reports: usize,
    /// Reports that could not be evaluated; excluded from the rates.
    pub n_flagged: usize,
    pub identical_rate: f64,
    pub mean_jaccard: f64,
}

impl BucketStats {
    fn from_details<'a>(label: &str, details: impl Iterator<Item = &'a ReportDetail>) -> Self {
        let (mut n, mut flagged, mut identical, mut jac) = (0usize, 0usize, 0usize, 0.0);
        for d in details {
            n += 1;
            if d.error.is_some() {
                flagged += 1;
                continue;
            }
            identical += usize::from(d.identical);
            jac += d.jaccard;
        }
        let evaluated = n - flagged;
        let (identical_rate, mean_jaccard) = if evaluated == 0 {
            (0.0, 0.0)
        } else {
            (identical as f64 / evaluated as f64, jac / evaluated as f64)
        };
        Self {
            bucket: label.to_string(),
            n_reports: n,
            n_flagged: flagged,
            identical_rate,
            mean_jaccard,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    /// One row per length bucket, in bucket order, including empty ones.
    pub buckets: Vec<BucketStats>,
    pub overall: BucketStats,
    /// Per-report detail in corpus order.
    pub details: Vec<ReportDetail>,
}

impl BenchmarkReport {
    pub fn flagged(&self) -> usize {
        self.overall.n_flagged
    }

    /// JSON-lines, one object per report.
    pub fn write_details<W: Write>(&self, mut out: W) -> io::Result<()> {
        for d in &self.details {
            serde_json::to_writer(&mut out, d)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    }

    /// CSV with one row per bucket followed by an `all` row.
    pub fn write_summary<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.buckets.iter().chain(std::iter::once(&self.overall)) {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn evaluate(report: &GoldReport, bundle: &DictionaryBundle, config: &EncoderConfig) -> ReportDetail {
    let bucket = LengthBucket::of(&report.description);
    let outcome = if report.description.trim().is_empty() {
        Err(BenchmarkError::EmptyDescription)
    } else {
        let auto = encode(&report.description, bundle, config);
        compare_report(report, &auto, bundle.dictionary())
    };
    match outcome {
        Ok(c) => ReportDetail {
            report_id: report.report_id.clone(),
            bucket,
            identical: c.identical,
            jaccard: c.jaccard,
            auto_pts: c.auto_pts.into_iter().collect(),
            gold_pts: c.gold_pts.into_iter().collect(),
            false_positives: c.false_positives,
            omissions: c.omissions,
            error: None,
        },
        Err(e) => ReportDetail {
            report_id: report.report_id.clone(),
            bucket,
            identical: false,
            jaccard: 0.0,
            auto_pts: Vec::new(),
            gold_pts: Vec::new(),
            false_positives: 0,
            omissions: 0,
            error: Some(e.to_string()),
        },
    }
}

/// Encode every description, compare with its gold set and aggregate per
/// bucket. Reports are evaluated in parallel; output stays in corpus order.
/// The display cap is not applied.
pub fn run_benchmark(corpus: &[GoldReport], bundle: &DictionaryBundle, config: &EncoderConfig) -> BenchmarkReport {
    let details: Vec<ReportDetail> = corpus.par_iter().map(|r| evaluate(r, bundle, config)).collect();
    let buckets = LengthBucket::ALL
        .iter()
        .map(|&b| BucketStats::from_details(b.label(), details.iter().filter(|d| d.bucket == b)))
        .collect();
    let overall = BucketStats::from_details("all", details.iter());
    BenchmarkReport {
        buckets,
        overall,
        details,
    }
}
