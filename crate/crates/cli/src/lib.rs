//! `adrcode` command line: build-dict, encode, bench, serve.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 bad arguments or config,
//! 3 dictionary load failure.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use adrcode::benchmark::{load_corpus, run_benchmark, BenchmarkReport};
use adrcode::{encode, DictionaryBundle, EncodingResult};
use adrcode_service::{build_state, ConfigError, ServeError, ServiceConfig};
use clap::{Args, CommandFactory, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "adrcode",
    version,
    about = "Encode adverse drug reaction descriptions into dictionary terms"
)]
pub struct Cli {
    /// TOML settings file (same keys as the service); flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DictArgs {
    /// Dictionary CSV: llt_code,llt_text,pt_code,pt_text.
    #[arg(long, value_name = "CSV")]
    pub dict: Option<PathBuf>,
    /// Stop-word file, one word per line.
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Stemmer language code (it, en, fr, de, es, pt).
    #[arg(long)]
    pub language: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Tuning {
    /// Release only terms with c3 below this.
    #[arg(long)]
    pub c3_max: Option<f64>,
    /// Release only terms with c5 below this.
    #[arg(long)]
    pub c5_max: Option<u64>,
    /// Terms shown per description.
    #[arg(long)]
    pub display_cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a dictionary, build both indexes and print statistics.
    BuildDict {
        #[command(flatten)]
        dict: DictArgs,
        /// Print statistics as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Encode a text, or every line of a file.
    Encode {
        /// Description to encode.
        text: Option<String>,
        /// Read descriptions from FILE, one per line (`-` for stdin).
        #[arg(long, short, value_name = "FILE", conflicts_with = "text")]
        input: Option<PathBuf>,
        #[command(flatten)]
        dict: DictArgs,
        #[command(flatten)]
        tuning: Tuning,
        /// One JSON result per input line.
        #[arg(long)]
        json: bool,
        /// Do not cut the output to the display cap.
        #[arg(long)]
        all: bool,
        /// Report unreadable lines on stderr and continue.
        #[arg(long)]
        keep_going: bool,
    },
    /// Compare encodings with a gold corpus at preferred-term level.
    Bench {
        /// Corpus CSV: report_id,description,gold_llt_codes (codes `;`-separated).
        #[arg(long, value_name = "CSV")]
        corpus: PathBuf,
        #[command(flatten)]
        dict: DictArgs,
        #[command(flatten)]
        tuning: Tuning,
        /// Directory for summary.csv and details.jsonl.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Run the HTTP service.
    Serve {
        #[command(flatten)]
        dict: DictArgs,
        #[command(flatten)]
        tuning: Tuning,
        /// Session log directory.
        #[arg(long, value_name = "DIR", conflicts_with = "memory")]
        data_dir: Option<PathBuf>,
        /// Keep sessions in memory only.
        #[arg(long)]
        memory: bool,
        /// Address to bind, e.g. 127.0.0.1:8080 (port 0 picks a free one).
        #[arg(long, value_name = "ADDR")]
        listen: Option<SocketAddr>,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(clap::Error),
    BadConfig(String),
    Dictionary(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Usage(_) | Failure::BadConfig(_) => 2,
            Failure::Dictionary(_) => 3,
        }
    }

    /// Print the failure to stderr and return the exit code.
    pub fn report(self) -> i32 {
        let code = self.exit_code();
        match self {
            Failure::Usage(e) => {
                let _ = e.print();
            }
            Failure::BadConfig(m) | Failure::Dictionary(m) | Failure::Runtime(m) => eprintln!("adrcode: {m}"),
        }
        code
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Dictionary { .. } | ConfigError::StopWords { .. } => Failure::Dictionary(e.to_string()),
            _ => Failure::BadConfig(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn missing(arg: &str, sub: &str) -> Failure {
    let mut cmd = Cli::command();
    cmd.build();
    let mut sub = cmd.find_subcommand(sub).cloned().unwrap_or(cmd);
    Failure::Usage(sub.error(
        clap::error::ErrorKind::MissingRequiredArgument,
        format!("{arg} is required (flag or config file)"),
    ))
}

/// Parse `args` and run. Returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(f) => f.report(),
    }
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    let base = ServiceConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::BuildDict { dict, json } => {
            let config = settings(base, &dict, &Tuning::default());
            let (bundle, path) = load_bundle(&config, "build-dict")?;
            build_dict(&bundle, &path, json)
        }
        Command::Encode {
            text,
            input,
            dict,
            tuning,
            json,
            all,
            keep_going,
        } => {
            let lines = match (text, input) {
                (Some(t), None) => vec![Ok(t)],
                (None, Some(path)) => read_lines(&path)?,
                _ => return Err(missing("a TEXT argument or --input", "encode")),
            };
            let config = settings(base, &dict, &tuning);
            let (bundle, _) = load_bundle(&config, "encode")?;
            encode_lines(&bundle, &config, lines, json, all, keep_going)
        }
        Command::Bench {
            corpus,
            dict,
            tuning,
            out,
        } => {
            let config = settings(base, &dict, &tuning);
            let (bundle, _) = load_bundle(&config, "bench")?;
            bench(&bundle, &config, &corpus, &out)
        }
        Command::Serve {
            dict,
            tuning,
            data_dir,
            memory,
            listen,
        } => {
            let mut config = settings(base, &dict, &tuning);
            if memory {
                config.data_dir = None;
            } else if data_dir.is_some() {
                config.data_dir = data_dir;
            }
            if let Some(addr) = listen {
                config.listen = addr;
            }
            serve(config)
        }
    }
}

fn settings(mut config: ServiceConfig, dict: &DictArgs, tuning: &Tuning) -> ServiceConfig {
    if let Some(p) = &dict.dict {
        config.dictionary = Some(p.clone());
    }
    if let Some(p) = &dict.stopwords {
        config.stopwords = Some(p.clone());
    }
    if let Some(l) = &dict.language {
        config.language = l.clone();
    }
    if let Some(v) = tuning.c3_max {
        config.c3_max = v;
    }
    if let Some(v) = tuning.c5_max {
        config.c5_max = v;
    }
    if let Some(v) = tuning.display_cap {
        config.display_cap = v;
    }
    config
}

fn load_bundle(config: &ServiceConfig, sub: &str) -> Result<(DictionaryBundle, PathBuf), Failure> {
    let Some(path) = config.dictionary.clone() else {
        return Err(missing("--dict", sub));
    };
    let bundle = config.bundle()?.expect("dictionary path is set");
    Ok((bundle, path))
}

fn build_dict(bundle: &DictionaryBundle, path: &Path, json: bool) -> Result<(), Failure> {
    let terms = bundle.dictionary().terms();
    let pts: std::collections::BTreeSet<&str> = terms.iter().map(|t| t.pt_code.as_str()).collect();
    let rows: Vec<(&str, String)> = vec![
        ("dictionary", path.display().to_string()),
        ("version", bundle.version().to_string()),
        ("terms", terms.len().to_string()),
        ("preferred_terms", pts.len().to_string()),
        (
            "max_term_words",
            terms.iter().map(|t| t.size()).max().unwrap_or(0).to_string(),
        ),
        ("exact_keys", bundle.exact().len().to_string()),
        ("exact_postings", bundle.exact().posting_count().to_string()),
        ("stemmed_keys", bundle.stemmed().len().to_string()),
        ("stemmed_postings", bundle.stemmed().posting_count().to_string()),
        ("stop_words", bundle.stop_words().len().to_string()),
    ];
    let mut out = io::stdout().lock();
    if json {
        let map: serde_json::Map<String, serde_json::Value> = rows
            .into_iter()
            .map(|(k, v)| {
                let value = v.parse::<u64>().map(Into::into).unwrap_or(serde_json::Value::String(v));
                (k.to_string(), value)
            })
            .collect();
        writeln!(out, "{}", serde_json::Value::Object(map))?;
    } else {
        for (k, v) in rows {
            writeln!(out, "{k:<18}{v}")?;
        }
    }
    Ok(())
}

/// Lines of `path` (`-` is stdin); each is `Err` if not valid UTF-8.
fn read_lines(path: &Path) -> Result<Vec<Result<String, String>>, Failure> {
    let mut bytes = Vec::new();
    if path == Path::new("-") {
        io::stdin().read_to_end(&mut bytes)?;
    } else {
        bytes = fs::read(path).map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
    }
    if bytes.is_empty() {
        return Ok(Vec::new());
    }
    let body = bytes.strip_suffix(b"\n").unwrap_or(&bytes);
    Ok(body
        .split(|&b| b == b'\n')
        .map(|l| {
            let l = l.strip_suffix(b"\r").unwrap_or(l);
            String::from_utf8(l.to_vec()).map_err(|e| format!("not valid UTF-8: {e}"))
        })
        .collect())
}

fn encode_lines(
    bundle: &DictionaryBundle,
    config: &ServiceConfig,
    lines: Vec<Result<String, String>>,
    json: bool,
    all: bool,
    keep_going: bool,
) -> Result<(), Failure> {
    let encoder = config.encoder_config();
    let mut out = BufWriter::new(io::stdout().lock());
    let mut table: Vec<[String; 11]> = Vec::new();
    let mut failed = 0;
    for (n, line) in lines.into_iter().enumerate() {
        let text = match line {
            Ok(t) => t,
            Err(e) if keep_going => {
                eprintln!("line {}: {e}", n + 1);
                failed += 1;
                continue;
            }
            Err(e) => {
                out.flush()?;
                return Err(Failure::Runtime(format!("line {}: {e}", n + 1)));
            }
        };
        let full = encode(&text, bundle, &encoder);
        let shown: EncodingResult = if all { full } else { full.capped(encoder.display_cap) };
        if json {
            serde_json::to_writer(&mut out, &shown).map_err(|e| Failure::Runtime(e.to_string()))?;
            out.write_all(b"\n")?;
        } else {
            for (rank, s) in shown.selected.iter().enumerate() {
                let w = s.weights;
                table.push([
                    (n + 1).to_string(),
                    (rank + 1).to_string(),
                    s.llt_code.clone(),
                    s.llt_text.clone(),
                    s.pt_code.clone(),
                    format!("{:.3}", w.c1),
                    w.c2.to_string(),
                    format!("{:.3}", w.c3),
                    format!("{:.3}", w.c4),
                    w.c5.to_string(),
                    if s.stem_used { "yes" } else { "no" }.to_string(),
                ]);
            }
        }
    }
    if !table.is_empty() {
        let header = [
            "line", "rank", "llt_code", "llt_text", "pt_code", "c1", "c2", "c3", "c4", "c5", "stem",
        ];
        out.write_all(format_table(&header, &table).as_bytes())?;
    }
    out.flush()?;
    if failed > 0 {
        return Err(Failure::Runtime(format!("{failed} line(s) could not be encoded")));
    }
    Ok(())
}

fn format_table<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut widths = header.map(|h| h.chars().count());
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut s = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut l = String::new();
        for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
            if i + 1 == N {
                l.push_str(c);
            } else {
                let _ = write!(l, "{c:<w$}  ");
            }
        }
        s.push_str(l.trim_end());
        s.push('\n');
    };
    line(header.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
    s
}

fn bench(bundle: &DictionaryBundle, config: &ServiceConfig, corpus: &Path, out_dir: &Path) -> Result<(), Failure> {
    let file = File::open(corpus).map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", corpus.display())))?;
    let reports = load_corpus(file).map_err(|e| Failure::Runtime(format!("{}: {e}", corpus.display())))?;
    let report = run_benchmark(&reports, bundle, &config.encoder_config());
    fs::create_dir_all(out_dir)?;
    report
        .write_summary(File::create(out_dir.join("summary.csv"))?)
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    report.write_details(BufWriter::new(File::create(out_dir.join("details.jsonl"))?))?;
    io::stdout().lock().write_all(bench_table(&report).as_bytes())?;
    Ok(())
}

fn bench_table(report: &BenchmarkReport) -> String {
    let rows: Vec<[String; 5]> = report
        .buckets
        .iter()
        .chain(std::iter::once(&report.overall))
        .map(|b| {
            [
                b.bucket.clone(),
                b.n_reports.to_string(),
                b.n_flagged.to_string(),
                format!("{:.4}", b.identical_rate),
                format!("{:.4}", b.mean_jaccard),
            ]
        })
        .collect();
    format_table(
        &["bucket", "reports", "flagged", "identical_rate", "mean_jaccard"],
        &rows,
    )
}

fn serve(config: ServiceConfig) -> Result<(), Failure> {
    if config.dictionary.is_none() {
        eprintln!("adrcode: no dictionary configured; encoding routes will answer 503");
    }
    let state = build_state(&config).map_err(|e| match e {
        ServeError::Config(c) => Failure::from(c),
        other => Failure::Runtime(other.to_string()),
    })?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(config.listen).await?;
        eprintln!("adrcode: listening on http://{}", listener.local_addr()?);
        adrcode_service::serve(listener, state)
            .await
            .map_err(|e| Failure::Runtime(e.to_string()))
    })
}
