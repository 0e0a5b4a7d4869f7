//! `dowling`: build lattices, compute Möbius values and series, and run the
//! verification suites.
//!
//! Exit codes: 0 when everything checked agrees (possibly up to a documented
//! sign), 1 on a mismatch, 2 on bad input or an exceeded guard.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dowling_core::cache::{Cache, CACHE_DIR_ENV};
use dowling_core::el_shelling::{el_verify, ElReport};
use dowling_core::exact_series::{hyperbolic, DenominatorSequence, Hyperbolic};
use dowling_core::mobius_identities::{
    cor48_series, prop45_series, series_mu_dowling, series_mu_exponential,
};
use dowling_core::perm_stats::{
    des_count, des_q, descent_word, inversions, parse_permutation, DescentWord,
};
use dowling_core::structures::{
    build_d_rk, build_dowling_lattice, build_extended, build_partition_lattice, build_r_divisible,
    build_restricted_dowling, build_restricted_partitions, DowlingElement, Family, FamilyPoset,
    Guards, IndexSet, SetPartition,
};
use dowling_core::suites::{parse_rational, run_suite, SuiteConfig};
use dowling_core::{exec, Error, Rational, Result, TruncatedSeries};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "dowling",
    version,
    about = "Exact Möbius-function and shelling checks for Dowling and partition lattices"
)]
struct Cli {
    /// Worker threads; 1 runs everything on the calling thread.
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,
    /// Machine-readable output; each command has a plain default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Enables the result cache in this directory.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    guards: GuardArgs,
    #[command(subcommand)]
    command: Command,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct GuardArgs {
    /// Largest m for which set partitions are listed.
    #[arg(long, global = true)]
    max_enumerate_m: Option<usize>,
    /// Largest ground set for partition-lattice families.
    #[arg(long, global = true)]
    max_lattice_m: Option<usize>,
    /// Largest ground set for Dowling families.
    #[arg(long, global = true)]
    max_dowling_n: Option<usize>,
    /// Largest element count of a Dowling-family poset.
    #[arg(long, global = true)]
    max_elements: Option<usize>,
}

impl GuardArgs {
    fn resolve(&self) -> Guards {
        let d = Guards::default();
        Guards {
            max_enumerate_m: self.max_enumerate_m.unwrap_or(d.max_enumerate_m),
            max_lattice_m: self.max_lattice_m.unwrap_or(d.max_lattice_m),
            max_dowling_n: self.max_dowling_n.unwrap_or(d.max_dowling_n),
            max_elements: self.max_elements.unwrap_or(d.max_elements),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Runs a named suite (or `all`) and writes its report.
    Verify {
        suite: String,
        #[command(flatten)]
        params: Params,
        /// Sample points for q, e.g. `1,2,1/3`.
        #[arg(long, value_delimiter = ',')]
        q: Vec<String>,
        /// Sample points for t.
        #[arg(long, value_delimiter = ',')]
        t: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random tables per compositional check.
        #[arg(long)]
        samples: Option<usize>,
        /// Report file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds a lattice and prints its covers, ranks and elements.
    Lattice {
        #[arg(long, value_enum)]
        family: FamilyKind,
        #[command(flatten)]
        params: Params,
    },
    /// Prints μ(0̂, 1̂), or μ(0̂, x) for every x with `--table`.
    Mobius {
        #[arg(long, value_enum)]
        family: FamilyKind,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        table: bool,
    },
    /// Prints the first coefficients of a closed form.
    Series {
        #[arg(long, value_enum)]
        name: SeriesName,
        #[command(flatten)]
        params: Params,
        /// Raw coefficients of x^n instead of the normalised table.
        #[arg(long)]
        raw: bool,
    },
    /// Des and Des_q of words, or the word of a permutation.
    Descents {
        /// An ab-word such as `aba`.
        #[arg(long, conflicts_with_all = ["degree", "permutation"])]
        word: Option<String>,
        /// Tabulate every word of this degree.
        #[arg(long, conflicts_with = "permutation")]
        degree: Option<usize>,
        /// One-line notation, e.g. `562418379`.
        #[arg(long)]
        permutation: Option<String>,
        /// Print the inversion-weighted polynomial instead of the count.
        #[arg(long)]
        q: bool,
    },
    /// EL-labeling report for Π_m^{r,j}.
    ElCheck {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        j: usize,
    },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Prints the cache directory.
    Path,
    /// Deletes every cached entry.
    Clear,
}

#[derive(Args, Debug, Clone, Default)]
struct Params {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Level, or largest level for suites.
    #[arg(long, visible_alias = "nmax")]
    n: Option<usize>,
    /// Allowed block sizes: `2,4,6`, `P`, `N`, `2P`, `1+2N`.
    #[arg(long = "I")]
    blocks: Option<String>,
    /// Allowed zero-block sizes, same syntax as `--I`.
    #[arg(long = "J")]
    zero: Option<String>,
    /// Largest size at which `--I`/`--J` are applied.
    #[arg(long)]
    window: Option<usize>,
    /// Truncation order.
    #[arg(long = "T")]
    truncation: Option<usize>,
}

impl Params {
    fn blocks(&self) -> Result<Option<IndexSet>> {
        self.blocks.as_deref().map(str::parse).transpose()
    }

    fn zero(&self) -> Result<Option<IndexSet>> {
        self.zero.as_deref().map(str::parse).transpose()
    }

    fn need(&self, value: Option<usize>, name: &str) -> Result<usize> {
        value.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required here")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    /// Partition lattice Π_n.
    Pi,
    /// r-divisible partitions Π_{rn}^r.
    PiR,
    /// Extended lattice Π_m^{r,j}.
    PiRj,
    /// Dowling lattice L_n.
    Dowling,
    /// Dowling analogue D_n^{(r,k)}.
    DRk,
    /// Π_n with block sizes in I.
    PiI,
    /// L_n with block sizes in I and zero-block size in J.
    DowlingIj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesName {
    #[value(name = "cor3.4-exponential")]
    Cor34Exponential,
    #[value(name = "cor3.4-dowling")]
    Cor34Dowling,
    #[value(name = "prop4.5")]
    Prop45,
    #[value(name = "cor4.8")]
    Cor48,
    Sinh,
    Cosh,
    SechPow,
}

/// Either kind of built lattice.
enum Built {
    Partitions(FamilyPoset<SetPartition>),
    Dowling(FamilyPoset<DowlingElement>),
}

impl Built {
    fn poset(&self) -> &dowling_core::Poset {
        match self {
            Built::Partitions(f) => &f.poset,
            Built::Dowling(f) => &f.poset,
        }
    }

    fn label(&self, i: usize) -> String {
        let text = match self {
            Built::Partitions(f) => f.element(i).map(ToString::to_string),
            Built::Dowling(f) => f.element(i).map(ToString::to_string),
        };
        text.unwrap_or_else(|| "0̂".to_string())
    }

    fn export(&self) -> Result<serde_json::Value> {
        Ok(match self {
            Built::Partitions(f) => serde_json::to_value(f.export())?,
            Built::Dowling(f) => serde_json::to_value(f.export())?,
        })
    }
}

/// Builds the requested level with `0̂` adjoined.
fn build(kind: FamilyKind, p: &Params, guards: &Guards) -> Result<Built> {
    let s = p.s.unwrap_or(1);
    Ok(match kind {
        FamilyKind::Pi => {
            let n = p.need(p.n.or(p.m), "n")?;
            Built::Partitions(build_partition_lattice(n, guards)?.with_bottom())
        }
        FamilyKind::PiR => {
            let (r, n) = (p.need(p.r, "r")?, p.need(p.n, "n")?);
            Built::Partitions(build_r_divisible(r * n, r, guards)?)
        }
        FamilyKind::PiRj => {
            let (m, r, j) = (p.need(p.m, "m")?, p.need(p.r, "r")?, p.need(p.j, "j")?);
            Built::Partitions(build_extended(m, r, j, guards)?)
        }
        FamilyKind::Dowling => {
            let n = p.need(p.n, "n")?;
            Built::Dowling(build_dowling_lattice(n, s, guards)?.with_bottom())
        }
        FamilyKind::DRk => {
            let (n, r, k) = (p.need(p.n, "n")?, p.need(p.r, "r")?, p.need(p.k, "k")?);
            Built::Dowling(build_d_rk(n, r, k, s, guards)?.with_bottom())
        }
        FamilyKind::PiI => {
            let n = p.need(p.n, "n")?;
            let i = p
                .blocks()?
                .ok_or_else(|| Error::InvalidParameter("--I is required here".into()))?;
            Built::Partitions(build_restricted_partitions(n, &i, guards)?)
        }
        FamilyKind::DowlingIj => {
            let n = p.need(p.n, "n")?;
            let i = p
                .blocks()?
                .ok_or_else(|| Error::InvalidParameter("--I is required here".into()))?;
            let j = p
                .zero()?
                .ok_or_else(|| Error::InvalidParameter("--J is required here".into()))?;
            Built::Dowling(build_restricted_dowling(n, &i, &j, s, guards)?)
        }
    })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct MobiusOutput {
    mu: Option<i64>,
    table: Vec<MobiusEntry>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct MobiusEntry {
    element: String,
    mu: i64,
}

fn mobius(kind: FamilyKind, p: &Params, guards: &Guards) -> Result<MobiusOutput> {
    let built = build(kind, p, guards)?;
    let poset = built.poset();
    let bottom = poset
        .bottom()
        .ok_or_else(|| Error::Precondition("no least element".into()))?;
    let table = poset
        .mobius_from(bottom)
        .entries()
        .map(|(x, mu)| MobiusEntry {
            element: built.label(x),
            mu,
        })
        .collect();
    Ok(MobiusOutput {
        mu: poset.mobius_bottom_top(),
        table,
    })
}

fn series(name: SeriesName, p: &Params) -> Result<(TruncatedSeries, DenominatorSequence)> {
    let order = p.truncation.unwrap_or(8);
    let s = p.s.unwrap_or(1);
    let unit = DenominatorSequence::unit();
    Ok(match name {
        SeriesName::Cor34Exponential => {
            let family = match p.r {
                Some(r) => Family::RDivisible { r },
                None => Family::Partition,
            };
            let (m, _) = family.denominators();
            (series_mu_exponential(&m, order)?, m)
        }
        SeriesName::Cor34Dowling => {
            let family = match (p.r, p.k) {
                (Some(r), Some(k)) => Family::DowlingRk { r, k, s },
                _ => Family::Dowling { s },
            };
            let (m, nn) = family.denominators();
            let nn = nn.expect("Dowling families carry N");
            (series_mu_dowling(&m, &nn, s, order)?, nn)
        }
        SeriesName::Prop45 => (
            prop45_series(p.need(p.r, "r")?, p.need(p.k, "k")?, s, order)?,
            unit,
        ),
        SeriesName::Cor48 => (cor48_series(p.need(p.k, "k")?, s, order)?, unit),
        SeriesName::Sinh => (hyperbolic(Hyperbolic::Sinh, s, order)?, unit),
        SeriesName::Cosh => (hyperbolic(Hyperbolic::Cosh, s, order)?, unit),
        SeriesName::SechPow => (hyperbolic(Hyperbolic::SechPow, s, order)?, unit),
    })
}

fn suite_config(
    params: &Params,
    q: &[String],
    t: &[String],
    seed: u64,
    samples: Option<usize>,
    guards: Guards,
) -> Result<SuiteConfig> {
    let parse_all = |v: &[String]| {
        v.iter()
            .map(|x| parse_rational(x))
            .collect::<Result<Vec<Rational>>>()
    };
    Ok(SuiteConfig {
        m: params.m,
        r: params.r,
        j: params.j,
        k: params.k,
        s: params.s,
        n: params.n,
        blocks: params.blocks()?,
        zero: params.zero()?,
        window: params.window,
        truncation: params.truncation,
        q: parse_all(q)?,
        t: parse_all(t)?,
        seed,
        samples,
        guards,
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cached<T, F>(cache: Option<&Cache>, key: &str, compute: F) -> Result<T>
where
    T: Serialize + serde::de::DeserializeOwned,
    F: FnOnce() -> Result<T>,
{
    match cache {
        Some(c) => Ok(c.get_or_compute(key, compute)?.0),
        None => compute(),
    }
}

/// Runs the command; `Ok(false)` means a check did not pass.
fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let guards = cli.guards.resolve();
    let cache = cli.cache_dir.as_ref().map(Cache::new);
    match &cli.command {
        Command::Verify {
            suite,
            params,
            q,
            t,
            seed,
            samples,
            out: path,
        } => {
            let config = suite_config(params, q, t, *seed, *samples, guards)?;
            let report = run_suite(suite, &config)?;
            let mut file;
            let sink: &mut dyn Write = match path {
                Some(p) => {
                    file = BufWriter::new(File::create(p)?);
                    &mut file
                }
                None => out,
            };
            match cli.format {
                Some(Format::Csv) => report.write_csv(&mut *sink)?,
                _ => write_json(sink, &report)?,
            }
            sink.flush()?;
            for section in &report.sections {
                eprintln!(
                    "{}: {}",
                    section.suite,
                    if section.passed { "pass" } else { "FAIL" }
                );
            }
            Ok(report.passed)
        }
        Command::Lattice { family, params } => {
            let built = build(*family, params, &guards)?;
            match cli.format {
                Some(Format::Csv) => {
                    writeln!(out, "lower,upper")?;
                    for (x, y) in built.poset().covers() {
                        writeln!(out, "{x},{y}")?;
                    }
                }
                _ => write_json(out, &built.export()?)?,
            }
            Ok(true)
        }
        Command::Mobius {
            family,
            params,
            table,
        } => {
            let key = mobius_key(*family, params)?;
            let result: MobiusOutput =
                cached(cache.as_ref(), &key, || mobius(*family, params, &guards))?;
            match (cli.format, table) {
                (Some(Format::Csv), true) => {
                    writeln!(out, "element,mu")?;
                    for e in &result.table {
                        writeln!(out, "\"{}\",{}", e.element, e.mu)?;
                    }
                }
                (_, true) => write_json(out, &result)?,
                (_, false) => match result.mu {
                    Some(mu) => writeln!(out, "{mu}")?,
                    None => {
                        return Err(Error::Precondition(
                            "the poset has no greatest element".into(),
                        ))
                    }
                },
            }
            Ok(true)
        }
        Command::Series { name, params, raw } => {
            let (series, den) = series(*name, params)?;
            let values: Vec<String> = (0..=series.order())
                .map(|n| {
                    Ok(if *raw {
                        series.coeff(n)?.clone()
                    } else {
                        series.coeff_den(n, &den)?
                    }
                    .to_string())
                })
                .collect::<Result<_>>()?;
            match cli.format {
                None => writeln!(out, "{}", values.join(", "))?,
                Some(Format::Json) => write_json(
                    out,
                    &serde_json::json!({
                        "name": name.to_possible_value().expect("named").get_name(),
                        "normalised": !raw,
                        "coefficients": values,
                    }),
                )?,
                Some(Format::Csv) => {
                    writeln!(out, "n,coefficient")?;
                    for (n, v) in values.iter().enumerate() {
                        writeln!(out, "{n},{v}")?;
                    }
                }
            }
            Ok(true)
        }
        Command::Descents {
            word,
            degree,
            permutation,
            q,
        } => {
            if let Some(text) = permutation {
                let sigma = parse_permutation(text)?;
                writeln!(out, "{} inv={}", descent_word(&sigma)?, inversions(&sigma)?)?;
                return Ok(true);
            }
            let words: Vec<DescentWord> = match (word, degree) {
                (Some(w), _) => vec![w.parse()?],
                (None, Some(d)) => DescentWord::all(*d),
                (None, None) => {
                    return Err(Error::InvalidParameter(
                        "give --word, --degree or --permutation".into(),
                    ))
                }
            };
            let rows: Vec<(String, String)> = words
                .iter()
                .map(|w| {
                    Ok((
                        w.to_string(),
                        if *q {
                            des_q(w)?.to_string()
                        } else {
                            des_count(w)?.to_string()
                        },
                    ))
                })
                .collect::<Result<_>>()?;
            if word.is_some() {
                writeln!(out, "{}", rows[0].1)?;
            } else {
                match cli.format {
                    Some(Format::Csv) => {
                        writeln!(out, "word,value")?;
                        for (w, v) in &rows {
                            writeln!(out, "{w},{v}")?;
                        }
                    }
                    _ => write_json(
                        out,
                        &rows
                            .iter()
                            .map(|(w, v)| serde_json::json!({ "word": w, "value": v }))
                            .collect::<Vec<_>>(),
                    )?,
                }
            }
            Ok(true)
        }
        Command::ElCheck { m, r, j } => {
            let key = Cache::key(
                "el",
                &[
                    ("m", m.to_string()),
                    ("r", r.to_string()),
                    ("j", j.to_string()),
                ],
            );
            let report: ElReport = cached(cache.as_ref(), &key, || el_verify(*m, *r, *j, &guards))?;
            match cli.format {
                Some(Format::Csv) => {
                    let mut w = csv::Writer::from_writer(out);
                    w.serialize(&report)?;
                    w.flush()?;
                }
                _ => write_json(out, &report)?,
            }
            Ok(report.passed())
        }
        Command::Cache { action } => {
            let cache = cache.unwrap_or_else(Cache::from_env);
            match action {
                CacheAction::Path => writeln!(out, "{}", cache.dir().display())?,
                CacheAction::Clear => writeln!(out, "removed {} entries", cache.clear()?)?,
            }
            Ok(true)
        }
    }
}

/// Cache key for a Möbius table, derived without building.
fn mobius_key(kind: FamilyKind, p: &Params) -> Result<String> {
    let name = kind
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let mut params = vec![
        ("m", format!("{:?}", p.m)),
        ("r", format!("{:?}", p.r)),
        ("j", format!("{:?}", p.j)),
        ("k", format!("{:?}", p.k)),
        ("s", format!("{:?}", p.s)),
        ("n", format!("{:?}", p.n)),
    ];
    if let Some(i) = p.blocks()? {
        params.push(("I", i.to_string()));
    }
    if let Some(j) = p.zero()? {
        params.push(("J", j.to_string()));
    }
    Ok(format!("mobius_{}", Cache::key(&name, &params)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let result = exec::with_jobs(cli.jobs, || {
        let mut lock = stdout.lock();
        run(&cli, &mut lock)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
