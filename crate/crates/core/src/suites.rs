//! Named verification suites, one per numbered result, with machine-readable
//! reports that carry their resolved configuration.

use std::io::Write;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combinat::{int, rat};
use crate::el_shelling::{el_verify, f_sigma, ElReport};
use crate::error::{Error, Result};
use crate::exact_series::Rational;
use crate::mobius_identities::{
    compositional_dowling_check, compositional_exponential_check, cor34_dowling_check,
    cor34_exponential_check, cor47_check, d_rk_series_check, rank_polynomial_check,
    restricted_q_check, restricted_r_check, semigroup_check, CompositionTables, IdentityReport,
};
use crate::perm_stats::{
    des_count, des_q, eulerian_product_check, mu_descent_check, mu_j1_check,
    multiplication_exhaustive, parse_permutation, prop_5_3_check, r_divisible_descent_check,
    tangent_check, DescentWord,
};
use crate::structures::{
    census, verify_extended_bijection, BijectionReport, CensusRow, Family, Guards, IndexSet,
};

pub const SUITES: &[&str] = &[
    "lemma2.1", "prop3.2", "thm3.2", "thm3.3", "ex3.5", "cor3.4", "thm4.1", "thm4.2", "cor4.3",
    "prop4.5", "cor4.7", "cor4.8", "lemma5.1", "prop5.3", "thm5.4", "thm5.5", "cor5.6", "thm6.1",
    "cor6.4", "cor6.5",
];

fn rationals_as_strings<S: Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn rationals_from_strings<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<Rational>, D::Error> {
    let raw: Vec<String> = Vec::deserialize(d)?;
    raw.iter()
        .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
        .collect()
}

/// `3`, `-2`, `1/3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    text.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("`{text}`: {e}")))
}

/// Parameters of a suite run. Unset fields fall back to each suite's
/// built-in parameter grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub m: Option<usize>,
    pub r: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub s: Option<usize>,
    /// Largest level (or `n` index) checked.
    pub n: Option<usize>,
    #[serde(rename = "I")]
    pub blocks: Option<IndexSet>,
    #[serde(rename = "J")]
    pub zero: Option<IndexSet>,
    pub window: Option<usize>,
    /// Series truncation order.
    #[serde(rename = "T")]
    pub truncation: Option<usize>,
    #[serde(
        serialize_with = "rationals_as_strings",
        deserialize_with = "rationals_from_strings",
        default
    )]
    pub q: Vec<Rational>,
    #[serde(
        serialize_with = "rationals_as_strings",
        deserialize_with = "rationals_from_strings",
        default
    )]
    pub t: Vec<Rational>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub guards: Guards,
}

impl SuiteConfig {
    fn s_values(&self, default: &[usize]) -> Vec<usize> {
        self.s.map_or_else(|| default.to_vec(), |s| vec![s])
    }

    fn q_values(&self, default: &[i64]) -> Vec<Rational> {
        if self.q.is_empty() {
            default.iter().map(|&q| int(q)).collect()
        } else {
            self.q.clone()
        }
    }

    fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Entry {
    Identity(IdentityReport),
    El(ElReport),
    Census {
        family: String,
        n: usize,
        rows: Vec<CensusRow>,
        agrees: bool,
    },
    Bijection(BijectionReport),
    Multiplication {
        max_total: usize,
        pairs_checked: usize,
        failures: usize,
    },
    Example {
        name: String,
        expected: String,
        actual: String,
    },
}

impl Entry {
    pub fn passed(&self) -> bool {
        match self {
            Entry::Identity(r) => r.passed(),
            Entry::El(r) => r.passed(),
            Entry::Census { agrees, .. } => *agrees,
            Entry::Bijection(r) => r.passed(),
            Entry::Multiplication {
                failures,
                pairs_checked,
                ..
            } => *failures == 0 && *pairs_checked > 0,
            Entry::Example {
                expected, actual, ..
            } => expected == actual,
        }
    }

    /// One-line summary: kind, name, parameters, outcome.
    fn summary(&self) -> (String, String, String, String) {
        match self {
            Entry::Identity(r) => {
                let params = r
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                let eps = r.epsilon.map_or("-".to_string(), |e| e.to_string());
                (
                    "identity".into(),
                    r.name.clone(),
                    params,
                    format!("{} eps={eps}", r.verdict),
                )
            }
            Entry::El(r) => (
                "el".into(),
                "el-labeling".into(),
                format!("m={} r={} j={}", r.m, r.r, r.j),
                format!("falling={} mu={}", r.falling_count, r.mu),
            ),
            Entry::Census {
                family, n, rows, ..
            } => (
                "census".into(),
                family.clone(),
                format!("n={n}"),
                format!("{} types", rows.len()),
            ),
            Entry::Bijection(r) => (
                "bijection".into(),
                "extended-to-dowling".into(),
                format!("m={} r={} k={}", r.m, r.r, r.k),
                format!("{} elements", r.elements),
            ),
            Entry::Multiplication {
                max_total,
                pairs_checked,
                failures,
            } => (
                "multiplication".into(),
                "des_q product".into(),
                format!("n+m<={max_total}"),
                format!("{pairs_checked} pairs, {failures} failures"),
            ),
            Entry::Example {
                name,
                expected,
                actual,
            } => (
                "example".into(),
                name.clone(),
                String::new(),
                format!("expected {expected}, got {actual}"),
            ),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub suite: String,
    pub passed: bool,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub passed: bool,
    pub sections: Vec<Section>,
}

impl SuiteReport {
    /// CSV summary, one row per entry.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["suite", "kind", "name", "params", "outcome", "passed"])?;
        for section in &self.sections {
            for e in &section.entries {
                let (kind, name, params, outcome) = e.summary();
                w.write_record([
                    section.suite.as_str(),
                    &kind,
                    &name,
                    &params,
                    &outcome,
                    if e.passed() { "true" } else { "false" },
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs `name` (or every suite for `all`).
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(Error::UnknownSuite(name.to_string()));
    };
    let sections = names
        .iter()
        .map(|&suite| {
            let entries = suite_entries(suite, config)?;
            Ok(Section {
                suite: suite.to_string(),
                passed: entries.iter().all(Entry::passed),
                entries,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        suite: name.to_string(),
        config: config.clone(),
        passed: sections.iter().all(|s| s.passed),
        sections,
    })
}

fn identities(reports: Vec<IdentityReport>) -> Vec<Entry> {
    reports.into_iter().map(Entry::Identity).collect()
}

fn census_entries(families: &[(Family, usize)], guards: &Guards) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (family, nmax) in families {
        for n in 0..=*nmax {
            if n == 0 && !family.is_dowling() {
                continue;
            }
            let rows = census(family, n, guards)?;
            let agrees = rows.iter().all(CensusRow::agrees);
            out.push(Entry::Census {
                family: family.to_string(),
                n,
                rows,
                agrees,
            });
        }
    }
    Ok(out)
}

fn el_cases(config: &SuiteConfig, default: &[(usize, usize, usize)]) -> Vec<(usize, usize, usize)> {
    match (config.m, config.r, config.j) {
        (Some(m), Some(r), Some(j)) => vec![(m, r, j)],
        _ => default.to_vec(),
    }
}

fn suite_entries(suite: &str, c: &SuiteConfig) -> Result<Vec<Entry>> {
    let g = &c.guards;
    Ok(match suite {
        "lemma2.1" => {
            let families: Vec<(Family, usize)> = c
                .s_values(&[1, 2, 3])
                .into_iter()
                .map(|s| (Family::Dowling { s }, c.n_or(4)))
                .collect();
            census_entries(&families, g)?
        }
        "prop3.2" => {
            let mut families = vec![
                (Family::Partition, c.n_or(5)),
                (Family::RDivisible { r: 2 }, c.n.unwrap_or(4).min(4)),
                (Family::RDivisible { r: 3 }, 2),
            ];
            for s in c.s_values(&[1, 2]) {
                families.push((Family::DowlingRk { r: 2, k: 1, s }, 2));
                families.push((Family::DowlingRk { r: 1, k: 2, s }, 2));
            }
            let mut out = census_entries(&families, g)?;
            for (m, r, k) in [(4, 2, 1), (5, 2, 2), (6, 2, 1), (4, 1, 0), (7, 3, 0)] {
                out.push(Entry::Bijection(verify_extended_bijection(m, r, k, g)?));
            }
            out
        }
        "thm3.2" => {
            let mut out = Vec::new();
            for (family, order) in [
                (Family::Partition, c.n_or(6)),
                (Family::RDivisible { r: 2 }, c.n.unwrap_or(4).min(4)),
            ] {
                for i in 0..c.samples.unwrap_or(5) as u64 {
                    let tables = CompositionTables::random(c.seed + i, order, -3, 3);
                    out.push(Entry::Identity(compositional_exponential_check(
                        &family, &tables, order, g,
                    )?));
                }
            }
            out
        }
        "thm3.3" => {
            let mut out = Vec::new();
            for s in c.s_values(&[1, 2]) {
                let order = c.n_or(4);
                for i in 0..c.samples.unwrap_or(5) as u64 {
                    let tables = CompositionTables::random(c.seed + i, order, -3, 3);
                    out.push(Entry::Identity(compositional_dowling_check(
                        &Family::Dowling { s },
                        &tables,
                        order,
                        g,
                    )?));
                }
            }
            out
        }
        "ex3.5" => {
            let order = c.n_or(4);
            let t: Vec<Rational> = if c.t.is_empty() {
                (0..=order as i64).map(|i| rat(2 * i - 3, 2)).collect()
            } else {
                c.t.clone()
            };
            let mut out = identities(rank_polynomial_check(&Family::Partition, &t, order, g)?);
            for s in c.s_values(&[1, 2]) {
                out.extend(identities(rank_polynomial_check(
                    &Family::Dowling { s },
                    &t,
                    order,
                    g,
                )?));
            }
            out
        }
        "cor3.4" => {
            let mut out = vec![Entry::Identity(cor34_exponential_check(
                &Family::Partition,
                c.n_or(7),
                g,
            )?)];
            for (r, nmax) in [(2, 4), (3, 2), (4, 2)] {
                let nmax = c.n.map_or(nmax, |n| n.min(nmax));
                out.push(Entry::Identity(cor34_exponential_check(
                    &Family::RDivisible { r },
                    nmax,
                    g,
                )?));
            }
            for s in c.s_values(&[1, 2, 3]) {
                out.push(Entry::Identity(cor34_dowling_check(
                    &Family::Dowling { s },
                    c.n_or(4),
                    g,
                )?));
                out.push(Entry::Identity(cor34_dowling_check(
                    &Family::DowlingRk { r: 2, k: 1, s },
                    2,
                    g,
                )?));
            }
            out
        }
        "thm4.1" => {
            let sets = c.blocks.clone().map_or_else(
                || {
                    vec![
                        IndexSet::explicit([2]),
                        IndexSet::Multiples { step: 2 },
                        IndexSet::explicit([1, 3]),
                    ]
                },
                |b| vec![b],
            );
            let window = c.window.unwrap_or(8);
            sets.iter()
                .map(|i| Ok(Entry::Identity(restricted_q_check(i, window, g)?)))
                .collect::<Result<_>>()?
        }
        "thm4.2" => {
            let cases: Vec<(IndexSet, IndexSet, usize, usize)> = match (&c.blocks, &c.zero) {
                (Some(i), Some(j)) => vec![(
                    i.clone(),
                    j.clone(),
                    c.s.unwrap_or(1),
                    c.window.unwrap_or(8),
                )],
                _ => vec![
                    (
                        IndexSet::explicit([2]),
                        IndexSet::explicit([1]),
                        c.s.unwrap_or(1),
                        c.window.unwrap_or(8),
                    ),
                    (
                        IndexSet::Multiples { step: 2 },
                        IndexSet::Progression { start: 1, step: 2 },
                        1,
                        8,
                    ),
                    (IndexSet::explicit([2]), IndexSet::explicit([1]), 2, 6),
                ],
            };
            cases
                .iter()
                .map(|(i, j, s, w)| Ok(Entry::Identity(restricted_r_check(i, j, *s, *w, g)?)))
                .collect::<Result<_>>()?
        }
        "cor4.3" => {
            let cases: Vec<(IndexSet, IndexSet, usize)> = match (&c.blocks, &c.zero) {
                (Some(i), Some(j)) => vec![(i.clone(), j.clone(), c.window.unwrap_or(8))],
                _ => vec![
                    (
                        IndexSet::Multiples { step: 2 },
                        IndexSet::Progression { start: 1, step: 2 },
                        8,
                    ),
                    // the finite sets are closed under addition only up to 6
                    (
                        IndexSet::explicit([2, 4, 6]),
                        IndexSet::explicit([1, 3, 5]),
                        6,
                    ),
                ],
            };
            let mut out = Vec::new();
            for (i, j, w) in cases {
                out.extend(identities(semigroup_check(&i, &j, c.s.unwrap_or(1), w, g)?));
            }
            out
        }
        "prop4.5" => {
            let cases = match (c.r, c.k) {
                (Some(r), Some(k)) => vec![(r, k)],
                _ => vec![(1, 1), (1, 2), (2, 0), (2, 1), (2, 2)],
            };
            let mut out = Vec::new();
            for (r, k) in cases {
                for s in c.s_values(&[1, 2]) {
                    let nmax = c.n.unwrap_or(6usize.saturating_sub(k) / r);
                    out.push(Entry::Identity(d_rk_series_check(r, k, s, nmax, g)?));
                }
            }
            out
        }
        "cor4.7" => {
            let ks = c.k.map_or_else(|| vec![1, 2], |k| vec![k]);
            let mut out = Vec::new();
            for k in ks {
                out.extend(identities(cor47_check(
                    k,
                    &c.s_values(&[1, 2, 3]),
                    c.n_or(4),
                    g,
                )?));
            }
            out
        }
        "cor4.8" => {
            let ks = c.k.map_or_else(|| vec![0, 1, 2, 3], |k| vec![k]);
            let mut out = Vec::new();
            for k in ks {
                for s in c.s_values(&[1, 2]) {
                    let nmax = c.n.unwrap_or(6usize.saturating_sub(k) / 2);
                    let mut report = d_rk_series_check(2, k, s, nmax, g)?;
                    report.name = "cor4.8".into();
                    out.push(Entry::Identity(report));
                }
            }
            out
        }
        "lemma5.1" => {
            let max_total = c.n_or(6);
            let (pairs_checked, failures) = multiplication_exhaustive(max_total)?;
            let mut out = vec![Entry::Multiplication {
                max_total,
                pairs_checked,
                failures,
            }];
            for q in c.q_values(&[1, 2]) {
                out.push(Entry::Identity(eulerian_product_check(
                    |n| DescentWord::a_power(n - 1),
                    |n| DescentWord::b_power(n - 1),
                    &q,
                    c.truncation.unwrap_or(6),
                )?));
            }
            out.push(Entry::Example {
                name: "Des_q(aba)".into(),
                expected: "q + 2q² + q³ + q⁴".into(),
                actual: des_q(&"aba".parse()?)?.to_string(),
            });
            out
        }
        "prop5.3" => {
            let cases: Vec<(usize, DescentWord)> = match c.r {
                Some(r) => vec![(r, DescentWord::a_power(c.k.unwrap_or(1)))],
                None => vec![(2, "a".parse()?), (2, "aa".parse()?), (3, "aa".parse()?)],
            };
            let mut out = Vec::new();
            for (r, w) in &cases {
                for q in c.q_values(&[1, 2]) {
                    out.push(Entry::Identity(prop_5_3_check(
                        *r,
                        w,
                        &q,
                        c.truncation.unwrap_or(9),
                    )?));
                }
            }
            out
        }
        "thm5.4" => {
            let cases = match (c.r, c.k) {
                (Some(r), Some(k)) => vec![(r, k, c.n_or(2))],
                _ => vec![(2, 1, 2), (2, 2, 2), (1, 1, 4), (3, 1, 1), (3, 3, 1)],
            };
            let mut out = Vec::new();
            for (r, k, n) in cases {
                out.push(Entry::Identity(mu_descent_check(r, k, n, g)?));
            }
            out.push(Entry::Example {
                name: "Des(ab)".into(),
                expected: "2".into(),
                actual: des_count(&"ab".parse()?)?.to_string(),
            });
            out
        }
        "thm5.5" => {
            let cases = match c.r {
                Some(r) => vec![(r, c.n_or(2))],
                None => vec![(2, 2), (3, 1), (1, 4)],
            };
            cases
                .iter()
                .map(|&(r, n)| Ok(Entry::Identity(mu_j1_check(r, n, g)?)))
                .collect::<Result<_>>()?
        }
        "cor5.6" => {
            let cases = match c.r {
                Some(r) => vec![(r, c.n_or(2))],
                None => vec![(2, 4), (3, 2), (4, 2)],
            };
            let mut out = Vec::new();
            for (r, n) in cases {
                out.push(Entry::Identity(r_divisible_descent_check(r, n, g)?));
            }
            out.push(Entry::Identity(tangent_check(c.n.unwrap_or(4).min(4), g)?));
            out
        }
        "thm6.1" => {
            let cases = el_cases(
                c,
                &[
                    (3, 2, 1),
                    (4, 2, 2),
                    (5, 2, 3),
                    (6, 2, 2),
                    (7, 3, 4),
                    (8, 2, 2),
                    (9, 2, 3),
                ],
            );
            let mut out = cases
                .iter()
                .map(|&(m, r, j)| Ok(Entry::El(el_verify(m, r, j, g)?)))
                .collect::<Result<Vec<_>>>()?;
            out.push(Entry::Example {
                name: "f_562418379".into(),
                expected: "0̂ < 56|24|18|379 < 56|2418|379 < 562418|379 < 1̂".into(),
                actual: f_sigma(&parse_permutation("562418379")?, 2, 3)?.to_string(),
            });
            out
        }
        "cor6.4" => el_cases(
            c,
            &[
                (3, 2, 1),
                (5, 2, 1),
                (4, 3, 1),
                (4, 1, 1),
                (7, 2, 1),
                (9, 2, 1),
            ],
        )
        .iter()
        .map(|&(m, r, j)| Ok(Entry::El(el_verify(m, r, j, g)?)))
        .collect::<Result<_>>()?,
        "cor6.5" => el_cases(
            c,
            &[
                (4, 2, 2),
                (5, 2, 3),
                (6, 2, 2),
                (7, 3, 4),
                (5, 1, 2),
                (6, 3, 3),
            ],
        )
        .iter()
        .map(|&(m, r, j)| Ok(Entry::El(el_verify(m, r, j, g)?)))
        .collect::<Result<_>>()?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(
            run_suite("bogus", &SuiteConfig::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn config_round_trip() {
        let c = SuiteConfig {
            s: Some(2),
            blocks: Some(IndexSet::explicit([2, 4])),
            q: vec![rat(1, 3), int(2)],
            ..SuiteConfig::default()
        };
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"I\":\"2,4\""), "{json}");
        assert!(json.contains("\"1/3\""), "{json}");
        let back: SuiteConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn small_suites_pass() {
        let c = SuiteConfig {
            s: Some(2),
            n: Some(3),
            ..SuiteConfig::default()
        };
        let report = run_suite("cor3.4", &c).unwrap();
        assert!(report.passed, "{report:#?}");
        let c = SuiteConfig {
            r: Some(2),
            k: Some(1),
            n: Some(2),
            ..SuiteConfig::default()
        };
        let report = run_suite("thm5.4", &c).unwrap();
        assert!(report.passed);
        let Entry::Identity(id) = &report.sections[0].entries[0] else {
            panic!()
        };
        assert_eq!(id.epsilon, Some(-1));
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv)
            .unwrap()
            .starts_with("suite,kind,name,params,outcome,passed\n"));
    }
}
