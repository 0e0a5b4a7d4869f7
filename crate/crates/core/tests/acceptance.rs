//! One PASS/FAIL line per acceptance criterion. Every comparison is exact
//! (tolerance 0); a criterion also fails if it exceeds its time limit.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use dowling_core::combinat::rat;
use dowling_core::el_shelling::{el_verify, f_sigma};
use dowling_core::mobius_identities::{
    compositional_dowling_check, compositional_exponential_check, cor34_dowling_check,
    cor34_exponential_check, cor47_check, d_rk_series_check, magnitudes_agree, restricted_q_check,
    restricted_r_check, semigroup_check, CompositionTables, IdentityReport, Verdict,
};
use dowling_core::perm_stats::{
    des_count, des_q, des_q_enumerate, des_q_inclusion_exclusion, euler_number_enumerate,
    mu_descent_check, mu_j1_check, multiplication_exhaustive, parse_permutation, prop_5_3_check,
    r_divisible_descent_check, tangent_check, DescentWord, Letter,
};
use dowling_core::poset::verify_mobius_identities;
use dowling_core::structures::{
    build_d_rk, build_dowling_lattice, build_extended, build_partition_lattice, build_r_divisible,
    build_restricted_partitions, census, Family, Guards, IndexSet,
};
use dowling_core::{Poset, Rational, Result, TruncatedSeries};
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<(bool, String)>;

struct Criterion {
    id: usize,
    title: &'static str,
    limit: Option<Duration>,
    run: fn(&Guards) -> Outcome,
}

fn all_ok(reports: &[IdentityReport]) -> (bool, usize) {
    let bad = reports.iter().filter(|r| !r.passed()).count();
    (bad == 0, bad)
}

fn c1_census(g: &Guards) -> Outcome {
    let mut rows = 0;
    let mut bad = 0;
    for s in 1..=3 {
        for n in 0..=4 {
            for row in census(&Family::Dowling { s }, n, g)? {
                rows += 1;
                bad += usize::from(!row.agrees());
            }
        }
    }
    Ok((
        bad == 0,
        format!("{rows} type rows over n<=4, s in 1..3; {bad} disagree"),
    ))
}

fn c2_cor34(g: &Guards) -> Outcome {
    let mut reports = vec![cor34_exponential_check(&Family::Partition, 7, g)?];
    for r in 2..=8 {
        reports.push(cor34_exponential_check(
            &Family::RDivisible { r },
            8 / r,
            g,
        )?);
    }
    for s in 1..=3 {
        reports.push(cor34_dowling_check(&Family::Dowling { s }, 4, g)?);
    }
    let exact = reports
        .iter()
        .all(|r| r.verdict == Verdict::Exact && r.passed());
    Ok((
        exact,
        format!("{} reports, all exact with eps=+1: {exact}", reports.len()),
    ))
}

fn c3_compositional(g: &Guards) -> Outcome {
    let mut reports = Vec::new();
    for seed in 0..5u64 {
        let tables = CompositionTables::random(seed, 6, -3, 3);
        reports.push(compositional_exponential_check(
            &Family::Partition,
            &tables,
            6,
            g,
        )?);
        for s in 1..=2 {
            reports.push(compositional_dowling_check(
                &Family::Dowling { s },
                &tables,
                4,
                g,
            )?);
        }
    }
    let (ok, bad) = all_ok(&reports);
    Ok((
        ok,
        format!(
            "5 seeded triples, {} reports, {bad} mismatches",
            reports.len()
        ),
    ))
}

fn c4_restricted(g: &Guards) -> Outcome {
    let two = IndexSet::explicit([2]);
    let mut reports = vec![
        restricted_q_check(&two, 8, g)?,
        restricted_r_check(&two, &IndexSet::explicit([1]), 1, 8, g)?,
    ];
    // The listed sets stand for the even and odd semigroups; as finite sets
    // they are only closed under addition up to 6.
    let evens = IndexSet::Multiples { step: 2 };
    let odds = IndexSet::Progression { start: 1, step: 2 };
    reports.extend(semigroup_check(&evens, &odds, 1, 8, g)?);
    reports.extend(semigroup_check(
        &IndexSet::explicit([2, 4, 6]),
        &IndexSet::explicit([1, 3, 5]),
        1,
        6,
        g,
    )?);
    let (ok, bad) = all_ok(&reports);
    Ok((
        ok,
        format!("I={{2}} and ({{2}},{{1}}) through x^8; semigroup 2P/1+2N through x^8 and {{2,4,6}}/{{1,3,5}} through x^6; {bad} mismatches"),
    ))
}

fn c5_d_rk(g: &Guards) -> Outcome {
    let mut reports = Vec::new();
    for (r, k) in [(1, 1), (1, 2), (2, 0), (2, 1), (2, 2)] {
        for s in 1..=2 {
            reports.push(d_rk_series_check(r, k, s, (6 - k) / r, g)?);
        }
    }
    let eps: BTreeSet<Option<i64>> = reports.iter().map(|r| r.epsilon).collect();
    let (series_ok, _) = all_ok(&reports);
    let mut binom = Vec::new();
    for k in 1..=3 {
        binom.extend(cor47_check(k, &[1, 2, 3], 4, g)?);
    }
    let binom_ok = binom
        .iter()
        .all(|r| magnitudes_agree(r) && r.checks.values().all(|&b| b));
    let ok = series_ok && eps.len() == 1 && binom_ok;
    Ok((
        ok,
        format!("global eps {eps:?} over {} series reports; |mu| = C(n+k-1,k-1), s-independent: {binom_ok}", reports.len()),
    ))
}

fn c6_descents(_: &Guards) -> Outcome {
    let (checked, failures) = multiplication_exhaustive(6)?;
    let mut reports = Vec::new();
    for q in [rat(1, 1), rat(2, 1)] {
        for (r, w) in [(2, "a"), (2, "aa"), (3, "aa")] {
            reports.push(prop_5_3_check(r, &w.parse()?, &q, 9)?);
        }
    }
    let (ok, bad) = all_ok(&reports);
    Ok((
        ok && failures == 0,
        format!(
            "{checked} word pairs, {failures} failures; {} product checks to x^9, {bad} mismatches",
            reports.len()
        ),
    ))
}

fn c7_mobius_descents(g: &Guards) -> Outcome {
    let mu = |m, r, j| -> Result<i64> {
        Ok(build_extended(m, r, j, g)?
            .poset
            .mobius_bottom_top()
            .unwrap_or(0))
    };
    let ab = des_count(&"ab".parse()?)?;
    let mu422 = mu(4, 2, 2)?;
    let mu622 = mu(6, 2, 2)?;
    let e5 = euler_number_enumerate(5)?;
    let spot = mu422 == 2 && ab == 2 && mu622 == -16 && e5 == 16;

    let b4 = mu_descent_check(1, 1, 4, g)?;
    let reports = vec![
        mu_descent_check(2, 1, 2, g)?,
        b4.clone(),
        mu_j1_check(2, 2, g)?,
        mu_j1_check(3, 1, g)?,
        r_divisible_descent_check(2, 3, g)?,
        tangent_check(3, g)?,
    ];
    let (ok, bad) = all_ok(&reports);
    let b4_row = b4
        .rows
        .last()
        .map(|r| format!("mu(P_6^1,2)={} vs {}", r.brute, r.closed_form))
        .unwrap_or_default();
    let eps: Vec<String> = reports
        .iter()
        .map(|r| format!("{}:{:?}", r.name, r.epsilon))
        .collect();
    Ok((
        spot && ok,
        format!(
            "mu(P_4^2,2)={mu422} Des(ab)={ab}; mu(P_6^2,2)={mu622} E_5={e5}; {b4_row}; eps {}; {bad} mismatches",
            eps.join(" ")
        ),
    ))
}

fn c8_el(g: &Guards) -> Outcome {
    let mut failed = Vec::new();
    let mut falling = Vec::new();
    for (m, r, j) in [(3, 2, 1), (4, 2, 2), (5, 2, 3), (6, 2, 2), (7, 3, 4)] {
        let rep = el_verify(m, r, j, g)?;
        let mu_ok = rep.mu.unsigned_abs() as usize == rep.falling_count;
        if !(rep.passed() && mu_ok) {
            failed.push(format!("({m},{r},{j})"));
        }
        falling.push(format!("({m},{r},{j}):{}", rep.falling_count));
    }
    let expected = "0̂ < 56|24|18|379 < 56|2418|379 < 562418|379 < 1̂";
    let actual = f_sigma(&parse_permutation("562418379")?, 2, 3)?.to_string();
    let example = actual == expected;
    Ok((
        failed.is_empty() && example,
        format!(
            "falling counts {}; failing {failed:?}; f_562418379 = {actual}",
            falling.join(" ")
        ),
    ))
}

fn constructed_posets(g: &Guards) -> Result<Vec<(String, Poset)>> {
    let mut posets = Vec::new();
    for n in 1..=6 {
        posets.push((format!("pi {n}"), build_partition_lattice(n, g)?.poset));
    }
    for (m, r) in [(4, 2), (6, 2), (6, 3), (8, 2), (8, 4)] {
        posets.push((format!("pi-r {m} {r}"), build_r_divisible(m, r, g)?.poset));
    }
    for (m, r, j) in [
        (3, 2, 1),
        (4, 2, 2),
        (5, 2, 3),
        (6, 2, 2),
        (7, 3, 4),
        (6, 1, 2),
    ] {
        posets.push((
            format!("pi-rj {m} {r} {j}"),
            build_extended(m, r, j, g)?.poset,
        ));
    }
    for s in 1..=3 {
        for n in 1..=3 {
            posets.push((
                format!("dowling {n} {s}"),
                build_dowling_lattice(n, s, g)?.with_bottom().poset,
            ));
        }
    }
    for (n, r, k, s) in [(2, 2, 0, 2), (2, 2, 1, 1), (2, 2, 2, 2), (3, 1, 2, 2)] {
        posets.push((
            format!("d-rk {n} {r} {k} {s}"),
            build_d_rk(n, r, k, s, g)?.with_bottom().poset,
        ));
    }
    for (n, i) in [
        (8, IndexSet::explicit([2])),
        (6, IndexSet::Multiples { step: 2 }),
    ] {
        posets.push((
            format!("pi-I {n}"),
            build_restricted_partitions(n, &i, g)?.poset,
        ));
    }
    Ok(posets)
}

fn series_strategy(constant: Option<i64>) -> impl Strategy<Value = TruncatedSeries> {
    let coeff = (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d));
    proptest::collection::vec(coeff, 7).prop_map(move |mut v| {
        if let Some(c) = constant {
            v[0] = Rational::from_integer(c.into());
        }
        TruncatedSeries::new(v)
    })
}

fn c9_properties(g: &Guards) -> Outcome {
    let config = Config {
        cases: 64,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let mut failures = Vec::new();
    let ring = (
        series_strategy(None),
        series_strategy(None),
        series_strategy(None),
    );
    if let Err(e) = runner.run(&ring, |(a, b, c)| {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        #[allow(clippy::eq_op)]
        let zero = &a - &a;
        prop_assert!(zero.is_zero());
        Ok(())
    }) {
        failures.push(format!("ring: {e}"));
    }
    if let Err(e) = runner.run(
        &(series_strategy(Some(0)), series_strategy(Some(1))),
        |(f, h)| {
            prop_assert_eq!(f.exp().unwrap().log().unwrap(), f.clone());
            prop_assert_eq!(h.log().unwrap().exp().unwrap(), h.clone());
            Ok(())
        },
    ) {
        failures.push(format!("exp/log: {e}"));
    }

    let posets = constructed_posets(g)?;
    for (name, p) in &posets {
        if let Err(e) = verify_mobius_identities(p) {
            failures.push(format!("{name}: {e}"));
        }
    }

    let mut words = 0;
    for degree in 0..=7 {
        for w in DescentWord::all(degree) {
            words += 1;
            let poly = des_q(&w)?;
            let methods_agree =
                degree > 6 || des_q_enumerate(&w)? == des_q_inclusion_exclusion(&w)?;
            if poly.at_one() as u128 != des_count(&w)? || !methods_agree {
                failures.push(format!("des_q {w}"));
            }
        }
    }
    let letters = prop_oneof![Just(Letter::A), Just(Letter::B)];
    if let Err(e) = runner.run(&proptest::collection::vec(letters, 8..=12), |v| {
        let w = DescentWord::new(v);
        prop_assert_eq!(des_q(&w).unwrap().at_one() as u128, des_count(&w).unwrap());
        prop_assert_eq!(
            des_q(&w).unwrap().eval(&Rational::one()),
            Rational::from_integer(des_q(&w).unwrap().at_one().into())
        );
        Ok(())
    }) {
        failures.push(format!("des_q long words: {e}"));
    }

    let bell = [1usize, 1, 2, 5, 15, 52, 203, 877];
    for (n, &b) in bell.iter().enumerate().skip(1) {
        if build_partition_lattice(n, g)?.len() != b
            || !census(&Family::Partition, n, g)?.iter().all(|r| r.agrees())
        {
            failures.push(format!("bell {n}"));
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "3x64 proptest cases, {} posets, {words} words deg<=7, Bell n<=7; failures {failures:?}",
            posets.len()
        ),
    ))
}

fn main() {
    let guards = Guards::default();
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            title: "census by type, Dowling n<=4",
            limit: secs(10),
            run: c1_census,
        },
        Criterion {
            id: 2,
            title: "exponential and Dowling mu series",
            limit: secs(60),
            run: c2_cor34,
        },
        Criterion {
            id: 3,
            title: "compositional formulas",
            limit: secs(60),
            run: c3_compositional,
        },
        Criterion {
            id: 4,
            title: "restricted and semigroup identities",
            limit: secs(120),
            run: c4_restricted,
        },
        Criterion {
            id: 5,
            title: "D^(r,k) series and binomial magnitudes",
            limit: None,
            run: c5_d_rk,
        },
        Criterion {
            id: 6,
            title: "descent multiplication and Eulerian products",
            limit: secs(120),
            run: c6_descents,
        },
        Criterion {
            id: 7,
            title: "Mobius values versus descent counts",
            limit: None,
            run: c7_mobius_descents,
        },
        Criterion {
            id: 8,
            title: "EL labeling suite",
            limit: secs(600),
            run: c8_el,
        },
        Criterion {
            id: 9,
            title: "property suites",
            limit: None,
            run: c9_properties,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)(&guards);
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        let limit = c
            .limit
            .map_or("none".to_string(), |l| format!("{}s", l.as_secs()));
        println!(
            "[{}] criterion {}: {} | {detail} | tolerance 0 | {:.2}s (limit {limit})",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
