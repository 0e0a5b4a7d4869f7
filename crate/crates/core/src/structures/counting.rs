use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{
    build_d_rk, build_dowling_lattice, build_partition_lattice, build_r_divisible,
    build_restricted_dowling, build_restricted_partitions, Family, Guards, StructureType,
};
use crate::combinat::{factorial, pow};
use crate::error::{Error, Result};
use crate::exact_series::DenominatorSequence;

/// `M^{(r)}(n) = (rn)! / (n! · r!^n)`, the number of partitions of `[rn]` into
/// blocks of size `r`.
pub fn denominator_m_r(n: usize, r: usize) -> BigInt {
    factorial(r * n) / (factorial(n) * pow(&factorial(r), n))
}

/// `N^{(r,k)}(n) = (rn+k)! · s^{(r-1)n} / (k! · r!^n · n!)`.
pub fn denominator_n_rk(n: usize, r: usize, k: usize, s: usize) -> BigInt {
    factorial(r * n + k) * pow(&BigInt::from(s), (r - 1) * n)
        / (factorial(k) * pow(&factorial(r), n) * factorial(n))
}

pub(crate) fn m_r_sequence(r: usize) -> DenominatorSequence {
    DenominatorSequence::new(format!("M^({r})"), move |n| denominator_m_r(n, r))
}

pub(crate) fn n_rk_sequence(r: usize, k: usize, s: usize) -> DenominatorSequence {
    DenominatorSequence::new(format!("N^({r},{k})[s={s}]"), move |n| {
        denominator_n_rk(n, r, k, s)
    })
}

/// All types `(b; a_1..a_n)` with `b + Σ i·a_i = n`; `b = 0` unless `with_zero`.
pub fn types_of_size(n: usize, with_zero: bool) -> Vec<StructureType> {
    let mut out = Vec::new();
    let max_b = if with_zero { n } else { 0 };
    for b in 0..=max_b {
        let mut a = vec![0; n];
        fill_parts(n - b, n, &mut a, &mut |a| {
            out.push(StructureType::new(b, a.to_vec()))
        });
    }
    out
}

/// Integer partitions of `rest` with parts at most `max_part`, as multiplicities.
fn fill_parts(rest: usize, max_part: usize, a: &mut [usize], emit: &mut dyn FnMut(&[usize])) {
    if rest == 0 {
        emit(a);
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        a[part - 1] += 1;
        fill_parts(rest - part, part, a, emit);
        a[part - 1] -= 1;
    }
}

/// Number of elements of type `t` at level `n` of `family`.
///
/// For `Π`, `Π^{(r)}` the exponential-structure count
/// `M(n)·n! / Π (M(i)·i!)^{a_i}·a_i!`; for the Dowling families the count
/// `N(n)·s^n·n! / (N(b)·s^b·b!·Π (M(i)·s·i!)^{a_i}·a_i!)`, both in the
/// family's own indexing. Restricted families count ambient types, giving 0
/// for types they exclude.
pub fn count_of_type(n: usize, t: &StructureType, family: &Family) -> Result<BigInt> {
    if t.size() != n || t.a.len() > n && t.a[n..].iter().any(|&c| c > 0) {
        return Err(Error::InvalidParameter(format!(
            "type {t} does not have size {n}"
        )));
    }
    if !family.is_dowling() && t.b != 0 {
        return Err(Error::InvalidParameter(format!(
            "type {t} has a zero block in a family without one"
        )));
    }
    let (m, nn, s) = match family {
        Family::RestrictedPartition { .. } => {
            if !family.admits_ambient(t) {
                return Ok(BigInt::zero());
            }
            return count_of_type(n, t, &Family::Partition);
        }
        Family::RestrictedDowling { s, .. } => {
            if !family.admits_ambient(t) {
                return Ok(BigInt::zero());
            }
            return count_of_type(n, t, &Family::Dowling { s: *s });
        }
        _ => {
            let (m, nn) = family.denominators();
            (m, nn, family.group_order())
        }
    };
    let s = BigInt::from(s);
    let mut num = factorial(n);
    let mut den = BigInt::one();
    match &nn {
        Some(nseq) => {
            num *= nseq.eval(n) * pow(&s, n);
            den *= nseq.eval(t.b) * pow(&s, t.b) * factorial(t.b);
        }
        None => num *= m.eval(n),
    }
    for (idx, &c) in t.a.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let i = idx + 1;
        let mut unit = m.eval(i) * factorial(i);
        if nn.is_some() {
            unit *= &s;
        }
        den *= pow(&unit, c) * factorial(c);
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Precondition(format!(
            "count for type {t} is not an integer"
        )));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    /// Type in the family's own indexing.
    pub structure_type: String,
    pub formula: String,
    pub enumerated: usize,
}

impl CensusRow {
    pub fn agrees(&self) -> bool {
        self.formula == self.enumerated.to_string()
    }
}

/// Types, in the family's own indexing, of every element at level `n` of
/// `family` (no `0̂`).
pub fn level_types(family: &Family, n: usize, guards: &Guards) -> Result<Vec<StructureType>> {
    let ambient: Vec<StructureType> = match family {
        Family::Partition => build_partition_lattice(n, guards)?
            .elements()
            .map(|(_, p)| p.type_of())
            .collect(),
        Family::RDivisible { r } => build_r_divisible(r * n, *r, guards)?
            .elements()
            .map(|(_, p)| p.type_of())
            .collect(),
        Family::RestrictedPartition { blocks } => build_restricted_partitions(n, blocks, guards)?
            .elements()
            .map(|(_, p)| p.type_of())
            .collect(),
        Family::Dowling { s } => build_dowling_lattice(n, *s, guards)?
            .elements()
            .map(|(_, x)| x.type_of())
            .collect(),
        Family::DowlingRk { r, k, s } => build_d_rk(n, *r, *k, *s, guards)?
            .elements()
            .map(|(_, x)| x.type_of())
            .collect(),
        Family::RestrictedDowling { blocks, zero, s } => {
            build_restricted_dowling(n, blocks, zero, *s, guards)?
                .elements()
                .map(|(_, x)| x.type_of())
                .collect()
        }
    };
    Ok(ambient.iter().map(|t| family.derived_type(n, t)).collect())
}

/// Compares the closed-form count of every type at level `n` with the
/// number of built elements of that type. Types with neither elements nor a
/// nonzero count are omitted.
pub fn census(family: &Family, n: usize, guards: &Guards) -> Result<Vec<CensusRow>> {
    let mut seen: BTreeMap<StructureType, usize> = BTreeMap::new();
    for t in level_types(family, n, guards)? {
        *seen.entry(t).or_default() += 1;
    }
    let mut rows = Vec::new();
    for t in types_of_size(n, family.is_dowling()) {
        let formula = count_of_type(n, &t, family)?;
        let enumerated = seen.remove(&t).unwrap_or(0);
        if enumerated > 0 || !formula.is_zero() {
            rows.push(CensusRow {
                structure_type: t.to_string(),
                formula: formula.to_string(),
                enumerated,
            });
        }
    }
    // anything left has a type the formula side never produced
    for (t, enumerated) in seen {
        rows.push(CensusRow {
            structure_type: t.to_string(),
            formula: "0".into(),
            enumerated,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn denominators() {
        assert_eq!(denominator_m_r(2, 2), BigInt::from(3));
        assert_eq!(denominator_m_r(0, 3), BigInt::one());
        assert_eq!(denominator_n_rk(1, 2, 1, 1), BigInt::from(3));
        assert_eq!(denominator_n_rk(1, 2, 1, 2), BigInt::from(6));
        for n in 0..6 {
            for k in 0..4 {
                assert_eq!(
                    denominator_n_rk(n, 1, k, 1),
                    crate::combinat::binomial(n + k, k)
                );
            }
        }
    }

    #[test]
    fn type_listing() {
        assert_eq!(types_of_size(4, false).len(), 5);
        // Σ_b p(n-b) for n = 4: 5 + 3 + 2 + 1 + 1
        assert_eq!(types_of_size(4, true).len(), 12);
        assert_eq!(types_of_size(0, true), vec![StructureType::new(0, vec![])]);
    }

    #[test]
    fn dowling_counts() {
        let d1 = Family::Dowling { s: 1 };
        let d2 = Family::Dowling { s: 2 };
        assert_eq!(
            count_of_type(2, &StructureType::new(1, vec![1, 0]), &d1).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            count_of_type(2, &StructureType::new(0, vec![0, 1]), &d2).unwrap(),
            BigInt::from(2)
        );
        for n in 1..6 {
            let mut a = vec![0; n];
            a[0] = n;
            for s in 1..4 {
                let t = StructureType::new(0, a.clone());
                assert_eq!(
                    count_of_type(n, &t, &Family::Dowling { s }).unwrap(),
                    BigInt::one()
                );
            }
        }
        assert!(count_of_type(3, &StructureType::new(1, vec![1, 0, 0]), &d1).is_err());
        assert!(count_of_type(2, &StructureType::new(1, vec![1, 0]), &Family::Partition).is_err());
    }

    #[test]
    fn census_agrees_on_small_levels() {
        let g = Guards::default();
        let families = [
            (Family::Partition, 5),
            (Family::RDivisible { r: 2 }, 3),
            (Family::DowlingRk { r: 2, k: 1, s: 1 }, 2),
            (Family::DowlingRk { r: 2, k: 1, s: 2 }, 1),
            (Family::DowlingRk { r: 1, k: 2, s: 2 }, 2),
            (
                Family::RestrictedPartition {
                    blocks: super::super::IndexSet::explicit([1, 3]),
                },
                5,
            ),
        ];
        for (family, n) in families {
            for row in census(&family, n, &g).unwrap() {
                assert!(row.agrees(), "{family} n={n}: {row:?}");
            }
        }
    }
}
