//! Edge labeling of `Π_m^{r,j}` (with `0̂`), EL verification over every
//! interval, falling chains and the explicit chains `f_σ`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinat::{factorial, pow, sign};
use crate::error::{guard, Error, Result};
use crate::exec;
use crate::perm_stats::{des_count, descent_word, DescentWord};
use crate::structures::{build_extended, FamilyPoset, Guards, SetPartition};

/// Edge label. Ordered `-m < ... < -1 < 0_1 < ... < 0_M < 1 < ... < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeLabel {
    Neg(u8),
    Zero(u32),
    Pos(u8),
}

impl EdgeLabel {
    /// Variant-major, index-minor integer key.
    fn key(self) -> (u8, i64) {
        match self {
            EdgeLabel::Neg(i) => (0, -i64::from(i)),
            EdgeLabel::Zero(i) => (1, i64::from(i)),
            EdgeLabel::Pos(i) => (2, i64::from(i)),
        }
    }
}

impl Ord for EdgeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for EdgeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Neg(i) => write!(f, "-{i}"),
            EdgeLabel::Zero(i) => write!(f, "0_{i}"),
            EdgeLabel::Pos(i) => write!(f, "{i}"),
        }
    }
}

/// The pair `(λ(x,y), -ρ(x))`, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabeledEdge {
    pub label: EdgeLabel,
    pub corank_tiebreak: i64,
}

/// Blocks of `x` in order, each sorted, written out one after another.
pub fn atom_word(atom: &SetPartition) -> Vec<u8> {
    atom.blocks().concat()
}

/// `(m-1)! / (n!·r!^n·(j-1)!)` with `m = rn + j`.
pub fn atom_count(m: usize, r: usize, j: usize) -> Result<BigInt> {
    check_params(m, r, j)?;
    let n = (m - j) / r;
    Ok(factorial(m - 1) / (factorial(n) * pow(&factorial(r), n) * factorial(j - 1)))
}

fn check_params(m: usize, r: usize, j: usize) -> Result<()> {
    if r == 0 || j == 0 || m < j || !(m - j).is_multiple_of(r) {
        return Err(Error::InvalidParameter(format!(
            "need m = rn + j with r, j ≥ 1, got m={m}, r={r}, j={j}"
        )));
    }
    Ok(())
}

/// `λ` on a merge edge `x ⋖ y` of set partitions.
pub fn merge_label(x: &SetPartition, y: &SetPartition) -> Result<EdgeLabel> {
    let not_cover = || Error::Precondition(format!("{x} is not covered by {y}"));
    if x.num_blocks() != y.num_blocks() + 1 || !x.refines(y) {
        return Err(not_cover());
    }
    let kept: HashSet<&Vec<u8>> = y.blocks().iter().collect();
    let mut merged: Vec<&Vec<u8>> = x.blocks().iter().filter(|b| !kept.contains(b)).collect();
    if merged.len() != 2 {
        return Err(not_cover());
    }
    merged.sort_by_key(|b| *b.last().expect("blocks are nonempty"));
    let (b1, b2) = (merged[0], merged[1]);
    let max1 = *b1.last().expect("nonempty");
    Ok(if max1 > b2[0] {
        EdgeLabel::Neg(max1)
    } else {
        EdgeLabel::Pos(*b2.last().expect("nonempty"))
    })
}

/// `Π_m^{r,j} ∪ 0̂` with every cover edge labeled.
pub struct ElLattice {
    pub m: usize,
    pub r: usize,
    pub j: usize,
    pub lattice: FamilyPoset<SetPartition>,
    atoms: Vec<usize>,
    /// Aligned with `poset.upper_covers(x)`.
    labels: Vec<Vec<LabeledEdge>>,
}

impl ElLattice {
    pub fn new(m: usize, r: usize, j: usize, guards: &Guards) -> Result<Self> {
        check_params(m, r, j)?;
        let lattice = build_extended(m, r, j, guards)?;
        let p = &lattice.poset;
        let bottom = p
            .bottom()
            .ok_or_else(|| Error::Precondition("no 0̂".into()))?;
        let mut atoms = p.upper_covers(bottom).to_vec();
        atoms.sort_by_cached_key(|&a| atom_word(lattice.element(a).expect("atoms are elements")));
        let mut labels = Vec::with_capacity(p.len());
        for x in 0..p.len() {
            let corank = -(p.rank(x).expect("graded") as i64);
            let row = p
                .upper_covers(x)
                .iter()
                .map(|&y| {
                    let label = if x == bottom {
                        let i = atoms
                            .iter()
                            .position(|&a| a == y)
                            .expect("cover of 0̂ is an atom");
                        EdgeLabel::Zero(i as u32 + 1)
                    } else {
                        merge_label(
                            lattice.element(x).expect("x ≠ 0̂"),
                            lattice.element(y).expect("y ≠ 0̂"),
                        )?
                    };
                    Ok(LabeledEdge {
                        label,
                        corank_tiebreak: corank,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            labels.push(row);
        }
        Ok(Self {
            m,
            r,
            j,
            lattice,
            atoms,
            labels,
        })
    }

    pub fn n(&self) -> usize {
        (self.m - self.j) / self.r
    }

    /// Atoms `a_1 < ... < a_M`.
    pub fn atom_order(&self) -> Vec<&SetPartition> {
        self.atoms
            .iter()
            .map(|&a| self.lattice.element(a).expect("atom"))
            .collect()
    }

    pub fn edge(&self, x: usize, y: usize) -> Result<LabeledEdge> {
        let p = &self.lattice.poset;
        if let Some(&bad) = [x, y].iter().find(|&&v| v >= p.len()) {
            return Err(Error::OutOfRange(bad));
        }
        p.upper_covers(x)
            .iter()
            .position(|&c| c == y)
            .map(|i| self.labels[x][i])
            .ok_or_else(|| Error::Precondition(format!("{x} is not covered by {y}")))
    }

    /// Labels along a chain given as node indices.
    pub fn chain_labels(&self, chain: &[usize]) -> Result<Vec<LabeledEdge>> {
        chain.windows(2).map(|w| self.edge(w[0], w[1])).collect()
    }

    /// Walks every saturated chain starting at `x`, tallying per endpoint.
    fn sweep_from(&self, x: usize) -> Vec<Option<IntervalTally>> {
        let p = &self.lattice.poset;
        let mut tallies: Vec<Option<IntervalTally>> = vec![None; p.len()];
        let mut seq: Vec<LabeledEdge> = Vec::new();
        self.walk(x, &mut seq, true, &mut tallies);
        tallies
    }

    fn walk(
        &self,
        z: usize,
        seq: &mut Vec<LabeledEdge>,
        rising: bool,
        tallies: &mut [Option<IntervalTally>],
    ) {
        if !seq.is_empty() {
            let t = tallies[z].get_or_insert_with(|| IntervalTally {
                rising: 0,
                rising_seq: Vec::new(),
                min_seq: seq.clone(),
                min_count: 0,
            });
            if rising {
                t.rising += 1;
                t.rising_seq = seq.clone();
            }
            match seq.as_slice().cmp(t.min_seq.as_slice()) {
                Ordering::Less => {
                    t.min_seq = seq.clone();
                    t.min_count = 1;
                }
                Ordering::Equal => t.min_count += 1,
                Ordering::Greater => {}
            }
        }
        for (i, &c) in self.lattice.poset.upper_covers(z).iter().enumerate() {
            let e = self.labels[z][i];
            let still = rising && seq.last().is_none_or(|last| *last < e);
            seq.push(e);
            self.walk(c, seq, still, tallies);
            seq.pop();
        }
    }

    /// Checks every interval `[x, y]`, `x < y`: exactly one rising chain and
    /// its label sequence strictly precedes every other chain's.
    pub fn rising_chain_census(&self) -> RisingCensus {
        let per_x = exec::map_range(self.lattice.len(), |x| {
            let mut c = RisingCensus::default();
            for t in self.sweep_from(x).into_iter().flatten() {
                c.intervals_checked += 1;
                if t.rising != 1 {
                    c.rising_violations += 1;
                } else if t.min_count != 1 || t.rising_seq != t.min_seq {
                    c.lex_first_violations += 1;
                }
            }
            c
        });
        per_x
            .into_iter()
            .fold(RisingCensus::default(), |a, b| RisingCensus {
                intervals_checked: a.intervals_checked + b.intervals_checked,
                rising_violations: a.rising_violations + b.rising_violations,
                lex_first_violations: a.lex_first_violations + b.lex_first_violations,
            })
    }

    /// Maximal `0̂`–`1̂` chains with no ascent in the pair labels.
    pub fn falling_chains(&self) -> Vec<Vec<usize>> {
        let p = &self.lattice.poset;
        let (Some(bottom), Some(top)) = (p.bottom(), p.top()) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut chain = vec![bottom];
        self.descend(top, &mut chain, None, &mut out);
        out
    }

    fn descend(
        &self,
        top: usize,
        chain: &mut Vec<usize>,
        last: Option<LabeledEdge>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let z = *chain.last().expect("chain starts at 0̂");
        if z == top {
            out.push(chain.clone());
            return;
        }
        for (i, &c) in self.lattice.poset.upper_covers(z).iter().enumerate() {
            let e = self.labels[z][i];
            if last.is_none_or(|l| l > e) {
                chain.push(c);
                self.descend(top, chain, Some(e), out);
                chain.pop();
            }
        }
    }

    /// Node indices of `f_σ`, from `0̂` to `1̂`.
    pub fn chain_indices(&self, f: &FSigma) -> Result<Vec<usize>> {
        let p = &self.lattice.poset;
        let mut chain = vec![p
            .bottom()
            .ok_or_else(|| Error::Precondition("no 0̂".into()))?];
        for part in &f.partitions {
            chain.push(
                self.lattice
                    .index_of(part)
                    .ok_or_else(|| Error::Precondition(format!("{part} is not in the lattice")))?,
            );
        }
        Ok(chain)
    }
}

#[derive(Clone, Debug)]
struct IntervalTally {
    rising: usize,
    rising_seq: Vec<LabeledEdge>,
    min_seq: Vec<LabeledEdge>,
    min_count: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RisingCensus {
    pub intervals_checked: usize,
    pub rising_violations: usize,
    pub lex_first_violations: usize,
}

/// `A_m^{r,j}`: permutations with descent set `{r, 2r, ..., nr}` and `σ(m) = m`.
pub fn a_set(m: usize, r: usize, j: usize) -> Result<Vec<Vec<u8>>> {
    check_params(m, r, j)?;
    guard("max_lattice_m", 10, m)?;
    let n = (m - j) / r;
    let wanted: BTreeSet<usize> = (1..=n).map(|i| i * r).collect();
    Ok((1..m as u8)
        .permutations(m - 1)
        .map(|mut s| {
            s.push(m as u8);
            s
        })
        .filter(|s| {
            let d = descent_word(s).expect("a permutation");
            d.b_positions().into_iter().collect::<BTreeSet<_>>() == wanted
        })
        .collect())
}

/// The chain `f_σ`: its partitions from the atom up to `1̂`, each kept as the
/// list of `σ`-segments for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSigma {
    pub sigma: Vec<u8>,
    pub segments: Vec<Vec<Vec<u8>>>,
    pub partitions: Vec<SetPartition>,
}

impl fmt::Display for FSigma {
    /// `0̂ < 56|24|18|379 < 56|2418|379 < 562418|379 < 1̂`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0̂")?;
        for segs in &self.segments {
            if segs.len() == 1 {
                f.write_str(" < 1̂")?;
            } else {
                let text = segs
                    .iter()
                    .map(|s| s.iter().map(u8::to_string).collect::<String>())
                    .join("|");
                write!(f, " < {text}")?;
            }
        }
        Ok(())
    }
}

/// Builds `f_σ` for `σ ∈ A_m^{r,j}` (`m = σ.len()`).
pub fn f_sigma(sigma: &[u8], r: usize, j: usize) -> Result<FSigma> {
    let m = sigma.len();
    check_params(m, r, j)?;
    let n = (m - j) / r;
    let word = descent_word(sigma)?;
    let wanted: Vec<usize> = (1..=n).map(|i| i * r).collect();
    if word.b_positions() != wanted || sigma[m - 1] as usize != m {
        return Err(Error::Precondition(format!(
            "{} is not in A_{m}^{{{r},{j}}}",
            sigma.iter().map(u8::to_string).collect::<String>()
        )));
    }
    // t_1..t_n: cut points r·t sorted by decreasing σ(r·t)
    let mut cuts: Vec<usize> = wanted;
    cuts.sort_by_key(|&c| std::cmp::Reverse(sigma[c - 1]));
    let mut segments = Vec::with_capacity(n + 1);
    let mut partitions = Vec::with_capacity(n + 1);
    for i in (0..=n).rev() {
        let mut active: Vec<usize> = cuts[..i].to_vec();
        active.sort_unstable();
        let mut segs = Vec::with_capacity(i + 1);
        let mut prev = 0;
        for c in active.into_iter().chain(std::iter::once(m)) {
            segs.push(sigma[prev..c].to_vec());
            prev = c;
        }
        partitions.push(SetPartition::new(segs.clone())?);
        segments.push(segs);
    }
    Ok(FSigma {
        sigma: sigma.to_vec(),
        segments,
        partitions,
    })
}

/// `(a^{r-1} b)^n a^{j-2}`, whose descent count is the number of falling chains.
pub fn expected_word(m: usize, r: usize, j: usize) -> Option<DescentWord> {
    if j < 2 {
        return None;
    }
    let n = (m - j) / r;
    Some(DescentWord::periodic(r, n, &DescentWord::a_power(j - 2)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElReport {
    pub m: usize,
    pub r: usize,
    pub j: usize,
    pub intervals_checked: usize,
    pub rising_violations: usize,
    pub lex_first_violations: usize,
    pub falling_count: usize,
    pub des_expected: u128,
    pub a_set_size: usize,
    pub f_sigma_match: bool,
    pub mu: i64,
    /// `μ(0̂, 1̂) = (-1)^{n+1}·#falling`, the chain length being `n + 1`.
    pub euler_characteristic_ok: bool,
}

impl ElReport {
    pub fn passed(&self) -> bool {
        self.rising_violations == 0
            && self.lex_first_violations == 0
            && self.falling_count as u128 == self.des_expected
            && self.a_set_size as u128 == self.des_expected
            && self.f_sigma_match
            && self.euler_characteristic_ok
    }
}

/// Full EL check of `Π_m^{r,j}`.
pub fn el_verify(m: usize, r: usize, j: usize, guards: &Guards) -> Result<ElReport> {
    let el = ElLattice::new(m, r, j, guards)?;
    let census = el.rising_chain_census();
    let falling = el.falling_chains();
    let des_expected = match expected_word(m, r, j) {
        Some(w) => des_count(&w)?,
        None => 0,
    };
    let a = a_set(m, r, j)?;
    let from_sigma: BTreeSet<Vec<usize>> = a
        .iter()
        .map(|s| el.chain_indices(&f_sigma(s, r, j)?))
        .collect::<Result<_>>()?;
    let falling_set: BTreeSet<Vec<usize>> = falling.iter().cloned().collect();
    let mu = el.lattice.poset.mobius_bottom_top().unwrap_or(0);
    Ok(ElReport {
        m,
        r,
        j,
        intervals_checked: census.intervals_checked,
        rising_violations: census.rising_violations,
        lex_first_violations: census.lex_first_violations,
        falling_count: falling.len(),
        des_expected,
        a_set_size: a.len(),
        f_sigma_match: from_sigma.len() == a.len() && from_sigma == falling_set,
        mu,
        euler_characteristic_ok: mu == sign(el.n() + 1) * falling.len() as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm_stats::parse_permutation;

    fn part(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    #[test]
    fn label_order() {
        let mut v = [
            EdgeLabel::Pos(1),
            EdgeLabel::Zero(2),
            EdgeLabel::Neg(1),
            EdgeLabel::Neg(4),
            EdgeLabel::Zero(1),
            EdgeLabel::Pos(4),
        ];
        v.sort();
        let s: Vec<String> = v.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["-4", "-1", "0_1", "0_2", "1", "4"]);
        let a = LabeledEdge {
            label: EdgeLabel::Pos(3),
            corank_tiebreak: -1,
        };
        let b = LabeledEdge {
            label: EdgeLabel::Pos(3),
            corank_tiebreak: -2,
        };
        assert!(b < a);
    }

    #[test]
    fn atoms() {
        assert_eq!(
            atom_word(&part("16|23|459|78")),
            vec![1, 6, 2, 3, 4, 5, 9, 7, 8]
        );
        assert_eq!(atom_count(5, 2, 3).unwrap(), BigInt::from(6));
        assert_eq!(atom_count(9, 2, 3).unwrap(), BigInt::from(420));
        let el = ElLattice::new(4, 2, 2, &Guards::default()).unwrap();
        let order: Vec<String> = el.atom_order().iter().map(ToString::to_string).collect();
        assert_eq!(order, ["12|34", "13|24", "14|23"]);
        for (m, r, j) in [(5, 2, 3), (6, 2, 2), (7, 3, 4), (7, 2, 1)] {
            let el = ElLattice::new(m, r, j, &Guards::default()).unwrap();
            assert_eq!(
                BigInt::from(el.atom_order().len()),
                atom_count(m, r, j).unwrap()
            );
        }
        let bottom = el.lattice.poset.bottom().unwrap();
        let third = el.lattice.index_of(&part("14|23")).unwrap();
        assert_eq!(el.edge(bottom, third).unwrap().label, EdgeLabel::Zero(3));
        assert_eq!(el.edge(bottom, third).unwrap().corank_tiebreak, 0);
    }

    #[test]
    fn merge_labels() {
        // blocks are taken with max(B_1) < max(B_2), so B_1 = 23 here
        assert_eq!(
            merge_label(&part("12|34"), &part("1234")).unwrap(),
            EdgeLabel::Pos(4)
        );
        assert_eq!(
            merge_label(&part("14|23"), &part("1234")).unwrap(),
            EdgeLabel::Neg(3)
        );
        assert!(merge_label(&part("12|34"), &part("13|24")).is_err());
        assert!(merge_label(&part("1|2|3|4"), &part("1234")).is_err());
    }

    #[test]
    fn worked_example() {
        let sigma = parse_permutation("562418379").unwrap();
        let f = f_sigma(&sigma, 2, 3).unwrap();
        assert_eq!(
            f.to_string(),
            "0̂ < 56|24|18|379 < 56|2418|379 < 562418|379 < 1̂"
        );
        assert!(f_sigma(&parse_permutation("123456789").unwrap(), 2, 3).is_err());
        assert!(f_sigma(&parse_permutation("562418397").unwrap(), 2, 3).is_err());
    }

    #[test]
    fn small_lattices() {
        let g = Guards::default();
        let r = el_verify(4, 2, 2, &g).unwrap();
        assert_eq!((r.falling_count, r.mu), (2, 2));
        assert!(r.passed(), "{r:?}");
        let r = el_verify(3, 2, 1, &g).unwrap();
        assert_eq!((r.falling_count, r.mu, r.a_set_size), (0, 0, 0));
        assert!(r.passed(), "{r:?}");
        let r = el_verify(5, 2, 3, &g).unwrap();
        assert_eq!(r.falling_count, 5);
        assert!(r.passed(), "{r:?}");
        let r = el_verify(6, 2, 2, &g).unwrap();
        assert_eq!((r.falling_count, r.mu), (16, -16));
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn cover_interval_has_one_rising_chain() {
        let el = ElLattice::new(4, 2, 2, &Guards::default()).unwrap();
        let c = el.rising_chain_census();
        // 0̂→3 atoms, 0̂→1̂, 3 atoms→1̂
        assert_eq!(c.intervals_checked, 7);
        assert!(el.edge(0, 0).is_err());
    }
}
