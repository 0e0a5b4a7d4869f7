//! Finite posets given by cover relations.
//!
//! Elements are dense indices `0..n`. The order closure is stored as two bitset
//! rows per element (principal filter and principal ideal), computed over a
//! topological order.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;

#[derive(Clone, Debug)]
pub struct Poset {
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    rank: Option<Vec<usize>>,
    topo: Vec<usize>,
    minimal: Vec<usize>,
    maximal: Vec<usize>,
}

/// Wire form: `{"n": .., "covers": [[x, y], ..], "ranks": [..] | null}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    pub ranks: Option<Vec<usize>>,
}

impl Poset {
    /// Builds a poset from its Hasse diagram. Duplicate pairs are ignored.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(x, y) in covers {
            if x >= n {
                return Err(Error::OutOfRange(x));
            }
            if y >= n {
                return Err(Error::OutOfRange(y));
            }
            if x == y {
                return Err(Error::Cycle);
            }
            upper[x].push(y);
            lower[y].push(x);
        }
        for v in upper.iter_mut().chain(lower.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }

        // Kahn's algorithm; smallest index first for determinism.
        let mut indeg: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(x) = ready.pop_first() {
            topo.push(x);
            for &y in &upper[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::Cycle);
        }

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &x in topo.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(x);
            for &y in &upper[x] {
                row.union_with(&up[y]);
            }
            up[x] = row;
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for &y in &topo {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(y);
            for &x in &lower[y] {
                row.union_with(&down[x]);
            }
            down[y] = row;
        }

        // longest chain from a minimal element
        let mut height = vec![0usize; n];
        for &y in &topo {
            height[y] = lower[y].iter().map(|&x| height[x] + 1).max().unwrap_or(0);
        }
        let graded = (0..n).all(|x| upper[x].iter().all(|&y| height[y] == height[x] + 1));

        let minimal = (0..n).filter(|&i| lower[i].is_empty()).collect();
        let maximal = (0..n).filter(|&i| upper[i].is_empty()).collect();
        Ok(Self {
            upper,
            lower,
            up,
            down,
            rank: graded.then_some(height),
            topo,
            minimal,
            maximal,
        })
    }

    /// Builds a poset from an order predicate `leq(x, y)` on `0..n`, taking the
    /// transitive reduction as the cover relation. The predicate must be a
    /// partial order.
    pub fn from_order(n: usize, leq: impl Fn(usize, usize) -> bool + Sync + Send) -> Result<Self> {
        let strict_up: Vec<FixedBitSet> = exec::map_range(n, |x| {
            let mut row = FixedBitSet::with_capacity(n);
            for y in 0..n {
                if y != x && leq(x, y) {
                    row.insert(y);
                }
            }
            row
        });
        for x in 0..n {
            for y in strict_up[x].ones() {
                if strict_up[y].contains(x) {
                    return Err(Error::Cycle);
                }
            }
        }
        let covers: Vec<Vec<(usize, usize)>> = exec::map_range(n, |x| {
            let mut above = FixedBitSet::with_capacity(n);
            for z in strict_up[x].ones() {
                above.union_with(&strict_up[z]);
            }
            let mut c = strict_up[x].clone();
            c.difference_with(&above);
            c.ones().map(|y| (x, y)).collect()
        });
        Self::from_covers(n, &covers.concat())
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    fn check(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::OutOfRange(x))
        }
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// Principal filter of `x` (includes `x`).
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// Principal ideal of `x` (includes `x`).
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn is_graded(&self) -> bool {
        self.rank.is_some()
    }

    pub fn ranks(&self) -> Option<&[usize]> {
        self.rank.as_deref()
    }

    pub fn rank(&self, x: usize) -> Option<usize> {
        self.rank.as_ref().map(|r| r[x])
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn minimal(&self) -> &[usize] {
        &self.minimal
    }

    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    pub fn bottom(&self) -> Option<usize> {
        (self.minimal.len() == 1).then(|| self.minimal[0])
    }

    pub fn top(&self) -> Option<usize> {
        (self.maximal.len() == 1).then(|| self.maximal[0])
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.upper
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
            .collect()
    }

    /// Elements of `[x, y]` in topological order.
    pub fn interval(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.check(x)?;
        self.check(y)?;
        if !self.leq(x, y) {
            return Err(Error::NotComparable { x, y });
        }
        let mut mask = self.up[x].clone();
        mask.intersect_with(&self.down[y]);
        Ok(self
            .topo
            .iter()
            .copied()
            .filter(|&z| mask.contains(z))
            .collect())
    }

    /// All values `μ(x, y)` for `y ≥ x`, by the bottom-up recursion
    /// `μ(x, y) = -Σ_{x ≤ z < y} μ(x, z)`.
    pub fn mobius_from(&self, x: usize) -> MobiusTable {
        let n = self.len();
        let mut values = vec![0i64; n];
        for &y in &self.topo {
            if !self.up[x].contains(y) {
                continue;
            }
            if y == x {
                values[y] = 1;
                continue;
            }
            let mut between = self.up[x].clone();
            between.intersect_with(&self.down[y]);
            let s: i64 = between.ones().filter(|&z| z != y).map(|z| values[z]).sum();
            values[y] = -s;
        }
        MobiusTable {
            base: x,
            support: self.up[x].clone(),
            values,
            from_below: true,
        }
    }

    /// All values `μ(x, y)` for `x ≤ y`, by the top-down recursion
    /// `μ(x, y) = -Σ_{x < z ≤ y} μ(z, y)`.
    pub fn mobius_to(&self, y: usize) -> MobiusTable {
        let n = self.len();
        let mut values = vec![0i64; n];
        for &x in self.topo.iter().rev() {
            if !self.down[y].contains(x) {
                continue;
            }
            if x == y {
                values[x] = 1;
                continue;
            }
            let mut between = self.up[x].clone();
            between.intersect_with(&self.down[y]);
            let s: i64 = between.ones().filter(|&z| z != x).map(|z| values[z]).sum();
            values[x] = -s;
        }
        MobiusTable {
            base: y,
            support: self.down[y].clone(),
            values,
            from_below: false,
        }
    }

    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        self.check(x)?;
        self.check(y)?;
        if !self.leq(x, y) {
            return Err(Error::NotComparable { x, y });
        }
        Ok(self.mobius_from(x).values[y])
    }

    /// `μ(0̂, 1̂)`; `None` unless the poset is bounded.
    pub fn mobius_bottom_top(&self) -> Option<i64> {
        let (b, t) = (self.bottom()?, self.top()?);
        Some(self.mobius_from(b).values[t])
    }

    /// Saturated chains from `x` to `y` in depth-first order over sorted covers.
    pub fn maximal_chains(&self, x: usize, y: usize) -> Result<Vec<Vec<usize>>> {
        self.check(x)?;
        self.check(y)?;
        if !self.leq(x, y) {
            return Err(Error::NotComparable { x, y });
        }
        let mut out = Vec::new();
        let mut path = vec![x];
        self.chains_rec(y, &mut path, &mut out);
        Ok(out)
    }

    fn chains_rec(&self, y: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let cur = *path.last().expect("path is never empty");
        if cur == y {
            out.push(path.clone());
            return;
        }
        for &z in &self.upper[cur] {
            if self.down[y].contains(z) {
                path.push(z);
                self.chains_rec(y, path, out);
                path.pop();
            }
        }
    }

    /// Number of saturated chains from `x` to `y`, by dynamic programming.
    pub fn count_maximal_chains(&self, x: usize, y: usize) -> Result<u128> {
        let elems = self.interval(x, y)?;
        let mut count: HashMap<usize, u128> = HashMap::with_capacity(elems.len());
        for &z in &elems {
            let c = if z == x {
                1
            } else {
                self.lower[z].iter().filter_map(|w| count.get(w)).sum()
            };
            count.insert(z, c);
        }
        Ok(count[&y])
    }

    /// Checks the chain axioms: every maximal chain has `expected_length`
    /// elements, there is a unique maximal element, and reports the number of
    /// minimal elements.
    pub fn check_chain_axioms(&self, expected_length: usize) -> ChainAxiomReport {
        let n = self.len();
        let mut shortest = vec![usize::MAX; n];
        let mut longest = vec![0usize; n];
        for &y in &self.topo {
            if self.lower[y].is_empty() {
                shortest[y] = 1;
                longest[y] = 1;
            } else {
                shortest[y] = self.lower[y]
                    .iter()
                    .map(|&x| shortest[x] + 1)
                    .min()
                    .unwrap();
                longest[y] = self.lower[y].iter().map(|&x| longest[x] + 1).max().unwrap();
            }
        }
        let min_len = self.maximal.iter().map(|&m| shortest[m]).min().unwrap_or(0);
        let max_len = self.maximal.iter().map(|&m| longest[m]).max().unwrap_or(0);
        ChainAxiomReport {
            expected_length,
            shortest_chain: min_len,
            longest_chain: max_len,
            chains_ok: n > 0 && min_len == expected_length && max_len == expected_length,
            unique_maximal: self.maximal.len() == 1,
            minimal_count: self.minimal.len(),
        }
    }

    // `set` is an intersection of principal filters (or ideals), so it contains
    // the whole row of each of its members; the least member owns all of it.
    fn least_in(&self, set: &FixedBitSet, rows: &[FixedBitSet]) -> Option<usize> {
        let size = set.count_ones(..);
        set.ones().find(|&z| rows[z].count_ones(..) == size)
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let mut common = self.up[x].clone();
        common.intersect_with(&self.up[y]);
        self.least_in(&common, &self.up)
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let mut common = self.down[x].clone();
        common.intersect_with(&self.down[y]);
        self.least_in(&common, &self.down)
    }

    pub fn is_lattice(&self) -> LatticeCheck {
        if self.bottom().is_none() {
            return LatticeCheck::no("no unique minimal element");
        }
        if self.top().is_none() {
            return LatticeCheck::no("no unique maximal element");
        }
        let n = self.len();
        let failures: Vec<Option<String>> = exec::map_range(n, |x| {
            for y in x + 1..n {
                if self.join(x, y).is_none() {
                    return Some(format!("elements {x} and {y} have no join"));
                }
                if self.meet(x, y).is_none() {
                    return Some(format!("elements {x} and {y} have no meet"));
                }
            }
            None
        });
        match failures.into_iter().flatten().next() {
            Some(reason) => LatticeCheck::no(&reason),
            None => LatticeCheck {
                is_lattice: true,
                reason: None,
            },
        }
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            n: self.len(),
            covers: self.covers().into_iter().map(|(x, y)| [x, y]).collect(),
            ranks: self.rank.clone(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let covers: Vec<(usize, usize)> = json.covers.iter().map(|&[x, y]| (x, y)).collect();
        let p = Self::from_covers(json.n, &covers)?;
        if let Some(r) = &json.ranks {
            if p.rank.as_ref() != Some(r) {
                return Err(Error::Parse(
                    "stored ranks disagree with the cover relations".into(),
                ));
            }
        }
        Ok(p)
    }
}

#[derive(Clone, Debug)]
pub struct MobiusTable {
    base: usize,
    support: FixedBitSet,
    values: Vec<i64>,
    from_below: bool,
}

impl MobiusTable {
    pub fn base(&self) -> usize {
        self.base
    }

    /// `μ(base, y)` for a table from [`Poset::mobius_from`], or `μ(y, base)` for
    /// one from [`Poset::mobius_to`]; `None` when the pair is not comparable.
    pub fn get(&self, y: usize) -> Option<i64> {
        self.support.contains(y).then(|| self.values[y])
    }

    pub fn is_from_below(&self) -> bool {
        self.from_below
    }

    /// `(element, μ)` pairs over the support, by index.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.support.ones().map(|y| (y, self.values[y]))
    }
}

/// Memo of Möbius tables per base element; drop it at the end of a task.
#[derive(Default)]
pub struct MobiusCache {
    tables: HashMap<usize, MobiusTable>,
}

impl MobiusCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mobius(&mut self, poset: &Poset, x: usize, y: usize) -> Result<i64> {
        poset.check(x)?;
        poset.check(y)?;
        if !poset.leq(x, y) {
            return Err(Error::NotComparable { x, y });
        }
        let t = self.tables.entry(x).or_insert_with(|| poset.mobius_from(x));
        Ok(t.values[y])
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn clear(&mut self) {
        self.tables.clear();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainAxiomReport {
    pub expected_length: usize,
    pub shortest_chain: usize,
    pub longest_chain: usize,
    pub chains_ok: bool,
    pub unique_maximal: bool,
    pub minimal_count: usize,
}

impl ChainAxiomReport {
    pub fn passed(&self) -> bool {
        self.chains_ok && self.unique_maximal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeCheck {
    pub is_lattice: bool,
    pub reason: Option<String>,
}

impl LatticeCheck {
    fn no(reason: &str) -> Self {
        Self {
            is_lattice: false,
            reason: Some(reason.to_string()),
        }
    }
}

/// Checks `Σ_{x ≤ z ≤ y} μ(x, z) = 0` for every `x < y` and that the top-down
/// recursion agrees with the bottom-up one. Returns the number of pairs checked.
pub fn verify_mobius_identities(poset: &Poset) -> Result<usize> {
    let n = poset.len();
    let tables: Vec<MobiusTable> = exec::map_range(n, |x| poset.mobius_from(x));
    let per_base: Vec<Result<usize>> = exec::map_range(n, |x| {
        let from = &tables[x];
        let mut pairs = 0;
        for y in poset.up_set(x).ones() {
            if y == x {
                continue;
            }
            let mut between = poset.up_set(x).clone();
            between.intersect_with(poset.down_set(y));
            let s: i64 = between.ones().map(|z| from.values[z]).sum();
            if s != 0 {
                return Err(Error::Precondition(format!(
                    "Möbius sum over [{x}, {y}] is {s}"
                )));
            }
            pairs += 1;
        }
        Ok(pairs)
    });
    let mut total = 0;
    for r in per_base {
        total += r?;
    }
    let cross: Vec<Option<(usize, usize)>> = exec::map_range(n, |y| {
        let to = poset.mobius_to(y);
        poset
            .down_set(y)
            .ones()
            .find(|&x| tables[x].values[y] != to.values[x])
            .map(|x| (x, y))
    });
    if let Some((x, y)) = cross.into_iter().flatten().next() {
        return Err(Error::Precondition(format!(
            "top-down and bottom-up μ({x}, {y}) differ"
        )));
    }
    Ok(total)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Poset;

    pub fn chain(n: usize) -> Poset {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_covers(n, &covers).unwrap()
    }

    /// `0̂ < three atoms < 1̂`.
    pub fn diamond3() -> Poset {
        Poset::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    /// Boolean lattice on `k` atoms; element index is the subset bitmask.
    pub fn boolean(k: usize) -> Poset {
        let n = 1 << k;
        let mut covers = Vec::new();
        for s in 0..n {
            for b in 0..k {
                if s & (1 << b) == 0 {
                    covers.push((s, s | (1 << b)));
                }
            }
        }
        Poset::from_covers(n, &covers).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    /// Inclusion–exclusion oracle for Boolean lattices: μ(S, T) = (-1)^{|T \ S|}.
    fn boolean_mobius(s: usize, t: usize) -> i64 {
        if (t - s).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn chain_of_two() {
        let p = chain(2);
        assert!(p.is_graded());
        assert_eq!(p.ranks().unwrap(), &[0, 1]);
        assert_eq!(p.mobius(0, 1).unwrap(), -1);
        assert_eq!(p.maximal_chains(0, 1).unwrap().len(), 1);
    }

    #[test]
    fn rank_two_diamond() {
        let p = diamond3();
        assert!(p.is_graded());
        assert_eq!(p.rank(4), Some(2));
        assert_eq!(p.mobius(0, 4).unwrap(), 2);
        assert_eq!(p.maximal_chains(0, 4).unwrap().len(), 3);
        assert!(p.check_chain_axioms(3).passed());
    }

    #[test]
    fn cycle_is_rejected() {
        assert!(matches!(
            Poset::from_covers(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(Error::Cycle)
        ));
        assert!(matches!(
            Poset::from_covers(2, &[(0, 5)]),
            Err(Error::OutOfRange(5))
        ));
    }

    #[test]
    fn boolean_lattice_against_inclusion_exclusion() {
        let p = boolean(3);
        assert_eq!(p.mobius(0, 7).unwrap(), -1);
        for s in 0..8 {
            for t in 0..8 {
                if s & t == s {
                    assert_eq!(p.mobius(s, t).unwrap(), boolean_mobius(s, t));
                } else {
                    assert!(p.mobius(s, t).is_err());
                }
            }
        }
        // 3! orderings of the atoms
        assert_eq!(p.maximal_chains(0, 7).unwrap().len(), 6);
        assert_eq!(p.count_maximal_chains(0, 7).unwrap(), 6);
        assert!(p.is_lattice().is_lattice);
        assert_eq!(verify_mobius_identities(&p).unwrap(), 19);
    }

    #[test]
    fn chain_enumeration_is_deterministic() {
        let p = diamond3();
        assert_eq!(
            p.maximal_chains(0, 4).unwrap(),
            vec![vec![0, 1, 4], vec![0, 2, 4], vec![0, 3, 4]]
        );
        assert_eq!(chain(3).maximal_chains(0, 2).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn chain_axioms_report_failures() {
        let r = chain(2).check_chain_axioms(3);
        assert!(!r.passed());
        assert_eq!(r.longest_chain, 2);
        let two_max = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(!two_max.check_chain_axioms(2).unique_maximal);
    }

    #[test]
    fn lattice_check_reasons() {
        let two_max = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let c = two_max.is_lattice();
        assert!(!c.is_lattice);
        assert!(c.reason.unwrap().contains("maximal"));
        // bowtie: two atoms both below two coatoms has no join
        let bowtie = Poset::from_covers(
            6,
            &[
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap();
        assert!(!bowtie.is_lattice().is_lattice);
        assert_eq!(bowtie.join(1, 2), None);
        assert_eq!(diamond3().join(1, 2), Some(4));
        assert_eq!(diamond3().meet(1, 3), Some(0));
    }

    #[test]
    fn from_order_matches_from_covers() {
        let p = Poset::from_order(8, |a, b| a & b == a).unwrap();
        let q = boolean(3);
        assert_eq!(p.covers(), q.covers());
        assert!(matches!(
            Poset::from_order(2, |_, _| true),
            Err(Error::Cycle)
        ));
    }

    #[test]
    fn json_round_trip_and_rank_check() {
        let p = diamond3();
        let j = p.to_json();
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"n":5,"covers":[[0,1],[0,2],[0,3],[1,4],[2,4],[3,4]],"ranks":[0,1,1,1,2]}"#
        );
        let back = Poset::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.covers(), p.covers());
        let mut bad = j.clone();
        bad.ranks = Some(vec![0, 0, 0, 0, 0]);
        assert!(Poset::from_json(&bad).is_err());
    }

    #[test]
    fn cache_memoises_per_base() {
        let p = boolean(3);
        let mut cache = MobiusCache::new();
        assert_eq!(cache.mobius(&p, 0, 7).unwrap(), -1);
        assert_eq!(cache.mobius(&p, 0, 3).unwrap(), 1);
        assert_eq!(cache.len(), 1);
        assert!(cache.mobius(&p, 3, 0).is_err());
        cache.clear();
        assert!(cache.is_empty());
    }

    #[test]
    fn top_down_table_matches() {
        let p = boolean(3);
        let to = p.mobius_to(7);
        assert!(!to.is_from_below());
        for x in 0..8 {
            assert_eq!(to.get(x), Some(boolean_mobius(x, 7)));
        }
    }
}
