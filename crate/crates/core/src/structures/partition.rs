use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FamilyPoset, Guards, IndexSet, StructureType};
use crate::error::{guard, Error, Result};

/// A set partition of `{1, ..., m}` in canonical form: every block sorted,
/// blocks ordered by their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SetPartition {
    blocks: Vec<Vec<u8>>,
}

impl SetPartition {
    /// Validates and canonicalises the blocks; they must partition `1..=m` for
    /// `m` the total number of elements.
    pub fn new(mut blocks: Vec<Vec<u8>>) -> Result<Self> {
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::InvalidParameter("empty block".into()));
            }
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        let m: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; m + 1];
        for &e in blocks.iter().flatten() {
            let e = e as usize;
            if e == 0 || e > m || seen[e] {
                return Err(Error::InvalidParameter(format!(
                    "blocks do not partition 1..={m}"
                )));
            }
            seen[e] = true;
        }
        Ok(Self { blocks })
    }

    pub(crate) fn from_canonical(blocks: Vec<Vec<u8>>) -> Self {
        Self { blocks }
    }

    pub fn singletons(m: usize) -> Self {
        Self::from_canonical((1..=m as u8).map(|e| vec![e]).collect())
    }

    pub fn one_block(m: usize) -> Self {
        Self::from_canonical(vec![(1..=m as u8).collect()])
    }

    /// Parses `16|23|459|78` (single-digit elements) or `1,6|2,3` notation.
    pub fn parse(text: &str) -> Result<Self> {
        let blocks = text
            .split('|')
            .map(|b| {
                let b = b.trim();
                if b.contains(',') {
                    b.split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<u8>()
                                .map_err(|e| Error::Parse(e.to_string()))
                        })
                        .collect::<Result<Vec<u8>>>()
                } else {
                    b.chars()
                        .map(|c| {
                            c.to_digit(10)
                                .map(|d| d as u8)
                                .ok_or_else(|| Error::Parse(format!("bad element `{c}`")))
                        })
                        .collect()
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_containing(&self, e: u8) -> Option<&[u8]> {
        self.blocks
            .iter()
            .find(|b| b.contains(&e))
            .map(Vec::as_slice)
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        let m = self.ground_size();
        if m != other.ground_size() {
            return false;
        }
        let mut owner = vec![0usize; m + 1];
        for (i, b) in other.blocks.iter().enumerate() {
            for &e in b {
                owner[e as usize] = i;
            }
        }
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&e| owner[e as usize] == owner[b[0] as usize]))
    }

    /// Merges blocks `i` and `j`.
    pub fn merge(&self, i: usize, j: usize) -> Self {
        let mut blocks = self.blocks.clone();
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let moved = blocks.remove(hi);
        blocks[lo].extend(moved);
        blocks[lo].sort_unstable();
        blocks.sort_unstable_by_key(|b| b[0]);
        Self { blocks }
    }

    /// All partitions covering `self` in the full partition lattice.
    pub fn merges(&self) -> Vec<Self> {
        let k = self.blocks.len();
        let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                out.push(self.merge(i, j));
            }
        }
        out
    }

    pub fn type_of(&self) -> StructureType {
        StructureType::from_block_sizes(0, self.ground_size(), self.blocks.iter().map(Vec::len))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.ground_size() > 9;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for (k, e) in b.iter().enumerate() {
                if wide && k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

/// Enumerates set partitions of `1..=m` whose blocks all satisfy `keep`,
/// in canonical form and a fixed order.
pub fn partitions_where(m: usize, keep: &dyn Fn(&[u8]) -> bool) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let remaining: Vec<u8> = (1..=m as u8).collect();
    let mut blocks = Vec::new();
    partitions_rec(&remaining, keep, &mut blocks, &mut out);
    out
}

fn partitions_rec(
    remaining: &[u8],
    keep: &dyn Fn(&[u8]) -> bool,
    blocks: &mut Vec<Vec<u8>>,
    out: &mut Vec<SetPartition>,
) {
    let Some((&first, rest)) = remaining.split_first() else {
        out.push(SetPartition::from_canonical(blocks.clone()));
        return;
    };
    // choose the companions of `first` as a subset of `rest`
    let k = rest.len();
    for mask in 0u32..(1u32 << k) {
        let mut block = vec![first];
        let mut left = Vec::with_capacity(k);
        for (i, &e) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(e);
            } else {
                left.push(e);
            }
        }
        if !keep(&block) {
            continue;
        }
        blocks.push(block);
        partitions_rec(&left, keep, blocks, out);
        blocks.pop();
    }
}

/// All set partitions of `1..=m`; `m` is bounded by `guards.max_enumerate_m`.
pub fn enumerate_partitions(m: usize, guards: &Guards) -> Result<Vec<SetPartition>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    guard("max_enumerate_m", guards.max_enumerate_m, m)?;
    Ok(partitions_where(m, &|_| true))
}

fn merge_closed_family(
    parts: Vec<SetPartition>,
    adjoin_bottom: bool,
) -> Result<FamilyPoset<SetPartition>> {
    FamilyPoset::from_moves(parts, |p| p.merges(), adjoin_bottom)
}

/// The partition lattice `Π_m` under refinement.
pub fn build_partition_lattice(m: usize, guards: &Guards) -> Result<FamilyPoset<SetPartition>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    guard("max_lattice_m", guards.max_lattice_m, m)?;
    merge_closed_family(partitions_where(m, &|_| true), false)
}

/// `Π_m^r`: partitions with all block sizes divisible by `r`, with `0̂` adjoined.
pub fn build_r_divisible(m: usize, r: usize, guards: &Guards) -> Result<FamilyPoset<SetPartition>> {
    if r == 0 || m == 0 || !m.is_multiple_of(r) {
        return Err(Error::InvalidParameter(format!(
            "r-divisible lattice needs r | m, got m={m}, r={r}"
        )));
    }
    guard("max_lattice_m", guards.max_lattice_m, m)?;
    merge_closed_family(partitions_where(m, &|b| b.len() % r == 0), true)
}

/// `Π_m^{r,j}`: the block containing `m` has at least `j` elements and every
/// other block has size divisible by `r`; `0̂` adjoined.
pub fn build_extended(
    m: usize,
    r: usize,
    j: usize,
    guards: &Guards,
) -> Result<FamilyPoset<SetPartition>> {
    if r == 0 || j == 0 || m < j || !(m - j).is_multiple_of(r) {
        return Err(Error::InvalidParameter(format!(
            "extended lattice needs m ≡ j (mod r) with m ≥ j ≥ 1, got m={m}, r={r}, j={j}"
        )));
    }
    guard("max_lattice_m", guards.max_lattice_m, m)?;
    let top = m as u8;
    let keep = move |b: &[u8]| {
        if b.contains(&top) {
            b.len() >= j
        } else {
            b.len().is_multiple_of(r)
        }
    };
    merge_closed_family(partitions_where(m, &keep), true)
}

/// `Q_n^I` for `Q = Π`: partitions whose block sizes all lie in `I`, ordered by
/// refinement, with `0̂` adjoined.
pub fn build_restricted_partitions(
    n: usize,
    allowed: &IndexSet,
    guards: &Guards,
) -> Result<FamilyPoset<SetPartition>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    guard("max_lattice_m", guards.max_lattice_m, n)?;
    let parts = partitions_where(n, &|b| allowed.contains(b.len()));
    FamilyPoset::from_order(parts, |x, y| x.refines(y), true)
}
