use std::fmt;

use serde::{Deserialize, Serialize};

use super::counting::{count_of_type, types_of_size};
use super::partition::partitions_where;
use super::{Family, FamilyPoset, Guards, IndexSet, StructureType};
use crate::error::{guard, Error, Result};

/// A block with a `Z_s`-labelling of its elements, stored with the label of the
/// block minimum normalised to `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnrichedBlock {
    pub elems: Vec<u8>,
    pub labels: Vec<u8>,
}

/// An element `(π̃, Z)` of the Dowling lattice on `{1, ..., n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DowlingElement {
    pub zero_block: Vec<u8>,
    pub blocks: Vec<EnrichedBlock>,
}

impl EnrichedBlock {
    /// Sorts by element and shifts labels so the minimum carries label 0.
    fn canonical(mut pairs: Vec<(u8, u8)>, s: usize) -> Self {
        pairs.sort_unstable();
        let shift = pairs[0].1 as usize;
        let s = s.max(1);
        Self {
            elems: pairs.iter().map(|p| p.0).collect(),
            labels: pairs
                .iter()
                .map(|p| ((p.1 as usize + s - shift) % s) as u8)
                .collect(),
        }
    }

    fn label_of(&self, e: u8) -> Option<u8> {
        self.elems
            .iter()
            .position(|&x| x == e)
            .map(|i| self.labels[i])
    }
}

impl DowlingElement {
    /// All singletons, empty zero block.
    pub fn bottom(n: usize) -> Self {
        Self {
            zero_block: Vec::new(),
            blocks: (1..=n as u8)
                .map(|e| EnrichedBlock {
                    elems: vec![e],
                    labels: vec![0],
                })
                .collect(),
        }
    }

    /// Everything in the zero block.
    pub fn top(n: usize) -> Self {
        Self {
            zero_block: (1..=n as u8).collect(),
            blocks: Vec::new(),
        }
    }

    /// Builds a canonical element from a zero block and labelled blocks
    /// `(elements, labels)`; labels are taken mod `s`.
    pub fn new(zero_block: Vec<u8>, blocks: Vec<(Vec<u8>, Vec<u8>)>, s: usize) -> Result<Self> {
        let mut zero_block = zero_block;
        zero_block.sort_unstable();
        let mut out = Vec::new();
        for (elems, labels) in blocks {
            if elems.is_empty() || elems.len() != labels.len() {
                return Err(Error::InvalidParameter(
                    "block and label lengths differ".into(),
                ));
            }
            let pairs = elems
                .into_iter()
                .zip(labels.into_iter().map(|l| (l as usize % s.max(1)) as u8))
                .collect();
            out.push(EnrichedBlock::canonical(pairs, s));
        }
        out.sort_unstable_by_key(|b| b.elems[0]);
        let x = Self {
            zero_block,
            blocks: out,
        };
        let n = x.ground_size();
        let mut seen = vec![false; n + 1];
        for &e in x
            .zero_block
            .iter()
            .chain(x.blocks.iter().flat_map(|b| b.elems.iter()))
        {
            let e = e as usize;
            if e == 0 || e > n || seen[e] {
                return Err(Error::InvalidParameter(format!(
                    "blocks do not partition 1..={n}"
                )));
            }
            seen[e] = true;
        }
        Ok(x)
    }

    pub fn ground_size(&self) -> usize {
        self.zero_block.len() + self.blocks.iter().map(|b| b.elems.len()).sum::<usize>()
    }

    /// `n - (number of nonzero blocks)`.
    pub fn rank(&self) -> usize {
        self.ground_size() - self.blocks.len()
    }

    pub fn type_of(&self) -> StructureType {
        StructureType::from_block_sizes(
            self.zero_block.len(),
            self.ground_size(),
            self.blocks.iter().map(|b| b.elems.len()),
        )
    }

    fn with_blocks(&self, zero_block: Vec<u8>, mut blocks: Vec<EnrichedBlock>) -> Self {
        blocks.sort_unstable_by_key(|b| b.elems[0]);
        let _ = self;
        Self { zero_block, blocks }
    }

    /// Upper covers in `L_n` over a group of order `s`: a block joins the zero
    /// block, or two blocks merge in one of `s` ways.
    pub fn covers(&self, s: usize) -> Vec<Self> {
        let k = self.blocks.len();
        let mut out = Vec::with_capacity(k + s * k * k.saturating_sub(1) / 2);
        for i in 0..k {
            let mut z = self.zero_block.clone();
            z.extend_from_slice(&self.blocks[i].elems);
            z.sort_unstable();
            let mut rest = self.blocks.clone();
            rest.remove(i);
            out.push(self.with_blocks(z, rest));
        }
        for i in 0..k {
            for j in i + 1..k {
                for alpha in 0..s.max(1) {
                    let (bi, bj) = (&self.blocks[i], &self.blocks[j]);
                    let mut pairs: Vec<(u8, u8)> = bi
                        .elems
                        .iter()
                        .copied()
                        .zip(bi.labels.iter().copied())
                        .collect();
                    pairs.extend(
                        bj.elems
                            .iter()
                            .zip(&bj.labels)
                            .map(|(&e, &l)| (e, ((l as usize + alpha) % s.max(1)) as u8)),
                    );
                    let merged = EnrichedBlock::canonical(pairs, s);
                    let mut rest: Vec<EnrichedBlock> = self
                        .blocks
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != i && t != j)
                        .map(|(_, b)| b.clone())
                        .collect();
                    rest.push(merged);
                    out.push(self.with_blocks(self.zero_block.clone(), rest));
                }
            }
        }
        out
    }

    /// Order of `L_n`: `Z_x ⊆ Z_y`, and each block of `x` either falls in
    /// `Z_y` or sits inside one block of `y` with labels agreeing up to a
    /// scalar.
    pub fn leq(&self, other: &Self, s: usize) -> bool {
        if !self.zero_block.iter().all(|e| other.zero_block.contains(e)) {
            return false;
        }
        let s = s.max(1);
        self.blocks.iter().all(|b| {
            if b.elems.iter().all(|e| other.zero_block.contains(e)) {
                return true;
            }
            let Some(c) = other.blocks.iter().find(|c| c.elems.contains(&b.elems[0])) else {
                return false;
            };
            let Some(l0) = c.label_of(b.elems[0]) else {
                return false;
            };
            let shift = (l0 as usize + s - b.labels[0] as usize) % s;
            b.elems.iter().zip(&b.labels).all(|(&e, &l)| {
                c.label_of(e)
                    .map(|lc| lc as usize == (l as usize + shift) % s)
                    .unwrap_or(false)
            })
        })
    }
}

impl fmt::Display for DowlingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{{")?;
        for (i, e) in self.zero_block.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")?;
        for b in &self.blocks {
            write!(f, " |")?;
            for (e, l) in b.elems.iter().zip(&b.labels) {
                write!(f, " {e}")?;
                if *l != 0 {
                    write!(f, "^{l}")?;
                }
            }
        }
        Ok(())
    }
}

/// Elements of `L_n` (group order `s`) whose zero-block size satisfies
/// `zero_ok` and whose block sizes satisfy `block_ok`.
pub fn dowling_elements_where(
    n: usize,
    s: usize,
    zero_ok: &dyn Fn(usize) -> bool,
    block_ok: &dyn Fn(usize) -> bool,
) -> Vec<DowlingElement> {
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let b = mask.count_ones() as usize;
        if !zero_ok(b) {
            continue;
        }
        let zero: Vec<u8> = (1..=n as u8)
            .filter(|&e| mask & (1 << (e - 1)) != 0)
            .collect();
        let rest: Vec<u8> = (1..=n as u8)
            .filter(|&e| mask & (1 << (e - 1)) == 0)
            .collect();
        // partition of `rest` via a relabelled partition of 1..=|rest|
        for p in partitions_where(rest.len(), &|blk| block_ok(blk.len())) {
            let blocks: Vec<Vec<u8>> = p
                .blocks()
                .iter()
                .map(|blk| blk.iter().map(|&i| rest[i as usize - 1]).collect())
                .collect();
            push_labellings(&zero, &blocks, s, &mut out);
        }
    }
    out
}

fn push_labellings(zero: &[u8], blocks: &[Vec<u8>], s: usize, out: &mut Vec<DowlingElement>) {
    let s = s.max(1);
    let free: usize = blocks.iter().map(|b| b.len() - 1).sum();
    let total = s.pow(free as u32);
    for code in 0..total {
        let mut c = code;
        let mut enriched = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut labels = vec![0u8];
            for _ in 1..b.len() {
                labels.push((c % s) as u8);
                c /= s;
            }
            enriched.push(EnrichedBlock {
                elems: b.clone(),
                labels,
            });
        }
        out.push(DowlingElement {
            zero_block: zero.to_vec(),
            blocks: enriched,
        });
    }
}

fn check_size(n: usize, family: &Family, guards: &Guards) -> Result<()> {
    guard("max_dowling_n", guards.max_dowling_n, n)?;
    let total: usize = types_of_size(n, true)
        .into_iter()
        .filter(|t| family.admits_ambient(t))
        .map(|t| {
            count_of_type(
                n,
                &t,
                &Family::Dowling {
                    s: family.group_order(),
                },
            )
            .ok()
            .and_then(|c| usize::try_from(c).ok())
            .unwrap_or(usize::MAX)
        })
        .fold(0usize, usize::saturating_add);
    guard("max_elements", guards.max_elements, total)
}

/// The Dowling lattice `L_n` for a group of order `s`.
pub fn build_dowling_lattice(
    n: usize,
    s: usize,
    guards: &Guards,
) -> Result<FamilyPoset<DowlingElement>> {
    if s == 0 {
        return Err(Error::InvalidParameter(
            "group order s must be positive".into(),
        ));
    }
    check_size(n, &Family::Dowling { s }, guards)?;
    let elems = dowling_elements_where(n, s, &|_| true, &|_| true);
    FamilyPoset::from_moves(elems, |x| x.covers(s), false)
}

/// `D_n^{(r,k)}`: elements of `L_{rn+k}` with `b ≥ k`, `b ≡ k (mod r)` and all
/// block sizes divisible by `r`.
pub fn build_d_rk(
    n: usize,
    r: usize,
    k: usize,
    s: usize,
    guards: &Guards,
) -> Result<FamilyPoset<DowlingElement>> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidParameter("r and s must be positive".into()));
    }
    let family = Family::DowlingRk { r, k, s };
    let ground = r * n + k;
    check_size(ground, &family, guards)?;
    let elems = dowling_elements_where(
        ground,
        s,
        &|b| b >= k && (b - k).is_multiple_of(r),
        &|len| len % r == 0,
    );
    FamilyPoset::from_moves(elems, |x| x.covers(s), false)
}

/// `R_n^{I,J}` for `R` the Dowling lattices: zero-block size in `J`, block
/// sizes in `I`; induced order, `0̂` adjoined.
pub fn build_restricted_dowling(
    n: usize,
    allowed_blocks: &IndexSet,
    allowed_zero: &IndexSet,
    s: usize,
    guards: &Guards,
) -> Result<FamilyPoset<DowlingElement>> {
    if s == 0 {
        return Err(Error::InvalidParameter(
            "group order s must be positive".into(),
        ));
    }
    let family = Family::RestrictedDowling {
        blocks: allowed_blocks.clone(),
        zero: allowed_zero.clone(),
        s,
    };
    check_size(n, &family, guards)?;
    let elems = dowling_elements_where(n, s, &|b| allowed_zero.contains(b), &|len| {
        allowed_blocks.contains(len)
    });
    FamilyPoset::from_order(elems, |x, y| x.leq(y, s), true)
}
