use serde::Serialize;

use super::{build_d_rk, build_extended, DowlingElement, EnrichedBlock, Guards, SetPartition};
use crate::error::{Error, Result};

/// Removes `m` from its block and turns the rest of that block into the zero
/// block; the other blocks keep the trivial labelling (`s = 1`).
pub fn extended_to_dowling(p: &SetPartition) -> DowlingElement {
    let m = p.ground_size() as u8;
    let mut zero_block = Vec::new();
    let mut blocks = Vec::new();
    for b in p.blocks() {
        if b.contains(&m) {
            zero_block = b.iter().copied().filter(|&e| e != m).collect();
        } else {
            blocks.push(EnrichedBlock {
                elems: b.clone(),
                labels: vec![0; b.len()],
            });
        }
    }
    DowlingElement { zero_block, blocks }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub m: usize,
    pub r: usize,
    pub k: usize,
    pub elements: usize,
    pub bijective: bool,
    pub order_preserving: bool,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.order_preserving
    }
}

/// Checks that `extended_to_dowling` maps `Π_m^{r,k+1}` (without `0̂`) onto
/// `D_n^{(r,k)}` at `s = 1`, `m = rn + k + 1`, preserving order both ways.
pub fn verify_extended_bijection(
    m: usize,
    r: usize,
    k: usize,
    guards: &Guards,
) -> Result<BijectionReport> {
    if r == 0 || m < k + 1 || !(m - k - 1).is_multiple_of(r) {
        return Err(Error::InvalidParameter(format!(
            "need m = rn + k + 1, got m={m}, r={r}, k={k}"
        )));
    }
    let n = (m - k - 1) / r;
    let ext = build_extended(m, r, k + 1, guards)?;
    let dow = build_d_rk(n, r, k, 1, guards)?;
    let image: Vec<(usize, Option<usize>)> = ext
        .elements()
        .map(|(i, p)| (i, dow.index_of(&extended_to_dowling(p))))
        .collect();
    let mut hit = vec![false; dow.len()];
    let mut bijective = image.len() == dow.len();
    for &(_, j) in &image {
        match j {
            Some(j) if !hit[j] => hit[j] = true,
            _ => bijective = false,
        }
    }
    let mut order_preserving = bijective;
    if bijective {
        'outer: for &(x, fx) in &image {
            for &(y, fy) in &image {
                if ext.poset.leq(x, y) != dow.poset.leq(fx.unwrap_or(0), fy.unwrap_or(0)) {
                    order_preserving = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(BijectionReport {
        m,
        r,
        k,
        elements: image.len(),
        bijective,
        order_preserving,
    })
}
