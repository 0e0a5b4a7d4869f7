//! Concrete posets: partition lattices, Dowling lattices and the families
//! derived from them, with canonical element forms and type counting.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_series::DenominatorSequence;
use crate::poset::{Poset, PosetJson};

pub mod bijection;
pub mod counting;
pub mod dowling;
pub mod partition;

pub use bijection::{extended_to_dowling, verify_extended_bijection, BijectionReport};
pub use counting::{
    census, count_of_type, denominator_m_r, denominator_n_rk, level_types, types_of_size, CensusRow,
};
pub use dowling::{
    build_d_rk, build_dowling_lattice, build_restricted_dowling, dowling_elements_where,
    DowlingElement, EnrichedBlock,
};
pub use partition::{
    build_extended, build_partition_lattice, build_r_divisible, build_restricted_partitions,
    enumerate_partitions, partitions_where, SetPartition,
};

/// Size limits applied before any construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    /// Largest `m` for which set partitions are listed.
    pub max_enumerate_m: usize,
    /// Largest ground set for partition-lattice families.
    pub max_lattice_m: usize,
    /// Largest ground set for Dowling families.
    pub max_dowling_n: usize,
    /// Largest element count of a Dowling-family poset.
    pub max_elements: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Self {
            max_enumerate_m: 12,
            max_lattice_m: 9,
            max_dowling_n: 8,
            max_elements: 50_000,
        }
    }
}

/// A poset node: the synthetic adjoined `0̂` or a structure element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node<E> {
    Bottom,
    Element(E),
}

/// A poset on dense indices together with the structure element behind each
/// index. An adjoined `0̂`, when present, is index 0.
#[derive(Clone, Debug)]
pub struct FamilyPoset<E> {
    pub poset: Poset,
    nodes: Vec<Node<E>>,
    index: HashMap<E, usize>,
}

impl<E: Clone + Eq + Hash> FamilyPoset<E> {
    /// Builds the poset whose covers are the `moves` that stay inside `elems`.
    /// Every cover of the induced order must arise as a move.
    pub fn from_moves<F>(elems: Vec<E>, moves: F, adjoin_bottom: bool) -> Result<Self>
    where
        F: Fn(&E) -> Vec<E>,
    {
        let offset = usize::from(adjoin_bottom);
        let index = Self::index_elements(&elems, offset)?;
        let mut covers = Vec::new();
        for (i, e) in elems.iter().enumerate() {
            let mut ups: Vec<usize> = moves(e)
                .iter()
                .filter_map(|m| index.get(m).copied())
                .collect();
            ups.sort_unstable();
            ups.dedup();
            covers.extend(ups.into_iter().map(|j| (i + offset, j)));
        }
        Self::assemble(elems, index, covers, adjoin_bottom)
    }

    /// Builds the induced order given by `leq`, using its transitive reduction
    /// as covers.
    pub fn from_order<F>(elems: Vec<E>, leq: F, adjoin_bottom: bool) -> Result<Self>
    where
        E: Sync,
        F: Fn(&E, &E) -> bool + Sync + Send,
    {
        let offset = usize::from(adjoin_bottom);
        let index = Self::index_elements(&elems, offset)?;
        let inner = Poset::from_order(elems.len(), |i, j| leq(&elems[i], &elems[j]))?;
        let covers = inner
            .covers()
            .into_iter()
            .map(|(x, y)| (x + offset, y + offset))
            .collect();
        Self::assemble(elems, index, covers, adjoin_bottom)
    }

    fn index_elements(elems: &[E], offset: usize) -> Result<HashMap<E, usize>> {
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.clone(), i + offset).is_some() {
                return Err(Error::InvalidParameter(
                    "duplicate element in family".into(),
                ));
            }
        }
        Ok(index)
    }

    fn assemble(
        elems: Vec<E>,
        index: HashMap<E, usize>,
        mut covers: Vec<(usize, usize)>,
        adjoin_bottom: bool,
    ) -> Result<Self> {
        let n = elems.len() + usize::from(adjoin_bottom);
        let mut nodes = Vec::with_capacity(n);
        if adjoin_bottom {
            let mut has_lower = vec![false; n];
            for &(_, y) in &covers {
                has_lower[y] = true;
            }
            covers.extend((1..n).filter(|&y| !has_lower[y]).map(|y| (0, y)));
            nodes.push(Node::Bottom);
        }
        nodes.extend(elems.into_iter().map(Node::Element));
        let poset = Poset::from_covers(n, &covers)?;
        Ok(Self {
            poset,
            nodes,
            index,
        })
    }

    /// Returns the same family with a `0̂` adjoined below its minimal elements.
    pub fn with_bottom(self) -> Self {
        if self.has_bottom() {
            return self;
        }
        let covers: Vec<(usize, usize)> = self
            .poset
            .covers()
            .into_iter()
            .map(|(x, y)| (x + 1, y + 1))
            .collect();
        let elems: Vec<E> = self.elements().map(|(_, e)| e.clone()).collect();
        let index = self.index.into_iter().map(|(e, i)| (e, i + 1)).collect();
        Self::assemble(elems, index, covers, true).expect("shifting an acyclic poset stays acyclic")
    }

    pub fn has_bottom(&self) -> bool {
        matches!(self.nodes.first(), Some(Node::Bottom))
    }

    /// Number of poset elements, including an adjoined `0̂`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> Option<&Node<E>> {
        self.nodes.get(i)
    }

    /// The structure element at index `i`; `None` for `0̂` or out of range.
    pub fn element(&self, i: usize) -> Option<&E> {
        match self.nodes.get(i) {
            Some(Node::Element(e)) => Some(e),
            _ => None,
        }
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Structure elements with their indices, skipping `0̂`.
    pub fn elements(&self) -> impl Iterator<Item = (usize, &E)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, n)| match n {
            Node::Element(e) => Some((i, e)),
            Node::Bottom => None,
        })
    }

    /// JSON export: the poset plus one entry per index, `null` for `0̂`.
    pub fn export(&self) -> FamilyExport<'_, E> {
        FamilyExport {
            poset: self.poset.to_json(),
            elements: self
                .nodes
                .iter()
                .map(|n| match n {
                    Node::Element(e) => Some(e),
                    Node::Bottom => None,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FamilyExport<'a, E> {
    pub poset: PosetJson,
    pub elements: Vec<Option<&'a E>>,
}

/// Type `(b; a_1, ..., a_n)`: zero-block size and block-size multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StructureType {
    pub b: usize,
    pub a: Vec<usize>,
}

impl StructureType {
    pub fn new(b: usize, a: Vec<usize>) -> Self {
        Self { b, a }
    }

    pub fn from_block_sizes(b: usize, n: usize, sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut a = vec![0; n];
        for s in sizes {
            a[s - 1] += 1;
        }
        Self { b, a }
    }

    /// `a_i`, zero beyond the stored range.
    pub fn a(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.a.get(i - 1).copied().unwrap_or(0)
        }
    }

    /// `b + Σ i·a_i`.
    pub fn size(&self) -> usize {
        self.b
            + self
                .a
                .iter()
                .enumerate()
                .map(|(i, &c)| (i + 1) * c)
                .sum::<usize>()
    }

    pub fn num_blocks(&self) -> usize {
        self.a.iter().sum()
    }

    /// Block sizes `i` with `a_i > 0`.
    pub fn parts(&self) -> impl Iterator<Item = usize> + '_ {
        self.a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i + 1)
    }
}

impl fmt::Display for StructureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.b)?;
        for (i, c) in self.a.iter().enumerate() {
            write!(f, "{}{c}", if i == 0 { " " } else { "," })?;
        }
        write!(f, ")")
    }
}

/// A set of indices, either finite or one of a few arithmetic families.
///
/// Text forms: `2,4,6`, `P` (positive integers), `N` (naturals), `2P`
/// (positive multiples of 2), `1+2N` (1, 3, 5, ...).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum IndexSet {
    Explicit(BTreeSet<usize>),
    Positive,
    Natural,
    Multiples { step: usize },
    Progression { start: usize, step: usize },
}

impl IndexSet {
    pub fn explicit(values: impl IntoIterator<Item = usize>) -> Self {
        Self::Explicit(values.into_iter().collect())
    }

    pub fn contains(&self, n: usize) -> bool {
        match self {
            Self::Explicit(set) => set.contains(&n),
            Self::Positive => n > 0,
            Self::Natural => true,
            Self::Multiples { step } => n > 0 && n.is_multiple_of(*step),
            Self::Progression { start, step } => n >= *start && (n - start).is_multiple_of(*step),
        }
    }

    /// Members up to and including `bound`.
    pub fn window(&self, bound: usize) -> Vec<usize> {
        (0..=bound).filter(|&n| self.contains(n)).collect()
    }

    /// Checks `left + right ⊆ self` on the window `0..=bound`, reporting the
    /// first violating pair.
    pub fn check_sum_closed(
        &self,
        left: &IndexSet,
        right: &IndexSet,
        bound: usize,
        name: &'static str,
    ) -> Result<()> {
        for a in left.window(bound) {
            for b in right.window(bound) {
                if a + b <= bound && !self.contains(a + b) {
                    return Err(Error::Hypothesis {
                        left: a,
                        right: b,
                        sum: a + b,
                        set: name,
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Explicit(set) => {
                let parts: Vec<String> = set.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
            Self::Positive => write!(f, "P"),
            Self::Natural => write!(f, "N"),
            Self::Multiples { step } => write!(f, "{step}P"),
            Self::Progression { start, step } => write!(f, "{start}+{step}N"),
        }
    }
}

impl FromStr for IndexSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("index set `{text}`: {e}")))
        };
        match t {
            "P" => return Ok(Self::Positive),
            "N" => return Ok(Self::Natural),
            "" => return Ok(Self::Explicit(BTreeSet::new())),
            _ => {}
        }
        if let Some(step) = t.strip_suffix('P') {
            let step = num(step)?;
            if step == 0 {
                return Err(Error::Parse("step must be positive".into()));
            }
            return Ok(Self::Multiples { step });
        }
        if let Some(body) = t.strip_suffix('N') {
            let (start, step) = body
                .split_once('+')
                .ok_or_else(|| Error::Parse(format!("index set `{text}`: expected a+bN")))?;
            let step = num(step)?;
            if step == 0 {
                return Err(Error::Parse("step must be positive".into()));
            }
            return Ok(Self::Progression {
                start: num(start)?,
                step,
            });
        }
        Ok(Self::Explicit(
            t.split(',').map(num).collect::<Result<_>>()?,
        ))
    }
}

impl TryFrom<String> for IndexSet {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<IndexSet> for String {
    fn from(s: IndexSet) -> Self {
        s.to_string()
    }
}

/// The families built in this crate, with their parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// Partition lattices `Π_n`.
    Partition,
    /// Dowling lattices `L_n` for a group of order `s`.
    Dowling { s: usize },
    /// `Π^{(r)}`: level `n` is the `r`-divisible part of `Π_{rn}`.
    RDivisible { r: usize },
    /// `D^{(r,k)}`: level `n` sits inside `L_{rn+k}`.
    DowlingRk { r: usize, k: usize, s: usize },
    /// `Q_n^I` for `Q = Π`.
    RestrictedPartition { blocks: IndexSet },
    /// `R_n^{I,J}` for `R` the Dowling lattices.
    RestrictedDowling {
        blocks: IndexSet,
        zero: IndexSet,
        s: usize,
    },
}

impl Family {
    pub fn group_order(&self) -> usize {
        match self {
            Self::Dowling { s } | Self::DowlingRk { s, .. } | Self::RestrictedDowling { s, .. } => {
                *s
            }
            _ => 1,
        }
    }

    /// Whether the family has a zero block (Dowling-type) or not.
    pub fn is_dowling(&self) -> bool {
        matches!(
            self,
            Self::Dowling { .. } | Self::DowlingRk { .. } | Self::RestrictedDowling { .. }
        )
    }

    /// Size of the ambient ground set at level `n`.
    pub fn ground_size(&self, n: usize) -> usize {
        match self {
            Self::RDivisible { r } => r * n,
            Self::DowlingRk { r, k, .. } => r * n + k,
            _ => n,
        }
    }

    /// Whether an element of the ambient `Π` or `L` with type `t` lies in the family.
    pub fn admits_ambient(&self, t: &StructureType) -> bool {
        match self {
            Self::Partition => t.b == 0,
            Self::Dowling { .. } => true,
            Self::RDivisible { r } => t.b == 0 && t.parts().all(|i| i % r == 0),
            Self::DowlingRk { r, k, .. } => {
                t.b >= *k && (t.b - k).is_multiple_of(*r) && t.parts().all(|i| i % r == 0)
            }
            Self::RestrictedPartition { blocks } => {
                t.b == 0 && t.parts().all(|i| blocks.contains(i))
            }
            Self::RestrictedDowling { blocks, zero, .. } => {
                zero.contains(t.b) && t.parts().all(|i| blocks.contains(i))
            }
        }
    }

    /// Translates an ambient type into the family's own type at level `n`
    /// (`b' = (b-k)/r`, `a'_i = a_{ri}`); the identity for the other families.
    pub fn derived_type(&self, n: usize, t: &StructureType) -> StructureType {
        let (r, k) = match self {
            Self::RDivisible { r } => (*r, 0),
            Self::DowlingRk { r, k, .. } => (*r, *k),
            _ => return t.clone(),
        };
        StructureType {
            b: t.b.saturating_sub(k) / r,
            a: (1..=n).map(|i| t.a(r * i)).collect(),
        }
    }

    /// The denominator sequences `M` (of the exponential structure) and `N`
    /// (of the Dowling structure, when there is one).
    pub fn denominators(&self) -> (DenominatorSequence, Option<DenominatorSequence>) {
        match *self {
            Self::RDivisible { r } => (counting::m_r_sequence(r), None),
            Self::DowlingRk { r, k, s } => (
                counting::m_r_sequence(r),
                Some(counting::n_rk_sequence(r, k, s)),
            ),
            Self::Dowling { .. } | Self::RestrictedDowling { .. } => (
                DenominatorSequence::unit(),
                Some(DenominatorSequence::unit()),
            ),
            Self::Partition | Self::RestrictedPartition { .. } => {
                (DenominatorSequence::unit(), None)
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Partition => write!(f, "pi"),
            Self::Dowling { s } => write!(f, "dowling(s={s})"),
            Self::RDivisible { r } => write!(f, "pi-r(r={r})"),
            Self::DowlingRk { r, k, s } => write!(f, "d-rk(r={r},k={k},s={s})"),
            Self::RestrictedPartition { blocks } => write!(f, "q-restricted(I={blocks})"),
            Self::RestrictedDowling { blocks, zero, s } => {
                write!(f, "r-restricted(I={blocks},J={zero},s={s})")
            }
        }
    }
}
