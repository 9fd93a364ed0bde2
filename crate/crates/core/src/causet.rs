//! Finite causal sets and the region algebra built on them.
//!
//! Elements are indexed `0..n` and regions are bitsets over those indices, so
//! every region operation is a handful of word operations. The order is kept
//! transitively closed; callers may hand in any generating relation.
//!
//! Two points are space-like when they are distinct and neither precedes the
//! other. The causal complement of a region is the set of points space-like to
//! every point of the region; for the empty region that is the whole causet.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Largest causet the bitset representation supports.
pub const MAX_ELEMENTS: usize = 64;

/// A set of causet elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Region(u64);

impl Region {
    pub const EMPTY: Region = Region(0);

    pub const fn from_bits(bits: u64) -> Self {
        Region(bits)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Region(u64::MAX)
        } else {
            Region((1u64 << n) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        Region(1u64 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Region(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1u64 << index) != 0
    }

    pub fn union(self, other: Region) -> Region {
        Region(self.0 | other.0)
    }

    pub fn intersection(self, other: Region) -> Region {
        Region(self.0 & other.0)
    }

    pub fn difference(self, other: Region) -> Region {
        Region(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Region) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Region) -> bool {
        self.0 & other.0 == 0
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of this region, in increasing bit order.
    pub fn subsets(self) -> impl Iterator<Item = Region> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == mask {
                None
            } else {
                Some((current.wrapping_sub(mask)) & mask)
            };
            Some(Region(current))
        })
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite set with a strict, transitively closed precedence order.
#[derive(Clone, PartialEq, Eq)]
pub struct Causet {
    names: Vec<String>,
    /// `preds[x]`: elements strictly preceding `x`.
    preds: Vec<u64>,
    /// `succs[x]`: elements strictly following `x`.
    succs: Vec<u64>,
}

impl fmt::Debug for Causet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Causet")
            .field("elements", &self.names)
            .field("order", &self.relations())
            .finish()
    }
}

/// Builds a causet from an element list and any generating relation.
///
/// The relation is closed transitively; a cycle (including `x < x`) is rejected
/// with the cycle spelled out.
pub fn validate_causet<S: AsRef<str>>(elements: &[S], relations: &[(S, S)]) -> Result<Causet> {
    let mut index = HashMap::with_capacity(elements.len());
    let mut names = Vec::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        let name = e.as_ref().to_string();
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateElement(name));
        }
        names.push(name);
    }
    if names.len() > MAX_ELEMENTS {
        return Err(Error::TooManyElements(names.len()));
    }
    let lookup = |s: &S| {
        index
            .get(s.as_ref())
            .copied()
            .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))
    };
    let mut edges = Vec::with_capacity(relations.len());
    for (x, y) in relations {
        edges.push((lookup(x)?, lookup(y)?));
    }
    Causet::from_edges(names, &edges)
}

impl Causet {
    /// Builds from index pairs `(x, y)` meaning `x < y`.
    pub fn from_edges(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        let mut direct = vec![0u64; n];
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(Error::ForeignRegion { elements: n });
            }
            direct[y] |= 1u64 << x;
        }
        // Warshall on bit rows: preds[y] gains preds[k] whenever k < y.
        let mut preds = direct.clone();
        for k in 0..n {
            let pk = preds[k];
            for row in preds.iter_mut() {
                if *row & (1u64 << k) != 0 {
                    *row |= pk;
                }
            }
        }
        if let Some(x) = (0..n).find(|&x| preds[x] & (1u64 << x) != 0) {
            let cycle = find_cycle(&direct, x)
                .into_iter()
                .map(|i| names[i].clone())
                .collect();
            return Err(Error::Cycle { cycle });
        }
        Ok(Self::from_closed_preds(names, preds))
    }

    /// Builds from already-closed predecessor rows. Callers guarantee closure
    /// and acyclicity.
    pub(crate) fn from_closed_preds(names: Vec<String>, preds: Vec<u64>) -> Self {
        let n = names.len();
        let mut succs = vec![0u64; n];
        for (y, &row) in preds.iter().enumerate() {
            for x in Region(row).iter() {
                succs[x] |= 1u64 << y;
            }
        }
        Causet { names, preds, succs }
    }

    /// Causet on elements `e0..e{n-1}` with the given closed predecessor rows.
    pub fn from_closed_rows(preds: Vec<u64>) -> Result<Self> {
        let n = preds.len();
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let edges: Vec<(usize, usize)> = preds
            .iter()
            .enumerate()
            .flat_map(|(y, &row)| Region(row).iter().map(move |x| (x, y)))
            .collect();
        let causet = Self::from_edges(names, &edges)?;
        if causet.preds != preds {
            return Err(Error::Format("predecessor rows are not transitively closed".into()));
        }
        Ok(causet)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn region<S: AsRef<str>>(&self, names: &[S]) -> Result<Region> {
        let mut r = Region::EMPTY;
        for n in names {
            r = r.union(Region::singleton(self.index_of(n.as_ref())?));
        }
        Ok(r)
    }

    pub fn region_names(&self, r: Region) -> Vec<String> {
        r.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn full_region(&self) -> Region {
        Region::full(self.len())
    }

    /// Strict predecessors of element `x`.
    pub fn predecessors(&self, x: usize) -> Region {
        Region(self.preds[x])
    }

    pub fn predecessor_rows(&self) -> &[u64] {
        &self.preds
    }

    pub fn precedes(&self, x: usize, y: usize) -> bool {
        self.preds[y] & (1u64 << x) != 0
    }

    /// Point-level space-like relation: distinct and unordered.
    pub fn points_spacelike(&self, x: usize, y: usize) -> bool {
        x != y && !self.precedes(x, y) && !self.precedes(y, x)
    }

    /// The closed order as index pairs, sorted.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in Region(self.succs[x]).iter() {
                out.push((x, y));
            }
        }
        out
    }

    pub fn check(&self, r: Region) -> Result<()> {
        if r.is_subset(self.full_region()) {
            Ok(())
        } else {
            Err(Error::ForeignRegion { elements: self.len() })
        }
    }

    // ---- region algebra: checked public surface ----

    /// `J⁻(r)`: the region together with everything preceding it.
    pub fn past(&self, r: Region) -> Result<Region> {
        self.check(r)?;
        Ok(self.past_of(r))
    }

    pub fn is_spacelike(&self, r1: Region, r2: Region) -> Result<bool> {
        self.check(r1)?;
        self.check(r2)?;
        Ok(self.spacelike(r1, r2))
    }

    /// `J⁻(r1) ∩ J⁻(r2)`.
    pub fn mutual_past(&self, r1: Region, r2: Region) -> Result<Region> {
        self.check(r1)?;
        self.check(r2)?;
        Ok(self.mutual_past_of(r1, r2))
    }

    /// `(J⁻(r1) ∪ J⁻(r2)) \ (r1 ∪ r2)`.
    pub fn truncated_joint_past(&self, r1: Region, r2: Region) -> Result<Region> {
        self.check(r1)?;
        self.check(r2)?;
        Ok(self.truncated_joint_past_of(r1, r2))
    }

    pub fn causal_complement(&self, r: Region) -> Result<Region> {
        self.check(r)?;
        Ok(self.complement_of(r))
    }

    /// `(r′)′`.
    pub fn causal_closure(&self, r: Region) -> Result<Region> {
        self.check(r)?;
        Ok(self.closure_of(r))
    }

    /// True iff the past of the causal closure strictly exceeds the closure.
    pub fn is_causally_finite(&self, r: Region) -> Result<bool> {
        self.check(r)?;
        Ok(self.causally_finite(r))
    }

    /// The flank strips `([J⁻(a) \ a] \ J⁻(b), [J⁻(b) \ b] \ J⁻(a))`.
    pub fn flank_regions(&self, a: Region, b: Region) -> Result<(Region, Region)> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.flanks_of(a, b))
    }

    /// Evaluates the region identities behind the enlargement argument for a
    /// space-like pair: the enlarged regions `a ∪ X`, `b ∪ Y` stay space-like,
    /// their truncated joint past equals the mutual past of `a, b`, and the
    /// truncated joint past of `a, b` splits as `X ⊔ Y ⊔ P₁`.
    pub fn verify_crucial_identity(&self, a: Region, b: Region) -> Result<CrucialIdentity> {
        if !self.is_spacelike(a, b)? {
            return Err(Error::NotSpacelike);
        }
        Ok(self.crucial_identity_of(a, b))
    }

    // ---- unchecked internals ----

    pub(crate) fn past_of(&self, r: Region) -> Region {
        Region(r.iter().fold(r.0, |acc, x| acc | self.preds[x]))
    }

    pub(crate) fn spacelike(&self, r1: Region, r2: Region) -> bool {
        self.past_of(r1).is_disjoint(r2) && r1.is_disjoint(self.past_of(r2))
    }

    pub(crate) fn mutual_past_of(&self, r1: Region, r2: Region) -> Region {
        self.past_of(r1).intersection(self.past_of(r2))
    }

    pub(crate) fn truncated_joint_past_of(&self, r1: Region, r2: Region) -> Region {
        self.past_of(r1)
            .union(self.past_of(r2))
            .difference(r1.union(r2))
    }

    pub(crate) fn complement_of(&self, r: Region) -> Region {
        let related = r
            .iter()
            .fold(r.0, |acc, y| acc | self.preds[y] | self.succs[y]);
        self.full_region().difference(Region(related))
    }

    pub(crate) fn closure_of(&self, r: Region) -> Region {
        self.complement_of(self.complement_of(r))
    }

    pub(crate) fn causally_finite(&self, r: Region) -> bool {
        let closure = self.closure_of(r);
        !self.past_of(closure).difference(closure).is_empty()
    }

    pub(crate) fn flanks_of(&self, a: Region, b: Region) -> (Region, Region) {
        let pa = self.past_of(a);
        let pb = self.past_of(b);
        (pa.difference(a).difference(pb), pb.difference(b).difference(pa))
    }

    pub(crate) fn crucial_identity_of(&self, a: Region, b: Region) -> CrucialIdentity {
        let (flank_a, flank_b) = self.flanks_of(a, b);
        let enlarged_a = a.union(flank_a);
        let enlarged_b = b.union(flank_b);
        let mutual = self.mutual_past_of(a, b);
        let enlarged_truncated = self.truncated_joint_past_of(enlarged_a, enlarged_b);
        let truncated = self.truncated_joint_past_of(a, b);
        let pieces_disjoint = flank_a.is_disjoint(flank_b)
            && flank_a.is_disjoint(mutual)
            && flank_b.is_disjoint(mutual);
        CrucialIdentity {
            flank_a,
            flank_b,
            mutual_past: mutual,
            truncated_joint_past: truncated,
            enlarged_truncated_joint_past: enlarged_truncated,
            enlarged_spacelike: self.spacelike(enlarged_a, enlarged_b),
            identity_holds: enlarged_truncated == mutual,
            decomposition_holds: pieces_disjoint
                && truncated == flank_a.union(flank_b).union(mutual),
            mutual_past_avoids_regions: mutual.is_disjoint(a.union(b)),
        }
    }

    /// Unordered pairs of nonempty, space-like regions `(a, b)` with
    /// `a.bits() < b.bits()`, in increasing `(a, b)` order.
    pub fn spacelike_pairs(&self) -> Vec<(Region, Region)> {
        let full = self.full_region();
        let mut out = Vec::new();
        for a in full.subsets().filter(|r| !r.is_empty()) {
            let rest = full.difference(self.past_of(a));
            for b in rest.subsets() {
                if b.is_empty() || b.bits() <= a.bits() {
                    continue;
                }
                if self.spacelike(a, b) {
                    out.push((a, b));
                }
            }
        }
        out.sort();
        out
    }
}

/// Regions computed while checking the enlargement identities for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrucialIdentity {
    pub flank_a: Region,
    pub flank_b: Region,
    pub mutual_past: Region,
    pub truncated_joint_past: Region,
    pub enlarged_truncated_joint_past: Region,
    pub enlarged_spacelike: bool,
    pub identity_holds: bool,
    pub decomposition_holds: bool,
    pub mutual_past_avoids_regions: bool,
}

impl CrucialIdentity {
    pub fn holds(&self) -> bool {
        self.enlarged_spacelike
            && self.identity_holds
            && self.decomposition_holds
            && self.mutual_past_avoids_regions
    }
}

/// Shortest cycle through `start` in the direct relation, closed with `start`.
fn find_cycle(direct_preds: &[u64], start: usize) -> Vec<usize> {
    let n = direct_preds.len();
    let mut succ = vec![Vec::new(); n];
    for (y, &row) in direct_preds.iter().enumerate() {
        for x in Region(row).iter() {
            succ[x].push(y);
        }
    }
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::from([start]);
    let mut seen = vec![false; n];
    while let Some(x) = queue.pop_front() {
        for &y in &succ[x] {
            if y == start {
                let mut chain = Vec::new();
                let mut cur = x;
                while cur != start {
                    chain.push(cur);
                    cur = parent[cur];
                }
                chain.reverse();
                let mut path = vec![start];
                path.extend(chain);
                path.push(start);
                return path;
            }
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    vec![start, start]
}
