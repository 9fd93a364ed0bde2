//! Product history spaces over a causet, events, least domains of
//! decidability, and full specifications of regions.
//!
//! A history assigns one of `alphabet` values to every element. Histories are
//! indexed in mixed radix with element 0 as the least significant digit, and an
//! event is a bitset over history indices, so spaces hold at most
//! [`MAX_HISTORIES`] histories.
//!
//! Domains come from a [`DomMap`]. The canonical map sends an event to its
//! dependency set: the elements at which flipping a single value can move a
//! history in or out of the event. User-supplied overrides replace the
//! canonical value for listed events and are validated, never trusted.

mod axioms;

pub use axioms::{
    check_dom_axioms, random_events, AxiomReport, AxiomResult, AxiomScope, AxiomWitness,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::causet::{Causet, Region};
use crate::error::{Error, Result};

/// Largest history space an [`Event`] bitset can address.
pub const MAX_HISTORIES: usize = 128;

/// Largest space whose full event algebra (`2^|Ω|` events) is enumerated.
pub const EXHAUSTIVE_HISTORIES: usize = 16;

/// Largest number of atoms whose unions are listed when building `Γ(r)`.
const MAX_GAMMA_ATOMS: usize = 20;

/// A set of histories.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Event(u128);

impl Event {
    pub const EMPTY: Event = Event(0);

    pub const fn from_bits(bits: u128) -> Self {
        Event(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, history: usize) -> bool {
        history < 128 && self.0 & (1u128 << history) != 0
    }

    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    pub fn intersection(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    pub fn difference(self, other: Event) -> Event {
        Event(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Event) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Event) -> bool {
        self.0 & other.0 == 0
    }

    /// Member history indices in increasing order.
    pub fn histories(self) -> impl Iterator<Item = usize> {
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
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.histories()).finish()
    }
}

/// `Ω = alphabet^elements` with the causet it lives on.
#[derive(Clone, Debug)]
pub struct HistorySpace {
    causet: Causet,
    alphabet: usize,
    size: usize,
    strides: Vec<usize>,
    /// `value_events[s][v]`: histories with value `v` at element `s`.
    value_events: Vec<Vec<Event>>,
}

impl HistorySpace {
    pub fn new(causet: Causet, alphabet: usize) -> Result<Self> {
        if !(2..=36).contains(&alphabet) {
            return Err(Error::InvalidAlphabet(alphabet));
        }
        let n = causet.len();
        let too_large = || Error::SpaceTooLarge { alphabet, elements: n };
        let mut size = 1usize;
        let mut strides = Vec::with_capacity(n);
        for _ in 0..n {
            strides.push(size);
            size = size.checked_mul(alphabet).ok_or_else(too_large)?;
            if size > MAX_HISTORIES {
                return Err(too_large());
            }
        }
        let mut value_events = vec![vec![Event::EMPTY; alphabet]; n];
        for h in 0..size {
            for (s, &stride) in strides.iter().enumerate() {
                let v = (h / stride) % alphabet;
                value_events[s][v].0 |= 1u128 << h;
            }
        }
        Ok(HistorySpace { causet, alphabet, size, strides, value_events })
    }

    pub fn causet(&self) -> &Causet {
        &self.causet
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Number of histories.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn omega(&self) -> Event {
        if self.size == 128 {
            Event(u128::MAX)
        } else {
            Event((1u128 << self.size) - 1)
        }
    }

    pub fn complement(&self, e: Event) -> Event {
        Event(self.omega().0 & !e.0)
    }

    pub fn check(&self, e: Event) -> Result<()> {
        if e.is_subset(self.omega()) {
            Ok(())
        } else {
            Err(Error::ForeignEvent)
        }
    }

    /// Value of history `h` at element `s`.
    pub fn value(&self, h: usize, s: usize) -> usize {
        (h / self.strides[s]) % self.alphabet
    }

    /// `{h : h(s) = v}`.
    pub fn value_event(&self, s: usize, v: usize) -> Event {
        self.value_events[s][v]
    }

    /// Cylinder fixing the given `(element, value)` pairs.
    pub fn cylinder(&self, fixed: &[(usize, usize)]) -> Result<Event> {
        let mut e = self.omega();
        for &(s, v) in fixed {
            if s >= self.causet.len() {
                return Err(Error::ForeignRegion { elements: self.causet.len() });
            }
            if v >= self.alphabet {
                return Err(Error::Format(format!(
                    "value {v} outside alphabet of size {}",
                    self.alphabet
                )));
            }
            e = e.intersection(self.value_events[s][v]);
        }
        Ok(e)
    }

    /// The constant histories: every element carries the same value.
    pub fn diagonal(&self) -> Event {
        (0..self.alphabet).fold(Event::EMPTY, |acc, v| {
            let fixed: Vec<(usize, usize)> = (0..self.causet.len()).map(|s| (s, v)).collect();
            acc.union(self.cylinder(&fixed).expect("in range"))
        })
    }

    /// Index of the cell of `r`'s cylinder partition that contains `h`
    /// (mixed radix over the members of `r`, lowest element first).
    pub fn cell_index(&self, h: usize, r: Region) -> usize {
        let mut idx = 0;
        let mut scale = 1;
        for s in r.iter() {
            idx += self.value(h, s) * scale;
            scale *= self.alphabet;
        }
        idx
    }

    /// Number of cylinder cells of `r`, saturating.
    pub fn cell_count(&self, r: Region) -> usize {
        self.alphabet.saturating_pow(r.len() as u32)
    }

    /// The cylinder partition of `r`, in [`Self::cell_index`] order. For the
    /// empty region this is `[Ω]`.
    pub fn cylinders(&self, r: Region) -> Vec<Event> {
        let mut cells = vec![Event::EMPTY; self.cell_count(r)];
        for h in 0..self.size {
            cells[self.cell_index(h, r)].0 |= 1u128 << h;
        }
        cells
    }

    /// History key: one value digit per element, in element order.
    pub fn history_key(&self, h: usize) -> String {
        (0..self.causet.len())
            .map(|s| std::char::from_digit(self.value(h, s) as u32, 36).expect("alphabet ≤ 36"))
            .collect()
    }

    pub fn parse_history_key(&self, key: &str) -> Result<usize> {
        let n = self.causet.len();
        let digits: Vec<char> = key.chars().collect();
        if digits.len() != n {
            return Err(Error::Format(format!(
                "history key `{key}` must have {n} digits"
            )));
        }
        let mut h = 0;
        for (s, c) in digits.into_iter().enumerate() {
            let v = c
                .to_digit(36)
                .filter(|&v| (v as usize) < self.alphabet)
                .ok_or_else(|| Error::Format(format!("bad value `{c}` in history key `{key}`")))?;
            h += v as usize * self.strides[s];
        }
        Ok(h)
    }

    pub fn event_from_histories<I: IntoIterator<Item = usize>>(&self, histories: I) -> Result<Event> {
        let mut e = Event::EMPTY;
        for h in histories {
            if h >= self.size {
                return Err(Error::ForeignEvent);
            }
            e.0 |= 1u128 << h;
        }
        Ok(e)
    }

    /// Every event of the space, when the space is small enough to list.
    pub fn all_events(&self) -> Result<impl Iterator<Item = Event>> {
        if self.size > EXHAUSTIVE_HISTORIES {
            return Err(Error::CapExceeded(format!(
                "enumerating all events needs at most {EXHAUSTIVE_HISTORIES} histories, space has {}",
                self.size
            )));
        }
        Ok((0u128..(1u128 << self.size)).map(Event))
    }
}

/// Dependency set of `e`: the canonical least domain of decidability.
pub fn canonical_dom(space: &HistorySpace, e: Event) -> Region {
    let mut dom = Region::EMPTY;
    for s in 0..space.causet.len() {
        let stride = space.strides[s];
        let events = &space.value_events[s];
        'values: for v in 0..space.alphabet {
            let slice = e.0 & events[v].0;
            for (w, other) in events.iter().enumerate().skip(v + 1) {
                let shifted = slice << ((w - v) * stride);
                if shifted != e.0 & other.0 {
                    dom = dom.union(Region::singleton(s));
                    break 'values;
                }
            }
        }
    }
    dom
}

/// Assignment of domains to events.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum DomMap {
    /// The dependency-set map [`canonical_dom`].
    #[default]
    Canonical,
    /// Listed events take the given domains; all others fall back to
    /// [`canonical_dom`].
    Overrides(BTreeMap<Event, Region>),
}

impl DomMap {
    pub fn dom(&self, space: &HistorySpace, e: Event) -> Region {
        match self {
            DomMap::Canonical => canonical_dom(space, e),
            DomMap::Overrides(map) => map.get(&e).copied().unwrap_or_else(|| canonical_dom(space, e)),
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            DomMap::Canonical => true,
            DomMap::Overrides(map) => map.is_empty(),
        }
    }

    pub fn overridden_events(&self) -> Vec<Event> {
        match self {
            DomMap::Canonical => Vec::new(),
            DomMap::Overrides(map) => map.keys().copied().collect(),
        }
    }
}

/// `Γ(r) = {X : dom(X) ⊆ r}`.
///
/// For the canonical map these are exactly the unions of `r`'s cylinders,
/// listed in order of the bitmask over cylinder cells; otherwise every event of
/// the space is filtered.
pub fn gamma(space: &HistorySpace, dom: &DomMap, r: Region) -> Result<Vec<Event>> {
    space.causet.check(r)?;
    if dom.is_canonical() {
        let atoms = space.cylinders(r);
        if atoms.len() > MAX_GAMMA_ATOMS {
            return Err(Error::CapExceeded(format!(
                "Γ of a region with {} cylinder cells has 2^{} events",
                atoms.len(),
                atoms.len()
            )));
        }
        Ok(unions_of(&atoms))
    } else {
        gamma_exhaustive(space, dom, r)
    }
}

/// `Γ(r)` by filtering every event of the space, in increasing bit order.
pub fn gamma_exhaustive(space: &HistorySpace, dom: &DomMap, r: Region) -> Result<Vec<Event>> {
    space.causet.check(r)?;
    Ok(space
        .all_events()?
        .filter(|&e| dom.dom(space, e).is_subset(r))
        .collect())
}

/// All unions of the given disjoint atoms, indexed by the bitmask of atoms used.
pub fn unions_of(atoms: &[Event]) -> Vec<Event> {
    let mut out = vec![Event::EMPTY; 1usize << atoms.len()];
    for mask in 1..out.len() {
        let low = mask.trailing_zeros() as usize;
        out[mask] = out[mask & (mask - 1)].union(atoms[low]);
    }
    out
}

/// `Φ(r)`: nonempty events `F` with `dom(F) ⊆ r` such that every `X ∈ Γ(r)`
/// contains `F` or is disjoint from it.
///
/// For the canonical map this is the cylinder partition of `r`; otherwise the
/// definition is evaluated over the exhaustive `Γ(r)`.
pub fn full_specifications(space: &HistorySpace, dom: &DomMap, r: Region) -> Result<Vec<Event>> {
    space.causet.check(r)?;
    if dom.is_canonical() {
        Ok(space.cylinders(r))
    } else {
        full_specifications_exhaustive(space, dom, r)
    }
}

/// `Φ(r)` evaluated literally over every event, in increasing bit order.
pub fn full_specifications_exhaustive(
    space: &HistorySpace,
    dom: &DomMap,
    r: Region,
) -> Result<Vec<Event>> {
    let decidable = gamma_exhaustive(space, dom, r)?;
    let classes = separation_classes(space, &decidable);
    Ok(decidable
        .into_iter()
        .filter(|&f| !f.is_empty() && within_one_class(&classes, f))
        .collect())
}

/// Classes of histories that no event in `family` tells apart, as a class id
/// per history. Atoms of the Boolean algebra the family generates.
pub fn separation_classes(space: &HistorySpace, family: &[Event]) -> Vec<u32> {
    let mut class = vec![0u32; space.len()];
    let mut classes = 1usize;
    let mut renumber = vec![u32::MAX; 2 * space.len().max(1)];
    for &x in family {
        renumber[..2 * classes].fill(u32::MAX);
        let mut next = 0u32;
        for (h, c) in class.iter_mut().enumerate() {
            let key = 2 * *c as usize + usize::from(x.contains(h));
            if renumber[key] == u32::MAX {
                renumber[key] = next;
                next += 1;
            }
            *c = renumber[key];
        }
        classes = next as usize;
    }
    class
}

fn within_one_class(classes: &[u32], e: Event) -> bool {
    let mut ids = e.histories().map(|h| classes[h]);
    match ids.next() {
        None => true,
        Some(first) => ids.all(|c| c == first),
    }
}

/// Checks that `cells` are nonempty, pairwise disjoint and cover `Ω`.
pub fn check_partition(space: &HistorySpace, cells: &[Event]) -> Result<()> {
    let mut covered = Event::EMPTY;
    for (i, &cell) in cells.iter().enumerate() {
        space.check(cell)?;
        if cell.is_empty() {
            return Err(Error::NotAPartition(format!("cell {i} is empty")));
        }
        if !cell.is_disjoint(covered) {
            return Err(Error::NotAPartition(format!("cell {i} overlaps an earlier cell")));
        }
        covered = covered.union(cell);
    }
    if covered != space.omega() {
        return Err(Error::NotAPartition("cells do not cover every history".into()));
    }
    Ok(())
}

/// Intersects full specifications of pairwise disjoint regions and checks the
/// result is a full specification of their union.
pub fn compose_full_specs(
    space: &HistorySpace,
    dom: &DomMap,
    parts: &[(Region, Event)],
) -> Result<Event> {
    let mut union = Region::EMPTY;
    let mut composed = space.omega();
    for (i, &(region, spec)) in parts.iter().enumerate() {
        space.causet.check(region)?;
        space.check(spec)?;
        if !region.is_disjoint(union) {
            return Err(Error::NotDisjoint);
        }
        if !full_specifications(space, dom, region)?.contains(&spec) {
            return Err(Error::NotFullSpec(format!("part {i}")));
        }
        union = union.union(region);
        composed = composed.intersection(spec);
    }
    if composed.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    if !full_specifications(space, dom, union)?.contains(&composed) {
        return Err(Error::NotFullSpec("intersection over the union of the regions".into()));
    }
    Ok(composed)
}

/// Whether `Φ(a ⊔ b) = {X ∩ Y : X ∈ Φ(a), Y ∈ Φ(b)}` as sets (empty
/// intersections dropped).
pub fn composition_holds(
    space: &HistorySpace,
    dom: &DomMap,
    a: Region,
    b: Region,
    exhaustive: bool,
) -> Result<bool> {
    if !a.is_disjoint(b) {
        return Err(Error::NotDisjoint);
    }
    let phi = |r| {
        if exhaustive {
            full_specifications_exhaustive(space, dom, r)
        } else {
            full_specifications(space, dom, r)
        }
    };
    let whole: BTreeSet<Event> = phi(a.union(b))?.into_iter().collect();
    let fa = phi(a)?;
    let fb = phi(b)?;
    let composed: BTreeSet<Event> = fa
        .iter()
        .flat_map(|&x| fb.iter().map(move |&y| x.intersection(y)))
        .filter(|e| !e.is_empty())
        .collect();
    Ok(whole == composed)
}
