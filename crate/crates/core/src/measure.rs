//! Probability measures on a history space, correlation, common causes and
//! common-cause systems.
//!
//! Conditioning on a null event is undefined. Wherever a screening condition
//! would condition on one, [`ZeroScreener::Vacuous`] treats the condition as
//! met and [`ZeroScreener::Strict`] reports it.

use std::fmt;

use crate::causet::Region;
use crate::error::{Error, Result};
use crate::histories::{check_partition, full_specifications, DomMap, Event, HistorySpace};
use crate::scalar::Probability;

/// Largest space for which every set partition is searched.
pub const ALL_PARTITIONS_CAP: usize = 8;

/// Weight per history, non-negative and summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureTable<P> {
    weights: Vec<P>,
}

impl<P: Probability> MeasureTable<P> {
    pub fn new(space: &HistorySpace, weights: Vec<P>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} weights for {} histories",
                weights.len(),
                space.len()
            )));
        }
        if let Some(h) = weights.iter().position(|w| *w < P::zero()) {
            return Err(Error::InvalidMeasure(format!("negative weight on history {h}")));
        }
        let total = weights.iter().fold(P::zero(), |acc, w| acc + w.clone());
        if !total.is_unit_total() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(MeasureTable { weights })
    }

    /// Scales non-negative weights so they sum to one.
    pub fn normalized(space: &HistorySpace, weights: Vec<P>) -> Result<Self> {
        let total = weights.iter().fold(P::zero(), |acc, w| acc + w.clone());
        if total.is_zero() {
            return Err(Error::InvalidMeasure("all weights are zero".into()));
        }
        let scaled = weights.into_iter().map(|w| w / total.clone()).collect();
        Self::new(space, scaled)
    }

    pub fn uniform(space: &HistorySpace) -> Self {
        let w = P::from_ratio(1, space.len() as u64);
        MeasureTable { weights: vec![w; space.len()] }
    }

    /// Uniform on `support`.
    pub fn uniform_on(space: &HistorySpace, support: Event) -> Result<Self> {
        space.check(support)?;
        if support.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        let w = P::from_ratio(1, support.len() as u64);
        let weights = (0..space.len())
            .map(|h| if support.contains(h) { w.clone() } else { P::zero() })
            .collect();
        Ok(MeasureTable { weights })
    }

    /// Uniform on the constant histories: all elements perfectly correlated.
    pub fn diagonal(space: &HistorySpace) -> Self {
        Self::uniform_on(space, space.diagonal()).expect("diagonal is nonempty")
    }

    pub fn weights(&self) -> &[P] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn omega(&self) -> Event {
        if self.weights.len() == 128 {
            Event::from_bits(u128::MAX)
        } else {
            Event::from_bits((1u128 << self.weights.len()) - 1)
        }
    }

    fn complement(&self, e: Event) -> Event {
        self.omega().difference(e)
    }

    pub fn prob(&self, e: Event) -> P {
        let mut total = P::zero();
        for h in e.histories() {
            if let Some(w) = self.weights.get(h) {
                total += w;
            }
        }
        total
    }

    pub fn cond_prob(&self, e: Event, given: Event) -> Result<P> {
        let denominator = self.prob(given);
        if denominator.is_zero() {
            return Err(Error::ZeroCondition);
        }
        Ok(self.prob(e.intersection(given)) / denominator)
    }

    /// Both sides of `μ(A∩B|C) = μ(A|C)μ(B|C)`.
    pub fn screening_sides(&self, a: Event, b: Event, c: Event) -> Result<(P, P)> {
        let lhs = self.cond_prob(a.intersection(b), c)?;
        let rhs = self.cond_prob(a, c)? * self.cond_prob(b, c)?;
        Ok((lhs, rhs))
    }

    /// `μ(A∩B|C) = μ(A|C)μ(B|C)`, or `None` when `μ(C) = 0`.
    pub fn screens_off(&self, a: Event, b: Event, c: Event) -> Option<bool> {
        let mc = self.prob(c);
        if mc.is_zero() {
            return None;
        }
        let joint = self.prob(a.intersection(b).intersection(c));
        let pa = self.prob(a.intersection(c));
        let pb = self.prob(b.intersection(c));
        Some(joint.mul_ref(&mc) == pa.mul_ref(&pb))
    }
}

pub fn prob<P: Probability>(m: &MeasureTable<P>, e: Event) -> P {
    m.prob(e)
}

pub fn cond_prob<P: Probability>(m: &MeasureTable<P>, e: Event, given: Event) -> Result<P> {
    m.cond_prob(e, given)
}

/// Strict positive correlation `μ(A∩B) > μ(A)μ(B)`.
pub fn is_correlated<P: Probability>(m: &MeasureTable<P>, a: Event, b: Event) -> bool {
    m.prob(a.intersection(b)) > m.prob(a) * m.prob(b)
}

/// Form of the statistical-relevance conditions of a single common cause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Relevance {
    /// `μ(A∩C) > μ(A∩Cᶜ)`.
    #[default]
    Printed,
    /// `μ(A|C) > μ(A|Cᶜ)`.
    Conditional,
}

/// Treatment of screening conditions on null events.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroScreener {
    #[default]
    Vacuous,
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ScreeningOptions {
    pub relevance: Relevance,
    pub zero: ZeroScreener,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    NotCorrelated,
    ScreenOnC,
    ScreenOnComplement,
    RelevanceA,
    RelevanceB,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::NotCorrelated => "not-correlated",
            Condition::ScreenOnC => "screen-on-C",
            Condition::ScreenOnComplement => "screen-on-C^c",
            Condition::RelevanceA => "relevance-A",
            Condition::RelevanceB => "relevance-B",
        })
    }
}

/// A failed condition with both sides of its (in)equation. Sides are `None`
/// when the condition conditions on a null event in strict mode.
#[derive(Clone, Debug, PartialEq)]
pub struct FailedCondition<P> {
    pub condition: Condition,
    pub lhs: Option<P>,
    pub rhs: Option<P>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommonCauseVerdict<P> {
    pub qualifies: bool,
    pub failed: Vec<FailedCondition<P>>,
    /// Screening and relevance hold although the pair is not correlated.
    pub reichenbach_anomaly: bool,
}

/// Checks the four conditions making `c` a common cause of the correlation of
/// `a` and `b`, plus the correlation itself.
pub fn is_common_cause<P: Probability>(
    m: &MeasureTable<P>,
    a: Event,
    b: Event,
    c: Event,
    options: ScreeningOptions,
) -> CommonCauseVerdict<P> {
    let mut failed = Vec::new();
    let joint = m.prob(a.intersection(b));
    let product = m.prob(a) * m.prob(b);
    let correlated = joint > product;
    if !correlated {
        failed.push(FailedCondition {
            condition: Condition::NotCorrelated,
            lhs: Some(joint),
            rhs: Some(product),
        });
    }
    let cc = m.complement(c);
    for (screen, condition) in [(c, Condition::ScreenOnC), (cc, Condition::ScreenOnComplement)] {
        match m.screening_sides(a, b, screen) {
            Ok((lhs, rhs)) => {
                if lhs != rhs {
                    failed.push(FailedCondition { condition, lhs: Some(lhs), rhs: Some(rhs) });
                }
            }
            Err(_) => {
                if options.zero == ZeroScreener::Strict {
                    failed.push(FailedCondition { condition, lhs: None, rhs: None });
                }
            }
        }
    }
    for (event, condition) in [(a, Condition::RelevanceA), (b, Condition::RelevanceB)] {
        let sides = match options.relevance {
            Relevance::Printed => Some((m.prob(event.intersection(c)), m.prob(event.intersection(cc)))),
            Relevance::Conditional => match (m.cond_prob(event, c), m.cond_prob(event, cc)) {
                (Ok(l), Ok(r)) => Some((l, r)),
                _ => None,
            },
        };
        match sides {
            Some((lhs, rhs)) if lhs > rhs => {}
            Some((lhs, rhs)) => failed.push(FailedCondition { condition, lhs: Some(lhs), rhs: Some(rhs) }),
            None => failed.push(FailedCondition { condition, lhs: None, rhs: None }),
        }
    }
    let reichenbach_anomaly = !correlated && failed.len() == 1;
    CommonCauseVerdict { qualifies: failed.is_empty(), failed, reichenbach_anomaly }
}

/// One reason a partition fails to be a common-cause system.
#[derive(Clone, Debug, PartialEq)]
pub enum CcsFailure<P> {
    NotCorrelated { joint: P, product: P },
    Screening { cell: usize, lhs: P, rhs: P },
    NullCell { cell: usize },
    Relevance { cell_i: usize, cell_j: usize, product: P },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CcsVerdict<P> {
    pub qualifies: bool,
    pub correlated: bool,
    /// First failure of each kind, in the order correlation, screening,
    /// relevance.
    pub failures: Vec<CcsFailure<P>>,
}

/// Checks that `partition` screens off the pair in every cell and is
/// statistically relevant across every ordered pair of positive cells.
pub fn is_ccs<P: Probability>(
    space: &HistorySpace,
    m: &MeasureTable<P>,
    a: Event,
    b: Event,
    partition: &[Event],
    zero: ZeroScreener,
) -> Result<CcsVerdict<P>> {
    check_partition(space, partition)?;
    let mut failures = Vec::new();
    let joint = m.prob(a.intersection(b));
    let product = m.prob(a) * m.prob(b);
    let correlated = joint > product;
    if !correlated {
        failures.push(CcsFailure::NotCorrelated { joint, product });
    }

    let mut conditionals: Vec<Option<(P, P)>> = Vec::with_capacity(partition.len());
    let mut screening_failed = false;
    for (i, &cell) in partition.iter().enumerate() {
        match m.screening_sides(a, b, cell) {
            Ok((lhs, rhs)) => {
                if lhs != rhs && !screening_failed {
                    screening_failed = true;
                    failures.push(CcsFailure::Screening { cell: i, lhs, rhs });
                }
                conditionals.push(Some((m.cond_prob(a, cell)?, m.cond_prob(b, cell)?)));
            }
            Err(_) => {
                if zero == ZeroScreener::Strict && !screening_failed {
                    screening_failed = true;
                    failures.push(CcsFailure::NullCell { cell: i });
                }
                conditionals.push(None);
            }
        }
    }

    'pairs: for (i, ci) in conditionals.iter().enumerate() {
        let Some((ai, bi)) = ci else { continue };
        for (j, cj) in conditionals.iter().enumerate() {
            if i == j {
                continue;
            }
            let Some((aj, bj)) = cj else { continue };
            let value = (ai.clone() - aj.clone()) * (bi.clone() - bj.clone());
            if value <= P::zero() {
                failures.push(CcsFailure::Relevance { cell_i: i, cell_j: j, product: value });
                break 'pairs;
            }
        }
    }
    Ok(CcsVerdict { qualifies: failures.is_empty(), correlated, failures })
}

/// Candidate partitions searched by [`find_ccs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcsSearch {
    /// Every set partition of `Ω`; needs `|Ω| ≤ ALL_PARTITIONS_CAP`.
    AllPartitions,
    /// Full-specification partitions `Φ(r)` of every region `r`.
    Regions,
}

/// All qualifying partitions with at most `max_size` cells.
///
/// All-partitions mode lists partitions in restricted-growth-string order;
/// region mode lists them by region bitmask, dropping repeats.
pub fn find_ccs<P: Probability>(
    space: &HistorySpace,
    dom: &DomMap,
    m: &MeasureTable<P>,
    a: Event,
    b: Event,
    max_size: usize,
    search: CcsSearch,
) -> Result<Vec<Vec<Event>>> {
    if !is_correlated(m, a, b) {
        return Ok(Vec::new());
    }
    let candidates: Vec<Vec<Event>> = match search {
        CcsSearch::AllPartitions => {
            if space.len() > ALL_PARTITIONS_CAP {
                return Err(Error::CapExceeded(format!(
                    "all-partitions search needs at most {ALL_PARTITIONS_CAP} histories, space has {}; use region mode",
                    space.len()
                )));
            }
            set_partitions(space.len(), max_size)
                .into_iter()
                .map(|blocks| {
                    blocks
                        .into_iter()
                        .map(|hs| space.event_from_histories(hs).expect("in range"))
                        .collect()
                })
                .collect()
        }
        CcsSearch::Regions => {
            let mut seen = std::collections::BTreeSet::new();
            let mut out = Vec::new();
            for r in space.causet().full_region().subsets() {
                let cells = full_specifications(space, dom, r)?;
                if cells.len() <= max_size && check_partition(space, &cells).is_ok() {
                    let mut key = cells.clone();
                    key.sort();
                    if seen.insert(key) {
                        out.push(cells);
                    }
                }
            }
            out
        }
    };
    let mut found = Vec::new();
    for partition in candidates {
        if is_ccs(space, m, a, b, &partition, ZeroScreener::Vacuous)?.qualifies {
            found.push(partition);
        }
    }
    Ok(found)
}

/// Set partitions of `0..n` with at most `max_blocks` blocks, in
/// restricted-growth-string order.
pub fn set_partitions(n: usize, max_blocks: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if n == 0 || max_blocks == 0 {
        return out;
    }
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        if blocks <= max_blocks {
            let mut parts = vec![Vec::new(); blocks];
            for (i, &b) in rgs.iter().enumerate() {
                parts[b].push(i);
            }
            out.push(parts);
        }
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max && rgs[i] + 1 < max_blocks {
                rgs[i] += 1;
                for x in &mut rgs[i + 1..] {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Cylinder partition of a region, handy for building CCS candidates.
pub fn region_partition(space: &HistorySpace, r: Region) -> Vec<Event> {
    space.cylinders(r)
}
