//! The four screening-off principles, their checkers and the per-model
//! implication matrix.
//!
//! Region pairs are unordered: the screening condition is symmetric in the two
//! events, so `(𝒜, ℬ)` and `(ℬ, 𝒜)` give the same verdict. Screeners with
//! `μ(C) = 0` are vacuous unless [`ZeroScreener::Strict`] is selected.

mod engine;
mod replicate;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::causet::{Causet, Region};
use crate::error::{Error, Result};
use crate::histories::{check_dom_axioms, full_specifications, AxiomReport, AxiomScope, DomMap, Event, HistorySpace};
use crate::measure::{MeasureTable, ZeroScreener};
use crate::scalar::Probability;

pub use replicate::{
    gap_closure_check, replicate_so1_to_so2, GapReport, ReplicationReport, ReplicationWitness, StepReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Principle {
    So1,
    So2,
    FinSo1,
    FinSo2,
}

impl Principle {
    pub const ALL: [Principle; 4] = [Principle::So1, Principle::So2, Principle::FinSo1, Principle::FinSo2];

    pub fn id(self) -> &'static str {
        match self {
            Principle::So1 => "SO1",
            Principle::So2 => "SO2",
            Principle::FinSo1 => "FIN-SO1",
            Principle::FinSo2 => "FIN-SO2",
        }
    }

    /// Accepts `so1`, `SO2`, `fin-so1`, `FIN_SO2` and the like.
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_uppercase().replace('_', "-").as_str() {
            "SO1" => Some(Principle::So1),
            "SO2" => Some(Principle::So2),
            "FIN-SO1" => Some(Principle::FinSo1),
            "FIN-SO2" => Some(Principle::FinSo2),
            _ => None,
        }
    }

    /// Restricted to causally finite regions.
    pub fn is_finite(self) -> bool {
        matches!(self, Principle::FinSo1 | Principle::FinSo2)
    }

    pub fn past(self) -> Past {
        match self {
            Principle::So1 | Principle::FinSo1 => Past::Mutual,
            Principle::So2 | Principle::FinSo2 => Past::TruncatedJoint,
        }
    }

    /// The unrestricted principle with the same screening region.
    pub fn infinite(self) -> Principle {
        match self {
            Principle::FinSo1 => Principle::So1,
            Principle::FinSo2 => Principle::So2,
            p => p,
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Region whose full specifications act as screeners.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Past {
    Mutual,
    TruncatedJoint,
}

impl Past {
    pub fn of(self, causet: &Causet, a: Region, b: Region) -> Region {
        match self {
            Past::Mutual => causet.mutual_past_of(a, b),
            Past::TruncatedJoint => causet.truncated_joint_past_of(a, b),
        }
    }
}

/// Sweep limits. Region pairs beyond them are skipped and the verdict marked
/// capped, or rejected in strict mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_region_size: usize,
    /// Largest `|Γ(r)|` swept per region.
    pub max_algebra: usize,
    pub max_witnesses: usize,
    pub strict: bool,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_region_size: 3, max_algebra: 256, max_witnesses: 32, strict: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    /// Atom tables for the canonical map, literal sweep otherwise.
    #[default]
    Auto,
    /// Literal sweep over `Γ` and `Φ` computed by filtering every event.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CheckOptions {
    pub caps: Caps,
    pub zero: ZeroScreener,
    /// Check even when the domain map fails its axioms.
    pub force: bool,
    pub engine: Engine,
}

/// Causet, history space, domain map and measure, with the axiom report of the
/// domain map.
#[derive(Clone, Debug)]
pub struct Model<P> {
    space: HistorySpace,
    dom: DomMap,
    measure: MeasureTable<P>,
    axioms: Arc<AxiomReport>,
}

impl<P: Probability> Model<P> {
    pub fn new(space: HistorySpace, dom: DomMap, measure: MeasureTable<P>) -> Result<Self> {
        let axioms = check_dom_axioms(&space, &dom, &AxiomScope::default_for(&space, &dom))?;
        Self::with_axioms(space, dom, measure, Arc::new(axioms))
    }

    /// Reuses an axiom report computed for the same space and domain map.
    pub fn with_axioms(
        space: HistorySpace,
        dom: DomMap,
        measure: MeasureTable<P>,
        axioms: Arc<AxiomReport>,
    ) -> Result<Self> {
        if measure.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "measure has {} weights, space has {} histories",
                measure.len(),
                space.len()
            )));
        }
        if let DomMap::Overrides(map) = &dom {
            for (&e, &r) in map {
                space.check(e)?;
                space.causet().check(r)?;
            }
        }
        Ok(Model { space, dom, measure, axioms })
    }

    /// Canonical domains and the uniform measure.
    pub fn uniform(causet: Causet, alphabet: usize) -> Result<Self> {
        let space = HistorySpace::new(causet, alphabet)?;
        let measure = MeasureTable::uniform(&space);
        Self::new(space, DomMap::Canonical, measure)
    }

    pub fn space(&self) -> &HistorySpace {
        &self.space
    }

    pub fn causet(&self) -> &Causet {
        self.space.causet()
    }

    pub fn dom(&self) -> &DomMap {
        &self.dom
    }

    pub fn measure(&self) -> &MeasureTable<P> {
        &self.measure
    }

    pub fn axioms(&self) -> &AxiomReport {
        &self.axioms
    }

    pub fn shared_axioms(&self) -> Arc<AxiomReport> {
        Arc::clone(&self.axioms)
    }

    pub fn with_measure(&self, measure: MeasureTable<P>) -> Result<Self> {
        Self::with_axioms(self.space.clone(), self.dom.clone(), measure, self.shared_axioms())
    }

    fn axiom_gate(&self, force: bool) -> Result<Option<String>> {
        if self.axioms.all_passed() {
            return Ok(None);
        }
        let failed = self.axioms.failed_axioms();
        if force {
            Ok(Some(format!("domain map fails axioms {failed:?}; results are unreliable")))
        } else {
            Err(Error::from(&*self.axioms))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    /// Region pairs swept.
    pub region_pairs: u64,
    /// Region pairs skipped by the caps.
    pub skipped_pairs: u64,
    pub event_pairs: u64,
    pub screeners: u64,
    /// `(A, B, C)` combinations evaluated.
    pub triples: u64,
    /// Screeners of probability zero.
    pub null_screeners: u64,
}

impl Counts {
    fn add(&mut self, other: &Counts) {
        self.region_pairs += other.region_pairs;
        self.skipped_pairs += other.skipped_pairs;
        self.event_pairs += other.event_pairs;
        self.screeners += other.screeners;
        self.triples += other.triples;
        self.null_screeners += other.null_screeners;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Failure<P> {
    /// `μ(A∩B|C) = lhs ≠ rhs = μ(A|C)μ(B|C)`.
    Unscreened { lhs: P, rhs: P },
    /// `μ(C) = 0` under the strict zero-screener reading.
    NullScreener,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness<P> {
    pub region_a: Region,
    pub region_b: Region,
    pub a: Event,
    pub b: Event,
    pub screener: Event,
    pub failure: Failure<P>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<P> {
    pub principle: Principle,
    pub satisfied: bool,
    /// Some region pairs were skipped by the caps.
    pub capped: bool,
    pub counts: Counts,
    /// Failing `(A, B, C)` combinations, including those beyond the witness
    /// limit.
    pub violations: u64,
    pub witnesses: Vec<Witness<P>>,
    pub axiom_warning: Option<String>,
}

impl<P> Verdict<P> {
    /// Satisfied without any region pair to check.
    pub fn vacuous(&self) -> bool {
        self.satisfied && self.counts.region_pairs == 0
    }
}

/// Result of sweeping one region pair.
#[derive(Clone, Debug)]
pub(crate) struct PairOutcome<P> {
    pub(crate) counts: Counts,
    pub(crate) violations: u64,
    pub(crate) witnesses: Vec<Witness<P>>,
}

/// Spacelike region pairs quantified over by `principle`.
pub fn region_pairs(causet: &Causet, principle: Principle) -> Vec<(Region, Region)> {
    let pairs = causet.spacelike_pairs();
    if principle.is_finite() {
        pairs
            .into_iter()
            .filter(|&(a, b)| causet.causally_finite(a) && causet.causally_finite(b))
            .collect()
    } else {
        pairs
    }
}

pub(crate) fn sweep_pairs<P: Probability>(
    model: &Model<P>,
    past: Past,
    pairs: &[(Region, Region)],
    options: &CheckOptions,
) -> Result<Vec<PairOutcome<P>>> {
    let masses = P::masses(model.measure.weights());
    pairs
        .par_iter()
        .map(|&(a, b)| engine::sweep_pair(model, &masses, past, a, b, options))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn assemble<'a, P: Probability>(
    principle: Principle,
    outcomes: impl Iterator<Item = &'a PairOutcome<P>>,
    caps: &Caps,
    axiom_warning: Option<String>,
) -> Verdict<P> {
    let mut counts = Counts::default();
    let mut violations = 0;
    let mut witnesses = Vec::new();
    for outcome in outcomes {
        counts.add(&outcome.counts);
        violations += outcome.violations;
        let room = caps.max_witnesses.max(1).saturating_sub(witnesses.len());
        witnesses.extend(outcome.witnesses.iter().take(room).cloned());
    }
    Verdict {
        principle,
        satisfied: violations == 0,
        capped: counts.skipped_pairs > 0,
        counts,
        violations,
        witnesses,
        axiom_warning,
    }
}

/// Sweeps every admissible region pair, every `A ∈ Γ(𝒜)`, `B ∈ Γ(ℬ)` and every
/// screener in `Φ` of the principle's past, recording screening failures.
pub fn check_principle<P: Probability>(
    model: &Model<P>,
    principle: Principle,
    options: &CheckOptions,
) -> Result<Verdict<P>> {
    let warning = model.axiom_gate(options.force)?;
    let pairs = region_pairs(model.causet(), principle);
    let outcomes = sweep_pairs(model, principle.past(), &pairs, options)?;
    Ok(assemble(principle, outcomes.iter(), &options.caps, warning))
}

/// The four verdicts of one model.
#[derive(Clone, Debug, PartialEq)]
pub struct ImplicationMatrix<P> {
    /// In [`Principle::ALL`] order.
    pub verdicts: Vec<Verdict<P>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Implication {
    pub from: Principle,
    pub to: Principle,
    /// `from ⇒ to` holds in this model.
    pub holds: bool,
}

impl<P> ImplicationMatrix<P> {
    pub fn verdict(&self, principle: Principle) -> &Verdict<P> {
        &self.verdicts[Principle::ALL.iter().position(|&p| p == principle).expect("listed")]
    }

    pub fn holds(&self, principle: Principle) -> bool {
        self.verdict(principle).satisfied
    }

    /// `[SO1, SO2, FIN-SO1, FIN-SO2]`.
    pub fn signature(&self) -> [bool; 4] {
        Principle::ALL.map(|p| self.holds(p))
    }

    pub fn capped(&self) -> bool {
        self.verdicts.iter().any(|v| v.capped)
    }

    /// Material implication between every ordered pair of distinct principles.
    pub fn implications(&self) -> Vec<Implication> {
        let mut out = Vec::new();
        for from in Principle::ALL {
            for to in Principle::ALL {
                if from != to {
                    out.push(Implication { from, to, holds: !self.holds(from) || self.holds(to) });
                }
            }
        }
        out
    }

    /// Pairs `(p, q)` where `p` holds and `q` fails.
    pub fn refuted(&self) -> Vec<(Principle, Principle)> {
        self.implications().into_iter().filter(|i| !i.holds).map(|i| (i.from, i.to)).collect()
    }

    /// Compact rendering such as `SO1✗ SO2✗ FIN-SO1✓ FIN-SO2✓`.
    pub fn summary(&self) -> String {
        Principle::ALL
            .iter()
            .map(|&p| format!("{}{}", p.id(), if self.holds(p) { '✓' } else { '✗' }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Runs all four checks. The finite sweeps reuse the region-pair results of
/// the unrestricted ones, of which they are a subset.
///
/// `SO1 ⇒ FIN-SO1` and `SO2 ⇒ FIN-SO2` are asserted; a failure is a bug and
/// returns [`Error::InternalConsistency`].
pub fn implication_matrix<P: Probability>(model: &Model<P>, options: &CheckOptions) -> Result<ImplicationMatrix<P>> {
    let warning = model.axiom_gate(options.force)?;
    let causet = model.causet();
    let pairs = causet.spacelike_pairs();
    let finite: Vec<bool> = pairs
        .iter()
        .map(|&(a, b)| causet.causally_finite(a) && causet.causally_finite(b))
        .collect();
    let mut verdicts = Vec::with_capacity(4);
    for principle in [Principle::So1, Principle::So2] {
        let outcomes = sweep_pairs(model, principle.past(), &pairs, options)?;
        verdicts.push(assemble(principle, outcomes.iter(), &options.caps, warning.clone()));
        let fin = if principle == Principle::So1 { Principle::FinSo1 } else { Principle::FinSo2 };
        let restricted = outcomes.iter().zip(&finite).filter(|(_, &f)| f).map(|(o, _)| o);
        verdicts.push(assemble(fin, restricted, &options.caps, warning.clone()));
    }
    // reorder from [SO1, FIN-SO1, SO2, FIN-SO2]
    verdicts.swap(1, 2);
    let matrix = ImplicationMatrix { verdicts };
    for (inf, fin) in [(Principle::So1, Principle::FinSo1), (Principle::So2, Principle::FinSo2)] {
        if matrix.holds(inf) && !matrix.holds(fin) {
            return Err(Error::InternalConsistency(format!("{inf} holds but {fin} fails")));
        }
    }
    Ok(matrix)
}

/// Re-evaluates a witness from scratch: the regions are admissible for the
/// principle, the events and screener have the claimed domains, and the
/// reported failure reproduces exactly.
pub fn replay_witness<P: Probability>(model: &Model<P>, principle: Principle, witness: &Witness<P>) -> Result<bool> {
    let causet = model.causet();
    let space = model.space();
    let (ra, rb) = (witness.region_a, witness.region_b);
    causet.check(ra)?;
    causet.check(rb)?;
    for e in [witness.a, witness.b, witness.screener] {
        space.check(e)?;
    }
    if !causet.spacelike(ra, rb) || ra.is_empty() || rb.is_empty() {
        return Ok(false);
    }
    if principle.is_finite() && !(causet.causally_finite(ra) && causet.causally_finite(rb)) {
        return Ok(false);
    }
    if !model.dom.dom(space, witness.a).is_subset(ra) || !model.dom.dom(space, witness.b).is_subset(rb) {
        return Ok(false);
    }
    let past = principle.past().of(causet, ra, rb);
    if !full_specifications(space, &model.dom, past)?.contains(&witness.screener) {
        return Ok(false);
    }
    let m = &model.measure;
    Ok(match &witness.failure {
        Failure::NullScreener => m.prob(witness.screener).is_zero(),
        Failure::Unscreened { lhs, rhs } => match m.screening_sides(witness.a, witness.b, witness.screener) {
            Ok((l, r)) => l == *lhs && r == *rhs && l != r,
            Err(_) => false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causet::fixtures as cf;
    use crate::histories::fixtures::keys;
    use crate::Rational;
    use std::collections::BTreeMap;

    fn anti2_perf() -> Model<Rational> {
        let space = HistorySpace::new(cf::anti2(), 2).unwrap();
        let measure = MeasureTable::uniform_on(&space, keys(&space, &["00", "11"])).unwrap();
        Model::new(space, DomMap::Canonical, measure).unwrap()
    }

    #[test]
    fn principle_ids_round_trip() {
        for p in Principle::ALL {
            assert_eq!(Principle::parse(p.id()), Some(p));
            assert_eq!(Principle::parse(&p.id().to_lowercase()), Some(p));
        }
        assert_eq!(Principle::parse("fin_so2"), Some(Principle::FinSo2));
        assert_eq!(Principle::parse("so3"), None);
    }

    #[test]
    fn anti2_perf_separates_finite_from_infinite() {
        let model = anti2_perf();
        let options = CheckOptions::default();
        let so2 = check_principle(&model, Principle::So2, &options).unwrap();
        assert!(!so2.satisfied);
        let space = model.space();
        let x1 = space.value_event(0, 1);
        let y1 = space.value_event(1, 1);
        let target = so2
            .witnesses
            .iter()
            .find(|w| w.a == x1 && w.b == y1)
            .expect("witness for x=1, y=1");
        assert_eq!(target.region_a, Region::singleton(0));
        assert_eq!(target.region_b, Region::singleton(1));
        assert_eq!(target.screener, space.omega());
        assert_eq!(
            target.failure,
            Failure::Unscreened { lhs: Rational::from_ratio(1, 2), rhs: Rational::from_ratio(1, 4) }
        );
        let fin = check_principle(&model, Principle::FinSo2, &options).unwrap();
        assert!(fin.satisfied && fin.vacuous());

        let matrix = implication_matrix(&model, &options).unwrap();
        assert_eq!(matrix.signature(), [false, false, true, true]);
        assert_eq!(matrix.summary(), "SO1✗ SO2✗ FIN-SO1✓ FIN-SO2✓");
        assert!(matrix.refuted().contains(&(Principle::FinSo1, Principle::So1)));
        for v in &matrix.verdicts {
            assert_eq!(v, &check_principle(&model, v.principle, &options).unwrap());
            for w in &v.witnesses {
                assert!(replay_witness(&model, v.principle, w).unwrap());
            }
        }
    }

    #[test]
    fn violations_count_every_failing_triple() {
        let model = anti2_perf();
        let so1 = check_principle(&model, Principle::So1, &CheckOptions::default()).unwrap();
        // x-events {x=0},{x=1} against y-events {y=0},{y=1}
        assert_eq!(so1.violations, 4);
        assert_eq!(so1.counts.region_pairs, 1);
        assert_eq!(so1.counts.event_pairs, 16);
        assert_eq!(so1.counts.screeners, 1);
        assert_eq!(so1.counts.triples, 16);
    }

    #[test]
    fn diamond_uniform_satisfies_everything() {
        let model = Model::<Rational>::uniform(cf::diamond(), 2).unwrap();
        let matrix = implication_matrix(&model, &CheckOptions::default()).unwrap();
        assert_eq!(matrix.signature(), [true; 4]);
        assert!(!matrix.capped());
        assert!(matrix.verdicts.iter().all(|v| v.counts.region_pairs > 0 && v.witnesses.is_empty()));
    }

    #[test]
    fn chain_is_vacuous() {
        let space = HistorySpace::new(cf::chain2(), 2).unwrap();
        let measure = MeasureTable::uniform_on(&space, keys(&space, &["00", "11"])).unwrap();
        let model = Model::<Rational>::new(space, DomMap::Canonical, measure).unwrap();
        let matrix = implication_matrix(&model, &CheckOptions::default()).unwrap();
        assert_eq!(matrix.signature(), [true; 4]);
        assert!(matrix.verdicts.iter().all(|v| v.vacuous()));
    }

    #[test]
    fn engines_agree() {
        let space = HistorySpace::new(cf::w_causet(), 2).unwrap();
        let weights: Vec<Rational> = (1..=8).map(|k| Rational::from_ratio(k, 36)).collect();
        let measure = MeasureTable::new(&space, weights).unwrap();
        let model = Model::new(space, DomMap::Canonical, measure).unwrap();
        let fast = CheckOptions::default();
        let slow = CheckOptions { engine: Engine::Exhaustive, ..fast };
        for p in Principle::ALL {
            let a = check_principle(&model, p, &fast).unwrap();
            let b = check_principle(&model, p, &slow).unwrap();
            assert_eq!(a.satisfied, b.satisfied, "{p}");
            assert_eq!(a.violations, b.violations, "{p}");
            assert_eq!(a.counts, b.counts, "{p}");
            let mut wa: Vec<_> = a.witnesses.iter().map(|w| (w.region_a, w.region_b, w.a, w.b, w.screener)).collect();
            let mut wb: Vec<_> = b.witnesses.iter().map(|w| (w.region_a, w.region_b, w.a, w.b, w.screener)).collect();
            if a.violations as usize <= fast.caps.max_witnesses {
                wa.sort();
                wb.sort();
                assert_eq!(wa, wb, "{p}");
            }
        }
    }

    #[test]
    fn float_scalar_runs() {
        let space = HistorySpace::new(cf::anti2(), 2).unwrap();
        let model = Model::new(space.clone(), DomMap::Canonical, MeasureTable::<f64>::diagonal(&space)).unwrap();
        let matrix = implication_matrix(&model, &CheckOptions::default()).unwrap();
        assert_eq!(matrix.signature(), [false, false, true, true]);
    }

    #[test]
    fn strict_zero_screeners() {
        // W-causet q<a, b: SO1 screens on Φ(∅) = {Ω}; SO2 on Φ({q}).
        let space = HistorySpace::new(cf::w_causet(), 2).unwrap();
        let support = space.value_event(0, 0);
        let model = Model::<Rational>::new(space.clone(), DomMap::Canonical, MeasureTable::uniform_on(&space, support).unwrap()).unwrap();
        let vacuous = check_principle(&model, Principle::So2, &CheckOptions::default()).unwrap();
        assert!(vacuous.satisfied);
        assert!(vacuous.counts.null_screeners > 0);
        let strict = CheckOptions { zero: ZeroScreener::Strict, ..Default::default() };
        let v = check_principle(&model, Principle::So2, &strict).unwrap();
        assert!(!v.satisfied);
        assert!(v.witnesses.iter().all(|w| w.failure == Failure::NullScreener));
        assert!(replay_witness(&model, Principle::So2, &v.witnesses[0]).unwrap());
    }

    #[test]
    fn caps_mark_and_strict_rejects() {
        let model = Model::<Rational>::uniform(cf::w_causet(), 2).unwrap();
        let tight = CheckOptions { caps: Caps { max_region_size: 1, ..Caps::default() }, ..Default::default() };
        let v = check_principle(&model, Principle::So1, &tight).unwrap();
        assert!(v.capped && v.counts.skipped_pairs > 0);
        let strict = CheckOptions { caps: Caps { max_region_size: 1, strict: true, ..Caps::default() }, ..Default::default() };
        assert!(matches!(check_principle(&model, Principle::So1, &strict), Err(Error::CapExceeded(_))));
        let algebra = CheckOptions { caps: Caps { max_algebra: 4, ..Caps::default() }, ..Default::default() };
        assert!(check_principle(&model, Principle::So1, &algebra).unwrap().capped);
    }

    #[test]
    fn axiom_gate() {
        let space = HistorySpace::new(cf::anti2(), 2).unwrap();
        let a = space.value_event(0, 1);
        let dom = DomMap::Overrides(BTreeMap::from([(a, Region::from_indices([0, 1]))]));
        let model = Model::<Rational>::new(space.clone(), dom, MeasureTable::uniform(&space)).unwrap();
        assert!(matches!(
            check_principle(&model, Principle::So1, &CheckOptions::default()),
            Err(Error::AxiomViolation(_))
        ));
        let forced = CheckOptions { force: true, ..Default::default() };
        let v = check_principle(&model, Principle::So1, &forced).unwrap();
        assert!(v.axiom_warning.is_some());
    }

    #[test]
    fn tampered_witness_does_not_replay() {
        let model = anti2_perf();
        let v = check_principle(&model, Principle::So2, &CheckOptions::default()).unwrap();
        let mut w = v.witnesses[0].clone();
        w.failure = Failure::Unscreened { lhs: Rational::from_ratio(1, 3), rhs: Rational::from_ratio(1, 4) };
        assert!(!replay_witness(&model, Principle::So2, &w).unwrap());
        let mut w = v.witnesses[0].clone();
        w.region_a = Region::from_indices([0, 1]);
        assert!(!replay_witness(&model, Principle::So2, &w).unwrap());
    }
}
