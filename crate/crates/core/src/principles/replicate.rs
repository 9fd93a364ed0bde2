//! Step-by-step replay of the SO1 ⇒ SO2 argument on one region pair, and the
//! check of whether the screeners it produces exhaust `Φ(𝒫₂)`.

use super::engine::mass_of;
use super::{sweep_pairs, CheckOptions, Model, Past};
use crate::causet::{CrucialIdentity, Region};
use crate::error::{Error, Result};
use crate::histories::{full_specifications, gamma, DomMap, Event, HistorySpace};
use crate::measure::ZeroScreener;
use crate::scalar::{Mass, Probability};

#[derive(Clone, Debug, PartialEq)]
pub struct ReplicationWitness<P> {
    pub a: Event,
    pub b: Event,
    pub x: Event,
    pub y: Event,
    pub c: Event,
    /// For step 1, which of the four event pairs failed (0 to 3).
    pub pair: Option<usize>,
    pub lhs: Option<P>,
    pub rhs: Option<P>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepReport<P> {
    /// 1: the four pairs are screened by `C`. 2: the conditional factorization
    /// given `X∩Y∩C`. 3: `C∩X∩Y ∈ Φ(𝒫₂)`.
    pub step: u8,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<ReplicationWitness<P>>,
}

impl<P> StepReport<P> {
    fn new(step: u8) -> Self {
        StepReport { step, passed: true, checked: 0, failures: 0, witnesses: Vec::new() }
    }

    fn fail(&mut self, limit: usize, witness: impl FnOnce() -> ReplicationWitness<P>) {
        self.passed = false;
        self.failures += 1;
        if self.witnesses.len() < limit.max(1) {
            self.witnesses.push(witness());
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplicationReport<P> {
    pub region_a: Region,
    pub region_b: Region,
    pub identity: CrucialIdentity,
    /// SO1 holds on `(𝒜, ℬ)` and on `(𝒜∪𝒳, ℬ∪𝒴)` within the caps.
    pub applicable: bool,
    pub reason: Option<String>,
    pub steps: Vec<StepReport<P>>,
}

impl<P> ReplicationReport<P> {
    pub fn passed(&self) -> bool {
        self.applicable && self.steps.iter().all(|s| s.passed)
    }
}

/// Replays the argument for every `A ∈ Γ(𝒜)`, `B ∈ Γ(ℬ)`, `X ∈ Φ(𝒳)`,
/// `Y ∈ Φ(𝒴)` and `C ∈ Φ(𝒫₁)`.
///
/// Reported not applicable when SO1 fails on `(𝒜, ℬ)` or on the enlarged
/// pair, or when either sweep was cut short by the caps.
pub fn replicate_so1_to_so2<P: Probability>(
    model: &Model<P>,
    ra: Region,
    rb: Region,
    options: &CheckOptions,
) -> Result<ReplicationReport<P>> {
    let causet = model.causet();
    causet.check(ra)?;
    causet.check(rb)?;
    if !causet.spacelike(ra, rb) {
        return Err(Error::NotSpacelike);
    }
    let identity = causet.crucial_identity_of(ra, rb);
    let (fx, fy) = (identity.flank_a, identity.flank_b);
    let mut report = ReplicationReport {
        region_a: ra,
        region_b: rb,
        identity,
        applicable: false,
        reason: None,
        steps: Vec::new(),
    };
    let enlarged = (ra.union(fx), rb.union(fy));
    let mut pairs = vec![(ra, rb)];
    if enlarged != (ra, rb) {
        pairs.push(enlarged);
    }
    if !identity.enlarged_spacelike {
        report.reason = Some("enlarged regions are not space-like".into());
        return Ok(report);
    }
    let outcomes = sweep_pairs(model, Past::Mutual, &pairs, options)?;
    if outcomes.iter().any(|o| o.counts.skipped_pairs > 0) {
        report.reason = Some("SO1 on the enlarged regions exceeds the caps".into());
        return Ok(report);
    }
    if outcomes.iter().any(|o| o.violations > 0) {
        report.reason = Some("SO1 fails on these regions".into());
        return Ok(report);
    }
    report.applicable = true;

    let space = model.space();
    let dom = model.dom();
    let m = model.measure();
    let masses = P::masses(m.weights());
    let limit = options.caps.max_witnesses;
    let gamma_a = gamma(space, dom, ra)?;
    let gamma_b = gamma(space, dom, rb)?;
    let phi_x = full_specifications(space, dom, fx)?;
    let phi_y = full_specifications(space, dom, fy)?;
    let phi_p1 = full_specifications(space, dom, identity.mutual_past)?;
    let phi_p2 = full_specifications(space, dom, identity.truncated_joint_past)?;

    let screened = |e: Event, f: Event, c: Event| -> Option<bool> {
        let mc = mass_of(&masses, c);
        if mc.is_zero() {
            return None;
        }
        let joint = mass_of(&masses, e.intersection(f).intersection(c));
        Some(joint.mul(&mc) == mass_of(&masses, e.intersection(c)).mul(&mass_of(&masses, f.intersection(c))))
    };
    let strict = options.zero == ZeroScreener::Strict;

    let mut step1 = StepReport::new(1);
    let mut step2 = StepReport::new(2);
    let mut step3 = StepReport::new(3);
    for &c in &phi_p1 {
        for &x in &phi_x {
            for &y in &phi_y {
                let xyc = x.intersection(y).intersection(c);
                step3.checked += 1;
                if !phi_p2.contains(&xyc) {
                    step3.fail(limit, || ReplicationWitness {
                        a: Event::EMPTY,
                        b: Event::EMPTY,
                        x,
                        y,
                        c,
                        pair: None,
                        lhs: None,
                        rhs: None,
                        detail: if xyc.is_empty() {
                            "C∩X∩Y is empty".into()
                        } else {
                            "C∩X∩Y is not a full specification of the truncated joint past".into()
                        },
                    });
                }
                let xyc_positive = !mass_of(&masses, xyc).is_zero();
                for &a in &gamma_a {
                    for &b in &gamma_b {
                        let four = [
                            (a.intersection(x), b.intersection(y)),
                            (a.intersection(x), b),
                            (a, b.intersection(y)),
                            (x, y),
                        ];
                        for (k, &(e, f)) in four.iter().enumerate() {
                            step1.checked += 1;
                            let verdict = screened(e, f, c);
                            if verdict == Some(false) || (verdict.is_none() && strict) {
                                step1.fail(limit, || {
                                    let sides = m.screening_sides(e, f, c).ok();
                                    ReplicationWitness {
                                        a,
                                        b,
                                        x,
                                        y,
                                        c,
                                        pair: Some(k),
                                        lhs: sides.as_ref().map(|s| s.0.clone()),
                                        rhs: sides.map(|s| s.1),
                                        detail: if verdict.is_none() {
                                            "screener has probability zero".into()
                                        } else {
                                            "pair is not screened off".into()
                                        },
                                    }
                                });
                            }
                        }
                        if xyc_positive {
                            step2.checked += 1;
                            if screened(a, b, xyc) == Some(false) {
                                step2.fail(limit, || {
                                    let (lhs, rhs) = m.screening_sides(a, b, xyc).expect("positive");
                                    ReplicationWitness {
                                        a,
                                        b,
                                        x,
                                        y,
                                        c,
                                        pair: None,
                                        lhs: Some(rhs),
                                        rhs: Some(lhs),
                                        detail: "μ(A|XYC)μ(B|XYC) ≠ μ(A∩B|XYC)".into(),
                                    }
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    report.steps = vec![step1, step2, step3];
    Ok(report)
}

/// Comparison of `S = {C∩X∩Y ≠ ∅ : C ∈ Φ(𝒫₁), X ∈ Φ(𝒳), Y ∈ Φ(𝒴)}` with
/// `Φ(𝒫₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub region_a: Region,
    pub region_b: Region,
    pub equal: bool,
    /// In `Φ(𝒫₂)` but not produced, sorted.
    pub missing: Vec<Event>,
    /// Produced but not in `Φ(𝒫₂)`, sorted.
    pub extra: Vec<Event>,
    pub phi_mutual: usize,
    pub phi_flank_a: usize,
    pub phi_flank_b: usize,
    pub phi_truncated: usize,
    /// `|Φ(𝒫₂)| = |Φ(𝒫₁)|·|Φ(𝒳)|·|Φ(𝒴)|`.
    pub count_identity: bool,
}

pub fn gap_closure_check(space: &HistorySpace, dom: &DomMap, ra: Region, rb: Region) -> Result<GapReport> {
    let causet = space.causet();
    causet.check(ra)?;
    causet.check(rb)?;
    if !causet.spacelike(ra, rb) {
        return Err(Error::NotSpacelike);
    }
    let (fx, fy) = causet.flanks_of(ra, rb);
    let p1 = causet.mutual_past_of(ra, rb);
    let p2 = causet.truncated_joint_past_of(ra, rb);
    let phi_x = full_specifications(space, dom, fx)?;
    let phi_y = full_specifications(space, dom, fy)?;
    let phi_p1 = full_specifications(space, dom, p1)?;
    let mut phi_p2 = full_specifications(space, dom, p2)?;
    let mut produced = Vec::new();
    for &c in &phi_p1 {
        for &x in &phi_x {
            for &y in &phi_y {
                let e = c.intersection(x).intersection(y);
                if !e.is_empty() {
                    produced.push(e);
                }
            }
        }
    }
    produced.sort();
    produced.dedup();
    phi_p2.sort();
    let missing: Vec<Event> = phi_p2.iter().filter(|e| produced.binary_search(e).is_err()).copied().collect();
    let extra: Vec<Event> = produced.iter().filter(|e| phi_p2.binary_search(e).is_err()).copied().collect();
    Ok(GapReport {
        region_a: ra,
        region_b: rb,
        equal: missing.is_empty() && extra.is_empty(),
        missing,
        extra,
        phi_mutual: phi_p1.len(),
        phi_flank_a: phi_x.len(),
        phi_flank_b: phi_y.len(),
        phi_truncated: phi_p2.len(),
        count_identity: phi_p2.len() == phi_p1.len() * phi_x.len() * phi_y.len(),
    })
}
