//! Sweeps of a single region pair.
//!
//! The canonical engine never materializes `Γ`: events decidable in a region
//! are unions of its cylinders, so for each screener the joint masses over
//! cylinder pairs are tabulated once and the masses of every union pair follow
//! by subset sums. The exhaustive engine evaluates the definitions literally.

use super::{CheckOptions, Engine, Failure, Model, PairOutcome, Past, Witness};
use crate::causet::Region;
use crate::error::{Error, Result};
use crate::histories::{
    full_specifications, full_specifications_exhaustive, gamma, gamma_exhaustive, unions_of, Event, HistorySpace,
};
use crate::measure::ZeroScreener;
use crate::scalar::{Mass, Probability};

pub(super) fn sweep_pair<P: Probability>(
    model: &Model<P>,
    masses: &[P::Mass],
    past: Past,
    a: Region,
    b: Region,
    options: &CheckOptions,
) -> Result<PairOutcome<P>> {
    let caps = &options.caps;
    if a.len() > caps.max_region_size || b.len() > caps.max_region_size {
        return skip(caps.strict, format!("region of {} elements exceeds the region cap", a.len().max(b.len())));
    }
    let fast = options.engine == Engine::Auto && model.dom.is_canonical();
    if fast {
        canonical_sweep(model, masses, past, a, b, options)
    } else {
        exhaustive_sweep(model, masses, past, a, b, options)
    }
}

fn skip<P>(strict: bool, reason: String) -> Result<PairOutcome<P>> {
    if strict {
        return Err(Error::CapExceeded(reason));
    }
    let mut outcome = PairOutcome { counts: Default::default(), violations: 0, witnesses: Vec::new() };
    outcome.counts.skipped_pairs = 1;
    Ok(outcome)
}

/// `|Γ(r)| = 2^cells` for the canonical map, or `None` past `usize`.
fn canonical_algebra_size(space: &HistorySpace, r: Region) -> Option<usize> {
    let cells = space.cell_count(r);
    (cells < usize::BITS as usize).then(|| 1usize << cells)
}

pub(crate) fn mass_of<M: Mass>(masses: &[M], e: Event) -> M {
    let mut total = M::zero();
    for h in e.histories() {
        total = total.add(&masses[h]);
    }
    total
}

struct Recorder<'a, P> {
    model: &'a Model<P>,
    a: Region,
    b: Region,
    limit: usize,
    outcome: PairOutcome<P>,
}

impl<'a, P: Probability> Recorder<'a, P> {
    fn new(model: &'a Model<P>, a: Region, b: Region, limit: usize) -> Self {
        let outcome = PairOutcome { counts: Default::default(), violations: 0, witnesses: Vec::new() };
        Recorder { model, a, b, limit: limit.max(1), outcome }
    }

    fn violation(&mut self, ea: Event, eb: Event, c: Event, null: bool) {
        self.outcome.violations += 1;
        if self.outcome.witnesses.len() >= self.limit {
            return;
        }
        let failure = if null {
            Failure::NullScreener
        } else {
            let (lhs, rhs) = self
                .model
                .measure
                .screening_sides(ea, eb, c)
                .expect("screener has positive mass");
            Failure::Unscreened { lhs, rhs }
        };
        self.outcome.witnesses.push(Witness { region_a: self.a, region_b: self.b, a: ea, b: eb, screener: c, failure });
    }
}

fn canonical_sweep<P: Probability>(
    model: &Model<P>,
    masses: &[P::Mass],
    past: Past,
    a: Region,
    b: Region,
    options: &CheckOptions,
) -> Result<PairOutcome<P>> {
    let space = model.space();
    let caps = &options.caps;
    let (size_a, size_b) = match (canonical_algebra_size(space, a), canonical_algebra_size(space, b)) {
        (Some(sa), Some(sb)) if sa <= caps.max_algebra && sb <= caps.max_algebra => (sa, sb),
        _ => return skip(caps.strict, "event algebra exceeds the algebra cap".into()),
    };
    let atoms_a = space.cylinders(a);
    let atoms_b = space.cylinders(b);
    let (na, nb) = (atoms_a.len(), atoms_b.len());
    let unions_a = unions_of(&atoms_a);
    let unions_b = unions_of(&atoms_b);
    let screeners = space.cylinders(past.of(space.causet(), a, b));

    let mut rec = Recorder::new(model, a, b, caps.max_witnesses);
    let pairs = (size_a * size_b) as u64;
    rec.outcome.counts.region_pairs = 1;
    rec.outcome.counts.event_pairs = pairs;
    rec.outcome.counts.screeners = screeners.len() as u64;
    rec.outcome.counts.triples = pairs * screeners.len() as u64;

    let zero = P::Mass::zero();
    let mut table = vec![zero.clone(); na * nb];
    let mut rows = vec![zero.clone(); size_a * nb];
    let mut joint = vec![zero.clone(); size_b];
    let mut marginal_b = vec![zero.clone(); size_b];
    for &c in &screeners {
        table.fill(zero.clone());
        let mut mass_c = zero.clone();
        for h in c.histories() {
            let cell = space.cell_index(h, a) * nb + space.cell_index(h, b);
            table[cell] = table[cell].add(&masses[h]);
            mass_c = mass_c.add(&masses[h]);
        }
        if mass_c.is_zero() {
            rec.outcome.counts.null_screeners += 1;
            if options.zero == ZeroScreener::Strict {
                for &ea in &unions_a {
                    for &eb in &unions_b {
                        rec.violation(ea, eb, c, true);
                    }
                }
            }
            continue;
        }
        // rows[S][j]: mass of (∪_{i∈S} atom_i) ∩ atom_j ∩ C
        for s in 1..size_a {
            let low = s.trailing_zeros() as usize;
            let prev = s & (s - 1);
            for j in 0..nb {
                rows[s * nb + j] = rows[prev * nb + j].add(&table[low * nb + j]);
            }
        }
        let full_a = size_a - 1;
        for t in 1..size_b {
            let low = t.trailing_zeros() as usize;
            marginal_b[t] = marginal_b[t & (t - 1)].add(&rows[full_a * nb + low]);
        }
        for s in 0..size_a {
            let row = &rows[s * nb..(s + 1) * nb];
            for t in 1..size_b {
                let low = t.trailing_zeros() as usize;
                joint[t] = joint[t & (t - 1)].add(&row[low]);
            }
            let marginal_a = &joint[size_b - 1];
            for t in 0..size_b {
                if joint[t].mul(&mass_c) != marginal_a.mul(&marginal_b[t]) {
                    rec.violation(unions_a[s], unions_b[t], c, false);
                }
            }
        }
    }
    Ok(rec.outcome)
}

fn exhaustive_sweep<P: Probability>(
    model: &Model<P>,
    masses: &[P::Mass],
    past: Past,
    a: Region,
    b: Region,
    options: &CheckOptions,
) -> Result<PairOutcome<P>> {
    let space = model.space();
    let dom = &model.dom;
    let caps = &options.caps;
    let literal = options.engine == Engine::Exhaustive;
    let (gamma_a, gamma_b) = if literal {
        (gamma_exhaustive(space, dom, a)?, gamma_exhaustive(space, dom, b)?)
    } else {
        (gamma(space, dom, a)?, gamma(space, dom, b)?)
    };
    if gamma_a.len() > caps.max_algebra || gamma_b.len() > caps.max_algebra {
        return skip(caps.strict, "event algebra exceeds the algebra cap".into());
    }
    let p = past.of(space.causet(), a, b);
    let screeners = if literal {
        full_specifications_exhaustive(space, dom, p)?
    } else {
        full_specifications(space, dom, p)?
    };

    let mut rec = Recorder::new(model, a, b, caps.max_witnesses);
    let pairs = (gamma_a.len() * gamma_b.len()) as u64;
    rec.outcome.counts.region_pairs = 1;
    rec.outcome.counts.event_pairs = pairs;
    rec.outcome.counts.screeners = screeners.len() as u64;
    rec.outcome.counts.triples = pairs * screeners.len() as u64;

    for &c in &screeners {
        let mass_c = mass_of(masses, c);
        if mass_c.is_zero() {
            rec.outcome.counts.null_screeners += 1;
            if options.zero == ZeroScreener::Strict {
                for &ea in &gamma_a {
                    for &eb in &gamma_b {
                        rec.violation(ea, eb, c, true);
                    }
                }
            }
            continue;
        }
        let masses_b: Vec<P::Mass> = gamma_b.iter().map(|&eb| mass_of(masses, eb.intersection(c))).collect();
        for &ea in &gamma_a {
            let ac = ea.intersection(c);
            let mass_a = mass_of(masses, ac);
            for (&eb, mass_b) in gamma_b.iter().zip(&masses_b) {
                let joint = mass_of(masses, ac.intersection(eb));
                if joint.mul(&mass_c) != mass_a.mul(mass_b) {
                    rec.violation(ea, eb, c, false);
                }
            }
        }
    }
    Ok(rec.outcome)
}
