//! Exhaustive checks of the region identities, the partition and composition
//! properties of full specifications, the domain axioms, product-measure
//! soundness and the SO1 ⇒ SO2 replication over every small causet.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::causet::{Causet, Region};
use crate::error::Result;
use crate::histories::{
    check_dom_axioms, check_partition, composition_holds, full_specifications, full_specifications_exhaustive,
    random_events, AxiomScope, DomMap, HistorySpace, EXHAUSTIVE_HISTORIES,
};
use crate::hunter::{derive_seed, enumerate_levels};
use crate::io::{causet_json, region_json};
use crate::measure::MeasureTable;
use crate::principles::{
    gap_closure_check, implication_matrix, replicate_so1_to_so2, CheckOptions, Failure, Model, Past, Principle,
};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Bound for the region identities.
    pub max_elements: usize,
    /// Bound for the checks that build history spaces.
    pub model_elements: usize,
    /// Bound for the exhaustive domain-axiom check; larger models up to
    /// `model_elements` use `random_events` seeded random events.
    pub exhaustive_axiom_elements: usize,
    pub random_events: usize,
    pub alphabet: usize,
    pub seed: u64,
    pub options: CheckOptions,
}

impl SuiteConfig {
    pub fn new(max_elements: usize) -> Self {
        SuiteConfig {
            max_elements,
            model_elements: max_elements.min(4),
            exhaustive_axiom_elements: max_elements.min(3),
            random_events: 100,
            alphabet: 2,
            seed: 0,
            options: CheckOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremResult {
    pub name: &'static str,
    pub passed: bool,
    /// Largest causet size covered.
    pub elements: usize,
    pub checked: u64,
    pub failures: u64,
    /// First failure, if any.
    pub detail: Option<Value>,
}

impl TheoremResult {
    fn new(name: &'static str, elements: usize) -> Self {
        TheoremResult { name, passed: true, elements, checked: 0, failures: 0, detail: None }
    }

    fn merge(&mut self, part: Part) {
        self.checked += part.checked;
        self.failures += part.failures.len() as u64;
        if self.detail.is_none() {
            self.detail = part.failures.into_iter().next();
        }
        self.passed = self.failures == 0;
    }
}

#[derive(Default)]
struct Part {
    checked: u64,
    failures: Vec<Value>,
}

impl Part {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures.push(detail());
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport {
    pub results: Vec<TheoremResult>,
    /// Replication steps or gap-closure comparisons that failed.
    pub findings: Vec<Value>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed) && self.findings.is_empty()
    }

    pub fn result(&self, name: &str) -> Option<&TheoremResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "theorems": self.results.iter().map(|r| json!({
                "name": r.name,
                "passed": r.passed,
                "elements": r.elements,
                "checked": r.checked,
                "failures": r.failures,
                "detail": r.detail,
            })).collect::<Vec<_>>(),
            "findings": self.findings,
        })
    }
}

pub const CRUCIAL_IDENTITY: &str = "crucial-identity";
pub const PARTITION: &str = "full-specification-partition";
pub const DOM_AXIOMS: &str = "dom-axioms";
pub const COMPOSITION: &str = "full-specification-composition";
pub const SEPARATION: &str = "finite-infinite-separation";
pub const PRODUCT_SOUNDNESS: &str = "product-measure-soundness";
pub const REPLICATION: &str = "so1-to-so2-replication";

fn causets_up_to(n: usize) -> Result<Vec<Causet>> {
    let mut out = Vec::new();
    for level in enumerate_levels(n)?.into_iter().skip(1) {
        for (_, rows) in level {
            out.push(Causet::from_closed_rows(rows)?);
        }
    }
    Ok(out)
}

fn run_parts<F>(name: &'static str, elements: usize, causets: &[Causet], f: F) -> Result<TheoremResult>
where
    F: Fn(usize, &Causet) -> Result<Part> + Sync,
{
    run_collecting(name, elements, causets, f).map(|(result, _)| result)
}

/// Like [`run_parts`], also returning every failure detail.
fn run_collecting<F>(name: &'static str, elements: usize, causets: &[Causet], f: F) -> Result<(TheoremResult, Vec<Value>)>
where
    F: Fn(usize, &Causet) -> Result<Part> + Sync,
{
    let parts: Vec<Result<Part>> = causets.par_iter().enumerate().map(|(i, c)| f(i, c)).collect();
    let mut result = TheoremResult::new(name, elements);
    let mut all = Vec::new();
    for p in parts {
        let p = p?;
        all.extend(p.failures.iter().cloned());
        result.merge(p);
    }
    Ok((result, all))
}

pub fn crucial_identity(causets: &[Causet], elements: usize) -> Result<TheoremResult> {
    run_parts(CRUCIAL_IDENTITY, elements, causets, |_, c| {
        let mut part = Part::default();
        for (a, b) in c.spacelike_pairs() {
            let id = c.verify_crucial_identity(a, b)?;
            part.check(id.holds(), || {
                json!({"causet": causet_json(c), "a": region_json(c, a), "b": region_json(c, b),
                       "identity": crate::io::identity_json(c, &id)})
            });
        }
        Ok(part)
    })
}

/// `Φ(r)` evaluated literally when the space is small enough, cylinders
/// otherwise.
fn literal_phi(space: &HistorySpace, r: Region) -> Result<Vec<crate::histories::Event>> {
    let mut phi = if space.len() <= EXHAUSTIVE_HISTORIES {
        full_specifications_exhaustive(space, &DomMap::Canonical, r)?
    } else {
        full_specifications(space, &DomMap::Canonical, r)?
    };
    phi.sort();
    Ok(phi)
}

pub fn partition(causets: &[Causet], elements: usize, alphabet: usize) -> Result<TheoremResult> {
    run_parts(PARTITION, elements, causets, |_, c| {
        let space = HistorySpace::new(c.clone(), alphabet)?;
        let mut part = Part::default();
        for r in c.full_region().subsets() {
            let phi = literal_phi(&space, r)?;
            let mut fast = full_specifications(&space, &DomMap::Canonical, r)?;
            fast.sort();
            let expected = alphabet.pow(r.len() as u32);
            let partition_ok = check_partition(&space, &phi).is_ok();
            part.check(partition_ok && phi.len() == expected && phi == fast, || {
                json!({"causet": causet_json(c), "region": region_json(c, r), "cells": phi.len(),
                       "expected": expected, "is_partition": partition_ok})
            });
        }
        Ok(part)
    })
}

pub fn composition(causets: &[Causet], elements: usize, alphabet: usize) -> Result<TheoremResult> {
    run_parts(COMPOSITION, elements, causets, |_, c| {
        let space = HistorySpace::new(c.clone(), alphabet)?;
        let exhaustive = space.len() <= EXHAUSTIVE_HISTORIES;
        let full = c.full_region();
        let mut part = Part::default();
        for a in full.subsets() {
            for b in full.difference(a).subsets().filter(|b| a.bits() <= b.bits()) {
                let ok = composition_holds(&space, &DomMap::Canonical, a, b, exhaustive)?;
                part.check(ok, || json!({"causet": causet_json(c), "a": region_json(c, a), "b": region_json(c, b)}));
            }
        }
        Ok(part)
    })
}

pub fn dom_axioms(causets: &[Causet], config: &SuiteConfig) -> Result<TheoremResult> {
    run_parts(DOM_AXIOMS, config.model_elements, causets, |i, c| {
        let space = HistorySpace::new(c.clone(), config.alphabet)?;
        let scope = if c.len() <= config.exhaustive_axiom_elements {
            AxiomScope::exhaustive(3)
        } else {
            let seed = derive_seed(config.seed, c.len(), i);
            AxiomScope::sampled(random_events(&space, config.random_events, seed), 3)
        };
        let report = check_dom_axioms(&space, &DomMap::Canonical, &scope)?;
        let mut part = Part::default();
        for r in &report.results {
            part.check(r.passed, || {
                json!({"causet": causet_json(c), "axiom": r.axiom,
                       "detail": r.witness.as_ref().map(|w| w.detail.clone())})
            });
        }
        Ok(part)
    })
}

/// Two space-like points with perfectly correlated values.
pub fn separation() -> Result<TheoremResult> {
    let causet = crate::causet::validate_causet(&["x", "y"], &[])?;
    let space = HistorySpace::new(causet, 2)?;
    let model = Model::new(space.clone(), DomMap::Canonical, MeasureTable::<Rational>::diagonal(&space))?;
    let matrix = implication_matrix(&model, &CheckOptions::default())?;
    let so2 = matrix.verdict(Principle::So2);
    let half = Rational::new(1.into(), 2.into());
    let quarter = Rational::new(1.into(), 4.into());
    let omega_witness = so2.witnesses.iter().any(|w| {
        w.screener == space.omega()
            && matches!(&w.failure, Failure::Unscreened { lhs, rhs } if *lhs == half && *rhs == quarter)
    });
    let mut part = Part::default();
    part.check(matrix.signature() == [false, false, true, true] && omega_witness, || {
        json!({"summary": matrix.summary(), "omega_witness": omega_witness})
    });
    let mut result = TheoremResult::new(SEPARATION, 2);
    result.merge(part);
    Ok(result)
}

pub fn product_soundness(causets: &[Causet], config: &SuiteConfig) -> Result<TheoremResult> {
    run_parts(PRODUCT_SOUNDNESS, config.model_elements, causets, |_, c| {
        let model = Model::<Rational>::uniform(c.clone(), config.alphabet)?;
        let matrix = implication_matrix(&model, &config.options)?;
        let witnesses: usize = matrix.verdicts.iter().map(|v| v.witnesses.len()).sum();
        let mut part = Part::default();
        part.check(matrix.signature() == [true; 4] && witnesses == 0, || {
            json!({"causet": causet_json(c), "summary": matrix.summary(), "witnesses": witnesses})
        });
        Ok(part)
    })
}

/// Replicates the argument on every space-like pair where SO1 holds under the
/// uniform measure. Failures are returned as findings as well.
pub fn replication(causets: &[Causet], config: &SuiteConfig) -> Result<(TheoremResult, Vec<Value>)> {
    run_collecting(REPLICATION, config.model_elements, causets, |_, c| {
        let model = Model::<Rational>::uniform(c.clone(), config.alphabet)?;
        let space = model.space();
        let mut part = Part::default();
        let pairs = c.spacelike_pairs();
        let outcomes = crate::principles::sweep_pairs(&model, Past::Mutual, &pairs, &config.options)?;
        for (&(a, b), outcome) in pairs.iter().zip(&outcomes) {
            if outcome.violations > 0 || outcome.counts.skipped_pairs > 0 {
                continue;
            }
            let report = replicate_so1_to_so2(&model, a, b, &config.options)?;
            if !report.applicable {
                continue;
            }
            let gap = gap_closure_check(space, model.dom(), a, b)?;
            part.check(report.passed() && gap.equal, || {
                json!({
                    "kind": if report.passed() { "gap-closure mismatch" } else { "replication failure" },
                    "causet": causet_json(c),
                    "replication": crate::io::replication_json(space, &report),
                    "gap": crate::io::gap_json(space, &gap),
                })
            });
        }
        Ok(part)
    })
}

pub fn run_theorems(config: &SuiteConfig) -> Result<TheoremReport> {
    let all = causets_up_to(config.max_elements)?;
    let models: Vec<Causet> = all.iter().filter(|c| c.len() <= config.model_elements).cloned().collect();
    let mut results = vec![
        crucial_identity(&all, config.max_elements)?,
        partition(&models, config.model_elements, config.alphabet)?,
        composition(&models, config.model_elements, config.alphabet)?,
        dom_axioms(&models, config)?,
        separation()?,
        product_soundness(&models, config)?,
    ];
    let (replicated, findings) = replication(&models, config)?;
    results.push(replicated);
    Ok(TheoremReport { results, findings })
}
