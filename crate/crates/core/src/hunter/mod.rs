//! Search over small models for separations between the four principles.
//!
//! Every causet up to the size bound is paired with sampled measures and run
//! through the implication matrix. Work is split by causet and merged in
//! causet order, and each causet's measures come from a seed derived from its
//! position, so the report does not depend on the number of workers.

mod enumerate;
mod sample;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causet::Causet;
use crate::error::{Error, Result};
use crate::histories::{check_dom_axioms, AxiomReport, AxiomScope, DomMap, Event, HistorySpace};
use crate::measure::{MeasureTable, ZeroScreener};
use crate::principles::{
    gap_closure_check, implication_matrix, replay_witness, Caps, CheckOptions, Failure, ImplicationMatrix, Model,
    Principle,
};
use crate::scalar::Probability;
use crate::Rational;

pub use enumerate::{canonical_code, canonical_form, enumerate_causets, enumerate_levels, MAX_ENUMERATION};
pub use sample::{measure_digest, random_measure, sample_measures};

/// Causets processed between checkpoint writes.
const CHECKPOINT_CHUNK: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Filter {
    /// Some space-like pair has a nonempty flank region.
    NonemptyFlanks,
    /// Some space-like pair consists of causally finite regions.
    FinitePair,
}

impl Filter {
    pub fn id(self) -> &'static str {
        match self {
            Filter::NonemptyFlanks => "nonempty-flanks",
            Filter::FinitePair => "finite-pair",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "nonempty-flanks" => Some(Filter::NonemptyFlanks),
            "finite-pair" => Some(Filter::FinitePair),
            _ => None,
        }
    }

    pub fn accepts(self, causet: &Causet) -> bool {
        let pairs = causet.spacelike_pairs();
        match self {
            Filter::NonemptyFlanks => pairs.iter().any(|&(a, b)| {
                let (x, y) = causet.flanks_of(a, b);
                !x.is_empty() || !y.is_empty()
            }),
            Filter::FinitePair => pairs
                .iter()
                .any(|&(a, b)| causet.causally_finite(a) && causet.causally_finite(b)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_elements: usize,
    pub alphabet: usize,
    pub measures_per_model: usize,
    pub seed: u64,
    pub denominator_bound: u64,
    pub caps: Caps,
    pub zero: ZeroScreener,
    pub workers: usize,
    pub filters: Vec<Filter>,
    /// Also run the measure uniform on the constant histories.
    pub include_diagonal: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_elements: 3,
            alphabet: 2,
            measures_per_model: 5,
            seed: 0,
            denominator_bound: 8,
            caps: Caps::default(),
            zero: ZeroScreener::Vacuous,
            workers: 1,
            filters: Vec::new(),
            include_diagonal: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_elements == 0 {
            return Err(Error::Limit("max_elements must be at least 1".into()));
        }
        if self.max_elements > MAX_ENUMERATION {
            return Err(Error::Limit(format!(
                "max_elements {} exceeds the enumeration limit {MAX_ENUMERATION}",
                self.max_elements
            )));
        }
        if self.measures_per_model == 0 {
            return Err(Error::Limit("measures_per_model must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Limit("workers must be at least 1".into()));
        }
        if self.denominator_bound == 0 {
            return Err(Error::InvalidMeasure("denominator bound must be positive".into()));
        }
        HistorySpace::new(Causet::from_closed_rows(vec![0; self.max_elements])?, self.alphabet)?;
        Ok(())
    }

    /// Everything that determines the report; the worker count does not.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            max_elements: self.max_elements,
            alphabet: self.alphabet,
            measures_per_model: self.measures_per_model,
            seed: self.seed,
            denominator_bound: self.denominator_bound,
            max_region_size: self.caps.max_region_size,
            max_algebra: self.caps.max_algebra,
            max_witnesses: self.caps.max_witnesses,
            zero_screener: match self.zero {
                ZeroScreener::Vacuous => "vacuous".into(),
                ZeroScreener::Strict => "strict".into(),
            },
            filters: self.filters.iter().map(|f| f.id().to_string()).collect(),
            include_diagonal: self.include_diagonal,
        }
    }

    fn options(&self) -> CheckOptions {
        CheckOptions { caps: Caps { strict: false, ..self.caps }, zero: self.zero, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub max_elements: usize,
    pub alphabet: usize,
    pub measures_per_model: usize,
    pub seed: u64,
    pub denominator_bound: u64,
    pub max_region_size: usize,
    pub max_algebra: usize,
    pub max_witnesses: usize,
    pub zero_screener: String,
    pub filters: Vec<String>,
    pub include_diagonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausetPrint {
    pub elements: usize,
    /// Position within the causets of this size.
    pub index: usize,
    /// Canonical relation-matrix code.
    pub code: String,
    pub names: Vec<String>,
    pub relations: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurePrint {
    pub label: String,
    pub digest: String,
    /// History key to weight, zero weights omitted.
    pub weights: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixPrint {
    pub so1: bool,
    pub so2: bool,
    pub fin_so1: bool,
    pub fin_so2: bool,
    pub summary: String,
    pub capped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPrint {
    pub principle: String,
    pub region_a: Vec<String>,
    pub region_b: Vec<String>,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub screener: Vec<String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub causet: CausetPrint,
    pub measure: MeasurePrint,
    pub matrix: MatrixPrint,
    pub tags: Vec<String>,
    /// First witness of each violated principle.
    pub witnesses: Vec<WitnessPrint>,
}

impl Finding {
    /// Rebuilds the model from the printed causet and weights.
    pub fn model(&self, alphabet: usize) -> Result<Model<Rational>> {
        let names: Vec<&str> = self.causet.names.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> =
            self.causet.relations.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let causet = crate::causet::validate_causet(&names, &pairs)?;
        let space = HistorySpace::new(causet, alphabet)?;
        let mut weights = vec![Rational::zero(); space.len()];
        for (key, w) in &self.measure.weights {
            let h = space.parse_history_key(key)?;
            weights[h] = <Rational as Probability>::parse(w)
                .ok_or_else(|| Error::Format(format!("bad weight `{w}` for history `{key}`")))?;
        }
        let measure = MeasureTable::new(&space, weights)?;
        Model::new(space, DomMap::Canonical, measure)
    }

    /// Re-runs the matrix on the rebuilt model and compares signatures.
    pub fn replays(&self, config: &SearchConfig) -> Result<bool> {
        let model = self.model(config.alphabet)?;
        if measure_digest(model.space(), model.measure()) != self.measure.digest {
            return Ok(false);
        }
        let matrix = implication_matrix(&model, &config.options())?;
        Ok(matrix.signature() == [self.matrix.so1, self.matrix.so2, self.matrix.fin_so1, self.matrix.fin_so2])
    }
}

pub const TAG_SEPARATES: &str = "separates finite/infinite";
pub const TAG_FIN2_NOT_FIN1: &str = "FIN-SO2 ∧ ¬FIN-SO1 candidate";
pub const TAG_FIN1_NOT_FIN2: &str = "FIN-SO1 ∧ ¬FIN-SO2 candidate";
pub const TAG_SO2_NOT_SO1: &str = "per-model SO2∧¬SO1";
pub const TAG_SO1_NOT_SO2: &str = "per-model SO1∧¬SO2";
pub const TAG_GAP: &str = "gap-closure mismatch";

pub fn tags_for<P>(matrix: &ImplicationMatrix<P>, gap_mismatch: bool) -> Vec<String> {
    let [so1, so2, fin1, fin2] = matrix.signature();
    let mut tags = Vec::new();
    if (fin1 && !so1) || (fin2 && !so2) {
        tags.push(TAG_SEPARATES);
    }
    if fin2 && !fin1 {
        tags.push(TAG_FIN2_NOT_FIN1);
    }
    if fin1 && !fin2 {
        tags.push(TAG_FIN1_NOT_FIN2);
    }
    if so2 && !so1 {
        tags.push(TAG_SO2_NOT_SO1);
    }
    if so1 && !so2 {
        tags.push(TAG_SO1_NOT_SO2);
    }
    if gap_mismatch {
        tags.push(TAG_GAP);
    }
    tags.into_iter().map(String::from).collect()
}

/// Everything the report needs from one causet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausetOutcome {
    pub elements: usize,
    pub index: usize,
    pub filtered: bool,
    pub gap_mismatch: bool,
    /// One `[SO1, SO2, FIN-SO1, FIN-SO2]` row per distinct measure.
    pub signatures: Vec<[bool; 4]>,
    pub capped_models: u64,
    pub witness_replays: u64,
    pub witness_failures: u64,
    pub findings: Vec<Finding>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ConfigEcho,
    /// Causets per element count.
    pub causets: BTreeMap<usize, usize>,
    pub filtered: usize,
    pub models: usize,
    pub findings: usize,
    pub truth_table: BTreeMap<String, usize>,
    pub tag_counts: BTreeMap<String, usize>,
    pub capped_models: u64,
    pub gap_mismatches: usize,
    pub witness_replays: u64,
    pub witness_failures: u64,
    pub internal_consistency_failures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntReport {
    pub findings: Vec<Finding>,
    pub summary: Summary,
}

impl HuntReport {
    /// One JSON object per finding, then `{"summary": …}`.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&serde_json::to_string(f).expect("serializable"));
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self.summary, "convention": crate::io::CONVENTION });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    config: ConfigEcho,
    completed: Vec<CausetOutcome>,
}

/// Seed for one causet's measures, from the run seed and the causet's place.
pub fn derive_seed(seed: u64, elements: usize, index: usize) -> u64 {
    splitmix(seed ^ splitmix(((elements as u64) << 32) | index as u64))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Measures run on one causet, labelled and deduplicated by digest.
pub fn measures_for(
    space: &HistorySpace,
    config: &SearchConfig,
    elements: usize,
    index: usize,
) -> Result<Vec<(String, MeasureTable<Rational>)>> {
    let sampled = sample_measures(
        space,
        config.measures_per_model,
        derive_seed(config.seed, elements, index),
        config.denominator_bound,
    )?;
    let mut labelled: Vec<(String, MeasureTable<Rational>)> = Vec::new();
    for (k, m) in sampled.into_iter().enumerate() {
        let label = if k == 0 { "uniform".to_string() } else { format!("random-{k}") };
        labelled.push((label, m));
        if k == 0 && config.include_diagonal {
            labelled.push(("diagonal".into(), MeasureTable::diagonal(space)));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    labelled.retain(|(_, m)| seen.insert(measure_digest(space, m)));
    Ok(labelled)
}

fn print_causet(causet: &Causet, index: usize) -> CausetPrint {
    let names = causet.names().to_vec();
    CausetPrint {
        elements: causet.len(),
        index,
        code: format!("{:x}", canonical_code(causet)),
        relations: causet
            .relations()
            .into_iter()
            .map(|(x, y)| [names[x].clone(), names[y].clone()])
            .collect(),
        names,
    }
}

fn keys(space: &HistorySpace, e: Event) -> Vec<String> {
    e.histories().map(|h| space.history_key(h)).collect()
}

fn print_matrix<P: Probability>(model: &Model<P>, matrix: &ImplicationMatrix<P>) -> (MatrixPrint, Vec<WitnessPrint>) {
    let [so1, so2, fin_so1, fin_so2] = matrix.signature();
    let space = model.space();
    let causet = model.causet();
    let witnesses = matrix
        .verdicts
        .iter()
        .filter_map(|v| v.witnesses.first().map(|w| (v.principle, w)))
        .map(|(p, w)| {
            let (lhs, rhs) = match &w.failure {
                Failure::Unscreened { lhs, rhs } => (Some(lhs.to_string()), Some(rhs.to_string())),
                Failure::NullScreener => (None, None),
            };
            WitnessPrint {
                principle: p.id().into(),
                region_a: causet.region_names(w.region_a),
                region_b: causet.region_names(w.region_b),
                a: keys(space, w.a),
                b: keys(space, w.b),
                screener: keys(space, w.screener),
                lhs,
                rhs,
            }
        })
        .collect();
    let print = MatrixPrint { so1, so2, fin_so1, fin_so2, summary: matrix.summary(), capped: matrix.capped() };
    (print, witnesses)
}

fn process_causet(
    config: &SearchConfig,
    axioms: &Arc<AxiomReport>,
    causet: &Causet,
    index: usize,
) -> Result<CausetOutcome> {
    let elements = causet.len();
    let mut outcome = CausetOutcome {
        elements,
        index,
        filtered: false,
        gap_mismatch: false,
        signatures: Vec::new(),
        capped_models: 0,
        witness_replays: 0,
        witness_failures: 0,
        findings: Vec::new(),
    };
    if !config.filters.iter().all(|f| f.accepts(causet)) {
        outcome.filtered = true;
        return Ok(outcome);
    }
    let space = HistorySpace::new(causet.clone(), config.alphabet)?;
    for (a, b) in causet.spacelike_pairs() {
        if !gap_closure_check(&space, &DomMap::Canonical, a, b)?.equal {
            outcome.gap_mismatch = true;
            break;
        }
    }
    let options = config.options();
    for (label, measure) in measures_for(&space, config, elements, index)? {
        let digest = measure_digest(&space, &measure);
        let weights = measure
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(h, w)| (space.history_key(h), w.to_string()))
            .collect();
        let model = Model::with_axioms(space.clone(), DomMap::Canonical, measure, Arc::clone(axioms))?;
        let matrix = implication_matrix(&model, &options)?;
        outcome.signatures.push(matrix.signature());
        if matrix.capped() {
            outcome.capped_models += 1;
        }
        for v in &matrix.verdicts {
            for w in &v.witnesses {
                outcome.witness_replays += 1;
                if !replay_witness(&model, v.principle, w)? {
                    outcome.witness_failures += 1;
                }
            }
        }
        let tags = tags_for(&matrix, outcome.gap_mismatch);
        if !tags.is_empty() {
            let (matrix_print, witnesses) = print_matrix(&model, &matrix);
            outcome.findings.push(Finding {
                causet: print_causet(causet, index),
                measure: MeasurePrint { label, digest, weights },
                matrix: matrix_print,
                tags,
                witnesses,
            });
        }
    }
    Ok(outcome)
}

fn summarize(config: &SearchConfig, outcomes: &[CausetOutcome]) -> HuntReport {
    let mut causets = BTreeMap::new();
    let mut truth_table = BTreeMap::new();
    let mut tag_counts = BTreeMap::new();
    let mut findings = Vec::new();
    let mut summary = Summary {
        config: config.echo(),
        causets: BTreeMap::new(),
        filtered: 0,
        models: 0,
        findings: 0,
        truth_table: BTreeMap::new(),
        tag_counts: BTreeMap::new(),
        capped_models: 0,
        gap_mismatches: 0,
        witness_replays: 0,
        witness_failures: 0,
        internal_consistency_failures: 0,
    };
    for o in outcomes {
        *causets.entry(o.elements).or_insert(0) += 1;
        summary.filtered += usize::from(o.filtered);
        summary.gap_mismatches += usize::from(o.gap_mismatch);
        summary.models += o.signatures.len();
        summary.capped_models += o.capped_models;
        summary.witness_replays += o.witness_replays;
        summary.witness_failures += o.witness_failures;
        for s in &o.signatures {
            *truth_table.entry(signature_label(*s)).or_insert(0) += 1;
        }
        for f in &o.findings {
            for t in &f.tags {
                *tag_counts.entry(t.clone()).or_insert(0) += 1;
            }
            findings.push(f.clone());
        }
    }
    summary.causets = causets;
    summary.findings = findings.len();
    summary.truth_table = truth_table;
    summary.tag_counts = tag_counts;
    HuntReport { findings, summary }
}

/// `SO1✓ SO2✗ FIN-SO1✓ FIN-SO2✓` style label of a signature.
pub fn signature_label(signature: [bool; 4]) -> String {
    Principle::ALL
        .iter()
        .zip(signature)
        .map(|(p, holds)| format!("{}{}", p.id(), if holds { '✓' } else { '✗' }))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs the search without checkpointing.
pub fn hunt(config: &SearchConfig) -> Result<HuntReport> {
    hunt_with_checkpoint(config, None, false)
}

/// Runs the search, writing progress to `checkpoint` after every few causets.
/// With `resume`, completed causets recorded in an existing checkpoint are
/// not recomputed. Aborts on the first internal-consistency failure.
pub fn hunt_with_checkpoint(config: &SearchConfig, checkpoint: Option<&Path>, resume: bool) -> Result<HuntReport> {
    config.validate()?;
    let levels = enumerate_levels(config.max_elements)?;
    let mut work: Vec<(Causet, usize)> = Vec::new();
    let mut axioms: BTreeMap<usize, Arc<AxiomReport>> = BTreeMap::new();
    for (n, level) in levels.iter().enumerate().skip(1) {
        let probe = HistorySpace::new(Causet::from_closed_rows(vec![0; n])?, config.alphabet)?;
        let report = check_dom_axioms(&probe, &DomMap::Canonical, &AxiomScope::default_for(&probe, &DomMap::Canonical))?;
        if !report.all_passed() {
            return Err(Error::InternalConsistency(format!(
                "canonical domains fail axioms {:?} on {n} elements",
                report.failed_axioms()
            )));
        }
        axioms.insert(n, Arc::new(report));
        for (index, (_, rows)) in level.iter().enumerate() {
            work.push((Causet::from_closed_rows(rows.clone())?, index));
        }
    }

    let mut completed: Vec<CausetOutcome> = Vec::new();
    if resume {
        if let Some(path) = checkpoint.filter(|p| p.exists()) {
            let saved: Checkpoint = serde_json::from_str(&read(path)?)
                .map_err(|e| Error::Format(format!("{}: unreadable checkpoint: {e}", path.display())))?;
            if saved.config != config.echo() {
                return Err(Error::Format(format!(
                    "{}: checkpoint was written for a different configuration",
                    path.display()
                )));
            }
            if saved.completed.len() > work.len() {
                return Err(Error::Format(format!("{}: checkpoint has too many entries", path.display())));
            }
            completed = saved.completed;
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Limit(format!("cannot start {} workers: {e}", config.workers)))?;
    while completed.len() < work.len() {
        let start = completed.len();
        let end = if checkpoint.is_some() { (start + CHECKPOINT_CHUNK).min(work.len()) } else { work.len() };
        let chunk = &work[start..end];
        let results: Vec<Result<CausetOutcome>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|(causet, index)| process_causet(config, &axioms[&causet.len()], causet, *index))
                .collect()
        });
        for r in results {
            completed.push(r?);
        }
        if let Some(path) = checkpoint {
            write_checkpoint(path, &Checkpoint { config: config.echo(), completed: completed.clone() })?;
        }
    }
    Ok(summarize(config, &completed))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn write_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string(checkpoint).expect("serializable")).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        let w = crate::causet::fixtures::w_causet();
        let anti = crate::causet::fixtures::anti2();
        let diamond = crate::causet::fixtures::diamond();
        assert!(Filter::NonemptyFlanks.accepts(&w));
        assert!(!Filter::NonemptyFlanks.accepts(&anti));
        assert!(!Filter::FinitePair.accepts(&anti));
        assert!(Filter::FinitePair.accepts(&diamond));
        for f in [Filter::NonemptyFlanks, Filter::FinitePair] {
            assert_eq!(Filter::parse(f.id()), Some(f));
        }
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(7, 3, 0), derive_seed(7, 3, 1));
        assert_ne!(derive_seed(7, 3, 0), derive_seed(7, 4, 0));
        assert_eq!(derive_seed(7, 3, 0), derive_seed(7, 3, 0));
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        for bad in [
            SearchConfig { max_elements: 0, ..Default::default() },
            SearchConfig { max_elements: 8, ..Default::default() },
            SearchConfig { measures_per_model: 0, ..Default::default() },
            SearchConfig { workers: 0, ..Default::default() },
            SearchConfig { alphabet: 3, max_elements: 5, ..Default::default() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn tags() {
        let space = HistorySpace::new(crate::causet::fixtures::anti2(), 2).unwrap();
        let model = Model::new(space.clone(), DomMap::Canonical, MeasureTable::<Rational>::diagonal(&space)).unwrap();
        let matrix = implication_matrix(&model, &CheckOptions::default()).unwrap();
        assert_eq!(tags_for(&matrix, false), vec![TAG_SEPARATES.to_string()]);
        assert_eq!(signature_label(matrix.signature()), matrix.summary());
    }
}
