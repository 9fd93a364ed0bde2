//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use causet_lab::histories::{Event, HistorySpace};
use causet_lab::hunter::{enumerate_causets, hunt, HuntReport, SearchConfig};
use causet_lab::io::{parse_event, parse_model};
use causet_lab::principles::Failure;
use causet_lab::suite::{self, SuiteConfig};
use causet_lab::{implication_matrix, CheckOptions, Causet, Model, Principle, Probability, Rational, Region};
use num_bigint::BigInt;
use serde_json::json;

const IDENTITY_BOUND: usize = 6;
const IDENTITY_BUDGET: Duration = Duration::from_secs(5 * 60);
const HUNT_BUDGET: Duration = Duration::from_secs(15 * 60);
const POSET_COUNTS: [usize; 6] = [1, 2, 5, 16, 63, 318];

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} [{id:>2}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Isomorphism classes of posets on `n` points. Every poset has a natural
/// labelling, so closed relations with edges `i → j` only for `i < j` cover
/// all classes; each is reduced to its least adjacency code over all `n!`
/// relabellings.
fn brute_force_poset_count(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut classes = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let mut less = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            less[i][j] = mask >> k & 1 == 1;
        }
        let transitive = (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| !(less[i][j] && less[j][k]) || less[i][k]))
        });
        if !transitive {
            continue;
        }
        let code = perms
            .iter()
            .map(|p| {
                let mut code = 0u64;
                for i in 0..n {
                    for j in 0..n {
                        code = code << 1 | u64::from(less[p[i]][p[j]]);
                    }
                }
                code
            })
            .min()
            .unwrap_or(0);
        classes.insert(code);
    }
    classes.len()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

/// Past, spacelike and flank regions recomputed from the order relation.
fn identity_oracle(c: &Causet, a: Region, b: Region) -> (bool, String) {
    let n = c.len();
    let past = |r: Region| Region::from_indices((0..n).filter(|&x| r.iter().any(|y| x == y || c.precedes(x, y))));
    let spacelike = |r: Region, s: Region| past(r).is_disjoint(s) && past(s).is_disjoint(r);
    let (pa, pb) = (past(a), past(b));
    let x = pa.difference(a).difference(pb);
    let y = pb.difference(b).difference(pa);
    let p1 = pa.intersection(pb);
    let p2 = pa.union(pb).difference(a.union(b));
    let (ea, eb) = (a.union(x), b.union(y));
    let p2_enlarged = past(ea).union(past(eb)).difference(ea.union(eb));
    let disjoint = x.is_disjoint(y) && x.is_disjoint(p1) && y.is_disjoint(p1);
    let ok = spacelike(ea, eb) && p2_enlarged == p1 && disjoint && p2 == x.union(y).union(p1);
    let id = c.verify_crucial_identity(a, b).expect("space-like pair");
    let agrees = id.flank_a == x && id.flank_b == y && id.mutual_past == p1 && id.truncated_joint_past == p2;
    (ok && id.holds() && agrees, format!("{:?} {:?} in {:?}", a, b, c.relations()))
}

fn criterion_1(gate: &mut Gate) {
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut oracle_counts = Vec::new();
    let mut pairs = 0u64;
    let mut failure = None;
    for n in 1..=IDENTITY_BOUND {
        let causets = enumerate_causets(n).expect("enumeration");
        counts.push(causets.len());
        oracle_counts.push(brute_force_poset_count(n));
        for c in &causets {
            for (a, b) in c.spacelike_pairs() {
                pairs += 1;
                let (ok, detail) = identity_oracle(c, a, b);
                if !ok && failure.is_none() {
                    failure = Some(detail);
                }
            }
        }
    }
    let suite = suite::crucial_identity(
        &(1..=IDENTITY_BOUND).flat_map(|n| enumerate_causets(n).unwrap()).collect::<Vec<_>>(),
        IDENTITY_BOUND,
    )
    .expect("suite");
    let elapsed = start.elapsed();
    let ok = counts == POSET_COUNTS
        && oracle_counts == POSET_COUNTS
        && failure.is_none()
        && suite.passed
        && suite.checked == pairs
        && elapsed < IDENTITY_BUDGET;
    gate.report(
        1,
        "region identities on all causets up to 6 elements",
        ok,
        format!(
            "counts {counts:?}, brute force {oracle_counts:?}, {pairs} pairs, failures {}, {:.1}s{}",
            suite.failures,
            elapsed.as_secs_f64(),
            failure.map(|f| format!(", first failure {f}")).unwrap_or_default()
        ),
    );
}

fn model_causets() -> Vec<Causet> {
    (1..=4).flat_map(|n| enumerate_causets(n).unwrap()).collect()
}

fn criterion_2(gate: &mut Gate, causets: &[Causet]) {
    let r = suite::partition(causets, 4, 2).expect("suite");
    let regions: u64 = causets.iter().map(|c| 1u64 << c.len()).sum();
    gate.report(
        2,
        "full specifications partition the histories",
        r.passed && r.checked == regions,
        format!("{} regions checked, {} failures", r.checked, r.failures),
    );
}

fn criterion_3(gate: &mut Gate, causets: &[Causet]) {
    let config = SuiteConfig::new(4);
    let r = suite::dom_axioms(causets, &config).expect("suite");
    gate.report(
        3,
        "canonical domains satisfy the four axioms",
        r.passed && r.checked == 4 * causets.len() as u64,
        format!("{} axiom checks over {} models, {} failures", r.checked, causets.len(), r.failures),
    );
}

fn criterion_4(gate: &mut Gate, causets: &[Causet]) {
    let r = suite::composition(causets, 4, 2).expect("suite");
    let pairs: u64 = causets.iter().map(|c| 3u64.pow(c.len() as u32).div_ceil(2)).sum();
    gate.report(
        4,
        "full specifications compose over disjoint regions",
        r.passed && r.checked == pairs,
        format!("{} region pairs, {} failures", r.checked, r.failures),
    );
}

fn anti2_perf() -> Model<Rational> {
    parse_model(&json!({
        "causet": {"elements": ["x", "y"], "relations": []},
        "alphabet": 2,
        "dom": "canonical",
        "measure": {"weights": {"00": "1/2", "11": "1/2"}},
    }))
    .expect("model")
}

fn criterion_5(gate: &mut Gate) {
    let model = anti2_perf();
    let matrix = implication_matrix(&model, &CheckOptions::default()).expect("matrix");
    let so2 = matrix.verdict(Principle::So2);
    let space = model.space();
    // hand evaluation: μ(x=1 ∧ y=1) = 1/2, μ(x=1)μ(y=1) = 1/4
    let x1 = parse_event(space, &json!({"x": 1})).unwrap();
    let y1 = parse_event(space, &json!({"y": 1})).unwrap();
    let hand = so2.witnesses.iter().any(|w| {
        w.screener == space.omega()
            && w.a == x1
            && w.b == y1
            && w.failure == Failure::Unscreened { lhs: rat(1, 2), rhs: rat(1, 4) }
    });
    let omega_only = so2.witnesses.iter().all(|w| w.screener == space.omega());
    let ok = matrix.signature() == [false, false, true, true] && hand && omega_only;
    gate.report(
        5,
        "two perfectly correlated space-like points separate finite from infinite",
        ok,
        format!("{}, Ω witness with 1/2 vs 1/4: {hand}", matrix.summary()),
    );
}

/// All unions of the cells of `r`, built from history values only.
fn decidable(space: &HistorySpace, r: Region) -> Vec<Event> {
    let mut cells: Vec<Event> = Vec::new();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for h in 0..space.len() {
        let key: Vec<usize> = r.iter().map(|s| space.value(h, s)).collect();
        let e = Event::from_bits(1 << h);
        match seen.iter().position(|k| *k == key) {
            Some(i) => cells[i] = cells[i].union(e),
            None => {
                seen.push(key);
                cells.push(e);
            }
        }
    }
    (0usize..1 << cells.len())
        .map(|mask| {
            (0..cells.len()).filter(|i| mask >> i & 1 == 1).fold(Event::EMPTY, |acc, i| acc.union(cells[i]))
        })
        .collect()
}

fn criterion_6(gate: &mut Gate, causets: &[Causet]) {
    let mut failures = Vec::new();
    let mut triples = 0u64;
    for c in causets {
        let model = Model::<Rational>::uniform(c.clone(), 2).unwrap();
        let matrix = implication_matrix(&model, &CheckOptions::default()).unwrap();
        let witnesses: usize = matrix.verdicts.iter().map(|v| v.witnesses.len()).sum();
        if matrix.signature() != [true; 4] || witnesses > 0 {
            failures.push(format!("{:?}: {}", c.relations(), matrix.summary()));
        }
        // conditional independence by counting histories
        let space = model.space();
        for (a, b) in c.spacelike_pairs() {
            if a.len() > 3 || b.len() > 3 {
                continue;
            }
            let p2 = c.truncated_joint_past(a, b).unwrap();
            let gp = decidable(space, p2);
            let screeners: Vec<Event> = gp
                .iter()
                .copied()
                .filter(|e| !e.is_empty() && gp.iter().all(|x| x.is_disjoint(*e) || e.is_subset(*x)))
                .collect();
            let (ga, gb) = (decidable(space, a), decidable(space, b));
            for &sc in &screeners {
                for &ea in &ga {
                    for &eb in &gb {
                        triples += 1;
                        let lhs = ea.intersection(eb).intersection(sc).len() * sc.len();
                        let rhs = ea.intersection(sc).len() * eb.intersection(sc).len();
                        if lhs != rhs {
                            failures.push(format!("{:?} {a:?} {b:?}", c.relations()));
                        }
                    }
                }
            }
        }
    }
    gate.report(
        6,
        "uniform product measures satisfy every principle",
        failures.is_empty() && triples > 0,
        format!("{} causets, {triples} counted triples, failures {failures:?}", causets.len()),
    );
}

fn criterion_8(gate: &mut Gate, causets: &[Causet]) {
    let config = SuiteConfig::new(4);
    let (r, findings) = suite::replication(causets, &config).expect("suite");
    gate.report(
        8,
        "SO1 ⇒ SO2 replication and gap closure on uniform models",
        r.passed && findings.is_empty() && r.checked > 0,
        format!("{} applicable pairs, {} findings", r.checked, findings.len()),
    );
}

fn hunt_config(workers: usize) -> SearchConfig {
    SearchConfig { max_elements: 4, measures_per_model: 5, seed: 7, workers, ..Default::default() }
}

fn criterion_7(gate: &mut Gate, reports: &[&HuntReport]) {
    let mut matrices = 0;
    let mut bad = Vec::new();
    for r in reports {
        for (label, count) in &r.summary.truth_table {
            matrices += count;
            let holds = |id: &str| label.split(' ').any(|t| t == format!("{id}✓"));
            if (holds("SO1") && !holds("FIN-SO1")) || (holds("SO2") && !holds("FIN-SO2")) {
                bad.push(label.clone());
            }
        }
        if r.summary.internal_consistency_failures > 0 {
            bad.push("internal consistency".into());
        }
    }
    gate.report(
        7,
        "SOk ⇒ FIN-SOk in every hunted matrix",
        bad.is_empty() && matrices > 0,
        format!("{matrices} matrices, violations {bad:?}"),
    );
}

fn criterion_10(gate: &mut Gate, reports: &[&HuntReport], config: &SearchConfig) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for r in reports {
        for f in &r.findings {
            let model = f.model(config.alphabet).expect("finding model");
            let space = model.space();
            if !f.replays(config).unwrap() {
                failures.push(format!("matrix of {}", f.measure.digest));
            }
            for w in &f.witnesses {
                checked += 1;
                let event = |keys: &Vec<String>| parse_event(space, &json!(keys)).unwrap();
                let (lhs, rhs) =
                    model.measure().screening_sides(event(&w.a), event(&w.b), event(&w.screener)).unwrap();
                let printed = |s: &Option<String>| s.as_deref().and_then(<Rational as Probability>::parse);
                if printed(&w.lhs) != Some(lhs) || printed(&w.rhs) != Some(rhs) {
                    failures.push(format!("{} {}", f.measure.digest, w.principle));
                }
            }
        }
    }
    let replays: u64 = reports.iter().map(|r| r.summary.witness_replays).sum();
    let replay_failures: u64 = reports.iter().map(|r| r.summary.witness_failures).sum();
    gate.report(
        10,
        "witnesses re-evaluate to the reported rationals",
        failures.is_empty() && replay_failures == 0 && checked > 0 && replays > 0,
        format!(
            "{checked} emitted witnesses re-evaluated, {replays} replayed in the hunt, failures {}",
            failures.len() + replay_failures as usize
        ),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };
    criterion_1(&mut gate);
    let causets = model_causets();
    criterion_2(&mut gate, &causets);
    criterion_3(&mut gate, &causets);
    criterion_4(&mut gate, &causets);
    criterion_5(&mut gate);
    criterion_6(&mut gate, &causets);

    let start = Instant::now();
    let runs: Vec<HuntReport> = [1, 4, 8].iter().map(|&w| hunt(&hunt_config(w)).expect("hunt")).collect();
    let elapsed = start.elapsed();
    let diagonal = hunt(&SearchConfig { max_elements: 2, measures_per_model: 1, include_diagonal: true, ..Default::default() })
        .expect("hunt");

    criterion_7(&mut gate, &[&runs[0], &diagonal]);
    criterion_8(&mut gate, &causets);

    let bytes: Vec<String> = runs.iter().map(HuntReport::to_json_lines).collect();
    let identical = bytes.iter().all(|b| *b == bytes[0]);
    gate.report(
        9,
        "hunt output is identical for 1, 4 and 8 workers",
        identical && elapsed < HUNT_BUDGET,
        format!(
            "{} bytes, {} findings, three runs in {:.1}s",
            bytes[0].len(),
            runs[0].findings.len(),
            elapsed.as_secs_f64()
        ),
    );
    criterion_10(&mut gate, &[&runs[0], &diagonal], &hunt_config(1));

    println!("acceptance: {} of 10 criteria passed", 10 - gate.failed);
    if gate.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
