//! JSON model files and JSON renderings of reports.
//!
//! Causet: `{"elements": [...], "relations": [["p", "a"], ...]}`, any generating
//! set of relations. Model: `{"causet": …, "alphabet": 2, "dom": …, "measure": …}`
//! with `dom` either `"canonical"` or an object from event specs to element
//! lists, and `measure` one of `"uniform"`, `"diagonal"`,
//! `{"weights": {"01": "1/2", …}}` or `{"random": {"seed": s, "denominator_bound": d}}`.
//!
//! Events are a list of history keys, a cylinder object `{"x": 1, …}`, or as
//! text: `Ω`/`omega`, `∅`/`empty`, `x=1,y=0`, or `00,11`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::causet::{validate_causet, Causet, CrucialIdentity, Region};
use crate::error::{Error, Result};
use crate::histories::{AxiomReport, DomMap, Event, HistorySpace};
use crate::hunter::random_measure;
use crate::measure::{CcsFailure, CcsVerdict, CommonCauseVerdict, MeasureTable};
use crate::principles::{
    Counts, Failure, GapReport, ImplicationMatrix, Model, ReplicationReport, Verdict, Witness,
};
use crate::scalar::Probability;
use crate::Rational;

/// Reading of the inclusion in the definitions of `Γ` and `Φ`, echoed in
/// every report.
pub const CONVENTION: &str = "dom(X) ⊆ R (non-strict inclusion)";

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: format!("invalid JSON: {e}") })
}

pub fn parse_causet(value: &Value) -> Result<Causet> {
    let obj = value.as_object().ok_or_else(|| Error::Format("causet must be an object".into()))?;
    let elements: Vec<String> = obj
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("causet needs an `elements` list".into()))?
        .iter()
        .map(|v| v.as_str().map(str::to_string).ok_or_else(|| Error::Format("element names must be strings".into())))
        .collect::<Result<_>>()?;
    let mut relations = Vec::new();
    if let Some(rel) = obj.get("relations") {
        for pair in rel.as_array().ok_or_else(|| Error::Format("`relations` must be a list".into()))? {
            match pair.as_array().map(Vec::as_slice) {
                Some([Value::String(a), Value::String(b)]) => relations.push((a.as_str(), b.as_str())),
                _ => return Err(Error::Format(format!("relation {pair} is not a pair of names"))),
            }
        }
    }
    let names: Vec<&str> = elements.iter().map(String::as_str).collect();
    validate_causet(&names, &relations)
}

/// Parses an event written as JSON.
pub fn parse_event(space: &HistorySpace, value: &Value) -> Result<Event> {
    match value {
        Value::String(text) => parse_event_text(space, text),
        Value::Array(keys) => {
            let mut hs = Vec::with_capacity(keys.len());
            for k in keys {
                let k = k.as_str().ok_or_else(|| Error::Format(format!("history key {k} is not a string")))?;
                hs.push(space.parse_history_key(k)?);
            }
            space.event_from_histories(hs)
        }
        Value::Object(fixed) => {
            let causet = space.causet();
            let mut pairs = Vec::with_capacity(fixed.len());
            for (name, v) in fixed {
                let v = v
                    .as_u64()
                    .ok_or_else(|| Error::Format(format!("value of `{name}` must be a non-negative integer")))?;
                pairs.push((causet.index_of(name)?, v as usize));
            }
            space.cylinder(&pairs)
        }
        other => Err(Error::Format(format!("cannot read an event from {other}"))),
    }
}

/// Parses the textual event forms used on the command line and as domain keys.
pub fn parse_event_text(space: &HistorySpace, text: &str) -> Result<Event> {
    let text = text.trim();
    match text {
        "Ω" | "omega" => return Ok(space.omega()),
        "∅" | "empty" => return Ok(Event::EMPTY),
        _ => {}
    }
    if text.starts_with('[') || text.starts_with('{') {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Format(format!("event `{text}`: {e}")))?;
        return parse_event(space, &value);
    }
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.iter().all(|p| p.contains('=')) && !parts.is_empty() {
        let mut pairs = Vec::with_capacity(parts.len());
        for p in parts {
            let (name, v) = p.split_once('=').expect("checked");
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("event `{text}`: bad value in `{p}`")))?;
            pairs.push((space.causet().index_of(name.trim())?, v));
        }
        return space.cylinder(&pairs);
    }
    let hs = parts.iter().map(|k| space.parse_history_key(k)).collect::<Result<Vec<_>>>()?;
    space.event_from_histories(hs)
}

/// Comma-separated element names, or a JSON list of them.
pub fn parse_region_text(causet: &Causet, text: &str) -> Result<Region> {
    let text = text.trim();
    if text.starts_with('[') {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Format(format!("region `{text}`: {e}")))?;
        return parse_region(causet, &value);
    }
    let names: Vec<&str> = text.split(',').map(str::trim).filter(|n| !n.is_empty() && *n != "∅").collect();
    causet.region(&names)
}

pub fn parse_region(causet: &Causet, value: &Value) -> Result<Region> {
    let list = value.as_array().ok_or_else(|| Error::Format(format!("region {value} is not a list")))?;
    let mut names = Vec::with_capacity(list.len());
    for v in list {
        names.push(v.as_str().ok_or_else(|| Error::Format(format!("element {v} is not a string")))?);
    }
    causet.region(&names)
}

pub fn parse_dom(space: &HistorySpace, value: Option<&Value>) -> Result<DomMap> {
    match value {
        None => Ok(DomMap::Canonical),
        Some(Value::String(s)) if s == "canonical" => Ok(DomMap::Canonical),
        Some(Value::Object(map)) => {
            let mut overrides = BTreeMap::new();
            for (spec, region) in map {
                let e = parse_event_text(space, spec)?;
                let r = parse_region(space.causet(), region)?;
                overrides.insert(e, r);
            }
            Ok(DomMap::Overrides(overrides))
        }
        Some(other) => Err(Error::Format(format!("dom must be \"canonical\" or an object, got {other}"))),
    }
}

pub fn parse_measure(space: &HistorySpace, value: Option<&Value>) -> Result<MeasureTable<Rational>> {
    match value {
        None => Ok(MeasureTable::uniform(space)),
        Some(Value::String(s)) if s == "uniform" => Ok(MeasureTable::uniform(space)),
        Some(Value::String(s)) if s == "diagonal" => Ok(MeasureTable::diagonal(space)),
        Some(Value::Object(obj)) if obj.contains_key("weights") => {
            let weights = obj["weights"]
                .as_object()
                .ok_or_else(|| Error::Format("`weights` must map history keys to rationals".into()))?;
            let mut table = vec![Rational::zero(); space.len()];
            for (key, w) in weights {
                let h = space.parse_history_key(key)?;
                let w = match w {
                    Value::String(s) => <Rational as Probability>::parse(s),
                    Value::Number(n) => n.as_u64().map(|n| <Rational as Probability>::from_ratio(n, 1)),
                    _ => None,
                }
                .ok_or_else(|| Error::Format(format!("weight {w} of history `{key}` is not a rational")))?;
                table[h] = w;
            }
            MeasureTable::new(space, table)
        }
        Some(Value::Object(obj)) if obj.contains_key("random") => {
            let r = &obj["random"];
            let seed = r.get("seed").and_then(Value::as_u64).unwrap_or(0);
            let bound = r.get("denominator_bound").and_then(Value::as_u64).unwrap_or(8);
            random_measure(space, seed, bound)
        }
        Some(other) => Err(Error::Format(format!("unrecognized measure {other}"))),
    }
}

/// A model object, or a bare causet object read as the uniform binary model.
pub fn parse_model(value: &Value) -> Result<Model<Rational>> {
    let obj = value.as_object().ok_or_else(|| Error::Format("model must be an object".into()))?;
    if obj.contains_key("elements") {
        return Model::uniform(parse_causet(value)?, 2);
    }
    let causet = parse_causet(obj.get("causet").ok_or_else(|| Error::Format("model needs a `causet`".into()))?)?;
    let alphabet = match obj.get("alphabet") {
        None => 2,
        Some(v) => v.as_u64().ok_or_else(|| Error::Format("`alphabet` must be an integer".into()))? as usize,
    };
    let space = HistorySpace::new(causet, alphabet)?;
    let dom = parse_dom(&space, obj.get("dom"))?;
    let measure = parse_measure(&space, obj.get("measure"))?;
    Model::new(space, dom, measure)
}

/// Reads a model file; errors name the file.
pub fn load_model(path: &Path) -> Result<Model<Rational>> {
    let value = read_json(path)?;
    parse_model(&value).map_err(|e| match e {
        Error::Io { .. } => e,
        other => Error::Io { path: path.display().to_string(), message: other.to_string() },
    })
}

pub fn causet_json(causet: &Causet) -> Value {
    let names = causet.names();
    json!({
        "elements": names,
        "relations": causet.relations().iter().map(|&(x, y)| [&names[x], &names[y]]).collect::<Vec<_>>(),
    })
}

pub fn region_json(causet: &Causet, r: Region) -> Value {
    json!(causet.region_names(r))
}

/// Member history keys in history order.
pub fn event_json(space: &HistorySpace, e: Event) -> Value {
    json!(e.histories().map(|h| space.history_key(h)).collect::<Vec<_>>())
}

fn opt<P: Probability>(p: &Option<P>) -> Value {
    p.as_ref().map_or(Value::Null, |p| json!(p.to_string()))
}

pub fn measure_json<P: Probability>(space: &HistorySpace, m: &MeasureTable<P>) -> Value {
    let weights: Map<String, Value> = m
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(h, w)| (space.history_key(h), json!(w.to_string())))
        .collect();
    json!({ "weights": weights })
}

pub fn counts_json(c: &Counts) -> Value {
    json!({
        "region_pairs": c.region_pairs,
        "skipped_pairs": c.skipped_pairs,
        "event_pairs": c.event_pairs,
        "screeners": c.screeners,
        "triples": c.triples,
        "null_screeners": c.null_screeners,
    })
}

pub fn witness_json<P: Probability>(space: &HistorySpace, w: &Witness<P>) -> Value {
    let causet = space.causet();
    let (kind, lhs, rhs) = match &w.failure {
        Failure::Unscreened { lhs, rhs } => ("unscreened", json!(lhs.to_string()), json!(rhs.to_string())),
        Failure::NullScreener => ("null-screener", Value::Null, Value::Null),
    };
    json!({
        "region_a": region_json(causet, w.region_a),
        "region_b": region_json(causet, w.region_b),
        "a": event_json(space, w.a),
        "b": event_json(space, w.b),
        "screener": event_json(space, w.screener),
        "failure": kind,
        "lhs": lhs,
        "rhs": rhs,
    })
}

pub fn verdict_json<P: Probability>(space: &HistorySpace, v: &Verdict<P>) -> Value {
    json!({
        "principle": v.principle.id(),
        "satisfied": v.satisfied,
        "vacuous": v.vacuous(),
        "capped": v.capped,
        "counts": counts_json(&v.counts),
        "violations": v.violations,
        "witnesses": v.witnesses.iter().map(|w| witness_json(space, w)).collect::<Vec<_>>(),
        "axiom_warning": v.axiom_warning,
    })
}

pub fn matrix_json<P: Probability>(space: &HistorySpace, m: &ImplicationMatrix<P>) -> Value {
    json!({
        "summary": m.summary(),
        "capped": m.capped(),
        "verdicts": m.verdicts.iter().map(|v| verdict_json(space, v)).collect::<Vec<_>>(),
        "implications": m.implications().iter().map(|i| json!({
            "from": i.from.id(),
            "to": i.to.id(),
            "holds": i.holds,
        })).collect::<Vec<_>>(),
    })
}

pub fn axioms_json(space: &HistorySpace, report: &AxiomReport) -> Value {
    let causet = space.causet();
    json!({
        "all_passed": report.all_passed(),
        "exhaustive": report.exhaustive,
        "family_size": report.family_size,
        "universe_size": report.universe_size,
        "axioms": report.results.iter().map(|r| json!({
            "axiom": r.axiom,
            "passed": r.passed,
            "checked": r.checked,
            "witness": r.witness.as_ref().map(|w| json!({
                "events": w.events.iter().map(|&e| event_json(space, e)).collect::<Vec<_>>(),
                "domains": w.domains.iter().map(|&d| region_json(causet, d)).collect::<Vec<_>>(),
                "detail": w.detail,
            })),
        })).collect::<Vec<_>>(),
    })
}

pub fn identity_json(causet: &Causet, id: &CrucialIdentity) -> Value {
    json!({
        "holds": id.holds(),
        "flank_a": region_json(causet, id.flank_a),
        "flank_b": region_json(causet, id.flank_b),
        "mutual_past": region_json(causet, id.mutual_past),
        "truncated_joint_past": region_json(causet, id.truncated_joint_past),
        "enlarged_truncated_joint_past": region_json(causet, id.enlarged_truncated_joint_past),
        "enlarged_spacelike": id.enlarged_spacelike,
        "identity_holds": id.identity_holds,
        "decomposition_holds": id.decomposition_holds,
        "mutual_past_avoids_regions": id.mutual_past_avoids_regions,
    })
}

pub fn replication_json<P: Probability>(space: &HistorySpace, r: &ReplicationReport<P>) -> Value {
    let causet = space.causet();
    json!({
        "region_a": region_json(causet, r.region_a),
        "region_b": region_json(causet, r.region_b),
        "applicable": r.applicable,
        "reason": r.reason,
        "passed": r.passed(),
        "identity": identity_json(causet, &r.identity),
        "steps": r.steps.iter().map(|s| json!({
            "step": s.step,
            "passed": s.passed,
            "checked": s.checked,
            "failures": s.failures,
            "witnesses": s.witnesses.iter().map(|w| json!({
                "a": event_json(space, w.a),
                "b": event_json(space, w.b),
                "x": event_json(space, w.x),
                "y": event_json(space, w.y),
                "c": event_json(space, w.c),
                "pair": w.pair,
                "lhs": opt(&w.lhs),
                "rhs": opt(&w.rhs),
                "detail": w.detail,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn gap_json(space: &HistorySpace, g: &GapReport) -> Value {
    let causet = space.causet();
    json!({
        "region_a": region_json(causet, g.region_a),
        "region_b": region_json(causet, g.region_b),
        "equal": g.equal,
        "count_identity": g.count_identity,
        "phi_mutual": g.phi_mutual,
        "phi_flank_a": g.phi_flank_a,
        "phi_flank_b": g.phi_flank_b,
        "phi_truncated": g.phi_truncated,
        "missing": g.missing.iter().map(|&e| event_json(space, e)).collect::<Vec<_>>(),
        "extra": g.extra.iter().map(|&e| event_json(space, e)).collect::<Vec<_>>(),
    })
}

pub fn common_cause_json<P: Probability>(v: &CommonCauseVerdict<P>) -> Value {
    json!({
        "qualifies": v.qualifies,
        "reichenbach_anomaly": v.reichenbach_anomaly,
        "failed": v.failed.iter().map(|f| json!({
            "condition": f.condition.to_string(),
            "lhs": opt(&f.lhs),
            "rhs": opt(&f.rhs),
        })).collect::<Vec<_>>(),
    })
}

pub fn ccs_json<P: Probability>(v: &CcsVerdict<P>) -> Value {
    json!({
        "qualifies": v.qualifies,
        "correlated": v.correlated,
        "failures": v.failures.iter().map(|f| match f {
            CcsFailure::NotCorrelated { joint, product } => json!({
                "kind": "not-correlated", "joint": joint.to_string(), "product": product.to_string(),
            }),
            CcsFailure::Screening { cell, lhs, rhs } => json!({
                "kind": "screening", "cell": cell, "lhs": lhs.to_string(), "rhs": rhs.to_string(),
            }),
            CcsFailure::NullCell { cell } => json!({ "kind": "null-cell", "cell": cell }),
            CcsFailure::Relevance { cell_i, cell_j, product } => json!({
                "kind": "relevance", "cell_i": cell_i, "cell_j": cell_j, "product": product.to_string(),
            }),
        }).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causet::fixtures as cf;
    use crate::histories::fixtures::keys;

    #[test]
    fn causet_round_trip() {
        let c = cf::diamond();
        let again = parse_causet(&causet_json(&c)).unwrap();
        assert_eq!(again.relations(), c.relations());
        assert_eq!(again.names(), c.names());
        let cyclic = json!({"elements": ["x", "y"], "relations": [["x", "y"], ["y", "x"]]});
        assert!(matches!(parse_causet(&cyclic), Err(Error::Cycle { .. })));
    }

    #[test]
    fn event_forms_agree() {
        let space = HistorySpace::new(cf::anti2(), 2).unwrap();
        let x1 = space.value_event(0, 1);
        assert_eq!(parse_event_text(&space, "x=1").unwrap(), x1);
        assert_eq!(parse_event(&space, &json!({"x": 1})).unwrap(), x1);
        assert_eq!(parse_event(&space, &event_json(&space, x1)).unwrap(), x1);
        assert_eq!(parse_event_text(&space, "10,11").unwrap(), x1);
        assert_eq!(parse_event_text(&space, "Ω").unwrap(), space.omega());
        assert!(parse_event_text(&space, "x=2").is_err());
        assert!(parse_event_text(&space, "z=0").is_err());
    }

    #[test]
    fn model_file_forms() {
        let model = parse_model(&json!({
            "causet": {"elements": ["x", "y"], "relations": []},
            "alphabet": 2,
            "dom": "canonical",
            "measure": {"weights": {"00": "1/2", "11": "1/2"}},
        }))
        .unwrap();
        let space = model.space();
        assert_eq!(model.measure().prob(keys(space, &["00"])), Rational::new(1.into(), 2.into()));
        let bare = parse_model(&json!({"elements": ["x"], "relations": []})).unwrap();
        assert_eq!(bare.space().len(), 2);
        let random = json!({"causet": {"elements": ["x", "y"]}, "measure": {"random": {"seed": 3, "denominator_bound": 5}}});
        assert_eq!(
            parse_model(&random).unwrap().measure().weights(),
            parse_model(&random).unwrap().measure().weights()
        );
        let unnormalized = json!({"causet": {"elements": ["x"]}, "measure": {"weights": {"0": "1/3"}}});
        assert!(parse_model(&unnormalized).is_err());
        let dom = json!({"causet": {"elements": ["x", "y"]}, "dom": {"x=0": ["y"]}});
        let m = parse_model(&dom).unwrap();
        assert!(!m.axioms().all_passed());
    }
}
