//! JSON report emission and reconstruction. Invariant factors are
//! serialized as strings; key order is the serializer's canonical
//! (sorted) order, so re-serialization is stable.

use crate::algebra::{GenId, GradedAlgebra};
use crate::distinguish::RingData;
use crate::error::EngineError;
use crate::module::{GradedModule, ModuleElement};
use crate::ring::CoefficientRing;
use crate::script::{print, Evaluation, Script};
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const SCHEMA: &str = "rbs-report/1";

fn module_json(m: &GradedModule) -> Value {
    let degrees: Vec<Value> = (0..=m.top_degree())
        .map(|d| {
            json!({
                "degree": d,
                "factors": m.factors(d).iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Value::Array(degrees)
}

pub fn emit_report(script: &Script, eval: &Evaluation) -> Value {
    let state = &eval.state;
    let homology = state.homology_module();
    let generators: Vec<Value> = (0..=state.n)
        .flat_map(|d| (0..state.cohomology.summands(d).len()).map(move |i| (d, i)))
        .map(|(d, i)| {
            json!({
                "degree": d,
                "index": i,
                "factor": state.cohomology.summands(d)[i].to_string(),
                "provenance": state.co_provenance[d][i].tag(),
            })
        })
        .collect();
    let q_markers: Vec<Value> = (0..=state.n)
        .flat_map(|d| state.markers_in_degree(d))
        .map(|(d, i)| json!([d, i]))
        .collect();
    let products: Vec<Value> = state
        .cohomology
        .product_entries()
        .map(|(&(a, b), v)| {
            let support: Vec<Value> = v
                .coords
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| json!([v.degree, i, c.to_string()]))
                .collect();
            json!({
                "left": [a.0, a.1],
                "right": [b.0, b.1],
                "value": support,
            })
        })
        .collect();
    let verdicts: Vec<Value> = eval
        .verdicts
        .iter()
        .map(|v| json!({"step": v.step, "kind": v.kind, "detail": v.detail}))
        .collect();
    json!({
        "schema": SCHEMA,
        "coeff": state.ring.to_string(),
        "n": state.n,
        "betti": state.betti(),
        "homology": module_json(&homology),
        "cohomology": module_json(&state.cohomology_module()),
        "generators": generators,
        "q_markers": q_markers,
        "products": products,
        "ring_certified": state.ring_certified,
        "script": print(script),
        "log": state.log.iter().map(|e| serde_json::to_value(e).expect("log serializes")).collect::<Vec<_>>(),
        "verdicts": verdicts,
    })
}

fn parse_factor(v: &Value) -> Result<i64, EngineError> {
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| EngineError::Precondition("invalid factor in report".into()))
}

fn module_from_json(
    ring: CoefficientRing,
    top: usize,
    v: &Value,
) -> Result<GradedModule, EngineError> {
    let mut raw = vec![Vec::new(); top + 1];
    for entry in v
        .as_array()
        .ok_or_else(|| EngineError::Precondition("expected a degree array".into()))?
    {
        let d = entry["degree"]
            .as_u64()
            .ok_or_else(|| EngineError::Precondition("missing degree".into()))?
            as usize;
        if d > top {
            return Err(EngineError::DegreeOutOfRange { degree: d, top });
        }
        for f in entry["factors"]
            .as_array()
            .ok_or_else(|| EngineError::Precondition("missing factors".into()))?
        {
            raw[d].push(parse_factor(f)?);
        }
    }
    GradedModule::new(ring, top, raw)
}

/// Rebuilds the comparable ring data from an emitted report.
pub fn ring_data_from_report(v: &Value) -> Result<RingData, EngineError> {
    if v["schema"].as_str() != Some(SCHEMA) {
        return Err(EngineError::Precondition(format!(
            "unsupported report schema (expected {SCHEMA})"
        )));
    }
    let ring = CoefficientRing::parse(
        v["coeff"]
            .as_str()
            .ok_or_else(|| EngineError::Precondition("missing coeff".into()))?,
    )?;
    let n = v["n"]
        .as_u64()
        .ok_or_else(|| EngineError::Precondition("missing n".into()))? as usize;
    let homology = module_from_json(ring, n, &v["homology"])?;

    let mut summands = vec![Vec::new(); n + 1];
    let mut labels = vec![Vec::new(); n + 1];
    for g in v["generators"]
        .as_array()
        .ok_or_else(|| EngineError::Precondition("missing generators".into()))?
    {
        let d = g["degree"].as_u64().unwrap_or(0) as usize;
        let i = g["index"].as_u64().unwrap_or(0) as usize;
        if d > n || i != summands[d].len() {
            return Err(EngineError::Precondition(
                "generator list is out of order".into(),
            ));
        }
        summands[d].push(parse_factor(&g["factor"])?);
        labels[d].push(format!("g{d}.{i}"));
    }
    let mut products: BTreeMap<(GenId, GenId), ModuleElement> = BTreeMap::new();
    for p in v["products"].as_array().into_iter().flatten() {
        let pos = |v: &Value| -> Result<GenId, EngineError> {
            let arr = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| EngineError::Precondition("bad generator ref".into()))?;
            Ok((
                arr[0].as_u64().unwrap_or(0) as usize,
                arr[1].as_u64().unwrap_or(0) as usize,
            ))
        };
        let a = pos(&p["left"])?;
        let b = pos(&p["right"])?;
        let d = a.0 + b.0;
        let mut value = ModuleElement::new(d, vec![0; summands[d].len()]);
        for item in p["value"].as_array().into_iter().flatten() {
            let arr = item
                .as_array()
                .filter(|x| x.len() == 3)
                .ok_or_else(|| EngineError::Precondition("bad product value".into()))?;
            let idx = arr[1].as_u64().unwrap_or(0) as usize;
            value.coords[idx] = parse_factor(&arr[2])?;
        }
        products.insert((a, b), value);
    }
    let algebra = GradedAlgebra::from_parts(ring, n, summands, labels, products)?;
    Ok(RingData {
        n,
        ring,
        homology,
        cohomology: algebra.module(),
        algebra,
        ring_certified: v["ring_certified"].as_bool().unwrap_or(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distinguish::{distinguish, Verdict};
    use crate::script::{evaluate, parse};

    #[test]
    fn report_is_stable_under_reserialization() {
        let s = parse("coeff Z\nbase sg n=6 [S2]\nstep thm2 k=1 kp=2 r0=2\n").unwrap();
        let e = evaluate(&s).unwrap();
        let r = emit_report(&s, &e);
        let text = serde_json::to_string_pretty(&r).unwrap();
        let reparsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&reparsed).unwrap(), text);
        assert_eq!(r["schema"], SCHEMA);
        assert_eq!(r["betti"], json!([1, 0, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn report_roundtrips_to_ring_data() {
        let s = parse("coeff Z\nbase sg n=6 [S2]\nstep thm2 k=1 kp=2 r0=2\n").unwrap();
        let e = evaluate(&s).unwrap();
        let r = emit_report(&s, &e);
        let data = ring_data_from_report(&r).unwrap();
        let direct = crate::distinguish::RingData::of_state(&e.state);
        assert_eq!(
            distinguish(&data, &direct).unwrap(),
            Verdict::InvariantsAgree
        );
    }

    #[test]
    fn torsion_is_reported_as_strings() {
        let s = parse("coeff Z\nbase sg n=6 [S2]\nstep thm41 kp=2 r0=3\n").unwrap();
        let e = evaluate(&s).unwrap();
        let r = emit_report(&s, &e);
        let h4 = &r["homology"][4]["factors"];
        assert_eq!(h4, &json!(["6"]));
    }
}
