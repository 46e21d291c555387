//! The construction script language: line-oriented statements with `#`
//! comments and keyword=value arguments, a canonical printer, and the
//! evaluator that drives the bubbling calculus. Step kinds live behind a
//! common trait and are looked up by keyword at evaluation time.

pub mod report;
pub mod steps;

mod parser;

pub use parser::{parse, parse_manifold, ParseError};
pub use report::{emit_report, ring_data_from_report};

use crate::algebra::GradedAlgebra;
use crate::error::EngineError;
use crate::manifold::ManifoldExpr;
use crate::ring::CoefficientRing;
use crate::state::ReebState;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Script {
    pub coeff: CoefficientRing,
    pub base: BaseDecl,
    pub steps: Vec<StepDecl>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BaseDecl {
    SpecialGeneric {
        n: usize,
        summands: Vec<ManifoldExpr>,
    },
    Disc {
        n: usize,
    },
    ConcentricSpheres {
        l: usize,
        n: usize,
    },
}

impl BaseDecl {
    pub fn n(&self) -> usize {
        match self {
            BaseDecl::SpecialGeneric { n, .. }
            | BaseDecl::Disc { n }
            | BaseDecl::ConcentricSpheres { n, .. } => *n,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StepDecl {
    pub kind: String,
    pub args: Vec<(String, ArgValue)>,
}

impl StepDecl {
    pub fn arg(&self, name: &str) -> Option<&ArgValue> {
        self.args.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        match self.arg(name) {
            Some(ArgValue::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn bool_or(&self, name: &str, default: bool) -> bool {
        match self.arg(name) {
            Some(ArgValue::Bool(v)) => *v,
            _ => default,
        }
    }

    pub fn ident(&self, name: &str) -> Option<&str> {
        match self.arg(name) {
            Some(ArgValue::Ident(v)) => Some(v.as_str()),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ArgValue {
    Int(i64),
    Bool(bool),
    Ident(String),
    Manifold(ManifoldExpr),
    ManifoldList(Vec<ManifoldExpr>),
    IntList(Vec<i64>),
}

impl fmt::Display for ArgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgValue::Int(v) => write!(f, "{v}"),
            ArgValue::Bool(v) => write!(f, "{v}"),
            ArgValue::Ident(v) => write!(f, "{v}"),
            ArgValue::Manifold(m) => write!(f, "{m}"),
            ArgValue::ManifoldList(list) => {
                let parts: Vec<String> = list.iter().map(ManifoldExpr::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
            ArgValue::IntList(list) => {
                let parts: Vec<String> = list.iter().map(i64::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Canonical text form; `parse(print(s)) == s`.
pub fn print(script: &Script) -> String {
    let mut out = String::new();
    out.push_str(&format!("coeff {}\n", script.coeff));
    match &script.base {
        BaseDecl::SpecialGeneric { n, summands } => {
            let parts: Vec<String> = summands.iter().map(ManifoldExpr::to_string).collect();
            out.push_str(&format!("base sg n={n} [{}]\n", parts.join(",")));
        }
        BaseDecl::Disc { n } => out.push_str(&format!("base disc n={n}\n")),
        BaseDecl::ConcentricSpheres { l, n } => out.push_str(&format!("base cs l={l} n={n}\n")),
    }
    for step in &script.steps {
        out.push_str(&format!("step {}", step.kind));
        let order = steps::lookup(&step.kind)
            .map(|k| k.arg_order())
            .unwrap_or(&[]);
        let mut printed: Vec<&(String, ArgValue)> = Vec::new();
        for &key in order {
            if let Some(pair) = step.args.iter().find(|(k, _)| k == key) {
                printed.push(pair);
            }
        }
        for pair in &step.args {
            if !order.contains(&pair.0.as_str()) {
                printed.push(pair);
            }
        }
        for (k, v) in printed {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
    }
    out
}

/// One verdict-producing step's output, kept for the report.
#[derive(Clone, Debug, Serialize)]
pub struct StepVerdict {
    pub step: usize,
    pub kind: String,
    pub detail: serde_json::Value,
}

#[derive(Debug)]
pub struct Evaluation {
    pub state: ReebState,
    pub verdicts: Vec<StepVerdict>,
    pub windows: Vec<(usize, GradedAlgebra)>,
}

pub struct EvalContext {
    pub ring: CoefficientRing,
    pub state: ReebState,
    pub named: BTreeMap<String, ReebState>,
    pub step_index: usize,
    pub verdicts: Vec<StepVerdict>,
    pub windows: Vec<(usize, GradedAlgebra)>,
}

/// An engine error annotated with the originating step (0-based index
/// into the step list; the base declaration reports `None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalError {
    pub step: Option<usize>,
    pub source: EngineError,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}", self.source),
            None => write!(f, "base: {}", self.source),
        }
    }
}

impl std::error::Error for EvalError {}

pub fn evaluate(script: &Script) -> Result<Evaluation, EvalError> {
    evaluate_with_ring(script, None)
}

/// Evaluates a script, optionally overriding the declared coefficient
/// ring. Deterministic: the same script yields the same state.
pub fn evaluate_with_ring(
    script: &Script,
    ring: Option<CoefficientRing>,
) -> Result<Evaluation, EvalError> {
    let ring = ring.unwrap_or(script.coeff);
    let base = match &script.base {
        BaseDecl::SpecialGeneric { n, summands } => {
            ReebState::special_generic_base(summands, *n, ring)
        }
        BaseDecl::Disc { n } => ReebState::canonical_projection_base(*n, ring),
        BaseDecl::ConcentricSpheres { l, n } => ReebState::concentric_spheres_base(*l, *n, ring),
    }
    .map_err(|source| EvalError { step: None, source })?;
    let mut ctx = EvalContext {
        ring,
        state: base,
        named: BTreeMap::new(),
        step_index: 0,
        verdicts: Vec::new(),
        windows: Vec::new(),
    };
    for (i, step) in script.steps.iter().enumerate() {
        ctx.step_index = i;
        let kind = steps::lookup(&step.kind).ok_or(EvalError {
            step: Some(i),
            source: EngineError::Precondition(format!("unknown step kind `{}`", step.kind)),
        })?;
        kind.apply(step, &mut ctx).map_err(|source| EvalError {
            step: Some(i),
            source,
        })?;
        if let Some(name) = step.ident("name") {
            ctx.named.insert(name.to_string(), ctx.state.clone());
        }
    }
    Ok(Evaluation {
        state: ctx.state,
        verdicts: ctx.verdicts,
        windows: ctx.windows,
    })
}
