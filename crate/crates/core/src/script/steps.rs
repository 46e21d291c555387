//! Step kinds behind a common trait, registered by keyword and selected
//! at evaluation time. Each kind validates its own arguments at parse
//! time and applies one transformation to the pipeline state.

use crate::bubbling::{
    bubble_homology, connected_sum_states, manifold_window, rank_doubling_prediction, thm2_bubble,
    thm41_twisted_bubble, thm42_bubble, thm5_restrict_top, ClassChoice, GeneratingData, Ingredient,
};
use crate::distinguish::distinguish_states;
use crate::error::EngineError;
use crate::script::{ArgValue, EvalContext, StepDecl, StepVerdict};
use crate::state::ReebState;
use serde_json::json;

pub trait StepKind: Sync {
    fn keyword(&self) -> &'static str;
    /// Canonical argument order for printing.
    fn arg_order(&self) -> &'static [&'static str];
    /// Parse-time validation: argument names and value shapes.
    fn check(&self, step: &StepDecl) -> Result<(), String>;
    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError>;
}

pub fn registry() -> &'static [&'static dyn StepKind] {
    static REGISTRY: [&dyn StepKind; 8] = [
        &BubbleStep,
        &Thm2Step,
        &Thm41Step,
        &Thm42Step,
        &ConnSumStep,
        &RestrictTopStep,
        &WindowStep,
        &DistinguishStep,
    ];
    &REGISTRY
}

pub fn lookup(keyword: &str) -> Option<&'static dyn StepKind> {
    registry().iter().copied().find(|k| k.keyword() == keyword)
}

type ArgSpec = (&'static str, fn(&ArgValue) -> bool);

fn check_args(step: &StepDecl, required: &[ArgSpec], optional: &[ArgSpec]) -> Result<(), String> {
    for (name, ok) in required {
        match step.arg(name) {
            None => return Err(format!("`{}` requires {name}=...", step.kind)),
            Some(v) if !ok(v) => return Err(format!("argument `{name}` has the wrong type")),
            _ => {}
        }
    }
    for (key, value) in &step.args {
        let known = required.iter().chain(optional).find(|(n, _)| n == key);
        match known {
            None => return Err(format!("unknown argument `{key}` for `{}`", step.kind)),
            Some((_, ok)) if !ok(value) => {
                return Err(format!("argument `{key}` has the wrong type"))
            }
            _ => {}
        }
    }
    Ok(())
}

fn is_int(v: &ArgValue) -> bool {
    matches!(v, ArgValue::Int(_))
}
fn is_bool(v: &ArgValue) -> bool {
    matches!(v, ArgValue::Bool(_))
}
fn is_ident(v: &ArgValue) -> bool {
    matches!(v, ArgValue::Ident(_))
}
fn is_manifold_list(v: &ArgValue) -> bool {
    matches!(v, ArgValue::ManifoldList(_))
}
fn is_int_list(v: &ArgValue) -> bool {
    matches!(v, ArgValue::IntList(_))
}

fn positive(step: &StepDecl, name: &str) -> Result<usize, EngineError> {
    let v = step
        .int(name)
        .ok_or_else(|| EngineError::Precondition(format!("missing integer argument `{name}`")))?;
    if v < 1 {
        return Err(EngineError::Precondition(format!(
            "argument `{name}` must be at least 1"
        )));
    }
    Ok(v as usize)
}

struct BubbleStep;

impl StepKind for BubbleStep {
    fn keyword(&self) -> &'static str {
        "bubble"
    }

    fn arg_order(&self) -> &'static [&'static str] {
        &["s", "cls", "a", "disjoint", "name"]
    }

    fn check(&self, step: &StepDecl) -> Result<(), String> {
        check_args(
            step,
            &[("s", is_manifold_list)],
            &[
                ("cls", is_int),
                ("a", is_int_list),
                ("disjoint", is_bool),
                ("name", is_ident),
            ],
        )?;
        let ArgValue::ManifoldList(list) = step.arg("s").unwrap() else {
            unreachable!()
        };
        if list.is_empty() {
            return Err("the generating bouquet must not be empty".into());
        }
        if (step.arg("cls").is_some() || step.arg("a").is_some()) && list.len() != 1 {
            return Err("cls/a require a single-ingredient bouquet".into());
        }
        Ok(())
    }

    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError> {
        let ArgValue::ManifoldList(list) = step.arg("s").unwrap() else {
            unreachable!()
        };
        let class = step.int("cls").map(|idx| ClassChoice {
            class_index: idx.max(0) as usize,
            coefficients: match step.arg("a") {
                Some(ArgValue::IntList(a)) => a.clone(),
                _ => Vec::new(),
            },
        });
        let ingredients = list
            .iter()
            .enumerate()
            .map(|(i, m)| Ingredient {
                manifold: m.clone(),
                class: if i == 0 { class.clone() } else { None },
            })
            .collect();
        let data = GeneratingData {
            ingredients,
            disjoint: step.bool_or("disjoint", true),
        };
        ctx.state = bubble_homology(&ctx.state, &data)?;
        Ok(())
    }
}

struct Thm2Step;

impl StepKind for Thm2Step {
    fn keyword(&self) -> &'static str {
        "thm2"
    }

    fn arg_order(&self) -> &'static [&'static str] {
        &["k", "kp", "r0", "name"]
    }

    fn check(&self, step: &StepDecl) -> Result<(), String> {
        check_args(
            step,
            &[("k", is_int), ("kp", is_int), ("r0", is_int)],
            &[("name", is_ident)],
        )
    }

    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError> {
        let k = positive(step, "k")?;
        let kp = positive(step, "kp")?;
        let r0 = step.int("r0").unwrap();
        ctx.state = thm2_bubble(&ctx.state, k, kp, r0)?;
        Ok(())
    }
}

struct Thm41Step;

impl StepKind for Thm41Step {
    fn keyword(&self) -> &'static str {
        "thm41"
    }

    fn arg_order(&self) -> &'static [&'static str] {
        &["kp", "r0", "refined", "rprime", "name"]
    }

    fn check(&self, step: &StepDecl) -> Result<(), String> {
        check_args(
            step,
            &[("kp", is_int), ("r0", is_int)],
            &[("refined", is_bool), ("rprime", is_int), ("name", is_ident)],
        )
    }

    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError> {
        let kp = positive(step, "kp")?;
        let r0 = step.int("r0").unwrap();
        let refined = step.bool_or("refined", false);
        let rprime = step.int("rprime").unwrap_or(0);
        ctx.state = thm41_twisted_bubble(&ctx.state, kp, r0, refined, rprime)?;
        Ok(())
    }
}

struct Thm42Step;

impl StepKind for Thm42Step {
    fn keyword(&self) -> &'static str {
        "thm42"
    }

    fn arg_order(&self) -> &'static [&'static str] {
        &["kp", "p", "rp", "name"]
    }

    fn check(&self, step: &StepDecl) -> Result<(), String> {
        check_args(
            step,
            &[("kp", is_int), ("p", is_int), ("rp", is_int)],
            &[("name", is_ident)],
        )
    }

    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError> {
        let kp = positive(step, "kp")?;
        let p = step.int("p").unwrap();
        let rp = step.int("rp").unwrap();
        ctx.state = thm42_bubble(&ctx.state, kp, p, rp)?;
        Ok(())
    }
}

struct ConnSumStep;

impl StepKind for ConnSumStep {
    fn keyword(&self) -> &'static str {
        "connsum"
    }

    fn arg_order(&self) -> &'static [&'static str] {
        &["other", "name"]
    }

    fn check(&self, step: &StepDecl) -> Result<(), String> {
        check_args(step, &[("other", is_ident)], &[("name", is_ident)])
    }

    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError> {
        let other = step.ident("other").unwrap();
        let partner = resolve_state(ctx, other)?;
        // the current chain is the special-generic pipeline side
        ctx.state = connected_sum_states(&partner, &ctx.state)?;
        Ok(())
    }
}

fn resolve_state(ctx: &EvalContext, name: &str) -> Result<ReebState, EngineError> {
    if let Some(s) = ctx.named.get(name) {
        return Ok(s.clone());
    }
    if name == "disc" {
        return ReebState::canonical_projection_base(ctx.state.n, ctx.ring);
    }
    Err(EngineError::Precondition(format!(
        "unknown state name `{name}`"
    )))
}

struct RestrictTopStep;

impl StepKind for RestrictTopStep {
    fn keyword(&self) -> &'static str {
        "restrict-top"
    }

    fn arg_order(&self) -> &'static [&'static str] {
        &["rank", "name"]
    }

    fn check(&self, step: &StepDecl) -> Result<(), String> {
        check_args(step, &[("rank", is_int)], &[("name", is_ident)])
    }

    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError> {
        let rank = positive(step, "rank")?;
        ctx.state = thm5_restrict_top(&ctx.state, rank)?;
        Ok(())
    }
}

struct WindowStep;

impl StepKind for WindowStep {
    fn keyword(&self) -> &'static str {
        "window"
    }

    fn arg_order(&self) -> &'static [&'static str] {
        &["m", "sg", "name"]
    }

    fn check(&self, step: &StepDecl) -> Result<(), String> {
        check_args(
            step,
            &[("m", is_int)],
            &[("sg", is_bool), ("name", is_ident)],
        )
    }

    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError> {
        let m = positive(step, "m")?;
        let sg = step.bool_or("sg", false);
        let algebra = manifold_window(&ctx.state, m, sg)?;
        let doubling = if m == 2 * ctx.state.n {
            rank_doubling_prediction(&ctx.state, m).ok()
        } else {
            None
        };
        ctx.verdicts.push(StepVerdict {
            step: ctx.step_index,
            kind: "window".into(),
            detail: json!({
                "m": m,
                "special_generic": sg,
                "window_top": algebra.top_degree(),
                "rank_doubling": doubling,
            }),
        });
        ctx.windows.push((ctx.step_index, algebra));
        Ok(())
    }
}

struct DistinguishStep;

impl StepKind for DistinguishStep {
    fn keyword(&self) -> &'static str {
        "distinguish"
    }

    fn arg_order(&self) -> &'static [&'static str] {
        &["other", "name"]
    }

    fn check(&self, step: &StepDecl) -> Result<(), String> {
        check_args(step, &[("other", is_ident)], &[("name", is_ident)])
    }

    fn apply(&self, step: &StepDecl, ctx: &mut EvalContext) -> Result<(), EngineError> {
        let other = step.ident("other").unwrap();
        let partner = resolve_state(ctx, other)?;
        let verdict = distinguish_states(&ctx.state, &partner)?;
        ctx.verdicts.push(StepVerdict {
            step: ctx.step_index,
            kind: "distinguish".into(),
            detail: serde_json::to_value(&verdict).expect("verdicts serialize"),
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        let keywords: Vec<&str> = registry().iter().map(|k| k.keyword()).collect();
        assert_eq!(
            keywords,
            vec![
                "bubble",
                "thm2",
                "thm41",
                "thm42",
                "connsum",
                "restrict-top",
                "window",
                "distinguish"
            ]
        );
        assert!(lookup("thm2").is_some());
        assert!(lookup("nonsense").is_none());
    }
}
