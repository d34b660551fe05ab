//! Browser bindings for the solver: a small JSON facade over the core
//! library, consumed by the static page in `www/`.
//!
//! Each exported function takes and returns plain strings so the page
//! needs no glue beyond `JSON.parse`. The inner `*_impl` functions carry
//! the logic and are exercised by ordinary host tests; the `wasm_bindgen`
//! wrappers only translate errors into exceptions.

use sdst_jsp::instances::{self, GeneratorConfig};
use sdst_jsp::sampling::{self, SamplerConfig};
use sdst_jsp::{gantt, Instance, RuleKind, SgsKind, Time};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Iteration cap for the in-browser sampler; enough to show convergence
/// without freezing the page's only thread.
const MAX_ITERATIONS: usize = 50_000;

fn parse_instance(text: &str) -> Result<(Instance, Option<String>), String> {
    let parsed = instances::parse(text).map_err(|e| e.to_string())?;
    let warning = parsed.triangle_warning.map(|w| w.to_string());
    Ok((parsed.instance, warning))
}

fn parse_pair(sgs: &str, rule: &str) -> Result<(SgsKind, RuleKind), String> {
    let kind: SgsKind = sgs.parse().map_err(|e: sdst_jsp::sgs::UnknownSgs| e.to_string())?;
    let rule: RuleKind = rule.parse().map_err(|e: sdst_jsp::rules::UnknownRule| e.to_string())?;
    Ok((kind, rule))
}

fn generate_impl(
    jobs: u32,
    machines: u32,
    types: u32,
    scale: u32,
    seed: u32,
) -> Result<String, String> {
    if jobs == 0 || machines == 0 {
        return Err("jobs and machines must be at least 1".into());
    }
    if jobs > 30 || machines > 30 {
        return Err("demo instances are capped at 30 jobs and 30 machines".into());
    }
    let inst = instances::random_instance(&GeneratorConfig {
        jobs: jobs as usize,
        machines: machines as usize,
        type_count: (types > 0).then_some(types as usize),
        scale: scale as Time,
        seed: seed as u64,
    });
    Ok(instances::emit(&inst))
}

fn solve_impl(text: &str, sgs: &str, rule: &str) -> Result<String, String> {
    let (inst, warning) = parse_instance(text)?;
    let (kind, rule) = parse_pair(sgs, rule)?;
    let sched = sampling::single_pass(&inst, kind, rule);
    Ok(json!({
        "makespan": sched.makespan(),
        "starts": sched.starts(),
        "svg": gantt::gantt_svg(&inst, &sched),
        "warning": warning,
    })
    .to_string())
}

fn sample_impl(
    text: &str,
    sgs: &str,
    rule: &str,
    iterations: u32,
    alpha: f64,
    seed: u32,
) -> Result<String, String> {
    let (inst, warning) = parse_instance(text)?;
    let (kind, rule) = parse_pair(sgs, rule)?;
    if iterations == 0 || iterations as usize > MAX_ITERATIONS {
        return Err(format!("iterations must be in 1..={MAX_ITERATIONS}"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err("alpha must be at least 0 and below 1".into());
    }
    let cfg = SamplerConfig {
        iterations: iterations as usize,
        alpha,
        seed: seed as u64,
        ..SamplerConfig::new(kind, rule)
    };
    let out = sampling::multi_pass(&inst, &cfg);
    Ok(json!({
        "best_makespan": out.best.makespan(),
        "best_iteration": out.best_iteration,
        "trace": out.trace,
        "svg": gantt::gantt_svg(&inst, &out.best),
        "warning": warning,
    })
    .to_string())
}

/// Random instance in the solver's text format.
///
/// `types = 0` gives every operation its own setup type.
#[wasm_bindgen]
pub fn generate_instance(
    jobs: u32,
    machines: u32,
    types: u32,
    scale: u32,
    seed: u32,
) -> Result<String, JsError> {
    generate_impl(jobs, machines, types, scale, seed).map_err(|e| JsError::new(&e))
}

/// One deterministic greedy pass; returns `{makespan, starts, svg, warning}`.
#[wasm_bindgen]
pub fn solve_instance(text: &str, sgs: &str, rule: &str) -> Result<String, JsError> {
    solve_impl(text, sgs, rule).map_err(|e| JsError::new(&e))
}

/// Biased multi-pass sampling; returns
/// `{best_makespan, best_iteration, trace, svg, warning}`.
#[wasm_bindgen]
pub fn sample_instance(
    text: &str,
    sgs: &str,
    rule: &str,
    iterations: u32,
    alpha: f64,
    seed: u32,
) -> Result<String, JsError> {
    sample_impl(text, sgs, rule, iterations, alpha, seed).map_err(|e| JsError::new(&e))
}
