//! Browser bindings. Every export takes plain strings and numbers and
//! returns a JSON string; errors surface as thrown JS strings.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use nswhard::graph::{generate_family, minimum_vertex_covers, select_cstar, d_count};
use nswhard::solver::{construct_from_cover, opt_formula};
use nswhard::valuations::{check_supermodular, CheckMode};
use nswhard::verifier::verify_capprox;
use nswhard::{build_instance, AuctionInstance, CubicGraph, ReductionParams, VertexSet};

/// Largest sampled supermodularity budget the page may ask for.
pub const MAX_SAMPLES: u64 = 200_000;

fn graph_for(family: &str, n: u32, seed: u32) -> Result<CubicGraph, String> {
    let g = if family == "random" {
        generate_family(family, Some(n as usize), Some(seed as u64))
    } else {
        generate_family(family, None, None)
    };
    g.map_err(|e| e.to_string())
}

fn instance_for(family: &str, n: u32, seed: u32, c: &str) -> Result<AuctionInstance, String> {
    let g = graph_for(family, n, seed)?;
    let params = ReductionParams::parse(c, "1/100").map_err(|e| e.to_string())?;
    Ok(build_instance(&g, &params))
}

fn parse_cover(text: &str, n: usize) -> Result<VertexSet, String> {
    let mut vs = Vec::new();
    for tok in text.split(|ch: char| ch == ',' || ch.is_whitespace()).filter(|t| !t.is_empty()) {
        let v: usize = tok.parse().map_err(|_| format!("not a vertex: {tok:?}"))?;
        if v >= n {
            return Err(format!("vertex {v} out of range for N={n}"));
        }
        vs.push(v);
    }
    Ok(VertexSet::new(vs))
}

pub fn reduce_inner(family: &str, n: u32, seed: u32, c: &str) -> Result<String, String> {
    let inst = instance_for(family, n, seed, c)?;
    let g = &inst.graph;
    let (mvc, covers) = minimum_vertex_covers(g).map_err(|e| e.to_string())?;
    let cstar = select_cstar(g).map_err(|e| e.to_string())?;
    let opt = opt_formula(&inst).map_err(|e| e.to_string())?;
    let out = json!({
        "n": g.vertex_count(),
        "edges": g.edges(),
        "agents": inst.n_agents,
        "items": inst.item_count(),
        "alpha_log2": inst.alpha_log2,
        "mvc_size": mvc,
        "mvc_count": covers.len(),
        "cstar": cstar,
        "cstar_d": d_count(g, &cstar),
        "opt": opt,
    });
    Ok(out.to_string())
}

pub fn verify_cover_inner(family: &str, n: u32, seed: u32, c: &str, cover: &str) -> Result<String, String> {
    let inst = instance_for(family, n, seed, c)?;
    let cover = parse_cover(cover, inst.vertex_count())?;
    let alloc = construct_from_cover(&inst, &cover).map_err(|e| e.to_string())?;
    let report = verify_capprox(&inst, &alloc).map_err(|e| e.to_string())?;
    let mut out = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    if let Value::Object(map) = &mut out {
        let bundles: Vec<Vec<usize>> = alloc.edge_bundles().iter().map(|b| b.iter().collect()).collect();
        map.insert("edge_bundles".into(), json!(bundles));
        map.insert("greedy_bundle".into(), json!(alloc.greedy_bundle().iter().collect::<Vec<_>>()));
    }
    Ok(out.to_string())
}

pub fn sample_supermodular_inner(family: &str, n: u32, seed: u32, samples: u32, check_seed: u32) -> Result<String, String> {
    let inst = instance_for(family, n, seed, "1")?;
    let budget = (samples as u64).clamp(1, MAX_SAMPLES);
    let r = check_supermodular(&inst, CheckMode::Sampled, budget, check_seed as u64).map_err(|e| e.to_string())?;
    let out = json!({
        "checked": r.checked,
        "violations": r.violation_count,
        "monotone_checked": r.monotone_checked,
        "passed": r.passed(),
    });
    Ok(out.to_string())
}

/// Graph, instance sizes, minimum covers and the optimum value exponents.
#[wasm_bindgen]
pub fn reduce(family: &str, n: u32, seed: u32, c: &str) -> Result<String, JsValue> {
    reduce_inner(family, n, seed, c).map_err(JsValue::from)
}

/// Builds the allocation for a cover given as "0 2 5" and runs the verifier on it.
#[wasm_bindgen]
pub fn verify_cover(family: &str, n: u32, seed: u32, c: &str, cover: &str) -> Result<String, JsValue> {
    verify_cover_inner(family, n, seed, c, cover).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn sample_supermodular(family: &str, n: u32, seed: u32, samples: u32, check_seed: u32) -> Result<String, JsValue> {
    sample_supermodular_inner(family, n, seed, samples, check_seed).map_err(JsValue::from)
}
