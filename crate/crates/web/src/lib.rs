//! Browser bindings for the demo page in `www/`. Every export returns a JSON
//! string; the plain functions underneath are what the native tests call.

use std::ops::ControlFlow;

use cds_enum::analysis::{optimize_weights, summarize, Mode, WeightSet};
use cds_enum::engine::{enumerate_with, EnumOptions};
use cds_enum::generators::{gen_base_gt, gen_gtk, gen_random_degenerate};
use cds_enum::io::{parse_dimacs, write_dimacs};
use cds_enum::Graph;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Keeps the page responsive on graphs with huge solution counts.
pub const NODE_BUDGET: u64 = 20_000_000;

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

fn mode_of(name: &str) -> Result<Mode, String> {
    name.parse().map_err(|e: cds_enum::Error| e.to_string())
}

pub fn analysis_json(mode: &str, alpha: f64, beta: f64, delta: f64) -> Result<String, String> {
    let mode = mode_of(mode)?;
    let beta = if mode == Mode::TwoDegenerate {
        1.0
    } else {
        beta
    };
    let w = WeightSet::new(alpha, beta, delta).map_err(|e| e.to_string())?;
    serde_json::to_string(&summarize(mode, &w)).map_err(|e| e.to_string())
}

pub fn optimum_json(mode: &str) -> Result<String, String> {
    let best = optimize_weights(mode_of(mode)?);
    serde_json::to_string(&best).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct GraphOut {
    n: usize,
    edges: Vec<(usize, usize)>,
    dimacs: String,
    degeneracy: usize,
}

fn graph_out(g: &Graph) -> GraphOut {
    GraphOut {
        n: g.order(),
        edges: g.edges().collect(),
        dimacs: write_dimacs(g, None),
        degeneracy: g.degeneracy().degeneracy,
    }
}

/// `family` is `gt` (a = t), `gtk` (a = t, b = k) or `random` (a = n,
/// b = d).
pub fn generate_json(family: &str, a: usize, b: usize, seed: u64) -> Result<String, String> {
    let g = match family {
        "gt" => gen_base_gt(a, true),
        "gtk" => gen_gtk(a, b).map(|(g, _)| g),
        "random" => gen_random_degenerate(a, b, seed),
        _ => return Err(format!("unknown family {family:?}")),
    }
    .map_err(|e| e.to_string())?;
    serde_json::to_string(&graph_out(&g)).map_err(|e| e.to_string())
}

/// Enumerates the solutions of a DIMACS graph, returning at most `limit` of
/// them (0-based ids) together with the total count and search counters.
pub fn enumeration_json(dimacs: &str, limit: usize) -> Result<String, String> {
    let g = parse_dimacs(dimacs).map_err(|e| e.to_string())?.graph;
    let options = EnumOptions {
        node_budget: Some(NODE_BUDGET),
        ..EnumOptions::default()
    };
    let mut shown = Vec::new();
    let outcome = enumerate_with(&g, &options, None, |s| {
        if shown.len() < limit {
            shown.push(s.as_slice().to_vec());
        }
        ControlFlow::Continue(())
    })
    .map_err(|e| e.to_string())?;
    let rules: Vec<(&str, u64)> = outcome
        .stats
        .per_rule()
        .into_iter()
        .map(|(r, c)| (r.label(), c))
        .collect();
    Ok(json!({
        "count": outcome.count,
        "solutions": shown,
        "truncated": outcome.count as usize > limit,
        "nodes": outcome.stats.nodes,
        "leaves": outcome.stats.leaves,
        "rules": rules,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn analyze(mode: &str, alpha: f64, beta: f64, delta: f64) -> Result<String, JsValue> {
    to_js(analysis_json(mode, alpha, beta, delta))
}

#[wasm_bindgen]
pub fn optimize(mode: &str) -> Result<String, JsValue> {
    to_js(optimum_json(mode))
}

#[wasm_bindgen]
pub fn generate(family: &str, a: usize, b: usize, seed: u64) -> Result<String, JsValue> {
    to_js(generate_json(family, a, b, seed))
}

#[wasm_bindgen]
pub fn enumerate(dimacs: &str, limit: usize) -> Result<String, JsValue> {
    to_js(enumeration_json(dimacs, limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn analysis_at_the_published_weights() {
        let two = parse(analysis_json("2deg", 0.106, 0.3, 0.106).unwrap());
        assert_eq!(two["all_pass"], true);
        assert!(two["max"].as_f64().unwrap() < 1.9767);
        assert_eq!(two["weights"]["beta"], 1.0);
        let general = parse(analysis_json("general", 0.110901, 0.984405, 0.143516).unwrap());
        assert!(general["max"].as_f64().unwrap() < 1.9896);
        assert_eq!(general["rows"].as_array().unwrap().len(), 27);
        assert!(analysis_json("general", 0.0, 0.5, 0.1).is_err());
        assert!(analysis_json("cubic", 0.1, 0.5, 0.1).is_err());
    }

    #[test]
    fn optimum() {
        let best = parse(optimum_json("2deg").unwrap());
        assert!(best["value"].as_f64().unwrap() <= 1.9767 + 1e-3);
    }

    #[test]
    fn generated_graph_round_trips() {
        let g = parse(generate_json("gtk", 3, 2, 0).unwrap());
        assert_eq!(g["n"], 15);
        assert!(g["degeneracy"].as_u64().unwrap() <= 3);
        let counted = parse(enumeration_json(g["dimacs"].as_str().unwrap(), 5).unwrap());
        assert_eq!(counted["count"], 225);
        assert_eq!(counted["solutions"].as_array().unwrap().len(), 5);
        assert_eq!(counted["truncated"], true);
        let r = parse(generate_json("random", 12, 2, 4).unwrap());
        assert_eq!(r["n"], 12);
        assert!(generate_json("petersen", 1, 1, 0).is_err());
        assert!(generate_json("gtk", 0, 2, 0).is_err());
    }

    #[test]
    fn enumeration_of_a_cycle() {
        let out = parse(enumeration_json("p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n", 10).unwrap());
        assert_eq!(out["count"], 4);
        assert_eq!(out["truncated"], false);
        let mut sols: Vec<Vec<u64>> = out["solutions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| {
                s.as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_u64().unwrap())
                    .collect()
            })
            .collect();
        sols.sort();
        assert_eq!(sols, vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
        assert!(enumeration_json("p edge 2 0\n", 10).is_err());
    }
}
