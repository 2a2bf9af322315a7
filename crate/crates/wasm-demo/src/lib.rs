//! Browser bindings for the `ueoc` demo page. Every export returns a JSON
//! string; the `*_json` functions hold the logic and also run natively.

use serde_json::{json, Value};
use ueoc::bench::{generate_gn, GnParams};
use ueoc::detect::{detect_cover_traced, extract_community, unfold_community};
use ueoc::{laplacian_spectrum, load_edge_list, overlapping_nmi, score_cover, Cover, Graph, LoadedGraph, WalkConfig};
use wasm_bindgen::prelude::*;

const KARATE: &str = include_str!("../../core/data/karate.txt");
const MAX_NODES: usize = 3000;

fn parse(text: &str) -> Result<LoadedGraph, String> {
    let loaded = load_edge_list(text.as_bytes()).map_err(|e| e.to_string())?;
    if loaded.graph.node_count() > MAX_NODES {
        return Err(format!(
            "graph has {} nodes; the demo accepts up to {MAX_NODES}",
            loaded.graph.node_count()
        ));
    }
    Ok(loaded)
}

fn walk_config(steps: usize) -> Result<WalkConfig, String> {
    if steps == 0 {
        return Err("walk length must be at least 1".into());
    }
    Ok(WalkConfig::with_steps(steps))
}

fn cover_labels<'g>(cover: &Cover, g: &'g Graph) -> Vec<Vec<&'g str>> {
    cover
        .communities()
        .iter()
        .map(|c| c.members().iter().map(|&v| g.label(v)).collect())
        .collect()
}

fn cover_ids(cover: &Cover) -> Vec<&[usize]> {
    cover.communities().iter().map(|c| c.members()).collect()
}

/// Planted-partition graph, its detected cover and the agreement between them.
pub fn planted_partition_json(z_out: f64, seed: u64, steps: usize) -> Result<Value, String> {
    let (g, truth) = generate_gn(&GnParams {
        z_out,
        seed,
        ..GnParams::default()
    })
    .map_err(|e| e.to_string())?;
    let cover = detect_cover_traced(&g, &walk_config(steps)?)
        .map_err(|e| e.to_string())?
        .cover;
    let score = score_cover(&g, &cover).map_err(|e| e.to_string())?;
    let nmi = overlapping_nmi(&cover, &truth).map_err(|e| e.to_string())?;
    let edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u, v]).collect();
    Ok(json!({
        "nodes": g.node_count(),
        "edges": edges,
        "truth": cover_ids(&truth),
        "cover": cover_ids(&cover),
        "nmi": nmi,
        "ac": score.ac,
        "eq": score.eq,
    }))
}

/// Cover of a pasted edge list plus the conductance sweep from one seed.
pub fn detect_json(text: &str, seed_label: &str, steps: usize) -> Result<Value, String> {
    let loaded = parse(text)?;
    let g = &loaded.graph;
    let cfg = walk_config(steps)?;
    let d = detect_cover_traced(g, &cfg).map_err(|e| e.to_string())?;
    let score = score_cover(g, &d.cover).map_err(|e| e.to_string())?;
    let seed = if seed_label.trim().is_empty() {
        g.max_degree_node().ok_or("graph has no edges")?
    } else {
        *g.label_index()
            .get(seed_label.trim())
            .ok_or_else(|| format!("no node labelled {seed_label:?}"))?
    };
    let u = unfold_community(g, seed, &cfg).map_err(|e| e.to_string())?;
    let ex = extract_community(g, &u.ranked).map_err(|e| e.to_string())?;
    let mut communities = cover_labels(&d.cover, g);
    communities.extend(loaded.isolated.iter().map(|l| vec![l.as_str()]));
    Ok(json!({
        "nodes": g.node_count() + loaded.isolated.len(),
        "edges": g.edge_count(),
        "communities": communities,
        "overlapping": d.cover.overlapping_nodes(),
        "ac": score.ac,
        "eq": score.eq,
        "sweep": {
            "seed": g.label(seed),
            "ranked": u.ranked.nodes().iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
            "phi": ex.profile,
            "cut": ex.cut,
        },
    }))
}

/// Normalised Laplacian eigenvalues of a pasted edge list.
pub fn spectrum_json(text: &str) -> Result<Value, String> {
    let loaded = parse(text)?;
    let report = laplacian_spectrum(&loaded.graph).map_err(|e| e.to_string())?;
    Ok(json!({
        "eigenvalues": report.eigenvalues(),
        "inverse_gap": report.inverse_spectral_gap(),
        "components": report.zero_count(),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_graph() -> String {
    KARATE.to_owned()
}

#[wasm_bindgen]
pub fn planted_partition(z_out: f64, seed: u32, steps: u32) -> Result<String, JsValue> {
    to_js(planted_partition_json(z_out, u64::from(seed), steps as usize))
}

#[wasm_bindgen]
pub fn detect(text: &str, seed_label: &str, steps: u32) -> Result<String, JsValue> {
    to_js(detect_json(text, seed_label, steps as usize))
}

#[wasm_bindgen]
pub fn spectrum(text: &str) -> Result<String, JsValue> {
    to_js(spectrum_json(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_partition_without_mixing_is_recovered() {
        let v = planted_partition_json(0.0, 1, 20).unwrap();
        assert_eq!(v["nodes"], 128);
        assert_eq!(v["nmi"], 1.0);
        assert_eq!(v["cover"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn karate_detect_and_sweep() {
        let v = detect_json(KARATE, "", 20).unwrap();
        assert_eq!(v["nodes"], 34);
        assert_eq!(v["sweep"]["seed"], "34");
        let phi = v["sweep"]["phi"].as_array().unwrap();
        assert_eq!(phi.len(), v["sweep"]["ranked"].as_array().unwrap().len());
        assert!(detect_json(KARATE, "nobody", 20).is_err());
        assert!(detect_json(KARATE, "1", 0).is_err());
    }

    #[test]
    fn karate_spectrum_gap() {
        let v = spectrum_json(KARATE).unwrap();
        assert!((v["inverse_gap"].as_f64().unwrap() - 7.5602).abs() < 0.01);
        assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 34);
    }

    #[test]
    fn malformed_text_is_an_error() {
        assert!(spectrum_json("1 2 3\n").is_err());
        assert!(spectrum_json("").is_err());
    }
}
