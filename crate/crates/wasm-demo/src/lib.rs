//! Browser bindings: cluster clicked 2-D points, compare the Ward variants on
//! them, and generate random points. Results cross the boundary as JSON.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use wardhc::analysis::{compare_heights, topology_equal, HeightMap};
use wardhc::engine::{agglomerate, detect_inversions, AgglomerateOptions, Algorithm};
use wardhc::experiments::uniform_data;
use wardhc::export::{self, RunMetadata, Transform};
use wardhc::{DataMatrix, LinkageMethod};

fn points(coords: &[f64]) -> Result<DataMatrix, String> {
    if !coords.len().is_multiple_of(2) {
        return Err("coordinates must come in x,y pairs".into());
    }
    if coords.len() < 4 {
        return Err("place at least two points".into());
    }
    DataMatrix::new(coords.len() / 2, 2, coords.to_vec()).map_err(|e| e.to_string())
}

/// Clusters `coords` (flattened x,y pairs) and returns the drawing, the merge
/// table and the run metadata as JSON.
pub fn cluster_json(coords: &[f64], method: &str, square_input: bool, force_scale: bool) -> Result<String, String> {
    let data = points(coords)?;
    let method: LinkageMethod = method.parse().map_err(|e: wardhc::Error| e.to_string())?;
    let dissim = if square_input { data.squared_euclidean() } else { data.euclidean() };
    let opts = AgglomerateOptions {
        masses: None,
        force_scale,
    };
    let algorithm = if method.is_reducible() { Algorithm::NnChain } else { Algorithm::Naive };
    let dend = agglomerate(&dissim, method, algorithm, &opts).map_err(|e| e.to_string())?;

    let mut metadata = RunMetadata::describe(&dend, algorithm);
    metadata.input_kind = "data-matrix".into();
    let mut transforms = vec![Transform::EuclideanDistance];
    if square_input {
        transforms.push(Transform::SquareInput);
    }
    transforms.extend(metadata.transforms);
    metadata.transforms = transforms;
    let inversions = detect_inversions(&dend);
    if !inversions.is_empty() {
        metadata.warnings.push(format!("inversions at steps {inversions:?}"));
    }

    let title = format!("{method} on {} distances", dissim.scale());
    let doc = json!({
        "svg": export::svg(&dend, None, &title),
        "heights": dend.heights(),
        "merge_table": export::merge_table(&dend),
        "newick": export::newick(&dend, None),
        "metadata": metadata,
    });
    Ok(doc.to_string())
}

/// Heights of `ward.D` on squared distances, `ward.D2` on distances and
/// `ward.D` forced onto distances, with the checks that tie the first two.
pub fn compare_variants_json(coords: &[f64]) -> Result<String, String> {
    let data = points(coords)?;
    let run = |d: &wardhc::DissimilarityMatrix, m, force| {
        let opts = AgglomerateOptions {
            masses: None,
            force_scale: force,
        };
        agglomerate(d, m, Algorithm::Naive, &opts).map_err(|e| e.to_string())
    };
    let (plain, squared) = (data.euclidean(), data.squared_euclidean());
    let wd = run(&squared, LinkageMethod::WardD, false)?;
    let wd2 = run(&plain, LinkageMethod::WardD2, false)?;
    let forced = run(&plain, LinkageMethod::WardD, true)?;
    let same = topology_equal(&wd, &wd2).map_err(|e| e.to_string())?;
    let deviation: Value = if same {
        json!(compare_heights(&wd, &wd2, HeightMap::Sqrt).map_err(|e| e.to_string())?)
    } else {
        Value::Null
    };
    let forced_same = topology_equal(&forced, &wd2).map_err(|e| e.to_string())?;
    Ok(json!({
        "ward_d_squared": wd.sorted_heights(),
        "ward_d2": wd2.sorted_heights(),
        "ward_d_plain": forced.sorted_heights(),
        "topology_equal": same,
        "max_relative_deviation_after_sqrt": deviation,
        "forced_topology_equal": forced_same,
    })
    .to_string())
}

/// `n` seeded uniform points in the unit square, flattened.
pub fn random_points_flat(n: usize, seed: u64) -> Result<Vec<f64>, String> {
    uniform_data(n, 2, seed).map(|d| d.values().to_vec()).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn cluster(coords: &[f64], method: &str, square_input: bool, force_scale: bool) -> Result<String, JsValue> {
    cluster_json(coords, method, square_input, force_scale).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn compare_variants(coords: &[f64]) -> Result<String, JsValue> {
    compare_variants_json(coords).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn random_points(n: usize, seed: u32) -> Result<Vec<f64>, JsValue> {
    random_points_flat(n, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}
