//! Browser bindings: generate a random graph, rank from a node, and trace
//! residual decay. Results cross the boundary as JSON strings.

pub mod demo;

use pushrank::WeightedGraph;
use wasm_bindgen::prelude::*;

use demo::{GraphParams, RankParams};

fn parse<T: serde::de::DeserializeOwned>(json: &str) -> Result<T, JsError> {
    serde_json::from_str(json).map_err(|e| JsError::new(&e.to_string()))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub struct Demo {
    graph: WeightedGraph,
}

#[wasm_bindgen]
impl Demo {
    /// `params`: `{"nodes", "degree", "dangling", "seed", "window"?, "weighted"?}`.
    #[wasm_bindgen(constructor)]
    pub fn new(params: &str) -> Result<Demo, JsError> {
        let params: GraphParams = parse(params)?;
        Ok(Demo {
            graph: demo::generate(&params),
        })
    }

    /// Nodes, arcs and dangling nodes of the current graph.
    pub fn graph(&self) -> Result<String, JsError> {
        to_json(&demo::view(&self.graph))
    }

    /// `params`: `{"source", "alpha", "eps", "fifo"?, "absolute"?}`.
    pub fn rank(&self, params: &str) -> Result<String, JsError> {
        let params: RankParams = parse(params)?;
        let view = demo::rank(&self.graph, &params).map_err(|e| JsError::new(&e.to_string()))?;
        to_json(&view)
    }

    pub fn trace(&self, params: &str, limit: usize) -> Result<String, JsError> {
        let params: RankParams = parse(params)?;
        let view =
            demo::trace(&self.graph, &params, limit).map_err(|e| JsError::new(&e.to_string()))?;
        to_json(&view)
    }
}
