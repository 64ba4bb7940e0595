//! JSON wire format for networks.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{DenseLayer, MlpNetwork, OutputRule};
use crate::error::{Error, Result};

#[derive(Serialize)]
struct WireOut<'a> {
    input_width: usize,
    output_rule: OutputRule,
    layers: &'a [DenseLayer],
}

#[derive(Deserialize)]
struct WireIn {
    input_width: usize,
    #[serde(default = "default_rule")]
    output_rule: OutputRule,
    layers: Vec<Value>,
}

fn default_rule() -> OutputRule {
    OutputRule::None
}

pub fn network_to_json(net: &MlpNetwork) -> String {
    serde_json::to_string_pretty(&WireOut {
        input_width: net.input_width(),
        output_rule: net.output_rule(),
        layers: net.layers(),
    })
    .expect("networks always serialize")
}

pub fn network_from_json(text: &str) -> Result<MlpNetwork> {
    let wire: WireIn = serde_json::from_str(text).map_err(|e| Error::Parse(format!("network JSON: {e}")))?;
    let mut layers = Vec::with_capacity(wire.layers.len());
    for (i, v) in wire.layers.into_iter().enumerate() {
        let l: DenseLayer = serde_json::from_value(v).map_err(|e| Error::LayerParse {
            layer: i,
            message: e.to_string(),
        })?;
        layers.push(l);
    }
    MlpNetwork::new(wire.input_width, layers, wire.output_rule)
}

pub fn save_network(net: &MlpNetwork, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, network_to_json(net))?;
    Ok(())
}

pub fn load_network(path: impl AsRef<Path>) -> Result<MlpNetwork> {
    network_from_json(&std::fs::read_to_string(path)?)
}
