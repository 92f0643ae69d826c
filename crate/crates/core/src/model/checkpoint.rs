//! Binary checkpoint format:
//!
//! ```text
//! b"GRNN" | version: u32 LE | meta_len: u32 LE | meta: UTF-8 JSON (meta_len bytes)
//!        | parameters: f64 LE, tensors in canonical order
//! ```
//!
//! Canonical order: graph-level GRU layers, edge-level GRU layers (each
//! layer `w_x`, `w_h`, `b`), projection `w`, `b`, then head layers `w`, `b`.
//! The metadata lists every tensor length so shape drift is caught on load.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GrnnHyperparams, GrnnModel, GrnnParams};
use crate::error::{Error, Result};
use crate::nn::Params;

const MAGIC: &[u8; 4] = b"GRNN";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Meta {
    tool: String,
    hyperparams: GrnnHyperparams,
    seed: u64,
    init_policy: String,
    tensor_lens: Vec<usize>,
}

pub fn write_checkpoint(model: &GrnnModel) -> Result<Vec<u8>> {
    let meta = Meta {
        tool: crate::VERSION.to_string(),
        hyperparams: model.hp,
        seed: model.seed,
        init_policy: model.init_policy.clone(),
        tensor_lens: model.params.tensors().iter().map(|t| t.len()).collect(),
    };
    let meta = serde_json::to_vec(&meta)?;
    let mut out = Vec::with_capacity(12 + meta.len() + model.param_count() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.extend_from_slice(&(meta.len() as u32).to_le_bytes());
    out.extend_from_slice(&meta);
    for t in model.params.tensors() {
        for x in t {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    Ok(out)
}

fn take<'a>(bytes: &mut &'a [u8], n: usize, what: &str) -> Result<&'a [u8]> {
    if bytes.len() < n {
        return Err(Error::Checkpoint(format!("truncated while reading {what}")));
    }
    let (head, tail) = bytes.split_at(n);
    *bytes = tail;
    Ok(head)
}

fn read_u32(bytes: &mut &[u8], what: &str) -> Result<u32> {
    let b = take(bytes, 4, what)?;
    Ok(u32::from_le_bytes(b.try_into().expect("four bytes")))
}

pub fn read_checkpoint(mut bytes: &[u8]) -> Result<GrnnModel> {
    let input = &mut bytes;
    if take(input, 4, "magic")? != MAGIC {
        return Err(Error::Checkpoint("bad magic bytes, not a GRNN checkpoint".into()));
    }
    let version = read_u32(input, "version")?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported format version {version} (expected {CHECKPOINT_VERSION})"
        )));
    }
    let meta_len = read_u32(input, "metadata length")? as usize;
    let meta: Meta = serde_json::from_slice(take(input, meta_len, "metadata")?)
        .map_err(|e| Error::Checkpoint(format!("metadata: {e}")))?;
    meta.hyperparams
        .validate()
        .map_err(|e| Error::Checkpoint(e.to_string()))?;

    let mut params = GrnnParams::zeros(&meta.hyperparams);
    let expected: Vec<usize> = params.tensors().iter().map(|t| t.len()).collect();
    if expected != meta.tensor_lens {
        return Err(Error::Checkpoint(
            "tensor shapes in metadata do not match the hyperparameters".into(),
        ));
    }
    for t in params.tensors_mut() {
        let raw = take(input, t.len() * 8, "parameters")?;
        for (x, chunk) in t.iter_mut().zip(raw.chunks_exact(8)) {
            *x = f64::from_le_bytes(chunk.try_into().expect("eight bytes"));
        }
    }
    if !input.is_empty() {
        return Err(Error::Checkpoint(format!("{} trailing bytes", input.len())));
    }
    Ok(GrnnModel {
        hp: meta.hyperparams,
        seed: meta.seed,
        init_policy: meta.init_policy,
        params,
    })
}

pub fn save_checkpoint(model: &GrnnModel, path: &Path) -> Result<()> {
    fs::write(path, write_checkpoint(model)?)?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<GrnnModel> {
    read_checkpoint(&fs::read(path)?)
}
