use std::fs;
use std::path::Path;

use aam::chemio::{molecule_from_spec, parse_reaction_json, parse_smiles, MolSpec, ReactionDocument};
use aam::molgraph::MoleculeGraph;
use anyhow::{anyhow, Context};
use serde_json::Value;

use crate::{exit, Failure};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(|e| Failure::new(exit::OTHER, e))
}

pub fn read_reaction(path: &Path) -> Result<ReactionDocument, Failure> {
    let text = read(path)?;
    parse_reaction_json(&text)
        .with_context(|| format!("{}", path.display()))
        .map_err(|e| Failure::new(exit::PARSE, e))
}

/// A molecule pool, plus known reactions between its members for `stats`.
pub struct Pool {
    pub ids: Vec<String>,
    pub molecules: Vec<MoleculeGraph>,
    pub reactions: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Reads a pool: either JSON
/// `{"molecules": [{"id"?: .., <molecule>}], "reactions"?: [{"educts": [ids], "products": [ids]}]}`
/// or lines of `SMILES [id]` (blank lines and `#` comments ignored).
pub fn read_pool(path: &Path) -> Result<Pool, Failure> {
    let text = read(path)?;
    let parse = |e: anyhow::Error| Failure::new(exit::PARSE, e.context(path.display().to_string()));
    if text.trim_start().starts_with('{') {
        json_pool(&text).map_err(parse)
    } else {
        line_pool(&text).map_err(parse)
    }
}

fn line_pool(text: &str) -> anyhow::Result<Pool> {
    let mut pool = Pool {
        ids: Vec::new(),
        molecules: Vec::new(),
        reactions: Vec::new(),
    };
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let smiles = parts.next().unwrap_or_default();
        let g = parse_smiles(smiles).with_context(|| format!("line {}", k + 1))?;
        let id = parts.next().map_or_else(|| pool.molecules.len().to_string(), str::to_string);
        pool.ids.push(id);
        pool.molecules.push(g);
    }
    Ok(pool)
}

fn json_pool(text: &str) -> anyhow::Result<Pool> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root.as_object().ok_or_else(|| anyhow!("pool must be a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| *k != "molecules" && *k != "reactions") {
        return Err(anyhow!("unknown field `{k}`"));
    }
    let list = obj
        .get("molecules")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("`molecules` must be an array"))?;
    let mut ids = Vec::new();
    let mut molecules = Vec::new();
    for (k, entry) in list.iter().enumerate() {
        let mut entry = entry.clone();
        let id = match entry.as_object_mut().and_then(|o| o.remove("id")) {
            Some(Value::String(s)) => s,
            Some(_) => return Err(anyhow!("molecules[{k}]: `id` must be a string")),
            None => k.to_string(),
        };
        let spec: MolSpec = serde_json::from_value(entry).with_context(|| format!("molecules[{k}]"))?;
        molecules.push(molecule_from_spec(&spec, &format!("molecules[{k}]"))?);
        ids.push(id);
    }
    let mut reactions = Vec::new();
    if let Some(rs) = obj.get("reactions") {
        let rs = rs.as_array().ok_or_else(|| anyhow!("`reactions` must be an array"))?;
        for (k, r) in rs.iter().enumerate() {
            let side = |name: &str| -> anyhow::Result<Vec<usize>> {
                r.get(name)
                    .and_then(Value::as_array)
                    .ok_or_else(|| anyhow!("reactions[{k}]: `{name}` must be an array of ids"))?
                    .iter()
                    .map(|v| {
                        let s = v.as_str().ok_or_else(|| anyhow!("reactions[{k}]: ids are strings"))?;
                        ids.iter()
                            .position(|x| x == s)
                            .ok_or_else(|| anyhow!("reactions[{k}]: unknown molecule `{s}`"))
                    })
                    .collect()
            };
            reactions.push((side("educts")?, side("products")?));
        }
    }
    Ok(Pool {
        ids,
        molecules,
        reactions,
    })
}
