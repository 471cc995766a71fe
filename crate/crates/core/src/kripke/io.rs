//! JSON model files.
//!
//! ```json
//! {
//!   "worlds": ["w0", "w1"],
//!   "rel_plus": [["w0", "w1", "1/2"]],
//!   "rel_minus": [["w0", "w1", "3/4"]],
//!   "val1": {"p": {"w1": "1/3"}},
//!   "val2": {"p": {"w1": "2/3"}},
//!   "T": {"w0": ["0", "1/4", "1"]}
//! }
//! ```
//!
//! `rel_minus`, `val2`, `T`, and `T2` are optional; a file without `val2`
//! describes a single-valuation model, one with `T` additionally carries
//! per-world value menus. Rationals are written `"num/den"`.

use super::{FModel, ModelError, SingleModel, TwinModel, Valuation, WeightedFrame};
use crate::formula::Var;
use crate::gvalue::{Value, ValueError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("model has no `T` menus")]
    MissingMenus,
    #[error("expected a {expected} model")]
    WrongKind { expected: &'static str },
}

type EdgeList = Vec<(String, String, String)>;
type ValMap = BTreeMap<String, BTreeMap<String, String>>;
type MenuMap = BTreeMap<String, Vec<String>>;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rel_plus: EdgeList,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_minus: Option<EdgeList>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub val1: ValMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val2: Option<ValMap>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<MenuMap>,
    #[serde(rename = "T2", default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<MenuMap>,
}

/// A parsed model file: single- or twin-valuation by the presence of `val2`.
#[derive(Debug, Clone)]
pub enum LoadedModel {
    Single(SingleModel),
    Twin(TwinModel),
}

impl LoadedModel {
    pub fn frame(&self) -> &WeightedFrame {
        match self {
            LoadedModel::Single(m) => &m.frame,
            LoadedModel::Twin(m) => &m.frame,
        }
    }
}

fn var_of_key(key: &str) -> Var {
    match key.strip_suffix("_star") {
        Some(base) if !base.is_empty() => Var::starred(base),
        _ => Var::plain(key),
    }
}

fn parse_valuation(frame: &WeightedFrame, map: &ValMap) -> Result<Valuation, ModelFileError> {
    let n = frame.n_worlds();
    let mut out = Valuation::new();
    for (var, per_world) in map {
        let mut vs = vec![Value::zero(); n];
        for (world, lit) in per_world {
            vs[frame.world_index(world)?] = lit.parse()?;
        }
        out.insert(var_of_key(var), vs);
    }
    Ok(out)
}

fn valuation_to_map(frame: &WeightedFrame, val: &Valuation) -> ValMap {
    val.iter()
        .map(|(var, vs)| {
            let per_world = vs
                .iter()
                .enumerate()
                .map(|(w, v)| (frame.world_name(w).to_string(), v.to_string()))
                .collect();
            (var.to_string(), per_world)
        })
        .collect()
}

fn edges_of(frame: &WeightedFrame, minus: bool) -> EdgeList {
    let rel = if minus { frame.relation_minus() } else { frame.relation_plus() };
    let mut out = Vec::new();
    for i in 0..frame.n_worlds() {
        for j in 0..frame.n_worlds() {
            let w = rel.get(i, j);
            if !w.is_zero() {
                out.push((frame.world_name(i).into(), frame.world_name(j).into(), w.to_string()));
            }
        }
    }
    out
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<ModelFile, ModelFileError> {
        serde_json::from_str(text).map_err(|e| ModelFileError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }

    pub fn frame(&self) -> Result<WeightedFrame, ModelFileError> {
        let mut frame = WeightedFrame::new(self.worlds.clone())?;
        for (from, to, w) in &self.rel_plus {
            frame.set_plus(from, to, w.parse()?)?;
        }
        if let Some(minus) = &self.rel_minus {
            frame.make_birelational();
            for (from, to, w) in minus {
                frame.set_minus(from, to, w.parse()?)?;
            }
        }
        Ok(frame)
    }

    pub fn load(&self) -> Result<LoadedModel, ModelFileError> {
        let frame = self.frame()?;
        let val1 = parse_valuation(&frame, &self.val1)?;
        match &self.val2 {
            None => Ok(LoadedModel::Single(SingleModel { frame, val: val1 })),
            Some(v2) => {
                let val2 = parse_valuation(&frame, v2)?;
                Ok(LoadedModel::Twin(TwinModel { frame, val1, val2 }))
            }
        }
    }

    pub fn load_single(&self) -> Result<SingleModel, ModelFileError> {
        match self.load()? {
            LoadedModel::Single(m) => Ok(m),
            LoadedModel::Twin(_) => Err(ModelFileError::WrongKind { expected: "single-valuation" }),
        }
    }

    pub fn load_twin(&self) -> Result<TwinModel, ModelFileError> {
        match self.load()? {
            LoadedModel::Twin(m) => Ok(m),
            LoadedModel::Single(_) => Err(ModelFileError::WrongKind { expected: "twin-valuation" }),
        }
    }

    /// Loads as an F-model; requires single valuation and a `T` block.
    pub fn load_fmodel(&self) -> Result<FModel, ModelFileError> {
        let base = self.load_single()?;
        let Some(t) = &self.t else {
            return Err(ModelFileError::MissingMenus);
        };
        let parse_menus = |map: &MenuMap| -> Result<Vec<Vec<Value>>, ModelFileError> {
            let mut menus = vec![vec![Value::zero(), Value::one()]; base.frame.n_worlds()];
            for (world, lits) in map {
                let w = base.frame.world_index(world)?;
                menus[w] = lits.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
            }
            Ok(menus)
        };
        let t1 = parse_menus(t)?;
        let t2 = self.t2.as_ref().map(parse_menus).transpose()?;
        Ok(FModel::new(base, t1, t2)?)
    }

    pub fn from_single(m: &SingleModel) -> ModelFile {
        ModelFile {
            worlds: m.frame.worlds().to_vec(),
            rel_plus: edges_of(&m.frame, false),
            rel_minus: m.frame.is_birelational().then(|| edges_of(&m.frame, true)),
            val1: valuation_to_map(&m.frame, &m.val),
            val2: None,
            t: None,
            t2: None,
        }
    }

    pub fn from_twin(m: &TwinModel) -> ModelFile {
        ModelFile {
            worlds: m.frame.worlds().to_vec(),
            rel_plus: edges_of(&m.frame, false),
            rel_minus: m.frame.is_birelational().then(|| edges_of(&m.frame, true)),
            val1: valuation_to_map(&m.frame, &m.val1),
            val2: Some(valuation_to_map(&m.frame, &m.val2)),
            t: None,
            t2: None,
        }
    }
}

