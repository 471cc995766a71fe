//! Weighted frames and models, the evaluation engines, relation composition,
//! and model-level transforms.

pub(crate) mod engine;
mod io;

pub use io::{LoadedModel, ModelFile, ModelFileError};

use crate::formula::{Formula, Var};
use crate::gvalue::{g_meet, inf_of, sup_of, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("frame must have at least one world")]
    EmptyFrame,
    #[error("duplicate world id `{0}`")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("relations have different world counts")]
    SizeMismatch,
    #[error("operation requires a crisp frame")]
    NotCrisp,
    #[error("value menu for world `{0}` must contain 0 and 1")]
    BadValueMenu(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("formula is not single-valuation evaluable (contains `neg` or informational modalities)")]
    NotSingleLanguage,
    #[error("indexed modalities have no twin-valuation semantics")]
    IndexedInTwin,
}

/// A fuzzy relation on a fixed world set, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyRelation {
    n: usize,
    weights: Vec<Value>,
}

impl FuzzyRelation {
    pub fn empty(n: usize) -> FuzzyRelation {
        FuzzyRelation { n, weights: vec![Value::zero(); n * n] }
    }

    /// Crisp identity: `w R w' = 1` iff `w = w'`.
    pub fn identity(n: usize) -> FuzzyRelation {
        let mut r = FuzzyRelation::empty(n);
        for i in 0..n {
            r.weights[i * n + i] = Value::one();
        }
        r
    }

    pub fn n_worlds(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> &Value {
        &self.weights[from * self.n + to]
    }

    pub fn set(&mut self, from: usize, to: usize, w: Value) {
        self.weights[from * self.n + to] = w;
    }

    pub fn is_crisp(&self) -> bool {
        self.weights.iter().all(|w| w.is_crisp())
    }

    pub fn weights(&self) -> &[Value] {
        &self.weights
    }

    /// Sup-min composition: `u (R;S) u' = sup_w min(uRw, wSu')`.
    pub fn compose(&self, other: &FuzzyRelation) -> Result<FuzzyRelation, ModelError> {
        if self.n != other.n {
            return Err(ModelError::SizeMismatch);
        }
        let n = self.n;
        let mut out = FuzzyRelation::empty(n);
        for u in 0..n {
            for v in 0..n {
                let paths: Vec<Value> =
                    (0..n).map(|w| g_meet(self.get(u, w), other.get(w, v))).collect();
                out.set(u, v, sup_of(paths.iter()));
            }
        }
        Ok(out)
    }

    /// `n`-fold composition with itself; the 0th power is the crisp identity.
    pub fn power(&self, n: usize) -> FuzzyRelation {
        let mut out = FuzzyRelation::identity(self.n);
        for _ in 0..n {
            out = self.compose(&out).expect("same world set");
        }
        out
    }
}

/// Finite world set with one or two rational-weighted accessibility relations.
///
/// A frame without `rel_minus` is mono-relational: every engine then reads
/// `rel_plus` in both relation roles, so overline and index-2 modalities
/// coincide with their plain counterparts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedFrame {
    worlds: Vec<String>,
    rel_plus: FuzzyRelation,
    rel_minus: Option<FuzzyRelation>,
}

impl WeightedFrame {
    pub fn new(worlds: Vec<String>) -> Result<WeightedFrame, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::EmptyFrame);
        }
        for (i, w) in worlds.iter().enumerate() {
            if worlds[..i].contains(w) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let n = worlds.len();
        Ok(WeightedFrame { worlds, rel_plus: FuzzyRelation::empty(n), rel_minus: None })
    }

    /// Convenience constructor: worlds named `w0..w{n-1}`.
    pub fn with_size(n: usize) -> WeightedFrame {
        WeightedFrame::new((0..n).map(|i| format!("w{i}")).collect()).expect("nonempty")
    }

    pub fn n_worlds(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_index(&self, name: &str) -> Result<usize, ModelError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    pub fn world_name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    pub fn is_birelational(&self) -> bool {
        self.rel_minus.is_some()
    }

    pub fn relation_plus(&self) -> &FuzzyRelation {
        &self.rel_plus
    }

    /// The second relation, falling back to the first on mono-relational
    /// frames.
    pub fn relation_minus(&self) -> &FuzzyRelation {
        self.rel_minus.as_ref().unwrap_or(&self.rel_plus)
    }

    pub fn set_plus(&mut self, from: &str, to: &str, w: Value) -> Result<(), ModelError> {
        let (i, j) = (self.world_index(from)?, self.world_index(to)?);
        self.rel_plus.set(i, j, w);
        Ok(())
    }

    /// Sets a `rel_minus` weight, making the frame bi-relational if needed.
    pub fn set_minus(&mut self, from: &str, to: &str, w: Value) -> Result<(), ModelError> {
        let (i, j) = (self.world_index(from)?, self.world_index(to)?);
        self.make_birelational();
        self.rel_minus.as_mut().unwrap().set(i, j, w);
        Ok(())
    }

    /// Makes the frame bi-relational with an initially empty second relation
    /// (weights to be filled in explicitly).
    pub fn make_birelational(&mut self) {
        if self.rel_minus.is_none() {
            self.rel_minus = Some(FuzzyRelation::empty(self.n_worlds()));
        }
    }

    /// Makes the frame bi-relational by duplicating the first relation, the
    /// explicit form of the mono-relational aliasing convention.
    pub fn split_relations(&mut self) {
        if self.rel_minus.is_none() {
            self.rel_minus = Some(self.rel_plus.clone());
        }
    }

    pub fn set_relations(&mut self, plus: FuzzyRelation, minus: Option<FuzzyRelation>) -> Result<(), ModelError> {
        if plus.n_worlds() != self.n_worlds()
            || minus.as_ref().is_some_and(|m| m.n_worlds() != self.n_worlds())
        {
            return Err(ModelError::SizeMismatch);
        }
        self.rel_plus = plus;
        self.rel_minus = minus;
        Ok(())
    }

    /// Swaps `rel_plus` and `rel_minus` (identity on mono-relational frames).
    pub fn swap_relations(&self) -> WeightedFrame {
        match &self.rel_minus {
            None => self.clone(),
            Some(minus) => WeightedFrame {
                worlds: self.worlds.clone(),
                rel_plus: minus.clone(),
                rel_minus: Some(self.rel_plus.clone()),
            },
        }
    }

    /// All weights occurring in the frame (used as chain anchors).
    pub fn all_weights(&self) -> Vec<Value> {
        let mut out: Vec<Value> = self.rel_plus.weights().to_vec();
        if let Some(m) = &self.rel_minus {
            out.extend(m.weights().iter().cloned());
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Valuation table: per variable, one value per world. Undeclared variables
/// read as `0` everywhere.
pub type Valuation = BTreeMap<Var, Vec<Value>>;

fn valuation_value<'a>(val: &'a Valuation, var: &Var, w: usize) -> Value {
    val.get(var).map(|vs| vs[w].clone()).unwrap_or_else(Value::zero)
}

/// Single-valuation model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleModel {
    pub frame: WeightedFrame,
    pub val: Valuation,
}

impl SingleModel {
    pub fn new(frame: WeightedFrame) -> SingleModel {
        SingleModel { frame, val: BTreeMap::new() }
    }

    pub fn set_value(&mut self, var: Var, world: &str, v: Value) -> Result<(), ModelError> {
        let w = self.frame.world_index(world)?;
        let n = self.frame.n_worlds();
        self.val.entry(var).or_insert_with(|| vec![Value::zero(); n])[w] = v;
        Ok(())
    }

    pub fn value(&self, var: &Var, world: usize) -> Value {
        valuation_value(&self.val, var, world)
    }
}

/// Twin-valuation model; `val1` is the support of truth, `val2` of falsity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinModel {
    pub frame: WeightedFrame,
    pub val1: Valuation,
    pub val2: Valuation,
}

impl TwinModel {
    pub fn new(frame: WeightedFrame) -> TwinModel {
        TwinModel { frame, val1: BTreeMap::new(), val2: BTreeMap::new() }
    }

    pub fn set_value(&mut self, var: Var, world: &str, t: Value, f: Value) -> Result<(), ModelError> {
        let w = self.frame.world_index(world)?;
        let n = self.frame.n_worlds();
        self.val1.entry(var.clone()).or_insert_with(|| vec![Value::zero(); n])[w] = t;
        self.val2.entry(var).or_insert_with(|| vec![Value::zero(); n])[w] = f;
        Ok(())
    }

    /// Variables declared in either valuation.
    pub fn declared_vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.val1.keys().chain(self.val2.keys()).cloned().collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Model with per-world finite value menus onto which modal values are
/// rounded (down for boxes, up for diamonds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FModel {
    pub base: SingleModel,
    /// Sorted menus, one per world, each containing `0` and `1`.
    pub t1: Vec<Vec<Value>>,
    /// Menus for the second relation's modalities; `t1` is used when absent.
    pub t2: Option<Vec<Vec<Value>>>,
}

impl FModel {
    pub fn new(
        base: SingleModel,
        mut t1: Vec<Vec<Value>>,
        mut t2: Option<Vec<Vec<Value>>>,
    ) -> Result<FModel, ModelError> {
        let n = base.frame.n_worlds();
        if t1.len() != n || t2.as_ref().is_some_and(|t| t.len() != n) {
            return Err(ModelError::SizeMismatch);
        }
        for menus in std::iter::once(&mut t1).chain(t2.iter_mut()) {
            for (w, menu) in menus.iter_mut().enumerate() {
                menu.sort();
                menu.dedup();
                if !menu.contains(&Value::zero()) || !menu.contains(&Value::one()) {
                    return Err(ModelError::BadValueMenu(base.frame.world_name(w).to_string()));
                }
            }
        }
        Ok(FModel { base, t1, t2 })
    }
}

// --- Evaluation ---

/// Evaluates a single-valuation formula at one world.
pub fn eval_single(m: &SingleModel, f: &Formula, world: &str) -> Result<Value, EvalError> {
    let w = m.frame.world_index(world).map_err(|_| EvalError::UnknownWorld(world.into()))?;
    Ok(eval_single_all(m, f)?.swap_remove(w))
}

/// Evaluates at every world in one pass.
pub fn eval_single_all(m: &SingleModel, f: &Formula) -> Result<Vec<Value>, EvalError> {
    engine::run_single(m, std::slice::from_ref(&f), None).map(|mut r| r.pop().unwrap())
}

/// Evaluates a twin-valuation formula at one world.
pub fn eval_twin(m: &TwinModel, f: &Formula, world: &str) -> Result<crate::gvalue::TwinValue, EvalError> {
    let w = m.frame.world_index(world).map_err(|_| EvalError::UnknownWorld(world.into()))?;
    Ok(eval_twin_all(m, f)?.swap_remove(w))
}

pub fn eval_twin_all(m: &TwinModel, f: &Formula) -> Result<Vec<crate::gvalue::TwinValue>, EvalError> {
    engine::run_twin(m, std::slice::from_ref(&f)).map(|mut r| r.pop().unwrap())
}

/// Evaluates on an F-model: modal values are rounded into the world's menu.
pub fn eval_fmodel(fm: &FModel, f: &Formula, world: &str) -> Result<Value, EvalError> {
    let w = fm.base.frame.world_index(world).map_err(|_| EvalError::UnknownWorld(world.into()))?;
    Ok(eval_fmodel_all(fm, f)?.swap_remove(w))
}

pub fn eval_fmodel_all(fm: &FModel, f: &Formula) -> Result<Vec<Value>, EvalError> {
    engine::run_single(&fm.base, std::slice::from_ref(&f), Some(fm)).map(|mut r| r.pop().unwrap())
}

/// Per-subformula, per-world values; keys are printed subformulas.
pub fn eval_single_trace(m: &SingleModel, f: &Formula) -> Result<BTreeMap<String, Vec<Value>>, EvalError> {
    engine::trace_single(m, f)
}

pub fn eval_twin_trace(
    m: &TwinModel,
    f: &Formula,
) -> Result<BTreeMap<String, Vec<crate::gvalue::TwinValue>>, EvalError> {
    engine::trace_twin(m, f)
}

// --- Entailment ---

/// `inf{e(phi, w) : phi in Gamma} <= e(chi, w)`; the empty infimum is `1`.
pub fn entails_at_single(
    m: &SingleModel,
    gamma: &[Formula],
    chi: &Formula,
    world: &str,
) -> Result<bool, EvalError> {
    let premises: Vec<Value> =
        gamma.iter().map(|g| eval_single(m, g, world)).collect::<Result<_, _>>()?;
    let target = eval_single(m, chi, world)?;
    Ok(inf_of(premises.iter()) <= target)
}

/// Twin entailment checks both tracks: the truth-support infimum condition
/// and the falsity-support supremum condition.
pub fn entails_at_twin(
    m: &TwinModel,
    gamma: &[Formula],
    chi: &Formula,
    world: &str,
) -> Result<bool, EvalError> {
    let premises: Vec<crate::gvalue::TwinValue> =
        gamma.iter().map(|g| eval_twin(m, g, world)).collect::<Result<_, _>>()?;
    let target = eval_twin(m, chi, world)?;
    let truth_ok = inf_of(premises.iter().map(|p| &p.t)) <= target.t;
    let falsity_ok = sup_of(premises.iter().map(|p| &p.f)) >= target.f;
    Ok(truth_ok && falsity_ok)
}

// --- Model transforms ---

/// Conflation of a crisp twin model: relations swapped, valuations flipped
/// through `1 - x` with the two tracks exchanged.
///
/// The construction only covers variables declared in the model; formulas
/// over undeclared variables fall back to the `(0,0)` default on both sides.
pub fn conflate(m: &TwinModel) -> Result<TwinModel, ModelError> {
    if !m.frame.relation_plus().is_crisp() || !m.frame.relation_minus().is_crisp() {
        return Err(ModelError::NotCrisp);
    }
    let mut out = TwinModel::new(m.frame.swap_relations());
    for var in m.declared_vars() {
        let n = m.frame.n_worlds();
        let t: Vec<Value> = (0..n).map(|w| valuation_value(&m.val2, &var, w).one_minus()).collect();
        let f: Vec<Value> = (0..n).map(|w| valuation_value(&m.val1, &var, w).one_minus()).collect();
        out.val1.insert(var.clone(), t);
        out.val2.insert(var, f);
    }
    Ok(out)
}

/// The companion single-valuation model of a twin model: same worlds, both
/// relations kept, and the falsity valuation re-homed so that variables and
/// their starred twins swap places.
pub fn partial_model(m: &TwinModel) -> SingleModel {
    let mut frame = m.frame.clone();
    frame.split_relations();
    let mut out = SingleModel::new(frame);
    for (var, vals) in &m.val2 {
        let twin = Var { name: var.name.clone(), starred: !var.starred };
        out.val.insert(twin, vals.clone());
    }
    out
}
