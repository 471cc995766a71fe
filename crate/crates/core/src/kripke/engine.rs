//! Compiled-formula evaluation on chain indices.
//!
//! Models are interned into a finite ordered [`Chain`] of their distinct
//! values; every connective is order-determined, so evaluation runs entirely
//! on integer indices and only converts back to rationals at the boundary.
//! The same machinery drives the exhaustive valuation sweeps in `decide`.

use super::{EvalError, FModel, SingleModel, TwinModel, WeightedFrame};
use crate::formula::{Formula, ModalFamily, ModalOp, ModalPolarity, ModalShape, RelIndex, Var};
use crate::gvalue::{chain_ops, Chain, Idx, TwinValue, Value};
use std::collections::BTreeMap;
use std::collections::HashMap;

/// Which relation a modal node's track reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rel {
    Plus,
    Minus,
}

/// How a modal node's track aggregates over successors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Agg {
    /// Infimum of `weight -> value`.
    InfImpl,
    /// Supremum of `weight /\ value`.
    SupMeet,
}

/// Aggregation for the truth track of a modal operator in single-valuation
/// reading.
fn single_modal(op: &ModalOp) -> Result<(Agg, Rel), EvalError> {
    if op.family == ModalFamily::Informational {
        return Err(EvalError::NotSingleLanguage);
    }
    let rel = match (op.polarity, op.index) {
        (ModalPolarity::Overline, _) | (_, Some(RelIndex::Two)) => Rel::Minus,
        _ => Rel::Plus,
    };
    let agg = match op.shape {
        ModalShape::Box => Agg::InfImpl,
        ModalShape::Diamond => Agg::SupMeet,
    };
    Ok((agg, rel))
}

/// Aggregations for the two tracks of a modal operator in twin reading.
fn twin_modal(op: &ModalOp) -> Result<((Agg, Rel), (Agg, Rel)), EvalError> {
    if op.index.is_some() {
        return Err(EvalError::IndexedInTwin);
    }
    let (r_truth, r_falsity) = match op.polarity {
        ModalPolarity::Plain => (Rel::Plus, Rel::Minus),
        ModalPolarity::Overline => (Rel::Minus, Rel::Plus),
    };
    let out = match (op.shape, op.family) {
        (ModalShape::Box, ModalFamily::Standard) => ((Agg::InfImpl, r_truth), (Agg::SupMeet, r_falsity)),
        (ModalShape::Diamond, ModalFamily::Standard) => ((Agg::SupMeet, r_truth), (Agg::InfImpl, r_falsity)),
        (ModalShape::Box, ModalFamily::Informational) => ((Agg::InfImpl, r_truth), (Agg::InfImpl, r_falsity)),
        (ModalShape::Diamond, ModalFamily::Informational) => ((Agg::SupMeet, r_truth), (Agg::SupMeet, r_falsity)),
    };
    Ok(out)
}

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Var(usize),
    Zero,
    One,
    BConst,
    StrongNeg(usize),
    DeMorganNeg(usize),
    Delta(usize),
    And(usize, usize),
    Or(usize, usize),
    Impl(usize, usize),
    Coimpl(usize, usize),
    Modal(ModalOp, usize),
}

/// Hash-consed postorder arena; shared subformulas are evaluated once.
#[derive(Debug)]
pub(crate) struct Arena {
    pub(crate) nodes: Vec<Node>,
    pub(crate) exprs: Vec<Formula>,
    pub(crate) vars: Vec<Var>,
    pub(crate) roots: Vec<usize>,
}

impl Arena {
    pub(crate) fn compile(formulas: &[&Formula]) -> Arena {
        let mut arena = Arena { nodes: Vec::new(), exprs: Vec::new(), vars: Vec::new(), roots: Vec::new() };
        let mut seen: HashMap<Formula, usize> = HashMap::new();
        let mut var_ids: HashMap<Var, usize> = HashMap::new();
        for f in formulas {
            let root = arena.intern(f, &mut seen, &mut var_ids);
            arena.roots.push(root);
        }
        arena
    }

    fn intern(
        &mut self,
        f: &Formula,
        seen: &mut HashMap<Formula, usize>,
        var_ids: &mut HashMap<Var, usize>,
    ) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let node = match f {
            Formula::Var(v) => {
                let id = *var_ids.entry(v.clone()).or_insert_with(|| {
                    self.vars.push(v.clone());
                    self.vars.len() - 1
                });
                Node::Var(id)
            }
            Formula::Zero => Node::Zero,
            Formula::One => Node::One,
            Formula::BConst => Node::BConst,
            Formula::StrongNeg(a) => Node::StrongNeg(self.intern(a, seen, var_ids)),
            Formula::DeMorganNeg(a) => Node::DeMorganNeg(self.intern(a, seen, var_ids)),
            Formula::Delta(a) => Node::Delta(self.intern(a, seen, var_ids)),
            Formula::And(a, b) => {
                Node::And(self.intern(a, seen, var_ids), self.intern(b, seen, var_ids))
            }
            Formula::Or(a, b) => {
                Node::Or(self.intern(a, seen, var_ids), self.intern(b, seen, var_ids))
            }
            Formula::Impl(a, b) => {
                Node::Impl(self.intern(a, seen, var_ids), self.intern(b, seen, var_ids))
            }
            Formula::Coimpl(a, b) => {
                Node::Coimpl(self.intern(a, seen, var_ids), self.intern(b, seen, var_ids))
            }
            Formula::Modal(op, a) => Node::Modal(*op, self.intern(a, seen, var_ids)),
        };
        self.nodes.push(node);
        self.exprs.push(f.clone());
        let id = self.nodes.len() - 1;
        seen.insert(f.clone(), id);
        id
    }

    pub(crate) fn check_single(&self) -> Result<(), EvalError> {
        for n in &self.nodes {
            match n {
                Node::DeMorganNeg(_) => return Err(EvalError::NotSingleLanguage),
                Node::Modal(op, _) => {
                    single_modal(op)?;
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub(crate) fn check_twin(&self) -> Result<(), EvalError> {
        for n in &self.nodes {
            if let Node::Modal(op, _) = n {
                twin_modal(op)?;
            }
        }
        Ok(())
    }
}

/// A frame interned into a chain: weight matrices as indices.
#[derive(Debug, Clone)]
pub(crate) struct RelIdx {
    pub(crate) n: usize,
    pub(crate) plus: Vec<Idx>,
    pub(crate) minus: Vec<Idx>,
}

impl RelIdx {
    pub(crate) fn of_frame(frame: &WeightedFrame, chain: &Chain) -> RelIdx {
        let n = frame.n_worlds();
        let index = |v: &Value| chain.index_of(v).expect("weight interned in chain");
        RelIdx {
            n,
            plus: frame.relation_plus().weights().iter().map(index).collect(),
            minus: frame.relation_minus().weights().iter().map(index).collect(),
        }
    }

    #[inline]
    fn rel(&self, which: Rel) -> &[Idx] {
        match which {
            Rel::Plus => &self.plus,
            Rel::Minus => &self.minus,
        }
    }
}

#[inline]
fn aggregate(agg: Agg, rel: &[Idx], n: usize, w: usize, top: Idx, child: &[Idx]) -> Idx {
    let row = &rel[w * n..(w + 1) * n];
    match agg {
        Agg::InfImpl => {
            let mut acc = top;
            for (w2, &weight) in row.iter().enumerate() {
                let c = chain_ops::impl_(top, weight, child[w2]);
                if c < acc {
                    acc = c;
                }
            }
            acc
        }
        Agg::SupMeet => {
            let mut acc = 0;
            for (w2, &weight) in row.iter().enumerate() {
                let c = chain_ops::meet(weight, child[w2]);
                if c > acc {
                    acc = c;
                }
            }
            acc
        }
    }
}

/// Rounds an exact index into a world's value menu (sorted indices): down for
/// boxes, up for diamonds.
#[inline]
fn round_into(menu: &[Idx], exact: Idx, down: bool) -> Idx {
    if down {
        match menu.binary_search(&exact) {
            Ok(i) => menu[i],
            Err(i) => menu[i - 1],
        }
    } else {
        match menu.binary_search(&exact) {
            Ok(i) => menu[i],
            Err(i) => menu[i],
        }
    }
}

/// Per-relation, per-world value menus, as chain indices. Absent menus mean
/// exact evaluation.
pub(crate) struct Menus {
    pub(crate) t1: Vec<Vec<Idx>>,
    pub(crate) t2: Vec<Vec<Idx>>,
}

/// Evaluates all arena nodes at all worlds in single-valuation reading.
///
/// `assign` holds one index per (variable, world), variable-major. `out` is
/// resized to `nodes x n` and filled node-major.
pub(crate) fn eval_single_idx(
    arena: &Arena,
    rels: &RelIdx,
    top: Idx,
    assign: &[Idx],
    menus: Option<&Menus>,
    out: &mut Vec<Idx>,
) {
    let n = rels.n;
    out.clear();
    out.resize(arena.nodes.len() * n, 0);
    for (i, node) in arena.nodes.iter().enumerate() {
        let (head, tail) = out.split_at_mut(i * n);
        let row = &mut tail[..n];
        let at = |j: usize| &head[j * n..(j + 1) * n];
        match node {
            Node::Var(v) => row.copy_from_slice(&assign[*v * n..(*v + 1) * n]),
            Node::Zero => row.fill(0),
            // `B` reads as 1 in single-valuation evaluation.
            Node::One | Node::BConst => row.fill(top),
            Node::StrongNeg(a) => {
                let a = at(*a);
                for w in 0..n {
                    row[w] = chain_ops::neg(top, a[w]);
                }
            }
            Node::Delta(a) => {
                let a = at(*a);
                for w in 0..n {
                    row[w] = chain_ops::delta(top, a[w]);
                }
            }
            Node::DeMorganNeg(_) => unreachable!("rejected by check_single"),
            Node::And(a, b) => {
                let (a, b) = (at(*a), at(*b));
                for w in 0..n {
                    row[w] = chain_ops::meet(a[w], b[w]);
                }
            }
            Node::Or(a, b) => {
                let (a, b) = (at(*a), at(*b));
                for w in 0..n {
                    row[w] = chain_ops::join(a[w], b[w]);
                }
            }
            Node::Impl(a, b) => {
                let (a, b) = (at(*a), at(*b));
                for w in 0..n {
                    row[w] = chain_ops::impl_(top, a[w], b[w]);
                }
            }
            Node::Coimpl(a, b) => {
                let (a, b) = (at(*a), at(*b));
                for w in 0..n {
                    row[w] = chain_ops::coimpl(a[w], b[w]);
                }
            }
            Node::Modal(op, a) => {
                let (agg, rel) = single_modal(op).expect("checked at compile");
                let a = at(*a);
                for w in 0..n {
                    let mut v = aggregate(agg, rels.rel(rel), n, w, top, a);
                    if let Some(menus) = menus {
                        let menu = match rel {
                            Rel::Plus => &menus.t1[w],
                            Rel::Minus => &menus.t2[w],
                        };
                        v = round_into(menu, v, agg == Agg::InfImpl);
                    }
                    row[w] = v;
                }
            }
        }
    }
}

/// Twin-track variant. Assignments and outputs come in (truth, falsity)
/// pairs of matrices.
#[allow(clippy::too_many_arguments)]
pub(crate) fn eval_twin_idx(
    arena: &Arena,
    rels: &RelIdx,
    top: Idx,
    assign_t: &[Idx],
    assign_f: &[Idx],
    out_t: &mut Vec<Idx>,
    out_f: &mut Vec<Idx>,
) {
    let n = rels.n;
    out_t.clear();
    out_t.resize(arena.nodes.len() * n, 0);
    out_f.clear();
    out_f.resize(arena.nodes.len() * n, 0);
    for (i, node) in arena.nodes.iter().enumerate() {
        let (head_t, tail_t) = out_t.split_at_mut(i * n);
        let (head_f, tail_f) = out_f.split_at_mut(i * n);
        let row_t = &mut tail_t[..n];
        let row_f = &mut tail_f[..n];
        macro_rules! t {
            ($j:expr) => {
                &head_t[$j * n..($j + 1) * n]
            };
        }
        macro_rules! f {
            ($j:expr) => {
                &head_f[$j * n..($j + 1) * n]
            };
        }
        match node {
            Node::Var(v) => {
                row_t.copy_from_slice(&assign_t[*v * n..(*v + 1) * n]);
                row_f.copy_from_slice(&assign_f[*v * n..(*v + 1) * n]);
            }
            Node::Zero => {
                row_t.fill(0);
                row_f.fill(top);
            }
            Node::One => {
                row_t.fill(top);
                row_f.fill(0);
            }
            Node::BConst => {
                row_t.fill(top);
                row_f.fill(top);
            }
            Node::DeMorganNeg(a) => {
                row_t.copy_from_slice(f!(*a));
                row_f.copy_from_slice(t!(*a));
            }
            Node::StrongNeg(a) => {
                let (at, af) = (t!(*a), f!(*a));
                for w in 0..n {
                    row_t[w] = chain_ops::neg(top, at[w]);
                    row_f[w] = chain_ops::coimpl(top, af[w]);
                }
            }
            Node::Delta(a) => {
                let (at, af) = (t!(*a), f!(*a));
                for w in 0..n {
                    row_t[w] = chain_ops::delta(top, at[w]);
                    row_f[w] = chain_ops::neg(top, chain_ops::neg(top, af[w]));
                }
            }
            Node::And(a, b) => {
                let (at, af, bt, bf) = (t!(*a), f!(*a), t!(*b), f!(*b));
                for w in 0..n {
                    row_t[w] = chain_ops::meet(at[w], bt[w]);
                    row_f[w] = chain_ops::join(af[w], bf[w]);
                }
            }
            Node::Or(a, b) => {
                let (at, af, bt, bf) = (t!(*a), f!(*a), t!(*b), f!(*b));
                for w in 0..n {
                    row_t[w] = chain_ops::join(at[w], bt[w]);
                    row_f[w] = chain_ops::meet(af[w], bf[w]);
                }
            }
            Node::Impl(a, b) => {
                let (at, af, bt, bf) = (t!(*a), f!(*a), t!(*b), f!(*b));
                for w in 0..n {
                    row_t[w] = chain_ops::impl_(top, at[w], bt[w]);
                    row_f[w] = chain_ops::coimpl(bf[w], af[w]);
                }
            }
            Node::Coimpl(a, b) => {
                let (at, af, bt, bf) = (t!(*a), f!(*a), t!(*b), f!(*b));
                for w in 0..n {
                    row_t[w] = chain_ops::coimpl(at[w], bt[w]);
                    row_f[w] = chain_ops::impl_(top, bf[w], af[w]);
                }
            }
            Node::Modal(op, a) => {
                let ((agg_t, rel_t), (agg_f, rel_f)) = twin_modal(op).expect("checked at compile");
                let (at, af) = (t!(*a), f!(*a));
                for w in 0..n {
                    row_t[w] = aggregate(agg_t, rels.rel(rel_t), n, w, top, at);
                    row_f[w] = aggregate(agg_f, rels.rel(rel_f), n, w, top, af);
                }
            }
        }
    }
}

// --- Interning concrete models and running the engines ---

fn model_anchors(frame: &WeightedFrame, vals: &[&super::Valuation]) -> Vec<Value> {
    let mut anchors = frame.all_weights();
    for val in vals {
        for vs in val.values() {
            anchors.extend(vs.iter().cloned());
        }
    }
    anchors
}

fn intern_assignment(chain: &Chain, val: &super::Valuation, vars: &[Var], n: usize) -> Vec<Idx> {
    let mut out = vec![0; vars.len() * n];
    for (vi, var) in vars.iter().enumerate() {
        if let Some(vs) = val.get(var) {
            for (w, v) in vs.iter().enumerate() {
                out[vi * n + w] = chain.index_of(v).expect("valuation interned in chain");
            }
        }
    }
    out
}

pub(crate) fn run_single(
    m: &SingleModel,
    formulas: &[&Formula],
    fmodel: Option<&FModel>,
) -> Result<Vec<Vec<Value>>, EvalError> {
    let arena = Arena::compile(formulas);
    arena.check_single()?;
    let n = m.frame.n_worlds();
    let mut anchors = model_anchors(&m.frame, &[&m.val]);
    if let Some(fm) = fmodel {
        for menus in std::iter::once(&fm.t1).chain(fm.t2.iter()) {
            for menu in menus {
                anchors.extend(menu.iter().cloned());
            }
        }
    }
    let chain = Chain::with_fresh(&anchors, 0);
    let rels = RelIdx::of_frame(&m.frame, &chain);
    let assign = intern_assignment(&chain, &m.val, &arena.vars, n);
    let menus = fmodel.map(|fm| {
        let to_idx = |menus: &Vec<Vec<Value>>| -> Vec<Vec<Idx>> {
            menus
                .iter()
                .map(|menu| menu.iter().map(|v| chain.index_of(v).unwrap()).collect())
                .collect()
        };
        let t1 = to_idx(&fm.t1);
        let t2 = fm.t2.as_ref().map(to_idx).unwrap_or_else(|| t1.clone());
        Menus { t1, t2 }
    });
    let mut out = Vec::new();
    eval_single_idx(&arena, &rels, chain.top(), &assign, menus.as_ref(), &mut out);
    Ok(arena
        .roots
        .iter()
        .map(|&r| out[r * n..(r + 1) * n].iter().map(|&i| chain.value(i).clone()).collect())
        .collect())
}

pub(crate) fn run_twin(m: &TwinModel, formulas: &[&Formula]) -> Result<Vec<Vec<TwinValue>>, EvalError> {
    let arena = Arena::compile(formulas);
    arena.check_twin()?;
    let n = m.frame.n_worlds();
    let anchors = model_anchors(&m.frame, &[&m.val1, &m.val2]);
    let chain = Chain::with_fresh(&anchors, 0);
    let rels = RelIdx::of_frame(&m.frame, &chain);
    let assign_t = intern_assignment(&chain, &m.val1, &arena.vars, n);
    let assign_f = intern_assignment(&chain, &m.val2, &arena.vars, n);
    let (mut out_t, mut out_f) = (Vec::new(), Vec::new());
    eval_twin_idx(&arena, &rels, chain.top(), &assign_t, &assign_f, &mut out_t, &mut out_f);
    Ok(arena
        .roots
        .iter()
        .map(|&r| {
            (0..n)
                .map(|w| {
                    TwinValue::new(
                        chain.value(out_t[r * n + w]).clone(),
                        chain.value(out_f[r * n + w]).clone(),
                    )
                })
                .collect()
        })
        .collect())
}

pub(crate) fn trace_single(
    m: &SingleModel,
    f: &Formula,
) -> Result<BTreeMap<String, Vec<Value>>, EvalError> {
    let arena = Arena::compile(&[f]);
    arena.check_single()?;
    let n = m.frame.n_worlds();
    let anchors = model_anchors(&m.frame, &[&m.val]);
    let chain = Chain::with_fresh(&anchors, 0);
    let rels = RelIdx::of_frame(&m.frame, &chain);
    let assign = intern_assignment(&chain, &m.val, &arena.vars, n);
    let mut out = Vec::new();
    eval_single_idx(&arena, &rels, chain.top(), &assign, None, &mut out);
    Ok(arena
        .exprs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            (e.to_string(), out[i * n..(i + 1) * n].iter().map(|&x| chain.value(x).clone()).collect())
        })
        .collect())
}

pub(crate) fn trace_twin(
    m: &TwinModel,
    f: &Formula,
) -> Result<BTreeMap<String, Vec<TwinValue>>, EvalError> {
    let arena = Arena::compile(&[f]);
    arena.check_twin()?;
    let n = m.frame.n_worlds();
    let anchors = model_anchors(&m.frame, &[&m.val1, &m.val2]);
    let chain = Chain::with_fresh(&anchors, 0);
    let rels = RelIdx::of_frame(&m.frame, &chain);
    let assign_t = intern_assignment(&chain, &m.val1, &arena.vars, n);
    let assign_f = intern_assignment(&chain, &m.val2, &arena.vars, n);
    let (mut out_t, mut out_f) = (Vec::new(), Vec::new());
    eval_twin_idx(&arena, &rels, chain.top(), &assign_t, &assign_f, &mut out_t, &mut out_f);
    Ok(arena
        .exprs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let vals = (0..n)
                .map(|w| {
                    TwinValue::new(
                        chain.value(out_t[i * n + w]).clone(),
                        chain.value(out_f[i * n + w]).clone(),
                    )
                })
                .collect();
            (e.to_string(), vals)
        })
        .collect())
}
