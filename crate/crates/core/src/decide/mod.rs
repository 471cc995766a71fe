//! Decision procedures: exact frame-local validity by order saturation,
//! bounded global validity and satisfiability with countermodel output,
//! strong-validity checks for the twin-valuation logics via the embedding,
//! and the transfer criterion.

mod search;
pub mod oracle;

pub use search::{
    sat_bounded, sat_bounded_with, valid_bounded, valid_bounded_with, SatStatus, SatVerdict,
    SearchBounds,
};

use crate::formula::{Formula, ModalOp, Var};
use crate::gvalue::{Chain, Idx, Value};
use crate::kripke::engine::{eval_single_idx, Arena, RelIdx};
use crate::kripke::{
    eval_single, eval_single_trace, eval_twin, eval_twin_trace, EvalError, ModelError, ModelFile,
    SingleModel, TwinModel, WeightedFrame,
};
use crate::transform::{embedding_pair, partial, TransformError};
use serde::Serialize;
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("search space too large: {slots} assignment slots over a {chain} value chain")]
    SearchSpaceTooLarge { slots: usize, chain: usize },
    #[error("frames must share their world set")]
    WorldSetMismatch,
    #[error("formula is outside the language of logic `{0}`")]
    LanguageMismatch(String),
    #[error("unknown logic `{0}`")]
    UnknownLogic(String),
    #[error("witness failed re-evaluation; this is a bug")]
    CertificationFailed,
}

/// How enumeration work is scheduled. `Parallel` partitions the space and
/// merges with first-witness-wins, which preserves the sequential result;
/// without the `parallel` feature it degrades to sequential execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

const CHUNK: u128 = 2048;

/// First `Some` over an index space, in index order.
fn scan_space<T: Send>(
    count: u128,
    strategy: Strategy,
    scan: impl Fn(u128, u128) -> Option<T> + Sync,
) -> Option<T> {
    let chunks = count.div_ceil(CHUNK) as u64;
    let run = |c: u64| {
        let start = c as u128 * CHUNK;
        scan(start, (start + CHUNK).min(count))
    };
    match strategy {
        Strategy::Sequential => (0..chunks).find_map(run),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..chunks).into_par_iter().find_map_first(run),
        #[cfg(not(feature = "parallel"))]
        Strategy::Parallel => (0..chunks).find_map(run),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Valid,
    Refuted,
    ExhaustedBounds,
}

/// A countermodel with its refuting world and a per-subformula value trace;
/// always re-checked against the public evaluators before being returned.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    #[serde(flatten)]
    pub model: ModelFile,
    pub world: String,
    pub value: String,
    pub trace: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SearchStats {
    pub checked: u64,
    /// Whether every point of the advertised space was enumerated.
    pub complete: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: SearchStats,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.status == VerdictStatus::Valid
    }
}

fn single_trace_strings(m: &SingleModel, f: &Formula) -> BTreeMap<String, BTreeMap<String, String>> {
    let trace = eval_single_trace(m, f).expect("witness model evaluates");
    trace
        .into_iter()
        .map(|(sub, vals)| {
            let per_world = vals
                .into_iter()
                .enumerate()
                .map(|(w, v)| (m.frame.world_name(w).to_string(), v.to_string()))
                .collect();
            (sub, per_world)
        })
        .collect()
}

fn twin_trace_strings(m: &TwinModel, f: &Formula) -> BTreeMap<String, BTreeMap<String, String>> {
    let trace = eval_twin_trace(m, f).expect("witness model evaluates");
    trace
        .into_iter()
        .map(|(sub, vals)| {
            let per_world = vals
                .into_iter()
                .enumerate()
                .map(|(w, v)| (m.frame.world_name(w).to_string(), v.to_string()))
                .collect();
            (sub, per_world)
        })
        .collect()
}

/// Saturation chain for a frame: anchors are the frame weights (plus 0 and
/// 1), with one fresh value per assignment slot squeezed into every gap, so
/// that any real-valued refuting valuation order-collapses onto the chain.
fn saturation_chain(frame: &WeightedFrame, slots: usize) -> Chain {
    Chain::with_fresh(&frame.all_weights(), slots)
}

struct Enumeration {
    chain: Chain,
    slots: usize,
    count: u128,
}

fn enumeration_for(frame: &WeightedFrame, vars: usize) -> Result<Enumeration, DecideError> {
    let slots = vars * frame.n_worlds();
    let chain = saturation_chain(frame, slots);
    let len = chain.len() as u128;
    let mut count: u128 = 1;
    for _ in 0..slots {
        count = count
            .checked_mul(len)
            .filter(|&c| c < (1 << 60))
            .ok_or(DecideError::SearchSpaceTooLarge { slots, chain: chain.len() })?;
    }
    Ok(Enumeration { chain, slots, count })
}

fn decode_assignment(mut index: u128, len: u128, assign: &mut [Idx]) {
    for slot in (0..assign.len()).rev() {
        assign[slot] = (index % len) as Idx;
        index /= len;
    }
}

/// Odometer increment in lexicographic order.
fn bump_assignment(assign: &mut [Idx], len: Idx) {
    for slot in (0..assign.len()).rev() {
        if assign[slot] + 1 < len {
            assign[slot] += 1;
            return;
        }
        assign[slot] = 0;
    }
}

fn model_of_assignment(
    frame: &WeightedFrame,
    vars: &[Var],
    chain: &Chain,
    assign: &[Idx],
) -> SingleModel {
    let n = frame.n_worlds();
    let mut m = SingleModel::new(frame.clone());
    for (vi, var) in vars.iter().enumerate() {
        let vals = (0..n).map(|w| chain.value(assign[vi * n + w]).clone()).collect();
        m.val.insert(var.clone(), vals);
    }
    m
}

/// Exact frame-local validity: no valuation on the frame refutes `f` at `w`
/// (at any world when `w` is `None`). Refutations come with the
/// lexicographically least refuting valuation.
pub fn frame_valid(
    frame: &WeightedFrame,
    f: &Formula,
    world: Option<&str>,
) -> Result<Verdict, DecideError> {
    frame_valid_with(frame, f, world, Strategy::default())
}

pub fn frame_valid_with(
    frame: &WeightedFrame,
    f: &Formula,
    world: Option<&str>,
    strategy: Strategy,
) -> Result<Verdict, DecideError> {
    let arena = Arena::compile(&[f]);
    arena.check_single()?;
    let n = frame.n_worlds();
    let target: Vec<usize> = match world {
        Some(name) => vec![frame.world_index(name)?],
        None => (0..n).collect(),
    };
    // Assignment slots are indexed by the arena's variable ids, so the
    // witness reconstruction must use the same order.
    let vars: Vec<Var> = arena.vars.clone();
    let en = enumeration_for(frame, vars.len())?;
    let rels = RelIdx::of_frame(frame, &en.chain);
    let top = en.chain.top();
    let len = en.chain.len() as u128;
    let root = arena.roots[0];

    let hit = scan_space(en.count, strategy, |start, end| {
        let mut assign = vec![0 as Idx; en.slots];
        decode_assignment(start, len, &mut assign);
        let mut out = Vec::new();
        for i in start..end {
            if i > start {
                bump_assignment(&mut assign, len as Idx);
            }
            eval_single_idx(&arena, &rels, top, &assign, None, &mut out);
            for &w in &target {
                if out[root * n + w] != top {
                    return Some((assign.clone(), w));
                }
            }
        }
        None
    });

    match hit {
        None => Ok(Verdict {
            status: VerdictStatus::Valid,
            witness: None,
            stats: SearchStats { checked: en.count as u64, complete: true },
        }),
        Some((assign, w)) => {
            let model = model_of_assignment(frame, &vars, &en.chain, &assign);
            let value = eval_single(&model, f, frame.world_name(w))?;
            if value.is_one() {
                return Err(DecideError::CertificationFailed);
            }
            let witness = Witness {
                trace: single_trace_strings(&model, f),
                model: ModelFile::from_single(&model),
                world: frame.world_name(w).to_string(),
                value: value.to_string(),
            };
            Ok(Verdict {
                status: VerdictStatus::Refuted,
                witness: Some(witness),
                stats: SearchStats { checked: 0, complete: true },
            })
        }
    }
}

/// Shared-sweep variant: decides frame validity of several formulas at every
/// world in one enumeration pass over the union chain. Returns
/// `out[formula][world]`.
pub fn frame_valid_battery(
    frame: &WeightedFrame,
    formulas: &[Formula],
    strategy: Strategy,
) -> Result<Vec<Vec<bool>>, DecideError> {
    use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

    let refs: Vec<&Formula> = formulas.iter().collect();
    let arena = Arena::compile(&refs);
    arena.check_single()?;
    let n = frame.n_worlds();
    let en = enumeration_for(frame, arena.vars.len())?;
    let rels = RelIdx::of_frame(frame, &en.chain);
    let top = en.chain.top();
    let len = en.chain.len() as u128;

    let refuted: Vec<AtomicBool> =
        (0..formulas.len() * n).map(|_| AtomicBool::new(false)).collect();
    let remaining = AtomicUsize::new(formulas.len() * n);

    scan_space::<()>(en.count, strategy, |start, end| {
        if remaining.load(Ordering::Relaxed) == 0 {
            return Some(());
        }
        let mut assign = vec![0 as Idx; en.slots];
        decode_assignment(start, len, &mut assign);
        let mut out = Vec::new();
        for i in start..end {
            if i > start {
                bump_assignment(&mut assign, len as Idx);
            }
            eval_single_idx(&arena, &rels, top, &assign, None, &mut out);
            for (fi, &root) in arena.roots.iter().enumerate() {
                for w in 0..n {
                    if out[root * n + w] != top
                        && !refuted[fi * n + w].swap(true, Ordering::Relaxed)
                    {
                        remaining.fetch_sub(1, Ordering::Relaxed);
                    }
                }
            }
            if remaining.load(Ordering::Relaxed) == 0 {
                return Some(());
            }
        }
        None
    });

    Ok((0..formulas.len())
        .map(|fi| (0..n).map(|w| !refuted[fi * n + w].load(Ordering::Relaxed)).collect())
        .collect())
}

/// Strong validity of a twin-language formula on a pointed frame, decided
/// through the two-formula embedding: the truth side must be frame-valid and
/// the dualized falsity side must be frame-valid, each checked exactly.
pub fn strong_frame_valid(
    frame: &WeightedFrame,
    f: &Formula,
    world: Option<&str>,
) -> Result<Verdict, DecideError> {
    strong_frame_valid_with(frame, f, world, Strategy::default())
}

pub fn strong_frame_valid_with(
    frame: &WeightedFrame,
    f: &Formula,
    world: Option<&str>,
    strategy: Strategy,
) -> Result<Verdict, DecideError> {
    let mono = !frame.is_birelational();
    let (truth_side, falsity_side) = embedding_pair(f, mono)?;
    let mut checked = 0;
    for side in [&truth_side, &falsity_side] {
        let verdict = frame_valid_with(frame, side, world, strategy)?;
        checked += verdict.stats.checked;
        if let Some(w) = verdict.witness {
            let twin = twin_of_single_witness(&w.model.load_single().expect("witness shape"));
            let value = eval_twin(&twin, f, &w.world)?;
            if value.is_designated() {
                return Err(DecideError::CertificationFailed);
            }
            let witness = Witness {
                trace: twin_trace_strings(&twin, f),
                model: ModelFile::from_twin(&twin),
                world: w.world,
                value: value.to_string(),
            };
            return Ok(Verdict {
                status: VerdictStatus::Refuted,
                witness: Some(witness),
                stats: SearchStats { checked, complete: true },
            });
        }
    }
    Ok(Verdict {
        status: VerdictStatus::Valid,
        witness: None,
        stats: SearchStats { checked, complete: true },
    })
}

/// Reads a refuting single-valuation witness over `p`/`p_star` variables
/// back as a twin valuation: the plain variables carry the truth supports
/// and the starred ones the falsity supports.
pub fn twin_of_single_witness(m: &SingleModel) -> TwinModel {
    let mut twin = TwinModel::new(m.frame.clone());
    let n = m.frame.n_worlds();
    let mut names: Vec<String> = m.val.keys().map(|v| v.name.clone()).collect();
    names.sort();
    names.dedup();
    for name in names {
        let var = Var::plain(name.clone());
        let t = (0..n).map(|w| m.value(&var, w)).collect();
        let f = (0..n).map(|w| m.value(&Var::starred(name.clone()), w)).collect();
        twin.val1.insert(var.clone(), t);
        twin.val2.insert(var, f);
    }
    twin
}

/// The transfer criterion at a pointed frame: if the formula is frame-valid
/// there, its dualized strong negation must be too.
pub fn check_transfer(frame: &WeightedFrame, world: &str, f: &Formula) -> Result<bool, DecideError> {
    if !frame_valid(frame, f, Some(world))?.is_valid() {
        return Ok(true);
    }
    let mono = !frame.is_birelational();
    let dual = Formula::strong_neg(partial(f, mono)?);
    Ok(frame_valid(frame, &dual, Some(world))?.is_valid())
}

/// Bi-transfer instantiated at two mono-relational frames over one world
/// set: validity on both mono frames must coincide with strong validity on
/// the two bi-relational combinations.
pub fn check_bitransfer(
    frame_r: &WeightedFrame,
    frame_s: &WeightedFrame,
    world: &str,
    f: &Formula,
) -> Result<bool, DecideError> {
    if frame_r.worlds() != frame_s.worlds() {
        return Err(DecideError::WorldSetMismatch);
    }
    if !is_plain_box_dia(f) || f.contains_de_morgan_neg() {
        return Err(DecideError::LanguageMismatch("bitransfer".to_string()));
    }
    let lhs = frame_valid(frame_r, f, Some(world))?.is_valid()
        && frame_valid(frame_s, f, Some(world))?.is_valid();

    let mut rs = frame_r.clone();
    rs.set_relations(frame_r.relation_plus().clone(), Some(frame_s.relation_plus().clone()))?;
    let mut sr = frame_r.clone();
    sr.set_relations(frame_s.relation_plus().clone(), Some(frame_r.relation_plus().clone()))?;

    let rhs = strong_frame_valid(&rs, f, Some(world))?.is_valid()
        && strong_frame_valid(&sr, f, Some(world))?.is_valid();
    Ok(lhs == rhs)
}

/// The logics the bounded search understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    /// Single-valuation, mono-relational, fuzzy frames.
    KbigF,
    /// Single-valuation, mono-relational, crisp frames.
    KbigC,
    /// Single-valuation with two relations, fuzzy / crisp.
    Kbig2F,
    Kbig2C,
    /// Twin-valuation standard modalities, mono-relational.
    Kg2F,
    Kg2C,
    /// Twin-valuation standard modalities, bi-relational.
    Kg2PmF,
    Kg2PmC,
    /// Twin-valuation informational modalities, bi-relational.
    G2BoxF,
    G2BoxC,
}

impl Logic {
    pub fn crisp(&self) -> bool {
        matches!(self, Logic::KbigC | Logic::Kbig2C | Logic::Kg2C | Logic::Kg2PmC | Logic::G2BoxC)
    }

    pub fn birelational(&self) -> bool {
        matches!(
            self,
            Logic::Kbig2F | Logic::Kbig2C | Logic::Kg2PmF | Logic::Kg2PmC | Logic::G2BoxF | Logic::G2BoxC
        )
    }

    /// Whether formulas are read with twin-valuation semantics (validity
    /// then means strong validity).
    pub fn twin(&self) -> bool {
        matches!(
            self,
            Logic::Kg2F | Logic::Kg2C | Logic::Kg2PmF | Logic::Kg2PmC | Logic::G2BoxF | Logic::G2BoxC
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Logic::KbigF => "kbig-f",
            Logic::KbigC => "kbig-c",
            Logic::Kbig2F => "kbig2",
            Logic::Kbig2C => "kbig2-c",
            Logic::Kg2F => "kg2-f",
            Logic::Kg2C => "kg2-c",
            Logic::Kg2PmF => "kg2pm-f",
            Logic::Kg2PmC => "kg2pm-c",
            Logic::G2BoxF => "g2box-f",
            Logic::G2BoxC => "g2box-c",
        }
    }
}

impl FromStr for Logic {
    type Err = DecideError;

    fn from_str(s: &str) -> Result<Logic, DecideError> {
        Ok(match s {
            "kbig-f" => Logic::KbigF,
            "kbig-c" => Logic::KbigC,
            "kbig2" | "kbig2-f" => Logic::Kbig2F,
            "kbig2-c" => Logic::Kbig2C,
            "kg2-f" => Logic::Kg2F,
            "kg2-c" => Logic::Kg2C,
            "kg2pm-f" => Logic::Kg2PmF,
            "kg2pm-c" => Logic::Kg2PmC,
            "g2box-f" => Logic::G2BoxF,
            "g2box-c" => Logic::G2BoxC,
            other => return Err(DecideError::UnknownLogic(other.to_string())),
        })
    }
}

/// Canonical value grid: the first `size` entries of
/// `0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...` (reduced fractions,
/// denominator-major). Prefix-monotone, so deepening only adds values.
pub fn value_grid(size: usize) -> Vec<Value> {
    let mut out = vec![Value::zero(), Value::one()];
    let mut den: i64 = 2;
    while out.len() < size {
        for num in 1..den {
            if num_integer::gcd(num, den) == 1 {
                out.push(Value::new(num, den).expect("grid fraction in range"));
                if out.len() == size {
                    break;
                }
            }
        }
        den += 1;
    }
    out.truncate(size);
    out
}

pub(crate) fn is_plain_box_dia(f: &Formula) -> bool {
    match f {
        Formula::Modal(op, a) => op.is_standard_plain() && is_plain_box_dia(a),
        _ => f.children().iter().all(|c| is_plain_box_dia(c)),
    }
}

/// The box/diamond prefix implication `dia^h box^i p -> box^j dia^k p`.
pub fn lemmon_scott(h: usize, i: usize, j: usize, k: usize) -> Formula {
    let p = Formula::var("p");
    Formula::impl_(
        Formula::modal_power(
            ModalOp::DIAMOND,
            h,
            Formula::modal_power(ModalOp::BOX, i, p.clone()),
        ),
        Formula::modal_power(ModalOp::BOX, j, Formula::modal_power(ModalOp::DIAMOND, k, p)),
    )
}
