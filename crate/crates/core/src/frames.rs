//! Frame-property checkers with constructive refuting valuations, and the
//! weighted confluence correspondence for box/diamond prefix formulas.

use crate::decide::{
    frame_valid, lemmon_scott, strong_frame_valid, DecideError, VerdictStatus,
};
use crate::formula::{Formula, Var};
use crate::gvalue::{sup_of, Value};
use crate::kripke::{eval_twin, FuzzyRelation, ModelError, SingleModel, TwinModel, WeightedFrame};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FramesError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("the confluence condition holds at this triple; no refutation exists")]
    ConfluenceHolds,
    #[error("structural check and frame validity disagree at world `{0}`; this is a bug")]
    ConsistencyFailure(String),
    #[error("counterpart checks are defined on crisp frames")]
    NotCrisp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelSel {
    Plus,
    Minus,
}

fn relation(frame: &WeightedFrame, which: RelSel) -> &FuzzyRelation {
    match which {
        RelSel::Plus => frame.relation_plus(),
        RelSel::Minus => frame.relation_minus(),
    }
}

pub fn is_crisp(frame: &WeightedFrame, which: RelSel) -> bool {
    relation(frame, which).is_crisp()
}

/// First properly fuzzy edge of a relation, row-major.
fn fuzzy_edge(rel: &FuzzyRelation) -> Option<(usize, usize, Value)> {
    let n = rel.n_worlds();
    for w in 0..n {
        for w2 in 0..n {
            let weight = rel.get(w, w2);
            if !weight.is_crisp() {
                return Some((w, w2, weight.clone()));
            }
        }
    }
    None
}

/// A valuation refuting the crispness axiom of the selected relation, with
/// the world it refutes at; `None` when the relation is crisp.
///
/// For the first relation the axiom is `tri[]p -> []tri p` and the witness
/// puts the fuzzy weight itself on `p` at the target; for the second it is
/// `<>~~p -> ~~<>p` with the weight on the falsity support and full supports
/// elsewhere. Both witnesses re-evaluate to genuine strong-validity
/// failures.
pub fn crispness_witness(
    frame: &WeightedFrame,
    which: RelSel,
) -> Result<Option<(TwinModel, String)>, FramesError> {
    let Some((w, w2, weight)) = fuzzy_edge(relation(frame, which)) else {
        return Ok(None);
    };
    let mut model = TwinModel::new(frame.clone());
    let p = Var::plain("p");
    let n = frame.n_worlds();
    let (t, f): (Vec<Value>, Vec<Value>) = match which {
        RelSel::Plus => (0..n)
            .map(|i| {
                if i == w2 {
                    (weight.clone(), Value::zero())
                } else {
                    (Value::one(), Value::zero())
                }
            })
            .unzip(),
        RelSel::Minus => (0..n)
            .map(|i| {
                if i == w2 {
                    (Value::one(), weight.clone())
                } else {
                    (Value::one(), Value::one())
                }
            })
            .unzip(),
    };
    model.val1.insert(p.clone(), t);
    model.val2.insert(p, f);
    let world = frame.world_name(w).to_string();
    let axiom = crispness_axiom(which);
    if eval_twin(&model, &axiom, &world).expect("witness evaluates").is_designated() {
        return Err(FramesError::ConsistencyFailure(world));
    }
    Ok(Some((model, world)))
}

pub fn crispness_axiom(which: RelSel) -> Formula {
    match which {
        RelSel::Plus => "tri[]p -> []tri p".parse().unwrap(),
        RelSel::Minus => "<>~~p -> ~~<>p".parse().unwrap(),
    }
}

pub fn relations_equal(frame: &WeightedFrame) -> bool {
    !frame.is_birelational() || frame.relation_plus() == frame.relation_minus()
}

/// The box/diamond interdefinability biconditional, strongly valid exactly
/// on frames with equal relations.
pub fn interdefinability_axiom() -> Formula {
    Formula::iff(
        "[]p".parse().unwrap(),
        Formula::de_morgan_neg(Formula::diamond(Formula::de_morgan_neg(Formula::var("p")))),
    )
}

/// A valuation refuting box/diamond interdefinability when the two relations
/// differ: `p` takes a value strictly between the two weights at the first
/// differing edge, full truth elsewhere.
pub fn monorel_witness(frame: &WeightedFrame) -> Result<Option<(TwinModel, String)>, FramesError> {
    if relations_equal(frame) {
        return Ok(None);
    }
    let n = frame.n_worlds();
    let (plus, minus) = (frame.relation_plus(), frame.relation_minus());
    let (w, w2) = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| plus.get(a, b) != minus.get(a, b))
        .expect("relations differ");
    let (x, y) = (plus.get(w, w2), minus.get(w, w2));
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let mid = Value::midpoint(lo, hi);
    let mut model = TwinModel::new(frame.clone());
    let p = Var::plain("p");
    let t: Vec<Value> =
        (0..n).map(|i| if i == w2 { mid.clone() } else { Value::one() }).collect();
    model.val1.insert(p.clone(), t);
    model.val2.insert(p, vec![Value::zero(); n]);
    let world = frame.world_name(w).to_string();
    if eval_twin(&model, &interdefinability_axiom(), &world)
        .expect("witness evaluates")
        .is_designated()
    {
        return Err(FramesError::ConsistencyFailure(world));
    }
    Ok(Some((model, world)))
}

/// The weighted confluence condition at `x` for prefix lengths
/// `(h, i, j, k)`: for all `y, z`,
/// `min(R^h(x,y), R^j(x,z)) <= sup_w min(R^i(y,w), R^k(z,w))`.
pub fn fls_condition(
    frame: &WeightedFrame,
    x: &str,
    h: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<bool, FramesError> {
    Ok(fls_failure(frame, x, h, i, j, k)?.is_none())
}

/// First `(y, z)` pair violating the confluence condition, if any.
pub fn fls_failure(
    frame: &WeightedFrame,
    x: &str,
    h: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Option<(String, String)>, FramesError> {
    let xi = frame.world_index(x).map_err(|_| FramesError::UnknownWorld(x.to_string()))?;
    let rel = frame.relation_plus();
    let (rh, ri, rj, rk) = (rel.power(h), rel.power(i), rel.power(j), rel.power(k));
    let n = frame.n_worlds();
    for y in 0..n {
        for z in 0..n {
            let lhs = crate::gvalue::g_meet(rh.get(xi, y), rj.get(xi, z));
            let rhs = sup_of(
                (0..n)
                    .map(|w| crate::gvalue::g_meet(ri.get(y, w), rk.get(z, w)))
                    .collect::<Vec<_>>()
                    .iter(),
            );
            if lhs > rhs {
                return Ok(Some((
                    frame.world_name(y).to_string(),
                    frame.world_name(z).to_string(),
                )));
            }
        }
    }
    Ok(None)
}

/// Constructive countermodel when confluence fails at `(x, y, z)`: `p` takes
/// the value `R^i(y, w)` at every `w` reachable that way and `0` elsewhere,
/// which pushes the diamond-box prefix above the box-diamond prefix at `x`.
pub fn fls_refuting_valuation(
    frame: &WeightedFrame,
    x: &str,
    y: &str,
    z: &str,
    h: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<SingleModel, FramesError> {
    let xi = frame.world_index(x).map_err(|_| FramesError::UnknownWorld(x.to_string()))?;
    let yi = frame.world_index(y).map_err(|_| FramesError::UnknownWorld(y.to_string()))?;
    let zi = frame.world_index(z).map_err(|_| FramesError::UnknownWorld(z.to_string()))?;
    let rel = frame.relation_plus();
    let (rh, ri, rj, rk) = (rel.power(h), rel.power(i), rel.power(j), rel.power(k));
    let n = frame.n_worlds();
    let lhs = crate::gvalue::g_meet(rh.get(xi, yi), rj.get(xi, zi));
    let rhs = sup_of(
        (0..n).map(|w| crate::gvalue::g_meet(ri.get(yi, w), rk.get(zi, w))).collect::<Vec<_>>().iter(),
    );
    if lhs <= rhs {
        return Err(FramesError::ConfluenceHolds);
    }
    let mut model = SingleModel::new(frame.clone());
    let vals: Vec<Value> = (0..n).map(|w| ri.get(yi, w).clone()).collect();
    model.val.insert(Var::plain("p"), vals);
    let formula = lemmon_scott(h, i, j, k);
    if crate::kripke::eval_single(&model, &formula, x).expect("witness evaluates").is_one() {
        return Err(FramesError::ConsistencyFailure(x.to_string()));
    }
    Ok(model)
}

/// Checks the confluence condition and asserts it agrees with exact frame
/// validity of the matching box/diamond prefix implication; disagreement is
/// an internal error.
pub fn fls_frame_check(
    frame: &WeightedFrame,
    x: &str,
    h: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<bool, FramesError> {
    let structural = fls_condition(frame, x, h, i, j, k)?;
    let semantic = frame_valid(frame, &lemmon_scott(h, i, j, k), Some(x))?.is_valid();
    if structural != semantic {
        return Err(FramesError::ConsistencyFailure(x.to_string()));
    }
    Ok(structural)
}

/// Worlds whose outgoing supremum is strictly between 0 and 1; exactly the
/// worlds where `~tri<> 1 & ~[]0` is frame-valid.
pub fn tau_seriality_check(frame: &WeightedFrame) -> Vec<String> {
    let rel = frame.relation_plus();
    let n = frame.n_worlds();
    (0..n)
        .filter(|&w| {
            let sup = sup_of((0..n).map(|w2| rel.get(w, w2)));
            !sup.is_zero() && !sup.is_one()
        })
        .map(|w| frame.world_name(w).to_string())
        .collect()
}

pub fn tau_formula() -> Formula {
    "~tri<> 1 & ~[]0".parse().unwrap()
}

/// Closed library of frame classes for counterpart checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameClass {
    Reflexive,
    Serial,
    Confluent { h: usize, i: usize, j: usize, k: usize },
    Crisp,
}

impl FrameClass {
    /// Membership of a crisp mono-relational frame.
    fn contains(&self, rel: &FuzzyRelation) -> Result<bool, FramesError> {
        let n = rel.n_worlds();
        Ok(match self {
            FrameClass::Reflexive => (0..n).all(|w| rel.get(w, w).is_one()),
            FrameClass::Serial => (0..n).all(|w| (0..n).any(|w2| rel.get(w, w2).is_one())),
            FrameClass::Crisp => rel.is_crisp(),
            FrameClass::Confluent { h, i, j, k } => {
                let mut frame = WeightedFrame::with_size(n);
                let mut copy = FuzzyRelation::empty(n);
                for a in 0..n {
                    for b in 0..n {
                        copy.set(a, b, rel.get(a, b).clone());
                    }
                }
                frame.set_relations(copy, None)?;
                for w in 0..n {
                    let name = frame.world_name(w).to_string();
                    if !fls_condition(&frame, &name, *h, *i, *j, *k)? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterpartMode {
    Plus,
    Minus,
    PlusMinus,
}

/// Whether a crisp bi-relational frame's projections belong to the class,
/// per the selected mode.
pub fn counterpart_membership(
    frame: &WeightedFrame,
    class: &FrameClass,
    mode: CounterpartMode,
) -> Result<bool, FramesError> {
    if !frame.relation_plus().is_crisp() || !frame.relation_minus().is_crisp() {
        return Err(FramesError::NotCrisp);
    }
    let plus = || class.contains(frame.relation_plus());
    let minus = || class.contains(frame.relation_minus());
    Ok(match mode {
        CounterpartMode::Plus => plus()?,
        CounterpartMode::Minus => minus()?,
        CounterpartMode::PlusMinus => plus()? && minus()?,
    })
}

pub fn finitely_branching_axioms_formulas() -> (Formula, Formula) {
    ("~~[](p | ~p)".parse().unwrap(), "1 -< <>neg(p | ~p)".parse().unwrap())
}

/// Checks strong frame validity of the two finite-branching axioms; both
/// hold on every finite frame.
pub fn finitely_branching_axioms(frame: &WeightedFrame) -> Result<bool, FramesError> {
    let (a, b) = finitely_branching_axioms_formulas();
    let first = strong_frame_valid(frame, &a, None)?;
    let second = strong_frame_valid(frame, &b, None)?;
    Ok(first.status == VerdictStatus::Valid && second.status == VerdictStatus::Valid)
}
