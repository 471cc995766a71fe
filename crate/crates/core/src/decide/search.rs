//! Bounded global validity and satisfiability search.
//!
//! Candidate models are rooted trees (depth capped by the formula's modal
//! depth) with weights and valuations drawn from the canonical value grid,
//! explored by iterative deepening over (world count, grid size) with a
//! model budget. Refutations and satisfying models are always genuine
//! (re-checked); a clean sweep is only promoted to an exact verdict when the
//! enumerated space provably covers all models, which holds for formulas
//! without modalities.

use super::{
    scan_space, single_trace_strings, twin_of_single_witness, twin_trace_strings, value_grid,
    DecideError, SearchStats, Strategy, Verdict, VerdictStatus, Witness,
};
use crate::formula::{Formula, LangBase, Var};
use crate::gvalue::{Chain, Idx};
use crate::kripke::engine::{eval_single_idx, Arena, RelIdx};
use crate::kripke::{eval_single, eval_twin, ModelFile, SingleModel, WeightedFrame};
use crate::transform::embedding_pair;
use super::Logic;
use serde::Serialize;

/// Search bounds; the defaults derive from the formula (grid capacity
/// `size + 2`, tree depth = modal depth) with a four-world cap and an
/// overall model budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_worlds: usize,
    pub value_grid: usize,
    /// Unravelling depth; defaults to the formula's modal depth.
    pub max_depth: Option<usize>,
    /// Maximum number of candidate models examined in one call; stages that
    /// would exceed the remainder are skipped and reported as incomplete.
    pub budget: u64,
}

pub const DEFAULT_BUDGET: u64 = 20_000_000;

impl SearchBounds {
    pub fn for_formula(f: &Formula) -> SearchBounds {
        SearchBounds {
            max_worlds: 4,
            value_grid: f.size() + 2,
            max_depth: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SatStatus {
    Satisfiable,
    Unsatisfiable,
    ExhaustedBounds,
}

#[derive(Debug, Clone, Serialize)]
pub struct SatVerdict {
    pub status: SatStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    /// Find a model with some target below 1 at the root.
    Refute,
    /// Find a model with every target at 1 at the root.
    Satisfy,
}

struct Targets {
    formulas: Vec<Formula>,
    native_twin: bool,
}

fn targets_for(f: &Formula, logic: Logic) -> Result<Targets, DecideError> {
    if logic.twin() {
        let base = f.language().base;
        let ok = match logic {
            Logic::Kg2F | Logic::Kg2C | Logic::Kg2PmF | Logic::Kg2PmC => matches!(
                base,
                LangBase::Prop
                    | LangBase::NegProp
                    | LangBase::BoxDia
                    | LangBase::NegBoxDia
                    | LangBase::NegBoxDiaBar
            ),
            Logic::G2BoxF | Logic::G2BoxC => matches!(
                base,
                LangBase::Prop | LangBase::NegProp | LangBase::NegInfo | LangBase::NegInfoBar
            ),
            _ => unreachable!(),
        };
        if !ok {
            return Err(DecideError::LanguageMismatch(logic.name().to_string()));
        }
        let (truth_side, falsity_side) = embedding_pair(f, !logic.birelational())?;
        Ok(Targets { formulas: vec![truth_side, falsity_side], native_twin: true })
    } else {
        if !f.is_single_evaluable() {
            return Err(DecideError::LanguageMismatch(logic.name().to_string()));
        }
        Ok(Targets { formulas: vec![f.clone()], native_twin: false })
    }
}

/// Edge-weight alphabet over a size-`g` grid, as pairs of grid indices
/// (second component used on bi-relational frames only). Zero-on-both means
/// no edge and is excluded; crisp logics keep only 0/1 weights.
fn weight_alphabet(g: usize, crisp: bool, bi: bool) -> Vec<(usize, usize)> {
    let top = g - 1;
    if bi {
        let mut opts = Vec::new();
        for a in 0..g {
            for b in 0..g {
                let crisp_ok = !crisp || ((a == 0 || a == top) && (b == 0 || b == top));
                if (a, b) != (0, 0) && crisp_ok {
                    opts.push((a, b));
                }
            }
        }
        opts
    } else if crisp {
        vec![(top, top)]
    } else {
        (1..g).map(|i| (i, i)).collect()
    }
}

/// All rooted trees on `n` nodes (node 0 the root, parents precede children)
/// with depth at most `max_depth`, as parent vectors.
fn tree_shapes(n: usize, max_depth: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut parents = vec![0usize; n.saturating_sub(1)];
    fn rec(
        node: usize,
        n: usize,
        parents: &mut Vec<usize>,
        depths: &mut Vec<usize>,
        max_depth: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if node == n {
            out.push(parents.clone());
            return;
        }
        for parent in 0..node {
            if depths[parent] + 1 > max_depth {
                continue;
            }
            parents[node - 1] = parent;
            depths[node] = depths[parent] + 1;
            rec(node + 1, n, parents, depths, max_depth, out);
        }
    }
    if n == 1 {
        out.push(Vec::new());
    } else {
        let mut depths = vec![0usize; n];
        rec(1, n, &mut parents, &mut depths, max_depth, &mut out);
    }
    out
}

struct Hit {
    shape: Vec<usize>,
    weights: Vec<usize>,
    assign: Vec<Idx>,
    world_count: usize,
    grid_size: usize,
}

struct Outcome {
    hit: Option<Hit>,
    stats: SearchStats,
    /// The enumerated space provably covers all models of the logic.
    exact: bool,
}

#[allow(clippy::too_many_arguments)]
fn run_bounded(
    targets: &Targets,
    logic: Logic,
    bounds: &SearchBounds,
    strategy: Strategy,
    goal: Goal,
) -> Result<Outcome, DecideError> {
    let refs: Vec<&Formula> = targets.formulas.iter().collect();
    let arena = Arena::compile(&refs);
    arena.check_single()?;
    // Assignment slots follow the arena's variable ids; witness
    // materialization reuses the same order.
    let vars: Vec<Var> = arena.vars.clone();
    let modal_depth = targets.formulas.iter().map(|f| f.modal_depth()).max().unwrap_or(0);
    let depth_cap = bounds.max_depth.unwrap_or(modal_depth);
    let bi = logic.birelational();

    let mut budget_left = bounds.budget;
    let mut checked: u64 = 0;
    let mut skipped_any = false;
    let mut propositional_complete = false;
    let grid_needed = vars.len() + 2;

    for n in 1..=bounds.max_worlds.max(1) {
        if modal_depth == 0 && n > 1 {
            break;
        }
        let shapes = tree_shapes(n, depth_cap);
        if shapes.is_empty() {
            continue;
        }
        for g in 2..=bounds.value_grid.max(2) {
            let grid = {
                let mut vs = value_grid(g);
                vs.sort();
                vs
            };
            let chain = Chain::with_fresh(&grid, 0);
            debug_assert_eq!(chain.len(), g);
            let top = chain.top();
            let weight_opts: Vec<(Idx, Idx)> = weight_alphabet(g, logic.crisp(), bi)
                .into_iter()
                .map(|(a, b)| (a as Idx, b as Idx))
                .collect();

            let slots = vars.len() * n;
            for shape in &shapes {
                let edges = shape.len();
                let mut count: u128 = 1;
                for _ in 0..edges {
                    count = count.saturating_mul(weight_opts.len() as u128);
                }
                for _ in 0..slots {
                    count = count.saturating_mul(g as u128);
                }
                if count > budget_left as u128 {
                    skipped_any = true;
                    continue;
                }
                budget_left -= count as u64;
                checked = checked.saturating_add(count as u64);

                let rels_template = {
                    let zero = vec![0 as Idx; n * n];
                    RelIdx { n, plus: zero.clone(), minus: zero }
                };
                let hit = scan_space(count, strategy, |start, end| {
                    let mut rels = RelIdx {
                        n,
                        plus: rels_template.plus.clone(),
                        minus: rels_template.minus.clone(),
                    };
                    let mut assign = vec![0 as Idx; slots];
                    let mut weights = vec![0usize; edges];
                    let mut out = Vec::new();
                    for i in start..end {
                        // Mixed-radix decode: weight digits first, then
                        // valuation digits, both most-significant-first.
                        let mut rest = i;
                        for slot in (0..slots).rev() {
                            assign[slot] = (rest % g as u128) as Idx;
                            rest /= g as u128;
                        }
                        for e in (0..edges).rev() {
                            weights[e] = (rest % weight_opts.len() as u128) as usize;
                            rest /= weight_opts.len() as u128;
                        }
                        rels.plus.fill(0);
                        rels.minus.fill(0);
                        for (e, &parent) in shape.iter().enumerate() {
                            let child = e + 1;
                            let (wp, wm) = weight_opts[weights[e]];
                            rels.plus[parent * n + child] = wp;
                            rels.minus[parent * n + child] = if bi { wm } else { wp };
                        }
                        eval_single_idx(&arena, &rels, top, &assign, None, &mut out);
                        let hit = match goal {
                            Goal::Refute => arena.roots.iter().any(|&r| out[r * n] != top),
                            Goal::Satisfy => arena.roots.iter().all(|&r| out[r * n] == top),
                        };
                        if hit {
                            return Some(Hit {
                                shape: shape.clone(),
                                weights: weights.clone(),
                                assign: assign.clone(),
                                world_count: n,
                                grid_size: g,
                            });
                        }
                    }
                    None
                });
                if let Some(hit) = hit {
                    return Ok(Outcome {
                        hit: Some(hit),
                        stats: SearchStats { checked, complete: false },
                        exact: false,
                    });
                }
            }
            if modal_depth == 0 && n == 1 && g >= grid_needed {
                propositional_complete = true;
            }
        }
    }

    // A clean sweep is exact only for modality-free formulas: a single world
    // and a grid with one spare value per variable saturate the value order.
    let exact = propositional_complete
        && modal_depth == 0
        && !skipped_any
        && bounds.value_grid >= grid_needed;
    Ok(Outcome { hit: None, stats: SearchStats { checked, complete: !skipped_any }, exact })
}

fn materialize(
    hit: &Hit,
    logic: Logic,
    vars: &[Var],
) -> SingleModel {
    let n = hit.world_count;
    let grid = {
        let mut vs = value_grid(hit.grid_size);
        vs.sort();
        vs
    };
    let mut frame = WeightedFrame::with_size(n);
    if logic.birelational() {
        frame.make_birelational();
    }
    let weight_opts = weight_alphabet(hit.grid_size, logic.crisp(), logic.birelational());
    for (e, &parent) in hit.shape.iter().enumerate() {
        let child = e + 1;
        let (wp, wm) = weight_opts[hit.weights[e]];
        let pname = frame.world_name(parent).to_string();
        let cname = frame.world_name(child).to_string();
        frame.set_plus(&pname, &cname, grid[wp].clone()).unwrap();
        if logic.birelational() {
            frame.set_minus(&pname, &cname, grid[wm].clone()).unwrap();
        }
    }
    let mut m = SingleModel::new(frame);
    for (vi, var) in vars.iter().enumerate() {
        let vals = (0..n).map(|w| grid[hit.assign[vi * n + w] as usize].clone()).collect();
        m.val.insert(var.clone(), vals);
    }
    m
}

fn witness_of_hit(
    hit: &Hit,
    f: &Formula,
    logic: Logic,
    targets: &Targets,
    goal: Goal,
) -> Result<Witness, DecideError> {
    let refs: Vec<&Formula> = targets.formulas.iter().collect();
    let vars: Vec<Var> = Arena::compile(&refs).vars;
    let single = materialize(hit, logic, &vars);
    let root = single.frame.world_name(0).to_string();
    if targets.native_twin {
        let twin = twin_of_single_witness(&single);
        let value = eval_twin(&twin, f, &root)?;
        let genuine = match goal {
            Goal::Refute => !value.is_designated(),
            Goal::Satisfy => value.is_designated(),
        };
        if !genuine {
            return Err(DecideError::CertificationFailed);
        }
        Ok(Witness {
            trace: twin_trace_strings(&twin, f),
            model: ModelFile::from_twin(&twin),
            world: root,
            value: value.to_string(),
        })
    } else {
        let value = eval_single(&single, f, &root)?;
        let genuine = match goal {
            Goal::Refute => !value.is_one(),
            Goal::Satisfy => value.is_one(),
        };
        if !genuine {
            return Err(DecideError::CertificationFailed);
        }
        Ok(Witness {
            trace: single_trace_strings(&single, f),
            model: ModelFile::from_single(&single),
            world: root,
            value: value.to_string(),
        })
    }
}

/// Bounded validity in the given logic: `Refuted` verdicts carry a genuine
/// countermodel; a clean sweep is `Valid` only when the bounds provably
/// exhaust the logic's models (modality-free formulas), and otherwise
/// `ExhaustedBounds`.
pub fn valid_bounded(f: &Formula, logic: Logic, bounds: &SearchBounds) -> Result<Verdict, DecideError> {
    valid_bounded_with(f, logic, bounds, Strategy::default())
}

pub fn valid_bounded_with(
    f: &Formula,
    logic: Logic,
    bounds: &SearchBounds,
    strategy: Strategy,
) -> Result<Verdict, DecideError> {
    let targets = targets_for(f, logic)?;
    let outcome = run_bounded(&targets, logic, bounds, strategy, Goal::Refute)?;
    match outcome.hit {
        Some(hit) => {
            let witness = witness_of_hit(&hit, f, logic, &targets, Goal::Refute)?;
            Ok(Verdict {
                status: VerdictStatus::Refuted,
                witness: Some(witness),
                stats: outcome.stats,
            })
        }
        None => Ok(Verdict {
            status: if outcome.exact { VerdictStatus::Valid } else { VerdictStatus::ExhaustedBounds },
            witness: None,
            stats: outcome.stats,
        }),
    }
}

/// Bounded satisfiability: a witness is a model and world where the formula
/// reads exactly `1` (designated `(1, 0)` for twin logics). Equivalent to
/// searching for a refutation of `~tri f`, point for point.
pub fn sat_bounded(f: &Formula, logic: Logic, bounds: &SearchBounds) -> Result<SatVerdict, DecideError> {
    sat_bounded_with(f, logic, bounds, Strategy::default())
}

pub fn sat_bounded_with(
    f: &Formula,
    logic: Logic,
    bounds: &SearchBounds,
    strategy: Strategy,
) -> Result<SatVerdict, DecideError> {
    let targets = targets_for(f, logic)?;
    let outcome = run_bounded(&targets, logic, bounds, strategy, Goal::Satisfy)?;
    match outcome.hit {
        Some(hit) => {
            let witness = witness_of_hit(&hit, f, logic, &targets, Goal::Satisfy)?;
            Ok(SatVerdict {
                status: SatStatus::Satisfiable,
                witness: Some(witness),
                stats: outcome.stats,
            })
        }
        None => Ok(SatVerdict {
            status: if outcome.exact { SatStatus::Unsatisfiable } else { SatStatus::ExhaustedBounds },
            witness: None,
            stats: outcome.stats,
        }),
    }
}
