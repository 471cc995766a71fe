//! Independent reference checks for the decision procedures: a direct
//! twin-valuation saturation grid (no embedding involved) and random-rational
//! refutation sampling.

use super::{scan_space, DecideError, Strategy};
use crate::formula::{Formula, Var};
use crate::gvalue::{Chain, Idx, Value};
use crate::kripke::engine::{eval_twin_idx, Arena, RelIdx};
use crate::kripke::{SingleModel, WeightedFrame};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Strong validity decided directly on the twin order-saturation grid:
/// both valuation tracks are enumerated over a chain with one fresh value
/// per (track, variable, world) slot in every anchor gap.
///
/// This is the reference route; the production path goes through the
/// embedding in [`super::strong_frame_valid`].
pub fn twin_grid_strong_valid(
    frame: &WeightedFrame,
    f: &Formula,
    world: Option<&str>,
) -> Result<bool, DecideError> {
    let arena = Arena::compile(&[f]);
    arena.check_twin()?;
    let n = frame.n_worlds();
    let target: Vec<usize> = match world {
        Some(name) => vec![frame.world_index(name)?],
        None => (0..n).collect(),
    };
    let vars: Vec<Var> = f.variables().into_iter().collect();
    let track_slots = vars.len() * n;
    let slots = 2 * track_slots;
    let chain = Chain::with_fresh(&frame.all_weights(), slots);
    let len = chain.len() as u128;
    let mut count: u128 = 1;
    for _ in 0..slots {
        count = count
            .checked_mul(len)
            .filter(|&c| c < (1 << 60))
            .ok_or(DecideError::SearchSpaceTooLarge { slots, chain: chain.len() })?;
    }
    let rels = RelIdx::of_frame(frame, &chain);
    let top = chain.top();
    let root = arena.roots[0];

    let refuted = scan_space(count, Strategy::default(), |start, end| {
        let mut digits = vec![0 as Idx; slots];
        let mut out_t = Vec::new();
        let mut out_f = Vec::new();
        for i in start..end {
            let mut rest = i;
            for slot in (0..slots).rev() {
                digits[slot] = (rest % len) as Idx;
                rest /= len;
            }
            let (assign_t, assign_f) = digits.split_at(track_slots);
            eval_twin_idx(&arena, &rels, top, assign_t, assign_f, &mut out_t, &mut out_f);
            for &w in &target {
                if out_t[root * n + w] != top || out_f[root * n + w] != 0 {
                    return Some(());
                }
            }
        }
        None
    });
    Ok(refuted.is_none())
}

/// Draws `samples` random rational valuations (denominators up to
/// `max_denominator`) and returns the first that refutes `f` at `world` (at
/// any world when `None`). May only confirm refutability; silence proves
/// nothing.
pub fn sample_refutation(
    frame: &WeightedFrame,
    f: &Formula,
    world: Option<&str>,
    samples: usize,
    max_denominator: u32,
    seed: u64,
) -> Result<Option<SingleModel>, DecideError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let vars: Vec<Var> = f.variables().into_iter().collect();
    let n = frame.n_worlds();
    let targets: Vec<usize> = match world {
        Some(name) => vec![frame.world_index(name)?],
        None => (0..n).collect(),
    };
    for _ in 0..samples {
        let mut m = SingleModel::new(frame.clone());
        for var in &vars {
            let vals = (0..n)
                .map(|_| {
                    let den = rng.gen_range(1..=max_denominator.max(1)) as i64;
                    let num = rng.gen_range(0..=den);
                    Value::new(num, den).expect("sampled in range")
                })
                .collect();
            m.val.insert(var.clone(), vals);
        }
        let values = crate::kripke::eval_single_all(&m, f)?;
        if targets.iter().any(|&w| !values[w].is_one()) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
