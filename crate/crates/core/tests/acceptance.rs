//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test -p gmk-core --test acceptance` (add
//! `-- --nocapture` to see the per-criterion lines).

use gmk_core::decide::{
    self, frame_valid, frame_valid_battery, lemmon_scott, oracle, strong_frame_valid,
    valid_bounded, Logic, SatStatus, SearchBounds, Strategy, VerdictStatus,
};
use gmk_core::fixtures;
use gmk_core::formula::{Formula, ModalOp, ModalShape, Var};
use gmk_core::frames::{
    crispness_axiom, crispness_witness, fls_condition, fls_failure, fls_refuting_valuation,
    interdefinability_axiom, is_crisp, monorel_witness, relations_equal, tau_formula,
    tau_seriality_check, RelSel,
};
use gmk_core::gvalue::{g_impl, g_meet, inf_of, sup_of, TwinValue, Value};
use gmk_core::hilbert::{soundness_probe, CalculusName, ProbeConfig};
use gmk_core::kripke::{
    conflate, eval_single, eval_twin, eval_twin_all, partial_model, TwinModel, WeightedFrame,
};
use gmk_core::transform::{bang, embedding_pair, partial, star, to_nnf};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::collections::BTreeSet;

fn v(s: &str) -> Value {
    s.parse().unwrap()
}

fn fm(s: &str) -> Formula {
    s.parse().unwrap()
}

fn tv(t: &str, f: &str) -> TwinValue {
    TwinValue::new(v(t), v(f))
}

fn pass(n: usize, name: &str) {
    println!("ACCEPTANCE {n:2} {name}: PASS");
}

#[test]
fn criterion_01_half_edge_golden() {
    let m = fixtures::half_edge_model();
    assert_eq!(eval_single(&m, &fm("<>~tri(p -> q)"), "w0").unwrap(), v("1/2"));
    assert_eq!(eval_single(&m, &fm("~tri(<>p -> <>q)"), "w0").unwrap(), v("1"));
    pass(1, "half-edge golden values");
}

#[test]
fn criterion_02_two_sources_golden() {
    let m = fixtures::two_sources_model();
    let cases = [
        ("[#]s", tv("1/2", "1/2")),
        ("[#]d", tv("0", "0")),
        ("<#>d", tv("7/10", "3/10")),
        ("[]s", tv("1/2", "1/2")),
        ("<>d", tv("7/10", "0")),
    ];
    for (f, expect) in cases {
        assert_eq!(eval_twin(&m, &fm(f), "t").unwrap(), expect, "{f}");
    }
    // The credulous diamond of s: recompute both supports from the
    // definitional sup/min tables with the raw fixture numbers.
    let truth = sup_of([g_meet(&v("8/10"), &v("1/2")), g_meet(&v("7/10"), &v("1"))].iter());
    let falsity = sup_of([g_meet(&v("9/10"), &v("1/2")), g_meet(&v("2/10"), &v("4/10"))].iter());
    assert_eq!(truth, v("7/10"));
    assert_eq!(falsity, v("1/2"));
    assert_eq!(eval_twin(&m, &fm("<#>s"), "t").unwrap(), TwinValue::new(truth, falsity));
    // The fixture records this recomputed value together with a note.
    let case = fixtures::golden_cases()
        .into_iter()
        .find(|c| c.formula == "<#>s")
        .expect("recomputed fixture present");
    assert!(case.note.is_some());
    assert!(case.passes());
    pass(2, "two-sources golden values incl. recomputed credulous diamond");
}

/// Twin vectors over the split-reach model as index pairs, closed under the
/// propositional operations; diamonds (or boxes) applied in rounds.
mod closure {
    use super::*;

    pub type Vecs = BTreeSet<Vec<(u8, u8)>>;

    pub struct Ctx {
        pub chain: Vec<Value>,
        pub top: u8,
        pub rel_plus: Vec<u8>,
        pub rel_minus: Vec<u8>,
        pub n: usize,
    }

    pub fn ctx(m: &TwinModel) -> Ctx {
        let mut chain: Vec<Value> = vec![Value::zero(), Value::one()];
        for vals in m.val1.values().chain(m.val2.values()) {
            chain.extend(vals.iter().cloned());
        }
        chain.extend(m.frame.all_weights());
        chain.sort();
        chain.dedup();
        let idx = |x: &Value| chain.iter().position(|c| c == x).unwrap() as u8;
        let n = m.frame.n_worlds();
        let rel_plus = (0..n * n)
            .map(|i| idx(m.frame.relation_plus().get(i / n, i % n)))
            .collect();
        let rel_minus = (0..n * n)
            .map(|i| idx(m.frame.relation_minus().get(i / n, i % n)))
            .collect();
        Ctx { top: (chain.len() - 1) as u8, chain, rel_plus, rel_minus, n }
    }

    fn imp(top: u8, a: u8, b: u8) -> u8 {
        if a <= b { top } else { b }
    }
    fn coimp(a: u8, b: u8) -> u8 {
        if a <= b { 0 } else { a }
    }
    fn neg(top: u8, a: u8) -> u8 {
        if a == 0 { top } else { 0 }
    }
    fn delta(top: u8, a: u8) -> u8 {
        if a == top { top } else { 0 }
    }

    fn unaries(ctx: &Ctx, a: &[(u8, u8)]) -> Vec<Vec<(u8, u8)>> {
        let top = ctx.top;
        vec![
            a.iter().map(|&(t, f)| (f, t)).collect(),
            a.iter().map(|&(t, f)| (neg(top, t), coimp(top, f))).collect(),
            a.iter().map(|&(t, f)| (delta(top, t), neg(top, neg(top, f)))).collect(),
        ]
    }

    fn binaries(ctx: &Ctx, a: &[(u8, u8)], b: &[(u8, u8)]) -> Vec<Vec<(u8, u8)>> {
        let top = ctx.top;
        let zip = |f: &dyn Fn((u8, u8), (u8, u8)) -> (u8, u8)| -> Vec<(u8, u8)> {
            a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect()
        };
        vec![
            zip(&|x, y| (x.0.min(y.0), x.1.max(y.1))),
            zip(&|x, y| (x.0.max(y.0), x.1.min(y.1))),
            zip(&|x, y| (imp(top, x.0, y.0), coimp(y.1, x.1))),
            zip(&|x, y| (coimp(x.0, y.0), imp(top, y.1, x.1))),
        ]
    }

    pub fn propositional_closure(ctx: &Ctx, set: &mut Vecs) {
        loop {
            let snapshot: Vec<Vec<(u8, u8)>> = set.iter().cloned().collect();
            let before = set.len();
            for a in &snapshot {
                for u in unaries(ctx, a) {
                    set.insert(u);
                }
                for b in &snapshot {
                    for c in binaries(ctx, a, b) {
                        set.insert(c);
                    }
                }
            }
            if set.len() == before {
                return;
            }
        }
    }

    pub fn modal(ctx: &Ctx, a: &[(u8, u8)], diamond: bool) -> Vec<(u8, u8)> {
        let (top, n) = (ctx.top, ctx.n);
        (0..n)
            .map(|w| {
                if diamond {
                    let t = (0..n).map(|w2| ctx.rel_plus[w * n + w2].min(a[w2].0)).max().unwrap();
                    let f =
                        (0..n).map(|w2| imp(top, ctx.rel_minus[w * n + w2], a[w2].1)).min().unwrap();
                    (t, f)
                } else {
                    let t =
                        (0..n).map(|w2| imp(top, ctx.rel_plus[w * n + w2], a[w2].0)).min().unwrap();
                    let f = (0..n).map(|w2| ctx.rel_minus[w * n + w2].min(a[w2].1)).max().unwrap();
                    (t, f)
                }
            })
            .collect()
    }
}

/// All value vectors of one-variable formulas of the selected fragment
/// (box-free or diamond-free) up to the given modal depth, by closure.
fn fragment_values(m: &TwinModel, ctx: &closure::Ctx, diamond_fragment: bool, depth: usize) -> closure::Vecs {
    let idx_pair = |t: &Value| ctx.chain.iter().position(|c| c == t).unwrap() as u8;
    let mut set = closure::Vecs::new();
    let n = m.frame.n_worlds();
    let p: Vec<(u8, u8)> = (0..n)
        .map(|w| {
            let t = m.val1[&Var::plain("p")][w].clone();
            let f = m.val2[&Var::plain("p")][w].clone();
            (idx_pair(&t), idx_pair(&f))
        })
        .collect();
    set.insert(p);
    set.insert(vec![(0, ctx.top); n]);
    set.insert(vec![(ctx.top, 0); n]);
    closure::propositional_closure(ctx, &mut set);
    for _round in 0..depth {
        let snapshot: Vec<_> = set.iter().cloned().collect();
        for a in &snapshot {
            set.insert(closure::modal(ctx, a, diamond_fragment));
        }
        closure::propositional_closure(ctx, &mut set);
    }
    set
}

#[test]
fn criterion_03_split_reach_golden_and_box_fragment_separation() {
    let m = fixtures::split_reach_model();
    let box_value = eval_twin(&m, &fm("[]p"), "w0").unwrap();
    let dia_value = eval_twin(&m, &fm("<>p"), "w0").unwrap();
    assert_eq!(box_value, tv("3/5", "3/4"));
    assert_eq!(dia_value, tv("4/5", "1/2"));

    // No diamond-free one-variable formula of modal depth <= 2 matches the
    // diamond value at w0.
    let ctx = closure::ctx(&m);
    let idx_pair = |t: &Value| ctx.chain.iter().position(|c| c == t).unwrap() as u8;
    let target_dia = (idx_pair(&dia_value.t), idx_pair(&dia_value.f));
    let box_values = fragment_values(&m, &ctx, false, 2);
    assert!(!box_values.iter().any(|vec| vec[0] == target_dia));
    // Sanity: the fragment's own box value is reachable.
    let target_box = (idx_pair(&box_value.t), idx_pair(&box_value.f));
    assert!(box_values.iter().any(|vec| vec[0] == target_box));
    pass(3, "split-reach golden values and box-fragment separation");
}

#[test]
fn criterion_03_diamond_fragment_separation() {
    // Requires that no box-free one-variable formula of modal depth <= 2
    // matches the box value (3/5, 3/4) at w0. The exhaustive sweep finds
    // such formulas, so this check fails; one concrete witness of modal
    // depth 1 is shown in the failure message. The per-world mixtures such
    // as `neg p & p`, whose values select different components at different
    // successors, escape any single-successor value analysis.
    let m = fixtures::split_reach_model();
    let box_value = eval_twin(&m, &fm("[]p"), "w0").unwrap();
    let ctx = closure::ctx(&m);
    let idx_pair = |t: &Value| ctx.chain.iter().position(|c| c == t).unwrap() as u8;
    let target_box = (idx_pair(&box_value.t), idx_pair(&box_value.f));
    let dia_values = fragment_values(&m, &ctx, true, 2);
    let witness = fm(
        "<>(neg(neg p -> p) & (neg p & p)) | neg<>(neg p & p) & ((<>neg p | <>p) & (<>neg p -> neg<>p))",
    );
    let witness_value = eval_twin(&m, &witness, "w0").unwrap();
    assert!(
        !dia_values.iter().any(|vec| vec[0] == target_box),
        "a box-free formula of modal depth 1 attains the box value {box_value} at w0: \
         `{witness}` evaluates to {witness_value}"
    );
    pass(3, "diamond-fragment separation");
}

#[test]
fn criterion_04_double_negation_golden() {
    let m = fixtures::double_negation_model();
    let swap = eval_twin(&m, &fm("<>~~p -> ~~<>p"), "w").unwrap();
    assert_eq!(swap, tv("1", "1"));
    assert_eq!(swap.f, v("1"), "strong-validity failure on the falsity track");
    assert_eq!(eval_twin(&m, &fm("[]0 | ~[]0"), "w").unwrap(), tv("1", "1/2"));
    pass(4, "double-negation golden values");
}

#[test]
fn criterion_05_axiom_soundness_sweep() {
    let fuzzy = ProbeConfig {
        instantiations: 100,
        models: 200,
        max_worlds: 4,
        max_denominator: 6,
        crisp_frames: false,
        seed: 11,
    };
    let report = soundness_probe(CalculusName::HKbigF, &fuzzy);
    assert!(
        report.failures.is_empty(),
        "fuzzy-calculus schemas failed: {:?}",
        report.failing_schemas()
    );

    let crisp_only = ProbeConfig { seed: 12, instantiations: 10, models: 30, ..fuzzy.clone() };
    let report = soundness_probe(CalculusName::HKbigC, &crisp_only);
    let failing = report.failing_schemas();
    for schema in ["Cr1", "Cr2", "NTD"] {
        assert!(failing.contains(&schema), "{schema} not refuted on fuzzy fixtures");
    }
    assert!(failing.iter().all(|s| ["Cr1", "Cr2", "NTD"].contains(s)), "{failing:?}");

    let crisp = ProbeConfig { crisp_frames: true, seed: 13, ..fuzzy };
    let report = soundness_probe(CalculusName::HKbigC, &crisp);
    assert!(
        report.failures.is_empty(),
        "crisp-calculus schemas failed on crisp frames: {:?}",
        report.failing_schemas()
    );
    pass(5, "axiom soundness sweep");
}

// --- seeded generators for the randomized criteria ---

fn random_value(rng: &mut StdRng, max_den: i64) -> Value {
    let den = rng.gen_range(1..=max_den);
    Value::new(rng.gen_range(0..=den), den).unwrap()
}

/// Twin-language formula generator; `info` picks the modality family.
fn random_twin_formula(rng: &mut StdRng, depth: usize, info: bool) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..3u8) {
            0 => Formula::var("p"),
            1 => Formula::Zero,
            _ => Formula::One,
        };
    }
    let sub = |rng: &mut StdRng| random_twin_formula(rng, depth - 1, info);
    match rng.gen_range(0..10u8) {
        0 => Formula::var("p"),
        1 => Formula::de_morgan_neg(sub(rng)),
        2 => Formula::strong_neg(sub(rng)),
        3 => Formula::delta(sub(rng)),
        4 => Formula::and(sub(rng), sub(rng)),
        5 => Formula::or(sub(rng), sub(rng)),
        6 => Formula::impl_(sub(rng), sub(rng)),
        7 => Formula::coimpl(sub(rng), sub(rng)),
        _ => {
            let shape = if rng.gen_bool(0.5) { ModalShape::Box } else { ModalShape::Diamond };
            let op = match (info, rng.gen_bool(0.3)) {
                (false, false) => ModalOp::standard(shape),
                (false, true) => ModalOp::overline(shape),
                (true, false) => ModalOp::informational(shape),
                (true, true) => ModalOp::informational_overline(shape),
            };
            Formula::modal(op, sub(rng))
        }
    }
}

/// A one-variable neg-bearing formula of size at most 12.
fn random_neg_bearing(rng: &mut StdRng, info: bool) -> Formula {
    loop {
        let f = random_twin_formula(rng, 3, info);
        if f.size() <= 10 && f.contains_de_morgan_neg() {
            return f;
        }
        if f.size() <= 9 {
            return Formula::and(f, Formula::de_morgan_neg(Formula::var("p")));
        }
    }
}

/// Random bi-relational frame; fuzzy frames stay at two worlds and draw
/// from a two-value fuzzy palette so the twin grid stays feasible.
fn random_pointed_frame(rng: &mut StdRng) -> WeightedFrame {
    let crisp = rng.gen_bool(0.5);
    let n = if crisp { rng.gen_range(1..=3) } else { rng.gen_range(1..=2) };
    let mut frame = WeightedFrame::with_size(n);
    frame.make_birelational();
    let palette: Vec<Value> = if crisp {
        vec![Value::one()]
    } else {
        vec![random_value(rng, 4), random_value(rng, 4)]
            .into_iter()
            .filter(|w| !w.is_zero())
            .collect()
    };
    for a in 0..n {
        for b in 0..n {
            let (an, bn) = (frame.world_name(a).to_string(), frame.world_name(b).to_string());
            if rng.gen_bool(0.6) {
                if let Some(w) = palette.first() {
                    let w = if palette.len() > 1 && rng.gen_bool(0.5) { &palette[1] } else { w };
                    frame.set_plus(&an, &bn, w.clone()).unwrap();
                }
            }
            if rng.gen_bool(0.6) {
                if let Some(w) = palette.first() {
                    let w = if palette.len() > 1 && rng.gen_bool(0.5) { &palette[1] } else { w };
                    frame.set_minus(&an, &bn, w.clone()).unwrap();
                }
            }
        }
    }
    frame
}

#[test]
fn criterion_06_embedding_equivalence() {
    let mut rng = StdRng::seed_from_u64(61);
    let mut agreements = 0usize;
    for case in 0..200 {
        let info = case % 5 == 4;
        let f = random_neg_bearing(&mut rng, info);
        let frame = random_pointed_frame(&mut rng);
        let direct = oracle::twin_grid_strong_valid(&frame, &f, Some("w0")).unwrap();
        let embedded = strong_frame_valid(&frame, &f, Some("w0")).unwrap().is_valid();
        assert_eq!(direct, embedded, "case {case}: {f} on {:?}", frame.worlds());
        // Subsample: the literal conjunction decided as one formula.
        if case % 10 == 0 && frame.n_worlds() <= 2 {
            let (first, second) = embedding_pair(&f, false).unwrap();
            let conj = Formula::and(first, second);
            let whole = frame_valid(&frame, &conj, Some("w0")).unwrap().is_valid();
            assert_eq!(whole, embedded, "conjunction split mismatch for {f}");
        }
        agreements += 1;
    }
    assert_eq!(agreements, 200);
    pass(6, "embedding equivalence (direct twin grid vs embedding)");
}

fn random_twin_model(rng: &mut StdRng, crisp: bool) -> TwinModel {
    let n = rng.gen_range(1..=3);
    let mut frame = WeightedFrame::with_size(n);
    frame.make_birelational();
    for a in 0..n {
        for b in 0..n {
            let (an, bn) = (frame.world_name(a).to_string(), frame.world_name(b).to_string());
            let w = |rng: &mut StdRng| {
                if crisp {
                    if rng.gen_bool(0.5) { Value::one() } else { Value::zero() }
                } else {
                    random_value(rng, 4)
                }
            };
            frame.set_plus(&an, &bn, w(rng)).unwrap();
            frame.set_minus(&an, &bn, w(rng)).unwrap();
        }
    }
    let mut m = TwinModel::new(frame);
    for world in 0..n {
        let name = m.frame.world_name(world).to_string();
        m.set_value(Var::plain("p"), &name, random_value(rng, 4), random_value(rng, 4)).unwrap();
        m.set_value(Var::plain("q"), &name, random_value(rng, 4), random_value(rng, 4)).unwrap();
    }
    m
}

fn random_neg_free(rng: &mut StdRng, info: bool) -> Formula {
    loop {
        let f = random_twin_formula(rng, 3, info);
        if !f.contains_de_morgan_neg() {
            return f;
        }
    }
}

#[test]
fn criterion_07_dualization_and_conflation_identities() {
    let mut rng = StdRng::seed_from_u64(71);
    for case in 0..500 {
        let info = case % 3 == 2;
        let f = random_neg_free(&mut rng, info);
        let m = random_twin_model(&mut rng, false);
        let world = m.frame.world_name(rng.gen_range(0..m.frame.n_worlds())).to_string();
        let lhs = eval_twin(&m, &f, &world).unwrap().f;
        let companion = partial_model(&m);
        let dual = partial(&f, false).unwrap();
        let rhs = eval_single(&companion, &dual, &world).unwrap();
        assert_eq!(lhs, rhs, "case {case}: {f} at {world}");
    }
    // Conflation swaps the relation roles, which mirrors the two aggregation
    // modes of the standard modalities into each other; informational
    // modalities are outside its scope.
    for case in 0..500 {
        let f = random_twin_formula(&mut rng, 3, false);
        let m = random_twin_model(&mut rng, true);
        let mirrored = conflate(&m).unwrap();
        for w in 0..m.frame.n_worlds() {
            let name = m.frame.world_name(w).to_string();
            let original = eval_twin(&m, &f, &name).unwrap();
            let flipped = eval_twin(&mirrored, &f, &name).unwrap();
            assert_eq!(flipped.t, original.f.one_minus(), "case {case}: {f}");
            assert_eq!(flipped.f, original.t.one_minus(), "case {case}: {f}");
        }
    }
    pass(7, "dualization value identity and conflation involution");
}

#[test]
fn criterion_08_weighted_confluence_sweep() {
    // All mono-relational frames with <= 3 worlds over weights {0, 1/2, 1},
    // all prefix exponents <= 2: the structural condition coincides with
    // exact frame validity, and every failure yields a working countermodel.
    let weights = [v("0"), v("1/2"), v("1")];
    let combos: Vec<(usize, usize, usize, usize)> = (0..81)
        .map(|i| (i / 27 % 3, i / 9 % 3, i / 3 % 3, i % 3))
        .collect();
    let formulas: Vec<Formula> =
        combos.iter().map(|&(h, i, j, k)| lemmon_scott(h, i, j, k)).collect();

    let frames: Vec<WeightedFrame> = (1..=3usize)
        .flat_map(|n| {
            let slots = n * n;
            (0..3usize.pow(slots as u32)).map(move |code| (n, code))
        })
        .map(|(n, mut code)| {
            let mut frame = WeightedFrame::with_size(n);
            for a in 0..n {
                for b in 0..n {
                    let (an, bn) =
                        (frame.world_name(a).to_string(), frame.world_name(b).to_string());
                    frame.set_plus(&an, &bn, weights[code % 3].clone()).unwrap();
                    code /= 3;
                }
            }
            frame
        })
        .collect();

    let (checked, refutations): (u64, u64) = frames
        .par_iter()
        .map(|frame| {
            let validity = frame_valid_battery(frame, &formulas, Strategy::Sequential)
                .expect("battery runs");
            let mut local_refutations = 0u64;
            for (ci, &(h, i, j, k)) in combos.iter().enumerate() {
                for w in 0..frame.n_worlds() {
                    let x = frame.world_name(w);
                    let structural = fls_condition(frame, x, h, i, j, k).unwrap();
                    assert_eq!(
                        structural, validity[ci][w],
                        "mismatch at {:?} x={x} ({h},{i},{j},{k})",
                        frame.worlds()
                    );
                    if !structural {
                        let (y, z) = fls_failure(frame, x, h, i, j, k).unwrap().unwrap();
                        let model =
                            fls_refuting_valuation(frame, x, &y, &z, h, i, j, k).unwrap();
                        let value =
                            eval_single(&model, &formulas[ci], x).expect("witness evaluates");
                        assert!(!value.is_one(), "witness fails at {x} ({h},{i},{j},{k})");
                        local_refutations += 1;
                    }
                }
            }
            (combos.len() as u64 * frame.n_worlds() as u64, local_refutations)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    // cross-check the battery against singleton frame-validity calls
    let mut rng = StdRng::seed_from_u64(88);
    for _ in 0..60 {
        let frame = &frames[rng.gen_range(0..frames.len())];
        let ci = rng.gen_range(0..combos.len());
        let w = rng.gen_range(0..frame.n_worlds());
        let single = frame_valid(frame, &formulas[ci], Some(frame.world_name(w))).unwrap();
        let battery =
            frame_valid_battery(frame, &formulas[ci..ci + 1], Strategy::Sequential).unwrap();
        assert_eq!(single.is_valid(), battery[0][w]);
    }

    assert!(checked > 4_000_000 / 81, "sweep covered {checked} pointed checks");
    assert!(refutations > 0);
    pass(8, "weighted confluence correspondence sweep");
}

#[test]
fn criterion_09_countermodel_search_sanity() {
    // Twin logic: the diamond/double-negation swap.
    let f = fm("<>~~p -> ~~<>p");
    let verdict = valid_bounded(&f, Logic::Kg2F, &SearchBounds::for_formula(&f)).unwrap();
    assert_eq!(verdict.status, VerdictStatus::Refuted);
    let w = verdict.witness.unwrap();
    let twin = w.model.load_twin().unwrap();
    assert!(!eval_twin(&twin, &f, &w.world).unwrap().is_designated());

    // Fuzzy-only refutation of the crispness axiom.
    let f = fm("tri[]p -> []tri p");
    let verdict = valid_bounded(&f, Logic::KbigF, &SearchBounds::for_formula(&f)).unwrap();
    assert_eq!(verdict.status, VerdictStatus::Refuted);
    let w = verdict.witness.unwrap();
    let m = w.model.load_single().unwrap();
    assert!(!eval_single(&m, &f, &w.world).unwrap().is_one());

    // Crisp refutation of p -> []p.
    let f = fm("p -> []p");
    let verdict = valid_bounded(&f, Logic::KbigC, &SearchBounds::for_formula(&f)).unwrap();
    assert_eq!(verdict.status, VerdictStatus::Refuted);
    let w = verdict.witness.unwrap();
    let m = w.model.load_single().unwrap();
    assert!(m.frame.relation_plus().is_crisp());
    assert!(!eval_single(&m, &f, &w.world).unwrap().is_one());

    // No countermodel for the normality and interaction axioms.
    for axiom in [
        "[](p -> q) -> ([]p -> []q)",
        "<>(p | q) -> (<>p | <>q)",
        "<>(p -> q) -> ([]p -> <>q)",
        "(<>p -> []q) -> [](p -> q)",
    ] {
        let f = fm(axiom);
        let bounds = SearchBounds {
            max_worlds: 4,
            value_grid: f.size() + 2,
            max_depth: None,
            budget: 5_000_000,
        };
        let verdict = valid_bounded(&f, Logic::KbigF, &bounds).unwrap();
        assert_ne!(verdict.status, VerdictStatus::Refuted, "{axiom}");
    }
    pass(9, "bounded countermodel search sanity");
}

/// Classical K validity by brute force over crisp pointed models with at
/// most `max_worlds` worlds.
fn classical_k_valid(f: &Formula, max_worlds: usize) -> bool {
    fn eval(f: &Formula, rel: &[bool], vals: &[bool], n: usize, w: usize) -> bool {
        match f {
            Formula::Var(_) => vals[w],
            Formula::Zero => false,
            Formula::And(a, b) => eval(a, rel, vals, n, w) && eval(b, rel, vals, n, w),
            Formula::Or(a, b) => eval(a, rel, vals, n, w) || eval(b, rel, vals, n, w),
            Formula::Impl(a, b) => !eval(a, rel, vals, n, w) || eval(b, rel, vals, n, w),
            Formula::Modal(op, a) => {
                assert_eq!(op.shape, ModalShape::Box);
                (0..n).all(|w2| !rel[w * n + w2] || eval(a, rel, vals, n, w2))
            }
            _ => unreachable!("outside the classical fragment"),
        }
    }
    for n in 1..=max_worlds {
        for rel_code in 0..1u32 << (n * n) {
            let rel: Vec<bool> = (0..n * n).map(|i| rel_code >> i & 1 == 1).collect();
            for val_code in 0..1u32 << n {
                let vals: Vec<bool> = (0..n).map(|i| val_code >> i & 1 == 1).collect();
                for w in 0..n {
                    if !eval(f, &rel, &vals, n, w) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All `{0, &, |, ->, []}` formulas over one variable with at most `max`
/// connectives.
fn box_fragment_formulas(max: usize) -> Vec<Formula> {
    let mut by_count: Vec<Vec<Formula>> = vec![vec![Formula::Zero, Formula::var("p")]];
    for k in 1..=max {
        let mut level: Vec<Formula> = by_count[k - 1].iter().cloned().map(Formula::boxed).collect();
        for i in 0..k {
            let j = k - 1 - i;
            for a in &by_count[i] {
                for b in &by_count[j] {
                    level.push(Formula::and(a.clone(), b.clone()));
                    level.push(Formula::or(a.clone(), b.clone()));
                    level.push(Formula::impl_(a.clone(), b.clone()));
                }
            }
        }
        by_count.push(level);
    }
    by_count.into_iter().flatten().collect()
}

#[test]
fn criterion_10_classical_correspondence_of_the_two_valued_encoding() {
    let formulas = box_fragment_formulas(3);
    assert!(formulas.len() > 2000);
    let disagreements: Vec<String> = formulas
        .par_chunks(64)
        .flat_map_iter(|chunk| {
            let mut bad = Vec::new();
            for f in chunk {
                let classical = classical_k_valid(f, 3);
                let encoded = bang(f).unwrap();
                let mut refuted = false;
                for max_worlds in [4, 6] {
                    let bounds = SearchBounds {
                        max_worlds,
                        value_grid: 2,
                        max_depth: None,
                        budget: 3_000_000,
                    };
                    let verdict = valid_bounded(&encoded, Logic::Kg2PmC, &bounds).unwrap();
                    if verdict.status == VerdictStatus::Refuted {
                        refuted = true;
                        break;
                    }
                }
                if classical != !refuted {
                    bad.push(format!("{f}: classical={classical}, search refuted={refuted}"));
                }
            }
            bad
        })
        .collect();
    assert!(disagreements.is_empty(), "{disagreements:?}");
    pass(10, "two-valued encoding matches classical validity");
}

fn random_mono_twin_model(rng: &mut StdRng) -> TwinModel {
    let mut m = random_twin_model(rng, false);
    let plus = m.frame.relation_plus().clone();
    m.frame.set_relations(plus, None).unwrap();
    m
}

#[test]
fn criterion_10_encoding_is_two_valued() {
    let formulas = box_fragment_formulas(2);
    let mut rng = StdRng::seed_from_u64(101);
    let sample: Vec<Formula> = (0..40)
        .map(|_| formulas[rng.gen_range(0..formulas.len())].clone())
        .collect();

    // On mono-relational models the encoding never leaves {(1,0), (0,1)}:
    // the two tracks of `tri[]` test the same successor set, so they cannot
    // diverge.
    for case in 0..200 {
        let m = random_mono_twin_model(&mut rng);
        let f = bang(&sample[case % sample.len()]).unwrap();
        for value in eval_twin_all(&m, &f).unwrap() {
            assert!(
                value == TwinValue::top() || value == TwinValue::bottom(),
                "mono case {case}: {f} gave {value}"
            );
        }
    }

    // Required of arbitrary twin models as well. On bi-relational frames
    // the two tracks of `tri[]` can disagree — all first-relation
    // successors can carry (1,0) while a second-relation successor carries
    // (0,1), making the box (1,1) and an implication out of it (0,0) — so
    // this check fails; the counterexample is printed.
    for case in 0..200 {
        let m = random_twin_model(&mut rng, false);
        let f = bang(&sample[case % sample.len()]).unwrap();
        for value in eval_twin_all(&m, &f).unwrap() {
            assert!(
                value == TwinValue::top() || value == TwinValue::bottom(),
                "bi-relational case {case}: {f} gave {value}"
            );
        }
    }
    pass(10, "encoding two-valuedness");
}

fn random_small_frame(rng: &mut StdRng, birelational: bool) -> WeightedFrame {
    let n = rng.gen_range(1..=4);
    let mut frame = WeightedFrame::with_size(n);
    if birelational {
        frame.make_birelational();
    }
    // at most two distinct fuzzy weights per frame keeps saturation cheap
    let palette = [random_value(rng, 4), random_value(rng, 4), Value::one()];
    for a in 0..n {
        for b in 0..n {
            let (an, bn) = (frame.world_name(a).to_string(), frame.world_name(b).to_string());
            if rng.gen_bool(0.7) {
                frame.set_plus(&an, &bn, palette[rng.gen_range(0..3)].clone()).unwrap();
            }
            if birelational && rng.gen_bool(0.7) {
                frame.set_minus(&an, &bn, palette[rng.gen_range(0..3)].clone()).unwrap();
            }
        }
    }
    frame
}

#[test]
fn criterion_11_frame_property_coherence() {
    let mut rng = StdRng::seed_from_u64(111);
    for case in 0..100 {
        let frame = random_small_frame(&mut rng, true);

        // crispness of each relation vs strong validity of its axiom
        for which in [RelSel::Plus, RelSel::Minus] {
            let axiom = crispness_axiom(which);
            let structural = is_crisp(&frame, which);
            let semantic = strong_frame_valid(&frame, &axiom, None).unwrap().is_valid();
            assert_eq!(structural, semantic, "case {case} crispness {which:?}");
            let witness = crispness_witness(&frame, which).unwrap();
            assert_eq!(witness.is_none(), structural);
            if let Some((model, world)) = witness {
                assert!(!eval_twin(&model, &axiom, &world).unwrap().is_designated());
            }
        }

        // equal relations vs box/diamond interdefinability
        let structural = relations_equal(&frame);
        let semantic =
            strong_frame_valid(&frame, &interdefinability_axiom(), None).unwrap().is_valid();
        assert_eq!(structural, semantic, "case {case} relations-equal");
        if let Some((model, world)) = monorel_witness(&frame).unwrap() {
            assert!(!structural);
            assert!(!eval_twin(&model, &interdefinability_axiom(), &world).unwrap().is_designated());
        }

        // proper fuzzy seriality per world vs frame validity of its formula
        let mono = random_small_frame(&mut rng, false);
        let serial_worlds = tau_seriality_check(&mono);
        for w in mono.worlds() {
            let valid = frame_valid(&mono, &tau_formula(), Some(w)).unwrap().is_valid();
            assert_eq!(valid, serial_worlds.contains(w), "case {case} tau at {w}");
        }
    }
    pass(11, "frame-property checkers agree with their defining formulas");
}

#[test]
fn criterion_12_order_saturation_soundness() {
    let mut rng = StdRng::seed_from_u64(121);
    let mut frames = vec![
        fixtures::half_edge_model().frame,
        fixtures::half_loop_frame(),
        fixtures::double_negation_model().frame,
    ];
    {
        let mut diamond =
            WeightedFrame::new(vec!["x".into(), "y".into(), "z".into(), "u".into()]).unwrap();
        for (a, b) in [("x", "y"), ("x", "z"), ("y", "u"), ("z", "u")] {
            diamond.set_plus(a, b, Value::one()).unwrap();
        }
        frames.push(diamond);
    }
    for _ in 0..6 {
        frames.push(random_small_frame(&mut rng, false));
    }
    let formulas = [
        fm("[](p -> q) -> ([]p -> []q)"),
        fm("<>(p -> q) -> ([]p -> <>q)"),
        fm("tri[]p -> []tri p"),
        lemmon_scott(1, 1, 1, 1),
        fm("~tri<> 1 & ~[]0"),
    ];
    let mut pairs = 0;
    let mut valid_count = 0;
    for frame in &frames {
        for f in &formulas {
            pairs += 1;
            let verdict = frame_valid(frame, f, None).unwrap();
            match verdict.status {
                VerdictStatus::Valid => {
                    valid_count += 1;
                    let refuter =
                        oracle::sample_refutation(frame, f, None, 10_000, 8, 1200 + pairs).unwrap();
                    assert!(
                        refuter.is_none(),
                        "sampling refuted a formula declared valid: {f} on {:?}",
                        frame.worlds()
                    );
                }
                VerdictStatus::Refuted => {
                    let w = verdict.witness.unwrap();
                    let m = w.model.load_single().unwrap();
                    assert!(!eval_single(&m, f, &w.world).unwrap().is_one());
                }
                VerdictStatus::ExhaustedBounds => unreachable!("frame_valid is exact"),
            }
        }
    }
    assert!(pairs >= 50, "covered {pairs} pairs");
    assert!(valid_count > 0);
    pass(12, "order-saturation verdicts survive random sampling");
}

#[test]
fn bounded_sat_reduction_spotcheck() {
    // Complementary sanity for the sat interface used by the CLI: the
    // proper-seriality conjunction needs fuzzy weights.
    let tau = tau_formula();
    let bounds = SearchBounds::for_formula(&tau);
    let fuzzy = decide::sat_bounded(&tau, Logic::KbigF, &bounds).unwrap();
    assert_eq!(fuzzy.status, SatStatus::Satisfiable);
    let crisp = decide::sat_bounded(&tau, Logic::KbigC, &bounds).unwrap();
    assert_eq!(crisp.status, SatStatus::ExhaustedBounds);
}

#[test]
fn fixtures_table_is_green() {
    for case in fixtures::golden_cases() {
        assert!(case.passes(), "fixture `{}`", case.name);
    }
}

#[test]
fn embedding_pipeline_spotchecks() {
    // nnf -> star -> dual round trip on the interdefinability axiom.
    let f = interdefinability_axiom();
    let nnf = to_nnf(&f).unwrap();
    let starred = star(&nnf).unwrap();
    assert!(!starred.contains_de_morgan_neg());
    let dual = partial(&starred, false).unwrap();
    assert!(dual.size() <= 3 * starred.size() + 2);

    // Basic value agreement on the fixtures.
    let m = fixtures::split_reach_model();
    let companion = partial_model(&m);
    for world in m.frame.worlds() {
        let lhs = eval_twin(&m, &fm("<>p"), world).unwrap().f;
        let by_hand = inf_of(
            (0..m.frame.n_worlds())
                .map(|w2| {
                    g_impl(
                        m.frame.relation_minus().get(m.frame.world_index(world).unwrap(), w2),
                        &m.val2[&Var::plain("p")][w2],
                    )
                })
                .collect::<Vec<_>>()
                .iter(),
        );
        assert_eq!(lhs, by_hand);
        let rhs = eval_single(&companion, &fm("[]2 p_star"), world).unwrap();
        assert_eq!(lhs, rhs);
    }
}
