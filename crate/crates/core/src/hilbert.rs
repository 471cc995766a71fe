//! Hilbert-style calculi: axiom-schema library, schema instantiation and
//! matching, derivation checking with hypothesis-dependency tracking, and a
//! model-based soundness fuzzer.

use crate::formula::{Formula, Var};
use crate::gvalue::Value;
use crate::kripke::{eval_single_all, ModelFile, SingleModel, WeightedFrame};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofError {
    #[error("unknown calculus `{0}`")]
    UnknownCalculus(String),
    #[error("unknown axiom schema `{0}`")]
    UnknownSchema(String),
    #[error("missing metavariable `{0}` in substitution")]
    MissingMetavariable(String),
    #[error("malformed step justification `{0}`")]
    BadJustification(String),
    #[error("formula parse error in derivation file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalculusName {
    /// Propositional calculus with the Delta operator.
    HgTri,
    /// Modal calculus complete for crisp frames.
    HKbigC,
    /// Modal calculus complete for all (fuzzy) frames.
    HKbigF,
    /// Two-relation variant: the modal axioms and rules are duplicated for
    /// the second pair of modalities.
    HKbig2F,
}

impl CalculusName {
    pub fn name(&self) -> &'static str {
        match self {
            CalculusName::HgTri => "hg-tri",
            CalculusName::HKbigC => "hkbig-c",
            CalculusName::HKbigF => "hkbig-f",
            CalculusName::HKbig2F => "hkbig2-f",
        }
    }
}

impl FromStr for CalculusName {
    type Err = ProofError;

    fn from_str(s: &str) -> Result<CalculusName, ProofError> {
        Ok(match s {
            "hg-tri" | "hg" => CalculusName::HgTri,
            "hkbig-c" => CalculusName::HKbigC,
            "hkbig-f" => CalculusName::HKbigF,
            "hkbig2-f" | "hkbig2" => CalculusName::HKbig2F,
            other => return Err(ProofError::UnknownCalculus(other.to_string())),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Schema {
    pub id: &'static str,
    /// Template whose variables are metavariables.
    pub template: Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NecRule {
    /// From a theorem, its boxing.
    Box,
    /// From a theorem implication, the diamond implication (monotonicity).
    DiaMono,
    Box2,
    Dia2Mono,
    /// From a theorem, its Delta.
    Delta,
}

#[derive(Debug, Clone)]
pub struct Calculus {
    pub name: CalculusName,
    pub schemas: Vec<Schema>,
    pub nec_rules: Vec<NecRule>,
}

fn schema(id: &'static str, template: &str) -> Schema {
    Schema { id, template: template.parse().expect("schema template parses") }
}

fn prop_schemas() -> Vec<Schema> {
    vec![
        schema("1", "(phi -> chi) -> ((chi -> psi) -> (phi -> psi))"),
        schema("2a", "phi -> (phi | chi)"),
        schema("2b", "chi -> (phi | chi)"),
        schema("2c", "(phi -> psi) -> ((chi -> psi) -> ((phi | chi) -> psi))"),
        schema("3a", "(phi & chi) -> phi"),
        schema("3b", "(phi & chi) -> chi"),
        schema("3c", "(phi -> chi) -> ((phi -> psi) -> (phi -> (chi & psi)))"),
        schema("4a", "(phi -> (chi -> psi)) -> ((phi & chi) -> psi)"),
        schema("4b", "((phi & chi) -> psi) -> (phi -> (chi -> psi))"),
        schema("5", "~phi -> (phi -> chi)"),
        schema("6", "(phi -> chi) | (chi -> phi)"),
        schema("7", "tri phi | ~tri phi"),
        schema("8a", "tri(phi -> chi) -> (tri phi -> tri chi)"),
        schema("8b", "tri(phi | chi) -> (tri phi | tri chi)"),
        schema("9a", "tri phi -> phi"),
        schema("9b", "tri phi -> tri tri phi"),
    ]
}

fn modal_schemas() -> Vec<Schema> {
    vec![
        schema("0", "~<>0"),
        schema("K1", "[](phi -> chi) -> ([]phi -> []chi)"),
        schema("K2", "<>(phi | chi) -> (<>phi | <>chi)"),
        schema("FS1", "<>(phi -> chi) -> ([]phi -> <>chi)"),
        schema("FS2", "(<>phi -> []chi) -> [](phi -> chi)"),
    ]
}

fn crisp_schemas() -> Vec<Schema> {
    vec![
        schema("NTD", "~tri(<>phi -> <>chi) -> <>~tri(phi -> chi)"),
        schema("Cr1", "[](phi | chi) -> ([]phi | <>chi)"),
        schema("Cr2", "tri[]phi -> []tri phi"),
    ]
}

fn indexed_schemas() -> Vec<Schema> {
    vec![
        schema("0-2", "~<>2 0"),
        schema("K1-2", "[]2(phi -> chi) -> ([]2 phi -> []2 chi)"),
        schema("K2-2", "<>2(phi | chi) -> (<>2 phi | <>2 chi)"),
        schema("FS1-2", "<>2(phi -> chi) -> ([]2 phi -> <>2 chi)"),
        schema("FS2-2", "(<>2 phi -> []2 chi) -> []2(phi -> chi)"),
    ]
}

impl Calculus {
    pub fn get(name: CalculusName) -> Calculus {
        let mut schemas = prop_schemas();
        let mut nec_rules = vec![NecRule::Delta];
        match name {
            CalculusName::HgTri => {}
            CalculusName::HKbigF => {
                schemas.extend(modal_schemas());
                nec_rules.extend([NecRule::Box, NecRule::DiaMono]);
            }
            CalculusName::HKbigC => {
                schemas.extend(modal_schemas());
                schemas.extend(crisp_schemas());
                nec_rules.extend([NecRule::Box, NecRule::DiaMono]);
            }
            CalculusName::HKbig2F => {
                schemas.extend(modal_schemas());
                schemas.extend(indexed_schemas());
                nec_rules.extend([NecRule::Box, NecRule::DiaMono, NecRule::Box2, NecRule::Dia2Mono]);
            }
        }
        Calculus { name, schemas, nec_rules }
    }

    pub fn schema(&self, id: &str) -> Result<&Schema, ProofError> {
        self.schemas
            .iter()
            .find(|s| s.id.eq_ignore_ascii_case(id))
            .ok_or_else(|| ProofError::UnknownSchema(id.to_string()))
    }
}

/// Capture-free instantiation of a schema template: every variable of the
/// template is a metavariable and must be bound.
pub fn instantiate(
    template: &Formula,
    subst: &BTreeMap<String, Formula>,
) -> Result<Formula, ProofError> {
    Ok(match template {
        Formula::Var(v) => subst
            .get(&v.name)
            .cloned()
            .ok_or_else(|| ProofError::MissingMetavariable(v.name.clone()))?,
        Formula::Zero | Formula::One | Formula::BConst => template.clone(),
        Formula::StrongNeg(a) => Formula::strong_neg(instantiate(a, subst)?),
        Formula::DeMorganNeg(a) => Formula::de_morgan_neg(instantiate(a, subst)?),
        Formula::Delta(a) => Formula::delta(instantiate(a, subst)?),
        Formula::And(a, b) => Formula::and(instantiate(a, subst)?, instantiate(b, subst)?),
        Formula::Or(a, b) => Formula::or(instantiate(a, subst)?, instantiate(b, subst)?),
        Formula::Impl(a, b) => Formula::impl_(instantiate(a, subst)?, instantiate(b, subst)?),
        Formula::Coimpl(a, b) => Formula::coimpl(instantiate(a, subst)?, instantiate(b, subst)?),
        Formula::Modal(op, a) => Formula::modal(*op, instantiate(a, subst)?),
    })
}

/// One-pass anti-unification of a formula against a schema template:
/// metavariables bind arbitrary subformulas, consistently.
pub fn match_schema(template: &Formula, f: &Formula) -> Option<BTreeMap<String, Formula>> {
    fn go(t: &Formula, f: &Formula, binds: &mut BTreeMap<String, Formula>) -> bool {
        match (t, f) {
            (Formula::Var(v), _) => match binds.get(&v.name) {
                Some(bound) => bound == f,
                None => {
                    binds.insert(v.name.clone(), f.clone());
                    true
                }
            },
            (Formula::Zero, Formula::Zero)
            | (Formula::One, Formula::One)
            | (Formula::BConst, Formula::BConst) => true,
            (Formula::StrongNeg(a), Formula::StrongNeg(b))
            | (Formula::DeMorganNeg(a), Formula::DeMorganNeg(b))
            | (Formula::Delta(a), Formula::Delta(b)) => go(a, b, binds),
            (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::Impl(a1, a2), Formula::Impl(b1, b2))
            | (Formula::Coimpl(a1, a2), Formula::Coimpl(b1, b2)) => {
                go(a1, b1, binds) && go(a2, b2, binds)
            }
            (Formula::Modal(op1, a), Formula::Modal(op2, b)) => op1 == op2 && go(a, b, binds),
            _ => false,
        }
    }
    let mut binds = BTreeMap::new();
    go(template, f, &mut binds).then_some(binds)
}

#[derive(Debug, Clone)]
pub enum Justification {
    Hypothesis,
    Axiom { id: String, subst: Option<BTreeMap<String, Formula>> },
    ModusPonens { from: (usize, usize) },
    Nec { rule: NecRule, from: usize },
}

#[derive(Debug, Clone)]
pub struct Step {
    pub formula: Option<Formula>,
    pub just: Justification,
}

#[derive(Debug, Clone)]
pub struct Derivation {
    pub gamma: Vec<Formula>,
    pub calculus: CalculusName,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Accepted { conclusion: Formula, depends_on_gamma: bool },
    Rejected { step: usize, reason: String },
}

impl CheckOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CheckOutcome::Accepted { .. })
    }
}

/// Verifies a derivation step by step.
///
/// A step depends on the hypotheses if it is one of them or is derived by a
/// rule from a dependent premise; necessitation rules only apply to steps
/// that do not depend on the hypotheses.
pub fn check_derivation(d: &Derivation) -> CheckOutcome {
    let calculus = Calculus::get(d.calculus);
    let mut proved: Vec<(Formula, bool)> = Vec::with_capacity(d.steps.len());
    for (at, step) in d.steps.iter().enumerate() {
        let step_no = at + 1;
        let reject = |reason: String| CheckOutcome::Rejected { step: step_no, reason };
        let fetch = |idx: usize| -> Result<&(Formula, bool), String> {
            if idx == 0 || idx > at {
                Err(format!("step reference {idx} out of range"))
            } else {
                Ok(&proved[idx - 1])
            }
        };
        let outcome: Result<(Formula, bool), String> = match &step.just {
            Justification::Hypothesis => match &step.formula {
                None => Err("hypothesis steps must state their formula".into()),
                Some(f) if d.gamma.contains(f) => Ok((f.clone(), true)),
                Some(f) => Err(format!("`{f}` is not among the hypotheses")),
            },
            Justification::Axiom { id, subst } => (|| {
                let schema = calculus.schema(id).map_err(|e| e.to_string())?;
                match (subst, &step.formula) {
                    (Some(map), stated) => {
                        let inst = instantiate(&schema.template, map).map_err(|e| e.to_string())?;
                        if let Some(f) = stated {
                            if f != &inst {
                                return Err(format!(
                                    "stated formula differs from the instantiation `{inst}`"
                                ));
                            }
                        }
                        Ok((inst, false))
                    }
                    (None, Some(f)) => match match_schema(&schema.template, f) {
                        Some(_) => Ok((f.clone(), false)),
                        None => Err(format!("`{f}` does not match schema {}", schema.id)),
                    },
                    (None, None) => Err("axiom steps need a formula or a substitution".into()),
                }
            })(),
            Justification::ModusPonens { from: (i, j) } => (|| {
                let (fi, di) = fetch(*i)?;
                let (fj, dj) = fetch(*j)?;
                let conclusion = match (fj, fi) {
                    (Formula::Impl(a, c), premise) if **a == *premise => (**c).clone(),
                    (premise, Formula::Impl(a, c)) if **a == *premise => (**c).clone(),
                    _ => return Err(format!("steps {i} and {j} are not premise and implication")),
                };
                if let Some(f) = &step.formula {
                    if f != &conclusion {
                        return Err(format!("stated formula differs from `{conclusion}`"));
                    }
                }
                Ok((conclusion, *di || *dj))
            })(),
            Justification::Nec { rule, from } => (|| {
                if !calculus.nec_rules.contains(rule) {
                    return Err(format!("rule {rule:?} is not part of {}", calculus.name.name()));
                }
                let (premise, depends) = fetch(*from)?;
                if *depends {
                    return Err(format!(
                        "necessitation applied to step {from}, which depends on the hypotheses"
                    ));
                }
                let conclusion = match rule {
                    NecRule::Box => Formula::boxed(premise.clone()),
                    NecRule::Box2 => Formula::modal(
                        crate::formula::ModalOp::indexed(
                            crate::formula::ModalShape::Box,
                            crate::formula::RelIndex::Two,
                        ),
                        premise.clone(),
                    ),
                    NecRule::Delta => Formula::delta(premise.clone()),
                    NecRule::DiaMono | NecRule::Dia2Mono => {
                        let Formula::Impl(a, b) = premise else {
                            return Err("diamond monotonicity needs an implication premise".into());
                        };
                        let op = if *rule == NecRule::DiaMono {
                            crate::formula::ModalOp::DIAMOND
                        } else {
                            crate::formula::ModalOp::indexed(
                                crate::formula::ModalShape::Diamond,
                                crate::formula::RelIndex::Two,
                            )
                        };
                        Formula::impl_(
                            Formula::modal(op, (**a).clone()),
                            Formula::modal(op, (**b).clone()),
                        )
                    }
                };
                if let Some(f) = &step.formula {
                    if f != &conclusion {
                        return Err(format!("stated formula differs from `{conclusion}`"));
                    }
                }
                Ok((conclusion, false))
            })(),
        };
        match outcome {
            Ok(entry) => proved.push(entry),
            Err(reason) => return reject(reason),
        }
    }
    match proved.last() {
        None => CheckOutcome::Rejected { step: 0, reason: "empty derivation".into() },
        Some((conclusion, depends)) => CheckOutcome::Accepted {
            conclusion: conclusion.clone(),
            depends_on_gamma: *depends,
        },
    }
}

// --- Derivation files ---

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivationFile {
    #[serde(default)]
    pub gamma: Vec<String>,
    pub calculus: String,
    pub steps: Vec<StepFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    pub by: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subst: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub from: Vec<usize>,
}

impl DerivationFile {
    pub fn from_json(text: &str) -> Result<DerivationFile, ProofError> {
        serde_json::from_str(text).map_err(|e| ProofError::Parse(e.to_string()))
    }

    pub fn parse(&self) -> Result<Derivation, ProofError> {
        let parse_formula =
            |s: &str| -> Result<Formula, ProofError> { s.parse().map_err(|e| ProofError::Parse(format!("{e}"))) };
        let gamma =
            self.gamma.iter().map(|s| parse_formula(s)).collect::<Result<Vec<_>, _>>()?;
        let calculus: CalculusName = self.calculus.parse()?;
        let mut steps = Vec::new();
        for raw in &self.steps {
            let formula = raw.formula.as_deref().map(parse_formula).transpose()?;
            let one_ref = || -> Result<usize, ProofError> {
                match raw.from.as_slice() {
                    [i] => Ok(*i),
                    _ => Err(ProofError::BadJustification(raw.by.clone())),
                }
            };
            let just = match raw.by.as_str() {
                "hyp" => Justification::Hypothesis,
                "mp" => match raw.from.as_slice() {
                    [i, j] => Justification::ModusPonens { from: (*i, *j) },
                    _ => return Err(ProofError::BadJustification(raw.by.clone())),
                },
                "nec-box" => Justification::Nec { rule: NecRule::Box, from: one_ref()? },
                "nec-dia" => Justification::Nec { rule: NecRule::DiaMono, from: one_ref()? },
                "nec-box-2" => Justification::Nec { rule: NecRule::Box2, from: one_ref()? },
                "nec-dia-2" => Justification::Nec { rule: NecRule::Dia2Mono, from: one_ref()? },
                "dnec" => Justification::Nec { rule: NecRule::Delta, from: one_ref()? },
                by => match by.strip_prefix("axiom:") {
                    Some(id) => {
                        let subst = raw
                            .subst
                            .as_ref()
                            .map(|m| {
                                m.iter()
                                    .map(|(k, v)| Ok((k.clone(), parse_formula(v)?)))
                                    .collect::<Result<BTreeMap<_, _>, ProofError>>()
                            })
                            .transpose()?;
                        Justification::Axiom { id: id.to_string(), subst }
                    }
                    None => return Err(ProofError::BadJustification(by.to_string())),
                },
            };
            steps.push(Step { formula, just });
        }
        Ok(Derivation { gamma, calculus, steps })
    }
}

// --- Soundness probing ---

#[derive(Debug, Clone)]
pub struct ProbeConfig {
    /// Instantiations per schema; the identity substitution always comes
    /// first.
    pub instantiations: usize,
    /// Random models drawn in addition to the built-in adversarial fixtures.
    pub models: usize,
    pub max_worlds: usize,
    pub max_denominator: u32,
    /// Restrict random frames to crisp weights.
    pub crisp_frames: bool,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> ProbeConfig {
        ProbeConfig {
            instantiations: 25,
            models: 60,
            max_worlds: 3,
            max_denominator: 6,
            crisp_frames: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemaFailure {
    pub schema: String,
    pub instance: String,
    pub model: ModelFile,
    pub world: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub evaluations: u64,
    pub failures: Vec<SchemaFailure>,
}

impl ProbeReport {
    pub fn failing_schemas(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.failures.iter().map(|f| f.schema.as_str()).collect();
        out.sort();
        out.dedup();
        out
    }
}

fn random_formula(rng: &mut StdRng, depth: usize, modal: bool) -> Formula {
    let leaf = |rng: &mut StdRng| match rng.gen_range(0..4u8) {
        0 => Formula::var("p"),
        1 => Formula::var("q"),
        2 => Formula::Zero,
        _ => Formula::One,
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..9u8) {
        0 => leaf(rng),
        1 => Formula::strong_neg(random_formula(rng, depth - 1, modal)),
        2 => Formula::delta(random_formula(rng, depth - 1, modal)),
        3 => Formula::and(
            random_formula(rng, depth - 1, modal),
            random_formula(rng, depth - 1, modal),
        ),
        4 => Formula::or(
            random_formula(rng, depth - 1, modal),
            random_formula(rng, depth - 1, modal),
        ),
        5 => Formula::impl_(
            random_formula(rng, depth - 1, modal),
            random_formula(rng, depth - 1, modal),
        ),
        6 if modal => Formula::boxed(random_formula(rng, depth - 1, modal)),
        7 if modal => Formula::diamond(random_formula(rng, depth - 1, modal)),
        _ => Formula::coimpl(
            random_formula(rng, depth - 1, modal),
            random_formula(rng, depth - 1, modal),
        ),
    }
}

fn random_value(rng: &mut StdRng, max_den: u32, crisp: bool) -> Value {
    if crisp {
        return if rng.gen_bool(0.5) { Value::one() } else { Value::zero() };
    }
    let den = rng.gen_range(1..=max_den.max(1)) as i64;
    let num = rng.gen_range(0..=den);
    Value::new(num, den).expect("sampled in range")
}

fn random_model(rng: &mut StdRng, cfg: &ProbeConfig, vars: &[Var]) -> SingleModel {
    let n = rng.gen_range(1..=cfg.max_worlds.max(1));
    let mut frame = WeightedFrame::with_size(n);
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(0.6) {
                let w = random_value(rng, cfg.max_denominator, cfg.crisp_frames);
                let (an, bn) = (frame.world_name(a).to_string(), frame.world_name(b).to_string());
                frame.set_plus(&an, &bn, w).unwrap();
            }
        }
    }
    let mut m = SingleModel::new(frame);
    for var in vars {
        let vals = (0..n).map(|_| random_value(rng, cfg.max_denominator, false)).collect();
        m.val.insert(var.clone(), vals);
    }
    m
}

/// Hand-picked fuzzy models on which the crisp-only schemas break.
fn adversarial_models() -> Vec<SingleModel> {
    let mk = |p: &str, q: &str| {
        let mut m = SingleModel::new(crate::fixtures::half_edge_model().frame);
        m.set_value(Var::plain("p"), "w1", p.parse().unwrap()).unwrap();
        m.set_value(Var::plain("q"), "w1", q.parse().unwrap()).unwrap();
        m
    };
    vec![mk("1/3", "1/4"), mk("1/2", "0"), mk("0", "1/2"), mk("1/2", "1/2")]
}

/// Evaluates each schema of the calculus on adversarial fixtures and random
/// models, reporting every instance/world where it drops below 1.
///
/// Sound calculi for the sampled frame class must report no failures; the
/// crisp-only schemas must fail on the fuzzy fixtures.
pub fn soundness_probe(name: CalculusName, cfg: &ProbeConfig) -> ProbeReport {
    let calculus = Calculus::get(name);
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let vars = [Var::plain("p"), Var::plain("q")];
    let modal = name != CalculusName::HgTri;

    let mut models: Vec<SingleModel> = if cfg.crisp_frames { vec![] } else { adversarial_models() };
    for _ in 0..cfg.models {
        models.push(random_model(&mut rng, cfg, &vars));
    }

    let identity: BTreeMap<String, Formula> = [
        ("phi".to_string(), Formula::var("p")),
        ("chi".to_string(), Formula::var("q")),
        ("psi".to_string(), Formula::and(Formula::var("p"), Formula::var("q"))),
    ]
    .into_iter()
    .collect();

    let mut evaluations = 0u64;
    let mut failures = Vec::new();
    for schema in &calculus.schemas {
        let mut instances = vec![instantiate(&schema.template, &identity).unwrap()];
        for _ in 1..cfg.instantiations.max(1) {
            let subst: BTreeMap<String, Formula> = ["phi", "chi", "psi"]
                .iter()
                .map(|m| (m.to_string(), random_formula(&mut rng, 2, modal)))
                .collect();
            instances.push(instantiate(&schema.template, &subst).unwrap());
        }
        for instance in &instances {
            for model in &models {
                let values = eval_single_all(model, instance).expect("axiom instances evaluate");
                evaluations += values.len() as u64;
                for (w, value) in values.iter().enumerate() {
                    if !value.is_one() {
                        failures.push(SchemaFailure {
                            schema: schema.id.to_string(),
                            instance: instance.to_string(),
                            model: ModelFile::from_single(model),
                            world: model.frame.world_name(w).to_string(),
                            value: value.to_string(),
                        });
                    }
                }
            }
        }
    }
    ProbeReport { evaluations, failures }
}

#[cfg(test)]
mod tests;
