//! Command-line interface: parsing, evaluation, validity and satisfiability
//! search, translations, frame checks, derivation checking, and the golden
//! fixture table.
//!
//! Reports are JSON by default (`--human` for tables). Exit codes: 0 for
//! clean verdicts, 1 when a witness/refutation was produced or a check
//! failed, 2 for usage errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gmk_core::decide::{
    check_bitransfer, check_transfer, frame_valid_with, oracle, sat_bounded_with,
    strong_frame_valid_with, valid_bounded_with, Logic, SatStatus, SearchBounds, Strategy,
    Verdict, VerdictStatus,
};
use gmk_core::fixtures;
use gmk_core::formula::Formula;
use gmk_core::frames;
use gmk_core::hilbert::{check_derivation, CheckOutcome, DerivationFile};
use gmk_core::kripke::{eval_fmodel, eval_single, eval_twin, LoadedModel, ModelFile};
use gmk_core::transform;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gmk", version, about = "Exact toolkit for fuzzy bi-Gödel modal logics")]
struct Cli {
    /// Render human-readable output instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Force single-threaded search.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and echo its structure.
    Parse {
        formula: String,
    },
    /// Evaluate a formula on a model file at a world.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        world: String,
        /// Use the per-world value menus (`T` block) with modal rounding.
        #[arg(long)]
        fmodel: bool,
    },
    /// Decide validity: exactly on a given frame, or by bounded search.
    Validity(ValidityArgs),
    /// Bounded satisfiability search.
    Sat(SearchArgs),
    /// Apply a syntactic translation to a formula.
    Translate(TranslateArgs),
    /// Check a structural frame property against its defining formula.
    FrameCheck {
        #[arg(long)]
        model: PathBuf,
        /// One of: crisp+, crisp-, equal, fls:H,I,J,K@WORLD, tau, finbranch.
        #[arg(long)]
        property: String,
    },
    /// Verify a Hilbert-style derivation file.
    ProofCheck {
        #[arg(long)]
        file: PathBuf,
    },
    /// Run the built-in golden fixture table.
    Fixtures,
    /// Check the transfer criterion of a formula at a pointed frame.
    Transfer {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        world: String,
        /// Second mono-relational frame file: check bi-transfer instead.
        #[arg(long)]
        other: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    formula: String,
    #[arg(long, default_value = "kbig-f")]
    logic: String,
    #[arg(long)]
    max_worlds: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    /// Write the witness model (with trace) here.
    #[arg(long)]
    emit_countermodel: Option<PathBuf>,
}

#[derive(Args)]
struct ValidityArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Decide exactly on this frame instead of searching for models.
    #[arg(long)]
    frame: Option<PathBuf>,
    /// Restrict the frame-local check to one world.
    #[arg(long)]
    world: Option<String>,
    /// After a valid verdict, cross-check with this many random valuations.
    #[arg(long)]
    sample_check: Option<usize>,
    /// Seed for the sampling cross-check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long)]
    formula: String,
    #[arg(long)]
    nnf: bool,
    #[arg(long)]
    star: bool,
    #[arg(long)]
    partial: bool,
    #[arg(long)]
    circ: bool,
    #[arg(long)]
    plusbullet: bool,
    #[arg(long)]
    bang: bool,
    /// Emit the two-formula embedding.
    #[arg(long)]
    pair: bool,
    /// Translate for mono-relational frames (no relation indices).
    #[arg(long)]
    mono: bool,
}

fn read_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read model file {}", path.display()))?;
    Ok(ModelFile::from_json(&text)?)
}

fn parse_formula(text: &str) -> Result<Formula> {
    text.parse::<Formula>().map_err(|e| anyhow!("formula error: {e}"))
}

fn ast_json(f: &Formula) -> serde_json::Value {
    let kids: Vec<serde_json::Value> = f.children().iter().map(|c| ast_json(c)).collect();
    let head = match f {
        Formula::Var(v) => format!("var:{v}"),
        Formula::Zero => "0".into(),
        Formula::One => "1".into(),
        Formula::BConst => "B".into(),
        Formula::StrongNeg(_) => "~".into(),
        Formula::DeMorganNeg(_) => "neg".into(),
        Formula::Delta(_) => "tri".into(),
        Formula::And(..) => "&".into(),
        Formula::Or(..) => "|".into(),
        Formula::Impl(..) => "->".into(),
        Formula::Coimpl(..) => "-<".into(),
        Formula::Modal(op, _) => {
            let rendered = Formula::modal(*op, Formula::Zero).to_string();
            rendered.trim_end_matches(|c: char| c == '0' || c == ' ').to_string()
        }
    };
    if kids.is_empty() {
        json!(head)
    } else {
        json!({ head: kids })
    }
}

fn emit_witness(verdict_json: &serde_json::Value, path: &Option<PathBuf>) -> Result<()> {
    if let (Some(path), Some(witness)) = (path, verdict_json.get("witness")) {
        if !witness.is_null() {
            std::fs::write(path, serde_json::to_string_pretty(witness)?)
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    Ok(())
}

fn bounds_for(args: &SearchArgs, f: &Formula) -> SearchBounds {
    let mut bounds = SearchBounds::for_formula(f);
    if let Some(w) = args.max_worlds {
        bounds.max_worlds = w;
    }
    if let Some(g) = args.grid {
        bounds.value_grid = g;
    }
    bounds.max_depth = args.depth.or(bounds.max_depth);
    if let Some(b) = args.budget {
        bounds.budget = b;
    }
    bounds
}

fn cmd_validity(cli: &Cli, args: &ValidityArgs, strategy: Strategy) -> Result<u8> {
    let f = parse_formula(&args.search.formula)?;
    let logic: Logic = args.search.logic.parse()?;
    let verdict: Verdict = match &args.frame {
        Some(path) => {
            let frame = read_model(path)?.frame()?;
            let world = args.world.as_deref();
            let verdict = if logic.twin() {
                strong_frame_valid_with(&frame, &f, world, strategy)?
            } else {
                frame_valid_with(&frame, &f, world, strategy)?
            };
            if let (VerdictStatus::Valid, Some(samples), false) =
                (verdict.status, args.sample_check, logic.twin())
            {
                let refuter =
                    oracle::sample_refutation(&frame, &f, world, samples, 8, args.seed)?;
                if refuter.is_some() {
                    bail!("sampling refuted a formula judged valid; this is a bug");
                }
            }
            verdict
        }
        None => valid_bounded_with(&f, logic, &bounds_for(&args.search, &f), strategy)?,
    };
    let out = serde_json::to_value(&verdict)?;
    emit_witness(&out, &args.search.emit_countermodel)?;
    if cli.human {
        match verdict.status {
            VerdictStatus::Valid => println!("valid"),
            VerdictStatus::ExhaustedBounds => println!(
                "no countermodel found (bounds exhausted, {} models checked)",
                verdict.stats.checked
            ),
            VerdictStatus::Refuted => {
                let w = verdict.witness.as_ref().unwrap();
                println!("refuted at {} (value {})", w.world, w.value);
            }
        }
    } else {
        println!("{out}");
    }
    Ok(if verdict.status == VerdictStatus::Refuted { 1 } else { 0 })
}

fn cmd_translate(cli: &Cli, args: &TranslateArgs) -> Result<u8> {
    let f = parse_formula(&args.formula)?;
    let picked = [args.nnf, args.star, args.partial, args.circ, args.plusbullet, args.bang, args.pair]
        .iter()
        .filter(|&&b| b)
        .count();
    if picked != 1 {
        bail!("pick exactly one of --nnf --star --partial --circ --plusbullet --bang --pair");
    }
    if args.pair {
        let (truth_side, falsity_side) = transform::embedding_pair(&f, args.mono)?;
        if cli.human {
            println!("{truth_side}");
            println!("{falsity_side}");
        } else {
            println!(
                "{}",
                json!({
                    "truth_side": truth_side.to_string(),
                    "falsity_side": falsity_side.to_string(),
                })
            );
        }
        return Ok(0);
    }
    let out = if args.nnf {
        transform::to_nnf(&f)?
    } else if args.star {
        transform::star(&transform::to_nnf(&f)?)?
    } else if args.partial {
        transform::partial(&f, args.mono)?
    } else if args.circ {
        transform::circ(&f)?
    } else if args.plusbullet {
        transform::plus_bullet(&f)?
    } else {
        transform::bang(&f)?
    };
    if cli.human {
        println!("{out}");
    } else {
        println!("{}", json!({ "result": out.to_string() }));
    }
    Ok(0)
}

fn cmd_frame_check(cli: &Cli, model: &Path, property: &str) -> Result<u8> {
    let frame = read_model(model)?.frame()?;
    let (holds, detail) = match property {
        "crisp+" | "crisp-" => {
            let which = if property == "crisp+" { frames::RelSel::Plus } else { frames::RelSel::Minus };
            let holds = frames::is_crisp(&frame, which);
            let witness = frames::crispness_witness(&frame, which)?;
            let detail = witness.map(|(m, world)| {
                json!({
                    "axiom": frames::crispness_axiom(which).to_string(),
                    "world": world,
                    "model": ModelFile::from_twin(&m),
                })
            });
            (holds, detail)
        }
        "equal" => {
            let holds = frames::relations_equal(&frame);
            let witness = frames::monorel_witness(&frame)?;
            let detail = witness.map(|(m, world)| {
                json!({
                    "axiom": frames::interdefinability_axiom().to_string(),
                    "world": world,
                    "model": ModelFile::from_twin(&m),
                })
            });
            (holds, detail)
        }
        "tau" => {
            let worlds = frames::tau_seriality_check(&frame);
            (!worlds.is_empty(), Some(json!({ "worlds": worlds })))
        }
        "finbranch" => (frames::finitely_branching_axioms(&frame)?, None),
        other => match other.strip_prefix("fls:") {
            Some(rest) => {
                let (nums, world) =
                    rest.split_once('@').ok_or_else(|| anyhow!("expected fls:H,I,J,K@WORLD"))?;
                let parts: Vec<usize> = nums
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| anyhow!("expected four integers in fls:H,I,J,K@WORLD"))?;
                let [h, i, j, k] = parts[..] else {
                    bail!("expected four integers in fls:H,I,J,K@WORLD");
                };
                let holds = frames::fls_frame_check(&frame, world, h, i, j, k)?;
                let detail = if holds {
                    None
                } else {
                    let (y, z) =
                        frames::fls_failure(&frame, world, h, i, j, k)?.expect("failure pair");
                    let refuting = frames::fls_refuting_valuation(&frame, world, &y, &z, h, i, j, k)?;
                    Some(json!({
                        "failing_pair": [y, z],
                        "model": ModelFile::from_single(&refuting),
                    }))
                };
                (holds, detail)
            }
            None => bail!("unknown property `{other}`"),
        },
    };
    if cli.human {
        println!("{property}: {}", if holds { "holds" } else { "fails" });
    } else {
        let mut out = json!({ "property": property, "holds": holds });
        if let Some(detail) = detail {
            out["detail"] = detail;
        }
        println!("{out}");
    }
    Ok(if holds { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8> {
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::Parallel };
    match &cli.command {
        Command::Parse { formula } => {
            let f = parse_formula(formula)?;
            if cli.human {
                println!("canonical:   {f}");
                println!("language:    {}", f.language());
                println!("size:        {}", f.size());
                println!("modal depth: {}", f.modal_depth());
            } else {
                println!(
                    "{}",
                    json!({
                        "canonical": f.to_string(),
                        "language": f.language().to_string(),
                        "size": f.size(),
                        "modal_depth": f.modal_depth(),
                        "variables": f.variables().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "ast": ast_json(&f),
                    })
                );
            }
            Ok(0)
        }
        Command::Eval { model, formula, world, fmodel } => {
            let file = read_model(model)?;
            let f = parse_formula(formula)?;
            let rendered = if *fmodel {
                let fm = file.load_fmodel()?;
                eval_fmodel(&fm, &f, world)?.to_string()
            } else {
                match file.load()? {
                    LoadedModel::Single(m) => eval_single(&m, &f, world)?.to_string(),
                    LoadedModel::Twin(m) => eval_twin(&m, &f, world)?.to_string(),
                }
            };
            if cli.human {
                println!("{rendered}");
            } else {
                println!("{}", json!({ "formula": f.to_string(), "world": world, "value": rendered }));
            }
            Ok(0)
        }
        Command::Validity(args) => cmd_validity(cli, args, strategy),
        Command::Sat(args) => {
            let f = parse_formula(&args.formula)?;
            let logic: Logic = args.logic.parse()?;
            let verdict = sat_bounded_with(&f, logic, &bounds_for(args, &f), strategy)?;
            let out = serde_json::to_value(&verdict)?;
            emit_witness(&out, &args.emit_countermodel)?;
            if cli.human {
                match verdict.status {
                    SatStatus::Satisfiable => {
                        let w = verdict.witness.as_ref().unwrap();
                        println!("satisfiable at {} (value {})", w.world, w.value);
                    }
                    SatStatus::Unsatisfiable => println!("unsatisfiable"),
                    SatStatus::ExhaustedBounds => println!(
                        "no satisfying model found (bounds exhausted, {} models checked)",
                        verdict.stats.checked
                    ),
                }
            } else {
                println!("{out}");
            }
            Ok(if verdict.status == SatStatus::Satisfiable { 1 } else { 0 })
        }
        Command::Translate(args) => cmd_translate(cli, args),
        Command::FrameCheck { model, property } => cmd_frame_check(cli, model, property),
        Command::ProofCheck { file } => {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("cannot read {}", file.display()))?;
            let derivation = DerivationFile::from_json(&text)?.parse()?;
            match check_derivation(&derivation) {
                CheckOutcome::Accepted { conclusion, depends_on_gamma } => {
                    if cli.human {
                        println!("accepted: {conclusion}");
                    } else {
                        println!(
                            "{}",
                            json!({
                                "accepted": true,
                                "conclusion": conclusion.to_string(),
                                "depends_on_gamma": depends_on_gamma,
                            })
                        );
                    }
                    Ok(0)
                }
                CheckOutcome::Rejected { step, reason } => {
                    if cli.human {
                        println!("rejected at step {step}: {reason}");
                    } else {
                        println!("{}", json!({ "accepted": false, "step": step, "reason": reason }));
                    }
                    Ok(1)
                }
            }
        }
        Command::Fixtures => {
            let cases = fixtures::golden_cases();
            let mut all_ok = true;
            let mut rows = Vec::new();
            for case in &cases {
                let got = case.run().map(|e| e.to_string()).unwrap_or_else(|e| e.to_string());
                let ok = case.passes();
                all_ok &= ok;
                rows.push(json!({
                    "name": case.name,
                    "formula": case.formula,
                    "world": case.world,
                    "expected": case.expected.to_string(),
                    "got": got,
                    "pass": ok,
                    "note": case.note,
                }));
            }
            if cli.human {
                for row in &rows {
                    println!(
                        "{} {:40} {:28} @ {:3} expected {:14} got {:14}{}",
                        if row["pass"].as_bool().unwrap() { "PASS" } else { "FAIL" },
                        row["name"].as_str().unwrap(),
                        row["formula"].as_str().unwrap(),
                        row["world"].as_str().unwrap(),
                        row["expected"].as_str().unwrap(),
                        row["got"].as_str().unwrap(),
                        row["note"].as_str().map(|n| format!("  ({n})")).unwrap_or_default(),
                    );
                }
            } else {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::Transfer { model, formula, world, other } => {
            let f = parse_formula(formula)?;
            let frame = read_model(model)?.frame()?;
            let ok = match other {
                None => check_transfer(&frame, world, &f)?,
                Some(path) => {
                    let second = read_model(path)?.frame()?;
                    check_bitransfer(&frame, &second, world, &f)?
                }
            };
            if cli.human {
                println!("{}", if ok { "transferrable here" } else { "transfer fails here" });
            } else {
                println!("{}", json!({ "holds": ok }));
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    #[cfg(feature = "parallel")]
    if let Ok(workers) = std::env::var("GMK_MAX_WORKERS") {
        if let Ok(n) = workers.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
