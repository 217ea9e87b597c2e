//! `carddl`: command-line front end for the cardinality-constraint reasoners.
//!
//! Exit codes: 0 positive answer, 1 negative answer, 2 resource limit,
//! 3 parse or I/O error, 4 internal error. JSON goes to stdout, logs to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use carddl::consist::{consistent, Consistency};
use carddl::query::{entails, Entailment};
use carddl::satpp::{sat, Reduction, SatOutcome};
use carddl::semantics::{enumerate_models, satisfies, EnumOptions, Interp};
use carddl::syntax::{ecbox_to_concept, parse_kb, parse_query, scc_to_pp, Concept, Constraint, Kb, PaExpr, SetTerm};
use carddl::syntax::{Atom, SetVar, Signature};
use carddl::transforms::{cyclic_cover, girth, k_loosening, s_duplicate, unravel};
use carddl::{Config, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "carddl", version, about = "Reasoning with global and local cardinality constraints")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Opts {
    /// Write the model (or countermodel) as JSON to this file.
    #[arg(long, global = true, env = "CARDDL_MODEL")]
    model: Option<PathBuf>,
    /// Include the decision trace in the JSON output.
    #[arg(long, global = true, env = "CARDDL_TRACE")]
    trace: bool,
    /// Include the QFBAPA formula handed to the solver (sat only).
    #[arg(long, global = true, env = "CARDDL_DUMP_DELTA")]
    dump_delta: bool,
    #[arg(long, global = true, env = "CARDDL_MAX_VENN", value_parser = clap::value_parser!(u64).range(1..))]
    max_venn: Option<u64>,
    #[arg(long, global = true, env = "CARDDL_MAX_TYPES", value_parser = clap::value_parser!(u64).range(1..))]
    max_types: Option<u64>,
    /// Time limit in seconds.
    #[arg(long, global = true, env = "CARDDL_TIMEOUT", value_parser = clap::value_parser!(u64).range(1..))]
    timeout: Option<u64>,
    /// Upper bound on parallel consistency checks.
    #[arg(long, global = true, env = "CARDDL_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Largest domain size tried by the model enumerator.
    #[arg(long, global = true, env = "CARDDL_ORACLE_SIZE", default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    oracle_size: u64,
    #[arg(long, global = true, env = "CARDDL_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Satisfiability of the goal concept w.r.t. the TBox and ECBox.
    Sat { kb: PathBuf },
    /// Consistency of an ABox with a TBox and an ERCBox.
    Consistent { kb: PathBuf },
    /// Conjunctive query entailment.
    Entails { kb: PathBuf, query: PathBuf },
    /// Check a model file against a knowledge base.
    Check { model: PathBuf, kb: PathBuf },
    /// Count the models of a knowledge base up to `--oracle-size` elements.
    Oracle { kb: PathBuf },
    /// Model transformations, for test tooling.
    Lab {
        #[arg(value_enum)]
        op: LabOp,
        /// Input model (not needed for `random`).
        input: Option<PathBuf>,
        /// Loosening parameter, unraveling depth, cover layers or random domain size.
        #[arg(long, short = 'k', default_value_t = 2)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LabOp {
    Unravel,
    Loosen,
    Duplicate,
    Cover,
    Girth,
    Random,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = Result<(Value, bool), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_kb(path: &Path) -> Result<Kb, Failure> {
    Ok(parse_kb(&read(path)?).map_err(Error::from)?)
}

fn load_model(path: &Path) -> Result<Interp, Failure> {
    let m = Interp::from_json(&read(path)?)?;
    m.validate()?;
    Ok(m)
}

fn model_json(m: &Interp) -> Value {
    serde_json::from_str(&m.to_json()).expect("model JSON round-trips")
}

fn write_model(opts: &Opts, m: &Interp) -> Result<(), Failure> {
    if let Some(path) = &opts.model {
        fs::write(path, m.to_json() + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        info!("model written to {}", path.display());
    }
    Ok(())
}

fn config(opts: &Opts) -> Config {
    let mut cfg = Config::default();
    if let Some(v) = opts.max_venn {
        cfg.max_venn = v as usize;
    }
    if let Some(v) = opts.max_types {
        cfg.max_types = v as usize;
    }
    cfg.jobs = opts.jobs as usize;
    match opts.timeout {
        Some(s) => cfg.with_timeout(s),
        None => cfg,
    }
}

/// The concept decided by `sat`: the goal, the ECBox as global constraints and
/// every CI `C ⊑ D` as `sat(card(C and not D) = 0)`. Successor constraints are
/// translated into global ones first.
fn sat_concept(kb: &Kb) -> Result<Concept, Failure> {
    if !kb.abox.is_empty() || !kb.erc.is_empty() {
        return Err(Error::Invalid("sat takes a goal with an optional TBox and ECBox; use `consistent` for ABoxes".into()).into());
    }
    let goal = kb.goal.clone().ok_or_else(|| Error::Invalid("sat needs a goal concept".into()))?;
    let mut parts = vec![goal];
    for ci in &kb.tbox {
        let bad = SetTerm::Var(SetVar::Concept(Concept::and([ci.sub.clone(), Concept::not(ci.sup.clone())])));
        parts.push(Concept::constr(Constraint::Atom(Atom::CardEq(PaExpr::Card(bad), PaExpr::Const(0)))));
    }
    if let Some(ec) = &kb.ec {
        parts.push(ecbox_to_concept(ec));
    }
    let c = Concept::and(parts);
    let roles: Vec<String> = c_roles(&c);
    Ok(scc_to_pp(&c, &roles))
}

fn c_roles(c: &Concept) -> Vec<String> {
    let mut sig = Signature::default();
    c.role_names(&mut sig.roles);
    sig.roles.into_iter().collect()
}

fn cmd_sat(path: &Path, opts: &Opts, cfg: &Config) -> Run {
    let kb = load_kb(path)?;
    let c = sat_concept(&kb)?;
    info!("deciding satisfiability of {c}");
    let mut out = json!({ "command": "sat", "concept": c.to_string() });
    if opts.dump_delta || opts.trace {
        let red = Reduction::new(&c, cfg)?;
        if opts.dump_delta {
            out["delta"] = json!(red.delta()?.render());
        }
        if opts.trace {
            out["trace"] = json!({
                "closure": red.closure.len(),
                "types": red.types.len(),
                "types_containing_goal": red.types_containing().len(),
            });
        }
    }
    let res = sat(&c, cfg)?;
    let positive = res.is_sat();
    out["verdict"] = json!(if positive { "SAT" } else { "UNSAT" });
    if let SatOutcome::Sat { model, .. } = &res {
        out["model_size"] = json!(model.size());
        write_model(opts, model)?;
    }
    Ok((out, positive))
}

fn cmd_consistent(path: &Path, opts: &Opts, cfg: &Config) -> Run {
    let kb = load_kb(path)?;
    let res = consistent(&kb, cfg)?;
    let mut out = json!({ "command": "consistent" });
    match &res {
        Consistency::Consistent { model, state, problem } => {
            out["verdict"] = json!("CONSISTENT");
            out["model_size"] = json!(model.size());
            if opts.trace {
                out["trace"] = json!({
                    "types": problem.types.len(),
                    "alive": state.alive.len(),
                    "chosen": state.chosen,
                    "events": state.trace,
                });
            }
            write_model(opts, model)?;
        }
        Consistency::Inconsistent => out["verdict"] = json!("INCONSISTENT"),
    }
    Ok((out, res.is_consistent()))
}

fn cmd_entails(kb: &Path, query: &Path, opts: &Opts, cfg: &Config) -> Run {
    let kb = load_kb(kb)?;
    let q = parse_query(&read(query)?).map_err(Error::from)?;
    let (res, stats) = entails(&kb, &q, cfg)?;
    let mut out = json!({ "command": "entails", "query": q.to_string() });
    if opts.trace {
        out["trace"] = json!(stats);
    }
    match &res {
        Entailment::Entailed => out["verdict"] = json!("ENTAILED"),
        Entailment::NotEntailed { model, spoiler } => {
            out["verdict"] = json!("NOT_ENTAILED");
            out["spoiler"] = json!(spoiler.clauses.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            out["model_size"] = json!(model.size());
            write_model(opts, model)?;
        }
    }
    Ok((out, res.is_entailed()))
}

fn cmd_check(model: &Path, kb: &Path) -> Run {
    let m = load_model(model)?;
    let kb = load_kb(kb)?;
    let rep = satisfies(&m, &kb)?;
    let out = json!({
        "command": "check",
        "verdict": if rep.is_model() { "MODEL" } else { "NOT_MODEL" },
        "violations": rep.violations,
    });
    Ok((out, rep.is_model()))
}

fn cmd_oracle(path: &Path, opts: &Opts, cfg: &Config) -> Run {
    let kb = load_kb(path)?;
    let n = opts.oracle_size as usize;
    let mut first: Option<Interp> = None;
    let stats = enumerate_models(&kb, &EnumOptions::up_to(n), cfg, |m| {
        if first.is_none() {
            first = Some(m.clone());
        }
        std::ops::ControlFlow::Continue(())
    })?;
    if let Some(m) = &first {
        write_model(opts, m)?;
    }
    let out = json!({ "command": "oracle", "max_size": n, "models": stats.yielded });
    Ok((out, stats.yielded > 0))
}

fn random_interp(size: usize, seed: u64) -> Interp {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut sig = Signature::default();
    sig.concepts.extend(["A", "B"].map(String::from));
    sig.roles.extend(["r", "s"].map(String::from));
    let mut m = Interp::new(size.max(1), &sig);
    for d in 0..m.size() {
        for a in ["A", "B"] {
            if r.gen_bool(0.5) {
                m.insert_concept(a, d);
            }
        }
        for e in 0..m.size() {
            for role in ["r", "s"] {
                if r.gen_bool(0.2) {
                    m.insert_edge(role, d, e);
                }
            }
        }
    }
    m.individuals.insert("a".into(), 0);
    m
}

fn cmd_lab(op: LabOp, input: Option<&Path>, k: usize, opts: &Opts, cfg: &Config) -> Run {
    let base = match (op, input) {
        (LabOp::Random, _) => random_interp(k, opts.seed),
        (_, Some(p)) => load_model(p)?,
        (_, None) => return Err(Error::Invalid("this operation needs an input model".into()).into()),
    };
    let mut out = json!({ "command": "lab", "op": format!("{op:?}").to_lowercase() });
    let result = match op {
        LabOp::Random => base,
        LabOp::Unravel => unravel(&base, k, cfg.max_elements)?.0,
        LabOp::Loosen => k_loosening(&base, k, cfg.max_elements)?.0,
        LabOp::Cover => cyclic_cover(&base, k)?,
        LabOp::Duplicate => {
            let mut r = ChaCha8Rng::seed_from_u64(opts.seed);
            let named: Vec<usize> = base.individuals.values().copied().collect();
            let s: Vec<(usize, usize)> =
                (0..base.size()).filter(|d| !named.contains(d)).map(|d| (d, r.gen_range(0..=k))).collect();
            debug!("duplication plan {s:?}");
            s_duplicate(&base, &s)?
        }
        LabOp::Girth => {
            out["girth"] = match girth(&base) {
                Some(g) => json!(g),
                None => json!("infinity"),
            };
            return Ok((out, true));
        }
    };
    out["girth"] = match girth(&result) {
        Some(g) => json!(g),
        None => json!("infinity"),
    };
    out["model"] = model_json(&result);
    write_model(opts, &result)?;
    Ok((out, true))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = config(&cli.opts);
    debug!("{cli:?}");
    let opts = &cli.opts;
    let res = match &cli.cmd {
        Cmd::Sat { kb } => cmd_sat(kb, opts, &cfg),
        Cmd::Consistent { kb } => cmd_consistent(kb, opts, &cfg),
        Cmd::Entails { kb, query } => cmd_entails(kb, query, opts, &cfg),
        Cmd::Check { model, kb } => cmd_check(model, kb),
        Cmd::Oracle { kb } => cmd_oracle(kb, opts, &cfg),
        Cmd::Lab { op, input, k } => cmd_lab(*op, input.as_deref(), *k, opts, &cfg),
    };
    match res {
        Ok((out, positive)) => {
            println!("{}", serde_json::to_string_pretty(&out).expect("JSON output"));
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Io(m) => (3, m),
                Failure::Lib(e) if e.is_resource() => (2, e.to_string()),
                Failure::Lib(e @ Error::Internal(_)) => (4, e.to_string()),
                Failure::Lib(e) => (3, e.to_string()),
            };
            eprintln!("carddl: {msg}");
            println!("{}", serde_json::to_string_pretty(&json!({ "error": msg, "exit": code })).expect("JSON output"));
            ExitCode::from(code)
        }
    }
}
