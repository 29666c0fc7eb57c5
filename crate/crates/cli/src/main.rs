//! `rellat`: evaluate terms, check laws, find separating models, close
//! generator sets and rewrite queries.
//!
//! Exit codes: 0 when everything checked holds, 1 when a counterexample or
//! constraint violation was found, 2 for usage and input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rellat::check::{self, VerdictSummary, DEFAULT_SEED, DEFAULT_TRIALS};
use rellat::closure::{self, DEFAULT_CAP};
use rellat::literal;
use rellat::models::{self, AxiomSet};
use rellat::rewriter::{self, ConstraintSet, RewriteError};
use rellat::{find_law, law_catalogue, parse_term, Assignment, Law, Status, Universe, Verdict};

#[derive(Parser)]
#[command(name = "rellat", version, about = "Relational lattice workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a term over concrete relations
    Eval {
        term: String,
        /// JSON object mapping names to relation literals
        #[arg(long)]
        env: Option<PathBuf>,
        #[arg(long)]
        universe: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Inspect and check catalogue laws
    Law {
        #[command(subcommand)]
        action: LawAction,
    },
    /// Search small lattices for separating models
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Close a generator set under ^ and v
    Closure {
        /// JSON list of relation literals
        generators: PathBuf,
        #[arg(long)]
        universe: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Print the Hasse diagram as DOT
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Eliminate redundant joins under declared constraints
    Rewrite {
        term: String,
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long)]
        env: PathBuf,
        #[arg(long)]
        universe: Option<PathBuf>,
        /// Also require projection targets to be empty relations
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CheckOpts {
    #[arg(long)]
    universe: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Check on every universe with at most 3 attributes of at most 3 values
    #[arg(long, conflicts_with = "universe")]
    sweep: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum LawAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Check {
        id: String,
        #[command(flatten)]
        opts: CheckOpts,
    },
    CheckAll {
        #[command(flatten)]
        opts: CheckOpts,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    Find {
        /// Comma-separated law ids; `sla` names the lattice axioms
        #[arg(long, value_delimiter = ',', default_value = "sla")]
        assume: Vec<String>,
        #[arg(long)]
        refute: String,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
}

// Writes that ignore a closed stdout (for example `rellat law list | head`).
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

/// An input or usage problem, reported with exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<ExitCode, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval { term, env, universe, json } => cmd_eval(&term, env.as_deref(), universe.as_deref(), json),
        Command::Law { action } => cmd_law(action),
        Command::Model { action } => cmd_model(action),
        Command::Closure { generators, universe, cap, dot, json } => {
            cmd_closure(&generators, universe.as_deref(), cap, dot, json)
        }
        Command::Rewrite { term, constraints, env, universe, strict, trials, seed, json } => {
            cmd_rewrite(&term, &constraints, &env, universe.as_deref(), strict, trials, seed, json)
        }
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_env(path: Option<&Path>) -> Result<Assignment, InputError> {
    match path {
        Some(p) => Ok(literal::read_environment(p).map_err(|e| format!("{}: {e}", p.display()))?),
        None => Ok(Assignment::new()),
    }
}

/// The universe from `--universe`, or one spanning the given relations.
fn resolve_universe<'a>(
    path: Option<&Path>,
    relations: impl IntoIterator<Item = &'a rellat::Relation>,
) -> Result<Universe, InputError> {
    let relations: Vec<&rellat::Relation> = relations.into_iter().collect();
    let u = match path {
        Some(p) => literal::read_universe(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None if relations.is_empty() => Universe::degenerate(),
        None => {
            let env: Assignment = relations.iter().enumerate().map(|(i, r)| (i.to_string(), (*r).clone())).collect();
            rewriter::universe_of(&env)?
        }
    };
    for r in relations {
        u.validate(r)?;
    }
    Ok(u)
}

fn cmd_eval(term: &str, env: Option<&Path>, universe: Option<&Path>, json: bool) -> Outcome {
    let t = parse_term(term)?;
    let env = read_env(env)?;
    let u = resolve_universe(universe, env.values())?;
    let r = rellat::eval(&u, &t, &env)?;
    if json {
        outln!("{}", literal::relation_to_json(&r));
    } else {
        outln!("{r}");
    }
    Ok(ExitCode::SUCCESS)
}

fn lookup(id: &str) -> Result<Law, InputError> {
    find_law(id).ok_or_else(|| InputError(format!("unknown law `{id}`; see `rellat law list`")))
}

fn universes(opts: &CheckOpts) -> Result<Vec<Universe>, InputError> {
    if opts.sweep {
        Ok(Universe::sweep(3, 3))
    } else if let Some(p) = &opts.universe {
        Ok(vec![literal::read_universe(p).map_err(|e| format!("{}: {e}", p.display()))?])
    } else {
        Ok(vec![Universe::xy_2x2()])
    }
}

/// Checks one law; returns the verdict on the first universe that refutes
/// it, or on the last one.
fn check_one(law: &Law, opts: &CheckOpts) -> Result<(Universe, Verdict), InputError> {
    let us = universes(opts)?;
    let results = check::check_law_sweep(law, &us, opts.trials, opts.seed)?;
    Ok(results.into_iter().last().expect("at least one universe"))
}

fn verdict_text(law: &Law, universe: &Universe, verdict: &Verdict, universes: usize) -> String {
    let scope = if universes > 1 { format!(" on each of {universes} universes") } else { String::new() };
    match (law.status, verdict) {
        (Status::Open, Verdict::Holds { trials, .. }) => {
            format!("OPEN: no counterexample found in {trials} trials{scope}")
        }
        (Status::Open, Verdict::Counterexample { .. }) => "OPEN: counterexample found".into(),
        (_, Verdict::Holds { trials, vacuous }) => {
            let vac = if *vacuous > 0 { format!(" ({vacuous} with a false premise)") } else { String::new() };
            format!("HOLDS in {trials} trials{scope}{vac}")
        }
        (_, Verdict::Counterexample { trial, .. }) => {
            format!("COUNTEREXAMPLE at trial {trial} over {}", literal::universe_to_json(universe))
        }
    }
}

fn print_assignment(verdict: &Verdict) {
    if let Verdict::Counterexample { assignment, .. } = verdict {
        for (name, r) in assignment {
            outln!("  {name} = {r}");
        }
    }
}

fn cmd_law(action: LawAction) -> Outcome {
    match action {
        LawAction::List { json } => {
            let laws = law_catalogue();
            if json {
                let rows: Vec<_> = laws
                    .iter()
                    .map(|l| json!({"id": l.id, "status": l.status, "statement": l.statement.to_string()}))
                    .collect();
                outln!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                for l in laws {
                    outln!("{:<28} {:<8} {}", l.id, status_name(l.status), l.statement);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        LawAction::Check { id, opts } => {
            let law = lookup(&id)?;
            let (u, verdict) = check_one(&law, &opts)?;
            if opts.json {
                outln!("{}", serde_json::to_string_pretty(&VerdictSummary::new(&law, &u, &verdict))?);
            } else {
                outln!("{}: {}", law.id, verdict_text(&law, &u, &verdict, universes(&opts)?.len()));
                print_assignment(&verdict);
                if let (Some(w), false) = (&law.witness, verdict.holds()) {
                    outln!("catalogue witness over {}:", literal::universe_to_json(&w.universe));
                    for (name, r) in &w.assignment {
                        outln!("  {name} = {r}");
                    }
                }
            }
            let refuted = !verdict.holds() && law.status != Status::Open;
            Ok(if refuted { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        LawAction::CheckAll { opts } => {
            // exit 1 only when a verdict contradicts the catalogue status
            let mut disagreements = 0;
            let mut summaries = Vec::new();
            let n = universes(&opts)?.len();
            for law in law_catalogue() {
                let (u, verdict) = check_one(&law, &opts)?;
                let agrees = verdict.agrees_with(law.status);
                if !agrees {
                    disagreements += 1;
                }
                if opts.json {
                    summaries.push(VerdictSummary::new(&law, &u, &verdict));
                } else {
                    let mark = if agrees { "ok" } else { "MISMATCH" };
                    outln!(
                        "{mark:<8} {:<28} {:<8} {}",
                        law.id,
                        status_name(law.status),
                        verdict_text(&law, &u, &verdict, n)
                    );
                }
            }
            if opts.json {
                outln!("{}", serde_json::to_string_pretty(&summaries)?);
            }
            Ok(if disagreements > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Valid => "valid",
        Status::Invalid => "invalid",
        Status::Open => "open",
    }
}

fn cmd_model(action: ModelAction) -> Outcome {
    let ModelAction::Find { assume, refute, max_size, dot, json } = action;
    let axioms = AxiomSet::from_ids(&assume)?;
    let target = lookup(&refute)?;
    match models::find_separating_model(&axioms, &target, max_size)? {
        Some(cex) => {
            if json {
                outln!("{}", serde_json::to_string_pretty(&cex.summary())?);
            } else if dot {
                out!("{}", cex.model.to_dot());
            } else {
                outln!("assume: {}", axioms.ids().join(", "));
                outln!("{cex}");
                outln!("replay: {}", if cex.replay() { "violated" } else { "NOT violated" });
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            if json {
                outln!("{}", json!({"law": target.id, "max_size": max_size, "model": null}));
            } else {
                outln!("no model of size <= {max_size} satisfies the assumptions and violates {}", target.id);
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_closure(generators: &Path, universe: Option<&Path>, cap: usize, dot: bool, json: bool) -> Outcome {
    let gens = literal::read_relations(generators).map_err(|e| format!("{}: {e}", generators.display()))?;
    let u = resolve_universe(universe, &gens)?;
    let c = closure::generate_closure(&gens, &u, cap)?;
    let report = closure::verify_lattice(&c);
    if dot {
        out!("{}", closure::export_dot(&c));
    } else if json {
        let elements: Vec<serde_json::Value> = c
            .elements
            .iter()
            .map(|r| serde_json::from_str(&literal::relation_to_json(r)).expect("literal is JSON"))
            .collect();
        let edges: Vec<[usize; 2]> = c.hasse_edges.iter().map(|&(a, b)| [a, b]).collect();
        let out = json!({
            "elements": elements,
            "hasse_edges": edges,
            "lattice": report.ok(),
            "failures": report.failures,
        });
        outln!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for (i, r) in c.elements.iter().enumerate() {
            outln!("{i:>4}  {r}");
        }
        outln!("{} elements, {} covers", c.len(), c.hasse_edges.len());
        outln!("lattice: {}", if report.ok() { "verified" } else { "FAILED" });
        for f in &report.failures {
            outln!("  {f}");
        }
        if let Some(p) = closure::find_pentagon(&c) {
            outln!("pentagon sublattice: {p:?}");
        }
    }
    Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[allow(clippy::too_many_arguments)]
fn cmd_rewrite(
    term: &str,
    constraints: &Path,
    env: &Path,
    universe: Option<&Path>,
    strict: bool,
    trials: usize,
    seed: u64,
    json: bool,
) -> Outcome {
    let t = parse_term(term)?;
    let text = std::fs::read_to_string(constraints).map_err(|e| format!("{}: {e}", constraints.display()))?;
    let mut c = ConstraintSet::from_json(&text).map_err(|e| format!("{}: {e}", constraints.display()))?;
    c.strict_projections |= strict;
    let env = read_env(Some(env))?;
    let u = resolve_universe(universe, env.values())?;
    let (result, steps) = match rewriter::eliminate_redundant_joins(&t, &c, &env, &u) {
        Ok(r) => r,
        Err(e @ (RewriteError::ConstraintViolated { .. } | RewriteError::Unverified { .. })) => {
            if json {
                outln!("{}", json!({"error": e.to_string()}));
            } else {
                outln!("REJECTED: {e}");
            }
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = rewriter::verify_rewrite(&t, &result, &c, &u, trials, seed)?;
    if json {
        let out = json!({
            "input": t.to_string(),
            "result": result.to_string(),
            "steps": steps.iter().map(|s| json!({
                "before": s.before.to_string(),
                "after": s.after.to_string(),
                "rule": s.rule,
            })).collect::<Vec<_>>(),
            "verified": verdict.holds(),
            "trials": trials,
        });
        outln!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for (i, s) in steps.iter().enumerate() {
            outln!("{}. {s}", i + 1);
        }
        outln!("result: {result}");
        match &verdict {
            Verdict::Holds { trials, .. } => outln!("verified: {trials} constraint-satisfying trials"),
            Verdict::Counterexample { trial, .. } => outln!("verification FAILED at trial {trial}"),
        }
        print_assignment(&verdict);
    }
    Ok(if verdict.holds() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
