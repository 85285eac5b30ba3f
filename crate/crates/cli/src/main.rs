use std::error::Error;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use pgblock::blocking::BlockingSet;
use pgblock::constructions::{
    bose_burton, canonical_params, construction1, random_params, remark_q2_construction,
    BoseBurtonVariant,
};
use pgblock::counting::{
    gaussian, heger_nagy_upper_bound, main_theorem_bound, metsch_dual_lower_bound,
    metsch_lower_bound, theorem_case, theta_checked, trivial_bound, BoundReport,
};
use pgblock::geometry::{GeometryContext, GeometryError};
use pgblock::json::{
    blocking_set_to_value, context_from, element_value, parse_blocking_set, subspace_rows,
    ConstructionParamsJson,
};
use pgblock::search::{
    classify_minimum, min_blocking_search, SearchConfig, SearchError, SearchMode, Universe,
};

/// Blocking sets of points and hyperplanes in PG(n, q).
#[derive(Parser)]
#[command(name = "pgblock", version)]
struct Cli {
    /// Subspace enumeration budget (number of subspaces).
    #[arg(long, global = true, env = "PGBLOCK_BUDGET")]
    enum_budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a blocking-set document blocks every k-space.
    Verify(InputArgs),
    /// Check that no element of a blocking set can be dropped.
    Minimal(InputArgs),
    /// Swap points and hyperplanes via the standard polarity.
    Dual(InputArgs),
    /// Build a blocking set from one of the known families.
    Construct(ConstructArgs),
    /// Evaluate the bound formulas.
    Bounds(BoundsArgs),
    /// Find all minimum blocking sets up to a size cap.
    Search(SearchArgs),
    /// Search at the main size bound and check the minima against the predicted families.
    Classify(ClassifyArgs),
    /// Run the structural checks on a minimum-size mixed blocking set.
    LemmaCheck(InputArgs),
}

#[derive(clap::Args)]
struct InputArgs {
    /// Blocking-set JSON file; stdin when omitted.
    #[arg(long, short)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    C1,
    BoseBurtonPoints,
    BoseBurtonHyperplanes,
    Remark,
}

#[derive(clap::Args)]
struct ConstructArgs {
    #[arg(long, value_enum, default_value = "c1")]
    family: Family,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Number of pencil members carrying points.
    #[arg(long)]
    t: Option<usize>,
    /// Explicit construction parameters as JSON.
    #[arg(long, conflicts_with_all = ["random", "t"])]
    params: Option<PathBuf>,
    /// Draw the parameters at random.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the parameters alongside the set.
    #[arg(long)]
    with_params: bool,
}

#[derive(clap::Args)]
struct BoundsArgs {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    k: i64,
    #[arg(long)]
    q: u64,
    /// Size of a point set, for the counts of unblocked subspaces.
    #[arg(long, requires_all = ["d", "s"])]
    b_size: Option<u64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    s: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    BranchAndBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum UniverseArg {
    Both,
    Points,
    Hyperplanes,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value = "branch-and-bound")]
    mode: Mode,
    #[arg(long, env = "PGBLOCK_BUDGET_SECONDS")]
    budget_seconds: Option<f64>,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    cap: usize,
    #[arg(long, value_enum, default_value = "both")]
    universe: UniverseArg,
}

#[derive(clap::Args)]
struct ClassifyArgs {
    #[command(flatten)]
    run: RunArgs,
}

enum Failure {
    Invalid(String),
    Budget(String),
}

impl<E: Error + 'static> From<E> for Failure {
    fn from(e: E) -> Self {
        let mut cur: Option<&(dyn Error + 'static)> = Some(&e);
        while let Some(err) = cur {
            let budget = matches!(err.downcast_ref(), Some(SearchError::BudgetExceeded { .. }))
                || matches!(
                    err.downcast_ref(),
                    Some(GeometryError::BudgetExceeded { .. })
                );
            if budget {
                return Failure::Budget(e.to_string());
            }
            cur = err.source();
        }
        Failure::Invalid(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

/// JSON to print and whether the checked property holds.
type Outcome = Result<(Value, bool), Failure>;

fn read_input(args: &InputArgs) -> Result<String, Failure> {
    let mut text = String::new();
    match &args.input {
        Some(path) => {
            text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("{}: {e}", path.display())))?
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| invalid(e.to_string()))?;
        }
    }
    Ok(text)
}

fn load_set(args: &InputArgs, budget: Option<u64>) -> Result<BlockingSet, Failure> {
    let b = parse_blocking_set(&read_input(args)?)?;
    match budget {
        Some(bud) => Ok(BlockingSet::new(
            b.ctx().clone().with_budget(bud),
            b.k(),
            b.points().iter().cloned(),
            b.hyperplanes().iter().cloned(),
        )?),
        None => Ok(b),
    }
}

fn context(q: u32, n: usize, budget: Option<u64>) -> Result<GeometryContext, Failure> {
    let ctx = context_from(q, n, None)?;
    Ok(match budget {
        Some(b) => ctx.with_budget(b),
        None => ctx,
    })
}

fn verify(b: &BlockingSet) -> Outcome {
    let chk = b.is_blocking()?;
    let mut out = json!({ "blocking": chk.blocking });
    if let Some(w) = &chk.witness {
        out["witness"] = json!(subspace_rows(w));
    }
    Ok((out, chk.blocking))
}

fn minimal(b: &BlockingSet) -> Outcome {
    if !b.is_blocking()?.blocking {
        return Ok((json!({ "minimal": false, "blocking": false }), false));
    }
    let chk = b.is_minimal()?;
    let mut out = json!({ "minimal": chk.minimal });
    if let Some(e) = &chk.removable {
        out["removable"] = element_value(b.ctx(), e);
    }
    Ok((out, chk.minimal))
}

fn construct(a: &ConstructArgs, budget: Option<u64>) -> Outcome {
    let need =
        |v: Option<usize>, name: &str| v.ok_or_else(|| invalid(format!("--{name} is required")));
    let (b, params) = match a.family {
        Family::C1 => {
            let (ctx, params) = if let Some(path) = &a.params {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                let doc: ConstructionParamsJson =
                    serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
                doc.to_params()?
            } else {
                let q = a.q.ok_or_else(|| invalid("--q is required"))?;
                let n = need(a.n, "n")?;
                let ctx = context(q, n, budget)?;
                let p = if a.random {
                    random_params(&ctx, &mut ChaCha8Rng::seed_from_u64(a.seed))?
                } else {
                    canonical_params(&ctx, a.t.unwrap_or(1))?
                };
                (ctx, p)
            };
            if let Some(k) = a.k {
                if k as isize != params.k() {
                    return Err(invalid(format!("--k {k} disagrees with n = {}", ctx.n())));
                }
            }
            let b = construction1(&ctx, &params)?;
            (
                b,
                Some(serde_json::to_value(ConstructionParamsJson::of(&ctx, &params)).unwrap()),
            )
        }
        Family::BoseBurtonPoints | Family::BoseBurtonHyperplanes => {
            let q = a.q.ok_or_else(|| invalid("--q is required"))?;
            let (n, k) = (need(a.n, "n")?, need(a.k, "k")?);
            if k >= n {
                return Err(invalid(format!("need k < n (n = {n}, k = {k})")));
            }
            let ctx = context(q, n, budget)?;
            let (variant, anchor) = match a.family {
                Family::BoseBurtonPoints => (
                    BoseBurtonVariant::Points,
                    ctx.coordinate_subspace(0..=n - k),
                ),
                _ => (
                    BoseBurtonVariant::Hyperplanes,
                    ctx.coordinate_subspace(0..n - k - 1),
                ),
            };
            (bose_burton(&ctx, k, variant, &anchor)?, None)
        }
        Family::Remark => {
            let q = a.q.unwrap_or(2);
            let ctx = context(q, need(a.n, "n")?, budget)?;
            (remark_q2_construction(&ctx)?, None)
        }
    };
    let mut out = blocking_set_to_value(&b);
    if a.with_params {
        out = json!({ "set": out, "params": params });
    }
    Ok((out, true))
}

fn bounds(a: &BoundsArgs) -> Outcome {
    let (n, k, q) = (a.n, a.k, a.q);
    let case = theorem_case(n, k, q)?;
    let main = main_theorem_bound(n, k, q)?;
    let count = gaussian(n + 1, k + 1, q)?;
    let mut reports = vec![
        BoundReport::new(
            "main_theorem_bound",
            &[("n", n), ("k", k), ("q", q as i64)],
            main.render(),
        ),
        BoundReport::new(
            "trivial_bound",
            &[("n", n), ("k", k), ("q", q as i64)],
            trivial_bound(n, k, q).to_string(),
        ),
        BoundReport::new(
            "theta",
            &[("m", n - k), ("q", q as i64)],
            theta_checked(n - k, q)?.to_string(),
        ),
        BoundReport::new(
            "gaussian",
            &[("a", n + 1), ("b", k + 1), ("q", q as i64)],
            count.to_string(),
        ),
    ];
    if k + 1 != n - k {
        reports.insert(
            3,
            BoundReport::new(
                "theta",
                &[("m", k + 1), ("q", q as i64)],
                theta_checked(k + 1, q)?.to_string(),
            ),
        );
    }
    if k + 1 < n + 1 {
        let hn = heger_nagy_upper_bound(n + 1, k + 1, q)?;
        let mut r = BoundReport::new(
            "heger_nagy_upper_bound",
            &[("n", n + 1), ("k", k + 1), ("q", q as i64)],
            {
                let v = hn.rational();
                format!("{}/{}", v.numer(), v.denom())
            },
        );
        r.value_f64_upper = Some(hn.to_f64_upper());
        reports.push(r);
    }
    if let (Some(b), Some(d), Some(s)) = (a.b_size, a.d, a.s) {
        let params = [
            ("n", n),
            ("q", q as i64),
            ("d", d),
            ("s", s),
            ("b_size", b as i64),
        ];
        reports.push(BoundReport::new(
            "metsch_lower_bound",
            &params,
            metsch_lower_bound(n, q, d, s, b)?.to_string(),
        ));
        reports.push(BoundReport::new(
            "metsch_dual_lower_bound",
            &params,
            metsch_dual_lower_bound(n, q, d, s, b)?.to_string(),
        ));
    }
    Ok((
        json!({
            "n": n, "k": k, "q": q,
            "case": case,
            "main_theorem_bound": main.render(),
            "reports": reports,
        }),
        true,
    ))
}

fn search_config(r: &RunArgs, cap: usize) -> Result<SearchConfig, Failure> {
    let budget = match r.budget_seconds {
        Some(s) if !(s.is_finite() && s >= 0.0) => {
            return Err(invalid("--budget-seconds must be non-negative"))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    Ok(SearchConfig::new(cap)
        .workers(r.workers)
        .budget(budget)
        .mode(match r.mode {
            Mode::Exhaustive => SearchMode::Exhaustive,
            Mode::BranchAndBound => SearchMode::BranchAndBound,
        }))
}

fn search(a: &SearchArgs, budget: Option<u64>) -> Outcome {
    let ctx = context(a.run.q, a.run.n, budget)?;
    let cfg = search_config(&a.run, a.cap)?.universe(match a.universe {
        UniverseArg::Both => Universe::Both,
        UniverseArg::Points => Universe::Points,
        UniverseArg::Hyperplanes => Universe::Hyperplanes,
    });
    let report = min_blocking_search(&ctx, a.run.k, &cfg)?;
    Ok((serde_json::to_value(report).unwrap(), true))
}

fn classify(a: &ClassifyArgs, budget: Option<u64>) -> Outcome {
    let ctx = context(a.run.q, a.run.n, budget)?;
    let verdict = classify_minimum(&ctx, a.run.k, &search_config(&a.run, 0)?)?;
    let ok = verdict.all_minima_match_theorem;
    Ok((serde_json::to_value(verdict).unwrap(), ok))
}

fn lemma_check(b: &BlockingSet) -> Outcome {
    let report = b.check_lemmas()?;
    let ok = report.passed;
    Ok((serde_json::to_value(report).unwrap(), ok))
}

fn run(cli: &Cli) -> Outcome {
    let budget = cli.enum_budget;
    match &cli.command {
        Command::Verify(a) => verify(&load_set(a, budget)?),
        Command::Minimal(a) => minimal(&load_set(a, budget)?),
        Command::Dual(a) => Ok((
            blocking_set_to_value(&load_set(a, budget)?.dual_set()),
            true,
        )),
        Command::Construct(a) => construct(a, budget),
        Command::Bounds(a) => bounds(a),
        Command::Search(a) => search(a, budget),
        Command::Classify(a) => classify(a, budget),
        Command::LemmaCheck(a) => lemma_check(&load_set(a, budget)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, holds)) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{value}");
            if holds {
                ExitCode::SUCCESS
            } else {
                eprintln!("property does not hold");
                ExitCode::from(1)
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
