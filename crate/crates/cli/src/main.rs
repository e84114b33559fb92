use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brewswarm::chemistry::{BrewModel, SrmMethod, TargetProfile};
use brewswarm::harness::{
    analyze, default_inventory, default_targets, load_inventory, load_plan, load_recipe,
    load_targets, run_campaign, target_slug, CampaignOptions, ExperimentPlan,
};
use brewswarm::optimizer::Algorithm;
use brewswarm::Error;
use clap::{Args, Parser, Subcommand};

/// Inverse recipe design for brewing.
#[derive(Parser)]
#[command(name = "brewswarm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute gravity, strength, bitterness and colour of a recipe file.
    Evaluate(EvaluateArgs),
    /// Run one optimisation against one target.
    Optimize(OptimizeArgs),
    /// Run every algorithm on every target of a plan.
    Campaign(CampaignArgs),
    /// Summaries, rank-sum tests, distances and clusters of a result directory.
    Analyze(AnalyzeArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct Catalogs {
    /// Inventory CSV; the bundled inventory when omitted.
    #[arg(long)]
    inventory: Option<PathBuf>,
    /// Targets CSV; the bundled targets when omitted.
    #[arg(long)]
    targets: Option<PathBuf>,
}

impl Catalogs {
    fn inventory(&self) -> Result<brewswarm::chemistry::Inventory, Error> {
        match &self.inventory {
            Some(p) => load_inventory(p),
            None => Ok(default_inventory()),
        }
    }

    fn target(&self, name: &str) -> Result<TargetProfile, Error> {
        let all = match &self.targets {
            Some(p) => load_targets(p)?,
            None => default_targets(),
        };
        all.iter()
            .find(|t| t.name == name || target_slug(&t.name) == target_slug(name))
            .cloned()
            .ok_or_else(|| {
                let names: Vec<&str> = all.iter().map(|t| t.name.as_str()).collect();
                Error::Validation(format!(
                    "unknown target '{name}' (have: {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Args)]
struct EvaluateArgs {
    /// CSV with `name,quantity` rows; unlisted ingredients are zero.
    recipe: PathBuf,
    #[command(flatten)]
    catalogs: Catalogs,
    /// Also report the error against this target.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, value_parser = parse_srm_method, default_value = "aggregate-morey")]
    srm_method: SrmMethod,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long, default_value = "dfo")]
    algorithm: Algorithm,
    /// Target name or slug.
    #[arg(long, default_value = "Guinness Extra Stout")]
    target: String,
    #[command(flatten)]
    catalogs: Catalogs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    population: usize,
    #[arg(long, default_value_t = 150_000)]
    max_fes: u64,
    /// Override the target's termination error (`inf` stops after initialisation).
    #[arg(long)]
    target_error: Option<f64>,
    /// Write the run in the campaign layout here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CampaignArgs {
    /// TOML plan; the full three-product protocol when omitted.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Master seed, overriding the plan.
    #[arg(long)]
    seed: Option<u64>,
    /// Restrict to these algorithms (repeatable).
    #[arg(long)]
    algorithm: Vec<Algorithm>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    max_fes: Option<u64>,
    #[arg(long)]
    out_dir: PathBuf,
    /// Concurrent trials; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Directory written by `campaign`, `optimize --out-dir` or the service.
    results: PathBuf,
    /// Defaults to `<results>/analysis`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Restrict the printed tables to this algorithm.
    #[arg(long)]
    algorithm: Option<Algorithm>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Where jobs are written.
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Accepted for symmetry with the other commands; jobs carry their own seeds.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_srm_method(s: &str) -> Result<SrmMethod, String> {
    match s {
        "aggregate-morey" => Ok(SrmMethod::AggregateMorey),
        "per-grain" => Ok(SrmMethod::PerGrain),
        _ => Err("expected aggregate-morey or per-grain".into()),
    }
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn print_json(value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let inventory = args.catalogs.inventory()?;
    let recipe = load_recipe(&args.recipe, &inventory)?;
    let target = args
        .target
        .as_deref()
        .map(|t| args.catalogs.target(t))
        .transpose()?;
    let model = BrewModel::new(inventory, Default::default()).with_srm_method(args.srm_method);
    let m = model.metrics(&recipe.quantities).map_err(Error::from)?;
    let error = target
        .as_ref()
        .map(|t| brewswarm::chemistry::fitness_error(&m, t));
    if args.json {
        return print_json(&serde_json::json!({
            "metrics": m,
            "colour_name": m.colour_name(),
            "error": error,
        }));
    }
    println!("OG      {:.4}", m.og);
    println!("FG      {:.4}", m.fg);
    println!("ABV     {:.2} %", m.abv);
    println!("IBU     {:.2}", m.ibu);
    match m.ibu_gu {
        Some(r) => println!("IBU/GU  {r:.3}"),
        None => println!("IBU/GU  --"),
    }
    println!("MCU     {:.2}", m.mcu);
    println!("SRM     {:.2} ({})", m.srm, m.colour_name());
    println!("EBC     {:.2}", m.ebc);
    if let (Some(t), Some(e)) = (&target, error) {
        println!("error   {e:.6} against {}", t.name);
    }
    Ok(())
}

fn optimize(args: OptimizeArgs) -> Result<(), Failure> {
    let mut target = args.catalogs.target(&args.target)?;
    if let Some(e) = args.target_error {
        target.target_error = e;
    }
    let plan = ExperimentPlan {
        master_seed: args.seed,
        trials: 1,
        population: args.population,
        max_fes: args.max_fes,
        algorithms: vec![args.algorithm],
        targets: vec![target],
        inventory: args.catalogs.inventory()?,
        ..ExperimentPlan::default()
    };
    let results = run_campaign(&plan, args.out_dir.as_deref(), &CampaignOptions::default())?;
    let trial = &results.cells[0].trials[0];
    let model = BrewModel::new(plan.inventory.clone(), plan.batch);
    let metrics = model
        .metrics(&trial.record.best_recipe)
        .map_err(Error::from)?;
    if args.json {
        return print_json(&serde_json::json!({ "trial": trial, "metrics": metrics }));
    }
    let r = &trial.record;
    println!(
        "{} on {}: error {:.6} after {} evaluations ({})",
        args.algorithm,
        plan.targets[0].name,
        r.best_error,
        r.fes_used,
        if r.success {
            "reached target"
        } else {
            "budget spent"
        }
    );
    for (item, q) in plan.inventory.items.iter().zip(&r.best_recipe) {
        println!("  {:<24} {:>10.4} {}", item.name(), q, item.kind().unit());
    }
    println!(
        "ABV {:.3} %  IBU {:.3}  SRM {:.3} ({})",
        metrics.abv,
        metrics.ibu,
        metrics.srm,
        metrics.colour_name()
    );
    Ok(())
}

fn campaign(args: CampaignArgs) -> Result<(), Failure> {
    let mut plan = match &args.plan {
        Some(p) => load_plan(p)?,
        None => ExperimentPlan::default(),
    };
    if let Some(s) = args.seed {
        plan.master_seed = s;
    }
    if !args.algorithm.is_empty() {
        plan.algorithms = args.algorithm.clone();
    }
    if let Some(t) = args.trials {
        plan.trials = t;
    }
    if let Some(f) = args.max_fes {
        plan.max_fes = f;
    }
    let options = CampaignOptions {
        workers: args.workers,
    };
    let results = run_campaign(&plan, Some(&args.out_dir), &options)?;
    for cell in &results.cells {
        let s = &cell.summary;
        let eff = s
            .efficiency
            .as_ref()
            .map_or_else(|| "--".to_string(), |e| format!("{:.2}", e.mean));
        println!(
            "{:<4} {:<24} reliability {:>3}/{:<3} mean FEs {:>10}  mean error {:.6}",
            cell.algorithm.to_string(),
            cell.target.name,
            s.successes,
            s.trials,
            eff,
            s.error.mean
        );
    }
    println!("results in {}", args.out_dir.display());
    Ok(())
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let analysis = analyze(&args.results, args.out_dir.as_deref())?;
    for cell in analysis
        .cells
        .iter()
        .filter(|c| args.algorithm.map_or(true, |a| a == c.algorithm))
    {
        let k = cell
            .clusters
            .as_ref()
            .map_or_else(|| "--".to_string(), |c| c.k.to_string());
        let d = cell
            .distances
            .as_ref()
            .map_or_else(|| "--".to_string(), |d| format!("{:.4}", d.mean));
        println!(
            "{:<4} {:<24} solutions {:>3}  mean distance {:>8}  clusters {}",
            cell.algorithm.to_string(),
            cell.target,
            cell.solution_trials.len(),
            d,
            k
        );
    }
    for row in &analysis.comparisons {
        println!(
            "{:<24} {:<11} {} -- {}  {}",
            row.target,
            format!("{:?}", row.measure).to_lowercase(),
            row.left,
            row.right,
            row.marker
        );
    }
    let out = args
        .out_dir
        .unwrap_or_else(|| Path::new(&args.results).join("analysis"));
    println!("analysis in {}", out.display());
    Ok(())
}

fn serve(args: ServeArgs) -> Result<(), Failure> {
    let config = brewswarm_service::ServiceConfig {
        results_dir: args.out_dir,
        workers: args.workers,
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Runtime(e.to_string()))?;
    println!("listening on http://{}", args.addr);
    runtime
        .block_on(brewswarm_service::serve(args.addr, config))
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Evaluate(a) => evaluate(a),
        Command::Optimize(a) => optimize(a),
        Command::Campaign(a) => campaign(a),
        Command::Analyze(a) => run_analyze(a),
        Command::Serve(a) => serve(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
