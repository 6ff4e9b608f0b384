//! Command-line front end: validate, score, corpus, plan-check, and
//! gen-fixture subcommands over the engine library.
//!
//! Exit codes: 0 on pass/success, 1 on a structural or visual fail, 2 on
//! usage or configuration errors, so shell pipelines can tell an invalid
//! structure from an operator mistake.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use framecheck::corpus::machine_lines;
use framecheck::fidelity::{load_view_dir, visual_scores, FidelityParams, VisualScores};
use framecheck::fixtures::{
    apply_mutation, generate_gable, FixtureSpec, Mutation, MutationKind,
};
use framecheck::plan::{check_plan, PlanContext, PlanDocument, Severity};
use framecheck::scene::{parse_scene, serialize_scene, RoofType, Scene};
use framecheck::validate::{format_feedback, run_suite, SuiteReport, TestId};
use framecheck::{corpus, lod_map, SpanTable, ValidationParams};

/// Environment fallback for `--span-table`.
pub const SPAN_TABLE_ENV: &str = "FRAMECHECK_SPAN_TABLE";

#[derive(Parser)]
#[command(
    name = "framecheck",
    about = "Structural validation and scoring for timber-frame scene graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamArgs {
    /// JSON config overriding validation parameters (field names mirror
    /// the defaults; absent fields keep their default values).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a single parameter, e.g. `--set grid_cell=0.5` or
    /// `--set contact.ground_height=0.2`. Takes precedence over --config.
    #[arg(long = "set", value_name = "FIELD=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the ten-test suite on one scene file.
    Validate {
        scene: PathBuf,
        /// Span table JSON (falls back to FRAMECHECK_SPAN_TABLE).
        #[arg(long)]
        span_table: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
    },
    /// Score a generated scene against a reference.
    Score {
        /// Reference (ground-truth) scene file.
        #[arg(long)]
        reference: PathBuf,
        /// Generated scene file.
        #[arg(long)]
        generated: PathBuf,
        /// Directory of generated view PNGs (front.png, back.png, ...).
        #[arg(long, requires = "reference_views")]
        generated_views: Option<PathBuf>,
        /// Directory of reference view PNGs.
        #[arg(long, requires = "generated_views")]
        reference_views: Option<PathBuf>,
        /// Also run the validation suite on the generated scene and
        /// report the joint pass (needs a span table).
        #[arg(long)]
        span_table: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
    },
    /// Validate every scene in a directory and aggregate failure analytics.
    Corpus {
        directory: PathBuf,
        #[arg(long)]
        span_table: Option<PathBuf>,
        /// Worker count (1 forces sequential execution; default uses all
        /// cores). Output is identical at any setting.
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        /// Line-delimited machine output (one record per scene plus a
        /// summary record).
        #[arg(long)]
        json: bool,
    },
    /// Check a construction-plan document against the injected context.
    PlanCheck {
        plan: PathBuf,
        #[arg(long)]
        lot_width: f64,
        #[arg(long)]
        lot_depth: f64,
        #[arg(long)]
        stories: u32,
        /// Roof type: gable, hip, gambrel, or shed.
        #[arg(long)]
        roof: String,
        #[arg(long)]
        json: bool,
    },
    /// Generate a known-valid gable fixture (optionally mutated).
    GenFixture {
        #[arg(long)]
        width: f64,
        #[arg(long)]
        depth: f64,
        #[arg(long, default_value_t = 1)]
        stories: u32,
        /// Roof rise over run; defaults to a mid-band pitch for the depth.
        #[arg(long)]
        pitch: Option<f64>,
        /// Fault injection, `KIND:TARGET[:MAGNITUDE]`, e.g.
        /// `remove_ridge:`, `float_member:Collar_003:1.0`. Repeatable.
        #[arg(long = "mutate", value_name = "KIND:TARGET[:MAG]")]
        mutations: Vec<String>,
        /// Output path (`-` for stdout).
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Parses arguments and runs a subcommand; returns the process exit code.
pub fn dispatch<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful exits.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Validate { scene, span_table, params, json } => {
            let scene = load_scene(&scene)?;
            let table = load_span_table(span_table)?;
            let params = load_params(&params)?;
            let report = run_suite(&scene, &table, &params)?;
            if json {
                let mut value = serde_json::to_value(&report)?;
                value["schema_version"] = 1.into();
                value["lod"] = serde_json::to_value(lod_map(&report))?;
                println!("{}", serde_json::to_string(&value)?);
            } else {
                print_report(&report);
            }
            Ok(if report.overall_pass { 0 } else { 1 })
        }
        Command::Score {
            reference,
            generated,
            generated_views,
            reference_views,
            span_table,
            params,
            json,
        } => {
            let reference = load_scene(&reference)?;
            let generated = load_scene(&generated)?;
            let fidelity = FidelityParams::default();
            let topo = framecheck::topo_scores(&reference, &generated, &fidelity)?;

            let visual: Option<VisualScores> = match (&generated_views, &reference_views) {
                (Some(g), Some(r)) => {
                    Some(visual_scores(&load_view_dir(g)?, &load_view_dir(r)?, &fidelity)?)
                }
                _ => None,
            };

            let report: Option<SuiteReport> = match span_table {
                Some(path) => {
                    let table = SpanTable::from_path(&path)?;
                    let p = load_params(&params)?;
                    Some(run_suite(&generated, &table, &p)?)
                }
                None => None,
            };
            let joint = match (&report, &visual) {
                (Some(rep), Some(vis)) => Some(framecheck::joint_pass(rep, vis)),
                _ => None,
            };

            if json {
                println!(
                    "{}",
                    serde_json::to_string(&serde_json::json!({
                        "schema_version": 1,
                        "topo": topo,
                        "visual": visual,
                        "structural_pass": report.as_ref().map(|r| r.overall_pass),
                        "joint_pass": joint,
                    }))?
                );
            } else {
                println!(
                    "topological fidelity: C={:.4} M={:.4} V={:.4} T={:.4}",
                    topo.census_c, topo.match_m, topo.voxel_v, topo.composite_t
                );
                if let Some(vis) = &visual {
                    for (id, s) in &vis.per_view {
                        println!("view {id}: S={s:.4}");
                    }
                    println!(
                        "visual: mean S={:.4}, joint visual pass: {}",
                        vis.mean_s, vis.joint_visual_pass
                    );
                }
                if let Some(rep) = &report {
                    println!("structural: {}", if rep.overall_pass { "PASS" } else { "FAIL" });
                }
                if let Some(j) = joint {
                    println!("joint pass: {j}");
                }
            }

            let structural_fail = report.as_ref().is_some_and(|r| !r.overall_pass);
            let visual_fail = visual.as_ref().is_some_and(|v| !v.joint_visual_pass);
            Ok(if structural_fail || visual_fail { 1 } else { 0 })
        }
        Command::Corpus { directory, span_table, workers, params, json } => {
            let table = load_span_table(span_table)?;
            let params = load_params(&params)?;
            let report = corpus::run_corpus(&directory, &table, &params, workers)?;
            if json {
                print!("{}", machine_lines(&report));
            } else {
                println!("scenes evaluated: {}  (errors: {})", report.total, report.errors.len());
                println!("pass rate: {:.4}", report.pass_rate);
                println!("per-test failure rates:");
                for (test, rate) in &report.per_test_failure_rate {
                    println!("  {test:<4} {:<22} {rate:.4}", test.name());
                }
                if !report.cofailure_patterns.is_empty() {
                    println!("co-failure patterns (count desc):");
                    for p in &report.cofailure_patterns {
                        let tests: Vec<&str> = p.tests.iter().map(|t| t.label()).collect();
                        println!("  {{{}}}: {} ({:.4})", tests.join(", "), p.count, p.fraction);
                    }
                }
                for issue in &report.errors {
                    println!("unreadable {}: {}", issue.file, issue.error);
                }
            }
            Ok(if report.pass_rate == 1.0 && report.errors.is_empty() { 0 } else { 1 })
        }
        Command::PlanCheck { plan, lot_width, lot_depth, stories, roof, json } => {
            let roof_type = parse_roof(&roof)?;
            let document = PlanDocument::from_json(
                &fs::read(&plan).with_context(|| format!("reading {}", plan.display()))?,
            )?;
            let ctx = PlanContext { lot_width, lot_depth, stories, roof_type };
            let violations = check_plan(&document, &ctx);
            let rejected = violations.iter().any(|v| v.severity == Severity::Error);
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&serde_json::json!({
                        "schema_version": 1,
                        "accepted": !rejected,
                        "violations": violations,
                    }))?
                );
            } else if violations.is_empty() {
                println!("plan accepted");
            } else {
                for v in &violations {
                    let tag = match v.severity {
                        Severity::Error => "violation",
                        Severity::Warning => "warning",
                    };
                    println!("{tag}: {}", v.message);
                }
                println!("plan {}", if rejected { "rejected" } else { "accepted with warnings" });
            }
            Ok(if rejected { 1 } else { 0 })
        }
        Command::GenFixture { width, depth, stories, pitch, mutations, output } => {
            let mut spec = FixtureSpec::new(width, depth, stories);
            if let Some(p) = pitch {
                spec.roof_pitch_ratio = p;
            }
            let mut scene = generate_gable(&spec)?;
            for raw in &mutations {
                let mutation = parse_mutation(raw)?;
                scene = apply_mutation(&scene, &mutation)?;
            }
            let bytes = serialize_scene(&scene);
            if output == Path::new("-") {
                use std::io::Write;
                std::io::stdout().write_all(&bytes)?;
            } else {
                fs::write(&output, bytes).with_context(|| format!("writing {}", output.display()))?;
            }
            Ok(0)
        }
    }
}

fn load_scene(path: &Path) -> Result<Scene> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_scene(&bytes)?)
}

fn load_span_table(flag: Option<PathBuf>) -> Result<SpanTable> {
    let path = match flag {
        Some(p) => p,
        None => PathBuf::from(std::env::var(SPAN_TABLE_ENV).map_err(|_| {
            anyhow!("a span table is required: pass --span-table or set {SPAN_TABLE_ENV}")
        })?),
    };
    Ok(SpanTable::from_path(&path)?)
}

/// Loads validation params from an optional config file, then applies
/// `--set field=value` overrides by dotted path.
fn load_params(args: &ParamArgs) -> Result<ValidationParams> {
    let mut value: serde_json::Value = match &args.config {
        Some(path) => serde_json::from_slice(
            &fs::read(path).with_context(|| format!("reading {}", path.display()))?,
        )?,
        None => serde_json::json!({}),
    };
    for setting in &args.sets {
        let (path, raw) = setting
            .split_once('=')
            .ok_or_else(|| anyhow!("--set expects FIELD=VALUE, got {setting:?}"))?;
        let parsed: serde_json::Value = serde_json::from_str(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        let segments: Vec<&str> = path.split('.').collect();
        insert_path(&mut value, &segments, parsed);
    }
    Ok(serde_json::from_value(value)?)
}

fn insert_path(node: &mut serde_json::Value, segments: &[&str], leaf: serde_json::Value) {
    if !node.is_object() {
        *node = serde_json::json!({});
    }
    let map = node.as_object_mut().unwrap();
    match segments {
        [last] => {
            map.insert(last.to_string(), leaf);
        }
        [head, rest @ ..] => {
            let child = map.entry(head.to_string()).or_insert(serde_json::json!({}));
            insert_path(child, rest, leaf);
        }
        [] => {}
    }
}

fn parse_roof(raw: &str) -> Result<RoofType> {
    match raw {
        "gable" => Ok(RoofType::Gable),
        "hip" => Ok(RoofType::Hip),
        "gambrel" => Ok(RoofType::Gambrel),
        "shed" => Ok(RoofType::Shed),
        other => bail!("unknown roof type {other:?} (expected gable|hip|gambrel|shed)"),
    }
}

/// Parses `KIND:TARGET[:MAGNITUDE]`.
fn parse_mutation(raw: &str) -> Result<Mutation> {
    let mut parts = raw.splitn(3, ':');
    let kind_str = parts.next().unwrap_or_default();
    let kind = MutationKind::from_str_opt(kind_str)
        .ok_or_else(|| anyhow!("unknown mutation kind {kind_str:?}"))?;
    let target = parts.next().unwrap_or_default().to_string();
    let magnitude = match parts.next() {
        Some(m) => Some(m.parse::<f64>().with_context(|| format!("bad magnitude {m:?}"))?),
        None => None,
    };
    Ok(Mutation::new(kind, target, magnitude))
}

fn print_report(report: &SuiteReport) {
    for test in TestId::ALL {
        let verdict = match report.verdicts[&test] {
            framecheck::validate::Verdict::Pass => "PASS",
            framecheck::validate::Verdict::Fail => "FAIL",
        };
        let count = report.violations.iter().filter(|v| v.test == test).count();
        if count > 0 {
            println!("{:<4} {:<22} {verdict} ({count} violations)", test.label(), test.name());
        } else {
            println!("{:<4} {:<22} {verdict}", test.label(), test.name());
        }
    }
    println!("TSI {:.4}", report.tsi);
    println!("overall {}", if report.overall_pass { "PASS" } else { "FAIL" });
    let feedback = format_feedback(report);
    if !feedback.is_empty() {
        println!("{feedback}");
    }
    for finding in lod_map(report) {
        println!(
            "LoD 350 {}: {} — {}",
            finding.requirement.label(),
            finding.test,
            finding.narrative
        );
    }
}
