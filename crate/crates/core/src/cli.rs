//! Command-line front end of the `bcdof` binary.
//!
//! [`run`] takes the argument list and returns the exit code together with
//! whatever should go to stdout and stderr, so the binary itself is a thin
//! wrapper and every command can be exercised in-process.
//!
//! Exit codes: 0 success, 1 a checked property failed (or a point lies
//! outside the region), 2 usage error, 3 the target needs a scheme from cited
//! prior work, 4 I/O failure.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::catalog::{
    bc_cm_region, bc_pm_region, corner_catalog, devolve_outer, find_corner, region_for, Corner,
    RegionLabel,
};
use crate::lemmas::{
    canonicalization_check, lemma1_ratio_check, lemma2_check, theorem2_converse_check, BlockShape,
    PrecoderFamily, SCHWARTZ_ZIPPEL_NOTE,
};
use crate::linalg::RngSeed;
use crate::polytope::{Halfspace, Region};
use crate::rational::{self, to_f64, Rational};
use crate::scenario::{AntennaConfig, Coord, CsitLetter, CsitModel, DofPoint, MessageSet};
use crate::schemes::{
    achieve_point, simulate_plan, CornerScheme, PlanReport, RankLedger, SchemeError,
    SimulationReport, TimeSharePlan,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CITED: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "bcdof",
    version,
    about = "DoF regions, corner schemes and rank-lemma checks for the two-user MIMO broadcast channel"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Add decimal approximations next to exact rationals.
    #[arg(long, global = true)]
    float: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Transmit antennas.
    m: usize,
    /// Receiver-1 antennas.
    n1: usize,
    /// Receiver-2 antennas.
    n2: usize,
    /// CSIT model, e.g. PN (receiver 1 perfect, receiver 2 none).
    csit: String,
    /// Message set: pm, dm or cm.
    message_set: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Halfspaces, vertices and corner schemes of a region.
    Region(ScenarioArgs),
    /// Membership of a point and its time-sharing plan: `check d1 d2 d0 -- M N1 N2 CSIT MS`.
    Check {
        #[arg(num_args = 1.., allow_hyphen_values = true, trailing_var_arg = true)]
        values: Vec<String>,
    },
    /// Exact-arithmetic simulation of the scheme for a corner or point.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Corner label (A1, B2, B0, P1, P2, ... or P when unambiguous).
        #[arg(long, conflicts_with = "point", required_unless_present = "point")]
        corner: Option<String>,
        /// Target point `d1,d2,d0`; reached by time-sharing corners.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
    /// Monte-Carlo and sweep checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Vertex data of a two-dimensional slice, plus optional facet data.
    PlotData {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Slice such as `d2=0`.
        #[arg(long)]
        slice: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// JSON file receiving the facets of the unsliced region.
        #[arg(long)]
        facets: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Antennas {
    m: Option<usize>,
    n1: Option<usize>,
    n2: Option<usize>,
}

impl Antennas {
    fn resolve(&self, default: (usize, usize, usize)) -> Result<AntennaConfig, CliError> {
        let (m, n1, n2) = match (self.m, self.n1, self.n2) {
            (None, None, None) => default,
            (Some(m), Some(n1), Some(n2)) => (m, n1, n2),
            _ => {
                return Err(CliError::Usage(
                    "give all three antenna counts M N1 N2".into(),
                ))
            }
        };
        AntennaConfig::new(m, n1, n2).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    All,
    Generic,
    ZfMixture,
    BlockDiagonal,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Rank ratio bound for receiver-1-decodable precoders.
    Lemma1 {
        #[command(flatten)]
        antennas: Antennas,
        /// Largest block length; each trial draws T uniformly from 1..=T.
        #[arg(long = "T", alias = "t", default_value_t = 4)]
        t: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::All)]
        family: FamilyArg,
    },
    /// Contract of the block-diagonal canonicalization.
    Canonicalize {
        #[command(flatten)]
        antennas: Antennas,
        #[arg(long = "T", alias = "t", default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Two-block rank inequality on the preset shapes.
    Lemma2 {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Three-block extension on the preset shapes.
    Remark3 {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Dimension-counting chain of the private-message converse.
    Converse {
        #[command(flatten)]
        antennas: Antennas,
        #[arg(long = "T", alias = "t", default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Devolution outer bound equals the common-message region.
    Devolution {
        #[arg(long, default_value_t = 6)]
        max_antennas: usize,
    },
    /// Structural properties of every catalog region over a grid.
    CatalogSweep {
        #[arg(long, default_value_t = 6)]
        max_antennas: usize,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Property(String),
    Cited(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Property(_) => EXIT_PROPERTY,
            CliError::Cited(_) => EXIT_CITED,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Property(m) | CliError::Cited(m) | CliError::Io(m) => m,
        }
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::CitedExternal(_) => CliError::Cited(e.to_string()),
            SchemeError::Infeasible(_) | SchemeError::NotIntegral(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Property(e.to_string()),
        }
    }
}

/// Report printed by every command. It carries no timing so that repeated
/// runs with the same seed are byte-identical; wall time goes to stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: Vec<String>,
    pub config: Value,
    pub seed: u64,
    pub result: Value,
}

impl RunReport {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "result": self.result,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }
}

/// A command's payload, its CSV rendering and whether its checks passed.
struct Outcome {
    config: Value,
    result: Value,
    table: Vec<Vec<String>>,
    failure: Option<String>,
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, S>(args: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(hoist_check_flags(&args)) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let started = Instant::now();
    let ctx = Ctx {
        seed: RngSeed(cli.seed),
        float: cli.float,
    };
    let outcome = match &cli.command {
        Command::Region(s) => cmd_region(&ctx, s),
        Command::Check { values } => cmd_check(&ctx, values),
        Command::Simulate {
            scenario,
            corner,
            point,
            trials,
        } => cmd_simulate(
            &ctx,
            scenario,
            corner.as_deref(),
            point.as_deref(),
            *trials as usize,
        ),
        Command::Verify(v) => cmd_verify(&ctx, v),
        Command::PlotData {
            scenario,
            slice,
            out,
            facets,
        } => cmd_plot_data(&ctx, scenario, slice.as_deref(), out, facets.as_ref()),
    };
    let elapsed = format!("wall time: {:.3} s\n", started.elapsed().as_secs_f64());
    match outcome {
        Err(e) => CliOutput {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {}\n{elapsed}", e.message()),
        },
        Ok(o) => {
            let report = RunReport {
                command: args.iter().skip(1).cloned().collect(),
                config: o.config,
                seed: cli.seed,
                result: o.result,
            };
            let stdout = match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => to_csv(&o.table),
            };
            let (code, stderr) = match o.failure {
                Some(f) => (EXIT_PROPERTY, format!("{f}\n{elapsed}")),
                None => (EXIT_OK, elapsed),
            };
            CliOutput {
                code,
                stdout,
                stderr,
            }
        }
    }
}

/// `check` swallows everything after its subcommand name, so global flags
/// written after the point and scenario are moved in front of it.
fn hoist_check_flags(args: &[String]) -> Vec<String> {
    let Some(pos) = args.iter().position(|a| a == "check") else {
        return args.to_vec();
    };
    let mut head: Vec<String> = args[..pos].to_vec();
    let mut tail = Vec::new();
    let mut rest = args[pos + 1..].iter();
    while let Some(a) = rest.next() {
        let with_value = a == "--format" || a == "--seed";
        if with_value {
            head.push(a.clone());
            if let Some(v) = rest.next() {
                head.push(v.clone());
            }
        } else if a == "--float" || a.starts_with("--format=") || a.starts_with("--seed=") {
            head.push(a.clone());
        } else {
            tail.push(a.clone());
        }
    }
    head.push("check".into());
    head.extend(tail);
    head
}

struct Ctx {
    seed: RngSeed,
    float: bool,
}

impl Ctx {
    fn rat(&self, x: &Rational) -> Value {
        let mut m = Map::new();
        m.insert("num".into(), big_json(x.numer()));
        m.insert("den".into(), big_json(x.denom()));
        if self.float {
            m.insert("float".into(), json!(to_f64(x)));
        }
        Value::Object(m)
    }

    fn point(&self, p: &DofPoint) -> Value {
        json!({
            "d1": self.rat(&p.d1),
            "d2": self.rat(&p.d2),
            "d0": self.rat(&p.d0),
            "text": p.to_string(),
        })
    }

    fn halfspace(&self, h: &Halfspace) -> Value {
        json!({
            "d1": self.rat(&h.a1),
            "d2": self.rat(&h.a2),
            "d0": self.rat(&h.a0),
            "b": self.rat(&h.b),
            "text": h.to_string(),
        })
    }

    fn corner(&self, c: &Corner) -> Value {
        json!({
            "label": c.label,
            "point": self.point(&c.point),
            "scheme": c.kind.name(),
            "simulatable": c.kind.is_simulatable(),
        })
    }
}

fn big_json(x: &num_bigint::BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn to_csv(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
}

struct Scenario {
    cfg: AntennaConfig,
    csit: CsitModel,
    message_set: MessageSet,
}

fn parse_scenario(
    m: usize,
    n1: usize,
    n2: usize,
    csit: &str,
    ms: &str,
) -> Result<Scenario, CliError> {
    let cfg = AntennaConfig::new(m, n1, n2).map_err(|e| CliError::Usage(e.to_string()))?;
    let csit: CsitModel = csit
        .parse()
        .map_err(|e: crate::scenario::ScenarioError| CliError::Usage(e.to_string()))?;
    let message_set: MessageSet = ms
        .parse()
        .map_err(|e: crate::scenario::ScenarioError| CliError::Usage(e.to_string()))?;
    Ok(Scenario {
        cfg,
        csit,
        message_set,
    })
}

impl ScenarioArgs {
    fn parse(&self) -> Result<Scenario, CliError> {
        parse_scenario(self.m, self.n1, self.n2, &self.csit, &self.message_set)
    }
}

fn scenario_config(s: &Scenario) -> Value {
    json!({
        "M": s.cfg.m,
        "N1": s.cfg.n1,
        "N2": s.cfg.n2,
        "csit": s.csit.to_string(),
        "message_set": s.message_set.short(),
    })
}

fn label_json(label: &RegionLabel) -> Value {
    json!({
        "message_set": label.message_set.to_string(),
        "csit": label.csit.to_string(),
        "csit_type": label.csit.csit_type().to_string(),
        "status": label.status.to_string(),
        "star": label.conjectured_dof(),
        "derived": label.derived,
    })
}

fn fmt_point_cells(p: &DofPoint) -> Vec<String> {
    vec![
        rational::format(&p.d1),
        rational::format(&p.d2),
        rational::format(&p.d0),
    ]
}

fn cmd_region(ctx: &Ctx, args: &ScenarioArgs) -> Result<Outcome, CliError> {
    let s = args.parse()?;
    let (region, label) = region_for(s.cfg, s.message_set, s.csit);
    let vertices = region
        .vertices()
        .map_err(|e| CliError::Property(e.to_string()))?;
    let corners = corner_catalog(s.cfg, s.message_set, s.csit);
    let mut table = vec![vec![
        "d1".into(),
        "d2".into(),
        "d0".into(),
        "label".into(),
        "scheme".into(),
    ]];
    for v in &vertices {
        let mut row = fmt_point_cells(v);
        match corners.iter().find(|c| &c.point == v) {
            Some(c) => {
                row.push(c.label.clone());
                row.push(c.kind.name().into());
            }
            None => {
                row.push("O".into());
                row.push("idle".into());
            }
        }
        table.push(row);
    }
    let result = json!({
        "label": label_json(&label),
        "pinned": region.pinned_coords().iter().map(|c| c.name()).collect::<Vec<_>>(),
        "halfspaces": region.halfspaces.iter().map(|h| ctx.halfspace(h)).collect::<Vec<_>>(),
        "vertices": vertices.iter().map(|v| ctx.point(v)).collect::<Vec<_>>(),
        "corners": corners.iter().map(|c| ctx.corner(c)).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        config: scenario_config(&s),
        result,
        table,
        failure: None,
    })
}

fn parse_point(parts: &[String]) -> Result<DofPoint, CliError> {
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "a point needs three coordinates, got {}",
            parts.len()
        )));
    }
    let mut c = Vec::with_capacity(3);
    for p in parts {
        c.push(rational::parse(p).map_err(CliError::Usage)?);
    }
    let d0 = c.pop().expect("three");
    let d2 = c.pop().expect("three");
    let d1 = c.pop().expect("three");
    Ok(DofPoint::new(d1, d2, d0))
}

fn plan_json(ctx: &Ctx, plan: &TimeSharePlan) -> Value {
    json!({
        "target": ctx.point(&plan.target),
        "components": plan.components.iter().map(|c| json!({
            "corner": ctx.corner(&c.corner),
            "weight": ctx.rat(&c.weight),
        })).collect::<Vec<_>>(),
        "idle": ctx.rat(&plan.idle),
    })
}

fn cmd_check(ctx: &Ctx, values: &[String]) -> Result<Outcome, CliError> {
    let values: Vec<String> = values
        .iter()
        .filter(|v| !matches!(v.as_str(), "--" | "\u{2014}" | "\u{2013}"))
        .cloned()
        .collect();
    if values.len() != 8 {
        return Err(CliError::Usage(
            "usage: check d1 d2 d0 -- M N1 N2 CSIT MESSAGE_SET".into(),
        ));
    }
    let d = parse_point(&values[0..3])?;
    let n = |i: usize| {
        values[i]
            .parse::<usize>()
            .map_err(|e| CliError::Usage(format!("bad antenna count {:?}: {e}", values[i])))
    };
    let s = parse_scenario(n(3)?, n(4)?, n(5)?, &values[6], &values[7])?;
    let mut config = scenario_config(&s);
    config["point"] = ctx.point(&d);
    let mut table = vec![vec![
        "inside".into(),
        "violated".into(),
        "label".into(),
        "weight".into(),
        "d1".into(),
        "d2".into(),
        "d0".into(),
        "scheme".into(),
    ]];
    match achieve_point(s.cfg, s.message_set, s.csit, &d) {
        Ok(plan) => {
            for c in &plan.components {
                let mut row = vec![
                    "true".into(),
                    String::new(),
                    c.corner.label.clone(),
                    rational::format(&c.weight),
                ];
                row.extend(fmt_point_cells(&c.corner.point));
                row.push(c.corner.kind.name().into());
                table.push(row);
            }
            if plan.components.is_empty() {
                table.push(vec!["true".into()]);
            }
            let result = json!({ "inside": true, "plan": plan_json(ctx, &plan) });
            Ok(Outcome {
                config,
                result,
                table,
                failure: None,
            })
        }
        Err(SchemeError::Infeasible(bound)) => {
            table.push(vec!["false".into(), bound.clone()]);
            let result = json!({ "inside": false, "violated": bound });
            Ok(Outcome {
                config,
                result,
                table,
                failure: Some(format!("point {d} is outside the region: violates {bound}")),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn ledger_json(l: &RankLedger) -> Value {
    json!({
        "total": l.total,
        "signal": l.signal,
        "interference": l.interference,
        "required": l.required,
        "pass": l.passes(),
    })
}

fn sim_json(ctx: &Ctx, r: &SimulationReport) -> Value {
    json!({
        "trials": r.trials,
        "passes": r.passes,
        "T": r.t,
        "symbols": { "m1": r.symbols[0], "m2": r.symbols[1], "m0": r.symbols[2] },
        "achieved": r.achieved.as_ref().map(|p| ctx.point(p)),
        "ledgers": r.ledgers.iter().map(|(l, n)| json!({
            "receiver1": ledger_json(&l[0]),
            "receiver2": ledger_json(&l[1]),
            "count": n,
        })).collect::<Vec<_>>(),
        "first_failure": r.first_failure,
    })
}

fn sim_row(label: &str, weight: &Rational, r: &SimulationReport) -> Vec<String> {
    let mut row = vec![
        label.to_string(),
        rational::format(weight),
        r.trials.to_string(),
        r.passes.to_string(),
        r.t.to_string(),
        r.symbols[0].to_string(),
        r.symbols[1].to_string(),
        r.symbols[2].to_string(),
    ];
    match &r.achieved {
        Some(p) => row.extend(fmt_point_cells(p)),
        None => row.extend([String::new(), String::new(), String::new()]),
    }
    row
}

fn sim_header() -> Vec<String> {
    [
        "corner", "weight", "trials", "passes", "T", "m1", "m2", "m0", "d1", "d2", "d0",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn cmd_simulate(
    ctx: &Ctx,
    args: &ScenarioArgs,
    corner: Option<&str>,
    point: Option<&str>,
    trials: usize,
) -> Result<Outcome, CliError> {
    let s = args.parse()?;
    let mut config = scenario_config(&s);
    config["trials"] = json!(trials);
    if let Some(label) = corner {
        config["corner"] = json!(label);
        let corners = corner_catalog(s.cfg, s.message_set, s.csit);
        let c = find_corner(&corners, label).cloned().ok_or_else(|| {
            let known: Vec<&str> = corners.iter().map(|c| c.label.as_str()).collect();
            CliError::Usage(format!(
                "no corner {label:?}; corners are {}",
                known.join(", ")
            ))
        })?;
        let scheme = CornerScheme::new(s.cfg, s.message_set, s.csit, c.clone())?;
        let r = scheme.simulate(trials, ctx.seed)?;
        let failure = (!r.all_passed())
            .then(|| format!("{} of {} trials failed", r.trials - r.passes, r.trials));
        let one = Rational::from_integer(1.into());
        let table = vec![sim_header(), sim_row(&c.label, &one, &r)];
        let result = json!({
            "corner": ctx.corner(&c),
            "simulation": sim_json(ctx, &r),
        });
        return Ok(Outcome {
            config,
            result,
            table,
            failure,
        });
    }
    let text = point.expect("clap requires --corner or --point");
    let parts: Vec<String> = text.split(',').map(|p| p.trim().to_string()).collect();
    let d = parse_point(&parts)?;
    config["point"] = ctx.point(&d);
    let plan = achieve_point(s.cfg, s.message_set, s.csit, &d)?;
    if let Some(c) = plan
        .components
        .iter()
        .find(|c| !c.corner.kind.is_simulatable())
    {
        if let crate::catalog::SchemeKind::CitedExternal(w) = c.corner.kind {
            return Err(SchemeError::CitedExternal(w).into());
        }
    }
    let rep: PlanReport = simulate_plan(s.cfg, s.message_set, s.csit, &plan, trials, ctx.seed)?;
    let mut table = vec![sim_header()];
    let mut components = Vec::new();
    for c in &rep.components {
        let r = c.report.as_ref().expect("all components simulatable");
        table.push(sim_row(&c.corner.label, &c.weight, r));
        components.push(json!({
            "corner": ctx.corner(&c.corner),
            "weight": ctx.rat(&c.weight),
            "simulation": sim_json(ctx, r),
        }));
    }
    let failure = (!rep.all_passed()).then(|| "some component trials failed".to_string());
    let result = json!({
        "plan": plan_json(ctx, &plan),
        "components": components,
        "idle": ctx.rat(&plan.idle),
    });
    Ok(Outcome {
        config,
        result,
        table,
        failure,
    })
}

fn failure_if(violations: usize, what: &str) -> Option<String> {
    (violations > 0).then(|| format!("{violations} violation(s) in {what}"))
}

fn cfg_json(cfg: AntennaConfig) -> Value {
    json!({ "M": cfg.m, "N1": cfg.n1, "N2": cfg.n2 })
}

fn cmd_verify(ctx: &Ctx, v: &VerifyCommand) -> Result<Outcome, CliError> {
    match v {
        VerifyCommand::Lemma1 {
            antennas,
            t,
            trials,
            family,
        } => {
            let cfg = antennas.resolve((4, 3, 2))?;
            if *t == 0 {
                return Err(CliError::Usage("T must be positive".into()));
            }
            let families: Vec<PrecoderFamily> = match family {
                FamilyArg::All => PrecoderFamily::ALL.to_vec(),
                FamilyArg::Generic => vec![PrecoderFamily::Generic],
                FamilyArg::ZfMixture => vec![PrecoderFamily::ZfMixture],
                FamilyArg::BlockDiagonal => vec![PrecoderFamily::BlockDiagonal],
            };
            let r = lemma1_ratio_check(cfg, *t, *trials, ctx.seed, &families);
            let mut table = vec![[
                "family",
                "trials",
                "rejected",
                "max_ratio",
                "bound",
                "violations",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()];
            let fams: Vec<Value> = r
                .families
                .iter()
                .map(|f| {
                    table.push(vec![
                        f.family.name().into(),
                        f.trials.to_string(),
                        f.rejected.to_string(),
                        rational::format(&f.max_ratio),
                        rational::format(&r.bound),
                        f.violations.to_string(),
                    ]);
                    json!({
                        "family": f.family.name(),
                        "trials": f.trials,
                        "rejected": f.rejected,
                        "max_ratio": ctx.rat(&f.max_ratio),
                        "argmax": f.argmax.map(|(m1, t)| json!({"m1": m1, "T": t})),
                        "violations": f.violations,
                    })
                })
                .collect();
            let result = json!({
                "note": SCHWARTZ_ZIPPEL_NOTE,
                "bound": ctx.rat(&r.bound),
                "ratio_must_be_one": r.ratio_must_be_one,
                "max_ratio": ctx.rat(&r.max_ratio()),
                "families": fams,
                "violations": r.violations(),
            });
            Ok(Outcome {
                config: json!({"check": "lemma1", "antennas": cfg_json(cfg), "T": t, "trials": trials}),
                result,
                table,
                failure: failure_if(r.violations(), "the rank ratio bound"),
            })
        }
        VerifyCommand::Canonicalize {
            antennas,
            t,
            trials,
        } => {
            let cfg = antennas.resolve((4, 3, 2))?;
            if *t == 0 {
                return Err(CliError::Usage("T must be positive".into()));
            }
            let r = canonicalization_check(cfg, *t, *trials, ctx.seed);
            let fields = [
                ("not_block_diagonal", r.not_block_diagonal),
                ("rank_deficient_block", r.rank_deficient_block),
                ("per_slot_rank", r.per_slot_rank),
                ("rank_preserved_at_receiver1", r.eq8),
                ("rank_not_increased_at_receiver2", r.eq9),
                ("non_monotone_log", r.non_monotone_log),
                ("per_slot_dichotomy", r.dichotomy),
                ("slot_sum_bound", r.eq17),
                ("errors", r.errors),
            ];
            let mut table = vec![vec!["property".to_string(), "violations".to_string()]];
            let mut props = Map::new();
            for (k, n) in fields {
                table.push(vec![k.to_string(), n.to_string()]);
                props.insert(k.to_string(), json!(n));
            }
            let result = json!({
                "note": SCHWARTZ_ZIPPEL_NOTE,
                "trials": r.trials,
                "violations": props,
                "max_receiver2_rank_drop": r.max_rank_drop,
            });
            Ok(Outcome {
                config: json!({"check": "canonicalize", "antennas": cfg_json(cfg), "T": t, "trials": trials}),
                result,
                table,
                failure: failure_if(r.violations(), "the canonicalization contract"),
            })
        }
        VerifyCommand::Lemma2 { trials } => {
            block_check(ctx, "lemma2", BlockShape::lemma2_presets(), *trials)
        }
        VerifyCommand::Remark3 { trials } => {
            block_check(ctx, "remark3", BlockShape::remark3_presets(), *trials)
        }
        VerifyCommand::Converse {
            antennas,
            t,
            trials,
        } => {
            let cfg = antennas.resolve((4, 3, 2))?;
            let r = theorem2_converse_check(cfg, *t, *trials, ctx.seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let fields = [
                ("receiver2_dimension", r.dimension_violations),
                ("receiver1_rank", r.rx1_violations),
                ("receiver2_rank", r.rx2_violations),
                ("weighted_bound", r.weighted_violations),
                ("interference_floor", r.eq22_violations),
                (
                    "saturation_not_exact",
                    r.saturation_checked - r.saturation_exact,
                ),
            ];
            let mut table = vec![vec!["property".to_string(), "violations".to_string()]];
            let mut props = Map::new();
            for (k, n) in fields {
                table.push(vec![k.to_string(), n.to_string()]);
                props.insert(k.to_string(), json!(n));
            }
            let result = json!({
                "note": SCHWARTZ_ZIPPEL_NOTE,
                "trials": r.trials,
                "accepted": r.accepted,
                "rejected": r.rejected,
                "violations": props,
                "max_weighted_sum": ctx.rat(&r.max_weighted),
                "saturation": {"checked": r.saturation_checked, "exact": r.saturation_exact},
            });
            Ok(Outcome {
                config: json!({"check": "converse", "antennas": cfg_json(cfg), "T": t, "trials": trials}),
                result,
                table,
                failure: failure_if(r.violations(), "the converse chain"),
            })
        }
        VerifyCommand::Devolution { max_antennas } => {
            let (cases, mismatches) = devolution_sweep(*max_antennas);
            let table = std::iter::once(vec![
                "M".to_string(),
                "N1".into(),
                "N2".into(),
                "csit".into(),
            ])
            .chain(mismatches.iter().map(|(c, m)| {
                vec![
                    c.m.to_string(),
                    c.n1.to_string(),
                    c.n2.to_string(),
                    m.to_string(),
                ]
            }))
            .collect();
            let result = json!({
                "cases": cases,
                "equal": cases - mismatches.len(),
                "mismatches": mismatches.iter().map(|(c, m)| json!({"antennas": cfg_json(*c), "csit": m.to_string()})).collect::<Vec<_>>(),
            });
            Ok(Outcome {
                config: json!({"check": "devolution", "max_antennas": max_antennas}),
                result,
                table,
                failure: failure_if(mismatches.len(), "the devolution sweep"),
            })
        }
        VerifyCommand::CatalogSweep { max_antennas } => {
            let props = catalog_sweep(*max_antennas);
            let mut table = vec![vec![
                "property".to_string(),
                "checked".into(),
                "violations".into(),
            ]];
            let mut total = 0;
            let mut out = Vec::new();
            for p in &props {
                table.push(vec![
                    p.name.to_string(),
                    p.checked.to_string(),
                    p.violations.len().to_string(),
                ]);
                total += p.violations.len();
                out.push(json!({
                    "property": p.name,
                    "checked": p.checked,
                    "violations": p.violations,
                }));
            }
            Ok(Outcome {
                config: json!({"check": "catalog-sweep", "max_antennas": max_antennas}),
                result: json!({ "properties": out }),
                table,
                failure: failure_if(total, "the catalog sweep"),
            })
        }
    }
}

fn block_check(
    ctx: &Ctx,
    name: &str,
    shapes: Vec<BlockShape>,
    trials: usize,
) -> Result<Outcome, CliError> {
    let mut table = vec![[
        "shape",
        "trials",
        "violations",
        "split_checked",
        "split_violations",
        "equalities",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect::<Vec<_>>()];
    let mut out = Vec::new();
    let mut total = 0;
    for (i, s) in shapes.iter().enumerate() {
        let r = lemma2_check(s, trials, ctx.seed.derive(&[i as u64]))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        total += r.violations + r.split_violations + r.rejected;
        table.push(vec![
            s.name.clone(),
            r.trials.to_string(),
            r.violations.to_string(),
            r.split_checked.to_string(),
            r.split_violations.to_string(),
            r.equalities.to_string(),
        ]);
        out.push(json!({
            "shape": s.name,
            "rows": s.rows,
            "cols": s.cols,
            "h_rows": s.h_rows,
            "zero_off_diagonal": s.zero_off_diagonal,
            "trials": r.trials,
            "violations": r.violations,
            "split_checked": r.split_checked,
            "split_violations": r.split_violations,
            "rejected": r.rejected,
            "equalities": r.equalities,
        }));
    }
    Ok(Outcome {
        config: json!({"check": name, "trials": trials}),
        result: json!({"note": SCHWARTZ_ZIPPEL_NOTE, "shapes": out}),
        table,
        failure: failure_if(total, name),
    })
}

/// Antenna configurations with every count in `1..=max` and `N1 ≥ N2`.
pub fn normalized_grid(max: usize) -> Vec<AntennaConfig> {
    let mut out = Vec::new();
    for m in 1..=max {
        for n1 in 1..=max {
            for n2 in 1..=n1 {
                out.push(AntennaConfig::new(m, n1, n2).expect("positive counts"));
            }
        }
    }
    out
}

/// Compares the devolution bound with the common-message region on the
/// normalized grid; returns the case count and the mismatches.
pub fn devolution_sweep(max: usize) -> (usize, Vec<(AntennaConfig, CsitModel)>) {
    use rayon::prelude::*;
    let cases: Vec<(AntennaConfig, CsitModel)> = normalized_grid(max)
        .into_iter()
        .flat_map(|c| CsitModel::all().into_iter().map(move |m| (c, m)))
        .collect();
    let mismatches = cases
        .par_iter()
        .filter(|(c, m)| {
            let outer = devolve_outer(*c, *m);
            let (cm, _) = bc_cm_region(*c, *m);
            !outer.equals(&cm).unwrap_or(false)
        })
        .cloned()
        .collect();
    (cases.len(), mismatches)
}

pub struct SweepProperty {
    pub name: &'static str,
    pub checked: usize,
    pub violations: Vec<String>,
}

/// Structural properties of the catalog: equal private-message regions for
/// `PN`, `DN` and `NN`; a zero coordinate at every vertex; boundedness;
/// `LDoF` labels exactly on the Type II models; receiver-swap symmetry.
pub fn catalog_sweep(max: usize) -> Vec<SweepProperty> {
    let grid = normalized_grid(max);
    let nn = CsitModel::new(CsitLetter::N, CsitLetter::N);
    let pn = CsitModel::new(CsitLetter::P, CsitLetter::N);
    let dn = CsitModel::new(CsitLetter::D, CsitLetter::N);

    let mut same = SweepProperty {
        name: "pm_pn_dn_nn_equal",
        checked: 0,
        violations: Vec::new(),
    };
    for &c in &grid {
        let (base, _) = bc_pm_region(c, nn);
        for m in [pn, dn] {
            same.checked += 1;
            if !bc_pm_region(c, m).0.equals(&base).unwrap_or(false) {
                same.violations.push(format!("{c} {m}"));
            }
        }
    }

    let mut corner_zero = SweepProperty {
        name: "vertex_has_zero_coordinate",
        checked: 0,
        violations: Vec::new(),
    };
    let mut bounded = SweepProperty {
        name: "region_bounded_and_nonempty",
        checked: 0,
        violations: Vec::new(),
    };
    let mut status = SweepProperty {
        name: "ldof_label_iff_type_ii",
        checked: 0,
        violations: Vec::new(),
    };
    let mut swap = SweepProperty {
        name: "receiver_swap_symmetry",
        checked: 0,
        violations: Vec::new(),
    };
    let mut full_grid = Vec::new();
    for m in 1..=max {
        for n1 in 1..=max {
            for n2 in 1..=max {
                full_grid.push(AntennaConfig::new(m, n1, n2).expect("positive counts"));
            }
        }
    }
    for &c in &full_grid {
        for csit in CsitModel::all() {
            for ms in MessageSet::all() {
                let (r, label) = region_for(c, ms, csit);
                bounded.checked += 1;
                match r.vertices() {
                    Ok(vs) if vs.len() > 1 => {
                        for v in vs {
                            corner_zero.checked += 1;
                            if v.zero_count() == 0 {
                                corner_zero.violations.push(format!("{c} {csit} {ms}: {v}"));
                            }
                        }
                    }
                    _ => bounded.violations.push(format!("{c} {csit} {ms}")),
                }
                status.checked += 1;
                let type_ii = csit.csit_type() == crate::scenario::CsitType::TypeII;
                let dm_special = ms == MessageSet::Degraded
                    && (c.n1 < c.n2 || csit == CsitModel::new(CsitLetter::N, CsitLetter::D));
                if !dm_special && label.conjectured_dof() != type_ii {
                    status.violations.push(format!("{c} {csit} {ms}"));
                }
                if ms != MessageSet::Degraded {
                    swap.checked += 1;
                    let (s, _) = region_for(c.swapped(), ms, csit.swapped());
                    if !r.equals(&s.swapped()).unwrap_or(false) {
                        swap.violations.push(format!("{c} {csit} {ms}"));
                    }
                }
            }
        }
    }
    vec![same, corner_zero, bounded, status, swap]
}

fn parse_slice(s: &str) -> Result<(Coord, Rational), CliError> {
    let (c, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("slice {s:?} is not of the form d2=0")))?;
    let coord: Coord = c.trim().parse().map_err(CliError::Usage)?;
    let value = rational::parse(v).map_err(CliError::Usage)?;
    Ok((coord, value))
}

/// Facets of a region: every bounding plane touched by enough vertices,
/// with the vertices in cyclic order around the facet.
fn facets(region: &Region) -> Result<(Vec<DofPoint>, Vec<(String, Vec<usize>)>), CliError> {
    let vertices = region
        .vertices()
        .map_err(|e| CliError::Property(e.to_string()))?;
    let free = region.free_coords();
    let dim = free.len();
    let mut planes: Vec<(String, Halfspace)> = region
        .halfspaces
        .iter()
        .filter(|h| !h.is_trivial())
        .map(|h| (h.to_string(), h.clone()))
        .collect();
    for &c in &free {
        let mut coeffs = [Rational::zero(), Rational::zero(), Rational::zero()];
        coeffs[c.index()] = -Rational::from_integer(1.into());
        let [a1, a2, a0] = coeffs;
        planes.push((
            format!("{} ≥ 0", c.name()),
            Halfspace::new(a1, a2, a0, Rational::zero()),
        ));
    }
    let mut out = Vec::new();
    for (name, h) in planes {
        let idx: Vec<usize> = (0..vertices.len())
            .filter(|&i| h.is_tight_at(&vertices[i]))
            .collect();
        if idx.len() < dim.max(1) {
            continue;
        }
        out.push((name, cyclic(&vertices, idx, &free)));
    }
    Ok((vertices, out))
}

/// Orders coplanar vertices by angle around their centroid.
fn cyclic(vertices: &[DofPoint], mut idx: Vec<usize>, free: &[Coord]) -> Vec<usize> {
    if idx.len() < 3 || free.len() < 3 {
        return idx;
    }
    let pts: Vec<[f64; 3]> = idx
        .iter()
        .map(|&i| {
            let a = vertices[i].to_array();
            [to_f64(&a[0]), to_f64(&a[1]), to_f64(&a[2])]
        })
        .collect();
    let n = pts.len() as f64;
    let cen = [0, 1, 2].map(|k| pts.iter().map(|p| p[k]).sum::<f64>() / n);
    let sub = |p: &[f64; 3], q: &[f64; 3]| [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let u = sub(&pts[0], &cen);
    let normal = pts
        .iter()
        .map(|p| cross(u, sub(p, &cen)))
        .max_by(|a, b| dot(*a, *a).total_cmp(&dot(*b, *b)))
        .expect("nonempty");
    let w = cross(normal, u);
    let mut keyed: Vec<(f64, usize)> = idx
        .iter()
        .zip(&pts)
        .map(|(&i, p)| {
            let d = sub(p, &cen);
            (dot(d, w).atan2(dot(d, u)), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    idx = keyed.into_iter().map(|(_, i)| i).collect();
    idx
}

fn cmd_plot_data(
    ctx: &Ctx,
    args: &ScenarioArgs,
    slice: Option<&str>,
    out: &PathBuf,
    facets_out: Option<&PathBuf>,
) -> Result<Outcome, CliError> {
    let s = args.parse()?;
    let (region, _) = region_for(s.cfg, s.message_set, s.csit);
    let mut config = scenario_config(&s);
    let sliced = match slice {
        Some(text) => {
            let (c, v) = parse_slice(text)?;
            config["slice"] = json!({"coord": c.name(), "value": ctx.rat(&v)});
            region.slice(c, &v)
        }
        None => region.clone(),
    };
    let free = sliced.free_coords();
    if free.len() != 2 {
        return Err(CliError::Usage(format!(
            "the slice leaves {} free coordinates; plot data needs exactly 2",
            free.len()
        )));
    }
    let polygon = sliced
        .boundary_order()
        .map_err(|e| CliError::Property(e.to_string()))?;
    let mut table = vec![vec![free[0].name().to_string(), free[1].name().to_string()]];
    for p in &polygon {
        table.push(vec![
            rational::format(p.get(free[0])),
            rational::format(p.get(free[1])),
        ]);
    }
    let csv_text = to_csv(&table);
    std::fs::write(out, &csv_text).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let mut result = json!({
        "out": out.display().to_string(),
        "columns": [free[0].name(), free[1].name()],
        "polygon": polygon.iter().map(|p| ctx.point(p)).collect::<Vec<_>>(),
    });
    if let Some(path) = facets_out {
        let (vertices, fs) = facets(&region)?;
        let doc = json!({
            "vertices": vertices.iter().map(|v| ctx.point(v)).collect::<Vec<_>>(),
            "facets": fs.iter().map(|(n, idx)| json!({"plane": n, "vertices": idx})).collect::<Vec<_>>(),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("values serialize");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        result["facets_out"] = json!(path.display().to_string());
        result["facet_count"] = json!(fs.len());
    }
    Ok(Outcome {
        config,
        result,
        table,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(s: &str) -> CliOutput {
        run(std::iter::once("bcdof").chain(s.split_whitespace()))
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args("region 0 1 1 PP pm").code, EXIT_USAGE);
        assert_eq!(run_args("region 2 1 1 XQ pm").code, EXIT_USAGE);
        assert_eq!(
            run_args("simulate 5 4 2 ND dm --corner P --trials 0").code,
            EXIT_USAGE
        );
        assert_eq!(run_args("check 1 2 -- 3 2 1 DD cm").code, EXIT_USAGE);
    }

    #[test]
    fn cited_corner_exits_three() {
        let o = run_args("simulate 3 2 1 DD cm --corner P1");
        assert_eq!(o.code, EXIT_CITED);
        assert!(
            o.stderr.contains("Vaze and Varanasi (2011)"),
            "{}",
            o.stderr
        );
    }

    #[test]
    fn region_json_round_trips() {
        let o = run_args("region 5 3 2 PP cm");
        assert_eq!(o.code, EXIT_OK);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(again, o.stdout);
        assert_eq!(v["result"]["halfspaces"].as_array().unwrap().len(), 3);
        assert_eq!(v["result"]["label"]["status"], "DoF");
    }
}
