//! The `qc` command line: argument parsing and command execution.
//!
//! Every command produces one JSON document on standard output. Failures
//! carry an `"error"` field and exit with status 1; progress notes and
//! per-check lines go to standard error.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    alg_multiply, display_basis, display_coords, display_string, StructureTable, DIM, DISPLAY_LABELS,
};
use crate::error::{Error, Result};
use crate::exactfield::{Rational, Scalar};
use crate::gradings::{
    classify, coarsening_check, compatibility_check, grading_isomorphism, grading_validate, joint_grading,
    lemma_checks, standard_quartic, structurable_s, AbGroup, Family, FamilyParams, Grading, Param,
};
use crate::maps::{
    automorphism_violation, d_param, derivation_space, factor_automorphism, inverse_factors, realize, semidirect_mul,
    AutFactors, DerParams, LinEndo,
};
use crate::verify::run_checks;

#[derive(Parser, Debug)]
#[command(name = "qc", version, about = "Exact computations in the split quartic Cayley algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the multiplication table on the basis 1, s, x_i, s x_i.
    Table {
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Run the self-check suite.
    Verify {
        /// Seed for the randomised checks.
        #[arg(long, env = "QC_SEED", default_value_t = 0)]
        seed: u64,
        /// Zero out the table entry for a pair of canonical basis indices
        /// before checking, e.g. `2,4`.
        #[arg(long, hide = true, value_name = "A,B")]
        corrupt: Option<String>,
    },
    /// Compute the derivation algebra.
    Derivations,
    /// Automorphism tools.
    Aut {
        #[command(subcommand)]
        command: AutCommand,
    },
    /// Grading tools.
    Grading {
        #[command(subcommand)]
        command: GradingCommand,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Markdown,
}

#[derive(Subcommand, Debug)]
pub enum AutCommand {
    /// Decide whether a matrix is an automorphism of (A, -).
    Check { file: String },
    /// Factor an automorphism matrix as (r1, r2, psi, sigma).
    Factor { file: String },
    /// Compose two factor documents: the result realizes first ∘ second.
    Compose { first: String, second: String },
    /// Factors of the inverse automorphism.
    Inverse { file: String },
    /// The matrix of a factor document.
    Realize { file: String },
}

#[derive(Subcommand, Debug)]
pub enum GradingCommand {
    /// Build a member of one of the eight families.
    Make(MakeArgs),
    /// Check a grading document and the structural lemmas.
    Validate { file: String },
    /// Identify the family of a grading, with parameters and a witness.
    Classify { file: String },
    /// Search for a degree-preserving isomorphism from the first grading
    /// onto the second.
    Compare { first: String, second: String },
    /// Decide whether the first grading is a coarsening of the second.
    Coarsen { coarse: String, fine: String },
    /// Decide compatibility and print the joint grading when it exists.
    Joint { first: String, second: String },
    /// Push a grading forward along a group homomorphism.
    Push {
        file: String,
        #[arg(long)]
        group: String,
        /// Images of the coordinate generators of the source group.
        #[arg(long, num_args = 1.., required = true)]
        images: Vec<String>,
    },
    /// Print a standard grading.
    Standard {
        #[arg(value_enum)]
        which: StandardGrading,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StandardGrading {
    Quartic,
    S1,
    S2,
    S3,
}

#[derive(Args, Debug)]
pub struct MakeArgs {
    /// SQ1, SQ2, S3family, S1family, S2family, S3prime, T1 or T2.
    pub family: String,
    /// Group such as Z2xZ4, Z^2 or Z3^2.
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long)]
    pub g1: Option<String>,
    #[arg(long)]
    pub g2: Option<String>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub f: Option<String>,
    /// Rational such as 2 or -1/3, or a JSON array of four coefficients.
    #[arg(long)]
    pub lambda: Option<String>,
}

/// Outcome of a command.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub ok: bool,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    fn success(payload: Value) -> Self {
        CommandResult { ok: true, payload, diagnostics: Vec::new() }
    }

    fn failure(err: &Error) -> Self {
        let msg = err.to_string();
        CommandResult { ok: false, payload: json!({ "error": msg }), diagnostics: vec![msg] }
    }

    /// The text written to standard output.
    pub fn stdout(&self) -> String {
        match &self.payload {
            Value::String(s) => s.clone(),
            v => serde_json::to_string_pretty(v).expect("JSON values serialize"),
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.ok {
            0
        } else {
            1
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("documents serialize")
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn load<T: DeserializeOwned>(path: &str) -> Result<T> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if s.starts_with('[') {
        return serde_json::from_str(s).map_err(|e| Error::Parse(format!("scalar {s:?}: {e}")));
    }
    s.parse::<Rational>()
        .map(Scalar::from_rational)
        .map_err(|_| Error::Parse(format!("scalar {s:?}: expected p or p/q")))
}

fn cmd_table(format: TableFormat) -> CommandResult {
    let products: Vec<Vec<_>> =
        (0..DIM).map(|a| (0..DIM).map(|b| alg_multiply(&display_basis(a), &display_basis(b))).collect()).collect();
    match format {
        TableFormat::Json => {
            let entries: Vec<Value> = (0..DIM)
                .flat_map(|a| (0..DIM).map(move |b| (a, b)))
                .map(|(a, b)| {
                    let p = &products[a][b];
                    json!({
                        "left": DISPLAY_LABELS[a],
                        "right": DISPLAY_LABELS[b],
                        "product": display_string(p),
                        "coords": display_coords(p),
                    })
                })
                .collect();
            CommandResult::success(json!({ "basis": DISPLAY_LABELS, "entries": entries }))
        }
        TableFormat::Markdown => {
            let mut out = format!("| · | {} |\n", DISPLAY_LABELS.join(" | "));
            out.push_str(&format!("|---|{}\n", "---|".repeat(DIM)));
            for (a, row) in products.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(display_string).collect();
                out.push_str(&format!("| **{}** | {} |\n", DISPLAY_LABELS[a], cells.join(" | ")));
            }
            CommandResult::success(Value::String(out))
        }
    }
}

fn cmd_verify(seed: u64, corrupt: Option<&str>) -> Result<CommandResult> {
    let mut table = StructureTable::standard();
    if let Some(pair) = corrupt {
        let idx: Vec<usize> = pair
            .split(',')
            .map(|p| p.trim().parse::<usize>().ok().filter(|&i| i < DIM))
            .collect::<Option<_>>()
            .filter(|v: &Vec<usize>| v.len() == 2)
            .ok_or_else(|| Error::InvalidArgument(format!("corrupt expects two indices below {DIM}, got {pair:?}")))?;
        table.set_entry(idx[0], idx[1], vec![Scalar::zero(); DIM])?;
    }
    let checks = run_checks(&table, seed);
    let mut diagnostics = Vec::new();
    for c in &checks {
        let line = match &c.detail {
            None => format!("PASS {}", c.name),
            Some(d) => format!("FAIL {}: {d}", c.name),
        };
        diagnostics.push(line);
    }
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail.as_deref().unwrap_or("failed")))
        .collect();
    let passed = checks.len() - failed.len();
    let mut payload = json!({
        "ok": failed.is_empty(),
        "seed": seed,
        "passed": passed,
        "total": checks.len(),
        "checks": checks,
    });
    if !failed.is_empty() {
        payload["error"] = Value::String(failed.join("; "));
    }
    Ok(CommandResult { ok: failed.is_empty(), payload, diagnostics })
}

fn cmd_derivations() -> CommandResult {
    let space = derivation_space();
    let basis: Vec<LinEndo> =
        space.basis_vectors().into_iter().map(|v| LinEndo::from_vec(v).expect("64 entries")).collect();
    let d10 = d_param(&DerParams::from_ints(1, 0));
    let d01 = d_param(&DerParams::from_ints(0, 1));
    let contains = space.contains(&d10.to_vec()).unwrap_or(false) && space.contains(&d01.to_vec()).unwrap_or(false);
    let abelian = basis.iter().all(|a| basis.iter().all(|b| a.bracket(b).is_zero()));
    CommandResult::success(json!({
        "dimension": space.dim(),
        "basis": basis,
        "d_1_0": d10,
        "d_0_1": d01,
        "spanned_by_parametrised": contains && space.dim() == 2,
        "abelian": abelian,
    }))
}

fn cmd_aut(cmd: &AutCommand) -> Result<CommandResult> {
    Ok(CommandResult::success(match cmd {
        AutCommand::Check { file } => {
            let phi: LinEndo = load(file)?;
            let why = automorphism_violation(&phi);
            json!({ "automorphism": why.is_none(), "violation": why })
        }
        AutCommand::Factor { file } => to_value(&factor_automorphism(&load(file)?)?),
        AutCommand::Compose { first, second } => {
            let a: AutFactors = load(first)?;
            let b: AutFactors = load(second)?;
            a.validate()?;
            b.validate()?;
            to_value(&semidirect_mul(&a, &b))
        }
        AutCommand::Inverse { file } => {
            let a: AutFactors = load(file)?;
            a.validate()?;
            to_value(&inverse_factors(&a))
        }
        AutCommand::Realize { file } => to_value(&realize(&load(file)?)?),
    }))
}

fn make_params(args: &MakeArgs) -> Result<(AbGroup, FamilyParams)> {
    let family: Family = args.family.parse()?;
    let group = AbGroup::parse(&args.group)?;
    let flags: BTreeMap<&str, &Option<String>> =
        [("g", &args.g), ("g1", &args.g1), ("g2", &args.g2), ("h", &args.h), ("f", &args.f)].into_iter().collect();
    let mut params = Vec::new();
    for &name in family.param_names() {
        if name == "lambda" {
            let l = args.lambda.as_deref().map(parse_scalar).transpose()?.unwrap_or_else(Scalar::one);
            params.push(Param::Scalar(l));
            continue;
        }
        let raw = flags[name].as_deref().ok_or_else(|| Error::InvalidArgument(format!("{family} needs --{name}")))?;
        params.push(Param::Elem(group.parse_elem(raw)?));
    }
    for (name, v) in &flags {
        if v.is_some() && !family.param_names().contains(name) {
            return Err(Error::InvalidArgument(format!("{family} takes no --{name}")));
        }
    }
    if args.lambda.is_some() && !family.param_names().contains(&"lambda") {
        return Err(Error::InvalidArgument(format!("{family} takes no --lambda")));
    }
    Ok((group, FamilyParams::from_params(family, &params)?))
}

fn cmd_grading(cmd: &GradingCommand) -> Result<CommandResult> {
    Ok(match cmd {
        GradingCommand::Make(args) => {
            let (group, params) = make_params(args)?;
            CommandResult::success(to_value(&params.build(&group)?))
        }
        GradingCommand::Validate { file } => {
            let g: Grading = load(file)?;
            let report = grading_validate(&g);
            let lemmas: Vec<Value> = if report.valid {
                lemma_checks(&g).into_iter().map(|(name, ok)| json!({ "name": name, "passed": ok })).collect()
            } else {
                Vec::new()
            };
            let mut payload = json!({ "valid": report.valid, "diagnostics": report.diagnostics, "lemmas": lemmas });
            if !report.valid {
                payload["error"] = Value::String(format!("not a grading: {}", report.diagnostics.join("; ")));
            }
            CommandResult { ok: report.valid, payload, diagnostics: report.diagnostics }
        }
        GradingCommand::Classify { file } => CommandResult::success(to_value(&classify(&load(file)?)?)),
        GradingCommand::Compare { first, second } => {
            let a: Grading = load(first)?;
            let b: Grading = load(second)?;
            let w = grading_isomorphism(&a, &b)?;
            CommandResult::success(json!({ "isomorphic": w.is_some(), "witness": w }))
        }
        GradingCommand::Coarsen { coarse, fine } => {
            let c: Grading = load(coarse)?;
            let f: Grading = load(fine)?;
            CommandResult::success(json!({ "coarsening": coarsening_check(&c, &f) }))
        }
        GradingCommand::Joint { first, second } => {
            let a: Grading = load(first)?;
            let b: Grading = load(second)?;
            let joint = compatibility_check(&a, &b).then(|| joint_grading(&a, &b)).transpose()?;
            CommandResult::success(json!({ "compatible": joint.is_some(), "joint": joint }))
        }
        GradingCommand::Push { file, group, images } => {
            let g: Grading = load(file)?;
            let target = AbGroup::parse(group)?;
            let imgs = images.iter().map(|s| target.parse_elem(s)).collect::<Result<Vec<_>>>()?;
            CommandResult::success(to_value(&g.push_forward(&target, &imgs)?))
        }
        GradingCommand::Standard { which } => CommandResult::success(to_value(&match which {
            StandardGrading::Quartic => standard_quartic(),
            StandardGrading::S1 => structurable_s(1)?,
            StandardGrading::S2 => structurable_s(2)?,
            StandardGrading::S3 => structurable_s(3)?,
        })),
    })
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> CommandResult {
    let result = match &cli.command {
        Command::Table { format } => Ok(cmd_table(*format)),
        Command::Verify { seed, corrupt } => cmd_verify(*seed, corrupt.as_deref()),
        Command::Derivations => Ok(cmd_derivations()),
        Command::Aut { command } => cmd_aut(command),
        Command::Grading { command } => cmd_grading(command),
    };
    result.unwrap_or_else(|e| CommandResult::failure(&e))
}

/// Parses `args` (including the program name), runs the command, prints
/// the result and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprint!("{msg}");
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            println!("{}", json!({ "error": first }));
            return ExitCode::from(1);
        }
    };
    let result = execute(&cli);
    let mut err = std::io::stderr().lock();
    for d in &result.diagnostics {
        let _ = writeln!(err, "{d}");
    }
    // A closed pipe downstream is not worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{}", result.stdout());
    ExitCode::from(result.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandResult {
        let cli = Cli::try_parse_from(std::iter::once("qc").chain(args.iter().copied())).unwrap();
        execute(&cli)
    }

    #[test]
    fn table_entry_x1_x2() {
        let r = run(&["table"]);
        let entries = r.payload["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 64);
        let e = entries.iter().find(|e| e["left"] == "x1" && e["right"] == "x2").unwrap();
        assert_eq!(e["product"], "x3");
    }

    #[test]
    fn markdown_row_for_s() {
        let md = run(&["table", "--format", "markdown"]).stdout();
        let row = md.lines().find(|l| l.starts_with("| **s**")).unwrap();
        let cells: Vec<&str> = row.split('|').map(str::trim).collect();
        assert_eq!(cells[3], "1");
    }

    #[test]
    fn make_reports_constraint() {
        let r = run(&["grading", "make", "S2family", "--group", "Z2xZ4", "--h", "10", "--g", "02"]);
        assert!(!r.ok);
        assert!(r.payload["error"].as_str().unwrap().contains("order 4"));
    }

    #[test]
    fn make_rejects_foreign_flags() {
        let r = run(&["grading", "make", "T2", "--group", "Z2xZ3", "--h", "10", "--g", "01", "--g1", "01"]);
        assert!(!r.ok);
    }

    #[test]
    fn scalars_parse() {
        assert_eq!(parse_scalar("-1/3").unwrap(), Scalar::from_frac(-1, 3));
        assert_eq!(parse_scalar(r#"["0","1","0","0"]"#).unwrap(), crate::exactfield::zeta_power(1));
        assert!(parse_scalar("x").is_err());
    }
}
