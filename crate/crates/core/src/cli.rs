//! The `picmod` command line. [`run`] never exits the process; it returns
//! the exit code: 0 on success, 1 on a domain error, 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::finite_descent::{
    descent_at_power, descent_bruteforce, form_power, upper_triangular_cocycle, weil_form,
    AlternatingForm,
};
use crate::lie_core::{Family, RootSystem};
use crate::oracles::{
    embedding_from_basis, f4_branching_constant, g2_parity_oracle, gcd_grid, hecke_report,
    quadratic_refinement, restriction_report, rho_p_sum_report, verify_descent_dichotomy,
    verify_gcd_generator, DEFAULT_SEED,
};
use crate::picard_tables::{
    classify, components, descent_form_for, DegreeLabel, GroupSpec, PicardReport,
};
use crate::rep_algebra::{
    center_character_with_cap, dimension_with_cap, dynkin_index_with_cap, RepError, RepExpr,
    DEFAULT_MAX_DIM,
};

pub const MAX_DIM_ENV: &str = "PICMOD_MAX_DIM";

const MAX_RANK: u64 = 64;
const MAX_GENUS: u64 = 64;
const MAX_ORDER: u64 = 1_000_000;
const MAX_PARAM: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "picmod",
    version,
    about = "Picard groups of moduli of G-bundles on curves"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest representation dimension to expand into weights. Overrides
    /// the PICMOD_MAX_DIM environment variable.
    #[arg(long, global = true)]
    max_dim: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Picard groups of the moduli stack and coarse space of one component.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        /// Component label; defaults to the component of the trivial bundle.
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<String>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(..=MAX_GENUS))]
        genus: u64,
    },
    /// Dynkin index of a representation.
    Index(RepArgs),
    /// Dimension of a representation.
    Dim(RepArgs),
    /// Whether a power of a theta-type bundle descends along a finite
    /// Heisenberg action.
    Descent(DescentArgs),
    /// Brute-force cross-checks.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Connected components, labelled by the fundamental group.
    Components {
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// Group family: SL, PGL, SLmod, Sp, PSp, Spin, SO, PSO, HalfSpin, G2.
    #[arg(long)]
    group: String,
    /// Comma separated parameters, e.g. "6,3" for SLmod.
    #[arg(long, value_parser = parse_list)]
    param: Option<List>,
}

impl GroupArgs {
    fn spec(&self) -> Result<GroupSpec, CliError> {
        GroupSpec::from_name(&self.group, self.param.as_ref().map_or(&[][..], |l| &l.0))
            .map_err(|e| CliError::domain(e.name(), e))
    }
}

#[derive(Debug, Args)]
struct RepArgs {
    /// Root system family: A, B, C, D, G2.
    #[arg(long)]
    family: Family,
    #[arg(long, value_parser = clap::value_parser!(u64).range(..=MAX_RANK))]
    rank: u64,
    /// Representation, e.g. "sym(2,std)*ext(5,std)".
    #[arg(long)]
    rep: RepExpr,
}

#[derive(Debug, Args)]
struct DescentArgs {
    /// Weil pairing on (Z/r)^{2g}, given as `r=R genus=G`.
    #[arg(long, num_args = 1..=2, value_names = ["r=R", "genus=G"], conflicts_with = "group")]
    weil: Option<Vec<String>>,
    /// Raise the form to this power.
    #[arg(
        long,
        default_value_t = 1,
        allow_hyphen_values = true,
        requires = "weil"
    )]
    power_of_form: i64,
    /// Use the form attached to a group of type SL_r/μ_s, PSp or PSO.
    #[arg(long, requires = "genus")]
    group: Option<String>,
    #[arg(long, value_parser = parse_list, requires = "group")]
    param: Option<List>,
    #[arg(long, allow_hyphen_values = true, requires = "group")]
    degree: Option<String>,
    #[arg(long, requires = "group", value_parser = clap::value_parser!(u64).range(..=MAX_GENUS))]
    genus: Option<u64>,
    /// The power r of the bundle; defaults to the exponent of the group.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_ORDER))]
    at: Option<u64>,
    /// Also decide descent by enumerating the Heisenberg group.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Criterion against brute force on the grid of small groups.
    Dichotomy {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// gcd of witness Dynkin indices against the table; the whole grid if
    /// no group is given.
    Gcd {
        #[arg(long, requires = "param")]
        group: Option<String>,
        #[arg(long, value_parser = parse_list, requires = "group")]
        param: Option<List>,
    },
    /// Weil pairing restricted to s-torsion against a power of the smaller
    /// Weil pairing.
    Restrict {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_ORDER))]
        r: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_ORDER))]
        s: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=MAX_GENUS))]
        genus: u64,
    },
    /// Sign by which a cyclic covering automorphism acts on the canonical
    /// bundle, and whether that bundle descends.
    Hecke {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_ORDER))]
        r: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_ORDER))]
        s: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(..=MAX_ORDER))]
        h: u64,
    },
    /// Indices of S^p ⊗ Λ^{s−p} for SL_r.
    RhoP {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
    },
    /// Parity of a theta characteristic against isotropy of a subgroup.
    Parity {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Images of the basis of (F2)^3, as integers whose bits are coordinates.
        #[arg(long, value_parser = parse_list)]
        basis: List,
        /// Linear part of the quadratic refinement, as a bit mask.
        #[arg(long, default_value_t = 0, conflicts_with = "q")]
        linear: u64,
        /// Quadratic refinement as a string of 2^{2g} bits.
        #[arg(long)]
        q: Option<String>,
        /// Nonzero character of (F2)^3, as a bit mask.
        #[arg(long)]
        chi: u8,
    },
    /// Index of the F4 representation restricted to Spin8.
    F4,
}

/// A comma separated list of integers.
#[derive(Debug, Clone, PartialEq, Eq)]
struct List(Vec<u64>);

fn parse_list(text: &str) -> Result<List, String> {
    text.split(',')
        .map(|p| match p.trim().parse::<u64>() {
            Ok(n) if n <= MAX_PARAM => Ok(n),
            Ok(n) => Err(format!(
                "{n} exceeds the largest supported value {MAX_PARAM}"
            )),
            Err(_) => Err(format!("{:?} is not a nonnegative integer", p.trim())),
        })
        .collect::<Result<_, _>>()
        .map(List)
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain { name: &'static str, message: String },
}

impl CliError {
    fn domain(name: &'static str, message: impl ToString) -> Self {
        CliError::Domain {
            name,
            message: message.to_string(),
        }
    }
}

/// Result of a command: the JSON document and its text rendering.
struct Output {
    json: serde_json::Value,
    text: String,
}

impl Output {
    fn new(value: &impl Serialize, text: String) -> Self {
        Output {
            json: serde_json::to_value(value).expect("reports serialize"),
            text,
        }
    }
}

/// Runs the command line with `PICMOD_MAX_DIM` read from the environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(MAX_DIM_ENV).ok();
    run_with_env(args, env.as_deref(), out, err)
}

/// Like [`run`], with the value of `PICMOD_MAX_DIM` passed explicitly.
pub fn run_with_env<I, T>(
    args: I,
    max_dim_env: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    let result = max_dim(cli.max_dim, max_dim_env).and_then(|cap| dispatch(&cli.command, cap));
    match result {
        Ok(output) => {
            let body = match cli.format {
                Format::Json => to_canonical_json(&output.json),
                Format::Text => output.text,
            };
            let _ = writeln!(out, "{}", body.trim_end());
            0
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Domain { name, message }) => {
            let _ = writeln!(err, "error: {name}: {message}");
            1
        }
    }
}

/// Pretty printed JSON with object keys in sorted order.
pub fn to_canonical_json(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("values serialize")
}

fn max_dim(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(cap), _) => Ok(cap),
        (None, Some(text)) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{MAX_DIM_ENV}={text:?} is not a nonnegative integer"
            ))
        }),
        (None, None) => Ok(DEFAULT_MAX_DIM),
    }
}

fn dispatch(command: &Command, cap: u64) -> Result<Output, CliError> {
    match command {
        Command::Classify {
            group,
            degree,
            genus,
        } => {
            let spec = group.spec()?;
            let degree = match degree {
                Some(d) => {
                    DegreeLabel::parse(&spec, d).map_err(|e| CliError::domain(e.name(), e))?
                }
                None => DegreeLabel::identity(&spec),
            };
            let report =
                classify(&spec, &degree, *genus).map_err(|e| CliError::domain(e.name(), e))?;
            let text = classify_text(&report);
            Ok(Output::new(&report, text))
        }
        Command::Index(args) => rep_command(args, cap, true),
        Command::Dim(args) => rep_command(args, cap, false),
        Command::Descent(args) => descent_command(args),
        Command::Oracle { which } => oracle_command(which),
        Command::Components { group } => {
            let spec = group.spec()?;
            let labels = components(&spec).map_err(|e| CliError::domain(e.name(), e))?;
            let text = format!("[{}]", join(&labels, ", "));
            Ok(Output::new(
                &serde_json::json!({ "group": spec, "components": labels }),
                text,
            ))
        }
    }
}

fn join<T: std::fmt::Display>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn classify_text(report: &PicardReport) -> String {
    let opt = |u: &Option<crate::picard_tables::Unit>| u.map_or("-".to_string(), |u| u.to_string());
    let torsion = if report.stack.torsion_invariants.is_empty() {
        "0".to_string()
    } else {
        report
            .stack
            .torsion_invariants
            .iter()
            .map(|n| format!("Z/{n}"))
            .collect::<Vec<_>>()
            .join(" x ")
    };
    let structure = serde_json::to_value(report.coarse.structure).expect("serializes");
    let caveats: Vec<String> = report
        .caveats
        .iter()
        .map(|c| {
            serde_json::to_value(c)
                .expect("serializes")
                .as_str()
                .unwrap_or_default()
                .to_string()
        })
        .collect();
    let mut s = String::new();
    let _ = writeln!(s, "group: {}", report.group);
    let _ = writeln!(s, "degree: {}", report.degree);
    let _ = writeln!(s, "genus: {}", report.genus);
    let _ = writeln!(s, "components: {}", join(&report.components, ", "));
    let _ = writeln!(s, "stack torsion: {torsion}");
    let _ = writeln!(
        s,
        "stack det generator exponent: {}",
        report.stack.det_generator_exponent
    );
    let _ = writeln!(
        s,
        "coarse structure: {}",
        structure.as_str().unwrap_or_default()
    );
    let _ = writeln!(
        s,
        "coarse theta unit exponent: {}",
        opt(&report.coarse.theta_unit_exponent)
    );
    let _ = writeln!(
        s,
        "coarse det unit exponent: {}",
        opt(&report.coarse.det_unit_exponent)
    );
    if !caveats.is_empty() {
        let _ = writeln!(s, "caveats: {}", caveats.join(", "));
    }
    for note in report.stack.notes.iter().chain(&report.coarse.notes) {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

fn rep_command(args: &RepArgs, cap: u64, index: bool) -> Result<Output, CliError> {
    let rs = RootSystem::new(args.family, args.rank as usize)
        .map_err(|e| CliError::domain(e.name(), e))?;
    let rep_err = |e: RepError| CliError::domain(e.name(), e);
    let mut json = serde_json::json!({
        "family": args.family,
        "rank": args.rank,
        "rep": args.rep.to_string(),
    });
    let text = if index {
        let d = dynkin_index_with_cap(&rs, &args.rep, cap).map_err(rep_err)?;
        json["index"] = d.into();
        d.to_string()
    } else {
        let d = dimension_with_cap(&rs, &args.rep, cap).map_err(rep_err)?;
        let d = u64::try_from(d).expect("bounded by the cap");
        json["dim"] = d.into();
        let center = match center_character_with_cap(&rs, &args.rep, cap) {
            Ok(ch) => serde_json::to_value(ch).expect("serializes"),
            Err(RepError::NotIsotypic(_)) => serde_json::Value::Null,
            Err(e) => return Err(rep_err(e)),
        };
        json["center_character"] = center;
        d.to_string()
    };
    Ok(Output { json, text })
}

#[derive(Serialize)]
struct DescentOutput {
    form: AlternatingForm,
    r: u64,
    descends_at_r: bool,
    descends_at_2r: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    bruteforce_at_r: Option<bool>,
}

fn parse_weil(values: &[String]) -> Result<(u64, usize), CliError> {
    let usage = |msg: String| CliError::Usage(format!("invalid value for '--weil': {msg}"));
    let mut r = None;
    let mut genus = None;
    for v in values {
        let (key, val) = v
            .split_once('=')
            .ok_or_else(|| usage(format!("expected key=value, got {v:?}")))?;
        let n: u64 = val
            .parse()
            .map_err(|_| usage(format!("{val:?} is not a nonnegative integer")))?;
        match key {
            "r" => r = Some(n),
            "genus" | "g" => genus = Some(n as usize),
            _ => return Err(usage(format!("unknown key {key:?}, expected r or genus"))),
        }
    }
    let r = r.ok_or_else(|| usage("missing r=R".into()))?;
    if !(1..=MAX_ORDER).contains(&r) {
        return Err(usage(format!("r must lie in 1..={MAX_ORDER}")));
    }
    let genus = genus.unwrap_or(1);
    if genus as u64 > MAX_GENUS {
        return Err(usage(format!("genus must be at most {MAX_GENUS}")));
    }
    Ok((r, genus))
}

fn descent_command(args: &DescentArgs) -> Result<Output, CliError> {
    let (form, default_r) = match (&args.weil, &args.group) {
        (Some(weil), None) => {
            let (r, genus) = parse_weil(weil)?;
            (form_power(&weil_form(r, genus), args.power_of_form), r)
        }
        (None, Some(name)) => {
            let spec = GroupArgs {
                group: name.clone(),
                param: args.param.clone(),
            }
            .spec()?;
            let degree = match &args.degree {
                Some(d) => {
                    DegreeLabel::parse(&spec, d).map_err(|e| CliError::domain(e.name(), e))?
                }
                None => DegreeLabel::identity(&spec),
            };
            let genus = args.genus.expect("required by clap");
            let df = descent_form_for(&spec, &degree, genus)
                .map_err(|e| CliError::domain(e.name(), e))?;
            (df.form, df.exponent)
        }
        _ => {
            return Err(CliError::Usage(
                "one of '--weil' or '--group' is required".into(),
            ))
        }
    };
    let r = args.at.unwrap_or(default_r);
    let record = descent_at_power(&form, r).map_err(|e| CliError::domain(e.name(), e))?;
    let bruteforce_at_r = if args.check {
        Some(
            descent_bruteforce(&upper_triangular_cocycle(&form), r)
                .map_err(|e| CliError::domain(e.name(), e))?,
        )
    } else {
        None
    };
    let mut text = format!(
        "descends_at_r: {}\ndescends_at_2r: {}",
        record.descends_at_r, record.descends_at_2r
    );
    if let Some(b) = bruteforce_at_r {
        let _ = write!(text, "\nbruteforce_at_r: {b}");
    }
    Ok(Output::new(
        &DescentOutput {
            form,
            r,
            descends_at_r: record.descends_at_r,
            descends_at_2r: record.descends_at_2r,
            bruteforce_at_r,
        },
        text,
    ))
}

fn oracle_command(which: &OracleCommand) -> Result<Output, CliError> {
    let oracle_err = |e: crate::oracles::OracleError| CliError::domain(e.name(), e);
    match which {
        OracleCommand::Dichotomy { seed } => {
            let report = verify_descent_dichotomy(*seed);
            let text = format!(
                "cases: {}\ncocycles per case: {}\nmismatches: {}",
                report.cases,
                report.cocycles_per_case,
                report.failures.len()
            );
            Ok(Output::new(&report, text))
        }
        OracleCommand::Gcd { group, param } => {
            let specs = match group {
                Some(name) => vec![GroupArgs {
                    group: name.clone(),
                    param: param.clone(),
                }
                .spec()?],
                None => gcd_grid(),
            };
            let reports = specs
                .iter()
                .map(verify_gcd_generator)
                .collect::<Result<Vec<_>, _>>()
                .map_err(oracle_err)?;
            let mut text = String::new();
            for r in &reports {
                let witnesses: Vec<String> = r
                    .witnesses
                    .iter()
                    .map(|w| {
                        format!(
                            "{}={}{}",
                            w.rep,
                            w.index,
                            if w.factors { "" } else { " (dropped)" }
                        )
                    })
                    .collect();
                let _ = writeln!(
                    text,
                    "{}: gcd {} / {} = {}; table {}; {}",
                    r.group,
                    r.gcd,
                    r.standard_index,
                    r.e_g,
                    r.table_det_unit,
                    witnesses.join(", ")
                );
            }
            if reports.len() == 1 {
                Ok(Output::new(&reports[0], text))
            } else {
                Ok(Output::new(&reports, text))
            }
        }
        OracleCommand::Restrict { r, s, genus } => {
            let report = restriction_report(*r, *s, *genus as usize).map_err(oracle_err)?;
            let text = format!(
                "restriction: {}\nexpected: {}\nequal: {}",
                report.restriction, report.expected, report.equal
            );
            Ok(Output::new(&report, text))
        }
        OracleCommand::Hecke { r, s, h } => {
            let report = hecke_report(*r, *s, *h).map_err(oracle_err)?;
            let text = format!(
                "det_character: {}\ncanonical_descends: {}",
                report.det_character, report.canonical_descends
            );
            Ok(Output::new(&report, text))
        }
        OracleCommand::RhoP { r, s } => {
            let report = rho_p_sum_report(*r, *s).map_err(oracle_err)?;
            let text = format!(
                "indices: {}\nweighted sum: {}\ngcd: {} divides {}: {}",
                join(&report.indices, ", "),
                report.weighted_sum,
                report.gcd,
                report.bound,
                report.gcd_divides_bound
            );
            Ok(Output::new(&report, text))
        }
        OracleCommand::Parity {
            genus,
            basis,
            linear,
            q,
            chi,
        } => {
            let basis: [u64; 3] = basis
                .0
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage("'--basis' takes exactly three values".into()))?;
            if *genus == 0 || *genus > 4 {
                return Err(CliError::Usage("'--genus' must be between 1 and 4".into()));
            }
            let q = match q {
                Some(bits) => bits
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(CliError::Usage(format!(
                            "'--q' takes a string of 0 and 1, found {c:?}"
                        ))),
                    })
                    .collect::<Result<Vec<u8>, _>>()?,
                None => quadratic_refinement(*genus, *linear),
            };
            let report = g2_parity_oracle(*genus, &embedding_from_basis(basis), &q, *chi)
                .map_err(oracle_err)?;
            let text = format!("parity: {}\nisotropic: {}", report.parity, report.isotropic);
            Ok(Output::new(&report, text))
        }
        OracleCommand::F4 => {
            let report = f4_branching_constant().map_err(oracle_err)?;
            let text = report.constant.to_string();
            Ok(Output::new(&report, text))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_env(
            std::iter::once("picmod").chain(args.iter().copied()),
            None,
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn parses_lists() {
        assert_eq!(parse_list("6, 3"), Ok(List(vec![6, 3])));
        assert!(parse_list("6,x").is_err());
    }

    #[test]
    fn weil_arguments() {
        assert_eq!(
            parse_weil(&["r=2".into(), "genus=3".into()]).unwrap(),
            (2, 3)
        );
        assert_eq!(parse_weil(&["r=5".into()]).unwrap(), (5, 1));
        assert!(parse_weil(&["genus=2".into()]).is_err());
        assert!(parse_weil(&["r2".into()]).is_err());
        assert!(parse_weil(&["r=0".into()]).is_err());
    }

    #[test]
    fn max_dim_precedence() {
        assert_eq!(max_dim(Some(5), Some("7")).unwrap(), 5);
        assert_eq!(max_dim(None, Some("7")).unwrap(), 7);
        assert_eq!(max_dim(None, None).unwrap(), DEFAULT_MAX_DIM);
        assert!(matches!(max_dim(None, Some("x")), Err(CliError::Usage(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            call(&["index", "--family", "A", "--rank", "1", "--rep", "adj"]).0,
            0
        );
        let (code, _, err) = call(&["index", "--family", "A", "--rank", "1", "--bogus", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("--bogus"));
        let (code, _, err) = call(&[
            "classify", "--group", "PGL", "--param", "4", "--degree", "9x",
        ]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: InvalidDegree"));
        assert_eq!(call(&["--help"]).0, 0);
    }
}
