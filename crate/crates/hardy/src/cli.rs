//! The `hardy` command line.
//!
//! Exit codes: 0 decisive, 2 inconclusive, 64 usage error, 1 computational
//! failure (or a failed check).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_core::criteria::{
    AlphaGrid, Conclusion, CriterionResult, HarmProfile, LevelProfile, MembershipAnalysis, VerdictOptions,
    HARM_GRID_DEFAULT,
};
use hardy_core::fit::Convergence;
use hardy_core::hmeasure::{WoSConfig, DEFAULT_EPSILON, DEFAULT_SEED, DEFAULT_WALKERS};
use hardy_core::levelset::dist_to_levelset;
use hardy_core::maps::catalog_entries;
use hardy_core::{green_identity_check, ConformalMap, Error};
use serde_json::{json, Value};

use crate::config::{grid_json, Format, RunConfig};
use crate::exec::Rayon;
use crate::output::{csv_trailer, json_document, num, opt_num, sig9, Csv};

pub const EXIT_DECISIVE: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Tolerance of `greens-check`.
pub const GREEN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "hardy", version, about = "Hardy-space membership checks for conformal maps of the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare the two Green-function formulas on random pairs of points.
    GreensCheck {
        /// Number of pairs.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Hyperbolic distance from 0 to the level set |ψ| = α.
    Distance {
        #[arg(long)]
        map: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Hardy number from the decay of exp(-d(0, F_α)).
    HardyNumber {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Per-α table of exp(-d), the harmonic measure and both integrands.
    Criteria {
        #[arg(long)]
        map: String,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        /// Criteria to evaluate.
        #[arg(long, value_delimiter = ',', default_value = "hyp,harm")]
        criteria: Vec<Which>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        wos: WosArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Combined membership verdict with the evidence of every criterion.
    Verify {
        #[arg(long)]
        map: String,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        /// Leave out the harmonic-measure criterion.
        #[arg(long)]
        no_harm: bool,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        wos: WosArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// List the catalog maps.
    Catalog {
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Hyp,
    Harm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output format; the command picks csv or json by default.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = AlphaGrid::default().alpha_min)]
    alpha_min: f64,
    #[arg(long, default_value_t = AlphaGrid::default().alpha_max)]
    alpha_max: f64,
    #[arg(long, default_value_t = AlphaGrid::default().points_per_decade)]
    per_decade: usize,
}

#[derive(Debug, Args)]
struct WosArgs {
    #[arg(long, default_value_t = DEFAULT_WALKERS)]
    walkers: u64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = Result<(String, i32), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn parse_map(s: &str) -> Result<ConformalMap, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn positive(name: &str, x: f64) -> Result<f64, Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        usage(format!("--{name} must be a positive finite number, got {x}"))
    }
}

impl OutArgs {
    fn resolve(&self, default: Format) -> (Format, Option<PathBuf>) {
        let f = match self.format {
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Json) => Format::Json,
            None => default,
        };
        (f, self.out.clone())
    }
}

impl GridArgs {
    fn resolve(&self) -> Result<AlphaGrid, Failure> {
        AlphaGrid::new(self.alpha_min, self.alpha_max, self.per_decade).map_err(|e| Failure::Usage(e.to_string()))
    }
}

impl WosArgs {
    fn resolve(&self) -> Result<WoSConfig, Failure> {
        let cfg = WoSConfig { n_walkers: self.walkers, epsilon: self.epsilon, seed: self.seed, ..Default::default() };
        cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn exit_for(c: Conclusion) -> i32 {
    match c {
        Conclusion::Inconclusive => EXIT_INCONCLUSIVE,
        _ => EXIT_DECISIVE,
    }
}

/// Parse `args` (program name first), run, and write the artifact. Returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_DECISIVE };
        }
    };
    let out = match &cli.command {
        Command::GreensCheck { out, .. }
        | Command::Distance { out, .. }
        | Command::HardyNumber { out, .. }
        | Command::Criteria { out, .. }
        | Command::Verify { out, .. }
        | Command::Catalog { out } => out.out.clone(),
    };
    match dispatch(cli.command) {
        Ok((text, code)) => match write_artifact(out, &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                EXIT_FAILURE
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn write_artifact(path: Option<PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn executor() -> Result<Rayon, Failure> {
    Rayon::from_env().map_err(Failure::Usage)
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::GreensCheck { n, seed, out } => greens_check(n, seed, &out),
        Command::Distance { map, alpha, out } => distance(&map, alpha, &out),
        Command::HardyNumber { map, grid, out } => hardy_number(&map, &grid, &out),
        Command::Criteria { map, p, criteria, grid, wos, out } => criteria_table(&map, p, &criteria, &grid, &wos, &out),
        Command::Verify { map, p, no_harm, grid, wos, out } => verify(&map, p, no_harm, &grid, &wos, &out),
        Command::Catalog { out } => catalog(&out),
    }
}

fn greens_check(n: usize, seed: u64, out: &OutArgs) -> Outcome {
    if n == 0 {
        return usage("--n must be at least 1");
    }
    let (format, path) = out.resolve(Format::Json);
    let mut cfg = RunConfig::new("greens-check", format, path);
    cfg.n_pairs = Some(n);
    cfg.seed = Some(seed);
    let c = green_identity_check(n, seed)?;
    let pass = c.max_relative_deviation <= GREEN_TOLERANCE;
    let code = if pass { EXIT_DECISIVE } else { EXIT_FAILURE };
    let text = match format {
        Format::Json => json_document(
            cfg.to_json(),
            json!({
                "n": n,
                "seed": seed,
                "max_relative_deviation": num(c.max_relative_deviation),
                "tolerance": num(GREEN_TOLERANCE),
                "worst_pair": [[num(c.worst.0.re), num(c.worst.0.im)], [num(c.worst.1.re), num(c.worst.1.im)]],
                "pass": pass,
            }),
        ),
        Format::Csv => {
            let mut csv = Csv::new(&["n", "seed", "max_relative_deviation", "tolerance", "pass"]);
            csv.row(vec![
                n.to_string(),
                seed.to_string(),
                sig9(c.max_relative_deviation),
                sig9(GREEN_TOLERANCE),
                pass.to_string(),
            ]);
            csv_trailer(&mut csv, &cfg.to_json());
            csv.finish()
        }
    };
    Ok((text, code))
}

fn distance(map: &str, alpha: f64, out: &OutArgs) -> Outcome {
    let m = parse_map(map)?;
    let alpha = positive("alpha", alpha)?;
    let (format, path) = out.resolve(Format::Csv);
    let mut cfg = RunConfig::new("distance", format, path);
    cfg.map = Some(m.to_string());
    cfg.alpha = Some(alpha);
    // an empty level set sits at infinite distance
    let (r_min, d) = match dist_to_levelset(&m, alpha) {
        Ok((d, pt)) => (Some(pt.radius()), d.value()),
        Err(Error::EmptyLevelSet { .. }) => (None, f64::INFINITY),
        Err(e) => return Err(e.into()),
    };
    let exp_neg_d = (-d).exp();
    let text = match format {
        Format::Csv => {
            let mut csv = Csv::new(&["map", "alpha", "r_min", "d", "exp_neg_d"]);
            csv.row(vec![m.to_string(), sig9(alpha), r_min.map_or(String::new(), sig9), sig9(d), sig9(exp_neg_d)]);
            csv_trailer(&mut csv, &cfg.to_json());
            csv.finish()
        }
        Format::Json => json_document(
            cfg.to_json(),
            json!({
                "map": m.to_string(),
                "alpha": num(alpha),
                "r_min": opt_num(r_min),
                "d": num(d),
                "exp_neg_d": num(exp_neg_d),
            }),
        ),
    };
    Ok((text, EXIT_DECISIVE))
}

fn hardy_number(map: &str, grid: &GridArgs, out: &OutArgs) -> Outcome {
    let m = parse_map(map)?;
    let grid = grid.resolve()?;
    let (format, path) = out.resolve(Format::Json);
    let exec = executor()?;
    let mut cfg = RunConfig::new("hardy-number", format, path);
    cfg.map = Some(m.to_string());
    cfg.grid = Some(grid);
    let h = LevelProfile::compute(&m, &grid, &exec)?.hardy_number();
    let residual = h.fit.as_ref().map(|f| f.residual);
    let code = if h.inconclusive { EXIT_INCONCLUSIVE } else { EXIT_DECISIVE };
    let text = match format {
        Format::Json => json_document(
            cfg.to_json(),
            json!({
                "map": m.to_string(),
                "estimate": num(h.value),
                "fit_residual": opt_num(residual),
                "grid": grid_json(&grid),
                "known": opt_num(m.known_hardy_number()),
                "inconclusive": h.inconclusive,
            }),
        ),
        Format::Csv => {
            let mut csv = Csv::new(&["map", "estimate", "fit_residual", "known", "inconclusive"]);
            csv.row(vec![
                m.to_string(),
                sig9(h.value),
                residual.map_or(String::new(), sig9),
                m.known_hardy_number().map_or(String::new(), sig9),
                h.inconclusive.to_string(),
            ]);
            csv_trailer(&mut csv, &cfg.to_json());
            csv.finish()
        }
    };
    Ok((text, code))
}

fn criterion_json(c: &CriterionResult) -> Value {
    json!({
        "verdict": c.verdict.as_str(),
        "tail_exponent": num(c.tail_exponent),
        "fit_residual": num(c.fit_residual),
        "superpolynomial": c.superpolynomial,
        "truncated_value": num(c.truncated_value),
        "truncated_sigma": num(c.truncated_sigma),
        "head_budget": num(c.head_budget),
        "tail_estimate": num(c.tail_estimate),
        "fit_alpha_lo": num(c.fit_alpha_lo),
        "fit_alpha_hi": num(c.fit_alpha_hi),
        "fit_points": c.fit_points,
        "excluded": c.excluded,
    })
}

fn criteria_table(map: &str, p: f64, which: &[Which], grid: &GridArgs, wos: &WosArgs, out: &OutArgs) -> Outcome {
    let m = parse_map(map)?;
    let p = positive("p", p)?;
    let grid = grid.resolve()?;
    let wos = wos.resolve()?;
    let (format, path) = out.resolve(Format::Csv);
    let exec = executor()?;
    let (hyp_on, harm_on) = (which.contains(&Which::Hyp), which.contains(&Which::Harm));
    if !hyp_on && !harm_on {
        return usage("--criteria needs at least one of hyp, harm");
    }
    let mut cfg = RunConfig::new("criteria", format, path);
    cfg.map = Some(m.to_string());
    cfg.p = Some(p);
    cfg.grid = Some(grid);
    cfg.criteria = Some([(hyp_on, "hyp"), (harm_on, "harm")].iter().filter(|x| x.0).map(|x| x.1).collect());
    if harm_on {
        cfg.wos = Some(wos);
    }

    let alphas = grid.values();
    let levels = if hyp_on { Some(LevelProfile::compute(&m, &grid, &exec)?) } else { None };
    let harm = if harm_on { Some(HarmProfile::compute(&m, &grid, &wos, &exec)?) } else { None };
    let mut results: Vec<(&str, CriterionResult)> = Vec::new();
    if let Some(l) = &levels {
        results.push(("hyp", l.criterion(p)?));
    }
    if let Some(h) = &harm {
        results.push(("harm", h.criterion(p)?));
    }
    let all = |c: Convergence| results.iter().all(|r| r.1.verdict == c);
    let conclusion = if all(Convergence::Converges) {
        Conclusion::Member
    } else if all(Convergence::Diverges) {
        Conclusion::NonMember
    } else {
        Conclusion::Inconclusive
    };

    let exp_neg = levels.as_ref().map(|l| l.exp_neg());
    let rows: Vec<[Option<f64>; 6]> = alphas
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let w = a.powf(p - 1.0);
            let e = exp_neg.as_ref().map(|v| v[i]);
            let est = harm.as_ref().map(|h| h.estimates[i]);
            [Some(a), e, est.map(|x| x.value), est.map(|x| x.std_error), e.map(|e| w * e), est.map(|x| w * x.value)]
        })
        .collect();
    let header = ["alpha", "exp_neg_d", "omega", "omega_stderr", "integrand_hyp", "integrand_harm"];
    let text = match format {
        Format::Csv => {
            let mut csv = Csv::new(&header);
            for r in &rows {
                csv.row(r.iter().map(|x| x.map_or(String::new(), sig9)).collect());
            }
            for (name, c) in &results {
                csv.comment(name, &serde_json::to_string(&criterion_json(c)).expect("json"));
            }
            csv.comment("conclusion", conclusion.as_str());
            csv_trailer(&mut csv, &cfg.to_json());
            csv.finish()
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(header.iter().zip(r).map(|(k, v)| (k.to_string(), opt_num(*v))).collect()))
                .collect();
            let crit: serde_json::Map<String, Value> =
                results.iter().map(|(n, c)| (n.to_string(), criterion_json(c))).collect();
            json_document(
                cfg.to_json(),
                json!({
                    "map": m.to_string(),
                    "p": num(p),
                    "rows": rows,
                    "criteria": crit,
                    "conclusion": conclusion.as_str(),
                }),
            )
        }
    };
    Ok((text, exit_for(conclusion)))
}

fn verify(map: &str, p: f64, no_harm: bool, grid: &GridArgs, wos: &WosArgs, out: &OutArgs) -> Outcome {
    let m = parse_map(map)?;
    let p = positive("p", p)?;
    let grid = grid.resolve()?;
    let wos = wos.resolve()?;
    let (format, path) = out.resolve(Format::Json);
    let exec = executor()?;
    let mut cfg = RunConfig::new("verify", format, path);
    cfg.map = Some(m.to_string());
    cfg.p = Some(p);
    cfg.grid = Some(grid);
    if !no_harm {
        cfg.harm_grid = Some(HARM_GRID_DEFAULT);
        cfg.wos = Some(wos);
    }
    let options = VerdictOptions { grid, harm: (!no_harm).then_some((HARM_GRID_DEFAULT, wos)), ..Default::default() };
    let v = MembershipAnalysis::new(&m, options, &exec)?.verdict(p)?;
    let text = match format {
        Format::Json => {
            let evidence: Vec<Value> = v
                .evidence
                .iter()
                .map(|e| {
                    json!({
                        "criterion": e.criterion,
                        "verdict": e.verdict.as_str(),
                        "exponent": num(e.exponent),
                        "residual": num(e.residual),
                        "value": num(e.value),
                    })
                })
                .collect();
            json_document(
                cfg.to_json(),
                json!({
                    "map": m.to_string(),
                    "p": num(p),
                    "conclusion": v.conclusion.as_str(),
                    "known_hardy_number": opt_num(m.known_hardy_number()),
                    "evidence": evidence,
                }),
            )
        }
        Format::Csv => {
            let mut csv = Csv::new(&["criterion", "verdict", "exponent", "residual", "value"]);
            for e in &v.evidence {
                csv.row(vec![
                    e.criterion.to_string(),
                    e.verdict.as_str().to_string(),
                    sig9(e.exponent),
                    sig9(e.residual),
                    sig9(e.value),
                ]);
            }
            csv.comment("conclusion", v.conclusion.as_str());
            csv_trailer(&mut csv, &cfg.to_json());
            csv.finish()
        }
    };
    Ok((text, exit_for(v.conclusion)))
}

fn catalog(out: &OutArgs) -> Outcome {
    let (format, path) = out.resolve(Format::Csv);
    let cfg = RunConfig::new("catalog", format, path);
    let entries = catalog_entries();
    let text = match format {
        Format::Csv => {
            let mut csv = Csv::new(&["key", "syntax", "formula", "image", "hardy_number"]);
            for e in &entries {
                csv.row([e.key, e.syntax, e.formula, e.image, e.hardy_number].map(String::from).to_vec());
            }
            csv_trailer(&mut csv, &cfg.to_json());
            csv.finish()
        }
        Format::Json => {
            let list: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "key": e.key,
                        "syntax": e.syntax,
                        "formula": e.formula,
                        "image": e.image,
                        "hardy_number": e.hardy_number,
                    })
                })
                .collect();
            json_document(cfg.to_json(), Value::from(list))
        }
    };
    Ok((text, EXIT_DECISIVE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_map_to_64() {
        assert_eq!(run(["hardy", "distance", "--map", "halfplane", "--alpha", "0"]), EXIT_USAGE);
        assert_eq!(run(["hardy", "distance", "--map", "nope", "--alpha", "2"]), EXIT_USAGE);
        assert_eq!(run(["hardy", "greens-check", "--n", "0"]), EXIT_USAGE);
        assert_eq!(run(["hardy", "verify", "--map", "halfplane", "--p", "-1"]), EXIT_USAGE);
        assert_eq!(run(["hardy", "frobnicate"]), EXIT_USAGE);
    }
}
