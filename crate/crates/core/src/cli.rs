//! The `immlab` command line.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::decomp::{decompose, DecompParams, Term};
use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentConfig, OutputFormat};
use crate::field::{PrimeField, DEFAULT_PRIME};
use crate::formula::{Circuit, Formula};
use crate::generators::GeneratorSpec;
use crate::imm::{build_dc_circuit, build_dc_formula, imm_polynomial_capped, size_table, DEFAULT_IMM_CAP};
use crate::poly::{matrix_vars, Polynomial, VarId, VarSet};
use crate::rank::rank_report;
use crate::restriction::{apply_to_polynomial, sample_restriction, RestrictionRho, RhoJson};

#[derive(Debug, Parser)]
#[command(name = "immlab", version, about = "Multilinear formulas for iterated matrix multiplication")]
pub struct Cli {
    /// Prime modulus of the coefficient field.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Formula passes.
    #[command(subcommand)]
    Fml(FmlCommand),
    /// Iterated matrix multiplication polynomials and formulas.
    #[command(subcommand)]
    Imm(ImmCommand),
    /// Sum-of-terms decomposition.
    #[command(subcommand)]
    Decomp(DecompCommand),
    /// Random restrictions.
    #[command(subcommand)]
    Restrict(RestrictCommand),
    /// Rank of the partial derivative matrix of a polynomial.
    Rank(RankArgs),
    /// Random product and simple terms.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run an experiment and write its report.
    Exp(ExpArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Formula file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    pub input: PathBuf,
    /// Read the gate-list format instead of S-expressions.
    #[arg(long)]
    pub gates: bool,
}

#[derive(Debug, Subcommand)]
pub enum FmlCommand {
    /// Rewrite into alternating (ΣΠ)^Δ Σ form.
    Normalize {
        #[arg(long)]
        delta: usize,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Check syntactic multilinearity.
    CheckMl {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Size, leaves, product depth and shape.
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ImmCommand {
    /// Print IMM_d.
    Poly {
        #[arg(long)]
        d: usize,
    },
    /// Print the divide-and-conquer formula (or circuit, as a gate list).
    Build {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        circuit: bool,
    },
    /// Size table as CSV.
    Sizes {
        #[arg(long, value_delimiter = ',', required = true)]
        d_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        delta_list: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DecompCommand {
    /// Decompose a (ΣΠ)^Δ Σ formula and print a summary.
    Run {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
        /// Defaults to 400 r.
        #[arg(long)]
        threshold: Option<usize>,
        /// Defaults to 400 r.
        #[arg(long)]
        p_bound: Option<usize>,
        /// Normalize to this product depth first.
        #[arg(long)]
        normalize: Option<usize>,
        /// Use the 4d matrix variables as the ambient set instead of the
        /// formula's support.
        #[arg(long)]
        d: Option<usize>,
        /// Write the terms as JSON here.
        #[arg(long)]
        emit_terms: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RestrictCommand {
    /// Sample a restriction.
    Sample {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Apply a restriction to a polynomial.
    Apply {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Polynomial file, or `-` for standard input.
    #[arg(long)]
    pub poly: PathBuf,
    /// Row variables, such as `y1,y2` or `y[1],y[2]`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub y: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub z: Vec<String>,
    /// Confirm the rank modulo a second prime.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// A random product of `t` factors over a partition of the variables.
    Tproduct {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
    },
    /// A random product of `r` linear forms and a tail.
    Rsimple {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        /// Defaults to 400 r.
        #[arg(long)]
        threshold: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
    },
}

#[derive(Debug, Args)]
pub struct ExpArgs {
    /// One of full_rank, product_rank, simple_rank, color_paths,
    /// decompose_roundtrip, size_table.
    pub name: String,
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
    #[arg(long)]
    pub threshold: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub per_color: usize,
    #[arg(long, value_delimiter = ',')]
    pub t_list: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub d_list: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub delta_list: Option<Vec<usize>>,
    #[arg(long, default_value_t = 100)]
    pub rho_samples: usize,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Report file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format written to `--out`.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Also write the trial records as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Add a wall-clock timestamp to the report.
    #[arg(long)]
    pub timestamp: bool,
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_formula(field: PrimeField, input: &InputArgs) -> Result<Formula> {
    let text = read_text(&input.input)?;
    if input.gates {
        Circuit::parse_gate_list(field, &text)?.to_formula()
    } else {
        Formula::parse(field, &text)
    }
}

/// Accepts `y3` as well as `y[3]`.
fn parse_var(s: &str) -> Result<VarId> {
    let s = s.trim();
    let short = s.len() > 1 && matches!(s.as_bytes()[0], b'y' | b'z') && s[1..].bytes().all(|b| b.is_ascii_digit());
    if short {
        format!("{}[{}]", &s[..1], &s[1..]).parse()
    } else {
        s.parse()
    }
}

fn parse_vars(list: &[String]) -> Result<VarSet> {
    list.iter().filter(|s| !s.trim().is_empty()).map(|s| parse_var(s)).collect()
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let field = PrimeField::new(cli.prime)?;
    match cli.command {
        Command::Fml(cmd) => fml(field, cmd, out),
        Command::Imm(cmd) => imm(field, cmd, out),
        Command::Decomp(cmd) => decomp(field, cmd, out),
        Command::Restrict(cmd) => restrict(field, cmd, out),
        Command::Rank(args) => {
            let g = Polynomial::parse(field, &read_text(&args.poly)?)?;
            let report = rank_report(&g, &parse_vars(&args.y)?, &parse_vars(&args.z)?, args.cross_check)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(())
        }
        Command::Gen(cmd) => {
            let spec = match cmd {
                GenCommand::Tproduct { d, t, seed, density } => GeneratorSpec::t_product(d, t, density, seed),
                GenCommand::Rsimple { d, r, threshold, seed, density } => {
                    GeneratorSpec::r_simple(d, r, threshold, density, seed)
                }
            };
            let term = spec.generate(field)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&term.to_json(&matrix_vars(spec.d)))?)?;
            Ok(())
        }
        Command::Exp(args) => exp(cli.prime, args, out),
    }
}

fn fml(field: PrimeField, cmd: FmlCommand, out: &mut dyn Write) -> Result<()> {
    match cmd {
        FmlCommand::Normalize { delta, input } => {
            let f = read_formula(field, &input)?;
            writeln!(out, "{}", f.normalize_to_alternating(delta)?)?;
        }
        FmlCommand::CheckMl { input } => {
            let f = read_formula(field, &input)?;
            let verdict = f.check_syntactic_multilinear();
            writeln!(out, "{}", match verdict {
                crate::formula::MultilinearCheck::Multilinear => json!({ "multilinear": true }),
                crate::formula::MultilinearCheck::Violation { gate, var } => {
                    json!({ "multilinear": false, "gate": gate, "var": var.to_string() })
                }
            })?;
        }
        FmlCommand::Stats { input } => {
            let f = read_formula(field, &input)?;
            let shape = f.alternation_shape();
            let stats = json!({
                "size": f.size(),
                "leaves": f.leaf_count(),
                "product_depth": f.product_depth(),
                "alternating": shape.is_some(),
                "alternation_depth": shape.map(|s| s.delta),
                "bottom_sum": shape.map(|s| s.bottom_sum),
                "multilinear": f.check_syntactic_multilinear().is_multilinear(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&stats)?)?;
        }
    }
    Ok(())
}

fn imm(field: PrimeField, cmd: ImmCommand, out: &mut dyn Write) -> Result<()> {
    match cmd {
        ImmCommand::Poly { d } => writeln!(out, "{}", imm_polynomial_capped(field, d, DEFAULT_IMM_CAP)?)?,
        ImmCommand::Build { d, delta, circuit: true } => write!(out, "{}", build_dc_circuit(field, d, delta)?.to_gate_list())?,
        ImmCommand::Build { d, delta, circuit: false } => writeln!(out, "{}", build_dc_formula(field, d, delta)?)?,
        ImmCommand::Sizes { d_list, delta_list } => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["d", "delta", "formula_size", "circuit_size", "leaf_count"])?;
            for r in size_table(&d_list, &delta_list) {
                w.write_record([r.d.to_string(), r.delta.to_string(), r.formula_size.to_string(), r.circuit_size.to_string(), r.leaf_count.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn decomp(field: PrimeField, cmd: DecompCommand, out: &mut dyn Write) -> Result<()> {
    let DecompCommand::Run { input, t, r, threshold, p_bound, normalize, d, emit_terms } = cmd;
    let mut f = read_formula(field, &input)?;
    if let Some(delta) = normalize {
        f = f.normalize_to_alternating(delta)?;
    }
    let ambient = match d {
        Some(d) => matrix_vars(d),
        None => f.supports()[f.root()].clone(),
    };
    let base = DecompParams::new(t, r);
    let params = DecompParams {
        support_threshold: threshold.unwrap_or(base.support_threshold),
        p_bound: p_bound.unwrap_or(base.p_bound),
        ..base
    };
    let dec = decompose(&f, &ambient, &params)?;
    let terms: Vec<_> = dec.terms().map(|t: Term| t.to_json(&ambient)).collect();
    let identity = dec.sum(field)? == f.to_polynomial(crate::poly::MulMode::Strict)?;
    let summary = json!({
        "source_size": dec.source_size,
        "terms": dec.term_count(),
        "product_terms": dec.products.len(),
        "simple_terms": dec.simples.len(),
        "case_fanin": dec.case_fanin,
        "case_support": dec.case_support,
        "case_inner": dec.case_inner,
        "all_verified": terms.iter().all(|t| t.verified),
        "sum_matches": identity,
    });
    match emit_terms {
        Some(path) => {
            std::fs::write(path, serde_json::to_string_pretty(&terms)? + "\n")?;
            writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
        }
        None => writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "summary": summary, "terms": terms }))?)?,
    }
    Ok(())
}

fn restrict(field: PrimeField, cmd: RestrictCommand, out: &mut dyn Write) -> Result<()> {
    match cmd {
        RestrictCommand::Sample { d, seed, json } => {
            let rho = sample_restriction(d, &mut experiments::trial_rng(seed, 0));
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rho.to_json())?)?;
            } else {
                let bits = |v: &[u8]| v.iter().map(u8::to_string).collect::<String>();
                writeln!(out, "pi = {}", bits(rho.pi()))?;
                writeln!(out, "a  = {}", bits(rho.a()))?;
                writeln!(out, "marked = {:?}", rho.marked())?;
                writeln!(out, "m = {}", rho.m())?;
                writeln!(out, "closed form = {}", crate::restriction::imm_restricted_closed_form(field, &rho))?;
            }
        }
        RestrictCommand::Apply { rho, poly } => {
            let j: RhoJson = serde_json::from_str(&read_text(&rho)?)?;
            let rho = RestrictionRho::from_json(&j)?;
            let g = Polynomial::parse(field, &read_text(&poly)?)?;
            writeln!(out, "{}", apply_to_polynomial(&g, &rho))?;
        }
    }
    Ok(())
}

fn exp(prime: u64, a: ExpArgs, out: &mut dyn Write) -> Result<()> {
    let base = ExperimentConfig::named(&a.name);
    let cfg = ExperimentConfig {
        d: a.d,
        delta: a.delta,
        t: a.t,
        r: a.r,
        trials: a.trials,
        seed: a.seed,
        prime,
        density: a.density,
        threshold: a.threshold,
        per_color: a.per_color,
        t_list: a.t_list.unwrap_or(base.t_list.clone()),
        d_list: a.d_list.unwrap_or(base.d_list.clone()),
        delta_list: a.delta_list.unwrap_or(base.delta_list.clone()),
        rho_samples: a.rho_samples,
        out: a.out.as_ref().map(|p| p.display().to_string()),
        format: a.format,
        workers: a.workers,
        ..base
    };
    let mut report = experiments::run(&cfg)?;
    if a.timestamp {
        let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs());
        report.timestamp = Some(format!("unix:{secs}"));
    }
    match (&a.out, a.format) {
        (Some(path), OutputFormat::Json) => report.write_json(path)?,
        (Some(path), OutputFormat::Csv) => report.write_csv(std::fs::File::create(path)?)?,
        (None, OutputFormat::Json) => writeln!(out, "{}", report.to_json()?)?,
        (None, OutputFormat::Csv) => report.write_csv(&mut *out)?,
    }
    if let Some(path) = &a.csv {
        report.write_csv(std::fs::File::create(path)?)?;
    }
    if a.out.is_some() {
        for s in &report.stats {
            writeln!(out, "{:<28} {:.4} vs {:.4} ± {:.4}  {}", s.name, s.estimate, s.expected, s.radius, verdict(s.passed))?;
        }
        for c in &report.checks {
            writeln!(out, "{:<28} {}/{} ok  {}", c.name, c.checked - c.failures, c.checked, verdict(c.passed))?;
        }
        writeln!(out, "{}: {}", report.name, verdict(report.passed))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Error::Params(format!("experiment {} failed", report.name)))
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok { "PASS" } else { "FAIL" }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("immlab").chain(args.iter().copied()))
            .map_err(|e| Error::Params(e.to_string()))?;
        let mut buf = Vec::new();
        run(cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn short_variable_names() {
        assert_eq!(parse_var("y3").unwrap(), VarId::y(3));
        assert_eq!(parse_var("z[2]").unwrap(), VarId::z(2));
        assert!(parse_var("w1").is_err());
    }

    #[test]
    fn imm_poly_and_build() {
        let p = run_args(&["imm", "poly", "--d", "2"]).unwrap();
        assert_eq!(p.trim().matches('+').count(), 3);
        let f = run_args(&["imm", "build", "--d", "2", "--delta", "1"]).unwrap();
        assert!(f.starts_with("(+"));
        let sizes = run_args(&["imm", "sizes", "--d-list", "2,4", "--delta-list", "1,2"]).unwrap();
        assert_eq!(sizes.lines().count(), 4);
    }

    #[test]
    fn gen_emits_verified_term() {
        let s = run_args(&["gen", "tproduct", "--d", "3", "--t", "2", "--seed", "4", "--density", "0.5"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["kind"], "t_product");
        assert_eq!(v["verified"], true);
        assert_eq!(v["factors"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn bad_prime_is_rejected() {
        assert!(run_args(&["--prime", "8", "imm", "poly", "--d", "2"]).is_err());
    }
}
