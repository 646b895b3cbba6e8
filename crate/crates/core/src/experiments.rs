//! Seeded experiments with JSON and CSV reports.
//!
//! Trial `k` draws everything from `ChaCha8Rng::seed_from_u64(sub_seed)`,
//! where `sub_seed = seed ^ (k · 0x9E3779B97F4A7C15)` (wrapping). Trials run
//! in parallel and are collected in trial order, so a report depends only
//! on its configuration.
//!
//! Exact checks (rank inequalities, full rank, symbolic identities) fail on
//! a single violation. Frequency checks compare against an expected
//! probability with a 3σ normal band.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::decomp::{decompose, default_params, verify_term, DecompParams, Term};
use crate::error::{Error, Result};
use crate::field::{PrimeField, DEFAULT_PRIME};
use crate::generators::{gen_r_simple, gen_t_product, GeneratorSpec};
use crate::imm::{build_dc_formula, imm_polynomial, imm_polynomial_capped, log_log_slope, size_table, DEFAULT_IMM_CAP};
use crate::poly::{matrix_vars, MulMode, Polynomial, VarId};
use crate::rank::coefficient_matrix;
use crate::restriction::{
    apply_to_polynomial, imm_restricted_closed_form, path_color_stats, sample_restriction, touched_layer_stats,
    Coloring, RestrictionRho,
};

pub const SCHEMA_VERSION: u32 = 1;

const STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of trial `k`.
pub fn sub_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64).wrapping_mul(STREAM)
}

pub fn trial_rng(seed: u64, k: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sub_seed(seed, k))
}

pub const EXPERIMENTS: [&str; 6] =
    ["full_rank", "product_rank", "simple_rank", "color_paths", "decompose_roundtrip", "size_table"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub d: usize,
    pub delta: Option<usize>,
    pub t: Option<usize>,
    pub r: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub prime: u64,
    /// Monomial density of generated factors.
    pub density: f64,
    /// Variables the linears of a simple term must cover.
    pub threshold: Option<usize>,
    /// Variables per color in the sparse colorings of the color path run.
    pub per_color: usize,
    pub t_list: Vec<usize>,
    pub d_list: Vec<usize>,
    pub delta_list: Vec<usize>,
    /// Restrictions sampled per decomposition.
    pub rho_samples: usize,
    pub out: Option<String>,
    pub format: OutputFormat,
    /// Thread count; not part of the report since it cannot change it.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn named(name: &str) -> Self {
        ExperimentConfig {
            name: name.replace('-', "_"),
            d: 8,
            delta: None,
            t: None,
            r: None,
            trials: 500,
            seed: 0,
            prime: DEFAULT_PRIME,
            density: 1.0,
            threshold: None,
            per_color: 2,
            t_list: vec![8, 16, 32],
            d_list: vec![2, 4, 8, 16, 32, 64],
            delta_list: vec![1, 2, 3, 4, 5, 6],
            rho_samples: 100,
            out: None,
            format: OutputFormat::Json,
            workers: None,
        }
    }

    fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.prime)
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Params("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// A frequency compared with its expected probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatCheck {
    pub name: String,
    pub estimate: f64,
    pub expected: f64,
    pub samples: usize,
    pub sigma: f64,
    /// `3σ`.
    pub radius: f64,
    /// `true` when only `estimate ≥ expected − radius` is required.
    pub lower_bound_only: bool,
    pub passed: bool,
}

impl StatCheck {
    pub fn frequency(name: &str, hits: usize, samples: usize, expected: f64) -> Self {
        let estimate = if samples == 0 { f64::NAN } else { hits as f64 / samples as f64 };
        let sigma = (expected * (1.0 - expected) / samples.max(1) as f64).sqrt();
        let radius = 3.0 * sigma;
        StatCheck {
            name: name.into(),
            estimate,
            expected,
            samples,
            sigma,
            radius,
            lower_bound_only: false,
            passed: samples > 0 && (estimate - expected).abs() <= radius,
        }
    }

    pub fn at_least(name: &str, hits: usize, samples: usize, expected: f64) -> Self {
        let mut s = StatCheck::frequency(name, hits, samples, expected);
        s.lower_bound_only = true;
        s.passed = samples > 0 && s.estimate >= expected - s.radius;
        s
    }
}

/// An exact check over all trials, or a Monte Carlo trend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    /// Index of the first failing trial.
    pub first_failure: Option<usize>,
    pub trend: bool,
    pub passed: bool,
}

impl Check {
    pub fn exact<I: IntoIterator<Item = bool>>(name: &str, results: I) -> Self {
        let (mut checked, mut failures, mut first_failure) = (0, 0, None);
        for (k, ok) in results.into_iter().enumerate() {
            checked += 1;
            if !ok {
                failures += 1;
                first_failure.get_or_insert(k);
            }
        }
        Check { name: name.into(), checked, failures, first_failure, trend: false, passed: failures == 0 }
    }

    fn trend(name: &str, ok: bool) -> Self {
        Check {
            name: name.into(),
            checked: 1,
            failures: usize::from(!ok),
            first_failure: (!ok).then_some(0),
            trend: true,
            passed: ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub name: String,
    pub config: ExperimentConfig,
    /// One flat record per trial, each with its `sub_seed`.
    pub trials: Vec<Value>,
    pub aggregates: BTreeMap<String, Value>,
    pub stats: Vec<StatCheck>,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Wall-clock time of the run; the only field that varies between runs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<String>,
}

impl ExperimentReport {
    fn new(cfg: &ExperimentConfig, trials: Vec<Value>) -> Self {
        ExperimentReport {
            schema: SCHEMA_VERSION,
            name: cfg.name.clone(),
            config: cfg.clone(),
            trials,
            aggregates: BTreeMap::new(),
            stats: Vec::new(),
            checks: Vec::new(),
            passed: false,
            timestamp: None,
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.stats.iter().all(|s| s.passed) && self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn stat(&self, name: &str) -> Option<&StatCheck> {
        self.stats.iter().find(|s| s.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut s = self.to_json()?;
        s.push('\n');
        std::fs::write(path, s)?;
        Ok(())
    }

    /// Trial records as CSV; the columns are the record keys in sorted order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let Some(Value::Object(first)) = self.trials.first() else { return Ok(()) };
        let header: Vec<&String> = first.keys().collect();
        w.write_record(header.iter().map(|k| k.as_str()))?;
        for rec in &self.trials {
            let row = header.iter().map(|k| match rec.get(k.as_str()) {
                Some(Value::String(s)) => s.clone(),
                Some(Value::Null) | None => String::new(),
                Some(v) => v.to_string(),
            });
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn run_trials<T, F>(cfg: &ExperimentConfig, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, u64) -> Result<T> + Sync,
{
    let go = || (0..count).into_par_iter().map(|k| f(k, sub_seed(cfg.seed, k))).collect::<Result<Vec<T>>>();
    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Params(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    }
}

fn histogram<I: IntoIterator<Item = usize>>(values: I) -> Value {
    let mut h: BTreeMap<usize, usize> = BTreeMap::new();
    for v in values {
        *h.entry(v).or_default() += 1;
    }
    json!(h)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("records serialize")
}

/// `f|_ρ` for a term, multiplied out factor by factor.
pub fn restricted_term(term: &Term, rho: &RestrictionRho, field: PrimeField) -> Result<Polynomial> {
    let parts: Vec<Polynomial> = term.factors().iter().map(|f| apply_to_polynomial(&f.poly, rho)).collect();
    parts.iter().try_fold(Polynomial::one(field), |acc, p| acc.mul(p, MulMode::Strict))
}

/// Measured rank of a restricted term and the upper bound it must obey.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub rank: usize,
    /// Twice the base-2 logarithm of the bound.
    pub twice_log_bound: usize,
    /// Imbalanced factors, for product terms.
    pub ell: Option<usize>,
    /// `|U|_ρ|`, for simple terms.
    pub touched: Option<usize>,
    pub holds: bool,
}

/// For a product term the bound is `2^{(|Y|+|Z|−ℓ)/2}`, where `ℓ` counts
/// factors whose restricted sets meet `Y` and `Z` unequally. For a simple
/// term it is `2^{r′ + (|Y|+|Z|−|U|_ρ|)/2}` with `U` the linears' variables.
/// The comparison is `rank² ≤ 2^{2·exponent}` in integers.
pub fn check_rank_bound(term: &Term, rho: &RestrictionRho, field: PrimeField) -> Result<BoundCheck> {
    let g = restricted_term(term, rho, field)?;
    let rank = coefficient_matrix(&g, rho.y(), rho.z())?.rank();
    let yz = rho.y().len() + rho.z().len();
    let (twice_log_bound, ell, touched) = match term {
        Term::Product(p) => {
            let parts: Vec<_> = p.factors.iter().map(|f| f.vars.clone()).collect();
            let chi = Coloring::from_partition(rho.d(), &parts)?;
            let ell = path_color_stats(rho, &chi)?.imbalanced;
            (yz - ell, Some(ell), None)
        }
        Term::Simple(s) => {
            let u = touched_layer_stats(rho, &s.covered());
            (2 * s.r_prime() + yz - u, None, Some(u))
        }
    };
    let holds = (rank as u128).pow(2) <= 1u128 << twice_log_bound;
    Ok(BoundCheck { rank, twice_log_bound, ell, touched, holds })
}

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    log::info!("running {} with {} trials, seed {}", cfg.name, cfg.trials, cfg.seed);
    match cfg.name.as_str() {
        "full_rank" => exp_full_rank(cfg),
        "product_rank" => exp_product_rank(cfg),
        "simple_rank" => exp_simple_rank(cfg),
        "color_paths" => exp_color_paths(cfg),
        "decompose_roundtrip" => exp_decompose_roundtrip(cfg),
        "size_table" => exp_size_table(cfg),
        other => Err(Error::Params(format!("unknown experiment {other}; expected one of {}", EXPERIMENTS.join(", ")))),
    }
}

#[derive(Serialize)]
struct FullRankTrial {
    trial: usize,
    sub_seed: u64,
    marked: usize,
    m: usize,
    rank: usize,
    full_rank: bool,
    closed_form: bool,
}

/// `IMM_d|_ρ` has rank exactly `2^m`, and equals the closed form.
pub fn exp_full_rank(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let field = cfg.field()?;
    let imm = imm_polynomial_capped(field, cfg.d, DEFAULT_IMM_CAP)?;
    let recs = run_trials(cfg, cfg.trials, |trial, seed| {
        let rho = sample_restriction(cfg.d, &mut ChaCha8Rng::seed_from_u64(seed));
        let g = apply_to_polynomial(&imm, &rho);
        let rank = coefficient_matrix(&g, rho.y(), rho.z())?.rank();
        Ok(FullRankTrial {
            trial,
            sub_seed: seed,
            marked: rho.marked().len(),
            m: rho.m(),
            rank,
            full_rank: rank == 1 << rho.m(),
            closed_form: g == imm_restricted_closed_form(field, &rho),
        })
    })?;
    let mut rep = ExperimentReport::new(cfg, recs.iter().map(to_value).collect());
    rep.checks.push(Check::exact("full_rank", recs.iter().map(|r| r.full_rank)));
    rep.checks.push(Check::exact("closed_form", recs.iter().map(|r| r.closed_form)));
    rep.aggregates.insert("m_histogram".into(), histogram(recs.iter().map(|r| r.m)));
    Ok(rep.finish())
}

#[derive(Serialize)]
struct ProductTrial {
    trial: usize,
    sub_seed: u64,
    m: usize,
    y: usize,
    z: usize,
    ell: usize,
    colors_on_path: usize,
    odd_colors: usize,
    rank: usize,
    twice_log_bound: usize,
    bound_holds: bool,
}

/// Rank of a restricted random product term against `2^{(|Y|+|Z|−ℓ)/2}`.
pub fn exp_product_rank(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let field = cfg.field()?;
    let t = cfg.t.unwrap_or(2);
    let recs = run_trials(cfg, cfg.trials, |trial, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = GeneratorSpec::t_product(cfg.d, t, cfg.density, seed);
        let term = Term::Product(gen_t_product(&spec, field, &mut rng)?);
        let rho = sample_restriction(cfg.d, &mut rng);
        let Term::Product(p) = &term else { unreachable!() };
        let parts: Vec<_> = p.factors.iter().map(|f| f.vars.clone()).collect();
        let stats = path_color_stats(&rho, &Coloring::from_partition(cfg.d, &parts)?)?;
        let b = check_rank_bound(&term, &rho, field)?;
        Ok(ProductTrial {
            trial,
            sub_seed: seed,
            m: rho.m(),
            y: rho.y().len(),
            z: rho.z().len(),
            ell: stats.imbalanced,
            colors_on_path: stats.per_color.len(),
            odd_colors: stats.per_color.values().filter(|c| c.odd()).count(),
            rank: b.rank,
            twice_log_bound: b.twice_log_bound,
            bound_holds: b.holds,
        })
    })?;
    let mut rep = ExperimentReport::new(cfg, recs.iter().map(to_value).collect());
    rep.checks.push(Check::exact("rank_bound", recs.iter().map(|r| r.bound_holds)));
    let on_path: usize = recs.iter().map(|r| r.colors_on_path).sum();
    let odd: usize = recs.iter().map(|r| r.odd_colors).sum();
    let imbalanced: usize = recs.iter().map(|r| r.ell).sum();
    rep.stats.push(StatCheck::frequency("odd_parity_per_color", odd, on_path, 0.5));
    rep.stats.push(StatCheck::at_least("imbalance_per_color", imbalanced, on_path, 0.5));
    rep.aggregates.insert("ell_histogram".into(), histogram(recs.iter().map(|r| r.ell)));
    let deficit = |r: &ProductTrial| if r.rank == 0 { r.m + 1 } else { r.m - r.rank.ilog2() as usize };
    rep.aggregates.insert("log2_deficit_histogram".into(), histogram(recs.iter().map(deficit)));
    let eps: f64 = recs.iter().map(|r| deficit(r) as f64 / t as f64).sum::<f64>() / recs.len() as f64;
    rep.aggregates.insert("mean_log2_deficit_per_factor".into(), json!(eps));
    Ok(rep.finish())
}

#[derive(Serialize)]
struct SimpleTrial {
    trial: usize,
    sub_seed: u64,
    m: usize,
    r_prime: usize,
    touched: usize,
    rank: usize,
    twice_log_bound: usize,
    bound_holds: bool,
    /// Whether the probe variable of `U` maps into `Y ∪ Z`; empty when `U`
    /// has no variable outside the first layer.
    contact_hit: Option<bool>,
}

/// Rank of a restricted random simple term against
/// `2^{r′ + (|Y|+|Z|−|U|_ρ|)/2}`.
pub fn exp_simple_rank(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let field = cfg.field()?;
    let r = cfg.r.unwrap_or(1);
    let recs = run_trials(cfg, cfg.trials, |trial, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = GeneratorSpec::r_simple(cfg.d, r, cfg.threshold, cfg.density, seed);
        let s = gen_r_simple(&spec, field, &mut rng)?;
        let rho = sample_restriction(cfg.d, &mut rng);
        // first layer edges leave the fixed start vertex, so they are on the
        // path with probability 1/2 rather than 1/4
        let probe = s.covered().into_iter().find(|v| v.layer().is_some_and(|l| l >= 2));
        let term = Term::Simple(s);
        let b = check_rank_bound(&term, &rho, field)?;
        let Term::Simple(s) = &term else { unreachable!() };
        Ok(SimpleTrial {
            trial,
            sub_seed: seed,
            m: rho.m(),
            r_prime: s.r_prime(),
            touched: b.touched.expect("simple term"),
            rank: b.rank,
            twice_log_bound: b.twice_log_bound,
            bound_holds: b.holds,
            contact_hit: probe.map(|v| rho.image(v).is_some()),
        })
    })?;
    let mut rep = ExperimentReport::new(cfg, recs.iter().map(to_value).collect());
    rep.checks.push(Check::exact("rank_bound", recs.iter().map(|r| r.bound_holds)));
    let probes: Vec<bool> = recs.iter().filter_map(|r| r.contact_hit).collect();
    rep.stats.push(StatCheck::frequency(
        "contact_edge_hit",
        probes.iter().filter(|&&h| h).count(),
        probes.len(),
        0.125,
    ));
    rep.aggregates.insert("touched_histogram".into(), histogram(recs.iter().map(|r| r.touched)));
    let small = recs.iter().filter(|x| x.touched <= 4 * r).count();
    rep.aggregates.insert("fraction_touched_at_most_4r".into(), json!(small as f64 / recs.len() as f64));
    Ok(rep.finish())
}

/// The probe edge of the color path run.
pub fn probe_edge() -> VarId {
    VarId::x(3, 1, 2)
}

/// Path color statistics under three kinds of colorings:
///
/// * the layer-monochrome coloring, where each layer is imbalanced exactly
///   when it is marked;
/// * a coloring whose only non-background class is [`probe_edge`], where the
///   probe color is on the path exactly when the path uses that edge;
/// * for each `t` in the list, a sparse coloring with `t − 1` classes of
///   `per_color` variables plus a background color, whose number of colors
///   on the path should be at most `t/4` less often as `t` grows.
pub fn exp_color_paths(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let d = cfg.d;
    let sparse: Vec<(usize, Coloring)> = cfg
        .t_list
        .iter()
        .map(|&t| Ok((t, Coloring::sparse(d, t, cfg.per_color, &mut trial_rng(!cfg.seed, t))?)))
        .collect::<Result<_>>()?;
    let mono = Coloring::layer_monochrome(d);
    let probe = (d >= 3)
        .then(|| {
            let mut colors = vec![0; 4 * d];
            colors[probe_edge().index()] = 1;
            Coloring::new(d, colors)
        })
        .transpose()?;
    let recs = run_trials(cfg, cfg.trials, |trial, seed| {
        let rho = sample_restriction(d, &mut ChaCha8Rng::seed_from_u64(seed));
        let mono_stats = path_color_stats(&rho, &mono)?;
        let mut rec = Map::new();
        rec.insert("trial".into(), json!(trial));
        rec.insert("sub_seed".into(), json!(seed));
        rec.insert("imbalanced_layers".into(), json!(mono_stats.imbalanced));
        rec.insert("monochrome_colors".into(), json!(mono_stats.per_color.len()));
        let hit = match &probe {
            Some(chi) => json!(path_color_stats(&rho, chi)?.per_color.contains_key(&1)),
            None => Value::Null,
        };
        rec.insert("probe_hit".into(), hit);
        for (t, chi) in &sparse {
            rec.insert(format!("colors_t{t}"), json!(path_color_stats(&rho, chi)?.per_color.len()));
        }
        Ok(Value::Object(rec))
    })?;
    let get = |r: &Value, k: &str| r[k].as_u64().unwrap_or(0) as usize;
    let mut rep = ExperimentReport::new(cfg, recs.clone());
    let imbalanced: usize = recs.iter().map(|r| get(r, "imbalanced_layers")).sum();
    rep.stats.push(StatCheck::frequency("imbalance_per_color", imbalanced, d * recs.len(), 0.5));
    if probe.is_some() {
        let hits = recs.iter().filter(|r| r["probe_hit"] == json!(true)).count();
        rep.stats.push(StatCheck::frequency("new_color_indicator", hits, recs.len(), 0.25));
    }
    rep.checks.push(Check::exact("monochrome_all_colors", recs.iter().map(|r| get(r, "monochrome_colors") == d)));
    let mut tails = Vec::new();
    for (t, _) in &sparse {
        let key = format!("colors_t{t}");
        rep.aggregates.insert(format!("colors_histogram_t{t}"), histogram(recs.iter().map(|r| get(r, &key))));
        let tail = recs.iter().filter(|r| 4 * get(r, &key) <= *t).count() as f64 / recs.len() as f64;
        rep.aggregates.insert(format!("tail_frequency_t{t}"), json!(tail));
        tails.push((*t, tail));
    }
    tails.sort_by_key(|p| p.0);
    if tails.len() >= 2 {
        let decreasing = tails.windows(2).all(|w| w[1].1 < w[0].1 || w[1].1 == 0.0);
        rep.checks.push(Check::trend("tail_decreasing_in_t", decreasing));
    }
    Ok(rep.finish())
}

/// Parameters of the round trip: defaults for `(d, Δ)`, overridden by any
/// of `t`, `r` and `threshold` in the configuration.
pub fn roundtrip_params(cfg: &ExperimentConfig, delta: usize) -> Result<DecompParams> {
    let mut p = default_params(cfg.d, delta)?;
    if let Some(t) = cfg.t {
        p.t = t;
    }
    if let Some(r) = cfg.r {
        p.r = r;
        p.support_threshold = 400 * r;
        p.p_bound = 400 * r;
    }
    p.r = p.r.max(p.t.saturating_sub(1));
    if let Some(th) = cfg.threshold {
        p.support_threshold = th;
    }
    Ok(p)
}

#[derive(Serialize)]
struct RoundtripTrial {
    trial: usize,
    sub_seed: u64,
    m: usize,
    terms_checked: usize,
    bound_failures: usize,
    max_rank: usize,
}

/// Builds the divide-and-conquer formula, normalizes it, decomposes it and
/// checks the identity, the term count, every term's definition and every
/// term's rank bound under sampled restrictions.
pub fn exp_decompose_roundtrip(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    if cfg.d > 12 {
        return Err(Error::Params(format!("d = {} is above 12, too large to check symbolically", cfg.d)));
    }
    let field = cfg.field()?;
    let delta = cfg.delta.unwrap_or(1);
    let f = build_dc_formula(field, cfg.d, delta)?.normalize_to_alternating(delta)?;
    let params = roundtrip_params(cfg, delta)?;
    let ambient = matrix_vars(cfg.d);
    let dec = decompose(&f, &ambient, &params)?;
    let terms: Vec<Term> = dec.terms().collect();
    let identity = dec.sum(field)? == imm_polynomial(field, cfg.d)?;
    let recs = run_trials(cfg, cfg.rho_samples, |trial, seed| {
        let rho = sample_restriction(cfg.d, &mut ChaCha8Rng::seed_from_u64(seed));
        let mut failures = 0;
        let mut max_rank = 0;
        for term in &terms {
            let b = check_rank_bound(term, &rho, field)?;
            failures += usize::from(!b.holds);
            max_rank = max_rank.max(b.rank);
        }
        Ok(RoundtripTrial { trial, sub_seed: seed, m: rho.m(), terms_checked: terms.len(), bound_failures: failures, max_rank })
    })?;
    let mut rep = ExperimentReport::new(cfg, recs.iter().map(to_value).collect());
    rep.checks.push(Check::exact("identity", [identity]));
    rep.checks.push(Check::exact("term_count_at_most_twice_size", [dec.term_count() <= 2 * f.size()]));
    rep.checks.push(Check::exact("terms_verified", terms.iter().map(|t| verify_term(t, &ambient).ok())));
    rep.checks.push(Check::exact("rank_bound", recs.iter().map(|r| r.bound_failures == 0)));
    for (k, v) in [
        ("normalized_size", json!(f.size())),
        ("term_count", json!(dec.term_count())),
        ("product_terms", json!(dec.products.len())),
        ("simple_terms", json!(dec.simples.len())),
        ("case_fanin", json!(dec.case_fanin)),
        ("case_support", json!(dec.case_support)),
        ("case_inner", json!(dec.case_inner)),
        ("params", to_value(&params)),
    ] {
        rep.aggregates.insert(k.into(), v);
    }
    Ok(rep.finish())
}

/// Size counts of the divide-and-conquer constructions. Counts can exceed
/// 64 bits, so records hold them as decimal strings next to their base-2
/// logarithms.
pub fn exp_size_table(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let rows = size_table(&cfg.d_list, &cfg.delta_list);
    let log2 = |x: u128| (x as f64).log2();
    let recs: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "d": r.d,
                "delta": r.delta,
                "formula_size": r.formula_size.to_string(),
                "circuit_size": r.circuit_size.to_string(),
                "leaf_count": r.leaf_count.to_string(),
                "log2_formula_size": log2(r.formula_size),
                "log2_leaf_count": log2(r.leaf_count),
            })
        })
        .collect();
    let mut rep = ExperimentReport::new(cfg, recs);
    let find = |d: usize, delta: usize| rows.iter().find(|r| r.d == d && r.delta == delta);
    if let (Some(deep), Some(flat)) = (find(16, 4), find(16, 1)) {
        rep.checks.push(Check::exact("deeper_is_smaller_d16", [deep.leaf_count <= flat.leaf_count]));
    }
    let log_depth: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.d.is_power_of_two() && 1 << r.delta == r.d)
        .map(|r| (r.d as f64, r.leaf_count as f64))
        .collect();
    if let Some(slope) = log_log_slope(&log_depth) {
        rep.aggregates.insert("log_depth_leaf_exponent".into(), json!(slope));
    }
    Ok(rep.finish())
}
