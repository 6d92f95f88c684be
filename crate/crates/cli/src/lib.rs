//! Command runner behind the `tfweyl` binary. All artifact writes are
//! funneled through this crate so the in-process tests can drive the same
//! code paths the CLI exposes; outputs embed the effective configuration
//! and the content hashes of every input field file they were produced
//! from, and re-running a command with an identical configuration must
//! reproduce every artifact byte for byte.

pub mod config;

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use config::{Command, RunConfig};
use tfweyl_core::diagnostics::{
    self, default_lambda_list, default_mu_grid, DecayReport, HeuristicParams, Verdict,
};
use tfweyl_core::fieldio;
use tfweyl_core::fixtures::Fixture;
use tfweyl_core::grids::{reflect, Grid, SampledFunction};
use tfweyl_core::identities::{self, CheckResult, SuiteConfig};
use tfweyl_core::modspaces::{modulation_norm, MixedNormSpec};
use tfweyl_core::operators::{
    localization_via_weyl, multiplication_operator, spectrum, stft_symbol_grid, weyl_matrix,
    OperatorMatrix,
};
use tfweyl_core::transforms::cross_wigner;
use tfweyl_core::weights::{check_conditions, young_conjugate, Weight, WeightKind};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 1,
            CliError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Config(m) => format!("config error: {m}"),
            CliError::Numeric(m) => format!("numeric failure: {m}"),
            CliError::Io(e) => format!("i/o error: {e}"),
        }
    }
}

/// Pointer to an input field file with its content hash; embedded in every
/// artifact produced from it.
#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub name: String,
    pub file: String,
    pub sha256: String,
}

fn numeric<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Numeric(format!("serialize: {e}")))?;
    bytes.push(b'\n');
    fs::write(path, bytes)?;
    Ok(())
}

fn write_input_field(
    dir: &Path,
    name: &str,
    f: &SampledFunction,
    provenance: &str,
) -> Result<InputRecord, CliError> {
    let file = dir.join(format!("{name}.fld"));
    let mut bytes = Vec::new();
    fieldio::write_sampled(&mut bytes, f).map_err(CliError::Io)?;
    fs::write(&file, &bytes)?;
    #[derive(Serialize)]
    struct Sidecar<'a> {
        fixture: &'a str,
        truncated: bool,
        dims: usize,
    }
    write_json(
        &dir.join(format!("{name}.json")),
        &Sidecar { fixture: provenance, truncated: f.truncated, dims: f.grid.dims() },
    )?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(InputRecord {
        name: name.into(),
        file: file.to_string_lossy().into_owned(),
        sha256: format!("{:x}", hasher.finalize()),
    })
}

fn tensor_gaussian(grid: &Grid, width: f64) -> SampledFunction {
    let (n0, n1) = (grid.axes[0].n, grid.axes[1].n);
    let mut w = SampledFunction::zeros(grid.clone());
    for i in 0..n0 {
        let x = grid.axes[0].point(i);
        for j in 0..n1 {
            let xi = grid.axes[1].point(j);
            w.values[i * n1 + j] =
                Complex64::new((-(x * x + xi * xi) / (2.0 * width * width)).exp(), 0.0);
        }
    }
    w
}

fn named_symbol(case: &str, grid: &Grid) -> Result<SampledFunction, CliError> {
    match case {
        "wigner-gaussian" => {
            let n1 = grid.axes[1].n;
            let scale = 2.0 * std::f64::consts::PI.sqrt();
            let mut a = SampledFunction::zeros(grid.clone());
            for i in 0..grid.axes[0].n {
                let x = grid.axes[0].point(i);
                for j in 0..n1 {
                    let xi = grid.axes[1].point(j);
                    a.values[i * n1 + j] =
                        Complex64::new(scale * (-(x * x + xi * xi)).exp(), 0.0);
                }
            }
            Ok(a)
        }
        "identity" => Fixture::constant(1.0).sample(grid).map_err(numeric),
        "chirp" => Fixture::chirp_symbol(-1.0, Fixture::gaussian(0.0, 1.0, 0.0))
            .sample(grid)
            .map_err(numeric),
        other => Err(CliError::Config(format!(
            "unknown symbol case '{other}' (expected wigner-gaussian | identity | chirp)"
        ))),
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate().map_err(CliError::Config)?;
    fs::create_dir_all(&cfg.out)?;
    match cfg.command {
        Command::Identities => run_identities(cfg),
        Command::Diagnose => run_diagnose(cfg),
        Command::Operator => run_operator(cfg),
        Command::Weights => run_weights(cfg),
        Command::Demo => run_demo(cfg),
    }
}

#[derive(Serialize)]
struct IdentitiesArtifact<'a> {
    config: &'a RunConfig,
    inputs: Vec<InputRecord>,
    checks: Vec<CheckResult>,
    all_pass: bool,
}

fn run_identities(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = Grid::line(cfg.n, cfg.l).map_err(numeric)?;
    let window = Fixture::gaussian(0.0, 1.0, 0.0).sample(&grid).map_err(numeric)?;
    let inputs = vec![write_input_field(
        &cfg.out,
        "window",
        &window,
        "gaussian(center=0, width=1, modulation=0)",
    )?];

    let checks = identities::run_identity_suite(&SuiteConfig {
        n: cfg.n,
        half_extent: cfg.l,
        seed: cfg.seed,
    });
    let all_pass = checks.iter().all(|c| c.pass);

    // norm sweep CSV: p, q, λ, value for a Gaussian against the window
    let f = Fixture::gaussian(0.3, 1.0, 0.5).sample(&grid).map_err(numeric)?;
    let mut csv = String::from("p,q,lambda,value\n");
    for p in [1.0, 2.0, f64::INFINITY] {
        for q in [1.0, 2.0, f64::INFINITY] {
            for lambda in [0.0, 0.5, 1.0] {
                let spec = MixedNormSpec::new(p, q, lambda, cfg.weight).map_err(numeric)?;
                let value = modulation_norm(&f, &window, &spec).map_err(numeric)?;
                let fmt = |e: f64| {
                    if e.is_infinite() { "inf".to_string() } else { format!("{e}") }
                };
                csv.push_str(&format!("{},{},{lambda},{value:.17e}\n", fmt(p), fmt(q)));
            }
        }
    }
    fs::write(cfg.out.join("norms.csv"), csv)?;

    write_json(
        &cfg.out.join("identities.json"),
        &IdentitiesArtifact { config: cfg, inputs, checks: checks.clone(), all_pass },
    )?;

    for c in &checks {
        println!(
            "{} {}: {:.3e} (tol {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.error,
            c.tolerance
        );
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Numeric("identity suite has failing checks".into()))
    }
}

#[derive(Serialize)]
struct DiagnoseArtifact<'a> {
    config: &'a RunConfig,
    inputs: Vec<InputRecord>,
    report: DecayReport,
}

fn run_diagnose(cfg: &RunConfig) -> Result<(), CliError> {
    let case = cfg.case.as_deref().unwrap_or("wigner-gaussian");
    let grid = Grid::square(cfg.n, cfg.l).map_err(numeric)?;
    let symbol = named_symbol(case, &grid)?;
    let window = tensor_gaussian(&grid, 0.6);

    let inputs = vec![
        write_input_field(&cfg.out, "symbol", &symbol, case)?,
        write_input_field(&cfg.out, "window", &window, "tensor gaussian(width=0.6)")?,
    ];

    let report = diagnostics::weyl_compactness_test(
        &symbol,
        &window,
        &cfg.weight,
        &cfg.lambda_list,
        &cfg.mu_grid(),
        cfg.stride,
        HeuristicParams::default(),
    )
    .map_err(numeric)?;

    let mut csv = String::from("lambda,mu_star\n");
    for (l, star) in report.lambda_list.iter().zip(&report.mu_star) {
        match star {
            Some(m) => csv.push_str(&format!("{l},{m}\n")),
            None => csv.push_str(&format!("{l},\n")),
        }
    }
    fs::write(cfg.out.join("mu_star.csv"), csv)?;

    println!("verdict for '{case}': {:?}", report.verdict);
    write_json(
        &cfg.out.join("decay_report.json"),
        &DiagnoseArtifact { config: cfg, inputs, report },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct OperatorArtifact<'a> {
    config: &'a RunConfig,
    inputs: Vec<InputRecord>,
    case: String,
    eigenvalues: Vec<(f64, f64)>,
}

fn run_operator(cfg: &RunConfig) -> Result<(), CliError> {
    let case = cfg.case.as_deref().unwrap_or("rank-one");
    let grid = Grid::line(cfg.n, cfg.l).map_err(numeric)?;
    let mut inputs = Vec::new();
    let op: OperatorMatrix = match case {
        "identity" => {
            let one = Fixture::constant(1.0).sample(&grid).map_err(numeric)?;
            inputs.push(write_input_field(&cfg.out, "symbol", &one, "constant(1)")?);
            multiplication_operator(&one).map_err(numeric)?
        }
        "rank-one" => {
            let g = Fixture::gaussian(0.4, 1.0, 0.0).sample(&grid).map_err(numeric)?;
            let f = Fixture::gaussian(-0.3, 1.2, 0.5).sample(&grid).map_err(numeric)?;
            let a = cross_wigner(&g, &f).map_err(numeric)?.to_sampled();
            inputs.push(write_input_field(&cfg.out, "symbol", &a, "Wig(g,f), Gaussian pair")?);
            weyl_matrix(&a).map_err(numeric)?
        }
        "gaussian-localization" => {
            let psi = Fixture::gaussian(0.0, 1.0, 0.0).sample(&grid).map_err(numeric)?;
            let sgrid = stft_symbol_grid(grid.axes[0]);
            let mut a = SampledFunction::zeros(sgrid.clone());
            let n = cfg.n;
            for i in 0..n {
                let x = sgrid.axes[0].point(i);
                for j in 0..n {
                    let xi = sgrid.axes[1].point(j);
                    a.values[i * n + j] =
                        Complex64::new((-(x * x + xi * xi) / 2.0).exp(), 0.0);
                }
            }
            inputs.push(write_input_field(&cfg.out, "symbol", &a, "gaussian mask")?);
            localization_via_weyl(&a, &psi, &psi).map_err(numeric)?
        }
        "chirp" => {
            let a = Fixture::chirp_symbol(-1.0, Fixture::gaussian(0.0, 1.0, 0.0))
                .sample(&stft_symbol_grid(grid.axes[0]))
                .map_err(numeric)?;
            inputs.push(write_input_field(&cfg.out, "symbol", &a, "chirp e^{-2ixξ}f(ξ)")?);
            weyl_matrix(&a).map_err(numeric)?
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown operator case '{other}' (identity | rank-one | gaussian-localization | chirp)"
            )))
        }
    };

    let mut bytes = Vec::new();
    fieldio::write_operator(&mut bytes, &op).map_err(CliError::Io)?;
    fs::write(cfg.out.join("operator.fld"), &bytes)?;

    let eig = spectrum(&op, 16).map_err(numeric)?;
    let mut csv = String::from("index,re,im,modulus\n");
    for (i, l) in eig.iter().enumerate() {
        csv.push_str(&format!("{i},{:.17e},{:.17e},{:.17e}\n", l.re, l.im, l.norm()));
    }
    fs::write(cfg.out.join("spectrum.csv"), csv)?;

    write_json(
        &cfg.out.join("operator.json"),
        &OperatorArtifact {
            config: cfg,
            inputs,
            case: case.into(),
            eigenvalues: eig.iter().map(|l| (l.re, l.im)).collect(),
        },
    )?;
    println!("operator '{case}': leading eigenvalue modulus {:.6e}", eig[0].norm());
    Ok(())
}

#[derive(Serialize)]
struct WeightsArtifact<'a> {
    config: &'a RunConfig,
    conditions: tfweyl_core::weights::ConditionReport,
    conjugate: tfweyl_core::weights::ConjugateTable,
    pass: bool,
}

fn run_weights(cfg: &RunConfig) -> Result<(), CliError> {
    let report = check_conditions(&cfg.weight, 1e4, 400).map_err(numeric)?;
    // the conjugate of the Schwartz weight is finite only below t = c
    let t_hi = match cfg.weight.kind {
        WeightKind::Log1p => 0.9 * cfg.weight.c,
        _ => 3.0,
    };
    let t_grid: Vec<f64> = (0..16).map(|i| t_hi * i as f64 / 15.0).collect();
    let conjugate = young_conjugate(&cfg.weight, &t_grid, 100.0, 800).map_err(numeric)?;

    // α' is part of the contract only for the subadditive families
    let subadditive_required = matches!(cfg.weight.kind, WeightKind::Log1p | WeightKind::Power);
    let pass = report.alpha_ok
        && report.gamma_ok
        && report.delta_ok
        && report.beta_tail_bound.is_finite()
        && (!subadditive_required || report.alpha_prime_ok);

    println!(
        "α={} α'={} β={:.6}+{:.2e} γ={} δ={}",
        report.alpha_ok,
        report.alpha_prime_ok,
        report.beta_integral,
        report.beta_tail_bound,
        report.gamma_ok,
        report.delta_ok
    );
    write_json(
        &cfg.out.join("weights.json"),
        &WeightsArtifact { config: cfg, conditions: report, conjugate, pass },
    )?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Numeric("weight conditions failed".into()))
    }
}

#[derive(Serialize)]
struct DemoArtifact<'a> {
    config: &'a RunConfig,
    case: String,
    checks: Vec<CheckResult>,
    verdicts: Vec<(String, String)>,
    pass: bool,
}

const DEMO_CASES: [&str; 6] = [
    "rank-one",
    "chirp-weyl",
    "identity-symbol",
    "band-limited",
    "localization-identity",
    "moyal",
];

fn run_demo(cfg: &RunConfig) -> Result<(), CliError> {
    let cases: Vec<&str> = match cfg.case.as_deref() {
        Some(c) => {
            if !DEMO_CASES.contains(&c) {
                return Err(CliError::Config(format!(
                    "unknown demo case '{c}' (expected one of {DEMO_CASES:?})"
                )));
            }
            vec![c]
        }
        None => DEMO_CASES.to_vec(),
    };

    let suite = identities::run_identity_suite(&SuiteConfig {
        n: cfg.n,
        half_extent: cfg.l,
        seed: cfg.seed,
    });
    let pick = |names: &[&str]| -> Vec<CheckResult> {
        suite
            .iter()
            .filter(|c| names.contains(&c.name.as_str()))
            .cloned()
            .collect()
    };

    let mut all_pass = true;
    for case in cases {
        let (checks, verdicts, expect_ok) = demo_case(cfg, case, &pick)?;
        let pass = expect_ok && checks.iter().all(|c| c.pass);
        all_pass &= pass;
        for (what, verdict) in &verdicts {
            println!("demo {case}: {what} -> {verdict}");
        }
        write_json(
            &cfg.out.join(format!("demo_{case}.json")),
            &DemoArtifact { config: cfg, case: case.into(), checks, verdicts, pass },
        )?;
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Numeric("demo case failed".into()))
    }
}

type DemoOutcome = (Vec<CheckResult>, Vec<(String, String)>, bool);

fn demo_case(
    cfg: &RunConfig,
    case: &str,
    pick: &dyn Fn(&[&str]) -> Vec<CheckResult>,
) -> Result<DemoOutcome, CliError> {
    let heur = HeuristicParams::default();
    let lambda = default_lambda_list();
    let mu = default_mu_grid();
    match case {
        "rank-one" => Ok((pick(&["rank-one-action", "rank-one-spectrum"]), Vec::new(), true)),
        "moyal" => Ok((pick(&["moyal-hermite"]), Vec::new(), true)),
        "localization-identity" => Ok((
            pick(&["localization-identity", "localization-two-path"]),
            Vec::new(),
            true,
        )),
        "chirp-weyl" => {
            let grid = Grid::square(64, 6.0).map_err(numeric)?;
            let symbol = named_symbol("chirp", &grid)?;
            let window = tensor_gaussian(&grid, 0.6);
            let line = Grid::line(64, 6.0).map_err(numeric)?;
            let psi = Fixture::gaussian(0.0, 1.0, 0.0).sample(&line).map_err(numeric)?;
            let weyl = diagnostics::weyl_compactness_test(
                &symbol, &window, &cfg.weight, &lambda, &mu, 4, heur,
            )
            .map_err(numeric)?;
            let conv = diagnostics::convolutor_test_2d(
                &symbol, &window, &cfg.weight, &lambda, &mu, 4, heur,
            )
            .map_err(numeric)?;
            let loc = diagnostics::localization_compactness_test(
                &Fixture::chirp_symbol(-1.0, Fixture::gaussian(0.0, 1.0, 0.0)),
                &psi,
                &psi,
                &window,
                &cfg.weight,
                &lambda,
                &mu,
                4,
                heur,
            )
            .map_err(numeric)?;
            let expect = weyl.verdict == Verdict::Fail
                && conv.verdict != Verdict::Fail
                && loc.symbol_report.verdict == Verdict::CompactLike;
            Ok((
                pick(&["chirp-constant-cv", "chirp-mean"]),
                vec![
                    ("weyl".into(), format!("{:?}", weyl.verdict)),
                    ("convolutor".into(), format!("{:?}", conv.verdict)),
                    ("localization".into(), format!("{:?}", loc.symbol_report.verdict)),
                ],
                expect,
            ))
        }
        "identity-symbol" => {
            let grid = Grid::square(64, 6.0).map_err(numeric)?;
            let symbol = named_symbol("identity", &grid)?;
            let window = tensor_gaussian(&grid, 0.6);
            let weyl = diagnostics::weyl_compactness_test(
                &symbol, &window, &cfg.weight, &lambda, &mu, 4, heur,
            )
            .map_err(numeric)?;
            Ok((
                pick(&["localization-identity"]),
                vec![("weyl".into(), format!("{:?}", weyl.verdict))],
                weyl.verdict == Verdict::ContinuousLike,
            ))
        }
        "band-limited" => {
            let grid = Grid::line(128, 12.0).map_err(numeric)?;
            let f = Fixture::bump(0.5, 4.5, 3.0).sample(&grid).map_err(numeric)?;
            let w = cross_wigner(&f, &reflect(&f)).map_err(numeric)?.to_sampled();
            let wwin = tensor_gaussian(&w.grid, 0.6);
            let loc = diagnostics::localization_symbol_report(
                &w,
                &wwin,
                &Weight::log1p(),
                &lambda,
                &mu,
                4,
                heur,
            )
            .map_err(numeric)?;
            Ok((
                pick(&["bandlimit-support", "bandlimit-convolution"]),
                vec![("localization".into(), format!("{:?}", loc.verdict))],
                loc.verdict == Verdict::CompactLike,
            ))
        }
        other => Err(CliError::Config(format!("unknown demo case '{other}'"))),
    }
}

/// Cap the global thread pool from `TFWEYL_THREADS`, once.
pub fn configure_threads() {
    if let Ok(raw) = std::env::var("TFWEYL_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
}

/// Resolve the effective configuration from an optional JSON file and flag
/// overrides (flags win).
pub struct Overrides {
    pub n: Option<usize>,
    pub l: Option<f64>,
    pub stride: Option<usize>,
    pub weight_kind: Option<String>,
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub lambda: Option<String>,
    pub mu_max: Option<f64>,
    pub mu_step: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub case: Option<String>,
}

pub fn resolve_config(
    command: Command,
    config_path: Option<&Path>,
    ov: Overrides,
) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::defaults(command);
    if command == Command::Diagnose {
        // decay diagnostics default to the 64-point symbol grid
        cfg.n = 64;
        cfg.l = 6.0;
    }

    if let Some(path) = config_path {
        let raw = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
        let file: config::FileConfig = serde_json::from_str(&raw)
            .map_err(|e| CliError::Config(format!("parsing {}: {e}", path.display())))?;
        if let Some(v) = file.n {
            cfg.n = v;
        }
        if let Some(v) = file.l {
            cfg.l = v;
        }
        if let Some(v) = file.stride {
            cfg.stride = v;
        }
        if let Some(w) = file.weight {
            cfg.weight = w.build().map_err(CliError::Config)?;
        }
        if let Some(v) = file.lambda {
            cfg.lambda_list = v;
        }
        if let Some(v) = file.mu_max {
            cfg.mu_max = v;
        }
        if let Some(v) = file.mu_step {
            cfg.mu_step = v;
        }
        if let Some(v) = file.out {
            cfg.out = v;
        }
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if file.case.is_some() {
            cfg.case = file.case;
        }
    }

    if let Some(v) = ov.n {
        cfg.n = v;
    }
    if let Some(v) = ov.l {
        cfg.l = v;
    }
    if let Some(v) = ov.stride {
        cfg.stride = v;
    }
    if ov.weight_kind.is_some() || ov.a.is_some() || ov.c.is_some() {
        let kind = match ov.weight_kind.as_deref() {
            Some("log1p") => WeightKind::Log1p,
            Some("power") => WeightKind::Power,
            Some("logpower") => WeightKind::LogPower,
            Some(other) => {
                return Err(CliError::Config(format!("unknown weight kind '{other}'")))
            }
            None => cfg.weight.kind,
        };
        let spec = config::WeightSpec {
            kind,
            a: ov.a.unwrap_or(cfg.weight.a),
            c: ov.c.unwrap_or(cfg.weight.c),
        };
        cfg.weight = spec.build().map_err(CliError::Config)?;
    }
    if let Some(raw) = ov.lambda {
        cfg.lambda_list = config::parse_lambda_list(&raw).map_err(CliError::Config)?;
    }
    if let Some(v) = ov.mu_max {
        cfg.mu_max = v;
    }
    if let Some(v) = ov.mu_step {
        cfg.mu_step = v;
    }
    if let Some(v) = ov.out {
        cfg.out = v;
    }
    if let Some(v) = ov.seed {
        cfg.seed = v;
    }
    if ov.case.is_some() {
        cfg.case = ov.case;
    }
    Ok(cfg)
}
