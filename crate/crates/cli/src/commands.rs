//! Subcommand implementations. Each returns a rendered CSV document.

use mce_core::dominator::intro_domination;
use mce_core::estimator::{self, moment_diagnostics, prob_omega_complement};
use mce_core::euler::divergence_demo;
use mce_core::models::{uniform_grid, Violation};
use mce_core::reference::{
    cubic_reference, cubic_reference_params, gbm_moment, gbm_reference, gl_reference_params,
    gl_second_moment_reference, Method, ReferenceCache,
};
use mce_core::{
    check_domination, coupled_sweep, dominator_table, euler_path, fit_order, mce, BrownianPath, ConvergenceRow,
    RandomStream, ReferenceValue, Restriction, RunConfig, SdeModel,
};

use crate::config::{intro_applicable, ExperimentConfig, ModelName, ReferenceSource, Scale};
use crate::csv::{float, opt_float, parse, CsvDoc};
use crate::{resolve_config, CliError, Command, CommonArgs, DiagnoseKind, Outcome, ReferenceWhich, TableWhich};

/// Published second moments: Ginzburg–Landau and cubic.
pub const PUBLISHED_GL: f64 = 0.4945;
pub const PUBLISHED_CUBIC: f64 = 0.4529;

const COMMON_DEFAULTS: &[(&str, &str)] =
    &[("seed", "0"), ("scale", "desk"), ("payoff_power", "2"), ("max_exponent", "10")];

pub fn dispatch(command: &Command, common: &CommonArgs) -> Result<Outcome, CliError> {
    match command {
        Command::Table { which } => table(*which, command, common),
        Command::Convergence { errors_file } => convergence(errors_file.as_deref(), command, common),
        Command::Diagnose { kind } => diagnose(*kind, command, common),
        Command::Reference { which } => reference(*which, command, common),
        Command::ValidateModel => validate_model(command, common),
    }
}

fn config_with(common: &CommonArgs, defaults: &[(&str, &str)]) -> Result<ExperimentConfig, CliError> {
    let mut all: Vec<(&str, &str)> = COMMON_DEFAULTS.to_vec();
    all.extend_from_slice(defaults);
    resolve_config(common, &all)
}

fn run_config(cfg: &ExperimentConfig) -> Result<RunConfig, CliError> {
    Ok(RunConfig::with_workers(cfg.workers()?))
}

fn header(doc: &mut CsvDoc, command: &Command, cfg: &ExperimentConfig) -> Result<(), CliError> {
    doc.comment(format!("mce {}", env!("CARGO_PKG_VERSION")));
    doc.comment(format!("command: {}", command.label()));
    for line in cfg.echo() {
        doc.comment(format!("config: {line}"));
    }
    doc.comment(format!("seed: {}", cfg.seed()?));
    doc.comment(format!("scale: {}", if cfg.scale()? == Scale::Paper { "paper" } else { "desk" }));
    Ok(())
}

fn finish(doc: &CsvDoc, cfg: &ExperimentConfig, violation: bool) -> Outcome {
    Outcome { csv: doc.render(), violation, out: cfg.out() }
}

/// Fills scale-dependent reference sizes that were not configured.
fn apply_scale(cfg: &mut ExperimentConfig) -> Result<(), CliError> {
    let paper = cfg.scale()? == Scale::Paper;
    if cfg.get("reference_samples").is_none() {
        let m = if paper { mce_core::reference::PAPER_GL_SAMPLES } else { mce_core::reference::DESK_GL_SAMPLES };
        cfg.set("reference_samples", m.to_string());
    }
    if cfg.get("reference_steps").is_none() {
        let n = if paper { mce_core::reference::PAPER_CUBIC_STEPS } else { mce_core::reference::DESK_CUBIC_STEPS };
        cfg.set("reference_steps", n.to_string());
    }
    if cfg.get("riemann_points").is_none() {
        cfg.set("riemann_points", mce_core::reference::DEFAULT_RIEMANN_POINTS.to_string());
    }
    if cfg.get("rule").is_none() {
        cfg.set("rule", "left");
    }
    Ok(())
}

fn open_cache(cfg: &ExperimentConfig) -> Result<ReferenceCache, CliError> {
    Ok(match cfg.cache() {
        Some(path) => ReferenceCache::open(path)?,
        None => ReferenceCache::in_memory(),
    })
}

fn gl_reference(cfg: &ExperimentConfig, seed: u64, rc: &RunConfig) -> Result<ReferenceValue, CliError> {
    let samples = cfg.int("reference_samples", 0)?;
    let points = cfg.int("riemann_points", 0)? as usize;
    let rule = cfg.rule()?;
    let mut cache = open_cache(cfg)?;
    Ok(cache.get_or_compute(Method::ExplicitMc, &gl_reference_params(samples, seed, points, rule), || {
        gl_second_moment_reference(samples, seed, points, rule, rc)
    })?)
}

fn cubic_high_n(cfg: &ExperimentConfig, seed: u64, rc: &RunConfig) -> Result<ReferenceValue, CliError> {
    let steps = cfg.int("reference_steps", 0)? as usize;
    let mut cache = open_cache(cfg)?;
    Ok(cache
        .get_or_compute(Method::HighNMce, &cubic_reference_params(seed, steps), || cubic_reference(seed, steps, rc))?)
}

fn gbm_closed_form(cfg: &ExperimentConfig, p: u32) -> Result<ReferenceValue, CliError> {
    Ok(gbm_reference(cfg.float("a", 0.0)?, cfg.float("b", 0.0)?, cfg.float("x0", 1.0)?, cfg.float("T", 1.0)?, p)?)
}

/// Whether the model runs with the parameters the published and computed
/// references were obtained for.
fn has_reference_params(cfg: &ExperimentConfig, name: ModelName) -> Result<bool, CliError> {
    let t = cfg.float("T", 1.0)? == 1.0;
    Ok(match name {
        ModelName::GinzburgLandau => t && cfg.float("x0", 1.0)? == 1.0,
        ModelName::Cubic => t && cfg.float("x0", 0.0)? == 0.0 && cfg.float("sigma_bar", 1.0)? == 1.0,
        ModelName::Gbm => true,
    })
}

/// Reference value for `E[X_T^p]` and a one-line description.
fn resolve_reference(cfg: &ExperimentConfig, rc: &RunConfig) -> Result<(f64, String), CliError> {
    let source = cfg.reference()?;
    if let ReferenceSource::Value(v) = source {
        return Ok((v, format!("{} (configured)", float(v))));
    }
    let name = cfg.model_name()?;
    let p = cfg.payoff_power()?;
    if name == ModelName::Gbm {
        let r = gbm_closed_form(cfg, p)?;
        return Ok((r.value, format!("{} ({})", float(r.value), r.key())));
    }
    if p != 2 || !has_reference_params(cfg, name)? {
        return Err(CliError::Usage(format!(
            "no built-in reference for model {} with these parameters and p = {p}; pass --reference <value>",
            name.as_str()
        )));
    }
    match (source, name) {
        (ReferenceSource::Published, ModelName::GinzburgLandau) => {
            Ok((PUBLISHED_GL, format!("{} (published)", float(PUBLISHED_GL))))
        }
        (ReferenceSource::Published, _) => Ok((PUBLISHED_CUBIC, format!("{} (published)", float(PUBLISHED_CUBIC)))),
        (_, ModelName::GinzburgLandau) => {
            let r = gl_reference(cfg, cfg.reference_seed()?, rc)?;
            Ok((r.value, format!("{} +- {} ({})", float(r.value), opt_float(r.std_error), r.key())))
        }
        _ => {
            let r = cubic_high_n(cfg, cfg.reference_seed()?, rc)?;
            Ok((r.value, format!("{} +- {} ({})", float(r.value), opt_float(r.std_error), r.key())))
        }
    }
}

/// Coupled sweep, or one `mce` run per `N` when `M` is configured.
fn sweep(cfg: &ExperimentConfig, model: &SdeModel, seed: u64, rc: &RunConfig) -> Result<Vec<ConvergenceRow>, CliError> {
    let exps = cfg.exponents()?;
    let p = cfg.payoff_power()? as i32;
    let max_exp = cfg.int("max_exponent", estimator::DEFAULT_MAX_EXPONENT as u64)? as u32;
    let f = move |x: f64| x.powi(p);
    match cfg.samples()? {
        None => Ok(coupled_sweep(model, f, &exps, seed, max_exp, rc)?),
        Some(m) => exps
            .iter()
            .map(|&k| {
                if k > max_exp {
                    return Err(CliError::Usage(format!("N = 2^{k} exceeds the configured bound 2^{max_exp}")));
                }
                let n = 1usize << k;
                let e = mce(model, f, n, m, seed, rc)?;
                Ok(ConvergenceRow {
                    seed,
                    steps: n,
                    samples: m,
                    estimate: e.value,
                    restricted: e.restricted_value,
                    excluded_count: e.excluded_count,
                    abs_error: None,
                    effort: n as f64 * m as f64,
                })
            })
            .collect(),
    }
}

fn table(which: TableWhich, command: &Command, common: &CommonArgs) -> Result<Outcome, CliError> {
    let mut cfg = config_with(common, &[("seeds", "1"), ("n_min", "1"), ("n_max", "512"), ("reference", "published")])?;
    let name = match which {
        TableWhich::Ginzburg => ModelName::GinzburgLandau,
        TableWhich::Cubic => ModelName::Cubic,
    };
    if let Some(m) = cfg.get("model") {
        if ModelName::parse(m)? != name {
            return Err(CliError::Usage(format!("--which {} conflicts with model {m}", name.as_str())));
        }
    }
    cfg.set("model", name.as_str());
    apply_scale(&mut cfg)?;
    let model = cfg.model()?;
    let rc = run_config(&cfg)?;
    let (reference, described) = resolve_reference(&cfg, &rc)?;

    let mut doc = CsvDoc::new(&["seed", "model", "N", "M", "estimate", "restricted", "abs_error", "effort"]);
    header(&mut doc, command, &cfg)?;
    doc.comment(format!("reference: {described}"));
    for seed in cfg.seed_list()? {
        let rows = estimator::error_rows(&sweep(&cfg, &model, seed, &rc)?, reference)?;
        for r in rows {
            doc.row(vec![
                seed.to_string(),
                name.as_str().into(),
                r.steps.to_string(),
                r.samples.to_string(),
                float(r.estimate),
                float(r.restricted),
                opt_float(r.abs_error),
                float(r.effort),
            ]);
        }
    }
    Ok(finish(&doc, &cfg, false))
}

/// `(N, effort, error)` triples from a CSV with `abs_error` and either
/// `effort` or `N`.
fn read_errors(path: &std::path::Path) -> Result<Vec<(usize, f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let (head, rows) = parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let col = |name: &str| head.iter().position(|h| h == name);
    let err_col = col("abs_error").ok_or_else(|| CliError::Usage("errors file lacks an abs_error column".into()))?;
    let (n_col, effort_col) = (col("N"), col("effort"));
    if n_col.is_none() && effort_col.is_none() {
        return Err(CliError::Usage("errors file needs an N or effort column".into()));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| CliError::Usage(format!("invalid number {s:?} in errors file")));
    rows.iter()
        .map(|r| {
            let err = num(&r[err_col])?;
            let (n, effort) = match (n_col, effort_col) {
                (Some(i), Some(j)) => (num(&r[i])? as usize, num(&r[j])?),
                (Some(i), None) => {
                    let n = num(&r[i])?;
                    (n as usize, n.powi(3))
                }
                (None, Some(j)) => {
                    let e = num(&r[j])?;
                    (e.cbrt().round() as usize, e)
                }
                (None, None) => unreachable!("checked above"),
            };
            Ok((n, effort, err))
        })
        .collect()
}

fn convergence(
    errors_file: Option<&std::path::Path>,
    command: &Command,
    common: &CommonArgs,
) -> Result<Outcome, CliError> {
    let mut cfg = config_with(
        common,
        &[("model", "ginzburg"), ("seeds", "10"), ("n_min", "16"), ("n_max", "512"), ("reference", "published")],
    )?;
    let mut comments = Vec::new();
    let points = match errors_file {
        Some(path) => read_errors(path)?,
        None => {
            apply_scale(&mut cfg)?;
            let model = cfg.model()?;
            let rc = run_config(&cfg)?;
            if cfg.steps()?.len() < 3 {
                return Err(CliError::Usage("convergence needs at least 3 step counts".into()));
            }
            let (reference, described) = resolve_reference(&cfg, &rc)?;
            comments.push(format!("reference: {described}"));
            let sweeps = cfg
                .seed_list()?
                .into_iter()
                .map(|seed| Ok(estimator::error_rows(&sweep(&cfg, &model, seed, &rc)?, reference)?))
                .collect::<Result<Vec<_>, CliError>>()?;
            comments.push(format!("abs_error: median over {} seeds", sweeps.len()));
            let medians = estimator::median_errors(&sweeps)?;
            medians.iter().zip(&sweeps[0]).map(|(&(n, e), row)| (n, row.effort, e)).collect()
        }
    };
    if points.len() < 3 {
        return Err(CliError::Usage(format!("convergence needs at least 3 rows, got {}", points.len())));
    }
    let pairs: Vec<(f64, f64)> = points.iter().map(|&(_, effort, err)| (effort, err)).collect();
    let fit = fit_order(&pairs).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut doc = CsvDoc::new(&["N", "effort", "abs_error", "line_1_6", "line_1_3", "line_1_2"]);
    header(&mut doc, command, &cfg)?;
    for c in comments {
        doc.comment(c);
    }
    doc.comment(format!(
        "fit: slope={} intercept={} r_squared={} order={} points={}",
        float(fit.slope),
        float(fit.intercept),
        float(fit.r_squared),
        float(fit.order()),
        fit.points.len()
    ));
    doc.comment("order lines: anchored at the first row, error * (effort / effort_0)^(-k) for k = 1/6, 1/3, 1/2");
    let (_, e0, err0) = points[0];
    for &(n, effort, err) in &points {
        let line = |k: f64| float(err0 * (effort / e0).powf(-k));
        doc.row(vec![n.to_string(), float(effort), float(err), line(1.0 / 6.0), line(1.0 / 3.0), line(0.5)]);
    }
    Ok(finish(&doc, &cfg, false))
}

fn diagnose(kind: DiagnoseKind, command: &Command, common: &CommonArgs) -> Result<Outcome, CliError> {
    match kind {
        DiagnoseKind::Dominator => {
            let cfg =
                config_with(common, &[("model", "ginzburg"), ("seeds", "10"), ("n_min", "16"), ("n_max", "256")])?;
            dominator_campaign(&cfg, command)
        }
        DiagnoseKind::Moments => {
            let mut cfg = config_with(
                common,
                &[("model", "cubic"), ("n_min", "32"), ("n_max", "512"), ("samples", "10000"), ("event", "auto")],
            )?;
            let model = cfg.model()?;
            let event = cfg.event(&model)?;
            cfg.set("event", if event == Restriction::BrownianSup { "brownian-sup" } else { "dominator" });
            moments(&cfg, command, &model, event)
        }
        DiagnoseKind::OmegaProb => {
            let cfg =
                config_with(common, &[("model", "ginzburg"), ("n_min", "32"), ("n_max", "256"), ("samples", "10000")])?;
            omega_prob(&cfg, command)
        }
        DiagnoseKind::Divergence => {
            let cfg = config_with(common, &[("model", "cubic"), ("x0", "10"), ("steps", "10"), ("threshold", "1e50")])?;
            divergence(&cfg, command)
        }
        DiagnoseKind::Intro => {
            let cfg = config_with(common, &[("model", "cubic"), ("seeds", "1000"), ("n_min", "16"), ("n_max", "256")])?;
            intro(&cfg, command)
        }
    }
}

/// Increments of replicate 1 of `seed`: dyadic for powers of two, fresh
/// otherwise.
fn replicate_increments(stream: RandomStream, horizon: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps.is_power_of_two() {
        let path = BrownianPath::sample(stream, horizon, steps.trailing_zeros())?;
        Ok(path.increments(steps)?)
    } else {
        Ok(stream.fresh_increments(horizon, steps))
    }
}

fn dominator_campaign(cfg: &ExperimentConfig, command: &Command) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let name = cfg.model_name()?.as_str();
    let steps = cfg.steps()?;
    let mut doc = CsvDoc::new(&["seed", "N", "model", "n_max", "violations", "omega_N_member"]);
    header(&mut doc, command, cfg)?;
    let (mut total, mut checked) = (0usize, 0usize);
    let mut rows = Vec::new();
    for seed in cfg.seed_list()? {
        for &n in &steps {
            let stream = RandomStream::new(seed, 1);
            let xi = model.initial().sample(&stream);
            let incs = replicate_increments(stream, model.horizon(), n)?;
            let traj = euler_path(&model, n, &incs, xi)?;
            let trace = dominator_table(&traj);
            let violations = check_domination(&trace, &traj).len();
            total += violations;
            checked += trace.omega_flags.iter().filter(|&&f| f).count();
            rows.push(vec![
                seed.to_string(),
                n.to_string(),
                name.into(),
                trace.last_in_event().map_or_else(|| "none".into(), |k| k.to_string()),
                violations.to_string(),
                trace.in_omega().to_string(),
            ]);
        }
    }
    doc.comment(format!(
        "summary: violations={total} steps_in_event={checked} tolerance={}",
        mce_core::dominator::DOMINATION_TOLERANCE
    ));
    for r in rows {
        doc.row(r);
    }
    Ok(finish(&doc, cfg, total > 0))
}

fn moments(
    cfg: &ExperimentConfig,
    command: &Command,
    model: &SdeModel,
    event: Restriction,
) -> Result<Outcome, CliError> {
    let p = cfg.payoff_power()? as f64;
    let samples = cfg.samples()?.unwrap_or(10_000);
    let rc = run_config(cfg)?;
    let rows = moment_diagnostics(model, p, &cfg.steps()?, samples, cfg.seed()?, event, &rc)?;
    let mut doc = CsvDoc::new(&["model", "p", "N", "M", "restricted_moment", "finite_fraction"]);
    header(&mut doc, command, cfg)?;
    let values: Vec<f64> = rows.iter().map(|r| r.restricted_moment).collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    doc.comment(format!("summary: max/min={}", float(max / min)));
    let name = cfg.model_name()?.as_str();
    for r in rows {
        doc.row(vec![
            name.into(),
            float(r.p),
            r.steps.to_string(),
            r.samples.to_string(),
            float(r.restricted_moment),
            float(r.finite_fraction),
        ]);
    }
    Ok(finish(&doc, cfg, false))
}

fn omega_prob(cfg: &ExperimentConfig, command: &Command) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let samples = cfg.samples()?.unwrap_or(10_000);
    let rc = run_config(cfg)?;
    let seed = cfg.seed()?;
    let probs = cfg
        .steps()?
        .into_iter()
        .map(|n| prob_omega_complement(&model, n, samples, seed, &rc))
        .collect::<Result<Vec<_>, _>>()?;
    let mut doc = CsvDoc::new(&["model", "N", "M", "p_complement", "std_err"]);
    header(&mut doc, command, cfg)?;
    let nonincreasing = probs
        .windows(2)
        .all(|w| w[1].p_complement <= w[0].p_complement + 3.0 * (w[0].std_error + w[1].std_error).max(0.0));
    doc.comment(format!("summary: nonincreasing_within_3se={nonincreasing}"));
    let name = cfg.model_name()?.as_str();
    for p in probs {
        doc.row(vec![
            name.into(),
            p.steps.to_string(),
            p.samples.to_string(),
            float(p.p_complement),
            float(p.std_error),
        ]);
    }
    Ok(finish(&doc, cfg, false))
}

fn divergence(cfg: &ExperimentConfig, command: &Command) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let x0 = model
        .initial()
        .constant()
        .ok_or_else(|| CliError::Usage("divergence needs a constant starting point".into()))?;
    let threshold = cfg.float("threshold", 1e50)?;
    let mut doc = CsvDoc::new(&["model", "x0", "N", "T", "threshold", "steps_to_exceed"]);
    header(&mut doc, command, cfg)?;
    let name = cfg.model_name()?.as_str();
    for n in cfg.steps()? {
        let report = divergence_demo(&model, x0, n, threshold)?;
        doc.row(vec![
            name.into(),
            float(x0),
            n.to_string(),
            float(model.horizon()),
            float(threshold),
            report.steps_to_exceed.map_or_else(|| "none".into(), |k| k.to_string()),
        ]);
    }
    Ok(finish(&doc, cfg, false))
}

fn intro(cfg: &ExperimentConfig, command: &Command) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    if !intro_applicable(&model) {
        return Err(CliError::Usage(format!(
            "the intro bound applies only to the cubic model with sigma_bar=1 and x0=0, not {}",
            model.name()
        )));
    }
    let exps = cfg.exponents()?;
    let mut doc = CsvDoc::new(&["seed", "N", "in_event", "bound_holds", "abs_y_n", "bound"]);
    header(&mut doc, command, cfg)?;
    let mut failures = 0usize;
    let mut rows = Vec::new();
    for seed in cfg.seed_list()? {
        for &k in &exps {
            let n = 1usize << k;
            let path = BrownianPath::sample(RandomStream::new(seed, 1), model.horizon(), k + 2)?;
            let traj = euler_path(&model, n, &path.increments(n)?, 0.0)?;
            let r = intro_domination(&traj, &path)?;
            failures += usize::from(r.bound_holds == Some(false));
            rows.push(vec![
                seed.to_string(),
                n.to_string(),
                r.in_event.to_string(),
                r.bound_holds.map_or_else(|| "none".into(), |b| b.to_string()),
                float(traj.terminal().abs()),
                float(r.bound),
            ]);
        }
    }
    doc.comment(format!("summary: bound_failures={failures}"));
    for r in rows {
        doc.row(r);
    }
    Ok(finish(&doc, cfg, failures > 0))
}

fn reference(which: ReferenceWhich, command: &Command, common: &CommonArgs) -> Result<Outcome, CliError> {
    let model_default = match which {
        ReferenceWhich::Gl => "ginzburg",
        ReferenceWhich::Cubic => "cubic",
        ReferenceWhich::Gbm => "gbm",
    };
    let mut cfg = config_with(common, &[("model", model_default)])?;
    if cfg.model_name()?.as_str() != model_default {
        return Err(CliError::Usage(format!(
            "reference --which conflicts with model {}",
            cfg.get("model").unwrap_or("")
        )));
    }
    apply_scale(&mut cfg)?;
    let rc = run_config(&cfg)?;
    let seed = cfg.seed()?;
    let r = match which {
        ReferenceWhich::Gl => gl_reference(&cfg, seed, &rc)?,
        ReferenceWhich::Cubic => cubic_high_n(&cfg, seed, &rc)?,
        ReferenceWhich::Gbm => {
            cfg.model()?;
            let p = cfg.payoff_power()?;
            gbm_moment(cfg.float("a", 0.0)?, cfg.float("b", 0.0)?, cfg.float("x0", 1.0)?, cfg.float("T", 1.0)?, p)?;
            gbm_closed_form(&cfg, p)?
        }
    };
    let mut doc = CsvDoc::new(&["which", "method", "value", "std_error", "params"]);
    header(&mut doc, command, &cfg)?;
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    doc.row(vec![model_default.into(), r.method.to_string(), float(r.value), opt_float(r.std_error), params.join(" ")]);
    Ok(finish(&doc, &cfg, false))
}

fn validate_model(command: &Command, common: &CommonArgs) -> Result<Outcome, CliError> {
    let cfg = config_with(
        common,
        &[("model", "ginzburg"), ("grid_min", "-10"), ("grid_max", "10"), ("grid_step", "0.1"), ("pairs", "40401")],
    )?;
    let model = cfg.model()?;
    let (lo, hi, step) = (cfg.float("grid_min", -10.0)?, cfg.float("grid_max", 10.0)?, cfg.float("grid_step", 0.1)?);
    let valid_grid = lo <= hi && step > 0.0;
    if !valid_grid {
        return Err(CliError::Usage("validation grid needs grid_min <= grid_max and grid_step > 0".into()));
    }
    let report = model.validate_growth(&uniform_grid(lo, hi, step), cfg.int("pairs", 40_401)? as usize)?;
    let count = |pred: fn(&Violation) -> bool| report.violations.iter().filter(|v| pred(v)).count().to_string();
    let mut doc = CsvDoc::new(&[
        "model",
        "grid_min",
        "grid_max",
        "points",
        "pairs",
        "growth_violations",
        "one_sided_violations",
        "diffusion_violations",
        "passed",
    ]);
    header(&mut doc, command, &cfg)?;
    doc.comment(format!("growth: L={} delta={}", float(model.growth_l()), float(model.growth_delta())));
    doc.row(vec![
        cfg.model_name()?.as_str().into(),
        float(report.range.0),
        float(report.range.1),
        report.points.to_string(),
        report.pairs.to_string(),
        count(|v| matches!(v, Violation::Growth { .. })),
        count(|v| matches!(v, Violation::OneSidedLipschitz { .. })),
        count(|v| matches!(v, Violation::DiffusionLipschitz { .. })),
        report.passed().to_string(),
    ]);
    Ok(finish(&doc, &cfg, !report.passed()))
}
