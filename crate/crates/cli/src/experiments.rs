use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use dhlab::analysis::{mean_value_brute, omega_estimate, OmegaMethod, OmegaOptions};
use dhlab::arcs::minor_sup_sweep;
use dhlab::counting::{
    asymptotic_error_scan_with, count_solutions_many, count_solutions_naive, window_measures,
    NAIVE_BUDGET,
};
use dhlab::forms::DEFAULT_HALF_BUDGET;
use dhlab::kernels::{sandwich_sweep, sandwich_truncation};
use dhlab::numbers::is_prime;
use dhlab::{
    exponent_fit, mean_value_parseval, sieve_primes, BoxConvention, DiagonalForm, Growth,
    KernelKind, KernelSpec, SearchBox, SingularIntegralSpec, ToleranceParams, Window,
};

use crate::config::Config;
use crate::report::{Cell, RunReport};
use crate::CliError;

pub const KINDS: [&str; 8] = [
    "count",
    "scan-exceptional",
    "scan-asymptotic",
    "singular",
    "meanvalue",
    "arcs",
    "kernels-selfcheck",
    "primes",
];

const COMMON: [&str; 3] = ["experiment", "seed", "threads"];
const BOX_KEYS: [&str; 4] = ["box-convention", "P", "box-lo", "box-hi"];

fn allowed(kind: &str) -> Vec<&'static str> {
    let own: &[&str] = match kind {
        "count" => &["k", "lambda", "tau", "mu"],
        "scan-exceptional" => &["k", "lambda", "tau", "window-start", "window-length"],
        "scan-asymptotic" => &["k", "lambda", "tau", "N", "grid", "psi"],
        "singular" => &[
            "k",
            "lambda",
            "theta",
            "nodes",
            "nested-max",
            "mc-points",
            "mc-shifts",
        ],
        "meanvalue" => &["k", "s", "P", "R"],
        "arcs" => &["k", "lambda", "P", "S", "grid"],
        "kernels-selfcheck" => &["tau", "delta", "points", "t-min", "t-max", "tol"],
        "primes" => &["limit"],
        _ => &[],
    };
    let mut keys: Vec<&str> = COMMON.iter().chain(own).copied().collect();
    if matches!(kind, "count" | "scan-exceptional") {
        keys.extend(BOX_KEYS);
    }
    keys
}

/// A validated experiment, ready to run.
#[derive(Debug, Clone)]
pub enum Plan {
    Count {
        form: DiagonalForm,
        tau: f64,
        mu: Vec<f64>,
        search_box: SearchBox,
        oracle: bool,
    },
    ScanExceptional {
        form: DiagonalForm,
        tau: f64,
        window: Window,
        search_box: SearchBox,
    },
    ScanAsymptotic {
        form: DiagonalForm,
        tau: f64,
        n: f64,
        grid: usize,
        psi: Growth,
        options: OmegaOptions,
    },
    Singular {
        form: DiagonalForm,
        theta: Vec<f64>,
        options: OmegaOptions,
    },
    MeanValue {
        k: u32,
        s: u32,
        ps: Vec<u64>,
        r: Option<u64>,
        oracle: bool,
    },
    Arcs {
        form: DiagonalForm,
        ps: Vec<f64>,
        s_handle: Growth,
        grid: usize,
    },
    KernelsSelfcheck {
        tau: f64,
        delta: f64,
        ts: Vec<f64>,
        tol: f64,
    },
    Primes {
        limit: u64,
        oracle: bool,
    },
}

fn form(cfg: &Config) -> Result<DiagonalForm, CliError> {
    let k = cfg.get_or::<u32>("k", 3)?;
    Ok(DiagonalForm::new(k, cfg.require_reals("lambda")?)?)
}

fn tolerance(cfg: &Config) -> Result<f64, CliError> {
    Ok(ToleranceParams::new(cfg.require_real("tau")?)?.tau)
}

fn convention(cfg: &Config) -> Result<BoxConvention, CliError> {
    match cfg.raw("box-convention").unwrap_or("positive") {
        "positive" => Ok(BoxConvention::Positive),
        "zero-inclusive" => Ok(BoxConvention::ZeroInclusive),
        "symmetric" => Ok(BoxConvention::Custom),
        other => Err(CliError::Config(format!(
            "box-convention: `{other}` is not one of positive, zero-inclusive, symmetric"
        ))),
    }
}

fn broadcast(v: Vec<i64>, s: usize, key: &str) -> Result<Vec<i64>, CliError> {
    match v.len() {
        1 => Ok(vec![v[0]; s]),
        n if n == s => Ok(v),
        n => Err(CliError::Config(format!(
            "{key}: {n} entries for a form in {s} variables"
        ))),
    }
}

fn search_box(
    cfg: &Config,
    form: &DiagonalForm,
    window: Option<&Window>,
    tau: f64,
) -> Result<SearchBox, CliError> {
    let s = form.s();
    let conv = convention(cfg)?;
    if cfg.has("box-lo") || cfg.has("box-hi") {
        if cfg.has("P") || cfg.has("box-convention") {
            return Err(CliError::Config(
                "box-lo/box-hi exclude P and box-convention".into(),
            ));
        }
        let lo = broadcast(cfg.require_list("box-lo")?, s, "box-lo")?;
        let hi = broadcast(cfg.require_list("box-hi")?, s, "box-hi")?;
        return Ok(SearchBox::new(lo, hi)?);
    }
    if let Some(p) = cfg.get::<i64>("P")? {
        return Ok(match conv {
            BoxConvention::Positive => SearchBox::positive(s, p)?,
            BoxConvention::ZeroInclusive => SearchBox::zero_inclusive(vec![p; s])?,
            BoxConvention::Custom => SearchBox::new(vec![-p; s], vec![p; s])?,
        });
    }
    match window {
        Some(w) => Ok(SearchBox::covering_window(form, w, tau, conv)?),
        None => Err(CliError::Config(
            "one of P or box-lo/box-hi is required".into(),
        )),
    }
}

fn omega_options(cfg: &Config, seed: u64) -> Result<OmegaOptions, CliError> {
    let d = OmegaOptions::default();
    let o = OmegaOptions {
        nodes: cfg.get("nodes")?,
        nested_max: cfg.get_or("nested-max", d.nested_max)?,
        mc_points: cfg.get_or("mc-points", d.mc_points)?,
        mc_shifts: cfg.get_or("mc-shifts", d.mc_shifts)?,
        seed,
    };
    if o.nodes == Some(0) || o.mc_points == 0 || o.mc_shifts < 2 {
        return Err(CliError::Config(
            "nodes and mc-points must be positive and mc-shifts at least 2".into(),
        ));
    }
    Ok(o)
}

fn positive_grid(cfg: &Config, default: usize) -> Result<usize, CliError> {
    match cfg.get_or::<usize>("grid", default)? {
        0 => Err(CliError::Config("grid: must be positive".into())),
        g => Ok(g),
    }
}

fn jittered(seed: u64, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + rng.gen::<f64>()) / n as f64)
        .collect()
}

/// Validates every parameter of `kind` without doing any of the work.
pub fn plan(kind: &str, cfg: &Config, oracle: bool, seed: u64) -> Result<Plan, CliError> {
    if !KINDS.contains(&kind) {
        return Err(CliError::Config(format!("unknown experiment `{kind}`")));
    }
    cfg.check_keys(kind, &allowed(kind))?;
    if let Some(e) = cfg.raw("experiment") {
        if e != kind {
            return Err(CliError::Config(format!(
                "config is for `{e}` but `{kind}` was requested"
            )));
        }
    }
    if oracle && !matches!(kind, "count" | "meanvalue" | "primes") {
        return Err(CliError::Config(format!(
            "--oracle has no brute-force path for {kind}"
        )));
    }
    let plan = match kind {
        "count" => {
            let form = form(cfg)?;
            let tau = tolerance(cfg)?;
            let mu = cfg.require_reals("mu")?;
            let search_box = search_box(cfg, &form, None, tau)?;
            if form.s() != search_box.s() {
                return Err(CliError::Config("box and form dimensions differ".into()));
            }
            if oracle {
                if search_box.volume() > NAIVE_BUDGET {
                    return Err(dhlab::Error::resource(
                        "count_solutions_naive",
                        format!(
                            "box of {} points exceeds {NAIVE_BUDGET}",
                            search_box.volume()
                        ),
                    )
                    .into());
                }
            } else {
                search_box.check_budget("count_solutions", DEFAULT_HALF_BUDGET)?;
            }
            Plan::Count {
                form,
                tau,
                mu,
                search_box,
                oracle,
            }
        }
        "scan-exceptional" => {
            let form = form(cfg)?;
            let tau = tolerance(cfg)?;
            let window = Window::new(
                cfg.require_real("window-start")?,
                cfg.require_real("window-length")?,
            )?;
            let search_box = search_box(cfg, &form, Some(&window), tau)?;
            search_box.check_budget("representable_union", DEFAULT_HALF_BUDGET)?;
            Plan::ScanExceptional {
                form,
                tau,
                window,
                search_box,
            }
        }
        "scan-asymptotic" => {
            let psi: Growth = cfg.get_or("psi", Growth::LogLog)?;
            psi.validate()?;
            Plan::ScanAsymptotic {
                form: form(cfg)?,
                tau: tolerance(cfg)?,
                n: cfg.require_real("N")?,
                grid: positive_grid(cfg, 32)?,
                psi,
                options: omega_options(cfg, seed)?,
            }
        }
        "singular" => Plan::Singular {
            form: form(cfg)?,
            theta: cfg.require_reals("theta")?,
            options: omega_options(cfg, seed)?,
        },
        "meanvalue" => {
            let r = match cfg.raw("R") {
                None | Some("full") => None,
                Some(_) => Some(cfg.require::<u64>("R")?),
            };
            let ps: Vec<u64> = cfg.require_list("P")?;
            if ps.contains(&0) {
                return Err(CliError::Config("P: entries must be positive".into()));
            }
            Plan::MeanValue {
                k: cfg.get_or("k", 3)?,
                s: cfg.require("s")?,
                ps,
                r,
                oracle,
            }
        }
        "arcs" => {
            let form = form(cfg)?;
            if form.s() < 2 {
                return Err(CliError::Config("lambda: needs two coefficients".into()));
            }
            let ps = cfg.require_reals("P")?;
            if ps.iter().any(|&p| p < 2.0) {
                return Err(CliError::Config("P: entries must be at least 2".into()));
            }
            let s_handle: Growth = cfg.get_or("S", Growth::LOG)?;
            s_handle.validate()?;
            Plan::Arcs {
                form,
                ps,
                s_handle,
                grid: positive_grid(cfg, 1000)?,
            }
        }
        "kernels-selfcheck" => {
            let tau = ToleranceParams::new(cfg.real_or("tau", 1.0)?)?.tau;
            let delta = cfg.real_or("delta", 0.1)?;
            KernelSpec::new(KernelKind::KPlus, tau, delta)?;
            let points = cfg.get_or::<usize>("points", 200)?;
            let (lo, hi) = (cfg.real_or("t-min", -2.0)?, cfg.real_or("t-max", 2.0)?);
            let tol = cfg.real_or("tol", 5e-4)?;
            if points == 0 || lo >= hi || tol <= 0.0 {
                return Err(CliError::Config(
                    "kernels-selfcheck needs points > 0, t-min < t-max and tol > 0".into(),
                ));
            }
            Plan::KernelsSelfcheck {
                tau,
                delta,
                ts: jittered(seed, points, lo, hi),
                tol,
            }
        }
        "primes" => {
            let limit: u64 = cfg.require("limit")?;
            if limit > dhlab::numbers::SIEVE_LIMIT_MAX {
                return Err(dhlab::Error::resource(
                    "sieve_primes",
                    format!("limit {limit} exceeds {}", dhlab::numbers::SIEVE_LIMIT_MAX),
                )
                .into());
            }
            Plan::Primes { limit, oracle }
        }
        _ => unreachable!(),
    };
    Ok(plan)
}

fn box_summary(r: &mut RunReport, b: &SearchBox) {
    let cost = b.split();
    r.note_value("box_lo", json!(b.lo));
    r.note_value("box_hi", json!(b.hi));
    r.note("box_points", b.volume());
    r.note("split", cost.split);
    r.note("left_half", cost.left);
    r.note("right_half", cost.right);
}

fn floats(v: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(v.into_iter().map(|x| Cell::Float(x).to_json()).collect())
}

fn method_name(m: OmegaMethod) -> &'static str {
    match m {
        OmegaMethod::Closed => "closed",
        OmegaMethod::Nested => "nested",
        OmegaMethod::MonteCarlo => "monte_carlo",
    }
}

/// Outcome of a run: the report, and whether every self-check held.
pub struct Outcome {
    pub report: RunReport,
    pub passed: bool,
}

pub fn execute(kind: &str, plan: &Plan) -> Result<Outcome, CliError> {
    let mut passed = true;
    let report = match plan {
        Plan::Count {
            form,
            tau,
            mu,
            search_box,
            oracle,
        } => {
            let mut r = RunReport::new(kind, &["mu", "count"]);
            let counts = if *oracle {
                mu.iter()
                    .map(|&m| count_solutions_naive(form, m, *tau, search_box))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                count_solutions_many(form, mu, *tau, search_box)?
            };
            for (&m, c) in mu.iter().zip(counts) {
                r.push(vec![m.into(), c.into()]);
            }
            box_summary(&mut r, search_box);
            r
        }
        Plan::ScanExceptional {
            form,
            tau,
            window,
            search_box,
        } => {
            let m = window_measures(form, search_box, *tau, window)?;
            let mut r = RunReport::new(kind, &["start", "end"]);
            for &(a, b) in m.union.intervals() {
                r.push(vec![a.into(), b.into()]);
            }
            r.note("window_start", window.start);
            r.note("window_length", m.window_length);
            r.note("representable", m.representable);
            r.note("box_exceptional", m.exceptional);
            r.note("intervals", m.union.len());
            r.note("visited", m.stats.visited);
            box_summary(&mut r, search_box);
            r
        }
        Plan::ScanAsymptotic {
            form,
            tau,
            n,
            grid,
            psi,
            options,
        } => {
            let scan = asymptotic_error_scan_with(form, *n, *tau, *grid, *psi, options)?;
            let mut r = RunReport::new(kind, &["mu", "count", "main_term", "rel_error", "flagged"]);
            for row in &scan.rows {
                r.push(vec![
                    row.mu.into(),
                    row.count.into(),
                    row.main_term.into(),
                    row.rel_error.into(),
                    row.flagged.into(),
                ]);
            }
            r.note("N", scan.n);
            r.note("P", scan.p);
            r.note("psi", psi.to_string());
            r.note("threshold", scan.threshold);
            r.note("flagged_fraction", scan.flagged_fraction);
            r.note("measure_estimate", scan.measure_estimate);
            r.note("split", scan.cost.split);
            r.note("left_half", scan.cost.left);
            r.note("right_half", scan.cost.right);
            r
        }
        Plan::Singular {
            form,
            theta,
            options,
        } => {
            let mut r = RunReport::new(kind, &["theta", "omega", "error", "method", "evaluations"]);
            let mut total = 0u64;
            for &t in theta {
                let mut spec = SingularIntegralSpec::new(form.clone(), t);
                spec.options = *options;
                let e = omega_estimate(&spec)?;
                total += e.evaluations;
                r.push(vec![
                    t.into(),
                    e.value.into(),
                    e.error.into(),
                    method_name(e.method).into(),
                    e.evaluations.into(),
                ]);
            }
            r.note("evaluations", total);
            r
        }
        Plan::MeanValue {
            k,
            s,
            ps,
            r: smooth_r,
            oracle,
        } => {
            let mut r = RunReport::new(kind, &["P", "value"]);
            let mut pairs = Vec::new();
            for &p in ps {
                let v = if *oracle {
                    mean_value_brute(*k, *s, p, *smooth_r)?
                } else {
                    mean_value_parseval(*k, *s, p, *smooth_r)?
                };
                pairs.push((p as f64, v as f64));
                r.push(vec![p.into(), v.into()]);
            }
            if pairs.len() >= 3 {
                let fit = exponent_fit(&pairs)?;
                r.note("slope", fit.slope);
                r.note("intercept", fit.intercept);
                r.note("delta_estimate", fit.delta_estimate(*k, *s));
                r.note("max_abs_residual", fit.max_abs_residual);
            }
            r
        }
        Plan::Arcs {
            form,
            ps,
            s_handle,
            grid,
        } => {
            let profiles = minor_sup_sweep(form, ps, *s_handle, *grid)?;
            let columns: Vec<&'static str> =
                dhlab::arcs::MinorProfile::CSV_HEADER.split(',').collect();
            let mut r = RunReport::new(kind, &columns);
            for pr in &profiles {
                for row in &pr.rows {
                    r.push(vec![
                        row.p.into(),
                        row.alpha.into(),
                        row.class.class_name().into(),
                        row.q.into(),
                        row.a.into(),
                        row.residual.into(),
                        row.sup_ratio.into(),
                    ]);
                }
            }
            r.note_value("P", floats(profiles.iter().map(|p| p.p)));
            r.note_value("T", floats(profiles.iter().map(|p| p.t)));
            r.note_value("sup_ratio", floats(profiles.iter().map(|p| p.sup_ratio)));
            r.note_value("argmax", floats(profiles.iter().map(|p| p.argmax)));
            r.note(
                "decreasing",
                profiles.windows(2).all(|w| w[1].sup_ratio < w[0].sup_ratio),
            );
            r
        }
        Plan::KernelsSelfcheck {
            tau,
            delta,
            ts,
            tol,
        } => {
            let a = sandwich_truncation(*delta, *tol);
            let mut r = RunReport::new(
                kind,
                &[
                    "kernel",
                    "t",
                    "integral",
                    "lower_gap",
                    "upper_gap",
                    "tolerance",
                    "holds",
                ],
            );
            let mut nodes = 0usize;
            for kk in [KernelKind::KMinus, KernelKind::KPlus] {
                let spec = KernelSpec::new(kk, *tau, *delta)?;
                for res in sandwich_sweep(ts, &spec, a)? {
                    passed &= res.holds();
                    nodes = nodes.max(res.nodes);
                    r.push(vec![
                        kk.name().into(),
                        res.t.into(),
                        res.integral.into(),
                        res.lower_gap.into(),
                        res.upper_gap.into(),
                        res.tolerance().into(),
                        res.holds().into(),
                    ]);
                }
            }
            r.note("truncation", a);
            r.note("nodes", nodes);
            r.note("all_hold", passed);
            r
        }
        Plan::Primes { limit, oracle } => {
            let mut r = RunReport::new(kind, &["p"]);
            let primes: Vec<u64> = if *oracle {
                (2..=*limit).filter(|&n| is_prime(n)).collect()
            } else {
                sieve_primes(*limit)?.up_to(*limit).to_vec()
            };
            for &p in &primes {
                r.push(vec![p.into()]);
            }
            r.note("count", primes.len());
            r
        }
    };
    Ok(Outcome { report, passed })
}
