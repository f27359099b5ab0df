//! The five subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use singwave::data::{preset, DataError};
use singwave::evolution::{self, extinction_time, projection_condition, SimulationConfig, SimulationRun};
use singwave::laplace::tail_u2;
use singwave::spectrum::{find_eigenvalues, spectral_abscissa, sweep_grid, alpha_sweep, Branch, Eigenvalue};
use singwave::verify;
use singwave::{InitialData, Scheme, SpectralProblem, State};

use crate::output::{csv_writer, metadata, sink, write_json, Format};
use crate::{CliError, Common, ExtinctionArgs, RunArgs, SimulateArgs, SpectrumArgs, SweepArgs, VerifyArgs};

/// Extinction is declared when the threshold is crossed by this time.
const EXTINCTION_DEADLINE: f64 = 2.25;
/// Time at which the refinement levels are compared.
const REFINEMENT_TIME: f64 = 2.2;
const TAIL_WINDOW: [f64; 3] = [2.5, 3.0, 3.5];
const RESOLVENT_MIN_RATIO: f64 = 0.95;
const IDENTITY_TOL: f64 = 1e-8;

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn config(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn echo(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn problem(alpha: f64) -> Result<SpectralProblem, CliError> {
    SpectralProblem::new(alpha).map_err(config)
}

// ---------------------------------------------------------------------------
// spectrum

pub fn spectrum(c: &Common, a: SpectrumArgs) -> Result<(), CliError> {
    let alpha: f64 = c.file.require(a.alpha, "alpha")?;
    let kmax: usize = c.file.pick(a.kmax, "kmax", 20)?;
    let radius: f64 = c.file.pick(a.radius, "radius", 0.0)?;
    if !(radius >= 0.0) {
        return Err(config("radius must be non-negative"));
    }
    let p = problem(alpha)?;
    let mut evs = find_eigenvalues(&p, kmax, radius).map_err(compute)?;
    evs.sort_by(|x, y| (x.branch, x.value.im.abs(), x.value.re).partial_cmp(&(y.branch, y.value.im.abs(), y.value.re)).unwrap());

    let mut out = sink(c.out.as_deref())?;
    match c.format {
        Format::Csv => {
            let mut w = csv_writer(&mut *out);
            w.write_record(["index", "branch", "re", "im", "residual", "source"])?;
            for e in &evs {
                w.write_record([
                    e.index.to_string(),
                    e.branch.as_str().into(),
                    fmt(e.value.re),
                    fmt(e.value.im),
                    fmt(e.residual),
                    e.source.as_str().into(),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut meta = metadata("spectrum", echo(&[("alpha", json!(alpha)), ("kmax", json!(kmax)), ("radius", json!(radius))]), &[]);
            meta["empty_spectrum"] = json!(evs.is_empty());
            meta["spectral_abscissa"] = json!(spectral_abscissa(&evs));
            let rows: Vec<Value> = evs.iter().map(eigen_json).collect();
            write_json(&mut *out, &json!({ "metadata": meta, "eigenvalues": rows }))?;
        }
    }
    Ok(())
}

fn eigen_json(e: &Eigenvalue) -> Value {
    json!({
        "index": e.index,
        "branch": e.branch.as_str(),
        "re": e.value.re,
        "im": e.value.im,
        "residual": e.residual,
        "source": e.source.as_str(),
    })
}

/// Shortest representation that round-trips.
fn fmt(x: f64) -> String {
    format!("{x:?}")
}

// ---------------------------------------------------------------------------
// sweep

pub fn sweep(c: &Common, a: SweepArgs) -> Result<(), CliError> {
    let from: f64 = c.file.pick(a.from, "from", 1.1)?;
    let to: f64 = c.file.pick(a.to, "to", 2.9)?;
    let step: f64 = c.file.pick(a.step, "step", 0.01)?;
    let kmax: usize = c.file.pick(a.kmax, "kmax", 5)?;
    let at_integers = c.file.switch(a.at_integers, "at_integers")?;
    let refine = !c.file.switch(a.no_refine, "no_refine")?;
    if !(from > 0.0 && to >= from && step > 0.0) {
        return Err(config("need 0 < from <= to and step > 0"));
    }
    let alphas = sweep_grid(from, to, step, at_integers, refine);
    let sw = alpha_sweep(&alphas, kmax).map_err(compute)?;

    let mut out = sink(c.out.as_deref())?;
    match c.format {
        Format::Csv => {
            for warning in &sw.warnings {
                eprintln!("singwave: warning: {warning}");
            }
            let mut w = csv_writer(&mut *out);
            w.write_record(["alpha", "trajectory", "branch", "re", "im", "real_count"])?;
            for p in &sw.points {
                let count = real_count(&sw.real_counts, p.alpha);
                w.write_record([fmt(p.alpha), p.trajectory.to_string(), p.branch.as_str().into(), fmt(p.value.re), fmt(p.value.im), count.to_string()])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let cfg = echo(&[
                ("from", json!(from)),
                ("to", json!(to)),
                ("step", json!(step)),
                ("kmax", json!(kmax)),
                ("at_integers", json!(at_integers)),
                ("refine", json!(refine)),
            ]);
            let mut meta = metadata("sweep", cfg, &[]);
            meta["warnings"] = json!(sw.warnings);
            let points: Vec<Value> = sw
                .points
                .iter()
                .map(|p| json!({ "alpha": p.alpha, "trajectory": p.trajectory, "branch": p.branch.as_str(), "re": p.value.re, "im": p.value.im }))
                .collect();
            let counts: Vec<Value> = sw.real_counts.iter().map(|(a, n)| json!({ "alpha": a, "real_count": n })).collect();
            write_json(&mut *out, &json!({ "metadata": meta, "points": points, "real_counts": counts }))?;
        }
    }
    Ok(())
}

fn real_count(counts: &[(f64, usize)], alpha: f64) -> usize {
    counts.iter().find(|(a, _)| *a == alpha).map_or(0, |c| c.1)
}

// ---------------------------------------------------------------------------
// runs shared by simulate and extinction

struct Run {
    alpha: f64,
    preset: String,
    data: InitialData,
    cfg: SimulationConfig,
    projected: bool,
    integer_n: Option<usize>,
}

impl Run {
    fn echo(&self) -> Vec<(&'static str, Value)> {
        vec![
            ("alpha", json!(self.alpha)),
            ("preset", json!(self.preset)),
            ("n", json!(self.cfg.n)),
            ("dt", json!(self.cfg.dt)),
            ("t", json!(self.cfg.t_final)),
            ("scheme", json!(self.cfg.scheme.as_str())),
            ("project", json!(self.projected)),
        ]
    }
}

fn resolve_run(c: &Common, r: RunArgs) -> Result<Run, CliError> {
    let alpha: f64 = c.file.require(r.alpha, "alpha")?;
    let spec: String = c.file.pick(r.preset, "preset", "sine:1".into())?;
    let n: usize = c.file.pick(r.n, "n", 2000)?;
    let dt: f64 = c.file.pick(r.dt, "dt", 5e-4)?;
    let t_final: f64 = match r.t_final {
        Some(t) => t,
        None => c.file.get("t")?.unwrap_or(4.0),
    };
    let scheme: Scheme = c.file.pick::<String>(r.scheme, "scheme", "implicit-midpoint".into())?.parse().map_err(config)?;
    let projected = c.file.switch(r.project, "project")?;
    if n == 0 || !(dt > 0.0) || !(t_final > 0.0) || !dt.is_finite() || !t_final.is_finite() {
        return Err(config("need n >= 1, dt > 0 and t > 0"));
    }
    let p = problem(alpha)?;
    let integer_n = p.integer_n();
    if projected && integer_n.map_or(true, |k| k == 0) {
        return Err(config(format!("--project needs an integer alpha >= 2, got {alpha}")));
    }
    let mut data = match spec.strip_prefix("file:") {
        Some(path) => read_data(Path::new(path))?,
        None => preset(&spec, &p).map_err(|e| match e {
            DataError::UnknownPreset(_) | DataError::NoSuchMode { .. } => config(e),
            other => compute(other),
        })?,
    };
    if projected {
        data = evolution::project_out(&data, integer_n.unwrap_or(0)).map_err(compute)?;
    }
    Ok(Run {
        alpha,
        preset: spec,
        data,
        cfg: SimulationConfig::new(n, dt, t_final).with_scheme(scheme),
        projected,
        integer_n,
    })
}

/// CSV with columns `x,u0,u1`, `x` strictly increasing in `[0, 1]`.
fn read_data(path: &Path) -> Result<InitialData, CliError> {
    let mut rd = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| config(format!("{}: {e}", path.display())))?;
    let headers = rd.headers().map_err(config)?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| config(format!("{}: missing column `{name}`", path.display())));
    let (ix, i0, i1) = (col("x")?, col("u0")?, col("u1")?);
    let (mut x, mut u0, mut u1) = (Vec::new(), Vec::new(), Vec::new());
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(config)?;
        let get = |i: usize| -> Result<f64, CliError> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| config(format!("{}: bad number on data row {}", path.display(), line + 1)))
        };
        x.push(get(ix)?);
        u0.push(get(i0)?);
        u1.push(get(i1)?);
    }
    if x.is_empty() || x.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config(format!("{}: x must be non-empty and strictly increasing", path.display())));
    }
    InitialData::from_samples(&x, &u0, &u1, format!("file:{}", path.display())).map_err(config)
}

fn run_sim(run: &Run, cfg: &SimulationConfig) -> Result<SimulationRun, CliError> {
    evolution::simulate(run.alpha, &run.data, cfg).map_err(compute)
}

// ---------------------------------------------------------------------------
// simulate

pub fn simulate(c: &Common, a: SimulateArgs) -> Result<(), CliError> {
    let run = resolve_run(c, a.run)?;
    let t_final = run.cfg.t_final;
    let snapshots = match a.snapshots {
        Some(s) => s,
        None => match c.file.get::<String>("snapshots")? {
            Some(s) => s.split(',').map(|t| t.trim().parse().map_err(|_| config(format!("bad snapshot time `{t}`")))).collect::<Result<_, _>>()?,
            None => (0..).map(|i| 0.5 * i as f64).take_while(|&t| t <= t_final + 1e-12).collect(),
        },
    };
    if snapshots.iter().any(|&t| !(0.0..=t_final + 1e-12).contains(&t)) {
        return Err(config("snapshot times must lie in [0, t]"));
    }
    let energy_out = match a.energy_out {
        Some(p) => Some(p),
        None => match c.file.get::<String>("energy_out")? {
            Some(p) => Some(PathBuf::from(p)),
            None => c.out.as_ref().map(|p| {
                let mut s = p.clone().into_os_string();
                s.push(".energy.csv");
                PathBuf::from(s)
            }),
        },
    };
    let cfg = run.cfg.clone().with_snapshots(snapshots.clone());
    let sim = run_sim(&run, &cfg)?;

    let mut out = sink(c.out.as_deref())?;
    match c.format {
        Format::Csv => {
            write_snapshots(&mut *out, &sim)?;
            if let Some(p) = &energy_out {
                write_energy(p, &sim)?;
            }
        }
        Format::Json => {
            let mut cfg_echo = run.echo();
            cfg_echo.push(("snapshots", json!(snapshots)));
            let meta = metadata("simulate", echo(&cfg_echo), &[]);
            let xs = padded_nodes(&sim);
            let snaps: Vec<Value> = sim
                .snapshots
                .iter()
                .map(|(t, s)| json!({ "t": t, "u": padded(&s.u), "v": padded(&s.v) }))
                .collect();
            let body = json!({
                "metadata": meta,
                "x": xs,
                "snapshots": snaps,
                "energy": { "t": sim.trace.times, "E": sim.trace.energies },
                "max_energy_increase": sim.max_energy_increase,
            });
            write_json(&mut *out, &body)?;
            if let Some(p) = &energy_out {
                write_energy(p, &sim)?;
            }
        }
    }
    Ok(())
}

fn padded_nodes(sim: &SimulationRun) -> Vec<f64> {
    let n = sim.grid.n;
    (0..=n + 1).map(|i| i as f64 * sim.grid.h).collect()
}

/// Interior values with the Dirichlet zeros at both ends.
fn padded(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() + 2);
    out.push(0.0);
    out.extend_from_slice(v);
    out.push(0.0);
    out
}

fn write_snapshots(out: &mut dyn Write, sim: &SimulationRun) -> Result<(), CliError> {
    writeln!(out, "# singwave v1, alpha={}, N={}, dt={}", sim.alpha, sim.grid.n, sim.dt)?;
    let xs = padded_nodes(sim);
    for (k, (t, State { u, v })) in sim.snapshots.iter().enumerate() {
        if k > 0 {
            writeln!(out)?;
        }
        writeln!(out, "t,x,u,v")?;
        for ((x, u), v) in xs.iter().zip(padded(u)).zip(padded(v)) {
            writeln!(out, "{},{},{},{}", fmt(*t), fmt(*x), fmt(u), fmt(v))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn write_energy(path: &Path, sim: &SimulationRun) -> Result<(), CliError> {
    let mut file = sink(Some(path))?;
    let mut w = csv_writer(&mut *file);
    w.write_record(["t", "E"])?;
    for (t, e) in sim.trace.times.iter().zip(&sim.trace.energies) {
        w.write_record([fmt(*t), fmt(*e)])?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// extinction

pub fn extinction(c: &Common, a: ExtinctionArgs) -> Result<(), CliError> {
    let allow = c.file.switch(a.allow_noninteger, "allow_noninteger")?;
    let threshold: f64 = c.file.pick(a.threshold, "threshold", 1e-6)?;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(config("threshold must lie in (0, 1)"));
    }
    let run = resolve_run(c, a.run)?;
    if run.integer_n.is_none() && !allow {
        return Err(config(format!("alpha = {} is not an integer; pass --allow-noninteger", run.alpha)));
    }
    let (n, dt, t_final) = (run.cfg.n, run.cfg.dt, run.cfg.t_final);
    if t_final < REFINEMENT_TIME {
        return Err(config(format!("t must be at least {REFINEMENT_TIME}")));
    }

    let condition = run.integer_n.filter(|&k| k > 0).map(|k| projection_condition(&run.data, k));

    let levels = [((n / 4).max(1), 4.0 * dt), ((n / 2).max(1), 2.0 * dt), (n, dt)];
    let tail_applies = run.integer_n.map_or(false, |k| k > 0) && !run.projected && t_final >= TAIL_WINDOW[2];
    let mut refinement = Vec::new();
    let mut finest = None;
    for (i, &(ln, ldt)) in levels.iter().enumerate() {
        let mut cfg = SimulationConfig::new(ln, ldt, t_final).with_scheme(run.cfg.scheme);
        if i == 2 && tail_applies {
            cfg = cfg.with_snapshots(TAIL_WINDOW.to_vec());
        }
        let sim = run_sim(&run, &cfg)?;
        let ratio = energy_at(&sim, REFINEMENT_TIME) / sim.trace.energies[0];
        refinement.push(json!({
            "n": ln,
            "dt": ldt,
            "energy_ratio_at_2_2": ratio,
            "extinction_time": extinction_time(&sim, threshold),
        }));
        if i == 2 {
            finest = Some(sim);
        }
    }
    let sim = finest.expect("three levels");
    let ratios: Vec<f64> = refinement.iter().map(|r| r["energy_ratio_at_2_2"].as_f64().unwrap_or(f64::NAN)).collect();
    let monotone = ratios.windows(2).all(|w| w[1] < w[0]);
    let t_star = extinction_time(&sim, threshold);
    let extinct = t_star.map_or(false, |t| t <= EXTINCTION_DEADLINE);

    let tail = if tail_applies { Some(tail_comparison(&run, &sim)?) } else { None };
    let decay = if extinct { None } else { evolution::decay_rate(&sim.trace, (t_final / 2.0, t_final)).ok() };
    let abscissa = match run.integer_n {
        Some(0) => None,
        _ => spectral_abscissa(&find_eigenvalues(&problem(run.alpha)?, 1, 0.0).map_err(compute)?),
    };

    let mut cfg_echo = run.echo();
    cfg_echo.push(("threshold", json!(threshold)));
    cfg_echo.push(("allow_noninteger", json!(allow)));
    let report = json!({
        "metadata": metadata("extinction", echo(&cfg_echo), &[]),
        "verdict": if extinct { "extinction" } else { "no extinction" },
        "projection_condition": condition,
        "extinction_time": t_star,
        "refinement": refinement,
        "refinement_monotone": monotone,
        "tail": tail,
        "decay_rate": decay,
        "spectral_abscissa": abscissa,
    });

    let mut out = sink(c.out.as_deref())?;
    match c.format {
        Format::Json => write_json(&mut *out, &report)?,
        Format::Csv => {
            let mut w = csv_writer(&mut *out);
            w.write_record(["key", "value"])?;
            for key in ["verdict", "extinction_time", "refinement_monotone", "decay_rate", "spectral_abscissa"] {
                w.write_record([key, &scalar(&report[key])])?;
            }
            if let Some(cond) = &condition {
                let joined: Vec<String> = cond.iter().map(|v| fmt(*v)).collect();
                w.write_record(["projection_condition", &joined.join(";")])?;
            }
            for (i, r) in refinement.iter().enumerate() {
                w.write_record([format!("level{}_n", i + 1), scalar(&r["n"])])?;
                w.write_record([format!("level{}_dt", i + 1), scalar(&r["dt"])])?;
                w.write_record([format!("level{}_energy_ratio_at_2_2", i + 1), scalar(&r["energy_ratio_at_2_2"])])?;
                w.write_record([format!("level{}_extinction_time", i + 1), scalar(&r["extinction_time"])])?;
            }
            if let Some(t) = &report["tail"].as_object() {
                for (k, v) in t.iter() {
                    w.write_record([format!("tail_{k}"), scalar(v)])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn energy_at(sim: &SimulationRun, t: f64) -> f64 {
    let i = sim.trace.times.iter().position(|&s| s >= t - 1e-9).unwrap_or(sim.trace.times.len() - 1);
    sim.trace.energies[i]
}

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Largest relative L² distance between the run and `tail_u2` on the tail
/// window, next to the same distance for the exact standing wave `mode:1`.
fn tail_comparison(run: &Run, sim: &SimulationRun) -> Result<Value, CliError> {
    let k = run.integer_n.expect("integer alpha");
    let xs = sim.grid.nodes();
    let mut error: f64 = 0.0;
    for (t, s) in &sim.snapshots {
        let tail = tail_u2(&run.data, k, *t, &xs).map_err(compute)?;
        error = error.max(rel_l2(&s.u, &tail));
    }
    let p = problem(run.alpha)?;
    let bench_data = InitialData::mode(&p, 1).map_err(compute)?;
    let ev = find_eigenvalues(&p, 1, 0.0).map_err(compute)?.into_iter().find(|e| e.branch == Branch::Real).ok_or_else(|| compute("no real eigenvalue"))?;
    let cfg = SimulationConfig::new(sim.grid.n, sim.dt, TAIL_WINDOW[2]).with_scheme(sim.scheme).with_snapshots(TAIL_WINDOW.to_vec());
    let bench = evolution::simulate(run.alpha, &bench_data, &cfg).map_err(compute)?;
    let mut bench_err: f64 = 0.0;
    for (t, s) in &bench.snapshots {
        let exact: Vec<f64> = xs.iter().map(|&x| (ev.value.re * t).exp() * bench_data.u0(x)).collect();
        bench_err = bench_err.max(rel_l2(&s.u, &exact));
    }
    Ok(json!({ "error": error, "benchmark_error": bench_err, "ratio": error / bench_err }))
}

// ---------------------------------------------------------------------------
// verify

struct CheckRow {
    check: String,
    pass: bool,
    metric: f64,
    threshold: f64,
    detail: String,
}

pub fn verify(c: &Common, a: VerifyArgs) -> Result<(), CliError> {
    let which: String = c.file.pick(a.check, "check", "all".into())?;
    let seed: u64 = c.file.pick(a.seed, "seed", 7)?;
    let trials: Option<usize> = match a.trials {
        Some(t) => Some(t),
        None => c.file.get("trials")?,
    };
    let nmax: usize = c.file.pick(a.nmax, "nmax", 20)?;
    let nodes: usize = c.file.pick(a.nodes, "nodes", 1000)?;
    let alpha: f64 = c.file.pick(a.alpha, "alpha", 2.0)?;
    let sigma: f64 = c.file.pick(a.sigma, "sigma", 0.0)?;
    let eta: f64 = c.file.pick(a.eta, "eta", 5.0)?;
    let selected: Vec<&str> = match which.as_str() {
        "all" => vec!["hardy", "resolvent", "gupta", "identity"],
        w @ ("hardy" | "resolvent" | "gupta" | "identity") => vec![w],
        other => return Err(config(format!("unknown check `{other}`"))),
    };
    if nmax == 0 {
        return Err(config("nmax must be at least 1"));
    }
    if !(sigma >= 0.0 && sigma < alpha) || eta == 0.0 || nodes == 0 {
        return Err(config("resolvent probe needs 0 <= sigma < alpha, eta != 0 and nodes >= 1"));
    }

    let mut rows = Vec::new();
    let mut gupta_table = Vec::new();
    for check in &selected {
        match *check {
            "hardy" => {
                let t = trials.unwrap_or(100);
                let mut worst: f64 = 0.0;
                for (i, h) in verify::hardy_sweep(t, seed).iter().enumerate() {
                    worst = worst.max(h.ratio());
                    if !h.holds() {
                        rows.push(row(format!("hardy[{i}]"), false, h.ratio(), 1.0 + verify::HARDY_SLACK, format!("lhs={} rhs={}", h.lhs, h.rhs)));
                    }
                }
                let sine = verify::hardy_check_fn(|x| (std::f64::consts::PI * x).sin(), |x| std::f64::consts::PI * (std::f64::consts::PI * x).cos());
                worst = worst.max(sine.ratio());
                rows.push(row("hardy".into(), worst <= 1.0 + verify::HARDY_SLACK, worst, 1.0 + verify::HARDY_SLACK, format!("max lhs/rhs over {t} splines and sin(pi x), seed {seed}")));
            }
            "resolvent" => {
                let t = trials.unwrap_or(200);
                let r = verify::resolvent_bound_check(alpha, sigma, eta, t, nodes, seed).map_err(compute)?;
                rows.push(row(
                    "resolvent".into(),
                    r.worst_ratio >= RESOLVENT_MIN_RATIO,
                    r.worst_ratio,
                    RESOLVENT_MIN_RATIO,
                    format!("alpha={alpha} sigma={sigma} eta={eta} nodes={nodes} trials={t} seed={seed} bound={}", r.bound),
                ));
            }
            "gupta" => match verify::gupta_bound_check(nmax) {
                Ok(table) => {
                    let margin = table.iter().map(|r| r.margin()).fold(f64::INFINITY, f64::min);
                    rows.push(row("gupta".into(), true, margin, 0.0, format!("min margin 3/(2+n) - |mu0| over n=1..{nmax}")));
                    gupta_table = table;
                }
                Err(e) => rows.push(row("gupta".into(), false, f64::NAN, 0.0, e.to_string())),
            },
            "identity" => {
                for (label, data) in [("parabola", parabola()), ("velocity", velocity()), ("bump", InitialData::bump())] {
                    for n in 1..=3 {
                        let id = verify::lemma_condition_identity(&data, n).map_err(compute)?;
                        let tol = IDENTITY_TOL * id.data_norm.max(f64::MIN_POSITIVE);
                        rows.push(row(
                            format!("identity[{label},n={n}]"),
                            id.corrected <= tol,
                            id.corrected,
                            tol,
                            format!("H-pairing + mu_k * L2-pairing; without the factor -mu_k the gap is {:e}", id.literal),
                        ));
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    let failed = rows.iter().filter(|r| !r.pass).count();

    let mut out = sink(c.out.as_deref())?;
    match c.format {
        Format::Csv => {
            let mut w = csv_writer(&mut *out);
            if which == "gupta" && failed == 0 {
                w.write_record(["n", "abs_mu0", "bound", "margin"])?;
                for r in &gupta_table {
                    w.write_record([r.n.to_string(), fmt(r.value), fmt(r.bound), fmt(r.margin())])?;
                }
            } else {
                w.write_record(["check", "status", "metric", "threshold", "detail"])?;
                for r in &rows {
                    w.write_record([r.check.clone(), status(r.pass).into(), fmt(r.metric), fmt(r.threshold), r.detail.clone()])?;
                }
            }
            w.flush()?;
        }
        Format::Json => {
            let cfg = echo(&[
                ("check", json!(which)),
                ("trials", json!(trials)),
                ("nmax", json!(nmax)),
                ("nodes", json!(nodes)),
                ("alpha", json!(alpha)),
                ("sigma", json!(sigma)),
                ("eta", json!(eta)),
            ]);
            let checks: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "check": r.check, "status": status(r.pass), "metric": r.metric, "threshold": r.threshold, "detail": r.detail }))
                .collect();
            let mut body = json!({ "metadata": metadata("verify", cfg, &[seed]), "checks": checks, "failed": failed });
            if !gupta_table.is_empty() {
                body["gupta"] = json!(gupta_table);
            }
            write_json(&mut *out, &body)?;
        }
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn row(check: String, pass: bool, metric: f64, threshold: f64, detail: String) -> CheckRow {
    CheckRow { check, pass, metric, threshold, detail }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

/// `(x(1−x), 0)`
fn parabola() -> InitialData {
    InitialData::new(|x| x * (1.0 - x), |x| 1.0 - 2.0 * x, |_| 0.0, "parabola")
}

/// `(0, sin πx)`
fn velocity() -> InitialData {
    InitialData::new(|_| 0.0, |_| 0.0, |x| (std::f64::consts::PI * x).sin(), "velocity")
}
