use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use spherelok::approximation::{
    chebyshev_bound, filter, markov_bound, weak_limit_bound_literal, weak_limit_bound_rank, BoundCheck,
    SpectralSummary, Tail, WindowKind, WindowSpec,
};
use spherelok::perf::{loglog_slope, median_seconds};
use spherelok::sphere_basis::io::{self, CoeffFile};
use spherelok::sphere_basis::{epsilon, evaluate_on, psi_coefficients};
use spherelok::transform::{cache, dense_op_count_formula, Mode, NdctMode, OpCounter};
use spherelok::{BandParams, EigenSystem, HarmonicCoeffs, TransformPlan};

use crate::args::*;
use crate::failure::{at_path, Failure, Outcome};

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Dense => Mode::Dense,
        ModeArg::Fast => Mode::Fast,
    }
}

fn ndct(n: NdctArg) -> NdctMode {
    match n {
        NdctArg::Direct => NdctMode::Direct,
        NdctArg::Window => NdctMode::Window,
    }
}

fn band(n: usize, m: usize) -> Outcome<BandParams> {
    Ok(BandParams::new(n, m)?)
}

fn read_file(path: &Path) -> Outcome<CoeffFile> {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    io::read_coeffs(BufReader::new(file)).map_err(at_path(path))
}

fn write_file(path: &Path, contents: &CoeffFile) -> Outcome {
    let file = File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    io::write_coeffs(BufWriter::new(file), contents).map_err(at_path(path))
}

fn read_harmonic(path: &Path) -> Outcome<HarmonicCoeffs> {
    match read_file(path)? {
        CoeffFile::Harmonic(c) => Ok(c),
        CoeffFile::Localized(_) => Err(Failure::Format(format!(
            "{}: expected harmonic coefficients, found localized",
            path.display()
        ))),
    }
}

/// The eigen system named by `source`, falling back to the band of `input`.
fn system_for(source: &PlanSource, input: Option<BandParams>) -> Outcome<EigenSystem> {
    let system = match (&source.plan, source.n, input) {
        (Some(path), _, _) => cache::load(path).map_err(at_path(path))?,
        (None, Some(n), _) => EigenSystem::build(band(n, source.m.unwrap_or(0))?)?,
        (None, None, Some(p)) => EigenSystem::build(p)?,
        (None, None, None) => return Err(Failure::Usage("give --plan or --n/--m".into())),
    };
    if let Some(p) = input {
        system.params().ensure_same(&p)?;
    }
    Ok(system)
}

fn block_sizes(params: BandParams) -> String {
    params
        .orders()
        .map(|k| params.block_len(k).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn plan(cmd: &PlanCmd) -> Outcome {
    let params = band(cmd.n, cmd.m)?;
    if cmd.out.exists() {
        let existing = cache::load(&cmd.out).map_err(at_path(&cmd.out))?;
        if existing.params() == params {
            println!("verified existing plan {}", cmd.out.display());
            print_plan(params);
            return Ok(());
        }
        if !cmd.force {
            let p = existing.params();
            return Err(Failure::Usage(format!(
                "{} holds a plan for n = {}, m = {}; pass --force to replace it",
                cmd.out.display(),
                p.n(),
                p.m()
            )));
        }
    }
    let system = EigenSystem::build(params)?;
    // re-checks orthogonality before anything is written
    TransformPlan::dense(system.clone())?;
    cache::save(&cmd.out, &system).map_err(at_path(&cmd.out))?;
    println!("wrote plan {}", cmd.out.display());
    print_plan(params);
    Ok(())
}

fn print_plan(params: BandParams) {
    println!("n = {}, m = {}", params.n(), params.m());
    println!("dimension {}", params.dimension());
    println!("blocks {}", 2 * params.n() + 1);
    println!("block sizes (k = {}..{}): {}", params.n(), -(params.n() as i64), block_sizes(params));
}

pub fn analyze(cmd: &TransformCmd) -> Outcome {
    let c = read_harmonic(&cmd.input)?;
    let system = system_for(&cmd.source, Some(c.params()))?;
    let plan = TransformPlan::new(system, mode(cmd.mode), ndct(cmd.ndct))?;
    let d = plan.analyze(&c)?;
    let drift = (d.norm_sqr() - c.norm_sqr()).abs();
    if drift > 1e-12 * c.norm_sqr().max(1.0) {
        return Err(Failure::Numeric(format!("Parseval drift {drift:e}")));
    }
    write_file(&cmd.out, &CoeffFile::Localized(d))?;
    println!("analyzed {} coefficients ({:?} mode)", c.len(), plan.mode());
    if plan.mode() == Mode::Fast {
        println!("fast orders |k|: {:?}", plan.fast_orders());
    }
    Ok(())
}

pub fn synthesize(cmd: &TransformCmd) -> Outcome {
    let d = match read_file(&cmd.input)? {
        CoeffFile::Localized(d) => d,
        CoeffFile::Harmonic(_) => {
            return Err(Failure::Format(format!(
                "{}: expected localized coefficients, found harmonic",
                cmd.input.display()
            )))
        }
    };
    let system = system_for(&cmd.source, Some(d.params()))?;
    let plan = TransformPlan::new(system, Mode::Dense, ndct(cmd.ndct))?;
    let c = plan.synthesize(&d)?;
    write_file(&cmd.out, &CoeffFile::Harmonic(c))?;
    println!("synthesized {} coefficients", d.len());
    Ok(())
}

#[derive(Serialize)]
struct FilterReport {
    window: String,
    input_energy: f64,
    kept_energy: f64,
    removed_energy: f64,
    energy_error: f64,
    kept_epsilon: f64,
    removed_epsilon: f64,
    bound: Option<BoundReport>,
}

#[derive(Serialize)]
struct BoundReport {
    kind: &'static str,
    bound: f64,
    actual: f64,
}

pub fn filter_cmd(cmd: &FilterCmd) -> Outcome {
    let spec = WindowSpec::parse(&cmd.window)?;
    let c = read_harmonic(&cmd.input)?;
    let system = system_for(&cmd.source, Some(c.params()))?;
    let plan = TransformPlan::dense(system)?;
    let energy = c.norm_sqr();
    let eps = if energy > 0.0 { epsilon(&c) / energy } else { 0.0 };
    let window = spec.resolve(eps.clamp(-1.0, 1.0))?;
    let (kept, removed) = filter(&plan, &c, &window)?;
    let energy_error = (kept.norm_sqr() + removed.norm_sqr() - energy).abs();

    // bounds are stated for unit-norm input
    let bound = if energy > 0.0 {
        let mut unit = c.clone();
        unit.scale(Complex64::new(1.0 / energy.sqrt(), 0.0));
        let named = |kind, check: BoundCheck| BoundReport {
            kind,
            bound: check.bound,
            actual: check.actual,
        };
        match window.kind() {
            WindowKind::LowerTail { a } => Some(named("lower tail (1+ε)/a", markov_bound(&plan, &unit, a, Tail::Lower)?)),
            WindowKind::UpperTail { a } => Some(named("upper tail (1-ε)/a", markov_bound(&plan, &unit, a, Tail::Upper)?)),
            WindowKind::Centered { a, .. } => Some(named("centered var_ρ/a²", chebyshev_bound(&plan, &unit, a)?)),
            WindowKind::Union => None,
        }
    } else {
        None
    };

    let mean = |f: &HarmonicCoeffs| {
        let e = f.norm_sqr();
        if e > 0.0 {
            epsilon(f) / e
        } else {
            0.0
        }
    };
    let report = FilterReport {
        window: window.to_string(),
        input_energy: energy,
        kept_energy: kept.norm_sqr(),
        removed_energy: removed.norm_sqr(),
        energy_error,
        kept_epsilon: mean(&kept),
        removed_epsilon: mean(&removed),
        bound,
    };
    write_file(&cmd.out, &CoeffFile::Harmonic(kept))?;
    write_file(&cmd.removed, &CoeffFile::Harmonic(removed))?;

    if cmd.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        println!("window {}", report.window);
        println!("|kept|^2    = {:.16e}  ε = {:.6}", report.kept_energy, report.kept_epsilon);
        println!("|removed|^2 = {:.16e}  ε = {:.6}", report.removed_energy, report.removed_epsilon);
        println!("|input|^2   = {:.16e}  energy error {:.2e}", report.input_energy, energy_error);
        if let Some(b) = &report.bound {
            println!("{}: residual {:.6e} <= bound {:.6e}", b.kind, b.actual, b.bound);
        }
    }
    if energy_error > 1e-12 * energy.max(1.0) {
        return Err(Failure::Numeric(format!("energy partition off by {energy_error:e}")));
    }
    if let Some(b) = &report.bound {
        if b.actual > b.bound + 1e-12 {
            return Err(Failure::Numeric(format!("{} exceeded", b.kind)));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumReport {
    n: usize,
    m: usize,
    dimension: usize,
    first_moment: f64,
    second_moment_deviation: f64,
    literal_bound: f64,
    rank_bound: f64,
    interval: (f64, f64),
    count_fraction: f64,
    histogram: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<(i64, usize, f64)>>,
}

fn parse_interval(text: &str) -> Outcome<(f64, f64)> {
    let bad = || Failure::Usage(format!("--interval expects `a,b` with -1 <= a <= b <= 1, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(-1.0 <= a && a <= b && b <= 1.0) {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn spectrum(cmd: &SpectrumCmd) -> Outcome {
    let (a, b) = parse_interval(&cmd.interval)?;
    let summary = match (&cmd.source.plan, cmd.source.n) {
        (Some(path), _) => SpectralSummary::from_system(&cache::load(path).map_err(at_path(path))?),
        (None, Some(n)) => SpectralSummary::compute(band(n, cmd.source.m.unwrap_or(0))?)?,
        (None, None) => return Err(Failure::Usage("give --plan or --n/--m".into())),
    };
    let params = summary.params();
    let len = summary.len() as f64;
    let report = SpectrumReport {
        n: params.n(),
        m: params.m(),
        dimension: summary.len(),
        first_moment: summary.moment(1),
        second_moment_deviation: summary.moment(2) / len - 1.0 / 3.0,
        literal_bound: weak_limit_bound_literal(params, 2),
        rank_bound: weak_limit_bound_rank(params, 2),
        interval: (a, b),
        count_fraction: summary.count_fraction(a, b),
        histogram: summary.histogram(cmd.bins),
        pairs: cmd
            .pairs
            .then(|| summary.pairs().iter().map(|p| (p.k, p.index + 1, p.x)).collect()),
    };
    if cmd.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        println!("n = {}, m = {}, dimension {}", report.n, report.m, report.dimension);
        println!("sum x = {:.3e}", report.first_moment);
        println!("sum x^2/N - 1/3 = {:.6}", report.second_moment_deviation);
        println!("  j=2 closed-form bound {:.6}, from operator ranks {:.6}", report.literal_bound, report.rank_bound);
        println!("C({a},{b}) = {:.6} (uniform limit {:.6})", report.count_fraction, (b - a) / 2.0);
        let bins = report.histogram.len();
        for (i, count) in report.histogram.iter().enumerate() {
            let lo = -1.0 + 2.0 * i as f64 / bins as f64;
            println!("  [{lo:+.3}, {:+.3}) {count}", lo + 2.0 / bins as f64);
        }
        if let Some(pairs) = &report.pairs {
            for (k, i, x) in pairs {
                println!("{k} {i} {x:.16e}");
            }
        }
    }
    if report.first_moment.abs() > 1e-10 * len {
        return Err(Failure::Numeric(format!("sum of eigenvalues {:e}", report.first_moment)));
    }
    Ok(())
}

pub fn grid(cmd: &GridCmd) -> Outcome {
    let c = match (&cmd.input, &cmd.psi) {
        (Some(path), _) => match read_file(path)? {
            CoeffFile::Harmonic(c) => {
                if cmd.source.plan.is_some() || cmd.source.n.is_some() {
                    system_for(&cmd.source, Some(c.params()))?;
                }
                c
            }
            CoeffFile::Localized(d) => {
                let system = system_for(&cmd.source, Some(d.params()))?;
                TransformPlan::dense(system)?.synthesize(&d)?
            }
        },
        (None, Some(ki)) => {
            let system = system_for(&cmd.source, None)?;
            let (k, i) = (ki[0], ki[1]);
            if i < 1 {
                return Err(Failure::Usage(format!("basis index {i} must be at least 1")));
            }
            psi_coefficients(&system, k, (i - 1) as usize)?
        }
        (None, None) => return Err(Failure::Usage("give --in or --psi".into())),
    };
    let n = c.params().n();
    let t = cmd.theta_res.unwrap_or(2 * n + 2);
    let q = cmd.phi_res.unwrap_or(2 * n + 2);
    if t < 2 || q < 1 {
        return Err(Failure::Usage("--theta-res must be >= 2 and --phi-res >= 1".into()));
    }
    let theta: Vec<f64> = (0..t)
        .map(|j| std::f64::consts::PI * j as f64 / (t - 1) as f64)
        .collect();
    let phi: Vec<f64> = (0..q)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / q as f64)
        .collect();
    let values = evaluate_on(&c, &theta, &phi);
    let file = File::create(&cmd.out).map_err(|e| Failure::Usage(format!("{}: {e}", cmd.out.display())))?;
    let mut w = BufWriter::new(file);
    let io_err = |e: std::io::Error| Failure::Usage(format!("{}: {e}", cmd.out.display()));
    writeln!(w, "theta,phi,re,im").map_err(io_err)?;
    for (i, th) in theta.iter().enumerate() {
        for (j, ph) in phi.iter().enumerate() {
            let v = values[i * q + j];
            writeln!(w, "{th:.16e},{ph:.16e},{:.16e},{:.16e}", v.re, v.im).map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)?;
    println!("wrote {} x {} grid to {}", t, q, cmd.out.display());
    Ok(())
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    dimension: usize,
    dense_seconds: f64,
    fast_seconds: Option<f64>,
    fast_orders: Option<usize>,
    dense_ops_counted: u64,
    dense_ops_formula: u64,
}

#[derive(Serialize)]
struct BenchReport {
    m: usize,
    rows: Vec<BenchRow>,
    dense_slope: Option<f64>,
    fast_slope: Option<f64>,
}

pub fn bench(cmd: &BenchCmd) -> Outcome {
    if cmd.n.is_empty() {
        return Err(Failure::Usage("--n needs at least one value".into()));
    }
    let mut rows = Vec::new();
    for &n in &cmd.n {
        let params = band(n, cmd.m)?;
        let system = EigenSystem::build(params)?;
        let c = bench_input(params);
        let dense = TransformPlan::dense(system.clone())?;
        let dense_seconds = median_seconds(cmd.repeats, || {
            std::hint::black_box(dense.analyze_dense(&c).expect("matching band"));
        });
        let mut counter = OpCounter::default();
        dense.analyze_counted(&c, &mut counter)?;
        let (fast_seconds, fast_orders) = if cmd.mode == ModeArg::Fast {
            let fast = TransformPlan::new(system, Mode::Fast, ndct(cmd.ndct))?;
            let t = median_seconds(cmd.repeats, || {
                std::hint::black_box(fast.analyze_fast(&c).expect("matching band"));
            });
            (Some(t), Some(fast.fast_orders().len()))
        } else {
            (None, None)
        };
        rows.push(BenchRow {
            n,
            dimension: params.dimension(),
            dense_seconds,
            fast_seconds,
            fast_orders,
            dense_ops_counted: counter.total(),
            dense_ops_formula: dense_op_count_formula(params),
        });
    }
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let slope = |ys: Vec<f64>| (ys.len() >= 2).then(|| loglog_slope(&ns, &ys));
    let dense_slope = slope(rows.iter().map(|r| r.dense_seconds).collect());
    let fast_slope = if cmd.mode == ModeArg::Fast {
        slope(rows.iter().filter_map(|r| r.fast_seconds).collect())
    } else {
        None
    };
    let report = BenchReport {
        m: cmd.m,
        rows,
        dense_slope,
        fast_slope,
    };
    if cmd.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        println!("{:>6} {:>9} {:>12} {:>12} {:>14} {:>14}", "n", "N", "dense ms", "fast ms", "dense ops", "formula");
        for r in &report.rows {
            let fast = r.fast_seconds.map_or("-".to_string(), |t| format!("{:.3}", t * 1e3));
            println!(
                "{:>6} {:>9} {:>12.3} {:>12} {:>14} {:>14}",
                r.n,
                r.dimension,
                r.dense_seconds * 1e3,
                fast,
                r.dense_ops_counted,
                r.dense_ops_formula
            );
        }
        if let Some(s) = report.dense_slope {
            println!("dense log-log slope {s:.3}");
        }
        if let Some(s) = report.fast_slope {
            println!("fast log-log slope {s:.3}");
        }
    }
    if let Some(r) = report.rows.iter().find(|r| r.dense_ops_counted != r.dense_ops_formula) {
        return Err(Failure::Numeric(format!("operation count mismatch at n = {}", r.n)));
    }
    Ok(())
}

fn bench_input(params: BandParams) -> HarmonicCoeffs {
    let data = (0..params.dimension())
        .map(|i| {
            let t = i as f64 * 0.618_033_988_749_895;
            Complex64::new(t.fract() - 0.5, (t * 1.7).fract() - 0.5)
        })
        .collect();
    HarmonicCoeffs::from_vec(params, data).expect("length matches")
}
