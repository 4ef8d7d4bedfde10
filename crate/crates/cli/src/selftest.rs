use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use spherelok::approximation::{chebyshev_bound, filter, markov_bound, EigenvalueWindow, SpectralSummary, Tail};
use spherelok::sphere_basis::{epsilon, eval_psi, io};
use spherelok::transform::{cache, dense_op_count_formula, Mode, NdctMode, OpCounter};
use spherelok::{BandParams, EigenSystem, HarmonicCoeffs, JacobiBlock, SphereGrid, TransformPlan};

use crate::args::SelftestCmd;
use crate::failure::{Failure, Outcome};

type Check = fn() -> Result<String, String>;

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct Report {
    passed: usize,
    failed: usize,
    checks: Vec<CheckResult>,
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn system(n: usize, m: usize) -> Result<EigenSystem, String> {
    BandParams::new(n, m)
        .and_then(EigenSystem::build)
        .map_err(|e| e.to_string())
}

fn plan(n: usize, m: usize) -> Result<TransformPlan, String> {
    TransformPlan::dense(system(n, m)?).map_err(|e| e.to_string())
}

fn random_unit(params: BandParams, rng: &mut ChaCha8Rng) -> HarmonicCoeffs {
    let data = (0..params.dimension())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut c = HarmonicCoeffs::from_vec(params, data).expect("length matches");
    let norm = c.norm();
    c.scale(Complex64::new(1.0 / norm, 0.0));
    c
}

fn reference_eigenvalues() -> Result<String, String> {
    let s = system(32, 0)?;
    let x = |k, i| s.eigenvalue(k, i).unwrap();
    let got = [x(0, 0), x(0, 7), x(0, 15), x(16, 0), x(16, 7), x(32, 0)];
    let want = [0.9974, 0.7472, 0.0936, 0.7921, 0.1066, 0.0];
    let ok = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 5e-5);
    ensure(ok, format!("{got:.5?}"))
}

fn block_orthogonality() -> Result<String, String> {
    let s = system(32, 5)?;
    let worst = s.blocks().iter().map(|b| b.orthogonality_residual()).fold(0.0, f64::max);
    let residual = s
        .params()
        .orders()
        .filter(|k| *k >= 0)
        .map(|k| s.block(k).unwrap().eigen_residual(&JacobiBlock::build(s.params(), k).unwrap()))
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12 && residual <= 1e-12, format!("|VᵀV-I| {worst:.1e}, |JV-VX| {residual:.1e}"))
}

fn basis_gram() -> Result<String, String> {
    let s = system(6, 2)?;
    let grid = SphereGrid::for_degree(6);
    let mut samples = Vec::new();
    for k in s.params().orders() {
        for i in 0..s.block(k).unwrap().size() {
            samples.push(grid.sample(|t, p| eval_psi(&s, k, i, t, p).unwrap()));
        }
    }
    let mut dev = 0.0f64;
    for (a, fa) in samples.iter().enumerate() {
        for (b, fb) in samples.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            dev = dev.max((grid.inner_product(fa, fb) - target).norm());
        }
    }
    ensure(dev <= 1e-10, format!("(6,2) max|G-I| {dev:.1e}"))
}

fn eigen_consistency() -> Result<String, String> {
    let s = system(8, 3)?;
    let grid = SphereGrid::for_degree(9);
    let mut worst = 0.0f64;
    for k in s.params().orders() {
        for i in 0..s.block(k).unwrap().size() {
            let f = grid.sample(|t, p| eval_psi(&s, k, i, t, p).unwrap());
            let eps = grid.weighted_inner_product(|x| x, &f, &f).re;
            worst = worst.max((eps - s.eigenvalue(k, i).unwrap()).abs());
        }
    }
    ensure(worst <= 1e-10, format!("(8,3) max|ε(ψ)-x| {worst:.1e}"))
}

fn round_trip() -> Result<String, String> {
    let p = plan(16, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let c = random_unit(p.params(), &mut rng);
        let d = p.analyze(&c).map_err(|e| e.to_string())?;
        let back = p.synthesize(&d).map_err(|e| e.to_string())?;
        worst = worst.max(back.max_abs_diff(&c)).max((d.norm_sqr() - 1.0).abs());
    }
    ensure(worst <= 1e-12, format!("(16,3) {worst:.1e}"))
}

fn fast_matches_dense() -> Result<String, String> {
    let s = system(64, 0)?;
    let p = TransformPlan::new(s, Mode::Fast, NdctMode::Window).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let c = random_unit(p.params(), &mut rng);
        let fast = p.analyze_fast(&c).map_err(|e| e.to_string())?;
        let dense = p.analyze_dense(&c).map_err(|e| e.to_string())?;
        worst = worst.max(fast.max_abs_diff(&dense));
    }
    ensure(worst <= 1e-8, format!("(64,0) {worst:.1e}, {} fast orders", p.fast_orders().len()))
}

fn operation_count() -> Result<String, String> {
    let mut out = Vec::new();
    let mut ok = true;
    for (n, m) in [(6, 4), (16, 0), (32, 7)] {
        let p = plan(n, m)?;
        let mut counter = OpCounter::default();
        let c = HarmonicCoeffs::zeros(p.params());
        p.analyze_counted(&c, &mut counter).map_err(|e| e.to_string())?;
        ok &= counter.total() == dense_op_count_formula(p.params());
        out.push(format!("({n},{m}) {}", counter.total()));
    }
    ensure(ok, out.join(", "))
}

fn concentration_bounds() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    for (n, m) in [(8, 0), (16, 5)] {
        let p = plan(n, m)?;
        for _ in 0..50 {
            let c = random_unit(p.params(), &mut rng);
            let a = rng.gen_range(0.05..2.0);
            for check in [
                markov_bound(&p, &c, a, Tail::Lower),
                markov_bound(&p, &c, a, Tail::Upper),
                chebyshev_bound(&p, &c, a / 2.0),
            ] {
                if !check.map_err(|e| e.to_string())?.holds() {
                    violations += 1;
                }
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations in 300 checks"))
}

fn filter_partition() -> Result<String, String> {
    let p = plan(20, 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = random_unit(p.params(), &mut rng);
    let window = EigenvalueWindow::centered(epsilon(&c), 0.3).map_err(|e| e.to_string())?;
    let (kept, removed) = filter(&p, &c, &window).map_err(|e| e.to_string())?;
    let err = (kept.norm_sqr() + removed.norm_sqr() - 1.0).abs();
    ensure(err <= 1e-12, format!("energy error {err:.1e}"))
}

fn spectral_moments() -> Result<String, String> {
    let params = BandParams::new(64, 0).map_err(|e| e.to_string())?;
    let s = SpectralSummary::compute(params).map_err(|e| e.to_string())?;
    let first = s.moment(1);
    ensure(
        first.abs() <= 1e-10 * s.len() as f64 && s.count_fraction(-1.0, 1.0) == 1.0,
        format!("Σx {first:.1e}, C(0,0.5) {:.4}", s.count_fraction(0.0, 0.5)),
    )
}

fn file_formats() -> Result<String, String> {
    let s = system(9, 2)?;
    let mut buf = Vec::new();
    cache::write_system(&mut buf, &s).map_err(|e| e.to_string())?;
    let back = cache::read_system(&buf[..]).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = random_unit(s.params(), &mut rng);
    let mut text = Vec::new();
    io::write_harmonic(&mut text, &c).map_err(|e| e.to_string())?;
    let c2 = io::read_harmonic(&text[..]).map_err(|e| e.to_string())?;
    ensure(back.blocks() == s.blocks() && c2 == c, format!("plan {} bytes, coefficients {} bytes", buf.len(), text.len()))
}

const CHECKS: [(&str, Check); 11] = [
    ("reference-eigenvalues", reference_eigenvalues),
    ("block-orthogonality", block_orthogonality),
    ("basis-gram", basis_gram),
    ("eigen-consistency", eigen_consistency),
    ("round-trip", round_trip),
    ("fast-matches-dense", fast_matches_dense),
    ("operation-count", operation_count),
    ("concentration-bounds", concentration_bounds),
    ("filter-partition", filter_partition),
    ("spectral-moments", spectral_moments),
    ("file-formats", file_formats),
];

pub fn run(cmd: &SelftestCmd) -> Outcome {
    let checks: Vec<CheckResult> = CHECKS
        .iter()
        .map(|(name, check)| {
            let (passed, detail) = match check() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult { name, passed, detail }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    let report = Report {
        passed,
        failed: checks.len() - passed,
        checks,
    };
    if cmd.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for c in &report.checks {
            println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        println!("{} passed, {} failed", report.passed, report.failed);
    }
    if report.failed > 0 {
        return Err(Failure::Numeric(format!("{} self-test checks failed", report.failed)));
    }
    Ok(())
}
