//! End-to-end checks of the predicted relaxation factors against iteration
//! sweeps and the dense spectral oracle. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use poisson_sor::experiment::{run_sweep, sweep_minimum, ExperimentConfig, OmegaRange, SweepRecord};
use poisson_sor::omega::{hoc_constants, predict_detailed, quartic_coefficients, quartic_roots, PredictionDetail};
use poisson_sor::oracle::{brute_force_omega, spectral_radius_at};
use poisson_sor::robin::{classify, hyper_wavenumber, trig_wavenumber, RobinPair};
use poisson_sor::solver::tridiag::tridiagonal_solve;
use poisson_sor::solver::{DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
use poisson_sor::{
    make_grid, predict, run, weights, BoundarySet, DiscreteOperator, EdgeCondition, Field, GridSpec, Scheme,
    SolveReport, SolverConfig, Sor, SorVariant,
};
use poisson_sor_validation::{report, Criterion, Outcome};
use rand::{rngs::StdRng, Rng, SeedableRng};

const STEP: f64 = 0.005;
const GRIDS: [(usize, usize); 2] = [(10, 30), (30, 10)];

fn grid(nx: usize, ny: usize) -> GridSpec {
    make_grid(nx, ny).unwrap()
}

fn sweep(g: GridSpec, bcs: BoundarySet, scheme: Scheme, variant: SorVariant) -> Vec<SweepRecord> {
    let mut cfg = ExperimentConfig::new(g, bcs, scheme, variant);
    cfg.omega = OmegaRange::new(1.0, 1.99, STEP).unwrap();
    run_sweep(&cfg).unwrap()
}

fn run_at(g: &GridSpec, bcs: &BoundarySet, scheme: Scheme, variant: SorVariant, omega: f64) -> SolveReport {
    run(g, bcs, &SolverConfig::new(scheme, variant, omega).unwrap()).unwrap()
}

fn iterations_at(records: &[SweepRecord], omega: f64) -> usize {
    records
        .iter()
        .min_by(|a, b| (a.omega - omega).abs().total_cmp(&(b.omega - omega).abs()))
        .unwrap()
        .iterations
}

fn robin(a: f64, b: f64) -> EdgeCondition {
    EdgeCondition::robin(a, b).unwrap()
}

/// Robin x-edge pairs: left edge `(a, b)`, right edge `(c, d)`.
fn robin_cases() -> [(&'static str, BoundarySet); 3] {
    let x = |l, r| BoundarySet::dirichlet().with_left(l).with_right(r);
    [
        ("BC1", x(robin(1.0, -0.25), robin(1.0, 1.0))),
        ("BC2", x(robin(1.0, 2.0), robin(1.0, 2.0))),
        ("BC3", x(robin(1.0, 1.0), robin(1.0, -1.0))),
    ]
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    for (nx, ny) in GRIDS {
        let g = grid(nx, ny);
        let bcs = BoundarySet::dirichlet();
        let w = predict(&g, &bcs, Scheme::Central2, SorVariant::PointSor).unwrap().omega_opt;
        let rec = sweep(g, bcs, Scheme::Central2, SorVariant::PointSor);
        let best = sweep_minimum(&rec).unwrap();
        out.check(
            (best.omega - w).abs() <= 0.01 + 1e-9,
            format!("{nx}x{ny}: sweep argmin {:.3} ({} its), predicted {w:.5}", best.omega, best.iterations),
        );
        let left = iterations_at(&rec, best.omega - 0.05);
        let right = iterations_at(&rec, best.omega + 0.05);
        out.check(left > right, format!("{nx}x{ny}: its(argmin - 0.05) = {left} > its(argmin + 0.05) = {right}"));
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    for scheme in [Scheme::Central2, Scheme::Hoc] {
        let mut best_its = Vec::new();
        for (nx, ny) in GRIDS {
            let g = grid(nx, ny);
            let bcs = BoundarySet::dirichlet();
            let w = predict(&g, &bcs, scheme, SorVariant::LineSor).unwrap().omega_opt;
            let best = sweep_minimum(&sweep(g, bcs, scheme, SorVariant::LineSor)).unwrap();
            out.check(
                (best.omega - w).abs() <= 0.01 + 1e-9,
                format!("{scheme} line {nx}x{ny}: sweep argmin {:.3} ({} its), predicted {w:.5}", best.omega, best.iterations),
            );
            best_its.push(best.iterations);
        }
        out.check(
            best_its[1] < best_its[0],
            format!("{scheme} line: 30x10 optimum {} its < 10x30 optimum {} its", best_its[1], best_its[0]),
        );
    }
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    for (nx, ny) in GRIDS {
        let g = grid(nx, ny);
        let bcs = BoundarySet::dirichlet();
        let c = hoc_constants(poisson_sor::WavenumberMode::Trig(PI), poisson_sor::WavenumberMode::Trig(PI), &g).unwrap();
        let (w1, w2) = (c.omega_first_order(), c.omega_second_order());
        let it1 = run_at(&g, &bcs, Scheme::Hoc, SorVariant::PointSor, w1).iterations;
        let it2 = run_at(&g, &bcs, Scheme::Hoc, SorVariant::PointSor, w2).iterations;
        let best = sweep_minimum(&sweep(g, bcs, Scheme::Hoc, SorVariant::PointSor)).unwrap();
        let ratio = it1 as f64 / it2 as f64;
        out.check(
            (1.1..=1.4).contains(&ratio),
            format!("{nx}x{ny}: its(w1 = {w1:.5}) / its(w2 = {w2:.5}) = {it1}/{it2} = {ratio:.3}"),
        );
        let excess = (it2 as f64 - best.iterations as f64).abs() / best.iterations as f64;
        out.check(
            excess <= 0.02,
            format!("{nx}x{ny}: its(w2) = {it2} vs sweep minimum {} at {:.3} ({:.2}%)", best.iterations, best.omega, 100.0 * excess),
        );
    }
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let cases = [
        ("right Neumann", BoundarySet::dirichlet().with_right(EdgeCondition::Neumann)),
        (
            "both x Neumann",
            BoundarySet::dirichlet().with_left(EdgeCondition::Neumann).with_right(EdgeCondition::Neumann),
        ),
    ];
    for scheme in [Scheme::Central2, Scheme::Hoc] {
        for (nx, ny) in GRIDS {
            let g = grid(nx, ny);
            let w_dir = predict(&g, &BoundarySet::dirichlet(), scheme, SorVariant::PointSor).unwrap().omega_opt;
            for (name, bcs) in cases {
                let w = predict(&g, &bcs, scheme, SorVariant::PointSor).unwrap().omega_opt;
                let it_dir = run_at(&g, &bcs, scheme, SorVariant::PointSor, w_dir).iterations;
                let it = run_at(&g, &bcs, scheme, SorVariant::PointSor, w).iterations;
                let ratio = it_dir as f64 / it as f64;
                out.check(
                    ratio > 1.5,
                    format!("{scheme} point {nx}x{ny} {name}: its(w_dir = {w_dir:.5}) / its(w = {w:.5}) = {it_dir}/{it} = {ratio:.3}"),
                );
            }
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let table = [
        ("BC1", (1.0, -0.25, 1.0, 1.0), 1.70073),
        ("BC2", (1.0, 2.0, 1.0, 2.0), 0.49998),
        ("BC3", (1.0, 1.0, 1.0, -1.0), 1.54300),
    ];
    for (name, (a, b, c, d), expect) in table {
        let pair = RobinPair::new(a, b, c, d, 30).unwrap();
        let k = hyper_wavenumber(&pair).unwrap_or_else(|| trig_wavenumber(&pair).unwrap());
        out.check((k - expect).abs() <= 1e-3, format!("{name} at 30 cells: k = {k:.6}, expected {expect}"));
    }
    for scheme in [Scheme::Central2, Scheme::Hoc] {
        for (nx, ny) in GRIDS {
            let g = grid(nx, ny);
            for (name, bcs) in robin_cases() {
                let w = predict(&g, &bcs, scheme, SorVariant::PointSor).unwrap().omega_opt;
                let best = sweep_minimum(&sweep(g, bcs, scheme, SorVariant::PointSor)).unwrap();
                out.check(
                    (best.omega - w).abs() <= 2.0 * STEP + 1e-9,
                    format!("{scheme} point {nx}x{ny} {name}: sweep argmin {:.3} ({} its), predicted {w:.5}", best.omega, best.iterations),
                );
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let omegas: Vec<f64> = (0..=499).map(|k| 1.0 + 0.002 * k as f64).collect();
    let x = |l, r| BoundarySet::dirichlet().with_left(l).with_right(r);
    let mut bcs_list = vec![
        ("both Dirichlet", BoundarySet::dirichlet()),
        ("one Neumann", x(EdgeCondition::Dirichlet, EdgeCondition::Neumann)),
        ("both x Neumann", x(EdgeCondition::Neumann, EdgeCondition::Neumann)),
    ];
    bcs_list.extend(robin_cases());
    let methods = [
        (Scheme::Central2, SorVariant::PointSor),
        (Scheme::Central2, SorVariant::LineSor),
        (Scheme::Hoc, SorVariant::PointSor),
        (Scheme::Hoc, SorVariant::LineSor),
    ];
    for n in [6, 8] {
        let g = grid(n, n);
        for (name, bcs) in &bcs_list {
            for (scheme, variant) in methods {
                let p = predict_detailed(&g, bcs, scheme, variant).unwrap();
                let w = p.omega.omega_opt;
                let (w_star, rho_star) = brute_force_omega(&g, bcs, scheme, variant, &omegas).unwrap();
                let quadratic = matches!(p.detail, PredictionDetail::Quadratic { .. });
                let tol = if quadratic { 0.02 } else { 0.03 };
                let label = format!("{n}x{n} {scheme} {variant} {name}");
                out.check(
                    (w_star - w).abs() <= tol,
                    format!("{label}: oracle argmin {w_star:.3} (rho {rho_star:.5}), predicted {w:.5}"),
                );
                if quadratic {
                    let rho = spectral_radius_at(&g, bcs, scheme, variant, w).unwrap();
                    out.check(
                        (rho - (w - 1.0)).abs() <= 5e-3,
                        format!("{label}: rho(w_opt) = {rho:.5} vs w_opt - 1 = {:.5}", w - 1.0),
                    );
                }
            }
        }
    }
    out
}

/// Coefficients with `ad - bc = 1` realizing `(m, n)`.
fn realize(m: f64, n: f64) -> Option<RobinPair> {
    let t = if n == 0.0 { m } else { (-1.0 + (1.0 + 4.0 * m * n).sqrt()) / (2.0 * n) };
    let p = if t == 0.0 {
        RobinPair::new(1.0, n, 0.0, 1.0, 30).ok()?
    } else {
        RobinPair::new(m / t, n, t, 1.0, 30).ok()?
    };
    let (mm, nn) = p.mn()?;
    ((mm - m).abs() < 1e-9 * (1.0 + m.abs()) && (nn - n).abs() < 1e-9).then_some(p)
}

fn sign_changes(p: &RobinPair, end: f64) -> usize {
    let h = PI / 4096.0;
    let mut prev = p.hyper_normalized(h);
    let mut count = 0;
    for i in 2..(end / h) as usize {
        let v = p.hyper_normalized(i as f64 * h);
        if v != 0.0 && prev != 0.0 && (v < 0.0) != (prev < 0.0) {
            count += 1;
        }
        if v != 0.0 {
            prev = v;
        }
    }
    count
}

fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = StdRng::seed_from_u64(7);

    let mut worst = 0.0f64;
    for beta in [0.1, 1.0 / 3.0, 0.5, 1.0, 2.0, 5f64.sqrt(), 3.0, 10.0] {
        for scheme in [Scheme::Central2, Scheme::Hoc] {
            worst = worst.max(weights(scheme, beta).sum().abs());
        }
    }
    out.check(worst < 1e-12, format!("stencil row sums: max |sum| = {worst:.1e}"));

    let mut worst = 0.0f64;
    let edges = [
        EdgeCondition::Dirichlet,
        EdgeCondition::Neumann,
        robin(1.0, 1.0),
        robin(1.0, -0.25),
        robin(-0.5, 2.0),
    ];
    for trial in 0..40 {
        let g = grid(rng.gen_range(3..9), rng.gen_range(3..9));
        let pick = |r: &mut StdRng| edges[r.gen_range(0..edges.len())];
        let bcs = BoundarySet::new(pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng)).unwrap();
        if !bcs.is_solvable() {
            continue;
        }
        let scheme = if trial % 2 == 0 { Scheme::Central2 } else { Scheme::Hoc };
        let variant = if trial % 4 < 2 { SorVariant::PointSor } else { SorVariant::LineSor };
        let Ok(op) = DiscreteOperator::new(&g, &bcs, scheme) else { continue };
        let sor = Sor::new(op, variant);
        let omega = rng.gen_range(0.2..1.95);
        let random = |r: &mut StdRng| {
            let mut f = Field::zeros(&g, &bcs);
            for (v, &u) in f.values_mut().iter_mut().zip(bcs.unknown_mask(&g).iter()) {
                if u {
                    *v = r.gen_range(-1.0..1.0);
                }
            }
            f
        };
        let (u, v) = (random(&mut rng), random(&mut rng));
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let combo: Vec<f64> = u.values().iter().zip(v.values()).map(|(x, y)| a * x + b * y).collect();
        let mut w = Field::from_values(&g, &bcs, combo).unwrap();
        let (mut u, mut v) = (u, v);
        sor.sweep(&mut u, omega).unwrap();
        sor.sweep(&mut v, omega).unwrap();
        sor.sweep(&mut w, omega).unwrap();
        let scale = w.values().iter().fold(1e-300f64, |m, x| m.max(x.abs()));
        for ((x, y), z) in u.values().iter().zip(v.values()).zip(w.values()) {
            worst = worst.max((a * x + b * y - z).abs() / scale);
        }
    }
    out.check(worst <= 1e-12, format!("sweep linearity: max relative error = {worst:.1e}"));

    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let w = rng.gen_range(0.05..1.95);
        let (p, q) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let beta2: f64 = rng.gen_range(0.05..20.0);
        let c1 = (5.0 - beta2) / (10.0 * (1.0 + beta2));
        let c2 = 0.8 - 2.0 * c1;
        let coef = quartic_coefficients(w, p, q, c1, c2);
        let r = quartic_roots(w, p, q, c1, c2).unwrap();
        let e1 = r[0] + r[1] + r[2] + r[3];
        let e2 = r[0] * r[1] + r[0] * r[2] + r[0] * r[3] + r[1] * r[2] + r[1] * r[3] + r[2] * r[3];
        let e3 = r[0] * r[1] * r[2] + r[0] * r[1] * r[3] + r[0] * r[2] * r[3] + r[1] * r[2] * r[3];
        let e4 = r[0] * r[1] * r[2] * r[3];
        for d in [(e1 + coef[0]).norm(), (e2 - coef[1]).norm(), (e3 + coef[2]).norm(), (e4 - coef[3]).norm()] {
            worst = worst.max(d);
        }
    }
    out.check(worst < 1e-10, format!("quartic Vieta identities: max residual = {worst:.1e}"));

    let (mut worst_t, mut worst_h, mut roots) = (0.0f64, 0.0f64, 0);
    for _ in 0..300 {
        let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let n = [10, 30][rng.gen_range(0..2)];
        let Ok(pair) = RobinPair::new(c[0], c[1], c[2], c[3], n) else { continue };
        if let Ok(k) = trig_wavenumber(&pair) {
            let scale = (pair.a * pair.c).abs() + (pair.b * pair.d).abs() * (n * n) as f64 + pair.det().abs() * n as f64;
            worst_t = worst_t.max(pair.trig_residual(k).abs() / scale.max(1.0));
            roots += 1;
        }
        if pair.mn().is_some() {
            if let Some(k) = hyper_wavenumber(&pair) {
                worst_h = worst_h.max(pair.hyper_normalized(k).abs() / (1.0 + k));
                roots += 1;
            }
        }
    }
    out.check(
        worst_t < 1e-9 && worst_h < 1e-9,
        format!("Robin root residuals over {roots} roots: trig {worst_t:.1e}, hyperbolic {worst_h:.1e}"),
    );

    type Sampler = fn(&mut StdRng) -> (f64, f64);
    let cells: [(&str, Sampler); 5] = [
        ("n>0, m+1>0", |r| (r.gen_range(-0.99..3.0), r.gen_range(1e-3..2.0))),
        ("n>0, m+1=0", |r| (-1.0, r.gen_range(1e-3..0.25))),
        ("n>0, m+1<0", |r| (r.gen_range(-6.0..-1.01), r.gen_range(1e-3..0.25))),
        ("n<=0, m+1<0", |r| (r.gen_range(-6.0..-1.01), r.gen_range(-2.0..0.0))),
        ("n<=0, m+1>=0", |r| (r.gen_range(-1.0..3.0), r.gen_range(-2.0..0.0))),
    ];
    for (name, sample) in cells {
        let (mut checked, mut violations) = (0, 0);
        while checked < 1000 {
            let (m, n) = sample(&mut rng);
            let Ok(class) = classify(m, n) else { continue };
            let Some(pair) = realize(m, n) else { continue };
            if sign_changes(&pair, 60.0) > class.max_positive_roots.bound() {
                violations += 1;
            }
            checked += 1;
        }
        out.check(violations == 0, format!("root-count bound, cell {name}: {violations} violations in {checked}"));
    }

    let mut worst = 0.0f64;
    for n in 1..=32 {
        for _ in 0..20 {
            let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(2.1..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let x = tridiagonal_solve(&lower, &diag, &upper, &rhs).unwrap();
            let mut a = vec![vec![0.0; n]; n];
            for i in 0..n {
                a[i][i] = diag[i];
                if i > 0 {
                    a[i][i - 1] = lower[i];
                }
                if i + 1 < n {
                    a[i][i + 1] = upper[i];
                }
            }
            let y = dense_solve(a, rhs);
            let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (p, q) in x.iter().zip(&y) {
                worst = worst.max((p - q).abs() / scale);
            }
        }
    }
    out.check(worst <= 1e-12, format!("tridiagonal vs dense, n <= 32: max relative error = {worst:.1e}"));
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let cases = [
        ("central2 point 10x30 Dirichlet", grid(10, 30), BoundarySet::dirichlet(), Scheme::Central2, SorVariant::PointSor),
        ("hoc line 30x10 Dirichlet", grid(30, 10), BoundarySet::dirichlet(), Scheme::Hoc, SorVariant::LineSor),
        ("hoc point 30x10 BC3", grid(30, 10), robin_cases()[2].1, Scheme::Hoc, SorVariant::PointSor),
        (
            "central2 line 10x30 right Neumann",
            grid(10, 30),
            BoundarySet::dirichlet().with_right(EdgeCondition::Neumann),
            Scheme::Central2,
            SorVariant::LineSor,
        ),
    ];
    for (name, g, bcs, scheme, variant) in cases {
        let mut cfg = ExperimentConfig::new(g, bcs, scheme, variant);
        cfg.omega = OmegaRange::new(1.0, 1.99, 0.03).unwrap();
        assert_eq!((cfg.tolerance, cfg.max_iterations), (DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS));
        let first = run_sweep(&cfg).unwrap();
        let second = run_sweep(&cfg).unwrap();
        let converged: Vec<_> = first.iter().filter(|r| r.converged).collect();
        let below = converged.iter().all(|r| r.final_norm < DEFAULT_TOLERANCE);
        let identical = first.len() == second.len()
            && first.iter().zip(&second).all(|(a, b)| {
                a.iterations == b.iterations && a.final_norm.to_bits() == b.final_norm.to_bits() && a.converged == b.converged
            });
        out.check(
            below && identical && !converged.is_empty(),
            format!(
                "{name}: {} of {} runs converged, all below tolerance: {below}, repeat identical: {identical}",
                converged.len(),
                first.len()
            ),
        );
    }
    out
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Dirichlet point SOR sweep minimum and shape", criterion_1),
        ("line SOR sweep minima and row-count effect", criterion_2),
        ("HOC point SOR first vs second order", criterion_3),
        ("Neumann-aware factor vs Dirichlet factor", criterion_4),
        ("Robin wavenumbers and sweep minima", criterion_5),
        ("oracle minimizer vs formula on 6x6 and 8x8", criterion_6),
        ("property suites", criterion_7),
        ("convergence protocol fidelity", criterion_8),
    ];
    let failed = report(&criteria);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
