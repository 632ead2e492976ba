//! End-to-end acceptance checks. Runs as a plain binary and prints one line
//! per criterion; exits nonzero if any criterion fails.

use nalgebra::DMatrix;
use num_complex::Complex64;
use quasiweyl::equivalence::{
    finite_shift_n2, finite_shift_n4, shift_n2_spec, shift_n4, v_equivalence_check, weyl_invariance_check, Direction,
    N4Case, ProblemSpec,
};
use quasiweyl::model::{
    validate_orders, BoundaryForm, BumpProfile, CoefficientFunction, CoefficientSet, Geometry, SingularityOrders,
};
use quasiweyl::quasideriv::verify_seed;
use quasiweyl::regularize::{build_f_symbolic, build_q, check_structure, s_inverse, s_map, FEvaluator};
use quasiweyl::spectral::{asymptotics_probe, counterexample_pair, weyl_matrix, wronskian_drift, SolverConfig};
use quasiweyl::symbolic::rational::{int, ratio};
use quasiweyl::symbolic::{Rational, SigmaExpression, SymbolicMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn set(n: usize, orders: &[usize], sigma: Vec<CoefficientFunction>) -> CoefficientSet {
    CoefficientSet::new(validate_orders(n, orders).unwrap(), sigma).unwrap()
}

fn robin(h: f64) -> BoundaryForm {
    BoundaryForm::with_entries(vec![1, 0], &[(2, 1, c(h))]).unwrap()
}

fn u4() -> BoundaryForm {
    BoundaryForm::with_entries(
        vec![2, 0, 3, 1],
        &[(2, 1, c(0.5)), (3, 1, c(-1.0)), (3, 2, c(0.25)), (4, 1, c(0.75)), (4, 2, c(-0.5)), (4, 3, c(1.5))],
    )
    .unwrap()
}

fn v4() -> BoundaryForm {
    BoundaryForm::with_entries(vec![3, 2, 1, 0], &[(2, 1, c(0.3)), (3, 1, c(-0.7)), (3, 2, c(1.1)), (4, 3, c(0.2))])
        .unwrap()
}

fn ray(phi: f64, count: usize) -> Vec<Complex64> {
    (1..=count).map(|r| Complex64::from_polar(r as f64, phi)).collect()
}

fn hat(a: Rational, b: Rational, h: i64) -> CoefficientFunction {
    CoefficientFunction::bump(a, b, int(h), BumpProfile::Hat).unwrap()
}

fn indicator(a: Rational, b: Rational) -> CoefficientFunction {
    CoefficientFunction::bump(a, b, int(1), BumpProfile::Indicator).unwrap()
}

type Golden = (usize, Vec<usize>, Vec<Vec<&'static str>>, Vec<Vec<&'static str>>);

// (n, orders, Q, F) as displayed for the second- and fourth-order examples.
fn golden() -> Vec<Golden> {
    vec![
        (2, vec![0], vec![vec!["s0", "0"], vec!["0", "0"]], vec![vec!["0", "1"], vec!["-s0", "0"]]),
        (2, vec![1], vec![vec!["0", "s0"], vec!["s0", "0"]], vec![vec!["s0", "1"], vec!["-s0^2", "-s0"]]),
        (
            4,
            vec![0, 0, 0],
            vec![vec!["s0", "0", "0"], vec!["0", "s2", "0"], vec!["0", "0", "0"]],
            vec![vec!["0", "1", "0", "0"], vec!["0", "0", "1", "0"], vec!["0", "s2", "0", "1"], vec!["-s0", "0", "0", "0"]],
        ),
        (
            4,
            vec![1, 0, 0],
            vec![vec!["0", "s0", "0"], vec!["s0", "s2", "0"], vec!["0", "0", "0"]],
            vec![vec!["0", "1", "0", "0"], vec!["0", "0", "1", "0"], vec!["s0", "s2", "0", "1"], vec!["0", "-s0", "0", "0"]],
        ),
        (
            4,
            vec![2, 0, 0],
            vec![vec!["0", "0", "s0"], vec!["0", "s2 + 2*s0", "0"], vec!["s0", "0", "0"]],
            vec![
                vec!["0", "1", "0", "0"],
                vec!["-s0", "0", "1", "0"],
                vec!["0", "s2 + 2*s0", "0", "1"],
                vec!["s0^2", "0", "-s0", "0"],
            ],
        ),
        (
            4,
            vec![0, 0, 1],
            vec![vec!["s0", "0", "0"], vec!["0", "0", "s2"], vec!["0", "s2", "0"]],
            vec![
                vec!["0", "1", "0", "0"],
                vec!["0", "-s2", "1", "0"],
                vec!["0", "-s2^2", "s2", "1"],
                vec!["-s0", "0", "0", "0"],
            ],
        ),
        (
            4,
            vec![1, 0, 1],
            vec![vec!["0", "s0", "0"], vec!["s0", "0", "s2"], vec!["0", "s2", "0"]],
            vec![
                vec!["0", "1", "0", "0"],
                vec!["0", "-s2", "1", "0"],
                vec!["s0", "-s2^2", "s2", "1"],
                vec!["0", "-s0", "0", "0"],
            ],
        ),
        (
            4,
            vec![2, 0, 1],
            vec![vec!["0", "0", "s0"], vec!["0", "2*s0", "s2"], vec!["s0", "s2", "0"]],
            vec![
                vec!["0", "1", "0", "0"],
                vec!["-s0", "-s2", "1", "0"],
                vec!["-s0*s2", "2*s0 - s2^2", "s2", "1"],
                vec!["s0^2", "s0*s2", "-s0", "0"],
            ],
        ),
    ]
}

fn parse(rows: &[Vec<&str>]) -> SymbolicMatrix {
    let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
    SymbolicMatrix::parse_rows(&refs)
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    for (n, orders, q_rows, f_rows) in golden() {
        let o = validate_orders(n, &orders).unwrap();
        // The fourth-order examples carry no sigma_1.
        let q = build_q(&o).zero_symbols(&[1]);
        let f = build_f_symbolic(&o).zero_symbols(&[1]);
        if q != parse(&q_rows) || f != parse(&f_rows) {
            bad.push(format!("{n}/{orders:?}"));
        }
    }
    outcome(bad.is_empty(), format!("8 golden (Q, F) pairs, mismatches: {bad:?}"))
}

fn criterion_2() -> Outcome {
    let cases: Vec<(usize, u64)> = (2..=6).flat_map(|n| (1..=100).map(move |s| (n, s))).collect();
    let rows: Vec<_> = cases.par_iter().map(|&(n, s)| verify_seed(n, s, 6).unwrap()).collect();
    let failed: Vec<_> = rows.iter().filter(|r| !r.passed()).map(|r| (r.n, r.seed)).collect();
    outcome(failed.is_empty(), format!("{} cases, nonzero residuals: {failed:?}", rows.len()))
}

fn random_expr(rng: &mut ChaCha8Rng) -> SigmaExpression {
    let mut text = String::from("0");
    for _ in 0..rng.gen_range(0..4) {
        let coef = rng.gen_range(-5i64..=5);
        let a = rng.gen_range(0..6);
        match rng.gen_range(0..3) {
            0 => text.push_str(&format!(" + {coef}")),
            1 => text.push_str(&format!(" + {coef}*s{a}")),
            _ => text.push_str(&format!(" + {coef}*s{a}*s{}", rng.gen_range(0..6))),
        }
    }
    text.replace("+ -", "- ").parse().unwrap()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut roundtrip_failures = 0;
    let mut structure_failures = 0;
    for _ in 0..500 {
        let n = rng.gen_range(2..=10);
        let m = n / 2;
        let mut q = SymbolicMatrix::zeros(m + 1, m + 1);
        for r in 0..=m {
            for col in 0..=m {
                if !(n % 2 == 0 && r == m && col == m) {
                    q[(r, col)] = random_expr(&mut rng);
                }
            }
        }
        let f = s_map(&q, n).unwrap();
        if !check_structure(&f).conditions_hold() {
            structure_failures += 1;
        }
        if s_inverse(&f, n).unwrap() != q {
            roundtrip_failures += 1;
        }
    }
    let mut generated = 0;
    let mut trace_failures = 0;
    for n in 2..=10 {
        let all = SingularityOrders::enumerate(n).unwrap();
        let step = (all.len() / 400).max(1);
        for o in all.iter().step_by(step) {
            generated += 1;
            if !check_structure(&build_f_symbolic(o)).passes() {
                trace_failures += 1;
            }
        }
    }
    outcome(
        roundtrip_failures == 0 && structure_failures == 0 && trace_failures == 0,
        format!(
            "500 random Q: {roundtrip_failures} roundtrip and {structure_failures} structure failures; \
             {generated} generated F: {trace_failures} failing (i)-(iii) or trace"
        ),
    )
}

fn criterion_4() -> Outcome {
    let free = FEvaluator::from_coefficients(&CoefficientSet::zero(SingularityOrders::regular(2).unwrap()));
    let cfg = SolverConfig::with_steps(10_000);
    let v = BoundaryForm::identity(2);
    let m = |lambda: f64, geometry: Geometry| {
        let vv = geometry.is_finite().then_some(&v);
        weyl_matrix(&free, c(lambda), &robin(0.0), vv, geometry, &cfg).unwrap().entry(2, 1)
    };
    let e1 = (m(1.0, Geometry::FiniteInterval) - c(-1.0 / 1.0f64.tanh())).norm();
    let e2 = m(-PI * PI / 4.0, Geometry::FiniteInterval).norm();
    let e3 = (m(4.0, Geometry::HalfLine { truncation: 30.0 }) - c(-0.5)).norm();
    outcome(
        e1 <= 1e-6 && e2 <= 1e-6 && e3 <= 1e-4,
        format!(
            "|M21(1)+coth 1| = {e1:.2e}, |M21(-pi^2/4)| = {e2:.2e} (tol 1e-6); half-line |M21(4)+1/2| = {e3:.2e} (tol 1e-4)"
        ),
    )
}

fn n4_bump_problem() -> CoefficientSet {
    set(4, &[2, 0, 1], vec![hat(int(0), int(1), 2), CoefficientFunction::zero(), indicator(ratio(1, 4), ratio(3, 4))])
}

fn criterion_5() -> Outcome {
    let f = FEvaluator::from_coefficients(&n4_bump_problem());
    let cfg = SolverConfig::with_steps(4000);
    let rows: Vec<(f64, f64, f64)> = ray(FRAC_PI_2, 20)
        .par_iter()
        .map(|&lambda| {
            let drift = wronskian_drift(&f, lambda, &u4(), 3.0, &cfg).unwrap();
            let mut above: f64 = 0.0;
            let mut diag: f64 = 0.0;
            let v = v4();
            for g in [Geometry::FiniteInterval, Geometry::HalfLine { truncation: 3.0 }] {
                let w = weyl_matrix(&f, lambda, &u4(), g.is_finite().then_some(&v), g, &cfg).unwrap();
                let (a, d) = w.triangularity_defect();
                above = above.max(a);
                diag = diag.max(d);
            }
            (drift, above, diag)
        })
        .collect();
    let drift = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let above = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let diag = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    outcome(
        drift <= 1e-8 && above <= 1e-9 && diag <= 1e-9,
        format!(
            "20 lambdas: det C drift {drift:.2e} (tol 1e-8), above-diagonal {above:.2e}, |M_kk - 1| {diag:.2e} (tol 1e-9)"
        ),
    )
}

fn criterion_6() -> Outcome {
    let cfg = SolverConfig::with_steps(4000);
    let grid = ray(0.9, 20);

    let n2 = set(2, &[0], vec![hat(int(0), int(1), 2)]);
    let half = ProblemSpec::half_line(n2.clone(), robin(0.3), 4.0).unwrap();
    let fin = ProblemSpec::finite(n2, robin(0.3), robin(-0.4)).unwrap();
    let mut pairs_half = vec![("n2", half.clone(), shift_n2_spec(&half, Direction::RaiseOrder).unwrap())];
    let mut pairs_fin = vec![("n2", fin.clone(), finite_shift_n2(&fin, Direction::RaiseOrder, c(1.25)).unwrap())];

    let cases = [
        ("case1", N4Case::Case1_00to01, [0, 0, 0], indicator(int(0), int(1)), hat(int(0), int(1), 2)),
        ("case2", N4Case::Case2_01to11, [0, 0, 1], indicator(int(0), ratio(1, 2)), hat(ratio(1, 4), int(1), 1)),
        ("case3", N4Case::Case3_10to20, [1, 0, 0], indicator(int(0), int(1)), hat(int(0), int(1), 1)),
    ];
    for (name, case, orders, a, b) in cases {
        let coeffs = set(4, &orders, vec![a, CoefficientFunction::zero(), b]);
        let half = ProblemSpec::half_line(coeffs.clone(), u4(), 3.0).unwrap();
        let fin = ProblemSpec::finite(coeffs, u4(), v4()).unwrap();
        pairs_half.push((name, half.clone(), shift_n4(&half, case, Direction::RaiseOrder).unwrap()));
        pairs_fin.push((name, fin.clone(), finite_shift_n4(&fin, case, Direction::RaiseOrder, c(0.5)).unwrap()));
    }
    let mut worst_finite: f64 = 0.0;
    let mut worst_half: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, a, b) in &pairs_fin {
        let r = weyl_invariance_check(a, b, &grid, &cfg).unwrap();
        worst_finite = worst_finite.max(r.max_deviation);
        parts.push(format!("{name}/finite {:.1e}", r.max_deviation));
    }
    for (name, a, b) in &pairs_half {
        let r = weyl_invariance_check(a, b, &grid, &cfg).unwrap();
        worst_half = worst_half.max(r.max_deviation);
        parts.push(format!("{name}/half {:.1e}", r.max_deviation));
    }
    outcome(
        worst_finite <= 1e-6 && worst_half <= 1e-4,
        format!(
            "finite max {worst_finite:.2e} (tol 1e-6), half-line max {worst_half:.2e} (tol 1e-4) [{}]",
            parts.join(", ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let v = v4();
    let mut alt = v.clone();
    // Rows 3 and 2 of L_V hold (v_{2,1}, v_{2,2}) and v_{3,1}.
    alt.set_l(3, 1, v.l(3, 1) + 7.0).unwrap();
    alt.set_l(3, 2, v.l(3, 2) - 3.0).unwrap();
    alt.set_l(2, 1, v.l(2, 1) + 0.5).unwrap();
    let pts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let cfg = SolverConfig::with_steps(4000);
    let r = v_equivalence_check(&n4_bump_problem(), &u4(), &v, &alt, &ray(1.1, 10), &pts, 1e-10, &cfg).unwrap();
    outcome(r.equivalent, format!("max Phi deviation {:.2e} over 10 lambdas x 11 points (tol 1e-10)", r.max_deviation))
}

fn criterion_8() -> Outcome {
    let coeffs = set(2, &[0], vec![CoefficientFunction::bump(int(0), int(1), int(1), BumpProfile::Smooth).unwrap()]);
    let f = FEvaluator::from_coefficients(&coeffs);
    let mags = [5.0, 10.0, 20.0, 40.0];
    let cfg = SolverConfig::with_steps(20_000);
    let p = asymptotics_probe(&f, &robin(0.0), 1, 0, FRAC_PI_4, &mags, 0.5, 2.0, &cfg).unwrap();
    let last = p.samples.last().unwrap().rel_error;
    let errs: Vec<String> = p.samples.iter().map(|s| format!("{:.3e}", s.rel_error)).collect();
    let limit_ok = (p.limit - c(-1.0)).norm() < 1e-12;
    outcome(
        limit_ok && last <= 0.05 && p.is_nonincreasing(0.1),
        format!(
            "a0 = {}, rel errors at |rho| = 5,10,20,40: [{}] (tol 0.05 at 40, 10% jitter)",
            p.limit,
            errs.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let a = CoefficientFunction::bump(ratio(1, 4), ratio(3, 4), int(1), BumpProfile::Smooth).unwrap();
    let (plain, twisted) = counterexample_pair(&a).unwrap();
    let cfg = SolverConfig::with_steps(10_000);
    let v = robin(0.2);
    let mut worst: f64 = 0.0;
    for g in [Geometry::FiniteInterval, Geometry::HalfLine { truncation: 2.0 }] {
        for lambda in ray(1.0, 10) {
            let vv = g.is_finite().then_some(&v);
            let m0 = weyl_matrix(&plain, lambda, &robin(0.5), vv, g, &cfg).unwrap().m;
            let m1 = weyl_matrix(&twisted, lambda, &robin(0.5), vv, g, &cfg).unwrap().m;
            let d: DMatrix<Complex64> = m0 - m1;
            worst = worst.max(d.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    outcome(worst <= 1e-8, format!("max |M - M~| = {worst:.2e} over 10 lambdas, both geometries (tol 1e-8)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("symbolic golden match", criterion_1, Duration::from_secs(1)),
        ("regularization identity", criterion_2, Duration::from_secs(60)),
        ("mapping roundtrip and structure", criterion_3, Duration::from_secs(30)),
        ("constant-coefficient Weyl functions", criterion_4, Duration::from_secs(10)),
        ("Wronskian and triangularity", criterion_5, Duration::from_secs(60)),
        ("equivalence invariance", criterion_6, Duration::from_secs(300)),
        ("V-equivalence", criterion_7, Duration::from_secs(60)),
        ("Weyl solution asymptotics", criterion_8, Duration::from_secs(60)),
        ("non-uniqueness counterexample", criterion_9, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.passed && elapsed <= *budget;
        if !ok {
            failures += 1;
        }
        println!(
            "[{}] criterion {}: {name}: {} ({:.2}s, budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
