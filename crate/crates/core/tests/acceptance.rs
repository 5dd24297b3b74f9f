//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grassmann::algebra::{random_hermitian, standard_basis, Field, HermitianMatrix};
use grassmann::geometry::{
    laplacian_numeric, mean_curvature_closed_form, mean_curvature_numeric, minimality_residual,
    sphere_slice_center, sphere_slice_radius, tangent_basis, FiniteDifference,
};
use grassmann::grassmann::{complete_frame, embed, involution, random_point, real_determinant};
use grassmann::homology::{
    binomial, check_poincare_identity, poincare_recursive_f, poincare_recursive_g, schubert_oracle,
    IntPolynomial,
};
use grassmann::morse::{
    flow, height, hessian_fd, morse_index, CriticalClass, Direction, FlowOptions, GammaTrajectory,
    HeightParam, ZeroThreshold,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| {
        if v.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(v)
        }
    })
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn embedding_invariants() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = [0.0f64; 4];
    for field in Field::ALL {
        for k in 0..100u64 {
            let dim = rng.random_range(1..=8);
            let n = rng.random_range(0..=dim);
            let a = embed(&random_point(field, n, dim, 1000 + k).unwrap());
            let res = [
                a.idempotence_residual(),
                a.matrix().hermitian_residual(),
                a.trace_residual(),
                a.norm_residual(),
            ];
            for (w, r) in worst.iter_mut().zip(res) {
                *w = max_of([*w, r]);
            }
        }
    }
    let elapsed = start.elapsed();
    let m = max_of(worst);
    outcome(
        m <= 1e-10 && within(Duration::from_secs(5), elapsed),
        format!(
            "max residual {m:.2e} ≤ 1e-10 over 300 points, {:.2} s < 5 s",
            elapsed.as_secs_f64()
        ),
    )
}

fn gram_matrices() -> Outcome {
    let mut off = 0.0f64;
    for field in Field::ALL {
        for dim in 1..=6 {
            let basis = standard_basis(field, dim).unwrap();
            for (i, x) in basis.iter().enumerate() {
                for y in &basis[i + 1..] {
                    off = max_of([off, x.inner(y).unwrap().abs()]);
                }
            }
        }
    }
    let mut tangent = 0.0f64;
    for field in Field::ALL {
        for seed in 0..20 {
            let tb = tangent_basis(&complete_frame(&random_point(field, 2, 5, seed).unwrap()));
            let g = tb.gram();
            let m = tb.len();
            for (idx, value) in g.iter().enumerate() {
                let expected = if idx / m == idx % m { 2.0 } else { 0.0 };
                tangent = max_of([tangent, (value - expected).abs()]);
            }
        }
    }
    outcome(
        off <= 1e-12 && tangent <= 1e-10,
        format!("ambient off-diagonal {off:.2e} ≤ 1e-12, tangent |G − 2I| {tangent:.2e} ≤ 1e-10"),
    )
}

fn mean_curvature() -> Outcome {
    let mut minimality = 0.0f64;
    let mut err_bound = 0.0f64;
    let (mut ratio_lo, mut ratio_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut radius = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..50u64 {
        let field = Field::ALL[(k % 3) as usize];
        let dim = rng.random_range(2..=6);
        let n = rng.random_range(1..dim);
        let full = complete_frame(&random_point(field, n, dim, 300 + k).unwrap());
        minimality = max_of([minimality, minimality_residual(&full).unwrap()]);
        let closed = mean_curvature_closed_form(&full).unwrap();
        let mut errs = Vec::new();
        for h in [1e-3, 2e-3] {
            let num = mean_curvature_numeric(&full, FiniteDifference::new(h).unwrap()).unwrap();
            let e = num.distance(&closed).unwrap();
            err_bound = max_of([err_bound, e / (10.0 * h * h)]);
            errs.push(e);
        }
        let ratio = errs[1] / errs[0];
        ratio_lo = ratio_lo.min(ratio);
        ratio_hi = ratio_hi.max(ratio);
        let d = full
            .point()
            .matrix()
            .distance(&sphere_slice_center(field, n, dim))
            .unwrap();
        let closed_radius = ((n * (dim - n)) as f64 / dim as f64).sqrt();
        radius = max_of([
            radius,
            (d - closed_radius).abs(),
            (sphere_slice_radius(n, dim) - closed_radius).abs(),
        ]);
    }
    let pass = minimality <= 1e-10
        && err_bound <= 1.0
        && (3.5..=4.5).contains(&ratio_lo)
        && (3.5..=4.5).contains(&ratio_hi)
        && radius <= 1e-12;
    outcome(
        pass,
        format!(
            "minimality {minimality:.2e} ≤ 1e-10, max err/(10h²) {err_bound:.3} ≤ 1, ratio in [{ratio_lo:.4}, {ratio_hi:.4}] ⊂ [3.5, 4.5], radius {radius:.1e}"
        ),
    )
}

fn laplacian() -> Outcome {
    let start = Instant::now();
    let fd = FiniteDifference::new(1e-3).unwrap();
    let mut worst = 0.0f64;
    let mut h_time = Duration::ZERO;
    for field in Field::ALL {
        let t = Instant::now();
        let dim = 5;
        for k in 0..20u64 {
            let p = random_hermitian(field, dim, 500 + k).unwrap();
            let p = p
                .sub(&HermitianMatrix::identity(field, dim).scale(p.trace() / dim as f64))
                .unwrap();
            let full = complete_frame(&random_point(field, 2, dim, 600 + k).unwrap());
            let f = full.point().matrix().inner(&p).unwrap();
            let lap = laplacian_numeric(&p, &full, fd).unwrap();
            let c_n = (field.c() * dim) as f64;
            worst = max_of([worst, (lap + c_n * f).abs() / f.abs().max(0.1)]);
        }
        if field == Field::H {
            h_time = t.elapsed();
        }
    }
    outcome(
        worst <= 1e-3 && within(Duration::from_secs(30), h_time),
        format!(
            "max |Δf + cNf|/max(|f|,0.1) {worst:.2e} ≤ 1e-3 on G(2,5), (H,2,5) {:.2} s < 30 s (total {:.2} s)",
            h_time.as_secs_f64(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn morse_indices() -> Outcome {
    let cases = [
        (Field::C, 1, 3),
        (Field::C, 2, 4),
        (Field::C, 2, 5),
        (Field::H, 1, 3),
        (Field::H, 2, 4),
    ];
    let mut checked = 0;
    let mut failures = Vec::new();
    for (field, n, dim) in cases {
        for class in CriticalClass::CRITICAL {
            let Ok(expected_index) = class.predicted_index(field, n, dim) else {
                continue;
            };
            let expected_nullity = class.predicted_nullity(field, n, dim).unwrap();
            let p = HeightParam::named(class.param().unwrap(), field, dim).unwrap();
            let full = complete_frame(&class.sample(field, n, dim, 7).unwrap());
            let mi = morse_index(&p, &full, hessian_fd(), ZeroThreshold::default()).unwrap();
            checked += 1;
            if (mi.index, mi.nullity) != (expected_index, expected_nullity) || mi.unstable {
                failures.push(format!(
                    "{class} on G_{field}({n},{dim}): ({}, {}) vs ({expected_index}, {expected_nullity})",
                    mi.index, mi.nullity
                ));
            }
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{checked} (index, nullity) pairs match exactly")
        } else {
            failures.join("; ")
        },
    )
}

fn trajectory() -> Outcome {
    let mut cos_err = 0.0f64;
    let mut landing = 0.0f64;
    for field in Field::ALL {
        let frame = random_point(field, 2, 5, 40).unwrap();
        let traj = GammaTrajectory::through(&frame).unwrap();
        let p = HeightParam::e11(field, 5).unwrap();
        for k in 0..100 {
            let t = k as f64 * FRAC_PI_2 / 99.0;
            cos_err = max_of([
                cos_err,
                (height(&p, &traj.point_at(t)).unwrap() - t.cos().powi(2)).abs(),
            ]);
        }
        let r = flow(&p, &traj.frame_at(0.3), FlowOptions::default()).unwrap();
        landing = max_of([
            landing,
            r.end_point().distance(&traj.point_at(FRAC_PI_2)).unwrap(),
        ]);
    }
    let mut sub = 0;
    let mut contains = 0;
    let runs = 200u64;
    for k in 0..runs {
        let field = Field::ALL[(k % 3) as usize];
        let (n, dim) = (1 + (k % 2) as usize, 4);
        let p = HeightParam::e11(field, dim).unwrap();
        let start = random_point(field, n, dim, 10_000 + k).unwrap();
        let down = flow(&p, &start, FlowOptions::default()).unwrap();
        sub += usize::from(down.converged && down.class == Some(CriticalClass::FSub));
        let up = flow(
            &p,
            &start,
            FlowOptions {
                direction: Direction::Ascent,
                ..FlowOptions::default()
            },
        )
        .unwrap();
        contains += usize::from(up.converged && up.class == Some(CriticalClass::FContains));
    }
    let pass =
        cos_err <= 1e-12 && landing <= 1e-6 && sub == runs as usize && contains == runs as usize;
    outcome(
        pass,
        format!(
            "|f(γ(t)) − cos²t| {cos_err:.1e} ≤ 1e-12, landing distance {landing:.1e} ≤ 1e-6, descent F_SUB {sub}/{runs}, ascent F_CONTAINS {contains}/{runs}"
        ),
    )
}

fn homology_exact() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for field in [Field::C, Field::H] {
        for dim in 0..=10 {
            for n in 0..=dim {
                count += 1;
                let f = poincare_recursive_f(field, n, dim).unwrap();
                let mut ok = f == schubert_oracle(field, n, dim).unwrap();
                if n >= 2 && dim - n >= 2 {
                    ok &= f == poincare_recursive_g(field, n, dim).unwrap();
                }
                if n >= 1 && n < dim {
                    ok &= check_poincare_identity(field, n, dim).unwrap();
                }
                ok &= f.eval_at_one() == binomial(dim, n) && f.is_palindromic();
                if !ok {
                    failures.push(format!("G_{field}({n},{dim})"));
                }
            }
        }
    }
    let c = |n, dim| poincare_recursive_f(Field::C, n, dim).unwrap();
    let poly = |v: &[i64]| IntPolynomial::new(v.to_vec());
    let t = |k| IntPolynomial::monomial(1, k);
    let one_plus = |k| IntPolynomial::one().checked_add(&t(k)).unwrap();
    let mut examples = vec![
        c(2, 5) == poly(&[1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 0, 1]),
        c(2, 7)
            == poly(&[
                1, 0, 1, 0, 2, 0, 2, 0, 3, 0, 3, 0, 3, 0, 2, 0, 2, 0, 1, 0, 1,
            ]),
        c(2, 8) == c(2, 7).checked_add(&c(1, 7).shift(12)).unwrap(),
        c(3, 7)
            == one_plus(6)
                .checked_mul(&c(2, 5))
                .unwrap()
                .checked_add(&c(2, 6).shift(8))
                .unwrap(),
        c(5, 10)
            == one_plus(10)
                .checked_mul(
                    &c(2, 7)
                        .shift(20)
                        .checked_add(
                            &one_plus(8)
                                .checked_add(&t(10))
                                .unwrap()
                                .checked_mul(&c(3, 7))
                                .unwrap(),
                        )
                        .unwrap(),
                )
                .unwrap(),
    ];
    for dim in 1..=10 {
        examples.push(
            c(1, dim)
                == IntPolynomial::new((0..2 * dim - 1).map(|k| i64::from(k % 2 == 0)).collect()),
        );
    }
    if examples.iter().any(|ok| !ok) {
        failures.push("worked examples".into());
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within(Duration::from_secs(1), elapsed),
        format!(
            "{count} (field, n, N) cases and {} worked examples exact{}, {:.3} s < 1 s",
            examples.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failed: {}", failures.join(", "))
            },
            elapsed.as_secs_f64()
        ),
    )
}

fn involution_checks() -> Outcome {
    let mut square = 0.0f64;
    let mut det = 0.0f64;
    for field in Field::ALL {
        for dim in 1..=6 {
            for n in 0..=dim {
                let a = embed(&random_point(field, n, dim, (10 * dim + n) as u64).unwrap());
                let inv = involution(&a);
                let sq = HermitianMatrix::new(field, inv.product(&inv).unwrap()).unwrap();
                square = max_of([
                    square,
                    sq.distance(&HermitianMatrix::identity(field, dim)).unwrap(),
                ]);
                if field == Field::R && (1..=3).contains(&n) {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    det = max_of([det, (real_determinant(&inv).unwrap() - sign).abs()]);
                }
            }
        }
    }
    outcome(
        square <= 1e-10 && det <= 1e-10,
        format!("|Ã² − I| {square:.2e} ≤ 1e-10, |det Ã − (−1)^n| {det:.2e} over R, n ∈ {{1,2,3}}, N ≤ 6"),
    )
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = grassmann::cli::run(
        std::iter::once("grassmann").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn reproducibility() -> Outcome {
    let suite: [&[&str]; 6] = [
        &[
            "verify",
            "--field",
            "H",
            "--n",
            "2",
            "--N",
            "5",
            "--samples",
            "5",
            "--seed",
            "1",
            "--json",
        ],
        &[
            "verify", "--field", "R", "--n", "1", "--N", "3", "--seed", "4", "--json",
        ],
        &[
            "poincare", "--field", "H", "--n", "3", "--N", "7", "--method", "schubert", "--json",
        ],
        &[
            "flow", "--field", "C", "--n", "2", "--N", "4", "--param", "E12", "--runs", "6",
            "--seed", "9", "--json",
        ],
        &[
            "index",
            "--field",
            "C",
            "--n",
            "2",
            "--N",
            "5",
            "--class",
            "G_ZERO_SUB",
            "--seed",
            "2",
            "--json",
        ],
        &["poincare", "--check-all", "--max-N", "8", "--json"],
    ];
    let mut differing = Vec::new();
    for args in suite {
        let (c1, first) = run_cli(args);
        let (c2, second) = run_cli(args);
        if c1 != 0 || c2 != 0 || first != second || first.is_empty() {
            differing.push(args[0].to_string());
        }
    }
    let batch = |workers: &str| {
        run_cli(&[
            "flow",
            "--field",
            "H",
            "--n",
            "1",
            "--N",
            "3",
            "--runs",
            "8",
            "--workers",
            workers,
            "--json",
        ])
        .1
    };
    if batch("1") != batch("4") {
        differing.push("flow batch across worker counts".into());
    }
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} commands byte-identical across two runs; flow batch identical for 1 and 4 workers", suite.len())
        } else {
            format!("differing: {}", differing.join(", "))
        },
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 embedding invariants", embedding_invariants),
        ("2 Gram matrices", gram_matrices),
        ("3 mean curvature and minimality", mean_curvature),
        ("4 Laplacian eigenfunctions", laplacian),
        ("5 Morse indices and nullities", morse_indices),
        ("6 trajectories and flow endpoints", trajectory),
        ("7 Poincaré polynomials, exact", homology_exact),
        ("8 involution", involution_checks),
        ("9 reproducibility", reproducibility),
    ];
    println!("acceptance suite: {} criteria", criteria.len());
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let o = check();
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "[{mark}] {name}: {} ({:.2} s)",
            o.detail,
            t.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
