//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use coeffforge::pipeline::{run_verification, VerifyConfig};
use coeffforge::scalar::{from_c64, parse_rational};
use coeffforge::schwarz::{is_admissible, sample_jets};
use coeffforge::ulambda::{
    extremal_function, fekete_szego_bound_real, fekete_szego_value, inverse_coeffs,
    inverse_coeffs_via_direct, inverse_coeffs_via_reversion, membership_scan, theoretical_bounds,
};
use coeffforge::verify::{
    a4_bound, a4_case_bound, a4_global_bound, case_one_cap, case_threshold, h_function,
    h_vertex_value, h_vertex_value_loose, lambda_grid, t_vertex, verify_bound,
    verify_gap_inequality, A4Case,
};
use coeffforge::{
    BigRational, Complex, FunctionModel, FunctionalKind, NormalizedSeries, SampleStrategy,
    SchwarzJet, SearchConfig, Series, ULambdaParams,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(s: &str) -> Q {
    parse_rational(s).unwrap()
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qc(re: Q) -> Complex<Q> {
    Complex::new(re, Q::zero())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:.0?}")
    })
}

fn c1_extremal_inverse() -> Outcome {
    let start = Instant::now();
    for l in ["1/4", "1/2", "3/4", "1"] {
        let lambda = q(l);
        let f = extremal_function(&ULambdaParams::new(lambda.clone()).unwrap(), 4).unwrap();
        let inv = f.revert();
        let one = Q::one();
        let expected = [
            Q::zero(),
            one.clone(),
            -(&one + &lambda),
            &one + qi(3) * &lambda + &lambda * &lambda,
            -((&one + &lambda) * (&one + qi(5) * &lambda + &lambda * &lambda)),
        ];
        let expected: Vec<_> = expected.into_iter().map(qc).collect();
        ensure(inv.coeffs() == expected.as_slice(), || {
            format!("lambda={l}: got {inv}")
        })?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("4 values of lambda, {:.2?}", start.elapsed()))
}

/// Inverse coefficients from the jet, written out independently of the library.
fn oracle_inverse(l: &Q, j: &SchwarzJet<Q>) -> [Complex<Q>; 3] {
    let one = Q::one();
    let p = &one + l;
    let (c1, c2, c3) = (&j.c1, &j.c2, &j.c3);
    let a2 = -c1 * p.clone();
    let a3 = -c2 * p.clone() + c1 * c1 * (&one + qi(3) * l + l * l);
    let a4 = -c3 * p.clone() + c1 * c2 * (qi(3) + qi(8) * l + qi(3) * l * l)
        - c1 * c1 * c1 * (p.clone() * (&one + qi(5) * l + l * l));
    [a2, a3, a4]
}

fn c2_three_paths() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (i, l) in ["1/10", "1/2", "1"].iter().enumerate() {
        let lambda = q(l);
        let params = ULambdaParams::new(lambda.clone()).unwrap();
        let lf = coeffforge::Real::to_f64(&lambda);
        let jets = sample_jets(lf, 1000, 1000 + i as u64, SampleStrategy::Uniform).unwrap();
        for jet in jets {
            let exact = SchwarzJet::new(
                from_c64::<Q>(jet.c1).unwrap(),
                from_c64::<Q>(jet.c2).unwrap(),
                from_c64::<Q>(jet.c3).unwrap(),
            );
            let closed = inverse_coeffs(&params, &exact);
            let direct = inverse_coeffs_via_direct(&params, &exact);
            let reverted = inverse_coeffs_via_reversion(&params, &exact);
            ensure(closed.values() == direct.values(), || {
                format!("lambda={l}: closed form vs direct")
            })?;
            ensure(closed.values() == reverted.values(), || {
                format!("lambda={l}: closed form vs reversion")
            })?;
            ensure(closed.values() == oracle_inverse(&lambda, &exact), || {
                format!("lambda={l}: oracle")
            })?;
            checked += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{checked} jets, exact equality, {:.2?}",
        start.elapsed()
    ))
}

fn c3_soundness() -> Outcome {
    let start = Instant::now();
    let search = SearchConfig {
        samples: 100_000,
        tolerance: 1e-9,
        ..SearchConfig::default()
    };
    let mut worst = f64::INFINITY;
    for lambda in lambda_grid(20) {
        let params = ULambdaParams::new(lambda).unwrap();
        let one = 1.0;
        let bounds = [
            one + lambda,
            one + 3.0 * lambda + lambda * lambda,
            (one + lambda) * (one + 5.0 * lambda + lambda * lambda),
        ];
        for (kind, bound) in [FunctionalKind::A2, FunctionalKind::A3, FunctionalKind::A4]
            .into_iter()
            .zip(bounds)
        {
            let r = verify_bound(&params, kind, None, &search).unwrap();
            ensure(r.empirical_max <= bound + 1e-9, || {
                format!("{kind} at lambda={lambda}: {} > {bound}", r.empirical_max)
            })?;
            ensure(
                is_admissible(&lambda, &SchwarzJet::from(r.argmax_jet)),
                || format!("{kind} at lambda={lambda}: argmax jet not admissible"),
            )?;
            worst = worst.min(bound - r.empirical_max);
        }
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "60 searches of 1e5 samples, min gap {worst:.3e}, {:.2?}",
        start.elapsed()
    ))
}

fn c4_sharpness() -> Outcome {
    for l in ["1/10", "1/4", "1/2", "3/4", "1"] {
        let params = ULambdaParams::new(q(l)).unwrap();
        let inv = inverse_coeffs(&params, &SchwarzJet::corner());
        let b = theoretical_bounds(&params).as_array();
        for (k, (a, bound)) in inv.values().iter().zip(b.iter()).enumerate() {
            ensure(a.norm_sqr() == bound * bound, || {
                format!("lambda={l}: |A{}| != B{}", k + 2, k + 2)
            })?;
        }
    }
    Ok("corner attains B2, B3, B4 exactly".into())
}

fn c5_fekete_szego() -> Outcome {
    let search = SearchConfig::default();
    let mut count = 0;
    for l in ["1/4", "1/2", "1"] {
        let lambda = q(l);
        let exact = ULambdaParams::new(lambda.clone()).unwrap();
        let float = ULambdaParams::new(coeffforge::Real::to_f64(&lambda)).unwrap();
        for m in ["0", "1/4", "1/2", "3/4", "1"] {
            let mu = q(m);
            let bound = &lambda + (Q::one() - &mu) * (Q::one() + &lambda) * (Q::one() + &lambda);
            ensure(fekete_szego_bound_real(&exact, &mu) == bound, || {
                format!("bound at lambda={l}, mu={m}")
            })?;
            let at_corner = fekete_szego_value(&exact, &SchwarzJet::corner(), &qc(mu.clone()));
            ensure(at_corner.norm_sqr() == &bound * &bound, || {
                format!("corner at lambda={l}, mu={m}")
            })?;
            let bf = coeffforge::Real::to_f64(&bound);
            let mu_f = Complex::new(coeffforge::Real::to_f64(&mu), 0.0);
            let r = verify_bound(&float, FunctionalKind::FeketeSzego, Some(mu_f), &search).unwrap();
            ensure(r.empirical_max <= bf + 1e-9, || {
                format!("lambda={l}, mu={m}: {} > {bf}", r.empirical_max)
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} (lambda, mu) pairs sound, corner attains exactly"
    ))
}

fn c6_h_analysis() -> Outcome {
    let tol = 1e-12;
    let ls = ["1/20", "1/4", "1/2", "3/4", "1"];
    for l in ls {
        let lambda = q(l);
        let thr = case_threshold(&lambda);
        ensure(thr == Q::one() / (qi(3) * (Q::one() + &lambda)), || {
            format!("threshold at {l}")
        })?;
        ensure(t_vertex(&lambda, &thr) == lambda, || {
            format!("vertex at threshold, lambda={l}")
        })?;
        for k in 0..=40 {
            let c = qi(k) / qi(40);
            let t0 = t_vertex(&lambda, &c);
            ensure(t0 == qi(3) * &lambda * (Q::one() + &lambda) * &c, || {
                format!("t0 at {l}")
            })?;
            let analysis = a4_case_bound(&lambda, &c).unwrap();
            if c <= thr {
                // Parabola symmetric about t0 inside [0, lambda]: h(t0 - d) == h(t0 + d).
                let d = (&lambda - &t0).min(t0.clone()) / qi(2);
                let lo = h_function(&lambda, &c, &(&t0 - &d)).unwrap();
                let hi = h_function(&lambda, &c, &(&t0 + &d)).unwrap();
                ensure(lo == hi, || format!("asymmetric h at lambda={l}, c={c}"))?;
                ensure(analysis.case == A4Case::One, || {
                    format!("case at lambda={l}, c={c}")
                })?;
                ensure(analysis.candidate() <= case_one_cap(&lambda), || {
                    format!("cap at lambda={l}, c={c}")
                })?;
            } else {
                ensure(analysis.case == A4Case::Two, || {
                    format!("case at lambda={l}, c={c}")
                })?;
            }
        }
        ensure(
            a4_case_bound(&lambda, &Q::one()).unwrap().candidate() == a4_bound(&lambda),
            || format!("h/2 at |c1|=1, lambda={l}"),
        )?;
    }
    for lf in lambda_grid(50) {
        let r = a4_global_bound(lf, 1001).unwrap();
        let b4 = (1.0 + lf) * (1.0 + 5.0 * lf + lf * lf);
        ensure((r.value - b4).abs() <= tol * b4.max(1.0), || {
            format!("global sup at {lf}: {} vs {b4}", r.value)
        })?;
        ensure(r.case_one_max <= 2.0 * lf + 1.0 / 27.0 + tol, || {
            format!("case-one max at {lf}")
        })?;
    }
    let grid = lambda_grid(1000);
    ensure(verify_gap_inequality(&grid), || {
        "float gap inequality".into()
    })?;
    for k in 1..=1000 {
        let l = qi(k) / qi(1000);
        ensure(a4_bound(&l) > case_one_cap(&l), || {
            format!("exact gap inequality at {l}")
        })?;
    }
    Ok("vertex, threshold, case-one cap, global sup and 1000-point gap inequality".into())
}

fn c7_vertex_identity() -> Outcome {
    let mut checked = 0;
    for a in 1..=20 {
        let lambda = qi(a) / qi(20);
        let thr = case_threshold(&lambda);
        for b in 0..=30 {
            let c = &thr * qi(b) / qi(30);
            let t0 = t_vertex(&lambda, &c);
            let h0 = h_function(&lambda, &c, &t0).unwrap();
            let one = Q::one();
            let p = &one + &lambda;
            let completed =
                &lambda + qi(9) * &lambda * &p * &p * &c * &c + qi(2) * &p * &p * &p * &c * &c * &c;
            ensure(h0 == completed && h0 == h_vertex_value(&lambda, &c), || {
                format!("vertex identity at lambda={lambda}, c={c}")
            })?;
            ensure(h0 <= h_vertex_value_loose(&lambda, &c), || {
                format!("loose bound at lambda={lambda}, c={c}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} rational points in the case-one region"))
}

fn c8_membership() -> Outcome {
    for lambda in [0.25, 1.0] {
        for r in [0.5, 0.9, 0.99] {
            let v = membership_scan(&FunctionModel::Extremal(lambda), lambda, r, 720).unwrap();
            let expected = lambda * r * r;
            ensure((v.max_defect - expected).abs() < 1e-12, || {
                format!("lambda={lambda}, r={r}: {} vs {expected}", v.max_defect)
            })?;
            ensure(v.member, || {
                format!("extremal not a member at lambda={lambda}, r={r}")
            })?;
        }
    }
    let koebe = membership_scan(&FunctionModel::koebe(), 0.5, 0.9, 720).unwrap();
    ensure(!koebe.member, || {
        format!("koebe accepted, max defect {}", koebe.max_defect)
    })?;
    Ok(format!(
        "defect = lambda r^2; koebe max defect {:.4} at r=0.9",
        koebe.max_defect
    ))
}

fn c9_reversion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut exact_nonzero = 0;
    for _ in 0..500 {
        let tail: Vec<Complex<f64>> = (2..=8)
            .map(|_| loop {
                let z = Complex::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                if z.norm() <= 2.0 {
                    break z;
                }
            })
            .collect();
        let f = NormalizedSeries::from_tail(8, &tail).unwrap();
        let g = f.revert();
        let residual = f.composition_residual(&g).unwrap();
        worst = residual
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .fold(worst, f64::max);

        let fq = NormalizedSeries::new(Series::from_float(f.series()).unwrap()).unwrap();
        let gq = fq.revert();
        if !fq.composition_residual(&gq).unwrap().is_zero() {
            exact_nonzero += 1;
        }
    }
    ensure(exact_nonzero == 0, || {
        format!("{exact_nonzero} nonzero exact residuals")
    })?;
    ensure(worst < 1e-12, || {
        format!("max float residual {worst:.3e} (exact residual 0 on all 500)")
    })?;
    Ok(format!(
        "500 series of order 8, max float residual {worst:.3e}, exact residual 0"
    ))
}

fn c10_determinism() -> Outcome {
    let config = VerifyConfig {
        search: SearchConfig {
            samples: 20_000,
            seed: 42,
            ..SearchConfig::default()
        },
        ..VerifyConfig::default()
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_verification(&config).unwrap().csv())
    };
    let one = run(1);
    let eight = run(8);
    ensure(one == eight, || {
        "CSV differs between 1 and 8 workers".into()
    })?;
    Ok(format!(
        "{} bytes identical under 1 and 8 workers",
        one.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("extremal inverse series", c1_extremal_inverse),
        ("three-path coefficient agreement", c2_three_paths),
        ("coefficient bound soundness", c3_soundness),
        ("coefficient bound sharpness", c4_sharpness),
        ("Fekete-Szego bound", c5_fekete_szego),
        ("h(t) analysis", c6_h_analysis),
        ("exact vertex identity", c7_vertex_identity),
        ("membership scan", c8_membership),
        ("reversion residual", c9_reversion),
        ("thread-count determinism", c10_determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2}: {name} ({detail})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
