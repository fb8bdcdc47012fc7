//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use dhlab::analysis::mean_value_quadrature;
use dhlab::expsums::weyl_difference_poly as diff_poly;
use dhlab::forms::BoxConvention;
use dhlab::kernels::{sandwich_sweep, sandwich_truncation, KernelQuadrature};
use dhlab::numbers::{ramanujan_direct, rho_brute};
use dhlab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: dhlab::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn jittered(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + rng.gen::<f64>()) / n as f64)
        .collect()
}

fn kernel_sandwich() -> Check {
    let (tau, delta) = (1.0, 0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ts = jittered(&mut rng, 200, -2.0, 2.0);
    let a = sandwich_truncation(delta, 5e-4);
    let mut worst = f64::INFINITY;
    let mut tol_max = 0.0f64;
    for kind in [KernelKind::KMinus, KernelKind::KPlus] {
        let spec = lib(KernelSpec::new(kind, tau, delta))?;
        for r in lib(sandwich_sweep(&ts, &spec, a))? {
            tol_max = tol_max.max(r.tolerance());
            worst = worst.min(r.lower_gap.min(r.upper_gap) + r.tolerance());
            ensure(r.holds(), || {
                format!(
                    "{} at t = {}: gaps {:.3e}/{:.3e}, tolerance {:.3e}",
                    kind.name(),
                    r.t,
                    r.lower_gap,
                    r.upper_gap,
                    r.tolerance()
                )
            })?;
        }
    }
    ensure(tol_max <= 1e-3, || {
        format!("combined tolerance {tol_max:.3e} exceeds 1e-3")
    })?;
    Ok(format!(
        "A = {a:.1}, combined tolerance {tol_max:.2e}, worst slack {worst:.2e}"
    ))
}

fn fourier_identity() -> Check {
    let delta = 0.1;
    let spec = lib(KernelSpec::new(KernelKind::K1, 1.0, delta))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ts = jittered(&mut rng, 100, -2.5 * delta, 2.5 * delta);
    let quad = lib(KernelQuadrature::new(spec, 400.0, 2.5 * delta))?;
    let mut worst = 0.0f64;
    for &t in &ts {
        let triangle = (1.0 - t.abs() / delta).max(0.0) / delta;
        let err = (quad.transform(t).full() - triangle).abs();
        worst = worst.max(err);
    }
    ensure(worst < 1e-6, || format!("max deviation {worst:.3e}"))?;
    Ok(format!(
        "max |numeric − triangle| = {worst:.2e} over 100 points"
    ))
}

fn quadratic_form_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_ratio = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=25);
        let raw: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let a = rng.gen_range(0.0..100.0);
                let len = rng.gen_range(0.0..6.0f64).min(100.0 - a);
                (a, a + len)
            })
            .collect();
        let z = IntervalUnion::from_intervals(raw);
        let delta = rng.gen_range(0.01..1.0);
        let h = lib(h_l2_k1(&HSupport::new(z.clone()), delta))?;
        let bound = 2.0 * z.measure();
        ensure(h <= bound * (1.0 + 1e-9), || {
            format!("∫|H|²K₁ = {h} > 2Z = {bound}")
        })?;
        if bound > 0.0 {
            worst_ratio = worst_ratio.max(h / bound);
        }
    }
    let mut worst_single = 0.0f64;
    for _ in 0..200 {
        let delta = rng.gen_range(0.01..1.0);
        let l = delta + rng.gen_range(0.0..50.0);
        let a = rng.gen_range(0.0..50.0);
        let z = IntervalUnion::from_intervals(vec![(a, a + l)]);
        let l = z.measure();
        let h = lib(h_l2_k1(&HSupport::new(z), delta))?;
        let expect = l - delta / 3.0;
        let err = (h - expect).abs() / expect;
        worst_single = worst_single.max(err);
        ensure(err <= 4.0 * f64::EPSILON, || {
            format!("single interval ℓ = {l}, δ = {delta}: {h} vs {expect}")
        })?;
    }
    Ok(format!(
        "max ∫|H|²K₁/(2Z) = {worst_ratio:.4}, single-interval relative error ≤ {worst_single:.1e}"
    ))
}

fn diagonality() -> Check {
    let c = 4.0;
    let mut runs = 0;
    let mut solutions = 0u64;
    let t2_l = [1.0, 2f64.sqrt()];
    let mut cases: Vec<(u32, f64)> = (5..=20).map(|p| (1, p as f64)).collect();
    cases.extend((17..=20).map(|p| (2, p as f64)));
    cases.extend([(2, 200.0), (2, 1000.0)]);
    for &(t, p) in &cases {
        let r = lib(diminishing_ranges(p, 3, t, c))?;
        let coeffs = &t2_l[..t as usize];
        for delta in [0.1, 0.5, 1.0] {
            for i in -20..=20 {
                let d = r.m_max * (i as f64 / 20.0);
                let chk = lib(diagonal_solution_check(coeffs, &r, delta, d))?;
                runs += 1;
                solutions += chk.count;
                ensure(chk.all_diagonal, || {
                    format!(
                        "t = {t}, P = {p}, δ = {delta}, μ−ν = {d}: {} off-diagonal",
                        chk.off_diagonal
                    )
                })?;
            }
        }
    }
    let mut control_off = 0u64;
    for t in [1u32, 2] {
        let r = lib(diminishing_ranges(20.0, 3, t, 1.01))?;
        for i in -20..=20 {
            let d = r.m_max * (i as f64 / 20.0);
            control_off +=
                lib(diagonal_solution_check(&t2_l[..t as usize], &r, 1.0, d))?.off_diagonal;
        }
    }
    ensure(solutions > 0, || "every enumeration was empty".into())?;
    Ok(format!("{runs} enumerations, {solutions} solutions, all diagonal; control c = 1.01 found {control_off} off-diagonal"))
}

fn parseval_oracle() -> Check {
    let q = lib(mean_value_quadrature(3, 2, 3, None, None))?;
    let rel = (q.value - 15.0).abs() / 15.0;
    ensure(rel < 5e-3, || format!("quadrature {} vs 15", q.value))?;
    for p in 1..=12u64 {
        let cubes: Vec<u64> = (1..=p).map(|x| x * x * x).collect();
        let mut brute = 0u128;
        for &a in &cubes {
            for &b in &cubes {
                for &c in &cubes {
                    for &d in &cubes {
                        brute += (a + b == c + d) as u128;
                    }
                }
            }
        }
        let fast = lib(mean_value_parseval(3, 2, p, None))?;
        ensure(fast == brute, || {
            format!("P = {p}: {fast} vs brute force {brute}")
        })?;
    }
    Ok(format!(
        "∫|f|⁴ = {:.12} over {} nodes; exact for P ≤ 12",
        q.value, q.nodes
    ))
}

fn complete_sum_identities() -> Check {
    for q in 1..=100u64 {
        for h in -(q as i64)..=2 * q as i64 {
            let mut s = 0.0;
            for a in 1..=q {
                if gcd(a, q) == 1 {
                    s += (2.0 * PI * ((a as i64 * h).rem_euclid(q as i64)) as f64 / q as f64).cos();
                }
            }
            let direct = s.round() as i64;
            ensure((s - direct as f64).abs() < 1e-8, || {
                format!("direct c_{q}({h}) = {s} not integral")
            })?;
            let formula = ramanujan(q, h);
            ensure(formula == direct, || {
                format!("c_{q}({h}): divisor formula {formula}, direct {direct}")
            })?;
            ensure(
                (ramanujan_direct(q, h).re - direct as f64).abs() < 1e-8,
                || format!("library direct sum at c_{q}({h})"),
            )?;
        }
    }
    for q in 1..=200u64 {
        for h in 0..=2 * q {
            let c = ramanujan(q, h as i64).unsigned_abs();
            ensure(c <= gcd(q, h), || format!("|c_{q}({h})| = {c} > gcd"))?;
        }
    }
    let mut pairs = 0;
    for k in [2u32, 3, 4] {
        for m in 1..=50u64 {
            for n in 1..=50u64 {
                if gcd(m, n) == 1 {
                    let lhs = rho(m * n, k);
                    let rhs = rho(m, k) * rho(n, k);
                    ensure(lhs == rhs, || {
                        format!("ρ({}) = {lhs} ≠ ρ({m})ρ({n}) = {rhs}, k = {k}", m * n)
                    })?;
                    pairs += 1;
                }
            }
            ensure(rho(m, k) == rho_brute(m, k), || {
                format!("ρ({m}) disagrees with pair enumeration")
            })?;
        }
    }
    let mut checked = 0;
    for k in 2..=5u32 {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for u in 0..4u32 {
                for v in 1..=k {
                    let e = u * k + v;
                    let Some(q) = p.checked_pow(e).filter(|&q| q <= 1 << 40) else {
                        continue;
                    };
                    let expect = if v == 1 {
                        k as f64 * (p as f64).powf(-(u as f64) - 0.5)
                    } else {
                        (p as f64).powf(-(u as f64) - 1.0)
                    };
                    let got = weight_wk(q, k);
                    ensure((got - expect).abs() <= 2.0 * f64::EPSILON * expect, || {
                        format!("w_{k}({p}^{e}) = {got}, table gives {expect}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("c_q exact for q ≤ 100, bound for q ≤ 200, {pairs} coprime ρ pairs, {checked} w_k table entries"))
}

fn difference_oracle(k: u32, x: i128, h: &[i128]) -> i128 {
    // apply Δ_{h_j} to the function produced by the previous steps
    fn eval(k: u32, x: i128, h: &[i128]) -> i128 {
        match h.split_last() {
            None => x.pow(k),
            Some((&last, rest)) => eval(k, x + last, rest) - eval(k, x, rest),
        }
    }
    eval(k, x, h)
}

fn weyl_differencing() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut identities = 0;
    for k in 2..=6u32 {
        for j in 1..k {
            let p = lib(diff_poly(k, j))?;
            for _ in 0..1000 {
                let x = rng.gen_range(-200i128..=200);
                let h: Vec<i128> = (0..j).map(|_| rng.gen_range(-60i128..=60)).collect();
                let prod: i128 = h.iter().product();
                let lhs = difference_oracle(k, x, &h);
                let rhs = prod * p.eval(x, &h);
                ensure(lhs == rhs, || {
                    format!("k = {k}, j = {j}, x = {x}, h = {h:?}: {lhs} ≠ {rhs}")
                })?;
                identities += 1;
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..50 {
        let k = rng.gen_range(2..=6u32);
        let j = rng.gen_range(1..k);
        let cap = (2.0e5 / 2f64.powi(j as i32))
            .powf(1.0 / (j as f64 + 1.0))
            .floor() as u64;
        let p = rng.gen_range(2..=cap.clamp(2, 40));
        let alpha = rng.gen::<f64>();
        let lambda = if i % 2 == 0 { 1.0 } else { 2f64.sqrt() };
        let w = lib(weyl_inequality_check(k, j, lambda, alpha, p))?;
        ensure(w.holds(), || {
            format!(
                "k = {k}, j = {j}, P = {p}, α = {alpha}: {} > {}",
                w.lhs, w.rhs
            )
        })?;
        if w.rhs > 0.0 {
            worst = worst.max(w.lhs / w.rhs);
        }
    }
    Ok(format!(
        "{identities} exact identities; 50 inequality instances, max lhs/rhs = {worst:.4}"
    ))
}

fn asymptotic_convergence() -> Check {
    let form = lib(DiagonalForm::new(3, vec![3.0, 1.0, 2f64.sqrt(), PI]))?;
    let mut errs = Vec::new();
    let mut detail = Vec::new();
    for p in [40i64, 80, 160] {
        let n = (p as f64).powi(3);
        let mu = n / 2.0;
        let b = lib(SearchBox::positive(4, p))?;
        let count = lib(count_solutions(&form, mu, 1.0, &b))?.count;
        let main = lib(main_term(&form, mu, n, 1.0))?;
        let e = (count as f64 / main - 1.0).abs();
        detail.push(format!("P={p}: {count}/{main:.2} err {e:.4}"));
        errs.push(e);
    }
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    ensure(decreasing && errs[2] < 0.15, || detail.join("; "))?;
    Ok(detail.join("; "))
}

fn exceptional_monotonicity() -> Check {
    let all = [1.0, 2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt(), 7f64.sqrt(), PI];
    let n = 1.0e4;
    let tau = 0.05;
    let w = lib(Window::from_bounds(n / 2.0, n))?;
    let mut prev: Option<(f64, IntervalUnion)> = None;
    let mut measures = Vec::new();
    for s in 3..=6 {
        let form = lib(DiagonalForm::new(3, all[..s].to_vec()))?;
        let b = lib(SearchBox::covering_window(
            &form,
            &w,
            tau,
            BoxConvention::ZeroInclusive,
        ))?;
        let u = lib(representable_union(&form, &b, tau, &w))?;
        let ex = w.length - u.measure();
        if let Some((pe, pu)) = &prev {
            ensure(pu.is_subset_of(&u), || {
                format!("union at s = {} not contained in s = {s}", s - 1)
            })?;
            ensure(ex <= *pe, || {
                format!("exceptional measure rose from {pe} to {ex} at s = {s}")
            })?;
        }
        measures.push(format!("{ex:.4}"));
        prev = Some((ex, u));
    }
    Ok(format!(
        "box-exceptional measures s = 3..6: {}",
        measures.join(", ")
    ))
}

fn lower_bound_trend() -> Check {
    let lambda = [1.0, 2f64.sqrt(), 3f64.sqrt()];
    let form = lib(DiagonalForm::new(3, lambda.to_vec()))?;
    let mut pairs = Vec::new();
    for n in [1.0e4, 1.0e5, 1.0e6] {
        let caps: Vec<i64> = lambda
            .iter()
            .map(|l| (n / l).cbrt().floor() as i64)
            .collect();
        let lo: Vec<i64> = caps.iter().map(|c| -c).collect();
        let b = lib(SearchBox::new(lo, caps))?;
        let y = lib(representable_measure_y(&form, &b, 1.0, n))?;
        pairs.push((n, y));
    }
    let fit = lib(exponent_fit(&pairs))?;
    ensure(fit.slope >= 0.85, || {
        format!("slope {:.4} from {pairs:?}", fit.slope)
    })?;
    Ok(format!(
        "Y = {}; slope {:.4}",
        pairs
            .iter()
            .map(|(n, y)| format!("{y:.1} at N={n:.0e}"))
            .collect::<Vec<_>>()
            .join(", "),
        fit.slope
    ))
}

fn smooth_exponent() -> Check {
    let mut pairs = Vec::new();
    for e in 6..=11 {
        let p = 1u64 << e;
        let v = lib(mean_value_parseval(3, 3, p, Some(p)))?;
        pairs.push((p as f64, v as f64));
    }
    let fit = lib(exponent_fit(&pairs))?;
    let d = fit.delta_estimate(3, 3);
    ensure((0.0..=0.45).contains(&d), || {
        format!("Δ estimate {d:.4} from {pairs:?}")
    })?;
    Ok(format!(
        "Δ estimate {d:.4} (slope {:.4}); reference 0.2494",
        fit.slope
    ))
}

fn two_prime_trend() -> Check {
    let mut ex = Vec::new();
    for x in [10_000u64, 100_000] {
        let w = lib(Window::from_bounds(x as f64 / 4.0, x as f64 / 2.0))?;
        let scan = lib(two_prime_scan(1.0, 2f64.sqrt(), 0.1, x, &w))?;
        ex.push(scan.exceptional);
    }
    ensure(ex[1] < ex[0], || format!("exceptional measures {ex:?}"))?;
    Ok(format!(
        "exceptional measure {:.6} at X=1e4, {:.6} at X=1e5",
        ex[0], ex[1]
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit_s: Option<f64>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "kernel sandwich",
            limit_s: Some(30.0),
            run: kernel_sandwich,
        },
        Criterion {
            id: 2,
            name: "Fourier identity of K1",
            limit_s: None,
            run: fourier_identity,
        },
        Criterion {
            id: 3,
            name: "quadratic form bound 2Z",
            limit_s: None,
            run: quadratic_form_bound,
        },
        Criterion {
            id: 4,
            name: "diagonality under diminishing ranges",
            limit_s: Some(60.0),
            run: diagonality,
        },
        Criterion {
            id: 5,
            name: "Parseval oracle",
            limit_s: None,
            run: parseval_oracle,
        },
        Criterion {
            id: 6,
            name: "complete-sum identities",
            limit_s: None,
            run: complete_sum_identities,
        },
        Criterion {
            id: 7,
            name: "Weyl differencing",
            limit_s: None,
            run: weyl_differencing,
        },
        Criterion {
            id: 8,
            name: "asymptotic formula convergence",
            limit_s: Some(300.0),
            run: asymptotic_convergence,
        },
        Criterion {
            id: 9,
            name: "exceptional-measure monotonicity",
            limit_s: None,
            run: exceptional_monotonicity,
        },
        Criterion {
            id: 10,
            name: "lower-bound trend for Y",
            limit_s: Some(600.0),
            run: lower_bound_trend,
        },
        Criterion {
            id: 11,
            name: "smooth mean-value exponent",
            limit_s: None,
            run: smooth_exponent,
        },
        Criterion {
            id: 12,
            name: "two-prime trend",
            limit_s: Some(120.0),
            run: two_prime_trend,
        },
    ];
    let filter: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.contains(&c.id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = (c.run)();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, c.limit_s) {
            (Ok(d), Some(l)) if secs > l => Err(format!("{d}; took {secs:.1} s, limit {l} s")),
            (o, _) => o,
        };
        match outcome {
            Ok(d) => println!("PASS {:>2} {}: {d} [{secs:.2} s]", c.id, c.name),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {}: {d} [{secs:.2} s]", c.id, c.name);
            }
        }
    }
    println!("{} of {ran} criteria pass, {failed} fail", ran - failed);
    // failures are reported above; DHLAB_ACCEPTANCE_STRICT=1 also turns them into a nonzero exit
    if failed > 0 && std::env::var_os("DHLAB_ACCEPTANCE_STRICT").is_some() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
