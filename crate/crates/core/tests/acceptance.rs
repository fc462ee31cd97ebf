//! Acceptance suite: one PASS/FAIL line per criterion, run in sequence so
//! the wall-clock limits are measured without competing threads.

use std::time::{Duration, Instant};

use bandops::finsec::{finite_sections, padded_section, q1_check, q3_check, stability_spectrum, MemberTag};
use bandops::limitops::{laurent_lower_norm, operator_spectrum};
use bandops::linalg::{sigma_min, singular_values, svd};
use bandops::norms::{
    essential_norm_q, essential_norm_via_limops, inverse_norm_recip, localization_window, lower_norm, mu,
    mu_tilde, norm_localized, op_norm,
};
use bandops::operator::RANDOM_SAMPLE_RADIUS;
use bandops::pseudospec::{
    essential_pseudospectrum_grid, pseudospectrum_grid, witness_perturbation, EssentialMethod, GridBox,
    WITNESS_SINGULARITY_TOL,
};
use bandops::{corpus, Complex64, Exponent, Interval, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MU_SET: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Option<Duration>, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    match limit {
        Some(l) if t > l => Err(format!("took {t:.1?}, limit {l:?}")),
        _ => Ok(t),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn err(e: bandops::Error) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for mu in MU_SET {
        let a = corpus::block_diag_example(mu);
        let r = finite_sections(&a, 41, 2.0).map_err(err)?;
        for (k, &n) in r.n_list.iter().enumerate() {
            if n < 2 {
                continue;
            }
            let want = if n % 2 == 0 {
                1.0 / (1.0 - mu)
            } else {
                (1.0 / (1.0 - mu)).max(1.0 / mu)
            };
            let gap = (r.inv_norm_list[k] - want).abs();
            worst = worst.max(gap);
            ensure(gap <= 1e-8, || format!("mu = {mu}, n = {n}: {} vs {want}", r.inv_norm_list[k]))?;
        }
        // padded sections: max(||A_n^-1||, 1/c)
        for n in [2, 3, 10, 11] {
            let m = padded_section(&a, n, 2.0, 2);
            let inv = 1.0 / sigma_min(&m).map_err(err)?;
            let want = r.inv_norm_list[n - 1].max(0.5);
            ensure((inv - want).abs() <= 1e-9, || format!("padded mu = {mu}, n = {n}: {inv} vs {want}"))?;
        }
    }
    let r = finite_sections(&corpus::block_diag_example(0.0), 41, 2.0).map_err(err)?;
    let odd_singular = r.n_list.iter().zip(&r.inv_norm_list).all(|(&n, i)| n % 2 == 0 || i.is_infinite());
    ensure(odd_singular && !r.stable, || "mu = 0: expected singular odd sections and an unstable verdict".into())?;
    let t = within(Some(Duration::from_secs(10)), start)?;
    Ok(format!("max deviation {worst:.2e}; mu = 0 unstable; {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for mu in MU_SET {
        let a = corpus::block_diag_example(mu);
        let q = q1_check(&a, 2.0, 41, 1e-8).map_err(err)?;
        worst = worst.max(q.gap);
        ensure(q.gap <= 1e-6, || format!("mu = {mu}: gap {:.3e}", q.gap))?;
        let s = stability_spectrum(&a, 2.0, 1e-8).map_err(err)?;
        ensure(s.members.len() == 5, || format!("mu = {mu}: {} members", s.members.len()))?;
        let target = 1.0 / (1.0 - mu).min(mu);
        let hits = s
            .members
            .iter()
            .filter(|m| m.tag == MemberTag::HalfLineTruncation && (m.inverse_norm - target).abs() <= 1e-8)
            .count();
        ensure(hits >= 2, || format!("mu = {mu}: {hits} half-line members at {target}"))?;
        ensure((s.max_inverse_norm() - target).abs() <= 1e-8, || {
            format!("mu = {mu}: max member inverse norm {} vs {target}", s.max_inverse_norm())
        })?;
    }
    Ok(format!("max gap {worst:.2e}; 5 members with max inverse norm 1/min(1-mu, mu)"))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for mu in MU_SET {
        let q = q3_check(&corpus::block_diag_example(mu), 2.0, 41, 1e-8).map_err(err)?;
        let want = (1.0 + mu) / (1.0 - mu).min(mu);
        let gap = (q.limsup_cond - want).abs();
        worst = worst.max(gap);
        ensure(gap <= 1e-5, || format!("mu = {mu}: {} vs {want}", q.limsup_cond))?;
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (name, a) in corpus::eventually_periodic_corpus() {
        let q = essential_norm_q(&a, 1e-8).map_err(err)?.value;
        let l = essential_norm_via_limops(&a).map_err(err)?;
        worst = worst.max((q - l).abs());
        ensure((q - l).abs() <= 1e-6, || format!("{name}: {q} vs {l}"))?;
    }
    let t = within(Some(Duration::from_secs(30)), start)?;
    Ok(format!("max gap {worst:.2e} over 10 operators; {t:.2?}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (name, a) in corpus::eventually_periodic_corpus() {
        let g = essential_pseudospectrum_grid(&a, GridBox::square(2.0), 41, 41, 1e-6, EssentialMethod::Both)
            .map_err(err)?;
        let d = g.max_discrepancy().unwrap_or(f64::INFINITY);
        worst = worst.max(d);
        ensure(d <= 5e-3, || format!("{name}: discrepancy {d:.3e}"))?;
    }
    let t = within(Some(Duration::from_secs(120)), start)?;
    Ok(format!("max discrepancy {worst:.2e} on 41x41 grids; {t:.2?}"))
}

fn criterion_6() -> Outcome {
    let delta = 0.1;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = Interval::centered(RANDOM_SAMPLE_RADIUS);
    for case in 0..50 {
        let (d, w) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let a = corpus::seeded_random_band(rng.gen(), d, w, 1.0, Exponent::Two);
        let ub = op_norm(&a, 1e-4).map_err(err)?.value;
        let big = localization_window(w, delta);
        let local = norm_localized(&a, big).map_err(err)?;
        ensure(local >= (1.0 - delta) * ub && local <= ub + 1e-12, || {
            format!("case {case}: |||A|||_{big} = {local}, ||A|| = {ub}")
        })?;
        let mut prev = 0.0;
        for dd in [1, 2 * w + 1, 9, 17, 33, 65, big] {
            let v = norm_localized(&a, dd).map_err(err)?;
            ensure(v >= prev - 1e-12 && v <= ub + 1e-12, || format!("case {case}: D = {dd} gives {v}"))?;
            prev = v;
        }
    }
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let (d, w) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let a = corpus::seeded_random_band(rng.gen(), d, w, 1.0, Exponent::Infinity);
        let exact = bandops::linalg::induced_p_norm(&a.compression(f.expand(w as i64), f), Exponent::Infinity)
            .map_err(err)?;
        let v = norm_localized(&a, 2 * w + 1).map_err(err)?;
        worst = worst.max((v - exact).abs());
        ensure((v - exact).abs() <= 1e-12, || format!("p = inf case {case}: {v} vs {exact}"))?;
    }
    Ok(format!("50 bracket cases at delta = 0.1; p = inf max deviation {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for (name, a) in corpus::eventually_periodic_corpus() {
        let norm = op_norm(&a, 1e-8).map_err(err)?.value;
        let nu = lower_norm(&a, 1e-8).map_err(err)?.value;
        for l in operator_spectrum(&a).map_err(err)? {
            let ln = op_norm(&l.operator, 1e-8).map_err(err)?.value;
            let lnu = laurent_lower_norm(&l).map_err(err)?;
            ensure(ln <= norm + 1e-6, || format!("{name}: ||A_h|| = {ln} > {norm}"))?;
            ensure(lnu >= nu - 1e-6, || format!("{name}: nu(A_h) = {lnu} < {nu}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} limit operators over the corpus"))
}

fn criterion_8() -> Outcome {
    let ops = corpus::eventually_periodic_corpus();
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    for k in 0..ops.len() {
        let (na, a) = &ops[k];
        let (nb, b) = &ops[(k + 1) % ops.len()];
        let s = a.direct_sum(b).map_err(err)?;
        let pairs = [
            (
                "norm",
                op_norm(&s, tol).map_err(err)?.value,
                op_norm(a, tol).map_err(err)?.value.max(op_norm(b, tol).map_err(err)?.value),
                1e-8,
            ),
            (
                "lower norm",
                lower_norm(&s, tol).map_err(err)?.value,
                lower_norm(a, tol).map_err(err)?.value.min(lower_norm(b, tol).map_err(err)?.value),
                1e-8,
            ),
            (
                "essential norm",
                essential_norm_q(&s, tol).map_err(err)?.value,
                essential_norm_q(a, tol)
                    .map_err(err)?
                    .value
                    .max(essential_norm_q(b, tol).map_err(err)?.value),
                1e-6,
            ),
        ];
        for (what, lhs, rhs, lim) in pairs {
            worst = worst.max((lhs - rhs).abs());
            ensure((lhs - rhs).abs() <= lim, || format!("{na} (+) {nb}: {what} {lhs} vs {rhs}"))?;
        }
    }
    let mut worst_aa: f64 = 0.0;
    for (name, a) in &ops {
        let adj = a.adjoint().map_err(err)?;
        let aa = mu_tilde(&a.compose(&adj).map_err(err)?, tol).map_err(err)?.value;
        let a_a = mu_tilde(&adj.compose(a).map_err(err)?, tol).map_err(err)?.value;
        let lhs = aa.sqrt().min(a_a.sqrt());
        let rhs = mu(a, tol).map_err(err)?.value;
        worst_aa = worst_aa.max((lhs - rhs).abs());
        ensure((lhs - rhs).abs() <= 1e-6, || format!("{name}: {lhs} vs mu(A) = {rhs}"))?;
    }
    Ok(format!("direct sums max gap {worst:.2e}; AA*/A*A max gap {worst_aa:.2e}"))
}

fn criterion_9() -> Outcome {
    let g = pseudospectrum_grid(&corpus::bilateral_shift(), GridBox::square(2.0), 41, 41, 1e-6).map_err(err)?;
    let mut worst: f64 = 0.0;
    for (ix, iy, lambda) in g.nodes() {
        worst = worst.max((g.value(ix, iy) - (lambda.norm() - 1.0).abs()).abs());
    }
    ensure(worst <= 5e-3, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("max deviation {worst:.2e} on 41x41"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_sigma: f64 = 0.0;
    let mut cases = 0;
    while cases < 100 {
        let a = match cases % 10 {
            0 => corpus::block_diag_example(rng.gen_range(0.05..0.95)),
            1 => corpus::laurent_example(),
            2 => corpus::bilateral_shift(),
            _ => corpus::random_eventually_periodic(rng.gen(), 1, 1, rng.gen_range(0..3), rng.gen_range(1..3), rng.gen_range(1..3)),
        };
        let lambda = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let recip = inverse_norm_recip(&a.shifted_by(lambda).map_err(err)?, 1e-6).map_err(err)?;
        let eps = recip + rng.gen_range(0.02..0.2);
        let w = witness_perturbation(&a, lambda, eps, 1e-6).map_err(|e| format!("case {cases}: {e}"))?;
        let win = w.u.window().expand(2 * a.band_width() as i64);
        let k = w.matrix(win, win);
        let rank_one = singular_values(&k).map_err(err)?.get(1).map_or(true, |s| *s <= 1e-12 * w.k_norm.max(1e-300));
        ensure(w.k_norm < eps && rank_one && w.truncated_sigma_min <= WITNESS_SINGULARITY_TOL, || {
            format!(
                "case {cases}: ||K|| = {}, eps = {eps}, sigma_min = {:.3e}, rank one {rank_one}",
                w.k_norm, w.truncated_sigma_min
            )
        })?;
        worst_sigma = worst_sigma.max(w.truncated_sigma_min);
        cases += 1;
    }
    Ok(format!("100 witnesses; largest truncated sigma_min {worst_sigma:.2e}"))
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, cols: usize) -> Matrix {
    Matrix::from_fn(r, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Eigenvalues of the Gram matrix by power iteration with deflation.
fn brute_force_singular_values(m: &Matrix) -> Vec<f64> {
    let g = if m.rows() >= m.cols() {
        &m.adjoint() * m
    } else {
        m * &m.adjoint()
    };
    let n = g.rows();
    let mut h = g.clone();
    let mut out = Vec::new();
    for k in 0..n {
        let mut x: Vec<Complex64> = (0..n).map(|i| c(1.0 + (i * 7 + k) as f64 * 0.37, 0.3 * i as f64)).collect();
        let mut lambda = 0.0;
        for _ in 0..200_000 {
            let y = h.mul_vec(&x);
            let nrm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm == 0.0 {
                lambda = 0.0;
                break;
            }
            x = y.into_iter().map(|z| z / nrm).collect();
            let hx = h.mul_vec(&x);
            let next: f64 = x.iter().zip(&hx).map(|(a, b)| (a.conj() * b).re).sum();
            let done = (next - lambda).abs() <= 1e-17 * g.max_abs().max(1e-300);
            lambda = next;
            if done {
                break;
            }
        }
        out.push(lambda.max(0.0).sqrt());
        h = Matrix::from_fn(n, n, |i, j| h.get(i, j) - x[i] * x[j].conj() * lambda);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut recon, mut unit, mut oracle): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for r in 1..=6 {
        for cols in 1..=6 {
            for _ in 0..4 {
                let m = random_matrix(&mut rng, r, cols);
                let s = svd(&m).map_err(err)?;
                let scale = s.singular_values[0].max(1e-300);
                recon = recon.max((&s.reconstruct() - &m).max_abs() / scale);
                let k = s.singular_values.len();
                unit = unit.max((&(&s.u.adjoint() * &s.u) - &Matrix::identity(k)).max_abs());
                unit = unit.max((&(&s.v.adjoint() * &s.v) - &Matrix::identity(k)).max_abs());
                let brute = brute_force_singular_values(&m);
                for (a, b) in s.singular_values.iter().zip(&brute) {
                    oracle = oracle.max((a - b).abs());
                }
            }
        }
    }
    ensure(recon <= 1e-10 && unit <= 1e-10 && oracle <= 1e-8, || {
        format!("reconstruction {recon:.2e}, unitarity {unit:.2e}, oracle {oracle:.2e}")
    })?;
    Ok(format!(
        "144 matrices up to 6x6: reconstruction {recon:.1e}, unitarity {unit:.1e}, oracle {oracle:.1e}"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("block example section inverse norms", criterion_1),
        ("limsup identity over the stability spectrum", criterion_2),
        ("condition number limsup", criterion_3),
        ("essential norm: both routes agree", criterion_4),
        ("essential pseudospectrum: both methods agree", criterion_5),
        ("norm localization bracket", criterion_6),
        ("limit operator inequalities", criterion_7),
        ("direct sums and the AA*/A*A identity", criterion_8),
        ("bilateral shift pseudospectrum", criterion_9),
        ("witness soundness", criterion_10),
        ("SVD kernel", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{t:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} [{t:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
