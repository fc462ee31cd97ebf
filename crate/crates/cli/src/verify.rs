//! The `verify` subcommand: invariants on the given operator, then the
//! fixed battery on the block example with `mu = 0.25`.

use bandops::finsec::{finite_sections, q1_check, q3_check, stability_spectrum, DEFAULT_NMAX};
use bandops::limitops::{laurent_lower_norm, laurent_norm, operator_spectrum};
use bandops::norms;
use bandops::pseudospec::{essential_pseudospectrum_grid, witness_perturbation, EssentialMethod, GridBox};
use bandops::operator::RANDOM_SAMPLE_RADIUS;
use bandops::{corpus, BandOperator, Complex64, Error, Exponent};

use crate::commands::load;
use crate::{Common, Failure};

type Check = bandops::Result<(bool, String)>;

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: usize,
    skipped: usize,
}

impl Tally {
    fn record(&mut self, name: &str, outcome: Check) {
        match outcome {
            Ok((true, detail)) => {
                self.passed += 1;
                println!("PASS {name}: {detail}");
            }
            Ok((false, detail)) => {
                self.failed += 1;
                println!("FAIL {name}: {detail}");
            }
            Err(e @ (Error::UnsupportedClass(_) | Error::UnsupportedExponent(_) | Error::NotStable(_))) => {
                self.skipped += 1;
                println!("SKIP {name}: {e}");
            }
            Err(e) => {
                self.failed += 1;
                println!("FAIL {name}: {e}");
            }
        }
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> (bool, String) {
    let gap = (got - want).abs();
    (gap <= tol, format!("{name} = {got} (expected {want}, gap {gap:.3e}, tol {tol:.0e})"))
}

pub fn run(common: &Common) -> Result<(), Failure> {
    let a = load(common)?;
    let tol = common.tol;
    let mut t = Tally::default();

    println!("# invariants on {}", common.spec.display());
    invariants(&a, tol, &mut t);
    println!("# block example, mu = 0.25");
    battery(&mut t);

    println!("{} passed, {} failed, {} skipped", t.passed, t.failed, t.skipped);
    if t.failed > 0 {
        return Err(Failure::Check(format!("{} check(s) failed", t.failed)));
    }
    Ok(())
}

fn invariants(a: &BandOperator, tol: f64, t: &mut Tally) {
    let slack = tol.max(1e-9);
    let norm = match norms::op_norm(a, tol) {
        Ok(v) => v.value,
        Err(e) => {
            t.record("op_norm", Err(e));
            return;
        }
    };
    println!("op_norm = {norm}");

    let w = a.band_width();
    t.record("localized norms non-decreasing and below ||A||", (|| {
        let mut prev = 0.0;
        let mut ok = true;
        let mut vals = Vec::new();
        for d in [2 * w + 1, 4 * w + 3, 8 * w + 7] {
            let v = norms::norm_localized(a, d)?;
            ok &= v >= prev - 1e-10 && v <= norm + slack;
            prev = v;
            vals.push(format!("D={d}: {v:.9}"));
        }
        Ok((ok, vals.join(", ")))
    })());

    t.record("essential norm <= ||A||", (|| {
        let e = norms::essential_norm_q(a, tol)?.value;
        Ok((e <= norm + slack, format!("{e} <= {norm}")))
    })());

    t.record("essential norm: both routes agree", (|| {
        let q = norms::essential_norm_q(a, tol)?.value;
        let l = norms::essential_norm_via_limops(a)?;
        Ok(close("q-route value", q, l, 1e-6))
    })());

    let nu = norms::lower_norm(a, tol).map(|v| v.value);
    t.record("lower norm <= ||A||", match &nu {
        Ok(nu) => Ok((*nu <= norm + slack, format!("{nu} <= {norm}"))),
        Err(e) => Err(e.clone()),
    });

    t.record("limit operators: ||A_h|| <= ||A|| and nu(A_h) >= nu(A)", (|| {
        let ops = operator_spectrum(a)?;
        let nu = nu.clone()?;
        let mut ok = true;
        let mut rows = Vec::new();
        for l in &ops {
            let n = laurent_norm(l)?;
            let lo = laurent_lower_norm(l)?;
            ok &= n <= norm + 1e-6 && lo >= nu - 1e-6;
            rows.push(format!("{}/{}: {n:.6}, {lo:.6}", l.direction().label(), l.residue()));
        }
        Ok((ok, format!("{} operators; {}", ops.len(), rows.join("; "))))
    })());

    t.record("inverse norm of A equals that of A*", (|| {
        let x = norms::inverse_norm_recip(a, tol)?;
        let y = norms::inverse_norm_recip(&a.adjoint()?, tol)?;
        Ok(close("recip(A)", x, y, slack.max(1e-8)))
    })());

    t.record("mu(A) >= min(nu(A), nu(A*))", (|| {
        let m = norms::mu(a, tol)?.value;
        let r = norms::inverse_norm_recip(a, tol)?;
        Ok((m >= r - 1e-6, format!("{m} >= {r}")))
    })());

    t.record("essential resolvent at 0: mu route vs limit operators", (|| {
        let r = norms::essential_resolvent_recip(a, Complex64::new(0.0, 0.0), tol)?;
        Ok((
            r.discrepancy <= 5e-3,
            format!("{} vs {} (gap {:.3e})", r.via_mu, r.via_limops, r.discrepancy),
        ))
    })());

    t.record("section norms non-decreasing and bounded by ||A||", (|| {
        if a.exponent() != Exponent::Two {
            return Err(Error::UnsupportedExponent("finite sections need p = 2".into()));
        }
        // random norms refer to the sample window, so stay inside it
        let n_max = if a.has_random() {
            DEFAULT_NMAX.min(RANDOM_SAMPLE_RADIUS as usize)
        } else {
            DEFAULT_NMAX
        };
        let report = finite_sections(a, n_max, norm.max(f64::MIN_POSITIVE))?;
        let s = &report.sigma_max_list;
        let monotone = s.windows(2).all(|p| p[1] >= p[0] - 1e-10);
        let last = *s.last().unwrap_or(&0.0);
        Ok((
            monotone && last <= norm + slack,
            format!("||A_{n_max}|| = {last}, ||A|| = {norm}"),
        ))
    })());

    // The section inverse norms may approach the limit slowly from below
    // (extremal vectors spread over the tails), so only the upper side is a
    // hard check here; the gap is reported.
    t.record("limsup ||A_n^-1|| <= max over the stability spectrum", (|| {
        if a.exponent() != Exponent::Two {
            return Err(Error::UnsupportedExponent("finite sections need p = 2".into()));
        }
        let q1 = q1_check(a, norm.max(f64::MIN_POSITIVE), DEFAULT_NMAX, tol)?;
        Ok((
            q1.lhs <= q1.rhs + 1e-6 * q1.rhs.max(1.0),
            format!("{} vs {} at n_max = {DEFAULT_NMAX} (gap {:.3e})", q1.lhs, q1.rhs, q1.gap),
        ))
    })());
}

fn battery(t: &mut Tally) {
    let a = corpus::block_diag_example(0.25);
    let tol = 1e-6;
    let value = |name: &'static str, want: f64, f: &dyn Fn() -> bandops::Result<f64>| -> Check {
        Ok(close(name, f()?, want, 1e-6))
    };
    t.record("norm", value("||A||", 1.25, &|| Ok(norms::op_norm(&a, tol)?.value)));
    t.record("lower norm", value("nu(A)", 0.75, &|| Ok(norms::lower_norm(&a, tol)?.value)));
    t.record("essential norm", value("||A + K||", 1.25, &|| Ok(norms::essential_norm_q(&a, tol)?.value)));
    t.record("mu", value("mu(A)", 0.75, &|| Ok(norms::mu(&a, tol)?.value)));
    t.record("operator spectrum", (|| {
        let n = operator_spectrum(&a)?.len();
        Ok((n == 2, format!("{n} distinct limit operators (expected 2)")))
    })());
    t.record("finite sections", (|| {
        let r = finite_sections(&a, DEFAULT_NMAX, 1.25)?;
        let (ok, detail) = close("limsup ||A_n^-1||", r.limsup_inv_norm, 4.0, 1e-6);
        Ok((ok && r.stable, format!("stable = {}, {detail}", r.stable)))
    })());
    t.record("stability spectrum", (|| {
        let n = stability_spectrum(&a, 1.25, tol)?.members.len();
        Ok((n == 5, format!("{n} members (expected 5)")))
    })());
    t.record("limsup identity", (|| {
        let q = q1_check(&a, 1.25, DEFAULT_NMAX, tol)?;
        Ok((q.gap <= 1e-6, format!("{} vs {} (gap {:.3e})", q.lhs, q.rhs, q.gap)))
    })());
    t.record("condition number identity", (|| {
        let q = q3_check(&a, 1.25, DEFAULT_NMAX, tol)?;
        let (ok, detail) = close("limsup cond", q.limsup_cond, 5.0, 1e-6);
        Ok((ok && q.gap <= 1e-6, detail))
    })());
    t.record("witness at -0.8, eps 0.1", (|| {
        let w = witness_perturbation(&a, Complex64::new(-0.8, 0.0), 0.1, tol)?;
        Ok((
            w.k_norm < 0.1 && w.truncated_sigma_min <= 1e-8,
            format!("||K|| = {}, truncated sigma_min = {:.3e}", w.k_norm, w.truncated_sigma_min),
        ))
    })());
    t.record("essential grid: methods agree", (|| {
        let g = essential_pseudospectrum_grid(&a, GridBox::square(2.0), 9, 9, tol, EssentialMethod::Both)?;
        let d = g.max_discrepancy().unwrap_or(f64::INFINITY);
        Ok((d <= 5e-3, format!("max discrepancy {d:.3e} on 9x9")))
    })());
}
