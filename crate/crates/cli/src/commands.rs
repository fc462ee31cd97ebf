use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bandops::finsec::{finite_sections, q1_check, q3_check, stability_spectrum};
use bandops::limitops::{laurent_lower_norm, laurent_norm, operator_spectrum};
use bandops::norms::{self, ConvergedValue};
use bandops::pseudospec::{
    essential_pseudospectrum_grid, pseudospectrum_grid, witness_perturbation, EssentialMethod, GridBox,
};
use bandops::spec_file::{load_spec, to_canonical_string};
use bandops::{corpus, BandOperator, Complex64, Exponent};

use crate::{Common, Failure};

type Outcome = Result<(), Failure>;

pub fn load(common: &Common) -> Result<BandOperator, Failure> {
    if !(common.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", common.tol)));
    }
    Ok(load_spec(&common.spec)?)
}

/// Writes `text` to `path`, or to stdout.
pub fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn shifted(a: &BandOperator, lambda: Option<Complex64>) -> Result<BandOperator, Failure> {
    Ok(match lambda {
        Some(l) => a.shifted_by(l)?,
        None => a.clone(),
    })
}

const VALUE_HEADER: &str = "value,window_size_used,cauchy_gap,converged\n";

fn value_row(common: &Common, v: &ConvergedValue) -> Outcome {
    let text = format!(
        "{VALUE_HEADER}{},{},{:e},{}\n",
        v.value, v.window_size_used, v.cauchy_gap, v.converged
    );
    emit(common.output.as_deref(), &text)?;
    if v.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged(format!(
            "last window {} with Cauchy gap {:e} above --tol {:e}",
            v.window_size_used, v.cauchy_gap, common.tol
        )))
    }
}

fn windowed_row(common: &Common, value: f64, window: usize) -> Outcome {
    emit(
        common.output.as_deref(),
        &format!("{VALUE_HEADER}{value},{window},0,true\n"),
    )
}

pub fn norm(common: &Common, window: Option<usize>) -> Outcome {
    let a = load(common)?;
    match window {
        Some(d) => windowed_row(common, norms::norm_localized(&a, d)?, d),
        None => value_row(common, &norms::op_norm(&a, common.tol)?),
    }
}

pub fn essnorm(common: &Common) -> Outcome {
    let a = load(common)?;
    value_row(common, &norms::essential_norm_q(&a, common.tol)?)
}

pub fn lowernorm(common: &Common, lambda: Option<Complex64>, window: Option<usize>, adjoint: bool) -> Outcome {
    let a = shifted(&load(common)?, lambda)?;
    let a = if adjoint { a.adjoint()? } else { a };
    match window {
        Some(d) => windowed_row(common, norms::lower_norm_localized(&a, d)?, d),
        None => value_row(common, &norms::lower_norm(&a, common.tol)?),
    }
}

pub fn mu(common: &Common, lambda: Option<Complex64>) -> Outcome {
    let a = shifted(&load(common)?, lambda)?;
    value_row(common, &norms::mu(&a, common.tol)?)
}

pub fn limitops(common: &Common, spec_dir: Option<&Path>) -> Outcome {
    let a = load(common)?;
    let ops = operator_spectrum(&a)?;
    if let Some(dir) = spec_dir {
        fs::create_dir_all(dir)?;
    }
    let mut out = String::from("direction,residue,norm,lower_norm\n");
    for l in &ops {
        let (norm, lower) = if a.exponent() == Exponent::Two {
            (laurent_norm(l)?, laurent_lower_norm(l)?.to_string())
        } else {
            (norms::op_norm(&l.operator, common.tol)?.value, String::new())
        };
        let (side, r) = (l.direction().label(), l.residue());
        let _ = writeln!(out, "{side},{r},{norm},{lower}");
        if let Some(dir) = spec_dir {
            let name = format!("limit_{}_{r}.json", if side == "+inf" { "plus" } else { "minus" });
            fs::write(dir.join(name), to_canonical_string(&l.operator))?;
        }
    }
    emit(common.output.as_deref(), &out)
}

#[allow(clippy::too_many_arguments)]
pub fn pseudospec(
    common: &Common,
    bounds: GridBox,
    nx: usize,
    ny: usize,
    essential: bool,
    method: Option<EssentialMethod>,
    agree_tol: f64,
) -> Outcome {
    let a = load(common)?;
    let grid = if essential {
        let method = method.unwrap_or(EssentialMethod::Mu);
        essential_pseudospectrum_grid(&a, bounds, nx, ny, common.tol, method)?
    } else {
        pseudospectrum_grid(&a, bounds, nx, ny, common.tol)?
    };
    emit(common.output.as_deref(), &grid.to_csv())?;
    if let Some(d) = grid.max_discrepancy() {
        eprintln!("max discrepancy between mu and limit-operator values: {d:e}");
        if d > agree_tol {
            return Err(Failure::Check(format!(
                "methods disagree by {d:e} > --agree-tol {agree_tol:e}"
            )));
        }
    }
    Ok(())
}

pub fn witness(common: &Common, lambda: Complex64, eps: f64) -> Outcome {
    let a = load(common)?;
    let w = witness_perturbation(&a, lambda, eps, common.tol)?;
    let support = w.u.window();
    let text = format!(
        "lambda_re,lambda_im,epsilon,kind,k_norm,functional_index,support_lo,support_hi,truncated_sigma_min\n\
         {},{},{},{},{},{},{},{},{:e}\n",
        lambda.re,
        lambda.im,
        eps,
        match w.kind {
            bandops::pseudospec::WitnessKind::Kernel => "kernel",
            bandops::pseudospec::WitnessKind::Cokernel => "cokernel",
        },
        w.k_norm,
        w.functional_index,
        support.lo,
        support.hi,
        w.truncated_sigma_min
    );
    emit(common.output.as_deref(), &text)
}

pub fn finsec(common: &Common, nmax: usize, c: Option<f64>) -> Outcome {
    let a = load(common)?;
    let c = match c {
        Some(c) => c,
        None => norms::op_norm(&a, common.tol)?.value.max(f64::MIN_POSITIVE),
    };
    let report = finite_sections(&a, nmax, c)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "stable: {}", report.stable);
    let _ = writeln!(summary, "n0: {}", report.n0);
    let _ = writeln!(summary, "c: {c}");
    if report.c_below_norm {
        let _ = writeln!(summary, "warning: c is below ||A||; ||A_(n,c)^-1|| may differ from ||A_n^-1||");
    }
    let _ = writeln!(summary, "limsup_inv_norm: {}", report.limsup_inv_norm);
    let _ = writeln!(summary, "limsup_cond: {}", report.limsup_cond);
    match stability_spectrum(&a, c, common.tol) {
        Ok(s) => {
            let _ = writeln!(summary, "stability spectrum ({} members):", s.members.len());
            let _ = writeln!(summary, "tag,description,inverse_norm");
            for m in &s.members {
                let _ = writeln!(summary, "{},\"{}\",{}", m.tag.label(), m.description, m.inverse_norm);
            }
        }
        Err(e) => {
            let _ = writeln!(summary, "stability spectrum: unavailable ({e})");
        }
    }
    if report.stable {
        match (q1_check(&a, c, nmax, common.tol), q3_check(&a, c, nmax, common.tol)) {
            (Ok(q1), Ok(q3)) => {
                let _ = writeln!(summary, "q1: lhs {} rhs {} gap {:e}", q1.lhs, q1.rhs, q1.gap);
                let _ = writeln!(
                    summary,
                    "q3: limsup_cond {} identity {} gap {:e}; ||A_nmax|| {} vs ||A|| {}",
                    q3.limsup_cond, q3.identity_value, q3.gap, q3.section_norm, q3.op_norm
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                let _ = writeln!(summary, "q1/q3: unavailable ({e})");
            }
        }
    } else {
        let _ = writeln!(summary, "q1/q3: skipped (sections not stable)");
    }

    match &common.output {
        Some(p) => {
            fs::write(p, report.to_csv())?;
            print!("{summary}");
        }
        None => {
            print!("{}", report.to_csv());
            eprint!("{summary}");
        }
    }
    Ok(())
}

pub fn spec(path: &Path, output: Option<&Path>) -> Outcome {
    let a = load_spec(path)?;
    emit(output, &to_canonical_string(&a))
}

/// Named operators written by `corpus`.
pub fn corpus_members(seed: u64) -> Vec<(String, BandOperator)> {
    let mut out: Vec<(String, BandOperator)> = Vec::new();
    for mu in ["0", "0.05", "0.1", "0.25", "0.5", "0.75", "0.9"] {
        out.push((format!("block_example_mu_{mu}"), corpus::block_diag_example(mu.parse().unwrap())));
    }
    for (name, a) in corpus::eventually_periodic_corpus() {
        if !name.starts_with("block_diag_mu_") && name != "random_eventually_periodic" {
            out.push((name.to_string(), a));
        }
    }
    out.push(("random_eventually_periodic".into(), corpus::random_eventually_periodic(seed, 2, 1, 2, 2, 3)));
    out.push(("zero".into(), BandOperator::zero(1, Exponent::Two)));
    out.push(("seeded_random_band".into(), corpus::seeded_random_band(seed, 2, 2, 1.0, Exponent::Two)));
    out
}

pub fn corpus(dir: &Path, seed: u64) -> Outcome {
    fs::create_dir_all(dir)?;
    for (name, a) in corpus_members(seed) {
        let path = dir.join(format!("{name}.json"));
        fs::write(&path, to_canonical_string(&a))?;
        println!("{}", path.display());
    }
    Ok(())
}
