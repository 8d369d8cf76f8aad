//! Floating-point cross-check of orthogonality on sampled incidence points.
//!
//! The check is one-sided: exact orthogonality implies small residuals, but a
//! large residual on a badly conditioned pair is not proof of failure.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::biform::Signature;
use crate::error::{Error, Result};
use crate::gen::{derive_seed, rng};
use crate::pairs::PolyMapPair;
use crate::poly::MultiPoly;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub trials: usize,
    pub max_relative_residual: f64,
    pub failures: usize,
    pub seed: u64,
    pub tol: f64,
}

fn weighted_pairing(sig: Signature, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    (0..sig.rank()).map(|k| x[k] * y[k].conj() * f64::from(sig.weight(k))).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

fn unit_scale<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Corrects one component of `y` so that `⟨x, y⟩_{sig} = 0`; the pivot is
/// the largest `|ε_k x_k|`.
fn correct<R: Rng>(sig: Signature, x: &[Complex64], rng: &mut R) -> Vec<Complex64> {
    let mut y = unit_scale(rng, sig.dim());
    let p = (0..sig.rank())
        .max_by(|&a, &b| x[a].norm().total_cmp(&x[b].norm()))
        .expect("r + s ≥ 1");
    if x[p].norm() == 0.0 {
        return y;
    }
    let eps = f64::from(sig.weight(p));
    y[p] = Complex64::new(0.0, 0.0);
    let rest = weighted_pairing(sig, x, &y);
    y[p] = (-rest / (x[p] * eps)).conj();
    y
}

/// Random `(x, y)` with `⟨x, y⟩_{sig} ≈ 0`.
pub fn sample_incidence(sig: Signature, seed: u64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if sig.rank() == 0 {
        return Err(Error::DegenerateNorm);
    }
    let mut r = rng(seed);
    let x = unit_scale(&mut r, sig.dim());
    let y = correct(sig, &x, &mut r);
    Ok((x, y))
}

/// As [`sample_incidence`] with `x` prescribed.
pub fn sample_incidence_at(sig: Signature, x: &[Complex64], seed: u64) -> Result<Vec<Complex64>> {
    if sig.rank() == 0 {
        return Err(Error::DegenerateNorm);
    }
    if x.len() != sig.dim() {
        return Err(Error::LengthMismatch { expected: sig.dim(), found: x.len() });
    }
    Ok(correct(sig, x, &mut rng(seed)))
}

/// `|⟨x, y⟩| / (‖x‖·‖y‖)`, zero when either vector vanishes.
pub fn incidence_residual(sig: Signature, x: &[Complex64], y: &[Complex64]) -> f64 {
    let d = norm(x) * norm(y);
    if d == 0.0 {
        0.0
    } else {
        weighted_pairing(sig, x, y).norm() / d
    }
}

/// Evaluates with coefficients rounded to `f64`.
pub fn eval_f64(p: &MultiPoly, point: &[Complex64]) -> Complex64 {
    p.terms()
        .map(|(m, c)| {
            let (re, im) = c.to_f64_pair();
            m.exponents()
                .iter()
                .zip(point)
                .fold(Complex64::new(re, im), |acc, (&e, v)| acc * v.powu(e))
        })
        .sum()
}

/// Samples incidence points and records the relative residual
/// `|⟨φ(x), ψ(y)⟩| / (1 + ‖φ(x)‖·‖ψ(y)‖)`.
pub fn numeric_verify(pair: &PolyMapPair, trials: usize, tol: f64, seed: u64) -> Result<SampleReport> {
    let mut report = SampleReport { trials, max_relative_residual: 0.0, failures: 0, seed, tol };
    for i in 0..trials {
        let (x, y) = sample_incidence(pair.source(), derive_seed(seed, i as u64))?;
        let fx: Vec<Complex64> = pair.phi().iter().map(|p| eval_f64(p, &x)).collect();
        let gy: Vec<Complex64> = pair.psi().iter().map(|p| eval_f64(p, &y)).collect();
        let res = weighted_pairing(pair.target(), &fx, &gy).norm() / (1.0 + norm(&fx) * norm(&gy));
        if res.is_nan() || res > tol {
            report.failures += 1;
        }
        if res.is_nan() || res > report.max_relative_residual {
            report.max_relative_residual = res;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Gq;
    use crate::gen::whitney;

    fn sig(r: usize, s: usize, t: usize) -> Signature {
        Signature::new(r, s, t).unwrap()
    }

    #[test]
    fn incidence_points_are_orthogonal() {
        for sg in [sig(2, 0, 0), sig(1, 1, 0), sig(1, 1, 2), sig(3, 2, 1)] {
            for seed in 0..20 {
                let (x, y) = sample_incidence(sg, seed).unwrap();
                assert!(incidence_residual(sg, &x, &y) <= 1e-12);
            }
        }
        assert_eq!(sample_incidence(sig(0, 0, 2), 1), Err(Error::DegenerateNorm));
    }

    #[test]
    fn forced_point_on_indefinite_form() {
        let one = Complex64::new(1.0, 0.0);
        let y = sample_incidence_at(sig(1, 1, 0), &[one, one], 3).unwrap();
        assert!((y[0] - y[1]).norm() < 1e-12);
    }

    #[test]
    fn null_coordinates_are_free() {
        let (x, y) = sample_incidence(sig(1, 1, 2), 4).unwrap();
        let (x2, y2) = sample_incidence(sig(1, 1, 2), 5).unwrap();
        assert_ne!(y[2], y2[2]);
        assert!(incidence_residual(sig(1, 1, 2), &x, &y) <= 1e-12);
        assert!(incidence_residual(sig(1, 1, 2), &x2, &y2) <= 1e-12);
    }

    #[test]
    fn whitney_passes_and_perturbation_fails() {
        let p = whitney(2, 1).unwrap();
        let rep = numeric_verify(&p, 100, DEFAULT_TOL, 1).unwrap();
        assert_eq!(rep.failures, 0);
        let mut phi = p.phi().to_vec();
        phi[0] = phi[0].checked_add(&MultiPoly::var(3, 0).pow(2)).unwrap();
        let bad = PolyMapPair::new(phi, p.psi().to_vec(), p.source(), p.target()).unwrap();
        assert!(numeric_verify(&bad, 100, DEFAULT_TOL, 1).unwrap().failures > 0);
        let _ = Gq::from_int(0);
    }
}
