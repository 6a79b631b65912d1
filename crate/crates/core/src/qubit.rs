//! Two-qubit invariants built on the Minkowski structure of the Pauli coordinates.

use nalgebra::{DMatrix, DVector, Matrix4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, dagger, trace_product, ComplexMatrix};
use crate::states::Coords;
use crate::tensors;

/// `η = diag(+1, −1, −1, −1)`.
pub fn eta() -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, -1.0, -1.0]))
}

fn qubit_ext(coords: &Coords) -> Result<&DMatrix<f64>> {
    if coords.dim_a() != 2 || coords.dim_b() != 2 {
        return Err(Error::UnsupportedDimension(coords.dim_a().max(coords.dim_b())));
    }
    Ok(coords.extended())
}

/// `w^α_β = r^{αᾱ} η_{ᾱβ̄} r^{γβ̄} η_{γβ}`, i.e. `w = r η rᵀ η`.
pub fn w_matrix(coords: &Coords) -> Result<DMatrix<f64>> {
    let r = qubit_ext(coords)?;
    let e = eta();
    Ok(r * &e * r.transpose() * &e)
}

/// The partner on the second factor, `rᵀ η r η`, isospectral with `w`.
pub fn w_matrix_bar(coords: &Coords) -> Result<DMatrix<f64>> {
    let r = qubit_ext(coords)?;
    let e = eta();
    Ok(r.transpose() * &e * r * &e)
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct QubitInvariants {
    pub q2: f64,
    pub q4: f64,
    pub q6: f64,
    pub q8: f64,
    /// Determinant of the 4×4 coordinate matrix `r^{αᾱ}`.
    pub q4_tilde: f64,
    /// Determinant of the density matrix itself, reported alongside for comparison.
    pub det_rho: f64,
}

/// `Q_{2p} = Tr(wᵖ)` for `p = 1..4` and `Q̃₄ = Det r`.
pub fn eval_q(coords: &Coords) -> Result<QubitInvariants> {
    let w = w_matrix(coords)?;
    let w2 = &w * &w;
    let w3 = &w2 * &w;
    let r = qubit_ext(coords)?;
    Ok(QubitInvariants {
        q2: w.trace(),
        q4: w2.trace(),
        q6: w3.trace(),
        q8: (&w2 * &w2).trace(),
        q4_tilde: r.determinant(),
        det_rho: crate::states::from_coords(coords).determinant().re,
    })
}

fn levi_civita4() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let p = [a, b, cc, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if !distinct {
                        continue;
                    }
                    let inversions = (0..4).map(|i| (i + 1..4).filter(|&j| p[i] > p[j]).count()).sum::<usize>();
                    out.push((p, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
                }
            }
        }
    }
    out
}

/// `(1/24) ε_{λμρσ} ε_{ᾱβ̄γ̄δ̄} r^{λᾱ} r^{μβ̄} r^{ργ̄} r^{σδ̄}`.
pub fn q4_tilde_epsilon(coords: &Coords) -> Result<f64> {
    let r = qubit_ext(coords)?;
    let eps = levi_civita4();
    let mut acc = 0.0;
    for (p, sp) in &eps {
        for (q, sq) in &eps {
            acc += sp * sq * r[(p[0], q[0])] * r[(p[1], q[1])] * r[(p[2], q[2])] * r[(p[3], q[3])];
        }
    }
    Ok(acc / 24.0)
}

fn levi_civita3(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `ε^{ijk} ε^{p̄q̄r̄} r^i R^{jp̄} R^{kq̄} rbar^{r̄}` with Euclidean `ε`.
pub fn epsilon_r_rr_rbar(coords: &Coords) -> Result<f64> {
    qubit_ext(coords)?;
    let (r, rb, big_r) = (coords.r(), coords.rbar(), coords.big_r());
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e1 = levi_civita3(i, j, k);
                if e1 == 0.0 {
                    continue;
                }
                for p in 0..3 {
                    for q in 0..3 {
                        for s in 0..3 {
                            let e2 = levi_civita3(p, q, s);
                            if e2 != 0.0 {
                                acc += e1 * e2 * r[i] * big_r[(j, p)] * big_r[(k, q)] * rb[s];
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// `r^{00} Det R − (1/2) ε ε r R R rbar`: the Laplace expansion of `Det r` along the
/// identity row and column. For normalized states `r^{00} = 1/4`.
pub fn q4_tilde_expansion(coords: &Coords) -> Result<f64> {
    let u1 = epsilon_r_rr_rbar(coords)?;
    Ok(coords.r00() * coords.big_r().determinant() - 0.5 * u1)
}

/// `|Det r − expansion|`.
pub fn q4tilde_expansion_check(coords: &Coords) -> Result<f64> {
    Ok((qubit_ext(coords)?.determinant() - q4_tilde_expansion(coords)?).abs())
}

/// `1/16 − r² − rbar² + RR`, valid for normalized states.
pub fn q2_expansion(coords: &Coords) -> Result<f64> {
    qubit_ext(coords)?;
    let (r, rb, big_r) = (coords.r(), coords.rbar(), coords.big_r());
    Ok(1.0 / 16.0 - r.norm_squared() - rb.norm_squared() + big_r.norm_squared())
}

/// `RRRR + (r²)² + (rbar²)² − 2rRRr − 2rbarRRrbar + rRrbar − r²/8 − rbar²/8 + 1/256`,
/// valid for normalized states.
pub fn q4_expansion(coords: &Coords) -> Result<f64> {
    qubit_ext(coords)?;
    let (r, rb, big_r) = (coords.r(), coords.rbar(), coords.big_r());
    let rrt = &big_r * big_r.transpose();
    let rtr = big_r.transpose() * &big_r;
    let (r2, rb2) = (r.norm_squared(), rb.norm_squared());
    Ok((&rrt * &rrt).trace() + r2 * r2 + rb2 * rb2 - 2.0 * r.dot(&(&rrt * &r)) - 2.0 * rb.dot(&(&rtr * &rb))
        + r.dot(&(&big_r * &rb))
        - r2 / 8.0
        - rb2 / 8.0
        + 1.0 / 256.0)
}

/// Lorentz matrix `m^β_α` with `A σ_α A† = Σ_β m^β_α σ_β`.
pub fn induce_lorentz(a: &ComplexMatrix) -> Result<DMatrix<f64>> {
    if a.shape() != (2, 2) {
        return Err(Error::ShapeMismatch {
            expected: "2x2".into(),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let det = a.determinant();
    if (det - c(1.0, 0.0)).norm() > crate::lsl_qutrit::DET_TOL {
        return Err(Error::DeterminantNotOne(det));
    }
    let basis = tensors::qubit().extended_basis();
    let ad = dagger(a);
    let mut m = DMatrix::zeros(4, 4);
    for (alpha, s) in basis.iter().enumerate() {
        let x = a * s * &ad;
        for (beta, t) in basis.iter().enumerate() {
            m[(beta, alpha)] = trace_product(&x, t).re / 2.0;
        }
    }
    Ok(m)
}

/// Eigenvalues of `w` and of its partner, sorted by real part, and the largest mismatch.
pub fn isospectrality_residual(coords: &Coords) -> Result<f64> {
    let sorted = |m: DMatrix<f64>| {
        let m4 = Matrix4::from_iterator(m.iter().copied());
        let mut ev: Vec<(f64, f64)> = m4.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        ev
    };
    let (a, b) = (sorted(w_matrix(coords)?), sorted(w_matrix_bar(coords)?));
    Ok(a.iter().zip(&b).map(|(x, y)| (x.0 - y.0).hypot(x.1 - y.1)).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_state, BipartiteState};

    #[test]
    fn eta_squares_to_identity() {
        let e = eta();
        assert_eq!(&e * &e, DMatrix::<f64>::identity(4, 4));
    }

    #[test]
    fn maximally_mixed() {
        let s = BipartiteState::maximally_mixed(2, 2).unwrap();
        let w = w_matrix(s.coords()).unwrap();
        let mut want = DMatrix::zeros(4, 4);
        want[(0, 0)] = 1.0 / 16.0;
        assert!((w - want).abs().max() < 1e-16);
        let q = eval_q(s.coords()).unwrap();
        assert!((q.q2 - 1.0 / 16.0).abs() < 1e-16);
        assert_eq!(q.q4_tilde, 0.0);
        assert!((q.det_rho - 1.0 / 256.0).abs() < 1e-16);
    }

    #[test]
    fn levi_civita_has_24_terms() {
        let e = levi_civita4();
        assert_eq!(e.len(), 24);
        assert_eq!(e.iter().map(|(_, s)| s).sum::<f64>(), 0.0);
    }

    #[test]
    fn epsilon_form_matches_determinant() {
        let s = random_state(2, 2, 3).unwrap();
        let d = s.coords().extended().determinant();
        assert!((q4_tilde_epsilon(s.coords()).unwrap() - d).abs() < 1e-15);
    }

    #[test]
    fn rejects_qutrits() {
        let s = random_state(3, 3, 0).unwrap();
        assert!(w_matrix(s.coords()).is_err());
        assert!(eval_q(s.coords()).is_err());
    }
}
