//! Local special-linear machinery for two qutrits: the real 9×9 representation
//! of SL(3,ℂ) that preserves `d̃`, its Lie algebra, and the invariants `C₃`, `C₆`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, dagger, jacobian, numerical_rank, trace_product, ComplexMatrix, I};
use crate::lu_invariants::eval_low_degree;
use crate::states::{BipartiteState, Coords};
use crate::tensors::{self, Tensor3};

/// Tolerance on `|Det A − 1|` accepted by [`induce_map`].
pub const DET_TOL: f64 = 1e-10;

/// Real matrix `m^β_α` with `A λ_α A† = Σ_β m^β_α λ_β`, stored as `m[(β, α)]`.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub m: DMatrix<f64>,
    pub source: ComplexMatrix,
}

impl InducedMap {
    /// `max |Σ m m m d̃ − d̃|` over all index triples.
    pub fn preservation_residual(&self) -> f64 {
        let dt = tensors::dtilde();
        let moved = dt.transform(&self.m);
        max_tensor_diff(&moved, dt)
    }
}

fn max_tensor_diff(a: &Tensor3, b: &Tensor3) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// The induced map of a unit-determinant 3×3 matrix.
pub fn induce_map(a: &ComplexMatrix) -> Result<InducedMap> {
    if a.shape() != (3, 3) {
        return Err(Error::ShapeMismatch {
            expected: "3x3".into(),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let det = a.determinant();
    if (det - c(1.0, 0.0)).norm() > DET_TOL {
        return Err(Error::DeterminantNotOne(det));
    }
    Ok(InducedMap {
        m: induced_unchecked(a),
        source: a.clone(),
    })
}

fn induced_unchecked(a: &ComplexMatrix) -> DMatrix<f64> {
    let basis = tensors::qutrit().extended_basis();
    let ad = dagger(a);
    let mut m = DMatrix::zeros(9, 9);
    for (alpha, l) in basis.iter().enumerate() {
        let x = a * l * &ad;
        m[(0, alpha)] = x.trace().re / 3.0;
        for b in 1..9 {
            m[(b, alpha)] = trace_product(&x, &basis[b]).re / 2.0;
        }
    }
    m
}

/// Residual of `m(ωᵏA) = m(A)` for the cube roots of unity.
pub fn triality_residual(a: &ComplexMatrix) -> Result<f64> {
    let base = induce_map(a)?.m;
    let mut worst: f64 = 0.0;
    for k in 1..3 {
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
        let other = induce_map(&(a * omega))?.m;
        worst = worst.max((other - &base).abs().max());
    }
    Ok(worst)
}

/// The sixteen real generators of the Lie algebra of the induced group.
#[derive(Clone, Debug)]
pub struct AlgebraGenerators {
    /// `(F_a)_b^c = f_{abc}`.
    pub f: Vec<DMatrix<f64>>,
    /// `(D_a)_0^b = δ_ab`, `(D_a)_b^0 = (2/3)δ_ab`, `(D_a)_b^c = d_{abc}`.
    pub d: Vec<DMatrix<f64>>,
}

impl AlgebraGenerators {
    /// `F_1..F_8` followed by `D_1..D_8`.
    pub fn all(&self) -> Vec<&DMatrix<f64>> {
        self.f.iter().chain(&self.d).collect()
    }

    /// Image in sl(3,ℂ): `F_a ↦ iλ_a/2`, `D_a ↦ −λ_a/2`.
    pub fn images() -> Vec<ComplexMatrix> {
        let l = tensors::qutrit().lambdas();
        let f = l.iter().map(|x| x * (I * 0.5));
        let d = l.iter().map(|x| x * c(-0.5, 0.0));
        f.chain(d).collect()
    }
}

/// `Σ_{α′} X_{αα′} d̃_{α′βγ}` summed over the three slots.
pub fn linearized_preservation(x: &DMatrix<f64>) -> f64 {
    let dt = tensors::dtilde();
    let mut worst: f64 = 0.0;
    for a in 0..9 {
        for b in 0..9 {
            for g in 0..9 {
                let mut s = 0.0;
                for p in 0..9 {
                    s += x[(a, p)] * dt[(p, b, g)] + x[(b, p)] * dt[(a, p, g)] + x[(g, p)] * dt[(a, b, p)];
                }
                worst = worst.max(s.abs());
            }
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AlgebraCertificate {
    pub span_rank: usize,
    /// Worst linearized `d̃`-preservation residual over the generators.
    pub preservation_residual: f64,
    /// Worst entry of `[G_i, G_j] − Σ_k c_ij^k G_k`, with `c_ij^k` read off in sl(3,ℂ).
    pub commutator_residual: f64,
    /// Measured `G = s · (d/dt m(exp(tZ)))ᵀ` factor for the F and D families.
    pub derivative_scale_f: f64,
    pub derivative_scale_d: f64,
    /// Worst entry of `G − s · (d/dt m(exp(tZ)))ᵀ` at the measured scales.
    pub derivative_residual: f64,
}

impl AlgebraCertificate {
    pub fn passes(&self, tol: f64) -> bool {
        self.span_rank == 16 && self.preservation_residual <= tol && self.commutator_residual <= tol
    }
}

/// Builds `F_a`, `D_a` and certifies the isomorphism with sl(3,ℂ) as a real algebra.
pub fn build_algebra() -> (AlgebraGenerators, AlgebraCertificate) {
    let t = tensors::qutrit();
    let (f, d) = (t.f(), t.d().expect("qutrit d"));
    let fs = (0..8)
        .map(|a| DMatrix::from_fn(9, 9, |b, cc| if b > 0 && cc > 0 { f[(a, b - 1, cc - 1)] } else { 0.0 }))
        .collect();
    let ds = (0..8)
        .map(|a| {
            DMatrix::from_fn(9, 9, |b, cc| match (b, cc) {
                (0, 0) => 0.0,
                (0, x) => (x == a + 1) as u8 as f64,
                (x, 0) => (x == a + 1) as u8 as f64 * 2.0 / 3.0,
                (x, y) => d[(a, x - 1, y - 1)],
            })
        })
        .collect();
    let gens = AlgebraGenerators { f: fs, d: ds };
    let all = gens.all();

    let flat = DMatrix::from_fn(16, 81, |i, k| all[i][(k / 9, k % 9)]);
    let span_rank = numerical_rank(&flat, 1e-10);
    let preservation_residual = all.iter().map(|x| linearized_preservation(x)).fold(0.0, f64::max);

    let images = AlgebraGenerators::images();
    let mut commutator_residual: f64 = 0.0;
    for i in 0..16 {
        for j in 0..16 {
            let target = &images[i] * &images[j] - &images[j] * &images[i];
            let coeffs = real_coefficients(&target);
            let mut rebuilt = DMatrix::zeros(9, 9);
            for (k, ck) in coeffs.iter().enumerate() {
                rebuilt += all[k] * *ck;
            }
            let comm = all[i] * all[j] - all[j] * all[i];
            commutator_residual = commutator_residual.max((comm - rebuilt).abs().max());
        }
    }

    let l = t.lambdas();
    let mut derivative_residual: f64 = 0.0;
    let mut scales = [0.0; 2];
    for (fam, gen_family) in [&gens.f, &gens.d].into_iter().enumerate() {
        let mut num = 0.0;
        let mut den = 0.0;
        let mut measured = Vec::new();
        for a in 0..8 {
            let z = if fam == 0 { &l[a] * (-I * 0.5) } else { &l[a] * c(0.5, 0.0) };
            let y = flow_derivative(&z).transpose();
            num += gen_family[a].dot(&y);
            den += y.norm_squared();
            measured.push(y);
        }
        let s = num / den;
        scales[fam] = s;
        for (g, y) in gen_family.iter().zip(&measured) {
            derivative_residual = derivative_residual.max((g - y * s).abs().max());
        }
    }

    let cert = AlgebraCertificate {
        span_rank,
        preservation_residual,
        commutator_residual,
        derivative_scale_f: scales[0],
        derivative_scale_d: scales[1],
        derivative_residual,
    };
    (gens, cert)
}

/// Coordinates of a traceless 3×3 matrix in the basis `iλ_a/2, −λ_a/2`.
fn real_coefficients(x: &ComplexMatrix) -> [f64; 16] {
    let l = tensors::qutrit().lambdas();
    let mut out = [0.0; 16];
    for a in 0..8 {
        // x = Σ (u_a + i v_a) λ_a with u + iv = Tr(x λ_a)/2
        let z = trace_product(x, &l[a]) / 2.0;
        out[a] = 2.0 * z.im;
        out[8 + a] = -2.0 * z.re;
    }
    out
}

/// `d/dt m(exp(tZ))` at `t = 0`.
fn flow_derivative(z: &ComplexMatrix) -> DMatrix<f64> {
    let flow = |t: &[f64]| -> Vec<f64> {
        let a = (z * c(t[0], 0.0)).exp();
        let m = induced_unchecked(&a);
        m.as_slice().to_vec()
    };
    let jac = jacobian(flow, &[0.0], 1e-2);
    DMatrix::from_column_slice(9, 9, jac.column(0).as_slice())
}

fn qutrit_ext(coords: &Coords) -> Result<&DMatrix<f64>> {
    if coords.dim_a() != 3 || coords.dim_b() != 3 {
        return Err(Error::UnsupportedDimension(coords.dim_a().max(coords.dim_b())));
    }
    Ok(coords.extended())
}

/// `T_{ᾱβ̄γ̄} = d̃_{αβγ} r^{αᾱ} r^{ββ̄} r^{γγ̄}`.
fn lifted(ext: &DMatrix<f64>) -> Tensor3 {
    tensors::dtilde().transform(ext)
}

/// `C₃ = d̃_{αβγ} d̃_{ᾱβ̄γ̄} r^{αᾱ} r^{ββ̄} r^{γγ̄}`.
pub fn eval_c3(coords: &Coords) -> Result<f64> {
    let t = lifted(qutrit_ext(coords)?);
    Ok(t.as_slice().iter().zip(tensors::dtilde().as_slice()).map(|(x, y)| x * y).sum())
}

/// `U_{ᾱρ̄} = T_{ᾱβ̄γ̄} d̃_{β̄γ̄ρ̄}`.
fn half_loop(t: &Tensor3) -> DMatrix<f64> {
    let dt = tensors::dtilde();
    DMatrix::from_fn(9, 9, |a, r| {
        let mut s = 0.0;
        for b in 0..9 {
            for g in 0..9 {
                s += t[(a, b, g)] * dt[(b, g, r)];
            }
        }
        s
    })
}

/// `C₆ = Tr(U²)`: the two lifted cubes joined through two `d̃`s in a 2:1 crossing pattern.
pub fn eval_c6(coords: &Coords) -> Result<f64> {
    let u = half_loop(&lifted(qutrit_ext(coords)?));
    Ok((&u * &u).trace())
}

/// Value of one matching: the six lifted legs `0..3` (first cube) and `3..6`
/// (second cube) are split into `triple` and its complement, each closed with a `d̃`.
pub fn matching_value(coords: &Coords, triple: [usize; 3]) -> Result<f64> {
    if triple.iter().any(|&k| k >= 6) || triple[0] == triple[1] || triple[1] == triple[2] || triple[0] == triple[2] {
        return Err(Error::OutOfRange(format!("invalid leg triple {triple:?}")));
    }
    let t = lifted(qutrit_ext(coords)?);
    let dt = tensors::dtilde();
    let rest: Vec<usize> = (0..6).filter(|k| !triple.contains(k)).collect();
    let mut acc = 0.0;
    let mut idx = [0usize; 6];
    for flat in 0..9usize.pow(6) {
        let mut x = flat;
        for slot in idx.iter_mut() {
            *slot = x % 9;
            x /= 9;
        }
        let top = t[(idx[0], idx[1], idx[2])] * t[(idx[3], idx[4], idx[5])];
        if top == 0.0 {
            continue;
        }
        acc += top * dt[(idx[triple[0]], idx[triple[1]], idx[triple[2]])] * dt[(idx[rest[0]], idx[rest[1]], idx[rest[2]])];
    }
    Ok(acc)
}

/// All ten unordered splits of the six lifted legs, tagged by how many legs of
/// the first cube share a closing `d̃` (3 means the disconnected `C₃²` pattern).
pub fn matchings() -> Vec<([usize; 3], usize)> {
    let mut out = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            for cc in b + 1..6 {
                if a == 0 {
                    let from_first = [a, b, cc].iter().filter(|&&k| k < 3).count();
                    out.push(([a, b, cc], from_first.max(3 - from_first)));
                }
            }
        }
    }
    out
}

/// `K003d + (3/2)(K300+K030) + (3/2)(K111−K102−K012) − (1/4)(K200+K020) + (1/12)K002 + 1/324`.
pub fn c3_expansion(coords: &Coords) -> Result<f64> {
    let k = eval_low_degree(coords)?;
    let g = |l: &str| k.get(l).expect("low-degree label");
    Ok(g("K003d") + 1.5 * (g("K300") + g("K030")) + 1.5 * (g("K111") - g("K102") - g("K012")) - 0.25 * (g("K200") + g("K020"))
        + g("K002") / 12.0
        + 1.0 / 324.0)
}

/// `|C₃ − expansion|` for a trace-normalized state.
pub fn c3_expansion_check(state: &BipartiteState) -> Result<f64> {
    let co = state.coords();
    Ok((eval_c3(co)? - c3_expansion(co)?).abs())
}
