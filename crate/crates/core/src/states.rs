//! Bipartite density operators, their real coordinates, random sampling and
//! local transformations.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, dagger, ginibre, hermitian_eigenvalues, hermitian_residual, principal_root, trace_product, ComplexMatrix};
use crate::tensors::{self, StructureTensors};

/// Tolerance for Hermiticity checks on input matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

fn local_tensors(dim: usize) -> Result<&'static StructureTensors> {
    match dim {
        2 => Ok(tensors::qubit()),
        3 => Ok(tensors::qutrit()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// Per-trial generator derived from a master seed; independent of scheduling.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, index))
}

pub fn trial_seed(master: u64, index: u64) -> u64 {
    master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Extended coordinates `r^{αᾱ}` with `ρ = Σ r^{αᾱ} λ_α ⊗ λ_ᾱ` and `λ_0 = I`.
///
/// Row 0 holds `r^{0ᾱ}` (so `rbar` is `ext[0, 1..]`), column 0 holds `r^{α0}`
/// (so `r` is `ext[1.., 0]`), and the lower-right block is `R^{aā}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coords {
    dim_a: usize,
    dim_b: usize,
    ext: DMatrix<f64>,
}

impl Coords {
    pub fn from_extended(dim_a: usize, dim_b: usize, ext: DMatrix<f64>) -> Result<Self> {
        local_tensors(dim_a)?;
        local_tensors(dim_b)?;
        let shape = (dim_a * dim_a, dim_b * dim_b);
        if ext.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: format!("{shape:?}"),
                got: format!("{:?}", ext.shape()),
            });
        }
        Ok(Coords { dim_a, dim_b, ext })
    }

    /// Assembles coordinates from `r`, `rbar`, `R` and `r^{00}`.
    pub fn from_parts(r00: f64, r: &DVector<f64>, rbar: &DVector<f64>, big_r: &DMatrix<f64>) -> Result<Self> {
        let na = r.len();
        let nb = rbar.len();
        let dim_a = dim_from_octet(na)?;
        let dim_b = dim_from_octet(nb)?;
        if big_r.shape() != (na, nb) {
            return Err(Error::ShapeMismatch {
                expected: format!("({na}, {nb})"),
                got: format!("{:?}", big_r.shape()),
            });
        }
        let mut ext = DMatrix::zeros(na + 1, nb + 1);
        ext[(0, 0)] = r00;
        ext.view_mut((1, 0), (na, 1)).copy_from(r);
        ext.view_mut((0, 1), (1, nb)).copy_from(&rbar.transpose());
        ext.view_mut((1, 1), (na, nb)).copy_from(big_r);
        Ok(Coords { dim_a, dim_b, ext })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn extended(&self) -> &DMatrix<f64> {
        &self.ext
    }

    pub fn r00(&self) -> f64 {
        self.ext[(0, 0)]
    }

    pub fn r(&self) -> DVector<f64> {
        self.ext.view((1, 0), (self.ext.nrows() - 1, 1)).column(0).into_owned()
    }

    pub fn rbar(&self) -> DVector<f64> {
        self.ext.view((0, 1), (1, self.ext.ncols() - 1)).row(0).transpose()
    }

    pub fn big_r(&self) -> DMatrix<f64> {
        self.ext.view((1, 1), (self.ext.nrows() - 1, self.ext.ncols() - 1)).into_owned()
    }

    /// Independent rescaling `r → t r`, `rbar → u rbar`, `R → v R`.
    pub fn scaled(&self, t: f64, u: f64, v: f64) -> Coords {
        let mut ext = self.ext.clone();
        for i in 1..ext.nrows() {
            ext[(i, 0)] *= t;
        }
        for j in 1..ext.ncols() {
            ext[(0, j)] *= u;
        }
        for i in 1..ext.nrows() {
            for j in 1..ext.ncols() {
                ext[(i, j)] *= v;
            }
        }
        Coords { ext, ..self.clone() }
    }

    /// Coordinates as a flat row-major vector.
    pub fn to_flat(&self) -> Vec<f64> {
        self.ext.transpose().as_slice().to_vec()
    }

    pub fn from_flat(dim_a: usize, dim_b: usize, flat: &[f64]) -> Result<Self> {
        let (na, nb) = (dim_a * dim_a, dim_b * dim_b);
        if flat.len() != na * nb {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", na * nb),
                got: format!("{}", flat.len()),
            });
        }
        Coords::from_extended(dim_a, dim_b, DMatrix::from_row_slice(na, nb, flat))
    }

    /// Applies induced local maps: `r → m_A r m_Bᵀ`.
    pub fn transformed(&self, m_a: &DMatrix<f64>, m_b: &DMatrix<f64>) -> Coords {
        Coords {
            ext: m_a * &self.ext * m_b.transpose(),
            ..self.clone()
        }
    }
}

fn dim_from_octet(n: usize) -> Result<usize> {
    match n {
        3 => Ok(2),
        8 => Ok(3),
        other => Err(Error::ShapeMismatch {
            expected: "3 or 8 components".into(),
            got: format!("{other}"),
        }),
    }
}

/// Extracts coordinates by trace inner products.
pub fn to_coords(rho: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Coords> {
    let ta = local_tensors(dim_a)?;
    let tb = local_tensors(dim_b)?;
    let n = dim_a * dim_b;
    if rho.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n}"),
            got: format!("{}x{}", rho.nrows(), rho.ncols()),
        });
    }
    let res = hermitian_residual(rho);
    if res > HERMITIAN_TOL {
        return Err(Error::NotHermitian(res));
    }
    let ba = ta.extended_basis();
    let bb = tb.extended_basis();
    let norm = |alpha: usize, dim: usize| if alpha == 0 { dim as f64 } else { 2.0 };
    let mut ext = DMatrix::zeros(ba.len(), bb.len());
    for (i, la) in ba.iter().enumerate() {
        for (j, lb) in bb.iter().enumerate() {
            let op = la.kronecker(lb);
            ext[(i, j)] = trace_product(rho, &op).re / (norm(i, dim_a) * norm(j, dim_b));
        }
    }
    Ok(Coords { dim_a, dim_b, ext })
}

/// Linear reconstruction `ρ = Σ r^{αᾱ} λ_α ⊗ λ_ᾱ`.
pub fn from_coords(coords: &Coords) -> ComplexMatrix {
    let ba = local_tensors(coords.dim_a).expect("validated").extended_basis();
    let bb = local_tensors(coords.dim_b).expect("validated").extended_basis();
    let n = coords.dim_a * coords.dim_b;
    let mut rho = ComplexMatrix::zeros(n, n);
    for (i, la) in ba.iter().enumerate() {
        for (j, lb) in bb.iter().enumerate() {
            let v = coords.ext[(i, j)];
            if v != 0.0 {
                rho += la.kronecker(lb) * c(v, 0.0);
            }
        }
    }
    rho
}

/// A bipartite density operator together with its coordinates.
#[derive(Clone, Debug)]
pub struct BipartiteState {
    rho: ComplexMatrix,
    coords: Coords,
}

impl BipartiteState {
    pub fn new(rho: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        let coords = to_coords(&rho, dim_a, dim_b)?;
        Ok(BipartiteState { rho, coords })
    }

    pub fn from_coords(coords: Coords) -> Self {
        BipartiteState {
            rho: from_coords(&coords),
            coords,
        }
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn dim_a(&self) -> usize {
        self.coords.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.coords.dim_b
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.rho)
    }

    pub fn diagnostics(&self) -> Physicality {
        let ev = self.eigenvalues();
        let min = ev.first().copied().unwrap_or(0.0);
        Physicality {
            trace: self.trace(),
            min_eigenvalue: min,
            hermitian_residual: hermitian_residual(&self.rho),
            physical: min >= -1e-10 && (self.trace() - 1.0).abs() <= 1e-10,
        }
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Result<Self> {
        let n = dim_a * dim_b;
        let rho = ComplexMatrix::identity(n, n) * c(1.0 / n as f64, 0.0);
        BipartiteState::new(rho, dim_a, dim_b)
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<Self> {
        BipartiteState::new(rho_a.kronecker(rho_b), rho_a.nrows(), rho_b.nrows())
    }

    /// `Tr_B ρ`.
    pub fn reduced_a(&self) -> ComplexMatrix {
        let (da, db) = (self.dim_a(), self.dim_b());
        ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| self.rho[(db * i + k, db * j + k)]).sum())
    }

    /// `Tr_A ρ`.
    pub fn reduced_b(&self) -> ComplexMatrix {
        let (da, db) = (self.dim_a(), self.dim_b());
        ComplexMatrix::from_fn(db, db, |i, j| (0..da).map(|k| self.rho[(db * k + i, db * k + j)]).sum())
    }

    /// The projector onto `ψ` (normalized internally).
    pub fn pure(psi: &DVector<Complex64>, dim_a: usize, dim_b: usize) -> Result<Self> {
        let psi = psi / c(psi.norm(), 0.0);
        let rho = &psi * psi.adjoint();
        BipartiteState::new(rho, dim_a, dim_b)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Physicality {
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub hermitian_residual: f64,
    pub physical: bool,
}

/// Hilbert–Schmidt random state `GG†/Tr(GG†)`.
pub fn random_state_with(dim_a: usize, dim_b: usize, rng: &mut impl rand::Rng) -> Result<BipartiteState> {
    random_state_of_rank_with(dim_a, dim_b, dim_a * dim_b, rng)
}

/// Induced-measure state of the given rank: `G` keeps only its first `rank` columns.
pub fn random_state_of_rank_with(dim_a: usize, dim_b: usize, rank: usize, rng: &mut impl rand::Rng) -> Result<BipartiteState> {
    local_tensors(dim_a)?;
    local_tensors(dim_b)?;
    let n = dim_a * dim_b;
    if rank == 0 || rank > n {
        return Err(Error::OutOfRange(format!("rank {rank} outside 1..={n}")));
    }
    let mut g = ginibre(n, rng);
    for j in rank..n {
        g.column_mut(j).fill(c(0.0, 0.0));
    }
    let mut rho = &g * dagger(&g);
    let tr = rho.trace();
    rho /= tr;
    symmetrize(&mut rho);
    BipartiteState::new(rho, dim_a, dim_b)
}

pub fn random_state(dim_a: usize, dim_b: usize, seed: u64) -> Result<BipartiteState> {
    random_state_with(dim_a, dim_b, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn symmetrize(m: &mut ComplexMatrix) {
    let h = (&*m + m.adjoint()) * c(0.5, 0.0);
    *m = h;
}

/// Haar random special unitary: QR of a Ginibre matrix with phases fixed,
/// then divided by a cube (square) root of its determinant.
pub fn random_local_unitary_with(dim: usize, rng: &mut impl rand::Rng) -> Result<ComplexMatrix> {
    local_tensors(dim)?;
    let g = ginibre(dim, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    let root = principal_root(u.determinant(), dim);
    Ok(u / root)
}

pub fn random_local_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    random_local_unitary_with(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random unit-determinant matrix: Gaussian entries rescaled by `Det^{−1/dim}`.
pub fn random_local_sl_with(dim: usize, rng: &mut impl rand::Rng) -> Result<ComplexMatrix> {
    local_tensors(dim)?;
    let g = ginibre(dim, rng);
    let root = principal_root(g.determinant(), dim);
    Ok(g / root)
}

pub fn random_local_sl(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    random_local_sl_with(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `ρ → (A⊗B) ρ (A⊗B)†`, optionally divided by its trace.
pub fn apply_local(state: &BipartiteState, a: &ComplexMatrix, b: &ComplexMatrix, renormalize: bool) -> Result<BipartiteState> {
    if a.shape() != (state.dim_a(), state.dim_a()) || b.shape() != (state.dim_b(), state.dim_b()) {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{} and {}x{}", state.dim_a(), state.dim_a(), state.dim_b(), state.dim_b()),
            got: format!("{:?} and {:?}", a.shape(), b.shape()),
        });
    }
    for m in [a, b] {
        let scale = m.norm().powi(m.nrows() as i32);
        if m.determinant().norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Singular);
        }
    }
    let e = a.kronecker(b);
    let mut rho = &e * state.rho() * dagger(&e);
    if renormalize {
        let tr = rho.trace();
        rho /= tr;
    }
    symmetrize(&mut rho);
    BipartiteState::new(rho, state.dim_a(), state.dim_b())
}

/// On-disk state format: row-major real and imaginary parts.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateFile {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_state(state: &BipartiteState) -> Self {
        let rho = state.rho();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..rho.nrows()).map(|i| (0..rho.ncols()).map(|j| f(&rho[(i, j)])).collect()).collect()
        };
        StateFile {
            dim_a: state.dim_a(),
            dim_b: state.dim_b(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn into_state(self) -> Result<BipartiteState> {
        let n = self.dim_a * self.dim_b;
        let bad_shape = |m: &Vec<Vec<f64>>| m.len() != n || m.iter().any(|row| row.len() != n);
        if bad_shape(&self.re) || bad_shape(&self.im) {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n} re and im"),
                got: format!("{}x{:?}", self.re.len(), self.re.first().map(Vec::len)),
            });
        }
        let rho = ComplexMatrix::from_fn(n, n, |i, j| c(self.re[i][j], self.im[i][j]));
        BipartiteState::new(rho, self.dim_a, self.dim_b)
    }
}

pub fn parse_state(json: &str) -> Result<BipartiteState> {
    serde_json::from_str::<StateFile>(json)?.into_state()
}

pub fn load_state(path: &Path) -> Result<BipartiteState> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn save_state(path: &Path, state: &BipartiteState) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&StateFile::from_state(state))?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn maximally_mixed_coordinates() {
        let s = BipartiteState::maximally_mixed(3, 3).unwrap();
        let co = s.coords();
        assert!((co.r00() - 1.0 / 9.0).abs() < 1e-15);
        assert!(co.r().iter().chain(co.rbar().iter()).chain(co.big_r().iter()).all(|v| v.abs() < 1e-15));
        let back = from_coords(co);
        assert!(max_abs_diff(&back, s.rho()) < 1e-15);
    }

    #[test]
    fn single_direction_component() {
        // ρ = (I + ε λ3⊗I)/9  ⇒  r³ = ε/9 and nothing else
        let eps = 0.3;
        let l3 = &tensors::qutrit().lambdas()[2];
        let rho = (ComplexMatrix::identity(9, 9) + l3.kronecker(&ComplexMatrix::identity(3, 3)) * c(eps, 0.0)) / c(9.0, 0.0);
        let co = to_coords(&rho, 3, 3).unwrap();
        let r = co.r();
        assert!((r[2] - eps / 9.0).abs() < 1e-15);
        assert!(r.iter().enumerate().all(|(i, v)| i == 2 || v.abs() < 1e-15));
        assert!(co.big_r().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn bell_like_pure_state() {
        let mut psi = DVector::zeros(9);
        for i in 0..3 {
            psi[4 * i] = c(1.0, 0.0);
        }
        let s = BipartiteState::pure(&psi, 3, 3).unwrap();
        let rebuilt = from_coords(s.coords());
        let ev = hermitian_eigenvalues(&rebuilt);
        assert!((ev[8] - 1.0).abs() < 1e-12);
        assert!(ev[..8].iter().all(|v| v.abs() < 1e-12));
        assert!(max_abs_diff(&rebuilt, &(&psi * psi.adjoint() / c(3.0, 0.0))) < 1e-12);
    }

    #[test]
    fn random_state_contract() {
        let a = random_state(3, 3, 11).unwrap();
        let b = random_state(3, 3, 11).unwrap();
        assert_eq!(a.rho(), b.rho());
        let ev = a.eigenvalues();
        assert!(ev[0] >= -1e-12);
        assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(a.diagnostics().physical);
    }

    #[test]
    fn rejects_non_hermitian_and_bad_shapes() {
        let mut m = ComplexMatrix::identity(9, 9);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(to_coords(&m, 3, 3), Err(Error::NotHermitian(_))));
        assert!(to_coords(&ComplexMatrix::identity(4, 4), 3, 3).is_err());
        assert!(Coords::from_extended(3, 3, DMatrix::zeros(4, 9)).is_err());
        assert!(random_local_unitary(4, 0).is_err());
    }

    #[test]
    fn local_group_samples() {
        for dim in [2, 3] {
            let u = random_local_unitary(dim, 5).unwrap();
            let id = ComplexMatrix::identity(dim, dim);
            assert!(max_abs_diff(&(u.adjoint() * &u), &id) < 1e-12);
            assert!((u.determinant() - c(1.0, 0.0)).norm() < 1e-12);
            let a = random_local_sl(dim, 5).unwrap();
            assert!((a.determinant() - c(1.0, 0.0)).norm() < 1e-12);
            assert!(max_abs_diff(&(a.adjoint() * &a), &id) > 0.1);
        }
    }

    #[test]
    fn apply_local_contract() {
        let s = random_state(3, 3, 2).unwrap();
        let id = ComplexMatrix::identity(3, 3);
        let same = apply_local(&s, &id, &id, false).unwrap();
        assert!(max_abs_diff(same.rho(), s.rho()) < 1e-15);
        let u = random_local_unitary(3, 1).unwrap();
        let v = random_local_unitary(3, 2).unwrap();
        let t = apply_local(&s, &u, &v, false).unwrap();
        assert!((t.trace() - 1.0).abs() < 1e-12);
        let (e1, e2) = (s.eigenvalues(), t.eigenvalues());
        assert!(e1.iter().zip(&e2).all(|(x, y)| (x - y).abs() < 1e-12));
        let a = random_local_sl(3, 3).unwrap();
        let n = apply_local(&s, &a, &id, true).unwrap();
        assert!((n.trace() - 1.0).abs() < 1e-12);
        assert!(matches!(apply_local(&s, &ComplexMatrix::zeros(3, 3), &id, false), Err(Error::Singular)));
    }

    #[test]
    fn json_roundtrip() {
        let s = random_state(2, 2, 9).unwrap();
        let text = serde_json::to_string(&StateFile::from_state(&s)).unwrap();
        let back = parse_state(&text).unwrap();
        assert_eq!(back.rho(), s.rho());
        assert!(parse_state("{\"dimA\":3,\"dimB\":3,\"re\":[[1]],\"im\":[[0]]}").is_err());
        assert!(parse_state("{\"dimA\":3").is_err());
    }
}
