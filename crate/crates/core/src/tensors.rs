//! Gell-Mann and Pauli bases, the structure constants `f`, `d`, and the extended
//! symmetric tensor `d̃`.
//!
//! Octet indices are stored 0-based: slot `a` of `f`/`d` refers to `λ_{a+1}`.
//! The extended tensor `d̃` uses slot 0 for the identity direction and slot `a`
//! for `λ_a`.

use std::ops::{Index, IndexMut};
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, trace_product, ComplexMatrix};

/// Value of the ratio `d̃_{αβγ} r^α r^β r^γ / Det(ϱ)` for `ϱ = r⁰ I + Σ r^a λ_a`.
pub const DTILDE_DET_RATIO: f64 = 1.5;

/// Dense cubic array `n × n × n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 { n, data: vec![0.0; n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Contracts every slot with `m`: `out_{ijk} = Σ m_{ai} m_{bj} m_{ck} t_{abc}`.
    pub fn transform(&self, m: &DMatrix<f64>) -> Tensor3 {
        let n = self.n;
        let mut a = Tensor3::zeros(n);
        let mut b = Tensor3::zeros(n);
        let mut out = Tensor3::zeros(n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let v = self[(x, y, z)];
                    if v == 0.0 {
                        continue;
                    }
                    for i in 0..n {
                        a[(i, y, z)] += m[(x, i)] * v;
                    }
                }
            }
        }
        for i in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let v = a[(i, y, z)];
                    for j in 0..n {
                        b[(i, j, z)] += m[(y, j)] * v;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for z in 0..n {
                    let v = b[(i, j, z)];
                    for k in 0..n {
                        out[(i, j, k)] += m[(z, k)] * v;
                    }
                }
            }
        }
        out
    }

    /// `Σ t_{abc} x^a x^b x^c`.
    pub fn cubic_form(&self, x: &[f64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    acc += self[(a, b, cc)] * x[a] * x[b] * x[cc];
                }
            }
        }
        acc
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;
    fn index(&self, (a, b, c): (usize, usize, usize)) -> &f64 {
        &self.data[(a * self.n + b) * self.n + c]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (a, b, c): (usize, usize, usize)) -> &mut f64 {
        &mut self.data[(a * self.n + b) * self.n + c]
    }
}

#[derive(Clone, Debug)]
pub struct StructureTensors {
    dim: usize,
    lambdas: Vec<ComplexMatrix>,
    f: Tensor3,
    d: Option<Tensor3>,
    dtilde: Option<Tensor3>,
}

fn mat(n: usize, entries: &[(usize, usize, Complex64)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for &(i, j, v) in entries {
        m[(i, j)] = v;
    }
    m
}

pub fn gell_mann() -> Vec<ComplexMatrix> {
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let s = 1.0 / 3f64.sqrt();
    vec![
        mat(3, &[(0, 1, one), (1, 0, one)]),
        mat(3, &[(0, 1, -i), (1, 0, i)]),
        mat(3, &[(0, 0, one), (1, 1, -one)]),
        mat(3, &[(0, 2, one), (2, 0, one)]),
        mat(3, &[(0, 2, -i), (2, 0, i)]),
        mat(3, &[(1, 2, one), (2, 1, one)]),
        mat(3, &[(1, 2, -i), (2, 1, i)]),
        mat(3, &[(0, 0, c(s, 0.0)), (1, 1, c(s, 0.0)), (2, 2, c(-2.0 * s, 0.0))]),
    ]
}

pub fn pauli() -> Vec<ComplexMatrix> {
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    vec![
        mat(2, &[(0, 1, one), (1, 0, one)]),
        mat(2, &[(0, 1, -i), (1, 0, i)]),
        mat(2, &[(0, 0, one), (1, 1, -one)]),
    ]
}

/// Fills every permutation of `(a,b,c)` from the sorted representative, with the
/// permutation sign when `antisymmetric`.
fn symmetrized(n: usize, antisymmetric: bool, value: impl Fn(usize, usize, usize) -> f64) -> Tensor3 {
    let mut t = Tensor3::zeros(n);
    for a in 0..n {
        for b in a..n {
            for cc in b..n {
                if antisymmetric && (a == b || b == cc) {
                    continue;
                }
                let v = value(a, b, cc);
                let perms = [
                    (a, b, cc, 1.0),
                    (b, cc, a, 1.0),
                    (cc, a, b, 1.0),
                    (b, a, cc, -1.0),
                    (a, cc, b, -1.0),
                    (cc, b, a, -1.0),
                ];
                for (x, y, z, s) in perms {
                    t[(x, y, z)] = if antisymmetric { s * v } else { v };
                }
            }
        }
    }
    t
}

impl StructureTensors {
    fn build(dim: usize) -> Result<Self> {
        let lambdas = match dim {
            2 => pauli(),
            3 => gell_mann(),
            other => return Err(Error::UnsupportedDimension(other)),
        };
        let n = lambdas.len();
        let comm = |a: usize, b: usize| &lambdas[a] * &lambdas[b] - &lambdas[b] * &lambdas[a];
        let anti = |a: usize, b: usize| &lambdas[a] * &lambdas[b] + &lambdas[b] * &lambdas[a];
        // f_abc = Tr([λa,λb]λc)/(4i)
        let f = symmetrized(n, true, |a, b, cc| {
            (trace_product(&comm(a, b), &lambdas[cc]) / c(0.0, 4.0)).re
        });
        let (d, dtilde) = if dim == 3 {
            let d = symmetrized(n, false, |a, b, cc| (trace_product(&anti(a, b), &lambdas[cc]) / 4.0).re);
            let mut dt = Tensor3::zeros(n + 1);
            dt[(0, 0, 0)] = 1.5;
            for a in 0..n {
                for (x, y, z) in [(0, a + 1, a + 1), (a + 1, 0, a + 1), (a + 1, a + 1, 0)] {
                    dt[(x, y, z)] = -0.5;
                }
                for b in 0..n {
                    for cc in 0..n {
                        dt[(a + 1, b + 1, cc + 1)] = d[(a, b, cc)];
                    }
                }
            }
            (Some(d), Some(dt))
        } else {
            (None, None)
        };
        Ok(StructureTensors { dim, lambdas, f, d, dtilde })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of traceless generators, `dim² − 1`.
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[ComplexMatrix] {
        &self.lambdas
    }

    /// `λ_α` with `λ_0 = I`.
    pub fn extended_basis(&self) -> Vec<ComplexMatrix> {
        let mut v = vec![ComplexMatrix::identity(self.dim, self.dim)];
        v.extend(self.lambdas.iter().cloned());
        v
    }

    pub fn f(&self) -> &Tensor3 {
        &self.f
    }

    /// `d_{abc}`; present for dimension 3 only.
    pub fn d(&self) -> Option<&Tensor3> {
        self.d.as_ref()
    }

    pub fn d_mut(&mut self) -> Option<&mut Tensor3> {
        self.d.as_mut()
    }

    /// `d̃_{αβγ}`; present for dimension 3 only.
    pub fn dtilde(&self) -> Option<&Tensor3> {
        self.dtilde.as_ref()
    }
}

/// Builds the structure tensors for local dimension 2 or 3.
pub fn build_structure_tensors(dim: usize) -> Result<StructureTensors> {
    StructureTensors::build(dim)
}

static QUTRIT: OnceLock<StructureTensors> = OnceLock::new();
static QUBIT: OnceLock<StructureTensors> = OnceLock::new();

/// Shared dimension-3 tensors.
pub fn qutrit() -> &'static StructureTensors {
    QUTRIT.get_or_init(|| StructureTensors::build(3).expect("dimension 3 is supported"))
}

/// Shared dimension-2 tensors.
pub fn qubit() -> &'static StructureTensors {
    QUBIT.get_or_init(|| StructureTensors::build(2).expect("dimension 2 is supported"))
}

pub(crate) fn dtilde() -> &'static Tensor3 {
    qutrit().dtilde().expect("qutrit d̃")
}

pub(crate) fn d3() -> &'static Tensor3 {
    qutrit().d().expect("qutrit d")
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CyclicResiduals {
    /// `f_{abe}d_{cde} + f_{ace}d_{dbe} + f_{ade}d_{bce}`
    pub df: f64,
    /// `f_{abe}f_{cde} + f_{bce}f_{ade} + f_{cae}f_{bde}`
    pub ff: f64,
    /// `d_{abe}d_{cde} + d_{bce}d_{ade} + d_{cae}d_{bde} − (δ_{ab}δ_{cd} + δ_{bc}δ_{ad} + δ_{ca}δ_{bd})/3`
    pub dd: f64,
}

impl CyclicResiduals {
    pub fn max(&self) -> f64 {
        self.df.max(self.ff).max(self.dd)
    }
}

/// Maximum residuals of the cyclic quartet identities over all free indices.
pub fn cyclic_identity_check(t: &StructureTensors) -> Result<CyclicResiduals> {
    let d = t.d().ok_or(Error::UnsupportedDimension(t.dim()))?;
    let f = t.f();
    let n = t.n();
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut out = CyclicResiduals { df: 0.0, ff: 0.0, dd: 0.0 };
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for dd in 0..n {
                    let (mut df, mut ff, mut ddd) = (0.0, 0.0, 0.0);
                    for e in 0..n {
                        df += f[(a, b, e)] * d[(cc, dd, e)] + f[(a, cc, e)] * d[(dd, b, e)] + f[(a, dd, e)] * d[(b, cc, e)];
                        ff += f[(a, b, e)] * f[(cc, dd, e)] + f[(b, cc, e)] * f[(a, dd, e)] + f[(cc, a, e)] * f[(b, dd, e)];
                        ddd += d[(a, b, e)] * d[(cc, dd, e)] + d[(b, cc, e)] * d[(a, dd, e)] + d[(cc, a, e)] * d[(b, dd, e)];
                    }
                    ddd -= (delta(a, b) * delta(cc, dd) + delta(b, cc) * delta(a, dd) + delta(cc, a) * delta(b, dd)) / 3.0;
                    out.df = out.df.max(df.abs());
                    out.ff = out.ff.max(ff.abs());
                    out.dd = out.dd.max(ddd.abs());
                }
            }
        }
    }
    Ok(out)
}

/// `ϱ = r⁰ I + Σ r^a λ_a` for a 9-entry coordinate vector.
pub fn qutrit_matrix(coords: &[f64; 9]) -> ComplexMatrix {
    let t = qutrit();
    let mut m = ComplexMatrix::identity(3, 3) * c(coords[0], 0.0);
    for (a, l) in t.lambdas().iter().enumerate() {
        m += l * c(coords[a + 1], 0.0);
    }
    m
}

/// Returns `(d̃_{αβγ} r^α r^β r^γ, Det ϱ)`.
pub fn det_from_dtilde(coords: &[f64; 9]) -> (f64, f64) {
    let cubic = dtilde().cubic_form(coords);
    let det = qutrit_matrix(coords).determinant().re;
    (cubic, det)
}

/// `Det m` from traces: `6 Det = Tr³ − 3 Tr Tr(m²) + 2 Tr(m³)` (3×3 only).
pub fn det_by_traces(m: &ComplexMatrix) -> Complex64 {
    let t1 = m.trace();
    let m2 = m * m;
    let t2 = m2.trace();
    let t3 = (&m2 * m).trace();
    (t1 * t1 * t1 - 3.0 * t1 * t2 + 2.0 * t3) / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn trace_normalization() {
        for dim in [2, 3] {
            let t = build_structure_tensors(dim).unwrap();
            for (a, la) in t.lambdas().iter().enumerate() {
                for (b, lb) in t.lambdas().iter().enumerate() {
                    let want = if a == b { 2.0 } else { 0.0 };
                    assert!((trace_product(la, lb) - c(want, 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn named_entries() {
        let t = qutrit();
        assert!((t.f()[(0, 1, 2)] - 1.0).abs() < 1e-14);
        assert_eq!(t.f()[(0, 0, 1)], 0.0);
        assert_eq!(t.dtilde().unwrap()[(0, 1, 1)], -0.5);
        assert_eq!(t.dtilde().unwrap()[(0, 0, 3)], 0.0);
        assert!((t.d().unwrap()[(0, 0, 7)] - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        let p = qubit();
        assert_eq!(p.f()[(0, 1, 2)], 1.0);
        assert!(p.d().is_none());
    }

    #[test]
    fn commutators_and_anticommutators() {
        let t = qutrit();
        let l = t.lambdas();
        let id = ComplexMatrix::identity(3, 3);
        for a in 0..8 {
            for b in 0..8 {
                let mut comm = ComplexMatrix::zeros(3, 3);
                let mut anti = &id * c(if a == b { 4.0 / 3.0 } else { 0.0 }, 0.0);
                for cc in 0..8 {
                    comm += &l[cc] * c(0.0, 2.0 * t.f()[(a, b, cc)]);
                    anti += &l[cc] * c(2.0 * t.d().unwrap()[(a, b, cc)], 0.0);
                }
                assert!(max_abs_diff(&(&l[a] * &l[b] - &l[b] * &l[a]), &comm) < 1e-12);
                assert!(max_abs_diff(&(&l[a] * &l[b] + &l[b] * &l[a]), &anti) < 1e-12);
            }
        }
    }

    #[test]
    fn exact_symmetry() {
        let t = qutrit();
        let (f, d, dt) = (t.f(), t.d().unwrap(), t.dtilde().unwrap());
        for a in 0..9 {
            for b in 0..9 {
                for cc in 0..9 {
                    let v = dt[(a, b, cc)];
                    for p in [(a, cc, b), (b, a, cc), (b, cc, a), (cc, a, b), (cc, b, a)] {
                        assert_eq!(dt[p], v);
                    }
                    if a < 8 && b < 8 && cc < 8 {
                        assert_eq!(d[(b, a, cc)], d[(a, b, cc)]);
                        assert_eq!(f[(b, a, cc)], -f[(a, b, cc)]);
                        assert_eq!(f[(b, cc, a)], f[(a, b, cc)]);
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_identities_hold_and_are_sharp() {
        let r = cyclic_identity_check(qutrit()).unwrap();
        assert!(r.max() <= 1e-12, "{r:?}");
        let mut bad = qutrit().clone();
        bad.d_mut().unwrap()[(0, 0, 7)] += 1e-3;
        let r = cyclic_identity_check(&bad).unwrap();
        assert!(r.max() > 1e-4, "{r:?}");
        assert!(cyclic_identity_check(qubit()).is_err());
        assert!(build_structure_tensors(4).is_err());
    }

    #[test]
    fn dtilde_cubic_on_identity() {
        let mut x = [0.0; 9];
        x[0] = 1.0;
        let (cubic, det) = det_from_dtilde(&x);
        assert_eq!(cubic, 1.5);
        assert!((det - 1.0).abs() < 1e-15);
        x[0] = 1.0 / 3.0;
        let (cubic, det) = det_from_dtilde(&x);
        assert!((cubic - 1.0 / 18.0).abs() < 1e-15);
        assert!((det - 1.0 / 27.0).abs() < 1e-15);
    }
}
