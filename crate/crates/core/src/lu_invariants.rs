//! Local-unitary invariants `K_{pqs}` of two-qutrit states up to degree four.
//!
//! `p`, `q`, `s` count the factors of `r`, `rbar` and `R` respectively.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, jacobian, normalize_columns, numerical_rank, ComplexMatrix};
use crate::states::{BipartiteState, Coords};
use crate::tensors::{self, Tensor3};

/// Degree ≤ 3 labels with their gradings `(p, q, s)`.
pub const LOW_DEGREE: &[(&str, [u32; 3])] = &[
    ("K000", [0, 0, 0]),
    ("K200", [2, 0, 0]),
    ("K020", [0, 2, 0]),
    ("K002", [0, 0, 2]),
    ("K300", [3, 0, 0]),
    ("K030", [0, 3, 0]),
    ("K111", [1, 1, 1]),
    ("K102", [1, 0, 2]),
    ("K012", [0, 1, 2]),
    ("K003d", [0, 0, 3]),
    ("K003f", [0, 0, 3]),
];

/// The seventeen connected quartic labels.
pub const QUARTIC: &[(&str, [u32; 3])] = &[
    ("K103", [1, 0, 3]),
    ("K103'", [1, 0, 3]),
    ("K013", [0, 1, 3]),
    ("K013'", [0, 1, 3]),
    ("K202a", [2, 0, 2]),
    ("K202b", [2, 0, 2]),
    ("K022a", [0, 2, 2]),
    ("K022b", [0, 2, 2]),
    ("K112d", [1, 1, 2]),
    ("K112f", [1, 1, 2]),
    ("K121", [1, 2, 1]),
    ("K211", [2, 1, 1]),
    ("K004(3,3)", [0, 0, 4]),
    ("K004(2,4)", [0, 0, 4]),
    ("K004(4,2)", [0, 0, 4]),
    ("K004(2,2)", [0, 0, 4]),
    ("K004(2,2)'", [0, 0, 4]),
];

pub const CYCLE4: [usize; 4] = [1, 2, 3, 0];

/// `(σ, π)` of the five 004 patterns, in `QUARTIC` order. The first four chain the first
/// factor cyclically; the last is the `(2,2)` pattern with the two factors exchanged, since
/// the cyclic `(3,2)` chain is a linear combination of the other four and `K002²`.
pub const PATTERNS_004: [([usize; 4], [usize; 4]); 5] = [
    (CYCLE4, [2, 3, 0, 1]),
    (CYCLE4, [3, 0, 1, 2]),
    (CYCLE4, [1, 2, 3, 0]),
    (CYCLE4, [1, 0, 3, 2]),
    ([1, 0, 3, 2], CYCLE4),
];

pub fn grading(label: &str) -> Option<[u32; 3]> {
    LOW_DEGREE.iter().chain(QUARTIC).find(|(l, _)| *l == label).map(|(_, g)| *g)
}

pub fn quadratic_cubic_labels() -> Vec<&'static str> {
    LOW_DEGREE.iter().filter(|(l, _)| *l != "K000").map(|(l, _)| *l).collect()
}

pub fn quartic_labels() -> Vec<&'static str> {
    QUARTIC.iter().map(|(l, _)| *l).collect()
}

/// Invariant values keyed by label.
#[derive(Clone, Debug, Default, Serialize, PartialEq)]
#[serde(transparent)]
pub struct LuReport {
    pub values: BTreeMap<String, f64>,
}

impl LuReport {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.values.get(label).copied()
    }

    fn put(&mut self, label: &str, v: f64) {
        self.values.insert(label.to_string(), v);
    }

    pub fn merge(mut self, other: LuReport) -> LuReport {
        self.values.extend(other.values);
        self
    }
}

struct Parts {
    r00: f64,
    r: DVector<f64>,
    rb: DVector<f64>,
    big_r: DMatrix<f64>,
}

fn parts(coords: &Coords) -> Result<Parts> {
    if coords.dim_a() != 3 || coords.dim_b() != 3 {
        return Err(Error::UnsupportedDimension(coords.dim_a().max(coords.dim_b())));
    }
    Ok(Parts {
        r00: coords.r00(),
        r: coords.r(),
        rb: coords.rbar(),
        big_r: coords.big_r(),
    })
}

/// `Σ_a t_{abc} v^a` as a matrix in `(b, c)`.
fn contract_first(t: &Tensor3, v: &DVector<f64>) -> DMatrix<f64> {
    let n = t.dim();
    DMatrix::from_fn(n, n, |b, cc| (0..n).map(|a| t[(a, b, cc)] * v[a]).sum())
}

fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.dot(b)
}

fn tensor_dot(a: &Tensor3, b: &Tensor3) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum()
}

/// `Σ_{abc} T_{abc} Σ_e f_{abe} D_{ec}` with `D_{ec} = Σ_d d_{ecd} v^d`.
fn fd_coupling(t: &Tensor3, v: &DVector<f64>) -> f64 {
    let f = tensors::qutrit().f();
    let dv = contract_first(tensors::d3(), v);
    let n = t.dim();
    let mut acc = 0.0;
    for a in 0..n {
        for b in 0..n {
            for e in 0..n {
                let fe = f[(a, b, e)];
                if fe == 0.0 {
                    continue;
                }
                for cc in 0..n {
                    acc += t[(a, b, cc)] * fe * dv[(e, cc)];
                }
            }
        }
    }
    acc
}

/// All invariants of degree at most three.
pub fn eval_low_degree(coords: &Coords) -> Result<LuReport> {
    let p = parts(coords)?;
    let (d, f) = (tensors::d3(), tensors::qutrit().f());
    let (r, rb, big_r) = (&p.r, &p.rb, &p.big_r);
    let rrt = big_r * big_r.transpose();
    let rtr = big_r.transpose() * big_r;
    let mut out = LuReport::default();
    out.put("K000", 9.0 * p.r00);
    out.put("K200", r.dot(r));
    out.put("K020", rb.dot(rb));
    out.put("K002", big_r.norm_squared());
    out.put("K300", d.cubic_form(r.as_slice()));
    out.put("K030", d.cubic_form(rb.as_slice()));
    out.put("K111", r.dot(&(big_r * rb)));
    out.put("K102", frob(&contract_first(d, r), &rrt));
    out.put("K012", frob(&contract_first(d, rb), &rtr));
    out.put("K003d", tensor_dot(&d.transform(big_r), d));
    out.put("K003f", tensor_dot(&f.transform(big_r), f));
    Ok(out)
}

/// `M[(i,p),(j,q)] = Σ R^{ab̄} (λ_a)_{ij} (λ_b̄)_{pq}`.
pub fn embedded_r(coords: &Coords) -> Result<ComplexMatrix> {
    let p = parts(coords)?;
    let l = tensors::qutrit().lambdas();
    let mut m = ComplexMatrix::zeros(9, 9);
    for a in 0..8 {
        for b in 0..8 {
            let v = p.big_r[(a, b)];
            if v != 0.0 {
                m += l[a].kronecker(&l[b]) * c(v, 0.0);
            }
        }
    }
    Ok(m)
}

/// `Σ Π_k M[(i_k,p_k),(i_{σ(k)},p_{π(k)})]` over all defining-representation indices.
pub fn defining_contraction(m: &ComplexMatrix, sigma: [usize; 4], pi: [usize; 4]) -> Complex64 {
    if sigma == CYCLE4 {
        return cyclic_contraction(m, pi);
    }
    if pi == CYCLE4 {
        let swapped = ComplexMatrix::from_fn(9, 9, |x, y| m[(3 * (x % 3) + x / 3, 3 * (y % 3) + y / 3)]);
        return cyclic_contraction(&swapped, sigma);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for ii in 0..81usize {
        let i = [ii % 3, (ii / 3) % 3, (ii / 9) % 3, ii / 27];
        for pp in 0..81usize {
            let p = [pp % 3, (pp / 3) % 3, (pp / 9) % 3, pp / 27];
            let mut prod = Complex64::new(1.0, 0.0);
            for k in 0..4 {
                prod *= m[(3 * i[k] + p[k], 3 * i[sigma[k]] + p[pi[k]])];
            }
            acc += prod;
        }
    }
    acc
}

/// With a cyclic first-factor chain the contraction is `Σ_p Tr(B_{p0 pπ0} ⋯ B_{p3 pπ3})`
/// where `B_{pq}[i,j] = M[(i,p),(j,q)]`.
fn cyclic_contraction(m: &ComplexMatrix, pi: [usize; 4]) -> Complex64 {
    let blocks: Vec<Matrix3<Complex64>> = (0..9)
        .map(|pq| {
            let (p, q) = (pq / 3, pq % 3);
            Matrix3::from_fn(|i, j| m[(3 * i + p, 3 * j + q)])
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for pp in 0..81usize {
        let p = [pp % 3, (pp / 3) % 3, (pp / 9) % 3, pp / 27];
        let b = |k: usize| &blocks[3 * p[k] + p[pi[k]]];
        acc += (b(0) * b(1) * b(2) * b(3)).trace();
    }
    acc
}

/// The seventeen connected quartic invariants.
pub fn eval_quartic(coords: &Coords) -> Result<LuReport> {
    let p = parts(coords)?;
    let (d, f) = (tensors::d3(), tensors::qutrit().f());
    let (r, rb, big_r) = (&p.r, &p.rb, &p.big_r);
    let rt = big_r.transpose();
    let rrt = big_r * &rt;
    let rtr = &rt * big_r;
    let (dr, drb) = (contract_first(d, r), contract_first(d, rb));
    let (fr, frb) = (contract_first(f, r), contract_first(f, rb));
    let mut out = LuReport::default();

    out.put("K103", frob(&contract_first(d, &(&rt * r)), &rtr));
    out.put("K103'", fd_coupling(&f.transform(&rt), r));
    out.put("K013", frob(&contract_first(d, &(big_r * rb)), &rrt));
    out.put("K013'", fd_coupling(&f.transform(big_r), rb));

    let u = &dr * r;
    let ub = &drb * rb;
    out.put("K202a", r.dot(&(&rrt * r)));
    out.put("K202b", frob(&contract_first(d, &u), &rrt));
    out.put("K022a", rb.dot(&(&rtr * rb)));
    out.put("K022b", frob(&contract_first(d, &ub), &rtr));

    out.put("K112d", frob(&(&rt * &dr * big_r), &drb));
    out.put("K112f", frob(&(&rt * &fr * big_r), &frb));
    out.put("K121", (&rt * r).dot(&ub));
    out.put("K211", u.dot(&(big_r * rb)));

    let m = embedded_r(coords)?;
    for ((label, _), (sigma, pi)) in QUARTIC[12..].iter().zip(PATTERNS_004) {
        out.put(label, defining_contraction(&m, sigma, pi).re);
    }
    Ok(out)
}

/// Every invariant of degree at most four.
pub fn eval_all(coords: &Coords) -> Result<LuReport> {
    Ok(eval_low_degree(coords)?.merge(eval_quartic(coords)?))
}

/// Scale against which LU drift is measured: `max(|v|, ‖r‖^p ‖rbar‖^q ‖R‖^s)`.
pub fn drift_scale(label: &str, coords: &Coords, value: f64) -> Result<f64> {
    let [pp, q, s] = grading(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    let natural = coords.r().norm().powi(pp as i32) * coords.rbar().norm().powi(q as i32) * coords.big_r().norm().powi(s as i32);
    Ok(value.abs().max(natural))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IndependenceReport {
    pub labels: usize,
    pub states: usize,
    /// Rank of the states × labels value matrix.
    pub value_rank: usize,
    /// Largest Jacobian rank observed over the probed points.
    pub jacobian_rank: usize,
}

/// Relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

fn select(report: &LuReport, labels: &[&str]) -> Result<Vec<f64>> {
    labels
        .iter()
        .map(|l| report.get(l).ok_or_else(|| Error::UnknownLabel(l.to_string())))
        .collect()
}

/// Numerical rank of the value matrix over a sample and of the invariant map's Jacobian.
pub fn independence_test(sample: &[BipartiteState], labels: &[&str]) -> Result<IndependenceReport> {
    if sample.len() < labels.len() + 5 {
        return Err(Error::DegenerateSample(format!(
            "{} states for {} labels; need at least {}",
            sample.len(),
            labels.len(),
            labels.len() + 5
        )));
    }
    let rows: Vec<Vec<f64>> = sample
        .iter()
        .map(|s| select(&eval_all(s.coords())?, labels))
        .collect::<Result<_>>()?;
    let values = DMatrix::from_fn(rows.len(), labels.len(), |i, j| rows[i][j]);
    let value_rank = numerical_rank(&normalize_columns(&values), RANK_TOL);

    let mut jacobian_rank = 0;
    for s in sample.iter().take(2) {
        let base = s.coords().to_flat();
        let free = &base[1..];
        let eval = |x: &[f64]| -> Vec<f64> {
            let mut flat = Vec::with_capacity(base.len());
            flat.push(base[0]);
            flat.extend_from_slice(x);
            let co = Coords::from_flat(3, 3, &flat).expect("fixed shape");
            select(&eval_all(&co).expect("qutrit coordinates"), labels).expect("labels validated")
        };
        let jac = jacobian(eval, free, 1e-2);
        let rank = numerical_rank(&normalize_columns(&jac.transpose()), RANK_TOL);
        jacobian_rank = jacobian_rank.max(rank);
    }
    Ok(IndependenceReport {
        labels: labels.len(),
        states: sample.len(),
        value_rank,
        jacobian_rank,
    })
}
