//! Two-outcome local measurements and randomized concavity checks for
//! homogeneous invariant functionals.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, dagger, principal_root, ComplexMatrix};
use crate::states::{
    random_local_unitary_with, random_state_of_rank_with, random_state_with, trial_rng, trial_seed, BipartiteState, Coords,
};
use crate::{lsl_qutrit, qubit};

/// Singular values are drawn from `(SV_EPS, 1 − SV_EPS)`.
pub const SV_EPS: f64 = 1e-3;
/// Branches with smaller probability are treated as degenerate.
pub const DEGENERATE_P: f64 = 1e-14;
/// Default rounding allowance for concavity margins.
pub const MARGIN_TOL: f64 = 1e-9;

/// `E_i = U_i D_i V` with `D_1 = diag(s)`, `D_2 = diag(√(1 − s²))`.
#[derive(Clone, Debug)]
pub struct MeasurementPair {
    pub e1: ComplexMatrix,
    pub e2: ComplexMatrix,
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    pub v: ComplexMatrix,
    pub singular: Vec<f64>,
}

impl MeasurementPair {
    pub fn from_parts(u1: ComplexMatrix, u2: ComplexMatrix, v: ComplexMatrix, singular: &[f64]) -> Result<Self> {
        let n = singular.len();
        if ![2, 3].contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        for m in [&u1, &u2, &v] {
            if m.shape() != (n, n) {
                return Err(Error::ShapeMismatch {
                    expected: format!("{n}x{n}"),
                    got: format!("{}x{}", m.nrows(), m.ncols()),
                });
            }
        }
        if let Some(s) = singular.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::OutOfRange(format!("singular value {s} outside [0, 1]")));
        }
        let (d1, d2) = diagonals(singular);
        let e1 = &u1 * d1 * &v;
        let e2 = &u2 * d2 * &v;
        Ok(MeasurementPair { e1, e2, u1, u2, v, singular: singular.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.singular.len()
    }

    /// `max |E₁†E₁ + E₂†E₂ − I|`.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.dim();
        let sum = dagger(&self.e1) * &self.e1 + dagger(&self.e2) * &self.e2;
        (sum - ComplexMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |E_i − U_i D_i V|` over both outcomes.
    pub fn reconstruction_residual(&self) -> f64 {
        let (d1, d2) = diagonals(&self.singular);
        let r1 = &self.e1 - &self.u1 * d1 * &self.v;
        let r2 = &self.e2 - &self.u2 * d2 * &self.v;
        r1.iter().chain(r2.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `|Det E_1|` and `|Det E_2|`.
    pub fn det_moduli(&self) -> [f64; 2] {
        [self.e1.determinant().norm(), self.e2.determinant().norm()]
    }
}

fn diagonals(s: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let d1 = DVector::from_iterator(s.len(), s.iter().map(|&x| c(x, 0.0)));
    let d2 = DVector::from_iterator(s.len(), s.iter().map(|&x| c((1.0 - x * x).max(0.0).sqrt(), 0.0)));
    (ComplexMatrix::from_diagonal(&d1), ComplexMatrix::from_diagonal(&d2))
}

pub fn sample_measurement_with(dim: usize, rng: &mut impl Rng) -> Result<MeasurementPair> {
    let u1 = random_local_unitary_with(dim, rng)?;
    let u2 = random_local_unitary_with(dim, rng)?;
    let v = random_local_unitary_with(dim, rng)?;
    let s: Vec<f64> = (0..dim).map(|_| rng.random_range(SV_EPS..1.0 - SV_EPS)).collect();
    MeasurementPair::from_parts(u1, u2, v, &s)
}

pub fn sample_measurement(dim: usize, seed: u64) -> Result<MeasurementPair> {
    sample_measurement_with(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// One measurement outcome; `state` is `None` when the branch is degenerate.
#[derive(Clone, Debug)]
pub struct Branch {
    pub p: f64,
    pub state: Option<BipartiteState>,
}

/// `ρ′_i = (E_i⊗I) ρ (E_i⊗I)† / p_i` (or `I⊗E_i` for side B).
pub fn apply_measurement(state: &BipartiteState, pair: &MeasurementPair, side: Side) -> Result<[Branch; 2]> {
    let local = match side {
        Side::A => state.dim_a(),
        Side::B => state.dim_b(),
    };
    if local != pair.dim() {
        return Err(Error::ShapeMismatch {
            expected: format!("measurement on a {local}-level factor"),
            got: format!("{}-level measurement", pair.dim()),
        });
    }
    let branch = |e: &ComplexMatrix| -> Result<Branch> {
        let full = match side {
            Side::A => e.kronecker(&ComplexMatrix::identity(state.dim_b(), state.dim_b())),
            Side::B => ComplexMatrix::identity(state.dim_a(), state.dim_a()).kronecker(e),
        };
        let mut rho = &full * state.rho() * dagger(&full);
        let p = rho.trace().re;
        if p < DEGENERATE_P {
            return Ok(Branch { p, state: None });
        }
        rho /= c(p, 0.0);
        rho = (&rho + rho.adjoint()) * c(0.5, 0.0);
        Ok(Branch { p, state: Some(BipartiteState::new(rho, state.dim_a(), state.dim_b())?) })
    };
    Ok([branch(&pair.e1)?, branch(&pair.e2)?])
}

/// Homogeneity-one functionals built from LSL invariants, plus a raw control.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// `|C₃|^{1/3}`
    C3,
    /// `|C₆|^{1/6}`
    C6,
    /// `|Q₂|^{1/2}`
    Q2,
    /// `|Q₄|^{1/4}`
    Q4,
    /// `|Q̃₄|^{1/4}`
    Q4Tilde,
    /// `|Q₆|^{1/6}`
    Q6,
    /// `|C₃|` without the root: degree 3, deliberately not a monotone.
    RawC3,
}

impl Functional {
    pub const ALL: [Functional; 7] = [
        Functional::C3,
        Functional::C6,
        Functional::Q2,
        Functional::Q4,
        Functional::Q4Tilde,
        Functional::Q6,
        Functional::RawC3,
    ];

    pub fn dim(self) -> usize {
        match self {
            Functional::C3 | Functional::C6 | Functional::RawC3 => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Functional::C3 => "|C3|^(1/3)",
            Functional::C6 => "|C6|^(1/6)",
            Functional::Q2 => "|Q2|^(1/2)",
            Functional::Q4 => "|Q4|^(1/4)",
            Functional::Q4Tilde => "|Q4~|^(1/4)",
            Functional::Q6 => "|Q6|^(1/6)",
            Functional::RawC3 => "|C3|",
        }
    }

    pub fn eval(self, coords: &Coords) -> Result<f64> {
        Ok(match self {
            Functional::C3 => lsl_qutrit::eval_c3(coords)?.abs().cbrt(),
            Functional::C6 => lsl_qutrit::eval_c6(coords)?.abs().powf(1.0 / 6.0),
            Functional::RawC3 => lsl_qutrit::eval_c3(coords)?.abs(),
            Functional::Q2 => qubit::eval_q(coords)?.q2.abs().sqrt(),
            Functional::Q4 => qubit::eval_q(coords)?.q4.abs().powf(0.25),
            Functional::Q4Tilde => qubit::eval_q(coords)?.q4_tilde.abs().powf(0.25),
            Functional::Q6 => qubit::eval_q(coords)?.q6.abs().powf(1.0 / 6.0),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrialOutcome {
    /// `F(ρ) − p₁F(ρ′₁) − p₂F(ρ′₂)`
    Margin(f64),
    Skipped(String),
}

pub fn concavity_trial(state: &BipartiteState, pair: &MeasurementPair, side: Side, f: Functional) -> Result<TrialOutcome> {
    if state.dim_a() != f.dim() || state.dim_b() != f.dim() {
        return Err(Error::UnsupportedDimension(state.dim_a()));
    }
    let branches = apply_measurement(state, pair, side)?;
    let mut margin = f.eval(state.coords())?;
    for (i, b) in branches.iter().enumerate() {
        match &b.state {
            Some(s) => margin -= b.p * f.eval(s.coords())?,
            None => return Ok(TrialOutcome::Skipped(format!("branch {} has probability {:e}", i + 1, b.p))),
        }
    }
    Ok(TrialOutcome::Margin(margin))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Violation {
    pub trial: u64,
    /// Seed of the trial's own generator; replays with [`replay_trial`].
    pub seed: u64,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TrialReport {
    pub functional: Functional,
    pub ensemble: Ensemble,
    pub seed: u64,
    pub trials: u64,
    pub evaluated: u64,
    pub skipped: u64,
    pub min_margin: f64,
    pub tolerance: f64,
    pub violations: Vec<Violation>,
}

impl TrialReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// How trial states and measurements are drawn.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// Hilbert–Schmidt states and Haar-random `U₁, U₂, V`.
    #[default]
    Haar,
    /// States of uniformly random rank, with `V` diagonalizing the measured marginal.
    /// Concentrates trials where `p_i` is small relative to `|Det E_i|`.
    Aligned,
}

fn aligned_inputs(dim: usize, rng: &mut impl Rng) -> Result<(BipartiteState, MeasurementPair, Side)> {
    let rank = rng.random_range(1..=dim * dim);
    let state = random_state_of_rank_with(dim, dim, rank, rng)?;
    let side = if rng.random::<bool>() { Side::A } else { Side::B };
    let marginal = match side {
        Side::A => state.reduced_a(),
        Side::B => state.reduced_b(),
    };
    let mut v = dagger(&marginal.symmetric_eigen().eigenvectors);
    let phase = principal_root(v.determinant(), dim);
    v /= phase;
    let u1 = random_local_unitary_with(dim, rng)?;
    let u2 = random_local_unitary_with(dim, rng)?;
    let s: Vec<f64> = (0..dim).map(|_| rng.random_range(SV_EPS..1.0 - SV_EPS)).collect();
    Ok((state, MeasurementPair::from_parts(u1, u2, v, &s)?, side))
}

/// Draws the state, measurement and side of trial `index`.
pub fn trial_inputs(f: Functional, ensemble: Ensemble, master: u64, index: u64) -> Result<(BipartiteState, MeasurementPair, Side)> {
    let mut rng = trial_rng(master, index);
    match ensemble {
        Ensemble::Haar => {
            let state = random_state_with(f.dim(), f.dim(), &mut rng)?;
            let pair = sample_measurement_with(f.dim(), &mut rng)?;
            let side = if rng.random::<bool>() { Side::A } else { Side::B };
            Ok((state, pair, side))
        }
        Ensemble::Aligned => aligned_inputs(f.dim(), &mut rng),
    }
}

pub fn replay_trial(f: Functional, ensemble: Ensemble, master: u64, index: u64) -> Result<TrialOutcome> {
    let (state, pair, side) = trial_inputs(f, ensemble, master, index)?;
    concavity_trial(&state, &pair, side, f)
}

/// Runs `trials` independent concavity trials in parallel; the result does not
/// depend on the number of worker threads.
pub fn run_trials(f: Functional, ensemble: Ensemble, master: u64, trials: u64, tol: f64) -> Result<TrialReport> {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| replay_trial(f, ensemble, master, i))
        .collect::<Result<_>>()?;
    let mut report = TrialReport {
        functional: f,
        ensemble,
        seed: master,
        trials,
        evaluated: 0,
        skipped: 0,
        min_margin: f64::INFINITY,
        tolerance: tol,
        violations: Vec::new(),
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            TrialOutcome::Margin(m) => {
                report.evaluated += 1;
                report.min_margin = report.min_margin.min(m);
                if m < -tol {
                    report.violations.push(Violation { trial: i as u64, seed: trial_seed(master, i as u64), margin: m });
                }
            }
            TrialOutcome::Skipped(_) => report.skipped += 1,
        }
    }
    Ok(report)
}

/// `(abc)^{2/3} + ((1−a²)(1−b²)(1−c²))^{1/3}`, i.e. `Σ_i |Det E_i|^{2/3}`.
pub fn scalar_lhs(a: f64, b: f64, c: f64) -> f64 {
    (a * b * c).powf(2.0 / 3.0) + ((1.0 - a * a) * (1.0 - b * b) * (1.0 - c * c)).cbrt()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ScanReport {
    pub resolution: usize,
    pub random_points: usize,
    /// `max(LHS − 1)` over the interior grid and the random points.
    pub max_violation: f64,
    /// `max(LHS − 1)` over the faces of the cube, where one factor collapses.
    pub boundary_max_violation: f64,
    /// `LHS − 1` at `a = b = c = 1/√2`.
    pub symmetric_point: f64,
}

impl ScanReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation <= tol && self.boundary_max_violation <= tol
    }
}

pub fn scalar_inequality_scan(resolution: usize, random_points: usize, seed: u64) -> Result<ScanReport> {
    if resolution < 10 {
        return Err(Error::OutOfRange(format!("scan resolution {resolution} is below 10")));
    }
    let step = 1.0 / (resolution + 1) as f64;
    let grid: Vec<f64> = (1..=resolution).map(|i| i as f64 * step).collect();
    let mut worst = f64::NEG_INFINITY;
    for &a in &grid {
        for &b in &grid {
            for &cc in &grid {
                worst = worst.max(scalar_lhs(a, b, cc) - 1.0);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_points {
        let (a, b, cc) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
        worst = worst.max(scalar_lhs(a, b, cc) - 1.0);
    }
    let mut boundary = f64::NEG_INFINITY;
    let edge: Vec<f64> = (0..=resolution + 1).map(|i| i as f64 * step).collect();
    for &x in &edge {
        for &y in &edge {
            for face in [0.0, 1.0] {
                boundary = boundary.max(scalar_lhs(face, x, y) - 1.0);
            }
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(ScanReport {
        resolution,
        random_points,
        max_violation: worst,
        boundary_max_violation: boundary,
        symmetric_point: scalar_lhs(h, h, h) - 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_point_saturates() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((scalar_lhs(h, h, h) - 1.0).abs() < 1e-15);
        assert!((scalar_lhs(1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scan_rejects_coarse_grid() {
        assert!(scalar_inequality_scan(5, 0, 0).is_err());
    }

    #[test]
    fn sampled_pairs_are_complete() {
        for seed in 0..10 {
            for dim in [2, 3] {
                let m = sample_measurement(dim, seed).unwrap();
                assert!(m.completeness_residual() < 1e-12);
                assert!(m.reconstruction_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn functional_dimensions() {
        let s = crate::states::random_state(2, 2, 0).unwrap();
        let m = sample_measurement(2, 0).unwrap();
        assert!(concavity_trial(&s, &m, Side::A, Functional::C3).is_err());
        assert!(matches!(concavity_trial(&s, &m, Side::A, Functional::Q2), Ok(TrialOutcome::Margin(_))));
    }
}
