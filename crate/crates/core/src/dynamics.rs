//! Population–coherence rate equations, their time evolution and steady state.
//!
//! The state is the real vector `(ρ11, ρ22, ρaa, ρbb, ρ12)` and evolves under
//! `dρ/dt = L ρ` with
//!
//! ```text
//! ρ̇12 = −(ry/2)(ρ11 + ρ22) + r p_h Ñ_h ρaa + r p_c Ñ_c ρbb − r(n + τ) ρ12
//! ρ̇ii = −r n ρii + r Ñ_h ρaa + r Ñ_c ρbb − r y ρ12                 (i = 1, 2)
//! ρ̇bb = r N_c (ρ11 + ρ22) + g² Ñ_ℓ ρaa − (g² N_ℓ + 2r Ñ_c) ρbb + 2 r p_c N_c ρ12
//! ρ̇aa = r N_h (ρ11 + ρ22) − (g² Ñ_ℓ + 2r Ñ_h) ρaa + g² N_ℓ ρbb + 2 r p_h N_h ρ12
//! ```
//!
//! Every column of the four population rows sums to zero, so the trace is a
//! conserved quantity of the linear flow.

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{EngineParameters, OccupationSet, SqueezeSet};
use crate::scalar::Scalar;

pub const RHO11: usize = 0;
pub const RHO22: usize = 1;
pub const RHOAA: usize = 2;
pub const RHOBB: usize = 3;
pub const RHO12: usize = 4;

/// Populations of the four levels and the real part of the 1–2 coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineState<T> {
    pub rho11: T,
    pub rho22: T,
    pub rhoaa: T,
    pub rhobb: T,
    pub rho12: T,
}

impl<T: Scalar> EngineState<T> {
    /// All population in level 1.
    pub fn ground() -> Self {
        Self::from_array([T::one(), T::zero(), T::zero(), T::zero(), T::zero()])
    }

    pub fn from_array(v: [T; 5]) -> Self {
        Self {
            rho11: v[RHO11],
            rho22: v[RHO22],
            rhoaa: v[RHOAA],
            rhobb: v[RHOBB],
            rho12: v[RHO12],
        }
    }

    pub fn to_array(&self) -> [T; 5] {
        [self.rho11, self.rho22, self.rhoaa, self.rhobb, self.rho12]
    }

    pub fn trace(&self) -> T {
        self.rho11 + self.rho22 + self.rhoaa + self.rhobb
    }

    /// Populations non-negative and `|ρ12| ≤ √(ρ11 ρ22)`, up to `tol`.
    pub fn is_physical(&self, tol: T) -> bool {
        let pops = [self.rho11, self.rho22, self.rhoaa, self.rhobb];
        pops.iter().all(|p| *p >= -tol)
            && self.rho12.abs() <= (self.rho11 * self.rho22).max(T::zero()).sqrt() + tol
    }

    /// ∞-norm distance over all five components.
    pub fn distance(&self, other: &Self) -> T {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .fold(T::zero(), |m, (a, b)| m.max((*a - b).abs()))
    }
}

/// Generator `L` of the five coupled rate equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOperator<T> {
    pub matrix: [[T; 5]; 5],
    /// Sum of the `ρaa` and `ρbb` rows. The cavity exchange cancels from it;
    /// assembling it term by term keeps that cancellation exact when
    /// `g² N_ℓ` dwarfs the bath rates.
    pub upper_balance: [T; 5],
}

impl<T: Scalar> RateOperator<T> {
    pub fn zero() -> Self {
        Self::from_matrix([[T::zero(); 5]; 5])
    }

    /// Wraps a bare matrix, forming the balance row by plain addition.
    pub fn from_matrix(matrix: [[T; 5]; 5]) -> Self {
        let mut upper_balance = matrix[RHOAA];
        for (u, v) in upper_balance.iter_mut().zip(matrix[RHOBB]) {
            *u = *u + v;
        }
        Self {
            matrix,
            upper_balance,
        }
    }

    pub fn apply(&self, state: &EngineState<T>) -> EngineState<T> {
        EngineState::from_array(linalg::mat_vec(&self.matrix, &state.to_array()))
    }

    /// Largest magnitude among the diagonal decay rates.
    pub fn fastest_rate(&self) -> T {
        (0..5).fold(T::zero(), |m, i| m.max(self.matrix[i][i].abs()))
    }

    /// Column sums over the population rows; all zero for a trace-preserving
    /// generator.
    pub fn population_column_sums(&self) -> [T; 5] {
        let mut sums = [T::zero(); 5];
        for (col, s) in sums.iter_mut().enumerate() {
            *s = (RHO11..=RHOBB).fold(T::zero(), |acc, row| acc + self.matrix[row][col]);
        }
        sums
    }
}

/// Assembles `L` from the occupation factors, couplings and coherence strengths.
///
/// The cold-emission feed into the ground doublet carries the bath coupling,
/// `r·Ñ_c·ρbb`, like every other bath-induced term.
pub fn build_rate_operator<T: Scalar>(
    occ: &OccupationSet<T>,
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
) -> RateOperator<T> {
    let (r, tau) = (params.r, params.tau);
    let g2 = params.g * params.g;
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let n = occ.total;
    let y = occ.coherent;
    let (nh, nc, nl) = (occ.hot, occ.cold, occ.cavity);
    let (nh_t, nc_t, nl_t) = (occ.hot_tilde(), occ.cold_tilde(), occ.cavity_tilde());

    let mut m = [[T::zero(); 5]; 5];
    for i in [RHO11, RHO22] {
        m[i][i] = -r * n;
        m[i][RHOAA] = r * nh_t;
        m[i][RHOBB] = r * nc_t;
        m[i][RHO12] = -r * y;
    }
    m[RHOAA] = [
        r * nh,
        r * nh,
        -(g2 * nl_t + two * r * nh_t),
        g2 * nl,
        two * r * sq.ph * nh,
    ];
    m[RHOBB] = [
        r * nc,
        r * nc,
        g2 * nl_t,
        -(g2 * nl + two * r * nc_t),
        two * r * sq.pc * nc,
    ];
    m[RHO12] = [
        -half * r * y,
        -half * r * y,
        r * sq.ph * nh_t,
        r * sq.pc * nc_t,
        -r * (n + tau),
    ];
    let upper_balance = [
        r * n,
        r * n,
        -two * r * nh_t,
        -two * r * nc_t,
        two * r * (sq.ph * nh + sq.pc * nc),
    ];
    RateOperator {
        matrix: m,
        upper_balance,
    }
}

/// Sampled solution of the rate equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<EngineState<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last(&self) -> Option<(T, EngineState<T>)> {
        Some((*self.times.last()?, *self.states.last()?))
    }
}

/// Step size used when none is given: `0.01 / max(r, g²(N_ℓ + 1))`.
pub fn default_step<T: Scalar>(params: &EngineParameters<T>, occ: &OccupationSet<T>) -> T {
    T::lit(0.01) / params.r.max(params.g * params.g * occ.cavity_tilde())
}

const POPULATION_SLACK: f64 = 1e-9;

/// Classical fourth-order Runge–Kutta with fixed step.
///
/// The horizon is split into `ceil(t_final/dt)` equal steps, so the last
/// sample lands exactly on `t_final`. Every `stride`-th state is recorded,
/// together with the initial and the final one.
pub fn evolve<T: Scalar>(
    state0: EngineState<T>,
    op: &RateOperator<T>,
    t_final: T,
    dt: T,
    stride: usize,
) -> Result<Trajectory<T>> {
    if !(dt > T::zero()) || !(t_final > dt) {
        return Err(Error::domain(
            "evolve",
            format!("need 0 < dt < t_final, got dt = {dt}, t_final = {t_final}"),
        ));
    }
    if (state0.trace() - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::domain(
            "evolve",
            format!("initial state has trace {}", state0.trace()),
        ));
    }
    let steps = (t_final / dt)
        .ceil()
        .to_usize()
        .ok_or_else(|| Error::domain("evolve", "step count is not representable".to_string()))?;
    let h = t_final / T::lit(steps as f64);
    let stride = stride.max(1);
    let slack = T::lit(POPULATION_SLACK);

    let mut traj = Trajectory {
        times: vec![T::zero()],
        states: vec![state0],
    };
    let mut y = state0.to_array();
    let f = |v: &[T; 5]| linalg::mat_vec(&op.matrix, v);
    let axpy = |base: &[T; 5], k: &[T; 5], s: T| {
        let mut out = *base;
        for (o, ki) in out.iter_mut().zip(k) {
            *o = *o + s * *ki;
        }
        out
    };
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let two = T::lit(2.0);

    for step in 1..=steps {
        let k1 = f(&y);
        let k2 = f(&axpy(&y, &k1, half * h));
        let k3 = f(&axpy(&y, &k2, half * h));
        let k4 = f(&axpy(&y, &k3, h));
        for i in 0..5 {
            y[i] = y[i] + h * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        let t = h * T::lit(step as f64);
        if let Some(i) = (RHO11..=RHOBB).find(|&i| !(y[i] >= -slack && y[i] <= T::one() + slack)) {
            return Err(Error::StepRejected {
                t: t.to_f64_lossy(),
                index: i,
                value: y[i].to_f64_lossy(),
            });
        }
        if step % stride == 0 || step == steps {
            traj.times.push(t);
            traj.states.push(EngineState::from_array(y));
        }
    }
    Ok(traj)
}

/// Solves `L ρ = 0` with `Σ ρii = 1`, the normalization replacing the `ρ11` row.
///
/// The `ρbb` row is swapped for [`RateOperator::upper_balance`], an
/// equivalent system in which only the `ρaa` row carries the cavity rates.
pub fn steady_state<T: Scalar>(op: &RateOperator<T>) -> Result<EngineState<T>> {
    let mut a = op.matrix;
    a[RHO11] = [T::one(), T::one(), T::one(), T::one(), T::zero()];
    a[RHOBB] = op.upper_balance;
    let mut b = [T::zero(); 5];
    b[RHO11] = T::one();
    linalg::solve(a, b).map(EngineState::from_array)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::occupations;

    fn setup(
        sq: SqueezeSet<f64>,
    ) -> (EngineParameters<f64>, OccupationSet<f64>, RateOperator<f64>) {
        let p = EngineParameters::reference();
        let occ = occupations(&p, &sq).unwrap();
        let op = build_rate_operator(&occ, &p, &sq);
        (p, occ, op)
    }

    #[test]
    fn incoherent_generator_decouples_coherence() {
        let (p, occ, op) = setup(SqueezeSet::new(0.7, 0.2, 0.1, 0.0, 0.0));
        for i in RHO11..=RHOBB {
            assert_eq!(op.matrix[i][RHO12], 0.0);
            assert_eq!(op.matrix[RHO12][i], 0.0);
        }
        assert!((op.matrix[RHO12][RHO12] + p.r * (occ.total + p.tau)).abs() < 1e-15);
    }

    #[test]
    fn decoupled_cavity_drops_g_terms() {
        let sq = SqueezeSet::new(1.0, 0.0, 0.0, 0.4, 0.6);
        let mut p = EngineParameters::<f64>::reference();
        p.g = 0.0;
        let occ = occupations(&p, &sq).unwrap();
        let op = build_rate_operator(&occ, &p, &sq);
        assert_eq!(op.matrix[RHOAA][RHOBB], 0.0);
        assert_eq!(op.matrix[RHOBB][RHOAA], 0.0);
        assert!((op.matrix[RHOAA][RHOAA] + 2.0 * p.r * occ.hot_tilde()).abs() < 1e-15);
        assert!((op.matrix[RHOBB][RHOBB] + 2.0 * p.r * occ.cold_tilde()).abs() < 1e-15);
    }

    #[test]
    fn population_columns_sum_to_zero() {
        let (_, _, op) = setup(SqueezeSet::new(1.3, 0.4, 0.9, 0.35, 0.8));
        for s in op.population_column_sums() {
            assert!(s.abs() < 1e-13, "{s}");
        }
    }

    #[test]
    fn balance_row_is_sum_of_upper_rows() {
        let (_, _, op) = setup(SqueezeSet::new(0.4, 0.3, 0.9, 0.35, 0.8));
        let naive = RateOperator::from_matrix(op.matrix);
        for (a, b) in op.upper_balance.iter().zip(naive.upper_balance) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn null_generator_keeps_state() {
        let s0 = EngineState::from_array([0.4, 0.1, 0.3, 0.2, 0.05]);
        let traj = evolve(s0, &RateOperator::<f64>::zero(), 1.0, 0.1, 1).unwrap();
        assert!(traj.states.iter().all(|s| *s == s0));
        assert_eq!(traj.times.len(), 11);
        assert!((traj.times[10] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn steady_state_is_fixed_point_of_evolution() {
        let (p, occ, op) = setup(SqueezeSet::new(1.0, 0.3, 0.2, 0.5, 0.5));
        let ss = steady_state(&op).unwrap();
        let traj = evolve(ss, &op, 5.0, default_step(&p, &occ), 100).unwrap();
        for s in &traj.states {
            assert!(s.distance(&ss) < 1e-10);
        }
    }

    #[test]
    fn incoherent_steady_state_has_no_coherence() {
        let (_, _, op) = setup(SqueezeSet::new(2.0, 0.5, 1.0, 0.0, 0.0));
        assert_eq!(steady_state(&op).unwrap().rho12, 0.0);
    }

    #[test]
    fn strong_cavity_squeeze_equipopulates_upper_levels() {
        for pc in [0.2, 0.5, 0.8] {
            let (_, _, op) = setup(SqueezeSet::new(10.0, 0.0, 0.0, 0.5, pc));
            let ss = steady_state(&op).unwrap();
            assert!((ss.rhobb / ss.rhoaa - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn degenerate_couplings_are_singular() {
        let sq = SqueezeSet::new(0.0, 0.0, 0.0, 0.5, 0.5);
        let mut p = EngineParameters::<f64>::reference();
        p.r = 0.0;
        p.g = 0.0;
        let occ = occupations(&p, &sq).unwrap();
        let op = build_rate_operator(&occ, &p, &sq);
        assert!(matches!(steady_state(&op), Err(Error::Singular { .. })));
    }

    #[test]
    fn evolve_argument_checks() {
        let op = RateOperator::<f64>::zero();
        assert!(evolve(EngineState::ground(), &op, 1.0, 0.0, 1).is_err());
        assert!(evolve(EngineState::ground(), &op, 0.1, 0.2, 1).is_err());
        let bad = EngineState::from_array([0.5, 0.0, 0.0, 0.0, 0.0]);
        assert!(evolve(bad, &op, 1.0, 0.1, 1).is_err());
    }

    #[test]
    fn unstable_step_is_rejected() {
        let (_, _, op) = setup(SqueezeSet::new(1.0, 0.0, 0.0, 0.5, 0.5));
        // far beyond the RK4 stability limit
        let dt = 50.0 / op.fastest_rate();
        assert!(matches!(
            evolve(EngineState::ground(), &op, 1000.0 * dt, dt, 1),
            Err(Error::StepRejected { .. })
        ));
    }
}
