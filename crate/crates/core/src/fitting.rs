//! Least-squares fits of EMP curves: a line, a parabola with intercept, and the
//! sech form `a1 − √(sech(a2·x))·√(a3 − a4·η_C)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Linear,
    QuadraticWithIntercept,
    SechForm,
}

impl FitModel {
    pub fn parameter_count(self) -> usize {
        match self {
            FitModel::Linear => 2,
            FitModel::QuadraticWithIntercept => 3,
            FitModel::SechForm => 4,
        }
    }
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitModel::Linear => "linear",
            FitModel::QuadraticWithIntercept => "quadratic_with_intercept",
            FitModel::SechForm => "sech_form",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub model: FitModel,
    /// `(m, c)`, `(c, a5, a6)` or `(a1, a2, a3, a4)`.
    pub coefficients: Vec<T>,
    pub residual_rms: T,
    /// False when no start of the iterative fit met the stopping criterion.
    pub converged: bool,
}

fn check_data<T: Scalar>(xs: &[T], ys: &[T], min: usize) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::DegenerateFit(format!(
            "{} abscissae but {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < min {
        return Err(Error::DegenerateFit(format!(
            "need at least {min} points, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("non-finite data".into()));
    }
    Ok(())
}

fn rms<T: Scalar>(residuals: impl Iterator<Item = T>) -> T {
    let (sum, n) = residuals.fold((T::zero(), 0usize), |(s, n), r| (s + r * r, n + 1));
    (sum / T::lit(n as f64)).sqrt()
}

/// Ordinary least squares over the monomials `1, x, …, x^(N−1)`, with `x`
/// centred for conditioning. Returns the coefficients in the original basis.
fn polyfit<T: Scalar, const N: usize>(xs: &[T], ys: &[T]) -> Result<[T; N]> {
    let n = T::lit(xs.len() as f64);
    let mean = xs.iter().fold(T::zero(), |s, x| s + *x) / n;
    let mut ata = [[T::zero(); N]; N];
    let mut aty = [T::zero(); N];
    for (x, y) in xs.iter().zip(ys) {
        let u = *x - mean;
        let mut pow = [T::one(); N];
        for k in 1..N {
            pow[k] = pow[k - 1] * u;
        }
        for i in 0..N {
            aty[i] = aty[i] + pow[i] * *y;
            for j in 0..N {
                ata[i][j] = ata[i][j] + pow[i] * pow[j];
            }
        }
    }
    let b = linalg::solve(ata, aty)
        .map_err(|e| Error::DegenerateFit(format!("singular design matrix ({e})")))?;
    // expand Σ b_k (x − mean)^k back into powers of x
    let mut coeffs = [T::zero(); N];
    for (k, bk) in b.iter().enumerate() {
        let mut binom = T::one();
        for (j, c) in coeffs.iter_mut().enumerate().take(k + 1) {
            // term C(k, j) x^j (−mean)^(k−j)
            *c = *c + *bk * binom * (-mean).powi((k - j) as i32);
            binom = binom * T::lit((k - j) as f64) / T::lit((j + 1) as f64);
        }
    }
    Ok(coeffs)
}

/// Straight line `y = m x + c`; coefficients `(m, c)`.
pub fn fit_linear<T: Scalar>(xs: &[T], ys: &[T]) -> Result<FitResult<T>> {
    check_data(xs, ys, 3)?;
    let [c, m] = polyfit::<T, 2>(xs, ys)?;
    Ok(FitResult {
        model: FitModel::Linear,
        coefficients: vec![m, c],
        residual_rms: rms(xs.iter().zip(ys).map(|(x, y)| *y - (m * *x + c))),
        converged: true,
    })
}

/// `y = c + a5 x + a6 x²`; coefficients `(c, a5, a6)`.
pub fn fit_quadratic<T: Scalar>(xs: &[T], ys: &[T]) -> Result<FitResult<T>> {
    check_data(xs, ys, 4)?;
    let [c, a5, a6] = polyfit::<T, 3>(xs, ys)?;
    Ok(FitResult {
        model: FitModel::QuadraticWithIntercept,
        coefficients: vec![c, a5, a6],
        residual_rms: rms(xs
            .iter()
            .zip(ys)
            .map(|(x, y)| *y - (c + a5 * *x + a6 * *x * *x))),
        converged: true,
    })
}

/// `a1 − √(sech(a2·x))·√(a3 − a4·η)`, or `None` where the root is imaginary.
pub fn sech_form<T: Scalar>(a: &[T; 4], x: T, eta: T) -> Option<T> {
    let q = a[2] - a[3] * eta;
    if q < T::zero() {
        return None;
    }
    Some(a[0] - (a[1] * x).cosh().recip().sqrt() * q.sqrt())
}

const MAX_ITER: usize = 500;

struct Lm<'a, T> {
    xs: &'a [T],
    ys: &'a [T],
    x: T,
}

impl<T: Scalar> Lm<'_, T> {
    fn cost(&self, a: &[T; 4]) -> Option<T> {
        self.xs
            .iter()
            .zip(self.ys)
            .try_fold(T::zero(), |s, (e, y)| {
                let r = *y - sech_form(a, self.x, *e)?;
                Some(s + r * r)
            })
    }

    /// Normal equations `JᵀJ`, `Jᵀr` for the residuals `y − model`.
    fn normal(&self, a: &[T; 4]) -> Option<([[T; 4]; 4], [T; 4])> {
        let half = T::lit(0.5);
        let s = (a[1] * self.x).cosh().recip();
        let u = s.sqrt();
        let th = (a[1] * self.x).tanh();
        let mut jtj = [[T::zero(); 4]; 4];
        let mut jtr = [T::zero(); 4];
        for (e, y) in self.xs.iter().zip(self.ys) {
            let q = a[2] - a[3] * *e;
            if !(q > T::zero()) {
                return None;
            }
            let v = q.sqrt();
            let r = *y - (a[0] - u * v);
            let grad = [
                T::one(),
                half * self.x * u * th * v,
                -u * half / v,
                u * *e * half / v,
            ];
            for i in 0..4 {
                jtr[i] = jtr[i] + grad[i] * r;
                for j in 0..4 {
                    jtj[i][j] = jtj[i][j] + grad[i] * grad[j];
                }
            }
        }
        Some((jtj, jtr))
    }

    /// Damped Gauss–Newton from one start; returns the final point, its cost
    /// and whether the stopping criterion was met.
    fn run(&self, start: [T; 4]) -> Option<([T; 4], T, bool)> {
        let mut a = start;
        let mut cost = self.cost(&a)?;
        let mut lambda = T::lit(1e-3);
        let tiny = T::epsilon();
        for _ in 0..MAX_ITER {
            let (jtj, jtr) = self.normal(&a)?;
            let grad_norm = jtr.iter().fold(T::zero(), |m, g| m.max(g.abs()));
            if grad_norm <= T::lit(1e-14) {
                return Some((a, cost, true));
            }
            let scale = (0..4).fold(T::zero(), |m, i| m.max(jtj[i][i]));
            let mut improved = false;
            while lambda < T::lit(1e16) {
                let mut m = jtj;
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = row[i] + lambda * (jtj[i][i] + tiny * scale);
                }
                if let Ok(step) = linalg::solve(m, jtr) {
                    let trial = [
                        a[0] + step[0],
                        a[1] + step[1],
                        a[2] + step[2],
                        a[3] + step[3],
                    ];
                    if let Some(c) = self.cost(&trial) {
                        if c < cost {
                            let rel = (cost - c) / cost.max(tiny);
                            let small_step = (0..4)
                                .all(|i| step[i].abs() <= T::lit(1e-12) * (T::one() + a[i].abs()));
                            a = trial;
                            cost = c;
                            lambda = (lambda / T::lit(3.0)).max(T::lit(1e-12));
                            improved = true;
                            if rel <= T::lit(1e-14) || small_step {
                                return Some((a, cost, true));
                            }
                            break;
                        }
                    }
                }
                lambda = lambda * T::lit(4.0);
            }
            if !improved {
                // no descent direction left at any damping
                return Some((a, cost, true));
            }
        }
        Some((a, cost, false))
    }
}

/// Starting grid for the sech-form fit.
pub fn sech_form_starts<T: Scalar>() -> Vec<[T; 4]> {
    let mut starts = Vec::with_capacity(81);
    for a1 in [0.5, 0.8, 1.0] {
        for a2 in [0.5, 1.0, 2.0] {
            for a3 in [-0.5, 0.1, 1.0] {
                for a4 in [-0.5, 0.1, 1.0] {
                    starts.push([a1, a2, a3, a4].map(T::lit));
                }
            }
        }
    }
    starts
}

fn lexicographic<T: Scalar>(a: &[T; 4], b: &[T; 4]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(u, v)| u.to_f64_lossy().total_cmp(&v.to_f64_lossy()))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Fits `(a1, a2, a3, a4)` at fixed squeeze `x` by damped Gauss–Newton from
/// every start of [`sech_form_starts`] whose model is defined on all data.
///
/// At a single `x` only `a1`, `sech(a2 x)·a3` and `sech(a2 x)·a4` are
/// determined by the data; the reported `a2` is whichever value the winning
/// start settled on.
pub fn fit_sech_form<T: Scalar>(etas: &[T], ys: &[T], x: T) -> Result<FitResult<T>> {
    check_data(etas, ys, 8)?;
    let lm = Lm { xs: etas, ys, x };
    let mut best: Option<([T; 4], T, bool)> = None;
    for start in sech_form_starts::<T>() {
        let Some(cand) = lm.run(start) else { continue };
        best = match best {
            None => Some(cand),
            Some(b) => {
                let ord = cand
                    .1
                    .to_f64_lossy()
                    .total_cmp(&b.1.to_f64_lossy())
                    .then(lexicographic(&cand.0, &b.0));
                Some(if ord.is_lt() { cand } else { b })
            }
        };
    }
    let (a, cost, converged) = best.ok_or_else(|| {
        Error::DegenerateFit("sech form undefined on the data for every start".into())
    })?;
    Ok(FitResult {
        model: FitModel::SechForm,
        coefficients: a.to_vec(),
        residual_rms: (cost / T::lit(etas.len() as f64)).sqrt(),
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| 0.05 + 0.75 * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.5];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let f = fit_linear(&xs, &ys).unwrap();
        assert!((f.coefficients[0] - 2.0).abs() < 1e-13);
        assert!((f.coefficients[1] - 1.0).abs() < 1e-13);
        assert!(f.residual_rms < 1e-13);
        assert_eq!(f.model.parameter_count(), f.coefficients.len());
    }

    #[test]
    fn exact_parabola() {
        let xs = grid(10);
        let ys: Vec<f64> = xs.iter().map(|x| 0.02 + 0.5 * x + 0.125 * x * x).collect();
        let f = fit_quadratic(&xs, &ys).unwrap();
        for (got, want) in f.coefficients.iter().zip([0.02, 0.5, 0.125]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            fit_linear(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(fit_linear(&[1.0, 2.0], &[0.0, 1.0]).is_err());
        assert!(fit_quadratic(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0, 2.0]).is_err());
        assert!(fit_quadratic(&[0.0, 0.0, 1.0, 1.0], &[0.0, 1.0, 2.0, 3.0]).is_err());
        assert!(fit_sech_form(&grid(5), &[0.0; 5], 1.0).is_err());
    }

    #[test]
    fn sech_form_self_consistency() {
        let truth = [0.9, 1.2, 0.8, 0.6];
        let x = 1.5;
        let etas = grid(12);
        let ys: Vec<f64> = etas
            .iter()
            .map(|e| sech_form(&truth, x, *e).unwrap())
            .collect();
        let f = fit_sech_form(&etas, &ys, x).unwrap();
        assert!(f.converged);
        assert!(f.residual_rms < 1e-9, "{}", f.residual_rms);
        let a: [f64; 4] = f.coefficients.clone().try_into().unwrap();
        // identifiable combinations
        let s = |a2: f64| 1.0 / (a2 * x).cosh();
        assert!((a[0] - truth[0]).abs() < 1e-6);
        assert!((s(a[1]) * a[2] - s(truth[1]) * truth[2]).abs() < 1e-6);
        assert!((s(a[1]) * a[3] - s(truth[1]) * truth[3]).abs() < 1e-6);
    }

    #[test]
    fn sech_form_domain() {
        assert!(sech_form(&[1.0, 1.0, 0.1, 1.0], 1.0, 0.5).is_none());
        assert_eq!(sech_form(&[1.0, 0.0, 1.0, 1.0], 3.0, 0.0), Some(0.0));
    }

    #[test]
    fn starts_are_ordered_and_complete() {
        let s = sech_form_starts::<f64>();
        assert_eq!(s.len(), 81);
        assert_eq!(s[0], [0.5, 0.5, -0.5, -0.5]);
        assert_eq!(s[80], [1.0, 2.0, 1.0, 1.0]);
    }
}
