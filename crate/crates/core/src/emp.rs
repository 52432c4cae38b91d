//! Efficiency at maximum power and the reference efficiencies it is compared
//! against.
//!
//! Power is `P = j·W`. One parameter is released at a time and `P` is
//! maximized over it; the efficiency `W/Q_h` at the maximizer is the EMP.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{occupations, EngineParameters, OccupationSet, SqueezeSet};
use crate::observables::{solve, useful_work};
use crate::optimize::maximize;
use crate::scalar::Scalar;

/// Parameter released for the power maximization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    X,
    Xh,
    Xc,
    Ea,
    Ph,
}

impl Variable {
    pub const ALL: [Variable; 5] = [
        Variable::X,
        Variable::Xh,
        Variable::Xc,
        Variable::Ea,
        Variable::Ph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::X => "x",
            Variable::Xh => "xh",
            Variable::Xc => "xc",
            Variable::Ea => "Ea",
            Variable::Ph => "ph",
        }
    }

    /// Writes `value` into whichever container holds this parameter.
    pub fn assign<T: Scalar>(
        self,
        params: &mut EngineParameters<T>,
        sq: &mut SqueezeSet<T>,
        value: T,
    ) {
        match self {
            Variable::X => sq.x = value,
            Variable::Xh => sq.xh = value,
            Variable::Xc => sq.xc = value,
            Variable::Ea => params.ea = value,
            Variable::Ph => sq.ph = value,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variable::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "unknown optimization variable `{s}` (expected x, xh, xc, Ea or ph)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationSpec<T> {
    pub variable: Variable,
    pub lower: T,
    pub upper: T,
    pub grid_points: usize,
    pub refine_tol: T,
}

impl<T: Scalar> OptimizationSpec<T> {
    pub const DEFAULT_GRID: usize = 256;

    /// Default bounds: squeeze magnitudes on `[0, 10]`, `Ea` on
    /// `[Eb + 0.01, 10 Eb]`, `p_h` on `[0, 1]`.
    pub fn new(variable: Variable, params: &EngineParameters<T>) -> Self {
        let (lower, upper) = match variable {
            Variable::X | Variable::Xh | Variable::Xc => (T::zero(), T::lit(10.0)),
            Variable::Ea => (params.eb + T::lit(0.01), T::lit(10.0) * params.eb),
            Variable::Ph => (T::zero(), T::one()),
        };
        Self {
            variable,
            lower,
            upper,
            grid_points: Self::DEFAULT_GRID,
            refine_tol: T::lit(1e-7),
        }
    }

    pub fn with_bounds(self, lower: T, upper: T) -> Self {
        Self {
            lower,
            upper,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lower < self.upper) {
            return Err(Error::InvalidSpec(format!(
                "empty range [{}, {}] for {}",
                self.lower, self.upper, self.variable
            )));
        }
        if self.grid_points < 16 {
            return Err(Error::InvalidSpec(format!(
                "need at least 16 grid points, got {}",
                self.grid_points
            )));
        }
        if !(self.refine_tol > T::zero()) {
            return Err(Error::InvalidSpec(format!(
                "refine tolerance must be > 0, got {}",
                self.refine_tol
            )));
        }
        Ok(())
    }
}

/// Denominator convention for the logarithmic EMP estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogEmpForm {
    /// `η_m² / (1 − (1 − η_m) ln(1 − η_m))`
    #[default]
    Unit,
    /// `η_m² / (η_m − (1 − η_m) ln(1 − η_m))`
    Modified,
}

/// `η_L*` for a given modified Carnot efficiency `η_m`.
pub fn log_emp<T: Scalar>(eta_m: T, form: LogEmpForm) -> T {
    let one = T::one();
    let tail = (one - eta_m) * (one - eta_m).ln();
    let lead = match form {
        LogEmpForm::Unit => one,
        LogEmpForm::Modified => eta_m,
    };
    eta_m * eta_m / (lead - tail)
}

/// `1 − √(1 − η_C)`
pub fn curzon_ahlborn<T: Scalar>(eta_c: T) -> T {
    T::one() - (T::one() - eta_c).sqrt()
}

/// `η_C / (2 − η_C)`
pub fn emp_upper_bound<T: Scalar>(eta_c: T) -> T {
    eta_c / (T::lit(2.0) - eta_c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceEfficiencies<T> {
    pub eta_ca: T,
    pub eta_upper: T,
    pub eta_l: T,
    pub eta_m: T,
    /// Modified hot temperature `(Ea − E1) / ln((1 + N_h)/N_h)`.
    pub thm: T,
}

pub fn reference_efficiencies<T: Scalar>(
    eta_c: T,
    params: &EngineParameters<T>,
    occ: &OccupationSet<T>,
    form: LogEmpForm,
) -> Result<ReferenceEfficiencies<T>> {
    if !(eta_c >= T::zero() && eta_c < T::one()) {
        return Err(Error::domain(
            "reference_efficiencies",
            format!("need 0 <= etaC < 1, got {eta_c}"),
        ));
    }
    if !(occ.hot > T::zero()) {
        return Err(Error::domain(
            "reference_efficiencies",
            format!("hot occupation must be > 0, got {}", occ.hot),
        ));
    }
    let thm = params.heat_input() / occ.hot.recip().ln_1p();
    let eta_m = T::one() - params.tc / thm;
    Ok(ReferenceEfficiencies {
        eta_ca: curzon_ahlborn(eta_c),
        eta_upper: emp_upper_bound(eta_c),
        eta_l: log_emp(eta_m, form),
        eta_m,
        thm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpResult<T> {
    pub variable: Variable,
    pub argmax: T,
    pub p_max: T,
    pub emp: T,
    pub eta_c: T,
    pub refs: ReferenceEfficiencies<T>,
    /// Maximizer within `refine_tol` of a bound.
    pub boundary: bool,
    /// Grid and refined maximizers more than one cell apart.
    pub disagreement: bool,
}

/// Power `j·W` and efficiency at one operating point.
pub fn power_and_efficiency<T: Scalar>(
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
) -> Result<(T, T)> {
    let op = solve(params, sq)?;
    let work = useful_work(params, &op.occ, op.flux)?;
    Ok((work.power, work.eta))
}

pub fn maximize_power<T: Scalar>(
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
    spec: &OptimizationSpec<T>,
    form: LogEmpForm,
) -> Result<EmpResult<T>> {
    spec.validate()?;
    let at = |v: T| {
        let (mut p, mut s) = (*params, *sq);
        spec.variable.assign(&mut p, &mut s, v);
        (p, s)
    };
    let best = maximize(
        |v| {
            let (p, s) = at(v);
            power_and_efficiency(&p, &s).map(|(pw, _)| pw)
        },
        spec.lower,
        spec.upper,
        spec.grid_points,
        spec.refine_tol,
    )?;
    let (p, s) = at(best.argmax);
    let (p_max, emp) = power_and_efficiency(&p, &s)?;
    let eta_c = p.carnot();
    let refs = reference_efficiencies(eta_c, &p, &occupations(&p, &s)?, form)?;
    let boundary =
        best.argmax - spec.lower <= spec.refine_tol || spec.upper - best.argmax <= spec.refine_tol;
    Ok(EmpResult {
        variable: spec.variable,
        argmax: best.argmax,
        p_max,
        emp,
        eta_c,
        refs,
        boundary,
        disagreement: best.disagreement,
    })
}

/// EMP at Carnot efficiency `eta_c`, realized as `T_c = T_h (1 − η_C)`.
pub fn emp_row<T: Scalar>(
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
    spec: &OptimizationSpec<T>,
    eta_c: T,
    form: LogEmpForm,
) -> Result<EmpResult<T>> {
    let p = EngineParameters {
        tc: params.th * (T::one() - eta_c),
        ..*params
    };
    let mut row = maximize_power(&p, sq, spec, form)?;
    // keep the requested grid value rather than the round-tripped one
    row.eta_c = eta_c;
    Ok(row)
}

/// [`emp_row`] for every grid value, in order.
pub fn emp_sweep<T: Scalar>(
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
    spec: &OptimizationSpec<T>,
    eta_c_grid: &[T],
    form: LogEmpForm,
) -> Result<Vec<EmpResult<T>>> {
    if eta_c_grid.is_empty() {
        return Err(Error::InvalidSpec("empty Carnot-efficiency grid".into()));
    }
    eta_c_grid
        .iter()
        .map(|&e| emp_row(params, sq, spec, e, form))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> EngineParameters<f64> {
        EngineParameters::reference()
    }

    #[test]
    fn closed_form_references() {
        assert_eq!(curzon_ahlborn(0.0f64), 0.0);
        assert_eq!(emp_upper_bound(0.0f64), 0.0);
        assert!((curzon_ahlborn(0.75f64) - 0.5).abs() < 1e-16);
        assert!((emp_upper_bound(0.75f64) - 0.6).abs() < 1e-16);
    }

    #[test]
    fn log_emp_forms() {
        let e = 0.4;
        let tail = 0.6 * 0.6f64.ln();
        assert!((log_emp(e, LogEmpForm::Unit) - e * e / (1.0 - tail)).abs() < 1e-16);
        assert!((log_emp(e, LogEmpForm::Modified) - e * e / (e - tail)).abs() < 1e-16);
        // near equilibrium the modified form tends to η/2
        assert!((log_emp(1e-4f64, LogEmpForm::Modified) / 1e-4 - 0.5).abs() < 1e-3);
    }

    #[test]
    fn unsqueezed_hot_bath_has_true_temperature() {
        let p = reference().with_temperatures(2.0, 0.8, 1.0);
        let occ = occupations(&p, &SqueezeSet::new(1.0, 0.0, 0.3, 0.2, 0.2)).unwrap();
        let refs = reference_efficiencies(p.carnot(), &p, &occ, LogEmpForm::Unit).unwrap();
        assert!((refs.thm - 2.0).abs() < 1e-12);
        assert!((refs.eta_m - p.carnot()).abs() < 1e-12);
    }

    #[test]
    fn reference_domain_checks() {
        let p = reference();
        let occ = occupations(&p, &SqueezeSet::default()).unwrap();
        assert!(reference_efficiencies(1.0, &p, &occ, LogEmpForm::Unit).is_err());
        let frozen = OccupationSet { hot: 0.0, ..occ };
        assert!(reference_efficiencies(0.5, &p, &frozen, LogEmpForm::Unit).is_err());
    }

    #[test]
    fn spec_validation() {
        let p = reference();
        let s = OptimizationSpec::new(Variable::Ea, &p);
        assert!((s.lower - 0.41).abs() < 1e-15 && (s.upper - 4.0).abs() < 1e-15);
        assert!(s.validate().is_ok());
        assert!(OptimizationSpec {
            grid_points: 8,
            ..s
        }
        .validate()
        .is_err());
        assert!(s.with_bounds(1.0, 1.0).validate().is_err());
        assert!(OptimizationSpec {
            refine_tol: 0.0,
            ..s
        }
        .validate()
        .is_err());
        assert_eq!("XC".parse::<Variable>().unwrap(), Variable::Xc);
        assert!("q".parse::<Variable>().is_err());
    }

    #[test]
    fn bound_maximum_is_flagged() {
        // power still rising at the cut-off
        let p = reference();
        let sq = SqueezeSet::new(0.0, 10.0, 10.0, 0.5, 0.5);
        let spec = OptimizationSpec::new(Variable::X, &p).with_bounds(0.0, 1.0);
        let r = maximize_power(&p, &sq, &spec, LogEmpForm::Unit).unwrap();
        assert!(r.boundary);
        assert_eq!(r.argmax, 1.0);
    }

    #[test]
    fn interior_maximum_is_certified() {
        let p = reference().with_temperatures(1.0, 0.6, 1.0);
        let sq = SqueezeSet::new(1.0, 0.0, 0.0, 0.5, 0.5);
        let spec = OptimizationSpec::new(Variable::Ea, &p);
        let r = maximize_power(&p, &sq, &spec, LogEmpForm::Unit).unwrap();
        assert!(!r.boundary && !r.disagreement);
        for v in [r.argmax - spec.refine_tol, r.argmax + spec.refine_tol] {
            let pp = EngineParameters { ea: v, ..p };
            assert!(power_and_efficiency(&pp, &sq).unwrap().0 <= r.p_max);
        }
        assert!(r.emp <= r.refs.eta_upper);
    }

    #[test]
    fn sweep_moves_cold_temperature() {
        let p = reference().with_temperatures(1.0, 0.5, 0.3);
        let spec = OptimizationSpec::new(Variable::Xc, &p);
        let rows = emp_sweep(
            &p,
            &SqueezeSet::new(1.0, 0.0, 0.0, 0.0, 0.0),
            &spec,
            &[0.1, 0.3],
            LogEmpForm::Unit,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].eta_c, 0.3);
        assert!(rows[1].emp > rows[0].emp);
        assert!(emp_sweep(&p, &SqueezeSet::default(), &spec, &[], LogEmpForm::Unit).is_err());
    }
}
