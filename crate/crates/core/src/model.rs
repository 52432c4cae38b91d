//! Physical configuration of the engine and the squeezed occupation factors.
//!
//! Units are dimensionless with `k_B = ħ = 1`. The three bosonic channels are
//! assigned the transition gaps
//!
//! | channel | gap        | bare factor |
//! |---------|------------|-------------|
//! | hot     | `Ea − E1`  | `n_h`       |
//! | cold    | `Eb − E1`  | `n_c`       |
//! | cavity  | `Ea − Eb`  | `n_ℓ`       |
//!
//! and a squeezed channel with magnitude `x` carries
//! `N = cosh(2x)(n + ½) − ½`. The emission counterpart of every factor is
//! `Ñ = N + 1`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest squeeze magnitude accepted; `cosh(2x)` overflows `f64` beyond ~355.
pub const MAX_SQUEEZE: f64 = 300.0;

/// Level energies, couplings, dephasing and the three temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineParameters<T> {
    pub e1: T,
    pub e2: T,
    pub eb: T,
    pub ea: T,
    /// System–cavity coupling.
    pub g: T,
    /// Symmetric system–bath coupling.
    pub r: T,
    /// Phenomenological dephasing rate.
    pub tau: T,
    pub th: T,
    pub tc: T,
    pub tl: T,
}

impl<T: Scalar> EngineParameters<T> {
    /// Reference level scheme (`E1 = E2 = 0.1`, `Eb = 0.4`, `Ea = 1.5`,
    /// `g = 1`, `r = 0.7`, `τ = 0.5`) with `Th = 2`, `Tc = 0.5`, `Tl = 0.9`.
    pub fn reference() -> Self {
        Self {
            e1: T::lit(0.1),
            e2: T::lit(0.1),
            eb: T::lit(0.4),
            ea: T::lit(1.5),
            g: T::one(),
            r: T::lit(0.7),
            tau: T::lit(0.5),
            th: T::lit(2.0),
            tc: T::lit(0.5),
            tl: T::lit(0.9),
        }
    }

    pub fn with_temperatures(self, th: T, tc: T, tl: T) -> Self {
        Self { th, tc, tl, ..self }
    }

    pub fn with_couplings(self, r: T, g: T) -> Self {
        Self { r, g, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if !(self.e1 == self.e2 && self.e1 >= T::zero()) {
            return bad(format!(
                "need E1 = E2 >= 0, got E1 = {}, E2 = {}",
                self.e1, self.e2
            ));
        }
        if !(self.eb > self.e1 && self.ea > self.eb) {
            return bad(format!(
                "need Ea > Eb > E1, got Ea = {}, Eb = {}, E1 = {}",
                self.ea, self.eb, self.e1
            ));
        }
        for (name, t) in [("Th", self.th), ("Tc", self.tc), ("Tl", self.tl)] {
            if !(t > T::zero() && t.is_finite()) {
                return bad(format!(
                    "temperature {name} must be positive and finite, got {t}"
                ));
            }
        }
        if !(self.g > T::zero() && self.r > T::zero()) {
            return bad(format!(
                "couplings must be positive, got g = {}, r = {}",
                self.g, self.r
            ));
        }
        if !(self.tau >= T::zero()) {
            return bad(format!("dephasing must be non-negative, got {}", self.tau));
        }
        Ok(())
    }

    /// Input heat per cycle, `Ea − E1`.
    pub fn heat_input(&self) -> T {
        self.ea - self.e1
    }

    pub fn hot_gap(&self) -> T {
        self.ea - self.e1
    }

    pub fn cold_gap(&self) -> T {
        self.eb - self.e1
    }

    pub fn cavity_gap(&self) -> T {
        self.ea - self.eb
    }

    /// Carnot efficiency `1 − Tc/Th`.
    pub fn carnot(&self) -> T {
        T::one() - self.tc / self.th
    }
}

/// Squeeze magnitudes of the cavity (`x`) and the two reservoirs, plus the
/// hot/cold coherence strengths `p = |cos φ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSet<T> {
    pub x: T,
    pub xh: T,
    pub xc: T,
    pub ph: T,
    pub pc: T,
}

impl<T: Scalar> Default for SqueezeSet<T> {
    fn default() -> Self {
        Self::unsqueezed(T::zero(), T::zero())
    }
}

impl<T: Scalar> SqueezeSet<T> {
    pub fn new(x: T, xh: T, xc: T, ph: T, pc: T) -> Self {
        Self { x, xh, xc, ph, pc }
    }

    pub fn unsqueezed(ph: T, pc: T) -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), ph, pc)
    }

    /// Same squeezing with the coherence parameters switched off.
    pub fn incoherent(self) -> Self {
        Self {
            ph: T::zero(),
            pc: T::zero(),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("x", self.x), ("xh", self.xh), ("xc", self.xc)] {
            if !(v >= T::zero()) {
                return Err(Error::InvalidParameters(format!(
                    "squeeze magnitude {name} must be >= 0, got {v}"
                )));
            }
        }
        for (name, v) in [("ph", self.ph), ("pc", self.pc)] {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::InvalidParameters(format!(
                    "coherence parameter {name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Bare and squeezed occupation factors of the three channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationSet<T> {
    pub bare_hot: T,
    pub bare_cold: T,
    pub bare_cavity: T,
    /// `N_h`
    pub hot: T,
    /// `N_c`
    pub cold: T,
    /// `N_ℓ`
    pub cavity: T,
    /// `n = N_h + N_c`
    pub total: T,
    /// `y = N_c p_c + N_h p_h`
    pub coherent: T,
}

impl<T: Scalar> OccupationSet<T> {
    /// Assembles the set from squeezed factors, filling in `n` and `y`.
    pub fn from_squeezed(bare: [T; 3], squeezed: [T; 3], ph: T, pc: T) -> Self {
        let [hot, cold, cavity] = squeezed;
        Self {
            bare_hot: bare[0],
            bare_cold: bare[1],
            bare_cavity: bare[2],
            hot,
            cold,
            cavity,
            total: hot + cold,
            coherent: cold * pc + hot * ph,
        }
    }

    pub fn hot_tilde(&self) -> T {
        self.hot + T::one()
    }

    pub fn cold_tilde(&self) -> T {
        self.cold + T::one()
    }

    pub fn cavity_tilde(&self) -> T {
        self.cavity + T::one()
    }
}

/// Bose–Einstein occupation `1/(exp(gap/T) − 1)`.
pub fn bose_einstein<T: Scalar>(gap: T, temperature: T) -> Result<T> {
    if !(gap > T::zero()) {
        return Err(Error::domain(
            "bose_einstein",
            format!("gap must be > 0, got {gap}"),
        ));
    }
    if !(temperature > T::zero()) {
        return Err(Error::domain(
            "bose_einstein",
            format!("temperature must be > 0, got {temperature}"),
        ));
    }
    Ok((gap / temperature).exp_m1().recip())
}

/// Occupation of a squeezed thermal mode, `cosh(2x)(n + ½) − ½`.
///
/// Evaluated as `n·cosh(2x) + sinh²(x)`, which is exact at `x = 0` and keeps
/// full precision for tiny `n`.
pub fn squeezed_occupation<T: Scalar>(bare: T, x: T) -> Result<T> {
    if !(bare >= T::zero()) {
        return Err(Error::domain(
            "squeezed_occupation",
            format!("bare occupation must be >= 0, got {bare}"),
        ));
    }
    if !(x >= T::zero()) {
        return Err(Error::domain(
            "squeezed_occupation",
            format!("squeeze magnitude must be >= 0, got {x}"),
        ));
    }
    if x > T::lit(MAX_SQUEEZE) {
        return Err(Error::SqueezeOverflow(x.to_f64_lossy()));
    }
    let two = T::lit(2.0);
    let s = x.sinh();
    Ok(bare * (two * x).cosh() + s * s)
}

/// All occupation factors for one operating point.
pub fn occupations<T: Scalar>(
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
) -> Result<OccupationSet<T>> {
    let bare = [
        bose_einstein(params.hot_gap(), params.th)?,
        bose_einstein(params.cold_gap(), params.tc)?,
        bose_einstein(params.cavity_gap(), params.tl)?,
    ];
    let squeezed = [
        squeezed_occupation(bare[0], sq.xh)?,
        squeezed_occupation(bare[1], sq.xc)?,
        squeezed_occupation(bare[2], sq.x)?,
    ];
    Ok(OccupationSet::from_squeezed(bare, squeezed, sq.ph, sq.pc))
}
