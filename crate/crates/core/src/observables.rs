//! Steady-state thermodynamics: work flux, reference fluxes, affinity, work and
//! efficiency.

use crate::dynamics::{build_rate_operator, steady_state, EngineState};
use crate::error::{Error, Result};
use crate::model::{occupations, EngineParameters, OccupationSet, SqueezeSet};
use crate::scalar::Scalar;

/// Photon emission rate into the cavity, `g²(Ñ_ℓ ρaa − N_ℓ ρbb)`.
pub fn work_flux<T: Scalar>(ss: &EngineState<T>, occ: &OccupationSet<T>, g: T) -> T {
    g * g * (occ.cavity_tilde() * ss.rhoaa - occ.cavity * ss.rhobb)
}

/// Bosonic channel through which the steady current can be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Cavity,
    Hot,
    Cold,
}

/// The steady current measured on one channel.
///
/// In a steady state the net transfer `a → b` through the cavity equals the
/// net hot absorption `1,2 → a` and the net cold emission `b → 1,2`, so all
/// three agree up to rounding. Each form loses about `log10(N)` digits to
/// cancellation on its own channel.
pub fn channel_flux<T: Scalar>(
    ss: &EngineState<T>,
    occ: &OccupationSet<T>,
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
    channel: Channel,
) -> T {
    let two = T::lit(2.0);
    let r = params.r;
    let ground = ss.rho11 + ss.rho22;
    match channel {
        Channel::Cavity => work_flux(ss, occ, params.g),
        Channel::Hot => {
            r * occ.hot * ground - two * r * occ.hot_tilde() * ss.rhoaa
                + two * r * sq.ph * occ.hot * ss.rho12
        }
        Channel::Cold => {
            two * r * occ.cold_tilde() * ss.rhobb
                - r * occ.cold * ground
                - two * r * sq.pc * occ.cold * ss.rho12
        }
    }
}

/// Channel with the smallest occupation factor, where the current cancels least.
pub fn quietest_channel<T: Scalar>(occ: &OccupationSet<T>) -> Channel {
    let mut best = (Channel::Cavity, occ.cavity);
    for cand in [(Channel::Cold, occ.cold), (Channel::Hot, occ.hot)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best.0
}

/// Steady flux, evaluated on the channel least affected by cancellation.
pub fn steady_flux<T: Scalar>(
    ss: &EngineState<T>,
    occ: &OccupationSet<T>,
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
) -> T {
    channel_flux(ss, occ, params, sq, quietest_channel(occ))
}

/// Everything known about one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint<T> {
    pub occ: OccupationSet<T>,
    pub state: EngineState<T>,
    pub flux: T,
}

/// Validates the inputs, solves for the steady state and its flux.
pub fn solve<T: Scalar>(
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
) -> Result<OperatingPoint<T>> {
    params.validate()?;
    sq.validate()?;
    let occ = occupations(params, sq)?;
    let state = steady_state(&build_rate_operator(&occ, params, sq))?;
    let flux = steady_flux(&state, &occ, params, sq);
    Ok(OperatingPoint { occ, state, flux })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxReport<T> {
    pub j: T,
    /// Same squeezing, coherences off.
    pub j_o: T,
    /// No squeezing, coherences off.
    pub j_o0: T,
    pub ratio_jo: T,
    pub ratio_j00: T,
}

pub fn flux_report<T: Scalar>(
    params: &EngineParameters<T>,
    sq: &SqueezeSet<T>,
) -> Result<FluxReport<T>> {
    let j = solve(params, sq)?.flux;
    let j_o = solve(params, &sq.incoherent())?.flux;
    let j_o0 = solve(params, &SqueezeSet::default())?.flux;
    Ok(FluxReport {
        j,
        j_o,
        j_o0,
        ratio_jo: j / j_o,
        ratio_j00: j / j_o0,
    })
}

/// Generalized detailed-balance ratio `ζ`; `ln ζ` is the affinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affinity<T> {
    pub zeta: T,
    /// Set when `N_c` or `N_ℓ` vanishes and `ζ` is reported as `+∞`.
    pub divergent: bool,
}

impl<T: Scalar> Affinity<T> {
    pub fn log(&self) -> T {
        self.zeta.ln()
    }
}

/// `ζ = Ñ_c Ñ_ℓ N_h / (N_c Ñ_h N_ℓ)`.
pub fn affinity<T: Scalar>(occ: &OccupationSet<T>) -> Affinity<T> {
    let den = occ.cold * occ.hot_tilde() * occ.cavity;
    if den == T::zero() {
        return Affinity {
            zeta: T::infinity(),
            divergent: true,
        };
    }
    Affinity {
        zeta: occ.cold_tilde() * occ.cavity_tilde() * occ.hot / den,
        divergent: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkReport<T> {
    pub w: T,
    pub wdiss: T,
    pub qh: T,
    pub eta: T,
    pub power: T,
}

/// `W_diss = ln(Ñ_ℓ/N_ℓ)`, computed as `ln(1 + 1/N_ℓ)`.
pub fn dissipation<T: Scalar>(occ: &OccupationSet<T>) -> Result<T> {
    if !(occ.cavity > T::zero()) {
        return Err(Error::domain(
            "dissipation",
            format!("cavity occupation must be > 0, got {}", occ.cavity),
        ));
    }
    Ok(occ.cavity.recip().ln_1p())
}

/// Work per emitted quantum `W = Ea − Eb − T_c W_diss` and the power `j·W`.
pub fn useful_work<T: Scalar>(
    params: &EngineParameters<T>,
    occ: &OccupationSet<T>,
    flux: T,
) -> Result<WorkReport<T>> {
    let wdiss = dissipation(occ)?;
    let w = params.ea - params.eb - wdiss * params.tc;
    let qh = params.heat_input();
    Ok(WorkReport {
        w,
        wdiss,
        qh,
        eta: w / qh,
        power: flux * w,
    })
}

/// Cavity squeeze `x*` at which `ζ` crosses one and the flux reverses.
///
/// Returns `None` when `N_h = N_c` or when the `arccosh` argument lies in
/// `(−1, 1)`, where its real part vanishes. A genuine crossing needs a
/// positive argument (`N_c > N_h`); for arguments `≤ −1` the real part of the
/// principal branch is still returned, but `ζ > 1` for every `x` there.
pub fn sign_change_point<T: Scalar>(occ: &OccupationSet<T>) -> Option<T> {
    let arg = sign_change_argument(occ)?;
    if arg.abs() < T::one() || !arg.is_finite() {
        return None;
    }
    Some(T::lit(0.5) * arg.abs().acosh())
}

/// Argument of the `arccosh` that defines `x*`.
pub fn sign_change_argument<T: Scalar>(occ: &OccupationSet<T>) -> Option<T> {
    let bias = occ.cold - occ.hot;
    if bias == T::zero() {
        return None;
    }
    let num = occ.cold_tilde() * occ.hot + occ.cold * occ.hot_tilde();
    Some(num / ((T::lit(2.0) * occ.bare_cavity + T::one()) * bias))
}
