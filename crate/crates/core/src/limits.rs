//! Closed-form fluxes and populations in the strong-squeezing and high-bias
//! limits. These are independent of the linear solve and serve as oracles for
//! it.

use crate::error::{Error, Result};
use crate::model::{EngineParameters, OccupationSet, SqueezeSet};
use crate::scalar::Scalar;

/// Occupations, coherences and rates entering the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitInputs<T> {
    pub nh: T,
    pub nc: T,
    pub nl: T,
    pub ph: T,
    pub pc: T,
    pub r: T,
    pub g: T,
    pub tau: T,
}

impl<T: Scalar> LimitInputs<T> {
    pub fn new(occ: &OccupationSet<T>, params: &EngineParameters<T>, sq: &SqueezeSet<T>) -> Self {
        Self {
            nh: occ.hot,
            nc: occ.cold,
            nl: occ.cavity,
            ph: sq.ph,
            pc: sq.pc,
            r: params.r,
            g: params.g,
            tau: params.tau,
        }
    }

    fn n(&self) -> T {
        self.nh + self.nc
    }
}

/// Strong cavity squeezing, no coherence: `r(N_h − N_c) / (2(n + 1))`.
pub fn flux_xinf_jo<T: Scalar>(inp: &LimitInputs<T>) -> T {
    inp.r * (inp.nh - inp.nc) / (T::lit(2.0) * (inp.n() + T::one()))
}

/// `f_n = 4 N_c N_h + N_c + N_h(2 N_h(1 + p_h) + p_h + 2)`.
///
/// This is the form consistent with the rate equations and with the two
/// ratio laws [`flux_ratio_xinf`] and [`flux_ratio_nobias`].
pub fn f_n<T: Scalar>(nh: T, nc: T, ph: T) -> T {
    let two = T::lit(2.0);
    T::lit(4.0) * nc * nh + nc + nh * (two * nh * (T::one() + ph) + ph + two)
}

/// Strong cavity squeezing with `p_c = 1`:
/// `r(N_h − N_c)(N_h(1 − p_h²) + τ) / ((1 − p_h) f_n + 2τ(n + 1))`.
///
/// At `p_h = 1`, `τ = 0` both numerator and denominator vanish; the value
/// returned there is the `p_h → 1` limit `2 r N_h (N_h − N_c) / f_n(1)`.
pub fn flux_xinf_pc1<T: Scalar>(inp: &LimitInputs<T>) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let bias = inp.nh - inp.nc;
    let den = (one - inp.ph) * f_n(inp.nh, inp.nc, inp.ph) + two * inp.tau * (inp.n() + one);
    if den == T::zero() {
        return two * inp.r * inp.nh * bias / f_n(inp.nh, inp.nc, one);
    }
    inp.r * bias * (inp.nh * (one - inp.ph * inp.ph) + inp.tau) / den
}

/// Ratio of [`flux_xinf_pc1`] to [`flux_xinf_jo`] at `τ = 0`, `N_h = z N_c`.
pub fn flux_ratio_xinf<T: Scalar>(z: T, nc: T, ph: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let num = two * z * (ph + one) * (nc * z + nc + one);
    let den = two * nc * (ph + one) * z * z + z * (T::lit(4.0) * nc + ph + two) + one;
    num / den
}

/// The unbiased (`N_h = N_c`) ratio `2(1 + p_h)/(3 + p_h)`.
pub fn flux_ratio_nobias<T: Scalar>(ph: T) -> T {
    T::lit(2.0) * (T::one() + ph) / (T::lit(3.0) + ph)
}

/// Hot coherence maximizing the flux under strong bias and squeezing:
///
/// ```text
/// p_h* = (2N_c(p_c² + 1) + 1 − √((1 − p_c²)(4N_c²(1 − p_c²) + 4N_c + 1))) / ((4N_c + 1) p_c)
/// ```
///
/// The root with the minus sign is the one that lies in `[0, 1]`; it equals
/// one at `p_c = 1` and reduces to [`ph_star_cold_limit`] at `N_c = 0`.
pub fn ph_star_biased<T: Scalar>(nc: T, pc: T) -> Result<T> {
    if !(pc > T::zero() && pc <= T::one()) {
        return Err(Error::domain(
            "ph_star_biased",
            format!("need 0 < pc <= 1, got {pc}"),
        ));
    }
    if pc == T::one() {
        return Ok(T::one());
    }
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let s = one - pc * pc;
    let root = (s * (four * nc * nc * s + four * nc + one)).sqrt();
    Ok((two * nc * (pc * pc + one) + one - root) / ((four * nc + one) * pc))
}

/// `(1 − √(1 − p_c²))/p_c`, the `T_c → 0` form of [`ph_star_biased`].
pub fn ph_star_cold_limit<T: Scalar>(pc: T) -> Result<T> {
    if !(pc > T::zero() && pc <= T::one()) {
        return Err(Error::domain(
            "ph_star_cold_limit",
            format!("need 0 < pc <= 1, got {pc}"),
        ));
    }
    Ok((T::one() - (T::one() - pc * pc).sqrt()) / pc)
}

fn highbias_den<T: Scalar>(inp: &LimitInputs<T>) -> T {
    let g2 = inp.g * inp.g;
    let p2 = inp.ph * inp.ph;
    g2 * (T::lit(4.0) * inp.nl + p2 + T::one()) - T::lit(2.0) * (p2 - T::lit(3.0)) * inp.r
}

/// Upper-level populations `(ρaa, ρbb)` for `T_h ≫ T_c`.
pub fn highbias_populations<T: Scalar>(inp: &LimitInputs<T>) -> (T, T) {
    let g2 = inp.g * inp.g;
    let w = inp.ph * inp.ph + T::one();
    let d = highbias_den(inp);
    (
        w * (g2 * inp.nl + T::lit(2.0) * inp.r) / d,
        g2 * (inp.nl + T::one()) * w / d,
    )
}

/// `2 g² r Ñ_ℓ (1 + p_h²) / (g²(1 + 4N_ℓ + p_h²) − 2r(p_h² − 3))`.
pub fn highbias_flux<T: Scalar>(inp: &LimitInputs<T>) -> T {
    let g2 = inp.g * inp.g;
    T::lit(2.0) * g2 * inp.r * (inp.nl + T::one()) * (T::one() + inp.ph * inp.ph)
        / highbias_den(inp)
}

/// `2 g² Ñ_ℓ r / (g²(1 + 4N_ℓ) + 6r)`, the coherence-free high-bias flux.
pub fn highbias_flux_jo<T: Scalar>(inp: &LimitInputs<T>) -> T {
    let g2 = inp.g * inp.g;
    T::lit(2.0) * g2 * (inp.nl + T::one()) * inp.r
        / (g2 * (T::one() + T::lit(4.0) * inp.nl) + T::lit(6.0) * inp.r)
}

/// High-bias, strong-squeezing flux relative to the classical one:
/// `(1 + p_h²)(1 + (6r − 3g²)/(4g² ñ_ℓ))` with `ñ_ℓ = n_ℓ + 1`.
pub fn highbias_classical_ratio<T: Scalar>(ph: T, r: T, g: T, bare_cavity: T) -> T {
    let g2 = g * g;
    (T::one() + ph * ph)
        * (T::one()
            + (T::lit(6.0) * r - T::lit(3.0) * g2) / (T::lit(4.0) * g2 * (bare_cavity + T::one())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inputs(nh: f64, nc: f64, nl: f64, ph: f64, tau: f64) -> LimitInputs<f64> {
        LimitInputs {
            nh,
            nc,
            nl,
            ph,
            pc: 1.0,
            r: 0.7,
            g: 1.0,
            tau,
        }
    }

    #[test]
    fn jo_substitutions() {
        assert_eq!(flux_xinf_jo(&inputs(0.8, 0.8, 1.0, 0.0, 0.5)), 0.0);
        let i = LimitInputs {
            r: 1.0,
            ..inputs(2.0, 1.0, 1.0, 0.0, 0.0)
        };
        assert!((flux_xinf_jo(&i) - 0.125).abs() < 1e-16);
    }

    #[test]
    fn pc1_at_zero_coherence() {
        let i = inputs(1.7, 0.4, 3.0, 0.0, 0.0);
        let expect = 0.7 * (1.7 - 0.4) * 1.7 / f_n(1.7, 0.4, 0.0);
        assert!((flux_xinf_pc1(&i) - expect).abs() < 1e-15);
    }

    #[test]
    fn pc1_continuity_at_full_coherence() {
        let at = flux_xinf_pc1(&inputs(1.7, 0.4, 3.0, 1.0, 0.0));
        let near = flux_xinf_pc1(&inputs(1.7, 0.4, 3.0, 1.0 - 1e-7, 0.0));
        assert!((at - near).abs() < 1e-6 * at.abs());
    }

    #[test]
    fn nobias_bounds() {
        assert_eq!(flux_ratio_nobias(1.0f64), 1.0);
        assert!((flux_ratio_nobias(0.0f64) - 2.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn ph_star_values() {
        assert_eq!(ph_star_biased(0.7f64, 1.0).unwrap(), 1.0);
        assert!((ph_star_biased(0.0f64, 0.6).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((ph_star_cold_limit(0.6f64).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(ph_star_biased(0.3f64, 0.0).is_err());
        assert!(ph_star_cold_limit(0.0f64).is_err());
        // continuous approach to one
        assert!((ph_star_biased(0.7f64, 1.0 - 1e-9).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn highbias_at_zero_coherence() {
        let i = inputs(1e6, 0.0, 1e3, 0.0, 0.5);
        assert_eq!(highbias_flux(&i), highbias_flux_jo(&i));
        let (aa, _) = highbias_populations(&i);
        let approx = 1e3 / (4e3 + 1.0 + 4.2);
        assert!((aa - approx).abs() < 1e-3);
    }

    #[test]
    fn highbias_flux_matches_populations() {
        let i = LimitInputs {
            g: 1.3,
            ..inputs(1e6, 0.0, 2.5, 0.6, 0.5)
        };
        let (aa, bb) = highbias_populations(&i);
        let j = i.g * i.g * ((i.nl + 1.0) * aa - i.nl * bb);
        assert!((j - highbias_flux(&i)).abs() < 1e-14);
    }

    #[test]
    fn highbias_squeezed_ratio() {
        for ph in [0.0, 0.3, 1.0] {
            let i = inputs(1e6, 0.0, 1e12, ph, 0.5);
            let ratio = highbias_flux(&i) / highbias_flux_jo(&i);
            assert!((ratio - (1.0 + ph * ph)).abs() < 1e-9);
        }
        assert!(highbias_classical_ratio(0.5, 0.7, 1.0, 0.4) >= 1.0);
    }

    proptest! {
        #[test]
        fn xinf_ratio_law(nc in 0.01f64..5.0, z in 1u32..6, ph in 0.0f64..0.999) {
            let zf = f64::from(z);
            let i = inputs(zf * nc, nc, 1.0, ph, 0.0);
            let direct = flux_xinf_pc1(&i) / flux_xinf_jo(&i);
            prop_assume!(z > 1);
            prop_assert!((direct - flux_ratio_xinf(zf, nc, ph)).abs() < 1e-12 * direct.abs().max(1.0));
        }

        // under weak bias the ratio is close to linear at small ph
        #[test]
        fn ratio_law_nearly_linear_in_ph(z in 1.0f64..1.3, nc in 0.01f64..5.0) {
            let ph: Vec<f64> = (0..31).map(|k| 0.01 * f64::from(k)).collect();
            let y: Vec<f64> = ph.iter().map(|&p| flux_ratio_xinf(z, nc, p)).collect();
            let n = ph.len() as f64;
            let (mx, my) = (ph.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
            let sxy: f64 = ph.iter().zip(&y).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = ph.iter().map(|x| (x - mx).powi(2)).sum();
            let syy: f64 = y.iter().map(|y| (y - my).powi(2)).sum();
            let r2 = sxy * sxy / (sxx * syy);
            prop_assert!(r2 > 0.999, "R^2 = {}", r2);
        }

        #[test]
        fn nobias_is_ratio_law_at_unity(nc in 0.01f64..5.0, ph in 0.0f64..=1.0) {
            let r = flux_ratio_xinf(1.0, nc, ph);
            prop_assert!((r - flux_ratio_nobias(ph)).abs() < 1e-13);
            prop_assert!(r <= 1.0 + 1e-15);
        }

        #[test]
        fn highbias_ratio_bounds(ph in 0.0f64..=1.0) {
            let i = inputs(1e6, 0.0, 1e12, ph, 0.5);
            let ratio = highbias_flux(&i) / highbias_flux_jo(&i);
            prop_assert!((1.0 - 1e-12..=2.0 + 1e-12).contains(&ratio));
        }

        #[test]
        fn ph_star_in_unit_interval(nc in 0.0f64..10.0, pc in 0.01f64..=1.0) {
            let p = ph_star_biased(nc, pc).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p), "{}", p);
        }
    }
}
