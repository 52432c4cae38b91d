//! Bounded scalar maximization: a coarse grid scan followed by golden-section
//! refinement of the winning cell.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Outcome of [`maximize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum<T> {
    pub argmax: T,
    pub value: T,
    /// Best grid node before refinement.
    pub grid_argmax: T,
    pub cell_width: T,
    /// Refined and grid maxima are more than one cell apart.
    pub disagreement: bool,
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `tol`; returns the best point seen.
pub fn golden_section<T: Scalar, F>(f: &mut F, mut a: T, mut b: T, tol: T) -> Result<(T, T)>
where
    F: FnMut(T) -> Result<T>,
{
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    // 200 iterations shrink any bracket below f64 resolution
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Maximizes `f` on `[lower, upper]`.
///
/// The grid has `grid_points` equally spaced nodes including both ends; ties
/// go to the smaller abscissa. The two cells around the best node are then
/// refined by golden section, and the better of the refined point and the
/// grid node is returned.
pub fn maximize<T: Scalar, F>(
    mut f: F,
    lower: T,
    upper: T,
    grid_points: usize,
    tol: T,
) -> Result<Maximum<T>>
where
    F: FnMut(T) -> Result<T>,
{
    if !(lower < upper) || grid_points < 2 || !(tol > T::zero()) {
        return Err(Error::InvalidSpec(format!(
            "need lower < upper, >= 2 grid points and tol > 0 (got [{lower}, {upper}], {grid_points}, {tol})"
        )));
    }
    let last = grid_points - 1;
    let width = (upper - lower) / T::lit(last as f64);
    let node = |i: usize| {
        if i == last {
            upper
        } else {
            lower + width * T::lit(i as f64)
        }
    };

    let mut best = (0, f(lower)?);
    for i in 1..grid_points {
        let v = f(node(i))?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let (i, grid_value) = best;
    let grid_argmax = node(i);
    let lo = node(i.saturating_sub(1));
    let hi = node((i + 1).min(last));
    let (x, v) = golden_section(&mut f, lo, hi, tol)?;
    let (argmax, value) = if v > grid_value {
        (x, v)
    } else {
        (grid_argmax, grid_value)
    };
    Ok(Maximum {
        argmax,
        value,
        grid_argmax,
        cell_width: width,
        disagreement: (argmax - grid_argmax).abs() > width,
    })
}
