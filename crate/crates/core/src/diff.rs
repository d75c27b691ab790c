//! Finite-difference derivatives in a flow parameter, used as oracles for
//! closed-form generators.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Central difference `(e(h) - e(-h)) / 2h` of a vector-valued map.
pub fn central_difference<F>(h: f64, eval: &mut F) -> Result<Vec<Complex64>>
where
    F: FnMut(f64) -> Result<Vec<Complex64>>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter("difference step must be positive"));
    }
    let fwd = eval(h)?;
    let bwd = eval(-h)?;
    if fwd.len() != bwd.len() {
        return Err(Error::Shape("evaluations differ in length"));
    }
    let scale = 1.0 / (2.0 * h);
    Ok(fwd.iter().zip(&bwd).map(|(a, b)| (a - b) * scale).collect())
}

/// Richardson-extrapolated central difference at 0:
/// `(4 D_{h/2} - D_h) / 3`, fourth order in `h`.
pub fn richardson<F>(h: f64, mut eval: F) -> Result<Vec<Complex64>>
where
    F: FnMut(f64) -> Result<Vec<Complex64>>,
{
    let coarse = central_difference(h, &mut eval)?;
    let fine = central_difference(h / 2.0, &mut eval)?;
    Ok(fine.iter().zip(&coarse).map(|(f, c)| (f * 4.0 - c) / 3.0).collect())
}

/// Scalar version of [`richardson`].
pub fn richardson_scalar<F>(h: f64, mut eval: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let v = richardson(h, |t| eval(t).map(|y| alloc::vec![Complex64::new(y, 0.0)]))?;
    Ok(v[0].re)
}
