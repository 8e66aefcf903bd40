//! Complex hyperspherical coordinates for unit vectors.
//!
//! Any complex unit vector `c` of dimension `N ≥ 2` can be written, up to a
//! global phase, as
//!
//! ```text
//! c_1 = cos(theta_1)
//! c_n = e^{i phi_{n-1}} sin(theta_1)...sin(theta_{n-1}) cos(theta_n),  1 < n < N
//! c_N = e^{i phi_{N-1}} sin(theta_1)...sin(theta_{N-1})
//! ```
//!
//! with `theta_n` in `[0, pi/2]` and `phi_n` in `(-pi, pi]`. The global
//! phase is deliberately not stored; the forward map fixes the first
//! component real and nonnegative.

use crate::error::{Error, Result};
use crate::numerics::ComplexVector;
use crate::scalar::{wrap_angle, Scalar, C};

/// Amplitudes below this running-product threshold are treated as exactly
/// zero; the remaining coordinates on that branch are not determined by the
/// vector and are canonicalized to zero.
const DEGENERATE_EPS: f64 = 1e-12;

/// The `(theta, phi)` angle pair of a unit vector of dimension `N`; both
/// vectors have length `N - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersphericalCoords<T> {
    theta: Vec<T>,
    phi: Vec<T>,
}

impl<T: Scalar> HypersphericalCoords<T> {
    /// Builds coordinates, clamping `theta` into `[0, pi/2]` and wrapping
    /// `phi` into `(-pi, pi]`.
    pub fn new(theta: Vec<T>, phi: Vec<T>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::DimensionTooSmall { dim: 1, min: 2 });
        }
        if theta.len() != phi.len() {
            return Err(Error::DimMismatch {
                left: theta.len() + 1,
                right: phi.len() + 1,
            });
        }
        let half_pi = T::FRAC_PI_2();
        let theta = theta
            .into_iter()
            .map(|t| t.max(T::zero()).min(half_pi))
            .collect();
        let phi = phi.into_iter().map(wrap_angle).collect();
        Ok(Self { theta, phi })
    }

    pub fn dim(&self) -> usize {
        self.theta.len() + 1
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    /// Largest angle difference against `other`, for round-trip checks.
    pub fn max_angle_distance(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim());
        let t = self
            .theta
            .iter()
            .zip(&other.theta)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max);
        let p = self
            .phi
            .iter()
            .zip(&other.phi)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max);
        t.max(p)
    }
}

/// Computes the hyperspherical coordinates of a unit vector.
///
/// The input is renormalized and its first component's phase removed, so the
/// coordinates represent `e^{-i arg(c_1)} c / ‖c‖`. `arg(0)` is taken as 0.
/// Once the running sine product underflows, the remaining amplitudes are
/// necessarily zero and the remaining angles are canonicalized to zero.
pub fn to_hyperspherical<T: Scalar>(c: &ComplexVector<T>) -> Result<HypersphericalCoords<T>> {
    let n = c.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall { dim: n, min: 2 });
    }
    c.check_unit(T::real(1e-10))?;
    let c = c.normalized();

    let lead = c.entries()[0];
    let lead_phase = if lead.norm() == T::zero() {
        C::new(T::one(), T::zero())
    } else {
        C::from_polar(T::one(), -lead.arg())
    };

    let mut phi: Vec<T> = c.entries()[1..]
        .iter()
        .map(|e| {
            let rotated = e * lead_phase;
            if rotated.norm() == T::zero() {
                T::zero()
            } else {
                wrap_angle(rotated.arg())
            }
        })
        .collect();

    let amps: Vec<T> = c.entries().iter().map(|e| e.norm()).collect();
    // The running sine product s_(n-1) equals the amplitude mass from level
    // n onward; recovering each angle from the tail mass via atan2 avoids
    // compounding error through the recursion and needs no clamping.
    let mut tail = vec![T::zero(); n + 1];
    for m in (0..n).rev() {
        tail[m] = tail[m + 1] + amps[m] * amps[m];
    }
    let mut theta = vec![T::zero(); n - 1];
    let degenerate = T::real(DEGENERATE_EPS);
    for k in 0..n - 1 {
        let sine_product = tail[k].sqrt();
        if k > 0 && sine_product < degenerate {
            for j in k..n - 1 {
                theta[j] = T::zero();
                phi[j] = T::zero();
            }
            break;
        }
        theta[k] = tail[k + 1].sqrt().atan2(amps[k]);
    }

    HypersphericalCoords::new(theta, phi)
}

/// Evaluates the coordinate map back into a unit vector with zero global
/// phase; the first component is real and nonnegative.
pub fn from_hyperspherical<T: Scalar>(h: &HypersphericalCoords<T>) -> ComplexVector<T> {
    let n = h.dim();
    let mut out = ComplexVector::zeros(n);
    out.entries_mut()[0] = C::new(h.theta[0].cos(), T::zero());
    let mut sine_product = T::one();
    for k in 1..n {
        sine_product *= h.theta[k - 1].sin();
        let radial = if k == n - 1 {
            sine_product
        } else {
            sine_product * h.theta[k].cos()
        };
        out.entries_mut()[k] = C::from_polar(radial, h.phi[k - 1]);
    }
    out
}
