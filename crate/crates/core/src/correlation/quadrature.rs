//! Azimuthal quadrature for the average correlation of a general singular
//! triple.
//!
//! After the polar integral is done in closed form, the average correlation of
//! a sorted triple `(alpha, beta, gamma)` reduces to
//!
//! ```text
//! Sigma = alpha/4 * [1 + mean_phi g(f(phi))]
//! f(phi) = (beta/alpha)^2 sin^2 phi + (gamma/alpha)^2 cos^2 phi
//! g(f)   = f / sqrt(1 - f) * arsinh(sqrt((1 - f) / f))
//! ```
//!
//! with `g(0) = 0` and `g(1) = 1` as removable limits. The integrand is
//! periodic and even about `0` and `pi/2`, so the composite trapezoid rule on a
//! quarter period equals the equally-spaced rule on the full period.

use super::SingularTriple;

/// Full-period node count of the first estimate.
pub const INITIAL_NODES: usize = 512;
/// Doubling stops once successive estimates of `Sigma` agree to this relative tolerance.
pub const RELATIVE_TOLERANCE: f64 = 1e-10;
/// Full-period node cap.
pub const MAX_NODES: usize = 1 << 24;

const SERIES_CUTOFF: f64 = 1e-4;

/// `arsinh(k) / k`, continuous through `k = 0`.
pub(crate) fn arsinh_ratio(k: f64) -> f64 {
    if k < SERIES_CUTOFF {
        let k2 = k * k;
        1.0 - k2 / 6.0 + 3.0 * k2 * k2 / 40.0
    } else {
        k.asinh() / k
    }
}

/// `g` evaluated from `f` and `1 - f` supplied separately, so that callers can
/// form `1 - f` without cancellation.
///
/// Since `f / sqrt(1 - f) = sqrt(f) / k` with `k = sqrt((1 - f) / f)`, this is
/// `sqrt(f) * arsinh(k) / k`.
pub(crate) fn g_parts(f: f64, one_minus_f: f64) -> f64 {
    if f <= 0.0 {
        return 0.0;
    }
    if one_minus_f <= 0.0 {
        return 1.0;
    }
    f.sqrt() * arsinh_ratio((one_minus_f / f).sqrt())
}

/// The azimuthal integrand `g(f(phi))` for a triple with `alpha > 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Integrand {
    beta2: f64,
    gamma2: f64,
    beta_gap: f64,
    gamma_gap: f64,
}

impl Integrand {
    pub(crate) fn new(s: &SingularTriple) -> Self {
        let a = s.alpha;
        let a2 = a * a;
        Self {
            beta2: (s.beta / a).powi(2),
            gamma2: (s.gamma_sv / a).powi(2),
            beta_gap: (a - s.beta) * (a + s.beta) / a2,
            gamma_gap: (a - s.gamma_sv) * (a + s.gamma_sv) / a2,
        }
    }

    pub(crate) fn f(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        self.beta2 * s * s + self.gamma2 * c * c
    }

    pub(crate) fn eval(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let (s2, c2) = (s * s, c * c);
        g_parts(self.beta2 * s2 + self.gamma2 * c2, self.beta_gap * s2 + self.gamma_gap * c2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PeriodicMean {
    /// Mean of `g` over a full period.
    pub mean: f64,
    /// `|last - previous|` of the mean at termination.
    pub change: f64,
    /// Full-period equivalent node count of the final estimate.
    pub nodes: usize,
}

/// Mean of the integrand over `[0, 2 pi)` by trapezoid doubling on `[0, pi/2]`.
pub(crate) fn periodic_mean(integrand: &Integrand) -> PeriodicMean {
    let quarter = std::f64::consts::FRAC_PI_2;
    let mut intervals = INITIAL_NODES / 4;
    let h = quarter / intervals as f64;
    let mut sum = 0.5 * (integrand.eval(0.0) + integrand.eval(quarter))
        + (1..intervals).map(|j| integrand.eval(j as f64 * h)).sum::<f64>();
    let mut mean = sum / intervals as f64;

    loop {
        let h = quarter / intervals as f64;
        sum += (0..intervals)
            .map(|j| integrand.eval((j as f64 + 0.5) * h))
            .sum::<f64>();
        intervals *= 2;
        let refined = sum / intervals as f64;
        let change = (refined - mean).abs();
        mean = refined;
        if change <= RELATIVE_TOLERANCE * (1.0 + mean) || 4 * intervals >= MAX_NODES {
            return PeriodicMean {
                mean,
                change,
                nodes: 4 * intervals,
            };
        }
    }
}
