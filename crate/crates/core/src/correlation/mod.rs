//! Correlation matrix, its singular values, the rotation-averaged correlation
//! `Sigma` and the threshold classification.
//!
//! `Sigma` is the mean of `|aᵀ K b|` over independent uniformly random unit
//! vectors `a` and `b`. It depends on `K` only through its singular values, and
//! three routes are provided:
//!
//! * [`sigma_closed_pure`]: exact, for triples of the form `(alpha, beta, beta)`;
//! * [`sigma_quadrature`]: any triple, a one-dimensional periodic integral;
//! * [`sigma_monte_carlo`]: sampling the definition directly, as an oracle.

mod monte_carlo;
mod quadrature;
mod svd;

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{tensor2, DensityMatrix4, Pauli};

pub use monte_carlo::{unit_vector, GENERATOR, SHARD_SIZE};
pub use quadrature::{INITIAL_NODES, MAX_NODES, RELATIVE_TOLERANCE};
pub use svd::{svd3, Svd3};

/// `Sigma` at or below this value is compatible with a classical state.
pub const CLASSICAL_BOUND: f64 = 0.25;
/// `Sigma` above `1/(2 sqrt 2)` is attained only by nonclassical states.
pub const NONCLASSICAL_BOUND: f64 = std::f64::consts::FRAC_1_SQRT_2 / 2.0;

/// Imaginary part of a Pauli expectation tolerated before it is reported as an error.
pub const IMAGINARY_TOL: f64 = 1e-9;
/// Two singular values closer than this are treated as degenerate by [`sigma_for_state`].
pub const DEGENERACY_TOL: f64 = 1e-9;

/// The 3x3 real matrix `K_ij = tr(rho sigma_i ⊗ sigma_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix3(Matrix3<f64>);

impl CorrelationMatrix3 {
    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    pub fn from_diagonal(d: [f64; 3]) -> Self {
        Self(Matrix3::from_diagonal(&d.into()))
    }

    pub fn zeros() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// `E(a, b) = aᵀ K b`.
    pub fn correlation(&self, a: &nalgebra::Vector3<f64>, b: &nalgebra::Vector3<f64>) -> f64 {
        a.dot(&(self.0 * b))
    }

    pub fn svd(&self) -> Svd3 {
        svd3(&self.0)
    }
}

impl std::ops::Neg for CorrelationMatrix3 {
    type Output = Self;

    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Builds `K` from a two-qubit state. Each trace is checked to be real.
pub fn correlation_matrix(rho: &DensityMatrix4) -> Result<CorrelationMatrix3> {
    let mut k = Matrix3::zeros();
    for (i, a) in Pauli::ALL.iter().enumerate() {
        for (j, b) in Pauli::ALL.iter().enumerate() {
            let value = rho.expectation(&tensor2(&a.matrix(), &b.matrix()));
            if value.im.abs() > IMAGINARY_TOL {
                return Err(Error::ImaginaryResidual {
                    i: a.index(),
                    j: b.index(),
                    residual: value.im.abs(),
                });
            }
            k[(i, j)] = value.re;
        }
    }
    Ok(CorrelationMatrix3(k))
}

/// Singular values of `K` sorted descending: `alpha >= beta >= gamma_sv >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_sv: f64,
}

impl SingularTriple {
    /// Sorts the magnitudes of three values into a triple.
    pub fn from_unsorted(values: [f64; 3]) -> Self {
        let mut v = values.map(f64::abs);
        v.sort_by(|a, b| b.total_cmp(a));
        Self {
            alpha: v[0],
            beta: v[1],
            gamma_sv: v[2],
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma_sv]
    }
}

pub fn singular_values(k: &CorrelationMatrix3) -> SingularTriple {
    let [alpha, beta, gamma_sv] = k.svd().singular;
    SingularTriple {
        alpha,
        beta,
        gamma_sv,
    }
}

/// `f(phi) = (beta/alpha)^2 sin^2 phi + (gamma_sv/alpha)^2 cos^2 phi`.
pub fn f_phi(s: &SingularTriple, phi: f64) -> Result<f64> {
    if !(s.alpha > 0.0) {
        return Err(Error::Domain {
            name: "alpha",
            value: s.alpha,
            range: "(0, inf)",
        });
    }
    Ok(quadrature::Integrand::new(s).f(phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl SigmaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SigmaMethod::ClosedForm => "closed_form",
            SigmaMethod::Quadrature => "quadrature",
            SigmaMethod::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for SigmaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value of `Sigma` and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaEstimate {
    pub value: f64,
    pub method: SigmaMethod,
    /// Standard error for Monte Carlo, last doubling change for quadrature,
    /// zero for the closed form.
    pub error_bound: f64,
    /// Quadrature nodes or Monte Carlo samples used; zero for the closed form.
    pub evaluations: usize,
}

/// `Sigma` of a sorted singular triple by azimuthal quadrature.
pub fn sigma_quadrature(s: &SingularTriple) -> SigmaEstimate {
    if !(s.alpha > 0.0) {
        return SigmaEstimate {
            value: 0.0,
            method: SigmaMethod::Quadrature,
            error_bound: 0.0,
            evaluations: 0,
        };
    }
    let q = quadrature::periodic_mean(&quadrature::Integrand::new(s));
    SigmaEstimate {
        value: 0.25 * s.alpha * (1.0 + q.mean),
        method: SigmaMethod::Quadrature,
        error_bound: 0.25 * s.alpha * q.change,
        evaluations: q.nodes,
    }
}

/// Closed form of `Sigma` for the triple `(alpha, beta, beta)`:
///
/// ```text
/// Sigma = alpha/4 * [1 + beta^2 / (alpha sqrt(alpha^2 - beta^2)) * arsinh(sqrt((alpha^2 - beta^2) / beta^2))]
/// ```
///
/// which tends to `alpha/2` as `beta -> alpha` and to `alpha/4` as `beta -> 0`.
pub fn sigma_closed_pure(alpha: f64, beta: f64) -> Result<SigmaEstimate> {
    if !(beta >= 0.0) {
        return Err(Error::Domain {
            name: "beta",
            value: beta,
            range: "[0, alpha]",
        });
    }
    if !(alpha >= beta) {
        return Err(Error::Domain {
            name: "alpha - beta",
            value: alpha - beta,
            range: "[0, inf)",
        });
    }
    let value = if beta == 0.0 {
        0.25 * alpha
    } else {
        // beta^2 / (alpha sqrt(d)) * arsinh(sqrt(d) / beta) with d = alpha^2 - beta^2,
        // rewritten as (beta / alpha) * arsinh(x) / x, x = sqrt(d) / beta.
        let x = ((alpha - beta) * (alpha + beta)).sqrt() / beta;
        let ratio = if x < 1e-4 {
            1.0 - x * x / 6.0 + 3.0 * x.powi(4) / 40.0
        } else {
            x.asinh() / x
        };
        0.25 * alpha * (1.0 + beta / alpha * ratio)
    };
    Ok(SigmaEstimate {
        value,
        method: SigmaMethod::ClosedForm,
        error_bound: 0.0,
        evaluations: 0,
    })
}

/// Monte Carlo estimate of `Sigma` straight from its definition. Deterministic
/// for a fixed `(k, samples, seed)`.
pub fn sigma_monte_carlo(k: &CorrelationMatrix3, samples: usize, seed: u64) -> Result<SigmaEstimate> {
    if samples == 0 {
        return Err(Error::Domain {
            name: "samples",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let m = monte_carlo::sample_abs_correlation(k, samples, seed);
    Ok(SigmaEstimate {
        value: m.mean,
        method: SigmaMethod::MonteCarlo,
        error_bound: m.standard_error(),
        evaluations: m.count,
    })
}

/// Which route [`sigma_for_state`] should take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum Method {
    /// Closed form when the two smaller singular values coincide, quadrature otherwise.
    ClosedForm,
    Quadrature,
    MonteCarlo { samples: usize, seed: u64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo { .. } => "mc",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    /// Parses `closed`, `quadrature` or `mc`; Monte Carlo gets 10^6 samples and seed 42.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "closed" | "closed_form" => Ok(Method::ClosedForm),
            "quadrature" => Ok(Method::Quadrature),
            "mc" | "monte_carlo" => Ok(Method::MonteCarlo {
                samples: 1_000_000,
                seed: 42,
            }),
            other => Err(format!("unknown method `{other}` (expected closed, quadrature or mc)")),
        }
    }
}

/// `Sigma` of a correlation matrix whose singular values are already known.
pub fn sigma_for_matrix(k: &CorrelationMatrix3, s: &SingularTriple, method: Method) -> Result<SigmaEstimate> {
    match method {
        Method::ClosedForm if (s.beta - s.gamma_sv).abs() <= DEGENERACY_TOL => {
            sigma_closed_pure(s.alpha, s.beta)
        }
        Method::ClosedForm | Method::Quadrature => Ok(sigma_quadrature(s)),
        Method::MonteCarlo { samples, seed } => sigma_monte_carlo(k, samples, seed),
    }
}

/// State to `Sigma`: correlation matrix, singular values, then the chosen route.
pub fn sigma_for_state(rho: &DensityMatrix4, method: Method) -> Result<SigmaEstimate> {
    let k = correlation_matrix(rho)?;
    sigma_for_matrix(&k, &singular_values(&k), method)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ClassicalCompatible,
    Indeterminate,
    Nonclassical,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::ClassicalCompatible => "classical_compatible",
            Classification::Indeterminate => "indeterminate",
            Classification::Nonclassical => "nonclassical",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `<= 1/4` is classical-compatible, `> 1/(2 sqrt 2)` nonclassical, anything
/// in between indeterminate.
pub fn classify_value(sigma: f64) -> Classification {
    if sigma <= CLASSICAL_BOUND {
        Classification::ClassicalCompatible
    } else if sigma > NONCLASSICAL_BOUND {
        Classification::Nonclassical
    } else {
        Classification::Indeterminate
    }
}

pub fn classify(sigma: &SigmaEstimate) -> Classification {
    classify_value(sigma.value)
}
