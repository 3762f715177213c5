//! Single-qubit damping channels in Kraus form, applied identically and
//! independently to both qubits.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_unit_interval, Error, Result};
use crate::qstate::{tensor2, DensityMatrix4, Matrix2c, Matrix4c};

/// Maximum entry of `sum_i K_i^dagger K_i - I` accepted for a channel.
pub const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    PhaseDamping,
    AmplitudeDamping,
}

impl ChannelKind {
    pub fn with_probability(self, p: f64) -> Result<KrausChannel> {
        match self {
            ChannelKind::PhaseDamping => phase_damping(p),
            ChannelKind::AmplitudeDamping => amplitude_damping(p),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::PhaseDamping => "phase_damping",
            ChannelKind::AmplitudeDamping => "amplitude_damping",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "phase" | "phase_damping" => Ok(ChannelKind::PhaseDamping),
            "amplitude" | "amplitude_damping" => Ok(ChannelKind::AmplitudeDamping),
            other => Err(format!("unknown channel `{other}` (expected phase or amplitude)")),
        }
    }
}

/// An ordered Kraus set for one qubit, together with the family and damping
/// probability it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kind: ChannelKind,
    p: f64,
    operators: Vec<Matrix2c>,
}

impl KrausChannel {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn probability(&self) -> f64 {
        self.p
    }

    pub fn operators(&self) -> &[Matrix2c] {
        &self.operators
    }

    /// Largest entry of `|sum_i K_i^dagger K_i - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(Matrix2c::zeros(), |acc, k| acc + k.adjoint() * k);
        (sum - Matrix2c::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Applies the channel to a single-qubit density matrix.
    pub fn apply_single(&self, rho: &Matrix2c) -> Matrix2c {
        self.operators
            .iter()
            .fold(Matrix2c::zeros(), |acc, k| acc + k * rho * k.adjoint())
    }
}

fn diag(a: f64, b: f64) -> Matrix2c {
    Matrix2c::new(a.into(), 0.0.into(), 0.0.into(), b.into())
}

/// Phase damping: `K0 = diag(1, sqrt(1-p))`, `K1 = diag(0, sqrt(p))`.
pub fn phase_damping(p: f64) -> Result<KrausChannel> {
    let p = check_unit_interval("p", p)?;
    Ok(KrausChannel {
        kind: ChannelKind::PhaseDamping,
        p,
        operators: vec![diag(1.0, (1.0 - p).sqrt()), diag(0.0, p.sqrt())],
    })
}

/// Amplitude damping: `K0 = diag(1, sqrt(1-p))`, `K1 = sqrt(p) |0><1|`.
pub fn amplitude_damping(p: f64) -> Result<KrausChannel> {
    let p = check_unit_interval("p", p)?;
    let zero = Complex64::from(0.0);
    let decay = Matrix2c::new(zero, p.sqrt().into(), zero, zero);
    Ok(KrausChannel {
        kind: ChannelKind::AmplitudeDamping,
        p,
        operators: vec![diag(1.0, (1.0 - p).sqrt()), decay],
    })
}

/// `rho' = sum_{i,j} (A_i ⊗ B_j) rho (A_i ⊗ B_j)^dagger`.
pub fn apply_local_channel(
    rho: &DensityMatrix4,
    on_a: &KrausChannel,
    on_b: &KrausChannel,
) -> DensityMatrix4 {
    let mut out = Matrix4c::zeros();
    for ka in on_a.operators() {
        for kb in on_b.operators() {
            let k = tensor2(ka, kb);
            out += k * rho.matrix() * k.adjoint();
        }
    }
    // The sandwich is trace preserving only up to rounding (sqrt(p)^2 +
    // sqrt(1-p)^2 != 1 in floating point); remove that drift and the ~1e-17
    // anti-Hermitian part.
    let trace = out.trace().re;
    let out = (out + out.adjoint()) * Complex64::from(0.5 / trace);
    DensityMatrix4::new_unchecked(out)
}

/// Damping probability `p(t) = 1 - exp(-gamma t)`.
pub fn p_of_t(gamma: f64, t: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
            range: "[0, inf)",
        });
    }
    if !(t >= 0.0) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            range: "[0, inf)",
        });
    }
    Ok(-(-gamma * t).exp_m1())
}

/// A decoherence rate, mapping elapsed time to damping probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampingSchedule {
    gamma: f64,
}

impl DampingSchedule {
    pub fn new(gamma: f64) -> Result<Self> {
        p_of_t(gamma, 0.0)?;
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn probability_at(&self, t: f64) -> Result<f64> {
        p_of_t(self.gamma, t)
    }
}
