//! Decay curves of `Sigma(t)` for a Schmidt pure state under symmetric local
//! damping, one block of rows per decoherence rate.
//!
//! Every row goes through the full pipeline (channel, correlation matrix,
//! singular values, `Sigma`). The correlation matrix is then compared with
//! its known analytic form before the row is accepted.

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{apply_local_channel, p_of_t, ChannelKind};
use crate::correlation::{
    classify, correlation_matrix, sigma_for_matrix, singular_values, Classification, CorrelationMatrix3,
    Method, SigmaEstimate, SingularTriple,
};
use crate::error::{Error, Result};
use crate::qstate::{make_pure_state, SchmidtCoefficient};

/// Tolerance of the built-in analytic check on every row.
pub const ANALYTIC_CHECK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub channel: ChannelKind,
    pub c: SchmidtCoefficient,
    pub gammas: Vec<f64>,
    pub t_max: f64,
    pub steps: usize,
    pub method: Method,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep("steps must be at least 2"));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidSweep("t_max must be positive and finite"));
        }
        if self.gammas.is_empty() {
            return Err(Error::InvalidSweep("at least one gamma is required"));
        }
        if self.gammas.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
            return Err(Error::InvalidSweep("every gamma must be finite and non-negative"));
        }
        if let Method::MonteCarlo { samples: 0, .. } = self.method {
            return Err(Error::InvalidSweep("Monte Carlo needs at least one sample"));
        }
        Ok(())
    }

    /// Uniform time grid `0, ..., t_max` with `steps` points.
    pub fn times(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.t_max } else { self.t_max * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub t: f64,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma_sv: f64,
    pub sigma: f64,
    pub error_bound: f64,
    pub evaluations: usize,
    pub classification: Classification,
}

impl CurveRow {
    pub fn triple(&self) -> SingularTriple {
        SingularTriple {
            alpha: self.alpha,
            beta: self.beta,
            gamma_sv: self.gamma_sv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveBlock {
    pub gamma: f64,
    pub rows: Vec<CurveRow>,
}

impl CurveBlock {
    /// Row with the smallest `Sigma` (first one on ties).
    pub fn min_row(&self) -> &CurveRow {
        self.rows
            .iter()
            .reduce(|best, r| if r.sigma < best.sigma { r } else { best })
            .expect("blocks are never empty")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayCurve {
    pub spec: SweepSpec,
    pub blocks: Vec<CurveBlock>,
}

impl DecayCurve {
    pub fn rows(&self) -> impl Iterator<Item = (f64, &CurveRow)> {
        self.blocks.iter().flat_map(|b| b.rows.iter().map(move |r| (b.gamma, r)))
    }

    /// Largest quadrature node count or sample count used by any row.
    pub fn max_evaluations(&self) -> usize {
        self.rows().map(|(_, r)| r.evaluations).max().unwrap_or(0)
    }
}

pub fn decay_curve(spec: &SweepSpec) -> Result<DecayCurve> {
    spec.validate()?;
    let times = spec.times();
    let blocks = spec
        .gammas
        .par_iter()
        .enumerate()
        .map(|(block, &gamma)| {
            let rows = times
                .iter()
                .enumerate()
                .map(|(row, &t)| curve_row(spec, gamma, t, row_method(spec.method, block, row)))
                .collect::<Result<Vec<_>>>()?;
            Ok(CurveBlock { gamma, rows })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecayCurve {
        spec: spec.clone(),
        blocks,
    })
}

fn curve_row(spec: &SweepSpec, gamma: f64, t: f64, method: Method) -> Result<CurveRow> {
    let p = p_of_t(gamma, t)?;
    let channel = spec.channel.with_probability(p)?;
    let rho = apply_local_channel(&make_pure_state(spec.c), &channel, &channel);
    let k = correlation_matrix(&rho)?;
    let s = singular_values(&k);
    check_analytic(spec.channel, spec.c, p, &k, &s)?;
    let est: SigmaEstimate = sigma_for_matrix(&k, &s, method)?;
    Ok(CurveRow {
        t,
        p,
        alpha: s.alpha,
        beta: s.beta,
        gamma_sv: s.gamma_sv,
        sigma: est.value,
        error_bound: est.error_bound,
        evaluations: est.evaluations,
        classification: classify(&est),
    })
}

/// Damped `K` is `diag(-b, -b, z)` with `b = 2c sqrt(1-c^2)(1-p)` and
/// `z = -1` (phase) or `|z| = |1-2p|` (amplitude).
fn check_analytic(
    kind: ChannelKind,
    c: SchmidtCoefficient,
    p: f64,
    k: &CorrelationMatrix3,
    s: &SingularTriple,
) -> Result<()> {
    let b = c.concurrence() * (1.0 - p);
    let m = k.matrix();
    let off_diagonal = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| m[(i, j)].abs())
        .fold(0.0, f64::max);
    let mismatch = match kind {
        ChannelKind::PhaseDamping => {
            let want = [1.0, b, b];
            s.as_array()
                .iter()
                .zip(want)
                .map(|(got, want)| (got - want).abs())
                .fold(off_diagonal, f64::max)
        }
        ChannelKind::AmplitudeDamping => {
            let want = [b, b, (1.0 - 2.0 * p).abs()];
            (0..3)
                .map(|i| (m[(i, i)].abs() - want[i]).abs())
                .fold(off_diagonal, f64::max)
        }
    };
    if mismatch > ANALYTIC_CHECK_TOL {
        return Err(Error::Consistency {
            p,
            detail: format!("{kind} correlation matrix deviates from its analytic form by {mismatch:e}"),
        });
    }
    Ok(())
}

fn row_method(method: Method, block: usize, row: usize) -> Method {
    match method {
        Method::MonteCarlo { samples, seed } => Method::MonteCarlo {
            samples,
            seed: splitmix64(seed ^ ((block as u64) << 32 | row as u64)),
        },
        other => other,
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The two canned decay datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Figure {
    /// Phase damping.
    One,
    /// Amplitude damping.
    Two,
}

impl TryFrom<u8> for Figure {
    type Error = String;

    fn try_from(n: u8) -> std::result::Result<Self, String> {
        match n {
            1 => Ok(Figure::One),
            2 => Ok(Figure::Two),
            other => Err(format!("unknown figure {other} (expected 1 or 2)")),
        }
    }
}

pub const FIGURE_GAMMAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const FIGURE_T_MAX: f64 = 8.0;
pub const FIGURE_STEPS: usize = 201;

/// `c = 1/sqrt 2`, rates 0.5, 1 and 2, `t` in `[0, 8]` on 201 points, quadrature.
pub fn figure_spec(figure: Figure) -> SweepSpec {
    SweepSpec {
        channel: match figure {
            Figure::One => ChannelKind::PhaseDamping,
            Figure::Two => ChannelKind::AmplitudeDamping,
        },
        c: SchmidtCoefficient::maximal(),
        gammas: FIGURE_GAMMAS.to_vec(),
        t_max: FIGURE_T_MAX,
        steps: FIGURE_STEPS,
        method: Method::Quadrature,
    }
}

pub fn figure_dataset(figure: Figure) -> Result<DecayCurve> {
    decay_curve(&figure_spec(figure))
}
