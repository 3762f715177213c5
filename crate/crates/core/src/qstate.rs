//! Two-qubit states: the Schmidt-form pure state, Pauli operators and
//! Kronecker products.
//!
//! All 4x4 matrices use the product basis `|00>, |01>, |10>, |11>` with qubit
//! A as the left tensor factor, so `tensor2(a, b)` acts as `a` on A and `b` on B.

use std::fmt;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{check_unit_interval, Error, Result};

pub type Matrix2c = Matrix2<Complex64>;
pub type Matrix4c = Matrix4<Complex64>;

/// Maximum entry of `|rho - rho^dagger|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Maximum accepted `|tr(rho) - 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The Schmidt coefficient `c` of `c|01> - sqrt(1 - c^2)|10>`, restricted to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct SchmidtCoefficient(f64);

impl SchmidtCoefficient {
    pub fn new(c: f64) -> Result<Self> {
        check_unit_interval("c", c).map(Self)
    }

    /// `c = 1/sqrt(2)`, the maximally entangled member of the family.
    pub fn maximal() -> Self {
        Self(std::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Weight `1 - c^2` of the `|10>` term; `c^2 + weight() == 1`.
    pub fn weight(self) -> f64 {
        // (1 - c)(1 + c) keeps full precision near c = 1.
        (1.0 - self.0) * (1.0 + self.0)
    }

    /// Magnitude `2 c sqrt(1 - c^2)` of the transverse entries of the correlation matrix.
    pub fn concurrence(self) -> f64 {
        2.0 * self.0 * self.weight().sqrt()
    }
}

/// One of the three Pauli matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Axis index 1, 2 or 3.
    pub fn index(self) -> usize {
        match self {
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn matrix(self) -> Matrix2c {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        match self {
            Pauli::X => Matrix2c::new(z, o, o, z),
            Pauli::Y => Matrix2c::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
            Pauli::Z => Matrix2c::new(o, z, z, -o),
        }
    }
}

/// Kronecker product `a ⊗ b`, `a` acting on qubit A.
pub fn tensor2(a: &Matrix2c, b: &Matrix2c) -> Matrix4c {
    a.kronecker(b)
}

/// Residuals of the three density-matrix conditions for a 4x4 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityReport {
    /// `max |rho - rho^dagger|` over all entries.
    pub hermiticity_residual: f64,
    /// `|tr(rho) - 1|`.
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

impl DensityReport {
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual <= HERMITIAN_TOL
    }

    pub fn has_unit_trace(&self) -> bool {
        self.trace_deviation <= TRACE_TOL
    }

    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= PSD_TOL
    }

    pub fn passes(&self) -> bool {
        self.is_hermitian() && self.has_unit_trace() && self.is_positive()
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity residual {:e}{}, trace deviation {:e}{}, min eigenvalue {:e}{}",
            self.hermiticity_residual,
            if self.is_hermitian() { "" } else { " (FAIL)" },
            self.trace_deviation,
            if self.has_unit_trace() { "" } else { " (FAIL)" },
            self.min_eigenvalue,
            if self.is_positive() { "" } else { " (FAIL)" },
        )
    }
}

/// Checks Hermiticity, unit trace and positivity of `rho`. Never fails; inspect
/// the returned report.
pub fn validate_density(rho: &Matrix4c) -> DensityReport {
    let adjoint = rho.adjoint();
    let hermiticity_residual = (rho - adjoint).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let trace_deviation = (rho.trace() - c(1.0, 0.0)).norm();
    let hermitian_part = (rho + adjoint).scale(0.5);
    let min_eigenvalue = hermitian_part
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    DensityReport {
        hermiticity_residual,
        trace_deviation,
        min_eigenvalue,
    }
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    matrix: Matrix4c,
}

impl DensityMatrix4 {
    /// Wraps `matrix` after checking it is Hermitian, unit-trace and PSD.
    pub fn new(matrix: Matrix4c) -> Result<Self> {
        let report = validate_density(&matrix);
        if report.passes() {
            Ok(Self { matrix })
        } else {
            Err(Error::InvalidDensity(report))
        }
    }

    pub(crate) fn new_unchecked(matrix: Matrix4c) -> Self {
        Self { matrix }
    }

    /// `I/4`.
    pub fn maximally_mixed() -> Self {
        Self::new_unchecked(Matrix4c::identity().scale(0.25))
    }

    /// `|psi><psi|` for an arbitrary normalised state vector.
    pub fn from_pure(psi: &[Complex64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from_column_slice(psi);
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(Error::Domain {
                name: "|psi|",
                value: norm,
                range: "(0, inf)",
            });
        }
        let v = v.unscale(norm);
        Self::new(&v * v.adjoint())
    }

    /// Convex mixture `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        let w = check_unit_interval("mixing weight", w)?;
        Ok(Self::new_unchecked(
            self.matrix.scale(w) + other.matrix.scale(1.0 - w),
        ))
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// `tr(rho O)`.
    pub fn expectation(&self, observable: &Matrix4c) -> Complex64 {
        (self.matrix * observable).trace()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: [f64; 4] = self.matrix.symmetric_eigenvalues().into();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn report(&self) -> DensityReport {
        validate_density(&self.matrix)
    }
}

/// A Haar-random pure state mixed with `I/4` at a uniformly drawn weight.
pub fn random_mixed_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4 {
    let mut psi = [Complex64::from(0.0); 4];
    for z in &mut psi {
        *z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    let pure = DensityMatrix4::from_pure(&psi).expect("a Gaussian vector is nonzero");
    let w: f64 = rng.random();
    DensityMatrix4::new_unchecked(pure.matrix.scale(w) + Matrix4c::identity().scale(0.25 * (1.0 - w)))
}

/// Density matrix of `c|01> - sqrt(1 - c^2)|10>`.
///
/// The only nonzero block sits on `|01>, |10>`: diagonal `(c^2, 1 - c^2)` and
/// off-diagonal `-c sqrt(1 - c^2)`.
pub fn make_pure_state(c: SchmidtCoefficient) -> DensityMatrix4 {
    let a = c.value();
    let weight = c.weight();
    let off = -a * weight.sqrt();
    let mut m = Matrix4c::zeros();
    m[(1, 1)] = Complex64::from(a * a);
    m[(2, 2)] = Complex64::from(weight);
    m[(1, 2)] = Complex64::from(off);
    m[(2, 1)] = Complex64::from(off);
    DensityMatrix4::new_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64) -> Complex64 {
        Complex64::from(re)
    }

    fn max_abs(m: &Matrix4c) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    // Elementwise Kronecker product, written out independently of nalgebra.
    fn kron_loop(a: &Matrix2c, b: &Matrix2c) -> Matrix4c {
        let mut out = Matrix4c::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn schmidt_coefficient_domain() {
        assert!(SchmidtCoefficient::new(-0.01).is_err());
        assert!(SchmidtCoefficient::new(1.01).is_err());
        assert!(SchmidtCoefficient::new(f64::NAN).is_err());
        for &v in &[0.0, 0.3, 1.0] {
            let s = SchmidtCoefficient::new(v).unwrap();
            assert!((v * v + s.weight() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pauli_algebra() {
        let i2 = Matrix2c::identity();
        for p in Pauli::ALL {
            let m = p.matrix();
            assert_eq!(m, m.adjoint());
            assert_eq!(m * m, i2);
            assert_eq!(m.trace(), cx(0.0));
        }
        let (x, y, z) = (Pauli::X.matrix(), Pauli::Y.matrix(), Pauli::Z.matrix());
        let i = Complex64::i();
        assert_eq!(x * y, z.scale(1.0).map(|e| e * i));
        assert_eq!(y * z, x.map(|e| e * i));
        assert_eq!(z * x, y.map(|e| e * i));
    }

    #[test]
    fn tensor2_examples() {
        let i2 = Matrix2c::identity();
        assert_eq!(tensor2(&i2, &i2), Matrix4c::identity());

        let zz = tensor2(&Pauli::Z.matrix(), &Pauli::Z.matrix());
        let expected = Matrix4c::from_diagonal(&nalgebra::Vector4::new(
            cx(1.0),
            cx(-1.0),
            cx(-1.0),
            cx(1.0),
        ));
        assert_eq!(zz, expected);

        // σ1 ⊗ σ2: antidiagonal (−i, i, −i, i) reading rows 0..3.
        let xy = tensor2(&Pauli::X.matrix(), &Pauli::Y.matrix());
        let antidiag = [Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)];
        for row in 0..4 {
            for col in 0..4 {
                let want = if row + col == 3 { antidiag[row % 2] } else { cx(0.0) };
                assert_eq!(xy[(row, col)], want, "entry ({row}, {col})");
            }
        }
        assert_eq!(xy, kron_loop(&Pauli::X.matrix(), &Pauli::Y.matrix()));
    }

    #[test]
    fn pure_state_examples() {
        let rho = make_pure_state(SchmidtCoefficient::maximal());
        for row in 0..4 {
            for col in 0..4 {
                let want = match (row, col) {
                    (1, 1) | (2, 2) => 0.5,
                    (1, 2) | (2, 1) => -0.5,
                    _ => 0.0,
                };
                assert!((rho.entry(row, col) - cx(want)).norm() < 1e-15);
            }
        }

        let rho = make_pure_state(SchmidtCoefficient::new(1.0).unwrap());
        let mut ket01 = Matrix4c::zeros();
        ket01[(1, 1)] = cx(1.0);
        assert_eq!(rho.matrix(), &ket01);

        // Outer product of the state vector as an independent route.
        let c = 0.6_f64;
        let psi = [cx(0.0), cx(c), cx(-(1.0 - c * c).sqrt()), cx(0.0)];
        let outer = DensityMatrix4::from_pure(&psi).unwrap();
        let rho = make_pure_state(SchmidtCoefficient::new(c).unwrap());
        assert!(max_abs(&(rho.matrix() - outer.matrix())) < 1e-15);
        assert!((rho.entry(1, 1).re - 0.36).abs() < 1e-15);
        assert!((rho.entry(2, 2).re - 0.64).abs() < 1e-15);
        assert!((rho.entry(1, 2).re + 0.48).abs() < 1e-15);
    }

    #[test]
    fn pure_state_grid_is_rank_one() {
        let zz = tensor2(&Pauli::Z.matrix(), &Pauli::Z.matrix());
        for k in 0..=100 {
            let c = SchmidtCoefficient::new(k as f64 / 100.0).unwrap();
            let rho = make_pure_state(c);
            assert!(rho.report().passes(), "c = {}", c.value());
            assert!((rho.purity() - 1.0).abs() < 1e-12);
            let ev = rho.eigenvalues();
            for (got, want) in ev.iter().zip([0.0, 0.0, 0.0, 1.0]) {
                assert!((got - want).abs() < 1e-10, "c = {}: {ev:?}", c.value());
            }
            assert!((rho.expectation(&zz) - cx(-1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn validate_density_examples() {
        let rho = make_pure_state(SchmidtCoefficient::new(0.3).unwrap());
        assert!(validate_density(rho.matrix()).passes());

        let mixed = validate_density(DensityMatrix4::maximally_mixed().matrix());
        assert!(mixed.passes());
        assert!((mixed.min_eigenvalue - 0.25).abs() < 1e-14);

        let bad = Matrix4c::from_diagonal(&nalgebra::Vector4::new(
            cx(1.0),
            cx(0.0),
            cx(0.0),
            cx(0.01),
        ));
        let report = validate_density(&bad);
        assert!(!report.passes());
        assert!(!report.has_unit_trace());
        assert!((report.trace_deviation - 0.01).abs() < 1e-15);
        assert!(report.is_hermitian() && report.is_positive());
        assert!(matches!(DensityMatrix4::new(bad), Err(Error::InvalidDensity(_))));
    }

    #[test]
    fn validate_flags_non_hermitian_and_negative() {
        let mut m = Matrix4c::identity().scale(0.25);
        m[(0, 1)] = Complex64::new(0.0, 0.1);
        let r = validate_density(&m);
        assert!(!r.is_hermitian());
        assert!((r.hermiticity_residual - 0.1).abs() < 1e-15);

        let neg = Matrix4c::from_diagonal(&nalgebra::Vector4::new(
            cx(0.6),
            cx(0.6),
            cx(-0.2),
            cx(0.0),
        ));
        let r = validate_density(&neg);
        assert!(!r.is_positive());
        assert!((r.min_eigenvalue + 0.2).abs() < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_m2() -> impl Strategy<Value = Matrix2c> {
            prop::array::uniform8(-1.0..1.0f64).prop_map(|v| {
                Matrix2c::new(
                    Complex64::new(v[0], v[1]),
                    Complex64::new(v[2], v[3]),
                    Complex64::new(v[4], v[5]),
                    Complex64::new(v[6], v[7]),
                )
            })
        }

        proptest! {
            #[test]
            fn mixed_product_rule(a in arb_m2(), b in arb_m2(), c in arb_m2(), d in arb_m2()) {
                let lhs = tensor2(&a, &b) * tensor2(&c, &d);
                let rhs = tensor2(&(a * c), &(b * d));
                prop_assert!(max_abs(&(lhs - rhs)) <= 1e-12);
            }

            #[test]
            fn bilinear(a in arb_m2(), b in arb_m2(), c in arb_m2(), s in -2.0..2.0f64) {
                let lhs = tensor2(&(a + c.scale(s)), &b);
                let rhs = tensor2(&a, &b) + tensor2(&c, &b).scale(s);
                prop_assert!(max_abs(&(lhs - rhs)) <= 1e-12);
                prop_assert_eq!(tensor2(&a, &b), kron_loop(&a, &b));
            }
        }
    }
}
