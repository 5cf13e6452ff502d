//! Two-qubit density matrices and the two-parameter X-state family
//!
//! ```text
//! ρ(r, s) = 1/2 [[2r, 0, 0, 2s], [0, 1-2r, 1-2r, 0],
//!                [0, 1-2r, 1-2r, 0], [2s, 0, 0, 2r]]
//! ```
//!
//! with spectrum {0, 1-2r, r-s, r+s}. Physical parameters live in the closed
//! triangle |s| <= r <= 1/2; the Bell states sit at its extreme points.

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_transpose, ComplexMatrix, Subsystem};

/// Density-matrix trace and Hermiticity tolerance.
pub const DENSITY_TOL: f64 = 1e-12;
/// Eigenvalue floor for accepting a matrix as PSD.
pub const DENSITY_EIG_FLOOR: f64 = -1e-10;
/// Max-abs elementwise residual for X-state family membership; sized to the
/// round-off a long channel evolution can accumulate.
pub const FAMILY_RESIDUAL_TOL: f64 = 1e-9;

/// A validated 4x4 two-qubit state: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a 4x4 matrix; each violated invariant is reported
    /// as its own error variant.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        assert_eq!(matrix.dim(), 4, "two-qubit states are 4x4");
        if !matrix.is_finite() {
            return Err(Error::InvalidParams(
                "matrix entries must be finite".to_string(),
            ));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.eigenvalues[0];
        if min < DENSITY_EIG_FLOOR {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Partial transpose on the chosen subsystem (stays Hermitian and
    /// unit-trace, but generally leaves the PSD cone — hence a plain matrix).
    pub fn partial_transpose(&self, subsystem: Subsystem) -> ComplexMatrix {
        partial_transpose(&self.matrix, subsystem)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.matrix)
            .expect("validated density matrix is Hermitian")
            .eigenvalues
    }
}

/// Serialized as a row-major array of 16 [re, im] pairs.
impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(16))?;
        for z in self.matrix.entries() {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Deserialize::deserialize(deserializer)?;
        if pairs.len() != 16 {
            return Err(de::Error::invalid_length(pairs.len(), &"16 [re, im] pairs"));
        }
        DensityMatrix::new(ComplexMatrix::from_pairs(4, &pairs)).map_err(de::Error::custom)
    }
}

/// The (r, s) point of the family; constructible only inside the physical
/// triangle (closed — the rank-deficient boundary states are valid).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XStateParams {
    r: f64,
    s: f64,
}

impl XStateParams {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        if !r.is_finite() || !s.is_finite() {
            return Err(Error::InvalidParams(format!(
                "r and s must be finite, got r = {r}, s = {s}"
            )));
        }
        let lambda2 = 1.0 - 2.0 * r;
        if lambda2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "λ2 = 1 - 2r = {lambda2} < 0 (r must lie in [0, 1/2])"
            )));
        }
        let lambda3 = r - s;
        if lambda3 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "λ3 = r - s = {lambda3} < 0 (requires s <= r)"
            )));
        }
        let lambda4 = r + s;
        if lambda4 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "λ4 = r + s = {lambda4} < 0 (requires -s <= r)"
            )));
        }
        Ok(Self { r, s })
    }

    /// Internal constructor for flows that provably stay in the triangle.
    pub(crate) fn new_unchecked(r: f64, s: f64) -> Self {
        debug_assert!(Self::new(r, s).is_ok());
        Self { r, s }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn spectrum(&self) -> FamilySpectrum {
        FamilySpectrum {
            lambda1: 0.0,
            lambda2: 1.0 - 2.0 * self.r,
            lambda3: self.r - self.s,
            lambda4: self.r + self.s,
        }
    }
}

impl<'de> Deserialize<'de> for XStateParams {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            r: f64,
            s: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        XStateParams::new(raw.r, raw.s).map_err(de::Error::custom)
    }
}

/// Eigenvalues of ρ(r, s); λ1 is identically 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilySpectrum {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
}

impl FamilySpectrum {
    pub fn as_array(&self) -> [f64; 4] {
        [self.lambda1, self.lambda2, self.lambda3, self.lambda4]
    }
}

fn family_matrix(r: f64, s: f64) -> ComplexMatrix {
    let mid = 0.5 * (1.0 - 2.0 * r);
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(r, 0.0);
    m[(0, 3)] = Complex64::new(s, 0.0);
    m[(3, 0)] = Complex64::new(s, 0.0);
    m[(3, 3)] = Complex64::new(r, 0.0);
    for i in 1..3 {
        for j in 1..3 {
            m[(i, j)] = Complex64::new(mid, 0.0);
        }
    }
    m
}

/// Construct ρ(r, s).
pub fn build_xstate(params: XStateParams) -> DensityMatrix {
    DensityMatrix::new(family_matrix(params.r, params.s))
        .expect("valid family parameters always produce a valid state")
}

/// Validate an arbitrary 4x4 matrix as a density matrix.
pub fn validate_density(matrix: ComplexMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(matrix)
}

/// Read (r, s) back off a family state; rejects anything farther than
/// `FAMILY_RESIDUAL_TOL` from the template shape.
pub fn extract_params(rho: &DensityMatrix) -> Result<XStateParams> {
    let m = rho.matrix();
    let raw_r = m[(0, 0)].re;
    let raw_s = m[(0, 3)].re;
    let residual = m.max_abs_diff(&family_matrix(raw_r, raw_s));
    if residual > FAMILY_RESIDUAL_TOL {
        return Err(Error::NotInFamily {
            max_residual: residual,
        });
    }
    // The raw entries of a genuine (possibly boundary) state can sit a
    // round-off below the triangle edge; clamp before validating.
    let r = raw_r.clamp(0.0, 0.5);
    let s = raw_s.clamp(-r, r);
    XStateParams::new(r, s)
}

/// Conjugate by the SWAP permutation (|ij> -> |ji>); family states are
/// invariant under this exactly.
pub fn swap_qubits(m: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(m.dim(), 4, "swap is defined on two-qubit matrices");
    const PERM: [usize; 4] = [0, 2, 1, 3];
    ComplexMatrix::from_fn(4, |i, j| m[(PERM[i], PERM[j])])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} != {b} within {tol}");
    }

    #[test]
    fn bell_state_at_origin() {
        let rho = build_xstate(XStateParams::new(0.0, 0.0).unwrap());
        // |Ψ+><Ψ+| with Ψ+ = (|01> + |10>)/√2
        for (i, j, want) in [
            (0usize, 0usize, 0.0),
            (1, 1, 0.5),
            (1, 2, 0.5),
            (2, 1, 0.5),
            (2, 2, 0.5),
            (3, 3, 0.0),
            (0, 3, 0.0),
        ] {
            approx(rho.entry(i, j).re, want, 0.0);
            approx(rho.entry(i, j).im, 0.0, 0.0);
        }
    }

    #[test]
    fn classical_mixture_at_half() {
        let rho = build_xstate(XStateParams::new(0.5, 0.0).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j && (i == 0 || i == 3) {
                    0.5
                } else {
                    0.0
                };
                approx(rho.entry(i, j).re, want, 0.0);
            }
        }
    }

    #[test]
    fn invalid_params_name_the_lambda() {
        let err = XStateParams::new(0.2, 0.3).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("λ3"), "message should cite λ3: {msg}");
        assert!(XStateParams::new(0.6, 0.0)
            .unwrap_err()
            .to_string()
            .contains("λ2"));
        assert!(XStateParams::new(0.2, -0.3)
            .unwrap_err()
            .to_string()
            .contains("λ4"));
        // boundary is closed
        assert!(XStateParams::new(0.3, 0.3).is_ok());
        assert!(XStateParams::new(0.5, -0.5).is_ok());
        assert!(XStateParams::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn spectrum_matches_eigensolve() {
        for (r, s) in [(0.15, 0.07), (0.32, 0.3), (0.45, -0.35), (0.25, 0.25)] {
            let p = XStateParams::new(r, s).unwrap();
            let mut expect = p.spectrum().as_array();
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let got = build_xstate(p).eigenvalues();
            for (g, e) in got.iter().zip(expect) {
                approx(*g, e, 1e-10);
            }
        }
    }

    #[test]
    fn validate_density_reports_each_violation() {
        let ok = validate_density(ComplexMatrix::identity(4).scale(0.25));
        assert!(ok.is_ok());

        let neg = ComplexMatrix::from_fn(4, |i, j| {
            let d = [0.6, 0.6, -0.1, -0.1];
            if i == j {
                Complex64::new(d[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(matches!(
            validate_density(neg),
            Err(Error::NotPositiveSemidefinite { .. })
        ));

        let bad_trace = ComplexMatrix::identity(4).scale(0.3);
        assert!(matches!(
            validate_density(bad_trace),
            Err(Error::TraceNotOne { .. })
        ));

        let mut skewed = ComplexMatrix::identity(4).scale(0.25);
        skewed[(0, 1)] = Complex64::new(0.0, 1e-3);
        assert!(matches!(
            validate_density(skewed),
            Err(Error::NotHermitian { .. })
        ));

        // a benchmark point used throughout the suite
        assert!(validate_density(family_matrix(0.15, 0.07)).is_ok());

        let mut nan = ComplexMatrix::identity(4).scale(0.25);
        nan[(1, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            validate_density(nan),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn extract_round_trips() {
        let p = XStateParams::new(0.32, 0.3).unwrap();
        let back = extract_params(&build_xstate(p)).unwrap();
        assert_eq!(back.r(), 0.32);
        assert_eq!(back.s(), 0.3);
    }

    #[test]
    fn extract_rejects_off_family() {
        let rho = validate_density(ComplexMatrix::identity(4).scale(0.25)).unwrap();
        match extract_params(&rho) {
            Err(Error::NotInFamily { max_residual }) => {
                // the middle block of the template would be (1 - 2*0.25)/2 = 0.25,
                // but ρ12 = 0 here, so the residual is 0.25
                approx(max_residual, 0.25, 1e-12);
            }
            other => panic!("expected NotInFamily, got {other:?}"),
        }
    }

    #[test]
    fn swap_leaves_family_invariant() {
        for (r, s) in [(0.0, 0.0), (0.15, 0.07), (0.45, -0.35), (0.5, 0.5)] {
            let rho = build_xstate(XStateParams::new(r, s).unwrap());
            assert_eq!(swap_qubits(rho.matrix()), *rho.matrix());
        }
    }

    #[test]
    fn serde_shapes() {
        let p = XStateParams::new(0.15, 0.07).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"r":0.15,"s":0.07}"#);
        let back: XStateParams = serde_json::from_str(r#"{"r":0.15,"s":0.07}"#).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<XStateParams>(r#"{"r":0.2,"s":0.3}"#).is_err());

        let rho = build_xstate(p);
        let json = serde_json::to_string(&rho).unwrap();
        let reparsed: DensityMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(reparsed, rho);
    }
}
