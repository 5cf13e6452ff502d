//! Correlation measures for two-qubit states.
//!
//! Negativity N(ρ) = Σ_i |η_i| - η_i over the partial-transpose spectrum;
//! Wigner-Yanase skew information I(ρ, K) = -1/2 Tr[√ρ, K]^2; local quantum
//! uncertainty LQU = 1 - λ_max(W) with W_ij = Tr{√ρ (σ_i ⊗ I) √ρ (σ_j ⊗ I)};
//! and the closed forms for the X-state family, LQU = 1 - 2 max(β_1, β_2, β_3).
//!
//! Observables are fixed to the ±1 spectrum: all spectrum choices give
//! equivalent measures for qubits, and K^2 = I yields the testing identity
//! I(ρ, (n·σ) ⊗ I) = 1 - nᵀ W n.

use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, kron, matrix_sqrt_psd, pauli_x, pauli_y, pauli_z, ComplexMatrix, Subsystem,
    HERMITICITY_TOL,
};
use crate::states::{build_xstate, DensityMatrix, XStateParams};

/// A ±1-spectrum observable on subsystem A: K = (n·σ) ⊗ I with ‖n‖ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalObservable {
    bloch: [f64; 3],
}

impl LocalObservable {
    pub fn new(bloch: [f64; 3]) -> Result<Self> {
        let norm = bloch.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "Bloch vector must be unit norm, got ‖n‖ = {norm}"
            )));
        }
        Ok(Self { bloch })
    }

    /// Normalize an arbitrary nonzero direction first.
    pub fn from_direction(dir: [f64; 3]) -> Result<Self> {
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParams(
                "observable direction must be nonzero and finite".to_string(),
            ));
        }
        Ok(Self {
            bloch: [dir[0] / norm, dir[1] / norm, dir[2] / norm],
        })
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    /// The 4x4 operator (n·σ) ⊗ I.
    pub fn operator(&self) -> ComplexMatrix {
        let [nx, ny, nz] = self.bloch;
        let n_sigma = pauli_x()
            .scale(nx)
            .add(&pauli_y().scale(ny))
            .add(&pauli_z().scale(nz));
        kron(&n_sigma, &ComplexMatrix::identity(2))
    }
}

/// Twice the absolute sum of the negative partial-transpose eigenvalues;
/// zero iff the state is PPT (separable, for two qubits).
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let pt = rho.partial_transpose(Subsystem::A);
    let eig = hermitian_eig(&pt).expect("partial transpose of a state is Hermitian");
    eig.eigenvalues.iter().map(|eta| eta.abs() - eta).sum()
}

/// Partial-transpose spectrum of ρ(r, s) in closed form:
/// (1/2, 2r - 1/2, 1/2 - r - s, 1/2 - r + s). At most one of the last three
/// can be negative for physical parameters.
pub fn pt_spectrum_family(params: XStateParams) -> [f64; 4] {
    let (r, s) = (params.r(), params.s());
    [0.5, 2.0 * r - 0.5, 0.5 - r - s, 0.5 - r + s]
}

/// Negativity of a family state from its closed-form η spectrum.
pub fn negativity_family(params: XStateParams) -> f64 {
    pt_spectrum_family(params)
        .iter()
        .map(|eta| eta.abs() - eta)
        .sum()
}

/// Wigner-Yanase skew information -1/2 Tr[√ρ, K]^2 for a Hermitian K.
/// Reduces to the variance Tr(ρK²) - (TrρK)² on pure states.
pub fn skew_information(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    assert_eq!(k.dim(), 4, "observables act on the full two-qubit space");
    let dev = k.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let root = matrix_sqrt_psd(rho.matrix()).expect("density matrices are PSD");
    let comm = root.mul(k).sub(&k.mul(&root));
    Ok(-0.5 * comm.mul(&comm).trace().re)
}

/// The 3x3 symmetric matrix W_ij = Tr{√ρ (σ_i ⊗ I) √ρ (σ_j ⊗ I)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WMatrix {
    entries: [[f64; 3]; 3],
}

impl WMatrix {
    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    /// Ascending spectrum, via the same Jacobi solver as everything else.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new(self.entries[i][j], 0.0));
        let eig = hermitian_eig(&m).expect("W is symmetric by construction");
        [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[2]
    }

    /// Unit Bloch vector of the top eigenvector (W is real symmetric, so the
    /// phase-fixed eigenvector is real).
    pub fn top_eigenvector(&self) -> [f64; 3] {
        let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new(self.entries[i][j], 0.0));
        let eig = hermitian_eig(&m).expect("W is symmetric by construction");
        [
            eig.eigenvectors[(0, 2)].re,
            eig.eigenvectors[(1, 2)].re,
            eig.eigenvectors[(2, 2)].re,
        ]
    }
}

pub fn w_matrix(rho: &DensityMatrix) -> WMatrix {
    let root = matrix_sqrt_psd(rho.matrix()).expect("density matrices are PSD");
    let id2 = ComplexMatrix::identity(2);
    let k: [ComplexMatrix; 3] = [
        kron(&pauli_x(), &id2),
        kron(&pauli_y(), &id2),
        kron(&pauli_z(), &id2),
    ];
    // W_ij = Tr(A_i A_j) with A_i = √ρ K_i; filled for i <= j and mirrored,
    // so the result is symmetric exactly.
    let a: Vec<ComplexMatrix> = k.iter().map(|ki| root.mul(ki)).collect();
    let mut entries = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let mut tr = Complex64::new(0.0, 0.0);
            for m in 0..4 {
                for n in 0..4 {
                    tr += a[i][(m, n)] * a[j][(n, m)];
                }
            }
            entries[i][j] = tr.re;
            entries[j][i] = tr.re;
        }
    }
    WMatrix { entries }
}

/// LQU for an arbitrary two-qubit state: 1 - λ_max(W), measured on the
/// first subsystem.
pub fn lqu_generic(rho: &DensityMatrix) -> f64 {
    1.0 - w_matrix(rho).max_eigenvalue()
}

/// The three candidate branches whose maximum determines the family LQU.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaBranches {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

impl BetaBranches {
    pub fn max(&self) -> f64 {
        self.beta1.max(self.beta2).max(self.beta3)
    }
}

/// Closed-form LQU of ρ(r, s): 1 - 2 max(β_1, β_2, β_3) with
/// β_1 = √(1-2r)√(r-s), β_2 = √(1-2r)√(r+s), β_3 = √(r-s)√(r+s).
pub fn lqu_family(params: XStateParams) -> (f64, BetaBranches) {
    let eigs = params.spectrum();
    let (l2, l3, l4) = (
        eigs.lambda2.sqrt(),
        eigs.lambda3.sqrt(),
        eigs.lambda4.sqrt(),
    );
    let betas = BetaBranches {
        beta1: l2 * l3,
        beta2: l2 * l4,
        beta3: l3 * l4,
    };
    (1.0 - 2.0 * betas.max(), betas)
}

/// Everything the sweep outputs know about one time point.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub t: f64,
    pub params_t: XStateParams,
    pub negativity: f64,
    pub lqu: f64,
    pub betas: BetaBranches,
    pub w_eigs: [f64; 3],
}

impl Serialize for CorrelationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CorrelationReport", 9)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("r", &self.params_t.r())?;
        st.serialize_field("s", &self.params_t.s())?;
        st.serialize_field("negativity", &self.negativity)?;
        st.serialize_field("lqu", &self.lqu)?;
        st.serialize_field("beta1", &self.betas.beta1)?;
        st.serialize_field("beta2", &self.betas.beta2)?;
        st.serialize_field("beta3", &self.betas.beta3)?;
        st.serialize_field("w_eigs", &self.w_eigs)?;
        st.end()
    }
}

/// One time point of a family trajectory: closed-form negativity and LQU,
/// W spectrum via the generic route.
pub fn family_report(t: f64, params_t: XStateParams) -> CorrelationReport {
    let (lqu, betas) = lqu_family(params_t);
    CorrelationReport {
        t,
        params_t,
        negativity: negativity_family(params_t),
        lqu,
        betas,
        w_eigs: w_matrix(&build_xstate(params_t)).eigenvalues(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_transpose;
    use crate::states::validate_density;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} != {b} within {tol}");
    }

    fn params(r: f64, s: f64) -> XStateParams {
        XStateParams::new(r, s).unwrap()
    }

    #[test]
    fn negativity_values() {
        approx(negativity(&build_xstate(params(0.0, 0.0))), 1.0, 1e-12);
        approx(negativity(&build_xstate(params(0.5, 0.0))), 0.0, 1e-12);
        approx(negativity(&build_xstate(params(0.15, 0.07))), 0.4, 1e-12);
    }

    #[test]
    fn family_pt_spectrum_matches_eigensolve() {
        for (r, s) in [(0.15, 0.07), (0.3, 0.1), (0.32, 0.3), (0.45, -0.35)] {
            let p = params(r, s);
            let mut closed = pt_spectrum_family(p);
            closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let pt = partial_transpose(build_xstate(p).matrix(), Subsystem::A);
            let numeric = hermitian_eig(&pt).unwrap().eigenvalues;
            for (c, n) in closed.iter().zip(numeric) {
                approx(*c, n, 1e-10);
            }
            let negatives = closed.iter().filter(|&&e| e < -1e-12).count();
            assert!(negatives <= 1, "at most one η can be negative");
        }
        for (got, want) in pt_spectrum_family(params(0.15, 0.07))
            .iter()
            .zip([0.5, -0.2, 0.28, 0.42])
        {
            approx(*got, want, 1e-15);
        }
        // (0.3, 0.1): PPT, hence separable
        assert!(pt_spectrum_family(params(0.3, 0.1))
            .iter()
            .all(|&e| e >= 0.0));
        // (0.32, 0.3): η3 < 0, entangled (green region)
        approx(pt_spectrum_family(params(0.32, 0.3))[2], -0.12, 1e-15);
    }

    #[test]
    fn skew_information_examples() {
        let id2 = ComplexMatrix::identity(2);
        let sz_a = kron(&pauli_z(), &id2);

        // pure Bell state: skew = variance = 1
        let bell = build_xstate(params(0.0, 0.0));
        approx(skew_information(&bell, &sz_a).unwrap(), 1.0, 1e-10);

        // √ρ commutes with a diagonal K
        let diag = build_xstate(params(0.5, 0.0));
        approx(skew_information(&diag, &sz_a).unwrap(), 0.0, 1e-12);

        // the identity commutes with everything
        let any = build_xstate(params(0.32, 0.3));
        approx(
            skew_information(&any, &ComplexMatrix::identity(4)).unwrap(),
            0.0,
            1e-12,
        );

        // non-Hermitian observables are rejected
        let mut bad = ComplexMatrix::identity(4);
        bad[(0, 1)] = Complex64::new(0.3, 0.0);
        assert!(skew_information(&any, &bad).is_err());

        // Bloch vectors must be unit norm up front
        assert!(LocalObservable::new([1.0, 0.0, 0.0]).is_ok());
        assert!(LocalObservable::new([0.5, 0.0, 0.0]).is_err());
        assert!(LocalObservable::from_direction([0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn w_matrix_of_maximally_mixed_is_identity() {
        let rho = validate_density(ComplexMatrix::identity(4).scale(0.25)).unwrap();
        let w = w_matrix(&rho);
        for i in 0..3 {
            for j in 0..3 {
                approx(w.entries()[i][j], if i == j { 1.0 } else { 0.0 }, 1e-12);
            }
        }
        approx(lqu_generic(&rho), 0.0, 1e-12);
    }

    #[test]
    fn w_matrix_is_diagonal_on_the_family() {
        for (r, s) in [(0.15, 0.07), (0.32, 0.3), (0.45, -0.2), (0.37, 0.35)] {
            let w = w_matrix(&build_xstate(params(r, s)));
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert!(w.entries()[i][j].abs() <= 1e-10);
                    }
                }
            }
            let eigs = w.eigenvalues();
            assert!(eigs[0] >= -1e-9 && eigs[2] <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn bell_state_has_zero_w_and_unit_lqu() {
        let bell = build_xstate(params(0.0, 0.0));
        approx(w_matrix(&bell).max_eigenvalue(), 0.0, 1e-10);
        approx(lqu_generic(&bell), 1.0, 1e-10);
    }

    #[test]
    fn lqu_closed_form_values() {
        approx(lqu_family(params(0.5, 0.0)).0, 0.0, 1e-15);
        approx(lqu_family(params(0.0, 0.0)).0, 1.0, 1e-15);
        // 1 - 2 β2 with β2 = √(0.7 · 0.22)
        approx(lqu_family(params(0.15, 0.07)).0, 0.2151433251860566, 1e-12);
        approx(
            lqu_generic(&build_xstate(params(0.15, 0.07))),
            0.2151433251860566,
            1e-9,
        );

        // β3 = √(0.10 · 0.80) is maximal at (0.45, 0.35)
        let (lqu, betas) = lqu_family(params(0.45, 0.35));
        approx(betas.beta3, 0.282842712474619, 1e-12);
        approx(lqu, 0.4343145750507619, 1e-12);

        // β2 dominates β3 at t = 0 for the sudden-change benchmark (0.37, 0.35)
        let (_, betas) = lqu_family(params(0.37, 0.35));
        approx(betas.beta2, 0.4326661530556787, 1e-12);
        approx(betas.beta3, 0.12, 1e-12);
        assert!(betas.beta2 > betas.beta3);

        // s = 0 collapses β1 = β2
        let (lqu, betas) = lqu_family(params(0.3, 0.0));
        assert_eq!(betas.beta1, betas.beta2);
        let expect = 1.0 - 2.0 * (0.3f64 * 0.4).sqrt().max(0.3);
        approx(lqu, expect, 1e-15);
    }

    #[test]
    fn closed_form_tracks_generic_route() {
        for (r, s) in [
            (0.15, 0.07),
            (0.32, 0.3),
            (0.37, -0.35),
            (0.45, 0.2),
            (0.25, 0.25),
        ] {
            let p = params(r, s);
            approx(lqu_family(p).0, lqu_generic(&build_xstate(p)), 1e-8);
        }
    }

    #[test]
    fn s_sign_symmetry_is_exact() {
        for (r, s) in [(0.15, 0.07), (0.32, 0.3), (0.45, 0.35)] {
            let plus = params(r, s);
            let minus = params(r, -s);
            assert_eq!(lqu_family(plus).0, lqu_family(minus).0);
            assert_eq!(negativity_family(plus), negativity_family(minus));
            // β1 <-> β2 and η3 <-> η4 swap roles
            let (bp, bm) = (lqu_family(plus).1, lqu_family(minus).1);
            assert_eq!(bp.beta1, bm.beta2);
            assert_eq!(bp.beta2, bm.beta1);
        }
    }

    #[test]
    fn skew_is_bounded_below_by_lqu_and_attained_at_top_eigenvector() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for (r, s) in [(0.15, 0.07), (0.37, 0.35)] {
            let rho = build_xstate(params(r, s));
            let lqu = lqu_generic(&rho);
            for _ in 0..50 {
                let dir = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let Ok(obs) = LocalObservable::from_direction(dir) else {
                    continue;
                };
                let skew = skew_information(&rho, &obs.operator()).unwrap();
                assert!(skew >= lqu - 1e-9);
            }
            let top = LocalObservable::from_direction(w_matrix(&rho).top_eigenvector()).unwrap();
            let skew = skew_information(&rho, &top.operator()).unwrap();
            approx(skew, lqu, 1e-6);
        }
    }

    #[test]
    fn report_serialization_shape() {
        let report = family_report(0.5, params(0.15, 0.07));
        let json = serde_json::to_value(&report).unwrap();
        for key in [
            "t",
            "r",
            "s",
            "negativity",
            "lqu",
            "beta1",
            "beta2",
            "beta3",
            "w_eigs",
        ] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        approx(json["negativity"].as_f64().unwrap(), 0.4, 1e-12);
        assert_eq!(json["w_eigs"].as_array().unwrap().len(), 3);
        // in-family consistency: lqu = 1 - 2 max β
        approx(report.lqu, 1.0 - 2.0 * report.betas.max(), 1e-15);
    }
}
