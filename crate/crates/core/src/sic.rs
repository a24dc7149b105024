//! Symmetric informationally complete (SIC) sets.
//!
//! A d-dimensional SIC set is d² rank-one operators `X_x` with common trace
//! `λ` and pairwise overlaps `Tr[X_x X_y] = λ²/(d+1)` for `x ≠ y`. Such a set
//! always sums to `dλ𝟙`, so `λ = 1/d` gives a POVM and `λ = 1/d²` an ensemble.
//!
//! The qubit and qutrit constructions below keep the global phases and the
//! labelling of their kets exactly as written in the defining tables.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::hilbert::{eigh, outer, sum_operators, HermitianOperator, PureStateVector, C64};
use crate::states::{Ensemble, Povm};
use crate::{Error, Result};

/// Tolerance on trace and overlap deviations.
pub const SIC_TOL: f64 = 1e-9;
/// Largest admissible second eigenvalue for a rank-one element.
pub const RANK_TOL: f64 = 1e-9;

fn ket(amplitudes: &[C64]) -> PureStateVector {
    PureStateVector::new(amplitudes.to_vec()).expect("closed-form ket is normalized")
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// `|π_1⟩ … |π_4⟩` of the tetrahedral POVM.
pub fn tetrahedral_kets() -> Vec<PureStateVector> {
    let a = re(1.0 / 3f64.sqrt());
    let b = (2.0f64 / 3.0).sqrt();
    vec![
        ket(&[re(1.0), re(0.0)]),
        ket(&[a, re(b)]),
        ket(&[a, phase(2.0 * PI / 3.0) * b]),
        ket(&[a, phase(-2.0 * PI / 3.0) * b]),
    ]
}

/// `|ψ_1⟩ … |ψ_4⟩` of the antitetrahedral ensemble.
///
/// `|ψ_1⟩ ⟂ |π_1⟩`, `|ψ_2⟩ ⟂ |π_2⟩`, `|ψ_3⟩ ⟂ |π_4⟩`, `|ψ_4⟩ ⟂ |π_3⟩`.
pub fn antitetrahedral_kets() -> Vec<PureStateVector> {
    let a = re((2.0f64 / 3.0).sqrt());
    let b = 1.0 / 3f64.sqrt();
    vec![
        ket(&[re(0.0), re(1.0)]),
        ket(&[a, re(-b)]),
        ket(&[a, phase(PI / 3.0) * b]),
        ket(&[a, phase(-PI / 3.0) * b]),
    ]
}

/// Tetrahedral SIC POVM `{½|π_y⟩⟨π_y|}` in d = 2.
pub fn tetrahedral_povm() -> Povm {
    Povm::from_pure_effects(&[0.5; 4], &tetrahedral_kets()).expect("tetrahedral POVM is valid")
}

/// Antitetrahedral ensemble `{¼|ψ_x⟩⟨ψ_x|}` in d = 2.
pub fn antitetrahedral_ensemble() -> Ensemble {
    Ensemble::from_pure_states(&[0.25; 4], &antitetrahedral_kets())
        .expect("antitetrahedral ensemble is valid")
}

/// `|π_1⟩ … |π_9⟩` of the qutrit SIC POVM.
pub fn qutrit_sic_kets() -> Vec<PureStateVector> {
    let h = re(0.5);
    let s = 3f64.sqrt() / 2.0;
    let r = FRAC_1_SQRT_2;
    let w = phase(2.0 * PI / 3.0);
    let wb = phase(-2.0 * PI / 3.0);
    let z = re(0.0);
    vec![
        ket(&[re(1.0), z, z]),
        ket(&[h, C64::new(0.0, s), z]),
        ket(&[h, C64::new(0.0, -s), z]),
        ket(&[h, h, re(r)]),
        ket(&[h, h, w * r]),
        ket(&[h, h, wb * r]),
        ket(&[h, -h, re(r)]),
        ket(&[h, -h, w * r]),
        ket(&[h, -h, wb * r]),
    ]
}

/// `|ψ_1⟩, |ψ_2⟩, |ψ_3⟩` of the qutrit orthonormal ensemble.
pub fn qutrit_orthonormal_kets() -> Vec<PureStateVector> {
    let r = FRAC_1_SQRT_2;
    let z = re(0.0);
    vec![
        ket(&[z, z, re(1.0)]),
        ket(&[re(-r), re(r), z]),
        ket(&[re(r), re(r), z]),
    ]
}

/// Qutrit SIC POVM `{⅓|π_y⟩⟨π_y|}`.
pub fn qutrit_sic_povm() -> Povm {
    Povm::from_pure_effects(&[1.0 / 3.0; 9], &qutrit_sic_kets()).expect("qutrit SIC POVM is valid")
}

/// Orthonormal qutrit ensemble `{⅓|ψ_x⟩⟨ψ_x|}`.
pub fn qutrit_orthonormal_ensemble() -> Ensemble {
    Ensemble::from_pure_states(&[1.0 / 3.0; 3], &qutrit_orthonormal_kets())
        .expect("orthonormal ensemble is valid")
}

/// Weyl–Heisenberg displacement `X^j Z^k` applied to `v`, with
/// `X|m⟩ = |m+1 mod d⟩` and `Z|m⟩ = ω^m|m⟩`, `ω = e^{2πi/d}`.
pub fn displace(v: &DVector<C64>, j: usize, k: usize) -> DVector<C64> {
    let d = v.len();
    let omega = 2.0 * PI / d as f64;
    let mut out = DVector::zeros(d);
    for m in 0..d {
        out[(m + j) % d] = v[m] * phase(omega * ((k * m) % d) as f64);
    }
    out
}

/// Weyl–Heisenberg orbit POVM `{(1/d) D_{jk}|f⟩⟨f|D_{jk}†}`, ordered `y = j·d + k`.
///
/// The orbit of any normalized vector resolves the identity; it is a SIC
/// exactly when `f` is a SIC fiducial.
pub fn wh_covariant_povm(fiducial: &PureStateVector) -> Povm {
    let d = fiducial.dim();
    let f = fiducial.amplitudes();
    let scale = 1.0 / d as f64;
    let effects = (0..d)
        .flat_map(|j| (0..d).map(move |k| (j, k)))
        .map(|(j, k)| {
            let v =
                PureStateVector::normalized(displace(f, j, k)).expect("displacement is unitary");
            outer(&v).scale(scale)
        })
        .collect();
    Povm::new(effects).expect("Weyl-Heisenberg orbit resolves the identity")
}

/// Outcome of checking the SIC conditions on an operator list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SicCertificate {
    pub dim: usize,
    pub count: usize,
    /// Mean element trace.
    pub lambda: f64,
    pub max_trace_deviation: f64,
    /// Worst `|Tr[X_x X_y] − λ²/(d+1)|` over `x ≠ y`.
    pub max_pairwise_deviation: f64,
    /// Largest second eigenvalue over the elements.
    pub max_rank_defect: f64,
    /// `‖Σ_x X_x − dλ𝟙‖_F`.
    pub average_deviation: f64,
    pub passes: bool,
}

impl SicCertificate {
    pub fn summary(&self) -> String {
        format!(
            "d={} count={} lambda={:.9} trace_dev={:.3e} pairwise_dev={:.3e} rank_defect={:.3e} average_dev={:.3e} passes={}",
            self.dim,
            self.count,
            self.lambda,
            self.max_trace_deviation,
            self.max_pairwise_deviation,
            self.max_rank_defect,
            self.average_deviation,
            self.passes
        )
    }
}

/// Checks the SIC conditions.
pub fn is_sic(elements: &[HermitianOperator]) -> Result<SicCertificate> {
    let first = elements
        .first()
        .ok_or_else(|| Error::InvalidInput("empty operator list".into()))?;
    let dim = first.dim();
    if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {dim} vs {}",
            bad.dim()
        )));
    }
    let count = elements.len();
    let traces: Vec<f64> = elements.iter().map(HermitianOperator::trace).collect();
    let lambda = traces.iter().sum::<f64>() / count as f64;
    let max_trace_deviation = traces
        .iter()
        .map(|t| (t - lambda).abs())
        .fold(0.0, f64::max);

    let target = lambda * lambda / (dim as f64 + 1.0);
    let mut max_pairwise_deviation = 0.0f64;
    for x in 0..count {
        for y in (x + 1)..count {
            let overlap = elements[x].trace_product(&elements[y]);
            max_pairwise_deviation = max_pairwise_deviation.max((overlap - target).abs());
        }
    }

    let max_rank_defect = elements
        .iter()
        .map(|e| eigh(e).values.get(1).copied().unwrap_or(0.0).abs())
        .fold(0.0, f64::max);

    let average_deviation = sum_operators(dim, elements)
        .frobenius_distance(&HermitianOperator::identity(dim).scale(dim as f64 * lambda));

    let passes = count == dim * dim
        && max_trace_deviation <= SIC_TOL
        && max_pairwise_deviation <= SIC_TOL
        && max_rank_defect <= RANK_TOL;

    Ok(SicCertificate {
        dim,
        count,
        lambda,
        max_trace_deviation,
        max_pairwise_deviation,
        max_rank_defect,
        average_deviation,
        passes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiducialKind {
    Fiducial,
}

/// `{"kind": "fiducial", "dim": d, "amplitudes": [[re, im], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiducialFile {
    pub kind: FiducialKind,
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

/// Published fiducials are often printed to limited precision; anything
/// within this of unit norm is renormalized on ingest.
const FIDUCIAL_NORM_SLACK: f64 = 1e-6;

impl FiducialFile {
    pub fn from_state(v: &PureStateVector) -> Self {
        Self {
            kind: FiducialKind::Fiducial,
            dim: v.dim(),
            amplitudes: v.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_state(&self) -> Result<PureStateVector> {
        if self.amplitudes.len() != self.dim || self.dim == 0 {
            return Err(Error::Parse(format!(
                "fiducial declares dim {} but has {} amplitudes",
                self.dim,
                self.amplitudes.len()
            )));
        }
        let v = DVector::from_iterator(
            self.dim,
            self.amplitudes.iter().map(|&[a, b]| C64::new(a, b)),
        );
        let n2 = v.norm_squared();
        if (n2 - 1.0).abs() > FIDUCIAL_NORM_SLACK {
            return Err(Error::InvalidState(format!(
                "fiducial squared norm {n2} is not 1"
            )));
        }
        PureStateVector::normalized(v)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fiducial serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
