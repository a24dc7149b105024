//! Ensembles and POVMs.
//!
//! An [`Ensemble`] stores sub-normalized states `ρ_x` whose traces are the
//! prior probabilities; a [`Povm`] stores effects `Π_y` summing to the
//! identity. The pretty-good maps
//!
//! - `{ρ_x} ↦ {ρ^{-1/2} ρ_x ρ^{-1/2}}` (ensemble to POVM, `ρ = Σ_x ρ_x`)
//! - `{Π_y} ↦ {ρ^{1/2} Π_y ρ^{1/2}}` (POVM and state to ensemble)
//!
//! preserve the Born-rule joint statistics, which is what makes accessible
//! information and informational power dual to each other.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::hilbert::{
    self, eigh, op_inv_sqrt, op_sqrt, sum_operators, HermitianOperator, PureStateVector, C64,
    PSD_TOL,
};
use crate::sic;
use crate::{Error, Result};

/// Tolerance on `Σ_x Tr[ρ_x] = 1` and `Σ_y Π_y = 𝟙`.
pub const SUM_TOL: f64 = 1e-9;

fn common_dim(ops: &[HermitianOperator]) -> Result<usize> {
    let d = ops
        .first()
        .map(HermitianOperator::dim)
        .ok_or_else(|| Error::InvalidInput("empty operator list".into()))?;
    if let Some(bad) = ops.iter().find(|o| o.dim() != d) {
        return Err(Error::DimMismatch(d, bad.dim()));
    }
    Ok(d)
}

/// A discrete ensemble `{ρ_x}` with `Σ_x Tr[ρ_x] = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    dim: usize,
    states: Vec<HermitianOperator>,
}

impl Ensemble {
    pub fn new(states: Vec<HermitianOperator>) -> Result<Self> {
        let dim = common_dim(&states).map_err(|e| Error::InvalidEnsemble(e.to_string()))?;
        for (x, rho) in states.iter().enumerate() {
            let min = rho.min_eigenvalue();
            if min < -PSD_TOL {
                return Err(Error::InvalidEnsemble(format!(
                    "state {x} has negative eigenvalue {min:e}"
                )));
            }
        }
        let total: f64 = states.iter().map(HermitianOperator::trace).sum();
        if !total.is_finite() || (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidEnsemble(format!(
                "traces sum to {total}, expected 1"
            )));
        }
        Ok(Self { dim, states })
    }

    /// `{p_x |ψ_x⟩⟨ψ_x|}`.
    pub fn from_pure_states(weights: &[f64], vectors: &[PureStateVector]) -> Result<Self> {
        if weights.len() != vectors.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights for {} states",
                weights.len(),
                vectors.len()
            )));
        }
        Self::new(
            weights
                .iter()
                .zip(vectors)
                .map(|(&w, v)| hilbert::outer(v).scale(w))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Sub-normalized states `ρ_x`.
    pub fn states(&self) -> &[HermitianOperator] {
        &self.states
    }

    pub fn into_states(self) -> Vec<HermitianOperator> {
        self.states
    }

    /// Priors `p(X=x) = Tr[ρ_x]`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.states.iter().map(HermitianOperator::trace).collect()
    }

    /// `(p_x, ρ_x / p_x)` pairs; zero-weight elements carry `None`.
    pub fn normalized_states(&self) -> Vec<(f64, Option<HermitianOperator>)> {
        self.states
            .iter()
            .map(|rho| {
                let p = rho.trace();
                if p > 0.0 {
                    (p, Some(rho.scale(1.0 / p)))
                } else {
                    (p, None)
                }
            })
            .collect()
    }
}

/// A discrete POVM `{Π_y}` with `Σ_y Π_y = 𝟙`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    dim: usize,
    effects: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        let dim = common_dim(&effects).map_err(|e| Error::InvalidPovm(e.to_string()))?;
        for (y, effect) in effects.iter().enumerate() {
            let min = effect.min_eigenvalue();
            if min < -PSD_TOL {
                return Err(Error::InvalidPovm(format!(
                    "effect {y} has negative eigenvalue {min:e}"
                )));
            }
        }
        let deviation =
            sum_operators(dim, &effects).max_abs_diff(&HermitianOperator::identity(dim));
        if !deviation.is_finite() || deviation > SUM_TOL {
            return Err(Error::InvalidPovm(format!(
                "effects sum to identity only within {deviation:e}"
            )));
        }
        Ok(Self { dim, effects })
    }

    /// Projective measurement in the computational basis.
    pub fn computational_basis(dim: usize) -> Self {
        Self {
            dim,
            effects: (0..dim)
                .map(|k| hilbert::outer(&PureStateVector::basis(dim, k)))
                .collect(),
        }
    }

    /// `{w_y |v_y⟩⟨v_y|}`.
    pub fn from_pure_effects(weights: &[f64], vectors: &[PureStateVector]) -> Result<Self> {
        if weights.len() != vectors.len() {
            return Err(Error::InvalidPovm(format!(
                "{} weights for {} vectors",
                weights.len(),
                vectors.len()
            )));
        }
        Self::new(
            weights
                .iter()
                .zip(vectors)
                .map(|(&w, v)| hilbert::outer(v).scale(w))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn into_effects(self) -> Vec<HermitianOperator> {
        self.effects
    }

    /// Outcome distribution `⟨ψ|Π_y|ψ⟩` for a (normalized) vector.
    pub fn outcome_probabilities(&self, psi: &DVector<C64>) -> Vec<f64> {
        self.effects
            .iter()
            .map(|e| e.expectation(psi).max(0.0))
            .collect()
    }

    /// True when every effect is proportional to the identity.
    pub fn is_trivial(&self) -> bool {
        let id = HermitianOperator::identity(self.dim);
        self.effects.iter().all(|e| {
            let c = e.trace() / self.dim as f64;
            e.max_abs_diff(&id.scale(c)) <= SUM_TOL
        })
    }
}

/// `ρ = Σ_x ρ_x`.
pub fn average_state(e: &Ensemble) -> HermitianOperator {
    sum_operators(e.dim, &e.states)
}

fn check_density(rho: &HermitianOperator) -> Result<()> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidState(format!("trace {tr} != 1")));
    }
    let min = rho.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Compression onto the support of a state.
///
/// `basis` holds the eigenvectors of `ρ` with eigenvalue above `KERNEL_TOL`
/// (in [`eigh`] order) as columns; `povm` holds the effects `V† Π_y V`.
#[derive(Clone, Debug)]
pub struct SupportRestriction {
    pub basis: DMatrix<C64>,
    pub povm: Povm,
}

impl SupportRestriction {
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// Expresses an operator supported in `supp(ρ)` in the restricted basis.
    pub fn restrict(&self, op: &HermitianOperator) -> HermitianOperator {
        op.compress(&self.basis)
    }
}

/// Restricts `p` to the support of `rho` together with the basis used.
pub fn support_restriction(p: &Povm, rho: &HermitianOperator) -> Result<SupportRestriction> {
    if rho.dim() != p.dim {
        return Err(Error::DimMismatch(p.dim, rho.dim()));
    }
    check_density(rho)?;
    let basis = eigh(rho).support_basis();
    let effects: Vec<HermitianOperator> = p.effects.iter().map(|e| e.compress(&basis)).collect();
    let povm = Povm::new(effects)?;
    Ok(SupportRestriction { basis, povm })
}

/// `{P Π_y P}` written in an orthonormal basis of `supp(rho)`.
pub fn restrict_to_support(p: &Povm, rho: &HermitianOperator) -> Result<Povm> {
    Ok(support_restriction(p, rho)?.povm)
}

/// Pretty-good POVM `{ρ^{-1/2} ρ_x ρ^{-1/2}}`.
///
/// For a full-rank average state the effects are expressed in the original
/// basis. Otherwise the construction runs on `supp(ρ)` and the result has
/// dimension `rank(ρ)`, in the basis of [`support_restriction`].
pub fn pretty_good_povm(e: &Ensemble) -> Result<Povm> {
    let rho = average_state(e);
    let spectrum = eigh(&rho);
    let (rho, states) = if spectrum.rank() == e.dim {
        (rho, e.states.clone())
    } else {
        let basis = spectrum.support_basis();
        (
            rho.compress(&basis),
            e.states.iter().map(|s| s.compress(&basis)).collect(),
        )
    };
    let inv = op_inv_sqrt(&rho).map_err(|err| Error::InvalidEnsemble(err.to_string()))?;
    let effects = states.iter().map(|s| s.sandwich(&inv)).collect();
    Povm::new(effects).map_err(|err| Error::InvalidEnsemble(err.to_string()))
}

/// Pretty-good ensemble (ρ-distortion) `{ρ^{1/2} Π_y ρ^{1/2}}`.
pub fn pretty_good_ensemble(p: &Povm, rho: &HermitianOperator) -> Result<Ensemble> {
    if rho.dim() != p.dim {
        return Err(Error::DimMismatch(p.dim, rho.dim()));
    }
    check_density(rho)?;
    let root = op_sqrt(rho)?;
    Ensemble::new(p.effects.iter().map(|e| e.sandwich(&root)).collect())
}

/// SIC POVM `{Π_x}` to SIC ensemble `{Π_x / d}`.
pub fn sic_ensemble_from_povm(p: &Povm) -> Result<Ensemble> {
    let cert = sic::is_sic(&p.effects)?;
    let expected = 1.0 / p.dim as f64;
    if !cert.passes || (cert.lambda - expected).abs() > sic::SIC_TOL {
        return Err(Error::NotSic(cert.summary()));
    }
    Ensemble::new(p.effects.iter().map(|e| e.scale(expected)).collect())
}

/// SIC ensemble `{ρ_x}` to SIC POVM `{d ρ_x}`.
pub fn sic_povm_from_ensemble(e: &Ensemble) -> Result<Povm> {
    let cert = sic::is_sic(&e.states)?;
    let d = e.dim as f64;
    if !cert.passes || (cert.lambda - 1.0 / (d * d)).abs() > sic::SIC_TOL {
        return Err(Error::NotSic(cert.summary()));
    }
    Povm::new(e.states.iter().map(|s| s.scale(d)).collect())
}

// ---------------------------------------------------------------------------
// JSON file format

/// Kind tag of an operator-list file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Ensemble,
    Povm,
    /// A bare operator list (accepted by SIC verification).
    Operators,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixElement {
    /// Row-major rows of `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// `{"kind": ..., "dim": d, "elements": [{"matrix": [[[re, im], ...], ...]}, ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSetFile {
    pub kind: SetKind,
    pub dim: usize,
    pub elements: Vec<MatrixElement>,
}

fn encode(op: &HermitianOperator) -> MatrixElement {
    MatrixElement {
        matrix: op
            .rows()
            .into_iter()
            .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    }
}

impl OperatorSetFile {
    pub fn from_operators(kind: SetKind, ops: &[HermitianOperator]) -> Self {
        Self {
            kind,
            dim: ops.first().map_or(0, HermitianOperator::dim),
            elements: ops.iter().map(encode).collect(),
        }
    }

    pub fn from_ensemble(e: &Ensemble) -> Self {
        Self::from_operators(SetKind::Ensemble, &e.states)
    }

    pub fn from_povm(p: &Povm) -> Self {
        Self::from_operators(SetKind::Povm, &p.effects)
    }

    /// Decodes the elements as Hermitian operators of dimension `dim`.
    pub fn operators(&self) -> Result<Vec<HermitianOperator>> {
        if self.elements.is_empty() {
            return Err(Error::Parse("no elements".into()));
        }
        self.elements
            .iter()
            .enumerate()
            .map(|(k, el)| {
                if el.matrix.len() != self.dim || el.matrix.iter().any(|r| r.len() != self.dim) {
                    return Err(Error::Parse(format!(
                        "element {k} is not {d}x{d}",
                        d = self.dim
                    )));
                }
                let rows: Vec<Vec<C64>> = el
                    .matrix
                    .iter()
                    .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
                    .collect();
                HermitianOperator::new(hilbert::ComplexMatrix::from_rows(&rows)?)
            })
            .collect()
    }

    pub fn to_ensemble(&self) -> Result<Ensemble> {
        if self.kind != SetKind::Ensemble {
            return Err(Error::Parse(format!(
                "expected an ensemble, found {:?}",
                self.kind
            )));
        }
        Ensemble::new(self.operators()?)
    }

    pub fn to_povm(&self) -> Result<Povm> {
        if self.kind != SetKind::Povm {
            return Err(Error::Parse(format!(
                "expected a povm, found {:?}",
                self.kind
            )));
        }
        Povm::new(self.operators()?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("operator set serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
