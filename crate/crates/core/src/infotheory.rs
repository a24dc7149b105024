//! Shannon quantities of Born-rule statistics and the closed-form bounds.
//!
//! Logarithms are binary throughout. Probabilities below [`ZERO_PROB`] are
//! treated as exact zeros, so `0·log 0 = 0` also holds for clamped rounding
//! noise.

use std::f64::consts::LN_2;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::hilbert::{HermitianOperator, PureStateVector, C64, PSD_TOL};
use crate::states::{Ensemble, Povm, SUM_TOL};
use crate::{Error, Result};

/// Probabilities below this contribute nothing to entropy sums.
pub const ZERO_PROB: f64 = 1e-15;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[inline]
fn surprisal_term(p: f64) -> f64 {
    if p < ZERO_PROB {
        0.0
    } else {
        -p * p.log2()
    }
}

/// `−Σ p log p` without validation.
pub fn entropy_bits(dist: &[f64]) -> f64 {
    dist.iter().map(|&p| surprisal_term(p)).sum()
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(dist: &[f64]) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if let Some(p) = dist.iter().find(|p| !p.is_finite() || **p < -PSD_TOL) {
        return Err(Error::InvalidDistribution(format!(
            "entry {p} is not a probability"
        )));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidDistribution(format!("sums to {total}")));
    }
    Ok(entropy_bits(dist))
}

/// Joint distribution `p(x, y)` over preparations and outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Validates and clamps a row-major `|X|×|Y|` table.
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || table.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("ragged or empty table".into()));
        }
        Self::from_row_major(rows, cols, table.into_iter().flatten().collect())
    }

    pub fn from_row_major(rows: usize, cols: usize, mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() != rows * cols || probs.is_empty() {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for a {rows}x{cols} table",
                probs.len()
            )));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -PSD_TOL {
                return Err(Error::InvalidDistribution(format!("entry {p} is negative")));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("sums to {total}")));
        }
        Ok(Self { rows, cols, probs })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.cols + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.probs[x * self.cols..(x + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.rows).map(|x| self.row(x).iter().sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for x in 0..self.rows {
            for (acc, p) in out.iter_mut().zip(self.row(x)) {
                *acc += p;
            }
        }
        out
    }

    pub fn entropy_x(&self) -> f64 {
        entropy_bits(&self.marginal_x())
    }

    pub fn entropy_y(&self) -> f64 {
        entropy_bits(&self.marginal_y())
    }

    pub fn joint_entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    /// `H(Y|X) = H(X,Y) − H(X)`.
    pub fn conditional_entropy_y_given_x(&self) -> f64 {
        self.joint_entropy() - self.entropy_x()
    }

    /// `H(Y|X) = Σ_x p(x) H(Y|X=x)`, evaluated row by row.
    pub fn conditional_entropy_by_rows(&self) -> f64 {
        (0..self.rows)
            .map(|x| {
                let px: f64 = self.row(x).iter().sum();
                if px < ZERO_PROB {
                    0.0
                } else {
                    let cond: Vec<f64> = self.row(x).iter().map(|p| p / px).collect();
                    px * entropy_bits(&cond)
                }
            })
            .sum()
    }
}

/// Entropy breakdown of a joint distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InformationBreakdown {
    pub mutual_information: f64,
    pub h_x: f64,
    pub h_y: f64,
    pub h_xy: f64,
    pub h_y_given_x: f64,
}

impl InformationBreakdown {
    pub fn of(j: &JointDistribution) -> Self {
        let h_x = j.entropy_x();
        let h_y = j.entropy_y();
        let h_xy = j.joint_entropy();
        Self {
            mutual_information: (h_x + h_y - h_xy).max(0.0),
            h_x,
            h_y,
            h_xy,
            h_y_given_x: h_xy - h_x,
        }
    }
}

/// Born-rule joint distribution `p(x, y) = Tr[ρ_x Π_y]`.
pub fn joint_distribution(e: &Ensemble, p: &Povm) -> Result<JointDistribution> {
    if e.dim() != p.dim() {
        return Err(Error::DimMismatch(e.dim(), p.dim()));
    }
    let probs = e
        .states()
        .iter()
        .flat_map(|rho| p.effects().iter().map(move |pi| rho.trace_product(pi)))
        .collect();
    JointDistribution::from_row_major(e.len(), p.len(), probs)
}

/// `I(X;Y) = H(X) + H(Y) − H(X,Y)`, clamped at zero.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    (j.entropy_x() + j.entropy_y() - j.joint_entropy()).max(0.0)
}

/// `I(𝔈, 𝔓)` of an ensemble measured by a POVM.
pub fn ensemble_information(e: &Ensemble, p: &Povm) -> Result<f64> {
    Ok(mutual_information(&joint_distribution(e, p)?))
}

/// `H(Y|X=x)`: entropy of the outcome distribution `⟨ψ|Π_y|ψ⟩`.
pub fn conditional_output_entropy(p: &Povm, psi: &PureStateVector) -> Result<f64> {
    if psi.dim() != p.dim() {
        return Err(Error::DimMismatch(p.dim(), psi.dim()));
    }
    Ok(output_entropy(p, psi.amplitudes()))
}

pub(crate) fn output_entropy(p: &Povm, psi: &DVector<C64>) -> f64 {
    entropy_bits(&p.outcome_probabilities(psi))
}

/// Collision probability `Σ_y Tr[ρ Π_y]²`.
pub fn index_of_coincidence(p: &Povm, rho: &HermitianOperator) -> Result<f64> {
    if rho.dim() != p.dim() {
        return Err(Error::DimMismatch(p.dim(), rho.dim()));
    }
    Ok(p.effects()
        .iter()
        .map(|e| rho.trace_product(e).max(0.0).powi(2))
        .sum())
}

// ---------------------------------------------------------------------------
// Closed-form bounds

fn check_dim(d: usize) -> Result<f64> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(d as f64)
    }
}

/// `log d`: ceiling on accessible information and informational power.
pub fn holevo_bound(d: usize) -> Result<f64> {
    Ok(check_dim(d)?.log2())
}

/// `log d − (1/ln 2) Σ_{n=2}^d 1/n`: floor over rank-one POVMs (and SIC sets).
pub fn scrooge_lower(d: usize) -> Result<f64> {
    let df = check_dim(d)?;
    let tail: f64 = (2..=d).map(|n| 1.0 / n as f64).sum();
    Ok(df.log2() - tail / LN_2)
}

/// `log(2d/(d+1))`: ceiling for SIC ensembles and SIC POVMs.
pub fn sic_upper(d: usize) -> Result<f64> {
    let df = check_dim(d)?;
    Ok((2.0 * df / (df + 1.0)).log2())
}

/// `log(d(d+1)/2)`: floor on the outcome entropy of a pure state under a SIC POVM.
pub fn rastegin_floor(d: usize) -> Result<f64> {
    let df = check_dim(d)?;
    Ok((df * (df + 1.0) / 2.0).log2())
}

/// Limit of [`scrooge_lower`] as `d → ∞`: `(1 − γ)/ln 2`.
pub fn scrooge_asymptote() -> f64 {
    (1.0 - EULER_GAMMA) / LN_2
}

/// Limit of [`sic_upper`] as `d → ∞`.
pub fn sic_upper_asymptote() -> f64 {
    1.0
}

/// The d²×d² joint distribution of a SIC ensemble `{Π_x/d}` measured by the
/// SIC POVM `{Π_y}`: `1/d³` on the diagonal and `1/(d³(d+1))` elsewhere.
pub fn sic_pretty_good_joint(d: usize) -> Result<JointDistribution> {
    let df = check_dim(d)?;
    let n = d * d;
    let diag = 1.0 / (df * df * df);
    let off = diag / (df + 1.0);
    let probs = (0..n * n)
        .map(|k| if k / n == k % n { diag } else { off })
        .collect();
    JointDistribution::from_row_major(n, n, probs)
}

/// `−Σ count·p log p` for a table described by its distinct entries.
fn entropy_of_multiset(entries: &[(f64, f64)]) -> f64 {
    entries
        .iter()
        .map(|&(p, count)| count * surprisal_term(p))
        .sum()
}

/// Mutual information of the pretty-good pairing of a d-dimensional SIC
/// ensemble with its SIC POVM.
///
/// Evaluates the Shannon sums over the entries of [`sic_pretty_good_joint`],
/// grouped by value so that large `d` stays cheap; the dense evaluation is the
/// reference for small `d`.
pub fn pg_sic_value(d: usize) -> Result<f64> {
    let df = check_dim(d)?;
    let n = df * df;
    let diag = 1.0 / (df * df * df);
    let off = diag / (df + 1.0);
    let row = diag + (n - 1.0) * off;
    let h_xy = entropy_of_multiset(&[(diag, n), (off, n * (n - 1.0))]);
    let h_x = entropy_of_multiset(&[(row, n)]);
    Ok((2.0 * h_x - h_xy).max(0.0))
}

/// The coefficient form `(2d/(d²(d+1))) log d − ((d−1)/(d²(d+1))) log(d+1)`
/// sometimes quoted for the pretty-good SIC value. It does not match
/// [`pg_sic_value`]; it is reported only to flag the discrepancy.
pub fn pg_sic_coefficient_form(d: usize) -> Result<f64> {
    let df = check_dim(d)?;
    let denom = df * df * (df + 1.0);
    Ok(2.0 * df / denom * df.log2() - (df - 1.0) / denom * (df + 1.0).log2())
}

/// All dimension-dependent bounds, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSet {
    pub dim: usize,
    pub holevo: f64,
    pub scrooge_lower: f64,
    pub sic_upper: f64,
    pub rastegin_cond: f64,
    pub pg_sic_value: f64,
    /// Value of [`pg_sic_coefficient_form`]; disagrees with `pg_sic_value`.
    pub pg_sic_coefficient_form: f64,
}

impl BoundSet {
    /// `scrooge_lower ≤ sic_upper ≤ holevo` and `pg_sic_value ≤ scrooge_lower`.
    pub fn is_ordered(&self) -> bool {
        self.pg_sic_value <= self.scrooge_lower
            && self.scrooge_lower <= self.sic_upper
            && self.sic_upper <= self.holevo
    }
}

pub fn bounds_for_dimension(d: usize) -> Result<BoundSet> {
    let set = BoundSet {
        dim: d,
        holevo: holevo_bound(d)?,
        scrooge_lower: scrooge_lower(d)?,
        sic_upper: sic_upper(d)?,
        rastegin_cond: rastegin_floor(d)?,
        pg_sic_value: pg_sic_value(d)?,
        pg_sic_coefficient_form: pg_sic_coefficient_form(d)?,
    };
    debug_assert!(set.is_ordered(), "bound ordering violated at d={d}");
    Ok(set)
}
