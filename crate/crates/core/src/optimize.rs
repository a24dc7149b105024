//! Optimization over pure states.
//!
//! - [`min_output_entropy`]: multi-start Riemannian steepest descent of the
//!   outcome entropy `H(Y|X=x)` over the unit sphere of `C^d`.
//! - [`informational_power_lower_bound`]: see-saw search for the ensemble
//!   that is most informative for a fixed POVM; alternates Blahut–Arimoto
//!   prior updates with steepest ascent of the pure states.
//! - [`scrooge_lower_bound_estimate`], [`uniform_povm_approximant`]: finite
//!   Haar-sample surrogates of the uniform (Scrooge) ensemble and POVM.
//!
//! Every start owns a private ChaCha20 stream keyed by `(seed, start index)`,
//! so reports are reproducible regardless of thread scheduling.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hilbert::{
    ket_bra, op_inv_sqrt, sum_operators, HermitianOperator, PureStateVector, C64,
};
use crate::infotheory::{self, entropy_bits, JointDistribution, ZERO_PROB};
use crate::states::{Ensemble, OperatorSetFile, Povm};
use crate::{Error, Result};

/// Stop when the objective changes by less than this per step.
pub const CONV_TOL: f64 = 1e-10;
/// Stop when the Riemannian gradient norm falls below this.
pub const GRAD_TOL: f64 = 1e-8;
/// Iteration cap for a single descent run.
pub const MAX_ITERATIONS: usize = 200;
/// Backtracking contraction factor.
pub const ARMIJO_FACTOR: f64 = 0.5;
/// Sufficient-increase constant of the Armijo test.
const ARMIJO_C: f64 = 1e-4;
/// Smallest step tried before a line search gives up.
const MIN_STEP: f64 = 1e-16;
/// Blahut–Arimoto sweeps per see-saw round.
const MAX_PRIOR_SWEEPS: usize = 2000;
/// See-saw rounds per start.
const MAX_ROUNDS: usize = 200;
/// Weights below this are reported as having hit zero.
const ZERO_WEIGHT: f64 = 1e-9;

/// Identifier of the pseudo-random generator recorded in reports.
pub const RNG_ALGORITHM: &str =
    "ChaCha20 (rand_chacha 0.9), seed_from_u64(seed), stream = start index";

/// Deterministic stream of Haar-random pure states.
#[derive(Clone, Debug)]
pub struct HaarSampler {
    dim: usize,
    rng: ChaCha20Rng,
}

impl HaarSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self::with_stream(dim, seed, 0)
    }

    /// Independent stream `stream` under the same seed.
    pub fn with_stream(dim: usize, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { dim, rng }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Unnormalized vector of i.i.d. standard complex Gaussians.
    fn gaussian_vector(&mut self) -> DVector<C64> {
        let rng = &mut self.rng;
        DVector::from_fn(self.dim, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    /// Next Haar-distributed pure state.
    pub fn haar_state(&mut self) -> PureStateVector {
        loop {
            if let Ok(v) = PureStateVector::normalized(self.gaussian_vector()) {
                return v;
            }
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Free-function form of [`HaarSampler::haar_state`].
pub fn haar_state(sampler: &mut HaarSampler) -> PureStateVector {
    sampler.haar_state()
}

/// A pure state with its prior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedState {
    pub weight: f64,
    /// `[re, im]` pairs.
    pub amplitudes: Vec<[f64; 2]>,
}

impl WeightedState {
    fn new(weight: f64, v: &DVector<C64>) -> Self {
        Self {
            weight,
            amplitudes: v.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn vector(&self) -> DVector<C64> {
        DVector::from_iterator(
            self.amplitudes.len(),
            self.amplitudes.iter().map(|&[a, b]| C64::new(a, b)),
        )
    }

    pub fn state(&self) -> Result<PureStateVector> {
        PureStateVector::from_dvector(self.vector())
    }
}

/// Which quantity an [`OptimizationReport`] optimized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Minimum of `H(Y|X=x)` over pure states.
    MinOutputEntropy,
    /// Lower bound on the informational power.
    InformationalPower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub objective: Objective,
    pub dim: usize,
    pub best_value: f64,
    pub best_states: Vec<WeightedState>,
    pub best_start: usize,
    pub starts: usize,
    pub converged_starts: usize,
    pub iterations_per_start: Vec<usize>,
    pub values_per_start: Vec<f64>,
    pub seed: u64,
    pub rng: String,
    pub tolerance_used: f64,
    pub grad_tol: f64,
    pub max_iterations: usize,
    /// See-saw only: support cap on the ensemble size.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_support: Option<usize>,
    /// See-saw only: whether any prior of the best ensemble dropped to zero.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zero_weight_hit: Option<bool>,
    /// See-saw only: the best ensemble in the operator-list file format.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ensemble: Option<OperatorSetFile>,
}

impl OptimizationReport {
    /// Re-evaluates the objective on the reported argument.
    pub fn recompute(&self, p: &Povm) -> Result<f64> {
        match self.objective {
            Objective::MinOutputEntropy => {
                let psi = self
                    .best_states
                    .first()
                    .ok_or_else(|| Error::InvalidInput("report carries no state".into()))?
                    .state()?;
                infotheory::conditional_output_entropy(p, &psi)
            }
            Objective::InformationalPower => {
                let e = self.best_ensemble()?;
                infotheory::ensemble_information(&e, p)
            }
        }
    }

    pub fn best_ensemble(&self) -> Result<Ensemble> {
        let weights: Vec<f64> = self.best_states.iter().map(|s| s.weight).collect();
        let states = self
            .best_states
            .iter()
            .map(WeightedState::state)
            .collect::<Result<Vec<_>>>()?;
        Ensemble::from_pure_states(&weights, &states)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

// ---------------------------------------------------------------------------
// Objectives and gradients

fn probabilities(p: &Povm, psi: &DVector<C64>) -> Vec<f64> {
    p.outcome_probabilities(psi)
}

/// Removes the component along `ψ` (the normal of the sphere at `ψ`).
fn project_tangent(psi: &DVector<C64>, g: DVector<C64>) -> DVector<C64> {
    let radial = psi.dotc(&g).re;
    g - psi.scale(radial)
}

fn retract(v: DVector<C64>) -> DVector<C64> {
    let n = v.norm();
    v.unscale(n)
}

/// Clamped `log2` used inside gradients, finite at `p = 0`.
fn log2_clamped(p: f64) -> f64 {
    p.max(1e-300).log2()
}

/// Riemannian gradient of `ψ ↦ H(⟨ψ|Π_y|ψ⟩)` at a unit vector, in the real
/// inner product `Re⟨a|b⟩` on `C^d ≅ R^{2d}`.
pub fn output_entropy_gradient(p: &Povm, psi: &DVector<C64>) -> DVector<C64> {
    let probs = probabilities(p, psi);
    let mut g = DVector::zeros(psi.len());
    for (effect, &py) in p.effects().iter().zip(&probs) {
        g += effect.apply(psi).scale(-2.0 * log2_clamped(py));
    }
    project_tangent(psi, g)
}

/// Mutual information of pure states `ψ_x` with priors `w_x` against `p`.
pub fn ensemble_objective(p: &Povm, weights: &[f64], states: &[DVector<C64>]) -> f64 {
    let channel: Vec<Vec<f64>> = states.iter().map(|s| probabilities(p, s)).collect();
    information_of_channel(weights, &channel)
}

fn output_marginal(weights: &[f64], channel: &[Vec<f64>]) -> Vec<f64> {
    let mut q = vec![0.0; channel.first().map_or(0, Vec::len)];
    for (w, row) in weights.iter().zip(channel) {
        for (acc, py) in q.iter_mut().zip(row) {
            *acc += w * py;
        }
    }
    q
}

fn information_of_channel(weights: &[f64], channel: &[Vec<f64>]) -> f64 {
    let q = output_marginal(weights, channel);
    let h_cond: f64 = weights
        .iter()
        .zip(channel)
        .map(|(w, row)| w * entropy_bits(row))
        .sum();
    entropy_bits(&q) - h_cond
}

/// Riemannian gradient of [`ensemble_objective`] with respect to each `ψ_x`.
pub fn ensemble_objective_gradient(
    p: &Povm,
    weights: &[f64],
    states: &[DVector<C64>],
) -> Vec<DVector<C64>> {
    let channel: Vec<Vec<f64>> = states.iter().map(|s| probabilities(p, s)).collect();
    let q = output_marginal(weights, &channel);
    states
        .iter()
        .zip(weights)
        .zip(&channel)
        .map(|((psi, &w), row)| {
            let mut g = DVector::zeros(psi.len());
            if w > 0.0 {
                for ((effect, &pyx), &qy) in p.effects().iter().zip(row).zip(&q) {
                    let coeff = 2.0 * w * (log2_clamped(pyx) - log2_clamped(qy));
                    g += effect.apply(psi).scale(coeff);
                }
            }
            project_tangent(psi, g)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Entropy minimization

/// One descent run from a fixed starting point.
#[derive(Clone, Debug)]
pub struct DescentRun {
    pub state: DVector<C64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after every accepted step, starting with the initial value.
    pub trace: Vec<f64>,
}

/// Steepest descent of the outcome entropy from `start`, with normalization
/// retraction and Armijo backtracking from unit step.
pub fn descend_output_entropy(p: &Povm, start: &PureStateVector) -> DescentRun {
    let objective = |v: &DVector<C64>| entropy_bits(&probabilities(p, v));
    let mut psi = start.amplitudes().clone();
    let mut value = objective(&psi);
    let mut trace = vec![value];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let grad = output_entropy_gradient(p, &psi);
        let gnorm2 = grad.norm_squared();
        if gnorm2.sqrt() < GRAD_TOL {
            converged = true;
            break;
        }
        let mut step = 1.0;
        let mut accepted = None;
        while step >= MIN_STEP {
            let candidate = retract(&psi - grad.scale(step));
            let f = objective(&candidate);
            if f <= value - ARMIJO_C * step * gnorm2 {
                accepted = Some((candidate, f));
                break;
            }
            step *= ARMIJO_FACTOR;
        }
        iterations += 1;
        let Some((candidate, f)) = accepted else {
            converged = true;
            break;
        };
        let decrease = value - f;
        psi = candidate;
        value = f;
        trace.push(value);
        if decrease < CONV_TOL {
            converged = true;
            break;
        }
    }
    DescentRun {
        state: psi,
        value,
        iterations,
        converged,
        trace,
    }
}

fn check_starts(p: &Povm, starts: usize) -> Result<()> {
    if starts == 0 {
        return Err(Error::InvalidInput("starts must be at least 1".into()));
    }
    if p.is_empty() {
        return Err(Error::InvalidPovm("no effects".into()));
    }
    Ok(())
}

/// Index of the best value; ties go to the lowest index.
fn best_index(values: &[f64], maximize: bool) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        let better = if maximize {
            v > values[best]
        } else {
            v < values[best]
        };
        if better {
            best = k;
        }
    }
    best
}

/// Minimum outcome entropy over pure states, by multi-start steepest descent
/// from Haar-random seeds.
pub fn min_output_entropy(p: &Povm, starts: usize, seed: u64) -> Result<OptimizationReport> {
    check_starts(p, starts)?;
    let d = p.dim();
    let base = OptimizationReport {
        objective: Objective::MinOutputEntropy,
        dim: d,
        best_value: 0.0,
        best_states: Vec::new(),
        best_start: 0,
        starts,
        converged_starts: 0,
        iterations_per_start: Vec::new(),
        values_per_start: Vec::new(),
        seed,
        rng: RNG_ALGORITHM.to_string(),
        tolerance_used: CONV_TOL,
        grad_tol: GRAD_TOL,
        max_iterations: MAX_ITERATIONS,
        max_support: None,
        zero_weight_hit: None,
        ensemble: None,
    };

    if p.is_trivial() {
        // constant objective
        let psi = PureStateVector::basis(d, 0);
        let value = infotheory::conditional_output_entropy(p, &psi)?;
        return Ok(OptimizationReport {
            best_value: value,
            best_states: vec![WeightedState::new(1.0, psi.amplitudes())],
            converged_starts: starts,
            iterations_per_start: vec![0; starts],
            values_per_start: vec![value; starts],
            ..base
        });
    }

    let runs: Vec<DescentRun> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let start = HaarSampler::with_stream(d, seed, k as u64).haar_state();
            descend_output_entropy(p, &start)
        })
        .collect();

    let values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let best = best_index(&values, false);
    let psi = PureStateVector::normalized(runs[best].state.clone())?;
    let best_value = infotheory::conditional_output_entropy(p, &psi)?;
    Ok(OptimizationReport {
        best_value,
        best_states: vec![WeightedState::new(1.0, psi.amplitudes())],
        best_start: best,
        converged_starts: runs.iter().filter(|r| r.converged).count(),
        iterations_per_start: runs.iter().map(|r| r.iterations).collect(),
        values_per_start: values,
        ..base
    })
}

// ---------------------------------------------------------------------------
// Informational power

/// One see-saw run.
#[derive(Clone, Debug)]
pub struct SeeSawRun {
    pub weights: Vec<f64>,
    pub states: Vec<DVector<C64>>,
    pub value: f64,
    /// Ascent steps plus prior sweeps.
    pub iterations: usize,
    pub converged: bool,
    /// Objective after every prior update and every accepted ascent step.
    pub trace: Vec<f64>,
}

/// Blahut–Arimoto prior update for the classical channel `p(y|x)`.
fn update_priors(weights: &mut [f64], channel: &[Vec<f64>], trace: &mut Vec<f64>) -> usize {
    let mut sweeps = 0;
    while sweeps < MAX_PRIOR_SWEEPS {
        sweeps += 1;
        let q = output_marginal(weights, channel);
        let mut next: Vec<f64> = weights
            .iter()
            .zip(channel)
            .map(|(&w, row)| {
                let divergence: f64 = row
                    .iter()
                    .zip(&q)
                    .filter(|(&pyx, _)| pyx >= ZERO_PROB)
                    .map(|(&pyx, &qy)| pyx * (pyx / qy).log2())
                    .sum();
                w * divergence.exp2()
            })
            .collect();
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|w| *w /= total);
        let change = weights
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        weights.copy_from_slice(&next);
        trace.push(information_of_channel(weights, channel));
        if change < CONV_TOL {
            break;
        }
    }
    sweeps
}

/// Steepest ascent of all states at fixed priors. Returns the number of accepted steps.
fn ascend_states(
    p: &Povm,
    weights: &[f64],
    states: &mut [DVector<C64>],
    trace: &mut Vec<f64>,
) -> usize {
    let mut value = ensemble_objective(p, weights, states);
    let mut steps = 0;
    while steps < MAX_ITERATIONS {
        let grads = ensemble_objective_gradient(p, weights, states);
        let gnorm2: f64 = grads.iter().map(|g| g.norm_squared()).sum();
        if gnorm2.sqrt() < GRAD_TOL {
            break;
        }
        let mut step = 1.0;
        let mut accepted = None;
        while step >= MIN_STEP {
            let candidate: Vec<DVector<C64>> = states
                .iter()
                .zip(&grads)
                .map(|(s, g)| retract(s + g.scale(step)))
                .collect();
            let f = ensemble_objective(p, weights, &candidate);
            if f >= value + ARMIJO_C * step * gnorm2 {
                accepted = Some((candidate, f));
                break;
            }
            step *= ARMIJO_FACTOR;
        }
        let Some((candidate, f)) = accepted else {
            break;
        };
        steps += 1;
        let gain = f - value;
        states.clone_from_slice(&candidate);
        value = f;
        trace.push(value);
        if gain < CONV_TOL {
            break;
        }
    }
    steps
}

/// See-saw from fixed starting states with uniform priors.
pub fn see_saw(p: &Povm, initial: Vec<DVector<C64>>) -> SeeSawRun {
    let k = initial.len();
    let mut states = initial;
    let mut weights = vec![1.0 / k as f64; k];
    let mut value = ensemble_objective(p, &weights, &states);
    let mut trace = vec![value];
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..MAX_ROUNDS {
        let channel: Vec<Vec<f64>> = states.iter().map(|s| probabilities(p, s)).collect();
        iterations += update_priors(&mut weights, &channel, &mut trace);
        iterations += ascend_states(p, &weights, &mut states, &mut trace);
        let next = ensemble_objective(p, &weights, &states);
        let gain = next - value;
        value = next;
        if gain < CONV_TOL {
            converged = true;
            break;
        }
    }
    SeeSawRun {
        weights,
        states,
        value,
        iterations,
        converged,
        trace,
    }
}

/// Certified lower bound on the informational power of `p`.
///
/// Each start draws `max_support` Haar-random states and runs [`see_saw`].
/// The reported value is the mutual information of the returned ensemble,
/// recomputed through the Born rule.
pub fn informational_power_lower_bound(
    p: &Povm,
    starts: usize,
    seed: u64,
    max_support: usize,
) -> Result<OptimizationReport> {
    check_starts(p, starts)?;
    if max_support == 0 {
        return Err(Error::InvalidInput("max_support must be at least 1".into()));
    }
    let d = p.dim();
    let base = OptimizationReport {
        objective: Objective::InformationalPower,
        dim: d,
        best_value: 0.0,
        best_states: Vec::new(),
        best_start: 0,
        starts,
        converged_starts: 0,
        iterations_per_start: Vec::new(),
        values_per_start: Vec::new(),
        seed,
        rng: RNG_ALGORITHM.to_string(),
        tolerance_used: CONV_TOL,
        grad_tol: GRAD_TOL,
        max_iterations: MAX_ITERATIONS,
        max_support: Some(max_support),
        zero_weight_hit: None,
        ensemble: None,
    };

    let (weights, vectors, summary) = if p.is_trivial() {
        // every ensemble yields independent outcomes
        let psi = PureStateVector::basis(d, 0);
        (
            vec![1.0],
            vec![psi.into_dvector()],
            (0usize, starts, vec![0; starts], vec![0.0; starts]),
        )
    } else {
        let runs: Vec<SeeSawRun> = (0..starts)
            .into_par_iter()
            .map(|k| {
                let mut sampler = HaarSampler::with_stream(d, seed, k as u64);
                let initial = (0..max_support)
                    .map(|_| sampler.haar_state().into_dvector())
                    .collect();
                see_saw(p, initial)
            })
            .collect();
        let values: Vec<f64> = runs.iter().map(|r| r.value).collect();
        let best = best_index(&values, true);
        let run = &runs[best];
        (
            run.weights.clone(),
            run.states.clone(),
            (
                best,
                runs.iter().filter(|r| r.converged).count(),
                runs.iter().map(|r| r.iterations).collect(),
                values,
            ),
        )
    };

    let states = vectors
        .into_iter()
        .map(PureStateVector::normalized)
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let ensemble = Ensemble::from_pure_states(&weights, &states)?;
    let best_value = infotheory::ensemble_information(&ensemble, p)?;
    let (best_start, converged_starts, iterations_per_start, values_per_start) = summary;
    Ok(OptimizationReport {
        best_value,
        best_states: weights
            .iter()
            .zip(&states)
            .map(|(&w, s)| WeightedState::new(w, s.amplitudes()))
            .collect(),
        best_start,
        converged_starts,
        iterations_per_start,
        values_per_start,
        zero_weight_hit: Some(weights.iter().any(|&w| w < ZERO_WEIGHT)),
        ensemble: Some(OperatorSetFile::from_ensemble(&ensemble)),
        ..base
    })
}

// ---------------------------------------------------------------------------
// Scrooge surrogates

/// `I(E_N, P_basis)` for `N` Haar-random states with priors `1/N` measured in
/// the computational basis; tends to the rank-one floor `log d − (1/ln 2)Σ_{n=2}^d 1/n`.
pub fn scrooge_lower_bound_estimate(d: usize, samples: usize, seed: u64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if samples < d * d {
        return Err(Error::InvalidInput(format!(
            "need at least d^2 = {} samples, got {samples}",
            d * d
        )));
    }
    let mut sampler = HaarSampler::new(d, seed);
    let n = samples as f64;
    let mut probs = Vec::with_capacity(samples * d);
    for _ in 0..samples {
        let psi = sampler.haar_state();
        probs.extend(psi.amplitudes().iter().map(|z| z.norm_sqr() / n));
    }
    let joint = JointDistribution::from_row_major(samples, d, probs)?;
    Ok(infotheory::mutual_information(&joint))
}

/// Rank-one POVM `{S^{-1/2}|ψ_i⟩⟨ψ_i|S^{-1/2}}` from `n` Haar states, `S = Σ_i |ψ_i⟩⟨ψ_i|`.
pub fn uniform_povm_approximant(d: usize, n: usize, seed: u64) -> Result<Povm> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    if n < d {
        return Err(Error::InvalidInput(format!(
            "need at least d = {d} states, got {n}"
        )));
    }
    let mut sampler = HaarSampler::new(d, seed);
    let mut projectors: Vec<HermitianOperator> = (0..n)
        .map(|_| ket_bra(sampler.haar_state().amplitudes()))
        .collect();
    loop {
        let frame = sum_operators(d, &projectors);
        let inv = op_inv_sqrt(&frame)?;
        match Povm::new(projectors.iter().map(|e| e.sandwich(&inv)).collect()) {
            Ok(p) => return Ok(p),
            // rank-deficient frame (probability zero): redraw the last state
            Err(_) => {
                let last = projectors.len() - 1;
                projectors[last] = ket_bra(sampler.haar_state().amplitudes());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::outer;
    use crate::sic::{qutrit_sic_povm, tetrahedral_povm};

    #[test]
    fn haar_is_deterministic() {
        let a = HaarSampler::new(3, 42).haar_state();
        let b = HaarSampler::new(3, 42).haar_state();
        assert_eq!(a, b);
        let c = HaarSampler::with_stream(3, 42, 1).haar_state();
        assert_ne!(a, c);
    }

    #[test]
    fn haar_mean_projector_is_maximally_mixed() {
        let mut s = HaarSampler::new(2, 9);
        let n = 100_000;
        let mut acc = HermitianOperator::zeros(2);
        let mut overlap = 0.0;
        for _ in 0..n {
            let psi = s.haar_state();
            acc = &acc + &outer(&psi);
            overlap += psi.amplitudes()[0].norm_sqr();
        }
        let mean = acc.scale(1.0 / n as f64);
        assert!(mean.max_abs_diff(&HermitianOperator::identity(2).scale(0.5)) < 0.01);
        assert!((overlap / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn descent_trace_is_monotone() {
        let p = tetrahedral_povm();
        let start = HaarSampler::new(2, 3).haar_state();
        let run = descend_output_entropy(&p, &start);
        for w in run.trace.windows(2) {
            assert!(w[1] <= w[0] + CONV_TOL);
        }
        assert!((run.value - 3f64.log2()).abs() < 1e-6);
    }

    #[test]
    fn min_entropy_rejects_zero_starts() {
        assert!(min_output_entropy(&tetrahedral_povm(), 0, 1).is_err());
    }

    #[test]
    fn trivial_povm_short_circuits() {
        let half = HermitianOperator::identity(2).scale(0.5);
        let p = Povm::new(vec![half.clone(), half]).unwrap();
        let r = informational_power_lower_bound(&p, 3, 1, 4).unwrap();
        assert_eq!(r.best_value, 0.0);
        let r = min_output_entropy(&p, 3, 1).unwrap();
        assert!((r.best_value - 1.0).abs() < 1e-15);
        assert_eq!(r.iterations_per_start, vec![0, 0, 0]);
    }

    #[test]
    fn see_saw_trace_is_monotone() {
        let p = qutrit_sic_povm();
        let mut s = HaarSampler::new(3, 11);
        let init = (0..9).map(|_| s.haar_state().into_dvector()).collect();
        let run = see_saw(&p, init);
        for w in run.trace.windows(2) {
            assert!(w[1] >= w[0] - CONV_TOL, "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn scrooge_estimate_small_sample() {
        let v = scrooge_lower_bound_estimate(2, 4, 1).unwrap();
        assert!(v.is_finite() && v >= 0.0);
        assert!(scrooge_lower_bound_estimate(2, 3, 1).is_err());
        assert!(scrooge_lower_bound_estimate(1, 10, 1).is_err());
    }

    #[test]
    fn approximant_is_povm() {
        let p = uniform_povm_approximant(2, 4, 5).unwrap();
        assert_eq!(p.len(), 4);
        let p = uniform_povm_approximant(3, 2000, 5).unwrap();
        for e in p.effects() {
            assert!((e.trace() - 3.0 / 2000.0).abs() < 3.0 / 2000.0);
        }
        assert!(uniform_povm_approximant(3, 2, 5).is_err());
    }
}
