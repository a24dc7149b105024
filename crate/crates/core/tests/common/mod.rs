//! Random generators and property checks shared by the property tests and
//! the acceptance harness. Every check returns `Err` with a description of
//! the first violation.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use sicinfo::hilbert::{
    eigh, op_inv_sqrt, op_sqrt, sum_operators, support_projector, HermitianOperator,
    PureStateVector, C64, RECON_TOL,
};
use sicinfo::infotheory::{
    self, conditional_output_entropy, ensemble_information, holevo_bound, index_of_coincidence,
    joint_distribution, pg_sic_value, rastegin_floor, scrooge_lower, JointDistribution,
};
use sicinfo::optimize::{self, HaarSampler};
use sicinfo::sic;
use sicinfo::states::{
    average_state, pretty_good_ensemble, pretty_good_povm, sic_ensemble_from_povm,
    support_restriction, Ensemble, Povm, SUM_TOL,
};

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha20Rng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn gaussian_vector(rng: &mut ChaCha20Rng, d: usize) -> DVector<C64> {
    DVector::from_fn(d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_hermitian(rng: &mut ChaCha20Rng, d: usize) -> HermitianOperator {
    let g = gaussian_matrix(rng, d, d);
    HermitianOperator::from_matrix((&g + g.adjoint()).scale(0.5)).unwrap()
}

/// `G G†` with `G` a d×rank Gaussian matrix.
pub fn random_psd(rng: &mut ChaCha20Rng, d: usize, rank: usize) -> HermitianOperator {
    let g = gaussian_matrix(rng, d, rank);
    HermitianOperator::from_matrix(&g * g.adjoint()).unwrap()
}

/// Ensemble of `n` mixed states with generic (full-rank) average.
pub fn random_ensemble(rng: &mut ChaCha20Rng, d: usize, n: usize) -> Ensemble {
    // the first element is full rank, so the sum is invertible
    let ops: Vec<HermitianOperator> = (0..n)
        .map(|k| {
            let rank = if k == 0 {
                d
            } else {
                1 + rng.random_range(0..d)
            };
            random_psd(rng, d, rank)
        })
        .collect();
    let total: f64 = ops.iter().map(HermitianOperator::trace).sum();
    Ensemble::new(ops.iter().map(|o| o.scale(1.0 / total)).collect()).unwrap()
}

/// POVM `{S^{-1/2} A_k S^{-1/2}}` from random positive `A_k`.
pub fn random_povm(rng: &mut ChaCha20Rng, d: usize, n: usize) -> Povm {
    // the first element is full rank, so the sum is invertible
    let ops: Vec<HermitianOperator> = (0..n)
        .map(|k| {
            let rank = if k == 0 {
                d
            } else {
                1 + rng.random_range(0..d)
            };
            random_psd(rng, d, rank)
        })
        .collect();
    let inv = op_inv_sqrt(&sum_operators(d, &ops)).unwrap();
    Povm::new(ops.iter().map(|a| a.sandwich(&inv)).collect()).unwrap()
}

pub fn random_joint(rng: &mut ChaCha20Rng, rows: usize, cols: usize) -> JointDistribution {
    let mut probs: Vec<f64> = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
    // sprinkle exact zeros so the 0·log 0 convention is exercised
    for p in probs.iter_mut() {
        if rng.random::<f64>() < 0.2 {
            *p = 0.0;
        }
    }
    probs[0] += 1e-3;
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    JointDistribution::from_row_major(rows, cols, probs).unwrap()
}

/// Every constructed SIC POVM, with a label.
pub fn sic_povms() -> Vec<(&'static str, Povm)> {
    vec![
        ("tetrahedral", sic::tetrahedral_povm()),
        ("qutrit", sic::qutrit_sic_povm()),
    ]
}

/// Every constructed SIC set (POVMs and ensembles), with a label.
pub fn sic_sets() -> Vec<(String, Vec<HermitianOperator>)> {
    let mut sets: Vec<(String, Vec<HermitianOperator>)> = Vec::new();
    for (name, p) in sic_povms() {
        sets.push((format!("{name} povm"), p.effects().to_vec()));
        sets.push((
            format!("{name} ensemble"),
            sic_ensemble_from_povm(&p).unwrap().into_states(),
        ));
    }
    sets.push((
        "antitetrahedral ensemble".into(),
        sic::antitetrahedral_ensemble().into_states(),
    ));
    sets.push((
        "qubit weyl-heisenberg povm".into(),
        sic::wh_covariant_povm(&qubit_wh_fiducial()).into_effects(),
    ));
    sets
}

/// Fiducial with Bloch vector (1,1,1)/√3.
pub fn qubit_wh_fiducial() -> PureStateVector {
    let theta = (1.0 / 3f64.sqrt()).acos();
    let phase = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    PureStateVector::new(vec![
        C64::new((theta / 2.0).cos(), 0.0),
        phase * (theta / 2.0).sin(),
    ])
    .unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// hilbert

pub fn check_eigen_sum_is_trace(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let d = 2 + i % 5;
        let a = random_hermitian(&mut r, d);
        let sum: f64 = eigh(&a).values.iter().sum();
        ensure((sum - a.trace()).abs() <= RECON_TOL, || {
            format!("sample {i}: eigenvalue sum {sum} vs trace {}", a.trace())
        })?;
    }
    Ok(())
}

pub fn check_sqrt_idempotence(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let d = 2 + i % 5;
        let rank = 1 + i % d;
        let a = random_psd(&mut r, d, rank);
        let s = op_sqrt(&a).map_err(|e| e.to_string())?;
        let squared = HermitianOperator::from_matrix(s.as_dmatrix() * s.as_dmatrix()).unwrap();
        let again = op_sqrt(&squared).map_err(|e| e.to_string())?;
        let err = again.max_abs_diff(&s);
        ensure(err <= 10.0 * RECON_TOL, || {
            format!("sample {i}: sqrt(sqrt(A)^2) off by {err}")
        })?;
    }
    Ok(())
}

pub fn check_inv_sqrt_projector(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let d = 2 + i % 5;
        let rank = 1 + i % d;
        let a = random_psd(&mut r, d, rank);
        let inv = op_inv_sqrt(&a).map_err(|e| e.to_string())?;
        let p = a.sandwich(&inv);
        let err = p.max_abs_diff(&support_projector(&a));
        ensure(err <= RECON_TOL, || {
            format!("sample {i} (rank {rank}): projector off by {err}")
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// states

pub fn check_pretty_good_povm_valid(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let d = 2 + i % 3;
        let e = random_ensemble(&mut r, d, 1 + i % 7);
        pretty_good_povm(&e).map_err(|err| format!("sample {i}: {err}"))?;
    }
    Ok(())
}

pub fn check_average_state_identity(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let d = 2 + i % 3;
        let p = random_povm(&mut r, d, d + i % 6);
        let rho = random_psd(&mut r, d, d);
        let rho = rho.scale(1.0 / rho.trace());
        let e = pretty_good_ensemble(&p, &rho).map_err(|err| err.to_string())?;
        let err = average_state(&e).max_abs_diff(&rho);
        ensure(err <= SUM_TOL, || {
            format!("sample {i}: average state off by {err}")
        })?;
    }
    Ok(())
}

pub fn check_duality_round_trip(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let d = 2 + i % 3;
        let p = random_povm(&mut r, d, d + i % 6);
        let rho = random_psd(&mut r, d, d);
        let rho = rho.scale(1.0 / rho.trace());
        let e = pretty_good_ensemble(&p, &rho).map_err(|err| err.to_string())?;
        let back = pretty_good_povm(&e).map_err(|err| err.to_string())?;
        for (y, (a, b)) in p.effects().iter().zip(back.effects()).enumerate() {
            let err = a.max_abs_diff(b);
            ensure(err <= RECON_TOL, || {
                format!("sample {i}, effect {y}: off by {err}")
            })?;
        }
    }
    Ok(())
}

/// Random ensembles living in the support of a rank-deficient `rho`.
pub fn check_restriction_preserves_born(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let d = 3 + i % 3;
        let rank = 1 + i % (d - 1);
        let frame = gaussian_matrix(&mut r, d, rank);
        let basis = frame.qr().q();
        let states: Vec<HermitianOperator> = (0..1 + i % 4)
            .map(|_| random_psd(&mut r, rank, rank).embed(&basis))
            .collect();
        let total: f64 = states.iter().map(HermitianOperator::trace).sum();
        let e = Ensemble::new(states.iter().map(|s| s.scale(1.0 / total)).collect()).unwrap();
        let rho = average_state(&e);
        let p = random_povm(&mut r, d, 2 + i % 5);
        let restriction = support_restriction(&p, &rho).map_err(|err| err.to_string())?;
        ensure(restriction.rank() == rank, || {
            format!("sample {i}: support rank {} != {rank}", restriction.rank())
        })?;
        for (x, rho_x) in e.states().iter().enumerate() {
            let small = restriction.restrict(rho_x);
            for (y, (big_effect, small_effect)) in p
                .effects()
                .iter()
                .zip(restriction.povm.effects())
                .enumerate()
            {
                let before = rho_x.trace_product(big_effect);
                let after = small.trace_product(small_effect);
                ensure((before - after).abs() <= RECON_TOL, || {
                    format!("sample {i}: p({x},{y}) {before} -> {after}")
                })?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// infotheory

pub fn check_entropy_chain_rule(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let j = random_joint(&mut r, 1 + i % 6, 1 + (i / 6) % 6);
        let lhs = j.joint_entropy();
        let rhs = j.entropy_x() + j.conditional_entropy_by_rows();
        ensure((lhs - rhs).abs() <= 10.0 * SUM_TOL, || {
            format!("sample {i}: H(X,Y)={lhs} vs H(X)+H(Y|X)={rhs}")
        })?;
        let mi = infotheory::mutual_information(&j);
        ensure(
            mi >= 0.0 && mi <= j.entropy_x().min(j.entropy_y()) + 10.0 * SUM_TOL,
            || format!("sample {i}: I={mi} outside [0, min(H(X),H(Y))]"),
        )?;
    }
    Ok(())
}

pub fn check_holevo_ceiling(per_dim: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for d in 2..=4 {
        let ceiling = holevo_bound(d).unwrap();
        for i in 0..per_dim {
            let e = random_ensemble(&mut r, d, 1 + i % (2 * d * d));
            let p = random_povm(&mut r, d, 1 + i % (2 * d * d));
            let mi = ensemble_information(&e, &p).map_err(|err| err.to_string())?;
            ensure(mi <= ceiling + 10.0 * SUM_TOL, || {
                format!("d={d}, sample {i}: I={mi} > log d = {ceiling}")
            })?;
        }
    }
    Ok(())
}

/// `I(e, p)` equals the information of `{ρ^{1/2} Π_y ρ^{1/2}}` read out by
/// `{ρ^{-1/2} ρ_x ρ^{-1/2}}`, with the roles of X and Y swapped.
pub fn check_duality_identity(count: usize, seed: u64, tol: f64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let d = 2 + i % 3;
        let e = random_ensemble(&mut r, d, d + i % 5);
        let p = random_povm(&mut r, d, d + (i / 5) % 5);
        let rho = average_state(&e);
        let direct = joint_distribution(&e, &p).map_err(|err| err.to_string())?;
        let distorted = pretty_good_ensemble(&p, &rho).map_err(|err| err.to_string())?;
        let readout = pretty_good_povm(&e).map_err(|err| err.to_string())?;
        let dual = joint_distribution(&distorted, &readout).map_err(|err| err.to_string())?;
        for x in 0..direct.rows() {
            for y in 0..direct.cols() {
                let (a, b) = (direct.get(x, y), dual.get(y, x));
                ensure((a - b).abs() <= tol, || {
                    format!("sample {i}: p({x},{y}) {a} vs {b}")
                })?;
            }
        }
        let (a, b) = (
            infotheory::mutual_information(&direct),
            infotheory::mutual_information(&dual),
        );
        ensure((a - b).abs() <= tol, || {
            format!("sample {i}: I {a} vs dual {b}")
        })?;
    }
    Ok(())
}

pub fn check_rastegin_floor(count: usize, seed: u64, tol: f64) -> Check {
    for (name, p) in sic_povms() {
        let floor = rastegin_floor(p.dim()).unwrap();
        let mut sampler = HaarSampler::new(p.dim(), seed);
        for i in 0..count {
            let psi = sampler.haar_state();
            let h = conditional_output_entropy(&p, &psi).unwrap();
            ensure(h >= floor - tol, || {
                format!("{name}, sample {i}: H={h} < {floor}")
            })?;
        }
    }
    Ok(())
}

/// Returns the largest standard deviation seen.
pub fn check_coincidence_constancy(count: usize, seed: u64) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for (name, p) in sic_povms() {
        let d = p.dim() as f64;
        let expected = 2.0 / (d * (d + 1.0));
        let mut sampler = HaarSampler::new(p.dim(), seed);
        let values: Vec<f64> = (0..count)
            .map(|_| {
                let rho = sicinfo::hilbert::outer(&sampler.haar_state());
                index_of_coincidence(&p, &rho).unwrap()
            })
            .collect();
        let mean = values.iter().sum::<f64>() / count as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count as f64;
        let sd = var.sqrt();
        worst = worst.max(sd);
        ensure(sd < 1e-9, || format!("{name}: stddev {sd}"))?;
        ensure((mean - expected).abs() < 1e-9, || {
            format!("{name}: mean {mean} vs {expected}")
        })?;
    }
    Ok(worst)
}

pub fn check_average_operator(tol: f64) -> Check {
    for (name, set) in sic_sets() {
        let d = set[0].dim();
        let lambda = set[0].trace();
        let total = sum_operators(d, &set);
        let err =
            total.frobenius_distance(&HermitianOperator::identity(d).scale(d as f64 * lambda));
        ensure(err <= tol, || format!("{name}: ‖Σ X_x − dλ𝟙‖ = {err}"))?;
    }
    Ok(())
}

pub fn check_pg_dominance(dmax: usize) -> Check {
    for d in 2..=dmax {
        let pg = pg_sic_value(d).unwrap();
        let floor = scrooge_lower(d).unwrap();
        ensure(pg <= floor, || format!("d={d}: pg {pg} > scrooge {floor}"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// optimize

/// Step used for the central differences below.
const FD_STEP: f64 = 1e-6;

/// Real coordinate direction `k` of `C^d ≅ R^{2d}`.
fn direction(d: usize, k: usize) -> DVector<C64> {
    let mut v = DVector::zeros(d);
    v[k / 2] = if k.is_multiple_of(2) {
        C64::new(1.0, 0.0)
    } else {
        C64::new(0.0, 1.0)
    };
    v
}

fn normalize(v: DVector<C64>) -> DVector<C64> {
    let n = v.norm();
    v.unscale(n)
}

/// Relative error between a Riemannian gradient and central differences of
/// `f ∘ normalize` along all real coordinates.
fn fd_relative_error<F: Fn(&DVector<C64>) -> f64>(
    f: F,
    psi: &DVector<C64>,
    grad: &DVector<C64>,
) -> f64 {
    let d = psi.len();
    let mut diff2 = 0.0;
    let mut norm2 = 0.0;
    for k in 0..2 * d {
        let e = direction(d, k);
        let plus = f(&normalize(psi + e.scale(FD_STEP)));
        let minus = f(&normalize(psi - e.scale(FD_STEP)));
        let fd = (plus - minus) / (2.0 * FD_STEP);
        let analytic = if k % 2 == 0 {
            grad[k / 2].re
        } else {
            grad[k / 2].im
        };
        diff2 += (fd - analytic).powi(2);
        norm2 += analytic.powi(2);
    }
    diff2.sqrt() / norm2.sqrt().max(1e-12)
}

/// Both gradients (entropy descent and see-saw ascent) at `count` random points each.
pub fn check_gradients(count: usize, seed: u64) -> Result<f64, String> {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    let mut povms = sic_povms();
    povms.push(("random d=3", random_povm(&mut r, 3, 5)));
    povms.push(("random d=4", random_povm(&mut r, 4, 7)));
    for i in 0..count {
        let (name, p) = &povms[i % povms.len()];
        let d = p.dim();
        let psi = normalize(gaussian_vector(&mut r, d));
        let g = optimize::output_entropy_gradient(p, &psi);
        let err = fd_relative_error(
            |v| infotheory::entropy_bits(&p.outcome_probabilities(v)),
            &psi,
            &g,
        );
        worst = worst.max(err);
        ensure(err < 1e-5, || {
            format!("{name}, point {i}: entropy gradient rel. error {err}")
        })?;

        let n = 2 + i % (d * d - 1);
        let mut weights: Vec<f64> = (0..n).map(|_| r.random::<f64>() + 0.05).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let states: Vec<DVector<C64>> = (0..n)
            .map(|_| normalize(gaussian_vector(&mut r, d)))
            .collect();
        let grads = optimize::ensemble_objective_gradient(p, &weights, &states);
        for (x, gx) in grads.iter().enumerate() {
            let err = fd_relative_error(
                |v| {
                    let mut moved = states.clone();
                    moved[x] = v.clone();
                    optimize::ensemble_objective(p, &weights, &moved)
                },
                &states[x],
                gx,
            );
            worst = worst.max(err);
            ensure(err < 1e-5, || {
                format!("{name}, point {i}, state {x}: ensemble gradient rel. error {err}")
            })?;
        }
    }
    Ok(worst)
}
