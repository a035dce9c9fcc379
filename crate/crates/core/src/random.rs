//! Seeded generators of random pmfs, channels and joints for sweeps and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::pmf::{JointPMF, ProbVec};
use crate::sdpi::Channel;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Flat Dirichlet sample, floored away from zero so the result is fully supported.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(Exp1).max(1e-9)).collect()
}

pub fn random_pmf<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProbVec {
    ProbVec::from_weights(&random_weights(rng, n)).expect("positive weights")
}

pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, inputs: usize, outputs: usize) -> Channel {
    let rows = (0..inputs).map(|_| random_pmf(rng, outputs).masses().to_vec()).collect();
    Channel::new(rows).expect("rows are pmfs with full support")
}

pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, m: usize, k: usize) -> JointPMF {
    let flat = random_pmf(rng, m * k);
    let rows = (0..m).map(|x| flat.masses()[x * k..(x + 1) * k].to_vec()).collect();
    JointPMF::new(rows).expect("flattened pmf")
}

/// A member of `P_n(ρ)`: weights drawn uniformly from `[1, ρ]`.
pub fn random_rho_member<R: Rng + ?Sized>(rng: &mut R, n: usize, rho: f64) -> ProbVec {
    let w: Vec<f64> = (0..n).map(|_| 1.0 + (rho - 1.0) * rng.random::<f64>()).collect();
    ProbVec::from_weights(&w).expect("positive weights")
}

/// `(P, Q)` with `P = Q T` for a doubly stochastic `T` built as a random mixture of permutations, so `P ≺ Q`.
pub fn random_majorized_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (ProbVec, ProbVec) {
    let q = random_pmf(rng, n);
    let perms = 1 + rng.random_range(0..4);
    let weights = random_weights(rng, perms);
    let total: f64 = weights.iter().sum();
    let mut p = vec![0.0; n];
    for w in weights {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        for (i, &j) in perm.iter().enumerate() {
            p[i] += w / total * q.get(j);
        }
    }
    (ProbVec::from_weights(&p).expect("mixture of a pmf"), q)
}
