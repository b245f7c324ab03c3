#![allow(dead_code)]

use centangle::haar::sample_haar_state_indexed;
use centangle::stabilizer::{graph_state_group, random_graph, PauliString, StabilizerGroup};
use centangle::statevec::{DensityMatrix, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn random_state(n: usize, seed: u64, index: u64) -> PureState {
    sample_haar_state_indexed(n, seed, index).unwrap()
}

/// A random mixture of `terms` Haar-random pure states.
pub fn random_mixed(n: usize, terms: usize, r: &mut ChaCha20Rng) -> DensityMatrix {
    let weights: Vec<f64> = (0..terms).map(|_| r.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    let mut acc: Option<DensityMatrix> = None;
    let mut mass = 0.0;
    for (i, w) in weights.iter().enumerate() {
        let p = w / total;
        let rho = random_state(n, r.random(), i as u64).to_density();
        acc = Some(match acc {
            None => rho,
            Some(prev) => {
                let keep = mass / (mass + p);
                prev.mix(&rho, keep).unwrap()
            }
        });
        mass += p;
    }
    acc.unwrap()
}

/// Conjugates every qubit by a random element of the six single-qubit
/// Clifford permutations of {X, Y, Z} and mixes generators by random row
/// operations. Weights and commutation are preserved.
pub fn random_stabilizer_group(n: usize, r: &mut ChaCha20Rng) -> StabilizerGroup {
    let g = random_graph(n, r).unwrap();
    let mut gens: Vec<PauliString> = graph_state_group(&g).generators().to_vec();
    for q in 0..n {
        let choice = r.random_range(0..6u8);
        for p in gens.iter_mut() {
            let (x, z) = ((p.x >> q) & 1, (p.z >> q) & 1);
            // Relabel the Pauli on qubit q: (x, z) ∈ {X=(1,0), Z=(0,1), Y=(1,1)}.
            let idx = match (x, z) {
                (0, 0) => continue,
                (1, 0) => 0,
                (0, 1) => 1,
                _ => 2,
            };
            let perm: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let (nx, nz) = [(1, 0), (0, 1), (1, 1)][perm[choice as usize][idx]];
            p.x = (p.x & !(1 << q)) | (nx << q);
            p.z = (p.z & !(1 << q)) | (nz << q);
        }
    }
    for _ in 0..2 * n {
        let a = r.random_range(0..n);
        let b = r.random_range(0..n);
        if a != b {
            gens[a] = gens[a].mul(&gens[b]);
        }
    }
    StabilizerGroup::new(n, gens).unwrap()
}
