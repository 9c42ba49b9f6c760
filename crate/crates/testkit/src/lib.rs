//! Seeded generators and closed-form fixtures for the test suites.
//!
//! Every generator is driven by an explicit [`ChaCha8Rng`], so corpora are
//! reproducible from a `u64` seed. The named fixtures are the small processes
//! used throughout the documentation:
//!
//! * [`f1`] — two parents, one childless: `μ = (1,1)`, `w = [[2],[0]]`.
//! * [`f2`] — the symmetric Markov kernel `w = [[½,½],[½,½]]` on `μ = (1,1)`.
//! * [`f5`] — `μ = (1,2)`, `w = [[1,1],[½,0]]`, `μ′ = (2,1)`.
//! * [`bernoulli_dispersion`] / [`bernoulli_mixing`] — one parent splitting
//!   into two children, and two parents merging into one child.

pub mod oracle;
pub mod quantum;

use measure_core::{Observable, Population, TypeSet};
use process_core::Process;
use proptest::prelude::*;
pub use rand::Rng;
use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Deterministic generator from a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Labels `prefix0 … prefix{k-1}`.
pub fn types(prefix: &str, k: usize) -> TypeSet {
    TypeSet::indexed(prefix, k).expect("k ≥ 1")
}

/// Population with weights drawn from `[0.1, 5)`.
pub fn random_population(rng: &mut ChaCha8Rng, types: TypeSet) -> Population {
    let weights = (0..types.len()).map(|_| rng.random_range(0.1..5.0)).collect();
    Population::new(types, weights).expect("positive weights")
}

/// Non-negative `k × k2` kernel with roughly 30% zero entries, occasional
/// childless rows, and at least one positive entry overall.
pub fn random_kernel(rng: &mut ChaCha8Rng, k: usize, k2: usize) -> Vec<Vec<f64>> {
    let mut kernel: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let childless = k > 1 && rng.random_bool(0.1);
            (0..k2)
                .map(|_| if childless || rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.0..3.0) })
                .collect()
        })
        .collect();
    if kernel.iter().flatten().all(|v| *v == 0.0) {
        let i = rng.random_range(0..k);
        let j = rng.random_range(0..k2);
        kernel[i][j] = rng.random_range(0.5..2.0);
    }
    kernel
}

/// Random process with `K, K′ ∈ [1, kmax]` and `μ′` derived from the kernel.
pub fn random_process(rng: &mut ChaCha8Rng, kmax: usize) -> Process {
    let k = rng.random_range(1..=kmax);
    let k2 = rng.random_range(1..=kmax);
    random_process_between(rng, types("s", k), types("t", k2))
}

/// Random process between given type sets, with a random parent population.
pub fn random_process_between(rng: &mut ChaCha8Rng, source: TypeSet, target: TypeSet) -> Process {
    let pop = random_population(rng, source);
    random_process_from(rng, pop, target)
}

/// Random process from a given parent population.
pub fn random_process_from(rng: &mut ChaCha8Rng, pop: Population, target: TypeSet) -> Process {
    let mut kernel = random_kernel(rng, pop.len(), target.len());
    let mass: f64 = kernel.iter().zip(pop.weights()).map(|(row, m)| m * row.iter().sum::<f64>()).sum();
    if mass <= 0.0 {
        let i = (0..pop.len()).find(|&i| pop.weights()[i] > 0.0).expect("N > 0");
        let j = rng.random_range(0..target.len());
        kernel[i][j] = rng.random_range(0.5..2.0);
    }
    Process::from_kernel(pop, target, kernel).expect("kernel has positive mass")
}

/// Random endomorphic process on `K ∈ [1, kmax]` types.
pub fn random_endomorphic(rng: &mut ChaCha8Rng, kmax: usize) -> Process {
    let k = rng.random_range(1..=kmax);
    let t = types("s", k);
    random_process_between(rng, t.clone(), t)
}

/// Random composable pair `(p, q)` with `q.source = p.target`.
pub fn random_composable_pair(rng: &mut ChaCha8Rng, kmax: usize) -> (Process, Process) {
    let p = random_process(rng, kmax);
    let k3 = rng.random_range(1..=kmax);
    let q = random_process_from(rng, p.target().clone(), types("u", k3));
    (p, q)
}

/// Observable with values in `[-2, 2)`.
pub fn random_observable(rng: &mut ChaCha8Rng, types: &TypeSet) -> Observable {
    let values = (0..types.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
    Observable::new(types.clone(), values).expect("length matches")
}

/// Row-stochastic `k × k2` kernel (a Markov kernel when `k = k2`).
pub fn random_stochastic_kernel(rng: &mut ChaCha8Rng, k: usize, k2: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|_| {
            let row: Vec<f64> = (0..k2).map(|_| rng.random_range(0.05..1.0)).collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|v| v / s).collect()
        })
        .collect()
}

/// Two parents `a, b` with unit weight; `a` has two children of a single
/// type, `b` none.
pub fn f1() -> Process {
    let pop = Population::new(TypeSet::new(["a", "b"]).unwrap(), vec![1.0, 1.0]).unwrap();
    Process::from_kernel(pop, TypeSet::new(["c"]).unwrap(), vec![vec![2.0], vec![0.0]]).unwrap()
}

/// Symmetric Markov kernel on two equally weighted types.
pub fn f2() -> Process {
    let t = TypeSet::new(["a", "b"]).unwrap();
    let pop = Population::new(t.clone(), vec![1.0, 1.0]).unwrap();
    Process::from_kernel(pop, t, vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap()
}

/// `μ = (1,2)`, `w = [[1,1],[½,0]]`, `μ′ = (2,1)`.
pub fn f5() -> Process {
    let t = TypeSet::new(["a", "b"]).unwrap();
    let pop = Population::new(t.clone(), vec![1.0, 2.0]).unwrap();
    Process::from_kernel(pop, t, vec![vec![1.0, 1.0], vec![0.5, 0.0]]).unwrap()
}

/// One parent splitting into two children with probabilities `q`, `1 − q`.
pub fn bernoulli_dispersion(q: f64) -> Process {
    let pop = Population::new(TypeSet::new(["p"]).unwrap(), vec![1.0]).unwrap();
    Process::from_kernel(pop, TypeSet::new(["c0", "c1"]).unwrap(), vec![vec![q, 1.0 - q]]).unwrap()
}

/// Two parents with weights `p`, `1 − p` merging into a single child type.
pub fn bernoulli_mixing(p: f64) -> Process {
    let pop = Population::new(TypeSet::new(["p0", "p1"]).unwrap(), vec![p, 1.0 - p]).unwrap();
    Process::from_kernel(pop, TypeSet::new(["c"]).unwrap(), vec![vec![1.0], vec![1.0]]).unwrap()
}

/// Permutation kernel `i ↦ (i + shift) mod k` on a random population.
pub fn permutation(rng: &mut ChaCha8Rng, k: usize, shift: usize) -> Process {
    let t = types("s", k);
    let pop = random_population(rng, t.clone());
    let kernel = (0..k).map(|i| (0..k).map(|j| if j == (i + shift) % k { 1.0 } else { 0.0 }).collect()).collect();
    Process::from_kernel(pop, t, kernel).unwrap()
}

/// Process in selective equilibrium with childbearing fraction exactly
/// `p_star`: the childbearing types share mass `p_star`, the others `1 − p_star`
/// and have no children, and every childbearing row has the same total.
pub fn selective_equilibrium(rng: &mut ChaCha8Rng, p_star: f64) -> Process {
    let k = rng.random_range(2..=6);
    let m = rng.random_range(1..k);
    let k2 = rng.random_range(1..=5);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
    let s_on: f64 = raw[..m].iter().sum();
    let s_off: f64 = raw[m..].iter().sum();
    let weights: Vec<f64> =
        raw.iter().enumerate().map(|(i, r)| if i < m { r / s_on * p_star } else { r / s_off * (1.0 - p_star) }).collect();
    let total = rng.random_range(0.5..3.0);
    let kernel: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            if i < m {
                let row = random_stochastic_kernel(rng, 1, k2).remove(0);
                row.into_iter().map(|v| v * total).collect()
            } else {
                vec![0.0; k2]
            }
        })
        .collect();
    let pop = Population::new(types("s", k), weights).unwrap();
    Process::from_kernel(pop, types("t", k2), kernel).unwrap()
}

/// Every kernel of shape `k × k2` with entries in `{0, ½, 1}`.
pub fn grid_kernels(k: usize, k2: usize) -> impl Iterator<Item = Vec<Vec<f64>>> {
    let cells = k * k2;
    let total = 3usize.pow(cells as u32);
    (0..total).map(move |mut code| {
        let mut kernel = vec![vec![0.0; k2]; k];
        for c in 0..cells {
            kernel[c / k2][c % k2] = (code % 3) as f64 * 0.5;
            code /= 3;
        }
        kernel
    })
}

/// Proptest strategy: a random process with `K, K′ ≤ kmax`, seeded.
pub fn any_process(kmax: usize) -> impl Strategy<Value = Process> {
    any::<u64>().prop_map(move |s| random_process(&mut rng(s), kmax))
}

/// Proptest strategy: a random composable pair with sizes ≤ `kmax`.
pub fn any_pair(kmax: usize) -> impl Strategy<Value = (Process, Process)> {
    any::<u64>().prop_map(move |s| random_composable_pair(&mut rng(s), kmax))
}

/// Proptest strategy: a process with its source and target observables.
pub fn any_process_with_observables(kmax: usize) -> impl Strategy<Value = (Process, Observable, Observable)> {
    any::<u64>().prop_map(move |s| {
        let mut r = rng(s);
        let p = random_process(&mut r, kmax);
        let x = random_observable(&mut r, p.source().types());
        let y = random_observable(&mut r, p.target().types());
        (p, x, y)
    })
}
