use measure_core::{kahan_sum, xlogx, Error, Result};
use process_core::Process;

/// Largest supported horizon `T`.
pub const MAX_HORIZON: usize = 6;

/// Path count above which [`ks_entropy`] switches from explicit path
/// enumeration to the transfer-operator contraction.
const ENUMERATION_LIMIT: f64 = 1e6;

fn check(p: &Process, horizon: usize) -> Result<()> {
    if !p.is_endomorphic() {
        return Err(Error::Invalid(
            "Kolmogorov-Sinai entropy needs an endomorphic process".into(),
        ));
    }
    if horizon == 0 || horizon > MAX_HORIZON {
        return Err(Error::OutOfRange(format!(
            "horizon {horizon} not in 1..={MAX_HORIZON}"
        )));
    }
    Ok(())
}

/// `T`-step environmental entropy at the singleton partitions,
/// `Σ −P log P` over paths `(i⁰,…,i^T)` with
/// `P = μ(i⁰)·w(i⁰,i¹)⋯w(i^{T−1},i^T)/N_T`, for `T = 1..=horizon`.
///
/// Small path spaces are enumerated; larger ones are contracted with the
/// forward and backward transfer vectors.
pub fn ks_entropy(p: &Process, horizon: usize) -> Result<Vec<f64>> {
    check(p, horizon)?;
    let k = p.source().len() as f64;
    (1..=horizon)
        .map(|t| {
            if k.powi(t as i32 + 1) <= ENUMERATION_LIMIT {
                enumerate(p, t)
            } else {
                transfer(p, t)
            }
        })
        .collect()
}

/// [`ks_entropy`] computed by enumerating every path.
pub fn ks_entropy_enumerated(p: &Process, horizon: usize) -> Result<Vec<f64>> {
    check(p, horizon)?;
    (1..=horizon).map(|t| enumerate(p, t)).collect()
}

/// [`ks_entropy`] computed by transfer-operator contraction.
pub fn ks_entropy_transfer(p: &Process, horizon: usize) -> Result<Vec<f64>> {
    check(p, horizon)?;
    (1..=horizon).map(|t| transfer(p, t)).collect()
}

fn step_mass(mu: &[f64], w: &[Vec<f64>]) -> Vec<f64> {
    let k = mu.len();
    (0..k)
        .map(|j| kahan_sum((0..k).map(|i| mu[i] * w[i][j])))
        .collect()
}

fn total_mass(p: &Process, t: usize) -> Result<f64> {
    let mut m = p.source().weights().to_vec();
    for _ in 0..t {
        m = step_mass(&m, p.kernel());
    }
    let n = kahan_sum(m.iter().copied());
    if n <= 0.0 {
        return Err(Error::Degenerate(format!(
            "population dies out after {t} steps"
        )));
    }
    Ok(n)
}

fn enumerate(p: &Process, t: usize) -> Result<f64> {
    let n = total_mass(p, t)?;
    let w = p.kernel();
    let mut acc = Vec::new();
    // Depth-first over surviving prefixes: (current type, prefix mass, depth).
    let mut stack: Vec<(usize, f64, usize)> = p
        .source()
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, m)| **m > 0.0)
        .map(|(i, m)| (i, *m, 0))
        .collect();
    while let Some((i, m, d)) = stack.pop() {
        if d == t {
            acc.push(-xlogx(m / n));
            continue;
        }
        for (j, &wij) in w[i].iter().enumerate() {
            if wij > 0.0 {
                stack.push((j, m * wij, d + 1));
            }
        }
    }
    Ok(kahan_sum(acc))
}

fn transfer(p: &Process, t: usize) -> Result<f64> {
    let n = total_mass(p, t)?;
    let w = p.kernel();
    let mu = p.source().weights();
    let k = mu.len();
    // beta[s] = w^{t−s}·1
    let mut beta = vec![vec![1.0; k]; t + 1];
    for s in (0..t).rev() {
        beta[s] = (0..k)
            .map(|i| kahan_sum((0..k).map(|j| w[i][j] * beta[s + 1][j])))
            .collect();
    }
    let mut terms: Vec<f64> = (0..k).map(|i| xlogx(mu[i]) * beta[0][i]).collect();
    let mut alpha = mu.to_vec();
    for s in 0..t {
        for i in 0..k {
            for j in 0..k {
                terms.push(alpha[i] * xlogx(w[i][j]) * beta[s + 1][j]);
            }
        }
        alpha = step_mass(&alpha, w);
    }
    let sum_p_log_p = kahan_sum(terms) / n - n.ln();
    Ok(-sum_p_log_p)
}
