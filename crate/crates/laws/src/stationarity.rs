use measure_core::{tolerance, Result};
use process_core::{compose, Process};
use serde::{Deserialize, Serialize};

/// Stationarity flags of a composable pair, evaluated on the support
/// (parents with `μ_i > 0` and `U(i) > 0`, cells with `w[i][i′] > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StationarityClass {
    /// `R(i,i′) = U′(i′)/U(i) = 1` on every support cell.
    pub strong: bool,
    /// `R̄_w(i) = ⟨U′⟩_w(i)/U(i) = 1` on every childbearing parent.
    pub weak: bool,
    /// `R` is constant across all support cells.
    pub locally_homogeneous: bool,
    /// `U′` is constant within the support of each row.
    pub locally_constant: bool,
}

/// Stationarity class of the pair `(p, q)`, within the saturation tolerance
/// (relative to the magnitude of the compared values).
pub fn stationarity(p: &Process, q: &Process) -> Result<StationarityClass> {
    compose(p, q)?;
    let tol = tolerance::current();
    let close = |a: f64, b: f64| (a - b).abs() <= tol.sat * 1f64.max(a.abs()).max(b.abs());
    let u = p.u();
    let u_next = q.u();
    let avg = p.local_average_values(u_next);
    let rows: Vec<usize> = (0..u.len())
        .filter(|&i| p.source().weights()[i] > 0.0 && tol.snap(u[i]) > 0.0)
        .collect();
    let cells: Vec<(usize, usize)> = rows
        .iter()
        .flat_map(|&i| (0..u_next.len()).filter(move |&j| p.kernel()[i][j] > tol.zero).map(move |j| (i, j)))
        .collect();
    let ratio = |&(i, j): &(usize, usize)| u_next[j] / u[i];
    let strong = cells.iter().all(|c| close(ratio(c), 1.0));
    let weak = rows.iter().all(|&i| close(avg[i] / u[i], 1.0));
    let locally_homogeneous = match cells.first() {
        Some(c0) => {
            let r0 = ratio(c0);
            cells.iter().all(|c| close(ratio(c), r0))
        }
        None => true,
    };
    let locally_constant = rows.iter().all(|&i| {
        cells.iter().filter(|(a, _)| *a == i).all(|&(_, j)| close(u_next[j], avg[i]))
    });
    Ok(StationarityClass { strong, weak, locally_homogeneous, locally_constant })
}
