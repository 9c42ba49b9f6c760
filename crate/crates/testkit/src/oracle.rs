//! Independent brute-force oracles for one-sided inverses of the
//! environmental factor, decided by linear-programming feasibility.

use process_core::Process;

/// Phase-one simplex (Bland's rule): is `{x ≥ 0 : A x = b}` non-empty?
pub fn feasible(a: &[Vec<f64>], b: &[f64]) -> bool {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return true;
    }
    let width = n + m + 1;
    let mut t: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            let mut row: Vec<f64> = a[i].iter().map(|v| v * sign).collect();
            row.extend((0..m).map(|j| if i == j { 1.0 } else { 0.0 }));
            row.push(b[i] * sign);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let eps = 1e-11;
    loop {
        // Reduced costs of the phase-one objective Σ artificials.
        let cost = |j: usize| -> f64 {
            let c = if j >= n && j < n + m { 1.0 } else { 0.0 };
            c - (0..m)
                .map(|i| if basis[i] >= n { t[i][j] } else { 0.0 })
                .sum::<f64>()
        };
        let Some(enter) = (0..n + m).find(|&j| !basis.contains(&j) && cost(j) < -eps) else {
            break;
        };
        let leave = (0..m)
            .filter(|&i| t[i][enter] > eps)
            .min_by(|&x, &y| {
                let rx = t[x][width - 1] / t[x][enter];
                let ry = t[y][width - 1] / t[y][enter];
                rx.partial_cmp(&ry).unwrap().then(basis[x].cmp(&basis[y]))
            })
            .expect("phase one is bounded");
        let piv = t[leave][enter];
        for v in &mut t[leave] {
            *v /= piv;
        }
        for i in 0..m {
            if i != leave {
                let f = t[i][enter];
                if f != 0.0 {
                    for j in 0..width {
                        t[i][j] -= f * t[leave][j];
                    }
                }
            }
        }
        basis[leave] = enter;
    }
    (0..m)
        .filter(|&i| basis[i] >= n)
        .map(|i| t[i][width - 1])
        .sum::<f64>()
        < 1e-9
}

/// Environmental factor rows `w_i/W_i` and intermediate masses, childbearing types only.
pub fn env_factor(p: &Process) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut e = Vec::new();
    let mut mid = Vec::new();
    for (i, row) in p.kernel().iter().enumerate() {
        let w: f64 = row.iter().sum();
        if w > 0.0 {
            e.push(row.iter().map(|v| v / w).collect());
            mid.push(p.source().weights()[i] * w);
        }
    }
    (e, mid)
}

/// Is there a Markov kernel `R` (children → intermediate types) with `E R = I`?
pub fn has_retraction(e: &[Vec<f64>]) -> bool {
    let (km, k2) = (e.len(), e[0].len());
    let var = |j: usize, i: usize| j * km + i;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..km {
        for i2 in 0..km {
            let mut row = vec![0.0; k2 * km];
            for j in 0..k2 {
                row[var(j, i2)] += e[i][j];
            }
            rows.push(row);
            rhs.push(if i == i2 { 1.0 } else { 0.0 });
        }
    }
    for j in 0..k2 {
        let mut row = vec![0.0; k2 * km];
        for i in 0..km {
            row[var(j, i)] = 1.0;
        }
        rows.push(row);
        rhs.push(1.0);
    }
    feasible(&rows, &rhs)
}

/// Is there a kernel `S` (children with mass → intermediate types), Markov,
/// carrying μ′ to the intermediate population, with `S E = I` on those children?
pub fn has_section(e: &[Vec<f64>], mid: &[f64], child: &[f64]) -> bool {
    let km = e.len();
    let kids: Vec<usize> = (0..child.len()).filter(|&j| child[j] > 0.0).collect();
    let nk = kids.len();
    let var = |a: usize, i: usize| a * km + i;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (a, _) in kids.iter().enumerate() {
        for &j2 in &kids {
            let mut row = vec![0.0; nk * km];
            for i in 0..km {
                row[var(a, i)] += e[i][j2];
            }
            rows.push(row);
            rhs.push(if kids[a] == j2 { 1.0 } else { 0.0 });
        }
        let mut row = vec![0.0; nk * km];
        for i in 0..km {
            row[var(a, i)] = 1.0;
        }
        rows.push(row);
        rhs.push(1.0);
    }
    for i in 0..km {
        let mut row = vec![0.0; nk * km];
        for (a, &j) in kids.iter().enumerate() {
            row[var(a, i)] = child[j];
        }
        rows.push(row);
        rhs.push(mid[i]);
    }
    feasible(&rows, &rhs)
}
