use measure_core::{kahan_sum, tolerance, xlogx, Population, Result};
use process_core::{compose, price_factorize, Process};
use serde::Serialize;

use crate::profile::generating_profile;

/// Invertibility classification of the environmental factor `w_EC` of a
/// process, together with the constructed one-sided inverses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReversibilityVerdict {
    /// Every child with mass has a unique parent (`H(parent | child) = 0`);
    /// a retraction `R` with `w_EC ∘ R = id` exists.
    pub left_invertible: bool,
    /// Every childbearing parent has a single child type (`S_dis = 0`);
    /// a section `S` with `S ∘ w_EC = id` on the child population exists.
    pub right_invertible: bool,
    /// Both of the above (`S_EC = H(child)` with no dispersion).
    pub invertible: bool,
    /// `invertible` and every type bears children (`p_* = 1`).
    pub dollo_full: bool,
    /// `invertible`: the process can be undone on its childbearing types.
    pub dollo_childbearing: bool,
    /// Dispersion entropy at the generating partition.
    pub s_dis: f64,
    /// Mixing entropy at the generating partition.
    pub s_mix: f64,
    /// Environmental entropy at the generating partition.
    pub s_ec: f64,
    /// `S_EC − H(μ′/N′)`, the conditional entropy of the parent given the child.
    pub parent_given_child_entropy: f64,
    /// Retraction from the children to the intermediate population, when left invertible.
    #[serde(skip)]
    pub retraction: Option<Process>,
    /// Section from the children to the intermediate population, when right invertible.
    #[serde(skip)]
    pub section: Option<Process>,
    /// Inverse process from μ′ back to μ, when `dollo_full`.
    #[serde(skip)]
    pub inverse_kernel: Option<Process>,
    /// `max |w_EC∘R − id|` over intermediate types.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retraction_residual: Option<f64>,
    /// `max |S∘w_EC − id|` (and `|R∘w_EC − id|` when invertible) over children with mass.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section_residual: Option<f64>,
}

fn identity_residual(k: &[Vec<f64>], rows: &[usize]) -> f64 {
    rows.iter()
        .flat_map(|&i| {
            rows.iter()
                .map(move |&j| (k[i][j] - if i == j { 1.0 } else { 0.0 }).abs())
        })
        .fold(0.0, f64::max)
}

/// Classifies the environmental factor of `p` as left/right invertible from
/// its entropies, and constructs the retraction, section and (when the whole
/// process is invertible) the inverse process.
pub fn reversibility(p: &Process) -> Result<ReversibilityVerdict> {
    let tol = tolerance::current();
    let profile = generating_profile(p);
    let target = p.target();
    let child_entropy = kahan_sum(target.probabilities().iter().map(|&q| -xlogx(q)));
    let parent_given_child = profile.s_ec - child_entropy;
    let right_invertible = profile.s_dis <= tol.sat;
    let left_invertible = parent_given_child <= tol.sat;
    let invertible = left_invertible && right_invertible;
    let p_star_one = p.w().iter().all(|&w| tol.snap(w) > 0.0);

    let fac = price_factorize(p)?;
    let env = &fac.environmental;
    let mid = env.source();
    let e = env.kernel();
    let km = mid.len();
    let k2 = target.len();
    let supported_children: Vec<usize> = (0..k2)
        .filter(|&j| tol.snap(target.weights()[j]) > 0.0)
        .collect();

    let mut retraction = None;
    let mut retraction_residual = None;
    if left_invertible {
        let parent_of = |j: usize| (0..km).find(|&i| tol.snap(e[i][j]) > 0.0).unwrap_or(0);
        let kernel: Vec<Vec<f64>> = (0..k2)
            .map(|j| {
                let pa = parent_of(j);
                (0..km).map(|i| if i == pa { 1.0 } else { 0.0 }).collect()
            })
            .collect();
        let r = Process::new(target.clone(), mid.clone(), kernel)?;
        let er = compose(env, &r)?;
        retraction_residual = Some(identity_residual(er.kernel(), &(0..km).collect::<Vec<_>>()));
        retraction = Some(r);
    }

    let mut section = None;
    let mut section_residual = None;
    if right_invertible {
        let child_of: Vec<usize> = (0..km)
            .map(|i| {
                (0..k2)
                    .max_by(|&a, &b| e[i][a].total_cmp(&e[i][b]))
                    .unwrap_or(0)
            })
            .collect();
        let kernel: Vec<Vec<f64>> = (0..k2)
            .map(|j| {
                let m = target.weights()[j];
                (0..km)
                    .map(|i| {
                        if child_of[i] == j && m > 0.0 {
                            mid.weights()[i] / m
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let s = Process::new(target.clone(), mid.clone(), kernel)?;
        let se = compose(&s, env)?;
        let mut res = identity_residual(se.kernel(), &supported_children);
        if let Some(r) = &retraction {
            res = res.max(identity_residual(
                compose(r, env)?.kernel(),
                &supported_children,
            ));
        }
        section_residual = Some(res);
        section = Some(s);
    }

    let dollo_full = invertible && p_star_one;
    let inverse_kernel = match (&retraction, dollo_full) {
        (Some(r), true) => {
            let w = p.w();
            // Every source type is childbearing, so the intermediate types are the source types.
            let kernel: Vec<Vec<f64>> = r
                .kernel()
                .iter()
                .map(|row| row.iter().zip(w).map(|(v, wi)| v / wi).collect())
                .collect();
            let source = Population::new(target.types().clone(), target.weights().to_vec())?;
            Some(Process::new(source, p.source().clone(), kernel)?)
        }
        _ => None,
    };

    Ok(ReversibilityVerdict {
        left_invertible,
        right_invertible,
        invertible,
        dollo_full,
        dollo_childbearing: invertible,
        s_dis: profile.s_dis,
        s_mix: profile.s_mix,
        s_ec: profile.s_ec,
        parent_given_child_entropy: parent_given_child,
        retraction,
        section,
        inverse_kernel,
        retraction_residual,
        section_residual,
    })
}
