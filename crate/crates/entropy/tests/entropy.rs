use approx::assert_relative_eq;
use entropy::{
    dispersion_mixing_bounds, environmental_equilibrium, environmental_profile, generating_profile,
    intergenerational_ec_change, ks_entropy, ks_entropy_enumerated, ks_entropy_transfer,
    local_selective_entropy, reversibility, selective_entropy, third_law, total_entropy, Partition,
};
use measure_core::{Error, Population, TypeSet};
use process_core::{compose, Process};
use proptest::prelude::*;
use testkit::oracle::{env_factor, has_retraction, has_section};
use testkit::{
    any_pair, any_process, bernoulli_dispersion, bernoulli_mixing, f1, f2, f5, grid_kernels,
    permutation, rng, Rng,
};

const LN2: f64 = std::f64::consts::LN_2;

fn h(ps: &[f64]) -> f64 {
    ps.iter().filter(|p| **p > 0.0).map(|p| -p * p.ln()).sum()
}

fn process(weights: Vec<f64>, kernel: Vec<Vec<f64>>) -> Process {
    let k2 = kernel[0].len();
    let pop = Population::from_weights(weights).unwrap();
    Process::from_kernel(pop, TypeSet::indexed("c", k2).unwrap(), kernel).unwrap()
}

#[test]
fn selective_entropy_examples() {
    assert_relative_eq!(selective_entropy(&f1()), -LN2, epsilon = 1e-15);
    assert_eq!(selective_entropy(&f2()), 0.0);
    assert_relative_eq!(selective_entropy(&f5()), -LN2 / 3.0, epsilon = 1e-15);
}

#[test]
fn local_selective_entropy_examples() {
    let p = f5();
    assert_relative_eq!(
        local_selective_entropy(&p, &[0, 1], &[0, 1]).unwrap(),
        selective_entropy(&p),
        epsilon = 1e-15
    );
    assert_relative_eq!(
        local_selective_entropy(&p, &[0], &[0, 1]).unwrap(),
        -2.0 * LN2 / 3.0,
        epsilon = 1e-15
    );
    for a in [&[0usize][..], &[1], &[0, 1]] {
        for b in [&[0usize][..], &[1], &[0, 1]] {
            assert_eq!(local_selective_entropy(&f2(), a, b).unwrap(), 0.0);
        }
    }
    assert!(matches!(
        local_selective_entropy(&p, &[], &[0]),
        Err(Error::Invalid(_))
    ));
    assert!(matches!(
        local_selective_entropy(&p, &[2], &[0]),
        Err(Error::Invalid(_))
    ));
}

/// The local selective entropy is not sign-definite: the parent `b` of F5 has
/// `U = ½` and sends all its children to `a`, so its cell contributes
/// `(2/3)·½·log 2 > 0`.
#[test]
fn local_selective_entropy_can_be_positive() {
    let v = local_selective_entropy(&f5(), &[1], &[0]).unwrap();
    assert_relative_eq!(v, LN2 / 3.0, epsilon = 1e-15);
    assert_relative_eq!(v, 0.2310, epsilon = 1e-4);
}

#[test]
fn bernoulli_profiles() {
    for q in [0.1, 0.3, 0.5, 0.8] {
        let d = generating_profile(&bernoulli_dispersion(q));
        assert_relative_eq!(d.s_dis, h(&[q, 1.0 - q]), epsilon = 1e-14);
        assert!(d.s_mix.abs() < 1e-15);
        assert_relative_eq!(d.s_ec, d.s_dis, epsilon = 1e-14);

        let m = generating_profile(&bernoulli_mixing(q));
        assert_relative_eq!(m.s_mix, h(&[q, 1.0 - q]), epsilon = 1e-14);
        assert!(m.s_dis.abs() < 1e-15);
        assert_relative_eq!(m.s_ec, m.s_mix, epsilon = 1e-14);
    }
    assert_relative_eq!(
        generating_profile(&bernoulli_dispersion(0.5)).s_ec,
        LN2,
        epsilon = 1e-15
    );
}

#[test]
fn symmetric_markov_profile() {
    let prof = generating_profile(&f2());
    assert_relative_eq!(prof.s_ec, 2.0 * LN2, epsilon = 1e-15);
    assert_relative_eq!(prof.s_dis, LN2, epsilon = 1e-15);
    assert_relative_eq!(prof.s_mix, LN2, epsilon = 1e-15);
    assert_eq!(prof.per_cell.len(), 4);
    for c in &prof.per_cell {
        assert_relative_eq!(c.u_bar, 0.25, epsilon = 1e-15);
        assert_eq!(c.s_ns, 0.0);
    }
    assert_relative_eq!(total_entropy(&f2()), 2.0 * LN2, epsilon = 1e-15);
    assert_relative_eq!(total_entropy(&f1()), -LN2, epsilon = 1e-15);
}

#[test]
fn identity_profile() {
    let pop = Population::from_weights(vec![1.0, 2.0, 5.0]).unwrap();
    let prof = generating_profile(&Process::identity(&pop));
    assert_relative_eq!(prof.s_ec, h(&[0.125, 0.25, 0.625]), epsilon = 1e-14);
    assert_eq!(prof.s_dis, 0.0);
    assert_relative_eq!(prof.s_mix, prof.s_ec, epsilon = 1e-14);
}

#[test]
fn purely_selective_total_entropy() {
    let p = process(vec![1.0, 3.0], vec![vec![2.0, 0.0], vec![0.0, 0.5]]);
    let prof = generating_profile(&p);
    // Each child has a unique parent and each parent a unique child, so the
    // environmental entropy is the entropy of the intermediate population and
    // S_tot exceeds S_NS by that amount.
    assert_relative_eq!(prof.s_ec, h(&[2.0 / 3.5, 1.5 / 3.5]), epsilon = 1e-14);
    assert_eq!(prof.s_dis, 0.0);
    assert_relative_eq!(prof.s_tot, prof.s_ns + prof.s_ec, epsilon = 1e-15);
    assert!(prof.s_tot > prof.s_ns);
}

/// All set partitions of `0..k`.
fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![vec![]];
    for i in 0..k {
        let mut next = Vec::new();
        for part in out {
            for b in 0..part.len() {
                let mut p2: Vec<Vec<usize>> = part.clone();
                p2[b].push(i);
                next.push(p2);
            }
            let mut p2 = part.clone();
            p2.push(vec![i]);
            next.push(p2);
        }
        out = next;
    }
    out
}

/// Environmental entropy of the aggregated joint law `μ_i w_ij / N′`.
fn joint_entropy(p: &Process, a: &[Vec<usize>], b: &[Vec<usize>]) -> f64 {
    let n2 = p.target().size();
    let mut cells = Vec::new();
    for ba in a {
        for bb in b {
            let m: f64 = ba
                .iter()
                .flat_map(|&i| bb.iter().map(move |&j| (i, j)))
                .map(|(i, j)| p.source().weights()[i] * p.kernel()[i][j])
                .sum();
            cells.push(m / n2);
        }
    }
    h(&cells)
}

fn refines(fine: &[Vec<usize>], coarse: &[Vec<usize>]) -> bool {
    fine.iter()
        .all(|f| coarse.iter().any(|c| f.iter().all(|i| c.contains(i))))
}

#[test]
fn partition_refinement() {
    let mut r = rng(17);
    for _ in 0..12 {
        let k = r.random_range(1..=4);
        let k2 = r.random_range(1..=3);
        let pop = testkit::random_population(&mut r, testkit::types("s", k));
        let p = testkit::random_process_from(&mut r, pop, testkit::types("t", k2));
        let parts_a = set_partitions(k);
        let parts_b = set_partitions(k2);
        let mut values = Vec::new();
        for a in &parts_a {
            for b in &parts_b {
                let pa = Partition::from_indices(k, a.clone()).unwrap();
                let pb = Partition::from_indices(k2, b.clone()).unwrap();
                let prof = environmental_profile(&p, &pa, &pb).unwrap();
                assert_relative_eq!(prof.s_ec, joint_entropy(&p, a, b), epsilon = 1e-12);
                assert_relative_eq!(prof.s_ec, prof.s_dis + prof.s_mix, epsilon = 1e-12);
                values.push((a, b, prof.s_ec));
            }
        }
        for (fa, fb, fv) in &values {
            for (ca, cb, cv) in &values {
                if refines(fa, ca) && refines(fb, cb) {
                    assert!(fv + 1e-12 >= *cv, "refinement lowered S_EC: {fv} < {cv}");
                }
            }
        }
        let sing = generating_profile(&p).s_ec;
        assert!(values.iter().all(|v| v.2 <= sing + 1e-12));
    }
}

#[test]
fn symmetric_markov_coarsenings() {
    for a in set_partitions(2) {
        for b in set_partitions(2) {
            let prof = environmental_profile(
                &f2(),
                &Partition::from_indices(2, a.clone()).unwrap(),
                &Partition::from_indices(2, b.clone()).unwrap(),
            )
            .unwrap();
            assert!(prof.s_ec <= 2.0 * LN2 + 1e-15);
        }
    }
}

#[test]
fn partition_validation() {
    let p = f5();
    assert!(
        environmental_profile(&p, &Partition::singletons(3), &Partition::singletons(2)).is_err()
    );
    assert!(Partition::from_indices(2, vec![vec![0]]).is_err());
    assert!(Partition::from_indices(2, vec![vec![0, 1], vec![1]]).is_err());
    assert!(Partition::from_indices(2, vec![vec![0], vec![], vec![1]]).is_err());
    let t = TypeSet::new(["a", "b"]).unwrap();
    let by_label = Partition::from_labels(&t, &[vec!["b"], vec!["a"]]).unwrap();
    assert_eq!(by_label.blocks(), &[vec![1], vec![0]]);
}

#[test]
fn equilibrium_examples() {
    let whole = Partition::whole(2);
    let sing = Partition::singletons(2);
    assert!(
        environmental_equilibrium(&f2(), &whole, &sing)
            .unwrap()
            .holds
    );
    assert!(
        environmental_equilibrium(&f5(), &sing, &sing)
            .unwrap()
            .holds
    );

    let p = process(vec![1.0, 1.0], vec![vec![0.9, 0.1], vec![0.5, 0.5]]);
    let check = environmental_equilibrium(&p, &whole, &sing).unwrap();
    assert!(!check.holds);
    assert!(check
        .witnesses
        .iter()
        .any(|w| (w.3 - w.2 - 0.4).abs() < 1e-12));
    assert!(environmental_equilibrium(&p, &sing, &sing).unwrap().holds);
}

#[test]
fn dispersion_mixing_bound_saturation() {
    let (dis, mix) = dispersion_mixing_bounds(&bernoulli_dispersion(0.3));
    assert!(dis.satisfied(1e-12) && mix.satisfied(1e-12));
    assert!(dis.saturated[0] && dis.saturated[1] && dis.saturated[2]);
    assert!(mix.saturated[1] && mix.saturated[2]);
    assert!(mix.values[3].abs() < 1e-15);

    let (dis, mix) = dispersion_mixing_bounds(&bernoulli_mixing(0.3));
    assert!(mix.saturated[0] && mix.saturated[1] && mix.saturated[2]);
    assert!(dis.saturated[1] && dis.saturated[2]);

    let (dis, mix) = dispersion_mixing_bounds(&f2());
    for r in [&dis, &mix] {
        assert!(r.saturated[1] && r.saturated[2]);
        assert!(!r.saturated[0]);
        assert_relative_eq!(r.values[0], 2.0 * LN2, epsilon = 1e-15);
        assert_relative_eq!(r.lhs, LN2, epsilon = 1e-15);
    }
}

#[test]
fn third_law_purely_environmental() {
    let sing = Partition::singletons(2);
    let t = third_law(&f2(), &sing, &sing).unwrap();
    for r in [&t.ec, &t.dis, &t.mix] {
        assert!(r.values.iter().all(|v| v.abs() < 1e-15), "{:?}", r.values);
    }
}

/// At singleton partitions the selective change of the dispersion entropy is
/// `Σ q_i U_i (U_i − 1) H(w_i/W_i)`, which does not vanish for F5.
#[test]
fn third_law_singletons_nonzero() {
    let sing = Partition::singletons(2);
    let t = third_law(&f5(), &sing, &sing).unwrap();
    assert_relative_eq!(t.dis.lhs, 2.0 * LN2 / 3.0, epsilon = 1e-14);
    assert_relative_eq!(t.dis.lhs, 0.4621, epsilon = 1e-4);
    assert!(t.decomposition_residual.abs() < 1e-14);
    for r in [&t.ec, &t.dis, &t.mix] {
        assert!(r.satisfied(1e-12), "{}: {:?}", r.name, r.values);
        assert!(r.saturated.iter().all(|s| *s), "{}: {:?}", r.name, r.values);
    }
}

#[test]
fn third_law_block_fixture() {
    let p = process(vec![1.0, 3.0], vec![vec![1.8, 0.2], vec![0.5, 0.5]]);
    let t = third_law(&p, &Partition::whole(2), &Partition::singletons(2)).unwrap();
    assert!(t.ec.satisfied(1e-12) && t.dis.satisfied(1e-12) && t.mix.satisfied(1e-12));
    assert!(t.dis.lhs.abs() > 1e-3);
    assert!(t.decomposition_residual.abs() < 1e-14);
}

#[test]
fn intergenerational_purely_environmental() {
    let mut r = rng(5);
    for _ in 0..20 {
        let k = r.random_range(1..=4);
        let k2 = r.random_range(1..=4);
        let k3 = r.random_range(1..=4);
        let pop = testkit::random_population(&mut r, testkit::types("s", k));
        let p = Process::from_kernel(
            pop,
            testkit::types("t", k2),
            testkit::random_stochastic_kernel(&mut r, k, k2),
        )
        .unwrap();
        let q = testkit::random_process_from(&mut r, p.target().clone(), testkit::types("u", k3));
        let c = intergenerational_ec_change(&p, &q).unwrap();
        assert!(c.residual.abs() < 1e-12, "{c:?}");
        assert_relative_eq!(c.price_route, c.s_ec_next - c.s_ec, epsilon = 1e-12);
    }
}

/// With a selective first step and the identity continuation the closed-form
/// sum differs from the Price route; both are reported.
#[test]
fn intergenerational_routes_differ() {
    let p = f5();
    let q = Process::identity(p.target());
    let c = intergenerational_ec_change(&p, &q).unwrap();
    assert!(c.residual.abs() > 1e-3, "{c:?}");
    assert_relative_eq!(c.residual, c.formula - c.price_route, epsilon = 1e-15);
    assert!(intergenerational_ec_change(&p, &f1()).is_err());
}

#[test]
fn reversibility_examples() {
    let v = reversibility(&bernoulli_dispersion(0.3)).unwrap();
    assert!(v.left_invertible && !v.right_invertible && !v.invertible);
    let r = v.retraction.as_ref().unwrap();
    assert_eq!(r.kernel(), &[vec![1.0], vec![1.0]]);
    assert!(v.retraction_residual.unwrap() < 1e-10);
    assert!(v.section.is_none());

    let v = reversibility(&bernoulli_mixing(0.3)).unwrap();
    assert!(v.right_invertible && !v.left_invertible);
    assert!(v.section_residual.unwrap() < 1e-10);
    let s = v.section.as_ref().unwrap();
    assert_relative_eq!(s.kernel()[0][0], 0.3, epsilon = 1e-15);
    assert_relative_eq!(s.kernel()[0][1], 0.7, epsilon = 1e-15);

    let mut rr = rng(3);
    for k in 1..6 {
        let v = reversibility(&permutation(&mut rr, k, 1)).unwrap();
        assert!(v.invertible && v.dollo_full && v.dollo_childbearing);
        assert!(v.parent_given_child_entropy.abs() < 1e-12);
        assert!(v.inverse_kernel.is_some());
    }

    let v = reversibility(&f1()).unwrap();
    assert!(v.invertible && !v.dollo_full && v.dollo_childbearing);
    assert!(v.inverse_kernel.is_none());
}

#[test]
fn dollo_round_trip() {
    let mut r = rng(11);
    for _ in 0..20 {
        let k = r.random_range(1..=5);
        let shift = r.random_range(0..k);
        let perm = permutation(&mut r, k, shift);
        let scale: Vec<f64> = (0..k).map(|_| r.random_range(0.2..3.0)).collect();
        let kernel: Vec<Vec<f64>> = perm
            .kernel()
            .iter()
            .zip(&scale)
            .map(|(row, s)| row.iter().map(|v| v * s).collect())
            .collect();
        let p = Process::from_kernel(perm.source().clone(), perm.target().types().clone(), kernel)
            .unwrap();
        let v = reversibility(&p).unwrap();
        assert!(v.dollo_full);
        let inv = v.inverse_kernel.unwrap();
        let round = compose(&p, &inv).unwrap();
        assert!(round.target().approx_eq(p.source(), 1e-12));
        for (i, row) in round.kernel().iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert!((x - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn reversibility_matches_brute_force_on_grid() {
    let mut checked = 0;
    for k in 1..=3 {
        for k2 in 1..=3 {
            for kernel in grid_kernels(k, k2) {
                if kernel.iter().all(|r| r.iter().all(|v| *v == 0.0)) {
                    continue;
                }
                let p = process(vec![1.0; k], kernel);
                let v = reversibility(&p).unwrap();
                let (e, mid) = env_factor(&p);
                assert_eq!(
                    v.left_invertible,
                    has_retraction(&e),
                    "left: {:?}",
                    p.kernel()
                );
                assert_eq!(
                    v.right_invertible,
                    has_section(&e, &mid, p.target().weights()),
                    "right: {:?}",
                    p.kernel()
                );
                assert_eq!(v.invertible, v.left_invertible && v.right_invertible);
                if let Some(res) = v.retraction_residual {
                    assert!(res < 1e-10);
                }
                if let Some(res) = v.section_residual {
                    assert!(res < 1e-10);
                }
                if v.dollo_full {
                    assert!(v.s_dis.abs() < 1e-9 && v.parent_given_child_entropy.abs() < 1e-9);
                }
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 3 + 9 + 27 + 9 + 81 + 729 + 27 + 729 + 19683 - 9);
}

#[test]
fn ks_examples() {
    let a: f64 = 0.3;
    let t = Population::from_weights(vec![1.0, 1.0]).unwrap();
    let p = Process::from_kernel(
        t.clone(),
        t.types().clone(),
        vec![vec![a, 1.0 - a], vec![1.0 - a, a]],
    )
    .unwrap();
    let v = ks_entropy(&p, 2).unwrap();
    assert_relative_eq!(v[0], generating_profile(&p).s_ec, epsilon = 1e-14);
    // Paths (i⁰,i¹,i²) carry ½·w·w: the start is uniform and each step is an
    // independent Bernoulli(a) switch.
    let oracle = LN2 + 2.0 * h(&[a, 1.0 - a]);
    assert!((v[1] - oracle).abs() < 1e-12);

    let mut r = rng(8);
    for k in 1..=5 {
        let perm = permutation(&mut r, k, 2);
        let v = ks_entropy(&perm, 6).unwrap();
        for x in &v {
            assert_relative_eq!(*x, v[0], epsilon = 1e-12);
        }
        assert_relative_eq!(v[0], h(&perm.source().probabilities()), epsilon = 1e-12);
    }

    assert!(matches!(ks_entropy(&p, 0), Err(Error::OutOfRange(_))));
    assert!(matches!(ks_entropy(&p, 7), Err(Error::OutOfRange(_))));
    assert!(ks_entropy(&f1(), 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decomposition_and_signs(p in any_process(5)) {
        let prof = generating_profile(&p);
        prop_assert!((prof.s_ec - prof.s_dis - prof.s_mix).abs() <= 1e-9 * prof.s_ec.max(1.0));
        prop_assert!(prof.s_ec >= -1e-12 && prof.s_dis >= -1e-12 && prof.s_mix >= -1e-12);
        prop_assert!(prof.s_ns <= 1e-12);
        prop_assert!((prof.s_tot - prof.s_ns - prof.s_ec).abs() < 1e-12);
        let local: f64 = prof.per_cell.iter().map(|c| c.s_ns).sum();
        prop_assert!((local - prof.s_ns).abs() < 1e-12);
        for c in &prof.per_cell {
            prop_assert!((c.s_ec - c.s_dis - c.s_mix).abs() < 1e-12);
            if c.p_tilde > 0.0 {
                prop_assert!(c.gamma <= c.lambda * (1.0 + 1e-12) + 1e-15);
                prop_assert!(c.lambda <= c.phi * (1.0 + 1e-12) + 1e-15);
            }
        }
        prop_assert!(environmental_equilibrium(&p, &Partition::singletons(p.source().len()), &Partition::singletons(p.target().len())).unwrap().holds);
    }

    #[test]
    fn jensen_chains_hold(p in any_process(5)) {
        let (dis, mix) = dispersion_mixing_bounds(&p);
        prop_assert!(dis.satisfied(1e-9), "{:?}", dis.values);
        prop_assert!(mix.satisfied(1e-9), "{:?}", mix.values);
        prop_assert!(dis.saturated[1] && dis.saturated[2] && mix.saturated[1] && mix.saturated[2]);
    }

    #[test]
    fn third_law_windows_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = testkit::random_process(&mut r, 4);
        let (k, k2) = (p.source().len(), p.target().len());
        let pa = set_partitions(k);
        let pb = set_partitions(k2);
        let a = Partition::from_indices(k, pa[r.random_range(0..pa.len())].clone()).unwrap();
        let b = Partition::from_indices(k2, pb[r.random_range(0..pb.len())].clone()).unwrap();
        let t = third_law(&p, &a, &b).unwrap();
        for rep in [&t.ec, &t.dis, &t.mix] {
            prop_assert!(rep.satisfied(1e-9), "{}: {:?}", rep.name, rep.values);
        }
        prop_assert!(t.decomposition_residual.abs() < 1e-9);
        let prof = environmental_profile(&p, &a, &b).unwrap();
        prop_assert!((prof.s_ec - prof.s_dis - prof.s_mix).abs() < 1e-9);
    }

    #[test]
    fn ks_routes_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = testkit::random_endomorphic(&mut r, 4);
        if let Ok(e) = ks_entropy_enumerated(&p, 4) {
            let t = ks_entropy_transfer(&p, 4).unwrap();
            for (x, y) in e.iter().zip(&t) {
                prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0));
            }
            prop_assert!((e[0] - generating_profile(&p).s_ec).abs() < 1e-10);
        }
    }

    #[test]
    fn intergenerational_price_route(pair in any_pair(4)) {
        let (p, q) = pair;
        let c = intergenerational_ec_change(&p, &q).unwrap();
        prop_assert!(c.formula.is_finite() && c.price_route.is_finite());
        prop_assert!((c.residual - (c.formula - c.price_route)).abs() < 1e-12);
    }
}
