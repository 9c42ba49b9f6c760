use approx::assert_relative_eq;
use entropy::generating_profile;
use laws::{first_law, second_law, selective_acceleration, selective_entropy_bounds, zeroth_law, Distribution};
use measure_core::{Error, Observable};
use nalgebra::DMatrix;
use num_complex::Complex64;
use open_process::{kgs, OpenProcess};
use price::price;
use proptest::prelude::*;
use quantum::{
    adjoint, adjoint_duality_residual, apply_fn, eigh, q_compose, q_expectation, q_factorize, q_fitness, q_kgs,
    q_laws, q_mean, q_partition_entropy, q_price, CMatrix, DensityOperator, OpenQuantumProcess, QuantumObservable,
    QuantumProcess,
};
use testkit::quantum::{diag, random_density, random_hermitian, random_kraus};
use testkit::{f1, f5, random_observable, random_process, rng, Rng};

const LN2: f64 = std::f64::consts::LN_2;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sigma_x() -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)])
}

fn hadamard_projections() -> Vec<CMatrix> {
    let plus = DMatrix::from_element(2, 2, cx(0.5, 0.0));
    let minus = DMatrix::from_row_slice(2, 2, &[cx(0.5, 0.0), cx(-0.5, 0.0), cx(-0.5, 0.0), cx(0.5, 0.0)]);
    vec![plus, minus]
}

fn unit_projections(d: usize) -> Vec<CMatrix> {
    (0..d).map(|k| diag(&(0..d).map(|i| if i == k { 1.0 } else { 0.0 }).collect::<Vec<_>>())).collect()
}

fn diag_kraus() -> QuantumProcess {
    QuantumProcess::from_kraus(&[diag(&[2f64.sqrt(), 0.0])], DensityOperator::from_diagonal(&[1.0, 1.0]).unwrap()).unwrap()
}

fn random_qprocess(seed: u64, d: usize, d2: usize) -> QuantumProcess {
    let mut r = rng(seed);
    let n = r.random_range(1..=3);
    let kraus = random_kraus(&mut r, d, d2, n);
    let trace = r.random_range(0.5..3.0);
    let rho = DensityOperator::new(random_density(&mut r, d, trace)).unwrap();
    QuantumProcess::from_kraus(&kraus, rho).unwrap()
}

#[test]
fn expectation_examples() {
    let rho = DensityOperator::from_diagonal(&[1.0, 1.0]).unwrap();
    assert_relative_eq!(q_expectation(&rho, &QuantumObservable::from_diagonal(&[2.0, 0.0])).unwrap(), 1.0, epsilon = 1e-15);
    assert_relative_eq!(q_expectation(&rho, &QuantumObservable::identity(2)).unwrap(), 1.0, epsilon = 1e-15);
    let rho = DensityOperator::from_diagonal(&[1.0, 2.0]).unwrap();
    let x = QuantumObservable::new(sigma_x()).unwrap();
    assert_eq!(q_expectation(&rho, &x).unwrap(), 0.0);
    assert!(matches!(q_expectation(&rho, &QuantumObservable::identity(3)), Err(Error::Shape(_))));
}

#[test]
fn density_validation() {
    let not_herm = DMatrix::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)]);
    assert!(matches!(DensityOperator::new(not_herm), Err(Error::Invalid(_))));
    assert!(matches!(DensityOperator::from_diagonal(&[1.0, -0.5]), Err(Error::Negative(_))));
    assert!(matches!(DensityOperator::from_diagonal(&[0.0, 0.0]), Err(Error::Degenerate(_))));
    // a slightly negative eigenvalue within tolerance is clipped
    let rho = DensityOperator::from_diagonal(&[1.0, -1e-13]).unwrap();
    assert_eq!(rho.matrix()[(1, 1)].re, 0.0);
}

#[test]
fn fitness_of_diagonal_kraus_map() {
    let p = diag_kraus();
    let f = q_fitness(&p);
    assert_relative_eq!(f.w.matrix()[(0, 0)].re, 2.0, epsilon = 1e-14);
    assert!(f.w.matrix()[(1, 1)].norm() < 1e-15 && f.w.matrix()[(0, 1)].norm() < 1e-15);
    assert_relative_eq!(f.wbar, 1.0, epsilon = 1e-15);
    assert_relative_eq!(f.u.matrix()[(0, 0)].re, 2.0, epsilon = 1e-14);
    // adjoint of the map applied to the identity
    let id = DMatrix::<Complex64>::identity(2, 2);
    let pulled = p.apply_adjoint(&id);
    assert!((pulled - diag(&[2.0, 0.0])).norm() < 1e-14);
}

#[test]
fn trace_preserving_map_is_purely_environmental() {
    let mut r = rng(7);
    // Unitary conjugation of a random state
    let h = random_hermitian(&mut r, 3);
    let (vals, vecs) = eigh(&h);
    let unitary = &vecs * DMatrix::from_diagonal(&nalgebra::DVector::from_fn(3, |i, _| Complex64::from_polar(1.0, vals[i]))) * vecs.adjoint();
    let rho = DensityOperator::new(random_density(&mut r, 3, 2.0)).unwrap();
    let p = QuantumProcess::from_kraus(&[unitary], rho).unwrap();
    assert!((p.w().matrix() - DMatrix::<Complex64>::identity(3, 3)).norm() < 1e-12);
    assert_relative_eq!(p.wbar(), 1.0, epsilon = 1e-12);
    let laws = q_laws(&p);
    for rep in [&laws.zeroth, &laws.gibbs, &laws.first, &laws.second, &laws.acceleration] {
        assert!(rep.values.iter().all(|v| v.abs() < 1e-10), "{rep:?}");
    }
    let fac = q_factorize(&p);
    assert!((fac.selective - DMatrix::<Complex64>::identity(9, 9)).norm() < 1e-12);
}

#[test]
fn adjoint_duality() {
    let mut r = rng(3);
    for seed in 0..16 {
        let p = random_qprocess(seed, 3, 2);
        let probes: Vec<(CMatrix, CMatrix)> =
            (0..64).map(|_| (random_hermitian(&mut r, 2), random_density(&mut r, 3, 1.0))).collect();
        assert!(adjoint_duality_residual(&p, &probes) <= 1e-10);
        assert_eq!(adjoint(&p), p.superoperator().adjoint());
    }
    // identity map is self-adjoint
    let id = QuantumProcess::from_kraus(&[DMatrix::identity(2, 2)], DensityOperator::from_diagonal(&[1.0, 3.0]).unwrap()).unwrap();
    assert_eq!(adjoint(&id), DMatrix::<Complex64>::identity(4, 4));
}

#[test]
fn positivity_and_consistency_are_checked() {
    // Transpose map is positive but not completely positive: accepted.
    let mut t = DMatrix::<Complex64>::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            t[(b + 2 * a, a + 2 * b)] = cx(1.0, 0.0);
        }
    }
    let rho = DensityOperator::new(random_density(&mut rng(1), 2, 1.0)).unwrap();
    assert!(QuantumProcess::from_superoperator(t.clone(), rho.clone(), 2).is_ok());
    // Negation of the identity is not positive.
    let neg = -DMatrix::<Complex64>::identity(4, 4);
    assert!(matches!(QuantumProcess::new(neg, rho.clone(), rho.clone()), Err(Error::Validation(_))));
    // Wrong target
    let wrong = DensityOperator::from_diagonal(&[5.0, 1.0]).unwrap();
    assert!(matches!(QuantumProcess::new(DMatrix::identity(4, 4), rho.clone(), wrong), Err(Error::Validation(_))));
    assert!(matches!(QuantumProcess::new(DMatrix::identity(9, 4), rho.clone(), rho), Err(Error::Shape(_))));
}

#[test]
fn random_kraus_has_unit_mean_fitness() {
    for seed in 0..32 {
        let p = random_qprocess(seed, 3, 3);
        assert_relative_eq!(q_expectation(p.source(), p.u()).unwrap(), 1.0, epsilon = 1e-10);
        assert!(eigh(p.w().matrix()).0[0] > -1e-10);
    }
}

#[test]
fn classical_embedding_matches_price() {
    let mut r = rng(5);
    for _ in 0..64 {
        let p = random_process(&mut r, 5);
        let x = random_observable(&mut r, p.source().types());
        let y = random_observable(&mut r, p.target().types());
        let q = QuantumProcess::embed(&p);
        let dec = q_price(&q, &QuantumObservable::embed(&x), &QuantumObservable::embed(&y)).unwrap();
        let cl = price(&p, &x, &y).unwrap();
        let scale = cl.delta.abs().max(cl.ns.abs()).max(cl.ec.abs()).max(1.0);
        assert!((dec.delta - cl.delta).abs() <= 1e-10 * scale);
        for (v, target) in [(dec.left_ns, cl.ns), (dec.right_ns, cl.ns), (dec.left_ec, cl.ec), (dec.right_ec, cl.ec)] {
            assert!((v - cx(target, 0.0)).norm() <= 1e-10 * scale, "{v} vs {target}");
        }
        assert!(dec.commutator_gap.norm() < 1e-12);
    }
    let q = QuantumProcess::embed(&f5());
    let x = QuantumObservable::from_diagonal(&[1.0, -2.0]);
    let y = QuantumObservable::from_diagonal(&[0.5, 3.0]);
    let dec = q_price(&q, &x, &y).unwrap();
    let cl = price(&f5(), &Observable::on(f5().source(), vec![1.0, -2.0]).unwrap(), &Observable::on(f5().target(), vec![0.5, 3.0]).unwrap()).unwrap();
    assert_relative_eq!(dec.delta, cl.delta, epsilon = 1e-14);
    assert_relative_eq!(dec.left_ns.re, cl.ns, epsilon = 1e-14);
    assert_relative_eq!(dec.left_ec.re, cl.ec, epsilon = 1e-14);
}

#[test]
fn sigma_x_against_diagonal_fitness() {
    let p = diag_kraus();
    let x = QuantumObservable::new(sigma_x()).unwrap();
    let y = QuantumObservable::identity(2);
    let dec = q_price(&p, &x, &y).unwrap();
    // 𝔼[[σ_x, U]] = Tr([σ_x, U])/N = 0: the trace of a commutator vanishes.
    assert!(dec.commutator_gap.norm() < 1e-15);
    assert!(dec.holds(1e-12));
    // cov(σ_x, U) = Tr(σ_x U)/2 − 0 = 0, so the totals sit in the transmission term.
    assert_relative_eq!(dec.delta, 1.0, epsilon = 1e-15);
    assert!((dec.left_ec - dec.right_ec).norm() < 1e-14);
}

#[test]
fn left_and_right_totals_agree_and_gap_is_commutator() {
    let mut r = rng(17);
    for seed in 0..48 {
        let p = random_qprocess(100 + seed, 3, 2);
        let x = QuantumObservable::new(random_hermitian(&mut r, 3)).unwrap();
        let y = QuantumObservable::new(random_hermitian(&mut r, 2)).unwrap();
        let dec = q_price(&p, &x, &y).unwrap();
        assert!(dec.holds(1e-9), "{dec:?}");
        let comm = x.matrix() * p.u().matrix() - p.u().matrix() * x.matrix();
        let gap = q_mean(p.source(), &comm).unwrap();
        assert!((dec.left_ns - dec.right_ns - gap).norm() < 1e-10);
        assert!((dec.commutator_gap - gap).norm() < 1e-12);
        assert!(dec.support_leak < 1e-10);
        // Non-commuting pairs have a purely imaginary gap.
        assert!(gap.re.abs() < 1e-10);
    }
}

#[test]
fn quantum_fisher_theorem() {
    for seed in 0..24 {
        let p = random_qprocess(200 + seed, 2, 3);
        let mut r = rng(300 + seed);
        let kraus = random_kraus(&mut r, 3, 2, 2);
        let q = QuantumProcess::from_kraus(&kraus, p.target().clone()).unwrap();
        q_compose(&p, &q).unwrap();
        let dec = q_price(&p, p.u(), q.u()).unwrap();
        assert!(dec.delta.abs() < 1e-10);
        // 0 = var(U) + 𝔼[Δ^left(U, U′) U]
        let var = q_expectation(p.source(), &p.u().map(|u| u * u)).unwrap() - 1.0;
        assert!((dec.left_ns - cx(var, 0.0)).norm() < 1e-10);
        assert!((dec.left_ns + dec.left_ec).norm() < 1e-9);
    }
}

#[test]
fn factorization() {
    let p = diag_kraus();
    let f = q_factorize(&p);
    assert!(f.composition_residual < 1e-14 && f.trace_residual < 1e-14);
    // selective factor is left multiplication by W = diag(2, 0)
    let expected = DMatrix::<Complex64>::identity(2, 2).kronecker(&diag(&[2.0, 0.0]));
    assert!((f.selective - expected).norm() < 1e-14);

    for seed in 0..16 {
        let p = random_qprocess(400 + seed, 3, 3);
        let f = q_factorize(&p);
        assert!(f.composition_residual < 1e-9 && f.trace_residual < 1e-9, "{} {}", f.composition_residual, f.trace_residual);
    }

    // classical embedding: environmental factor acts on diagonals as the classical environmental kernel
    let q = QuantumProcess::embed(&f5());
    let f = q_factorize(&q);
    let cf = process_core::price_factorize(&f5()).unwrap();
    for (row, i) in cf.environmental.kernel().iter().zip(&cf.support) {
        for (j, v) in row.iter().enumerate() {
            assert_relative_eq!(f.environmental[(j + 2 * j, i + 2 * i)].re, *v, epsilon = 1e-14);
        }
    }
}

#[test]
fn laws_of_diagonal_kraus_map() {
    let l = q_laws(&diag_kraus());
    assert_relative_eq!(l.zeroth.scalars["p_star"], 0.5, epsilon = 1e-14);
    assert_relative_eq!(l.zeroth.lhs, 1.0, epsilon = 1e-14);
    assert_relative_eq!(l.gibbs.lhs, -LN2, epsilon = 1e-14);
    assert_relative_eq!(l.second.lhs, -LN2, epsilon = 1e-14);
    // ½·(2−1)²·(−2 log 2)
    assert_relative_eq!(l.acceleration.lhs, -LN2, epsilon = 1e-14);
    assert!(l.zeroth.nontrivial_saturated() && l.gibbs.nontrivial_saturated() && l.second.nontrivial_saturated());
    assert!(l.first.saturated[0]);
}

#[test]
fn laws_match_classical_embedding() {
    let mut r = rng(23);
    for _ in 0..48 {
        let p = random_process(&mut r, 5);
        let l = q_laws(&QuantumProcess::embed(&p));
        let d = Distribution::of(&p);
        for (q, c) in [
            (&l.zeroth, zeroth_law(&d)),
            (&l.gibbs, selective_entropy_bounds(&d)),
            (&l.first, first_law(&d)),
            (&l.second, second_law(&d)),
            (&l.acceleration, selective_acceleration(&d)),
        ] {
            assert_eq!(q.values.len(), c.values.len());
            for (a, b) in q.values.iter().zip(&c.values) {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{}: {a} vs {b}", c.name);
            }
        }
    }
    let l = q_laws(&QuantumProcess::embed(&f1()));
    assert_relative_eq!(l.gibbs.lhs, -LN2, epsilon = 1e-14);
}

#[test]
fn partition_entropy_matches_classical_embedding() {
    let mut r = rng(29);
    for _ in 0..32 {
        let p = random_process(&mut r, 4);
        let q = QuantumProcess::embed(&p);
        let qe = q_partition_entropy(&q, &unit_projections(p.source().len()), &unit_projections(p.target().len())).unwrap();
        let ce = generating_profile(&p);
        for (a, b) in [
            (qe.profile.s_ec, ce.s_ec),
            (qe.profile.s_dis, ce.s_dis),
            (qe.profile.s_mix, ce.s_mix),
            (qe.profile.s_ns, ce.s_ns),
        ] {
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
        }
        for (qc, cc) in qe.profile.per_cell.iter().zip(&ce.per_cell) {
            assert_eq!((qc.a, qc.b), (cc.a, cc.b));
            for (a, b) in [
                (qc.u_bar, cc.u_bar),
                (qc.s_dis, cc.s_dis),
                (qc.s_mix, cc.s_mix),
                (qc.s_ns, cc.s_ns),
                (qc.p_tilde, cc.p_tilde),
                (qc.lambda, cc.lambda),
                (qc.phi, cc.phi),
                (qc.gamma, cc.gamma),
                (qc.e_d2, cc.e_d2),
                (qc.ns_s_dis, cc.ns_s_dis),
                (qc.ns_s_mix, cc.ns_s_mix),
                (qc.ns_s_ec, cc.ns_s_ec),
            ] {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "cell ({}, {}): {a} vs {b}", qc.a, qc.b);
            }
        }
        assert!(qe.dispersion.satisfied(1e-9) && qe.mixing.satisfied(1e-9));
        assert_relative_eq!(qe.cell_mass, 1.0, epsilon = 1e-10);
    }
}

#[test]
fn coarse_partition_has_no_environmental_entropy() {
    let p = random_qprocess(500, 3, 2);
    let e = q_partition_entropy(&p, &[DMatrix::identity(3, 3)], &[DMatrix::identity(2, 2)]).unwrap();
    assert_eq!(e.profile.per_cell.len(), 1);
    assert_relative_eq!(e.profile.per_cell[0].u_bar, 1.0, epsilon = 1e-10);
    assert!(e.profile.s_ec.abs() < 1e-10);
}

#[test]
fn hadamard_partition_of_dephasing_channel() {
    let rho = DensityOperator::from_diagonal(&[1.0, 1.0]).unwrap();
    let p = QuantumProcess::from_kraus(&[diag(&[1.0, 0.0]), diag(&[0.0, 1.0])], rho).unwrap();
    let h = hadamard_projections();
    let e = q_partition_entropy(&p, &h, &h).unwrap();
    // Every cell carries Ū = ¼ and D = π/2, so S_dis = S_mix = log 2 and S_EC = log 4.
    assert_relative_eq!(e.profile.s_ec, 2.0 * LN2, epsilon = 1e-12);
    assert_relative_eq!(e.profile.s_dis, LN2, epsilon = 1e-12);
    assert_relative_eq!(e.profile.s_mix, LN2, epsilon = 1e-12);
    assert!(e.profile.decomposition_residual().abs() < 1e-12);
    assert!(e.dispersion.satisfied(1e-12) && e.mixing.satisfied(1e-12));
}

#[test]
fn partition_validation() {
    let p = diag_kraus();
    let bad = vec![diag(&[1.0, 0.0])];
    assert!(matches!(q_partition_entropy(&p, &bad, &[DMatrix::identity(1, 1)]), Err(Error::Invalid(_))));
    let not_proj = vec![diag(&[0.5, 0.5]), diag(&[0.5, 0.5])];
    assert!(matches!(q_partition_entropy(&p, &not_proj, &[DMatrix::identity(1, 1)]), Err(Error::Invalid(_))));
    assert!(matches!(q_partition_entropy(&p, &unit_projections(3), &[DMatrix::identity(1, 1)]), Err(Error::Shape(_))));
}

#[test]
fn kgs_reduces_to_price_when_closed() {
    let p = random_qprocess(600, 2, 2);
    let open = OpenQuantumProcess::with_orphans(p.clone(), DMatrix::zeros(2, 2)).unwrap();
    let mut r = rng(601);
    let x = QuantumObservable::new(random_hermitian(&mut r, 2)).unwrap();
    let y = QuantumObservable::new(random_hermitian(&mut r, 2)).unwrap();
    let k = q_kgs(&open, &x, &y).unwrap();
    let pr = q_price(&p, &x, &y).unwrap();
    assert_relative_eq!(k.p_parented, 1.0, epsilon = 1e-12);
    assert_eq!(k.left_selection, pr.left_ns);
    assert_eq!(k.right_transmission, pr.right_ec);
    assert!(k.orphan_nu.norm() < 1e-10 && k.orphan_pi.norm() < 1e-10);
}

#[test]
fn kgs_matches_classical_embedding() {
    let c = process_core::Process::from_kernel(
        measure_core::Population::from_weights(vec![1.0, 1.0, 1.0]).unwrap(),
        measure_core::TypeSet::indexed("c", 4).unwrap(),
        vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 0.0]],
    )
    .unwrap();
    let orphans = vec![0.0, 0.0, 1.0, 1.0];
    let open = OpenProcess::with_orphans(c.clone(), orphans.clone()).unwrap();
    let x = Observable::on(c.source(), vec![0.3, -1.0, 2.0]).unwrap();
    let y = Observable::on(open.full_target(), vec![1.0, 0.0, -2.0, 4.0]).unwrap();
    let ck = kgs(&open, &x, &y).unwrap();
    let qopen = OpenQuantumProcess::with_orphans(QuantumProcess::embed(&c), diag(&orphans)).unwrap();
    let qk = q_kgs(&qopen, &QuantumObservable::embed(&x), &QuantumObservable::embed(&y)).unwrap();
    assert_relative_eq!(qk.delta, ck.delta, epsilon = 1e-12);
    assert_relative_eq!(qk.p_parented, ck.p_parented, epsilon = 1e-12);
    for (q, c) in [
        (qk.left_selection, ck.selection),
        (qk.right_selection, ck.selection),
        (qk.left_transmission, ck.transmission),
        (qk.right_transmission, ck.transmission),
        (qk.orphan_nu, ck.orphan_nu),
        (qk.orphan_pi, ck.orphan_pi),
    ] {
        assert!((q - cx(c, 0.0)).norm() < 1e-12, "{q} vs {c}");
    }
    assert!(qk.holds(1e-12));
}

#[test]
fn open_process_validation() {
    let p = random_qprocess(700, 2, 2);
    let noncommuting = random_density(&mut rng(701), 2, 1.0);
    assert!(OpenQuantumProcess::with_orphans(p.clone(), noncommuting).is_err());
    assert!(matches!(OpenQuantumProcess::with_orphans(p.clone(), DMatrix::zeros(3, 3)), Err(Error::Shape(_))));
    let too_big = QuantumObservable::identity(2).map(|v| 2.0 * v);
    assert!(matches!(OpenQuantumProcess::new(p.clone(), p.target().clone(), too_big), Err(Error::Validation(_))));
}

fn open_fixture(seed: u64) -> (OpenQuantumProcess, QuantumObservable, QuantumObservable) {
    let p = random_qprocess(seed, 2, 2);
    let mut r = rng(seed + 1);
    let (a, b) = (r.random_range(0.0..2.0), r.random_range(0.0..2.0));
    let m = p.target().matrix();
    let orphans = m * cx(a, 0.0) + m * m * cx(b, 0.0);
    let x = QuantumObservable::new(random_hermitian(&mut r, 2)).unwrap();
    let y = QuantumObservable::new(random_hermitian(&mut r, 2)).unwrap();
    (OpenQuantumProcess::with_orphans(p, orphans).unwrap(), x, y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kgs_four_routes_agree(seed in 0u64..10_000) {
        let (open, x, y) = open_fixture(seed);
        let k = q_kgs(&open, &x, &y).unwrap();
        prop_assert!(k.p_parented < 1.0);
        prop_assert!(k.holds(1e-9), "{k:?}");
        prop_assert!((k.orphan_nu - k.orphan_pi).norm() < 1e-9);
    }

    #[test]
    fn quantum_jensen(seed in 0u64..10_000, d in 2usize..5) {
        let mut r = rng(seed);
        let rho = DensityOperator::new(random_density(&mut r, d, 1.0)).unwrap();
        let x = random_hermitian(&mut r, d);
        let mean = q_mean(&rho, &x).unwrap().re;
        let shifted = &x + DMatrix::<Complex64>::identity(d, d) * cx(4.0, 0.0);
        let shifted_mean = mean + 4.0;
        let cases: [(CMatrix, f64, fn(f64) -> f64); 3] = [
            (x.clone(), mean, |v| v * v),
            (x.clone(), mean, f64::exp),
            (shifted, shifted_mean, |v| if v > 0.0 { v * v.ln() } else { 0.0 }),
        ];
        for (m, mu, f) in cases {
            let lhs = q_mean(&rho, &apply_fn(&m, f)).unwrap().re;
            prop_assert!(lhs >= f(mu) - 1e-10 * lhs.abs().max(1.0), "{lhs} < {}", f(mu));
        }
    }

    #[test]
    fn random_laws_hold(seed in 0u64..10_000) {
        let l = q_laws(&random_qprocess(seed, 3, 3));
        for rep in [&l.zeroth, &l.gibbs, &l.first, &l.second, &l.acceleration] {
            prop_assert!(rep.satisfied(1e-9), "{rep:?}");
        }
    }

    #[test]
    fn spectral_calculus_is_consistent(seed in 0u64..10_000) {
        let p = random_qprocess(seed, 3, 2);
        let neg_ulogu = apply_fn(p.u().matrix(), |u| if u > 0.0 { -u * u.ln() } else { 0.0 });
        let mut got = eigh(&neg_ulogu).0;
        let mut want: Vec<f64> = p.u().eigenvalues().iter().map(|&u| if u > 0.0 { -u * u.ln() } else { 0.0 }).collect();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn random_partition_entropy_is_consistent(seed in 0u64..10_000) {
        let p = random_qprocess(seed, 2, 2);
        let h = hadamard_projections();
        let e = q_partition_entropy(&p, &h, &unit_projections(2)).unwrap();
        prop_assert!(e.profile.decomposition_residual().abs() < 1e-9);
        prop_assert!(e.profile.s_ec.is_finite() && e.profile.s_ec >= -1e-12);
    }
}
