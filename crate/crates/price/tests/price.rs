use approx::assert_relative_eq;
use measure_core::{covariance, variance, Observable, Population, TypeSet};
use price::{
    aggregate_price, fisher, functional_price, multilevel_price, multilevel_variance, price,
    selective_change_alt,
};
use process_core::{compose, Process};
use proptest::prelude::*;
use testkit::{any_pair, any_process_with_observables, f1, f2, f5, rng};

fn obs(pop: &Population, v: &[f64]) -> Observable {
    Observable::on(pop, v.to_vec()).unwrap()
}

#[test]
fn price_examples() {
    let p = f5();
    let d = price(&p, &obs(p.source(), &[1.0, 0.0]), &obs(p.target(), &[1.0, 0.0])).unwrap();
    // 𝔼′y = 2/3, 𝔼x = 1/3; cov(x, U) = (1/3)(2) − (1/3)(1) = 1/3; ⟨y⟩ = (½, 1), Δ = (−½, 1),
    // 𝔼[ΔU] = (1/3)(−½·2) + (2/3)(1·½) = 0.
    assert_relative_eq!(d.delta, 1.0 / 3.0, epsilon = 1e-15);
    assert_relative_eq!(d.ns, 1.0 / 3.0, epsilon = 1e-15);
    assert_relative_eq!(d.ec, 0.0, epsilon = 1e-15);

    let pop = Population::from_weights(vec![1.0, 3.0]).unwrap();
    let id = Process::identity(&pop);
    let c = obs(&pop, &[2.5, 2.5]);
    let d = price(&id, &c, &c).unwrap();
    assert_eq!((d.delta, d.ns), (0.0, 0.0));
    assert_relative_eq!(d.ec, 0.0, epsilon = 1e-15);
}

#[test]
fn price_rejects_mismatched_observables() {
    let p = f5();
    let wrong = Observable::new(TypeSet::new(["q"]).unwrap(), vec![1.0]).unwrap();
    assert!(price(&p, &wrong, &obs(p.target(), &[1.0, 0.0])).is_err());
}

#[test]
fn aggregate_examples() {
    let p = f5();
    let a = aggregate_price(&p, &obs(p.source(), &[1.0, 0.0]), &obs(p.target(), &[1.0, 0.0])).unwrap();
    assert_relative_eq!(a.total, 1.0, epsilon = 1e-15);
    assert_relative_eq!(a.selection + a.transmission + a.growth, 1.0, epsilon = 1e-14);

    let p = f2();
    let a = aggregate_price(&p, &obs(p.source(), &[1.0, 0.0]), &obs(p.target(), &[0.0, 1.0])).unwrap();
    assert_eq!(a.growth, 0.0);

    let p = f1();
    let a = aggregate_price(&p, &obs(p.source(), &[1.0, 0.0]), &obs(p.target(), &[1.0])).unwrap();
    assert_relative_eq!(a.total, 1.0, epsilon = 1e-15);
    assert_relative_eq!(a.selection + a.transmission + a.growth, 1.0, epsilon = 1e-14);
}

#[test]
fn fisher_examples() {
    let f = fisher(&f2(), &f2()).unwrap();
    assert_relative_eq!(f.ns, 0.0, epsilon = 1e-15);
    assert_relative_eq!(f.ec, 0.0, epsilon = 1e-15);

    let p = f5();
    let f = fisher(&p, &Process::identity(p.target())).unwrap();
    assert_relative_eq!(f.ns, 0.5, epsilon = 1e-15);
    assert_relative_eq!(f.ec, -0.5, epsilon = 1e-15);

    assert!(fisher(&f5(), &f1()).is_err());
}

#[test]
fn functional_price_second_moment() {
    let p = f5();
    let u = &p.fitness().u;
    let usq = u.map(|v| v * v);
    let d = functional_price(&p, &usq, &obs(p.target(), &[0.0, 0.0])).unwrap();
    assert_relative_eq!(d.ns, covariance(p.source(), &usq, u).unwrap(), epsilon = 1e-15);
    // cov(U², U) = 𝔼U³ − 𝔼U² = (8 + 0.25)/3 − 1.5
    assert_relative_eq!(d.ns, 8.25 / 3.0 - 1.5, epsilon = 1e-14);
    let one_s = obs(p.source(), &[1.0, 1.0]);
    let one_t = obs(p.target(), &[1.0, 1.0]);
    let d = functional_price(&p, &one_s, &one_t).unwrap();
    assert_relative_eq!(d.delta, 0.0, epsilon = 1e-15);
    assert_relative_eq!(d.ns, 0.0, epsilon = 1e-15);
    assert_relative_eq!(d.ec, 0.0, epsilon = 1e-15);
}

#[test]
fn multilevel_fisher() {
    let mut r = rng(5);
    for _ in 0..50 {
        let (p, q) = testkit::random_composable_pair(&mut r, 5);
        let c = compose(&p, &q).unwrap();
        let u_next = Observable::on(p.target(), q.u().to_vec()).unwrap();
        let z = Observable::on(q.target(), vec![1.0; q.target().len()]).unwrap();
        // Ū′ = 1 and z ≡ 1 ⇒ the multi-level sum vanishes
        let m = multilevel_price(&p, &q, &u_next, &z).unwrap();
        assert!(m.delta.abs() < 1e-12 && m.residual.abs() < 1e-9, "{m:?}");
        let var_next = variance(q.source(), &q.fitness().u).unwrap();
        assert_relative_eq!(m.between + m.within, var_next, max_relative = 1e-9, epsilon = 1e-12);
        let v = multilevel_variance(&p, &q).unwrap();
        assert_relative_eq!(v.var_u2, variance(c.source(), &c.fitness().u).unwrap(), max_relative = 1e-9, epsilon = 1e-12);
    }
}

#[test]
fn multilevel_identity_continuation_reduces_to_single_level() {
    let mut r = rng(6);
    for _ in 0..20 {
        let p = testkit::random_process(&mut r, 5);
        let q = Process::identity(p.target());
        let x = testkit::random_observable(&mut r, p.source().types());
        let y = testkit::random_observable(&mut r, p.target().types());
        let m = multilevel_price(&p, &q, &y, &y).unwrap();
        assert!(m.transmission.abs() < 1e-12);
        // with z = y and q the identity, the Δ vanishes and the first two terms cancel
        assert!((m.between + m.within).abs() < 1e-12);
        let single = price(&p, &x, &y).unwrap();
        assert!(single.holds(1e-9));
    }
}

#[test]
fn multilevel_variance_examples() {
    // q purely environmental ⇒ var′(U′) = 0; U^{(2)} = U, so the terms are ±var(U)
    let p = f5();
    let q = Process::from_kernel(p.target().clone(), p.target().types().clone(), vec![vec![0.3, 0.7], vec![0.6, 0.4]]).unwrap();
    let v = multilevel_variance(&p, &q).unwrap();
    assert!(v.var_u_next.abs() < 1e-14, "{v:?}");
    assert_relative_eq!(v.var_u2, 0.5, epsilon = 1e-14);
    assert_relative_eq!(v.mean_conditional_var, -0.5, epsilon = 1e-14);
    // both purely environmental ⇒ everything vanishes
    let v = multilevel_variance(&f2(), &f2()).unwrap();
    assert!(v.var_u_next.abs() < 1e-15 && v.var_u2.abs() < 1e-15 && v.mean_conditional_var.abs() < 1e-15, "{v:?}");

    // p = F2, q F5-shaped on F2's child population
    let p = f2();
    let q = Process::from_kernel(p.target().clone(), p.target().types().clone(), vec![vec![1.0, 1.0], vec![0.5, 0.0]]).unwrap();
    let v = multilevel_variance(&p, &q).unwrap();
    // U′ = (2, 0.5)/1.25, var′ = 𝔼U′² − 1
    let u = [2.0 / 1.25, 0.5 / 1.25];
    let direct = 0.5 * (u[0] * u[0] + u[1] * u[1]) - 1.0;
    assert_relative_eq!(v.var_u_next, direct, epsilon = 1e-15);
    assert_relative_eq!(v.var_u2 + v.mean_conditional_var, direct, epsilon = 1e-14);
    // F2 mixes completely: ⟨U′⟩ is constant, so all variance is within rows
    assert!(v.var_u2.abs() < 1e-15);
}

/// Direct two-step oracle: Δ(ȳ, z̄) from the definitions.
fn two_step_delta(p: &Process, q: &Process, y: &Observable, z: &Observable) -> f64 {
    let ey: f64 = y.values().iter().zip(p.target().weights()).map(|(a, m)| a * m).sum::<f64>() / p.target().size();
    let ez: f64 = z.values().iter().zip(q.target().weights()).map(|(a, m)| a * m).sum::<f64>() / q.target().size();
    ez - ey
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn price_identity((p, x, y) in any_process_with_observables(8)) {
        let d = price(&p, &x, &y).unwrap();
        prop_assert!(d.holds(1e-9), "{d:?}");
        let alt = selective_change_alt(&p, &x).unwrap();
        prop_assert!((alt - d.ns).abs() <= 1e-9 * d.scale());
        let a = aggregate_price(&p, &x, &y).unwrap();
        let scale = a.total.abs().max(a.selection.abs()).max(a.transmission.abs()).max(a.growth.abs()).max(1.0);
        prop_assert!(a.residual.abs() <= 1e-9 * scale);
        prop_assert!((a.two_term - a.total).abs() <= 1e-9 * scale);
    }

    #[test]
    fn fisher_cancels((p, q) in any_pair(8)) {
        let f = fisher(&p, &q).unwrap();
        prop_assert!(f.residual.abs() <= 1e-9 * f.ns.max(1.0), "{f:?}");
    }

    #[test]
    fn multilevel_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q) = testkit::random_composable_pair(&mut r, 6);
        let y = testkit::random_observable(&mut r, p.target().types());
        let z = testkit::random_observable(&mut r, q.target().types());
        let m = multilevel_price(&p, &q, &y, &z).unwrap();
        let scale = m.between.abs().max(m.within.abs()).max(m.transmission.abs()).max(1.0);
        prop_assert!(m.residual.abs() <= 1e-9 * scale, "{m:?}");
        prop_assert!((m.delta - two_step_delta(&p, &q, &y, &z)).abs() <= 1e-12 * scale);
        let v = multilevel_variance(&p, &q).unwrap();
        prop_assert!(v.residual.abs() <= 1e-9 * v.var_u_next.max(1.0), "{v:?}");
    }
}
