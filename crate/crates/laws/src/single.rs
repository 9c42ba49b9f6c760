use measure_core::{log_or_zero, tolerance, xlogx, xlogy, Error, Result};

use crate::distribution::Distribution;
use crate::report::{EquilibriumClass, LawReport};

/// Largest order accepted by [`higher_order_first_law`].
pub const MAX_ORDER: u32 = 8;

/// Default grid of exponents for [`speed_limits`]; `𝔼[U²]` is appended.
pub const DEFAULT_C_GRID: [f64; 5] = [0.125, 0.25, 0.5, 1.0, 2.0];

struct Basics {
    var: f64,
    s: f64,
    p: f64,
    class: EquilibriumClass,
}

fn basics(d: &Distribution) -> Basics {
    Basics { var: d.var(), s: d.selective_entropy(), p: d.p_star(), class: EquilibriumClass::of(d) }
}

/// Zeroth law: `var(U) ≥ e^{−S_NS} − 1 ≥ 1/p_* − 1 ≥ 0`.
pub fn zeroth_law(d: impl Into<Distribution>) -> LawReport {
    let d = d.into();
    let b = basics(&d);
    LawReport::chain(
        "zeroth_law",
        vec![("var(U)", b.var), ("exp(-S_NS) - 1", (-b.s).exp() - 1.0), ("1/p_* - 1", 1.0 / b.p - 1.0), ("0", 0.0)],
        0,
        vec![false, false, true],
        b.class,
    )
    .with_scalar("p_star", b.p)
    .with_scalar("selective_entropy", b.s)
}

/// Strong Gibbs inequality: `0 ≥ log p_* ≥ S_NS ≥ −log(1 + var(U))`.
pub fn selective_entropy_bounds(d: impl Into<Distribution>) -> LawReport {
    let d = d.into();
    let b = basics(&d);
    LawReport::chain(
        "selective_entropy_bounds",
        vec![("0", 0.0), ("log p_*", b.p.ln()), ("S_NS", b.s), ("-log(1 + var(U))", -(b.var.ln_1p()))],
        2,
        vec![true, false, false],
        b.class,
    )
}

/// First law: `∂_NS var(U) = cov(U², U) ≥ var(U)(1 + var(U)) ≥ ½var(U)² ≥ 0`.
///
/// Both the strong and the weak bound are reported; the strong one is always
/// the larger (`var(1+var) ≥ ½var²`) and is flagged as the tighter bound.
/// The aggregate form `∂²_NS W = W̄·cov(U², U) ≥ W̄·var(U)(1+var(U))` is
/// reported in the scalars.
pub fn first_law(d: impl Into<Distribution>) -> LawReport {
    let d = d.into();
    let b = basics(&d);
    let lhs = d.cov_with_u(|u| u * u);
    let strong = b.var * (1.0 + b.var);
    let weak = 0.5 * b.var * b.var;
    LawReport::chain(
        "first_law",
        vec![("cov(U^2, U)", lhs), ("var(U)(1 + var(U))", strong), ("var(U)^2 / 2", weak), ("0", 0.0)],
        0,
        vec![false, true, true],
        b.class,
    )
    .with_scalar("strong_bound", strong)
    .with_scalar("weak_bound", weak)
    .with_scalar("tighter_bound", strong.max(weak))
    .with_scalar("aggregate_lhs", d.wbar() * lhs)
    .with_scalar("aggregate_bound", d.wbar() * strong)
    .with_scalar("p_star", b.p)
    .with_note(if strong >= weak { "strong bound is the tighter one" } else { "weak bound is the tighter one" })
}

/// Higher-order first law of order `n ∈ [1, 8]`.
///
/// * even `n`: `𝔼[U(U−1)ⁿ] ≥ var(U)ⁿ ≥ 0`;
/// * odd `n`: `𝔼[1_{U>0}(U−1)^{n+1}] ≥ (1−p_*)^{n+1}/p_*ⁿ ≥ 0`.
///
/// Both are Jensen bounds (under the size-biased and the childbearing
/// measure respectively) and saturate at selective equilibrium. The scalars
/// also carry the size-biased moment `𝔼[U(U−1)ⁿ]` and the covariance route
/// `cov((U−1)ⁿ, U)`, which satisfy
/// `𝔼[U(U−1)ⁿ] = cov((U−1)ⁿ, U) + 𝔼[(U−1)ⁿ]`.
pub fn higher_order_first_law(d: impl Into<Distribution>, n: u32) -> Result<LawReport> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::OutOfRange(format!("order {n} not in 1..={MAX_ORDER}")));
    }
    let d = d.into();
    let b = basics(&d);
    let tol = tolerance::current();
    let ni = n as i32;
    let size_biased = d.mean(|u| u * (u - 1.0).powi(ni));
    let cov_route = d.cov_with_u(|u| (u - 1.0).powi(ni));
    let (lhs, lhs_label, bound, bound_label) = if n % 2 == 0 {
        (size_biased, "E[U(U-1)^n]", b.var.powi(ni), "var(U)^n")
    } else {
        let lhs = d.mean(|u| if tol.snap(u) > 0.0 { (u - 1.0).powi(ni + 1) } else { 0.0 });
        (lhs, "E[1_{U>0}(U-1)^(n+1)]", (1.0 - b.p).powi(ni + 1) / b.p.powi(ni), "(1-p_*)^(n+1)/p_*^n")
    };
    Ok(LawReport::chain(
        &format!("higher_order_first_law_{n}"),
        vec![(lhs_label, lhs), (bound_label, bound), ("0", 0.0)],
        0,
        vec![false, true],
        b.class,
    )
    .with_scalar("order", n as f64)
    .with_scalar("size_biased_moment", size_biased)
    .with_scalar("covariance_route", cov_route)
    .with_scalar("p_star", b.p))
}

/// Exponential variant: `cov(e^U, U) ≥ (1 − p_*)(e^{1/p_*} − 1) ≥ 0`.
pub fn exp_first_law(d: impl Into<Distribution>) -> LawReport {
    let d = d.into();
    let b = basics(&d);
    let lhs = d.cov_with_u(f64::exp);
    let bound = (1.0 - b.p) * ((1.0 / b.p).exp() - 1.0);
    LawReport::chain(
        "exp_first_law",
        vec![("cov(exp U, U)", lhs), ("(1-p_*)(exp(1/p_*) - 1)", bound), ("0", 0.0)],
        0,
        vec![false, true],
        b.class,
    )
}

/// Second law:
/// `0 ≥ −(1/p_*−1)log(1/p_*) ≥ (e^{−S}−1)S ≥ var(U)·S ≥ −var(U)log(1+var(U)) ≥ ∂_NS S_NS`,
/// with `∂_NS S_NS = cov(−U log U, U)`.
pub fn second_law(d: impl Into<Distribution>) -> LawReport {
    let d = d.into();
    let b = basics(&d);
    let lhs = d.cov_with_u(|u| -xlogx(u));
    let inv = 1.0 / b.p;
    LawReport::chain(
        "second_law",
        vec![
            ("0", 0.0),
            ("-(1/p_* - 1) log(1/p_*)", -xlogy(inv - 1.0, inv)),
            ("(exp(-S_NS) - 1) S_NS", ((-b.s).exp() - 1.0) * b.s),
            ("var(U) S_NS", b.var * b.s),
            ("-var(U) log(1 + var(U))", -b.var * b.var.ln_1p()),
            ("cov(-U log U, U)", lhs),
        ],
        5,
        vec![true, false, false, false, false],
        b.class,
    )
    .with_scalar("selective_entropy", b.s)
    .with_scalar("p_star", b.p)
}

/// Basic speed limit at exponent `c`:
/// `log(1/p_*) − (𝔼U²/c)·log(𝔼U^{2+c}/𝔼U²)`.
fn basic_speed_limit(d: &Distribution, c: f64) -> f64 {
    let m2 = d.moment(2.0);
    let p = d.p_star();
    -p.ln() - m2 / c * log_or_zero(d.moment(2.0 + c) / m2)
}

/// `c·log 𝔼U^{1+c} − (c−1)·log 𝔼U² − log 𝔼U^{2+c}`, whose root defines the
/// continuum stationary point.
fn stationarity_functional(d: &Distribution, c: f64) -> f64 {
    c * d.moment(1.0 + c).ln() - (c - 1.0) * d.moment(2.0).ln() - d.moment(2.0 + c).ln()
}

/// Selective speed limits: `∂_NS S_NS ≥ max(basic(c) over the grid, infinitary)`,
/// with the infinitary limit `log(1/p_*) − 𝔼[U² log U]`.
///
/// `c_grid` must be non-empty with positive entries; pass [`DEFAULT_C_GRID`]
/// for the default (to which `𝔼[U²]` is added). When the stationarity
/// functional changes sign between consecutive grid points its root `c_*` is
/// located by bisection (to 1e-8) and the basic limit at `c_*` joins the
/// maximum; otherwise the report notes that no stationary point lies on the grid.
pub fn speed_limits(d: impl Into<Distribution>, c_grid: &[f64]) -> Result<LawReport> {
    if c_grid.is_empty() {
        return Err(Error::Invalid("empty exponent grid".into()));
    }
    if let Some(c) = c_grid.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(Error::Invalid(format!("exponent {c} is not positive")));
    }
    let d = d.into();
    let b = basics(&d);
    let lhs = d.cov_with_u(|u| -xlogx(u));
    let mut grid: Vec<f64> = c_grid.to_vec();
    grid.push(d.moment(2.0));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);

    let mut report_scalars = Vec::new();
    let mut best_basic = f64::NEG_INFINITY;
    let mut best_c = grid[0];
    for &c in &grid {
        let v = basic_speed_limit(&d, c);
        report_scalars.push((format!("basic_c={c}"), v));
        if v > best_basic {
            best_basic = v;
            best_c = c;
        }
    }
    let infinitary = -b.p.ln() - d.mean(|u| u * xlogx(u));

    let mut c_star = None;
    if b.class != EquilibriumClass::PurelyEnvironmental {
        let f: Vec<f64> = grid.iter().map(|&c| stationarity_functional(&d, c)).collect();
        for k in 0..grid.len().saturating_sub(1) {
            if f[k] == 0.0 {
                c_star = Some(grid[k]);
                break;
            }
            if f[k].signum() != f[k + 1].signum() {
                let (mut lo, mut hi, mut flo) = (grid[k], grid[k + 1], f[k]);
                while hi - lo > 1e-8 {
                    let mid = 0.5 * (lo + hi);
                    let fm = stationarity_functional(&d, mid);
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                c_star = Some(0.5 * (lo + hi));
                break;
            }
        }
    }
    let at_c_star = c_star.map(|c| basic_speed_limit(&d, c));
    let best = [Some(best_basic), Some(infinitary), at_c_star].into_iter().flatten().fold(f64::NEG_INFINITY, f64::max);

    let mut report = LawReport::chain(
        "speed_limits",
        vec![("cov(-U log U, U)", lhs), ("max(basic, infinitary)", best)],
        0,
        vec![false],
        b.class,
    )
    .with_scalar("best_basic", best_basic)
    .with_scalar("best_basic_c", best_c)
    .with_scalar("infinitary", infinitary)
    .with_scalar("p_star", b.p);
    for (k, v) in report_scalars {
        report = report.with_scalar(&k, v);
    }
    report = match (c_star, at_c_star) {
        (Some(c), Some(v)) => report.with_scalar("c_star", c).with_scalar("basic_at_c_star", v),
        _ => report.with_note("no stationary point on grid"),
    };
    Ok(report)
}

/// Selective acceleration of selective entropy,
/// `∂²_NS S_NS = 𝔼[−(U−1)²U log U]`.
///
/// The chain evaluated is the Jensen pair (with `m = 𝔼[(U−1)²U]`)
/// `−m log(m/var(U)) ≥ ∂²_NS S_NS ≥ −m log(𝔼[(U−1)²U²]/m)`.
/// The closed-form expressions `−½var²log var²` (claimed upper bound) and
/// `var²·log((var(U²)+var²)/var⁴)` (claimed lower bound) are reported as
/// scalars together with their signed slacks; they are not valid in general.
pub fn selective_acceleration(d: impl Into<Distribution>) -> LawReport {
    let d = d.into();
    let b = basics(&d);
    let tol = tolerance::current();
    let lhs = d.mean(|u| -(u - 1.0).powi(2) * xlogx(u));
    let m = d.mean(|u| (u - 1.0).powi(2) * u);
    let m_sq = d.mean(|u| (u - 1.0).powi(2) * u * u);
    let (upper, lower) = if b.var <= tol.zero || m <= tol.zero {
        (0.0, 0.0)
    } else {
        (-xlogy(m, m / b.var), -xlogy(m, m_sq / m))
    };
    let v2 = b.var * b.var;
    let var_usq = d.var_of(|u| u * u);
    let closed_upper = if v2 > 0.0 { -0.5 * v2 * v2.ln() } else { 0.0 };
    let closed_lower = if v2 > 0.0 { v2 * ((var_usq + v2) / (v2 * v2)).ln() } else { 0.0 };
    LawReport::chain(
        "selective_acceleration",
        vec![("-m log(m/var(U))", upper), ("E[-(U-1)^2 U log U]", lhs), ("-m log(E[(U-1)^2 U^2]/m)", lower)],
        1,
        vec![false, false],
        b.class,
    )
    .with_scalar("m", m)
    .with_scalar("closed_form_upper", closed_upper)
    .with_scalar("closed_form_upper_slack", closed_upper - lhs)
    .with_scalar("closed_form_lower", closed_lower)
    .with_scalar("closed_form_lower_slack", lhs - closed_lower)
    .with_scalar("p_star", b.p)
}
