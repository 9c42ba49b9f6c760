//! Iterating an endomorphic process over generations.

use entropy::generating_profile;
use laws::{second_law, speed_limits, Distribution, DEFAULT_C_GRID};
use measure_core::{tolerance, variance, Error, Population, Result};
use process_core::Process;
use serde::Serialize;

/// Largest number of generations.
pub const MAX_GENERATIONS: usize = 64;

/// One generation of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    /// Generation index.
    pub t: usize,
    /// Population size `N_t`.
    pub n: f64,
    /// `var(U_t)`.
    pub var_u: f64,
    /// `S_NS,t`.
    pub s_ns: f64,
    /// `S_EC,t` at the singleton partitions.
    pub s_ec: f64,
    /// Smallest slack of the second-law chain.
    pub second_law_slack: f64,
    /// Smallest slack of the speed-limit chain.
    pub speed_limit_slack: f64,
}

/// Runs `generations` steps of `μ_{t+1} = μ_t w`, reporting the step-`t`
/// functionals of the process with parent population `μ_t`.
pub fn simulate(p: &Process, generations: usize) -> Result<Vec<TrajectoryRow>> {
    if !p.is_endomorphic() {
        return Err(Error::Invalid("simulation needs a process from a type set to itself".into()));
    }
    if generations == 0 || generations > MAX_GENERATIONS {
        return Err(Error::OutOfRange(format!("generations must lie in 1..={MAX_GENERATIONS}, got {generations}")));
    }
    let mut rows = Vec::with_capacity(generations);
    let mut pop = p.source().clone();
    for t in 0..generations {
        if tolerance::current().snap(pop.size()) <= 0.0 {
            return Err(Error::Degenerate(format!("population is extinct at generation {t}")));
        }
        let step = Process::from_kernel(pop.clone(), p.target().types().clone(), p.kernel().to_vec())?;
        let d = Distribution::of(&step);
        rows.push(TrajectoryRow {
            t,
            n: pop.size(),
            var_u: variance(step.source(), &step.fitness().u)?,
            s_ns: d.selective_entropy(),
            s_ec: generating_profile(&step).s_ec,
            second_law_slack: second_law(&d).min_slack(),
            speed_limit_slack: speed_limits(&d, &DEFAULT_C_GRID)?.min_slack(),
        });
        pop = Population::new(step.target().types().clone(), step.target().weights().to_vec())?;
    }
    Ok(rows)
}

/// Formats a float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the trajectory as CSV.
pub fn write_csv<W: std::io::Write>(rows: &[TrajectoryRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "N", "var_U", "S_NS", "S_EC", "second_law_slack", "speed_limit_slack"])?;
    for r in rows {
        let mut rec = vec![r.t.to_string()];
        rec.extend([r.n, r.var_u, r.s_ns, r.s_ec, r.second_law_slack, r.speed_limit_slack].map(format_float));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
