use std::collections::BTreeMap;

use measure_core::tolerance;
use serde::{Deserialize, Serialize};

use crate::distribution::Distribution;

/// Equilibrium class of a process, read off its relative fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumClass {
    /// `U` takes only the values `0` and `1/p_*`, with `p_* < 1`.
    SelectiveEquilibrium,
    /// `U ≡ 1`.
    PurelyEnvironmental,
    /// Anything else.
    Generic,
}

impl EquilibriumClass {
    /// Classifies a fitness distribution within the saturation tolerance.
    pub fn of(d: &Distribution) -> Self {
        let tol = tolerance::current();
        let p = d.p_star();
        if p <= 0.0 {
            return EquilibriumClass::Generic;
        }
        let target = 1.0 / p;
        let constant_on_support = d
            .values()
            .iter()
            .zip(d.probs())
            .filter(|(u, q)| tol.snap(**u) > 0.0 && **q > 0.0)
            .all(|(u, _)| (u - target).abs() <= tol.sat * target.max(1.0));
        if !constant_on_support {
            EquilibriumClass::Generic
        } else if (p - 1.0).abs() <= tol.sat {
            EquilibriumClass::PurelyEnvironmental
        } else {
            EquilibriumClass::SelectiveEquilibrium
        }
    }
}

/// One inequality chain `values[0] ≥ values[1] ≥ …`, with the left-hand side
/// at `lhs_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    /// Name of the law.
    pub name: String,
    /// Left-hand side (also present in `values`).
    pub lhs: f64,
    /// Position of the left-hand side in `values`.
    pub lhs_index: usize,
    /// The chain, largest first.
    pub values: Vec<f64>,
    /// One label per entry of `values`.
    pub labels: Vec<String>,
    /// `values[k] − values[k+1]`; non-negative when the link holds.
    pub slacks: Vec<f64>,
    /// Whether each link is an algebraic or trivially signed relation rather
    /// than a law (e.g. a final `≥ 0`).
    pub trivial: Vec<bool>,
    /// Whether each link holds with equality within the saturation tolerance.
    pub saturated: Vec<bool>,
    /// Equilibrium class of the underlying process.
    pub equilibrium_class: EquilibriumClass,
    /// Auxiliary quantities (moments, alternative bounds, diagnostics).
    pub scalars: BTreeMap<String, f64>,
    /// Free-form remarks.
    pub notes: Vec<String>,
}

impl LawReport {
    /// Builds a report from a chain; slacks and saturation are derived.
    ///
    /// Saturation is `|slack| ≤ ε_sat · max(1, |a|, |b|)` for a link `a ≥ b`.
    pub fn chain(
        name: &str,
        entries: Vec<(&str, f64)>,
        lhs_index: usize,
        trivial: Vec<bool>,
        class: EquilibriumClass,
    ) -> Self {
        assert_eq!(trivial.len() + 1, entries.len(), "one triviality flag per link");
        let sat = tolerance::current().sat;
        let values: Vec<f64> = entries.iter().map(|e| e.1).collect();
        let labels = entries.iter().map(|e| e.0.to_string()).collect();
        let slacks: Vec<f64> = values.windows(2).map(|w| w[0] - w[1]).collect();
        let saturated = values
            .windows(2)
            .zip(&slacks)
            .map(|(w, s)| s.abs() <= sat * 1f64.max(w[0].abs()).max(w[1].abs()))
            .collect();
        Self {
            name: name.to_string(),
            lhs: values[lhs_index],
            lhs_index,
            values,
            labels,
            slacks,
            trivial,
            saturated,
            equilibrium_class: class,
            scalars: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Adds a scalar.
    pub fn with_scalar(mut self, key: &str, value: f64) -> Self {
        self.scalars.insert(key.to_string(), value);
        self
    }

    /// Adds a note.
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// The chain without the left-hand side.
    pub fn bounds(&self) -> Vec<f64> {
        self.values.iter().enumerate().filter(|(k, _)| *k != self.lhs_index).map(|(_, v)| *v).collect()
    }

    /// Every link satisfies `slack ≥ −tol · max(1, |a|, |b|)`.
    pub fn satisfied(&self, tol: f64) -> bool {
        self.link_violations(tol).is_empty()
    }

    /// Indices of links violating the chain beyond `tol` (relative to the link scale).
    pub fn link_violations(&self, tol: f64) -> Vec<usize> {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, w)| !(w[0] - w[1] >= -tol * 1f64.max(w[0].abs()).max(w[1].abs())))
            .map(|(k, _)| k)
            .collect()
    }

    /// Smallest slack.
    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Whether every non-trivial link is saturated.
    pub fn nontrivial_saturated(&self) -> bool {
        self.saturated.iter().zip(&self.trivial).all(|(s, t)| *t || *s)
    }

    /// Whether every numeric field is finite.
    pub fn is_finite(&self) -> bool {
        self.values.iter().chain(&self.slacks).chain(self.scalars.values()).all(|v| v.is_finite())
    }
}
