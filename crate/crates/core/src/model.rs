//! Solver-agnostic sparse MILP: bounded variables, linear rows and a linear
//! minimisation objective.

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("constraint {row} references variable {var}, but only {count} exist")]
    UnknownVariable { row: usize, var: usize, count: usize },
    #[error("objective references variable {var}, but only {count} exist")]
    UnknownObjectiveVariable { var: usize, count: usize },
    #[error("variable {var} has lower bound {lower} above upper bound {upper}")]
    InvertedBounds { var: usize, lower: f64, upper: f64 },
    #[error("binary variable {var} has bounds [{lower}, {upper}] outside [0, 1]")]
    BinaryBounds { var: usize, lower: f64, upper: f64 },
    #[error("non-finite coefficient in {0}")]
    NonFinite(String),
}

/// Minimise `objective · x + objective_constant` subject to the rows and the
/// variable bounds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MilpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(usize, f64)>,
    pub objective_constant: f64,
}

impl MilpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, kind: VarKind, lower: f64, upper: f64) -> usize {
        self.variables.push(Variable { name: name.into(), kind, lower, upper });
        self.variables.len() - 1
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> usize {
        self.add_var(name, VarKind::Continuous, lower, upper)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    /// Adds a row; zero coefficients are dropped and repeated variables merged.
    pub fn add_constraint(&mut self, name: impl Into<String>, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> usize {
        let mut terms: Vec<(usize, f64)> = terms;
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for (v, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        self.constraints.push(Constraint { name: name.into(), terms: merged, sense, rhs });
        self.constraints.len() - 1
    }

    pub fn add_objective(&mut self, var: usize, coeff: f64) {
        if coeff != 0.0 {
            self.objective.push((var, coeff));
        }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn binaries(&self) -> Vec<usize> {
        self.variables
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind == VarKind::Binary)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn num_binaries(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary).count()
    }

    /// Dense objective coefficient vector (duplicates summed).
    pub fn cost_vector(&self) -> Vec<f64> {
        let mut c = alloc::vec![0.0; self.num_vars()];
        for &(v, a) in &self.objective {
            c[v] += a;
        }
        c
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, a)| a * x[v]).sum::<f64>() + self.objective_constant
    }

    pub fn row_activity(&self, row: usize, x: &[f64]) -> f64 {
        self.constraints[row].terms.iter().map(|&(v, a)| a * x[v]).sum()
    }

    /// Largest bound or row violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, var) in self.variables.iter().enumerate() {
            worst = worst.max(var.lower - x[v]).max(x[v] - var.upper);
        }
        for (r, row) in self.constraints.iter().enumerate() {
            let act = self.row_activity(r, x);
            let viol = match row.sense {
                Sense::Le => act - row.rhs,
                Sense::Ge => row.rhs - act,
                Sense::Eq => crate::math::abs(act - row.rhs),
            };
            worst = worst.max(viol);
        }
        worst
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let count = self.num_vars();
        for (i, v) in self.variables.iter().enumerate() {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(ModelError::InvertedBounds { var: i, lower: v.lower, upper: v.upper });
            }
            if v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0) {
                return Err(ModelError::BinaryBounds { var: i, lower: v.lower, upper: v.upper });
            }
        }
        for (r, row) in self.constraints.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(ModelError::NonFinite(row.name.clone()));
            }
            for &(var, a) in &row.terms {
                if var >= count {
                    return Err(ModelError::UnknownVariable { row: r, var, count });
                }
                if !a.is_finite() {
                    return Err(ModelError::NonFinite(row.name.clone()));
                }
            }
        }
        for &(var, a) in &self.objective {
            if var >= count {
                return Err(ModelError::UnknownObjectiveVariable { var, count });
            }
            if !a.is_finite() {
                return Err(ModelError::NonFinite(String::from("objective")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rows_merge_duplicates_and_drop_zeros() {
        let mut m = MilpModel::new();
        let x = m.add_continuous("x", 0.0, 1.0);
        let y = m.add_continuous("y", 0.0, 1.0);
        m.add_constraint("r", vec![(y, 1.0), (x, 2.0), (y, -1.0), (x, 1.0)], Sense::Le, 3.0);
        assert_eq!(m.constraints[0].terms, vec![(x, 3.0)]);
        assert!(m.validate().is_ok());
    }

    #[test]
    fn validation_errors() {
        let mut m = MilpModel::new();
        m.add_var("b", VarKind::Binary, 0.0, 2.0);
        assert!(matches!(m.validate(), Err(ModelError::BinaryBounds { .. })));
        let mut m = MilpModel::new();
        m.add_continuous("x", 1.0, 0.0);
        assert!(matches!(m.validate(), Err(ModelError::InvertedBounds { .. })));
        let mut m = MilpModel::new();
        m.add_continuous("x", 0.0, 1.0);
        m.add_constraint("r", vec![(3, 1.0)], Sense::Le, 1.0);
        assert!(matches!(m.validate(), Err(ModelError::UnknownVariable { .. })));
    }
}
