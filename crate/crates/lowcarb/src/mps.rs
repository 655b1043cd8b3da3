//! Free-format MPS export of a model, for cross-checking with other solvers.

use std::fmt::Write;

use lowcarb_core::{MilpModel, Sense, VarKind};

const OBJECTIVE: &str = "COST";

/// MPS names may not contain spaces.
fn name(s: &str) -> String {
    s.replace(char::is_whitespace, "_")
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn to_mps(model: &MilpModel, title: &str) -> String {
    let mut out = String::new();
    let row_names: Vec<String> = model.constraints.iter().enumerate().map(|(i, c)| format!("R{i}_{}", name(&c.name))).collect();
    let col_names: Vec<String> = model.variables.iter().enumerate().map(|(j, v)| format!("C{j}_{}", name(&v.name))).collect();
    let _ = writeln!(out, "NAME {}", name(title));
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N {OBJECTIVE}");
    for (c, n) in model.constraints.iter().zip(&row_names) {
        let s = match c.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        let _ = writeln!(out, " {s} {n}");
    }

    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.num_vars()];
    for (i, c) in model.constraints.iter().enumerate() {
        for &(j, a) in &c.terms {
            columns[j].push((i, a));
        }
    }
    let mut cost = vec![0.0; model.num_vars()];
    for &(j, c) in &model.objective {
        cost[j] += c;
    }
    out.push_str("COLUMNS\n");
    let mut in_int = false;
    for (j, v) in model.variables.iter().enumerate() {
        let binary = v.kind == VarKind::Binary;
        if binary != in_int {
            let tag = if binary { "INTORG" } else { "INTEND" };
            let _ = writeln!(out, " MARKER 'MARKER' '{tag}'");
            in_int = binary;
        }
        if cost[j] != 0.0 {
            let _ = writeln!(out, " {} {OBJECTIVE} {}", col_names[j], num(cost[j]));
        }
        for &(i, a) in &columns[j] {
            let _ = writeln!(out, " {} {} {}", col_names[j], row_names[i], num(a));
        }
        if cost[j] == 0.0 && columns[j].is_empty() {
            // Keep the column declared.
            let _ = writeln!(out, " {} {OBJECTIVE} 0", col_names[j]);
        }
    }
    if in_int {
        out.push_str(" MARKER 'MARKER' 'INTEND'\n");
    }

    out.push_str("RHS\n");
    if model.objective_constant != 0.0 {
        // By convention the objective RHS is the negated constant.
        let _ = writeln!(out, " RHS {OBJECTIVE} {}", num(-model.objective_constant));
    }
    for (c, n) in model.constraints.iter().zip(&row_names) {
        if c.rhs != 0.0 {
            let _ = writeln!(out, " RHS {n} {}", num(c.rhs));
        }
    }

    out.push_str("BOUNDS\n");
    for (v, n) in model.variables.iter().zip(&col_names) {
        let (lo, up) = (v.lower, v.upper);
        if v.kind == VarKind::Binary && lo == 0.0 && up == 1.0 {
            let _ = writeln!(out, " BV BND {n}");
            continue;
        }
        if lo == up {
            let _ = writeln!(out, " FX BND {n} {}", num(lo));
            continue;
        }
        match (lo.is_finite(), up.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " FR BND {n}");
            }
            (false, true) => {
                let _ = writeln!(out, " MI BND {n}");
                let _ = writeln!(out, " UP BND {n} {}", num(up));
            }
            (true, fin_up) => {
                if lo != 0.0 {
                    let _ = writeln!(out, " LO BND {n} {}", num(lo));
                }
                if fin_up {
                    let _ = writeln!(out, " UP BND {n} {}", num(up));
                }
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}
