//! Random LP generators and a vertex/ray enumeration oracle for tiny LPs.
#![allow(dead_code)]

use lowcarb_core::{MilpModel, Sense};
use proptest::prelude::*;

/// A bounded LP with a known feasible point, so it is always optimal.
pub fn feasible_lp() -> impl Strategy<Value = MilpModel> {
    (1usize..=50, 1usize..=30).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(0.0f64..10.0, n),
            prop::collection::vec(-5.0f64..5.0, n),
            prop::collection::vec(prop::collection::vec((0usize..n, -4.0f64..4.0), 1..=6), m),
            prop::collection::vec((0u8..3, 0.0f64..3.0), m),
        )
            .prop_map(move |(x0, cost, rows, shape)| {
                let mut model = MilpModel::new();
                for j in 0..x0.len() {
                    let v = model.add_continuous(format!("x{j}"), 0.0, 20.0);
                    model.add_objective(v, cost[j]);
                }
                for (r, (terms, (sense, slack))) in rows.into_iter().zip(shape).enumerate() {
                    let act: f64 = terms.iter().map(|&(j, a)| a * x0[j]).sum();
                    let (sense, rhs) = match sense {
                        0 => (Sense::Le, act + slack),
                        1 => (Sense::Ge, act - slack),
                        _ => (Sense::Eq, act),
                    };
                    model.add_constraint(format!("r{r}"), terms, sense, rhs);
                }
                model
            })
    })
}

/// `a·x (sense) b` over x ≥ 0 with optional upper bounds.
#[derive(Debug, Clone)]
pub struct Small {
    pub cost: Vec<f64>,
    pub upper: Vec<Option<f64>>,
    pub rows: Vec<(Vec<f64>, Sense, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Infeasible,
    Unbounded,
    Optimal(f64),
}

pub fn small_lp() -> impl Strategy<Value = Small> {
    (1usize..=3, 0usize..=3).prop_flat_map(|(n, m)| {
        let sense = prop_oneof![Just(Sense::Le), Just(Sense::Ge), Just(Sense::Eq)];
        (
            prop::collection::vec(-3i32..=3, n),
            prop::collection::vec(prop::option::of(1i32..=5), n),
            prop::collection::vec((prop::collection::vec(-3i32..=3, n), sense, -5i32..=5), m),
        )
            .prop_map(|(c, u, rows)| Small {
                cost: c.into_iter().map(f64::from).collect(),
                upper: u.into_iter().map(|b| b.map(f64::from)).collect(),
                rows: rows.into_iter().map(|(a, s, b)| (a.into_iter().map(f64::from).collect(), s, f64::from(b))).collect(),
            })
    })
}

pub fn to_model(p: &Small) -> MilpModel {
    let mut m = MilpModel::new();
    for (j, (&c, &u)) in p.cost.iter().zip(&p.upper).enumerate() {
        let v = m.add_continuous(format!("x{j}"), 0.0, u.unwrap_or(f64::INFINITY));
        m.add_objective(v, c);
    }
    for (r, (a, s, b)) in p.rows.iter().enumerate() {
        let terms = a.iter().enumerate().filter(|t| *t.1 != 0.0).map(|(j, &v)| (j, v)).collect();
        m.add_constraint(format!("r{r}"), terms, *s, *b);
    }
    m
}

/// Solves a square system by Gaussian elimination with partial pivoting.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..n {
                    a[r][k] -= f * a[col][k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Rows `a·x (sense) b` describing a polyhedron, bounds included.
pub fn halfspaces(p: &Small, homogeneous: bool) -> Vec<(Vec<f64>, Sense, f64)> {
    let n = p.cost.len();
    let unit = |j: usize| (0..n).map(|k| if k == j { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    let mut h: Vec<(Vec<f64>, Sense, f64)> = Vec::new();
    for (a, s, b) in &p.rows {
        h.push((a.clone(), *s, if homogeneous { 0.0 } else { *b }));
    }
    for j in 0..n {
        h.push((unit(j), Sense::Ge, 0.0));
        if let Some(u) = p.upper[j] {
            h.push((unit(j), Sense::Le, if homogeneous { 0.0 } else { u }));
        }
    }
    h
}

pub fn satisfies(h: &[(Vec<f64>, Sense, f64)], x: &[f64]) -> bool {
    h.iter().all(|(a, s, b)| {
        let act: f64 = a.iter().zip(x).map(|(a, x)| a * x).sum();
        match s {
            Sense::Le => act <= b + 1e-9,
            Sense::Ge => act >= b - 1e-9,
            Sense::Eq => (act - b).abs() <= 1e-9,
        }
    })
}

/// Vertices of the slice `{x : h}` obtained by making `n` rows active.
pub fn vertices(h: &[(Vec<f64>, Sense, f64)], n: usize) -> Vec<Vec<f64>> {
    combinations(h.len(), n)
        .into_iter()
        .filter_map(|rows| {
            let a = rows.iter().map(|&r| h[r].0.clone()).collect();
            let b = rows.iter().map(|&r| h[r].2).collect();
            solve_square(a, b)
        })
        .filter(|x| satisfies(h, x))
        .collect()
}

/// x ≥ 0 makes the feasible set pointed: it is empty iff it has no vertex
/// and unbounded below iff some extreme ray of the recession cone, normalised
/// by Σd = 1, has negative cost.
pub fn oracle(p: &Small) -> Verdict {
    let n = p.cost.len();
    let dot = |x: &[f64]| x.iter().zip(&p.cost).map(|(x, c)| x * c).sum::<f64>();
    let verts = vertices(&halfspaces(p, false), n);
    if verts.is_empty() {
        return Verdict::Infeasible;
    }
    let mut cone = halfspaces(p, true);
    cone.push((vec![1.0; n], Sense::Eq, 1.0));
    if vertices(&cone, n).iter().any(|d| dot(d) < -1e-9) {
        return Verdict::Unbounded;
    }
    Verdict::Optimal(verts.iter().map(|v| dot(v)).fold(f64::INFINITY, f64::min))
}
