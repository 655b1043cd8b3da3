//! Sparse LU factorisation of the simplex basis with product-form updates.
//!
//! The factorisation is left-looking (Gilbert–Peierls): each basis column is
//! pushed through the already computed part of `L` with a sparse triangular
//! solve whose nonzero pattern comes from a depth-first search, then a pivot
//! is chosen among the not-yet-pivoted rows by threshold partial pivoting
//! with a preference for sparse rows.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::abs;

const NONE: usize = usize::MAX;
/// Pivot candidates must reach this fraction of the column's largest entry.
const THRESHOLD: f64 = 0.1;
const SINGULAR_TOL: f64 = 1e-11;
const DROP_TOL: f64 = 1e-14;

/// Column of the matrix being factored, as parallel index/value slices.
pub(crate) type ColumnRef<'a> = (&'a [usize], &'a [f64]);

#[derive(Debug, Clone)]
pub(crate) struct LuFactors {
    m: usize,
    row_of_step: Vec<usize>,
    pos_of_step: Vec<usize>,
    l_start: Vec<usize>,
    l_row: Vec<usize>,
    l_val: Vec<f64>,
    u_start: Vec<usize>,
    u_step: Vec<usize>,
    u_val: Vec<f64>,
    u_diag: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Eta {
    pos: usize,
    pivot: f64,
    idx: Vec<usize>,
    val: Vec<f64>,
}

/// `B = B₀·E₁·…·E_k`: a fresh LU of `B₀` followed by eta matrices.
#[derive(Debug, Clone)]
pub(crate) struct BasisFactor {
    lu: LuFactors,
    etas: Vec<Eta>,
}

impl LuFactors {
    /// Factors the `m × m` matrix whose column at basis position `p` is
    /// `column(p)`.
    ///
    /// Structurally or numerically singular columns are replaced by unit
    /// columns of the rows left without a pivot; the replacements are
    /// returned as `(position, row)` pairs.
    pub(crate) fn factor<'a, F>(m: usize, column: F) -> (Self, Vec<(usize, usize)>)
    where
        F: Fn(usize) -> ColumnRef<'a>,
    {
        let mut row_count = vec![0usize; m];
        let mut order: Vec<(usize, usize)> = Vec::with_capacity(m);
        for p in 0..m {
            let (idx, _) = column(p);
            for &r in idx {
                row_count[r] += 1;
            }
            order.push((idx.len(), p));
        }
        order.sort();

        let mut f = LuFactors {
            m,
            row_of_step: Vec::with_capacity(m),
            pos_of_step: Vec::with_capacity(m),
            l_start: vec![0],
            l_row: Vec::new(),
            l_val: Vec::new(),
            u_start: vec![0],
            u_step: Vec::new(),
            u_val: Vec::new(),
            u_diag: Vec::with_capacity(m),
        };
        let mut step_of_row = vec![NONE; m];
        let mut x = vec![0.0; m];
        let mut mark = vec![0u32; m];
        let mut generation = 0u32;
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut post: Vec<usize> = Vec::new();
        let mut deficient = Vec::new();

        for &(_, p) in &order {
            let (idx, val) = column(p);
            generation += 1;
            post.clear();
            for (&r, &v) in idx.iter().zip(val) {
                x[r] += v;
                if mark[r] == generation {
                    continue;
                }
                mark[r] = generation;
                stack.push((r, 0));
                while let Some(top) = stack.last_mut() {
                    let (node, child) = *top;
                    let s = step_of_row[node];
                    if s != NONE {
                        let (lo, hi) = (f.l_start[s], f.l_start[s + 1]);
                        if lo + child < hi {
                            top.1 += 1;
                            let next = f.l_row[lo + child];
                            if mark[next] != generation {
                                mark[next] = generation;
                                stack.push((next, 0));
                            }
                            continue;
                        }
                    }
                    stack.pop();
                    post.push(node);
                }
            }
            // Reverse post-order is a topological order of the reach.
            for &r in post.iter().rev() {
                let s = step_of_row[r];
                if s == NONE {
                    continue;
                }
                let v = x[r];
                if v != 0.0 {
                    for e in f.l_start[s]..f.l_start[s + 1] {
                        x[f.l_row[e]] -= f.l_val[e] * v;
                    }
                }
            }
            let mut amax = 0.0f64;
            for &r in &post {
                if step_of_row[r] == NONE {
                    amax = amax.max(abs(x[r]));
                }
            }
            if amax <= SINGULAR_TOL {
                deficient.push(p);
                for &r in &post {
                    x[r] = 0.0;
                }
                continue;
            }
            let mut pivot_row = NONE;
            for &r in &post {
                if step_of_row[r] != NONE || abs(x[r]) < THRESHOLD * amax {
                    continue;
                }
                let better = pivot_row == NONE
                    || row_count[r] < row_count[pivot_row]
                    || (row_count[r] == row_count[pivot_row]
                        && (abs(x[r]) > abs(x[pivot_row]) || (abs(x[r]) == abs(x[pivot_row]) && r < pivot_row)));
                if better {
                    pivot_row = r;
                }
            }
            let k = f.row_of_step.len();
            let pivot = x[pivot_row];
            for &r in post.iter().rev() {
                let v = x[r];
                x[r] = 0.0;
                if abs(v) <= DROP_TOL || r == pivot_row {
                    continue;
                }
                let s = step_of_row[r];
                if s != NONE {
                    f.u_step.push(s);
                    f.u_val.push(v);
                } else {
                    f.l_row.push(r);
                    f.l_val.push(v / pivot);
                }
            }
            f.u_start.push(f.u_step.len());
            f.l_start.push(f.l_row.len());
            f.u_diag.push(pivot);
            f.row_of_step.push(pivot_row);
            f.pos_of_step.push(p);
            step_of_row[pivot_row] = k;
        }

        let mut replaced = Vec::with_capacity(deficient.len());
        if !deficient.is_empty() {
            let free_rows = (0..m).filter(|&r| step_of_row[r] == NONE);
            for (p, r) in deficient.into_iter().zip(free_rows.collect::<Vec<_>>()) {
                let k = f.row_of_step.len();
                f.u_start.push(f.u_step.len());
                f.l_start.push(f.l_row.len());
                f.u_diag.push(1.0);
                f.row_of_step.push(r);
                f.pos_of_step.push(p);
                step_of_row[r] = k;
                replaced.push((p, r));
            }
        }
        debug_assert_eq!(f.row_of_step.len(), m);
        (f, replaced)
    }

    /// Solves `B₀ z = rhs`; `rhs` is indexed by row and is overwritten,
    /// the solution lands in `out` indexed by basis position.
    fn ftran(&self, rhs: &mut [f64], out: &mut [f64]) {
        for k in 0..self.m {
            let v = rhs[self.row_of_step[k]];
            if v != 0.0 {
                for e in self.l_start[k]..self.l_start[k + 1] {
                    rhs[self.l_row[e]] -= self.l_val[e] * v;
                }
            }
        }
        let mut w: Vec<f64> = (0..self.m).map(|k| rhs[self.row_of_step[k]]).collect();
        for k in (0..self.m).rev() {
            let v = w[k] / self.u_diag[k];
            w[k] = v;
            if v != 0.0 {
                for e in self.u_start[k]..self.u_start[k + 1] {
                    w[self.u_step[e]] -= self.u_val[e] * v;
                }
            }
        }
        for k in 0..self.m {
            out[self.pos_of_step[k]] = w[k];
        }
    }

    /// Solves `B₀ᵀ y = c`; `c` is indexed by basis position, `y` by row.
    fn btran(&self, c: &[f64], y: &mut [f64]) {
        let mut w: Vec<f64> = (0..self.m).map(|k| c[self.pos_of_step[k]]).collect();
        for k in 0..self.m {
            let mut v = w[k];
            for e in self.u_start[k]..self.u_start[k + 1] {
                v -= self.u_val[e] * w[self.u_step[e]];
            }
            w[k] = v / self.u_diag[k];
        }
        for k in 0..self.m {
            y[self.row_of_step[k]] = w[k];
        }
        for k in (0..self.m).rev() {
            let r = self.row_of_step[k];
            let mut v = y[r];
            for e in self.l_start[k]..self.l_start[k + 1] {
                v -= self.l_val[e] * y[self.l_row[e]];
            }
            y[r] = v;
        }
    }
}

impl BasisFactor {
    pub(crate) fn new(lu: LuFactors) -> Self {
        Self { lu, etas: Vec::new() }
    }

    pub(crate) fn updates(&self) -> usize {
        self.etas.len()
    }

    /// `out = B⁻¹ rhs`; `rhs` (by row) is clobbered.
    pub(crate) fn ftran(&self, rhs: &mut [f64], out: &mut [f64]) {
        self.lu.ftran(rhs, out);
        for eta in &self.etas {
            let zr = out[eta.pos] / eta.pivot;
            out[eta.pos] = zr;
            if zr != 0.0 {
                for (&i, &a) in eta.idx.iter().zip(&eta.val) {
                    out[i] -= a * zr;
                }
            }
        }
    }

    /// `y = B⁻ᵀ c`; `c` (by position) is clobbered.
    pub(crate) fn btran(&self, c: &mut [f64], y: &mut [f64]) {
        for eta in self.etas.iter().rev() {
            let mut v = c[eta.pos];
            for (&i, &a) in eta.idx.iter().zip(&eta.val) {
                v -= a * c[i];
            }
            c[eta.pos] = v / eta.pivot;
        }
        self.lu.btran(c, y);
    }

    /// Records the replacement of the column at `pos` by a column whose
    /// representation in the current basis is `alpha`.
    pub(crate) fn update(&mut self, pos: usize, alpha: &[f64]) {
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for (i, &a) in alpha.iter().enumerate() {
            if i != pos && abs(a) > DROP_TOL {
                idx.push(i);
                val.push(a);
            }
        }
        self.etas.push(Eta { pos, pivot: alpha[pos], idx, val });
    }
}
