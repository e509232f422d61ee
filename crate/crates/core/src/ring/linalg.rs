//! Linear algebra over a finite chain ring GR(p^m, d).
//!
//! Every ideal is p^v·R, so row reduction picks a minimum-valuation pivot and
//! scales it to exactly p^v. The Howell form adds, for each pivot p^v with
//! v > 0, the row p^{m-v}·(pivot row); this makes the echelon form canonical
//! and lets membership in the row span be decided greedily.

use super::galois::{GaloisRing, GrElem};
use super::matrix::Matrix;
use super::CommRing;

/// Howell normal form of a row span, with a transform from the input rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellForm {
    /// Nonzero rows in echelon order.
    pub rows: Vec<Vec<GrElem>>,
    /// Pivot column and valuation of each row; the pivot entry is exactly p^v.
    pub pivots: Vec<(usize, u32)>,
    /// `transform · input = rows`, one transform row per output row.
    pub transform: Option<Vec<Vec<GrElem>>>,
}

impl HowellForm {
    pub fn as_matrix(&self, cols: usize) -> Matrix<GrElem> {
        if self.rows.is_empty() {
            return Matrix::from_vec(0, cols, Vec::new());
        }
        Matrix::from_rows(self.rows.clone())
    }

    /// log_p of the number of elements in the row span.
    pub fn log_size(&self, ring: &GaloisRing) -> u64 {
        self.pivots
            .iter()
            .map(|&(_, v)| (ring.m() - v) as u64 * ring.d() as u64)
            .sum()
    }

    /// Reduce `v` against the form; returns the remainder and the coefficients used.
    pub fn reduce(&self, ring: &GaloisRing, v: &[GrElem]) -> (Vec<GrElem>, Vec<GrElem>) {
        let mut residual = v.to_vec();
        let mut coeffs = vec![ring.zero(); self.rows.len()];
        for (i, (row, &(col, val))) in self.rows.iter().zip(&self.pivots).enumerate() {
            let e = &residual[col];
            if e.is_zero() || ring.valuation(e) < val {
                continue;
            }
            let f = ring.div_p_pow(e, val);
            axpy(ring, &mut residual, &f, row, col);
            coeffs[i] = f;
        }
        (residual, coeffs)
    }

    pub fn contains(&self, ring: &GaloisRing, v: &[GrElem]) -> bool {
        self.reduce(ring, v).0.iter().all(GrElem::is_zero)
    }
}

/// y -= f·x, touching columns from `start` on.
fn axpy(ring: &GaloisRing, y: &mut [GrElem], f: &GrElem, x: &[GrElem], start: usize) {
    if f.is_zero() {
        return;
    }
    for j in start..y.len() {
        if x[j].is_zero() {
            continue;
        }
        let t = ring.mul(f, &x[j]);
        y[j] = ring.sub(&y[j], &t);
    }
}

fn scale_row(ring: &GaloisRing, row: &mut [GrElem], s: &GrElem) {
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = ring.mul(s, x);
        }
    }
}

/// Howell form of a list of rows, optionally tracking the transform.
pub fn howell_rows(
    ring: &GaloisRing,
    mut rows: Vec<Vec<GrElem>>,
    ncols: usize,
    track: bool,
) -> HowellForm {
    let m = ring.m();
    let mut trans: Vec<Vec<GrElem>> = if track {
        let n = rows.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
            .collect()
    } else {
        Vec::new()
    };
    let tcols = if track { rows.len() } else { 0 };
    assert!(rows.iter().all(|r| r.len() == ncols), "row length mismatch");
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let best = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| ring.valuation(&rows[i][col]));
        let Some(best) = best else { continue };
        rows.swap(r, best);
        if track {
            trans.swap(r, best);
        }
        let v = ring.valuation(&rows[r][col]);
        let unit = ring.div_p_pow(&rows[r][col], v);
        let s = ring.inv(&unit).expect("quotient by the valuation is a unit");
        scale_row(ring, &mut rows[r], &s);
        if track {
            scale_row(ring, &mut trans[r], &s);
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        let mut factors = Vec::new();
        for (off, row) in tail.iter_mut().enumerate() {
            if row[col].is_zero() {
                continue;
            }
            let f = ring.div_p_pow(&row[col], v);
            axpy(ring, row, &f, prow, col);
            factors.push((r + 1 + off, f));
        }
        if track {
            let (th, tt) = trans.split_at_mut(r + 1);
            for (i, f) in &factors {
                axpy(ring, &mut tt[i - r - 1], f, &th[r], 0);
            }
        }
        if v > 0 {
            let extra: Vec<GrElem> = rows[r].iter().map(|x| ring.mul_p_pow(x, m - v)).collect();
            if extra.iter().any(|x| !x.is_zero()) {
                rows.push(extra);
                if track {
                    let t: Vec<GrElem> = trans[r].iter().map(|x| ring.mul_p_pow(x, m - v)).collect();
                    trans.push(t);
                }
            }
        }
        pivots.push((col, v));
        r += 1;
    }
    rows.truncate(r);
    if track {
        trans.truncate(r);
    }
    // reduce entries above each pivot into [0, p^v)
    for k in 0..r {
        let (col, v) = pivots[k];
        let (head, tail) = rows.split_at_mut(k);
        let prow = &tail[0];
        let mut factors = Vec::new();
        for (i, row) in head.iter_mut().enumerate() {
            let e = &row[col];
            if e.is_zero() {
                continue;
            }
            let rem = ring.rem_p_pow(e, v);
            let diff = ring.sub(e, &rem);
            let f = ring.div_p_pow(&diff, v);
            axpy(ring, row, &f, prow, col);
            factors.push((i, f));
        }
        if track {
            let (th, tt) = trans.split_at_mut(k);
            for (i, f) in &factors {
                axpy(ring, &mut th[*i], f, &tt[0], 0);
            }
        }
    }
    debug_assert!(!track || trans.iter().all(|t| t.len() == tcols));
    HowellForm { rows, pivots, transform: if track { Some(trans) } else { None } }
}

/// Howell normal form of the row span of `m`, with transform U such that U·m = H.
pub fn howell_form(ring: &GaloisRing, m: &Matrix<GrElem>) -> HowellForm {
    howell_rows(ring, m.to_rows(), m.cols(), true)
}

/// A particular solution of A·x = b together with generators of the kernel of A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vec<GrElem>,
    pub kernel: Vec<Vec<GrElem>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unsolvable;

/// Solve A·x = b over GR(p^m, d). The kernel generators are the rows of a
/// Howell form, so over a field they are a basis.
pub fn solve_linear(
    ring: &GaloisRing,
    a: &Matrix<GrElem>,
    b: &[GrElem],
) -> Result<LinearSolution, Unsolvable> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let c = a.cols();
    // Row-reduce [A | b]; this preserves the solution set and bounds the row count.
    let augmented: Vec<Vec<GrElem>> = (0..a.rows())
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let reduced = howell_rows(ring, augmented, c + 1, false);
    // Rows of [A'^T | I]: x·A'^T ranges over combinations of the columns of A'.
    let r = reduced.rows.len();
    let cols: Vec<Vec<GrElem>> = (0..c)
        .map(|j| {
            let mut row: Vec<GrElem> = reduced.rows.iter().map(|rw| rw[j].clone()).collect();
            row.extend((0..c).map(|k| if k == j { ring.one() } else { ring.zero() }));
            row
        })
        .collect();
    let h = howell_rows(ring, cols, r + c, false);
    let mut target: Vec<GrElem> = reduced.rows.iter().map(|rw| rw[c].clone()).collect();
    target.extend((0..c).map(|_| ring.zero()));
    let mut x = vec![ring.zero(); c];
    for (row, &(col, val)) in h.rows.iter().zip(&h.pivots) {
        if col >= r {
            break;
        }
        let e = &target[col];
        if e.is_zero() {
            continue;
        }
        if ring.valuation(e) < val {
            return Err(Unsolvable);
        }
        let f = ring.div_p_pow(e, val);
        axpy(ring, &mut target, &f, row, col);
        for k in 0..c {
            let t = ring.mul(&f, &row[r + k]);
            x[k] = ring.add(&x[k], &t);
        }
    }
    if target[..r].iter().any(|e| !e.is_zero()) {
        return Err(Unsolvable);
    }
    let kernel = h
        .rows
        .iter()
        .zip(&h.pivots)
        .filter(|(_, &(col, _))| col >= r)
        .map(|(row, _)| row[r..].to_vec())
        .collect();
    Ok(LinearSolution { particular: x, kernel })
}

/// Generators of {x : A·x = 0}.
pub fn kernel(ring: &GaloisRing, a: &Matrix<GrElem>) -> Vec<Vec<GrElem>> {
    let zero = vec![ring.zero(); a.rows()];
    solve_linear(ring, a, &zero).expect("homogeneous systems are solvable").kernel
}

/// Valuations of the nonzero Smith invariants p^{v_1} | p^{v_2} | …, ascending.
pub fn smith_valuations(ring: &GaloisRing, a: &Matrix<GrElem>) -> Vec<u32> {
    let mut m = a.to_rows();
    let (nr, nc) = (a.rows(), a.cols());
    let mut out = Vec::new();
    for k in 0..nr.min(nc) {
        let best = (k..nr)
            .flat_map(|i| (k..nc).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| ring.valuation(&m[i][j]));
        let Some((bi, bj)) = best else { break };
        m.swap(k, bi);
        for row in m.iter_mut() {
            row.swap(k, bj);
        }
        let v = ring.valuation(&m[k][k]);
        let s = ring.inv(&ring.div_p_pow(&m[k][k], v)).expect("unit part");
        scale_row(ring, &mut m[k], &s);
        let (head, tail) = m.split_at_mut(k + 1);
        for row in tail.iter_mut() {
            if !row[k].is_zero() {
                let f = ring.div_p_pow(&row[k], v);
                axpy(ring, row, &f, &head[k], k);
            }
        }
        out.push(v);
        // column k is now zero off the pivot, so column operations clear the pivot row
        for j in k + 1..nc {
            m[k][j] = ring.zero();
        }
    }
    out.sort_unstable();
    out
}
