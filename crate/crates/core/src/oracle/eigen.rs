//! Lowest-eigenpair machinery for symmetric banded matrices.
//!
//! The pipeline is deterministic and certified: Householder reduction to
//! tridiagonal form, a Sturm-sequence bisection that brackets the smallest
//! eigenvalue to machine width, then inverse iteration on the original
//! banded matrix (shifted LU with partial pivoting) polished by Rayleigh
//! quotients. Tridiagonal inputs skip the reduction, so the
//! finite-difference path scales to very large grids.
#![allow(clippy::needless_range_loop)]

use crate::{Error, Result};

/// Symmetric banded matrix stored by diagonals: `bands[d][i] = A[i][i+d]`
/// for `d = 0..=bandwidth`.
#[derive(Debug, Clone)]
pub struct SymBanded {
    n: usize,
    bands: Vec<Vec<f64>>,
}

impl SymBanded {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bands = (0..=bandwidth).map(|d| vec![0.0; n - d.min(n)]).collect();
        Self { n, bands }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d >= self.bands.len() {
            0.0
        } else {
            self.bands[d][lo]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        assert!(d < self.bands.len(), "entry ({i},{j}) outside bandwidth");
        self.bands[d][lo] = value;
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![0.0; self.n];
        for (d, band) in self.bands.iter().enumerate() {
            if d == 0 {
                for i in 0..self.n {
                    out[i] += band[i] * v[i];
                }
            } else {
                for i in 0..self.n - d {
                    out[i] += band[i] * v[i + d];
                    out[i + d] += band[i] * v[i];
                }
            }
        }
        out
    }

    /// `v · A v` for a (not necessarily normalized) vector.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        dot(&self.matvec(v), v)
    }

    /// Maximum absolute row sum; a cheap bound on the spectral radius.
    pub fn inf_norm(&self) -> f64 {
        let mut row_sums = vec![0.0; self.n];
        for (d, band) in self.bands.iter().enumerate() {
            for (i, &b) in band.iter().enumerate() {
                row_sums[i] += b.abs();
                if d > 0 {
                    row_sums[i + d] += b.abs();
                }
            }
        }
        row_sums.into_iter().fold(0.0, f64::max)
    }

    fn to_dense_lower(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.bandwidth())..=i {
                a[i][j] = self.get(i, j);
            }
        }
        a
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Householder reduction of a dense symmetric matrix (lower triangle) to
/// tridiagonal form; returns `(diag, offdiag)` with `offdiag[i]` coupling
/// rows `i` and `i+1`. The transformation is not accumulated.
fn householder_tridiagonalize(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = a[i][..=l].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    let mut g_j = 0.0;
                    for k in 0..=j {
                        g_j += a[j][k] * a[i][k];
                    }
                    for k in (j + 1)..=l {
                        g_j += a[k][j] * a[i][k];
                    }
                    e[j] = g_j / h;
                    f_acc += e[j] * a[i][j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f_j = a[i][j];
                    let g_j = e[j] - hh * f_j;
                    e[j] = g_j;
                    for k in 0..=j {
                        a[j][k] -= f_j * e[k] + g_j * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
    }
    let d: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    let off: Vec<f64> = (1..n).map(|i| e[i]).collect();
    (d, off)
}

/// Number of eigenvalues of the tridiagonal `(d, off)` strictly below `x`,
/// by the Sturm sequence of leading-principal-minor pivots.
fn sturm_count_below(d: &[f64], off: &[f64], x: f64) -> usize {
    const PIVMIN: f64 = 1e-290;
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = d[i] - x - off2 / q;
        if q < 0.0 {
            count += 1;
        }
        if q.abs() < PIVMIN {
            q = -PIVMIN;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection on
/// the Gershgorin interval; converges to machine width.
fn smallest_tridiag_eigenvalue(d: &[f64], off: &[f64]) -> f64 {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count_below(d, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// LU factorization with partial pivoting of `A - shift·I` for a symmetric
/// banded `A`. Rows carry an absolute-column window wide enough for all
/// pivoting fill-in.
struct BandedLu {
    n: usize,
    width: usize,
    /// (base column, row values) — entry `(r, c)` lives at `vals[c - base]`
    rows: Vec<(i64, Vec<f64>)>,
    /// pivot row chosen at each elimination column
    pivots: Vec<usize>,
    /// elimination multipliers per column, one per subdiagonal row
    multipliers: Vec<Vec<f64>>,
}

impl BandedLu {
    fn factor(a: &SymBanded, shift: f64) -> Self {
        let n = a.n();
        let bw = a.bandwidth();
        let width = 4 * bw + 1;
        // invariant: the row at position r is anchored at base = r - bw, so
        // its window covers [r - bw, r + 3bw]; active rows provably keep
        // their fill-in within [position, position + 2bw]
        let mut rows: Vec<(i64, Vec<f64>)> = (0..n)
            .map(|i| {
                let base = i as i64 - bw as i64;
                let mut vals = vec![0.0; width];
                for j in i.saturating_sub(bw)..=(i + bw).min(n - 1) {
                    vals[(j as i64 - base) as usize] =
                        a.get(i, j) - if i == j { shift } else { 0.0 };
                }
                (base, vals)
            })
            .collect();

        let get = |rows: &Vec<(i64, Vec<f64>)>, r: usize, c: usize| -> f64 {
            let (base, vals) = &rows[r];
            let o = c as i64 - base;
            if o >= 0 && (o as usize) < vals.len() {
                vals[o as usize]
            } else {
                0.0
            }
        };

        // swap rows and re-anchor both windows to their new positions
        let rebase = |rows: &mut Vec<(i64, Vec<f64>)>, r_new: usize, row: (i64, Vec<f64>)| {
            let base_new = r_new as i64 - bw as i64;
            let mut vals_new = vec![0.0; width];
            for (o, &v) in row.1.iter().enumerate() {
                if v != 0.0 {
                    let c = row.0 + o as i64;
                    let o_new = c - base_new;
                    assert!(
                        o_new >= 0 && (o_new as usize) < width,
                        "band LU rebase overflow"
                    );
                    vals_new[o_new as usize] = v;
                }
            }
            rows[r_new] = (base_new, vals_new);
        };

        let mut pivots = Vec::with_capacity(n.saturating_sub(1));
        let mut multipliers = Vec::with_capacity(n.saturating_sub(1));
        for col in 0..n.saturating_sub(1) {
            let last = (col + bw).min(n - 1);
            let mut pivot = col;
            let mut best = get(&rows, col, col).abs();
            for r in (col + 1)..=last {
                let v = get(&rows, r, col).abs();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if pivot != col {
                let row_a = rows[col].clone();
                let row_b = rows[pivot].clone();
                rebase(&mut rows, col, row_b);
                rebase(&mut rows, pivot, row_a);
            }
            pivots.push(pivot);

            let mut pivot_val = get(&rows, col, col);
            if pivot_val == 0.0 {
                // shift sits exactly on an eigenvalue of a leading minor;
                // a representable perturbation keeps the solve usable for
                // inverse iteration
                pivot_val = 1e-280;
                let (base, vals) = &mut rows[col];
                vals[(col as i64 - *base) as usize] = pivot_val;
            }

            let mut col_multipliers = Vec::with_capacity(last - col);
            for r in (col + 1)..=last {
                let m = get(&rows, r, col) / pivot_val;
                col_multipliers.push(m);
                if m != 0.0 {
                    let pivot_row = rows[col].clone();
                    let (base_r, vals_r) = &mut rows[r];
                    let hi_col = ((col + 2 * bw) as i64).min(n as i64 - 1);
                    for c in (col + 1) as i64..=hi_col {
                        let pv = {
                            let o = c - pivot_row.0;
                            if o >= 0 && (o as usize) < pivot_row.1.len() {
                                pivot_row.1[o as usize]
                            } else {
                                0.0
                            }
                        };
                        if pv != 0.0 {
                            let o = c - *base_r;
                            assert!(
                                o >= 0 && (o as usize) < vals_r.len(),
                                "band LU window overflow"
                            );
                            vals_r[o as usize] -= m * pv;
                        }
                    }
                    // the eliminated entry is recorded in the multiplier;
                    // zero it so no rounding residue survives in the row
                    let o = (col as i64 - *base_r) as usize;
                    vals_r[o] = 0.0;
                }
            }
            multipliers.push(col_multipliers);
        }

        Self {
            n,
            width,
            rows,
            pivots,
            multipliers,
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        for col in 0..self.n.saturating_sub(1) {
            let p = self.pivots[col];
            if p != col {
                y.swap(col, p);
            }
            for (k, &m) in self.multipliers[col].iter().enumerate() {
                y[col + 1 + k] -= m * y[col];
            }
        }
        let mut x = vec![0.0; self.n];
        for r in (0..self.n).rev() {
            let (base, vals) = &self.rows[r];
            let mut sum = y[r];
            let c_lo = (r + 1) as i64;
            let c_hi = (base + self.width as i64 - 1).min(self.n as i64 - 1);
            for c in c_lo..=c_hi {
                let o = (c - base) as usize;
                sum -= vals[o] * x[c as usize];
            }
            let mut diag = vals[(r as i64 - base) as usize];
            if diag == 0.0 {
                diag = 1e-280;
            }
            x[r] = sum / diag;
        }
        x
    }
}

/// Lowest eigenpair `(λ_min, v)` of a symmetric banded matrix, with `v`
/// normalized to unit Euclidean length.
pub fn lowest_eigenpair(a: &SymBanded) -> Result<(f64, Vec<f64>)> {
    let n = a.n();
    if n == 0 {
        return Err(Error::Domain("empty matrix".into()));
    }
    if n == 1 {
        return Ok((a.get(0, 0), vec![1.0]));
    }

    let (d, off) = if a.bandwidth() <= 1 {
        let d: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| a.get(i, i + 1)).collect();
        (d, off)
    } else {
        householder_tridiagonalize(a.to_dense_lower())
    };
    let estimate = smallest_tridiag_eigenvalue(&d, &off);

    let scale = a.inf_norm().max(1e-30);
    let mut shift = estimate - 1e-10 * scale;
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.3 * (2.399 * i as f64).sin()).collect();
    let inv_norm = 1.0 / norm2(&v);
    v.iter_mut().for_each(|x| *x *= inv_norm);

    let mut rayleigh = estimate;
    let mut best_residual = f64::INFINITY;
    for iter in 0..12 {
        let lu = BandedLu::factor(a, shift);
        let mut w = lu.solve(&v);
        let w_norm = norm2(&w);
        if !w_norm.is_finite() || w_norm == 0.0 {
            return Err(Error::Internal(format!(
                "inverse iteration produced a degenerate vector (iter {iter})"
            )));
        }
        w.iter_mut().for_each(|x| *x /= w_norm);
        let hw = a.matvec(&w);
        rayleigh = dot(&hw, &w);
        let residual = {
            let mut s = 0.0;
            for i in 0..n {
                let r = hw[i] - rayleigh * w[i];
                s += r * r;
            }
            s.sqrt()
        };
        v = w;
        best_residual = best_residual.min(residual);
        if residual <= 1e-13 * scale.max(rayleigh.abs()) {
            break;
        }
        // Rayleigh-quotient update, kept near the certified estimate so the
        // iteration cannot wander to an excited state
        shift = rayleigh.min(estimate + 1e-6 * scale) - 1e-12 * scale;
    }

    if best_residual > 1e-9 * scale.max(rayleigh.abs()) {
        return Err(Error::Internal(format!(
            "inverse iteration stalled: residual {best_residual:.3e} at scale {scale:.3e}"
        )));
    }
    if (rayleigh - estimate).abs() > 1e-6 * scale.max(1.0) {
        return Err(Error::Internal(format!(
            "inverse iteration left the certified bracket: {rayleigh} vs {estimate}"
        )));
    }
    Ok((rayleigh, v))
}
