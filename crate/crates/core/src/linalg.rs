//! Small dense and tridiagonal linear algebra used by the solvers.

/// LU factorization of a tridiagonal matrix without pivoting (Thomas
/// algorithm), kept so the same operator can be solved against many
/// right-hand sides.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalLu {
    /// `sub[i]` couples row `i+1` to column `i`, `sup[i]` couples row `i`
    /// to column `i+1`. Returns `None` on a zero pivot.
    pub fn factor(sub: &[f64], diag: &[f64], sup: &[f64]) -> Option<Self> {
        let n = diag.len();
        assert!(sub.len() + 1 == n.max(1) && sup.len() + 1 == n.max(1));
        let mut d = diag.to_vec();
        let mut l = vec![0.0; sub.len()];
        for i in 1..n {
            if d[i - 1] == 0.0 || !d[i - 1].is_finite() {
                return None;
            }
            l[i - 1] = sub[i - 1] / d[i - 1];
            d[i] -= l[i - 1] * sup[i - 1];
        }
        if n > 0 && (d[n - 1] == 0.0 || !d[n - 1].is_finite()) {
            return None;
        }
        Some(Self {
            lower: l,
            diag: d,
            upper: sup.to_vec(),
        })
    }

    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.diag.len();
        for i in 1..n {
            rhs[i] -= self.lower[i - 1] * rhs[i - 1];
        }
        rhs[n - 1] /= self.diag[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.upper[i] * rhs[i + 1]) / self.diag[i];
        }
    }
}

/// Solves the dense system `a x = b` by Gaussian elimination with partial
/// pivoting and returns `(x, rcond)` where `rcond` is the reciprocal
/// 1-norm condition number. `a` is row-major `n × n`.
pub fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = b.len();
    let inv = invert(a)?;
    let x: Vec<f64> = (0..n).map(|i| (0..n).map(|j| inv[i][j] * b[j]).sum()).collect();
    let norm1 = |m: &[Vec<f64>]| {
        (0..n)
            .map(|j| (0..n).map(|i| m[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let rcond = 1.0 / (norm1(a) * norm1(&inv));
    Some((x, rcond))
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let factor = m[row][col];
                if factor != 0.0 {
                    for k in 0..2 * n {
                        m[row][k] -= factor * m[col][k];
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (length `n-1`), ascending, by Sturm-sequence bisection.
pub fn symmetric_tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    let n = d.len();
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..n {
            let e2 = if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 };
            q = d[i] - x - if i > 0 { e2 / q } else { 0.0 };
            if q == 0.0 {
                q = -f64::EPSILON * (x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if count_below(m) > k {
                    b = m;
                } else {
                    a = m;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}
