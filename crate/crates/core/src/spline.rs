//! Natural cubic spline interpolation with derivative evaluation.

use crate::linalg::TridiagonalLu;

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// second derivatives at the knots
    m: Vec<f64>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum SplineError {
    #[error("need at least two knots, got {0}")]
    TooFewKnots(usize),
    #[error("knots must be strictly increasing (violated at index {0})")]
    NotIncreasing(usize),
    #[error("knot and value arrays differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, SplineError> {
        let n = x.len();
        if n != y.len() {
            return Err(SplineError::LengthMismatch(n, y.len()));
        }
        if n < 2 {
            return Err(SplineError::TooFewKnots(n));
        }
        if let Some(i) = (1..n).find(|&i| !(x[i] > x[i - 1])) {
            return Err(SplineError::NotIncreasing(i));
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut sub = vec![0.0; k.saturating_sub(1)];
            let mut sup = vec![0.0; k.saturating_sub(1)];
            let mut rhs = vec![0.0; k];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                if i < n - 2 {
                    sup[i - 1] = h1;
                    sub[i - 1] = h1;
                }
                rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            let lu = TridiagonalLu::factor(&sub, &diag, &sup).expect("diagonally dominant");
            lu.solve_in_place(&mut rhs);
            m[1..n - 1].copy_from_slice(&rhs);
        }
        Ok(Self { x, y, m })
    }

    fn locate(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    /// Value, first and second derivative at `t` (cubic extrapolation
    /// outside the knot range).
    pub fn eval_all(&self, t: f64) -> (f64, f64, f64) {
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d = (y1 - y0) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0;
        let dd = a * m0 + b * m1;
        (v, d, dd)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_all(t).0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.eval_all(t).1
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }
}
