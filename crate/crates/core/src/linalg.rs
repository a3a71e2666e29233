//! Tridiagonal systems assembled by the finite-volume steps.

use crate::error::{Error, Result};

/// Row `i` reads `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`;
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone, Default)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
    scratch: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(n: usize) -> Self {
        let mut t = Self::default();
        t.reset(n);
        t
    }

    /// Zero every coefficient, resizing to `n` rows.
    pub fn reset(&mut self, n: usize) {
        for v in [&mut self.lower, &mut self.diag, &mut self.upper, &mut self.rhs] {
            v.clear();
            v.resize(n, 0.0);
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A x` for the assembled matrix.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Thomas elimination without pivoting. The finite-volume matrices are
    /// diagonally dominant, so a vanishing pivot signals a broken assembly.
    pub fn solve_into(&mut self, x: &mut [f64]) -> Result<()> {
        let n = self.len();
        if x.len() != n {
            return Err(Error::Numerical(format!(
                "solution buffer has {} entries for {n} unknowns",
                x.len()
            )));
        }
        if n == 0 {
            return Ok(());
        }
        self.scratch.clear();
        self.scratch.resize(n, 0.0);
        let c = &mut self.scratch;

        let mut pivot = self.diag[0];
        check_pivot(pivot, 0)?;
        c[0] = self.upper[0] / pivot;
        x[0] = self.rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.lower[i] * c[i - 1];
            check_pivot(pivot, i)?;
            c[i] = if i + 1 < n { self.upper[i] / pivot } else { 0.0 };
            x[i] = (self.rhs[i] - self.lower[i] * x[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite tridiagonal solution".into()));
        }
        Ok(())
    }

    pub fn solve(&mut self) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.len()];
        self.solve_into(&mut x)?;
        Ok(x)
    }
}

fn check_pivot(p: f64, row: usize) -> Result<()> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::Numerical(format!("zero pivot in tridiagonal row {row}")));
    }
    Ok(())
}
