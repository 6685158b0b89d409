//! Vector fields with formal exponential coefficients on the torus.
//!
//! Fields are finite sums `c * e^{m.x} d_mu` with integer mode vectors `m`
//! and exact rational coefficients, closed under the bracket via
//! `d_mu e^{n.x} = n_mu e^{n.x}`. This independent realization of the
//! Witt-type bracket is used to cross-check the S=0 quotient of the
//! toroidal algebra.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// `(mode, direction) -> coefficient`, representing `c * e^{m.x} d_mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpVectorField<R: Scalar> {
    dim: usize,
    terms: BTreeMap<(Vec<i64>, usize), R>,
}

impl<R: Scalar> ExpVectorField<R> {
    pub fn zero(dim: usize) -> Self {
        ExpVectorField { dim, terms: BTreeMap::new() }
    }

    /// The generator `e^{m.x} d_mu` (mu is zero-based).
    pub fn generator(mode: &[i64], mu: usize) -> Self {
        let mut f = Self::zero(mode.len());
        f.add_term(mode.to_vec(), mu, R::one());
        f
    }

    pub fn add_term(&mut self, mode: Vec<i64>, mu: usize, c: R) {
        assert_eq!(mode.len(), self.dim);
        assert!(mu < self.dim);
        if c.is_zero() {
            return;
        }
        let key = (mode, mu);
        let cur = self.terms.remove(&key).unwrap_or_else(R::zero);
        let sum = cur + c;
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<i64>, usize), &R)> {
        self.terms.iter()
    }

    /// `[f e^{m.x} d_mu, g e^{n.x} d_nu] =
    ///  f g ( n_mu e^{(m+n).x} d_nu - m_nu e^{(m+n).x} d_mu )`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::ModeDim { expected: self.dim, got: other.dim });
        }
        let mut out = Self::zero(self.dim);
        for ((m, mu), a) in &self.terms {
            for ((n, nu), b) in &other.terms {
                let sum: Vec<i64> = m.iter().zip(n).map(|(x, y)| x + y).collect();
                let c = a.clone() * b.clone();
                out.add_term(sum.clone(), *nu, c.clone() * R::from_int(n[*mu]));
                out.add_term(sum, *mu, -(c * R::from_int(m[*nu])));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    #[test]
    fn witt_relations_in_one_dimension() {
        // [W_m, W_n] = (n - m) W_{m+n}
        let w2 = ExpVectorField::<Rat>::generator(&[2], 0);
        let wm1 = ExpVectorField::<Rat>::generator(&[-1], 0);
        let got = w2.bracket(&wm1).unwrap();
        let expect = ExpVectorField::<Rat>::generator(&[1], 0).scaled(-3);
        assert_eq!(got, expect);
    }

    impl ExpVectorField<Rat> {
        fn scaled(&self, k: i64) -> Self {
            let mut out = Self::zero(self.dim);
            for ((m, mu), c) in &self.terms {
                out.add_term(m.clone(), *mu, c.clone() * Rat::from_int(k));
            }
            out
        }
    }
}
