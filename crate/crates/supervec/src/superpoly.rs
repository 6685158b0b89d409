//! Exact polynomials in mixed commuting/anticommuting variables.
//!
//! A [`SuperPolynomial`] is a finite sum of monomials with nonzero exact
//! coefficients. Odd (Grassmann) variables square to zero and anticommute
//! with each other; even variables commute with everything. Monomials are
//! stored with their fermionic factor in declaration order; any reordering
//! is absorbed into the coefficient sign. Terms are kept in graded
//! lexicographic order (weighted degree first, then exponents), which makes
//! storage, printing and hashing deterministic.
//!
//! Derivatives with respect to odd variables follow the left-derivative
//! convention: to differentiate by an odd `v`, anticommute `v` to the
//! leftmost position (collecting signs) and delete it. This single
//! convention fixes all downstream signs; it is enforced by the
//! super-Leibniz tests.

use crate::coords::{same_coords, Coords, Parity};
use crate::error::{Error, Result};
use crate::scalar::{int, Scalar};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a monomial, plus its cached weighted degree.
///
/// Ordering is graded lexicographic: by weighted degree, then by the
/// exponent vector. Exponents of odd variables are always 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    wdeg: i64,
    exps: SmallVec<[u16; 12]>,
}

impl Monomial {
    pub fn one(coords: &Coords) -> Monomial {
        Monomial { wdeg: 0, exps: SmallVec::from_elem(0, coords.len()) }
    }

    pub fn var(coords: &Coords, v: usize) -> Monomial {
        let mut m = Monomial::one(coords);
        m.exps[v] = 1;
        m.wdeg = coords.weight(v) as i64;
        m
    }

    pub fn from_exps(coords: &Coords, exps: &[u16]) -> Monomial {
        debug_assert_eq!(exps.len(), coords.len());
        let wdeg = exps
            .iter()
            .enumerate()
            .map(|(i, &e)| coords.weight(i) as i64 * e as i64)
            .sum();
        Monomial { wdeg, exps: SmallVec::from_slice(exps) }
    }

    pub fn exp(&self, v: usize) -> u16 {
        self.exps[v]
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn weighted_degree(&self) -> i64 {
        self.wdeg
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn parity(&self, coords: &Coords) -> Parity {
        let odd: u32 = self
            .exps
            .iter()
            .enumerate()
            .filter(|(i, _)| coords.parity(*i) == Parity::Odd)
            .map(|(_, &e)| e as u32)
            .sum();
        if odd % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Product of two monomials: `self * other`, with the Grassmann sign.
    /// Returns `None` when an odd variable repeats.
    fn mul(&self, other: &Monomial, coords: &Coords) -> Option<(Monomial, i64)> {
        let mut exps = self.exps.clone();
        let mut sign = 1i64;
        // Inversions: every odd variable of `other` passes the odd variables
        // of `self` with larger index on its way to canonical position.
        let mut tail_odds = 0u32; // odd vars of self with index > current v
        for v in (0..exps.len()).rev() {
            let e = other.exps[v];
            if coords.parity(v) == Parity::Odd {
                if e > 0 {
                    if exps[v] > 0 {
                        return None;
                    }
                    if tail_odds % 2 == 1 {
                        sign = -sign;
                    }
                    exps[v] = 1;
                }
                if self.exps[v] > 0 {
                    tail_odds += 1;
                }
            } else if e > 0 {
                exps[v] += e;
            }
        }
        Some((Monomial { wdeg: self.wdeg + other.wdeg, exps }, sign))
    }
}

/// Outcome of a weighted-degree query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightedDegree {
    /// The zero polynomial is homogeneous of every degree.
    AnyDegree,
    Homogeneous(i64),
    Inhomogeneous,
}

/// Outcome of a parity query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityClass {
    /// The zero polynomial has both parities.
    Zero,
    Homogeneous(Parity),
    Mixed,
}

impl ParityClass {
    pub fn homogeneous(self) -> Option<Parity> {
        match self {
            ParityClass::Zero => Some(Parity::Even),
            ParityClass::Homogeneous(p) => Some(p),
            ParityClass::Mixed => None,
        }
    }
}

/// Polynomial with exact coefficients over a fixed coordinate system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPolynomial<R: Scalar> {
    coords: Coords,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Scalar> SuperPolynomial<R> {
    pub fn zero(coords: &Coords) -> Self {
        SuperPolynomial { coords: coords.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(coords: &Coords, c: R) -> Self {
        let mut p = Self::zero(coords);
        p.add_term(Monomial::one(coords), c);
        p
    }

    pub fn one(coords: &Coords) -> Self {
        Self::constant(coords, int(1))
    }

    pub fn var(coords: &Coords, v: usize) -> Self {
        let mut p = Self::zero(coords);
        p.add_term(Monomial::var(coords, v), int(1));
        p
    }

    pub fn var_named(coords: &Coords, name: &str) -> Result<Self> {
        let v = coords
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        Ok(Self::var(coords, v))
    }

    pub fn monomial(coords: &Coords, m: Monomial, c: R) -> Self {
        let mut p = Self::zero(coords);
        p.add_term(m, c);
        p
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_coords(&self, other: &Self) -> Result<()> {
        if same_coords(&self.coords, &other.coords) {
            Ok(())
        } else {
            Err(Error::CoordMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_coords(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_coords(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        SuperPolynomial { coords: self.coords.clone(), terms }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero(&self.coords);
        }
        let mut out = Self::zero(&self.coords);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&int(n))
    }

    /// Exact product; odd variables anticommute, `self` factors stand left.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_coords(other)?;
        let mut out = Self::zero(&self.coords);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, sign)) = m1.mul(m2, &self.coords) {
                    let mut c = c1.clone() * c2.clone();
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    /// Left derivative with respect to variable `v`.
    pub fn partial(&self, v: usize) -> Self {
        let mut out = Self::zero(&self.coords);
        let odd = self.coords.parity(v) == Parity::Odd;
        let wv = self.coords.weight(v) as i64;
        for (m, c) in &self.terms {
            let e = m.exps[v];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            let mut coeff = c.clone();
            if odd {
                // Sign from anticommuting v past the odd variables before it.
                let before: u32 = (0..v)
                    .filter(|&u| self.coords.parity(u) == Parity::Odd)
                    .map(|u| m.exps[u] as u32)
                    .sum();
                if before % 2 == 1 {
                    coeff = -coeff;
                }
                exps[v] = 0;
            } else {
                exps[v] = e - 1;
                coeff = coeff * int::<R>(e as i64);
            }
            out.add_term(Monomial { wdeg: m.wdeg - wv, exps }, coeff);
        }
        out
    }

    pub fn partial_named(&self, name: &str) -> Result<Self> {
        let v = self
            .coords
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        Ok(self.partial(v))
    }

    pub fn weighted_degree(&self) -> WeightedDegree {
        let mut it = self.terms.keys();
        match it.next() {
            None => WeightedDegree::AnyDegree,
            Some(first) => {
                let d = first.wdeg;
                if it.all(|m| m.wdeg == d) {
                    WeightedDegree::Homogeneous(d)
                } else {
                    WeightedDegree::Inhomogeneous
                }
            }
        }
    }

    pub fn parity(&self) -> ParityClass {
        let mut it = self.terms.keys();
        match it.next() {
            None => ParityClass::Zero,
            Some(first) => {
                let p = first.parity(&self.coords);
                if it.all(|m| m.parity(&self.coords) == p) {
                    ParityClass::Homogeneous(p)
                } else {
                    ParityClass::Mixed
                }
            }
        }
    }

    /// The part of the polynomial with the given parity.
    pub fn parity_part(&self, p: Parity) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.parity(&self.coords) == p)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        SuperPolynomial { coords: self.coords.clone(), terms }
    }

    /// The part of the polynomial of exact weighted degree `k`.
    pub fn degree_part(&self, k: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.wdeg == k)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        SuperPolynomial { coords: self.coords.clone(), terms }
    }

    /// Canonical text form: terms in graded-lex order.
    pub fn to_text(&self) -> String {
        format!("{self}")
    }
}

impl<R: Scalar> std::ops::Add for &SuperPolynomial<R> {
    type Output = SuperPolynomial<R>;
    fn add(self, other: Self) -> SuperPolynomial<R> {
        self.checked_add(other).expect("coordinate systems match")
    }
}

impl<R: Scalar> std::ops::Sub for &SuperPolynomial<R> {
    type Output = SuperPolynomial<R>;
    fn sub(self, other: Self) -> SuperPolynomial<R> {
        self.checked_sub(other).expect("coordinate systems match")
    }
}

impl<R: Scalar> std::ops::Mul for &SuperPolynomial<R> {
    type Output = SuperPolynomial<R>;
    fn mul(self, other: Self) -> SuperPolynomial<R> {
        self.checked_mul(other).expect("coordinate systems match")
    }
}

impl<R: Scalar> std::ops::Neg for &SuperPolynomial<R> {
    type Output = SuperPolynomial<R>;
    fn neg(self) -> SuperPolynomial<R> {
        SuperPolynomial::neg(self)
    }
}

impl<R: Scalar> fmt::Display for SuperPolynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let one = R::one();
        let minus_one = -R::one();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (sign, mag): (&str, String) = {
                let s = format!("{c}");
                if let Some(stripped) = s.strip_prefix('-') {
                    ("-", stripped.to_string())
                } else {
                    ("+", s)
                }
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else if sign == "-" {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            let unit_coeff = *c == one || *c == minus_one;
            if !unit_coeff || m.is_one() {
                parts.push(mag);
            }
            for (v, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.coords.var(v).name;
                if e == 1 {
                    parts.push(name.clone());
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Enumerate all monomials of exact weighted degree `w`, in graded-lex order.
pub fn monomials_of_degree(coords: &Coords, w: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if w < 0 {
        return out;
    }
    let mut exps = vec![0u16; coords.len()];
    fn rec(coords: &Coords, v: usize, rem: i64, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if v == coords.len() {
            if rem == 0 {
                out.push(Monomial::from_exps(coords, exps));
            }
            return;
        }
        let wv = coords.weight(v) as i64;
        let max = if coords.parity(v) == Parity::Odd { 1 } else { rem / wv };
        for e in 0..=max {
            if e * wv > rem {
                break;
            }
            exps[v] = e as u16;
            rec(coords, v + 1, rem - e * wv, exps, out);
        }
        exps[v] = 0;
    }
    rec(coords, 0, w, &mut exps, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::superspace;
    use crate::scalar::Rat;

    fn p(coords: &Coords, name: &str) -> SuperPolynomial<Rat> {
        SuperPolynomial::var_named(coords, name).unwrap()
    }

    #[test]
    fn anticommutation_and_nilpotency() {
        let c = superspace(1, 2);
        let th1 = p(&c, "th1");
        let th2 = p(&c, "th2");
        assert_eq!(&th1 * &th2, (&th2 * &th1).neg());
        assert!((&th1 * &th1).is_zero());
    }

    #[test]
    fn mixed_product_expands() {
        // (u + th1*th2)(u - th1*th2) = u^2 since (th1 th2)^2 = 0.
        let c = superspace(1, 2);
        let u = p(&c, "x1");
        let tt = &p(&c, "th1") * &p(&c, "th2");
        let lhs = &(&u + &tt) * &(&u - &tt);
        assert_eq!(lhs, &u * &u);
    }

    #[test]
    fn left_derivative_signs() {
        let c = superspace(1, 3);
        let th1 = p(&c, "th1");
        let th1th2 = &th1 * &p(&c, "th2");
        assert_eq!(th1th2.partial_named("th2").unwrap(), th1.neg());
        assert!(th1th2.partial_named("th3").unwrap().is_zero());

        let u = p(&c, "x1");
        let f = &(&u * &u) * &th1;
        let expect = (&u * &th1).scale_int(2);
        assert_eq!(f.partial_named("x1").unwrap(), expect);
    }

    #[test]
    fn weighted_degrees() {
        use crate::coords::{CoordSystem, VarSpec};
        let c = CoordSystem::new(vec![
            VarSpec::odd("th11", 1),
            VarSpec::even("u1", 2),
            VarSpec::odd("vth1", 3),
        ])
        .unwrap();
        let f = &p(&c, "th11") * &p(&c, "u1");
        assert_eq!(f.weighted_degree(), WeightedDegree::Homogeneous(3));
        assert_eq!(p(&c, "vth1").weighted_degree(), WeightedDegree::Homogeneous(3));
        let g = &p(&c, "u1") + &p(&c, "th11");
        assert_eq!(g.weighted_degree(), WeightedDegree::Inhomogeneous);
        let z = SuperPolynomial::<Rat>::zero(&c);
        assert_eq!(z.weighted_degree(), WeightedDegree::AnyDegree);
    }

    #[test]
    fn monomial_enumeration_counts() {
        // Degree-2 monomials in 2 even + 2 odd unit-weight variables:
        // x1^2, x1 x2, x2^2, x1 th1, ... th1 th2 -> C(3,2)=3 even-even,
        // 2*2 mixed, 1 odd-odd = 8.
        let c = superspace(2, 2);
        assert_eq!(monomials_of_degree(&c, 2).len(), 8);
        assert_eq!(monomials_of_degree(&c, 0).len(), 1);
        assert_eq!(monomials_of_degree(&c, -1).len(), 0);
    }

    #[test]
    fn display_is_canonical() {
        let c = superspace(1, 2);
        let u = p(&c, "x1");
        let f = &(&u * &u).scale_int(2) - &(&p(&c, "th1") * &p(&c, "th2"));
        assert_eq!(format!("{f}"), "-th1*th2 + 2*x1^2");
    }
}
