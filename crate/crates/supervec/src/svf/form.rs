//! Super differential forms and the Cartan calculus.
//!
//! Forms are built from generators `d(v)`, one per coordinate, with
//! `parity(d(v)) = parity(v) + 1`. Generators multiply with the Koszul sign
//! rule: generators of even coordinates are odd (anticommute, square to
//! zero) while generators of odd coordinates are even (commute, may repeat).
//! Coefficients stand to the left of the generator product, and terms are
//! kept canonical with generators in declaration order.
//!
//! The exterior differential `d` is an odd derivation with `d(dz) = 0` and
//! `d f = sum_v d(v) * (d_v f)`; contraction `i_X` is a derivation of parity
//! `|X|+1` with `i_X(d(v)) = X^v`; the Lie derivative is the graded Cartan
//! formula `L_X = i_X d + (-1)^{|X|} d i_X`. These conventions make `d^2 = 0`
//! and `L_{[X,Y]} = [L_X, L_Y]` hold exactly, which the tests enforce.

use crate::coords::{same_coords, Coords, Parity};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superpoly::SuperPolynomial;
use crate::svf::SuperVectorField;
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;

/// Product of form generators: exponent of `d(v)` per variable index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormMono {
    exps: SmallVec<[u16; 12]>,
}

impl FormMono {
    pub fn one(coords: &Coords) -> FormMono {
        FormMono { exps: SmallVec::from_elem(0, coords.len()) }
    }

    pub fn gen(coords: &Coords, v: usize) -> FormMono {
        let mut m = FormMono::one(coords);
        m.exps[v] = 1;
        m
    }

    pub fn exp(&self, v: usize) -> u16 {
        self.exps[v]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Form degree: number of generators, with multiplicity.
    pub fn form_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Parity = number of odd generators (those of even variables) mod 2.
    pub fn parity(&self, coords: &Coords) -> Parity {
        let odd: u32 = self
            .exps
            .iter()
            .enumerate()
            .filter(|(v, _)| coords.parity(*v) == Parity::Even)
            .map(|(_, &e)| e as u32)
            .sum();
        if odd % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Weighted degree of `d(v)` is the weight of `v`.
    pub fn weighted_degree(&self, coords: &Coords) -> i64 {
        self.exps
            .iter()
            .enumerate()
            .map(|(v, &e)| coords.weight(v) as i64 * e as i64)
            .sum()
    }

    /// Number of odd generators with variable index strictly below `v`.
    fn odd_prefix(&self, coords: &Coords, v: usize) -> u32 {
        (0..v)
            .filter(|&w| coords.parity(w) == Parity::Even)
            .map(|w| self.exps[w] as u32)
            .sum()
    }

    /// Merge `self * other` into canonical order; `None` if an odd generator
    /// repeats. The sign counts inversions among odd generators.
    fn merge(&self, other: &FormMono, coords: &Coords) -> Option<(FormMono, i64)> {
        let mut exps = self.exps.clone();
        let mut sign = 1i64;
        let mut tail_odds = 0u32;
        for v in (0..exps.len()).rev() {
            let e = other.exps[v];
            let odd_gen = coords.parity(v) == Parity::Even;
            if odd_gen {
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
        Some((FormMono { exps }, sign))
    }
}

/// A super differential form with superpolynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperForm<R: Scalar> {
    coords: Coords,
    terms: BTreeMap<FormMono, SuperPolynomial<R>>,
}

impl<R: Scalar> SuperForm<R> {
    pub fn zero(coords: &Coords) -> Self {
        SuperForm { coords: coords.clone(), terms: BTreeMap::new() }
    }

    pub fn from_poly(f: &SuperPolynomial<R>) -> Self {
        let coords = f.coords().clone();
        let mut out = Self::zero(&coords);
        out.add_term(FormMono::one(&coords), f.clone());
        out
    }

    /// The generator `d(v)` as a form.
    pub fn dvar(coords: &Coords, v: usize) -> Self {
        let mut out = Self::zero(coords);
        out.add_term(FormMono::gen(coords, v), SuperPolynomial::one(coords));
        out
    }

    pub fn dvar_named(coords: &Coords, name: &str) -> Result<Self> {
        let v = coords
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        Ok(Self::dvar(coords, v))
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormMono, &SuperPolynomial<R>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: FormMono, c: SuperPolynomial<R>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(&c).expect("same coords");
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
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        SuperForm { coords: self.coords.clone(), terms }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(&self.coords);
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), coeff.scale(c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&crate::scalar::int(n))
    }

    /// Left multiplication by a polynomial: `f ∧ ω`.
    pub fn mul_poly_left(&self, f: &SuperPolynomial<R>) -> Self {
        let mut out = Self::zero(&self.coords);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f.checked_mul(c).expect("same coords"));
        }
        out
    }

    /// Wedge product with all Koszul signs.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_coords(other)?;
        let mut out = Self::zero(&self.coords);
        for (g, f) in &self.terms {
            let gp = g.parity(&self.coords);
            for (h, gcoeff) in &other.terms {
                if let Some((gh, msign)) = g.merge(h, &self.coords) {
                    // Move the right coefficient past the left generators.
                    for p in [Parity::Even, Parity::Odd] {
                        let part = gcoeff.parity_part(p);
                        if part.is_zero() {
                            continue;
                        }
                        let mut sign = msign;
                        if p == Parity::Odd && gp == Parity::Odd {
                            sign = -sign;
                        }
                        let mut coeff = f.checked_mul(&part).expect("same coords");
                        if sign < 0 {
                            coeff = coeff.neg();
                        }
                        out.add_term(gh.clone(), coeff);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exterior differential, an odd derivation with `d(d(v)) = 0`.
    pub fn d(&self) -> Self {
        let coords = &self.coords;
        let mut out = Self::zero(coords);
        for (g, f) in &self.terms {
            // d(f * G) = (df) ∧ G with df = sum_v d(v) * (d_v f).
            for v in 0..coords.len() {
                let h = f.partial(v);
                if h.is_zero() {
                    continue;
                }
                let odd_gen = coords.parity(v) == Parity::Even;
                if odd_gen && g.exp(v) > 0 {
                    continue;
                }
                let prefix = g.odd_prefix(coords, v);
                for p in [Parity::Even, Parity::Odd] {
                    let part = h.parity_part(p);
                    if part.is_zero() {
                        continue;
                    }
                    // d(v) * h = (-1)^{|d(v)||h|} h * d(v), then d(v) moves
                    // into sorted position past the odd prefix of G.
                    let mut sign = 1i64;
                    let gen_parity_odd = odd_gen; // |d(v)| = |v|+1
                    if gen_parity_odd && p == Parity::Odd {
                        sign = -sign;
                    }
                    if gen_parity_odd && prefix % 2 == 1 {
                        sign = -sign;
                    }
                    let mut exps = g.exps.clone();
                    exps[v] += 1;
                    let mut coeff = part;
                    if sign < 0 {
                        coeff = coeff.neg();
                    }
                    out.add_term(FormMono { exps }, coeff);
                }
            }
        }
        out
    }

    /// Contraction with a parity-homogeneous vector field.
    pub fn contract(&self, x: &SuperVectorField<R>) -> Result<Self> {
        if !same_coords(&self.coords, x.coords()) {
            return Err(Error::CoordMismatch);
        }
        let px = x
            .parity()
            .homogeneous()
            .ok_or_else(|| Error::InhomogeneousParity(format!("contraction with {x}")))?;
        let op_odd = px == Parity::Even; // parity of i_X is |X|+1
        let coords = &self.coords;
        let mut out = Self::zero(coords);
        for (g, f) in &self.terms {
            for (v, comp) in x.components() {
                let e = g.exp(v);
                if e == 0 || comp.is_zero() {
                    continue;
                }
                let prefix = g.odd_prefix(coords, v);
                let mut exps = g.exps.clone();
                exps[v] -= 1;
                let target = FormMono { exps };
                for pf in [Parity::Even, Parity::Odd] {
                    let fpart = f.parity_part(pf);
                    if fpart.is_zero() {
                        continue;
                    }
                    for pq in [Parity::Even, Parity::Odd] {
                        let qpart = comp.parity_part(pq);
                        if qpart.is_zero() {
                            continue;
                        }
                        // i_X passes the coefficient f and the odd prefix of
                        // G; the inserted coefficient X^v then moves left
                        // past the same prefix.
                        let mut flips = 0u32;
                        if op_odd && pf == Parity::Odd {
                            flips += 1;
                        }
                        if op_odd && prefix % 2 == 1 {
                            flips += 1;
                        }
                        if pq == Parity::Odd && prefix % 2 == 1 {
                            flips += 1;
                        }
                        let mut coeff = fpart
                            .checked_mul(&qpart)
                            .expect("same coords")
                            .scale_int(e as i64);
                        if flips % 2 == 1 {
                            coeff = coeff.neg();
                        }
                        out.add_term(target.clone(), coeff);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Lie derivative along X: the graded Cartan formula
    /// `L_X = i_X ∘ d + (-1)^{|X|} d ∘ i_X`.
    pub fn lie_derivative(&self, x: &SuperVectorField<R>) -> Result<Self> {
        let px = x
            .parity()
            .homogeneous()
            .ok_or_else(|| Error::InhomogeneousParity(format!("Lie derivative along {x}")))?;
        let a = self.d().contract(x)?;
        let b = self.contract(x)?.d();
        if px == Parity::Even {
            a.checked_add(&b)
        } else {
            a.checked_sub(&b)
        }
    }
}

impl<R: Scalar> fmt::Display for SuperForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff = format!("{c}");
            let mut parts: Vec<String> = Vec::new();
            if coeff != "1" || m.is_one() {
                if c.num_terms() > 1 {
                    parts.push(format!("({coeff})"));
                } else {
                    parts.push(coeff);
                }
            }
            for (v, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.coords.var(v).name;
                if e == 1 {
                    parts.push(format!("d({name})"));
                } else {
                    parts.push(format!("d({name})^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::systems;
    use crate::coords::superspace;
    use crate::scalar::Rat;

    type P = SuperPolynomial<Rat>;
    type Vf = SuperVectorField<Rat>;
    type F = SuperForm<Rat>;

    fn var(c: &Coords, name: &str) -> P {
        P::var_named(c, name).unwrap()
    }

    #[test]
    fn lie_derivative_on_functions_is_application() {
        let c = superspace(2, 2);
        let x = Vf::term(var(&c, "x1").checked_mul(&var(&c, "th1")).unwrap(), 1)
            .checked_add(&Vf::term(var(&c, "x2"), c.index_of("th2").unwrap()))
            .unwrap();
        let f = var(&c, "x2").checked_mul(&var(&c, "th2")).unwrap();
        let lhs = F::from_poly(&f).lie_derivative(&x).unwrap();
        let rhs = F::from_poly(&x.apply(&f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn contact_form_examples() {
        // L_{d_t}(dt + th1 d(th1) + th2 d(th2)) = 0
        let c = systems::contact(1, 2);
        let alpha = contact_alpha(&c);
        let dt_field = Vf::partial_named(&c, "t").unwrap();
        assert!(alpha.lie_derivative(&dt_field).unwrap().is_zero());
    }

    fn contact_alpha(c: &Coords) -> F {
        let mut alpha = F::dvar_named(c, "t").unwrap();
        for a in 1..=2 {
            let th = var(c, &format!("th{a}"));
            let dth = F::dvar_named(c, &format!("th{a}")).unwrap();
            alpha = alpha.checked_add(&dth.mul_poly_left(&th)).unwrap();
        }
        alpha
    }

    #[test]
    fn euler_and_translation_examples() {
        let c = superspace(1, 0);
        let du = F::dvar_named(&c, "x1").unwrap();
        // L_{u d_u}(du) = du
        let euler = Vf::term(var(&c, "x1"), 0);
        assert_eq!(du.lie_derivative(&euler).unwrap(), du);
        // L_{d_u}(u du) = du
        let udu = du.mul_poly_left(&var(&c, "x1"));
        let trans = Vf::partial_named(&c, "x1").unwrap();
        assert_eq!(udu.lie_derivative(&trans).unwrap(), du);
    }

    #[test]
    fn d_squared_zero_on_samples() {
        let c = superspace(2, 2);
        let f = &(&var(&c, "x1") * &var(&c, "th1")) + &(&var(&c, "x2") * &var(&c, "x2"));
        let omega = F::from_poly(&f);
        assert!(omega.d().d().is_zero());
        let omega2 = omega.d().wedge(&F::dvar_named(&c, "th2").unwrap()).unwrap();
        assert!(omega2.d().d().is_zero());
    }

    #[test]
    fn degree_minus_one_contact_fields_preserve_alpha_exactly() {
        let c = systems::contact(1, 2);
        let alpha = contact_alpha(&c);
        for a in 1..=2 {
            let name = format!("th{a}");
            let d = Vf::partial_named(&c, &name)
                .unwrap()
                .checked_add(&Vf::term(var(&c, &name), 0))
                .unwrap();
            assert!(alpha.lie_derivative(&d).unwrap().is_zero(), "th{a} field");
        }
    }
}
