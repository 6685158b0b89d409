//! Super vector fields: superbrackets, divergences, grading operators.
//!
//! A vector field is a finite sum of `coefficient * d/d(variable)` terms
//! with superpolynomial coefficients, the coefficient standing to the left
//! of the derivative. The superbracket of parity-homogeneous fields is
//! `[X,Y] = X∘Y - (-1)^{|X||Y|} Y∘X`; the second-order parts cancel and the
//! result is again a vector field. Fields of inhomogeneous parity are
//! rejected rather than silently split, which keeps the sign bookkeeping
//! auditable at call sites.

pub mod expfield;
pub mod form;

use crate::coords::{same_coords, Coords, Parity};
use crate::error::{Error, Result};
use crate::scalar::{int, FieldScalar, Scalar};
use crate::superpoly::{ParityClass, SuperPolynomial, WeightedDegree};
use std::collections::BTreeMap;
use std::fmt;

pub use form::SuperForm;

/// A polynomial super vector field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperVectorField<R: Scalar> {
    coords: Coords,
    comps: BTreeMap<usize, SuperPolynomial<R>>,
}

impl<R: Scalar> SuperVectorField<R> {
    pub fn zero(coords: &Coords) -> Self {
        SuperVectorField { coords: coords.clone(), comps: BTreeMap::new() }
    }

    /// `coeff * d/d(var)`.
    pub fn term(coeff: SuperPolynomial<R>, var: usize) -> Self {
        let coords = coeff.coords().clone();
        let mut f = Self::zero(&coords);
        f.add_component(var, coeff);
        f
    }

    /// The constant field `d/d(var)`.
    pub fn partial(coords: &Coords, var: usize) -> Self {
        Self::term(SuperPolynomial::one(coords), var)
    }

    pub fn partial_named(coords: &Coords, name: &str) -> Result<Self> {
        let v = coords
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        Ok(Self::partial(coords, v))
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn add_component(&mut self, var: usize, coeff: SuperPolynomial<R>) {
        if coeff.is_zero() {
            return;
        }
        match self.comps.entry(var) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(&coeff).expect("same coords");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn component(&self, var: usize) -> SuperPolynomial<R> {
        self.comps.get(&var).cloned().unwrap_or_else(|| SuperPolynomial::zero(&self.coords))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &SuperPolynomial<R>)> {
        self.comps.iter().map(|(v, c)| (*v, c))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
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
        for (v, c) in &other.comps {
            out.add_component(*v, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let comps = self.comps.iter().map(|(v, c)| (*v, c.neg())).collect();
        SuperVectorField { coords: self.coords.clone(), comps }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(&self.coords);
        for (v, coeff) in &self.comps {
            out.add_component(*v, coeff.scale(c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&int(n))
    }

    pub fn mul_poly(&self, f: &SuperPolynomial<R>) -> Self {
        let mut out = Self::zero(&self.coords);
        for (v, coeff) in &self.comps {
            out.add_component(*v, f.checked_mul(coeff).expect("same coords"));
        }
        out
    }

    /// Parity of a term `f * d/dv` is `parity(f) + parity(v)`.
    pub fn parity(&self) -> ParityClass {
        let mut found: Option<Parity> = None;
        for (v, coeff) in &self.comps {
            let pv = self.coords.parity(*v);
            for (m, _) in coeff.terms() {
                let p = m.parity(&self.coords).combine(pv);
                match found {
                    None => found = Some(p),
                    Some(q) if q == p => {}
                    Some(_) => return ParityClass::Mixed,
                }
            }
        }
        match found {
            None => ParityClass::Zero,
            Some(p) => ParityClass::Homogeneous(p),
        }
    }

    /// Weighted degree of a term `f * d/dv` is `deg f - weight(v)`.
    pub fn weighted_degree(&self) -> WeightedDegree {
        let mut found: Option<i64> = None;
        for (v, coeff) in &self.comps {
            let wv = self.coords.weight(*v) as i64;
            for (m, _) in coeff.terms() {
                let d = m.weighted_degree() - wv;
                match found {
                    None => found = Some(d),
                    Some(e) if e == d => {}
                    Some(_) => return WeightedDegree::Inhomogeneous,
                }
            }
        }
        match found {
            None => WeightedDegree::AnyDegree,
            Some(d) => WeightedDegree::Homogeneous(d),
        }
    }

    pub fn degree_part(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.coords);
        for (v, coeff) in &self.comps {
            out.add_component(*v, coeff.degree_part(k + self.coords.weight(*v) as i64));
        }
        out
    }

    /// Apply the field to a function: `X(f) = sum_v X^v d_v(f)`.
    pub fn apply(&self, f: &SuperPolynomial<R>) -> SuperPolynomial<R> {
        let mut out = SuperPolynomial::zero(&self.coords);
        for (v, coeff) in &self.comps {
            out = out
                .checked_add(&coeff.checked_mul(&f.partial(*v)).expect("same coords"))
                .expect("same coords");
        }
        out
    }

    /// Superbracket of parity-homogeneous fields.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_coords(other)?;
        let px = self.parity().homogeneous().ok_or_else(|| {
            Error::InhomogeneousParity(format!("left bracket operand {self}"))
        })?;
        let py = other.parity().homogeneous().ok_or_else(|| {
            Error::InhomogeneousParity(format!("right bracket operand {other}"))
        })?;
        // [X,Y] = sum_v ( X(Y^v) - (-1)^{|X||Y|} Y(X^v) ) d_v
        let both_odd = px == Parity::Odd && py == Parity::Odd;
        let mut out = Self::zero(&self.coords);
        for (v, yc) in &other.comps {
            out.add_component(*v, self.apply(yc));
        }
        for (v, xc) in &self.comps {
            let t = other.apply(xc);
            out.add_component(*v, if both_odd { t } else { t.neg() });
        }
        Ok(out)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        format!("{self}")
    }
}

impl<R: Scalar> fmt::Display for SuperVectorField<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        for (i, (v, coeff)) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let name = &self.coords.var(*v).name;
            if coeff.num_terms() == 1 {
                let s = format!("{coeff}");
                if s == "1" {
                    write!(f, "D({name})")?;
                } else {
                    write!(f, "{s}*D({name})")?;
                }
            } else {
                write!(f, "({coeff})*D({name})")?;
            }
        }
        Ok(())
    }
}

/// The signed divergence: `div X = sum_v (-1)^{|v|(|X|+1)} d_v(X^v)`.
/// Zero iff X preserves the coordinate volume form.
pub fn divergence<R: Scalar>(x: &SuperVectorField<R>) -> Result<SuperPolynomial<R>> {
    let coords = x.coords().clone();
    let px = x
        .parity()
        .homogeneous()
        .ok_or_else(|| Error::InhomogeneousParity(format!("divergence of {x}")))?;
    let mut out = SuperPolynomial::zero(&coords);
    for (v, coeff) in x.components() {
        let mut t = coeff.partial(v);
        let exponent = match (coords.parity(v), px) {
            (Parity::Odd, Parity::Even) => 1,
            _ => 0,
        };
        if exponent == 1 {
            t = t.neg();
        }
        out = out.checked_add(&t).expect("same coords");
    }
    Ok(out)
}

/// The signed cyclic Jacobi sum
/// `(-1)^{|X||Z|}[X,[Y,Z]] + (-1)^{|Y||X|}[Y,[Z,X]] + (-1)^{|Z||Y|}[Z,[X,Y]]`,
/// identically zero for any parity-homogeneous triple.
pub fn super_jacobiator<R: Scalar>(
    x: &SuperVectorField<R>,
    y: &SuperVectorField<R>,
    z: &SuperVectorField<R>,
) -> Result<SuperVectorField<R>> {
    let px = x
        .parity()
        .homogeneous()
        .ok_or_else(|| Error::InhomogeneousParity(format!("{x}")))?;
    let py = y
        .parity()
        .homogeneous()
        .ok_or_else(|| Error::InhomogeneousParity(format!("{y}")))?;
    let pz = z
        .parity()
        .homogeneous()
        .ok_or_else(|| Error::InhomogeneousParity(format!("{z}")))?;
    let sign = |a: Parity, b: Parity| if a == Parity::Odd && b == Parity::Odd { -1 } else { 1 };
    let t1 = x.bracket(&y.bracket(z)?)?.scale_int(sign(px, pz));
    let t2 = y.bracket(&z.bracket(x)?)?.scale_int(sign(py, px));
    let t3 = z.bracket(&x.bracket(y)?)?.scale_int(sign(pz, py));
    t1.checked_add(&t2)?.checked_add(&t3)
}

/// The weighted Euler field `Z = sum_v w_v x^v d_v` computing the grading:
/// `[Z, X] = k X` for every field homogeneous of weighted degree `k`.
pub fn grading_operator<R: Scalar>(coords: &Coords) -> SuperVectorField<R> {
    let mut z = SuperVectorField::zero(coords);
    for v in 0..coords.len() {
        let coeff = SuperPolynomial::var(coords, v).scale_int(coords.weight(v) as i64);
        z.add_component(v, coeff);
    }
    z
}

/// The deformed divergence of the odd-contact family, evaluated on a
/// generating function over coordinates `(tau, u^1..u^n, th_1..th_n)`:
///
/// `div_beta f = 2 s(f) ( d^2 f / du^i dth_i + (u^i d_{u^i} + th_i d_{th_i} - n*beta) df/dtau )`
///
/// where `s(f) = (-1)^{p(f)+1}` tracks the parity of the contact field the
/// function generates (the generator map flips parity in this family).
pub fn div_beta<R: FieldScalar>(
    f: &SuperPolynomial<R>,
    beta: &R,
    n: usize,
) -> Result<SuperPolynomial<R>> {
    let coords = f.coords().clone();
    odd_contact_indices(&coords, n)?;
    let pf = f
        .parity()
        .homogeneous()
        .ok_or_else(|| Error::InhomogeneousParity(format!("div_beta of {f}")))?;
    let tau = coords.index_of("tau").expect("checked");
    let mut mixed = SuperPolynomial::zero(&coords);
    let mut euler_dtau = SuperPolynomial::zero(&coords);
    let df_dtau = f.partial(tau);
    for i in 1..=n {
        let u = coords.index_of(&format!("u{i}")).expect("checked");
        let th = coords.index_of(&format!("th{i}")).expect("checked");
        mixed = mixed.checked_add(&f.partial(th).partial(u))?;
        let ue = SuperPolynomial::var(&coords, u).checked_mul(&df_dtau.partial(u))?;
        let te = SuperPolynomial::var(&coords, th).checked_mul(&df_dtau.partial(th))?;
        euler_dtau = euler_dtau.checked_add(&ue)?.checked_add(&te)?;
    }
    let shift = df_dtau.scale(&(int::<R>(n as i64) * beta.clone())).neg();
    let mut total = mixed.checked_add(&euler_dtau)?.checked_add(&shift)?;
    total = total.scale_int(2);
    if pf == Parity::Even {
        total = total.neg();
    }
    Ok(total)
}

/// Validates the `(tau, u^1..u^n, th_1..th_n)` odd-contact coordinate layout.
fn odd_contact_indices(coords: &Coords, n: usize) -> Result<()> {
    let ok = coords.len() == 2 * n + 1
        && coords.index_of("tau") == Some(0)
        && coords.parity(0) == Parity::Odd
        && (1..=n).all(|i| {
            coords.index_of(&format!("u{i}")) == Some(i) && coords.parity(i) == Parity::Even
        })
        && (1..=n).all(|i| {
            coords.index_of(&format!("th{i}")) == Some(n + i)
                && coords.parity(n + i) == Parity::Odd
        });
    if ok {
        Ok(())
    } else {
        Err(Error::CoordMismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::systems;
    use crate::coords::superspace;
    use crate::scalar::{frac, Rat};

    type Vf = SuperVectorField<Rat>;
    type P = SuperPolynomial<Rat>;

    fn var(c: &Coords, name: &str) -> P {
        P::var_named(c, name).unwrap()
    }

    #[test]
    fn basic_brackets() {
        let c = superspace(1, 0);
        let du = Vf::partial_named(&c, "x1").unwrap();
        let u_du = Vf::term(var(&c, "x1"), 0);
        // [d_u, u d_u] = d_u
        assert_eq!(du.bracket(&u_du).unwrap(), du);
    }

    #[test]
    fn odd_constant_fields_anticommute_to_zero() {
        let c = superspace(0, 2);
        let e1 = Vf::partial_named(&c, "th1").unwrap();
        let e2 = Vf::partial_named(&c, "th2").unwrap();
        assert!(e1.bracket(&e2).unwrap().is_zero());
        assert!(e1.bracket(&e1).unwrap().is_zero());
    }

    #[test]
    fn mixed_parity_rejected() {
        let c = superspace(1, 1);
        let x = Vf::partial_named(&c, "x1").unwrap();
        let th = Vf::partial_named(&c, "th1").unwrap();
        let mixed = x.checked_add(&th).unwrap();
        assert!(mixed.bracket(&x).is_err());
    }

    #[test]
    fn divergences() {
        let c = superspace(2, 2);
        // div(x1 d_2) = 0
        let f = Vf::term(var(&c, "x1"), 1);
        assert!(divergence(&f).unwrap().is_zero());
        // div(u d_u) = 1
        let g = Vf::term(var(&c, "x1"), 0);
        assert_eq!(divergence(&g).unwrap(), P::one(&c));
        // div(th1 d_th2) = 0 (off-diagonal odd block)
        let h = Vf::term(var(&c, "th1"), c.index_of("th2").unwrap());
        assert!(divergence(&h).unwrap().is_zero());
        // div(th1 d_th1) = -1 for this even field
        let k = Vf::term(var(&c, "th1"), c.index_of("th1").unwrap());
        assert_eq!(divergence(&k).unwrap(), P::one(&c).neg());
    }

    #[test]
    fn grading_operator_measures_degree() {
        let c = systems::mb38();
        let z: Vf = grading_operator(&c);
        let eth1 = Vf::partial_named(&c, "vth1").unwrap();
        assert_eq!(z.bracket(&eth1).unwrap(), eth1.scale_int(-3));
        let d11 = Vf::partial_named(&c, "th11").unwrap();
        assert_eq!(z.bracket(&d11).unwrap(), d11.scale_int(-1));
        let du = Vf::partial_named(&c, "u1").unwrap();
        assert_eq!(z.bracket(&du).unwrap(), du.scale_int(-2));
    }

    #[test]
    fn div_beta_examples() {
        let n = 2;
        let c = systems::odd_contact(n);
        let beta: Rat = frac(1, 3);
        // f = 1: all derivatives vanish.
        let one = P::one(&c);
        assert!(div_beta(&one, &beta, n).unwrap().is_zero());
        // f = tau: 2*(0 + (0 - n*beta)*1) = -2*n*beta.
        let tau = var(&c, "tau");
        let got = div_beta(&tau, &beta, n).unwrap();
        let expect = P::constant(&c, -(int::<Rat>(2 * n as i64) * beta.clone()));
        assert_eq!(got, expect);
        // f = u1*th1: the mixed second derivative is 1, so the value is 2.
        let f = var(&c, "u1").checked_mul(&var(&c, "th1")).unwrap();
        assert_eq!(div_beta(&f, &beta, n).unwrap(), P::constant(&c, int(2)));
    }
}
