//! Constructors and verifiers for the classified simple vector-field
//! superalgebras: the series and the exceptions, with the structures they
//! preserve, gradings, depths, and the consistent-grading check.
//!
//! Series are built from their defining structures via the preserver solve;
//! mb(3|8) uses its explicit generators and dual Pfaff system. Every build
//! returns the non-positive part of the algebra as a graded span together
//! with a descriptor of the preserved structures.

pub mod mb38;
pub mod systems;

use crate::coords::Coords;
use num_traits::Zero;
use crate::error::{Error, Result};
use crate::linalg::{solve, SparseVec};
use crate::prolong::{
    homogeneous_fields, preserver_solve, FieldIndexer, GradedSpan, StructureSpec,
};
use crate::scalar::{frac, Rat, Scalar};
use crate::superpoly::{monomials_of_degree, SuperPolynomial, WeightedDegree};
use crate::svf::form::FormMono;
use crate::svf::{div_beta, grading_operator, super_jacobiator, SuperForm, SuperVectorField};
use serde::Serialize;
use std::collections::BTreeMap;

type Poly = SuperPolynomial<Rat>;
type Vf = SuperVectorField<Rat>;
type Form = SuperForm<Rat>;

/// Supported algebra names. The tilde-deformed series and the kas/vas
/// exceptions are recognized but rejected as out of scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraName {
    Vect(usize, usize),
    Svect(usize, usize),
    Hamiltonian(usize, usize),
    Le(usize),
    Sle(usize),
    Contact(usize, usize),
    OddContact(usize),
    SmBeta(usize, Rat),
    Vle36,
    Ksle510,
    Mb38,
}

impl AlgebraName {
    pub fn parse(s: &str) -> Result<AlgebraName> {
        let s = s.trim();
        let (head, args) = match s.find('(') {
            Some(p) if s.ends_with(')') => (&s[..p], &s[p + 1..s.len() - 1]),
            _ => (s, ""),
        };
        let dims = |args: &str| -> Result<(usize, usize)> {
            let parts: Vec<&str> = args.split('|').collect();
            match parts.as_slice() {
                [n] => Ok((parse_usize(n)?, 0)),
                [n, m] => Ok((parse_usize(n)?, parse_usize(m)?)),
                _ => Err(Error::Parse(format!("bad dimension list: {args}"))),
            }
        };
        match head {
            "vect" => dims(args).map(|(n, m)| AlgebraName::Vect(n, m)),
            "svect" => dims(args).map(|(n, m)| AlgebraName::Svect(n, m)),
            "h" => dims(args).map(|(n, m)| AlgebraName::Hamiltonian(n, m)),
            "le" => Ok(AlgebraName::Le(parse_usize(args)?)),
            "sle" => Ok(AlgebraName::Sle(parse_usize(args)?)),
            "k" => dims(args).map(|(n, m)| AlgebraName::Contact(n, m)),
            "m" => Ok(AlgebraName::OddContact(parse_usize(args)?)),
            "sm_beta" | "sm" => {
                let parts: Vec<&str> = args.split(';').collect();
                match parts.as_slice() {
                    [n, b] => Ok(AlgebraName::SmBeta(parse_usize(n)?, parse_rat(b)?)),
                    [_] => Err(Error::Parse(
                        "sm_beta needs an explicit parameter, e.g. sm_beta(2;1/2)".into(),
                    )),
                    _ => Err(Error::Parse(format!("bad sm_beta arguments: {args}"))),
                }
            }
            "vle" if args == "3|6" => Ok(AlgebraName::Vle36),
            "vle36" => Ok(AlgebraName::Vle36),
            "ksle" if args == "5|10" => Ok(AlgebraName::Ksle510),
            "ksle510" => Ok(AlgebraName::Ksle510),
            "mb" if args == "3|8" => Ok(AlgebraName::Mb38),
            "mb38" => Ok(AlgebraName::Mb38),
            "kas" | "vas" | "sle_tilde" | "sm_tilde" | "sle~" | "sm~" => {
                Err(Error::OutOfScope(s.to_string()))
            }
            "vle" | "ksle" | "mb" => Err(Error::UnknownAlgebra(format!(
                "{s}: only the principal realizations vle(3|6), ksle(5|10), mb(3|8) are built"
            ))),
            _ => Err(Error::UnknownAlgebra(s.to_string())),
        }
    }

    pub fn display_name(&self) -> String {
        match self {
            AlgebraName::Vect(n, m) => format!("vect({n}|{m})"),
            AlgebraName::Svect(n, m) => format!("svect({n}|{m})"),
            AlgebraName::Hamiltonian(n, m) => format!("h({n}|{m})"),
            AlgebraName::Le(n) => format!("le({n})"),
            AlgebraName::Sle(n) => format!("sle({n})"),
            AlgebraName::Contact(n, m) => format!("k({n}|{m})"),
            AlgebraName::OddContact(n) => format!("m({n})"),
            AlgebraName::SmBeta(n, b) => format!("sm_beta({n};{b})"),
            AlgebraName::Vle36 => "vle(3|6)".into(),
            AlgebraName::Ksle510 => "ksle(5|10)".into(),
            AlgebraName::Mb38 => "mb(3|8)".into(),
        }
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad integer: {s}")))
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let an: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad rational: {s}")))?;
            let bn: i64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad rational: {s}")))?;
            if bn == 0 {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(frac(an, bn))
        }
        None => {
            let an: i64 = s.parse().map_err(|_| Error::Parse(format!("bad rational: {s}")))?;
            Ok(Rat::from_int(an))
        }
    }
}

/// Descriptor of a built algebra.
pub struct AlgebraDescriptor {
    pub name: AlgebraName,
    pub coords: Coords,
    pub superdim: (usize, usize),
    pub structures: Vec<StructureSpec>,
    pub depth: u32,
    /// For sm_beta: the deformation parameter and rank of the family.
    pub deformed_divergence: Option<(Rat, usize)>,
}

/// Build the descriptor and the non-positive part of the algebra.
pub fn build(name: &AlgebraName) -> Result<(AlgebraDescriptor, GradedSpan)> {
    let (coords, structures, deformed): (Coords, Vec<StructureSpec>, Option<(Rat, usize)>) =
        match name {
            AlgebraName::Vect(n, m) => {
                if n + m == 0 {
                    return Err(Error::Invalid("empty coordinate system".into()));
                }
                (systems::vect(*n, *m), vec![], None)
            }
            AlgebraName::Svect(n, m) => {
                (systems::vect(*n, *m), vec![StructureSpec::VolumeForm], None)
            }
            AlgebraName::Hamiltonian(n, m) => {
                if n % 2 != 0 || *n == 0 {
                    return Err(Error::Invalid("h(n|m) needs even n > 0".into()));
                }
                let c = systems::vect(*n, *m);
                (c.clone(), vec![StructureSpec::ExactForms(vec![hamiltonian_form(&c, *n, *m)])], None)
            }
            AlgebraName::Le(n) => {
                let c = systems::periplectic(*n);
                (c.clone(), vec![StructureSpec::ExactForms(vec![periplectic_form(&c, *n)])], None)
            }
            AlgebraName::Sle(n) => {
                let c = systems::periplectic(*n);
                (
                    c.clone(),
                    vec![
                        StructureSpec::ExactForms(vec![periplectic_form(&c, *n)]),
                        StructureSpec::VolumeForm,
                    ],
                    None,
                )
            }
            AlgebraName::Contact(n, m) => {
                if n % 2 == 0 {
                    return Err(Error::Invalid("k(n|m) needs odd n".into()));
                }
                let c = systems::contact(*n, *m);
                (c.clone(), vec![StructureSpec::PfaffSystem(vec![contact_form(&c, *n, *m)])], None)
            }
            AlgebraName::OddContact(n) => {
                let c = systems::odd_contact(*n);
                (c.clone(), vec![StructureSpec::PfaffSystem(vec![odd_contact_form(&c, *n)])], None)
            }
            AlgebraName::SmBeta(n, beta) => {
                let c = systems::odd_contact(*n);
                (
                    c.clone(),
                    vec![StructureSpec::PfaffSystem(vec![odd_contact_form(&c, *n)])],
                    Some((beta.clone(), *n)),
                )
            }
            AlgebraName::Vle36 => {
                let c = systems::vle36();
                (
                    c.clone(),
                    vec![
                        StructureSpec::PfaffSystem(vle36_forms(&c)),
                        StructureSpec::VolumeForm,
                    ],
                    None,
                )
            }
            AlgebraName::Ksle510 => {
                let c = systems::ksle510();
                (
                    c.clone(),
                    vec![
                        StructureSpec::PfaffSystem(ksle510_forms(&c)),
                        StructureSpec::VolumeForm,
                    ],
                    None,
                )
            }
            AlgebraName::Mb38 => {
                let gens = mb38::generators();
                let descriptor = AlgebraDescriptor {
                    name: name.clone(),
                    coords: gens.coords.clone(),
                    superdim: (gens.coords.even_count(), gens.coords.odd_count()),
                    structures: vec![StructureSpec::DualPfaffSystem(gens.dual.clone())],
                    depth: gens.coords.depth(),
                    deformed_divergence: None,
                };
                let span = gens.graded_span()?;
                return Ok((descriptor, span));
            }
        };

    let depth = coords.depth();
    let mut span = GradedSpan::new(&coords);
    if structures.is_empty() {
        // vect(n|m): everything.
        for k in -(depth as i64)..=0 {
            span.set_piece(k, homogeneous_fields(&coords, k))?;
        }
    } else {
        for k in -(depth as i64)..=0 {
            let sols = preserver_solve(&coords, &structures, k)?;
            let mut fields: Vec<Vf> = sols.into_iter().map(|s| s.field).collect();
            if let Some((beta, n)) = &deformed {
                fields = filter_deformed_divergence(&coords, &structures, fields, beta, *n, k)?;
            }
            span.set_piece(k, fields)?;
        }
    }
    let descriptor = AlgebraDescriptor {
        name: name.clone(),
        coords: coords.clone(),
        superdim: (coords.even_count(), coords.odd_count()),
        structures,
        depth,
        deformed_divergence: deformed,
    };
    Ok((descriptor, span))
}

/// The generating function of a contact field: the contraction of the field
/// with the contact form. Injective on the contact algebra, so the deformed
/// divergence condition can be evaluated without the generator map itself.
pub fn contact_generating_function(alpha: &Form, x: &Vf) -> Result<Poly> {
    let contracted = alpha.contract(x)?;
    let coords = alpha.coords().clone();
    let mut out = Poly::zero(&coords);
    for (g, coeff) in contracted.terms() {
        if !g.is_one() {
            return Err(Error::Invalid("contraction of a 1-form is not a function".into()));
        }
        out = out.checked_add(coeff)?;
    }
    Ok(out)
}

fn filter_deformed_divergence(
    coords: &Coords,
    structures: &[StructureSpec],
    fields: Vec<Vf>,
    beta: &Rat,
    n: usize,
    degree: i64,
) -> Result<Vec<Vf>> {
    let alpha = match &structures[0] {
        StructureSpec::PfaffSystem(forms) => &forms[0],
        _ => return Err(Error::Invalid("sm_beta expects a Pfaff structure".into())),
    };
    // The map X -> i_X(alpha) must be injective on each piece.
    let indexer = FieldIndexer::new(coords, degree);
    let mut rows: Vec<SparseVec> = Vec::new();
    let mut eq: BTreeMap<crate::superpoly::Monomial, SparseVec> = BTreeMap::new();
    for (a, x) in fields.iter().enumerate() {
        let f = contact_generating_function(alpha, x)?;
        if f.is_zero() && !x.is_zero() {
            return Err(Error::Invalid(
                "generating-function map is not injective on this piece".into(),
            ));
        }
        let d = div_beta(&f, beta, n)?;
        for (m, c) in d.terms() {
            eq.entry(m.clone()).or_default().push((a, c.clone()));
        }
    }
    rows.extend(eq.into_values());
    for r in rows.iter_mut() {
        r.sort_by_key(|e| e.0);
    }
    let kernel = crate::linalg::kernel_basis(fields.len(), rows);
    let mut out = Vec::new();
    for v in kernel {
        let mut x = Vf::zero(coords);
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                x = x.checked_add(&fields[a].scale(c))?;
            }
        }
        out.push(x);
    }
    let _ = indexer;
    Ok(out)
}

/// Solve `[D^s, x] = sum_t f^s_t D^t` for polynomial multipliers, exactly.
/// Errors when no certificate exists.
pub fn dual_system_certificate(duals: &[Vf], x: &Vf) -> Result<Vec<Vec<Poly>>> {
    let coords = duals[0].coords().clone();
    let k = match x.weighted_degree() {
        WeightedDegree::Homogeneous(k) => k,
        WeightedDegree::AnyDegree => return Ok(vec![vec![Poly::zero(&coords); duals.len()]; duals.len()]),
        WeightedDegree::Inhomogeneous => {
            return Err(Error::InhomogeneousParity(format!("degree of {x}")))
        }
    };
    let monos = monomials_of_degree(&coords, k);
    let n = duals.len();
    let target = FieldIndexer::new(&coords, k - 1);
    let mut certs = Vec::with_capacity(n);
    for d in duals {
        let b = d.bracket(x)?;
        let rhs = target.to_vec(&b)?;
        if monos.is_empty() {
            if rhs.is_empty() {
                certs.push(vec![Poly::zero(&coords); n]);
                continue;
            }
            return Err(Error::CheckFailed(format!(
                "[{d}, {x}] = {b} admits no multiplier of degree {k}"
            )));
        }
        // Unknowns: coefficient of mono m in f^s_t.
        let cols = n * monos.len();
        let mut eq: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (t, e) in duals.iter().enumerate() {
            for (mi, m) in monos.iter().enumerate() {
                let unknown = t * monos.len() + mi;
                let scaled = e.mul_poly(&Poly::monomial(&coords, m.clone(), Rat::from_int(1)));
                for (coord, c) in target.to_vec(&scaled)? {
                    eq.entry(coord).or_default().push((unknown, c));
                }
            }
        }
        let mut rhs_map: BTreeMap<usize, Rat> = rhs.into_iter().collect();
        let mut rows = Vec::new();
        for (coord, mut coeffs) in eq {
            coeffs.sort_by_key(|e| e.0);
            let b = rhs_map.remove(&coord).unwrap_or_else(num_traits::Zero::zero);
            rows.push((coeffs, b));
        }
        for (_, b) in rhs_map {
            rows.push((Vec::new(), b));
        }
        let sol = solve(cols, rows).ok_or_else(|| {
            Error::CheckFailed(format!("[{d}, {x}] is not in the polynomial span of the system"))
        })?;
        let mut row_cert = Vec::with_capacity(n);
        for t in 0..n {
            let mut f = Poly::zero(&coords);
            for (mi, m) in monos.iter().enumerate() {
                let c = &sol[t * monos.len() + mi];
                if !c.is_zero() {
                    f = f.checked_add(&Poly::monomial(&coords, m.clone(), c.clone()))?;
                }
            }
            row_cert.push(f);
        }
        // Substitute back.
        let mut resid = d.bracket(x)?;
        for (t, e) in duals.iter().enumerate() {
            resid = resid.checked_sub(&e.mul_poly(&row_cert[t]))?;
        }
        if !resid.is_zero() {
            return Err(Error::CheckFailed(format!("certificate residual {resid}")));
        }
        certs.push(row_cert);
    }
    Ok(certs)
}

/// Solve `L_x alpha^i = sum_j f^i_j alpha^j` for polynomial multipliers.
pub fn pfaff_certificate(alphas: &[Form], x: &Vf) -> Result<Vec<Vec<Poly>>> {
    let coords = alphas[0].coords().clone();
    let k = match x.weighted_degree() {
        WeightedDegree::Homogeneous(k) => k,
        WeightedDegree::AnyDegree => {
            return Ok(vec![vec![Poly::zero(&coords); alphas.len()]; alphas.len()])
        }
        WeightedDegree::Inhomogeneous => {
            return Err(Error::InhomogeneousParity(format!("degree of {x}")))
        }
    };
    let monos = monomials_of_degree(&coords, k);
    let n = alphas.len();
    let mut certs = Vec::with_capacity(n);
    for alpha in alphas {
        let l = alpha.lie_derivative(x)?;
        // Coordinates: (generator monomial, coefficient monomial).
        let mut index: BTreeMap<(FormMono, crate::superpoly::Monomial), usize> = BTreeMap::new();
        let entries = |omega: &Form, index: &mut BTreeMap<_, usize>| -> Vec<(usize, Rat)> {
            let mut out = Vec::new();
            for (g, coeff) in omega.terms() {
                for (m, c) in coeff.terms() {
                    let next = index.len();
                    let i = *index.entry((g.clone(), m.clone())).or_insert(next);
                    out.push((i, c.clone()));
                }
            }
            out
        };
        let rhs_entries = entries(&l, &mut index);
        if monos.is_empty() {
            if rhs_entries.is_empty() {
                certs.push(vec![Poly::zero(&coords); n]);
                continue;
            }
            return Err(Error::CheckFailed(format!(
                "L_X alpha = {l} admits no multiplier of degree {k}"
            )));
        }
        let cols = n * monos.len();
        let mut eq: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (j, beta) in alphas.iter().enumerate() {
            for (mi, m) in monos.iter().enumerate() {
                let unknown = j * monos.len() + mi;
                let scaled = beta.mul_poly_left(&Poly::monomial(&coords, m.clone(), Rat::from_int(1)));
                for (coord, c) in entries(&scaled, &mut index) {
                    eq.entry(coord).or_default().push((unknown, c));
                }
            }
        }
        let mut rhs_map: BTreeMap<usize, Rat> = rhs_entries.into_iter().collect();
        let mut rows = Vec::new();
        for (coord, mut coeffs) in eq {
            coeffs.sort_by_key(|e| e.0);
            let b = rhs_map.remove(&coord).unwrap_or_else(num_traits::Zero::zero);
            rows.push((coeffs, b));
        }
        for (_, b) in rhs_map {
            rows.push((Vec::new(), b));
        }
        let sol = solve(cols, rows).ok_or_else(|| {
            Error::CheckFailed(format!("L_X {alpha} is not a combination of the system"))
        })?;
        let mut row_cert = Vec::with_capacity(n);
        for j in 0..n {
            let mut f = Poly::zero(&coords);
            for (mi, m) in monos.iter().enumerate() {
                let c = &sol[j * monos.len() + mi];
                if !c.is_zero() {
                    f = f.checked_add(&Poly::monomial(&coords, m.clone(), c.clone()))?;
                }
            }
            row_cert.push(f);
        }
        let mut resid = alpha.lie_derivative(x)?;
        for (j, beta) in alphas.iter().enumerate() {
            resid = resid.checked_sub(&beta.mul_poly_left(&row_cert[j]))?;
        }
        if !resid.is_zero() {
            return Err(Error::CheckFailed(format!("certificate residual {resid}")));
        }
        certs.push(row_cert);
    }
    Ok(certs)
}

// ---- structure forms ------------------------------------------------------

fn hamiltonian_form(c: &Coords, n: usize, m: usize) -> Form {
    let h = n / 2;
    let mut omega = Form::zero(c);
    for i in 1..=h {
        // omega_{i, i+h} = 1 = -omega_{i+h, i}
        let a = Form::dvar(c, i - 1).wedge(&Form::dvar(c, i + h - 1)).unwrap();
        omega = omega.checked_add(&a.scale_int(2)).unwrap();
    }
    for a in 1..=m {
        let d = Form::dvar(c, n + a - 1);
        omega = omega.checked_add(&d.wedge(&d).unwrap()).unwrap();
    }
    omega
}

fn periplectic_form(c: &Coords, n: usize) -> Form {
    let mut omega = Form::zero(c);
    for i in 1..=n {
        let du = Form::dvar(c, i - 1);
        let dth = Form::dvar(c, n + i - 1);
        omega = omega.checked_add(&du.wedge(&dth).unwrap()).unwrap();
    }
    omega
}

fn contact_form(c: &Coords, n: usize, m: usize) -> Form {
    let mut alpha = Form::dvar_named(c, "t").unwrap();
    let nu = n - 1;
    let h = nu / 2;
    for i in 1..=h {
        // omega_{ij} u^i du^j with the standard antisymmetric block.
        let ui = Poly::var_named(c, &format!("u{i}")).unwrap();
        let uj = Poly::var_named(c, &format!("u{}", i + h)).unwrap();
        let dui = Form::dvar_named(c, &format!("u{i}")).unwrap();
        let duj = Form::dvar_named(c, &format!("u{}", i + h)).unwrap();
        alpha = alpha.checked_add(&duj.mul_poly_left(&ui)).unwrap();
        alpha = alpha.checked_sub(&dui.mul_poly_left(&uj)).unwrap();
    }
    for a in 1..=m {
        let th = Poly::var_named(c, &format!("th{a}")).unwrap();
        let dth = Form::dvar_named(c, &format!("th{a}")).unwrap();
        alpha = alpha.checked_add(&dth.mul_poly_left(&th)).unwrap();
    }
    alpha
}

fn odd_contact_form(c: &Coords, n: usize) -> Form {
    let mut alpha = Form::dvar_named(c, "tau").unwrap();
    for i in 1..=n {
        let u = Poly::var_named(c, &format!("u{i}")).unwrap();
        let th = Poly::var_named(c, &format!("th{i}")).unwrap();
        let du = Form::dvar_named(c, &format!("u{i}")).unwrap();
        let dth = Form::dvar_named(c, &format!("th{i}")).unwrap();
        alpha = alpha.checked_add(&dth.mul_poly_left(&u)).unwrap();
        alpha = alpha.checked_add(&du.mul_poly_left(&th)).unwrap();
    }
    alpha
}

fn eps2(a: usize, b: usize) -> i64 {
    match (a, b) {
        (1, 2) => 1,
        (2, 1) => -1,
        _ => 0,
    }
}

fn eps3(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (1, 3, 2) | (3, 2, 1) | (2, 1, 3) => -1,
        _ => 0,
    }
}

fn perm_sign(perm: &[usize]) -> i64 {
    let mut sign = 1i64;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `du^i + eps^{ijk} eps^{ab} th_{ja} d(th_{kb}) = 0`, i = 1..3.
fn vle36_forms(c: &Coords) -> Vec<Form> {
    let mut out = Vec::new();
    for i in 1..=3 {
        let mut alpha = Form::dvar_named(c, &format!("u{i}")).unwrap();
        for j in 1..=3 {
            for k in 1..=3 {
                let s3 = eps3(i, j, k);
                if s3 == 0 {
                    continue;
                }
                for a in 1..=2 {
                    for b in 1..=2 {
                        let s2 = eps2(a, b);
                        if s2 == 0 {
                            continue;
                        }
                        let th = Poly::var_named(c, &format!("th{j}{a}")).unwrap();
                        let dth = Form::dvar_named(c, &format!("th{k}{b}")).unwrap();
                        alpha = alpha
                            .checked_add(&dth.mul_poly_left(&th).scale_int(s3 * s2))
                            .unwrap();
                    }
                }
            }
        }
        out.push(alpha);
    }
    out
}

/// `du^i + (1/4) eps^{ijklm} th_{jk} d(th_{lm}) = 0`, i = 1..5, with
/// `th_{kj} = -th_{jk}`.
fn ksle510_forms(c: &Coords) -> Vec<Form> {
    let quarter: Rat = frac(1, 4);
    let theta = |j: usize, k: usize| -> (String, i64) {
        if j < k {
            (format!("th{j}{k}"), 1)
        } else {
            (format!("th{k}{j}"), -1)
        }
    };
    let mut out = Vec::new();
    for i in 1..=5 {
        let mut alpha = Form::dvar_named(c, &format!("u{i}")).unwrap();
        for j in 1..=5 {
            for k in 1..=5 {
                for l in 1..=5 {
                    for m in 1..=5 {
                        let idx = [i, j, k, l, m];
                        let mut set = idx.to_vec();
                        set.sort();
                        set.dedup();
                        if set.len() != 5 {
                            continue;
                        }
                        let sign = perm_sign(&idx);
                        let (tn, ts) = theta(j, k);
                        let (dn, ds) = theta(l, m);
                        let th = Poly::var_named(c, &tn).unwrap();
                        let dth = Form::dvar_named(c, &dn).unwrap();
                        let term = dth
                            .mul_poly_left(&th)
                            .scale(&(quarter.clone() * Rat::from_int(sign * ts * ds)));
                        alpha = alpha.checked_add(&term).unwrap();
                    }
                }
            }
        }
        out.push(alpha);
    }
    out
}

// ---- verification ---------------------------------------------------------

/// One preservation check: a generator against one structure.
#[derive(Debug, Serialize)]
pub struct PreservationCheck {
    pub generator: String,
    pub structure: String,
    pub passed: bool,
    pub certificate: Option<Vec<Vec<String>>>,
    pub residual: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct PreservationReport {
    pub algebra: String,
    pub checks: Vec<PreservationCheck>,
    pub all_pass: bool,
}

/// Certificates for every generator of the non-positive part against every
/// structure of the algebra.
pub fn verify_preservation(
    desc: &AlgebraDescriptor,
    span: &GradedSpan,
) -> Result<PreservationReport> {
    let gens = named_basis(desc, span);
    let mut checks = Vec::new();
    let mut all_pass = true;
    for (gname, x) in &gens {
        for s in &desc.structures {
            let (passed, certificate, residual) = run_preservation_check(s, x);
            if !passed {
                all_pass = false;
            }
            checks.push(PreservationCheck {
                generator: gname.clone(),
                structure: s.kind().to_string(),
                passed,
                certificate,
                residual,
            });
        }
        if let Some((beta, n)) = &desc.deformed_divergence {
            let alpha = match &desc.structures[0] {
                StructureSpec::PfaffSystem(forms) => &forms[0],
                _ => unreachable!("sm_beta carries a Pfaff structure"),
            };
            let f = contact_generating_function(alpha, x)?;
            let d = div_beta(&f, beta, *n)?;
            let passed = d.is_zero();
            if !passed {
                all_pass = false;
            }
            checks.push(PreservationCheck {
                generator: gname.clone(),
                structure: "deformed-divergence".into(),
                passed,
                certificate: None,
                residual: if passed { None } else { Some(d.to_text()) },
            });
        }
    }
    Ok(PreservationReport { algebra: desc.name.display_name(), checks, all_pass })
}

fn run_preservation_check(
    s: &StructureSpec,
    x: &Vf,
) -> (bool, Option<Vec<Vec<String>>>, Option<String>) {
    match s {
        StructureSpec::VolumeForm => match crate::svf::divergence(x) {
            Ok(d) if d.is_zero() => (true, None, None),
            Ok(d) => (false, None, Some(d.to_text())),
            Err(e) => (false, None, Some(e.to_string())),
        },
        StructureSpec::ExactForms(forms) => {
            for omega in forms {
                match omega.lie_derivative(x) {
                    Ok(l) if l.is_zero() => {}
                    Ok(l) => return (false, None, Some(format!("{l}"))),
                    Err(e) => return (false, None, Some(e.to_string())),
                }
            }
            (true, None, None)
        }
        StructureSpec::PfaffSystem(alphas) => match pfaff_certificate(alphas, x) {
            Ok(cert) => (
                true,
                Some(cert.iter().map(|r| r.iter().map(|f| f.to_text()).collect()).collect()),
                None,
            ),
            Err(e) => (false, None, Some(e.to_string())),
        },
        StructureSpec::DualPfaffSystem(ds) => match dual_system_certificate(ds, x) {
            Ok(cert) => (
                true,
                Some(cert.iter().map(|r| r.iter().map(|f| f.to_text()).collect()).collect()),
                None,
            ),
            Err(e) => (false, None, Some(e.to_string())),
        },
    }
}

/// Named basis generators of a built non-positive part. mb(3|8) uses the
/// explicit 23; everything else gets positional names.
pub fn named_basis(desc: &AlgebraDescriptor, span: &GradedSpan) -> Vec<(String, Vf)> {
    if desc.name == AlgebraName::Mb38 {
        return mb38::generators()
            .named_generators()
            .into_iter()
            .map(|(n, _, x)| (n, x))
            .collect();
    }
    let mut out = Vec::new();
    for k in span.degrees().collect::<Vec<_>>() {
        for (i, x) in span.piece(k).iter().enumerate() {
            out.push((format!("g[{k}][{i}]"), x.clone()));
        }
    }
    out
}

/// Structure-constant report for the grade-zero subalgebra of the two
/// standard-model exceptions.
#[derive(Debug, Serialize)]
pub struct G0Report {
    pub algebra: String,
    pub relations_verified: Vec<String>,
    pub g0_dimension: usize,
    pub decomposition: String,
}

pub fn verify_g0_structure(name: &AlgebraName) -> Result<G0Report> {
    match name {
        AlgebraName::Mb38 => {
            let gens = mb38::generators();
            let relations = gens.check_g0_relations()?;
            Ok(G0Report {
                algebra: name.display_name(),
                relations_verified: relations,
                g0_dimension: 12,
                decomposition: "sl(3) + sl(2) + gl(1)".into(),
            })
        }
        AlgebraName::Vle36 => {
            let (_, span) = build(name)?;
            if span.piece(0).len() != 12 {
                return Err(Error::CheckFailed(format!(
                    "vle(3|6) g_0 dimension {} != 12",
                    span.piece(0).len()
                )));
            }
            let c = systems::vle36();
            let (i_gl, j_gl, z) = vle36_g0_generators(&c);
            // Membership of the structured generators in the computed g_0.
            let (indexer, g0span) = span.span_of_piece(0);
            for row in i_gl.iter().flatten().chain(j_gl.iter().flatten()) {
                if !g0span.contains(&indexer.to_vec(row)?) {
                    return Err(Error::CheckFailed(format!("{row} is not in computed g_0")));
                }
            }
            if !g0span.contains(&indexer.to_vec(&z)?) {
                return Err(Error::CheckFailed("grading operator not in computed g_0".into()));
            }
            let relations = g0_relations_check(&i_gl, &j_gl, &z)?;
            Ok(G0Report {
                algebra: name.display_name(),
                relations_verified: relations,
                g0_dimension: 12,
                decomposition: "sl(3) + sl(2) + gl(1)".into(),
            })
        }
        _ => Err(Error::Invalid(
            "g_0 structure report is defined for mb(3|8) and vle(3|6)".into(),
        )),
    }
}

/// vle(3|6) grade-zero generators built by analogy with the mb(3|8) table.
fn vle36_g0_generators(c: &Coords) -> (Vec<Vec<Vf>>, Vec<Vec<Vf>>, Vf) {
    let theta_idx = |i: usize, a: usize| (i - 1) * 2 + (a - 1);
    let u_idx = |i: usize| 6 + (i - 1);
    let gl3_raw = |k: usize, l: usize| -> Vf {
        let mut x = Vf::partial(c, u_idx(l)).mul_poly(&Poly::var(c, u_idx(k)));
        for a in 1..=2 {
            x = x
                .checked_sub(
                    &Vf::partial(c, theta_idx(k, a)).mul_poly(&Poly::var(c, theta_idx(l, a))),
                )
                .expect("same coords");
        }
        x
    };
    let mut trace3 = Vf::zero(c);
    for i in 1..=3 {
        trace3 = trace3.checked_add(&gl3_raw(i, i)).unwrap();
    }
    let mut i_gl = Vec::new();
    for k in 1..=3 {
        let mut row = Vec::new();
        for l in 1..=3 {
            let mut x = gl3_raw(k, l);
            if k == l {
                x = x.checked_sub(&trace3.scale(&frac(1, 3))).unwrap();
            }
            row.push(x);
        }
        i_gl.push(row);
    }
    let gl2_raw = |cc: usize, dd: usize| -> Vf {
        let mut x = Vf::zero(c);
        for i in 1..=3 {
            x = x
                .checked_sub(
                    &Vf::partial(c, theta_idx(i, cc)).mul_poly(&Poly::var(c, theta_idx(i, dd))),
                )
                .unwrap();
        }
        x
    };
    let mut trace2 = Vf::zero(c);
    for a in 1..=2 {
        trace2 = trace2.checked_add(&gl2_raw(a, a)).unwrap();
    }
    let mut j_gl = Vec::new();
    for cc in 1..=2 {
        let mut row = Vec::new();
        for dd in 1..=2 {
            let mut x = gl2_raw(cc, dd);
            if cc == dd {
                x = x.checked_sub(&trace2.scale(&frac(1, 2))).unwrap();
            }
            row.push(x);
        }
        j_gl.push(row);
    }
    let z = grading_operator(c);
    (i_gl, j_gl, z)
}

/// The sl(3) x sl(2) x gl(1) relation battery shared by mb(3|8) and vle(3|6).
pub fn g0_relations_check(i_gl: &[Vec<Vf>], j_gl: &[Vec<Vf>], z: &Vf) -> Result<Vec<String>> {
    let mut table = Vec::new();
    let delta = |a: usize, b: usize| if a == b { 1i64 } else { 0 };
    let n3 = i_gl.len();
    let n2 = j_gl.len();
    for k in 0..n3 {
        for l in 0..n3 {
            for m in 0..n3 {
                for n in 0..n3 {
                    let lhs = i_gl[k][l].bracket(&i_gl[m][n])?;
                    let rhs = i_gl[k][n]
                        .scale_int(delta(m + 1, l + 1))
                        .checked_sub(&i_gl[m][l].scale_int(delta(k + 1, n + 1)))?;
                    if lhs != rhs {
                        return Err(Error::CheckFailed(format!(
                            "[I^{}_{}, I^{}_{}] deviates from the sl(3) relation",
                            k + 1,
                            l + 1,
                            m + 1,
                            n + 1
                        )));
                    }
                }
            }
        }
    }
    table.push("[I^k_l, I^m_n] = d^m_l I^k_n - d^k_n I^m_l".into());
    for c in 0..n2 {
        for d in 0..n2 {
            for e in 0..n2 {
                for f in 0..n2 {
                    let lhs = j_gl[c][d].bracket(&j_gl[e][f])?;
                    let rhs = j_gl[c][f]
                        .scale_int(delta(e + 1, d + 1))
                        .checked_sub(&j_gl[e][d].scale_int(delta(c + 1, f + 1)))?;
                    if lhs != rhs {
                        return Err(Error::CheckFailed(format!(
                            "[J^{}_{}, J^{}_{}] deviates from the sl(2) relation",
                            c + 1,
                            d + 1,
                            e + 1,
                            f + 1
                        )));
                    }
                }
            }
            for k in 0..n3 {
                for l in 0..n3 {
                    if !i_gl[k][l].bracket(&j_gl[c][d])?.is_zero() {
                        return Err(Error::CheckFailed("[I, J] != 0".into()));
                    }
                }
            }
            if !z.bracket(&j_gl[c][d])?.is_zero() {
                return Err(Error::CheckFailed("[Z, J] != 0".into()));
            }
        }
    }
    table.push("[J^c_d, J^e_f] = d^e_d J^c_f - d^c_f J^e_d".into());
    table.push("[I, J] = 0".into());
    for k in 0..n3 {
        for l in 0..n3 {
            if !z.bracket(&i_gl[k][l])?.is_zero() {
                return Err(Error::CheckFailed("[Z, I] != 0".into()));
            }
        }
    }
    table.push("[Z, g_0] = 0".into());
    Ok(table)
}

/// Consistent iff even pieces are bosonic and odd pieces fermionic.
pub fn consistency_check(span: &GradedSpan) -> bool {
    span.is_consistent()
}

/// Super-Jacobi over all basis multisets {x, y, z} of the span. Returns the
/// number of triples checked; errors on the first nonzero jacobiator.
pub fn jacobi_all_basis_triples(span: &GradedSpan) -> Result<usize> {
    let mut basis: Vec<&Vf> = Vec::new();
    for k in span.degrees().collect::<Vec<_>>() {
        basis.extend(span.piece(k).iter());
    }
    let n = basis.len();
    let mut count = 0usize;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let jac = super_jacobiator(basis[i], basis[j], basis[k])?;
                if !jac.is_zero() {
                    return Err(Error::CheckFailed(format!(
                        "nonzero jacobiator on ({}, {}, {})",
                        basis[i], basis[j], basis[k]
                    )));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

// ---- regradings -----------------------------------------------------------

/// One realization of an exceptional algebra on a superspace.
#[derive(Debug, Clone, Serialize)]
pub struct RegradingEntry {
    pub family: &'static str,
    pub even_dim: usize,
    pub odd_dim: usize,
    pub depth: u32,
    pub tag: Option<&'static str>,
}

/// The fifteen regradings of the five exceptions.
pub fn regrading_table() -> Vec<RegradingEntry> {
    let e = |family, even_dim, odd_dim, depth, tag| RegradingEntry {
        family,
        even_dim,
        odd_dim,
        depth,
        tag,
    };
    vec![
        e("vle", 4, 3, 1, None),
        e("vle", 5, 4, 2, None),
        e("vle", 3, 6, 2, None),
        e("vas", 4, 4, 1, None),
        e("kas", 1, 6, 2, None),
        e("kas", 5, 5, 2, None),
        e("kas", 4, 4, 1, None),
        e("kas", 4, 3, 1, None),
        e("mb", 4, 5, 2, None),
        e("mb", 5, 6, 2, None),
        e("mb", 3, 8, 3, None),
        e("ksle", 9, 6, 2, None),
        e("ksle", 11, 9, 2, None),
        e("ksle", 5, 10, 2, None),
        e("ksle", 11, 9, 3, Some("CK")),
    ]
}

/// Regradings of one family as `(even|odd) -> depth`, tagged entries keyed
/// with their tag.
pub fn regradings_of(family: &str) -> BTreeMap<String, u32> {
    regrading_table()
        .into_iter()
        .filter(|e| e.family == family)
        .map(|e| {
            let key = match e.tag {
                Some(t) => format!("({}|{};{})", e.even_dim, e.odd_dim, t),
                None => format!("({}|{})", e.even_dim, e.odd_dim),
            };
            (key, e.depth)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!(AlgebraName::parse("vect(2|2)").unwrap(), AlgebraName::Vect(2, 2));
        assert_eq!(AlgebraName::parse("svect(3)").unwrap(), AlgebraName::Svect(3, 0));
        assert_eq!(AlgebraName::parse("mb38").unwrap(), AlgebraName::Mb38);
        assert_eq!(AlgebraName::parse("mb(3|8)").unwrap(), AlgebraName::Mb38);
        assert!(matches!(AlgebraName::parse("kas(1|6)"), Err(Error::OutOfScope(_))));
        assert!(matches!(AlgebraName::parse("vas(4|4)"), Err(Error::OutOfScope(_))));
        assert!(AlgebraName::parse("nonsense").is_err());
    }

    #[test]
    fn svect20_g0_is_sl2() {
        let (_, span) = build(&AlgebraName::Svect(2, 0)).unwrap();
        assert_eq!(span.piece(0).len(), 3);
        assert_eq!(span.piece(-1).len(), 2);
        assert_eq!(span.depth(), 1);
    }

    #[test]
    fn regrading_counts() {
        assert_eq!(regrading_table().len(), 15);
        let mb = regradings_of("mb");
        assert_eq!(mb.get("(4|5)"), Some(&2));
        assert_eq!(mb.get("(5|6)"), Some(&2));
        assert_eq!(mb.get("(3|8)"), Some(&3));
        let vle = regradings_of("vle");
        assert_eq!(vle.get("(4|3)"), Some(&1));
        assert_eq!(vle.get("(5|4)"), Some(&2));
        assert_eq!(vle.get("(3|6)"), Some(&2));
        let ksle = regradings_of("ksle");
        assert_eq!(ksle.len(), 4);
    }

    #[test]
    fn contact_k12_build() {
        let (desc, span) = build(&AlgebraName::Contact(1, 2)).unwrap();
        assert_eq!(desc.depth, 2);
        assert_eq!(span.piece(-2).len(), 1);
        assert_eq!(span.piece(-1).len(), 2);
        // g_0 of k(1|2): t d_t, th_a d_th_b block and rotations -> dim 5.
        assert!(span.verify_grading().is_ok());
        assert!(span.verify_closure().is_ok());
        let report = verify_preservation(&desc, &span).unwrap();
        assert!(report.all_pass);
    }
}
