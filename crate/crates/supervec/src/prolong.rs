//! Weisfeiler grading bookkeeping and Cartan prolongation.
//!
//! The prolongation of a non-positive part is computed two independent
//! ways: by the recursive definition (`g_k` is the space of degree-k fields
//! bracketing `g_{-1}` into `g_{k-1}`) and as the full subalgebra
//! preserving the defining structures (volume forms, Pfaff systems, dual
//! Pfaff systems), with explicit multiplier certificates. Both paths reduce
//! to exact kernel computations; `cross_check` asserts the resulting spans
//! agree degree by degree.

use crate::coords::{Coords, Parity};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, LinearSpan, SparseVec};
use crate::scalar::{Rat, Scalar};
use crate::superpoly::{monomials_of_degree, Monomial, SuperPolynomial, WeightedDegree};
use crate::svf::form::FormMono;
use crate::svf::{divergence, grading_operator, SuperForm, SuperVectorField};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

type Poly = SuperPolynomial<Rat>;
type Vf = SuperVectorField<Rat>;
type Form = SuperForm<Rat>;

/// Deterministic basis of all monomial vector fields of one weighted degree:
/// directions in declaration order, coefficient monomials in graded-lex
/// order. Provides the field <-> coordinate-vector dictionary used by every
/// exact solve in this module.
pub struct FieldIndexer {
    coords: Coords,
    degree: i64,
    items: Vec<(usize, Monomial)>,
    index: BTreeMap<(usize, Monomial), usize>,
}

impl FieldIndexer {
    pub fn new(coords: &Coords, degree: i64) -> FieldIndexer {
        let mut items = Vec::new();
        for v in 0..coords.len() {
            let w = degree + coords.weight(v) as i64;
            for m in monomials_of_degree(coords, w) {
                items.push((v, m));
            }
        }
        let index = items.iter().enumerate().map(|(i, it)| (it.clone(), i)).collect();
        FieldIndexer { coords: coords.clone(), degree, items, index }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Basis field for coordinate `i`.
    pub fn field(&self, i: usize) -> Vf {
        let (v, m) = &self.items[i];
        Vf::term(Poly::monomial(&self.coords, m.clone(), Rat::from_int(1)), *v)
    }

    pub fn basis_fields(&self) -> Vec<Vf> {
        (0..self.len()).map(|i| self.field(i)).collect()
    }

    pub fn to_vec(&self, f: &Vf) -> Result<SparseVec> {
        let mut out = Vec::new();
        for (v, coeff) in f.components() {
            for (m, c) in coeff.terms() {
                let i = self.index.get(&(v, m.clone())).ok_or_else(|| {
                    Error::Invalid(format!(
                        "field term of degree {} does not live in degree {}",
                        m.weighted_degree() - self.coords.weight(v) as i64,
                        self.degree
                    ))
                })?;
                out.push((*i, c.clone()));
            }
        }
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    pub fn from_sparse(&self, v: &SparseVec) -> Vf {
        let mut f = Vf::zero(&self.coords);
        for (i, c) in v {
            let (dir, m) = &self.items[*i];
            f.add_component(*dir, Poly::monomial(&self.coords, m.clone(), c.clone()));
        }
        f
    }

    pub fn from_dense(&self, v: &[Rat]) -> Vf {
        let mut f = Vf::zero(&self.coords);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (dir, m) = &self.items[i];
                f.add_component(*dir, Poly::monomial(&self.coords, m.clone(), c.clone()));
            }
        }
        f
    }
}

/// Basis of all monomial vector fields of weighted degree `k`.
pub fn homogeneous_fields(coords: &Coords, k: i64) -> Vec<Vf> {
    FieldIndexer::new(coords, k).basis_fields()
}

/// Lazy coordinate index over (form generator monomial, coefficient
/// monomial) pairs; complete for any fixed finite system of form equations.
struct FormIndexer {
    index: BTreeMap<(FormMono, Monomial), usize>,
}

impl FormIndexer {
    fn new() -> FormIndexer {
        FormIndexer { index: BTreeMap::new() }
    }

    fn to_entries(&mut self, omega: &Form) -> Vec<(usize, Rat)> {
        let mut out = Vec::new();
        for (g, coeff) in omega.terms() {
            for (m, c) in coeff.terms() {
                let next = self.index.len();
                let i = *self.index.entry((g.clone(), m.clone())).or_insert(next);
                out.push((i, c.clone()));
            }
        }
        out
    }
}

/// A structure preserved by an algebra of vector fields.
#[derive(Debug, Clone)]
pub enum StructureSpec {
    /// The coordinate volume form; preserved iff the signed divergence vanishes.
    VolumeForm,
    /// Differential forms preserved exactly: `L_X omega = 0`.
    ExactForms(Vec<Form>),
    /// A Pfaff system `alpha^i = 0`: preserved when `L_X alpha^i` is a
    /// polynomial combination of the `alpha^j`.
    PfaffSystem(Vec<Form>),
    /// A dual Pfaff system: fields `D` with `[D, X]` in the polynomial span
    /// of the `D`'s.
    DualPfaffSystem(Vec<Vf>),
}

impl StructureSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StructureSpec::VolumeForm => "volume-form",
            StructureSpec::ExactForms(_) => "exact-form",
            StructureSpec::PfaffSystem(_) => "pfaff-system",
            StructureSpec::DualPfaffSystem(_) => "dual-pfaff-system",
        }
    }
}

/// Multiplier certificate attached to a preserver solution.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// Nothing to record: the defining identity has no multipliers.
    Exact,
    /// `L_X alpha^i = sum_j f[i][j] alpha^j` (or the dual-system analogue).
    Multipliers(Vec<Vec<Poly>>),
}

/// Verify a certificate by substituting it back into the defining identity.
pub fn verify_certificate(x: &Vf, s: &StructureSpec, cert: &Certificate) -> Result<()> {
    match (s, cert) {
        (StructureSpec::VolumeForm, Certificate::Exact) => {
            let d = divergence(x)?;
            if d.is_zero() {
                Ok(())
            } else {
                Err(Error::CheckFailed(format!("div {x} = {d}")))
            }
        }
        (StructureSpec::ExactForms(forms), Certificate::Exact) => {
            for omega in forms {
                let l = omega.lie_derivative(x)?;
                if !l.is_zero() {
                    return Err(Error::CheckFailed(format!("L_X {omega} = {l}")));
                }
            }
            Ok(())
        }
        (StructureSpec::PfaffSystem(alphas), Certificate::Multipliers(f)) => {
            for (i, alpha) in alphas.iter().enumerate() {
                let mut resid = alpha.lie_derivative(x)?;
                for (j, beta) in alphas.iter().enumerate() {
                    resid = resid.checked_sub(&beta.mul_poly_left(&f[i][j]))?;
                }
                if !resid.is_zero() {
                    return Err(Error::CheckFailed(format!(
                        "Pfaff residual for alpha^{i}: {resid}"
                    )));
                }
            }
            Ok(())
        }
        (StructureSpec::DualPfaffSystem(ds), Certificate::Multipliers(f)) => {
            for (i, d) in ds.iter().enumerate() {
                let mut resid = d.bracket(x)?;
                for (j, e) in ds.iter().enumerate() {
                    resid = resid.checked_sub(&e.mul_poly(&f[i][j]))?;
                }
                if !resid.is_zero() {
                    return Err(Error::CheckFailed(format!(
                        "dual-system residual for D^{i}: {resid}"
                    )));
                }
            }
            Ok(())
        }
        _ => Err(Error::Invalid("certificate does not match structure kind".into())),
    }
}

fn structure_degree(s: &StructureSpec) -> Result<Option<i64>> {
    // Common weighted degree of the defining data, needed to slice the
    // multiplier unknowns. None for volume/exact structures.
    match s {
        StructureSpec::VolumeForm | StructureSpec::ExactForms(_) => Ok(None),
        StructureSpec::PfaffSystem(forms) => {
            let mut deg = None;
            for a in forms {
                for (g, coeff) in a.terms() {
                    for (m, _) in coeff.terms() {
                        let d = g.weighted_degree(a.coords()) + m.weighted_degree();
                        match deg {
                            None => deg = Some(d),
                            Some(e) if e == d => {}
                            _ => {
                                return Err(Error::Invalid(
                                    "Pfaff system is not weighted-homogeneous".into(),
                                ))
                            }
                        }
                    }
                }
            }
            Ok(deg)
        }
        StructureSpec::DualPfaffSystem(ds) => {
            let mut deg = None;
            for d in ds {
                match d.weighted_degree() {
                    WeightedDegree::Homogeneous(k) => match deg {
                        None => deg = Some(k),
                        Some(e) if e == k => {}
                        _ => {
                            return Err(Error::Invalid(
                                "dual system is not weighted-homogeneous".into(),
                            ))
                        }
                    },
                    _ => {
                        return Err(Error::Invalid(
                            "dual system field is not weighted-homogeneous".into(),
                        ))
                    }
                }
            }
            Ok(deg)
        }
    }
}

/// A preserver solution: the field and one certificate per structure.
pub struct PreserverSolution {
    pub field: Vf,
    pub certificates: Vec<Certificate>,
}

/// Basis of degree-`k` fields preserving all the given structures, with
/// multiplier certificates. Solved exactly: the field coefficients and all
/// multiplier coefficients are unknowns of one homogeneous linear system.
pub fn preserver_solve(
    coords: &Coords,
    structures: &[StructureSpec],
    k: i64,
) -> Result<Vec<PreserverSolution>> {
    let fields = FieldIndexer::new(coords, k);
    let nf = fields.len();
    if nf == 0 {
        return Ok(Vec::new());
    }

    // Multiplier unknown layout per structure: for each (i, j) pair a block
    // of monomials of the right weighted degree.
    struct MultBlock {
        pairs: usize,
        monos: Vec<Monomial>,
        offset: usize,
    }
    let mut blocks: Vec<Option<MultBlock>> = Vec::new();
    let mut total = nf;
    for s in structures.iter() {
        match s {
            StructureSpec::PfaffSystem(items) => {
                let n = items.len();
                let deg = k; // equal structure degrees make f homogeneous of degree k
                structure_degree(s)?;
                let monos = monomials_of_degree(coords, deg);
                let b = MultBlock { pairs: n * n, monos, offset: total };
                total += b.pairs * b.monos.len();
                blocks.push(Some(b));
            }
            StructureSpec::DualPfaffSystem(items) => {
                let n = items.len();
                structure_degree(s)?;
                let monos = monomials_of_degree(coords, k);
                let b = MultBlock { pairs: n * n, monos, offset: total };
                total += b.pairs * b.monos.len();
                blocks.push(Some(b));
            }
            _ => blocks.push(None),
        }
    }

    // Assemble equations: for each structure, the defining identity expanded
    // over the canonical coordinates of its target space.
    let mut rows: Vec<SparseVec> = Vec::new();
    for (si, s) in structures.iter().enumerate() {
        match s {
            StructureSpec::VolumeForm => {
                // div(sum c_a B_a) = 0: one equation per coefficient monomial.
                let mut eq: BTreeMap<Monomial, SparseVec> = BTreeMap::new();
                for a in 0..nf {
                    let d = divergence(&fields.field(a))?;
                    for (m, c) in d.terms() {
                        eq.entry(m.clone()).or_default().push((a, c.clone()));
                    }
                }
                rows.extend(eq.into_values());
            }
            StructureSpec::ExactForms(forms) => {
                for omega in forms {
                    let mut fi = FormIndexer::new();
                    let mut eq: BTreeMap<usize, SparseVec> = BTreeMap::new();
                    for a in 0..nf {
                        let l = omega.lie_derivative(&fields.field(a))?;
                        for (coord, c) in fi.to_entries(&l) {
                            eq.entry(coord).or_default().push((a, c));
                        }
                    }
                    rows.extend(eq.into_values());
                }
            }
            StructureSpec::PfaffSystem(alphas) => {
                let block = blocks[si].as_ref().expect("block exists");
                let n = alphas.len();
                let nm = block.monos.len();
                for i in 0..n {
                    let mut fi = FormIndexer::new();
                    let mut eq: BTreeMap<usize, SparseVec> = BTreeMap::new();
                    for a in 0..nf {
                        let l = alphas[i].lie_derivative(&fields.field(a))?;
                        for (coord, c) in fi.to_entries(&l) {
                            eq.entry(coord).or_default().push((a, c));
                        }
                    }
                    // minus f[i][j] * alpha^j
                    for j in 0..n {
                        for (mi, m) in block.monos.iter().enumerate() {
                            let unknown = block.offset + (i * n + j) * nm + mi;
                            let scaled = alphas[j]
                                .mul_poly_left(&Poly::monomial(coords, m.clone(), Rat::from_int(1)));
                            for (coord, c) in fi.to_entries(&scaled) {
                                eq.entry(coord).or_default().push((unknown, -c));
                            }
                        }
                    }
                    rows.extend(eq.into_values());
                }
            }
            StructureSpec::DualPfaffSystem(ds) => {
                let block = blocks[si].as_ref().expect("block exists");
                let n = ds.len();
                let nm = block.monos.len();
                let target = FieldIndexer::new(coords, structure_degree(s)?.unwrap_or(-1) + k);
                for i in 0..n {
                    let mut eq: BTreeMap<usize, SparseVec> = BTreeMap::new();
                    for a in 0..nf {
                        let br = ds[i].bracket(&fields.field(a))?;
                        for (coord, c) in target.to_vec(&br)? {
                            eq.entry(coord).or_default().push((a, c));
                        }
                    }
                    for j in 0..n {
                        for (mi, m) in block.monos.iter().enumerate() {
                            let unknown = block.offset + (i * n + j) * nm + mi;
                            let scaled =
                                ds[j].mul_poly(&Poly::monomial(coords, m.clone(), Rat::from_int(1)));
                            for (coord, c) in target.to_vec(&scaled)? {
                                eq.entry(coord).or_default().push((unknown, -c));
                            }
                        }
                    }
                    rows.extend(eq.into_values());
                }
            }
        }
    }
    for r in rows.iter_mut() {
        r.sort_by_key(|e| e.0);
    }

    let kernel = kernel_basis(total, rows);
    // Project onto the field part and canonicalize; carry multipliers along.
    let mut solutions = Vec::new();
    let field_span = LinearSpan::from_rows(
        nf,
        kernel
            .iter()
            .map(|v| {
                v.iter()
                    .take(nf)
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.clone()))
                    .collect()
            })
            .collect(),
    );
    // For each canonical basis field, re-solve its multipliers by expressing
    // it in terms of the kernel vectors.
    let kspan = LinearSpan::from_rows(
        total,
        kernel
            .iter()
            .map(|v| {
                v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
            })
            .collect(),
    );
    for row in field_span.basis() {
        // Find the full unknown vector whose field part equals `row`: the
        // residual of the zero-padded row against the kernel span has zero
        // field part (kernel rows pivoted in the multiplier block carry no
        // field coordinates), so `row - residual` lies in the kernel and
        // its multiplier block certifies the field.
        let (resid, _) = kspan.reduce(row);
        let mut full: BTreeMap<usize, Rat> = row.iter().cloned().collect();
        for (c, v) in &resid {
            let cur = full.remove(c).unwrap_or_else(Rat::zero);
            let nv = cur - v.clone();
            if !nv.is_zero() {
                full.insert(*c, nv);
            }
        }
        let field = fields.from_sparse(
            &full
                .iter()
                .filter(|(c, _)| **c < nf)
                .map(|(c, v)| (*c, v.clone()))
                .collect::<Vec<_>>(),
        );
        let mut certificates = Vec::new();
        for (si, s) in structures.iter().enumerate() {
            let n = match s {
                StructureSpec::VolumeForm | StructureSpec::ExactForms(_) => {
                    certificates.push(Certificate::Exact);
                    continue;
                }
                StructureSpec::PfaffSystem(it) => it.len(),
                StructureSpec::DualPfaffSystem(it) => it.len(),
            };
            let block = blocks[si].as_ref().expect("block exists");
            let nm = block.monos.len();
            let mut f = vec![vec![Poly::zero(coords); n]; n];
            for i in 0..n {
                for j in 0..n {
                    for (mi, m) in block.monos.iter().enumerate() {
                        let unknown = block.offset + (i * n + j) * nm + mi;
                        if let Some(c) = full.get(&unknown) {
                            f[i][j] =
                                f[i][j].checked_add(&Poly::monomial(coords, m.clone(), c.clone()))?;
                        }
                    }
                }
            }
            certificates.push(Certificate::Multipliers(f));
        }
        let sol = PreserverSolution { field, certificates };
        for (s, c) in structures.iter().zip(&sol.certificates) {
            verify_certificate(&sol.field, s, c)?;
        }
        solutions.push(sol);
    }
    Ok(solutions)
}

/// A basis of vector fields organized by Weisfeiler degree.
#[derive(Debug, Clone)]
pub struct GradedSpan {
    coords: Coords,
    pieces: BTreeMap<i64, Vec<Vf>>,
}

impl GradedSpan {
    pub fn new(coords: &Coords) -> GradedSpan {
        GradedSpan { coords: coords.clone(), pieces: BTreeMap::new() }
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Install a canonicalized basis for degree `k` (RREF of the given span).
    pub fn set_piece(&mut self, k: i64, fields: Vec<Vf>) -> Result<()> {
        let indexer = FieldIndexer::new(&self.coords, k);
        let rows = fields.iter().map(|f| indexer.to_vec(f)).collect::<Result<Vec<_>>>()?;
        let span = LinearSpan::from_rows(indexer.len(), rows);
        let basis = span.basis().iter().map(|r| indexer.from_sparse(r)).collect();
        self.pieces.insert(k, basis);
        Ok(())
    }

    pub fn piece(&self, k: i64) -> &[Vf] {
        self.pieces.get(&k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.pieces.keys().cloned()
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(k, v)| (*k, v.len())).collect()
    }

    pub fn dim_total(&self) -> usize {
        self.pieces.values().map(|v| v.len()).sum()
    }

    /// Depth = minus the most negative occupied degree.
    pub fn depth(&self) -> u32 {
        self.pieces
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, _)| *k)
            .min()
            .map(|k| (-k).max(0) as u32)
            .unwrap_or(0)
    }

    pub fn span_of_piece(&self, k: i64) -> (FieldIndexer, LinearSpan) {
        let indexer = FieldIndexer::new(&self.coords, k);
        let rows = self
            .piece(k)
            .iter()
            .map(|f| indexer.to_vec(f).expect("piece is homogeneous"))
            .collect();
        let span = LinearSpan::from_rows(indexer.len(), rows);
        (indexer, span)
    }

    /// Every basis element homogeneous of its stated degree, with `[Z, X] = k X`.
    pub fn verify_grading(&self) -> Result<()> {
        let z: Vf = grading_operator(&self.coords);
        for (k, fields) in &self.pieces {
            for f in fields {
                match f.weighted_degree() {
                    WeightedDegree::Homogeneous(d) if d == *k => {}
                    WeightedDegree::AnyDegree => {}
                    other => {
                        return Err(Error::NotClosed(format!(
                            "element {f} of stated degree {k} has degree {other:?}"
                        )))
                    }
                }
                if f.parity().homogeneous().is_none() {
                    return Err(Error::InhomogeneousParity(format!("{f}")));
                }
                let zb = z.bracket(f)?;
                if zb != f.scale_int(*k) {
                    return Err(Error::NotClosed(format!("[Z, {f}] != {k}*{f}")));
                }
            }
        }
        Ok(())
    }

    /// Closure `[g_i, g_j] ⊆ g_{i+j}` over all pairs whose target degree is
    /// inside the computed range (below the depth the bracket must vanish).
    pub fn verify_closure(&self) -> Result<()> {
        let degrees: Vec<i64> = self.pieces.keys().cloned().collect();
        let max = *degrees.last().unwrap_or(&0);
        let min = *degrees.first().unwrap_or(&0);
        let mut spans: BTreeMap<i64, (FieldIndexer, LinearSpan)> = BTreeMap::new();
        for &k in &degrees {
            spans.insert(k, self.span_of_piece(k));
        }
        for &i in &degrees {
            for &j in &degrees {
                if j < i {
                    continue;
                }
                let t = i + j;
                if t > max {
                    continue;
                }
                for x in self.piece(i) {
                    for y in self.piece(j) {
                        let b = x.bracket(y)?;
                        if b.is_zero() {
                            continue;
                        }
                        if t < min {
                            return Err(Error::NotClosed(format!(
                                "[{x}, {y}] = {b} below depth"
                            )));
                        }
                        let (indexer, span) = &spans[&t];
                        let v = indexer.to_vec(&b)?;
                        if !span.contains(&v) {
                            return Err(Error::NotClosed(format!(
                                "[{x}, {y}] = {b} not in g_{t}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Consistent iff even-degree pieces are purely bosonic and odd-degree
    /// pieces purely fermionic.
    pub fn is_consistent(&self) -> bool {
        self.pieces.iter().all(|(k, fields)| {
            fields.iter().all(|f| match f.parity().homogeneous() {
                Some(p) => p == Parity::of_degree(*k),
                None => false,
            })
        })
    }
}

/// Method tag for a prolongation result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Recursion,
    Preserver,
}

pub struct ProlongResult {
    pub span: GradedSpan,
    pub dims: BTreeMap<i64, usize>,
    pub method: Method,
}

/// Cartan prolongation by the recursive definition. The non-positive input
/// is verified first: stated degrees, parities, and closure.
pub fn prolong_recursive(g_neg: &GradedSpan, g0: &[Vf], kmax: i64) -> Result<ProlongResult> {
    let coords = g_neg.coords().clone();
    let mut span = g_neg.clone();
    span.set_piece(0, g0.to_vec())?;
    span.verify_grading()?;
    span.verify_closure()?;

    for k in 1..=kmax {
        let unknowns = FieldIndexer::new(&coords, k);
        let (low_indexer, low_span) = span.span_of_piece(k - 1);
        let mut rows: Vec<SparseVec> = Vec::new();
        for y in span.piece(-1) {
            let mut eq: BTreeMap<usize, SparseVec> = BTreeMap::new();
            for a in 0..unknowns.len() {
                let b = unknowns.field(a).bracket(y)?;
                let v = low_indexer.to_vec(&b)?;
                let (resid, _) = low_span.reduce(&v);
                for (coord, c) in resid {
                    eq.entry(coord).or_default().push((a, c));
                }
            }
            rows.extend(eq.into_values());
        }
        for r in rows.iter_mut() {
            r.sort_by_key(|e| e.0);
        }
        let kernel = kernel_basis(unknowns.len(), rows);
        let fields: Vec<Vf> = kernel.iter().map(|v| unknowns.from_dense(v)).collect();
        span.set_piece(k, fields)?;
    }
    let dims = span.dims();
    Ok(ProlongResult { span, dims, method: Method::Recursion })
}

/// Degree-0 normalizer of `g_{-1}`: fields of degree 0 with `[X, g_{-1}] ⊆ g_{-1}`.
pub fn normalizer0(g_neg: &GradedSpan) -> Result<Vec<Vf>> {
    let coords = g_neg.coords().clone();
    let unknowns = FieldIndexer::new(&coords, 0);
    let (low_indexer, low_span) = g_neg.span_of_piece(-1);
    let mut rows: Vec<SparseVec> = Vec::new();
    for y in g_neg.piece(-1) {
        let mut eq: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for a in 0..unknowns.len() {
            let b = unknowns.field(a).bracket(y)?;
            let v = low_indexer.to_vec(&b)?;
            let (resid, _) = low_span.reduce(&v);
            for (coord, c) in resid {
                eq.entry(coord).or_default().push((a, c));
            }
        }
        rows.extend(eq.into_values());
    }
    for r in rows.iter_mut() {
        r.sort_by_key(|e| e.0);
    }
    let kernel = kernel_basis(unknowns.len(), rows);
    Ok(kernel.iter().map(|v| unknowns.from_dense(v)).collect())
}

/// Prolongation as the structure preserver, degree by degree from `-depth`
/// to `kmax`.
pub fn prolong_preserver(
    coords: &Coords,
    structures: &[StructureSpec],
    kmax: i64,
) -> Result<ProlongResult> {
    let depth = coords.depth() as i64;
    let mut span = GradedSpan::new(coords);
    for k in -depth..=kmax {
        let sols = preserver_solve(coords, structures, k)?;
        span.set_piece(k, sols.into_iter().map(|s| s.field).collect())?;
    }
    let dims = span.dims();
    Ok(ProlongResult { span, dims, method: Method::Preserver })
}

/// Outcome of comparing two prolongation results degree by degree.
#[derive(Debug, Serialize)]
pub struct CrossCheckReport {
    pub equal: bool,
    pub dims_a: BTreeMap<i64, usize>,
    pub dims_b: BTreeMap<i64, usize>,
    pub mismatched_degrees: Vec<i64>,
}

/// Assert identical spans degree by degree (mutual membership via the
/// canonical reduced bases).
pub fn cross_check(a: &ProlongResult, b: &ProlongResult) -> CrossCheckReport {
    let mut degrees: Vec<i64> = a.span.degrees().collect();
    for d in b.span.degrees() {
        if !degrees.contains(&d) {
            degrees.push(d);
        }
    }
    degrees.sort();
    let mut mismatched = Vec::new();
    for &k in &degrees {
        let (_, sa) = a.span.span_of_piece(k);
        let (_, sb) = b.span.span_of_piece(k);
        if sa.basis() != sb.basis() {
            mismatched.push(k);
        }
    }
    CrossCheckReport {
        equal: mismatched.is_empty(),
        dims_a: a.dims.clone(),
        dims_b: b.dims.clone(),
        mismatched_degrees: mismatched,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::systems;

    fn binom(n: i64, k: i64) -> usize {
        if k < 0 || k > n {
            return 0;
        }
        let mut r = 1i64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r as usize
    }

    #[test]
    fn homogeneous_field_counts_match_enumerative_oracle() {
        // dim g_k of vect(n) = n * C(n+k, n-1)
        for n in 1..=3usize {
            let c = systems::vect(n, 0);
            for k in -1..=3i64 {
                let got = homogeneous_fields(&c, k).len();
                let expect = n * binom(n as i64 + k, n as i64 - 1);
                assert_eq!(got, expect, "vect({n}) at degree {k}");
            }
        }
    }

    #[test]
    fn mb38_homogeneous_fields_at_depth() {
        let c = systems::mb38();
        let fields = homogeneous_fields(&c, -3);
        assert_eq!(fields.len(), 2); // the two weight-3 derivatives
    }

    #[test]
    fn full_prolong_of_gl_is_vect() {
        // (translations, gl(2))_* at k=1 has dim 6: all quadratic fields.
        let c = systems::vect(2, 0);
        let mut g_neg = GradedSpan::new(&c);
        g_neg.set_piece(-1, homogeneous_fields(&c, -1)).unwrap();
        let g0 = homogeneous_fields(&c, 0); // gl(2)
        let r = prolong_recursive(&g_neg, &g0, 1).unwrap();
        assert_eq!(r.dims[&1], 6);
    }

    #[test]
    fn prolong_of_sl2_is_divergence_free_quadratics() {
        let c = systems::vect(2, 0);
        let mut g_neg = GradedSpan::new(&c);
        g_neg.set_piece(-1, homogeneous_fields(&c, -1)).unwrap();
        // sl(2): divergence-free degree-0 fields.
        let g0: Vec<Vf> = preserver_solve(&c, &[StructureSpec::VolumeForm], 0)
            .unwrap()
            .into_iter()
            .map(|s| s.field)
            .collect();
        assert_eq!(g0.len(), 3);
        let r = prolong_recursive(&g_neg, &g0, 1).unwrap();
        assert_eq!(r.dims[&1], 4); // 6 quadratic fields minus 2 trace conditions
    }

    #[test]
    fn svect_cross_check() {
        let c = systems::vect(3, 0);
        let structures = [StructureSpec::VolumeForm];
        let pres = prolong_preserver(&c, &structures, 2).unwrap();
        let mut g_neg = GradedSpan::new(&c);
        g_neg.set_piece(-1, pres.span.piece(-1).to_vec()).unwrap();
        let rec = prolong_recursive(&g_neg, pres.span.piece(0), 2).unwrap();
        let report = cross_check(&rec, &pres);
        assert!(report.equal, "mismatch at {:?}", report.mismatched_degrees);
        assert_eq!(rec.dims[&0], 8); // sl(3)
    }
}
