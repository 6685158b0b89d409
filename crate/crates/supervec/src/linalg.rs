//! Exact sparse linear algebra over the rationals.
//!
//! Row reduction is fraction-free: rows are scaled to primitive integer
//! vectors and eliminated by cross-multiplication, so no rational
//! arithmetic happens until the final leading-one normalization. Pivoting
//! is deterministic (leftmost column, first row), and since the reduced
//! row echelon form of a row space is unique, every basis this module
//! returns is bit-reproducible.

use crate::scalar::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse vector: (column, value) pairs sorted by column, values nonzero.
pub type SparseVec = Vec<(usize, Rat)>;

type IntRow = Vec<(usize, BigInt)>;

fn to_primitive_int_row(row: &SparseVec) -> IntRow {
    if row.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow =
        row.iter().map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))).collect();
    out.sort_by_key(|(c, _)| *c);
    out.retain(|(_, v)| !v.is_zero());
    reduce_primitive(&mut out);
    out
}

fn reduce_primitive(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    if row[0].1.is_negative() {
        for (_, v) in row.iter_mut() {
            *v = -v.clone();
        }
    }
}

/// `a*row1 - b*row2`, merged sparsely.
fn combine(a: &BigInt, row1: &IntRow, b: &BigInt, row2: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(row1.len() + row2.len());
    let (mut i, mut j) = (0, 0);
    while i < row1.len() || j < row2.len() {
        let c1 = row1.get(i).map(|e| e.0);
        let c2 = row2.get(j).map(|e| e.0);
        match (c1, c2) {
            (Some(x), Some(y)) if x == y => {
                let v = a * &row1[i].1 - b * &row2[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, a * &row1[i].1));
                i += 1;
            }
            (Some(_), Some(y)) => {
                out.push((y, -(b * &row2[j].1)));
                j += 1;
            }
            (Some(x), None) => {
                out.push((x, a * &row1[i].1));
                i += 1;
            }
            (None, Some(y)) => {
                out.push((y, -(b * &row2[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// The row space of a sparse rational matrix, held in reduced row echelon
/// form with unit pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSpan {
    cols: usize,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl LinearSpan {
    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> LinearSpan {
        let mut work: Vec<IntRow> = rows
            .iter()
            .map(to_primitive_int_row)
            .filter(|r| !r.is_empty())
            .collect();
        let mut echelon: Vec<IntRow> = Vec::new();
        while !work.is_empty() {
            // Deterministic pivot: smallest leading column, first such row.
            let mut best = 0;
            for (i, r) in work.iter().enumerate() {
                if r[0].0 < work[best][0].0 {
                    best = i;
                }
            }
            let pivot = work.remove(best);
            let (pc, pv) = (pivot[0].0, pivot[0].1.clone());
            for r in work.iter_mut() {
                if let Some(v) = entry(r, pc) {
                    let v = v.clone();
                    *r = combine(&pv, r, &v, &pivot);
                    reduce_primitive(r);
                }
            }
            work.retain(|r| !r.is_empty());
            echelon.push(pivot);
        }
        echelon.sort_by_key(|r| r[0].0);
        // Back-substitution to reduced form.
        for i in (0..echelon.len()).rev() {
            let pivot = echelon[i].clone();
            let (pc, pv) = (pivot[0].0, pivot[0].1.clone());
            for j in 0..i {
                if let Some(v) = entry(&echelon[j], pc) {
                    let v = v.clone();
                    echelon[j] = combine(&pv, &echelon[j], &v, &pivot);
                    reduce_primitive(&mut echelon[j]);
                }
            }
        }
        let mut basis = Vec::with_capacity(echelon.len());
        let mut pivots = Vec::with_capacity(echelon.len());
        for r in &echelon {
            let lead = Rat::from(r[0].1.clone());
            pivots.push(r[0].0);
            basis.push(
                r.iter().map(|(c, v)| (*c, Rat::from(v.clone()) / lead.clone())).collect(),
            );
        }
        LinearSpan { cols, basis, pivots }
    }

    pub fn empty(cols: usize) -> LinearSpan {
        LinearSpan { cols, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis rows (unit leading entries, reduced).
    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after reduction by the basis; zero iff `v` is in the
    /// span. Also returns the coefficients of the reduction.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, Vec<Rat>) {
        let mut dense: std::collections::BTreeMap<usize, Rat> =
            v.iter().cloned().collect();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = dense.get(&p).cloned().unwrap_or_else(Rat::zero);
            if !c.is_zero() {
                for (col, val) in row {
                    let cur = dense.remove(col).unwrap_or_else(Rat::zero);
                    let nv = cur - &c * val;
                    if !nv.is_zero() {
                        dense.insert(*col, nv);
                    }
                }
            }
            coeffs.push(c);
        }
        (dense.into_iter().collect(), coeffs)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    pub fn contains_span(&self, other: &LinearSpan) -> bool {
        other.basis.iter().all(|r| self.contains(r))
    }

    /// Row-space intersection, via the kernel of the stacked system.
    pub fn intersect(&self, other: &LinearSpan) -> LinearSpan {
        let a = self.basis.len();
        let b = other.basis.len();
        // Unknowns: a lambda's then b mu's; equations per column c:
        // sum_i lambda_i A[i][c] - sum_j mu_j B[j][c] = 0.
        let mut eqs: std::collections::BTreeMap<usize, SparseVec> = Default::default();
        for (i, row) in self.basis.iter().enumerate() {
            for (c, v) in row {
                eqs.entry(*c).or_default().push((i, v.clone()));
            }
        }
        for (j, row) in other.basis.iter().enumerate() {
            for (c, v) in row {
                eqs.entry(*c).or_default().push((a + j, -v.clone()));
            }
        }
        let kernel = kernel_basis(a + b, eqs.into_values().collect());
        let mut rows = Vec::new();
        for k in kernel {
            let mut acc: std::collections::BTreeMap<usize, Rat> = Default::default();
            for (idx, lam) in k.iter().take(a).enumerate() {
                if lam.is_zero() {
                    continue;
                }
                for (c, v) in &self.basis[idx] {
                    let cur = acc.remove(c).unwrap_or_else(Rat::zero);
                    let nv = cur + lam * v;
                    if !nv.is_zero() {
                        acc.insert(*c, nv);
                    }
                }
            }
            let row: SparseVec = acc.into_iter().collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
        LinearSpan::from_rows(self.cols, rows)
    }
}

/// Canonical kernel basis of a homogeneous system: `rows` are equations over
/// `cols` unknowns. Basis vectors are dense, one per free column, with the
/// free coordinate set to 1.
pub fn kernel_basis(cols: usize, rows: Vec<SparseVec>) -> Vec<Vec<Rat>> {
    let span = LinearSpan::from_rows(cols, rows);
    let pivot_set: std::collections::BTreeSet<usize> = span.pivots.iter().cloned().collect();
    let mut out = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &p) in span.basis.iter().zip(&span.pivots) {
            if let Some(val) = row.iter().find(|(c, _)| *c == free).map(|(_, v)| v) {
                v[p] = -val.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Solve `A x = b` exactly. `rows` pairs each equation's coefficients with
/// its right-hand side. Returns the particular solution with free unknowns
/// set to zero, or `None` when inconsistent.
pub fn solve(cols: usize, rows: Vec<(SparseVec, Rat)>) -> Option<Vec<Rat>> {
    // Augmented system with the rhs in an extra trailing column.
    let aug: Vec<SparseVec> = rows
        .into_iter()
        .map(|(mut r, b)| {
            if !b.is_zero() {
                r.push((cols, -b));
            }
            r.sort_by_key(|e| e.0);
            r
        })
        .collect();
    let span = LinearSpan::from_rows(cols + 1, aug);
    // Inconsistent iff some pivot sits in the rhs column.
    if span.pivots.iter().any(|&p| p == cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &p) in span.basis.iter().zip(&span.pivots) {
        if let Some(val) = row.iter().find(|(c, _)| *c == cols).map(|(_, v)| v) {
            // Row reads x_p + ... + val = 0 with free unknowns at zero.
            x[p] = -val.clone();
        }
    }
    Some(x)
}

pub fn dense_to_sparse(v: &[Rat]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(c, v)| (c, int(v))).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let rows = vec![sv(&[(0, 2), (1, 4)]), sv(&[(0, 1), (1, 2), (2, 1)])];
        let s = LinearSpan::from_rows(3, rows);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), &[0, 2]);
        assert_eq!(s.basis()[0], sv(&[(0, 1), (1, 2)]));
        assert_eq!(s.basis()[1], sv(&[(2, 1)]));
        // Same span, different presentation -> identical basis.
        let rows2 = vec![sv(&[(0, 3), (1, 6), (2, 5)]), sv(&[(2, 7)])];
        let s2 = LinearSpan::from_rows(3, rows2);
        assert_eq!(s.basis(), s2.basis());
    }

    #[test]
    fn membership_and_reduction() {
        let s = LinearSpan::from_rows(3, vec![sv(&[(0, 1), (2, 1)]), sv(&[(1, 1)])]);
        assert!(s.contains(&sv(&[(0, 2), (1, 5), (2, 2)])));
        assert!(!s.contains(&sv(&[(0, 1)])));
    }

    #[test]
    fn kernel_of_rank_one_system() {
        // x + y + z = 0 over 3 unknowns.
        let k = kernel_basis(3, vec![sv(&[(0, 1), (1, 1), (2, 1)])]);
        assert_eq!(k.len(), 2);
        for v in &k {
            let sum = v.iter().fold(Rat::zero(), |a, b| a + b);
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn solve_inhomogeneous() {
        // x + y = 3, x - y = 1 -> x = 2, y = 1.
        let sol = solve(
            2,
            vec![(sv(&[(0, 1), (1, 1)]), int(3)), (sv(&[(0, 1), (1, -1)]), int(1))],
        )
        .unwrap();
        assert_eq!(sol, vec![int::<Rat>(2), int::<Rat>(1)]);
        // Inconsistent system.
        assert!(solve(1, vec![(sv(&[(0, 1)]), int(1)), (sv(&[(0, 1)]), int(2))]).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        // span{e0, e1} ∩ span{e1, e2} = span{e1}.
        let a = LinearSpan::from_rows(3, vec![sv(&[(0, 1)]), sv(&[(1, 1)])]);
        let b = LinearSpan::from_rows(3, vec![sv(&[(1, 1)]), sv(&[(2, 1)])]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&sv(&[(1, 1)])));
    }

    #[test]
    fn fractional_input() {
        let rows = vec![vec![(0usize, frac::<Rat>(1, 2)), (1usize, frac::<Rat>(1, 3))]];
        let s = LinearSpan::from_rows(2, rows);
        assert_eq!(s.basis()[0], vec![(0, int::<Rat>(1)), (1, frac::<Rat>(2, 3))]);
    }
}
