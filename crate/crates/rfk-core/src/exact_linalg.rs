//! Exact sparse linear algebra over Q and F_p.
//!
//! Matrices are row-major sparse. Elimination reduces rows by their leading
//! column (the reduction used for boundary matrices in persistence), then
//! back-substitutes when a reduced row echelon form is needed.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Arith, Field, PArith, QArith, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn zeros(field: Field, nrows: usize, ncols: usize) -> SparseMatrix {
        SparseMatrix { field, nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(field: Field, n: usize) -> SparseMatrix {
        let rows = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix { field, nrows: n, ncols: n, rows }
    }

    /// Builds from triplets. Repeated positions are summed; zeros are dropped.
    pub fn from_triplets(
        field: Field,
        nrows: usize,
        ncols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<SparseMatrix> {
        let mut acc: Vec<HashMap<usize, Scalar>> = vec![HashMap::new(); nrows];
        for (r, c, v) in entries {
            if r >= nrows || c >= ncols {
                return Err(Error::ShapeMismatch(format!(
                    "entry ({r},{c}) outside {nrows}x{ncols}"
                )));
            }
            let slot = acc[r].entry(c).or_insert_with(|| field.zero());
            *slot = field.add(slot, &v);
        }
        let rows = acc
            .into_iter()
            .map(|m| {
                let mut row: Vec<_> = m.into_iter().filter(|(_, v)| !field.is_zero(v)).collect();
                row.sort_by_key(|e| e.0);
                row
            })
            .collect();
        Ok(SparseMatrix { field, nrows, ncols, rows })
    }

    pub fn from_ints(field: Field, dense: &[Vec<i64>]) -> SparseMatrix {
        let nrows = dense.len();
        let ncols = dense.first().map_or(0, |r| r.len());
        Self::from_dense_fn(field, nrows, ncols, |r, c| field.from_int(dense[r][c]))
    }

    pub fn from_dense(field: Field, dense: &[Vector], ncols: usize) -> SparseMatrix {
        Self::from_dense_fn(field, dense.len(), ncols, |r, c| dense[r][c].clone())
    }

    pub fn from_dense_fn(
        field: Field,
        nrows: usize,
        ncols: usize,
        f: impl Fn(usize, usize) -> Scalar,
    ) -> SparseMatrix {
        let rows = (0..nrows)
            .map(|r| {
                (0..ncols)
                    .filter_map(|c| {
                        let v = f(r, c);
                        (!field.is_zero(&v)).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix { field, nrows, ncols, rows }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, nrows: usize, cols: &[Vector]) -> SparseMatrix {
        Self::from_dense_fn(field, nrows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn row(&self, r: usize) -> &[(usize, Scalar)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        let zero = self.field.is_zero(&v);
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) if zero => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = v,
            Err(_) if zero => {}
            Err(i) => row.insert(i, (c, v)),
        }
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vector> {
        (0..self.nrows)
            .map(|r| {
                let mut v = vec![self.field.zero(); self.ncols];
                for (c, x) in &self.rows[r] {
                    v[*c] = x.clone();
                }
                v
            })
            .collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (r, c, v) in self.entries() {
            rows[c].push((r, v.clone()));
        }
        SparseMatrix { field: self.field, nrows: self.ncols, ncols: self.nrows, rows }
    }

    fn same_field(&self, o: &SparseMatrix) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field.name(),
                o.field.name()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, o: &SparseMatrix) -> Result<SparseMatrix> {
        self.same_field(o)?;
        if self.ncols != o.nrows {
            return Err(Error::ShapeMismatch(format!(
                "product of {}x{} and {}x{}",
                self.nrows, self.ncols, o.nrows, o.ncols
            )));
        }
        let f = self.field;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: HashMap<usize, Scalar> = HashMap::new();
                for (k, a) in row {
                    for (c, b) in &o.rows[*k] {
                        let t = f.mul(a, b);
                        let slot = acc.entry(*c).or_insert_with(|| f.zero());
                        *slot = f.add(slot, &t);
                    }
                }
                let mut out: Vec<_> = acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect();
                out.sort_by_key(|e| e.0);
                out
            })
            .collect();
        Ok(SparseMatrix { field: f, nrows: self.nrows, ncols: o.ncols, rows })
    }

    pub fn add(&self, o: &SparseMatrix) -> Result<SparseMatrix> {
        self.same_field(o)?;
        if self.nrows != o.nrows || self.ncols != o.ncols {
            return Err(Error::ShapeMismatch(format!(
                "sum of {}x{} and {}x{}",
                self.nrows, self.ncols, o.nrows, o.ncols
            )));
        }
        let f = self.field;
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| merge_rows(f, a, b))
            .collect();
        Ok(SparseMatrix { field: f, nrows: self.nrows, ncols: self.ncols, rows })
    }

    pub fn sub(&self, o: &SparseMatrix) -> Result<SparseMatrix> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> SparseMatrix {
        let f = self.field;
        if f.is_zero(s) {
            return SparseMatrix::zeros(f, self.nrows, self.ncols);
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, f.mul(v, s))).collect())
            .collect();
        SparseMatrix { field: f, nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn neg(&self) -> SparseMatrix {
        self.scale(&self.field.from_int(-1))
    }

    /// Matrix-vector product with a dense vector.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.ncols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.ncols
            )));
        }
        let f = self.field;
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter().fold(f.zero(), |acc, (c, x)| {
                    if f.is_zero(&v[*c]) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(x, &v[*c]))
                    }
                })
            })
            .collect())
    }

    /// Copies `block` into a larger matrix at the given offset.
    pub fn embed(&mut self, r0: usize, c0: usize, block: &SparseMatrix) {
        for (r, c, v) in block.entries() {
            let cur = self.get(r0 + r, c0 + c);
            self.set(r0 + r, c0 + c, self.field.add(&cur, v));
        }
    }

    pub fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> SparseMatrix {
        let rows = self.rows[r0..r0 + nr]
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| *c >= c0 && *c < c0 + nc)
                    .map(|(c, v)| (c - c0, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { field: self.field, nrows: nr, ncols: nc, rows }
    }

    /// Reduces every entry into F_p. Fails if some denominator vanishes mod p.
    pub fn reduce_mod(&self, p: u64) -> Result<SparseMatrix> {
        let target = Field::prime(p)?;
        let mut out = SparseMatrix::zeros(target, self.nrows, self.ncols);
        for (r, c, v) in self.entries() {
            let s = match (self.field, v) {
                (Field::Rational, Scalar::Q(q)) => target.from_rat(q)?,
                (Field::Prime(_), Scalar::Fp(x)) => target.from_int(*x as i64),
                _ => unreachable!(),
            };
            out.set(r, c, s);
        }
        Ok(out)
    }
}

fn merge_rows(f: Field, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j].clone());
            j += 1;
        } else {
            let s = f.add(&a[i].1, &b[j].1);
            if !f.is_zero(&s) {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

type Row<E> = Vec<(usize, E)>;

/// row <- row + s * other, both sorted by column.
fn axpy<A: Arith>(a: &A, row: &Row<A::E>, s: &A::E, other: &Row<A::E>) -> Row<A::E> {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        if j == other.len() || (i < row.len() && row[i].0 < other[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i == row.len() || other[j].0 < row[i].0 {
            out.push((other[j].0, a.mul(s, &other[j].1)));
            j += 1;
        } else {
            let v = a.add(&row[i].1, &a.mul(s, &other[j].1));
            if !a.is_zero(&v) {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon basis: rows have distinct leading columns and
/// leading coefficient one.
pub(crate) struct Echelon<'a, A: Arith> {
    arith: &'a A,
    pub(crate) rows: Vec<Row<A::E>>,
    pivots: HashMap<usize, usize>,
}

impl<'a, A: Arith> Echelon<'a, A> {
    pub(crate) fn new(arith: &'a A) -> Self {
        Echelon { arith, rows: Vec::new(), pivots: HashMap::new() }
    }

    /// Leading-term-only reduction; returns the reduced row (zero if dependent).
    fn reduce_lead(&self, mut row: Row<A::E>) -> Row<A::E> {
        while let Some((lead, coef)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(&p) => {
                    let s = self.arith.neg(&coef);
                    row = axpy(self.arith, &row, &s, &self.rows[p]);
                }
                None => break,
            }
        }
        row
    }

    /// Inserts a row; returns true if it was independent.
    pub(crate) fn insert(&mut self, row: Row<A::E>) -> bool {
        let row = self.reduce_lead(row);
        let Some((lead, coef)) = row.first().cloned() else { return false };
        let inv = self.arith.inv(&coef);
        let row: Row<A::E> = row.into_iter().map(|(c, v)| (c, self.arith.mul(&v, &inv))).collect();
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduced row echelon form, rows sorted by leading column.
    pub(crate) fn into_rref(mut self) -> Vec<Row<A::E>> {
        let a = self.arith;
        self.rows.sort_by_key(|r| r[0].0);
        let pivot_of: HashMap<usize, usize> =
            self.rows.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
        for i in (0..self.rows.len()).rev() {
            // clear pivot columns of later rows from row i
            loop {
                let hit = self.rows[i]
                    .iter()
                    .skip(1)
                    .find(|(c, _)| pivot_of.get(c).is_some_and(|&j| j != i))
                    .cloned();
                let Some((c, v)) = hit else { break };
                let j = pivot_of[&c];
                let s = a.neg(&v);
                self.rows[i] = axpy(a, &self.rows[i], &s, &self.rows[j]);
            }
        }
        self.rows
    }
}

fn typed_rows<A: Arith>(a: &A, m: &SparseMatrix) -> Vec<Row<A::E>> {
    m.rows
        .iter()
        .map(|r| r.iter().map(|(c, v)| (*c, a.lift(v))).collect())
        .collect()
}

fn rank_generic<A: Arith>(a: &A, m: &SparseMatrix) -> usize {
    let mut rows = typed_rows(a, m);
    rows.sort_by_key(|r| r.len());
    let mut ech = Echelon::new(a);
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// Rank over the matrix's own field.
pub fn rank(m: &SparseMatrix) -> usize {
    let use_t = m.ncols < m.nrows;
    let mt;
    let m = if use_t {
        mt = m.transpose();
        &mt
    } else {
        m
    };
    match m.field {
        Field::Rational => rank_generic(&QArith, m),
        Field::Prime(p) => rank_generic(&PArith(p), m),
    }
}

/// Rank of a matrix given directly as sparse integer rows, computed over
/// `field`. Used by callers that assemble large ±1 matrices themselves.
pub fn rank_of_int_rows(field: Field, rows: Vec<Vec<(usize, i64)>>) -> usize {
    fn go<A: Arith>(a: &A, f: Field, rows: Vec<Vec<(usize, i64)>>) -> usize {
        let mut typed: Vec<Row<A::E>> = rows
            .into_iter()
            .map(|r| {
                let mut r: Vec<_> = r
                    .into_iter()
                    .map(|(c, v)| (c, a.lift(&f.from_int(v))))
                    .filter(|(_, v)| !a.is_zero(v))
                    .collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        typed.sort_by_key(|r| r.len());
        let mut ech = Echelon::new(a);
        for r in typed {
            ech.insert(r);
        }
        ech.rank()
    }
    match field {
        Field::Rational => go(&QArith, field, rows),
        Field::Prime(p) => go(&PArith(p), field, rows),
    }
}

fn rref_generic<A: Arith>(a: &A, m: &SparseMatrix) -> Vec<Vec<(usize, Scalar)>> {
    let mut ech = Echelon::new(a);
    for r in typed_rows(a, m) {
        ech.insert(r);
    }
    ech.into_rref()
        .into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, a.lower(&v))).collect())
        .collect()
}

/// Nonzero rows of the reduced row echelon form, sorted by pivot column.
pub fn rref(m: &SparseMatrix) -> Vec<Vec<(usize, Scalar)>> {
    match m.field {
        Field::Rational => rref_generic(&QArith, m),
        Field::Prime(p) => rref_generic(&PArith(p), m),
    }
}

/// Basis of the right null space.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vector> {
    let f = m.field;
    let rr = rref(m);
    let pivots: Vec<usize> = rr.iter().map(|r| r[0].0).collect();
    let is_pivot: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..m.ncols).filter(|c| !is_pivot.contains(c)) {
        let mut v = vec![f.zero(); m.ncols];
        v[free] = f.one();
        for row in &rr {
            if let Ok(i) = row.binary_search_by_key(&free, |e| e.0) {
                v[row[0].0] = f.neg(&row[i].1);
            }
        }
        basis.push(v);
    }
    basis
}

pub fn nullity(m: &SparseMatrix) -> usize {
    m.ncols - rank(m)
}

/// Some x with M x = b, or `None` when b is outside the column space.
pub fn solve(m: &SparseMatrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if b.len() != m.nrows {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.nrows
        )));
    }
    let f = m.field;
    let mut aug = SparseMatrix::zeros(f, m.nrows, m.ncols + 1);
    aug.embed(0, 0, m);
    for (r, v) in b.iter().enumerate() {
        aug.set(r, m.ncols, v.clone());
    }
    let rr = rref(&aug);
    let mut x = vec![f.zero(); m.ncols];
    for row in &rr {
        let (lead, _) = &row[0];
        if *lead == m.ncols {
            return Ok(None);
        }
        if let Some((_, v)) = row.iter().find(|(c, _)| *c == m.ncols) {
            x[*lead] = v.clone();
        }
    }
    Ok(Some(x))
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert(m: &SparseMatrix) -> Option<SparseMatrix> {
    let n = m.nrows;
    if m.ncols != n || rank(m) != n {
        return None;
    }
    let f = m.field;
    let cols: Vec<Vector> = (0..n)
        .map(|j| {
            let e: Vector = (0..n).map(|i| if i == j { f.one() } else { f.zero() }).collect();
            solve(m, &e).ok().flatten().expect("full rank")
        })
        .collect();
    Some(SparseMatrix::from_columns(f, n, &cols))
}

/// Rank of the span of a list of dense vectors.
pub fn span_rank(field: Field, vectors: &[Vector]) -> usize {
    let n = vectors.first().map_or(0, |v| v.len());
    rank(&SparseMatrix::from_dense(field, vectors, n))
}

/// Cohomology of `V --d_in--> M --d_out--> W` at the middle space.
#[derive(Clone, Debug)]
pub struct Junction {
    pub field: Field,
    pub middle: usize,
    pub dim: usize,
    /// basis of im(d_in)
    pub image: Vec<Vector>,
    /// cycles completing the image basis to a basis of ker(d_out)
    pub representatives: Vec<Vector>,
}

impl Junction {
    /// Coordinates of the class of a cycle `z` in terms of the representatives.
    pub fn class_of(&self, z: &[Scalar]) -> Result<Vector> {
        let mut cols = self.image.clone();
        cols.extend(self.representatives.iter().cloned());
        let m = SparseMatrix::from_columns(self.field, self.middle, &cols);
        let x = solve(&m, z)?.ok_or_else(|| {
            Error::ShapeMismatch("vector is not a cycle at this junction".to_string())
        })?;
        Ok(x[self.image.len()..].to_vec())
    }

    /// Cycle representing the class with the given coordinates.
    pub fn lift(&self, coords: &[Scalar]) -> Vector {
        let f = self.field;
        let mut v = vec![f.zero(); self.middle];
        for (c, rep) in coords.iter().zip(&self.representatives) {
            if f.is_zero(c) {
                continue;
            }
            for (i, x) in rep.iter().enumerate() {
                v[i] = f.add(&v[i], &f.mul(c, x));
            }
        }
        v
    }
}

pub fn cohomology_at(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<Junction> {
    if d_in.nrows != d_out.ncols {
        return Err(Error::ShapeMismatch(format!(
            "d_in lands in dimension {} but d_out starts from {}",
            d_in.nrows, d_out.ncols
        )));
    }
    let f = d_in.field;
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let m = d_in.nrows;
    let image: Vec<Vector> = rref(&d_in.transpose())
        .into_iter()
        .map(|row| {
            let mut v = vec![f.zero(); m];
            for (c, x) in row {
                v[c] = x;
            }
            v
        })
        .collect();
    let kernel = kernel_basis(d_out);
    let mut representatives = Vec::new();
    match f {
        Field::Rational => extend_basis(&QArith, &image, &kernel, &mut representatives),
        Field::Prime(p) => extend_basis(&PArith(p), &image, &kernel, &mut representatives),
    }
    let dim = kernel.len() - image.len();
    debug_assert_eq!(dim, representatives.len());
    Ok(Junction { field: f, middle: m, dim, image, representatives })
}

fn extend_basis<A: Arith>(a: &A, base: &[Vector], cands: &[Vector], out: &mut Vec<Vector>) {
    let to_row = |v: &Vector| -> Row<A::E> {
        v.iter()
            .enumerate()
            .filter_map(|(i, x)| {
                let e = a.lift(x);
                (!a.is_zero(&e)).then_some((i, e))
            })
            .collect()
    };
    let mut ech = Echelon::new(a);
    for v in base {
        ech.insert(to_row(v));
    }
    for v in cands {
        if ech.insert(to_row(v)) {
            out.push(v.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::from_ints(q(), &[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank(&SparseMatrix::zeros(q(), 3, 3)), 0);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(rank(&SparseMatrix::from_ints(f2, &[vec![1, 1], vec![1, 1]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(q(), 2)).is_empty());
        let k = kernel_basis(&SparseMatrix::from_ints(q(), &[vec![1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], q().neg(&k[0][1]));
        assert!(!q().is_zero(&k[0][0]));
    }

    #[test]
    fn junction_examples() {
        let z = SparseMatrix::zeros(q(), 3, 3);
        assert_eq!(cohomology_at(&z, &z).unwrap().dim, 3);
        let id = SparseMatrix::identity(q(), 3);
        let z0 = SparseMatrix::zeros(q(), 0, 3);
        assert_eq!(cohomology_at(&id, &z0).unwrap().dim, 0);
        let d_in = SparseMatrix::from_ints(q(), &[vec![0], vec![0]]);
        let d_out = SparseMatrix::from_ints(q(), &[vec![0, 1]]);
        assert_eq!(cohomology_at(&d_in, &d_out).unwrap().dim, 1);
        let bad_in = SparseMatrix::from_ints(q(), &[vec![1], vec![0]]);
        let bad_out = SparseMatrix::from_ints(q(), &[vec![1, 0]]);
        assert_eq!(cohomology_at(&bad_in, &bad_out).unwrap_err(), Error::CompositionNonzero);
    }

    #[test]
    fn solve_and_class() {
        let m = SparseMatrix::from_ints(q(), &[vec![1, 2], vec![3, 4], vec![5, 6]]);
        let b: Vec<_> = [5, 11, 17].iter().map(|&x| q().from_int(x)).collect();
        let x = solve(&m, &b).unwrap().unwrap();
        assert_eq!(m.apply(&x).unwrap(), b);
        let c: Vec<_> = [1, 0, 0].iter().map(|&x| q().from_int(x)).collect();
        assert!(solve(&m, &c).unwrap().is_none());
    }
}
