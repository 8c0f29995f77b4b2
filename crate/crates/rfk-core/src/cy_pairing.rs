//! Pairings between Rabinowitz-type complexes and their duals, and
//! Calabi-Yau pairings on finite graded categories.
//!
//! Chain-level side: a complex `R` with a subcomplex `A` (wrapped cohomology)
//! and quotient `B = R / A` (wrapped homology, regraded), a product
//! `mu^2 : R10 x R01 -> R00`, and a trace `psi o pi` on the quotient of `R00`.
//! The pairing `Theta(y, x) = psi(pi(p(mu^2(y, x))))` yields `alpha`, `beta`,
//! `gamma` as maps into the shifted duals `D(C)^k = (C^{n-1-k})^*`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact_linalg::{rank, SparseMatrix, Vector};
use crate::field::{Field, Rat, Scalar};
use crate::ginzburg::{Cell, Ginzburg};
use crate::graded_complex::{matrix_from_triplets, matrix_triplets, ChainMap, GradedComplex};
use crate::limit_systems::{SlopeTable, SpectrumSet};

fn odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

fn dot(field: Field, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
}

fn unit(field: Field, n: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// `D(C)^k = (C^{n-1-k})^*` with `d phi = (-1)^k phi o d_C`.
pub fn shifted_dual(c: &GradedComplex, n: i64) -> GradedComplex {
    let f = c.field();
    let spaces: BTreeMap<i64, usize> = c.spaces().iter().map(|(&j, &d)| (n - 1 - j, d)).collect();
    let mut diffs = BTreeMap::new();
    for &k in spaces.keys() {
        let j = n - 2 - k;
        if c.dim(j) == 0 {
            continue;
        }
        diffs.insert(k, c.diff(j).transpose().scale(&f.sign(odd(k))));
    }
    GradedComplex::new(f, spaces, diffs).expect("transpose of a differential squares to zero")
}

/// A complex whose first `a_dims[k]` basis vectors in degree `k` span a
/// subcomplex `A`; the remaining ones span the quotient `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRfc {
    total: GradedComplex,
    a_dims: BTreeMap<i64, usize>,
}

impl SplitRfc {
    pub fn new(total: GradedComplex, a_dims: BTreeMap<i64, usize>) -> Result<SplitRfc> {
        for (&k, &a) in &a_dims {
            if a > total.dim(k) {
                return Err(Error::ShapeMismatch(format!("subcomplex dimension {a} exceeds {} at degree {k}", total.dim(k))));
            }
        }
        let s = SplitRfc { total, a_dims };
        for k in s.total.degrees() {
            let (a_src, a_tgt) = (s.a_dim(k), s.a_dim(k + 1));
            if s.total.diff(k).entries().any(|(r, c, _)| c < a_src && r >= a_tgt) {
                return Err(Error::InvalidOperation(format!("first summand is not a subcomplex at degree {k}")));
            }
        }
        Ok(s)
    }

    pub fn total(&self) -> &GradedComplex {
        &self.total
    }

    pub fn a_dim(&self, k: i64) -> usize {
        self.a_dims.get(&k).copied().unwrap_or(0)
    }

    pub fn b_dim(&self, k: i64) -> usize {
        self.total.dim(k) - self.a_dim(k)
    }

    fn piece(&self, first: bool) -> GradedComplex {
        let f = self.total.field();
        let dim = |k: i64| if first { self.a_dim(k) } else { self.b_dim(k) };
        let spaces: BTreeMap<i64, usize> = self.total.degrees().into_iter().map(|k| (k, dim(k))).collect();
        let mut diffs = BTreeMap::new();
        for k in self.total.degrees() {
            let d = self.total.diff(k);
            let m = if first {
                d.block(0, self.a_dim(k + 1), 0, self.a_dim(k))
            } else {
                d.block(self.a_dim(k + 1), self.b_dim(k + 1), self.a_dim(k), self.b_dim(k))
            };
            if m.nrows() > 0 && m.ncols() > 0 {
                diffs.insert(k, m);
            }
        }
        GradedComplex::new(f, spaces, diffs).expect("sub and quotient of a complex")
    }

    /// `CW^*`.
    pub fn sub(&self) -> GradedComplex {
        self.piece(true)
    }

    /// `CW_{n-1-*}`.
    pub fn quotient(&self) -> GradedComplex {
        self.piece(false)
    }

    pub fn inclusion(&self) -> Result<ChainMap> {
        let f = self.total.field();
        let blocks = self
            .total
            .degrees()
            .into_iter()
            .map(|k| {
                let mut m = SparseMatrix::zeros(f, self.total.dim(k), self.a_dim(k));
                for i in 0..self.a_dim(k) {
                    m.set(i, i, f.one());
                }
                (k, m)
            })
            .collect();
        ChainMap::new(self.sub(), self.total.clone(), blocks, 0)
    }

    pub fn projection(&self) -> Result<ChainMap> {
        let f = self.total.field();
        let blocks = self
            .total
            .degrees()
            .into_iter()
            .map(|k| {
                let a = self.a_dim(k);
                let mut m = SparseMatrix::zeros(f, self.b_dim(k), self.total.dim(k));
                for i in 0..self.b_dim(k) {
                    m.set(i, a + i, f.one());
                }
                (k, m)
            })
            .collect();
        ChainMap::new(self.total.clone(), self.quotient(), blocks, 0)
    }
}

/// `mu^2(y, x)` on basis pairs: `y = (degree, index)` in `R10`, `x` in `R01`,
/// output coordinates in `R00` of degree `deg y + deg x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Product {
    entries: BTreeMap<((i64, usize), (i64, usize)), Vec<(usize, Scalar)>>,
}

impl Product {
    pub fn new() -> Product {
        Product::default()
    }

    pub fn insert(&mut self, field: Field, y: (i64, usize), x: (i64, usize), out: usize, v: Scalar) {
        let e = self.entries.entry((y, x)).or_default();
        match e.iter_mut().find(|(o, _)| *o == out) {
            Some((_, w)) => *w = field.add(w, &v),
            None => e.push((out, v)),
        }
        e.retain(|(_, w)| !field.is_zero(w));
    }

    pub fn get(&self, y: (i64, usize), x: (i64, usize)) -> &[(usize, Scalar)] {
        self.entries.get(&(y, x)).map_or(&[], |v| v.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.is_empty())
    }
}

/// `psi` on `T^n` together with the chain map `pi : B00 -> T` of degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFunctional {
    pub n: i64,
    pub target: GradedComplex,
    pub pi: ChainMap,
    pub psi: Vector,
}

impl TraceFunctional {
    pub fn new(n: i64, pi: ChainMap, psi: Vector) -> Result<TraceFunctional> {
        if pi.degree_shift() != 1 {
            return Err(Error::ShapeMismatch("pi must raise degree by one".to_string()));
        }
        let target = pi.target().clone();
        if psi.len() != target.dim(n) {
            return Err(Error::ShapeMismatch(format!("psi has length {}, expected {}", psi.len(), target.dim(n))));
        }
        pi.check("pi")?;
        let t = TraceFunctional { n, target, pi, psi };
        t.check_cycle()?;
        Ok(t)
    }

    /// The dual basis vector of the `index`-th basis element of `T^n`.
    pub fn dual_basis(n: i64, pi: ChainMap, index: usize) -> Result<TraceFunctional> {
        let dim = pi.target().dim(n);
        if index >= dim {
            return Err(Error::IndexOutOfWindow(index as i64));
        }
        TraceFunctional::new(n, pi.clone(), unit(pi.field(), dim, index))
    }

    pub fn check_cycle(&self) -> Result<()> {
        let d = self.target.diff(self.n - 1);
        let f = self.target.field();
        for c in 0..d.ncols() {
            let col: Vec<Scalar> = (0..d.nrows()).map(|r| d.get(r, c)).collect();
            if !f.is_zero(&dot(f, &self.psi, &col)) {
                return Err(Error::NotACycle(format!("psi o d is nonzero on basis vector {c} of degree {}", self.n - 1)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PairingInput {
    pub n: i64,
    /// `RFC(L0, L1)`, the argument side
    pub rfc01: SplitRfc,
    /// `RFC(L1, L0)`, the dual side
    pub rfc10: SplitRfc,
    /// `RFC(L0, L0)`, where the product lands
    pub rfc00: SplitRfc,
    pub product: Product,
    pub trace: TraceFunctional,
}

#[derive(Clone, Debug)]
pub struct Pairings {
    pub n: i64,
    pub alpha: ChainMap,
    pub beta: ChainMap,
    pub gamma: ChainMap,
    /// `Theta` in degree `k`: rows `R10^{n-1-k}`, columns `R01^k`.
    pub theta: BTreeMap<i64, SparseMatrix>,
}

fn relabel(e: Error, what: &str) -> Error {
    match e {
        Error::NotAChainMap { degree, .. } => Error::NotAChainMap { what: what.to_string(), degree },
        other => other,
    }
}

/// `alpha`, `beta`, `gamma` from one product and one trace; each is checked
/// to be a chain map.
pub fn chain_pairings(input: &PairingInput) -> Result<Pairings> {
    let n = input.n;
    let tr = &input.trace;
    if tr.n != n {
        return Err(Error::ShapeMismatch(format!("trace is in degree {}, expected {n}", tr.n)));
    }
    tr.check_cycle()?;
    let f = input.rfc01.total().field();
    let r00 = &input.rfc00;
    let pi = tr.pi.block(n - 1);
    if pi.ncols() != r00.b_dim(n - 1) {
        return Err(Error::ShapeMismatch("pi does not start at the quotient of the target complex".to_string()));
    }
    // the functional psi o pi o p on R00^{n-1}
    let a00 = r00.a_dim(n - 1);
    let mut ell = vec![f.zero(); r00.total().dim(n - 1)];
    for (r, c, v) in pi.entries() {
        ell[a00 + c] = f.add(&ell[a00 + c], &f.mul(&tr.psi[r], v));
    }

    let (r01, r10) = (&input.rfc01, &input.rfc10);
    let mut theta = BTreeMap::new();
    for k in r01.total().degrees() {
        let (rows, cols) = (r10.total().dim(n - 1 - k), r01.total().dim(k));
        let mut trip = Vec::new();
        for yi in 0..rows {
            for xi in 0..cols {
                let mut acc = f.zero();
                for (o, v) in input.product.get((n - 1 - k, yi), (k, xi)) {
                    let w = ell.get(*o).ok_or(Error::IndexOutOfWindow(*o as i64))?;
                    acc = f.add(&acc, &f.mul(w, v));
                }
                if !f.is_zero(&acc) {
                    trip.push((yi, xi, acc));
                }
            }
        }
        theta.insert(k, SparseMatrix::from_triplets(f, rows, cols, trip)?);
    }

    let mut ab = BTreeMap::new();
    let mut bb = BTreeMap::new();
    let mut gb = BTreeMap::new();
    for (&k, m) in &theta {
        let j = n - 1 - k;
        let (ay, by) = (r10.a_dim(j), r10.b_dim(j));
        let (ax, bx) = (r01.a_dim(k), r01.b_dim(k));
        ab.insert(k, m.block(ay, by, 0, ax));
        gb.insert(k, m.block(0, ay, ax, bx));
        bb.insert(k, m.clone());
    }
    let alpha = ChainMap::unchecked(r01.sub(), shifted_dual(&r10.quotient(), n), ab, 0)?;
    let beta = ChainMap::unchecked(r01.total().clone(), shifted_dual(r10.total(), n), bb, 0)?;
    let gamma = ChainMap::unchecked(r01.quotient(), shifted_dual(&r10.sub(), n), gb, 0)?;
    alpha.check("alpha").map_err(|e| relabel(e, "alpha"))?;
    beta.check("beta").map_err(|e| relabel(e, "beta"))?;
    gamma.check("gamma").map_err(|e| relabel(e, "gamma"))?;
    Ok(Pairings { n, alpha, beta, gamma, theta })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCheck {
    pub degree: i64,
    /// `p^* o alpha = beta o i`
    pub first: bool,
    /// `i^* o beta = gamma o p`
    pub second: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub squares: Vec<SquareCheck>,
    pub alpha_quasi_iso: bool,
    pub gamma_quasi_iso: bool,
    pub beta_quasi_iso: bool,
    /// squares commute and the outer maps are quasi-isomorphisms
    pub five_lemma_certified: bool,
}

impl DiagramReport {
    pub fn squares_commute(&self) -> bool {
        self.squares.iter().all(|s| s.first && s.second)
    }

    /// `(square, degree)` for each failing square.
    pub fn failures(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for s in &self.squares {
            if !s.first {
                out.push((1, s.degree));
            }
            if !s.second {
                out.push((2, s.degree));
            }
        }
        out
    }

    /// A certified diagram must have `beta` a quasi-isomorphism.
    pub fn consistent(&self) -> bool {
        !self.five_lemma_certified || self.beta_quasi_iso
    }

    pub fn pass(&self) -> bool {
        self.squares_commute() && self.consistent()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// Both squares degree by degree, then the five-lemma on homology ranks.
pub fn verify_diagram(p: &Pairings, input: &PairingInput) -> Result<DiagramReport> {
    let n = p.n;
    let (r01, r10) = (&input.rfc01, &input.rfc10);
    let (i01, p01) = (r01.inclusion()?, r01.projection()?);
    let (i10, p10) = (r10.inclusion()?, r10.projection()?);
    // p^* : D(B10) -> D(R10) and i^* : D(R10) -> D(A10)
    let mut ps = BTreeMap::new();
    let mut is = BTreeMap::new();
    for j in r10.total().degrees() {
        ps.insert(n - 1 - j, p10.block(j).transpose());
        is.insert(n - 1 - j, i10.block(j).transpose());
    }
    let pstar = ChainMap::new(shifted_dual(&r10.quotient(), n), shifted_dual(r10.total(), n), ps, 0)?;
    let istar = ChainMap::new(shifted_dual(r10.total(), n), shifted_dual(&r10.sub(), n), is, 0)?;
    let mut squares = Vec::new();
    for k in r01.total().degrees() {
        let first = pstar.block(k).mul(&p.alpha.block(k))? == p.beta.block(k).mul(&i01.block(k))?;
        let second = istar.block(k).mul(&p.beta.block(k))? == p.gamma.block(k).mul(&p01.block(k))?;
        squares.push(SquareCheck { degree: k, first, second });
    }
    let alpha_quasi_iso = p.alpha.is_quasi_isomorphism()?;
    let gamma_quasi_iso = p.gamma.is_quasi_isomorphism()?;
    let beta_quasi_iso = p.beta.is_quasi_isomorphism()?;
    let commute = squares.iter().all(|s| s.first && s.second);
    Ok(DiagramReport {
        squares,
        alpha_quasi_iso,
        gamma_quasi_iso,
        beta_quasi_iso,
        five_lemma_certified: commute && alpha_quasi_iso && gamma_quasi_iso,
    })
}

/// `R = H (+) H q` for `H = K[u]/u^2`, `|u| = n`, `|q| = -1`, as the dg
/// algebra with `dq = 1` (identity continuation) or `dq = 0`. The product is
/// `mu^2(a2, a1) = (-1)^{|a1|} a2 a1` and `mu^1 = (-1)^{|a|} d`; the trace is
/// `psi(u) = 1` through `pi(x q) = x`.
pub fn frobenius_input(field: Field, n: i64, continuation_identity: bool) -> Result<PairingInput> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    // basis (e, f) meaning u^e q^f, one element per degree
    let deg = |e: i64, fq: i64| e * n - fq;
    let mut spaces = BTreeMap::new();
    let mut a_dims = BTreeMap::new();
    for e in 0..2 {
        for fq in 0..2 {
            spaces.insert(deg(e, fq), 1);
            if fq == 0 {
                a_dims.insert(deg(e, 0), 1);
            }
        }
    }
    let mut diffs = BTreeMap::new();
    if continuation_identity {
        let m = SparseMatrix::from_triplets(field, 1, 1, vec![(0, 0, field.from_int(-1))])?;
        diffs.insert(-1, m.clone());
        diffs.insert(n - 1, m);
    }
    let total = GradedComplex::new(field, spaces, diffs)?;
    let rfc = SplitRfc::new(total, a_dims)?;

    let mut product = Product::new();
    for (e2, f2) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        for (e1, f1) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            if e1 + e2 > 1 || f1 + f2 > 1 {
                continue;
            }
            // q u = (-1)^{|q||u|} u q
            let koszul = odd(f2 * e1 * n);
            let s = odd(deg(e1, f1)) ^ koszul;
            product.insert(field, (deg(e2, f2), 0), (deg(e1, f1), 0), 0, field.sign(s));
        }
    }

    let target = GradedComplex::from_dims(field, BTreeMap::from([(0, 1), (n, 1)]));
    let one = SparseMatrix::identity(field, 1);
    let pi = ChainMap::new(rfc.quotient(), target, BTreeMap::from([(-1, one.clone()), (n - 1, one)]), 1)?;
    let trace = TraceFunctional::dual_basis(n, pi, 0)?;
    Ok(PairingInput { n, rfc01: rfc.clone(), rfc10: rfc.clone(), rfc00: rfc, product, trace })
}

/// `(source, target, degree)`
pub type HomKey = (usize, usize, i64);

type CompKey = (usize, usize, usize, i64, i64);

/// Graded category with finitely many objects and finite-dimensional
/// `Hom^d(i, j) = Hom(X_i, X_j[d])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategoryPresentation {
    pub field: Field,
    pub n: i64,
    pub objects: Vec<String>,
    homs: BTreeMap<HomKey, usize>,
    /// `(i, j, l, deg g, deg f) -> (g, f) -> g o f` in `Hom(i, l)`
    comps: BTreeMap<CompKey, BTreeMap<(usize, usize), Vec<(usize, Scalar)>>>,
    identities: Vec<Vector>,
}

impl FiniteCategoryPresentation {
    pub fn new(field: Field, n: i64, objects: Vec<String>) -> FiniteCategoryPresentation {
        let identities = vec![Vec::new(); objects.len()];
        FiniteCategoryPresentation { field, n, objects, homs: BTreeMap::new(), comps: BTreeMap::new(), identities }
    }

    pub fn set_hom(&mut self, i: usize, j: usize, d: i64, dim: usize) {
        if dim == 0 {
            self.homs.remove(&(i, j, d));
        } else {
            self.homs.insert((i, j, d), dim);
        }
    }

    pub fn set_identity(&mut self, i: usize, id: Vector) {
        self.identities[i] = id;
    }

    #[allow(clippy::too_many_arguments)]
    pub fn add_composition(&mut self, i: usize, j: usize, l: usize, dg: i64, df: i64, g: usize, f: usize, out: usize, v: Scalar) {
        let fld = self.field;
        let e = self.comps.entry((i, j, l, dg, df)).or_default().entry((g, f)).or_default();
        match e.iter_mut().find(|(o, _)| *o == out) {
            Some((_, w)) => *w = fld.add(w, &v),
            None => e.push((out, v)),
        }
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn dim(&self, i: usize, j: usize, d: i64) -> usize {
        self.homs.get(&(i, j, d)).copied().unwrap_or(0)
    }

    pub fn homs(&self) -> &BTreeMap<HomKey, usize> {
        &self.homs
    }

    /// Degrees with `Hom^d(i, j) != 0`.
    pub fn degrees(&self, i: usize, j: usize) -> Vec<i64> {
        self.homs.keys().filter(|k| k.0 == i && k.1 == j).map(|k| k.2).collect()
    }

    pub fn identity(&self, i: usize) -> &Vector {
        &self.identities[i]
    }

    pub fn basis(&self, i: usize, j: usize, d: i64, idx: usize) -> Vector {
        unit(self.field, self.dim(i, j, d), idx)
    }

    /// `g o f` for `f` in `Hom^{df}(i, j)` and `g` in `Hom^{dg}(j, l)`.
    #[allow(clippy::too_many_arguments)]
    pub fn compose(&self, i: usize, j: usize, l: usize, dg: i64, g: &[Scalar], df: i64, f: &[Scalar]) -> Vector {
        let fld = self.field;
        let mut out = vec![fld.zero(); self.dim(i, l, dg + df)];
        let Some(table) = self.comps.get(&(i, j, l, dg, df)) else { return out };
        for ((gi, fi), terms) in table {
            let (Some(a), Some(b)) = (g.get(*gi), f.get(*fi)) else { continue };
            if fld.is_zero(a) || fld.is_zero(b) {
                continue;
            }
            let ab = fld.mul(a, b);
            for (o, v) in terms {
                out[*o] = fld.add(&out[*o], &fld.mul(&ab, v));
            }
        }
        out
    }

    /// Identity and associativity laws on basis elements.
    pub fn validate(&self) -> Result<()> {
        let fld = self.field;
        for (key, table) in &self.comps {
            let (i, j, l, dg, df) = *key;
            for ((g, f), terms) in table {
                if *g >= self.dim(j, l, dg) || *f >= self.dim(i, j, df) || terms.iter().any(|(o, _)| *o >= self.dim(i, l, dg + df)) {
                    return Err(Error::ShapeMismatch(format!("composition entry out of range at {key:?}")));
                }
            }
        }
        for i in 0..self.len() {
            if self.identities[i].len() != self.dim(i, i, 0) || self.identities[i].iter().all(|x| fld.is_zero(x)) {
                return Err(Error::InvalidOperation(format!("object {i} has no identity in Hom^0")));
            }
        }
        for (&(i, j, d), &dim) in &self.homs {
            for b in 0..dim {
                let f = self.basis(i, j, d, b);
                if self.compose(i, j, j, 0, &self.identities[j], d, &f) != f
                    || self.compose(i, i, j, d, &f, 0, &self.identities[i]) != f
                {
                    return Err(Error::InvalidOperation(format!("identity law fails on Hom^{d}({i}, {j})")));
                }
            }
        }
        let keys: Vec<HomKey> = self.homs.keys().copied().collect();
        for &(i, j, d1) in &keys {
            for &(j2, l, d2) in keys.iter().filter(|k| k.0 == j) {
                for &(_, m, d3) in keys.iter().filter(|k| k.0 == l) {
                    for a in 0..self.dim(i, j2, d1) {
                        for b in 0..self.dim(j2, l, d2) {
                            for c in 0..self.dim(l, m, d3) {
                                let (x, y, z) = (self.basis(i, j, d1, a), self.basis(j, l, d2, b), self.basis(l, m, d3, c));
                                let left = self.compose(i, l, m, d3, &z, d1 + d2, &self.compose(i, j, l, d2, &y, d1, &x));
                                let right = self.compose(i, j, m, d2 + d3, &self.compose(j, l, m, d3, &z, d2, &y), d1, &x);
                                if left != right {
                                    return Err(Error::InvalidOperation(format!(
                                        "associativity fails on objects ({i}, {j}, {l}, {m})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Object `i` becomes object `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteCategoryPresentation {
        let mut objects = vec![String::new(); self.len()];
        let mut identities = vec![Vec::new(); self.len()];
        for (i, &p) in perm.iter().enumerate() {
            objects[p] = self.objects[i].clone();
            identities[p] = self.identities[i].clone();
        }
        let homs = self.homs.iter().map(|(&(i, j, d), &v)| ((perm[i], perm[j], d), v)).collect();
        let comps = self
            .comps
            .iter()
            .map(|(&(i, j, l, dg, df), t)| ((perm[i], perm[j], perm[l], dg, df), t.clone()))
            .collect();
        FiniteCategoryPresentation { field: self.field, n: self.n, objects, homs, comps, identities }
    }

    pub fn to_json(&self) -> Value {
        let f = self.field;
        let homs: BTreeMap<String, usize> = self.homs.iter().map(|((i, j, d), v)| (format!("{i},{j},{d}"), *v)).collect();
        let mut comps = Vec::new();
        for (&(i, j, l, dg, df), table) in &self.comps {
            for (&(g, fi), terms) in table {
                let out: Vec<(usize, String)> = terms.iter().map(|(o, v)| (*o, f.format(v))).collect();
                comps.push(json!({"i": i, "j": j, "l": l, "g_degree": dg, "f_degree": df, "g": g, "f": fi, "out": out}));
            }
        }
        let ids: Vec<Vec<String>> = self.identities.iter().map(|v| v.iter().map(|x| f.format(x)).collect()).collect();
        json!({"n": self.n, "objects": self.objects, "homs": homs, "compositions": comps, "identities": ids})
    }

    pub fn from_json(field: Field, v: &Value) -> Result<FiniteCategoryPresentation> {
        let bad = |m: &str| Error::Parse(format!("category: {m}"));
        let n = v["n"].as_i64().ok_or_else(|| bad("missing n"))?;
        let objects: Vec<String> = serde_json::from_value(v["objects"].clone()).map_err(|e| bad(&e.to_string()))?;
        let mut cat = FiniteCategoryPresentation::new(field, n, objects);
        let homs = v["homs"].as_object().ok_or_else(|| bad("missing homs"))?;
        for (k, d) in homs {
            let parts: Vec<i64> = k.split(',').map(|s| s.trim().parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad(k))?;
            let [i, j, deg] = parts[..] else { return Err(bad(k)) };
            let dim = d.as_u64().ok_or_else(|| bad(k))? as usize;
            if i < 0 || j < 0 || i as usize >= cat.len() || j as usize >= cat.len() {
                return Err(bad(&format!("object index in {k}")));
            }
            cat.set_hom(i as usize, j as usize, deg, dim);
        }
        for c in v["compositions"].as_array().ok_or_else(|| bad("missing compositions"))? {
            let u = |key: &str| c[key].as_u64().map(|x| x as usize).ok_or_else(|| bad(key));
            let s = |key: &str| c[key].as_i64().ok_or_else(|| bad(key));
            let out: Vec<(usize, String)> = serde_json::from_value(c["out"].clone()).map_err(|e| bad(&e.to_string()))?;
            for (o, val) in out {
                cat.add_composition(u("i")?, u("j")?, u("l")?, s("g_degree")?, s("f_degree")?, u("g")?, u("f")?, o, field.parse_scalar(&val)?);
            }
        }
        let ids: Vec<Vec<String>> = serde_json::from_value(v["identities"].clone()).map_err(|e| bad(&e.to_string()))?;
        if ids.len() != cat.len() {
            return Err(bad("one identity per object"));
        }
        for (i, id) in ids.iter().enumerate() {
            cat.identities[i] = id.iter().map(|x| field.parse_scalar(x)).collect::<Result<_>>()?;
        }
        cat.validate()?;
        Ok(cat)
    }
}

/// `beta_{i,j}^k(g, f)` for `f` in `Hom^k(i, j)`, `g` in `Hom^{n-1-k}(j, i)`;
/// the block has rows indexed by `g` and columns by `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingData {
    pub field: Field,
    pub n: i64,
    blocks: BTreeMap<HomKey, SparseMatrix>,
}

impl PairingData {
    pub fn new(field: Field, n: i64) -> PairingData {
        PairingData { field, n, blocks: BTreeMap::new() }
    }

    pub fn set_block(&mut self, key: HomKey, m: SparseMatrix) {
        self.blocks.insert(key, m);
    }

    pub fn block(&self, key: HomKey) -> Option<&SparseMatrix> {
        self.blocks.get(&key)
    }

    pub fn blocks(&self) -> &BTreeMap<HomKey, SparseMatrix> {
        &self.blocks
    }

    pub fn eval(&self, i: usize, j: usize, k: i64, g: &[Scalar], f: &[Scalar]) -> Result<Scalar> {
        let fld = self.field;
        let Some(m) = self.blocks.get(&(i, j, k)) else { return Ok(fld.zero()) };
        if g.len() != m.nrows() || f.len() != m.ncols() {
            return Err(Error::ShapeMismatch(format!("pairing block ({i}, {j}, {k}) is {}x{}", m.nrows(), m.ncols())));
        }
        Ok(dot(fld, g, &m.apply(f)?))
    }

    pub fn scaled(&self, s: &Scalar) -> PairingData {
        self.scaled_where(|_, _| true, s)
    }

    /// Scales the blocks whose `(source, target)` satisfies `pred`.
    pub fn scaled_where(&self, pred: impl Fn(usize, usize) -> bool, s: &Scalar) -> PairingData {
        let blocks = self
            .blocks
            .iter()
            .map(|(&k, m)| (k, if pred(k.0, k.1) { m.scale(s) } else { m.clone() }))
            .collect();
        PairingData { field: self.field, n: self.n, blocks }
    }

    pub fn permuted(&self, perm: &[usize]) -> PairingData {
        let blocks = self.blocks.iter().map(|(&(i, j, k), m)| ((perm[i], perm[j], k), m.clone())).collect();
        PairingData { field: self.field, n: self.n, blocks }
    }

    pub fn to_json(&self) -> Value {
        let blocks: BTreeMap<String, Value> = self
            .blocks
            .iter()
            .map(|((i, j, k), m)| {
                (format!("{i},{j},{k}"), json!({"rows": m.nrows(), "cols": m.ncols(), "entries": matrix_triplets(m)}))
            })
            .collect();
        json!({"n": self.n, "blocks": blocks})
    }

    pub fn from_json(field: Field, v: &Value) -> Result<PairingData> {
        let bad = |m: &str| Error::Parse(format!("pairing: {m}"));
        let n = v["n"].as_i64().ok_or_else(|| bad("missing n"))?;
        let mut p = PairingData::new(field, n);
        for (k, b) in v["blocks"].as_object().ok_or_else(|| bad("missing blocks"))? {
            let parts: Vec<i64> = k.split(',').map(|s| s.trim().parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad(k))?;
            let [i, j, deg] = parts[..] else { return Err(bad(k)) };
            if i < 0 || j < 0 {
                return Err(bad(k));
            }
            let rows = b["rows"].as_u64().ok_or_else(|| bad("rows"))? as usize;
            let cols = b["cols"].as_u64().ok_or_else(|| bad("cols"))? as usize;
            let trips: Vec<(usize, usize, String)> = serde_json::from_value(b["entries"].clone()).map_err(|e| bad(&e.to_string()))?;
            p.set_block((i as usize, j as usize, deg), matrix_from_triplets(field, rows, cols, &trips)?);
        }
        Ok(p)
    }
}

/// `beta_{i,j}^k(g, f) = tr_i(g o f)` with `tr_i` a functional on `Hom^{n-1}(i, i)`.
pub fn trace_pairing(cat: &FiniteCategoryPresentation, traces: &[Vector]) -> Result<PairingData> {
    let f = cat.field;
    let n1 = cat.n - 1;
    if traces.len() != cat.len() {
        return Err(Error::ShapeMismatch("one trace per object".to_string()));
    }
    let mut p = PairingData::new(f, cat.n);
    for (&(i, j, k), &cols) in cat.homs() {
        let rows = cat.dim(j, i, n1 - k);
        if rows == 0 {
            continue;
        }
        if traces[i].len() != cat.dim(i, i, n1) {
            return Err(Error::ShapeMismatch(format!("trace of object {i} has the wrong length")));
        }
        let m = SparseMatrix::from_dense_fn(f, rows, cols, |r, c| {
            let gf = cat.compose(i, j, i, n1 - k, &cat.basis(j, i, n1 - k, r), k, &cat.basis(i, j, k, c));
            dot(f, &traces[i], &gf)
        });
        p.set_block((i, j, k), m);
    }
    Ok(p)
}

/// The dual basis vector of the single basis element of each `Hom^{n-1}(i, i)`.
pub fn standard_traces(cat: &FiniteCategoryPresentation) -> Result<Vec<Vector>> {
    (0..cat.len())
        .map(|i| match cat.dim(i, i, cat.n - 1) {
            1 => Ok(vec![cat.field.one()]),
            d => Err(Error::HypothesisFailed(format!("dim Hom(X{i}, X{i}[n-1]) = {d}, expected 1"))),
        })
        .collect()
}

/// One object with `Hom = K[u]/u^2`, `|u| = n - 1`.
pub fn frobenius_category(field: Field, n: i64) -> Result<FiniteCategoryPresentation> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let n1 = n - 1;
    let mut c = FiniteCategoryPresentation::new(field, n, vec!["L".to_string()]);
    c.set_hom(0, 0, 0, 1);
    c.set_hom(0, 0, n1, 1);
    c.set_identity(0, vec![field.one()]);
    c.add_composition(0, 0, 0, 0, 0, 0, 0, 0, field.one());
    c.add_composition(0, 0, 0, 0, n1, 0, 0, 0, field.one());
    c.add_composition(0, 0, 0, n1, 0, 0, 0, 0, field.one());
    c.validate()?;
    Ok(c)
}

/// Zigzag algebra of `A_2`: `a : 1 -> 2`, `b : 2 -> 1` with `b a = f_1`,
/// `a b = f_2` spanning `Hom^{n-1}(i, i)`.
pub fn zigzag_a2(field: Field, n: i64) -> Result<FiniteCategoryPresentation> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let n1 = n - 1;
    let (da, db) = (n1 / 2, n1 - n1 / 2);
    let one = field.one();
    let mut c = FiniteCategoryPresentation::new(field, n, vec!["1".to_string(), "2".to_string()]);
    for i in 0..2 {
        c.set_hom(i, i, 0, 1);
        c.set_hom(i, i, n1, 1);
        c.set_identity(i, vec![one.clone()]);
    }
    c.set_hom(0, 1, da, 1);
    c.set_hom(1, 0, db, 1);
    let degs: Vec<HomKey> = c.homs().keys().copied().collect();
    for &(i, j, d) in &degs {
        c.add_composition(i, j, j, 0, d, 0, 0, 0, one.clone());
        if d != 0 || i != j {
            c.add_composition(i, i, j, d, 0, 0, 0, 0, one.clone());
        }
    }
    c.add_composition(0, 1, 0, db, da, 0, 0, 0, one.clone());
    c.add_composition(1, 0, 1, da, db, 0, 0, 0, one);
    c.validate()?;
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nondegeneracy {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub nondegenerate: bool,
}

pub fn nondegenerate(m: &SparseMatrix) -> Nondegeneracy {
    let r = rank(m);
    Nondegeneracy { rows: m.nrows(), cols: m.ncols(), rank: r, nondegenerate: m.nrows() == m.ncols() && r == m.nrows() }
}

/// Every `(i, j, k)` with `Hom^k(i, j)` or `Hom^{n-1-k}(j, i)` nonzero.
pub fn pairing_nondegenerate(cat: &FiniteCategoryPresentation, p: &PairingData) -> Vec<(HomKey, Nondegeneracy)> {
    let n1 = cat.n - 1;
    let mut keys: BTreeSet<HomKey> = cat.homs().keys().copied().collect();
    keys.extend(cat.homs().keys().map(|&(i, j, d)| (j, i, n1 - d)));
    keys.into_iter()
        .map(|(i, j, k)| {
            let (rows, cols) = (cat.dim(j, i, n1 - k), cat.dim(i, j, k));
            let m = p.block((i, j, k)).cloned().unwrap_or_else(|| SparseMatrix::zeros(cat.field, rows, cols));
            ((i, j, k), nondegenerate(&m))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub i: usize,
    pub j: usize,
    pub k: i64,
    /// in `Hom^k(i, j)`
    pub f: Vector,
    /// in `Hom^{n-1-k}(j, i)`
    pub g: Vector,
}

/// All basis pairs.
pub fn basis_samples(cat: &FiniteCategoryPresentation) -> Vec<Sample> {
    let n1 = cat.n - 1;
    let mut out = Vec::new();
    for (&(i, j, k), &cols) in cat.homs() {
        for r in 0..cat.dim(j, i, n1 - k) {
            for c in 0..cols {
                out.push(Sample { i, j, k, f: cat.basis(i, j, k, c), g: cat.basis(j, i, n1 - k, r) });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sample: usize,
    pub i: usize,
    pub j: usize,
    pub k: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BifunctorialityReport {
    pub samples: usize,
    pub identity1: Vec<Witness>,
    pub identity2: Vec<Witness>,
}

impl BifunctorialityReport {
    pub fn pass(&self) -> bool {
        self.identity1.is_empty() && self.identity2.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// `beta_{X,Y}(g, f) = beta_{X,X[n-1]}(Id, g o f)` and
/// `beta_{X,Y}(g, f) = beta_{Y,X[n-1]}(f[n-1], g)` on each sample.
pub fn bifunctoriality_check(cat: &FiniteCategoryPresentation, p: &PairingData, samples: &[Sample]) -> Result<BifunctorialityReport> {
    let fld = cat.field;
    let n1 = cat.n - 1;
    let mut identity1 = Vec::new();
    let mut identity2 = Vec::new();
    for (s, smp) in samples.iter().enumerate() {
        let Sample { i, j, k, f, g } = smp;
        let (i, j, k) = (*i, *j, *k);
        let base = p.eval(i, j, k, g, f)?;
        let gf = cat.compose(i, j, i, n1 - k, g, k, f);
        let one = p.eval(i, i, n1, cat.identity(i), &gf)?;
        let two = p.eval(j, i, n1 - k, f, g)?;
        let w = |rhs: &Scalar| Witness { sample: s, i, j, k, lhs: fld.format(&base), rhs: fld.format(rhs) };
        if one != base {
            identity1.push(w(&one));
        }
        if two != base {
            identity2.push(w(&two));
        }
    }
    Ok(BifunctorialityReport { samples: samples.len(), identity1, identity2 })
}

/// Generator `f_i` of each `Hom^{n-1}(i, i)`: its single basis vector.
pub fn default_generators(cat: &FiniteCategoryPresentation) -> Result<Vec<Vector>> {
    standard_traces(cat)
}

/// Shortest chains from object 0 to every object along nonzero `Hom^*`.
pub fn spanning_chains(cat: &FiniteCategoryPresentation) -> Result<Vec<Vec<usize>>> {
    let m = cat.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut seen = vec![false; m];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..m {
            if !seen[j] && !cat.degrees(i, j).is_empty() {
                seen[j] = true;
                parent[j] = Some(i);
                queue.push_back(j);
            }
        }
    }
    if let Some(j) = seen.iter().position(|s| !s) {
        return Err(Error::HypothesisFailed(format!("no chain of nonzero morphisms from X0 to X{j}")));
    }
    Ok((0..m)
        .map(|j| {
            let mut c = vec![j];
            while let Some(p) = parent[*c.last().expect("nonempty")] {
                c.push(p);
            }
            c.reverse();
            c
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub i: usize,
    pub j: usize,
    pub m: i64,
    /// `f_i = a_i f_ji o f_ij`
    pub a_i: Scalar,
    /// `f_j[m] = a_j f_ij[n-1] o f_ji`
    pub a_j: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarReport {
    pub c: Scalar,
    pub per_object: Vec<Scalar>,
    pub links: Vec<Link>,
}

impl ScalarReport {
    pub fn to_json(&self, field: Field) -> Value {
        let links: Vec<Value> = self
            .links
            .iter()
            .map(|l| json!({"i": l.i, "j": l.j, "m": l.m, "a_i": field.format(&l.a_i), "a_j": field.format(&l.a_j)}))
            .collect();
        let per: Vec<String> = self.per_object.iter().map(|c| field.format(c)).collect();
        json!({"c": field.format(&self.c), "per_object": per, "links": links})
    }
}

fn single(fld: Field, v: &[Scalar], what: &str) -> Result<Scalar> {
    match v {
        [x] if !fld.is_zero(x) => Ok(x.clone()),
        _ => Err(Error::HypothesisFailed(format!("{what} is not a nonzero multiple of the generator"))),
    }
}

/// The constant `c` with `b = c a`: per-object ratios on `(Id, f_i)`, then
/// propagated along the chains through `f_i = a_i f_ji o f_ij`.
pub fn cy_scalar(
    cat: &FiniteCategoryPresentation,
    a: &PairingData,
    b: &PairingData,
    generators: &[Vector],
    chains: &[Vec<usize>],
) -> Result<ScalarReport> {
    let fld = cat.field;
    let n1 = cat.n - 1;
    let m = cat.len();
    for i in 0..m {
        let d = cat.dim(i, i, n1);
        if d != 1 {
            return Err(Error::HypothesisFailed(format!("dim Hom(X{i}, X{i}[n-1]) = {d}, expected 1")));
        }
    }
    if generators.len() != m {
        return Err(Error::HypothesisFailed("one generator per object".to_string()));
    }
    for (i, g) in generators.iter().enumerate() {
        single(fld, g, &format!("generator f_{i}"))?;
    }
    let root = chains.first().and_then(|c| c.first()).copied();
    let mut reached = vec![false; m];
    for (ci, chain) in chains.iter().enumerate() {
        if chain.first().copied() != root || chain.iter().any(|&x| x >= m) {
            return Err(Error::HypothesisFailed(format!("chain {ci} does not start at the common root")));
        }
        for w in chain.windows(2) {
            if cat.degrees(w[0], w[1]).is_empty() {
                return Err(Error::HypothesisFailed(format!("Hom^*(X{}, X{}) = 0 in chain {ci}", w[0], w[1])));
            }
        }
        for &x in chain {
            reached[x] = true;
        }
    }
    if let Some(i) = reached.iter().position(|r| !r) {
        return Err(Error::HypothesisFailed(format!("X{i} is not reached by any chain")));
    }

    let mut per_object = Vec::with_capacity(m);
    let mut alpha_id = Vec::with_capacity(m);
    let mut beta_id = Vec::with_capacity(m);
    for i in 0..m {
        let av = a.eval(i, i, n1, cat.identity(i), &generators[i])?;
        let bv = b.eval(i, i, n1, cat.identity(i), &generators[i])?;
        if fld.is_zero(&av) || fld.is_zero(&bv) {
            return Err(Error::HypothesisFailed(format!("a pairing vanishes on (Id, f_{i})")));
        }
        per_object.push(fld.div(&bv, &av).expect("nonzero"));
        alpha_id.push(av);
        beta_id.push(bv);
    }

    let mut links = Vec::new();
    let mut done = BTreeSet::new();
    for chain in chains {
        for w in chain.windows(2) {
            let (i, j) = (w[0], w[1]);
            if !done.insert((i, j)) {
                continue;
            }
            let (mdeg, f_ij, f_ji) = find_link(cat, a, i, j)?;
            let h_i = cat.compose(i, j, i, n1 - mdeg, &f_ji, mdeg, &f_ij);
            let h_j = cat.compose(j, i, j, mdeg, &f_ij, n1 - mdeg, &f_ji);
            let a_i = fld.div(&single(fld, &generators[i], "f_i")?, &single(fld, &h_i, &format!("f_{j}{i} o f_{i}{j}"))?).expect("nonzero");
            let a_j = fld.div(&single(fld, &generators[j], "f_j")?, &single(fld, &h_j, &format!("f_{i}{j} o f_{j}{i}"))?).expect("nonzero");
            let ratio = fld.div(&a_i, &a_j).expect("nonzero");
            if alpha_id[i] != fld.mul(&ratio, &alpha_id[j]) {
                return Err(Error::HypothesisFailed(format!("first pairing is not bifunctorial between X{i} and X{j}")));
            }
            if beta_id[i] != fld.mul(&ratio, &beta_id[j]) || per_object[i] != per_object[j] {
                return Err(Error::Inconsistent { i, j });
            }
            links.push(Link { i, j, m: mdeg, a_i, a_j });
        }
    }
    Ok(ScalarReport { c: per_object[0].clone(), per_object, links })
}

/// Smallest `m` and basis `f_ij` in `Hom^m(i, j)` with some basis `f_ji`
/// pairing nontrivially against it under `a`.
fn find_link(cat: &FiniteCategoryPresentation, a: &PairingData, i: usize, j: usize) -> Result<(i64, Vector, Vector)> {
    let n1 = cat.n - 1;
    for m in cat.degrees(i, j) {
        for c in 0..cat.dim(i, j, m) {
            let f_ij = cat.basis(i, j, m, c);
            for r in 0..cat.dim(j, i, n1 - m) {
                let f_ji = cat.basis(j, i, n1 - m, r);
                if !cat.field.is_zero(&a.eval(i, j, m, &f_ji, &f_ij)?) {
                    return Ok((m, f_ij, f_ji));
                }
            }
        }
    }
    Err(Error::HypothesisFailed(format!("first pairing is degenerate on Hom^*(X{i}, X{j})")))
}

/// Composition-to-`H^0` trace pairing `H^{-d}(e_v Γ e_w) x H^d(e_w Γ e_v) -> K`:
/// product of cocycle representatives, read off in `H^0(e_v Γ e_v)`.
pub fn ginzburg_trace_pairing(g: &Ginzburg, v: usize, w: usize, d: i64, field: Field) -> Result<SparseMatrix> {
    let lo = -d.abs() - 1;
    let (cx, bx) = Cell::build(g, v, w, lo).complex(g, field)?;
    let (cy, by) = Cell::build(g, w, v, lo).complex(g, field)?;
    let (c0, b0) = Cell::build(g, v, v, -1).complex(g, field)?;
    let hx = cx.homology_at(d)?;
    let hy = cy.homology_at(-d)?;
    let h0 = c0.homology_at(0)?;
    if h0.dim != 1 {
        return Err(Error::HypothesisFailed(format!("dim H^0(e_v Γ e_v) = {}", h0.dim)));
    }
    let empty = Vec::new();
    let (bx, by, b0) = (bx.get(&d).unwrap_or(&empty), by.get(&-d).unwrap_or(&empty), b0.get(&0).unwrap_or(&empty));
    let index: BTreeMap<&[u16], usize> = b0.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut trip = Vec::new();
    for (r, y) in hy.representatives.iter().enumerate() {
        for (c, x) in hx.representatives.iter().enumerate() {
            let mut z = vec![field.zero(); b0.len()];
            for (xi, xv) in x.iter().enumerate().filter(|(_, v)| !field.is_zero(v)) {
                for (yi, yv) in y.iter().enumerate().filter(|(_, v)| !field.is_zero(v)) {
                    let mut steps = bx[xi].clone();
                    steps.extend_from_slice(&by[yi]);
                    let at = *index
                        .get(steps.as_slice())
                        .ok_or_else(|| Error::InvalidOperation("product leaves the degree-0 cell".to_string()))?;
                    z[at] = field.add(&z[at], &field.mul(xv, yv));
                }
            }
            let class = h0.class_of(&z)?;
            trip.push((r, c, class[0].clone()));
        }
    }
    SparseMatrix::from_triplets(field, hy.dim, hx.dim, trip)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaChoice {
    pub w: i64,
    pub sigma: String,
    /// `tau_{-w} <= sigma_{-w}`
    pub within_bounds: bool,
    /// `[sigma_{-w}, -tau_w]` misses the spectrum
    pub gap_clear: bool,
}

pub fn gap_clear(spec: &BTreeSet<Rat>, lo: &Rat, hi: &Rat) -> bool {
    lo > hi || spec.range(lo.clone()..=hi.clone()).next().is_none()
}

/// `sigma_{-w} = -tau_w + tau_0` for `w >= 1` in the window, checked against
/// the spectrum of the reversed pair.
pub fn choose_sigmas(table: &SlopeTable, spectra: &SpectrumSet, i: usize, j: usize) -> Vec<SigmaChoice> {
    let empty = BTreeSet::new();
    let spec = spectra.get(&(j, i)).unwrap_or(&empty);
    let Some(t0) = table.get(i, j, 0) else { return Vec::new() };
    let mut out = Vec::new();
    for w in 1..=table.window.1.min(-table.window.0) {
        let (Some(tw), Some(tmw)) = (table.get(i, j, w), table.get(i, j, -w)) else { continue };
        let neg = tw.neg();
        let sigma = neg.add(t0);
        out.push(SigmaChoice {
            w,
            within_bounds: tmw <= &sigma,
            gap_clear: gap_clear(spec, &sigma, &neg),
            sigma: sigma.to_string(),
        });
    }
    out
}

/// `sigma_{-w}` must decrease in `w`.
pub fn sigmas_decreasing(choices: &[SigmaChoice]) -> bool {
    let vals: Vec<Rat> = choices.iter().filter_map(|c| c.sigma.parse().ok()).collect();
    vals.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_dual_of_a_point() {
        let c = GradedComplex::from_dims(Field::Rational, BTreeMap::from([(2, 1)]));
        let d = shifted_dual(&c, 3);
        assert_eq!(d.spaces(), &BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn zigzag_is_a_category() {
        for n in 2..6 {
            zigzag_a2(Field::Rational, n).unwrap();
            frobenius_category(Field::Prime(7), n).unwrap();
        }
    }
}
