//! Z-graded cochain complexes over an exact field.
//!
//! Differentials raise degree by one; `diffs[k]` maps degree `k` to `k + 1`
//! and has shape `(dim(k+1), dim(k))`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{self, cohomology_at, rank, Junction, SparseMatrix, Vector};
use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    field: Field,
    spaces: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, SparseMatrix>,
}

fn sign(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

impl GradedComplex {
    /// Validates shapes and d^2 = 0.
    pub fn new(
        field: Field,
        spaces: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, SparseMatrix>,
    ) -> Result<GradedComplex> {
        let spaces: BTreeMap<i64, usize> = spaces.into_iter().filter(|(_, d)| *d > 0).collect();
        let dim = |k: i64| spaces.get(&k).copied().unwrap_or(0);
        let mut kept = BTreeMap::new();
        for (k, m) in diffs {
            if m.field() != field {
                return Err(Error::FieldMismatch(format!("differential at degree {k}")));
            }
            if m.nrows() != dim(k + 1) || m.ncols() != dim(k) {
                return Err(Error::ShapeMismatch(format!(
                    "d_{k} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    dim(k + 1),
                    dim(k)
                )));
            }
            if !m.is_zero() {
                kept.insert(k, m);
            }
        }
        let c = GradedComplex { field, spaces, diffs: kept };
        c.check_d_squared()?;
        Ok(c)
    }

    pub fn zero(field: Field) -> GradedComplex {
        GradedComplex { field, spaces: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// Complex with zero differential.
    pub fn from_dims(field: Field, spaces: BTreeMap<i64, usize>) -> GradedComplex {
        GradedComplex::new(field, spaces, BTreeMap::new()).expect("zero differential")
    }

    fn check_d_squared(&self) -> Result<()> {
        for (&k, d) in &self.diffs {
            if let Some(d2) = self.diffs.get(&(k + 1)) {
                if !d2.mul(d)?.is_zero() {
                    return Err(Error::DSquareNonzero(k));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, k: i64) -> usize {
        self.spaces.get(&k).copied().unwrap_or(0)
    }

    pub fn spaces(&self) -> &BTreeMap<i64, usize> {
        &self.spaces
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().sum()
    }

    /// Degrees with a nonzero space.
    pub fn degrees(&self) -> Vec<i64> {
        self.spaces.keys().copied().collect()
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        Some((*self.spaces.keys().next()?, *self.spaces.keys().next_back()?))
    }

    pub fn diff(&self, k: i64) -> SparseMatrix {
        self.diffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.field, self.dim(k + 1), self.dim(k)))
    }

    pub fn homology_at(&self, k: i64) -> Result<Junction> {
        cohomology_at(&self.diff(k - 1), &self.diff(k))
    }

    /// Homology dimension in every supported degree (zeros included).
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        self.spaces
            .keys()
            .map(|&k| {
                let dim = self.dim(k) - rank(&self.diff(k)) - rank(&self.diff(k - 1));
                (k, dim)
            })
            .collect()
    }

    pub fn homology_dim(&self, k: i64) -> usize {
        if self.dim(k) == 0 {
            return 0;
        }
        self.dim(k) - rank(&self.diff(k)) - rank(&self.diff(k - 1))
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology().values().all(|&d| d == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.spaces.iter().map(|(&k, &d)| if sign(k) { -(d as i64) } else { d as i64 }).sum()
    }

    pub fn homology_euler_characteristic(&self) -> i64 {
        self.homology()
            .into_iter()
            .map(|(k, d)| if sign(k) { -(d as i64) } else { d as i64 })
            .sum()
    }

    /// `C[m]^k = C^{k+m}` with differential `(-1)^m d`.
    pub fn shift(&self, m: i64) -> GradedComplex {
        let s = self.field.sign(sign(m));
        GradedComplex {
            field: self.field,
            spaces: self.spaces.iter().map(|(&k, &d)| (k - m, d)).collect(),
            diffs: self.diffs.iter().map(|(&k, d)| (k - m, d.scale(&s))).collect(),
        }
    }

    /// `(C^v)^k = (C^{-k})^*` with `d^v phi = -(-1)^{deg phi} phi o d`.
    pub fn dualize(&self) -> GradedComplex {
        GradedComplex {
            field: self.field,
            spaces: self.spaces.iter().map(|(&k, &d)| (-k, d)).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(&j, d)| {
                    // d_j : C^j -> C^{j+1} dualizes to degree -j-1 -> -j
                    let k = -j - 1;
                    (k, d.transpose().scale(&self.field.sign(!sign(k))))
                })
                .collect(),
        }
    }

    /// Same spaces, differential `(-1)^k d` in degree `k`.
    pub fn twist_sign(&self) -> GradedComplex {
        GradedComplex {
            field: self.field,
            spaces: self.spaces.clone(),
            diffs: self
                .diffs
                .iter()
                .map(|(&k, d)| (k, d.scale(&self.field.sign(sign(k)))))
                .collect(),
        }
    }

    pub fn direct_sum(&self, o: &GradedComplex) -> Result<GradedComplex> {
        let mut b = SumBuilder::new(self.field);
        let x = b.piece(('x', 0), self, 0);
        let y = b.piece(('y', 0), o, 0);
        for k in b.degrees() {
            b.add_block(k, x, x, &self.diff(k), &self.field.one());
            b.add_block(k, y, y, &o.diff(k), &self.field.one());
        }
        b.finish()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let spaces: BTreeMap<String, usize> =
            self.spaces.iter().map(|(k, d)| (k.to_string(), *d)).collect();
        let diffs: BTreeMap<String, Vec<(usize, usize, String)>> = self
            .diffs
            .iter()
            .map(|(k, m)| (k.to_string(), matrix_triplets(m)))
            .collect();
        serde_json::to_value(ComplexJson { spaces, diffs }).expect("serializable")
    }

    pub fn from_json(field: Field, v: &serde_json::Value) -> Result<GradedComplex> {
        let cj: ComplexJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut spaces = BTreeMap::new();
        for (k, d) in cj.spaces {
            spaces.insert(parse_degree(&k)?, d);
        }
        let dim = |k: i64| spaces.get(&k).copied().unwrap_or(0);
        let mut diffs = BTreeMap::new();
        for (k, trips) in cj.diffs {
            let k = parse_degree(&k)?;
            diffs.insert(k, matrix_from_triplets(field, dim(k + 1), dim(k), &trips)?);
        }
        GradedComplex::new(field, spaces, diffs)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    spaces: BTreeMap<String, usize>,
    #[serde(default)]
    diffs: BTreeMap<String, Vec<(usize, usize, String)>>,
}

pub(crate) fn parse_degree(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad degree key {s:?}")))
}

pub fn matrix_triplets(m: &SparseMatrix) -> Vec<(usize, usize, String)> {
    m.entries().map(|(r, c, v)| (r, c, v.to_string())).collect()
}

pub fn matrix_from_triplets(
    field: Field,
    nrows: usize,
    ncols: usize,
    trips: &[(usize, usize, String)],
) -> Result<SparseMatrix> {
    let mut entries = Vec::with_capacity(trips.len());
    for (r, c, v) in trips {
        entries.push((*r, *c, field.parse_scalar(v)?));
    }
    SparseMatrix::from_triplets(field, nrows, ncols, entries)
}

/// Builds a complex whose degree-k space is a direct sum of pieces, each a
/// shifted copy of a level complex: piece `(C, s)` contributes `C^{k+s}`.
pub struct SumBuilder {
    field: Field,
    pieces: Vec<(PieceKey, BTreeMap<i64, usize>, i64)>,
    triplets: BTreeMap<i64, Vec<(usize, usize, Scalar)>>,
}

pub type PieceKey = (char, i64);

impl SumBuilder {
    pub fn new(field: Field) -> SumBuilder {
        SumBuilder { field, pieces: Vec::new(), triplets: BTreeMap::new() }
    }

    pub fn piece(&mut self, key: PieceKey, c: &GradedComplex, shift: i64) -> usize {
        self.pieces.push((key, c.spaces.clone(), shift));
        self.pieces.len() - 1
    }

    pub fn find(&self, key: PieceKey) -> Option<usize> {
        self.pieces.iter().position(|p| p.0 == key)
    }

    pub fn keys(&self) -> Vec<PieceKey> {
        self.pieces.iter().map(|p| p.0).collect()
    }

    pub fn piece_dim(&self, piece: usize, k: i64) -> usize {
        let (_, dims, s) = &self.pieces[piece];
        dims.get(&(k + *s)).copied().unwrap_or(0)
    }

    pub fn offset(&self, piece: usize, k: i64) -> usize {
        (0..piece).map(|p| self.piece_dim(p, k)).sum()
    }

    pub fn dim(&self, k: i64) -> usize {
        (0..self.pieces.len()).map(|p| self.piece_dim(p, k)).sum()
    }

    /// Every total degree where some piece is nonzero.
    pub fn degrees(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self
            .pieces
            .iter()
            .flat_map(|(_, dims, s)| dims.keys().map(move |j| j - s))
            .collect();
        set.into_iter().collect()
    }

    /// Adds `scale * m` as the component from `from` (total degree k) to `to`
    /// (total degree k+1).
    pub fn add_block(&mut self, k: i64, from: usize, to: usize, m: &SparseMatrix, scale: &Scalar) {
        let (nr, nc) = (self.piece_dim(to, k + 1), self.piece_dim(from, k));
        if nr == 0 || nc == 0 {
            return;
        }
        assert_eq!((m.nrows(), m.ncols()), (nr, nc), "block shape at degree {k}");
        let (r0, c0) = (self.offset(to, k + 1), self.offset(from, k));
        let f = self.field;
        let t = self.triplets.entry(k).or_default();
        for (r, c, v) in m.entries() {
            t.push((r0 + r, c0 + c, f.mul(v, scale)));
        }
    }

    pub fn finish(self) -> Result<GradedComplex> {
        let degrees = self.degrees();
        let spaces: BTreeMap<i64, usize> = degrees.iter().map(|&k| (k, self.dim(k))).collect();
        let mut diffs = BTreeMap::new();
        let dims: Vec<(i64, usize, usize)> =
            self.triplets.keys().map(|&k| (k, self.dim(k + 1), self.dim(k))).collect();
        let mut triplets = self.triplets;
        for (k, nr, nc) in dims {
            let t = triplets.remove(&k).unwrap_or_default();
            let m = SparseMatrix::from_triplets(self.field, nr, nc, t)?;
            diffs.insert(k, m);
        }
        GradedComplex::new(self.field, spaces, diffs)
    }

    /// Skeleton of the result without validation; used to inspect layouts.
    pub fn layout(&self) -> BTreeMap<i64, Vec<(PieceKey, usize, usize)>> {
        self.degrees()
            .into_iter()
            .map(|k| {
                let v = (0..self.pieces.len())
                    .map(|p| (self.pieces[p].0, self.offset(p, k), self.piece_dim(p, k)))
                    .collect();
                (k, v)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: GradedComplex,
    target: GradedComplex,
    blocks: BTreeMap<i64, SparseMatrix>,
    degree_shift: i64,
}

impl ChainMap {
    /// Validated map: `d_T f = (-1)^s f d_S` where `s` is the degree shift.
    pub fn new(
        source: GradedComplex,
        target: GradedComplex,
        blocks: BTreeMap<i64, SparseMatrix>,
        degree_shift: i64,
    ) -> Result<ChainMap> {
        let m = ChainMap::unchecked(source, target, blocks, degree_shift)?;
        m.check("map")?;
        Ok(m)
    }

    /// Checks shapes only.
    pub fn unchecked(
        source: GradedComplex,
        target: GradedComplex,
        blocks: BTreeMap<i64, SparseMatrix>,
        degree_shift: i64,
    ) -> Result<ChainMap> {
        if source.field != target.field {
            return Err(Error::FieldMismatch("chain map endpoints".to_string()));
        }
        let mut kept = BTreeMap::new();
        for (k, b) in blocks {
            let (nr, nc) = (target.dim(k + degree_shift), source.dim(k));
            if b.nrows() != nr || b.ncols() != nc {
                return Err(Error::ShapeMismatch(format!(
                    "block at degree {k} is {}x{}, expected {nr}x{nc}",
                    b.nrows(),
                    b.ncols()
                )));
            }
            if !b.is_zero() {
                kept.insert(k, b);
            }
        }
        Ok(ChainMap { source, target, blocks: kept, degree_shift })
    }

    pub fn identity(c: &GradedComplex) -> ChainMap {
        let blocks = c.spaces.iter().map(|(&k, &d)| (k, SparseMatrix::identity(c.field, d))).collect();
        ChainMap { source: c.clone(), target: c.clone(), blocks, degree_shift: 0 }
    }

    pub fn zero(source: &GradedComplex, target: &GradedComplex, shift: i64) -> ChainMap {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            blocks: BTreeMap::new(),
            degree_shift: shift,
        }
    }

    pub fn source(&self) -> &GradedComplex {
        &self.source
    }

    pub fn target(&self) -> &GradedComplex {
        &self.target
    }

    pub fn degree_shift(&self) -> i64 {
        self.degree_shift
    }

    pub fn field(&self) -> Field {
        self.source.field
    }

    pub fn blocks(&self) -> &BTreeMap<i64, SparseMatrix> {
        &self.blocks
    }

    pub fn block(&self, k: i64) -> SparseMatrix {
        self.blocks.get(&k).cloned().unwrap_or_else(|| {
            SparseMatrix::zeros(
                self.source.field,
                self.target.dim(k + self.degree_shift),
                self.source.dim(k),
            )
        })
    }

    pub fn set_block(&mut self, k: i64, m: SparseMatrix) -> Result<()> {
        let (nr, nc) = (self.target.dim(k + self.degree_shift), self.source.dim(k));
        if m.nrows() != nr || m.ncols() != nc {
            return Err(Error::ShapeMismatch(format!("replacement block at degree {k}")));
        }
        self.blocks.insert(k, m);
        Ok(())
    }

    /// The first degree where the Koszul-signed commutation fails.
    pub fn check(&self, what: &str) -> Result<()> {
        let s = self.field().sign(sign(self.degree_shift));
        let mut degrees: BTreeSet<i64> = self.source.spaces.keys().copied().collect();
        degrees.extend(self.source.spaces.keys().map(|k| k - 1));
        for k in degrees {
            let lhs = self.target.diff(k + self.degree_shift).mul(&self.block(k))?;
            let rhs = self.block(k + 1).mul(&self.source.diff(k))?.scale(&s);
            if lhs != rhs {
                return Err(Error::NotAChainMap { what: what.to_string(), degree: k });
            }
        }
        Ok(())
    }

    pub fn is_chain_map(&self) -> bool {
        self.check("map").is_ok()
    }

    /// `self o other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target.spaces != self.source.spaces {
            return Err(Error::ShapeMismatch("composition of incompatible maps".to_string()));
        }
        let mut blocks = BTreeMap::new();
        for &k in other.source.spaces.keys() {
            let m = self.block(k + other.degree_shift).mul(&other.block(k))?;
            blocks.insert(k, m);
        }
        ChainMap::unchecked(
            other.source.clone(),
            self.target.clone(),
            blocks,
            self.degree_shift + other.degree_shift,
        )
    }

    pub fn scale(&self, s: &Scalar) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().map(|(k, b)| (*k, b.scale(s))).collect(),
            degree_shift: self.degree_shift,
        }
    }

    pub fn add(&self, o: &ChainMap) -> Result<ChainMap> {
        let mut blocks = self.blocks.clone();
        for (k, b) in &o.blocks {
            let sum = self.block(*k).add(b)?;
            blocks.insert(*k, sum);
        }
        ChainMap::unchecked(self.source.clone(), self.target.clone(), blocks, self.degree_shift)
    }

    /// `(f^v)^k = transpose(f^{-k})` as a map `T^v -> S^v`, for degree-0 `f`.
    pub fn dual(&self) -> Result<ChainMap> {
        if self.degree_shift != 0 {
            return Err(Error::ShapeMismatch("dual of a shifted map".to_string()));
        }
        let blocks = self.blocks.iter().map(|(k, b)| (-k, b.transpose())).collect();
        ChainMap::new(self.target.dualize(), self.source.dualize(), blocks, 0)
    }

    /// Matrix of the induced map `H^k(S) -> H^{k+s}(T)` in the bases chosen by
    /// `homology_at`.
    pub fn induced(&self, k: i64) -> Result<SparseMatrix> {
        let hs = self.source.homology_at(k)?;
        let ht = self.target.homology_at(k + self.degree_shift)?;
        self.induced_with(k, &hs, &ht)
    }

    pub fn induced_with(&self, k: i64, hs: &Junction, ht: &Junction) -> Result<SparseMatrix> {
        let b = self.block(k);
        let mut cols = Vec::with_capacity(hs.dim);
        for z in &hs.representatives {
            cols.push(ht.class_of(&b.apply(z)?)?);
        }
        Ok(SparseMatrix::from_columns(self.field(), ht.dim, &cols))
    }

    pub fn homology_rank(&self, k: i64) -> Result<usize> {
        Ok(rank(&self.induced(k)?))
    }

    pub fn is_quasi_isomorphism(&self) -> Result<bool> {
        let mut degrees: BTreeSet<i64> = self.source.spaces.keys().copied().collect();
        degrees.extend(self.target.spaces.keys().map(|k| k - self.degree_shift));
        for k in degrees {
            let m = self.induced(k)?;
            if m.nrows() != m.ncols() || rank(&m) != m.nrows() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let blocks: BTreeMap<String, Vec<(usize, usize, String)>> = self
            .blocks
            .iter()
            .map(|(k, m)| (k.to_string(), matrix_triplets(m)))
            .collect();
        serde_json::json!({ "shift": self.degree_shift, "blocks": blocks })
    }

    pub fn from_json(
        source: &GradedComplex,
        target: &GradedComplex,
        v: &serde_json::Value,
    ) -> Result<ChainMap> {
        #[derive(Deserialize)]
        struct MapJson {
            #[serde(default)]
            shift: i64,
            #[serde(default)]
            blocks: BTreeMap<String, Vec<(usize, usize, String)>>,
        }
        let mj: MapJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let f = source.field;
        let mut blocks = BTreeMap::new();
        for (k, t) in mj.blocks {
            let k = parse_degree(&k)?;
            blocks.insert(k, matrix_from_triplets(f, target.dim(k + mj.shift), source.dim(k), &t)?);
        }
        ChainMap::new(source.clone(), target.clone(), blocks, mj.shift)
    }
}

/// `Cone(f)^k = X^{k+1} + Y^k` with differential `[[-d_X, 0], [f, d_Y]]`.
pub fn cone(f: &ChainMap) -> Result<GradedComplex> {
    if f.degree_shift != 0 {
        return Err(Error::ShapeMismatch("cone of a shifted map".to_string()));
    }
    f.check("cone input")?;
    let (x, y) = (&f.source, &f.target);
    let field = x.field;
    let mut b = SumBuilder::new(field);
    let px = b.piece(('x', 0), x, 1);
    let py = b.piece(('y', 0), y, 0);
    let minus = field.from_int(-1);
    for k in b.degrees() {
        b.add_block(k, px, px, &x.diff(k + 1), &minus);
        b.add_block(k, px, py, &f.block(k + 1), &field.one());
        b.add_block(k, py, py, &y.diff(k), &field.one());
    }
    b.finish()
}

/// `Y -> Cone(f)`.
pub fn cone_inclusion(f: &ChainMap, c: &GradedComplex) -> Result<ChainMap> {
    let (x, y) = (&f.source, &f.target);
    let blocks = y
        .spaces
        .keys()
        .map(|&k| {
            let mut m = SparseMatrix::zeros(x.field, c.dim(k), y.dim(k));
            m.embed(x.dim(k + 1), 0, &SparseMatrix::identity(x.field, y.dim(k)));
            (k, m)
        })
        .collect();
    ChainMap::new(y.clone(), c.clone(), blocks, 0)
}

/// `Cone(f) -> X[1]`.
pub fn cone_projection(f: &ChainMap, c: &GradedComplex) -> Result<ChainMap> {
    let x = &f.source;
    let x1 = x.shift(1);
    let blocks = c
        .spaces
        .keys()
        .map(|&k| {
            let mut m = SparseMatrix::zeros(x.field, x1.dim(k), c.dim(k));
            m.embed(0, 0, &SparseMatrix::identity(x.field, x.dim(k + 1)));
            (k, m)
        })
        .collect();
    ChainMap::new(c.clone(), x1, blocks, 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessEntry {
    pub slot: usize,
    pub degree: i64,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub composite_zero: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub entries: Vec<ExactnessEntry>,
    pub pass: bool,
}

impl ExactnessReport {
    fn from_entries(entries: Vec<ExactnessEntry>) -> ExactnessReport {
        let pass = entries.iter().all(|e| e.ok);
        ExactnessReport { entries, pass }
    }

    pub fn failures(&self) -> Vec<&ExactnessEntry> {
        self.entries.iter().filter(|e| !e.ok).collect()
    }
}

fn junction_entry(
    slot: usize,
    degree: i64,
    incoming: &SparseMatrix,
    outgoing: &SparseMatrix,
) -> Result<ExactnessEntry> {
    let composite_zero = outgoing.mul(incoming)?.is_zero();
    let image_dim = rank(incoming);
    let kernel_dim = exact_linalg::nullity(outgoing);
    Ok(ExactnessEntry {
        slot,
        degree,
        image_dim,
        kernel_dim,
        composite_zero,
        ok: composite_zero && image_dim == kernel_dim,
    })
}

/// Exactness at every interior object of `A_0 -> A_1 -> ... -> A_m`.
pub fn verify_exact(seq: &[ChainMap]) -> Result<ExactnessReport> {
    for w in seq.windows(2) {
        if w[0].target.spaces != w[1].source.spaces {
            return Err(Error::ShapeMismatch("consecutive maps are not composable".to_string()));
        }
    }
    let mut entries = Vec::new();
    for slot in 1..seq.len() {
        let (fin, fout) = (&seq[slot - 1], &seq[slot]);
        let mid = &fin.target;
        let mut degrees: BTreeSet<i64> = mid.spaces.keys().copied().collect();
        degrees.extend(fin.source.spaces.keys().map(|k| k + fin.degree_shift));
        degrees.extend(fout.target.spaces.keys().map(|k| k - fout.degree_shift));
        for k in degrees {
            entries.push(junction_entry(slot, k, &fin.block(k - fin.degree_shift), &fout.block(k))?);
        }
    }
    Ok(ExactnessReport::from_entries(entries))
}

/// `0 -> A --i--> B --p--> C -> 0`.
pub fn verify_short_exact(i: &ChainMap, p: &ChainMap) -> Result<ExactnessReport> {
    let z = GradedComplex::zero(i.field());
    let head = ChainMap::zero(&z, &i.source, 0);
    let tail = ChainMap::zero(&p.target, &z, 0);
    verify_exact(&[head, i.clone(), p.clone(), tail])
}

/// Exactness at every interior term of a sequence of linear maps.
pub fn verify_exact_linear(maps: &[SparseMatrix]) -> Result<ExactnessReport> {
    let mut entries = Vec::new();
    for slot in 1..maps.len() {
        if maps[slot - 1].nrows() != maps[slot].ncols() {
            return Err(Error::ShapeMismatch(format!("maps {} and {slot} do not compose", slot - 1)));
        }
        entries.push(junction_entry(slot, slot as i64, &maps[slot - 1], &maps[slot])?);
    }
    Ok(ExactnessReport::from_entries(entries))
}

/// Long exact homology sequence of `0 -> A --i--> B --p--> C -> 0`.
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    /// `(label, degree, dimension)` of each term in order
    pub terms: Vec<(char, i64, usize)>,
    /// `maps[j]` goes from `terms[j]` to `terms[j + 1]`
    pub maps: Vec<SparseMatrix>,
}

impl LongExactSequence {
    pub fn verify(&self) -> Result<ExactnessReport> {
        verify_exact_linear(&self.maps)
    }
}

pub fn long_exact_sequence(i: &ChainMap, p: &ChainMap) -> Result<LongExactSequence> {
    if i.degree_shift != 0 || p.degree_shift != 0 {
        return Err(Error::ShapeMismatch("long exact sequence of shifted maps".to_string()));
    }
    let (a, b, c) = (&i.source, &i.target, &p.target);
    let all: Vec<i64> = [a, b, c].iter().flat_map(|x| x.spaces.keys().copied()).collect();
    let (Some(&lo), Some(&hi)) = (all.iter().min(), all.iter().max()) else {
        return Ok(LongExactSequence { terms: Vec::new(), maps: Vec::new() });
    };
    let mut ha = BTreeMap::new();
    let mut hb = BTreeMap::new();
    let mut hc = BTreeMap::new();
    for k in lo - 1..=hi + 1 {
        ha.insert(k, a.homology_at(k)?);
        hb.insert(k, b.homology_at(k)?);
        hc.insert(k, c.homology_at(k)?);
    }
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    for k in lo - 1..=hi {
        terms.push(('A', k, ha[&k].dim));
        maps.push(i.induced_with(k, &ha[&k], &hb[&k])?);
        terms.push(('B', k, hb[&k].dim));
        maps.push(p.induced_with(k, &hb[&k], &hc[&k])?);
        terms.push(('C', k, hc[&k].dim));
        maps.push(connecting(i, p, k, &hc[&k], &ha[&(k + 1)])?);
    }
    terms.push(('A', hi + 1, ha[&(hi + 1)].dim));
    Ok(LongExactSequence { terms, maps })
}

/// Snake construction: lift through p, apply d_B, pull back through i.
fn connecting(
    i: &ChainMap,
    p: &ChainMap,
    k: i64,
    hc: &Junction,
    ha_next: &Junction,
) -> Result<SparseMatrix> {
    let b = &i.target;
    let pk = p.block(k);
    let ik1 = i.block(k + 1);
    let mut cols: Vec<Vector> = Vec::with_capacity(hc.dim);
    for z in &hc.representatives {
        let lift = exact_linalg::solve(&pk, z)?
            .ok_or_else(|| Error::ShapeMismatch(format!("p is not surjective at degree {k}")))?;
        let db = b.diff(k).apply(&lift)?;
        let pre = exact_linalg::solve(&ik1, &db)?.ok_or_else(|| {
            Error::ShapeMismatch(format!("sequence is not exact in the middle at degree {}", k + 1))
        })?;
        cols.push(ha_next.class_of(&pre)?);
    }
    Ok(SparseMatrix::from_columns(i.field(), ha_next.dim, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn line(dims: &[(i64, usize)]) -> BTreeMap<i64, usize> {
        dims.iter().copied().collect()
    }

    #[test]
    fn make_complex_examples() {
        let c = GradedComplex::from_dims(q(), line(&[(0, 1)]));
        assert_eq!(c.homology()[&0], 1);

        let id = SparseMatrix::identity(q(), 1);
        let two = GradedComplex::new(q(), line(&[(0, 1), (1, 1)]), [(0, id.clone())].into()).unwrap();
        assert!(two.is_acyclic());

        let three = GradedComplex::new(
            q(),
            line(&[(0, 1), (1, 1), (2, 1)]),
            [(0, id.clone()), (1, id)].into(),
        );
        assert_eq!(three.unwrap_err(), Error::DSquareNonzero(0));
    }

    #[test]
    fn shift_and_dual_round_trip() {
        let d = SparseMatrix::from_ints(q(), &[vec![1, 1]]);
        let c = GradedComplex::new(q(), line(&[(0, 2), (1, 1)]), [(0, d)].into()).unwrap();
        assert_eq!(c.shift(3).shift(-3), c);
        let dd = c.dualize().dualize();
        assert_eq!(dd.spaces(), c.spaces());
        assert_eq!(c.dualize().homology_dim(0), c.homology_dim(0));
        assert_eq!(c.dualize().homology_dim(-1), c.homology_dim(1));
    }

    #[test]
    fn cone_of_identity_and_zero() {
        let d = SparseMatrix::from_ints(q(), &[vec![1, 0]]);
        let c = GradedComplex::new(q(), line(&[(0, 2), (1, 1)]), [(0, d)].into()).unwrap();
        assert!(cone(&ChainMap::identity(&c)).unwrap().is_acyclic());
        let z = cone(&ChainMap::zero(&c, &c, 0)).unwrap();
        assert_eq!(z.homology_dim(0), 1);
        assert_eq!(z.homology_dim(-1), 1);
    }

    #[test]
    fn json_round_trip() {
        let d = SparseMatrix::from_ints(q(), &[vec![2, -1]]);
        let c = GradedComplex::new(q(), line(&[(-1, 2), (0, 1)]), [(-1, d)].into()).unwrap();
        let back = GradedComplex::from_json(q(), &c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
