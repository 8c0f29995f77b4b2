//! Directed and inverse systems of finite complexes, their telescopes at a
//! finite window, limit dimensions, and the slope chooser.
//!
//! Window conventions. The telescope at window `W` uses levels `1..=W`:
//! plain copies of every level and `q`-copies of levels `1..W`. The
//! cotelescope at window `W` uses levels `-W..=0`: plain copies `a` of every
//! level and `q^v`-copies of levels `0, -1, .., -(W-1)`. Both truncations are
//! quasi-isomorphic to their extreme level, which is what makes the limit
//! comparisons meaningful once the system stabilizes inside the window.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{rank, SparseMatrix};
use crate::field::{Field, Rat, Scalar};
use crate::graded_complex::{parse_degree, ChainMap, GradedComplex, SumBuilder};

/// Levels indexed by slope level `w` with continuation maps `maps[w]` from
/// `levels[w]` to `levels[w + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedSystem {
    field: Field,
    levels: BTreeMap<i64, GradedComplex>,
    maps: BTreeMap<i64, ChainMap>,
}

fn parity(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

impl DirectedSystem {
    pub fn new(
        field: Field,
        levels: BTreeMap<i64, GradedComplex>,
        maps: BTreeMap<i64, ChainMap>,
    ) -> Result<DirectedSystem> {
        for (w, m) in &maps {
            let (Some(src), Some(tgt)) = (levels.get(w), levels.get(&(w + 1))) else {
                return Err(Error::IndexOutOfWindow(*w));
            };
            if m.source() != src || m.target() != tgt || m.degree_shift() != 0 {
                return Err(Error::ShapeMismatch(format!("continuation c_{w} endpoints")));
            }
            m.check(&format!("c_{w}"))?;
        }
        for l in levels.values() {
            if l.field() != field {
                return Err(Error::FieldMismatch("level complex".to_string()));
            }
        }
        Ok(DirectedSystem { field, levels, maps })
    }

    /// Same complex at every level in `lo..=hi`, all continuations `f`.
    pub fn constant(c: &GradedComplex, lo: i64, hi: i64, f: &ChainMap) -> Result<DirectedSystem> {
        let levels = (lo..=hi).map(|w| (w, c.clone())).collect();
        let maps = (lo..hi).map(|w| (w, f.clone())).collect();
        DirectedSystem::new(c.field(), levels, maps)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn levels(&self) -> &BTreeMap<i64, GradedComplex> {
        &self.levels
    }

    pub fn maps(&self) -> &BTreeMap<i64, ChainMap> {
        &self.maps
    }

    pub fn level(&self, w: i64) -> Result<&GradedComplex> {
        self.levels.get(&w).ok_or(Error::IndexOutOfWindow(w))
    }

    /// Continuation out of level `w`; the zero map when none was supplied.
    pub fn map(&self, w: i64) -> Result<ChainMap> {
        if let Some(m) = self.maps.get(&w) {
            return Ok(m.clone());
        }
        Ok(ChainMap::zero(self.level(w)?, self.level(w + 1)?, 0))
    }

    /// Induced map `H^k(level_w) -> H^k(level_{w+1})`.
    pub fn induced(&self, w: i64, k: i64) -> Result<SparseMatrix> {
        self.map(w)?.induced(k)
    }

    /// Composite induced map from level `from` up to level `to`.
    pub fn composite(&self, from: i64, to: i64, k: i64) -> Result<SparseMatrix> {
        let d = self.level(from)?.homology_dim(k);
        let mut m = SparseMatrix::identity(self.field, d);
        for w in from..to {
            m = self.induced(w, k)?.mul(&m)?;
        }
        Ok(m)
    }

    /// Every degree appearing in some level.
    pub fn degrees(&self) -> Vec<i64> {
        let s: BTreeSet<i64> = self.levels.values().flat_map(|l| l.degrees()).collect();
        s.into_iter().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: BTreeMap<String, serde_json::Value> =
            self.levels.iter().map(|(w, c)| (w.to_string(), c.to_json())).collect();
        let maps: BTreeMap<String, serde_json::Value> =
            self.maps.iter().map(|(w, m)| (w.to_string(), m.to_json())).collect();
        serde_json::json!({ "levels": levels, "maps": maps })
    }

    pub fn from_json(field: Field, v: &serde_json::Value) -> Result<DirectedSystem> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("system must be an object".into()))?;
        let mut levels = BTreeMap::new();
        if let Some(ls) = obj.get("levels").and_then(|l| l.as_object()) {
            for (w, c) in ls {
                levels.insert(parse_degree(w)?, GradedComplex::from_json(field, c)?);
            }
        } else {
            return Err(Error::Parse("missing \"levels\"".into()));
        }
        let mut maps = BTreeMap::new();
        if let Some(ms) = obj.get("maps").and_then(|m| m.as_object()) {
            for (w, m) in ms {
                let w = parse_degree(w)?;
                let src = levels.get(&w).ok_or(Error::IndexOutOfWindow(w))?;
                let tgt = levels.get(&(w + 1)).ok_or(Error::IndexOutOfWindow(w + 1))?;
                maps.insert(w, ChainMap::from_json(src, tgt, m)?);
            }
        }
        DirectedSystem::new(field, levels, maps)
    }
}

/// Telescope on levels `1..=W`.
///
/// `delta(a) = (-1)^{deg a} d(a)` and
/// `delta(b q) = (-1)^{deg b} (c_w(b) - b + d(b) q)`, with `q` of degree -1.
pub fn telescope(sys: &DirectedSystem, w_max: usize) -> Result<GradedComplex> {
    Ok(telescope_with_layout(sys, w_max)?.0)
}

/// Piece layout per total degree: `(key, offset, dim)`; keys are `('a', w)`
/// for plain copies and `('q', w)` or `('v', u)` for the formal-variable copies.
pub type Layout = BTreeMap<i64, Vec<((char, i64), usize, usize)>>;

pub fn telescope_with_layout(sys: &DirectedSystem, w_max: usize) -> Result<(GradedComplex, Layout)> {
    let w_max = w_max as i64;
    if w_max < 1 {
        return Err(Error::IndexOutOfWindow(w_max));
    }
    let f = sys.field;
    let mut b = SumBuilder::new(f);
    let mut plain = BTreeMap::new();
    let mut qs = BTreeMap::new();
    for w in 1..=w_max {
        plain.insert(w, b.piece(('a', w), sys.level(w)?, 0));
    }
    let mut conts = BTreeMap::new();
    for w in 1..w_max {
        qs.insert(w, b.piece(('q', w), sys.level(w)?, 1));
        let c = sys.map(w)?;
        c.check(&format!("c_{w}"))?;
        conts.insert(w, c);
    }
    for k in b.degrees() {
        for (&w, &p) in &plain {
            let lvl = sys.level(w)?;
            b.add_block(k, p, p, &lvl.diff(k), &f.sign(parity(k)));
        }
        for (&w, &p) in &qs {
            // b q in total degree k has deg b = k + 1
            let j = k + 1;
            let s = f.sign(parity(j));
            let lvl = sys.level(w)?;
            b.add_block(k, p, plain[&(w + 1)], &conts[&w].block(j), &s);
            b.add_block(k, p, plain[&w], &SparseMatrix::identity(f, lvl.dim(j)), &f.neg(&s));
            b.add_block(k, p, p, &lvl.diff(j), &s);
        }
    }
    let layout = b.layout();
    Ok((b.finish()?, layout))
}

fn cotelescope_on(
    sys: &DirectedSystem,
    plain_us: &[i64],
    qv_us: &[i64],
    coupling: &BTreeMap<i64, Scalar>,
) -> Result<(GradedComplex, Layout)> {
    let f = sys.field;
    let mut b = SumBuilder::new(f);
    let mut plain = BTreeMap::new();
    let mut qv = BTreeMap::new();
    for &u in plain_us {
        plain.insert(u, b.piece(('a', u), sys.level(-u)?, 0));
    }
    for &u in qv_us {
        // a q^v in total degree k has deg a = k - 1
        qv.insert(u, b.piece(('v', u), sys.level(-u)?, -1));
    }
    let mut conts = BTreeMap::new();
    for &u in plain_us {
        if u >= 1 && qv.contains_key(&(u - 1)) {
            let c = sys.map(-u)?;
            c.check(&format!("c_{}", -u))?;
            conts.insert(u, c);
        }
    }
    let minus_one = f.from_int(-1);
    for k in b.degrees() {
        let s = f.sign(parity(k));
        for (&u, &p) in &plain {
            let lvl = sys.level(-u)?;
            b.add_block(k, p, p, &lvl.diff(k), &s);
            if let Some(c) = conts.get(&u) {
                b.add_block(k, p, qv[&(u - 1)], &c.block(k), &s);
            }
            if let Some(&pq) = qv.get(&u) {
                let cpl = coupling.get(&u).cloned().unwrap_or_else(|| minus_one.clone());
                b.add_block(k, p, pq, &SparseMatrix::identity(f, lvl.dim(k)), &f.mul(&cpl, &s));
            }
        }
        for (&u, &p) in &qv {
            let j = k - 1;
            let lvl = sys.level(-u)?;
            b.add_block(k, p, p, &lvl.diff(j), &f.sign(parity(j)));
        }
    }
    let layout = b.layout();
    Ok((b.finish()?, layout))
}

/// Cotelescope on levels `-W..=0`.
///
/// `d(a) = (-1)^{deg a} (d a + c(a) q^v - a q^v)` where `c(a) q^v` lands in
/// the `q^v`-copy of the next level up and `a q^v` in its own copy; `q^v` has
/// degree +1. Homological degree `k` of the wrapped homology corresponds to
/// cohomological degree `n - k` (see [`homological`]).
pub fn cotelescope(sys: &DirectedSystem, w_max: usize) -> Result<GradedComplex> {
    cotelescope_with_coupling(sys, w_max, &BTreeMap::new())
}

pub fn cotelescope_with_layout(sys: &DirectedSystem, w_max: usize) -> Result<(GradedComplex, Layout)> {
    let w = w_max as i64;
    let plain: Vec<i64> = (0..=w).collect();
    let qv: Vec<i64> = (0..w).collect();
    cotelescope_on(sys, &plain, &qv, &BTreeMap::new())
}

/// As [`cotelescope`], with the `-a q^v` coupling replaced by `coupling[u] a q^v`
/// at the listed slots `u` (level `-u`).
pub fn cotelescope_with_coupling(
    sys: &DirectedSystem,
    w_max: usize,
    coupling: &BTreeMap<i64, Scalar>,
) -> Result<GradedComplex> {
    let w = w_max as i64;
    let plain: Vec<i64> = (0..=w).collect();
    let qv: Vec<i64> = (0..w).collect();
    Ok(cotelescope_on(sys, &plain, &qv, coupling)?.0)
}

/// Relabels cohomological dimensions to homological ones: `k = n - deg`.
pub fn homological(dims: &BTreeMap<i64, usize>, n: i64) -> BTreeMap<i64, usize> {
    dims.iter().map(|(&d, &v)| (n - d, v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub degree: i64,
    pub dimension: usize,
    /// level from which every map inside the window is an isomorphism
    pub stabilized_at: Option<i64>,
    /// ranks of the composite maps from the extreme level, per level
    pub images: Vec<(i64, usize)>,
}

fn is_iso(m: &SparseMatrix) -> bool {
    m.nrows() == m.ncols() && rank(m) == m.nrows()
}

/// Colimit dimension of `H^k` along levels `1..=W` within the window.
pub fn direct_limit_homology(sys: &DirectedSystem, k: i64, w_max: usize) -> Result<LimitReport> {
    let w_max = w_max as i64;
    if w_max < 1 {
        return Err(Error::IndexOutOfWindow(w_max));
    }
    let mut induced = BTreeMap::new();
    for w in 1..w_max {
        induced.insert(w, sys.induced(w, k)?);
    }
    let dimension = match induced.get(&(w_max - 1)) {
        Some(m) => rank(m),
        None => sys.level(1)?.homology_dim(k),
    };
    let mut stabilized_at = None;
    for s in (1..w_max).rev() {
        if is_iso(&induced[&s]) {
            stabilized_at = Some(s);
        } else {
            break;
        }
    }
    let mut images = Vec::new();
    for w in 1..=w_max {
        images.push((w, rank(&sys.composite(w, w_max, k)?)));
    }
    Ok(LimitReport { degree: k, dimension, stabilized_at, images })
}

/// Limit dimension of `H^k` along the tower on levels `-W..=0`, with the
/// Mittag-Leffler image sequence.
pub fn inverse_limit_homology(sys: &DirectedSystem, k: i64, w_max: usize) -> Result<LimitReport> {
    let w = w_max as i64;
    let mut induced = BTreeMap::new();
    for u in 1..=w {
        induced.insert(-u, sys.induced(-u, k)?);
    }
    let dimension = match induced.get(&(-w)) {
        Some(m) => rank(m),
        None => sys.level(0)?.homology_dim(k),
    };
    let mut stabilized_at = None;
    for lvl in -w..0 {
        if is_iso(&induced[&lvl]) {
            stabilized_at = Some(lvl + 1);
        } else {
            break;
        }
    }
    let mut images = Vec::new();
    for lvl in -w..=0 {
        images.push((lvl, rank(&sys.composite(-w, lvl, k)?)));
    }
    Ok(LimitReport { degree: k, dimension, stabilized_at, images })
}

/// Certificate for one step `Q_w^v -> Q_w^{v+1}` of the quotient tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerStep {
    pub v: i64,
    pub kernel_closed: bool,
    pub projection_is_chain_map: bool,
    pub kernel_acyclic: bool,
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct QuotientTower {
    pub w: i64,
    pub complexes: BTreeMap<i64, GradedComplex>,
    pub steps: Vec<TowerStep>,
    /// `Q_w = Q_w^{-1}` and `Q_w^{w-1} = level_{-w}` have equal homology
    pub ends_agree: bool,
}

impl QuotientTower {
    pub fn certified(&self) -> bool {
        self.steps.iter().all(|s| s.certified) && self.ends_agree
    }

    pub fn first_failure(&self) -> Option<i64> {
        self.steps.iter().find(|s| !s.certified).map(|s| s.v)
    }
}

fn tower_slots(w: i64, v: i64) -> (Vec<i64>, Vec<i64>) {
    ((v + 1..=w).collect(), (v + 1..w).collect())
}

/// `Q_w^v` for `-1 <= v < w`, and whether the step to `Q_w^{v+1}` is certified
/// (always true at the top `v = w - 1`, which has no further step).
pub fn quotient_tower(sys: &DirectedSystem, w: i64, v: i64) -> Result<(GradedComplex, bool)> {
    quotient_tower_with_coupling(sys, w, v, &BTreeMap::new())
}

pub fn quotient_tower_with_coupling(
    sys: &DirectedSystem,
    w: i64,
    v: i64,
    coupling: &BTreeMap<i64, Scalar>,
) -> Result<(GradedComplex, bool)> {
    if v < -1 || v >= w {
        return Err(Error::IndexOutOfWindow(v));
    }
    let (plain, qv) = tower_slots(w, v);
    let (q, _) = cotelescope_on(sys, &plain, &qv, coupling)?;
    if v == w - 1 {
        return Ok((q, true));
    }
    let step = certify_step(sys, w, v, coupling)?;
    Ok((q, step.certified))
}

fn certify_step(
    sys: &DirectedSystem,
    w: i64,
    v: i64,
    coupling: &BTreeMap<i64, Scalar>,
) -> Result<TowerStep> {
    let f = sys.field;
    let (plain, qv) = tower_slots(w, v);
    let (big, big_keys) = cotelescope_on(sys, &plain, &qv, coupling)?;
    let (plain2, qv2) = tower_slots(w, v + 1);
    let (small, small_keys) = cotelescope_on(sys, &plain2, &qv2, coupling)?;
    let in_kernel = |key: (char, i64)| key == ('a', v + 1) || key == ('v', v + 1);

    let mut kernel_closed = true;
    let mut proj_blocks = BTreeMap::new();
    let mut kernel_spaces = BTreeMap::new();
    let mut kernel_index: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for k in big.degrees() {
        let layout = &big_keys[&k];
        let mut idx = Vec::new();
        for (key, off, dim) in layout {
            if in_kernel(*key) {
                idx.extend(*off..off + dim);
            }
        }
        kernel_spaces.insert(k, idx.len());
        kernel_index.insert(k, idx);
        let mut p = SparseMatrix::zeros(f, small.dim(k), big.dim(k));
        if let Some(small_layout) = small_keys.get(&k) {
            for (key, off, dim) in layout {
                if let Some((_, off2, _)) = small_layout.iter().find(|e| e.0 == *key) {
                    for i in 0..*dim {
                        p.set(off2 + i, off + i, f.one());
                    }
                }
            }
        }
        proj_blocks.insert(k, p);
    }
    let mut kernel_diffs = BTreeMap::new();
    for k in big.degrees() {
        let d = big.diff(k);
        let src = &kernel_index[&k];
        let empty = Vec::new();
        let tgt = kernel_index.get(&(k + 1)).unwrap_or(&empty);
        let mut m = SparseMatrix::zeros(f, tgt.len(), src.len());
        for (ci, &col) in src.iter().enumerate() {
            for r in 0..d.nrows() {
                let x = d.get(r, col);
                if f.is_zero(&x) {
                    continue;
                }
                match tgt.iter().position(|&t| t == r) {
                    Some(ri) => m.set(ri, ci, x),
                    None => kernel_closed = false,
                }
            }
        }
        kernel_diffs.insert(k, m);
    }
    let projection_is_chain_map = ChainMap::new(big.clone(), small.clone(), proj_blocks, 0).is_ok();
    let kernel_acyclic = kernel_closed
        && GradedComplex::new(f, kernel_spaces, kernel_diffs).map(|k| k.is_acyclic()).unwrap_or(false);
    Ok(TowerStep {
        v,
        kernel_closed,
        projection_is_chain_map,
        kernel_acyclic,
        certified: kernel_closed && projection_is_chain_map && kernel_acyclic,
    })
}

/// All steps `Q_w^{-1} -> Q_w^0 -> ... -> Q_w^{w-1} = level_{-w}`.
pub fn quotient_tower_chain(
    sys: &DirectedSystem,
    w: i64,
    coupling: &BTreeMap<i64, Scalar>,
) -> Result<QuotientTower> {
    if w < 0 {
        return Err(Error::IndexOutOfWindow(w));
    }
    let mut complexes = BTreeMap::new();
    let mut steps = Vec::new();
    for v in -1..w {
        let (plain, qv) = tower_slots(w, v);
        complexes.insert(v, cotelescope_on(sys, &plain, &qv, coupling)?.0);
        if v < w - 1 {
            steps.push(certify_step(sys, w, v, coupling)?);
        }
    }
    let top = complexes.get(&(w - 1)).cloned().unwrap_or_else(|| complexes[&-1].clone());
    let bottom = &complexes[&-1];
    let lvl = sys.level(-w)?;
    let ends_agree = top.homology() == lvl.homology()
        && degrees_union(bottom, lvl).iter().all(|&k| bottom.homology_dim(k) == lvl.homology_dim(k));
    Ok(QuotientTower { w, complexes, steps, ends_agree })
}

fn degrees_union(a: &GradedComplex, b: &GradedComplex) -> BTreeSet<i64> {
    a.degrees().into_iter().chain(b.degrees()).collect()
}

/// Finite positive spectra per ordered pair of objects.
pub type SpectrumSet = BTreeMap<(usize, usize), BTreeSet<Rat>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeTable {
    pub window: (i64, i64),
    pub a: Rat,
    pub epsilon: Rat,
    pub tau: BTreeMap<(usize, usize), BTreeMap<i64, Rat>>,
}

impl SlopeTable {
    pub fn to_json(&self) -> serde_json::Value {
        let tau: BTreeMap<String, BTreeMap<String, String>> = self
            .tau
            .iter()
            .map(|((i, j), row)| {
                let row = row.iter().map(|(w, t)| (w.to_string(), t.to_string())).collect();
                (format!("{i},{j}"), row)
            })
            .collect();
        serde_json::json!({
            "window": [self.window.0, self.window.1],
            "a": self.a.to_string(),
            "epsilon": self.epsilon.to_string(),
            "tau": tau,
        })
    }

    pub fn get(&self, i: usize, j: usize, w: i64) -> Option<&Rat> {
        self.tau.get(&(i, j))?.get(&w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeChecks {
    pub avoids_spectrum: bool,
    pub increasing: bool,
    pub unbounded: bool,
    pub superadditive: bool,
    pub failures: Vec<String>,
}

impl SlopeChecks {
    pub fn pass(&self) -> bool {
        self.avoids_spectrum && self.increasing && self.unbounded && self.superadditive
    }
}

fn objects(spectra: &SpectrumSet) -> Vec<usize> {
    let s: BTreeSet<usize> = spectra.keys().flat_map(|&(i, j)| [i, j]).collect();
    s.into_iter().collect()
}

/// Slopes `tau_w = w a` for `w >= 1`, `w a - eps` for `w <= -1`, and
/// `tau_0 = -eps/2`, where `a = max(spectra) + 1` and `eps = min(a, gap)/2`.
pub fn choose_slopes(spectra: &SpectrumSet, window: (i64, i64)) -> Result<SlopeTable> {
    for (pair, s) in spectra {
        if s.iter().any(|t| !t.is_positive()) {
            return Err(Error::Parse(format!("spectrum of {pair:?} has a non-positive entry")));
        }
    }
    let all: BTreeSet<&Rat> = spectra.values().flatten().collect();
    let a = all.iter().next_back().map_or(Rat::one(), |m| m.add(&Rat::one()));
    let gap = all.iter().next().map(|g| (*g).clone());
    let min = match &gap {
        Some(g) if g < &a => g.clone(),
        _ => a.clone(),
    };
    let epsilon = min.mul(&Rat::new(1, 2));
    let tau0 = epsilon.mul(&Rat::new(-1, 2));
    let mut objs = objects(spectra);
    if objs.is_empty() {
        objs.push(0);
    }
    let mut tau = BTreeMap::new();
    for &i in &objs {
        for &j in &objs {
            let row: BTreeMap<i64, Rat> = (window.0..=window.1)
                .map(|w| {
                    let t = match w.cmp(&0) {
                        std::cmp::Ordering::Greater => a.mul(&Rat::from_int(w)),
                        std::cmp::Ordering::Less => a.mul(&Rat::from_int(w)).sub(&epsilon),
                        std::cmp::Ordering::Equal => tau0.clone(),
                    };
                    (w, t)
                })
                .collect();
            tau.insert((i, j), row);
        }
    }
    let table = SlopeTable { window, a, epsilon, tau };
    let checks = verify_slopes(&table, spectra);
    debug_assert!(checks.pass(), "{:?}", checks.failures);
    Ok(table)
}

/// Exhaustive window check of the four slope conditions.
pub fn verify_slopes(table: &SlopeTable, spectra: &SpectrumSet) -> SlopeChecks {
    let mut failures = Vec::new();
    let empty = BTreeSet::new();
    let (lo, hi) = table.window;
    let mut avoids_spectrum = true;
    let mut increasing = true;
    let mut unbounded = true;
    for (&(i, j), row) in &table.tau {
        let spec = spectra.get(&(i, j)).unwrap_or(&empty);
        for (w, t) in row {
            if spec.contains(t) {
                avoids_spectrum = false;
                failures.push(format!("tau^{i}{j}_{w} = {t} lies in the spectrum"));
            }
        }
        for w in lo..hi {
            let (t0, t1) = (&row[&w], &row[&(w + 1)]);
            if t0 >= t1 {
                increasing = false;
                failures.push(format!("tau^{i}{j} not increasing at {w}"));
            }
            if t1.sub(t0) < table.a {
                unbounded = false;
                failures.push(format!("tau^{i}{j} increment below a at {w}"));
            }
        }
        if let (Some(t0), Some(t1)) = (row.get(&0), row.get(&1)) {
            if !(t0.is_negative() && t1.is_positive()) {
                increasing = false;
                failures.push(format!("tau^{i}{j}: need tau_0 < 0 < tau_1"));
            }
        }
    }
    let mut superadditive = true;
    let objs: BTreeSet<usize> = table.tau.keys().map(|p| p.0).collect();
    for &i in &objs {
        for &j in &objs {
            for &k in &objs {
                for v in lo..=hi {
                    for w in lo..=hi {
                        if v + w < lo || v + w > hi {
                            continue;
                        }
                        let lhs = table.tau[&(j, k)][&w].add(&table.tau[&(i, j)][&v]);
                        if lhs > table.tau[&(i, k)][&(v + w)] {
                            superadditive = false;
                            failures.push(format!("superadditivity fails at ({i},{j},{k}), v={v}, w={w}"));
                        }
                    }
                }
            }
        }
    }
    SlopeChecks { avoids_spectrum, increasing, unbounded, superadditive, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes_example() {
        let mut spectra = SpectrumSet::new();
        spectra.insert((0, 1), [Rat::from_int(1), Rat::new(3, 2)].into());
        let t = choose_slopes(&spectra, (-3, 3)).unwrap();
        assert_eq!(t.a, Rat::new(5, 2));
        assert_eq!(t.epsilon, Rat::new(1, 2));
        assert_eq!(t.get(0, 1, 1), Some(&Rat::new(5, 2)));
        assert_eq!(t.get(0, 1, -1), Some(&Rat::from_int(-3)));
        assert!(verify_slopes(&t, &spectra).pass());
    }

    #[test]
    fn slopes_empty() {
        let t = choose_slopes(&SpectrumSet::new(), (-2, 4)).unwrap();
        assert_eq!(t.a, Rat::one());
        for w in 1..=4 {
            assert_eq!(t.get(0, 0, w), Some(&Rat::from_int(w)));
        }
    }
}
