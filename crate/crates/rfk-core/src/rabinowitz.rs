//! Rabinowitz complex as the cone of the continuation from the cotelescope
//! to the telescope, together with the two-sided weight model used for the
//! product assembly and the A-infinity verifier.
//!
//! Basis elements of the weight model are `(kind, weight, index)`: kind `A`
//! is a plain level element, kind `B` is `x q` with `q` of degree -1. The
//! index is a global index into the level basis, ordered by degree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact_linalg::{SparseMatrix, Vector};
use crate::field::{Field, Scalar};
use crate::graded_complex::{
    cone, cone_inclusion, cone_projection, long_exact_sequence, verify_short_exact, ChainMap,
    ExactnessReport, GradedComplex, LongExactSequence,
};
use crate::limit_systems::{cotelescope_with_layout, telescope_with_layout, DirectedSystem, Layout};

fn odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Kind {
    A,
    B,
}

pub type Key = (Kind, i64, usize);

/// Sparse element of the weight model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RfcElement {
    field: Field,
    terms: BTreeMap<Key, Scalar>,
}

impl RfcElement {
    pub fn zero(field: Field) -> RfcElement {
        RfcElement { field, terms: BTreeMap::new() }
    }

    pub fn basis(field: Field, key: Key) -> RfcElement {
        let mut e = RfcElement::zero(field);
        e.add_term(key, field.one());
        e
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Key, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Key, v: Scalar) {
        let f = self.field;
        let cur = self.terms.remove(&key).unwrap_or_else(|| f.zero());
        let s = f.add(&cur, &v);
        if !f.is_zero(&s) {
            self.terms.insert(key, s);
        }
    }

    pub fn add_scaled(&mut self, o: &RfcElement, s: &Scalar) {
        for (k, v) in &o.terms {
            let t = self.field.mul(v, s);
            self.add_term(*k, t);
        }
    }

    pub fn scale(&self, s: &Scalar) -> RfcElement {
        let mut e = RfcElement::zero(self.field);
        e.add_scaled(self, s);
        e
    }

    pub fn kinds(&self) -> BTreeSet<Kind> {
        self.terms.keys().map(|k| k.0).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((kd, w, i), v)| json!([format!("{kd:?}"), w, i, self.field.format(v)]))
                .collect(),
        )
    }
}

/// A level complex flattened to a single basis ordered by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    field: Field,
    degrees: Vec<i64>,
    offsets: BTreeMap<i64, usize>,
    diff_cols: Vec<Vec<(usize, Scalar)>>,
    complex: GradedComplex,
}

impl Level {
    pub fn from_complex(c: &GradedComplex) -> Level {
        let mut degrees = Vec::new();
        let mut offsets = BTreeMap::new();
        for (&k, &d) in c.spaces() {
            offsets.insert(k, degrees.len());
            degrees.extend(std::iter::repeat(k).take(d));
        }
        let mut diff_cols = vec![Vec::new(); degrees.len()];
        for &k in offsets.keys() {
            let Some(&to) = offsets.get(&(k + 1)) else { continue };
            let from = offsets[&k];
            for (r, col, v) in c.diff(k).entries() {
                diff_cols[from + col].push((to + r, v.clone()));
            }
        }
        Level { field: c.field(), degrees, offsets, diff_cols, complex: c.clone() }
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn offset(&self, k: i64) -> Option<usize> {
        self.offsets.get(&k).copied()
    }

    pub fn diff(&self, i: usize) -> &[(usize, Scalar)] {
        &self.diff_cols[i]
    }
}

/// Multilinear map given by structure constants; inputs are listed as
/// `(x_1, ..., x_k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiLinear {
    table: BTreeMap<Vec<usize>, Vec<(usize, Scalar)>>,
}

impl MultiLinear {
    pub fn new() -> MultiLinear {
        MultiLinear::default()
    }

    pub fn insert(&mut self, field: Field, inputs: Vec<usize>, out: usize, v: Scalar) {
        let row = self.table.entry(inputs.clone()).or_default();
        match row.iter_mut().find(|(o, _)| *o == out) {
            Some((_, cur)) => *cur = field.add(cur, &v),
            None => row.push((out, v)),
        }
        row.retain(|(_, c)| !field.is_zero(c));
        row.sort_by_key(|(o, _)| *o);
        if row.is_empty() {
            self.table.remove(&inputs);
        }
    }

    pub fn apply(&self, inputs: &[usize]) -> &[(usize, Scalar)] {
        self.table.get(inputs).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, usize, &Scalar)> + '_ {
        self.table.iter().flat_map(|(i, row)| row.iter().map(move |(o, v)| (i, *o, v)))
    }

    pub fn nnz(&self) -> usize {
        self.table.values().map(|r| r.len()).sum()
    }

    /// Copy with the sign of one structure constant reversed.
    pub fn with_flipped(&self, field: Field, n: usize) -> MultiLinear {
        let mut out = MultiLinear::new();
        for (idx, (i, o, v)) in self.entries().enumerate() {
            let v = if idx == n { field.neg(v) } else { v.clone() };
            out.insert(field, i.clone(), o, v);
        }
        out
    }

    fn to_json(&self, field: Field) -> Value {
        Value::Array(self.entries().map(|(i, o, v)| json!([i, o, field.format(v)])).collect())
    }

    fn from_json(field: Field, v: &Value) -> Result<MultiLinear> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("operation must be a list".into()))?;
        let mut m = MultiLinear::new();
        for e in arr {
            let bad = || Error::Parse(format!("bad operation entry {e}"));
            let ins = e.get(0).and_then(|x| x.as_array()).ok_or_else(bad)?;
            let ins: Vec<usize> =
                ins.iter().map(|x| x.as_u64().map(|u| u as usize).ok_or_else(bad)).collect::<Result<_>>()?;
            let out = e.get(1).and_then(|x| x.as_u64()).ok_or_else(bad)? as usize;
            let val = match e.get(2) {
                Some(Value::String(s)) => field.parse_scalar(s)?,
                Some(Value::Number(n)) => field.from_int(n.as_i64().ok_or_else(bad)?),
                _ => return Err(bad()),
            };
            m.insert(field, ins, out, val);
        }
        Ok(m)
    }
}

/// Operation label `k/F/w0,w1,...,wk`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpKey {
    pub k: usize,
    pub flavor: Vec<usize>,
    pub weights: Vec<i64>,
}

impl fmt::Display for OpKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fl: Vec<String> = self.flavor.iter().map(|x| x.to_string()).collect();
        let ws: Vec<String> = self.weights.iter().map(|x| x.to_string()).collect();
        write!(f, "{}/{}/{}", self.k, fl.join(","), ws.join(","))
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad {what} entry '{x}'"))))
        .collect()
}

impl OpKey {
    pub fn parse(s: &str) -> Result<OpKey> {
        let parts: Vec<&str> = s.split('/').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("operation key '{s}' is not k/F/w")));
        }
        let k = parts[0].trim().parse().map_err(|_| Error::Parse(format!("bad arity in '{s}'")))?;
        Ok(OpKey { k, flavor: parse_list(parts[1], "flavor")?, weights: parse_list(parts[2], "weight")? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Unlisted {
    Zero,
    Missing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Levels {
    Uniform(Level),
    PerWeight(BTreeMap<i64, Level>),
}

/// Which summand of `mu` a contribution came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Part {
    A,
    /// B summand for the flavor index `f` that lost its `q`.
    B(usize),
    /// The `q -> 1` term of `mu^1`.
    Dq,
}

/// Operation data `m^{k,F,w}`, with `m^{1,{},(w,w)}` taken from the level
/// differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationFamily {
    field: Field,
    levels: Levels,
    explicit: BTreeMap<OpKey, MultiLinear>,
    uniform: BTreeMap<(usize, Vec<usize>), MultiLinear>,
    symmetric: BTreeMap<OpKey, MultiLinear>,
    unlisted: Unlisted,
    allow_symmetric: bool,
}

impl OperationFamily {
    pub fn new(field: Field, levels: Levels, unlisted: Unlisted) -> OperationFamily {
        OperationFamily {
            field,
            levels,
            explicit: BTreeMap::new(),
            uniform: BTreeMap::new(),
            symmetric: BTreeMap::new(),
            unlisted,
            allow_symmetric: false,
        }
    }

    /// Accept flavors with repeated indices; they are stored but never enter
    /// the assembly.
    pub fn allowing_symmetric(mut self) -> OperationFamily {
        self.allow_symmetric = true;
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn unlisted(&self) -> Unlisted {
        self.unlisted
    }

    pub fn levels(&self) -> &Levels {
        &self.levels
    }

    pub fn level(&self, w: i64) -> Result<&Level> {
        match &self.levels {
            Levels::Uniform(l) => Ok(l),
            Levels::PerWeight(m) => m.get(&w).ok_or(Error::IndexOutOfWindow(w)),
        }
    }

    pub fn explicit_ops(&self) -> &BTreeMap<OpKey, MultiLinear> {
        &self.explicit
    }

    pub fn uniform_ops(&self) -> &BTreeMap<(usize, Vec<usize>), MultiLinear> {
        &self.uniform
    }

    pub fn symmetric_ops(&self) -> &BTreeMap<OpKey, MultiLinear> {
        &self.symmetric
    }

    fn check_flavor(&self, k: usize, flavor: &[usize], label: &str) -> Result<bool> {
        if k == 0 {
            return Err(Error::InvalidOperation(format!("{label}: arity 0")));
        }
        if flavor.iter().any(|&f| f == 0 || f > k) {
            return Err(Error::InvalidOperation(format!("{label}: flavor index outside 1..{k}")));
        }
        let injective = flavor.windows(2).all(|p| p[0] < p[1]);
        if !injective {
            let set: BTreeSet<_> = flavor.iter().collect();
            let sorted = flavor.windows(2).all(|p| p[0] <= p[1]);
            if set.len() == flavor.len() || !sorted {
                return Err(Error::InvalidOperation(format!("{label}: flavor must be listed in increasing order")));
            }
            if !self.allow_symmetric {
                return Err(Error::InvalidOperation(format!("{label}: repeated flavor index")));
            }
            return Ok(false);
        }
        if k == 1 && flavor.is_empty() {
            return Err(Error::InvalidOperation(format!("{label}: mu^1 without flavor is the level differential")));
        }
        Ok(true)
    }

    fn check_entries(&self, label: &str, k: usize, nf: usize, ins: &[i64], out: i64, op: &MultiLinear) -> Result<()> {
        for (inputs, o, _) in op.entries() {
            if inputs.len() != k {
                return Err(Error::InvalidOperation(format!("{label}: entry with {} inputs", inputs.len())));
            }
            let mut deg = 0i64;
            for (pos, &i) in inputs.iter().enumerate() {
                let l = self.level(ins[pos])?;
                if i >= l.dim() {
                    return Err(Error::InvalidOperation(format!("{label}: input index {i} outside level")));
                }
                deg += l.degree(i);
            }
            let lo = self.level(out)?;
            if o >= lo.dim() {
                return Err(Error::InvalidOperation(format!("{label}: output index {o} outside declared level")));
            }
            let expect = deg + 2 - k as i64 - nf as i64;
            if lo.degree(o) != expect {
                return Err(Error::InvalidOperation(format!(
                    "{label}: output degree {} where {expect} is required",
                    lo.degree(o)
                )));
            }
        }
        Ok(())
    }

    pub fn insert(&mut self, key: OpKey, op: MultiLinear) -> Result<()> {
        let label = key.to_string();
        let injective = self.check_flavor(key.k, &key.flavor, &label)?;
        if key.weights.len() != key.k + 1 {
            return Err(Error::InvalidOperation(format!("{label}: expected {} weights", key.k + 1)));
        }
        let w0 = key.weights[1..].iter().sum::<i64>() + key.flavor.len() as i64;
        if key.weights[0] != w0 {
            return Err(Error::WeightMismatch(format!("{label}: output weight should be {w0}")));
        }
        if !injective {
            self.symmetric.insert(key, op);
            return Ok(());
        }
        self.check_entries(&label, key.k, key.flavor.len(), &key.weights[1..], key.weights[0], &op)?;
        self.explicit.insert(key, op);
        Ok(())
    }

    /// Weight-independent operation, used at every weight vector.
    pub fn insert_uniform(&mut self, k: usize, flavor: Vec<usize>, op: MultiLinear) -> Result<()> {
        let label = format!("{k}/{:?}/*", flavor);
        if !matches!(self.levels, Levels::Uniform(_)) {
            return Err(Error::InvalidOperation(format!("{label}: uniform operations need uniform levels")));
        }
        if !self.check_flavor(k, &flavor, &label)? {
            return Err(Error::InvalidOperation(format!("{label}: uniform operations must have injective flavor")));
        }
        let zeros = vec![0; k];
        self.check_entries(&label, k, flavor.len(), &zeros, 0, &op)?;
        self.uniform.insert((k, flavor), op);
        Ok(())
    }

    fn op(&self, k: usize, flavor: &[usize], weights: &[i64]) -> Result<Option<&MultiLinear>> {
        let key = OpKey { k, flavor: flavor.to_vec(), weights: weights.to_vec() };
        if let Some(m) = self.explicit.get(&key) {
            return Ok(Some(m));
        }
        if let Some(m) = self.uniform.get(&(k, flavor.to_vec())) {
            return Ok(Some(m));
        }
        match self.unlisted {
            Unlisted::Zero => Ok(None),
            Unlisted::Missing => Err(Error::MissingOperation(key.to_string())),
        }
    }

    fn level_degree(&self, key: &Key) -> Result<i64> {
        let l = self.level(key.1)?;
        if key.2 >= l.dim() {
            return Err(Error::IndexOutOfWindow(key.2 as i64));
        }
        Ok(l.degree(key.2))
    }

    /// Degree in the Rabinowitz complex: `deg x - 1` for `x q`.
    pub fn rfc_degree(&self, key: &Key) -> Result<i64> {
        Ok(self.level_degree(key)? - if key.0 == Kind::B { 1 } else { 0 })
    }

    /// `m^{k,F,w}` applied to level indices, landing at weight `w0`.
    fn apply_m(&self, flavor: &[usize], w0: i64, ws: &[i64], xs: &[usize]) -> Result<Vec<(usize, Scalar)>> {
        let k = xs.len();
        if k == 1 && flavor.is_empty() {
            return Ok(self.level(ws[0])?.diff(xs[0]).to_vec());
        }
        let mut weights = vec![w0];
        weights.extend_from_slice(ws);
        Ok(self.op(k, flavor, &weights)?.map(|m| m.apply(xs).to_vec()).unwrap_or_default())
    }

    fn star(degs: &[i64], flavor: &[usize]) -> i64 {
        let mut s: i64 = degs.iter().enumerate().map(|(j, d)| (j as i64 + 1) * d).sum();
        for &j in flavor {
            s += degs[j..].iter().map(|d| d - 1).sum::<i64>();
        }
        s
    }

    /// Summands of `mu^k` on a basis tuple `(c_1, ..., c_k)`.
    pub fn mu_parts(&self, inputs: &[Key]) -> Result<Vec<(Part, RfcElement)>> {
        let f = self.field;
        let k = inputs.len();
        if k == 0 {
            return Err(Error::InvalidOperation("mu^0 is not part of the structure".into()));
        }
        let degs: Vec<i64> = inputs.iter().map(|c| self.level_degree(c)).collect::<Result<_>>()?;
        let rdegs: Vec<i64> = inputs.iter().map(|c| self.rfc_degree(c)).collect::<Result<_>>()?;
        let ws: Vec<i64> = inputs.iter().map(|c| c.1).collect();
        let xs: Vec<usize> = inputs.iter().map(|c| c.2).collect();
        let flavor: Vec<usize> = (1..=k).filter(|&i| inputs[i - 1].0 == Kind::B).collect();
        let w0 = ws.iter().sum::<i64>() + flavor.len() as i64;
        let mut parts = Vec::new();

        let mut a = RfcElement::zero(f);
        let s = f.sign(odd(Self::star(&degs, &flavor)));
        for (o, v) in self.apply_m(&flavor, w0, &ws, &xs)? {
            a.add_term((Kind::A, w0, o), f.mul(&s, &v));
        }
        parts.push((Part::A, a));

        for &fi in &flavor {
            let rest: Vec<usize> = flavor.iter().copied().filter(|&x| x != fi).collect();
            let star_f: i64 = rdegs[fi..].iter().map(|d| d - 1).sum();
            let s = f.sign(odd(star_f + Self::star(&degs, &rest)));
            let mut b = RfcElement::zero(f);
            for (o, v) in self.apply_m(&rest, w0 - 1, &ws, &xs)? {
                b.add_term((Kind::B, w0 - 1, o), f.mul(&s, &v));
            }
            parts.push((Part::B(fi), b));
        }

        if k == 1 && inputs[0].0 == Kind::B {
            let mut d = RfcElement::zero(f);
            d.add_term((Kind::A, ws[0], xs[0]), f.sign(odd(rdegs[0])));
            parts.push((Part::Dq, d));
        }
        Ok(parts)
    }

    pub fn mu_basis(&self, inputs: &[Key]) -> Result<RfcElement> {
        let mut out = RfcElement::zero(self.field);
        for (_, e) in self.mu_parts(inputs)? {
            out.add_scaled(&e, &self.field.one());
        }
        Ok(out)
    }

    /// `q -> 1` on a tensor of basis elements, with the Koszul sign
    /// `(-1)^{sum_{j>i} (deg c_j - 1)}`.
    pub fn dq_tensor(&self, inputs: &[Key]) -> Result<Vec<(Scalar, Vec<Key>)>> {
        let rdegs: Vec<i64> = inputs.iter().map(|c| self.rfc_degree(c)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for i in 0..inputs.len() {
            if inputs[i].0 != Kind::B {
                continue;
            }
            let e: i64 = rdegs[i + 1..].iter().map(|d| d - 1).sum();
            let mut t = inputs.to_vec();
            t[i].0 = Kind::A;
            out.push((self.field.sign(odd(e)), t));
        }
        Ok(out)
    }

    /// Every basis tuple of length `1..=kmax` with weights from `weights`.
    pub fn basis_tuples(&self, weights: &[i64], kmax: usize) -> Result<Vec<Vec<Key>>> {
        let mut singles = Vec::new();
        for kind in [Kind::A, Kind::B] {
            for &w in weights {
                for i in 0..self.level(w)?.dim() {
                    singles.push((kind, w, i));
                }
            }
        }
        let mut all = Vec::new();
        let mut layer: Vec<Vec<Key>> = vec![Vec::new()];
        for _ in 0..kmax {
            let mut next = Vec::new();
            for t in &layer {
                for s in &singles {
                    let mut u = t.clone();
                    u.push(*s);
                    next.push(u);
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        Ok(all)
    }

    pub fn to_json(&self) -> Value {
        let f = self.field;
        let levels = match &self.levels {
            Levels::Uniform(l) => json!({"uniform": l.complex.to_json()}),
            Levels::PerWeight(m) => {
                let per: serde_json::Map<String, Value> =
                    m.iter().map(|(w, l)| (w.to_string(), l.complex.to_json())).collect();
                json!({"per_weight": per})
            }
        };
        let explicit: serde_json::Map<String, Value> =
            self.explicit.iter().map(|(k, m)| (k.to_string(), m.to_json(f))).collect();
        let uniform: serde_json::Map<String, Value> = self
            .uniform
            .iter()
            .map(|((k, fl), m)| {
                let fl: Vec<String> = fl.iter().map(|x| x.to_string()).collect();
                (format!("{k}/{}", fl.join(",")), m.to_json(f))
            })
            .collect();
        json!({
            "unlisted": match self.unlisted { Unlisted::Zero => "zero", Unlisted::Missing => "missing" },
            "levels": levels,
            "ops": explicit,
            "uniform_ops": uniform,
        })
    }

    pub fn from_json(field: Field, v: &Value) -> Result<OperationFamily> {
        let unlisted = match v.get("unlisted").and_then(|x| x.as_str()).unwrap_or("zero") {
            "zero" => Unlisted::Zero,
            "missing" => Unlisted::Missing,
            other => return Err(Error::Parse(format!("unlisted policy '{other}'"))),
        };
        let lv = v.get("levels").ok_or_else(|| Error::Parse("operation family needs 'levels'".into()))?;
        let levels = if let Some(u) = lv.get("uniform") {
            Levels::Uniform(Level::from_complex(&GradedComplex::from_json(field, u)?))
        } else if let Some(p) = lv.get("per_weight").and_then(|x| x.as_object()) {
            let mut m = BTreeMap::new();
            for (w, c) in p {
                let w: i64 = w.parse().map_err(|_| Error::Parse(format!("bad weight '{w}'")))?;
                m.insert(w, Level::from_complex(&GradedComplex::from_json(field, c)?));
            }
            Levels::PerWeight(m)
        } else {
            return Err(Error::Parse("levels must be 'uniform' or 'per_weight'".into()));
        };
        let mut fam = OperationFamily::new(field, levels, unlisted);
        if v.get("allow_symmetric").and_then(|x| x.as_bool()).unwrap_or(false) {
            fam = fam.allowing_symmetric();
        }
        if let Some(ops) = v.get("ops").and_then(|x| x.as_object()) {
            for (k, m) in ops {
                fam.insert(OpKey::parse(k)?, MultiLinear::from_json(field, m)?)?;
            }
        }
        if let Some(ops) = v.get("uniform_ops").and_then(|x| x.as_object()) {
            for (k, m) in ops {
                let (a, fl) = k.split_once('/').ok_or_else(|| Error::Parse(format!("uniform key '{k}' is not k/F")))?;
                let a: usize = a.parse().map_err(|_| Error::Parse(format!("bad arity in '{k}'")))?;
                fam.insert_uniform(a, parse_list(fl, "flavor")?, MultiLinear::from_json(field, m)?)?;
            }
        }
        Ok(fam)
    }
}

/// One summand per flavor choice, expanded multilinearly over the inputs.
pub fn assemble_mu_parts(ops: &OperationFamily, inputs: &[RfcElement]) -> Result<BTreeMap<Part, RfcElement>> {
    let f = ops.field;
    let mut out: BTreeMap<Part, RfcElement> = BTreeMap::new();
    let lists: Vec<Vec<(Key, Scalar)>> =
        inputs.iter().map(|e| e.terms.iter().map(|(k, v)| (*k, v.clone())).collect()).collect();
    if lists.is_empty() {
        return Err(Error::InvalidOperation("mu^0 is not part of the structure".into()));
    }
    let mut idx = vec![0usize; lists.len()];
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(out);
    }
    loop {
        let keys: Vec<Key> = idx.iter().zip(&lists).map(|(&i, l)| l[i].0).collect();
        let coef = idx.iter().zip(&lists).fold(f.one(), |acc, (&i, l)| f.mul(&acc, &l[i].1));
        for (p, e) in ops.mu_parts(&keys)? {
            out.entry(p).or_insert_with(|| RfcElement::zero(f)).add_scaled(&e, &coef);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                out.retain(|_, e| !e.is_zero());
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `mu^k(c_k, ..., c_1)` with inputs passed as `[c_1, ..., c_k]`.
pub fn assemble_mu(ops: &OperationFamily, inputs: &[RfcElement]) -> Result<RfcElement> {
    let mut out = RfcElement::zero(ops.field);
    for e in assemble_mu_parts(ops, inputs)?.values() {
        out.add_scaled(e, &ops.field.one());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TermLabel {
    pub i: usize,
    pub j: usize,
    pub f1: Vec<usize>,
    pub via_dq: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AinfinityFailure {
    pub identity: String,
    pub tuple: Vec<Key>,
    pub projection: Kind,
    pub a0: i64,
    pub index: usize,
    pub value: String,
    pub terms: Vec<TermLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AinfinityReport {
    pub tuples: usize,
    pub identities: usize,
    pub failures: Vec<AinfinityFailure>,
}

impl AinfinityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// Labels of the first failing identity.
    pub fn offending_terms(&self) -> Vec<TermLabel> {
        self.failures.first().map(|f| f.terms.clone()).unwrap_or_default()
    }
}

type Contributions = BTreeMap<Key, (Scalar, BTreeMap<TermLabel, Scalar>)>;

fn ainfinity_sum(ops: &OperationFamily, tuple: &[Key]) -> Result<Contributions> {
    let f = ops.field;
    let k = tuple.len();
    let rdegs: Vec<i64> = tuple.iter().map(|c| ops.rfc_degree(c)).collect::<Result<_>>()?;
    let mut acc: Contributions = BTreeMap::new();
    for i in 0..k {
        let hash: i64 = rdegs[..i].iter().map(|d| d - 1).sum();
        let sign = f.sign(odd(hash));
        for j in i + 1..=k {
            let inside: Vec<usize> = (i + 1..=j).filter(|&l| tuple[l - 1].0 == Kind::B).collect();
            for (inner_part, inner) in ops.mu_parts(&tuple[i..j])? {
                // flavor of the inner operation; a lost sprinkle moves to the outer one
                let f1: Vec<usize> = match inner_part {
                    Part::A => inside.clone(),
                    Part::B(lost) => inside.iter().copied().filter(|&l| l != i + lost).collect(),
                    Part::Dq => Vec::new(),
                };
                for (key, coef) in &inner.terms {
                    let mut outer_in = tuple[..i].to_vec();
                    outer_in.push(*key);
                    outer_in.extend_from_slice(&tuple[j..]);
                    let c = f.mul(&sign, coef);
                    for (outer_part, outer) in ops.mu_parts(&outer_in)? {
                        let label = TermLabel {
                            i,
                            j,
                            f1: f1.clone(),
                            via_dq: inner_part == Part::Dq || outer_part == Part::Dq,
                        };
                        for (okey, ov) in &outer.terms {
                            let v = f.mul(&c, ov);
                            let slot = acc.entry(*okey).or_insert_with(|| (f.zero(), BTreeMap::new()));
                            slot.0 = f.add(&slot.0, &v);
                            let t = slot.1.entry(label.clone()).or_insert_with(|| f.zero());
                            *t = f.add(t, &v);
                        }
                    }
                }
            }
        }
    }
    Ok(acc)
}

fn check_tuple(ops: &OperationFamily, tuple: &[Key]) -> Result<(usize, Vec<AinfinityFailure>)> {
    let f = ops.field;
    let mut failures = Vec::new();
    let acc = ainfinity_sum(ops, tuple)?;
    for ((kind, a0, idx), (total, terms)) in &acc {
        if f.is_zero(total) {
            continue;
        }
        failures.push(AinfinityFailure {
            identity: "ainfinity".into(),
            tuple: tuple.to_vec(),
            projection: *kind,
            a0: *a0,
            index: *idx,
            value: f.format(total),
            terms: terms.iter().filter(|(_, v)| !f.is_zero(v)).map(|(l, _)| l.clone()).collect(),
        });
    }
    // pr_A and pr_B at the two reachable output weights each, plus the
    // q-cancellation identity
    let identities = 5;
    let parts = ops.mu_parts(tuple)?;
    let mut b_side = RfcElement::zero(f);
    for (p, e) in &parts {
        if matches!(p, Part::B(_)) {
            b_side.add_scaled(e, &f.one());
        }
    }
    let mut a_side = RfcElement::zero(f);
    for (s, t) in ops.dq_tensor(tuple)? {
        for (p, e) in ops.mu_parts(&t)? {
            if p == Part::A {
                a_side.add_scaled(&e, &s);
            }
        }
    }
    let mut diff = b_side.clone();
    for ((_, w, i), v) in &a_side.terms {
        diff.add_term((Kind::B, *w, *i), f.neg(v));
    }
    for ((_, w, i), v) in &diff.terms {
        failures.push(AinfinityFailure {
            identity: "trivial".into(),
            tuple: tuple.to_vec(),
            projection: Kind::B,
            a0: *w,
            index: *i,
            value: f.format(v),
            terms: Vec::new(),
        });
    }
    Ok((identities, failures))
}

/// Evaluates the projected A-infinity identities and the `q`-cancellation
/// identity on every tuple, in parallel.
pub fn verify_ainfinity(ops: &OperationFamily, tuples: &[Vec<Key>]) -> Result<AinfinityReport> {
    let results: Vec<(usize, Vec<AinfinityFailure>)> =
        tuples.par_iter().map(|t| check_tuple(ops, t)).collect::<Result<_>>()?;
    let mut identities = 0;
    let mut failures = Vec::new();
    for (n, fs) in results {
        identities += n;
        failures.extend(fs);
    }
    Ok(AinfinityReport { tuples: tuples.len(), identities, failures })
}

/// Endomorphisms of `V = <v0, v1>` with `|v0| = 0`, `|v1| = 1`, `d v0 = v1`.
/// Basis ordered by degree: `E01, E00, E11, E10`.
fn end_v(field: Field) -> (GradedComplex, MultiLinear, Vec<(usize, usize)>) {
    let basis = vec![(0usize, 1usize), (0, 0), (1, 1), (1, 0)];
    let deg = |(a, b): (usize, usize)| a as i64 - b as i64;
    let idx = |e: (usize, usize)| basis.iter().position(|&x| x == e).unwrap();
    let mut spaces = BTreeMap::new();
    for &e in &basis {
        *spaces.entry(deg(e)).or_insert(0usize) += 1;
    }
    let local = |e: (usize, usize)| basis.iter().filter(|&&x| deg(x) == deg(e)).position(|&x| x == e).unwrap();
    // d(E_ij) = d_V E_ij - (-1)^{|E_ij|} E_ij d_V with d_V = E10
    let mut trip: BTreeMap<i64, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
    for &(i, j) in &basis {
        let d = deg((i, j));
        if i == 0 {
            trip.entry(d).or_default().push((local((1, j)), local((i, j)), field.one()));
        }
        if j == 1 {
            trip.entry(d).or_default().push((local((i, 0)), local((i, j)), field.sign(!odd(d))));
        }
    }
    let diffs = trip
        .into_iter()
        .map(|(k, t)| {
            let m = SparseMatrix::from_triplets(field, spaces[&(k + 1)], spaces[&k], t).expect("in range");
            (k, m)
        })
        .collect();
    let c = GradedComplex::new(field, spaces, diffs).expect("End(V) is a complex");
    let mut prod = MultiLinear::new();
    for &(a, b) in &basis {
        for &(c2, d) in &basis {
            // x_2 x_1 with x_1 = E_cd, x_2 = E_ab
            if b == c2 {
                prod.insert(field, vec![idx((c2, d)), idx((a, b))], idx((a, d)), field.one());
            }
        }
    }
    (c, prod, basis)
}

/// The dg algebra `End(V)` at every weight, with `m^2` the composition and
/// continuation either the identity or zero.
pub fn dg_fixture(field: Field, continuation_identity: bool) -> OperationFamily {
    let (c, prod, basis) = end_v(field);
    let mut fam = OperationFamily::new(field, Levels::Uniform(Level::from_complex(&c)), Unlisted::Zero);
    fam.insert_uniform(2, vec![], prod).expect("composition has degree 0");
    if continuation_identity {
        let mut id = MultiLinear::new();
        for i in 0..basis.len() {
            id.insert(field, vec![i], i, field.one());
        }
        fam.insert_uniform(1, vec![1], id).expect("identity has degree 0");
    }
    fam
}

/// Copies of the fixture with one nonzero structure constant negated, labelled.
pub fn sign_flip_variants(fam: &OperationFamily) -> Vec<(String, OperationFamily)> {
    let mut out = Vec::new();
    for ((k, fl), m) in &fam.uniform {
        for n in 0..m.nnz() {
            let mut g = fam.clone();
            g.uniform.insert((*k, fl.clone()), m.with_flipped(fam.field, n));
            out.push((format!("{k}/{fl:?}#{n}"), g));
        }
    }
    for (key, m) in &fam.explicit {
        for n in 0..m.nnz() {
            let mut g = fam.clone();
            g.explicit.insert(key.clone(), m.with_flipped(fam.field, n));
            out.push((format!("{key}#{n}"), g));
        }
    }
    out
}

/// Sign rule for the continuation between the two sides of the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    /// `c = -iota c01 pi`
    Constant,
    /// `c(b) = (-1)^{deg b + 1} iota c01 pi (b)`
    DegreeDependent,
}

#[derive(Clone, Debug)]
pub struct RabinowitzComplex {
    pub cw_minus: GradedComplex,
    pub cw_plus: GradedComplex,
    pub c: ChainMap,
    pub total: GradedComplex,
    pub n: i64,
    pub window: usize,
    pub ses: ExactnessReport,
    minus_layout: Layout,
    plus_layout: Layout,
    levels: BTreeMap<i64, GradedComplex>,
    conts: BTreeMap<i64, ChainMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuationBound {
    pub degree: i64,
    pub rank: usize,
    pub source_factor: usize,
    pub target_factor: usize,
    pub ok: bool,
}

pub fn continuation_map(
    cw_minus: &GradedComplex,
    minus_layout: &Layout,
    cw_plus: &GradedComplex,
    plus_layout: &Layout,
    c01: &ChainMap,
    rule: SignRule,
) -> Result<ChainMap> {
    let f = cw_minus.field();
    let mut blocks = BTreeMap::new();
    for k in cw_minus.degrees() {
        let mut m = SparseMatrix::zeros(f, cw_plus.dim(k), cw_minus.dim(k));
        let src = minus_layout.get(&k).and_then(|l| l.iter().find(|p| p.0 == ('a', 0)));
        let dst = plus_layout.get(&k).and_then(|l| l.iter().find(|p| p.0 == ('a', 1)));
        if let (Some(&(_, so, _)), Some(&(_, to, _))) = (src, dst) {
            let s = match rule {
                SignRule::Constant => f.from_int(-1),
                SignRule::DegreeDependent => f.sign(odd(k + 1)),
            };
            m.embed(to, so, &c01.block(k).scale(&s));
        }
        blocks.insert(k, m);
    }
    ChainMap::new(cw_minus.clone(), cw_plus.clone(), blocks, 0)
}

/// Builds the cone of `c: CW_{n-*} -> CW^*` from the negative system on
/// levels `-W..=0`, the positive system on `1..=W` and `c01: level_0 -> level_1`.
pub fn build_rfc(
    sys_minus: &DirectedSystem,
    sys_plus: &DirectedSystem,
    c01: &ChainMap,
    window: usize,
    n: i64,
) -> Result<RabinowitzComplex> {
    build_rfc_with(sys_minus, sys_plus, c01, window, n, SignRule::Constant)
}

pub fn build_rfc_with(
    sys_minus: &DirectedSystem,
    sys_plus: &DirectedSystem,
    c01: &ChainMap,
    window: usize,
    n: i64,
    rule: SignRule,
) -> Result<RabinowitzComplex> {
    if c01.source() != sys_minus.level(0)? || c01.target() != sys_plus.level(1)? {
        return Err(Error::ShapeMismatch("c01 must map level 0 to level 1".into()));
    }
    c01.check("c01")?;
    let (cw_minus, minus_layout) = cotelescope_with_layout(sys_minus, window)?;
    let (cw_plus, plus_layout) = telescope_with_layout(sys_plus, window)?;
    let c = continuation_map(&cw_minus, &minus_layout, &cw_plus, &plus_layout, c01, rule)?;
    let total = cone(&c)?;
    let i = cone_inclusion(&c, &total)?;
    let p = cone_projection(&c, &total)?;
    let ses = verify_short_exact(&i, &p)?;
    let w = window as i64;
    let mut levels = BTreeMap::new();
    let mut conts = BTreeMap::new();
    for u in -w..=0 {
        levels.insert(u, sys_minus.level(u)?.clone());
        if u < 0 {
            conts.insert(u, sys_minus.map(u)?);
        }
    }
    for v in 1..=w {
        levels.insert(v, sys_plus.level(v)?.clone());
        if v < w {
            conts.insert(v, sys_plus.map(v)?);
        }
    }
    conts.insert(0, c01.clone());
    Ok(RabinowitzComplex {
        cw_minus,
        cw_plus,
        c,
        total,
        n,
        window,
        ses,
        minus_layout,
        plus_layout,
        levels,
        conts,
    })
}

/// One system on `-W..=W`; its map at 0 is used as `c01`.
pub fn build_rfc_from_system(sys: &DirectedSystem, window: usize, n: i64) -> Result<RabinowitzComplex> {
    let w = window as i64;
    let sub = |lo: i64, hi: i64| -> Result<DirectedSystem> {
        let levels = (lo..=hi).map(|u| Ok((u, sys.level(u)?.clone()))).collect::<Result<BTreeMap<_, _>>>()?;
        let maps = (lo..hi).map(|u| Ok((u, sys.map(u)?))).collect::<Result<BTreeMap<_, _>>>()?;
        DirectedSystem::new(sys.field(), levels, maps)
    };
    build_rfc(&sub(-w, 0)?, &sub(1, w)?, &sys.map(0)?, window, n)
}

/// Layout of the weight model at each degree: `(piece, offset, dim)`.
pub type UniformLayout = BTreeMap<i64, Vec<((Kind, i64), usize, usize)>>;

impl RabinowitzComplex {
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        self.total.homology()
    }

    pub fn inclusion(&self) -> Result<ChainMap> {
        cone_inclusion(&self.c, &self.total)
    }

    pub fn projection(&self) -> Result<ChainMap> {
        cone_projection(&self.c, &self.total)
    }

    pub fn long_exact_sequence(&self) -> Result<LongExactSequence> {
        long_exact_sequence(&self.inclusion()?, &self.projection()?)
    }

    /// `dim RFC^k = dim CW^k + dim CW_{n-1-k}` for every degree.
    pub fn dimension_identity(&self) -> bool {
        let mut ks: BTreeSet<i64> = self.total.degrees().into_iter().collect();
        ks.extend(self.cw_plus.degrees());
        ks.extend(self.cw_minus.degrees().into_iter().map(|k| k - 1));
        ks.iter().all(|&k| self.total.dim(k) == self.cw_plus.dim(k) + self.cw_minus.dim(k + 1))
    }

    pub fn a_weights(&self) -> std::ops::RangeInclusive<i64> {
        let w = self.window as i64;
        -(w - 1)..=w
    }

    pub fn b_weights(&self) -> std::ops::RangeInclusive<i64> {
        let w = self.window as i64;
        -w..=w - 1
    }

    /// Level data and continuations of both systems as an operation family.
    pub fn operation_family(&self) -> Result<OperationFamily> {
        let f = self.total.field();
        let levels = self.levels.iter().map(|(w, c)| (*w, Level::from_complex(c))).collect();
        let mut fam = OperationFamily::new(f, Levels::PerWeight(levels), Unlisted::Zero);
        for (&w, c) in &self.conts {
            let (src, dst) = (Level::from_complex(&self.levels[&w]), Level::from_complex(&self.levels[&(w + 1)]));
            let mut m = MultiLinear::new();
            for (&k, blk) in c.blocks() {
                let (Some(so), Some(to)) = (src.offset(k), dst.offset(k)) else { continue };
                for (r, col, v) in blk.entries() {
                    m.insert(f, vec![so + col], to + r, v.clone());
                }
            }
            fam.insert(OpKey { k: 1, flavor: vec![1], weights: vec![w + 1, w] }, m)?;
        }
        Ok(fam)
    }

    pub fn uniform_layout(&self) -> UniformLayout {
        let mut out: UniformLayout = BTreeMap::new();
        let mut ks = BTreeSet::new();
        for c in self.levels.values() {
            for k in c.degrees() {
                ks.insert(k);
                ks.insert(k - 1);
            }
        }
        for k in ks {
            let mut off = 0;
            let mut pieces = Vec::new();
            for w in self.a_weights() {
                let d = self.levels[&w].dim(k);
                pieces.push(((Kind::A, w), off, d));
                off += d;
            }
            for w in self.b_weights() {
                let d = self.levels[&w].dim(k + 1);
                pieces.push(((Kind::B, w), off, d));
                off += d;
            }
            if off > 0 {
                out.insert(k, pieces);
            }
        }
        out
    }

    fn in_window(&self, kind: Kind, w: i64) -> bool {
        match kind {
            Kind::A => self.a_weights().contains(&w),
            Kind::B => self.b_weights().contains(&w),
        }
    }

    /// The weight model: `mu^1` on the window, a complex isomorphic to the cone.
    pub fn uniform_model(&self) -> Result<GradedComplex> {
        let f = self.total.field();
        let fam = self.operation_family()?;
        let layout = self.uniform_layout();
        let mut spaces = BTreeMap::new();
        for (k, pieces) in &layout {
            spaces.insert(*k, pieces.iter().map(|p| p.2).sum::<usize>());
        }
        let mut diffs = BTreeMap::new();
        for (&k, pieces) in &layout {
            let mut trip = Vec::new();
            for &((kind, w), off, d) in pieces {
                let lvl = fam.level(w)?;
                let ld = if kind == Kind::A { k } else { k + 1 };
                let base = match lvl.offset(ld) {
                    Some(b) => b,
                    None => continue,
                };
                for j in 0..d {
                    let img = fam.mu_basis(&[(kind, w, base + j)])?;
                    for (&(okind, ow, oi), v) in img.terms() {
                        if !self.in_window(okind, ow) {
                            continue;
                        }
                        let row = self.coordinate(&layout, k + 1, (okind, ow, oi), &fam)?;
                        trip.push((row, off + j, v.clone()));
                    }
                }
            }
            let rows = spaces.get(&(k + 1)).copied().unwrap_or(0);
            diffs.insert(k, SparseMatrix::from_triplets(f, rows, spaces[&k], trip)?);
        }
        GradedComplex::new(f, spaces, diffs)
    }

    fn coordinate(&self, layout: &UniformLayout, k: i64, key: Key, fam: &OperationFamily) -> Result<usize> {
        let lvl = fam.level(key.1)?;
        let ld = lvl.degree(key.2);
        let local = key.2 - lvl.offset(ld).unwrap_or(0);
        let pieces = layout.get(&k).ok_or(Error::IndexOutOfWindow(k))?;
        let &(_, off, _) = pieces
            .iter()
            .find(|p| p.0 == (key.0, key.1))
            .ok_or(Error::IndexOutOfWindow(key.1))?;
        Ok(off + local)
    }

    /// Diagonal sign isomorphism from the cone to the weight model.
    pub fn phi(&self) -> Result<ChainMap> {
        let f = self.total.field();
        let model = self.uniform_model()?;
        let layout = self.uniform_layout();
        let mut blocks = BTreeMap::new();
        for k in self.total.degrees() {
            let pieces = layout.get(&k).ok_or(Error::IndexOutOfWindow(k))?;
            let find = |kind: Kind, w: i64| pieces.iter().find(|p| p.0 == (kind, w)).map(|p| p.1);
            let mut trip = Vec::new();
            if let Some(lay) = self.minus_layout.get(&(k + 1)) {
                for &((tag, u), off, d) in lay {
                    let (kind, eps) = match tag {
                        'a' => (Kind::B, f.neg(&f.sign(odd(k + 1)))),
                        _ => (Kind::A, f.sign(odd(k))),
                    };
                    let to = find(kind, -u).ok_or(Error::IndexOutOfWindow(-u))?;
                    trip.extend((0..d).map(|j| (to + j, off + j, eps.clone())));
                }
            }
            let shift = self.cw_minus.dim(k + 1);
            if let Some(lay) = self.plus_layout.get(&k) {
                for &((tag, w), off, d) in lay {
                    let kind = if tag == 'a' { Kind::A } else { Kind::B };
                    let to = find(kind, w).ok_or(Error::IndexOutOfWindow(w))?;
                    trip.extend((0..d).map(|j| (to + j, shift + off + j, f.one())));
                }
            }
            blocks.insert(k, SparseMatrix::from_triplets(f, model.dim(k), self.total.dim(k), trip)?);
        }
        ChainMap::new(self.total.clone(), model, blocks, 0)
    }

    /// Cone vector at degree `k` as a weight-model element.
    pub fn element(&self, k: i64, v: &[Scalar]) -> Result<RfcElement> {
        let f = self.total.field();
        let phi = self.phi()?;
        let img: Vector = phi.block(k).apply(v)?;
        let fam = self.operation_family()?;
        let pieces = self.uniform_layout().remove(&k).unwrap_or_default();
        let mut e = RfcElement::zero(f);
        for ((kind, w), off, d) in pieces {
            let ld = if kind == Kind::A { k } else { k + 1 };
            let base = fam.level(w)?.offset(ld).unwrap_or(0);
            for j in 0..d {
                e.add_term((kind, w, base + j), img[off + j].clone());
            }
        }
        Ok(e)
    }

    fn projection_at(&self, kind: Kind, w0: i64, x: &RfcElement) -> Result<Vector> {
        if !self.in_window(kind, w0) {
            return Err(Error::IndexOutOfWindow(w0));
        }
        let f = self.total.field();
        let dim = Level::from_complex(&self.levels[&w0]).dim();
        let mut out = vec![f.zero(); dim];
        for (&(kd, w, i), v) in x.terms() {
            if kd == kind && w == w0 {
                out[i] = v.clone();
            }
        }
        Ok(out)
    }

    /// `pr_{A,w0}((a_w)_w + (b_w)_w q) = a_{w0}`.
    pub fn pr_a(&self, w0: i64, x: &RfcElement) -> Result<Vector> {
        self.projection_at(Kind::A, w0, x)
    }

    /// `pr_{B,w0}((a_w)_w + (b_w)_w q) = b_{w0}`.
    pub fn pr_b(&self, w0: i64, x: &RfcElement) -> Result<Vector> {
        self.projection_at(Kind::B, w0, x)
    }

    pub fn continuation_rank_bound(&self) -> Result<Vec<ContinuationBound>> {
        let (l0, l1) = (&self.levels[&0], &self.levels[&1]);
        let mut ks: BTreeSet<i64> = self.cw_minus.degrees().into_iter().collect();
        ks.extend(self.cw_plus.degrees());
        let mut out = Vec::new();
        for k in ks {
            let rank = self.c.homology_rank(k)?;
            let (a, b) = (l0.homology_dim(k), l1.homology_dim(k));
            out.push(ContinuationBound { degree: k, rank, source_factor: a, target_factor: b, ok: rank <= a.min(b) });
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let rfh: serde_json::Map<String, Value> =
            self.homology().into_iter().map(|(k, d)| (k.to_string(), json!(d))).collect();
        let hw: serde_json::Map<String, Value> =
            self.cw_plus.homology().into_iter().map(|(k, d)| (k.to_string(), json!(d))).collect();
        let hw_lower: serde_json::Map<String, Value> = self
            .cw_minus
            .homology()
            .into_iter()
            .map(|(k, d)| ((self.n - k).to_string(), json!(d)))
            .collect();
        json!({
            "window": self.window,
            "n": self.n,
            "rfh": rfh,
            "hw_upper": hw,
            "hw_lower": hw_lower,
            "ses_exact": self.ses.pass,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_round_trip() {
        let k = OpKey::parse("2/1,2/3,0,1").unwrap();
        assert_eq!(k, OpKey { k: 2, flavor: vec![1, 2], weights: vec![3, 0, 1] });
        assert_eq!(k.to_string(), "2/1,2/3,0,1");
        assert_eq!(OpKey::parse("2//0,0,0").unwrap().flavor, Vec::<usize>::new());
    }

    #[test]
    fn fixture_levels_are_complexes() {
        let fam = dg_fixture(Field::Rational, true);
        let l = fam.level(0).unwrap();
        assert_eq!(l.dim(), 4);
        assert!(l.complex().is_acyclic());
    }
}
