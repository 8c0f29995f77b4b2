//! Seeded generators for complexes, chain maps and directed systems.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cy_pairing::{FiniteCategoryPresentation, Sample};
use crate::exact_linalg::{invert, kernel_basis, SparseMatrix};
use crate::field::{Field, Scalar};
use crate::graded_complex::{ChainMap, GradedComplex};
use crate::limit_systems::DirectedSystem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    field.from_int(rng.gen_range(-2..=2))
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: Field, nrows: usize, ncols: usize) -> SparseMatrix {
    let vals: Vec<Scalar> = (0..nrows * ncols).map(|_| small_scalar(rng, field)).collect();
    SparseMatrix::from_dense_fn(field, nrows, ncols, |r, c| vals[r * ncols + c].clone())
}

pub fn random_invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> (SparseMatrix, SparseMatrix) {
    loop {
        let m = random_matrix(rng, field, n, n);
        if let Some(inv) = invert(&m) {
            return (m, inv);
        }
    }
}

/// Complex on degrees `lo..=hi` with every space of dimension at most
/// `max_dim`, built from a split normal form and conjugated by random
/// changes of basis.
pub fn random_complex<R: Rng>(rng: &mut R, field: Field, lo: i64, hi: i64, max_dim: usize) -> GradedComplex {
    // boundary, homology and "rank" parts per degree
    let mut b: BTreeMap<i64, usize> = BTreeMap::new();
    let mut h: BTreeMap<i64, usize> = BTreeMap::new();
    let mut r: BTreeMap<i64, usize> = BTreeMap::new();
    for k in lo..=hi {
        let bk = *b.get(&k).unwrap_or(&0);
        let room = max_dim.saturating_sub(bk);
        let hk = rng.gen_range(0..=room.min(2));
        let rk = if k < hi { rng.gen_range(0..=(room - hk).min(max_dim / 2)) } else { 0 };
        h.insert(k, hk);
        r.insert(k, rk);
        b.insert(k + 1, rk);
    }
    let mut spaces = BTreeMap::new();
    for k in lo..=hi {
        spaces.insert(k, b.get(&k).unwrap_or(&0) + h[&k] + r[&k]);
    }
    let changes: BTreeMap<i64, (SparseMatrix, SparseMatrix)> =
        spaces.iter().map(|(&k, &d)| (k, random_invertible(rng, field, d))).collect();
    let mut diffs = BTreeMap::new();
    for k in lo..hi {
        let (src, dst) = (spaces[&k], spaces[&(k + 1)]);
        let bk = b.get(&k).copied().unwrap_or(0);
        let from = bk + h[&k];
        let mut d = SparseMatrix::zeros(field, dst, src);
        for i in 0..r[&k] {
            d.set(i, from + i, field.one());
        }
        let conj = changes[&(k + 1)].0.mul(&d).unwrap().mul(&changes[&k].1).unwrap();
        diffs.insert(k, conj);
    }
    GradedComplex::new(field, spaces, diffs).expect("normal form conjugates to a complex")
}

/// Random element of the space of degree-preserving chain maps `s -> t`.
pub fn random_chain_map<R: Rng>(rng: &mut R, s: &GradedComplex, t: &GradedComplex) -> ChainMap {
    let field = s.field();
    let mut ks: Vec<i64> = s.degrees();
    ks.retain(|k| t.dim(*k) > 0);
    // unknowns: entries of f_k, row-major, for each k
    let mut offsets = BTreeMap::new();
    let mut n = 0;
    for &k in &ks {
        offsets.insert(k, n);
        n += t.dim(k) * s.dim(k);
    }
    let var = |k: i64, i: usize, j: usize| offsets[&k] + i * s.dim(k) + j;
    // d_T f_k - f_{k+1} d_S = 0, one equation per entry of T^{k+1} x S^k
    let mut trip = Vec::new();
    let mut row = 0;
    let mut eq_ks: Vec<i64> = ks.clone();
    eq_ks.extend(ks.iter().map(|k| k - 1));
    eq_ks.sort();
    eq_ks.dedup();
    for &k in &eq_ks {
        let (dt, ds) = (t.diff(k), s.diff(k));
        for a in 0..t.dim(k + 1) {
            for b2 in 0..s.dim(k) {
                if offsets.contains_key(&k) {
                    for (c, v) in dt.row(a) {
                        trip.push((row, var(k, *c, b2), v.clone()));
                    }
                }
                if offsets.contains_key(&(k + 1)) {
                    for (c, bb, v) in ds.entries() {
                        if bb == b2 {
                            trip.push((row, var(k + 1, a, c), field.neg(v)));
                        }
                    }
                }
                row += 1;
            }
        }
    }
    let sys = SparseMatrix::from_triplets(field, row, n, trip).expect("indices in range");
    let basis = kernel_basis(&sys);
    let mut x = vec![field.zero(); n];
    for v in &basis {
        let c = small_scalar(rng, field);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi = field.add(xi, &field.mul(&c, vi));
        }
    }
    let blocks = ks
        .iter()
        .map(|&k| {
            let m = SparseMatrix::from_dense_fn(field, t.dim(k), s.dim(k), |i, j| x[var(k, i, j)].clone());
            (k, m)
        })
        .collect();
    ChainMap::new(s.clone(), t.clone(), blocks, 0).expect("kernel of the chain-map constraint")
}

/// Directed system on levels `-w..=w` that is constant with identity maps
/// on `[-w, lo_stable]` and `[hi_stable, w]`.
pub fn random_system<R: Rng>(rng: &mut R, field: Field, w: i64, max_dim: usize) -> DirectedSystem {
    let (dlo, dhi) = (rng.gen_range(-2..=0), rng.gen_range(0..=2));
    let lo_stable = rng.gen_range(-w..=0);
    let hi_stable = rng.gen_range(1..=w.max(1));
    let mut levels = BTreeMap::new();
    for u in lo_stable..=hi_stable {
        levels.insert(u, random_complex(rng, field, dlo, dhi, max_dim));
    }
    for u in -w..lo_stable {
        levels.insert(u, levels[&lo_stable].clone());
    }
    for u in hi_stable + 1..=w {
        levels.insert(u, levels[&hi_stable].clone());
    }
    let mut maps = BTreeMap::new();
    for u in -w..w {
        let m = if u < lo_stable || u >= hi_stable {
            ChainMap::identity(&levels[&u])
        } else {
            random_chain_map(rng, &levels[&u], &levels[&(u + 1)])
        };
        maps.insert(u, m);
    }
    DirectedSystem::new(field, levels, maps).expect("chain maps between generated levels")
}

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub index: usize,
    pub field: Field,
    pub window: usize,
    pub n: i64,
    pub system: DirectedSystem,
}

/// Mixed rational and mod-5 systems, windows up to 5, levels up to dimension 6.
pub fn corpus(seed: u64, count: usize) -> Vec<CorpusCase> {
    let mut r = rng(seed);
    (0..count)
        .map(|index| {
            let field = if index % 2 == 0 { Field::Rational } else { Field::Prime(5) };
            let window = r.gen_range(1..=5usize);
            let system = random_system(&mut r, field, window as i64, 6);
            CorpusCase { index, field, window, n: r.gen_range(3..=4), system }
        })
        .collect()
}

/// Random pairs `f ∈ Hom^k(i, j)`, `g ∈ Hom^{n-1-k}(j, i)` over keys where
/// both sides are nonzero.
pub fn random_samples<R: Rng>(rng: &mut R, cat: &FiniteCategoryPresentation, count: usize) -> Vec<Sample> {
    let n1 = cat.n - 1;
    let keys: Vec<(usize, usize, i64)> = cat
        .homs()
        .iter()
        .filter(|(&(i, j, k), &d)| d > 0 && cat.dim(j, i, n1 - k) > 0)
        .map(|(&key, _)| key)
        .collect();
    if keys.is_empty() {
        return Vec::new();
    }
    let f = cat.field;
    (0..count)
        .map(|_| {
            let (i, j, k) = keys[rng.gen_range(0..keys.len())];
            Sample {
                i,
                j,
                k,
                f: (0..cat.dim(i, j, k)).map(|_| small_scalar(rng, f)).collect(),
                g: (0..cat.dim(j, i, n1 - k)).map(|_| small_scalar(rng, f)).collect(),
            }
        })
        .collect()
}
