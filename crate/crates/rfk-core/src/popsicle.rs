//! Combinatorial types of popsicles: dimensions, broken types, the
//! codimension-one census and the index set of the A-infinity equation.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// `k` inputs, sprinkles on the inputs in `flavor`, weights `(w_0, ..., w_k)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PopsicleType {
    pub k: usize,
    pub flavor: BTreeSet<usize>,
    pub weights: Vec<i64>,
}

impl PopsicleType {
    pub fn new(k: usize, flavor: BTreeSet<usize>, weights: Vec<i64>) -> Result<PopsicleType> {
        if flavor.iter().any(|&f| f == 0 || f > k) {
            return Err(Error::InvalidOperation(format!("flavor {flavor:?} not inside 1..{k}")));
        }
        if k + flavor.len() < 2 {
            return Err(Error::Unstable { k, f: flavor.len() });
        }
        if weights.len() != k + 1 {
            return Err(Error::WeightMismatch(format!("{} weights for {k} inputs", weights.len())));
        }
        let w0 = weights[1..].iter().sum::<i64>() + flavor.len() as i64;
        if weights[0] != w0 {
            return Err(Error::WeightMismatch(format!("w_0 = {} but inputs force {w0}", weights[0])));
        }
        Ok(PopsicleType { k, flavor, weights })
    }

    /// Input weights zero, output weight `|F|`.
    pub fn unweighted(k: usize, flavor: &[usize]) -> Result<PopsicleType> {
        let flavor: BTreeSet<usize> = flavor.iter().copied().collect();
        let mut w = vec![0; k + 1];
        w[0] = flavor.len() as i64;
        PopsicleType::new(k, flavor, w)
    }

    pub fn flavor_vec(&self) -> Vec<usize> {
        self.flavor.iter().copied().collect()
    }
}

pub fn moduli_dim(t: &PopsicleType) -> Result<i64> {
    if t.k + t.flavor.len() < 2 {
        return Err(Error::Unstable { k: t.k, f: t.flavor.len() });
    }
    Ok(t.k as i64 - 2 + t.flavor.len() as i64)
}

/// Input label of the outer vertex after collapsing `i+1..=j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    Input(usize),
    Star,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Input(i) => write!(f, "{i}"),
            Label::Star => write!(f, "*"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    /// At most one sprinkle moves to the new puncture.
    One,
    /// Two or more sprinkles share the new puncture; the signed count vanishes.
    Two,
}

/// A codimension-one stratum: the inner popsicle on inputs `i+1..=j` with
/// sprinkles `f1` bubbles off at the new puncture `*` of the outer one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub i: usize,
    pub j: usize,
    pub f1: Vec<usize>,
    pub family: Family,
    pub outer_labels: Vec<Label>,
    /// Outer sprinkles as positions in `outer_labels`; repeats mark family two.
    pub outer_flavor: Vec<usize>,
    pub inner_weights: Vec<i64>,
    pub outer_weights: Vec<i64>,
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0..1u32 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

fn split(t: &PopsicleType, i: usize, j: usize, f1: &[usize]) -> Stratum {
    let inside: Vec<usize> = t.flavor.iter().copied().filter(|&l| l > i && l <= j).collect();
    let moved = inside.iter().filter(|l| !f1.contains(l)).count();
    let mut outer_labels: Vec<Label> = (1..=i).map(Label::Input).collect();
    outer_labels.push(Label::Star);
    outer_labels.extend((j + 1..=t.k).map(Label::Input));
    let mut outer_flavor = Vec::new();
    for &l in &t.flavor {
        if l <= i {
            outer_flavor.push(l);
        } else if l > j {
            outer_flavor.push(l - (j - i) + 1);
        } else if !f1.contains(&l) {
            outer_flavor.push(i + 1);
        }
    }
    outer_flavor.sort();
    let inner_in = &t.weights[i + 1..=j];
    let inner_out = inner_in.iter().sum::<i64>() + f1.len() as i64;
    let mut inner_weights = vec![inner_out];
    inner_weights.extend_from_slice(inner_in);
    let mut outer_weights = vec![t.weights[0]];
    outer_weights.extend_from_slice(&t.weights[1..=i]);
    outer_weights.push(inner_out);
    outer_weights.extend_from_slice(&t.weights[j + 1..]);
    Stratum {
        i,
        j,
        f1: f1.to_vec(),
        family: if moved <= 1 { Family::One } else { Family::Two },
        outer_labels,
        outer_flavor,
        inner_weights,
        outer_weights,
    }
}

/// Every `(i, j, F_1)` whose two pieces are stable popsicles.
pub fn enumerate_codim1(t: &PopsicleType) -> Result<Vec<Stratum>> {
    moduli_dim(t)?;
    let k = t.k;
    let nf = t.flavor.len();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..=k {
            let inside: Vec<usize> = t.flavor.iter().copied().filter(|&l| l > i && l <= j).collect();
            for f1 in subsets(&inside) {
                let inner_ok = (j - i) + f1.len() >= 2;
                let outer_ok = k + 2 - (j - i) + (nf - f1.len()) >= 3;
                if inner_ok && outer_ok {
                    out.push(split(t, i, j, &f1));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TermKind {
    /// Both pieces stable.
    Regular,
    /// The inner piece is the differential on input `l`.
    InputStrip(usize),
    /// The outer piece is the differential on the output.
    OutputStrip,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CompositionTerm {
    pub i: usize,
    pub j: usize,
    pub f1: Vec<usize>,
    pub kinds: Vec<TermKind>,
}

impl CompositionTerm {
    pub fn inner_arity(&self) -> usize {
        self.j - self.i
    }

    pub fn outer_arity(&self, k: usize) -> usize {
        k - (self.j - self.i) + 1
    }
}

/// Index set of the A-infinity equation for `k` inputs with sprinkles `F`:
/// all `(i, j, F_1)` losing at most one sprinkle to the outer piece,
/// including the strip breakings.
pub fn ainfinity_terms(k: usize, flavor: &[usize]) -> Vec<CompositionTerm> {
    let fl: BTreeSet<usize> = flavor.iter().copied().collect();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..=k {
            let inside: Vec<usize> = fl.iter().copied().filter(|&l| l > i && l <= j).collect();
            for f1 in subsets(&inside) {
                let lost = inside.len() - f1.len();
                if lost > 1 {
                    continue;
                }
                let outer_f = fl.len() - f1.len();
                let mut kinds = Vec::new();
                if j - i == k && outer_f == 0 {
                    kinds.push(TermKind::OutputStrip);
                }
                if j - i == 1 && f1.is_empty() {
                    kinds.push(TermKind::InputStrip(j));
                }
                if kinds.is_empty() {
                    kinds.push(TermKind::Regular);
                }
                out.push(CompositionTerm { i, j, f1, kinds });
            }
        }
    }
    out
}

/// Planar rooted tree; leaves carry input labels `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tree {
    Leaf(usize),
    Node(Vec<Tree>),
}

impl Tree {
    fn vertices(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(cs) => 1 + cs.iter().map(|c| c.vertices()).sum::<usize>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    /// Child slots in order: `Ok(vertex)` or `Err(input label)`.
    pub children: Vec<std::result::Result<usize, usize>>,
    /// Input labels of the sprinkles placed on this vertex.
    pub sprinkles: Vec<usize>,
    /// Sprinkle positions among the children, sorted; repeats are allowed.
    pub flavor: Vec<usize>,
}

impl Vertex {
    pub fn valence(&self) -> usize {
        self.children.len() + 1
    }

    pub fn is_stable(&self) -> bool {
        self.valence() + self.sprinkles.len() >= 3
    }

    pub fn injective(&self) -> bool {
        self.flavor.windows(2).all(|p| p[0] < p[1])
    }
}

/// Broken popsicle type: vertices in preorder, vertex 0 carries the output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrokenType {
    pub tree: Tree,
    pub vertices: Vec<Vertex>,
}

impl BrokenType {
    pub fn codimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn finite_edges(&self) -> usize {
        self.vertices.iter().flat_map(|v| &v.children).filter(|c| c.is_ok()).count()
    }

    pub fn is_stable(&self) -> bool {
        self.vertices.iter().all(|v| v.is_stable())
    }

    /// Sum of the vertex moduli dimensions.
    pub fn dimension(&self) -> i64 {
        self.vertices.iter().map(|v| v.children.len() as i64 - 2 + v.sprinkles.len() as i64).sum()
    }

    pub fn sym_trivial(&self) -> bool {
        self.vertices.iter().all(|v| v.injective())
    }
}

/// Trees over leaves `l..=r` whose root is a vertex, with at most `budget` vertices.
fn gen_trees(l: usize, r: usize, budget: usize) -> Vec<Tree> {
    if budget == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // compositions of l..=r into consecutive blocks
    let n = r - l + 1;
    for mask in 0..1u32 << (n - 1) {
        let mut blocks = Vec::new();
        let mut start = l;
        for b in 0..n - 1 {
            if mask >> b & 1 == 1 {
                blocks.push((start, l + b));
                start = l + b + 1;
            }
        }
        blocks.push((start, r));
        let mut partial: Vec<(Vec<Tree>, usize)> = vec![(Vec::new(), 1)];
        for &(a, b) in &blocks {
            let mut next = Vec::new();
            for (cs, used) in &partial {
                if a == b {
                    let mut c2 = cs.clone();
                    c2.push(Tree::Leaf(a));
                    next.push((c2, *used));
                }
                // a subtree over this block; a single block as the only child is a unary vertex
                for t in gen_trees(a, b, budget - used) {
                    let v = t.vertices();
                    let mut c2 = cs.clone();
                    c2.push(t);
                    next.push((c2, used + v));
                }
            }
            partial = next;
        }
        for (cs, used) in partial {
            if used <= budget {
                out.push(Tree::Node(cs));
            }
        }
    }
    out
}

fn flatten(t: &Tree, vertices: &mut Vec<Vertex>, parent_path: &[(usize, usize)], paths: &mut Vec<(usize, Vec<(usize, usize)>)>) {
    let Tree::Node(cs) = t else { return };
    let me = vertices.len();
    vertices.push(Vertex { children: Vec::new(), sprinkles: Vec::new(), flavor: Vec::new() });
    let mut children = Vec::new();
    for (pos, c) in cs.iter().enumerate() {
        let mut path = parent_path.to_vec();
        path.push((me, pos + 1));
        match c {
            Tree::Leaf(l) => {
                children.push(Err(*l));
                paths.push((*l, path));
            }
            Tree::Node(_) => {
                children.push(Ok(vertices.len()));
                flatten(c, vertices, &path, paths);
            }
        }
    }
    vertices[me].children = children;
}

/// All stable broken types of `t` up to codimension `max_codim`.
pub fn enumerate_broken(t: &PopsicleType, max_codim: usize) -> Result<Vec<BrokenType>> {
    moduli_dim(t)?;
    let budget = (t.k + t.flavor.len()).saturating_sub(1).min(max_codim + 1);
    let mut out = Vec::new();
    for tree in gen_trees(1, t.k, budget) {
        let mut base = Vec::new();
        let mut paths = Vec::new();
        flatten(&tree, &mut base, &[], &mut paths);
        let fl = t.flavor_vec();
        // each sprinkle sits on a vertex along the path from its input to the root
        let choices: Vec<Vec<(usize, usize)>> = fl
            .iter()
            .map(|l| paths.iter().find(|(leaf, _)| leaf == l).map(|p| p.1.clone()).unwrap_or_default())
            .collect();
        let mut idx = vec![0usize; fl.len()];
        'assign: loop {
            let mut vs = base.clone();
            for (s, &c) in idx.iter().enumerate() {
                let (v, pos) = choices[s][c];
                vs[v].sprinkles.push(fl[s]);
                vs[v].flavor.push(pos);
            }
            for v in &mut vs {
                v.flavor.sort();
            }
            let b = BrokenType { tree: tree.clone(), vertices: vs };
            if b.is_stable() && b.codimension() <= max_codim {
                out.push(b);
            }
            let mut p = 0;
            loop {
                if p == idx.len() {
                    break 'assign;
                }
                idx[p] += 1;
                if idx[p] < choices[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub k: usize,
    pub flavor: Vec<usize>,
    pub dimension: i64,
    pub strata: Vec<Stratum>,
    pub family_one: usize,
    pub family_two: usize,
    pub terms: Vec<CompositionTerm>,
}

pub fn census(t: &PopsicleType) -> Result<Census> {
    let strata = enumerate_codim1(t)?;
    let family_one = strata.iter().filter(|s| s.family == Family::One).count();
    Ok(Census {
        k: t.k,
        flavor: t.flavor_vec(),
        dimension: moduli_dim(t)?,
        family_two: strata.len() - family_one,
        family_one,
        strata,
        terms: ainfinity_terms(t.k, &t.flavor_vec()),
    })
}

impl Census {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "flavor": self.flavor,
            "dimension": self.dimension,
            "family_one": self.family_one,
            "family_two": self.family_two,
            "strata": self.strata.iter().map(|s| json!({
                "i": s.i, "j": s.j, "f1": s.f1,
                "family": match s.family { Family::One => 1, Family::Two => 2 },
                "outer_labels": s.outer_labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "outer_flavor": s.outer_flavor,
            })).collect::<Vec<_>>(),
            "ainfinity_terms": self.terms.iter().map(|t| json!({
                "i": t.i, "j": t.j, "f1": t.f1,
                "kinds": t.kinds.iter().map(|k| match k {
                    TermKind::Regular => "regular".to_string(),
                    TermKind::InputStrip(l) => format!("input-strip {l}"),
                    TermKind::OutputStrip => "output-strip".to_string(),
                }).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "k={} F={:?} dim={} strata={} (family 1: {}, family 2: {})\n",
            self.k,
            self.flavor,
            self.dimension,
            self.strata.len(),
            self.family_one,
            self.family_two
        );
        s.push_str("  i  j  F1          family  outer\n");
        for st in &self.strata {
            let labels: Vec<String> = st.outer_labels.iter().map(|l| l.to_string()).collect();
            s.push_str(&format!(
                "  {:<2} {:<2} {:<11} {:<7} {{{}}}\n",
                st.i,
                st.j,
                format!("{:?}", st.f1),
                match st.family {
                    Family::One => "1",
                    Family::Two => "2",
                },
                labels.join(",")
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(moduli_dim(&PopsicleType::unweighted(1, &[1]).unwrap()).unwrap(), 0);
        assert_eq!(moduli_dim(&PopsicleType::unweighted(2, &[]).unwrap()).unwrap(), 0);
        assert_eq!(moduli_dim(&PopsicleType::unweighted(2, &[1, 2]).unwrap()).unwrap(), 2);
        assert!(matches!(PopsicleType::unweighted(1, &[]), Err(Error::Unstable { .. })));
    }

    #[test]
    fn small_census() {
        let t3 = PopsicleType::unweighted(3, &[]).unwrap();
        let ij: Vec<(usize, usize)> = enumerate_codim1(&t3).unwrap().iter().map(|s| (s.i, s.j)).collect();
        assert_eq!(ij, vec![(0, 2), (1, 3)]);
        assert!(enumerate_codim1(&PopsicleType::unweighted(2, &[]).unwrap()).unwrap().is_empty());
    }
}
