//! Simplicial complexes, their face rings and the cohomology of moment-angle complexes.
//!
//! Vertices are numbered `1..=m` in the public API and stored as bits `0..m`.
//! The cohomology of `Z_K` is computed in the reduced Koszul model `R(K)`
//! (see [`crate::ring`]) and compared with reduced simplicial cohomology of
//! induced subcomplexes. The comparison map sends the dual of a face `σ ⊆ U`
//! to `sgn(σ, U∖σ) v_σ u_{U∖σ}`, where `sgn` is the shuffle sign.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::dga::Cochain;
use crate::error::{Error, Result};
use crate::linalg::{quotient_unchecked, Field, QuotientBasis, Scalar, SparseMatrix, SparseVec};
use crate::massey::{massey_product, MasseyOptions, MasseyOutcome, Triviality};
use crate::ring::{
    cup_length_of, golod_test_model, model_betti, positive_classes, shuffle_sign, BettiTable, ClassRef, GolodReport,
    KMono, KoszulComplex, KoszulModel, MonomialQuotient,
};

/// Default bound on the vertex count for whole-complex enumerations.
pub const HOCHSTER_CAP: usize = 14;

/// Bit mask of 1-based vertices.
pub fn mask_of(vertices: &[usize]) -> u32 {
    vertices.iter().fold(0, |m, v| m | 1 << (v - 1))
}

/// 1-based vertices of a mask.
pub fn vertices_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::CapExceeded(format!("{m} vertices (cap {cap})")));
    }
    Ok(())
}

/// A simplicial complex on `[m]` given by its minimal non-faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    m: usize,
    minimal_nonfaces: Vec<u32>,
    faces: Vec<u32>,
}

impl SimplicialComplex {
    fn from_masks(m: usize, nonfaces: Vec<u32>) -> Result<Self> {
        if m > 32 {
            return Err(Error::CapExceeded(format!("{m} vertices (at most 32)")));
        }
        let full: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        let mut sorted = nonfaces;
        for n in &sorted {
            if *n & !full != 0 {
                return Err(Error::InvalidInput(format!("non-face {:?} outside [{m}]", vertices_of(*n))));
            }
            if n.count_ones() < 2 {
                return Err(Error::InvalidInput(format!(
                    "non-face {:?}: every vertex must be a face and non-faces have at least two vertices",
                    vertices_of(*n)
                )));
            }
        }
        sorted.sort_by_key(|n| (n.count_ones(), *n));
        sorted.dedup();
        let mut minimal: Vec<u32> = Vec::new();
        for n in sorted {
            if !minimal.iter().any(|k| k & n == *k) {
                minimal.push(n);
            }
        }
        minimal.sort();
        let mut k = SimplicialComplex {
            m,
            minimal_nonfaces: minimal,
            faces: Vec::new(),
        };
        let mut faces = Vec::new();
        k.face_rec(0, 0, &mut faces);
        faces.sort_by_key(|f| (f.count_ones(), *f));
        k.faces = faces;
        Ok(k)
    }

    fn face_rec(&self, start: usize, acc: u32, out: &mut Vec<u32>) {
        out.push(acc);
        for v in start..self.m {
            let next = acc | 1 << v;
            if self.is_face(next) {
                self.face_rec(v + 1, next, out);
            }
        }
    }

    /// From 1-based minimal non-faces; non-minimal entries are discarded.
    pub fn from_minimal_nonfaces(m: usize, nonfaces: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::new();
        for n in nonfaces {
            if n.iter().any(|v| *v == 0 || *v > m) {
                return Err(Error::InvalidInput(format!("non-face {n:?} outside [{m}]")));
            }
            masks.push(mask_of(n));
        }
        Self::from_masks(m, masks)
    }

    /// From 1-based facets; every vertex must lie in some facet.
    pub fn from_facets(m: usize, facets: &[Vec<usize>]) -> Result<Self> {
        if m > 32 {
            return Err(Error::CapExceeded(format!("{m} vertices (at most 32)")));
        }
        let mut fm = Vec::new();
        for f in facets {
            if f.iter().any(|v| *v == 0 || *v > m) {
                return Err(Error::InvalidInput(format!("facet {f:?} outside [{m}]")));
            }
            fm.push(mask_of(f));
        }
        let covered = fm.iter().fold(0u32, |a, f| a | f);
        if covered.count_ones() as usize != m {
            return Err(Error::InvalidInput("every vertex must lie in a facet".into()));
        }
        let is_face = |s: u32| fm.iter().any(|f| s & f == s);
        // Minimal non-faces are σ ∪ {v} with σ a face and every facet of σ ∪ {v} a face.
        let mut faces = vec![0u32];
        let mut nonfaces = Vec::new();
        let mut i = 0;
        while i < faces.len() {
            let s = faces[i];
            i += 1;
            let top = 32 - s.leading_zeros() as usize;
            for v in top..m {
                let t = s | 1 << v;
                if is_face(t) {
                    faces.push(t);
                } else if (0..m).filter(|w| t >> w & 1 == 1).all(|w| is_face(t & !(1 << w))) {
                    nonfaces.push(t);
                }
            }
        }
        Self::from_masks(m, nonfaces)
    }

    /// The full simplex on `m` vertices.
    pub fn simplex(m: usize) -> Result<Self> {
        Self::from_masks(m, Vec::new())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn minimal_nonface_masks(&self) -> &[u32] {
        &self.minimal_nonfaces
    }

    pub fn minimal_nonfaces(&self) -> Vec<Vec<usize>> {
        self.minimal_nonfaces.iter().map(|n| vertices_of(*n)).collect()
    }

    pub fn is_face(&self, s: u32) -> bool {
        !self.minimal_nonfaces.iter().any(|n| n & s == *n)
    }

    /// All faces including the empty one, by size then mask.
    pub fn faces(&self) -> &[u32] {
        &self.faces
    }

    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<u32> = self
            .faces
            .iter()
            .copied()
            .filter(|f| (0..self.m).all(|v| f >> v & 1 == 1 || !self.is_face(f | 1 << v)))
            .collect();
        out.sort();
        out.into_iter().map(vertices_of).collect()
    }

    pub fn dim(&self) -> i32 {
        self.faces.iter().map(|f| f.count_ones() as i32).max().unwrap_or(0) - 1
    }

    /// Number of faces of each dimension `-1, 0, 1, …`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; (self.dim() + 2) as usize];
        for f in &self.faces {
            out[f.count_ones() as usize] += 1;
        }
        out
    }

    /// Induced subcomplex on `vertices`, renumbered in increasing order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort();
        vs.dedup();
        if vs.iter().any(|v| *v == 0 || *v > self.m) {
            return Err(Error::InvalidInput(format!("{vertices:?} is not a subset of [{}]", self.m)));
        }
        let u = mask_of(&vs);
        let rename = |n: u32| -> u32 {
            vs.iter()
                .enumerate()
                .filter(|(_, v)| n >> (*v - 1) & 1 == 1)
                .fold(0, |a, (i, _)| a | 1 << i)
        };
        let nf = self
            .minimal_nonfaces
            .iter()
            .filter(|n| *n & !u == 0)
            .map(|n| rename(*n))
            .collect();
        Self::from_masks(vs.len(), nf)
    }

    /// Join, with the vertices of `other` shifted by `self.m()`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let mut nf = self.minimal_nonfaces.clone();
        nf.extend(other.minimal_nonfaces.iter().map(|n| n << self.m));
        Self::from_masks(self.m + other.m, nf)
    }

    pub fn is_flag(&self) -> bool {
        self.minimal_nonfaces.iter().all(|n| n.count_ones() == 2)
    }

    pub fn skeleton1(&self) -> Graph {
        let mut g = Graph::empty(self.m);
        for a in 0..self.m {
            for b in a + 1..self.m {
                if self.is_face(1 << a | 1 << b) {
                    g.adj[a] |= 1 << b;
                    g.adj[b] |= 1 << a;
                }
            }
        }
        g
    }

    /// Stanley–Reisner ring.
    pub fn face_ring(&self, field: Field) -> Result<MonomialQuotient> {
        let gens = self
            .minimal_nonfaces
            .iter()
            .map(|n| (0..self.m).map(|v| n >> v & 1).collect())
            .collect();
        MonomialQuotient::new(self.m, gens, field)
    }
}

/// Simple graph on `n ≤ 32` vertices as adjacency masks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    pub n: usize,
    pub adj: Vec<u32>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![0; n] }
    }

    /// From 1-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(a, b) in edges {
            if a == b || a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidInput(format!("bad edge ({a}, {b})")));
            }
            g.adj[a - 1] |= 1 << (b - 1);
            g.adj[b - 1] |= 1 << (a - 1);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_edge(a, b) {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    /// Maximum cardinality search order, visited first to last.
    pub fn mcs_order(&self) -> Vec<usize> {
        let mut weight = vec![0usize; self.n];
        let mut done = 0u32;
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|v| done >> v & 1 == 0)
                .max_by_key(|v| (weight[*v], std::cmp::Reverse(*v)))
                .unwrap();
            done |= 1 << v;
            order.push(v);
            for w in 0..self.n {
                if done >> w & 1 == 0 && self.has_edge(v, w) {
                    weight[w] += 1;
                }
            }
        }
        order
    }

    /// Whether `order` is a perfect elimination ordering.
    pub fn is_perfect_elimination(&self, order: &[usize]) -> bool {
        let mut pos = vec![0; self.n];
        for (i, v) in order.iter().enumerate() {
            pos[*v] = i;
        }
        order.iter().all(|&v| {
            let later: Vec<usize> = (0..self.n).filter(|w| self.has_edge(v, *w) && pos[*w] > pos[v]).collect();
            later
                .iter()
                .enumerate()
                .all(|(i, a)| later[i + 1..].iter().all(|b| self.has_edge(*a, *b)))
        })
    }

    pub fn is_chordal(&self) -> bool {
        let mut order = self.mcs_order();
        order.reverse();
        self.is_perfect_elimination(&order)
    }

    /// Flag (clique) complex.
    pub fn flag_complex(&self) -> Result<SimplicialComplex> {
        let mut nf = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if !self.has_edge(a, b) {
                    nf.push(1u32 << a | 1 << b);
                }
            }
        }
        SimplicialComplex::from_masks(self.n, nf)
    }

    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                if self.has_edge(a, b) {
                    g.adj[perm[a]] |= 1 << perm[b];
                }
            }
        }
        g
    }

    /// Edge mask over pairs `(a, b)`, `a < b`, in lexicographic order.
    pub fn edge_code(&self) -> u64 {
        let mut code = 0u64;
        let mut bit = 0;
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_edge(a, b) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        code
    }

    /// Smallest edge code over the given permutations.
    pub fn canonical_code(&self, perms: &[Vec<usize>]) -> u64 {
        perms.iter().map(|p| self.permuted(p).edge_code()).min().unwrap_or(self.edge_code())
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// A cochain on an induced subcomplex `K_U`, keyed by face masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCochain {
    pub support: u32,
    pub q: i32,
    pub values: BTreeMap<u32, Scalar>,
}

impl SimplicialCochain {
    pub fn zero(support: u32, q: i32) -> Self {
        SimplicialCochain {
            support,
            q,
            values: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|s| s.is_zero())
    }

    pub fn add_term(&mut self, face: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.values.entry(face).or_insert_with(|| c.field().zero());
        *e = e.add(c);
        if e.is_zero() {
            self.values.remove(&face);
        }
    }
}

/// Cochain groups of an induced subcomplex.
pub struct InducedCochains {
    pub support: u32,
    /// Faces of `K_U` of size `s` at position `s`.
    pub faces: Vec<Vec<u32>>,
    index: Vec<HashMap<u32, usize>>,
}

impl InducedCochains {
    pub fn new(k: &SimplicialComplex, support: u32) -> Self {
        let size = support.count_ones() as usize;
        let mut faces = vec![Vec::new(); size + 2];
        for f in k.faces() {
            if f & !support == 0 {
                faces[f.count_ones() as usize].push(*f);
            }
        }
        let index = faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, f)| (*f, i)).collect())
            .collect();
        InducedCochains { support, faces, index }
    }

    /// Faces of dimension `q` (empty for `q` outside `-1..|U|`).
    pub fn faces_of_dim(&self, q: i32) -> &[u32] {
        let s = q + 1;
        if s < 0 || s as usize >= self.faces.len() {
            &[]
        } else {
            &self.faces[s as usize]
        }
    }

    fn position(&self, f: u32) -> Option<usize> {
        self.index.get(f.count_ones() as usize)?.get(&f).copied()
    }

    pub fn to_vec(&self, c: &SimplicialCochain) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (f, s) in &c.values {
            let i = self
                .position(*f)
                .filter(|_| f.count_ones() as i32 == c.q + 1)
                .ok_or_else(|| Error::InvalidInput(format!("{:?} is not a {}-face of K_U", vertices_of(*f), c.q)))?;
            v.add_at(i, s);
        }
        Ok(v)
    }

    pub fn from_vec(&self, q: i32, v: &SparseVec) -> SimplicialCochain {
        let mut c = SimplicialCochain::zero(self.support, q);
        let fs = self.faces_of_dim(q);
        for (i, s) in &v.entries {
            c.add_term(fs[*i], s);
        }
        c
    }

    /// Coboundary `C^q → C^{q+1}`: `δσ* = Σ (-1)^{pos(v)} (σ ∪ v)*`.
    pub fn coboundary(&self, q: i32, field: Field) -> SparseMatrix {
        let src = self.faces_of_dim(q);
        let tgt = self.faces_of_dim(q + 1);
        let mut cols = Vec::with_capacity(src.len());
        for &s in src {
            let mut col = SparseVec::new();
            let mut rest = self.support & !s;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                let t = s | 1 << v;
                if let Some(i) = self.position(t) {
                    let pos = (s & ((1 << v) - 1)).count_ones();
                    col.add_at(i, &field.from_i64(if pos % 2 == 0 { 1 } else { -1 }));
                }
            }
            cols.push(col);
        }
        SparseMatrix::from_columns(tgt.len(), field, cols)
    }

    pub fn apply_coboundary(&self, c: &SimplicialCochain, field: Field) -> Result<SimplicialCochain> {
        let v = self.coboundary(c.q, field).mul_vec(&self.to_vec(c)?);
        Ok(self.from_vec(c.q + 1, &v))
    }

    pub fn cohomology(&self, q: i32, field: Field) -> ReducedCohomology {
        let n = self.faces_of_dim(q).len();
        let cycles = self.coboundary(q, field).kernel();
        let boundaries = self.coboundary(q - 1, field).image();
        ReducedCohomology {
            support: self.support,
            q,
            faces: self.faces_of_dim(q).to_vec(),
            quotient: quotient_unchecked(n, field, &cycles, &boundaries),
        }
    }
}

/// `H̃^q(K_U)` with a basis of representative cocycles.
pub struct ReducedCohomology {
    pub support: u32,
    pub q: i32,
    pub faces: Vec<u32>,
    pub quotient: QuotientBasis,
}

impl ReducedCohomology {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn basis(&self) -> Vec<SimplicialCochain> {
        self.quotient
            .representatives
            .iter()
            .map(|v| {
                let mut c = SimplicialCochain::zero(self.support, self.q);
                for (i, s) in &v.entries {
                    c.add_term(self.faces[*i], s);
                }
                c
            })
            .collect()
    }

    /// Coordinates of a cocycle; `None` if it is not closed.
    pub fn coordinates(&self, c: &SimplicialCochain) -> Option<Vec<Scalar>> {
        let mut v = SparseVec::new();
        for (f, s) in &c.values {
            let i = self.faces.iter().position(|g| g == f)?;
            v.add_at(i, s);
        }
        self.quotient.coordinates(&v)
    }
}

/// Reduced cohomology `H̃^q(K)`.
pub fn reduced_cohomology(k: &SimplicialComplex, q: i32, field: Field) -> ReducedCohomology {
    induced_cohomology(k, full_mask(k.m), q, field)
}

/// Reduced cohomology of the induced subcomplex `K_U`.
pub fn induced_cohomology(k: &SimplicialComplex, support: u32, q: i32, field: Field) -> ReducedCohomology {
    InducedCochains::new(k, support).cohomology(q, field)
}

fn full_mask(m: usize) -> u32 {
    if m == 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

fn mask_vector(m: usize, mask: u32) -> Vec<u32> {
    (0..m).map(|v| mask >> v & 1).collect()
}

/// Betti table by Hochster's formula: `β_{i,U} = dim H̃^{|U|-i-1}(K_U)`.
pub fn hochster_table(k: &SimplicialComplex, field: Field) -> Result<BettiTable> {
    hochster_table_capped(k, field, HOCHSTER_CAP)
}

pub fn hochster_table_capped(k: &SimplicialComplex, field: Field, cap: usize) -> Result<BettiTable> {
    check_cap(k.m, cap)?;
    let mut t = BettiTable::new(field);
    for u in 0..=full_mask(k.m) {
        let cochains = InducedCochains::new(k, u);
        let size = u.count_ones() as i32;
        for q in -1..size {
            let h = cochains.cohomology(q, field).dim();
            t.insert((size - q - 1) as usize, mask_vector(k.m, u), h);
        }
    }
    Ok(t)
}

/// The model `R(K)` as a complex with cached cohomology.
pub fn rk_model(k: &SimplicialComplex, field: Field) -> Result<KoszulComplex> {
    Ok(KoszulComplex::new(KoszulModel::reduced(k.face_ring(field)?)?))
}

/// Betti table of `H(R(K))` together with a class basis per multidegree.
pub struct RkCohomology {
    pub table: BettiTable,
    pub model: KoszulComplex,
}

pub fn rk_cohomology(k: &SimplicialComplex, field: Field) -> Result<RkCohomology> {
    check_cap(k.m, HOCHSTER_CAP)?;
    let model = rk_model(k, field)?;
    let table = model_betti(&model)?;
    Ok(RkCohomology { table, model })
}

/// Image of a simplicial cochain of `K_U` in `R(K)`.
pub fn to_rk(k: &SimplicialComplex, c: &SimplicialCochain) -> Cochain<KMono> {
    let mut out = Cochain::zero();
    for (f, s) in &c.values {
        let j = c.support & !f;
        let mono = KMono {
            x: mask_vector(k.m, *f).into_iter().map(|e| e as u8).collect(),
            u: j,
        };
        let sign = shuffle_sign(*f, j);
        out.add_term(mono, &s.mul(&s.field().from_i64(sign)));
    }
    out
}

/// Inverse of [`to_rk`] on a cochain supported in one multidegree.
pub fn from_rk(c: &Cochain<KMono>, field: Field) -> Result<SimplicialCochain> {
    let mut out: Option<SimplicialCochain> = None;
    for (m, s) in &c.terms {
        let f: u32 = m.x.iter().enumerate().fold(0, |a, (i, e)| a | ((*e > 0) as u32) << i);
        if m.x.iter().any(|e| *e > 1) || f & m.u != 0 {
            return Err(Error::InvalidInput("not a monomial of R(K)".into()));
        }
        let support = f | m.u;
        let q = f.count_ones() as i32 - 1;
        let o = out.get_or_insert_with(|| SimplicialCochain::zero(support, q));
        if o.support != support || o.q != q {
            return Err(Error::InvalidInput("cochain spans several multidegrees".into()));
        }
        o.add_term(f, &s.mul(&field.from_i64(shuffle_sign(f, m.u))));
    }
    out.ok_or_else(|| Error::InvalidInput("zero cochain has no multidegree".into()))
}

/// Product of simplicial cocycles on disjoint supports, through the join.
///
/// For `a` of degree `p` on `I₁` and `b` of degree `q` on `I₂` the value on a
/// face `σ₁ ⊔ σ₂` of `K_{I₁⊔I₂}` is `ε·a(σ₁)b(σ₂)` with
/// `ε = (-1)^{(q+1)(|I₁|-p-1)} sgn(I₁,I₂) sgn(σ₁,σ₂)`; this matches the product in `R(K)`.
pub fn zk_cup(k: &SimplicialComplex, a: &SimplicialCochain, b: &SimplicialCochain) -> SimplicialCochain {
    let union = a.support | b.support;
    let q = a.q + b.q + 1;
    let mut out = SimplicialCochain::zero(union, q);
    if a.support & b.support != 0 {
        return out;
    }
    let base = if (b.q + 1) * (a.support.count_ones() as i32 - a.q - 1) % 2 == 0 { 1 } else { -1 }
        * shuffle_sign(a.support, b.support);
    for (s1, x) in &a.values {
        for (s2, y) in &b.values {
            let t = s1 | s2;
            if !k.is_face(t) {
                continue;
            }
            let e = base * shuffle_sign(*s1, *s2);
            out.add_term(t, &x.mul(y).mul(&x.field().from_i64(e)));
        }
    }
    out
}

/// Cup length of `H^+(Z_K)`.
pub fn cup_length(k: &SimplicialComplex, field: Field) -> Result<usize> {
    check_cap(k.m, HOCHSTER_CAP)?;
    Ok(cup_length_of(&rk_model(k, field)?)?.0)
}

/// Default Massey order cap for Golod tests: `min(m - 1, 5)`.
pub fn default_order_cap(k: &SimplicialComplex) -> usize {
    k.m.saturating_sub(1).min(5)
}

pub fn golod_test(k: &SimplicialComplex, field: Field, order_cap: usize) -> Result<GolodReport> {
    check_cap(k.m, HOCHSTER_CAP)?;
    golod_test_model(&rk_model(k, field)?, order_cap, &MasseyOptions::default())
}

/// Generator of `H̃⁰` of a missing edge `{a, b}`, `a < b`: the dual of the vertex `a`.
pub fn missing_edge_class(a: usize, b: usize, field: Field) -> SimplicialCochain {
    let (a, b) = (a.min(b), a.max(b));
    let mut c = SimplicialCochain::zero(mask_of(&[a, b]), 0);
    c.add_term(mask_of(&[a]), &field.one());
    c
}

/// One entry of a triple product scan.
#[derive(Clone, Debug)]
pub struct TripleScanEntry {
    pub pairs: [(usize, usize); 3],
    pub outcome: MasseyOutcome<KMono>,
}

/// Triple products of the classes of pairwise disjoint missing edges.
pub fn triple_massey_scan(k: &SimplicialComplex, field: Field) -> Result<Vec<TripleScanEntry>> {
    triple_massey_scan_with(k, field, &MasseyOptions::default(), |_| true)
}

/// Scan with a filter on the ordered triple of missing edges.
pub fn triple_massey_scan_with(
    k: &SimplicialComplex,
    field: Field,
    opts: &MasseyOptions,
    keep: impl Fn(&[(usize, usize); 3]) -> bool,
) -> Result<Vec<TripleScanEntry>> {
    check_cap(k.m, HOCHSTER_CAP)?;
    let model = rk_model(k, field)?;
    let missing: Vec<(usize, usize)> = k
        .minimal_nonfaces
        .iter()
        .filter(|n| n.count_ones() == 2)
        .map(|n| {
            let v = vertices_of(*n);
            (v[0], v[1])
        })
        .collect();
    let mut out = Vec::new();
    for &p1 in &missing {
        for &p2 in &missing {
            for &p3 in &missing {
                let m = [mask_of(&[p1.0, p1.1]), mask_of(&[p2.0, p2.1]), mask_of(&[p3.0, p3.1])];
                if m[0] & m[1] != 0 || m[0] & m[2] != 0 || m[1] & m[2] != 0 {
                    continue;
                }
                let pairs = [p1, p2, p3];
                if !keep(&pairs) {
                    continue;
                }
                let reps: Vec<Cochain<KMono>> = pairs
                    .iter()
                    .map(|(a, b)| to_rk(k, &missing_edge_class(*a, *b, field)))
                    .collect();
                let outcome = massey_product(&model, &reps, opts)?;
                out.push(TripleScanEntry { pairs, outcome });
            }
        }
    }
    Ok(out)
}

/// A nontrivial triple product found by [`triple_massey_search`].
#[derive(Clone, Debug)]
pub struct TripleHit {
    pub supports: [Vec<usize>; 3],
    pub classes: [ClassRef; 3],
    pub outcome: MasseyOutcome<KMono>,
}

/// Summary of a search over triples of arbitrary basis classes.
#[derive(Clone, Debug)]
pub struct TripleSearch {
    pub examined: usize,
    pub hits: Vec<TripleHit>,
}

fn class_mask(c: &ClassRef) -> u32 {
    c.degree.aux.iter().enumerate().fold(0, |a, (i, e)| a | ((*e as u32) << i))
}

/// Triple products of basis classes of `H^+(Z_K)` on disjoint supports.
///
/// Triples are visited by increasing size of the union of supports; only those
/// whose corner group is nonzero and whose adjacent products vanish are computed.
/// Stops after `max_hits` nontrivial products.
pub fn triple_massey_search(
    k: &SimplicialComplex,
    field: Field,
    opts: &MasseyOptions,
    max_hits: usize,
) -> Result<TripleSearch> {
    check_cap(k.m, HOCHSTER_CAP)?;
    let model = rk_model(k, field)?;
    let classes = positive_classes(&model)?;
    let masks: Vec<u32> = classes.iter().map(class_mask).collect();
    let mut zero_product: HashMap<(usize, usize), bool> = HashMap::new();
    let mut product_vanishes = |i: usize, j: usize| -> Result<bool> {
        if let Some(z) = zero_product.get(&(i, j)) {
            return Ok(*z);
        }
        let z = model.class_of(&model.wedge(&classes[i].rep, &classes[j].rep))?.is_zero();
        zero_product.insert((i, j), z);
        Ok(z)
    };
    let mut search = TripleSearch { examined: 0, hits: Vec::new() };
    for total in 3..=k.m as u32 {
        for a in 0..classes.len() {
            for b in 0..classes.len() {
                if masks[a] & masks[b] != 0 {
                    continue;
                }
                for c in 0..classes.len() {
                    let union = masks[a] | masks[b] | masks[c];
                    if (masks[a] | masks[b]) & masks[c] != 0 || union.count_ones() != total {
                        continue;
                    }
                    let corner = classes[a].degree.add(&classes[b].degree).add(&classes[c].degree).shift(-1);
                    if model.cohomology_at(&corner)?.dim() == 0 {
                        continue;
                    }
                    if !product_vanishes(a, b)? || !product_vanishes(b, c)? {
                        continue;
                    }
                    search.examined += 1;
                    let reps = [classes[a].rep.clone(), classes[b].rep.clone(), classes[c].rep.clone()];
                    let outcome = massey_product(&model, &reps, opts)?;
                    if outcome.triviality == Triviality::Nontrivial {
                        search.hits.push(TripleHit {
                            supports: [vertices_of(masks[a]), vertices_of(masks[b]), vertices_of(masks[c])],
                            classes: [classes[a].clone(), classes[b].clone(), classes[c].clone()],
                            outcome,
                        });
                        if search.hits.len() >= max_hits {
                            return Ok(search);
                        }
                    }
                }
            }
        }
    }
    Ok(search)
}

/// Both hypotheses of the vanishing criterion for definedness and strictness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MainLemmaReport {
    /// Sub-product groups vanish: the product is defined.
    pub cond1: bool,
    /// The groups one degree lower vanish: the product is single valued.
    pub cond2: bool,
}

/// Checks `H̃^{d(s,r+s)}` and `H̃^{d(s,r+s)-1}` of the unions of consecutive supports.
pub fn mainlemma_check(k: &SimplicialComplex, supports: &[u32], dims: &[i32], field: Field) -> Result<MainLemmaReport> {
    if supports.len() != dims.len() {
        return Err(Error::InvalidInput("one dimension per support is needed".into()));
    }
    check_disjoint(supports)?;
    let n = supports.len();
    let mut cond1 = true;
    let mut cond2 = true;
    for r in 1..n.saturating_sub(1) {
        for s in 0..n - r {
            let union = supports[s..=s + r].iter().fold(0, |a, b| a | b);
            let d: i32 = dims[s..=s + r].iter().sum::<i32>() + 1;
            let cochains = InducedCochains::new(k, union);
            if cochains.cohomology(d, field).dim() != 0 {
                cond1 = false;
            }
            if cochains.cohomology(d - 1, field).dim() != 0 {
                cond2 = false;
            }
        }
    }
    Ok(MainLemmaReport { cond1, cond2 })
}

fn check_disjoint(supports: &[u32]) -> Result<()> {
    let mut seen = 0u32;
    for s in supports {
        if seen & s != 0 {
            return Err(Error::OverlappingSupports(format!(
                "vertices {:?} appear in two supports",
                vertices_of(seen & s)
            )));
        }
        seen |= s;
    }
    Ok(())
}

/// First basis class of `H̃^q(K_I)`, with `q` the lowest nonzero degree unless given.
pub fn support_class(k: &SimplicialComplex, set: &[usize], q: Option<i32>, field: Field) -> Result<SimplicialCochain> {
    if set.is_empty() || set.iter().any(|v| *v == 0 || *v > k.m) {
        return Err(Error::InvalidInput(format!("support {set:?} leaves the vertex set")));
    }
    let mask = mask_of(set);
    let range: Vec<i32> = match q {
        Some(q) => vec![q],
        None => (-1..set.len() as i32).collect(),
    };
    for q in range {
        if let Some(c) = induced_cohomology(k, mask, q, field).basis().into_iter().next() {
            return Ok(c);
        }
    }
    Err(Error::InvalidInput(format!("the induced subcomplex on {set:?} has no class in the requested degree")))
}

/// Massey product of simplicial classes on disjoint supports.
#[derive(Clone, Debug)]
pub struct ZkMasseyReport {
    pub mainlemma: MainLemmaReport,
    pub outcome: MasseyOutcome<KMono>,
}

pub fn zk_massey(
    k: &SimplicialComplex,
    classes: &[SimplicialCochain],
    field: Field,
    opts: &MasseyOptions,
) -> Result<ZkMasseyReport> {
    let supports: Vec<u32> = classes.iter().map(|c| c.support).collect();
    let dims: Vec<i32> = classes.iter().map(|c| c.q).collect();
    let mainlemma = mainlemma_check(k, &supports, &dims, field)?;
    for c in classes {
        let ic = InducedCochains::new(k, c.support);
        if !ic.apply_coboundary(c, field)?.is_zero() {
            return Err(Error::InvalidInput("class representative is not a cocycle".into()));
        }
    }
    let model = rk_model(k, field)?;
    let reps: Vec<Cochain<KMono>> = classes.iter().map(|c| to_rk(k, c)).collect();
    let mut o = opts.clone();
    o.homogeneous = true;
    if mainlemma.cond1 && mainlemma.cond2 {
        o.certificate = true;
    }
    let outcome = massey_product(&model, &reps, &o)?;
    Ok(ZkMasseyReport { mainlemma, outcome })
}
