//! Monomial quotient rings and their Koszul complexes.
//!
//! The Koszul complex of `A = k[x_1..x_n]/I` is the DGA `A ⊗ Λ[u_1..u_n]`
//! with `d u_i = x_i`. Its homology is `Tor^S(A, k)`. For a squarefree `I`
//! the quotient by `x_i² = x_i u_i = 0` is the finite model `R(K)` with the
//! same homology. Both are multigraded by `b + 1_S` for a monomial `x^b u_S`
//! and carry the topological degree `2|b| + |S|`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dga::{Cochain, Complex, Dga, MultiDegree};
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Field, Scalar, SparseVec};
use crate::massey::{massey_product, MasseyOptions, MasseyStatus, Triviality};

/// Largest variable count for which whole-window enumerations are attempted.
pub const ENUMERATION_CAP: usize = 20;

/// `k[x_1..x_n]/(x^{g} : g ∈ generators)` with a minimal generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialQuotient {
    pub n_vars: usize,
    pub generators: Vec<Vec<u32>>,
    pub field: Field,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialQuotient {
    pub fn new(n_vars: usize, generators: Vec<Vec<u32>>, field: Field) -> Result<Self> {
        if n_vars > 32 {
            return Err(Error::CapExceeded(format!("{n_vars} variables (at most 32)")));
        }
        for g in &generators {
            if g.len() != n_vars {
                return Err(Error::InvalidInput(format!(
                    "generator {g:?} has length {} instead of {n_vars}",
                    g.len()
                )));
            }
            if g.iter().all(|e| *e == 0) {
                return Err(Error::InvalidInput("the unit ideal is not allowed".into()));
            }
            if g.iter().any(|e| *e > 255) {
                return Err(Error::CapExceeded("exponents above 255".into()));
            }
        }
        let mut gens: Vec<Vec<u32>> = Vec::new();
        let mut sorted = generators;
        sorted.sort_by_key(|g| (g.iter().sum::<u32>(), g.clone()));
        sorted.dedup();
        for g in sorted {
            if !gens.iter().any(|h| divides(h, &g)) {
                gens.push(g);
            }
        }
        gens.sort();
        Ok(MonomialQuotient {
            n_vars,
            generators: gens,
            field,
        })
    }

    /// Whether `x^b` survives in the quotient.
    pub fn is_standard(&self, b: &[u32]) -> bool {
        !self.generators.iter().any(|g| divides(g, b))
    }

    fn is_standard_u8(&self, b: &[u8]) -> bool {
        !self
            .generators
            .iter()
            .any(|g| g.iter().zip(b).all(|(x, y)| *x <= *y as u32))
    }

    pub fn is_squarefree(&self) -> bool {
        self.generators.iter().all(|g| g.iter().all(|e| *e <= 1))
    }

    /// Finite dimensional iff every variable has a pure power among the generators.
    pub fn is_finite(&self) -> bool {
        (0..self.n_vars).all(|i| {
            self.generators
                .iter()
                .any(|g| g[i] > 0 && g.iter().enumerate().all(|(j, e)| j == i || *e == 0))
        })
    }

    /// All standard monomials, in degree-lexicographic order.
    pub fn standard_monomials(&self) -> Result<Vec<Vec<u32>>> {
        if !self.is_finite() {
            return Err(Error::DomainError("the quotient is infinite dimensional".into()));
        }
        let bound: Vec<u32> = (0..self.n_vars)
            .map(|i| {
                self.generators
                    .iter()
                    .filter(|g| g.iter().enumerate().all(|(j, e)| j == i || *e == 0))
                    .map(|g| g[i])
                    .min()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.n_vars];
        self.standard_rec(0, &bound, &mut cur, &mut out);
        out.sort_by_key(|b| (b.iter().sum::<u32>(), b.clone()));
        Ok(out)
    }

    fn standard_rec(&self, i: usize, bound: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !self.is_standard(cur) {
            return;
        }
        if i == self.n_vars {
            out.push(cur.clone());
            return;
        }
        for e in 0..bound[i] {
            cur[i] = e;
            self.standard_rec(i + 1, bound, cur, out);
        }
        cur[i] = 0;
    }

    /// Highest degree of a standard monomial.
    pub fn top_degree(&self) -> Result<u32> {
        Ok(self
            .standard_monomials()?
            .iter()
            .map(|b| b.iter().sum::<u32>())
            .max()
            .unwrap_or(0))
    }
}

/// A monomial `x^b u_S` of a Koszul model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KMono {
    pub x: Vec<u8>,
    pub u: u32,
}

/// Koszul complex of a monomial quotient, optionally reduced to `R(K)`.
#[derive(Clone, Debug)]
pub struct KoszulModel {
    pub ring: MonomialQuotient,
    pub reduced: bool,
}

fn shuffle_negative(s: u32, t: u32) -> bool {
    let mut inv = 0;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inv += (s >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    inv % 2 == 1
}

/// Sign of the permutation sorting the concatenation of the bit sets `s` then `t`.
pub fn shuffle_sign(s: u32, t: u32) -> i64 {
    if shuffle_negative(s, t) {
        -1
    } else {
        1
    }
}

fn subsets_of_size(mask: u32, k: u32, out: &mut Vec<u32>) {
    fn rec(rest: u32, k: u32, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        if rest.count_ones() < k {
            return;
        }
        let low = rest & rest.wrapping_neg();
        rec(rest & !low, k - 1, acc | low, out);
        rec(rest & !low, k, acc, out);
    }
    rec(mask, k, 0, out);
}

impl KoszulModel {
    pub fn koszul(ring: MonomialQuotient) -> Self {
        KoszulModel { ring, reduced: false }
    }

    /// The reduced model `R(K)` of a squarefree quotient.
    pub fn reduced(ring: MonomialQuotient) -> Result<Self> {
        if !ring.is_squarefree() {
            return Err(Error::InvalidInput("the reduced model needs a squarefree ideal".into()));
        }
        Ok(KoszulModel { ring, reduced: true })
    }

    pub fn n(&self) -> usize {
        self.ring.n_vars
    }

    /// Homological index `|S|` of a multidegree.
    pub fn homological_index(deg: &MultiDegree) -> i32 {
        2 * deg.aux.iter().sum::<i32>() - deg.coh
    }

    /// Multidegree with homological index `i` and multidegree `a`.
    pub fn degree_of(i: i32, a: &[u32]) -> MultiDegree {
        let total: i32 = a.iter().map(|e| *e as i32).sum();
        MultiDegree::new(2 * total - i, a.iter().map(|e| *e as i32).collect())
    }

    pub fn mask_degree(&self, i: i32, mask: u32) -> MultiDegree {
        let a: Vec<u32> = (0..self.n()).map(|v| (mask >> v) & 1).collect();
        Self::degree_of(i, &a)
    }

    /// Every multidegree of the model with a nonzero chain group.
    pub fn all_degrees(&self) -> Result<Vec<MultiDegree>> {
        let n = self.n();
        if n > ENUMERATION_CAP {
            return Err(Error::CapExceeded(format!("{n} variables in a full enumeration")));
        }
        let mut out = BTreeSet::new();
        if self.reduced {
            for u in 0u32..1 << n {
                for i in 0..=u.count_ones() as i32 {
                    let d = self.mask_degree(i, u);
                    if !self.basis(&d)?.is_empty() {
                        out.insert(d);
                    }
                }
            }
            return Ok(out.into_iter().collect());
        }
        for b in &self.ring.standard_monomials()? {
            for s in 0u32..1 << n {
                let a: Vec<u32> = (0..n).map(|i| b[i] + ((s >> i) & 1)).collect();
                out.insert(Self::degree_of(s.count_ones() as i32, &a));
            }
        }
        Ok(out.into_iter().collect())
    }
}

impl Dga for KoszulModel {
    type Mono = KMono;

    fn field(&self) -> Field {
        self.ring.field
    }

    fn degree(&self, m: &KMono) -> MultiDegree {
        let mut aux: Vec<i32> = m.x.iter().map(|e| *e as i32).collect();
        let mut xs = 0;
        for (i, a) in aux.iter_mut().enumerate() {
            xs += *a;
            *a += ((m.u >> i) & 1) as i32;
        }
        MultiDegree::new(2 * xs + m.u.count_ones() as i32, aux)
    }

    fn basis(&self, deg: &MultiDegree) -> Result<Vec<KMono>> {
        let n = self.n();
        if deg.aux.len() != n {
            return Err(Error::InvalidInput(format!("multidegree of length {} in {n} variables", deg.aux.len())));
        }
        if deg.aux.iter().any(|a| *a < 0 || *a > 255) || (self.reduced && deg.aux.iter().any(|a| *a > 1)) {
            return Ok(Vec::new());
        }
        let s = Self::homological_index(deg);
        let supp: u32 = deg.aux.iter().enumerate().map(|(i, a)| ((*a > 0) as u32) << i).sum();
        if s < 0 || s > supp.count_ones() as i32 {
            return Ok(Vec::new());
        }
        let mut subsets = Vec::new();
        subsets_of_size(supp, s as u32, &mut subsets);
        let mut out = Vec::new();
        for u in subsets {
            let x: Vec<u8> = (0..n).map(|i| (deg.aux[i] - ((u >> i) & 1) as i32) as u8).collect();
            if self.ring.is_standard_u8(&x) {
                out.push(KMono { x, u });
            }
        }
        out.sort();
        Ok(out)
    }

    fn d_mono(&self, m: &KMono) -> Vec<(KMono, Scalar)> {
        let f = self.field();
        let mut out = Vec::new();
        let mut rest = m.u;
        let mut pos = 0;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut x = m.x.clone();
            x[j] += 1;
            if self.ring.is_standard_u8(&x) {
                let c = if pos % 2 == 0 { f.one() } else { f.one().neg() };
                out.push((KMono { x, u: m.u & !(1 << j) }, c));
            }
            pos += 1;
        }
        out
    }

    fn mul_mono(&self, a: &KMono, b: &KMono) -> Option<(KMono, Scalar)> {
        if a.u & b.u != 0 {
            return None;
        }
        if self.reduced {
            let sa = a.x.iter().enumerate().fold(a.u, |m, (i, e)| m | ((*e > 0) as u32) << i);
            let sb = b.x.iter().enumerate().fold(b.u, |m, (i, e)| m | ((*e > 0) as u32) << i);
            if sa & sb != 0 {
                return None;
            }
        }
        let x: Vec<u8> = a.x.iter().zip(&b.x).map(|(p, q)| p.checked_add(*q)).collect::<Option<_>>()?;
        if !self.ring.is_standard_u8(&x) {
            return None;
        }
        let f = self.field();
        let c = if shuffle_negative(a.u, b.u) { f.one().neg() } else { f.one() };
        Some((KMono { x, u: a.u | b.u }, c))
    }

    fn degrees(&self, coh: i32) -> Result<Vec<MultiDegree>> {
        Ok(self.all_degrees()?.into_iter().filter(|d| d.coh == coh).collect())
    }

    fn unit(&self) -> KMono {
        KMono {
            x: vec![0; self.n()],
            u: 0,
        }
    }

    fn mono_name(&self, m: &KMono) -> String {
        let xname = if self.reduced { "v" } else { "x" };
        let mut parts = Vec::new();
        for (i, e) in m.x.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{xname}{}", i + 1)),
                _ => parts.push(format!("{xname}{}^{e}", i + 1)),
            }
        }
        for i in 0..self.n() {
            if m.u >> i & 1 == 1 {
                parts.push(format!("u{}", i + 1));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

pub type KoszulComplex = Complex<KoszulModel>;

/// Multigraded Betti numbers keyed by homological index and multidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub field: String,
    pub entries: BTreeMap<(usize, Vec<u32>), usize>,
}

impl BettiTable {
    pub fn new(field: Field) -> Self {
        BettiTable {
            field: field.to_string(),
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, i: usize, multidegree: Vec<u32>, dim: usize) {
        if dim > 0 {
            *self.entries.entry((i, multidegree)).or_insert(0) += dim;
        }
    }

    pub fn get(&self, i: usize, multidegree: &[u32]) -> usize {
        self.entries.get(&(i, multidegree.to_vec())).copied().unwrap_or(0)
    }

    /// Total Betti numbers `b_0, b_1, …`.
    pub fn totals(&self) -> Vec<usize> {
        let top = self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for ((i, _), d) in &self.entries {
            out[*i] += d;
        }
        out
    }

    /// Dimensions by topological degree `2|a| - i`.
    pub fn by_degree(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for ((i, a), d) in &self.entries {
            let deg = 2 * a.iter().sum::<u32>() - *i as u32;
            *out.entry(deg).or_insert(0) += d;
        }
        out
    }
}

/// A basis class of the homology of a Koszul model.
#[derive(Clone, Debug)]
pub struct ClassRef {
    pub degree: MultiDegree,
    pub index: usize,
    pub rep: Cochain<KMono>,
}

impl ClassRef {
    pub fn homological_index(&self) -> i32 {
        KoszulModel::homological_index(&self.degree)
    }
}

/// Betti table of the model, from its homology in every multidegree.
pub fn model_betti(cx: &KoszulComplex) -> Result<BettiTable> {
    let mut t = BettiTable::new(cx.field());
    for deg in cx.alg.all_degrees()? {
        let h = cx.cohomology_at(&deg)?.dim();
        let i = KoszulModel::homological_index(&deg) as usize;
        t.insert(i, deg.aux.iter().map(|a| *a as u32).collect(), h);
    }
    Ok(t)
}

/// Basis classes in positive multidegree.
pub fn positive_classes(cx: &KoszulComplex) -> Result<Vec<ClassRef>> {
    let mut out = Vec::new();
    for deg in cx.alg.all_degrees()? {
        if deg.aux.iter().all(|a| *a == 0) {
            continue;
        }
        let h = cx.cohomology_at(&deg)?;
        for (index, rep) in h.representatives.iter().enumerate() {
            out.push(ClassRef {
                degree: deg.clone(),
                index,
                rep: rep.clone(),
            });
        }
    }
    Ok(out)
}

fn sum_degree(cx: &KoszulComplex, degs: &[&MultiDegree]) -> Option<MultiDegree> {
    let mut d = degs[0].clone();
    for e in &degs[1..] {
        d = d.add(e);
    }
    if cx.alg.reduced && d.aux.iter().any(|a| *a > 1) {
        return None;
    }
    Some(d)
}

/// A nonzero product of two basis classes.
#[derive(Clone, Debug)]
pub struct ProductWitness {
    pub left: ClassRef,
    pub right: ClassRef,
    pub value: Cochain<KMono>,
}

/// Cup length of the positive part: the largest `r` with `(H^+)^r ≠ 0`.
pub fn cup_length_of(cx: &KoszulComplex) -> Result<(usize, Option<ProductWitness>)> {
    let classes = positive_classes(cx)?;
    if classes.is_empty() {
        return Ok((0, None));
    }
    let field = cx.field();
    // Spanning cocycles of (H^+)^r, per multidegree.
    let mut level: BTreeMap<MultiDegree, Vec<Cochain<KMono>>> = BTreeMap::new();
    for c in &classes {
        level.entry(c.degree.clone()).or_default().push(c.rep.clone());
    }
    let mut witness = None;
    let mut r = 1;
    loop {
        let mut next: BTreeMap<MultiDegree, (EchelonBasis, Vec<Cochain<KMono>>)> = BTreeMap::new();
        for c in &classes {
            for (deg, reps) in &level {
                let Some(target) = sum_degree(cx, &[&c.degree, deg]) else { continue };
                let h = cx.cohomology_at(&target)?;
                if h.dim() == 0 {
                    continue;
                }
                for rep in reps {
                    let p = cx.wedge(&c.rep, rep);
                    if p.is_zero() {
                        continue;
                    }
                    let cv = cx.class_of(&p)?;
                    if cv.is_zero() {
                        continue;
                    }
                    let coords = SparseVec::from_pairs(cv.coords[&target].iter().cloned().enumerate());
                    let entry = next
                        .entry(target.clone())
                        .or_insert_with(|| (EchelonBasis::new(h.dim(), field), Vec::new()));
                    if entry.0.insert(coords) {
                        entry.1.push(p.clone());
                        if r == 1 && witness.is_none() {
                            let right = classes
                                .iter()
                                .find(|x| &x.rep == rep)
                                .cloned()
                                .ok_or_else(|| Error::Internal("lost class".into()))?;
                            witness = Some(ProductWitness {
                                left: c.clone(),
                                right,
                                value: p,
                            });
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok((r, witness));
        }
        level = next.into_iter().map(|(d, (_, v))| (d, v)).collect();
        r += 1;
    }
}

/// Verdict of a Golodness search bounded by the Massey order.
#[derive(Clone, Debug)]
pub enum GolodVerdict {
    GolodUpToCap { order_cap: usize },
    NotGolod(GolodWitness),
    Unknown { reason: String },
}

impl GolodVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            GolodVerdict::GolodUpToCap { .. } => "golod_up_to_cap",
            GolodVerdict::NotGolod(_) => "not_golod",
            GolodVerdict::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub enum GolodWitness {
    Product(ProductWitness),
    Massey(Vec<ClassRef>),
}

/// Golodness data; the two flags are reported independently.
#[derive(Clone, Debug)]
pub struct GolodReport {
    pub verdict: GolodVerdict,
    pub trivial_multiplication: bool,
    /// `Some(true)` when every defined product up to the cap was shown trivial.
    pub massey_trivial_up_to_cap: Option<bool>,
    pub order_cap: usize,
    /// Massey products examined.
    pub examined: usize,
}

/// Tuples of basis classes whose product can land in nonzero homology.
fn massey_tuples(cx: &KoszulComplex, classes: &[ClassRef], k: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        cx: &KoszulComplex,
        classes: &[ClassRef],
        k: usize,
        acc: Option<MultiDegree>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if cur.len() == k {
            let corner = acc.unwrap().shift(-(k as i32 - 2));
            if cx.cohomology_at(&corner)?.dim() > 0 {
                out.push(cur.clone());
            }
            return Ok(());
        }
        for (i, c) in classes.iter().enumerate() {
            let next = match &acc {
                None => Some(c.degree.clone()),
                Some(a) => sum_degree(cx, &[a, &c.degree]),
            };
            let Some(next) = next else { continue };
            if next.aux.iter().any(|a| *a > 255) {
                continue;
            }
            cur.push(i);
            rec(cx, classes, k, Some(next), cur, out)?;
            cur.pop();
        }
        Ok(())
    }
    rec(cx, classes, k, None, &mut cur, &mut out)?;
    Ok(out)
}

/// Trivial multiplication plus trivial Massey products of basis classes up to `order_cap`.
///
/// Only products of basis classes are examined; Golodness beyond the cap is not certified.
pub fn golod_test_model(cx: &KoszulComplex, order_cap: usize, opts: &MasseyOptions) -> Result<GolodReport> {
    let (cup, witness) = cup_length_of(cx)?;
    if cup > 1 {
        let w = witness.ok_or_else(|| Error::Internal("missing product witness".into()))?;
        return Ok(GolodReport {
            verdict: GolodVerdict::NotGolod(GolodWitness::Product(w)),
            trivial_multiplication: false,
            massey_trivial_up_to_cap: None,
            order_cap,
            examined: 0,
        });
    }
    let classes = positive_classes(cx)?;
    let mut examined = 0;
    let mut unknown = None;
    for k in 3..=order_cap {
        for t in massey_tuples(cx, &classes, k)? {
            let reps: Vec<Cochain<KMono>> = t.iter().map(|i| classes[*i].rep.clone()).collect();
            let o = massey_product(cx, &reps, opts)?;
            examined += 1;
            match (&o.status, o.triviality) {
                (MasseyStatus::Undefined { .. }, _) | (_, Triviality::Trivial) => {}
                (_, Triviality::Nontrivial) => {
                    let w: Vec<ClassRef> = t.iter().map(|i| classes[*i].clone()).collect();
                    return Ok(GolodReport {
                        verdict: GolodVerdict::NotGolod(GolodWitness::Massey(w)),
                        trivial_multiplication: true,
                        massey_trivial_up_to_cap: Some(false),
                        order_cap,
                        examined,
                    });
                }
                (_, Triviality::Unknown) => {
                    unknown.get_or_insert_with(|| format!("undecided product of order {k}: {t:?}"));
                }
            }
        }
    }
    let settled = unknown.is_none();
    Ok(GolodReport {
        verdict: match unknown {
            Some(reason) => GolodVerdict::Unknown { reason },
            None => GolodVerdict::GolodUpToCap { order_cap },
        },
        trivial_multiplication: true,
        massey_trivial_up_to_cap: settled.then_some(true),
        order_cap,
        examined,
    })
}
