//! Bigraded commutative DGAs with monomial bases, cochains and cohomology.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{quotient_unchecked, EchelonBasis, Field, QuotientBasis, Scalar, SparseVec};

/// Cohomological degree plus an auxiliary grading preserved by `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiDegree {
    pub coh: i32,
    pub aux: Vec<i32>,
}

impl MultiDegree {
    pub fn new(coh: i32, aux: Vec<i32>) -> Self {
        MultiDegree { coh, aux }
    }

    pub fn shift(&self, dc: i32) -> Self {
        MultiDegree {
            coh: self.coh + dc,
            aux: self.aux.clone(),
        }
    }

    pub fn add(&self, o: &MultiDegree) -> MultiDegree {
        MultiDegree {
            coh: self.coh + o.coh,
            aux: self.aux.iter().zip(&o.aux).map(|(a, b)| a + b).collect(),
        }
    }
}

/// A DGA presented by a monomial basis in every multidegree.
///
/// Products of basis monomials are again a single monomial up to sign, or zero.
pub trait Dga: Send + Sync {
    type Mono: Clone + Ord + Eq + Hash + Debug + Send + Sync;

    fn field(&self) -> Field;
    fn degree(&self, m: &Self::Mono) -> MultiDegree;
    /// Basis in a multidegree. Errors when the degree leaves the materialised window.
    fn basis(&self, deg: &MultiDegree) -> Result<Vec<Self::Mono>>;
    fn d_mono(&self, m: &Self::Mono) -> Vec<(Self::Mono, Scalar)>;
    fn mul_mono(&self, a: &Self::Mono, b: &Self::Mono) -> Option<(Self::Mono, Scalar)>;
    /// Every multidegree of the window with the given cohomological degree.
    fn degrees(&self, coh: i32) -> Result<Vec<MultiDegree>>;
    fn unit(&self) -> Self::Mono;
    fn mono_name(&self, m: &Self::Mono) -> String;
}

/// Finite linear combination of basis monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain<M: Ord> {
    pub terms: BTreeMap<M, Scalar>,
}

impl<M: Ord> Default for Cochain<M> {
    fn default() -> Self {
        Cochain { terms: BTreeMap::new() }
    }
}

impl<M: Ord + Clone> Cochain<M> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn mono(m: M, c: Scalar) -> Self {
        let mut x = Self::zero();
        x.add_term(m, &c);
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: M, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = e.add(c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn axpy(&mut self, c: &Scalar, o: &Cochain<M>) {
        if c.is_zero() {
            return;
        }
        for (m, s) in &o.terms {
            self.add_term(m.clone(), &c.mul(s));
        }
    }

    pub fn add(&self, o: &Cochain<M>) -> Cochain<M> {
        let mut r = self.clone();
        for (m, s) in &o.terms {
            r.add_term(m.clone(), s);
        }
        r
    }

    pub fn sub(&self, o: &Cochain<M>) -> Cochain<M> {
        let mut r = self.clone();
        for (m, s) in &o.terms {
            r.add_term(m.clone(), &s.neg());
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> Cochain<M> {
        let mut r = Self::zero();
        r.axpy(c, self);
        r
    }

    pub fn neg(&self) -> Cochain<M> {
        Cochain {
            terms: self.terms.iter().map(|(m, s)| (m.clone(), s.neg())).collect(),
        }
    }
}

/// A cohomology class given by a cocycle representative.
#[derive(Clone, Debug)]
pub struct CohomologyClass<M: Ord> {
    pub rep: Cochain<M>,
    pub coh: i32,
}

/// Coordinates of a class in the chosen cohomology bases, per multidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassVector {
    pub coords: BTreeMap<MultiDegree, Vec<Scalar>>,
}

impl ClassVector {
    pub fn is_zero(&self) -> bool {
        self.coords.values().all(|v| v.iter().all(|s| s.is_zero()))
    }

    fn normalise(mut self) -> Self {
        self.coords.retain(|_, v| v.iter().any(|s| !s.is_zero()));
        self
    }

    pub fn add(&self, o: &ClassVector) -> ClassVector {
        let mut r = self.clone();
        for (d, v) in &o.coords {
            match r.coords.get_mut(d) {
                Some(w) => {
                    for (a, b) in w.iter_mut().zip(v) {
                        *a = a.add(b);
                    }
                }
                None => {
                    r.coords.insert(d.clone(), v.clone());
                }
            }
        }
        r.normalise()
    }

    pub fn scale(&self, c: &Scalar) -> ClassVector {
        ClassVector {
            coords: self
                .coords
                .iter()
                .map(|(d, v)| (d.clone(), v.iter().map(|s| s.mul(c)).collect()))
                .collect(),
        }
        .normalise()
    }

    /// Flattens into a sparse vector over `(degree, index)` keys listed in `layout`.
    pub fn flatten(&self, layout: &mut Vec<(MultiDegree, usize)>) -> SparseVec {
        let mut v = SparseVec::new();
        for (d, cs) in &self.coords {
            for (i, s) in cs.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let key = (d.clone(), i);
                let pos = match layout.iter().position(|k| *k == key) {
                    Some(p) => p,
                    None => {
                        layout.push(key);
                        layout.len() - 1
                    }
                };
                v.add_at(pos, s);
            }
        }
        v
    }

    /// Human readable `c·[h_i@deg] + …`.
    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (d, cs) in &self.coords {
            for (i, s) in cs.iter().enumerate() {
                if !s.is_zero() {
                    parts.push(format!("{s}*h{i}{:?}", (d.coh, &d.aux)));
                }
            }
        }
        parts.join(" + ")
    }
}

struct DegreeData<M> {
    basis: Vec<M>,
    index: HashMap<M, usize>,
}

/// Per-degree data of the cohomology: quotient basis and representatives.
pub struct CohomologyData<M: Ord> {
    pub degree: MultiDegree,
    quotient: QuotientBasis,
    pub representatives: Vec<Cochain<M>>,
}

impl<M: Ord> CohomologyData<M> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

type Cache<K, V> = Mutex<HashMap<K, Arc<V>>>;

/// A DGA together with caches of bases, differentials and cohomology.
pub struct Complex<A: Dga> {
    pub alg: A,
    bases: Cache<MultiDegree, DegreeData<A::Mono>>,
    d_in: Cache<MultiDegree, EchelonBasis>,
    cohom: Cache<MultiDegree, CohomologyData<A::Mono>>,
}

fn cached<K: Eq + Hash + Clone, V>(
    cache: &Cache<K, V>,
    key: &K,
    make: impl FnOnce() -> Result<V>,
) -> Result<Arc<V>> {
    if let Some(v) = cache.lock().unwrap().get(key) {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    cache.lock().unwrap().entry(key.clone()).or_insert(v.clone());
    Ok(v)
}

impl<A: Dga> Complex<A> {
    pub fn new(alg: A) -> Self {
        Complex {
            alg,
            bases: Mutex::new(HashMap::new()),
            d_in: Mutex::new(HashMap::new()),
            cohom: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    fn data(&self, deg: &MultiDegree) -> Result<Arc<DegreeData<A::Mono>>> {
        cached(&self.bases, deg, || {
            let basis = if deg.coh < 0 { Vec::new() } else { self.alg.basis(deg)? };
            let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            Ok(DegreeData { basis, index })
        })
    }

    pub fn basis(&self, deg: &MultiDegree) -> Result<Vec<A::Mono>> {
        Ok(self.data(deg)?.basis.clone())
    }

    pub fn dim(&self, deg: &MultiDegree) -> Result<usize> {
        Ok(self.data(deg)?.basis.len())
    }

    /// Coordinates of a homogeneous cochain in degree `deg`.
    pub fn to_vec(&self, deg: &MultiDegree, c: &Cochain<A::Mono>) -> Result<SparseVec> {
        let data = self.data(deg)?;
        let mut v = SparseVec::new();
        for (m, s) in &c.terms {
            let i = data.index.get(m).ok_or_else(|| {
                Error::Internal(format!("monomial {} not in degree {deg:?}", self.alg.mono_name(m)))
            })?;
            v.add_at(*i, s);
        }
        Ok(v)
    }

    pub fn from_vec(&self, deg: &MultiDegree, v: &SparseVec) -> Result<Cochain<A::Mono>> {
        let data = self.data(deg)?;
        let mut c = Cochain::zero();
        for (i, s) in &v.entries {
            c.add_term(data.basis[*i].clone(), s);
        }
        Ok(c)
    }

    pub fn d(&self, c: &Cochain<A::Mono>) -> Cochain<A::Mono> {
        let mut r = Cochain::zero();
        for (m, s) in &c.terms {
            for (n, t) in self.alg.d_mono(m) {
                r.add_term(n, &s.mul(&t));
            }
        }
        r
    }

    pub fn wedge(&self, a: &Cochain<A::Mono>, b: &Cochain<A::Mono>) -> Cochain<A::Mono> {
        let mut r = Cochain::zero();
        for (m1, s1) in &a.terms {
            for (m2, s2) in &b.terms {
                if let Some((m, t)) = self.alg.mul_mono(m1, m2) {
                    r.add_term(m, &s1.mul(s2).mul(&t));
                }
            }
        }
        r
    }

    /// The involution `ā = (-1)^{deg a + 1} a`.
    pub fn bar(&self, c: &Cochain<A::Mono>) -> Cochain<A::Mono> {
        let mut r = Cochain::zero();
        for (m, s) in &c.terms {
            let deg = self.alg.degree(m).coh;
            let t = if deg % 2 == 0 { s.neg() } else { s.clone() };
            r.add_term(m.clone(), &t);
        }
        r
    }

    pub fn split(&self, c: &Cochain<A::Mono>) -> BTreeMap<MultiDegree, Cochain<A::Mono>> {
        let mut out: BTreeMap<MultiDegree, Cochain<A::Mono>> = BTreeMap::new();
        for (m, s) in &c.terms {
            out.entry(self.alg.degree(m)).or_default().add_term(m.clone(), s);
        }
        out
    }

    pub fn is_cocycle(&self, c: &Cochain<A::Mono>) -> bool {
        self.d(c).is_zero()
    }

    /// Column space of `d` into `deg`; tags index the basis of `deg - 1`.
    pub fn d_into(&self, deg: &MultiDegree) -> Result<Arc<EchelonBasis>> {
        cached(&self.d_in, deg, || {
            let target = self.data(deg)?;
            let src = self.data(&deg.shift(-1))?;
            let mut e = EchelonBasis::new(target.basis.len(), self.field());
            for m in &src.basis {
                let mut dm = Cochain::zero();
                for (n, s) in self.alg.d_mono(m) {
                    dm.add_term(n, &s);
                }
                e.insert(self.to_vec(deg, &dm)?);
            }
            Ok(e)
        })
    }

    /// Cohomology in one multidegree, with cocycle representatives.
    pub fn cohomology_at(&self, deg: &MultiDegree) -> Result<Arc<CohomologyData<A::Mono>>> {
        cached(&self.cohom, deg, || {
            let here = self.data(deg)?;
            let out = self.d_into(&deg.shift(1))?;
            let cycles: Vec<SparseVec> = out.kernel.clone();
            let d_in = self.d_into(deg)?;
            let src = self.data(&deg.shift(-1))?;
            let mut boundaries = Vec::new();
            for t in d_in.pivot_tags() {
                let m = &src.basis[t];
                let mut c = Cochain::zero();
                for (n, s) in self.alg.d_mono(m) {
                    c.add_term(n, &s);
                }
                boundaries.push(self.to_vec(deg, &c)?);
            }
            let quotient = quotient_unchecked(here.basis.len(), self.field(), &cycles, &boundaries);
            if quotient.dim() + boundaries.len() != cycles.len() {
                return Err(Error::Internal(format!("d∘d ≠ 0 in degree {deg:?}")));
            }
            let representatives = quotient
                .representatives
                .iter()
                .map(|v| self.from_vec(deg, v))
                .collect::<Result<Vec<_>>>()?;
            Ok(CohomologyData {
                degree: deg.clone(),
                quotient,
                representatives,
            })
        })
    }

    /// Dimensions of `H^{coh}` split by auxiliary degree, zeros omitted.
    pub fn cohomology_dims(&self, coh: i32) -> Result<Vec<(MultiDegree, usize)>> {
        let mut out = Vec::new();
        for d in self.alg.degrees(coh)? {
            let h = self.cohomology_at(&d)?.dim();
            if h > 0 {
                out.push((d, h));
            }
        }
        Ok(out)
    }

    /// Coordinates of the class of a (possibly inhomogeneous) cocycle.
    pub fn class_of(&self, c: &Cochain<A::Mono>) -> Result<ClassVector> {
        let mut cv = ClassVector::default();
        for (deg, part) in self.split(c) {
            let h = self.cohomology_at(&deg)?;
            let v = self.to_vec(&deg, &part)?;
            let coords = h.quotient.coordinates(&v).ok_or_else(|| {
                Error::DomainError(format!("cochain is not closed in degree {deg:?}"))
            })?;
            cv.coords.insert(deg, coords);
        }
        Ok(cv.normalise())
    }

    /// Cocycle representing a class vector.
    pub fn class_rep(&self, cv: &ClassVector) -> Result<Cochain<A::Mono>> {
        let mut c = Cochain::zero();
        for (deg, coords) in &cv.coords {
            let h = self.cohomology_at(deg)?;
            for (s, r) in coords.iter().zip(&h.representatives) {
                c.axpy(s, r);
            }
        }
        Ok(c)
    }

    /// Solves `d x = rhs` as far as possible: returns `x` and the residual `rhs - d x`.
    pub fn solve_d(&self, rhs: &Cochain<A::Mono>) -> Result<(Cochain<A::Mono>, Cochain<A::Mono>)> {
        let mut x = Cochain::zero();
        let mut residual = Cochain::zero();
        for (deg, part) in self.split(rhs) {
            let e = self.d_into(&deg)?;
            let red = e.reduce(&self.to_vec(&deg, &part)?);
            let src = self.data(&deg.shift(-1))?;
            for (t, s) in &red.combo.entries {
                x.add_term(src.basis[*t].clone(), s);
            }
            residual = residual.add(&self.from_vec(&deg, &red.residual)?);
        }
        Ok((x, residual))
    }

    /// Reduction data for `d x = rhs` in one degree: the residual coordinates and a preimage.
    pub fn reduce_in(
        &self,
        deg: &MultiDegree,
        rhs: &Cochain<A::Mono>,
    ) -> Result<(SparseVec, Cochain<A::Mono>)> {
        let e = self.d_into(deg)?;
        let red = e.reduce(&self.to_vec(deg, rhs)?);
        let src = self.data(&deg.shift(-1))?;
        let mut x = Cochain::zero();
        for (t, s) in &red.combo.entries {
            x.add_term(src.basis[*t].clone(), s);
        }
        Ok((red.residual, x))
    }

    pub fn format(&self, c: &Cochain<A::Mono>) -> String {
        if c.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, v)) in c.terms.iter().enumerate() {
            let v = v.to_string();
            let (sign, mag) = match v.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", v),
            };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if mag != "1" {
                s.push_str(&mag);
                s.push('*');
            }
            s.push_str(&self.alg.mono_name(m));
        }
        s
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Exterior algebra on `n` degree-one generators with `d = 0` (aux = weight vector).
    pub struct Exterior {
        pub n: usize,
        pub field: Field,
    }

    impl Dga for Exterior {
        type Mono = u32;
        fn field(&self) -> Field {
            self.field
        }
        fn degree(&self, m: &u32) -> MultiDegree {
            MultiDegree::new(m.count_ones() as i32, (0..self.n).map(|i| ((m >> i) & 1) as i32).collect())
        }
        fn basis(&self, deg: &MultiDegree) -> Result<Vec<u32>> {
            let m: u32 = deg.aux.iter().enumerate().map(|(i, b)| (*b as u32) << i).sum();
            if deg.aux.iter().any(|b| *b < 0 || *b > 1) || m.count_ones() as i32 != deg.coh {
                return Ok(vec![]);
            }
            Ok(vec![m])
        }
        fn d_mono(&self, _: &u32) -> Vec<(u32, Scalar)> {
            vec![]
        }
        fn mul_mono(&self, a: &u32, b: &u32) -> Option<(u32, Scalar)> {
            if a & b != 0 {
                return None;
            }
            let mut swaps = 0;
            for i in 0..self.n {
                if b >> i & 1 == 1 {
                    swaps += (a >> (i + 1)).count_ones();
                }
            }
            Some((a | b, self.field.from_i64(if swaps % 2 == 0 { 1 } else { -1 })))
        }
        fn degrees(&self, coh: i32) -> Result<Vec<MultiDegree>> {
            Ok((0u32..1 << self.n)
                .filter(|m| m.count_ones() as i32 == coh)
                .map(|m| self.degree(&m))
                .collect())
        }
        fn unit(&self) -> u32 {
            0
        }
        fn mono_name(&self, m: &u32) -> String {
            format!("e{m:b}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::testing::Exterior;
    use super::*;

    #[test]
    fn exterior_cohomology_is_everything() {
        let cx = Complex::new(Exterior { n: 3, field: Field::Rational });
        let dims = cx.cohomology_dims(2).unwrap();
        assert_eq!(dims.len(), 3);
        let e = |m: u32| Cochain::mono(m, Field::Rational.one());
        let p = cx.wedge(&e(0b010), &e(0b001));
        assert_eq!(p.terms[&0b011], Field::Rational.from_i64(-1));
        assert_eq!(cx.bar(&e(1)), e(1));
        assert_eq!(cx.bar(&e(3)), e(3).neg());
        let cv = cx.class_of(&p).unwrap();
        assert_eq!(cx.class_rep(&cv).unwrap(), p);
    }
}
