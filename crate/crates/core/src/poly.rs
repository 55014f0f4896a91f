//! Multivariate polynomials in the free parameters of a defining-system family,
//! plus a small solver for the polynomial systems those families produce.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::linalg::{solve_affine, Field, Scalar, SparseMatrix, SparseVec};

/// Monomial `Π t_v^e`, stored as sorted `(v, e)` pairs with `e > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PMon(pub Vec<(u32, u32)>);

impl PMon {
    pub fn one() -> Self {
        PMon(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        PMon(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &PMon) -> PMon {
        let mut m: BTreeMap<u32, u32> = self.0.iter().copied().collect();
        for (v, e) in &o.0 {
            *m.entry(*v).or_insert(0) += e;
        }
        PMon(m.into_iter().collect())
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }
}

/// Polynomial with scalar coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<PMon, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(PMon::one(), c);
        p
    }

    pub fn var(v: u32, field: Field) -> Self {
        let mut p = Poly::zero();
        p.add_term(PMon::var(v), field.one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: PMon, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut r = Poly::zero();
        for (m, v) in &self.terms {
            r.add_term(m.clone(), v.mul(c));
        }
        r
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    pub fn constant_term(&self, field: Field) -> Scalar {
        self.terms.get(&PMon::one()).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect()
    }

    pub fn eval(&self, point: &BTreeMap<u32, Scalar>, field: Field) -> Scalar {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = point.get(v).cloned().unwrap_or_else(|| field.zero());
                t = t.mul(&x.pow(*e));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Replaces variables according to `sub`; unmapped variables stay.
    pub fn substitute(&self, sub: &Substitution, field: Field) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (v, e) in &m.0 {
                let image = match sub.map.get(v) {
                    Some(p) => p.clone(),
                    None => Poly::var(*v, field),
                };
                for _ in 0..*e {
                    acc = acc.mul(&image);
                }
            }
            out = out.add(&acc);
        }
        out
    }
}

/// Variable replacement `t_v ↦ poly`.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    pub map: BTreeMap<u32, Poly>,
}

impl Substitution {
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &Substitution, field: Field) -> Substitution {
        let mut map: BTreeMap<u32, Poly> = self
            .map
            .iter()
            .map(|(v, p)| (*v, p.substitute(then, field)))
            .collect();
        for (v, p) in &then.map {
            map.entry(*v).or_insert_with(|| p.clone());
        }
        Substitution { map }
    }

    pub fn point(values: &BTreeMap<u32, Scalar>) -> Substitution {
        Substitution {
            map: values.iter().map(|(v, s)| (*v, Poly::constant(s.clone()))).collect(),
        }
    }
}

/// How a polynomial system was handled.
#[derive(Clone, Debug)]
pub enum PolySolve {
    /// Affine system solved exactly; the substitution parametrises every solution.
    Exact(Substitution),
    /// Provably no solution.
    Inconsistent,
    /// A solution family found after fixing some variables; not every solution is covered.
    Restricted(Substitution),
    /// Nothing found, and no proof that nothing exists.
    Failed,
}

/// Knobs for [`solve_system`].
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub attempts: usize,
    pub exhaustive_max_vars: usize,
    pub exhaustive_max_points: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            attempts: 24,
            exhaustive_max_vars: 6,
            exhaustive_max_points: 200_000,
        }
    }
}

/// Solves `polys = 0` for the listed variables.
pub fn solve_system<R: Rng>(
    polys: &[Poly],
    field: Field,
    rng: &mut R,
    opts: &SolveOptions,
) -> PolySolve {
    let polys: Vec<Poly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.is_empty() {
        return PolySolve::Exact(Substitution::default());
    }
    if polys.iter().all(|p| p.is_affine()) {
        return match solve_affine_system(&polys, field) {
            Some(s) => PolySolve::Exact(s),
            None => PolySolve::Inconsistent,
        };
    }
    if linearization_inconsistent(&polys, field) {
        return PolySolve::Inconsistent;
    }
    let vars: Vec<u32> = polys
        .iter()
        .flat_map(|p| p.vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if let Field::Prime(p) = field {
        let points = (p as u64).checked_pow(vars.len() as u32);
        if vars.len() <= opts.exhaustive_max_vars
            && points.is_some_and(|n| n <= opts.exhaustive_max_points)
        {
            return exhaustive(&polys, field, &vars);
        }
    }
    for attempt in 0..opts.attempts.max(1) {
        let mut current = polys.clone();
        let mut sub = Substitution::default();
        loop {
            if current.iter().all(|q| q.is_affine()) {
                break;
            }
            let nonlinear: BTreeSet<u32> = current
                .iter()
                .flat_map(|q| q.terms.keys().filter(|m| m.degree() > 1).flat_map(|m| m.vars().collect::<Vec<_>>()))
                .collect();
            let pick: Vec<u32> = nonlinear.into_iter().collect();
            let v = pick[rng.gen_range(0..pick.len())];
            let val = if attempt == 0 {
                field.zero()
            } else {
                field.from_i64(rng.gen_range(-2..=2))
            };
            let step = Substitution {
                map: [(v, Poly::constant(val))].into_iter().collect(),
            };
            current = current.iter().map(|q| q.substitute(&step, field)).collect();
            sub = sub.compose(&step, field);
        }
        if let Some(s) = solve_affine_system(&current, field) {
            return PolySolve::Restricted(sub.compose(&s, field));
        }
    }
    PolySolve::Failed
}

/// Treats every distinct nonlinear monomial as a fresh unknown.
fn linearization_inconsistent(polys: &[Poly], field: Field) -> bool {
    let mons: Vec<PMon> = polys
        .iter()
        .flat_map(|p| p.terms.keys().filter(|m| !m.is_one()).cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let col: BTreeMap<&PMon, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut a = SparseMatrix::zeros(polys.len(), mons.len(), field);
    let mut b = SparseVec::new();
    for (r, p) in polys.iter().enumerate() {
        for (m, c) in &p.terms {
            if m.is_one() {
                b.add_at(r, &c.neg());
            } else {
                a.columns[col[m]].add_at(r, c);
            }
        }
    }
    solve_affine(&a, &b).is_err()
}

fn exhaustive(polys: &[Poly], field: Field, vars: &[u32]) -> PolySolve {
    let elems = field.elements().expect("prime field");
    let p = elems.len();
    let total = p.pow(vars.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut point = BTreeMap::new();
        for v in vars {
            point.insert(*v, elems[c % p].clone());
            c /= p;
        }
        if polys.iter().all(|q| q.eval(&point, field).is_zero()) {
            return PolySolve::Restricted(Substitution::point(&point));
        }
    }
    PolySolve::Inconsistent
}

/// Exact solution of an affine system, eliminating pivot variables.
pub fn solve_affine_system(polys: &[Poly], field: Field) -> Option<Substitution> {
    let mut rows: Vec<(BTreeMap<u32, Scalar>, Scalar)> = Vec::new();
    for p in polys {
        let mut lin = BTreeMap::new();
        let mut c = field.zero();
        for (m, s) in &p.terms {
            if m.is_one() {
                c = s.clone();
            } else {
                debug_assert_eq!(m.degree(), 1);
                lin.insert(m.0[0].0, s.clone());
            }
        }
        rows.push((lin, c));
    }
    // Gauss–Jordan on the equations.
    let mut pivots: Vec<(u32, BTreeMap<u32, Scalar>, Scalar)> = Vec::new();
    for (mut lin, mut c) in rows {
        for (pv, plin, pc) in &pivots {
            if let Some(f) = lin.get(pv).cloned() {
                for (v, s) in plin {
                    let e = lin.entry(*v).or_insert_with(|| field.zero());
                    *e = e.sub(&f.mul(s));
                }
                c = c.sub(&f.mul(pc));
                lin.retain(|_, s| !s.is_zero());
            }
        }
        let Some((&v, lead)) = lin.iter().next() else {
            if c.is_zero() {
                continue;
            }
            return None;
        };
        let inv = lead.inv();
        for s in lin.values_mut() {
            *s = s.mul(&inv);
        }
        c = c.mul(&inv);
        for (_, plin, pc) in pivots.iter_mut() {
            if let Some(f) = plin.get(&v).cloned() {
                for (w, s) in &lin {
                    let e = plin.entry(*w).or_insert_with(|| field.zero());
                    *e = e.sub(&f.mul(s));
                }
                *pc = pc.sub(&f.mul(&c));
                plin.retain(|_, s| !s.is_zero());
            }
        }
        pivots.push((v, lin, c));
    }
    let mut map = BTreeMap::new();
    for (v, lin, c) in pivots {
        // v + Σ s_w w + c = 0  ⇒  v = -c - Σ s_w w
        let mut p = Poly::constant(c.neg());
        for (w, s) in lin {
            if w != v {
                p.add_term(PMon::var(w), s.neg());
            }
        }
        map.insert(v, p);
    }
    Some(Substitution { map })
}
