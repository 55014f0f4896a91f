//! Formal connections, the Maurer–Cartan defect, and Massey products computed
//! by a staged search over parametrised defining systems.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dga::{ClassVector, Cochain, Complex, Dga, MultiDegree};
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Field, Scalar, SparseVec};
use crate::poly::{solve_system, PMon, Poly, PolySolve, SolveOptions, Substitution};

/// Strictly upper-triangular `(n+1)×(n+1)` matrix of cochains.
///
/// Entry `(i, j)` with `i < j` is the defining-system element built from
/// classes `i..j`; the super-diagonal holds the classes themselves and `(0, n)`
/// is the corner.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalConnection<M: Ord> {
    pub entries: Vec<Vec<Cochain<M>>>,
}

impl<M: Ord + Clone> FormalConnection<M> {
    /// Zero connection for `n` classes.
    pub fn zero(n: usize) -> Self {
        FormalConnection {
            entries: vec![vec![Cochain::zero(); n + 1]; n + 1],
        }
    }

    /// Number of classes, i.e. size minus one.
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> &Cochain<M> {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Cochain<M>) {
        assert!(i < j, "connection is strictly upper triangular");
        self.entries[i][j] = c;
    }

    /// `μ(A) = dA − Ā∧A`, entrywise.
    pub fn mc_defect<A: Dga<Mono = M>>(&self, cx: &Complex<A>) -> Vec<Vec<Cochain<M>>> {
        let n = self.order();
        let mut mu = vec![vec![Cochain::zero(); n + 1]; n + 1];
        for i in 0..=n {
            for j in i + 1..=n {
                let mut m = cx.d(&self.entries[i][j]);
                for k in i + 1..j {
                    m = m.sub(&cx.wedge(&cx.bar(&self.entries[i][k]), &self.entries[k][j]));
                }
                mu[i][j] = m;
            }
        }
        mu
    }

    /// `c(A) = Σ_k ā(0,k) ∧ a(k,n)`, the cocycle attached to a connection whose
    /// defect is confined to the corner.
    pub fn related_cocycle<A: Dga<Mono = M>>(&self, cx: &Complex<A>) -> Cochain<M> {
        let n = self.order();
        let mut c = Cochain::zero();
        for k in 1..n {
            c = c.add(&cx.wedge(&cx.bar(&self.entries[0][k]), &self.entries[k][n]));
        }
        c
    }

    /// True when `μ(A)` vanishes away from the corner.
    pub fn defect_in_corner<A: Dga<Mono = M>>(&self, cx: &Complex<A>) -> bool {
        let n = self.order();
        let mu = self.mc_defect(cx);
        (0..=n).all(|i| (i + 1..=n).all(|j| (i == 0 && j == n) || mu[i][j].is_zero()))
    }

    /// `C⁻¹ A C` for an invertible upper-triangular scalar matrix `C`.
    pub fn conjugate(&self, c: &[Vec<Scalar>], field: Field) -> Result<Self> {
        let size = self.entries.len();
        let cinv = upper_triangular_inverse(c, size, field)?;
        let mut out = FormalConnection::zero(size - 1);
        for i in 0..size {
            for j in i + 1..size {
                let mut acc = Cochain::zero();
                for k in i..size {
                    if cinv[i][k].is_zero() {
                        continue;
                    }
                    for l in k + 1..=j {
                        if c[l][j].is_zero() {
                            continue;
                        }
                        acc.axpy(&cinv[i][k].mul(&c[l][j]), &self.entries[k][l]);
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// The tuple of `k`-step products, `c_i = Σ_r ā(i,r) ∧ a(r,i+k+1)` for `i = 0..n-k`.
    ///
    /// Requires `μ(A)` to vanish on every entry spanning at most `k` classes.
    pub fn kstep_product<A: Dga<Mono = M>>(&self, cx: &Complex<A>, k: usize) -> Result<Vec<Cochain<M>>> {
        let n = self.order();
        if k == 0 || k >= n {
            return Err(Error::InvalidInput(format!("step {k} out of range for order {n}")));
        }
        let mu = self.mc_defect(cx);
        for i in 0..=n {
            for j in i + 1..=n.min(i + k) {
                if !mu[i][j].is_zero() {
                    return Err(Error::DomainError(format!(
                        "defect is nonzero at ({i},{j}), inside the first {k} diagonals"
                    )));
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..n - k {
            let j = i + k + 1;
            let mut c = Cochain::zero();
            for r in i + 1..j {
                c = c.add(&cx.wedge(&cx.bar(&self.entries[i][r]), &self.entries[r][j]));
            }
            out.push(c);
        }
        Ok(out)
    }
}

fn upper_triangular_inverse(c: &[Vec<Scalar>], size: usize, field: Field) -> Result<Vec<Vec<Scalar>>> {
    if c.len() != size || c.iter().any(|r| r.len() != size) {
        return Err(Error::InvalidInput(format!("conjugating matrix must be {size}×{size}")));
    }
    for i in 0..size {
        for j in 0..i {
            if !c[i][j].is_zero() {
                return Err(Error::InvalidInput("conjugating matrix is not upper triangular".into()));
            }
        }
        if c[i][i].is_zero() {
            return Err(Error::InvalidInput("conjugating matrix is singular".into()));
        }
    }
    let mut inv = vec![vec![field.zero(); size]; size];
    for j in 0..size {
        inv[j][j] = c[j][j].inv();
        for i in (0..j).rev() {
            let mut s = field.zero();
            for k in i + 1..=j {
                s.add_mul(&c[i][k], &inv[k][j]);
            }
            inv[i][j] = s.mul(&c[i][i].inv()).neg();
        }
    }
    Ok(inv)
}

/// Cochain whose coefficients are polynomials in the family parameters.
#[derive(Clone, Debug)]
pub struct ParamCochain<M: Ord> {
    pub parts: BTreeMap<PMon, Cochain<M>>,
}

impl<M: Ord + Clone> Default for ParamCochain<M> {
    fn default() -> Self {
        ParamCochain { parts: BTreeMap::new() }
    }
}

impl<M: Ord + Clone> ParamCochain<M> {
    pub fn constant(c: Cochain<M>) -> Self {
        let mut p = Self::default();
        p.add_part(PMon::one(), &c);
        p
    }

    pub fn add_part(&mut self, m: PMon, c: &Cochain<M>) {
        if c.is_zero() {
            return;
        }
        let e = self.parts.entry(m.clone()).or_default();
        *e = e.add(c);
        if e.is_zero() {
            self.parts.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.parts {
            r.add_part(m.clone(), c);
        }
        r
    }

    pub fn substitute(&self, sub: &Substitution, field: Field) -> Self {
        if sub.is_empty() {
            return self.clone();
        }
        let mut r = Self::default();
        for (m, c) in &self.parts {
            let p = Poly {
                terms: [(m.clone(), field.one())].into_iter().collect(),
            }
            .substitute(sub, field);
            for (m2, s) in &p.terms {
                r.add_part(m2.clone(), &c.scale(s));
            }
        }
        r
    }

    pub fn eval(&self, point: &BTreeMap<u32, Scalar>, field: Field) -> Cochain<M> {
        let mut c = Cochain::zero();
        for (m, part) in &self.parts {
            let s = Poly {
                terms: [(m.clone(), field.one())].into_iter().collect(),
            }
            .eval(point, field);
            c.axpy(&s, part);
        }
        c
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.parts.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect()
    }
}

fn pc_wedge<A: Dga>(cx: &Complex<A>, a: &ParamCochain<A::Mono>, b: &ParamCochain<A::Mono>) -> ParamCochain<A::Mono> {
    let mut r = ParamCochain::default();
    for (m1, c1) in &a.parts {
        let bc1 = cx.bar(c1);
        for (m2, c2) in &b.parts {
            r.add_part(m1.mul(m2), &cx.wedge(&bc1, c2));
        }
    }
    r
}

/// Which auxiliary degrees the search may use for free parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Only the auxiliary degree forced by the inputs.
    Homogeneous,
    /// Every auxiliary degree in the window.
    Full,
}

#[derive(Clone, Debug)]
pub struct MasseyOptions {
    pub homogeneous: bool,
    /// Cap on free parameters for products of four or more classes.
    pub budget: usize,
    pub seed: u64,
    /// Number of random sample points reported besides the origin.
    pub samples: usize,
    /// Caller asserts the product is single valued.
    pub certificate: bool,
    pub solve: SolveOptions,
}

impl Default for MasseyOptions {
    fn default() -> Self {
        MasseyOptions {
            homogeneous: true,
            budget: 8,
            seed: 0,
            samples: 2,
            certificate: false,
            solve: SolveOptions::default(),
        }
    }
}

/// Affine description `base + span(directions)` of a set of classes.
#[derive(Clone, Debug)]
pub struct AffineFamily {
    pub base: ClassVector,
    pub directions: Vec<ClassVector>,
}

#[derive(Clone, Debug)]
pub enum MasseyStatus {
    /// No defining system exists (`proven`) or none was found.
    Undefined { proven: bool },
    /// Single valued.
    DefinedStrict(ClassVector),
    /// A coset `representative + span(indeterminacy)`.
    DefinedAffine {
        representative: ClassVector,
        indeterminacy: Vec<ClassVector>,
    },
    /// Values at explored defining systems.
    DefinedSampled {
        samples: Vec<ClassVector>,
        family: Option<AffineFamily>,
        complete: bool,
    },
}

impl MasseyStatus {
    pub fn is_defined(&self) -> bool {
        !matches!(self, MasseyStatus::Undefined { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            MasseyStatus::Undefined { .. } => "undefined",
            MasseyStatus::DefinedStrict(_) => "defined_strict",
            MasseyStatus::DefinedAffine { .. } => "defined_affine",
            MasseyStatus::DefinedSampled { .. } => "defined_sampled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    Nontrivial,
    Unknown,
}

impl Triviality {
    pub fn label(&self) -> &'static str {
        match self {
            Triviality::Trivial => "trivial",
            Triviality::Nontrivial => "nontrivial",
            Triviality::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MasseyOutcome<M: Ord> {
    pub status: MasseyStatus,
    pub triviality: Triviality,
    /// For trivial products: a connection with vanishing defect everywhere.
    /// Otherwise the explored system at the origin, if one exists.
    pub witness: Option<FormalConnection<M>>,
    pub scope: Scope,
    /// Free parameters in the explored family.
    pub params: usize,
    /// Whether the explored family provably covers every defining system in scope.
    pub complete: bool,
}

/// Parametrised defining system after the staged search.
#[derive(Clone, Debug)]
pub struct DefiningFamily<M: Ord> {
    pub entries: Vec<Vec<ParamCochain<M>>>,
    pub nparams: u32,
    pub complete: bool,
    pub scope: Scope,
    /// `Some(proven)` if the search stopped because no defining system was found.
    pub undefined: Option<bool>,
}

impl<M: Ord + Clone> DefiningFamily<M> {
    pub fn at(&self, point: &BTreeMap<u32, Scalar>, field: Field) -> FormalConnection<M> {
        let n = self.entries.len() - 1;
        let mut a = FormalConnection::zero(n);
        for i in 0..=n {
            for j in i + 1..=n {
                a.entries[i][j] = self.entries[i][j].eval(point, field);
            }
        }
        a
    }
}

fn coh_of<A: Dga>(cx: &Complex<A>, c: &Cochain<A::Mono>) -> Result<Option<i32>> {
    let mut deg = None;
    for m in c.terms.keys() {
        let d = cx.alg.degree(m).coh;
        match deg {
            None => deg = Some(d),
            Some(e) if e != d => {
                return Err(Error::InvalidInput("class is not homogeneous in cohomological degree".into()))
            }
            _ => {}
        }
    }
    Ok(deg)
}

/// Builds the parametrised family of defining systems, stage by stage.
pub fn defining_family<A: Dga>(
    cx: &Complex<A>,
    classes: &[Cochain<A::Mono>],
    opts: &MasseyOptions,
) -> Result<DefiningFamily<A::Mono>> {
    if classes.len() < 2 {
        return Err(Error::InvalidInput("need at least two classes".into()));
    }
    partial_family(cx, classes, opts, classes.len() - 1)
}

/// Solves the defining equations for every entry spanning at most `last` classes.
fn partial_family<A: Dga>(
    cx: &Complex<A>,
    classes: &[Cochain<A::Mono>],
    opts: &MasseyOptions,
    last: usize,
) -> Result<DefiningFamily<A::Mono>> {
    let n = classes.len();
    let field = cx.field();
    let mut cohs = Vec::new();
    let mut auxes: Vec<Option<Vec<i32>>> = Vec::new();
    for c in classes {
        if !cx.is_cocycle(c) {
            return Err(Error::InvalidInput("input is not a cocycle".into()));
        }
        let parts = cx.split(c);
        cohs.push(coh_of(cx, c)?);
        auxes.push(if parts.len() == 1 {
            parts.keys().next().map(|d| d.aux.clone())
        } else {
            None
        });
    }
    // A zero class has no degree; fall back to the full scope if that matters.
    let homogeneous = opts.homogeneous && auxes.iter().all(|a| a.is_some()) && cohs.iter().all(|c| c.is_some());
    let scope = if homogeneous { Scope::Homogeneous } else { Scope::Full };
    let coh = |i: usize, j: usize| -> Option<i32> {
        let mut s = 0;
        for c in &cohs[i..j] {
            s += (*c)?;
        }
        Some(s - (j - i - 1) as i32)
    };
    let aux = |i: usize, j: usize| -> Vec<i32> {
        let mut v = auxes[i].clone().unwrap();
        for a in &auxes[i + 1..j] {
            for (x, y) in v.iter_mut().zip(a.as_ref().unwrap()) {
                *x += y;
            }
        }
        v
    };

    let mut fam = DefiningFamily {
        entries: vec![vec![ParamCochain::default(); n + 1]; n + 1],
        nparams: 0,
        complete: true,
        scope,
        undefined: None,
    };
    for (i, c) in classes.iter().enumerate() {
        fam.entries[i][i + 1] = ParamCochain::constant(c.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    for s in 2..=last {
        let mut constraints: BTreeMap<(usize, MultiDegree, usize), Poly> = BTreeMap::new();
        for i in 0..=n - s {
            let j = i + s;
            let mut rhs = ParamCochain::default();
            for k in i + 1..j {
                rhs = rhs.add(&pc_wedge(cx, &fam.entries[i][k], &fam.entries[k][j]));
            }
            let mut sol = ParamCochain::default();
            for (pm, c) in &rhs.parts {
                for (deg, part) in cx.split(c) {
                    let (res, x) = cx.reduce_in(&deg, &part)?;
                    sol.add_part(pm.clone(), &x);
                    for (row, v) in res.entries {
                        constraints
                            .entry((i, deg.clone(), row))
                            .or_default()
                            .add_term(pm.clone(), v);
                    }
                }
            }
            fam.entries[i][j] = sol;
        }
        let polys: Vec<Poly> = constraints.into_values().collect();
        let sub = match solve_system(&polys, field, &mut rng, &opts.solve) {
            PolySolve::Exact(sub) => sub,
            PolySolve::Restricted(sub) => {
                fam.complete = false;
                sub
            }
            PolySolve::Inconsistent => {
                fam.undefined = Some(fam.complete);
                return Ok(fam);
            }
            PolySolve::Failed => {
                fam.undefined = Some(false);
                return Ok(fam);
            }
        };
        if !sub.is_empty() {
            for row in fam.entries.iter_mut() {
                for e in row.iter_mut() {
                    *e = e.substitute(&sub, field);
                }
            }
        }
        // Free cocycle parameters, one per cohomology basis vector in scope.
        for i in 0..=n - s {
            let j = i + s;
            let Some(q) = coh(i, j) else { continue };
            let degrees = if homogeneous {
                vec![MultiDegree::new(q, aux(i, j))]
            } else {
                cx.alg.degrees(q)?
            };
            for deg in degrees {
                let h = cx.cohomology_at(&deg)?;
                for rep in &h.representatives {
                    if last >= 3 && fam.nparams as usize >= opts.budget {
                        fam.complete = false;
                        continue;
                    }
                    let v = fam.nparams;
                    fam.nparams += 1;
                    fam.entries[i][j].add_part(PMon::var(v), rep);
                }
            }
        }
    }
    Ok(fam)
}

/// Class coordinates of the corner cocycle as polynomials in the parameters.
fn corner_class_polys<A: Dga>(
    cx: &Complex<A>,
    fam: &DefiningFamily<A::Mono>,
) -> Result<(ParamCochain<A::Mono>, Vec<(MultiDegree, usize)>, Vec<Poly>)> {
    let n = fam.entries.len() - 1;
    let c = span_product(cx, fam, 0, n);
    let (layout, polys) = class_polys(cx, &c)?;
    Ok((c, layout, polys))
}

/// `Σ_r ā(i,r) ∧ a(r,j)` over the family.
fn span_product<A: Dga>(cx: &Complex<A>, fam: &DefiningFamily<A::Mono>, i: usize, j: usize) -> ParamCochain<A::Mono> {
    let mut c = ParamCochain::default();
    for k in i + 1..j {
        c = c.add(&pc_wedge(cx, &fam.entries[i][k], &fam.entries[k][j]));
    }
    c
}

/// Class coordinates of a parametrised cocycle.
fn class_polys<A: Dga>(
    cx: &Complex<A>,
    c: &ParamCochain<A::Mono>,
) -> Result<(Vec<(MultiDegree, usize)>, Vec<Poly>)> {
    let mut layout: Vec<(MultiDegree, usize)> = Vec::new();
    let mut polys: Vec<Poly> = Vec::new();
    for (pm, part) in &c.parts {
        let cv = cx.class_of(part).map_err(|e| match e {
            Error::DomainError(m) => Error::Internal(format!("corner cocycle not closed: {m}")),
            other => other,
        })?;
        let v = cv.flatten(&mut layout);
        polys.resize(layout.len(), Poly::zero());
        for (k, s) in v.entries {
            polys[k].add_term(pm.clone(), s);
        }
    }
    Ok((layout, polys))
}

fn to_class_vector(layout: &[(MultiDegree, usize)], values: &[Scalar], cx_dims: &BTreeMap<MultiDegree, usize>, field: Field) -> ClassVector {
    let mut cv = ClassVector::default();
    for ((deg, i), s) in layout.iter().zip(values) {
        let dim = cx_dims[deg];
        let e = cv.coords.entry(deg.clone()).or_insert_with(|| vec![field.zero(); dim]);
        e[*i] = s.clone();
    }
    cv.add(&ClassVector::default())
}

/// Massey product of the classes represented by `classes`.
pub fn massey_product<A: Dga>(
    cx: &Complex<A>,
    classes: &[Cochain<A::Mono>],
    opts: &MasseyOptions,
) -> Result<MasseyOutcome<A::Mono>> {
    let field = cx.field();
    let n = classes.len();
    let fam = defining_family(cx, classes, opts)?;
    if let Some(proven) = fam.undefined {
        return Ok(MasseyOutcome {
            status: MasseyStatus::Undefined { proven },
            triviality: Triviality::Unknown,
            witness: None,
            scope: fam.scope,
            params: fam.nparams as usize,
            complete: fam.complete,
        });
    }
    let (corner, layout, polys) = corner_class_polys(cx, &fam)?;
    let mut dims = BTreeMap::new();
    for (d, _) in &layout {
        dims.insert(d.clone(), cx.cohomology_at(d)?.dim());
    }
    let origin = BTreeMap::new();
    let value_at = |point: &BTreeMap<u32, Scalar>| -> ClassVector {
        let vals: Vec<Scalar> = polys.iter().map(|p| p.eval(point, field)).collect();
        to_class_vector(&layout, &vals, &dims, field)
    };
    let base = value_at(&origin);
    let affine = polys.iter().all(|p| p.is_affine());
    let vars: BTreeSet<u32> = polys.iter().flat_map(|p| p.vars()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
    // Triviality: find parameters making every class coordinate vanish.
    let (triviality, point) = match solve_system(&polys, field, &mut rng, &opts.solve) {
        PolySolve::Exact(sub) | PolySolve::Restricted(sub) => (Triviality::Trivial, Some(point_of(&sub, field))),
        PolySolve::Inconsistent if fam.complete => (Triviality::Nontrivial, None),
        _ => (Triviality::Unknown, None),
    };
    let witness = match &point {
        Some(p) => {
            let mut a = fam.at(p, field);
            let c = corner.eval(p, field);
            let (x, res) = cx.solve_d(&c)?;
            if !res.is_zero() {
                return Err(Error::Internal("trivial corner class has no primitive".into()));
            }
            a.entries[0][n] = x;
            Some(a)
        }
        None => Some(fam.at(&origin, field)),
    };

    let directions = |base: &ClassVector| -> Vec<ClassVector> {
        let mut e = EchelonBasis::new(layout.len(), field);
        let mut out = Vec::new();
        for v in &vars {
            let mut vals = Vec::new();
            for p in &polys {
                vals.push(p.terms.get(&PMon::var(*v)).cloned().unwrap_or_else(|| field.zero()));
            }
            let sv = SparseVec::from_pairs(vals.iter().cloned().enumerate());
            if e.insert(sv) {
                out.push(to_class_vector(&layout, &vals, &dims, field));
            }
        }
        let _ = base;
        out
    };

    let status = if n == 2 || (fam.complete && vars.is_empty()) {
        MasseyStatus::DefinedStrict(base)
    } else if n == 3 {
        let ind = directions(&base);
        if ind.is_empty() {
            MasseyStatus::DefinedStrict(base)
        } else {
            MasseyStatus::DefinedAffine {
                representative: base,
                indeterminacy: ind,
            }
        }
    } else if opts.certificate {
        MasseyStatus::DefinedStrict(base)
    } else {
        let mut samples = vec![base.clone()];
        for _ in 0..opts.samples {
            let p: BTreeMap<u32, Scalar> = vars
                .iter()
                .map(|v| (*v, field.from_i64(rng.gen_range(-3..=3))))
                .collect();
            samples.push(value_at(&p));
        }
        let family = affine.then(|| AffineFamily {
            directions: directions(&base),
            base,
        });
        MasseyStatus::DefinedSampled {
            samples,
            family,
            complete: fam.complete,
        }
    };
    Ok(MasseyOutcome {
        status,
        triviality,
        witness,
        scope: fam.scope,
        params: fam.nparams as usize,
        complete: fam.complete,
    })
}

/// Evaluates a substitution at the point where every remaining variable is zero.
fn point_of(sub: &Substitution, field: Field) -> BTreeMap<u32, Scalar> {
    let zero = BTreeMap::new();
    sub.map.iter().map(|(v, p)| (*v, p.eval(&zero, field))).collect()
}

/// Decides whether the class of `target` is one of the values of the product.
///
/// `Some(true)` comes with a connection realising it; `Some(false)` is only
/// returned when the explored family is complete; `None` means undecided.
pub fn massey_contains<A: Dga>(
    cx: &Complex<A>,
    classes: &[Cochain<A::Mono>],
    target: &Cochain<A::Mono>,
    opts: &MasseyOptions,
) -> Result<(Option<bool>, Option<FormalConnection<A::Mono>>)> {
    let field = cx.field();
    let n = classes.len();
    let fam = defining_family(cx, classes, opts)?;
    if let Some(proven) = fam.undefined {
        return Ok((if proven { Some(false) } else { None }, None));
    }
    let (corner, mut layout, mut polys) = corner_class_polys(cx, &fam)?;
    let tv = cx.class_of(target)?.flatten(&mut layout);
    polys.resize(layout.len(), Poly::zero());
    for (k, s) in tv.entries {
        polys[k].add_term(PMon::one(), s.neg());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x51ed);
    match solve_system(&polys, field, &mut rng, &opts.solve) {
        PolySolve::Exact(sub) | PolySolve::Restricted(sub) => {
            let p = point_of(&sub, field);
            let mut a = fam.at(&p, field);
            let diff = corner.eval(&p, field).sub(target);
            let (x, res) = cx.solve_d(&diff)?;
            if !res.is_zero() {
                return Err(Error::Internal("matched value differs by a non-exact cocycle".into()));
            }
            a.entries[0][n] = x;
            Ok((Some(true), Some(a)))
        }
        PolySolve::Inconsistent if fam.complete => Ok((Some(false), None)),
        _ => Ok((None, None)),
    }
}

/// Result of [`k_step_massey`].
#[derive(Clone, Debug)]
pub struct KStepOutcome<M: Ord> {
    pub k: usize,
    /// `None` when no `k`-step connection was found.
    pub defined: Option<KStepValue<M>>,
    /// Whether no connection exists at all (only meaningful when undefined).
    pub proven: bool,
    pub params: usize,
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct KStepValue<M: Ord> {
    /// The `n - k` classes at the explored connection with all parameters zero.
    pub classes: Vec<ClassVector>,
    pub triviality: Triviality,
    /// Connection whose defect vanishes on the first `k` diagonals; when trivial,
    /// the next diagonal is filled in as well so the defect vanishes there too.
    pub witness: FormalConnection<M>,
}

/// The `k`-step product `⟨a_1, …, a_n⟩_k`: a tuple of `n - k` classes.
pub fn k_step_massey<A: Dga>(
    cx: &Complex<A>,
    classes: &[Cochain<A::Mono>],
    k: usize,
    opts: &MasseyOptions,
) -> Result<KStepOutcome<A::Mono>> {
    let n = classes.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidInput(format!("step {k} out of range for {n} classes")));
    }
    let field = cx.field();
    let fam = partial_family(cx, classes, opts, k)?;
    if let Some(proven) = fam.undefined {
        return Ok(KStepOutcome {
            k,
            defined: None,
            proven,
            params: fam.nparams as usize,
            complete: fam.complete,
        });
    }
    let mut taus = Vec::new();
    let mut all_polys = Vec::new();
    let mut per_tau = Vec::new();
    for i in 0..n - k {
        let tau = span_product(cx, &fam, i, i + k + 1);
        let (layout, polys) = class_polys(cx, &tau)?;
        all_polys.extend(polys.iter().cloned());
        per_tau.push((layout, polys));
        taus.push(tau);
    }
    let origin = BTreeMap::new();
    let mut values = Vec::new();
    for (layout, polys) in &per_tau {
        let mut dims = BTreeMap::new();
        for (d, _) in layout {
            dims.insert(d.clone(), cx.cohomology_at(d)?.dim());
        }
        let vals: Vec<Scalar> = polys.iter().map(|p| p.eval(&origin, field)).collect();
        values.push(to_class_vector(layout, &vals, &dims, field));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4b57);
    let (triviality, point) = match solve_system(&all_polys, field, &mut rng, &opts.solve) {
        PolySolve::Exact(sub) | PolySolve::Restricted(sub) => (Triviality::Trivial, Some(point_of(&sub, field))),
        PolySolve::Inconsistent if fam.complete => (Triviality::Nontrivial, None),
        _ => (Triviality::Unknown, None),
    };
    let mut witness = fam.at(point.as_ref().unwrap_or(&origin), field);
    if let Some(p) = &point {
        for (i, tau) in taus.iter().enumerate() {
            let (x, res) = cx.solve_d(&tau.eval(p, field))?;
            if !res.is_zero() {
                return Err(Error::Internal("trivial k-step class has no primitive".into()));
            }
            witness.entries[i][i + k + 1] = x;
        }
    }
    Ok(KStepOutcome {
        k,
        defined: Some(KStepValue {
            classes: values,
            triviality,
            witness,
        }),
        proven: false,
        params: fam.nparams as usize,
        complete: fam.complete,
    })
}

/// Class of the related cocycle of a defining system, the obstruction to
/// extending it to a connection with vanishing defect.
pub fn lift_obstruction<A: Dga>(cx: &Complex<A>, a: &FormalConnection<A::Mono>) -> Result<ClassVector> {
    if !a.defect_in_corner(cx) {
        return Err(Error::InvalidInput("not a defining system".into()));
    }
    cx.class_of(&a.related_cocycle(cx))
}

/// Convenience: the triple product.
pub fn triple_product<A: Dga>(
    cx: &Complex<A>,
    a: &Cochain<A::Mono>,
    b: &Cochain<A::Mono>,
    c: &Cochain<A::Mono>,
    opts: &MasseyOptions,
) -> Result<MasseyOutcome<A::Mono>> {
    massey_product(cx, &[a.clone(), b.clone(), c.clone()], opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::testing::Exterior;

    #[test]
    fn conjugation_scales_corner() {
        let f = Field::Rational;
        let cx = Complex::new(Exterior { n: 3, field: f });
        let e = |m: u32| Cochain::mono(m, f.one());
        let mut a = FormalConnection::zero(3);
        a.set(0, 1, e(1));
        a.set(1, 2, e(2));
        a.set(2, 3, e(4));
        let mu = a.mc_defect(&cx);
        let c = vec![
            vec![f.from_i64(2), f.from_i64(1), f.zero(), f.from_i64(5)],
            vec![f.zero(), f.from_i64(1), f.from_i64(3), f.zero()],
            vec![f.zero(), f.zero(), f.from_i64(-1), f.from_i64(1)],
            vec![f.zero(), f.zero(), f.zero(), f.from_i64(3)],
        ];
        let b = a.conjugate(&c, f).unwrap();
        let mu_b = b.mc_defect(&cx);
        // corner of C⁻¹ μ C = (3/2) μ_corner + contributions from other entries of μ
        let cinv = upper_triangular_inverse(&c, 4, f).unwrap();
        let mut expect = Cochain::zero();
        for k in 0..4 {
            for l in k + 1..4 {
                expect.axpy(&cinv[0][k].mul(&c[l][3]), &mu[k][l]);
            }
        }
        assert_eq!(mu_b[0][3], expect);
    }

    #[test]
    fn exterior_products() {
        let f = Field::Rational;
        let cx = Complex::new(Exterior { n: 3, field: f });
        let e = |m: u32| Cochain::mono(m, f.one());
        // ⟨e1, e1⟩: ē1 e1 = e1 e1 = 0, trivially.
        let o = massey_product(&cx, &[e(1), e(2)], &MasseyOptions::default()).unwrap();
        assert!(matches!(o.status, MasseyStatus::DefinedStrict(_)));
        assert_eq!(o.triviality, Triviality::Nontrivial);
        // ⟨e1, e2, e4⟩ is undefined since e1 e2 is not exact.
        let o = massey_product(&cx, &[e(1), e(2), e(4)], &MasseyOptions::default()).unwrap();
        assert!(matches!(o.status, MasseyStatus::Undefined { proven: true }));
    }
}
