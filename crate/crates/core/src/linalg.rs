//! Exact linear algebra over ℚ and 𝔽_p.
//!
//! Everything is column oriented: a matrix is a list of sparse columns and
//! [`EchelonBasis`] reduces vectors against the span of the columns inserted
//! so far, remembering how each pivot was assembled from the originals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Accepts `q`, `Q`, `fp:7`, `F7` or a bare prime.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix("fp:")
            .or_else(|| t.strip_prefix("Fp:"))
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix('f'))
            .unwrap_or(t);
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::InvalidInput(format!("unknown field '{s}'")))?;
        Field::prime(p)
    }

    pub fn prime(p: u32) -> Result<Field> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::P(v.rem_euclid(p as i64) as u32, p),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = (v % BigInt::from(p)).to_i64().unwrap();
                Scalar::P(r.rem_euclid(p as i64) as u32, p)
            }
        }
    }

    /// `num/den` in this field; fails if `den` vanishes.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::InvalidInput(format!(
                "denominator {den} vanishes in {self}"
            )));
        }
        Ok(n.mul(&d.inv()))
    }

    /// Parses `"a"`, `"a/b"` (also accepts JSON integers upstream).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let t = s.trim();
        let bad = || Error::InvalidInput(format!("bad coefficient '{s}'"));
        let (n, d) = match t.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<BigInt>().map_err(|_| bad())?,
                b.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (t.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        self.from_ratio(&n, &d)
    }

    /// All elements of a prime field, `None` over ℚ.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..p).map(|v| Scalar::P(v, p)).collect()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. Prime-field elements carry their modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    P(u32, u32),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::P(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::P(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::P(v, _) => *v == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero; callers check first.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::P(v, p) => {
                assert!(*v != 0, "inverse of zero");
                Scalar::P(pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32, *p)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::P(a, p), Scalar::P(b, _)) => Scalar::P(((*a as u64 + *b as u64) % *p as u64) as u32, *p),
            _ => panic!("mixed fields"),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::P(a, p), Scalar::P(b, _)) => {
                Scalar::P(((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::P(a, p), Scalar::P(b, _)) => Scalar::P(((*a as u64 * *b as u64) % *p as u64) as u32, *p),
            _ => panic!("mixed fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::P(a, p) => Scalar::P((*p - *a) % *p, *p),
        }
    }

    /// `self += a*b` without an intermediate allocation where possible.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        match (self, a, b) {
            (Scalar::P(s, p), Scalar::P(x, _), Scalar::P(y, _)) => {
                *s = ((*s as u64 + *x as u64 * *y as u64) % *p as u64) as u32;
            }
            (s, a, b) => *s = s.add(&a.mul(b)),
        }
    }

    /// `p/q` rendering for rationals, the residue for 𝔽_p.
    pub fn to_ratio_string(&self) -> String {
        self.to_string()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::P(..) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::P(v, _) => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::add(self, o)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::sub(self, o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = Scalar::add(self, o);
    }
}

/// Sparse vector indexed by row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    pub entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = SparseVec::new();
        for (i, s) in pairs {
            v.add_at(i, &s);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.get(&i)
    }

    pub fn add_at(&mut self, i: usize, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(e) => {
                *e = e.add(s);
                if e.is_zero() {
                    self.entries.remove(&i);
                }
            }
            None => {
                self.entries.insert(i, s.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, s) in &other.entries {
            self.add_at(*i, &c.mul(s));
        }
    }

    pub fn scale(&mut self, c: &Scalar) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for v in self.entries.values_mut() {
            *v = v.mul(c);
        }
    }

    pub fn first(&self) -> Option<(usize, &Scalar)> {
        self.entries.iter().next().map(|(i, s)| (*i, s))
    }

    pub fn dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, s) in &self.entries {
            out[*i] = s.clone();
        }
        out
    }
}

/// Sparse matrix with explicit shape, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    pub columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        SparseMatrix {
            rows,
            cols,
            field,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn from_columns(rows: usize, field: Field, columns: Vec<SparseVec>) -> Self {
        SparseMatrix {
            rows,
            cols: columns.len(),
            field,
            columns,
        }
    }

    pub fn from_dense(rows: &[Vec<Scalar>], field: Field) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::zeros(nr, nc, field);
        for (i, r) in rows.iter().enumerate() {
            for (j, s) in r.iter().enumerate() {
                m.columns[j].add_at(i, s);
            }
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, s: Scalar) {
        self.columns[c].entries.remove(&r);
        if !s.is_zero() {
            self.columns[c].entries.insert(r, s);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c].get(r).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn mul_vec(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, s) in &x.entries {
            out.axpy(s, &self.columns[*j]);
        }
        out
    }

    pub fn rank(&self) -> usize {
        EchelonBasis::from_columns(self.rows, self.field, &self.columns).rank()
    }

    /// Basis of the null space, as vectors over the columns.
    pub fn kernel(&self) -> Vec<SparseVec> {
        EchelonBasis::from_columns(self.rows, self.field, &self.columns).kernel
    }

    /// Linearly independent columns spanning the image.
    pub fn image(&self) -> Vec<SparseVec> {
        EchelonBasis::from_columns(self.rows, self.field, &self.columns)
            .pivot_tags()
            .map(|t| self.columns[t].clone())
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Pivot {
    row: usize,
    vec: SparseVec,
    combo: SparseVec,
}

/// Incremental column echelon form.
///
/// Every inserted vector receives a tag (its insertion index). Pivot vectors
/// are normalised to 1 at their pivot row and remember their expression in
/// terms of tags, so reductions can report coefficients on the originals.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    pub nrows: usize,
    pub field: Field,
    pivots: Vec<Pivot>,
    by_row: HashMap<usize, usize>,
    pivot_tag: Vec<usize>,
    ntags: usize,
    /// Null-space vectors over tags, one per dependent insertion.
    pub kernel: Vec<SparseVec>,
}

/// Outcome of reducing a vector against an [`EchelonBasis`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// What is left after removing everything in the span.
    pub residual: SparseVec,
    /// Coefficients over tags with `v = Σ combo[t]·col_t + residual`.
    pub combo: SparseVec,
}

impl EchelonBasis {
    pub fn new(nrows: usize, field: Field) -> Self {
        EchelonBasis {
            nrows,
            field,
            pivots: Vec::new(),
            by_row: HashMap::new(),
            pivot_tag: Vec::new(),
            ntags: 0,
            kernel: Vec::new(),
        }
    }

    pub fn from_columns(nrows: usize, field: Field, cols: &[SparseVec]) -> Self {
        let mut e = EchelonBasis::new(nrows, field);
        for c in cols {
            e.insert(c.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn len(&self) -> usize {
        self.ntags
    }

    pub fn is_empty(&self) -> bool {
        self.ntags == 0
    }

    /// Tags of inserted vectors that became pivots, in insertion order.
    pub fn pivot_tags(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_tag.iter().copied()
    }

    /// Reduces `v` fully. Pivot choice is by lowest row.
    pub fn reduce(&self, v: &SparseVec) -> Reduction {
        let mut r = v.clone();
        let mut combo = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = r.entries.range(cursor..).find(|(row, _)| self.by_row.contains_key(row));
            let Some((&row, c)) = next else { break };
            let c = c.clone();
            let p = &self.pivots[self.by_row[&row]];
            r.axpy(&c.neg(), &p.vec);
            combo.axpy(&c, &p.combo);
            cursor = row + 1;
        }
        Reduction { residual: r, combo }
    }

    /// Inserts a vector; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let tag = self.ntags;
        self.ntags += 1;
        let red = self.reduce(&v);
        let mut combo = red.combo;
        combo.scale(&self.field.one().neg());
        combo.add_at(tag, &self.field.one());
        match red.residual.first() {
            None => {
                self.kernel.push(combo);
                false
            }
            Some((row, lead)) => {
                let inv = lead.inv();
                let mut vec = red.residual.clone();
                vec.scale(&inv);
                combo.scale(&inv);
                // Keep earlier pivots reduced at the new row so reduce() stays single pass.
                for q in self.pivots.iter_mut() {
                    if let Some(c) = q.vec.get(row).cloned() {
                        let negc = c.neg();
                        q.vec.axpy(&negc, &vec);
                        q.combo.axpy(&negc, &combo);
                    }
                }
                self.by_row.insert(row, self.pivots.len());
                self.pivots.push(Pivot { row, vec, combo });
                self.pivot_tag.push(tag);
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).residual.is_zero()
    }

    pub fn pivot_rows(&self) -> Vec<usize> {
        self.pivots.iter().map(|p| p.row).collect()
    }
}

/// Solution set `{ particular + Σ t_k kernel_k }` of `A x = b`.
#[derive(Clone, Debug)]
pub struct AffineSolutionSet {
    pub particular: SparseVec,
    pub kernel: Vec<SparseVec>,
}

/// Solves `A x = b`. Returns `Error::Inconsistent` when `b ∉ im A`.
pub fn solve_affine(a: &SparseMatrix, b: &SparseVec) -> Result<AffineSolutionSet> {
    let e = EchelonBasis::from_columns(a.rows, a.field, &a.columns);
    let red = e.reduce(b);
    if !red.residual.is_zero() {
        return Err(Error::Inconsistent);
    }
    Ok(AffineSolutionSet {
        particular: red.combo,
        kernel: e.kernel,
    })
}

/// A complement of `boundaries` inside `cycles`, with coordinates.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    pub representatives: Vec<SparseVec>,
    echelon: EchelonBasis,
    rep_tags: Vec<usize>,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of a cycle modulo boundaries; `None` if it is not a cycle.
    pub fn coordinates(&self, z: &SparseVec) -> Option<Vec<Scalar>> {
        let red = self.echelon.reduce(z);
        if !red.residual.is_zero() {
            return None;
        }
        Some(
            self.rep_tags
                .iter()
                .map(|t| red.combo.get(*t).cloned().unwrap_or_else(|| self.echelon.field.zero()))
                .collect(),
        )
    }

    pub fn is_boundary(&self, z: &SparseVec) -> bool {
        self.coordinates(z)
            .map(|c| c.iter().all(|s| s.is_zero()))
            .unwrap_or(false)
    }
}

/// Quotient of span(cycles) by span(boundaries). Errors if a boundary is not in span(cycles).
pub fn subspace_quotient(
    nrows: usize,
    field: Field,
    cycles: &[SparseVec],
    boundaries: &[SparseVec],
) -> Result<QuotientBasis> {
    let zspan = EchelonBasis::from_columns(nrows, field, cycles);
    if boundaries.iter().any(|b| !zspan.contains(b)) {
        return Err(Error::InvalidInput(
            "boundary subspace not contained in cycle subspace".into(),
        ));
    }
    Ok(quotient_unchecked(nrows, field, cycles, boundaries))
}

pub(crate) fn quotient_unchecked(
    nrows: usize,
    field: Field,
    cycles: &[SparseVec],
    boundaries: &[SparseVec],
) -> QuotientBasis {
    let mut e = EchelonBasis::new(nrows, field);
    for b in boundaries {
        e.insert(b.clone());
    }
    let mut reps = Vec::new();
    let mut rep_tags = Vec::new();
    for z in cycles {
        let tag = e.len();
        if e.insert(z.clone()) {
            reps.push(z.clone());
            rep_tags.push(tag);
        }
    }
    QuotientBasis {
        representatives: reps,
        echelon: e,
        rep_tags,
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u32, rows: &[&[i64]]) -> SparseMatrix {
        let f = Field::Prime(p);
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|v| f.from_i64(*v)).collect())
            .collect();
        SparseMatrix::from_dense(&dense, f)
    }

    /// Rank by enumerating the image over a tiny prime field.
    fn brute_rank(m: &SparseMatrix) -> usize {
        let p = m.field.characteristic() as usize;
        let mut images = std::collections::HashSet::new();
        let total = p.pow(m.cols as u32);
        for code in 0..total {
            let mut c = code;
            let mut x = SparseVec::new();
            for j in 0..m.cols {
                x.add_at(j, &m.field.from_i64((c % p) as i64));
                c /= p;
            }
            images.insert(format!("{:?}", m.mul_vec(&x).dense(m.rows, m.field)));
        }
        let mut r = 0;
        while p.pow(r as u32) < images.len() {
            r += 1;
        }
        r
    }

    #[test]
    fn rank_matches_enumeration() {
        let mut seed = 12345u64;
        for _ in 0..60 {
            let mut rows = Vec::new();
            for _ in 0..4 {
                let mut r = Vec::new();
                for _ in 0..5 {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    r.push(((seed >> 33) % 3) as i64);
                }
                rows.push(r);
            }
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let m = fp(3, &refs);
            assert_eq!(m.rank(), brute_rank(&m));
            for k in m.kernel() {
                assert!(m.mul_vec(&k).is_zero());
            }
            assert_eq!(m.kernel().len() + m.rank(), m.cols);
        }
    }

    #[test]
    fn solve_and_inconsistency() {
        let f = Field::Rational;
        let q = |v: i64| f.from_i64(v);
        let a = SparseMatrix::from_dense(&[vec![q(1), q(2)], vec![q(2), q(4)]], f);
        let b = SparseVec::from_pairs([(0, q(3)), (1, q(6))]);
        let s = solve_affine(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&s.particular), b);
        assert_eq!(s.kernel.len(), 1);
        let bad = SparseVec::from_pairs([(0, q(1))]);
        assert!(matches!(solve_affine(&a, &bad), Err(Error::Inconsistent)));
    }

    #[test]
    fn quotient_coordinates() {
        let f = Field::Rational;
        let e = |i: usize| SparseVec::from_pairs([(i, f.one())]);
        let mut b0 = e(0);
        b0.axpy(&f.one(), &e(1));
        let qb = subspace_quotient(3, f, &[e(0), e(1), e(2)], &[b0.clone()]).unwrap();
        assert_eq!(qb.dim(), 2);
        assert!(qb.is_boundary(&b0));
        assert!(!qb.is_boundary(&e(2)));
        assert!(subspace_quotient(3, f, &[e(0)], &[e(1)]).is_err());
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("fp:7").unwrap(), Field::Prime(7));
        assert!(Field::parse("fp:8").is_err());
        let f = Field::Prime(5);
        assert_eq!(f.parse_scalar("3/2").unwrap(), f.from_i64(4));
        assert_eq!(Field::Rational.parse_scalar("-6/4").unwrap().to_string(), "-3/2");
        assert!(f.parse_scalar("1/5").is_err());
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }
}
