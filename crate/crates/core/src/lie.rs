//! Positively graded Lie algebras and their Chevalley–Eilenberg complexes.
//!
//! Forms are bitmasks: bit `i-1` stands for `e^i`, so monomials are stored
//! with increasing indices and a wedge product only needs a parity count.
//! The differential is `d e^k = Σ_{i<j} c^k_{ij} e^i∧e^j` where
//! `[e_i, e_j] = Σ_k c^k_{ij} e_k`; in 𝔪₀ this gives `d e³ = e¹∧e²`.
//!
//! Truncating the algebra at weight `W` is harmless: `d` preserves weight, and
//! forms of weight at most `W` only see brackets landing in weight at most `W`.

use std::collections::BTreeMap;

use crate::dga::{Cochain, Complex, Dga, MultiDegree};
use crate::error::{Error, Result};
use crate::linalg::{Field, Scalar};
use crate::massey::{massey_product, FormalConnection, MasseyOptions, MasseyOutcome};

/// Presentation of an ℕ-graded Lie algebra with basis `e_1..e_N`.
#[derive(Clone, Debug)]
pub struct GradedLie {
    pub name: String,
    pub field: Field,
    /// `weights[i-1]` is the weight of `e_i`.
    pub weights: Vec<i32>,
    /// `[e_i, e_j]` for `i < j`.
    pub brackets: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
    pub truncation_weight: i32,
}

impl GradedLie {
    /// `[e_1, e_i] = e_{i+1}` for `i ≥ 2`, all other brackets zero.
    pub fn m0(w: usize, field: Field) -> Result<Self> {
        if w < 2 {
            return Err(Error::InvalidInput("truncation weight must be at least 2".into()));
        }
        let mut brackets = BTreeMap::new();
        for i in 2..w {
            brackets.insert((1, i), vec![(i + 1, field.one())]);
        }
        Ok(GradedLie {
            name: "m0".into(),
            field,
            weights: (1..=w as i32).collect(),
            brackets,
            truncation_weight: w as i32,
        })
    }

    /// Positive Witt algebra, `[e_i, e_j] = (j - i) e_{i+j}`.
    pub fn witt_plus(w: usize, field: Field) -> Result<Self> {
        if w < 2 {
            return Err(Error::InvalidInput("truncation weight must be at least 2".into()));
        }
        let mut brackets = BTreeMap::new();
        for i in 1..=w {
            for j in i + 1..=w {
                if i + j <= w {
                    brackets.insert((i, j), vec![(i + j, field.from_i64((j - i) as i64))]);
                }
            }
        }
        Ok(GradedLie {
            name: "witt_plus".into(),
            field,
            weights: (1..=w as i32).collect(),
            brackets,
            truncation_weight: w as i32,
        })
    }

    /// Custom presentation; generators must be numbered `1..=N`.
    pub fn custom(
        field: Field,
        generators: &[(usize, i32)],
        brackets: Vec<((usize, usize), Vec<(usize, Scalar)>)>,
    ) -> Result<Self> {
        let n = generators.len();
        if n == 0 || n > 63 {
            return Err(Error::InvalidInput(format!("{n} generators; need 1..=63")));
        }
        let mut weights = vec![0; n];
        for (i, w) in generators {
            if *i == 0 || *i > n || weights[i - 1] != 0 || *w <= 0 {
                return Err(Error::InvalidInput(format!("bad generator e{i} of weight {w}")));
            }
            weights[i - 1] = *w;
        }
        let mut map: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for ((i, j), terms) in brackets {
            if i == j || i == 0 || j == 0 || i > n || j > n {
                return Err(Error::InvalidInput(format!("bad bracket [e{i}, e{j}]")));
            }
            let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
            let e = map.entry((a, b)).or_default();
            for (k, c) in terms {
                if k == 0 || k > n {
                    return Err(Error::InvalidInput(format!("bracket term e{k} out of range")));
                }
                if weights[k - 1] != weights[a - 1] + weights[b - 1] {
                    return Err(Error::InvalidInput(format!(
                        "[e{a}, e{b}] has a term e{k} of the wrong weight"
                    )));
                }
                e.push((k, if flip { c.neg() } else { c }));
            }
        }
        let top = *weights.iter().max().unwrap();
        let g = GradedLie {
            name: "custom".into(),
            field,
            weights,
            brackets: map,
            truncation_weight: top,
        };
        g.check_jacobi()?;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `[e_i, e_j]` as `(k, c)` pairs, antisymmetric.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Scalar)> {
        if i == j {
            return Vec::new();
        }
        let (a, b) = (i.min(j), i.max(j));
        let terms = self.brackets.get(&(a, b)).cloned().unwrap_or_default();
        if i < j {
            terms
        } else {
            terms.into_iter().map(|(k, c)| (k, c.neg())).collect()
        }
    }

    fn bracket_vec(&self, x: &BTreeMap<usize, Scalar>, y: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in self.bracket(*i, *j) {
                    let e = out.entry(k).or_insert_with(|| self.field.zero());
                    *e = e.add(&a.mul(b).mul(&c));
                }
            }
        }
        out.retain(|_, s| !s.is_zero());
        out
    }

    /// Jacobi identity on every triple of basis vectors.
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        let unit = |i: usize| -> BTreeMap<usize, Scalar> { [(i, self.field.one())].into_iter().collect() };
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let t1 = self.bracket_vec(&self.bracket_vec(&unit(i), &unit(j)), &unit(k));
                    let t2 = self.bracket_vec(&self.bracket_vec(&unit(j), &unit(k)), &unit(i));
                    let t3 = self.bracket_vec(&self.bracket_vec(&unit(k), &unit(i)), &unit(j));
                    let mut sum = t1;
                    for t in [t2, t3] {
                        for (m, c) in t {
                            let e = sum.entry(m).or_insert_with(|| self.field.zero());
                            *e = e.add(&c);
                        }
                    }
                    if sum.values().any(|c| !c.is_zero()) {
                        return Err(Error::InvalidInput(format!("Jacobi fails on (e{i}, e{j}, e{k})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Bitmask of a sorted index list.
pub fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |m, i| m | 1u64 << (i - 1))
}

pub fn indices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// `a ∧ b` for monomials: the merged mask and whether the sort is odd.
pub fn wedge_masks(a: u64, b: u64) -> Option<(u64, bool)> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += if y >= 63 { 0 } else { (a >> (y + 1)).count_ones() };
    }
    Some((a | b, swaps % 2 == 1))
}

/// The form `±e^{i_1}∧…∧e^{i_q}` for indices in any order.
pub fn form(indices: &[usize], c: Scalar) -> Cochain<u64> {
    let mut mask = 0u64;
    let mut neg = false;
    for &i in indices {
        match wedge_masks(mask, 1u64 << (i - 1)) {
            Some((m, s)) => {
                mask = m;
                neg ^= s;
            }
            None => return Cochain::zero(),
        }
    }
    Cochain::mono(mask, if neg { c.neg() } else { c })
}

/// Chevalley–Eilenberg complex of a graded Lie algebra up to a weight.
#[derive(Clone, Debug)]
pub struct CeDga {
    pub lie: GradedLie,
    pub q_max: usize,
    pub w_max: i32,
    de: Vec<Vec<(u64, Scalar)>>,
}

impl CeDga {
    pub fn new(lie: GradedLie, q_max: usize, w_max: i32) -> Result<Self> {
        if w_max > lie.truncation_weight {
            return Err(Error::WindowTooSmall(format!(
                "weight {w_max} exceeds the truncation weight {}",
                lie.truncation_weight
            )));
        }
        let n = lie.dim();
        let mut de = vec![Vec::new(); n + 1];
        for ((i, j), terms) in &lie.brackets {
            for (k, c) in terms {
                de[*k].push((1u64 << (i - 1) | 1u64 << (j - 1), c.clone()));
            }
        }
        Ok(CeDga { lie, q_max, w_max, de })
    }

    fn weight(&self, mask: u64) -> i32 {
        indices_of(mask).iter().map(|i| self.lie.weights[i - 1]).sum()
    }

    fn enumerate(&self, start: usize, q: usize, w: i32, acc: u64, out: &mut Vec<u64>) {
        if q == 0 {
            if w == 0 {
                out.push(acc);
            }
            return;
        }
        for i in start..=self.lie.dim() {
            let wi = self.lie.weights[i - 1];
            if wi <= w {
                self.enumerate(i + 1, q - 1, w - wi, acc | 1u64 << (i - 1), out);
            }
        }
    }
}

impl Dga for CeDga {
    type Mono = u64;

    fn field(&self) -> Field {
        self.lie.field
    }

    fn degree(&self, m: &u64) -> MultiDegree {
        MultiDegree::new(m.count_ones() as i32, vec![self.weight(*m)])
    }

    fn basis(&self, deg: &MultiDegree) -> Result<Vec<u64>> {
        let w = deg.aux[0];
        if w > self.w_max {
            return Err(Error::WindowTooSmall(format!("weight {w} above window {}", self.w_max)));
        }
        if deg.coh < 0 || w < 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        self.enumerate(1, deg.coh as usize, w, 0, &mut out);
        out.sort();
        Ok(out)
    }

    fn d_mono(&self, m: &u64) -> Vec<(u64, Scalar)> {
        let idx = indices_of(*m);
        let mut out: BTreeMap<u64, Scalar> = BTreeMap::new();
        for (r, &k) in idx.iter().enumerate() {
            let prefix = idx[..r].iter().fold(0u64, |a, i| a | 1u64 << (i - 1));
            let suffix = idx[r + 1..].iter().fold(0u64, |a, i| a | 1u64 << (i - 1));
            for (pair, c) in &self.de[k] {
                let Some((m1, s1)) = wedge_masks(prefix, *pair) else { continue };
                let Some((m2, s2)) = wedge_masks(m1, suffix) else { continue };
                let neg = s1 ^ s2 ^ (r % 2 == 1);
                let v = if neg { c.neg() } else { c.clone() };
                let e = out.entry(m2).or_insert_with(|| self.field().zero());
                *e = e.add(&v);
            }
        }
        out.into_iter().filter(|(_, s)| !s.is_zero()).collect()
    }

    fn mul_mono(&self, a: &u64, b: &u64) -> Option<(u64, Scalar)> {
        let (m, neg) = wedge_masks(*a, *b)?;
        Some((m, self.field().from_i64(if neg { -1 } else { 1 })))
    }

    fn degrees(&self, coh: i32) -> Result<Vec<MultiDegree>> {
        let mut out = Vec::new();
        for w in 0..=self.w_max {
            let d = MultiDegree::new(coh, vec![w]);
            if !self.basis(&d)?.is_empty() {
                out.push(d);
            }
        }
        Ok(out)
    }

    fn unit(&self) -> u64 {
        0
    }

    fn mono_name(&self, m: &u64) -> String {
        if *m == 0 {
            return "1".into();
        }
        indices_of(*m)
            .iter()
            .map(|i| format!("e{i}"))
            .collect::<Vec<_>>()
            .join("^")
    }
}

pub type CeWindow = Complex<CeDga>;

pub fn ce_window(g: GradedLie, q_max: usize, w_max: i32) -> Result<CeWindow> {
    Ok(Complex::new(CeDga::new(g, q_max, w_max)?))
}

/// `dim H^q_w(W⁺)` for `0 ≤ q ≤ q_max`, `0 ≤ w ≤ w_max`.
pub fn goncharova_table(q_max: usize, w_max: i32, field: Field) -> Result<BTreeMap<(usize, i32), usize>> {
    let cx = ce_window(GradedLie::witt_plus(w_max.max(2) as usize, field)?, q_max, w_max)?;
    let mut out = BTreeMap::new();
    for q in 0..=q_max {
        for w in 0..=w_max {
            let dim = cx.cohomology_at(&MultiDegree::new(q as i32, vec![w]))?.dim();
            out.insert((q, w), dim);
        }
    }
    Ok(out)
}

/// Weights `(3q² ± q)/2` carrying the cohomology of W⁺ in degree `q`.
pub fn goncharova_weights(q: usize) -> [i32; 2] {
    let q = q as i32;
    [(3 * q * q - q) / 2, (3 * q * q + q) / 2]
}

fn check_no_e1(x: &Cochain<u64>) -> Result<()> {
    if x.terms.keys().any(|m| m & 1 == 1) {
        return Err(Error::DomainError("form involves e1".into()));
    }
    Ok(())
}

fn d1_mono(m: u64, field: Field) -> Cochain<u64> {
    let mut out = Cochain::zero();
    for i in indices_of(m) {
        if i <= 2 {
            continue;
        }
        let lowered = m & !(1u64 << (i - 1));
        if lowered >> (i - 2) & 1 == 1 {
            continue;
        }
        // e^{i-1} takes the slot of e^i, so the order is unchanged.
        out.add_term(lowered | 1u64 << (i - 2), &field.one());
    }
    out
}

/// The derivation `D₁` with `D₁e² = 0`, `D₁e^i = e^{i-1}`.
pub fn d1(x: &Cochain<u64>, field: Field) -> Result<Cochain<u64>> {
    check_no_e1(x)?;
    let mut out = Cochain::zero();
    for (m, s) in &x.terms {
        out.axpy(s, &d1_mono(*m, field));
    }
    Ok(out)
}

fn d1_pow(x: &Cochain<u64>, l: usize, field: Field) -> Cochain<u64> {
    let mut y = x.clone();
    for _ in 0..l {
        if y.is_zero() {
            break;
        }
        y = d1(&y, field).expect("no e1 by construction");
    }
    y
}

/// Appends `e^k` to every monomial; `k` must exceed every index present.
fn append(x: &Cochain<u64>, k: usize) -> Cochain<u64> {
    Cochain {
        terms: x
            .terms
            .iter()
            .map(|(m, s)| {
                debug_assert!(*m >> (k - 1) == 0);
                (m | 1u64 << (k - 1), s.clone())
            })
            .collect(),
    }
}

/// Right inverse of `D₁`: `D₋₁(ξ∧e^i) = Σ_l (-1)^l D₁^l(ξ)∧e^{i+1+l}`.
pub fn d_minus1(x: &Cochain<u64>, field: Field) -> Result<Cochain<u64>> {
    check_no_e1(x)?;
    let mut out = Cochain::zero();
    for (m, s) in &x.terms {
        if *m == 0 {
            return Err(Error::DomainError("D₋₁ is not defined on constants".into()));
        }
        let i = 64 - m.leading_zeros() as usize;
        let xi = Cochain::mono(m & !(1u64 << (i - 1)), field.one());
        let mut l = 0;
        loop {
            let t = if l == 0 { xi.clone() } else { d1_pow(&xi, l, field) };
            if t.is_zero() {
                break;
            }
            if i + 1 + l > 63 {
                return Err(Error::DomainError("index beyond 63".into()));
            }
            let sign = field.from_i64(if l % 2 == 0 { 1 } else { -1 });
            out.axpy(&s.mul(&sign), &append(&t, i + 1 + l));
            l += 1;
        }
    }
    Ok(out)
}

/// A closed form `ω(e^{i_1}∧…∧e^{i_q}∧e^{i_q+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaCocycle {
    pub indices: Vec<usize>,
    pub form: Cochain<u64>,
}

impl OmegaCocycle {
    pub fn degree(&self) -> usize {
        self.indices.len() + 1
    }

    pub fn weight(&self) -> i32 {
        let q = self.indices.len();
        self.indices.iter().map(|i| *i as i32).sum::<i32>() + self.indices[q - 1] as i32 + 1
    }
}

/// `Σ_l (-1)^l D₁^l(e^{i_1}∧…∧e^{i_q}) ∧ e^{i_q+1+l}`.
pub fn omega(indices: &[usize], field: Field) -> Result<OmegaCocycle> {
    if indices.is_empty() || indices[0] < 2 || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::IndexError(format!("{indices:?} must be strictly increasing and start at 2 or more")));
    }
    let top = *indices.last().unwrap();
    let base = Cochain::mono(mask_of(indices), field.one());
    let mut formc = Cochain::zero();
    let mut l = 0;
    loop {
        let t = d1_pow(&base, l, field);
        if t.is_zero() {
            break;
        }
        if top + 1 + l > 63 {
            return Err(Error::IndexError("index beyond 63".into()));
        }
        let sign = field.from_i64(if l % 2 == 0 { 1 } else { -1 });
        formc.axpy(&sign, &append(&t, top + 1 + l));
        l += 1;
    }
    Ok(OmegaCocycle {
        indices: indices.to_vec(),
        form: formc,
    })
}

/// Basis classes of `H*(𝔪₀)` that the closed-form product understands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum M0Class {
    E1,
    E2,
    Omega(Vec<usize>),
}

impl M0Class {
    pub fn cochain(&self, field: Field) -> Result<Cochain<u64>> {
        Ok(match self {
            M0Class::E1 => form(&[1], field.one()),
            M0Class::E2 => form(&[2], field.one()),
            M0Class::Omega(ix) => omega(ix, field)?.form,
        })
    }
}

fn wedge_forms(a: &Cochain<u64>, b: &Cochain<u64>) -> Cochain<u64> {
    let mut out = Cochain::zero();
    for (m1, s1) in &a.terms {
        for (m2, s2) in &b.terms {
            if let Some((m, neg)) = wedge_masks(*m1, *m2) {
                let c = s1.mul(s2);
                out.add_term(m, &if neg { c.neg() } else { c });
            }
        }
    }
    out
}

/// Writes a closed form in `Λ(e²,e³,…)` as a combination of ω-cocycles.
///
/// Such forms are exactly the kernel of `D₁`, and `ω(I)` is the only basis
/// element whose lowest-top-index monomial is `e^I∧e^{i_q+1}`, so peeling
/// monomials off by increasing top index is triangular.
pub fn omega_expansion(z: &Cochain<u64>, field: Field) -> Result<Vec<(Vec<usize>, Scalar)>> {
    check_no_e1(z)?;
    if !d1(z, field)?.is_zero() {
        return Err(Error::DomainError("form is not closed".into()));
    }
    let mut rest = z.clone();
    let mut out = Vec::new();
    while let Some((&m, c)) = rest
        .terms
        .iter()
        .min_by_key(|(m, _)| (63 - m.leading_zeros(), **m))
    {
        let c = c.clone();
        let ix = indices_of(m);
        let q = ix.len();
        if q < 2 || ix[q - 2] + 1 != ix[q - 1] {
            return Err(Error::Internal(format!("closed form with leading monomial {ix:?}")));
        }
        let label = ix[..q - 1].to_vec();
        rest.axpy(&c.neg(), &omega(&label, field)?.form);
        out.push((label, c));
    }
    Ok(out)
}

/// Product of basis classes of `H*(𝔪₀)`, as a combination of ω-cocycles.
///
/// `e¹·ω` is exact and `e²·ω(ξ∧e^i∧e^{i+1}) = ω(e²∧ξ∧e^i∧e^{i+1})`. For two
/// ω-cocycles the wedge already lies in `ker D₁`, which carries no coboundaries,
/// so it is expanded directly.
pub fn m0_product(x: &M0Class, y: &M0Class, field: Field) -> Result<Cochain<u64>> {
    match (x, y) {
        (M0Class::E1, M0Class::Omega(_)) => Ok(Cochain::zero()),
        (M0Class::E2, M0Class::Omega(ix)) => {
            if ix[0] == 2 {
                return Ok(Cochain::zero());
            }
            let mut all = vec![2];
            all.extend(ix);
            Ok(omega(&all, field)?.form)
        }
        (M0Class::Omega(a), M0Class::Omega(b)) => {
            let w = wedge_forms(&omega(a, field)?.form, &omega(b, field)?.form);
            let mut out = Cochain::zero();
            for (label, c) in omega_expansion(&w, field)? {
                out.axpy(&c, &omega(&label, field)?.form);
            }
            Ok(out)
        }
        (M0Class::Omega(ix), M0Class::E1 | M0Class::E2) => {
            let sign = field.from_i64(if ix.len() % 2 == 0 { -1 } else { 1 });
            Ok(m0_product(y, x, field)?.scale(&sign))
        }
        // e¹∧e² = d e³, and the remaining products vanish on the nose.
        (M0Class::E1 | M0Class::E2, M0Class::E1 | M0Class::E2) => Ok(Cochain::zero()),
    }
}

/// Whether a matrix of 1-forms satisfies `dA − Ā∧A = 0` in every entry, i.e.
/// whether it defines a Lie homomorphism into strictly upper-triangular matrices.
pub fn strong_mc_check(cx: &CeWindow, a: &FormalConnection<u64>) -> Result<bool> {
    for row in &a.entries {
        for e in row {
            if e.terms.keys().any(|m| m.count_ones() != 1) {
                return Err(Error::InvalidInput("entries must be 1-forms".into()));
            }
        }
    }
    Ok(a.mc_defect(cx).iter().flatten().all(|c| c.is_zero()))
}

/// Input to [`classify_1d_massey`].
#[derive(Clone, Debug)]
pub enum OneDimSpec {
    /// Classes `α_i e¹ + β_i e²`.
    Explicit(Vec<(Scalar, Scalar)>),
    /// `n` copies of `αe¹ + βe²`.
    A { n: usize, alpha: Scalar, beta: Scalar },
    /// `λ_i e¹ + e²` with `λ_i = iα + β`.
    B { n: usize, alpha: Scalar, beta: Scalar },
    /// `l` copies of `e¹`, then `e² + αe¹`, then `n-l-1` copies of `e¹`.
    C { n: usize, l: usize, alpha: Scalar },
    /// `e² + αe¹`, `2k` copies of `e¹`, `e² + βe¹`.
    D { k: usize, alpha: Scalar, beta: Scalar },
}

impl OneDimSpec {
    pub fn classes(&self, field: Field) -> Result<Vec<(Scalar, Scalar)>> {
        let (zero, one) = (field.zero(), field.one());
        Ok(match self {
            OneDimSpec::Explicit(v) => v.clone(),
            OneDimSpec::A { n, alpha, beta } => {
                if *n < 3 {
                    return Err(Error::InvalidInput("family A needs n ≥ 3".into()));
                }
                vec![(alpha.clone(), beta.clone()); *n]
            }
            OneDimSpec::B { n, alpha, beta } => {
                if *n < 3 || alpha.is_zero() {
                    return Err(Error::InvalidInput("family B needs n ≥ 3 and α ≠ 0".into()));
                }
                (1..=*n)
                    .map(|i| (field.from_i64(i as i64).mul(alpha).add(beta), one.clone()))
                    .collect()
            }
            OneDimSpec::C { n, l, alpha } => {
                if *n < 3 || *l >= *n {
                    return Err(Error::InvalidInput("family C needs n ≥ 3 and l < n".into()));
                }
                (0..*n)
                    .map(|p| if p == *l { (alpha.clone(), one.clone()) } else { (one.clone(), zero.clone()) })
                    .collect()
            }
            OneDimSpec::D { k, alpha, beta } => {
                if *k < 1 {
                    return Err(Error::InvalidInput("family D needs k ≥ 1".into()));
                }
                let mut v = vec![(alpha.clone(), one.clone())];
                v.extend(std::iter::repeat((one.clone(), zero.clone())).take(2 * k));
                v.push((beta.clone(), one.clone()));
                v
            }
        })
    }
}

/// `β₁(α₂β₃ − α₃β₂) − β₃(α₁β₂ − α₂β₁)`, zero exactly for trivial triple products.
pub fn triple_criterion(c: &[(Scalar, Scalar)]) -> Scalar {
    let (a1, b1) = &c[0];
    let (a2, b2) = &c[1];
    let (a3, b3) = &c[2];
    let g2 = a2.mul(b3).sub(&a3.mul(b2));
    let g1 = a1.mul(b2).sub(&a2.mul(b1));
    b1.mul(&g2).sub(&b3.mul(&g1))
}

#[derive(Clone, Debug)]
pub struct OneDimReport {
    pub classes: Vec<(Scalar, Scalar)>,
    pub outcome: MasseyOutcome<u64>,
    /// Present for triple products.
    pub criterion: Option<Scalar>,
}

/// Runs the Massey engine on `⟨α_1e¹+β_1e², …⟩` in 𝔪₀.
pub fn classify_1d_massey(spec: &OneDimSpec, field: Field, opts: &MasseyOptions) -> Result<OneDimReport> {
    let classes = spec.classes(field)?;
    let n = classes.len();
    if n < 2 {
        return Err(Error::InvalidInput("need at least two classes".into()));
    }
    let w = 2 * n + 2;
    let cx = ce_window(GradedLie::m0(w, field)?, n + 1, w as i32)?;
    let reps: Vec<Cochain<u64>> = classes
        .iter()
        .map(|(a, b)| form(&[1], a.clone()).add(&form(&[2], b.clone())))
        .collect();
    let outcome = massey_product(&cx, &reps, opts)?;
    Ok(OneDimReport {
        criterion: (n == 3).then(|| triple_criterion(&classes)),
        classes,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn brackets_and_jacobi() {
        let m = GradedLie::m0(10, Q).unwrap();
        assert_eq!(m.bracket(1, 5), vec![(6, Q.one())]);
        assert!(m.bracket(2, 3).is_empty());
        m.check_jacobi().unwrap();
        let w = GradedLie::witt_plus(12, Q).unwrap();
        assert_eq!(w.bracket(2, 3), vec![(5, Q.one())]);
        assert_eq!(w.bracket(3, 2), vec![(5, Q.from_i64(-1))]);
        assert!(w.bracket(4, 4).is_empty());
        w.check_jacobi().unwrap();
    }

    #[test]
    fn differential_conventions() {
        let cx = ce_window(GradedLie::m0(8, Q).unwrap(), 4, 8).unwrap();
        assert_eq!(cx.d(&form(&[3], Q.one())), form(&[1, 2], Q.one()));
        assert!(cx.d(&form(&[1], Q.one())).is_zero());
        assert!(cx.d(&form(&[2], Q.one())).is_zero());
        let w = ce_window(GradedLie::witt_plus(8, Q).unwrap(), 4, 8).unwrap();
        let d5 = w.d(&form(&[5], Q.one()));
        assert_eq!(d5, form(&[1, 4], Q.from_i64(3)).add(&form(&[2, 3], Q.one())));
        for cxx in [&cx, &w] {
            for q in 0..4 {
                for deg in cxx.alg.degrees(q).unwrap() {
                    for m in cxx.basis(&deg).unwrap() {
                        let dd = cxx.d(&cxx.d(&Cochain::mono(m, Q.one())));
                        assert!(dd.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn omega_forms() {
        assert_eq!(omega(&[2], Q).unwrap().form, form(&[2, 3], Q.one()));
        assert_eq!(
            omega(&[3], Q).unwrap().form,
            form(&[3, 4], Q.one()).add(&form(&[2, 5], Q.from_i64(-1)))
        );
        assert!(omega(&[1, 3], Q).is_err());
        assert!(omega(&[4, 3], Q).is_err());
        let cx = ce_window(GradedLie::m0(20, Q).unwrap(), 5, 20).unwrap();
        for ix in [vec![4], vec![2, 5], vec![3, 4, 6], vec![2, 3, 5]] {
            let o = omega(&ix, Q).unwrap();
            assert!(cx.is_cocycle(&o.form), "{ix:?}");
            let parts = cx.split(&o.form);
            assert_eq!(parts.len(), 1);
            assert_eq!(parts.keys().next().unwrap().aux[0], o.weight());
        }
    }

    #[test]
    fn d_minus1_rules() {
        assert_eq!(d_minus1(&form(&[4], Q.one()), Q).unwrap(), form(&[5], Q.one()));
        for (i, k) in [(3, 5), (4, 6), (5, 9)] {
            let mut expect = Cochain::zero();
            for l in 0..=i - 2 {
                expect = expect.add(&form(&[i - l, k + l + 1], Q.from_i64(if l % 2 == 0 { 1 } else { -1 })));
            }
            assert_eq!(d_minus1(&form(&[i, k], Q.one()), Q).unwrap(), expect);
        }
        assert!(d1(&form(&[1, 3], Q.one()), Q).is_err());
    }
}
