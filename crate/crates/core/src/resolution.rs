//! Koszul homology, polarization, minimal resolutions of the residue field and
//! the Serre bound on Poincaré series.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::face::{SimplicialComplex, HOCHSTER_CAP};
use crate::linalg::{binomial, EchelonBasis, Scalar, SparseMatrix, SparseVec};
use crate::ring::{cup_length_of, model_betti, BettiTable, KoszulComplex, KoszulModel, MonomialQuotient, ProductWitness};

/// Default bound on the homological index of a resolution.
pub const RESOLUTION_CAP: usize = 6;

/// Koszul homology `H(K_A) = Tor^S(A, k)` and its multiplication.
pub struct KoszulHomology {
    pub table: BettiTable,
    pub model: KoszulComplex,
    pub trivial_multiplication: bool,
    pub product_witness: Option<ProductWitness>,
}

/// Koszul complex of a finite quotient, or the reduced model of a face ring.
pub fn koszul_model(a: &MonomialQuotient) -> Result<KoszulComplex> {
    if a.is_finite() {
        Ok(KoszulComplex::new(KoszulModel::koszul(a.clone())))
    } else if a.is_squarefree() {
        if a.n_vars > HOCHSTER_CAP {
            return Err(Error::CapExceeded(format!("{} variables (cap {HOCHSTER_CAP})", a.n_vars)));
        }
        Ok(KoszulComplex::new(KoszulModel::reduced(a.clone())?))
    } else {
        Err(Error::DomainError(
            "Koszul homology needs a finite dimensional or squarefree quotient".into(),
        ))
    }
}

pub fn koszul_homology(a: &MonomialQuotient) -> Result<KoszulHomology> {
    let model = koszul_model(a)?;
    let table = model_betti(&model)?;
    let (cup, witness) = cup_length_of(&model)?;
    Ok(KoszulHomology {
        table,
        model,
        trivial_multiplication: cup <= 1,
        product_witness: witness,
    })
}

/// `b_i = C(i+r-2, r-1)·C(n+r-1, i+r-1)` for `A_{n,r}`.
pub fn anr_betti_formula(n: u64, r: u64, i: u64) -> BigInt {
    if i == 0 {
        return BigInt::one();
    }
    binomial(i + r - 2, r - 1) * binomial(n + r - 1, i + r - 1)
}

/// Polarization: `x_i^e` becomes `x_{i,1}⋯x_{i,e}`.
pub struct Polarization {
    pub complex: SimplicialComplex,
    /// `(variable, copy)` of every vertex, both 1-based.
    pub vertices: Vec<(usize, u32)>,
}

pub fn polarization(a: &MonomialQuotient) -> Result<Polarization> {
    let width: Vec<u32> = (0..a.n_vars)
        .map(|i| a.generators.iter().map(|g| g[i]).max().unwrap_or(0).max(1))
        .collect();
    let mut start = vec![0usize; a.n_vars + 1];
    let mut vertices = Vec::new();
    for i in 0..a.n_vars {
        start[i + 1] = start[i] + width[i] as usize;
        for c in 1..=width[i] {
            vertices.push((i + 1, c));
        }
    }
    let nf: Vec<Vec<usize>> = a
        .generators
        .iter()
        .map(|g| {
            (0..a.n_vars)
                .flat_map(|i| (1..=g[i] as usize).map(move |c| (i, c)))
                .map(|(i, c)| start[i] + c)
                .collect()
        })
        .collect();
    let complex = SimplicialComplex::from_minimal_nonfaces(start[a.n_vars], &nf)?;
    Ok(Polarization { complex, vertices })
}

type Term = (usize, Vec<u32>, Scalar);

/// One step of a multigraded free resolution: generator degrees and images.
struct Step {
    degrees: Vec<Vec<u32>>,
    images: Vec<Vec<Term>>,
}

fn add_vec(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

/// Basis `(generator, monomial)` of a free module in one multidegree.
fn module_basis(a: &MonomialQuotient, degrees: &[Vec<u32>], alpha: &[u32]) -> Vec<(usize, Vec<u32>)> {
    let mut out = Vec::new();
    for (g, d) in degrees.iter().enumerate() {
        if let Some(c) = sub_vec(alpha, d) {
            if a.is_standard(&c) {
                out.push((g, c));
            }
        }
    }
    out
}

/// Matrix of `d` in multidegree `alpha`, from `src` generators into `tgt` generators.
fn step_matrix(a: &MonomialQuotient, step: &Step, tgt: &[Vec<u32>], alpha: &[u32]) -> (Vec<(usize, Vec<u32>)>, SparseMatrix) {
    let cols = module_basis(a, &step.degrees, alpha);
    let rows = module_basis(a, tgt, alpha);
    let index: HashMap<(usize, Vec<u32>), usize> = rows.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let mut columns = Vec::with_capacity(cols.len());
    for (g, c) in &cols {
        let mut v = SparseVec::new();
        for (h, m, s) in &step.images[*g] {
            let mono = add_vec(c, m);
            if let Some(i) = index.get(&(*h, mono)) {
                v.add_at(*i, s);
            }
        }
        columns.push(v);
    }
    (cols, SparseMatrix::from_columns(rows.len(), a.field, columns))
}

/// Multidegrees where a free module with these generators is nonzero.
fn support_degrees(degrees: &[Vec<u32>], standard: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut set = BTreeSet::new();
    for d in degrees {
        for c in standard {
            set.insert(add_vec(d, c));
        }
    }
    let mut v: Vec<Vec<u32>> = set.into_iter().collect();
    v.sort_by_key(|x| (x.iter().sum::<u32>(), x.clone()));
    v
}

/// Next step: minimal generators of the kernel of `step` (mapping into `tgt`).
fn next_step(a: &MonomialQuotient, step: &Step, tgt: &[Vec<u32>], standard: &[Vec<u32>]) -> Step {
    let mut next = Step {
        degrees: Vec::new(),
        images: Vec::new(),
    };
    for alpha in support_degrees(&step.degrees, standard) {
        let (cols, m) = step_matrix(a, step, tgt, &alpha);
        let kernel = m.kernel();
        if kernel.is_empty() {
            continue;
        }
        let index: HashMap<(usize, Vec<u32>), usize> = cols.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut span = EchelonBasis::new(cols.len(), a.field);
        for (g, d) in next.degrees.iter().enumerate() {
            let Some(c) = sub_vec(&alpha, d) else { continue };
            if !a.is_standard(&c) {
                continue;
            }
            let mut v = SparseVec::new();
            for (h, mono, s) in &next.images[g] {
                if let Some(i) = index.get(&(*h, add_vec(&c, mono))) {
                    v.add_at(*i, s);
                }
            }
            span.insert(v);
        }
        for k in kernel {
            if span.insert(k.clone()) {
                let image = k
                    .entries
                    .iter()
                    .map(|(i, s)| (cols[*i].0, cols[*i].1.clone(), s.clone()))
                    .collect();
                next.degrees.push(alpha.clone());
                next.images.push(image);
            }
        }
    }
    next
}

/// `dim Tor_i^A(k, k)` for `i = 0..=i_cap` by a minimal multigraded resolution.
pub fn minimal_resolution_betti(a: &MonomialQuotient, i_cap: usize) -> Result<Vec<usize>> {
    minimal_resolution_betti_capped(a, i_cap, RESOLUTION_CAP)
}

pub fn minimal_resolution_betti_capped(a: &MonomialQuotient, i_cap: usize, cap: usize) -> Result<Vec<usize>> {
    if i_cap > cap {
        return Err(Error::CapExceeded(format!("homological index {i_cap} (cap {cap})")));
    }
    let standard = a.standard_monomials()?;
    let n = a.n_vars;
    let zero = vec![0u32; n];
    let mut out = vec![1usize];
    let mut prev_degrees = vec![zero.clone()];
    let mut step = Step {
        degrees: Vec::new(),
        images: Vec::new(),
    };
    for j in 0..n {
        let mut e = zero.clone();
        e[j] = 1;
        if a.is_standard(&e) {
            step.degrees.push(e.clone());
            step.images.push(vec![(0, e, a.field.one())]);
        }
    }
    for _ in 1..=i_cap {
        out.push(step.degrees.len());
        let next = next_step(a, &step, &prev_degrees, &standard);
        prev_degrees = step.degrees;
        step = next;
    }
    Ok(out)
}

/// Truncated integer power series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSeries {
    #[serde(serialize_with = "crate::io::bigints_as_strings")]
    pub coefficients: Vec<BigInt>,
}

impl PowerSeries {
    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn from_usizes(v: &[usize]) -> Self {
        PowerSeries {
            coefficients: v.iter().map(|x| BigInt::from(*x)).collect(),
        }
    }

    /// Coefficientwise `self ≤ other` up to the shorter truncation.
    pub fn dominated_by(&self, other: &PowerSeries) -> bool {
        self.coefficients.iter().zip(&other.coefficients).all(|(a, b)| a <= b)
    }
}

/// Expansion of `(1+t)^m / (1 - Σ_{i≥1} b_i t^{i+1})` up to `t^n`.
pub fn serre_bound(m: usize, betti: &[usize], n: usize) -> PowerSeries {
    let num: Vec<BigInt> = (0..=n as u64).map(|k| binomial(m as u64, k)).collect();
    let mut den = vec![BigInt::zero(); n + 1];
    den[0] = BigInt::one();
    for (i, b) in betti.iter().enumerate().skip(1) {
        if i + 1 <= n {
            den[i + 1] -= BigInt::from(*b);
        }
    }
    let mut q = vec![BigInt::zero(); n + 1];
    for k in 0..=n {
        let mut acc = num[k].clone();
        for j in 1..=k {
            acc -= &den[j] * &q[k - j];
        }
        q[k] = acc;
    }
    PowerSeries { coefficients: q }
}

/// Comparison of the Poincaré series with the Serre bound.
#[derive(Clone, Debug, Serialize)]
pub struct GolodSeriesCheck {
    pub poincare: PowerSeries,
    pub bound: PowerSeries,
    pub dominated: bool,
    pub equal: bool,
}

pub fn golod_series_check(a: &MonomialQuotient, n: usize) -> Result<GolodSeriesCheck> {
    let betti = koszul_homology(a)?.table.totals();
    let poincare = PowerSeries::from_usizes(&minimal_resolution_betti(a, n)?);
    let bound = serre_bound(a.n_vars, &betti, n);
    Ok(GolodSeriesCheck {
        dominated: poincare.dominated_by(&bound),
        equal: poincare == bound,
        poincare,
        bound,
    })
}

/// Total Betti numbers by homological index, from the multigraded table.
pub fn total_betti(t: &BettiTable) -> BTreeMap<usize, usize> {
    t.totals().into_iter().enumerate().filter(|(_, d)| *d > 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::anr;
    use crate::linalg::Field;

    #[test]
    fn serre_expansion_of_square_zero() {
        // (1+t)²/(1-3t²-2t³) = 1/(1-2t)
        let s = serre_bound(2, &[1, 3, 2], 6);
        let want: Vec<BigInt> = (0..=6).map(|k| BigInt::from(1u64 << k)).collect();
        assert_eq!(s.coefficients, want);
    }

    #[test]
    fn resolution_of_dual_numbers() {
        let a = MonomialQuotient::new(1, vec![vec![2]], Field::Rational).unwrap();
        assert_eq!(minimal_resolution_betti(&a, 6).unwrap(), vec![1; 7]);
        let a22 = anr(2, 2, Field::Rational).unwrap();
        assert_eq!(minimal_resolution_betti(&a22, 5).unwrap(), vec![1, 2, 4, 8, 16, 32]);
    }

    #[test]
    fn polarize_square() {
        let a = MonomialQuotient::new(1, vec![vec![2]], Field::Rational).unwrap();
        let p = polarization(&a).unwrap();
        assert_eq!(p.complex.m(), 2);
        assert_eq!(p.complex.minimal_nonfaces(), vec![vec![1, 2]]);
    }
}
