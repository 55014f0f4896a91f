//! Named complexes and rings: cubes, 2-truncated cubes, multiwedges, polygons,
//! the icosahedral sphere dual to the dodecahedron, and `k[x]/(x)^r`.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::face::{mask_of, vertices_of, SimplicialComplex};
use crate::linalg::Field;
use crate::ring::MonomialQuotient;

/// Boundary of the cross-polytope dual to the `n`-cube: non-faces `{i, n+i}`.
pub fn cube(n: usize) -> Result<SimplicialComplex> {
    if n == 0 {
        return Err(Error::InvalidInput("cube needs n ≥ 1".into()));
    }
    let nf: Vec<Vec<usize>> = (1..=n).map(|i| vec![i, n + i]).collect();
    SimplicialComplex::from_minimal_nonfaces(2 * n, &nf)
}

/// Truncation vertex `v_{k, n+k+i}` of `Q^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationVertex {
    pub k: usize,
    pub i: usize,
}

/// Truncation vertices of `Q^n` in the order they are numbered after `1..=2n`.
pub fn qn_truncations(n: usize) -> Vec<TruncationVertex> {
    let mut out = Vec::new();
    for i in 1..=n.saturating_sub(2) {
        for k in 1..=n - i {
            out.push(TruncationVertex { k, i });
        }
    }
    out
}

/// Nerve of the 2-truncated cube `Q^n`.
///
/// Vertices `1..=2n` are the cube facets, followed by [`qn_truncations`].
/// Non-faces: `{k, n+k+i}` for `0 ≤ i ≤ n-2`; a truncation `w = v_{k,n+k+i}` misses
/// `n+k+l` for `l ≠ i`, the facets `p` with `k < p ≤ k+i`, and every truncation
/// `v_{k',…}` chained to it by `k+i = k'` or `k'+i' = k`.
pub fn qn(n: usize) -> Result<SimplicialComplex> {
    if n < 2 {
        return Err(Error::InvalidInput("Q^n needs n ≥ 2".into()));
    }
    let trunc = qn_truncations(n);
    let w = |t: usize| 2 * n + 1 + t;
    let mut nf: Vec<Vec<usize>> = Vec::new();
    for i in 0..=n - 2 {
        for k in 1..=n - i {
            nf.push(vec![k, n + k + i]);
        }
    }
    for (a, t) in trunc.iter().enumerate() {
        for l in 0..=n - 2 {
            if l != t.i && n + t.k + l <= 2 * n {
                nf.push(vec![w(a), n + t.k + l]);
            }
        }
        for p in t.k + 1..=t.k + t.i {
            nf.push(vec![w(a), p]);
        }
        for (b, s) in trunc.iter().enumerate() {
            if b > a && (t.k + t.i == s.k || s.k + s.i == t.k) {
                nf.push(vec![w(a), w(b)]);
            }
        }
    }
    SimplicialComplex::from_minimal_nonfaces(2 * n + trunc.len(), &nf)
}

/// Simplicial multiwedge: vertex `i` becomes `j_i` copies and every minimal
/// non-face is replaced by the union of all copies of its vertices.
pub fn multiwedge(k: &SimplicialComplex, j: &[usize]) -> Result<SimplicialComplex> {
    if j.len() != k.m() {
        return Err(Error::InvalidInput(format!("J has length {} but K has {} vertices", j.len(), k.m())));
    }
    if j.contains(&0) {
        return Err(Error::InvalidInput("J entries must be positive".into()));
    }
    let mut start = vec![0usize; j.len() + 1];
    for (i, ji) in j.iter().enumerate() {
        start[i + 1] = start[i] + ji;
    }
    let nf: Vec<Vec<usize>> = k
        .minimal_nonface_masks()
        .iter()
        .map(|n| {
            vertices_of(*n)
                .iter()
                .flat_map(|v| start[v - 1] + 1..=start[*v])
                .collect()
        })
        .collect();
    SimplicialComplex::from_minimal_nonfaces(start[j.len()], &nf)
}

/// `k[x_1..x_n]/(x_1..x_n)^r`.
pub fn anr(n: usize, r: u32, field: Field) -> Result<MonomialQuotient> {
    if n == 0 || r < 2 {
        return Err(Error::InvalidInput("A_{n,r} needs n ≥ 1 and r ≥ 2".into()));
    }
    let mut gens = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    rec(0, r, &mut cur, &mut gens);
    MonomialQuotient::new(n, gens, field)
}

/// Boundary of an `m`-gon.
pub fn polygon(m: usize) -> Result<SimplicialComplex> {
    if m < 3 {
        return Err(Error::InvalidInput("a polygon needs m ≥ 3".into()));
    }
    let facets: Vec<Vec<usize>> = (1..=m).map(|i| vec![i, i % m + 1]).collect();
    SimplicialComplex::from_facets(m, &facets)
}

const ICOSAHEDRON: [[usize; 3]; 20] = [
    [1, 2, 3],
    [1, 2, 6],
    [1, 3, 4],
    [1, 4, 5],
    [1, 5, 6],
    [2, 3, 7],
    [2, 6, 11],
    [2, 7, 11],
    [3, 4, 8],
    [3, 7, 8],
    [4, 5, 9],
    [4, 8, 9],
    [5, 6, 10],
    [5, 9, 10],
    [6, 10, 11],
    [7, 8, 12],
    [7, 11, 12],
    [8, 9, 12],
    [9, 10, 12],
    [10, 11, 12],
];

const ICOSAHEDRON_SHA256: &str = "37f2029d1a2f2343a6ee99acde13d17eb2ef4929a96196ea0aef593b66d60b3f";

fn facet_digest(facets: &[[usize; 3]]) -> String {
    let text = facets
        .iter()
        .map(|f| f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Nerve of the dodecahedron: the boundary of the icosahedron on 12 vertices.
pub fn dodecahedron_nerve() -> Result<SimplicialComplex> {
    if facet_digest(&ICOSAHEDRON) != ICOSAHEDRON_SHA256 {
        return Err(Error::Internal("embedded icosahedron data is corrupted".into()));
    }
    let facets: Vec<Vec<usize>> = ICOSAHEDRON.iter().map(|f| f.to_vec()).collect();
    SimplicialComplex::from_facets(12, &facets)
}

/// Squarefree monomial quotient of a complex.
pub fn face_ring(k: &SimplicialComplex, field: Field) -> Result<MonomialQuotient> {
    k.face_ring(field)
}

/// Mask of the pair `{i, n+i}` used for the classes of `Q^n`.
pub fn qn_support(n: usize, i: usize) -> u32 {
    mask_of(&[i, n + i])
}
