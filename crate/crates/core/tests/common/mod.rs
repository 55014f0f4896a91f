#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use massey_core::dga::{Cochain, Complex, Dga, MultiDegree};
use massey_core::face::{missing_edge_class, rk_model, to_rk, Graph, SimplicialComplex};
use massey_core::lie::{ce_window, d1, d_minus1, form, CeWindow, GradedLie};
use massey_core::massey::{defining_family, k_step_massey, massey_product, FormalConnection, MasseyOptions, Triviality};
use massey_core::{Field, Scalar};

pub const Q: Field = Field::Rational;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(rng: &mut ChaCha8Rng, f: Field) -> Scalar {
    f.from_i64(rng.gen_range(-3..=3))
}

pub fn nonzero(rng: &mut ChaCha8Rng, f: Field) -> Scalar {
    loop {
        let s = small(rng, f);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_cochain<A: Dga>(cx: &Complex<A>, deg: &MultiDegree, rng: &mut ChaCha8Rng) -> Cochain<A::Mono> {
    let mut c = Cochain::zero();
    for m in cx.basis(deg).unwrap_or_default() {
        if rng.gen_bool(0.5) {
            c.add_term(m, &small(rng, cx.field()));
        }
    }
    c
}

pub fn witt(w: usize) -> CeWindow {
    ce_window(GradedLie::witt_plus(w, Q).unwrap(), 4, w as i32).unwrap()
}

pub fn m0(w: usize) -> CeWindow {
    ce_window(GradedLie::m0(w, Q).unwrap(), 4, w as i32).unwrap()
}

/// Random complex on `m` vertices from random non-faces of size 2 or 3.
pub fn random_complex(m: usize, rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let count = rng.gen_range(0..=m + 1);
    let mut nf = Vec::new();
    for _ in 0..count {
        let size = rng.gen_range(2..=3.min(m));
        let mut s: Vec<usize> = Vec::new();
        while s.len() < size {
            let v = rng.gen_range(1..=m);
            if !s.contains(&v) {
                s.push(v);
            }
        }
        nf.push(s);
    }
    SimplicialComplex::from_minimal_nonfaces(m, &nf).unwrap()
}

/// Pick a random multidegree with the given cohomological degree.
fn random_degree<A: Dga>(cx: &Complex<A>, q: i32, rng: &mut ChaCha8Rng, aux_cap: i32) -> Option<MultiDegree> {
    let ds: Vec<MultiDegree> = cx
        .alg
        .degrees(q)
        .ok()?
        .into_iter()
        .filter(|d| d.aux.iter().sum::<i32>() <= aux_cap)
        .collect();
    if ds.is_empty() {
        None
    } else {
        Some(ds[rng.gen_range(0..ds.len())].clone())
    }
}

fn sign(e: i32) -> Scalar {
    Q.from_i64(if e % 2 == 0 { 1 } else { -1 })
}

fn dga_checks<A: Dga>(cx: &Complex<A>, rng: &mut ChaCha8Rng, aux_cap: i32, which: &str) -> Check {
    let p = rng.gen_range(0..=2);
    let q = rng.gen_range(0..=1);
    let (Some(da), Some(db)) = (random_degree(cx, p, rng, aux_cap), random_degree(cx, q, rng, aux_cap)) else {
        return Ok(());
    };
    let a = random_cochain(cx, &da, rng);
    let b = random_cochain(cx, &db, rng);
    if a.terms.is_empty() || b.terms.is_empty() {
        return Ok(());
    }
    let ab = cx.wedge(&a, &b);
    match which {
        "d2" => {
            if !cx.d(&cx.d(&a)).is_zero() {
                return Err(format!("d² ≠ 0 on {}", cx.format(&a)));
            }
        }
        "leibniz" => {
            let lhs = cx.d(&ab);
            let rhs = cx.wedge(&cx.d(&a), &b).add(&cx.wedge(&a, &cx.d(&b)).scale(&sign(p)));
            if lhs != rhs {
                return Err(format!("Leibniz fails for {} and {}", cx.format(&a), cx.format(&b)));
            }
        }
        "commutative" => {
            let ba = cx.wedge(&b, &a).scale(&sign(p * q));
            if ab != ba {
                return Err(format!("graded commutativity fails for {} and {}", cx.format(&a), cx.format(&b)));
            }
        }
        _ => unreachable!(),
    }
    Ok(())
}

fn on_all_dgas(seed: u64, which: &str) -> Check {
    let mut r = rng(seed);
    dga_checks(&witt(10), &mut r, 10, which)?;
    dga_checks(&m0(10), &mut r, 10, which)?;
    let k = random_complex(5, &mut r);
    let model = rk_model(&k, Q).unwrap();
    dga_checks(&model, &mut r, 5, which)
}

pub fn prop_d_squared(seed: u64) -> Check {
    on_all_dgas(seed, "d2")
}

pub fn prop_leibniz(seed: u64) -> Check {
    on_all_dgas(seed, "leibniz")
}

pub fn prop_graded_commutative(seed: u64) -> Check {
    on_all_dgas(seed, "commutative")
}

/// `dμ = μ̄·A + A·μ` for a random connection of 1-forms.
pub fn prop_bianchi(seed: u64) -> Check {
    let mut r = rng(seed);
    for cx in [witt(10), m0(10)] {
        let n = r.gen_range(2..=4);
        let mut a = FormalConnection::zero(n);
        for i in 0..=n {
            for j in i + 1..=n {
                let w = r.gen_range(1..=3);
                a.set(i, j, random_cochain(&cx, &MultiDegree::new(1, vec![w]), &mut r));
            }
        }
        let mu = a.mc_defect(&cx);
        for i in 0..=n {
            for j in i + 1..=n {
                let mut rhs = Cochain::zero();
                for k in i + 1..j {
                    rhs = rhs.add(&cx.wedge(&cx.bar(&mu[i][k]), a.get(k, j)));
                    rhs = rhs.add(&cx.wedge(a.get(i, k), &mu[k][j]));
                }
                if cx.d(&mu[i][j]) != rhs {
                    return Err(format!("Bianchi identity fails at ({i},{j})"));
                }
            }
        }
    }
    Ok(())
}

/// Random 1-dimensional classes `αe¹ + βe²`.
pub fn random_line_classes(n: usize, rng: &mut ChaCha8Rng) -> Vec<Cochain<u64>> {
    (0..n)
        .map(|_| form(&[1], small(rng, Q)).add(&form(&[2], small(rng, Q))))
        .filter(|c| !c.is_zero())
        .collect()
}

fn system_checks<A: Dga>(cx: &Complex<A>, classes: &[Cochain<A::Mono>], r: &mut ChaCha8Rng, scaling: bool) -> Check {
    let fam = defining_family(cx, classes, &MasseyOptions::default()).map_err(|e| e.to_string())?;
    if fam.undefined.is_some() {
        return Ok(());
    }
    let point: BTreeMap<u32, Scalar> = (0..fam.nparams).map(|v| (v, small(r, Q))).collect();
    let a = fam.at(&point, Q);
    if !a.defect_in_corner(cx) {
        return Err("defining system has defect off the corner".into());
    }
    let c = a.related_cocycle(cx);
    if !cx.is_cocycle(&c) {
        return Err(format!("related cocycle {} is not closed", cx.format(&c)));
    }
    if !scaling {
        return Ok(());
    }
    // Diagonal conjugation scales the class by c_nn / c_00.
    let n = a.order();
    let diag: Vec<Scalar> = (0..=n).map(|_| nonzero(r, Q)).collect();
    let mut m = vec![vec![Q.zero(); n + 1]; n + 1];
    for (i, d) in diag.iter().enumerate() {
        m[i][i] = d.clone();
    }
    let b = a.conjugate(&m, Q).map_err(|e| e.to_string())?;
    if !b.defect_in_corner(cx) {
        return Err("conjugated system has defect off the corner".into());
    }
    let lhs = cx.class_of(&b.related_cocycle(cx)).map_err(|e| e.to_string())?;
    let rhs = cx.class_of(&c).map_err(|e| e.to_string())?.scale(&diag[n].mul(&diag[0].inv()));
    if lhs != rhs {
        return Err("diagonal conjugation does not scale the class by c_nn/c_00".into());
    }
    Ok(())
}

/// Random flag complex on 6 vertices keeping `{1,2}`, `{3,4}`, `{5,6}` as non-edges.
pub fn random_three_pair_graph(r: &mut ChaCha8Rng) -> SimplicialComplex {
    let mut edges = Vec::new();
    for a in 1..=6usize {
        for b in a + 1..=6 {
            if (a + 1) / 2 != (b + 1) / 2 && r.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(6, &edges).unwrap().flag_complex().unwrap()
}

fn defining_system_checks(seed: u64, scaling: bool) -> Check {
    let mut r = rng(seed);
    let cx = m0(12);
    let n = r.gen_range(3..=4);
    let classes = random_line_classes(n, &mut r);
    if classes.len() == n {
        system_checks(&cx, &classes, &mut r, scaling)?;
    }
    let k = random_three_pair_graph(&mut r);
    let model = rk_model(&k, Q).unwrap();
    let classes: Vec<_> = [(1, 2), (3, 4), (5, 6)]
        .iter()
        .map(|(a, b)| to_rk(&k, &missing_edge_class(*a, *b, Q)))
        .collect();
    system_checks(&model, &classes, &mut r, scaling)
}

pub fn prop_cocycle_closed(seed: u64) -> Check {
    defining_system_checks(seed, false)
}

pub fn prop_conjugation_scaling(seed: u64) -> Check {
    defining_system_checks(seed, true)
}

/// Every consecutive proper sub-product of a defined product is defined and trivial.
pub fn prop_subproducts(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(3..=4);
    for cx in [m0(2 * n + 2), witt(2 * n + 2)] {
        let classes = random_line_classes(n, &mut r);
        if classes.len() < n {
            continue;
        }
        let o = massey_product(&cx, &classes, &MasseyOptions::default()).map_err(|e| e.to_string())?;
        if !o.status.is_defined() {
            continue;
        }
        for len in 2..n {
            for start in 0..=n - len {
                let sub = massey_product(&cx, &classes[start..start + len], &MasseyOptions::default())
                    .map_err(|e| e.to_string())?;
                if !sub.status.is_defined() || sub.triviality != Triviality::Trivial {
                    return Err(format!(
                        "sub-product {start}..{} of a defined product is {} / {}",
                        start + len,
                        sub.status.label(),
                        sub.triviality.label()
                    ));
                }
            }
        }
    }
    Ok(())
}

/// `⟨a_1, …, a_n⟩_1 = (ā_1 a_2, …, ā_{n-1} a_n)`.
pub fn prop_one_step(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(2..=5);
    let cx = if r.gen_bool(0.5) { m0(12) } else { witt(12) };
    let classes = random_line_classes(n, &mut r);
    if classes.len() < 2 {
        return Ok(());
    }
    let o = k_step_massey(&cx, &classes, 1, &MasseyOptions::default()).map_err(|e| e.to_string())?;
    let v = o.defined.ok_or("1-step product undefined")?;
    for i in 0..classes.len() - 1 {
        let cup = cx.class_of(&cx.wedge(&cx.bar(&classes[i]), &classes[i + 1])).map_err(|e| e.to_string())?;
        if v.classes[i] != cup {
            return Err(format!("1-step entry {i} differs from the cup product"));
        }
    }
    Ok(())
}

/// `D₁ D₋₁ = Id` on forms without `e¹`.
pub fn prop_d1_dminus1(seed: u64) -> Check {
    let mut r = rng(seed);
    let q = r.gen_range(1..=3);
    let mut x = Cochain::zero();
    for _ in 0..r.gen_range(1..=4) {
        let mut ix: Vec<usize> = Vec::new();
        while ix.len() < q {
            let i = r.gen_range(2..=10);
            if !ix.contains(&i) {
                ix.push(i);
            }
        }
        x = x.add(&form(&ix, small(&mut r, Q)));
    }
    let y = d_minus1(&x, Q).map_err(|e| e.to_string())?;
    let back = d1(&y, Q).map_err(|e| e.to_string())?;
    if back != x {
        return Err(format!("D1 D-1 x ≠ x for x = {x:?}"));
    }
    Ok(())
}

/// The differential of a monomial stays in its weight.
pub fn prop_weight_preserved(seed: u64) -> Check {
    let mut r = rng(seed);
    for cx in [witt(12), m0(12)] {
        let q = r.gen_range(0..=3);
        let Some(deg) = random_degree(&cx, q, &mut r, 12) else { continue };
        for m in cx.basis(&deg).unwrap() {
            for (t, _) in cx.alg.d_mono(&m) {
                let dt = cx.alg.degree(&t);
                if dt.aux != deg.aux || dt.coh != deg.coh + 1 {
                    return Err(format!("d moves {} from {:?} to {:?}", cx.alg.mono_name(&m), deg, dt));
                }
            }
        }
    }
    Ok(())
}

pub const PROPERTIES: [(&str, fn(u64) -> Check); 10] = [
    ("d_squared_zero", prop_d_squared),
    ("leibniz", prop_leibniz),
    ("graded_commutativity", prop_graded_commutative),
    ("bianchi", prop_bianchi),
    ("related_cocycle_closed", prop_cocycle_closed),
    ("diagonal_conjugation_scaling", prop_conjugation_scaling),
    ("subproduct_triviality", prop_subproducts),
    ("one_step_is_cup_tuple", prop_one_step),
    ("d1_dminus1_identity", prop_d1_dminus1),
    ("ce_weight_preserved", prop_weight_preserved),
];
