mod common;

use std::collections::{BTreeMap, HashMap};

use massey_core::dga::{Cochain, MultiDegree};
use massey_core::lie::{ce_window, form, indices_of, m0_product, omega, strong_mc_check, GradedLie, M0Class};
use massey_core::massey::{
    defining_family, k_step_massey, lift_obstruction, massey_product, FormalConnection, MasseyOptions, MasseyStatus,
    Triviality,
};
use massey_core::{Field, Scalar};
use rand::Rng;

use common::{rng, small, witt, Q};

const P: i64 = 5;

/// Sign and mask of `e^{i1}∧…∧e^{iq}` in sorted order, or `None` if it repeats.
fn wedge_seq(ix: &[usize]) -> Option<(u64, i64)> {
    let mut mask = 0u64;
    let mut sign = 1;
    for &i in ix {
        if mask >> i & 1 == 1 {
            return None;
        }
        if (mask >> i).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= 1 << i;
    }
    Some((mask, sign))
}

fn indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Dense mod-`P` oracle for `dim H^q_w` of a Lie algebra given by `[e_i, e_j] = c(i, j) e_{i+j}`.
fn oracle_dim(bracket: fn(usize, usize) -> i64, q: usize, w: usize, top: usize) -> usize {
    let basis = |q: usize| -> Vec<u64> {
        (0u64..1 << (top + 1))
            .filter(|m| m & 1 == 0 && m.count_ones() as usize == q)
            .filter(|m| indices(*m).iter().sum::<usize>() == w)
            .collect()
    };
    let d = |m: u64| -> HashMap<u64, i64> {
        let ix = indices(m);
        let mut out = HashMap::new();
        for s in 0..ix.len() {
            let k = ix[s];
            for i in 1..k {
                let j = k - i;
                if i >= j {
                    continue;
                }
                let c = bracket(i, j);
                if c == 0 {
                    continue;
                }
                let mut seq = ix[..s].to_vec();
                seq.extend([i, j]);
                seq.extend(&ix[s + 1..]);
                if let Some((mm, sg)) = wedge_seq(&seq) {
                    let sign = if s % 2 == 0 { 1 } else { -1 };
                    *out.entry(mm).or_insert(0) += sign * sg * c;
                }
            }
        }
        out
    };
    let rank = |from: &[u64], to: &[u64]| -> usize {
        let pos: HashMap<u64, usize> = to.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut rows: Vec<Vec<i64>> = from
            .iter()
            .map(|m| {
                let mut row = vec![0; to.len()];
                for (t, c) in d(*m) {
                    row[pos[&t]] = c.rem_euclid(P);
                }
                row
            })
            .collect();
        let mut r = 0;
        for col in 0..to.len() {
            let Some(p) = (r..rows.len()).find(|i| rows[*i][col] != 0) else { continue };
            rows.swap(r, p);
            let inv = (1..P).find(|x| x * rows[r][col] % P == 1).unwrap();
            for i in 0..rows.len() {
                if i != r && rows[i][col] != 0 {
                    let f = rows[i][col] * inv % P;
                    for c in 0..to.len() {
                        rows[i][c] = (rows[i][c] - f * rows[r][c]).rem_euclid(P);
                    }
                }
            }
            r += 1;
        }
        r
    };
    let here = basis(q);
    let below = if q == 0 { vec![] } else { basis(q - 1) };
    let above = basis(q + 1);
    here.len() - rank(&here, &above) - rank(&below, &here)
}

fn m0_bracket(i: usize, j: usize) -> i64 {
    i64::from(i == 1 && j >= 2)
}

fn witt_bracket(i: usize, j: usize) -> i64 {
    j as i64 - i as i64
}

#[test]
fn cohomology_matches_dense_oracle_mod_5() {
    let f = Field::prime(5).unwrap();
    let top = 9;
    for (g, bracket) in [
        (GradedLie::m0(top, f).unwrap(), m0_bracket as fn(usize, usize) -> i64),
        (GradedLie::witt_plus(top, f).unwrap(), witt_bracket),
    ] {
        let cx = ce_window(g, 3, top as i32).unwrap();
        for q in 0..=3 {
            for w in 0..=top {
                let got = cx.cohomology_at(&MultiDegree::new(q as i32, vec![w as i32])).unwrap().dim();
                assert_eq!(got, oracle_dim(bracket, q, w, top), "H^{q}_{w}");
            }
        }
    }
}

#[test]
fn m0_products_agree_with_wedge() {
    let w = 16;
    let cx = ce_window(GradedLie::m0(w, Q).unwrap(), 5, w as i32).unwrap();
    let mut classes = vec![M0Class::E1, M0Class::E2];
    for k in 2..=6 {
        classes.push(M0Class::Omega(vec![k]));
    }
    classes.push(M0Class::Omega(vec![2, 4]));
    classes.push(M0Class::Omega(vec![3, 5]));
    for x in &classes {
        for y in &classes {
            let (cx_, cy) = (x.cochain(Q).unwrap(), y.cochain(Q).unwrap());
            let weight = |c: &Cochain<u64>| c.terms.keys().next().map_or(0, |m| indices_of(*m).iter().sum::<usize>());
            if weight(&cx_) + weight(&cy) > w {
                continue;
            }
            let wedge = cx.wedge(&cx_, &cy);
            let rule = m0_product(x, y, Q).unwrap();
            assert_eq!(
                cx.class_of(&wedge).unwrap(),
                cx.class_of(&rule).unwrap(),
                "{x:?} · {y:?}"
            );
        }
    }
}

#[test]
fn omega_forms_are_closed_in_high_degree() {
    let cx = ce_window(GradedLie::m0(26, Q).unwrap(), 5, 26).unwrap();
    for ix in [vec![3, 5], vec![2, 4, 6], vec![2, 3, 5, 7]] {
        let o = omega(&ix, Q).unwrap();
        assert!(cx.is_cocycle(&o.form), "{ix:?}");
        assert!(!cx.class_of(&o.form).unwrap().is_zero(), "{ix:?}");
    }
}

/// Evaluation of a 1-form on a basis vector.
fn eval(c: &Cochain<u64>, i: usize) -> Scalar {
    c.terms.get(&(1u64 << (i - 1))).cloned().unwrap_or_else(|| Q.zero())
}

/// Whether `e_i ↦ (a_{rs}(e_i))` is a Lie algebra homomorphism into upper-triangular matrices.
fn is_homomorphism(a: &FormalConnection<u64>, top: usize, bracket: fn(usize, usize) -> i64) -> bool {
    let n = a.order() + 1;
    let mat = |i: usize| -> Vec<Vec<Scalar>> {
        (0..n)
            .map(|r| (0..n).map(|s| if s > r { eval(a.get(r, s), i) } else { Q.zero() }).collect())
            .collect()
    };
    for i in 1..=top {
        for j in i + 1..=top {
            let (x, y) = (mat(i), mat(j));
            let c = bracket(i, j);
            let lhs: Vec<Vec<Scalar>> = if i + j <= top {
                mat(i + j).iter().map(|row| row.iter().map(|v| v.mul(&Q.from_i64(c))).collect()).collect()
            } else {
                vec![vec![Q.zero(); n]; n]
            };
            for r in 0..n {
                for s in 0..n {
                    let mut comm = Q.zero();
                    for t in 0..n {
                        comm = comm.add(&x[r][t].mul(&y[t][s])).sub(&y[r][t].mul(&x[t][s]));
                    }
                    if comm != lhs[r][s] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn strong_mc_matches_homomorphism_oracle() {
    let top = 6;
    let cx = ce_window(GradedLie::m0(top, Q).unwrap(), 3, top as i32).unwrap();
    let mut r = rng(3);
    let mut hits = 0;
    for trial in 0..300 {
        let n = r.gen_range(2..=3);
        let mut a = FormalConnection::zero(n);
        for i in 0..=n {
            for j in i + 1..=n {
                let mut c = Cochain::zero();
                for k in 1..=3 {
                    if r.gen_bool(0.4) {
                        c = c.add(&form(&[k], small(&mut r, Q)));
                    }
                }
                a.set(i, j, c);
            }
        }
        if trial % 3 == 0 {
            // ρ(e₁) = E₀₁, ρ(e₂) = E₁₂, ρ(e₃) = E₀₂ up to scaling
            let (s, t) = (small(&mut r, Q), small(&mut r, Q));
            a = FormalConnection::zero(2);
            a.set(0, 1, form(&[1], s.clone()));
            a.set(1, 2, form(&[2], t.clone()));
            a.set(0, 2, form(&[3], s.mul(&t)));
        }
        let got = strong_mc_check(&cx, &a).unwrap();
        let want = is_homomorphism(&a, top, m0_bracket);
        assert_eq!(got, want, "{:?}", a.entries);
        hits += usize::from(got);
    }
    assert!(hits >= 50);
    let mut bad = FormalConnection::zero(1);
    bad.set(0, 1, form(&[1, 2], Q.one()));
    assert!(strong_mc_check(&cx, &bad).is_err());
}

fn e(ix: &[usize]) -> Cochain<u64> {
    form(ix, Q.one())
}

#[test]
fn strict_value_is_independent_of_the_defining_system() {
    let cx = witt(8);
    let classes = [e(&[1]), e(&[2]), e(&[2])];
    let o = massey_product(&cx, &classes, &MasseyOptions::default()).unwrap();
    let MasseyStatus::DefinedStrict(v) = o.status else { panic!("not strict") };
    let fam = defining_family(&cx, &classes, &MasseyOptions::default()).unwrap();
    let mut r = rng(4);
    for _ in 0..10 {
        let point: BTreeMap<u32, Scalar> = (0..fam.nparams).map(|i| (i, small(&mut r, Q))).collect();
        let a = fam.at(&point, Q);
        assert_eq!(lift_obstruction(&cx, &a).unwrap(), v);
    }
}

#[test]
fn lift_obstruction_rejects_non_defining_systems() {
    let cx = witt(6);
    let mut a = FormalConnection::zero(3);
    a.set(0, 1, e(&[1]));
    a.set(1, 2, e(&[1]));
    a.set(2, 3, e(&[2]));
    assert!(lift_obstruction(&cx, &a).is_err());
}

#[test]
fn k_step_endpoints() {
    let cx = witt(8);
    let classes = [e(&[1]), e(&[2]), e(&[2])];
    let one = k_step_massey(&cx, &classes, 1, &MasseyOptions::default()).unwrap();
    let v = one.defined.expect("1-step is always defined");
    for (i, c) in v.classes.iter().enumerate() {
        let cup = cx.wedge(&cx.bar(&classes[i]), &classes[i + 1]);
        assert_eq!(*c, cx.class_of(&cup).unwrap());
    }
    assert_eq!(v.triviality, Triviality::Trivial);
    let two = k_step_massey(&cx, &classes, 2, &MasseyOptions::default()).unwrap();
    let corner = massey_product(&cx, &classes, &MasseyOptions::default()).unwrap();
    let MasseyStatus::DefinedStrict(value) = corner.status else { panic!() };
    let v = two.defined.unwrap();
    assert_eq!(v.classes, vec![value]);
    assert_eq!(v.triviality, Triviality::Nontrivial);
    assert!(k_step_massey(&cx, &classes, 3, &MasseyOptions::default()).is_err());
}

#[test]
fn trivial_k_step_lifts_to_the_next_step() {
    let cx = common::m0(10);
    let mut r = rng(5);
    let mut lifted = 0;
    for _ in 0..40 {
        let classes = common::random_line_classes(4, &mut r);
        if classes.len() < 4 {
            continue;
        }
        for k in 1..3 {
            let o = k_step_massey(&cx, &classes, k, &MasseyOptions::default()).unwrap();
            let Some(v) = o.defined else { break };
            if v.triviality != Triviality::Trivial {
                break;
            }
            let mu = v.witness.mc_defect(&cx);
            for d in 1..=k + 1 {
                for i in 0..=4 - d {
                    assert!(mu[i][i + d].is_zero(), "defect on diagonal {d} after lifting step {k}");
                }
            }
            let next = k_step_massey(&cx, &classes, k + 1, &MasseyOptions::default()).unwrap();
            assert!(next.defined.is_some(), "step {} undefined after trivial step {k}", k + 1);
            lifted += 1;
        }
    }
    assert!(lifted > 0);
}
