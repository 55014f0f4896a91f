mod common;

use massey_core::face::{
    cup_length, from_rk, golod_test, hochster_table, induced_cohomology, mask_of, rk_cohomology, rk_model,
    support_class, to_rk, zk_cup, Graph, SimplicialComplex,
};
use massey_core::resolution::koszul_homology;
use massey_core::ring::GolodVerdict;
use massey_core::Field;

use common::{random_complex, rng, Q};

fn square() -> SimplicialComplex {
    SimplicialComplex::from_facets(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 1]]).unwrap()
}

#[test]
fn square_is_a_product_of_spheres() {
    let k = square();
    let t = hochster_table(&k, Q).unwrap();
    assert_eq!(t.totals(), vec![1, 2, 1]);
    assert_eq!(t.get(1, &[1, 0, 1, 0]), 1);
    assert_eq!(t.get(1, &[0, 1, 0, 1]), 1);
    assert_eq!(t.get(2, &[1, 1, 1, 1]), 1);
    assert_eq!(cup_length(&k, Q).unwrap(), 2);
    assert!(matches!(golod_test(&k, Q, 3).unwrap().verdict, GolodVerdict::NotGolod { .. }));
}

#[test]
fn hochster_agrees_with_koszul_homology_of_the_face_ring() {
    let mut r = rng(21);
    for _ in 0..40 {
        let k = random_complex(5, &mut r);
        let h = hochster_table(&k, Q).unwrap();
        let kh = koszul_homology(&k.face_ring(Q).unwrap()).unwrap();
        assert_eq!(h.totals(), kh.table.totals(), "{:?}", k.minimal_nonfaces());
    }
}

#[test]
fn field_dependence_of_the_projective_plane() {
    // six-vertex triangulation of RP²
    let rp2 = SimplicialComplex::from_facets(
        6,
        &[
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 2, 6],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![2, 4, 5],
            vec![2, 4, 6],
            vec![3, 5, 6],
        ],
    )
    .unwrap();
    let full = mask_of(&[1, 2, 3, 4, 5, 6]);
    assert_eq!(induced_cohomology(&rp2, full, 1, Q).dim(), 0);
    assert_eq!(induced_cohomology(&rp2, full, 1, Field::prime(2).unwrap()).dim(), 1);
    let q = rk_cohomology(&rp2, Q).unwrap().table.totals();
    let f2 = rk_cohomology(&rp2, Field::prime(2).unwrap()).unwrap().table.totals();
    assert_ne!(q, f2);
}

#[test]
fn rk_round_trip_and_cup_on_disjoint_supports() {
    let mut r = rng(22);
    for _ in 0..20 {
        let k = random_complex(6, &mut r);
        let model = rk_model(&k, Q).unwrap();
        let a = support_class(&k, &[1, 2, 3], None, Q);
        let b = support_class(&k, &[4, 5, 6], None, Q);
        let (Ok(a), Ok(b)) = (a, b) else { continue };
        assert_eq!(from_rk(&to_rk(&k, &a), Q).unwrap(), a);
        let cup = to_rk(&k, &zk_cup(&k, &a, &b));
        let prod = model.wedge(&to_rk(&k, &a), &to_rk(&k, &b));
        assert_eq!(model.class_of(&cup).unwrap(), model.class_of(&prod).unwrap());
    }
}

#[test]
fn low_dimensional_golodness_is_cup_length_one() {
    let mut r = rng(23);
    let mut seen = [0usize; 2];
    for _ in 0..60 {
        let k = random_complex(6, &mut r);
        if k.dim() > 3 {
            continue;
        }
        let cl = cup_length(&k, Q).unwrap();
        let golod = matches!(golod_test(&k, Q, 4).unwrap().verdict, GolodVerdict::GolodUpToCap { .. });
        assert_eq!(cl <= 1, golod, "{:?}", k.minimal_nonfaces());
        seen[usize::from(golod)] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn chordality() {
    assert!(!Graph::cycle(4).unwrap().is_chordal());
    assert!(Graph::cycle(3).unwrap().is_chordal());
    let fan = Graph::from_edges(5, &[(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (3, 4), (4, 5)]).unwrap();
    assert!(fan.is_chordal());
    let k = Graph::cycle(5).unwrap().flag_complex().unwrap();
    assert!(k.is_flag());
    assert_eq!(k.f_vector(), vec![1, 5, 5]);
}

#[test]
fn invalid_complexes_are_rejected() {
    assert!(SimplicialComplex::from_facets(3, &[vec![1, 4]]).is_err());
    assert!(SimplicialComplex::from_minimal_nonfaces(3, &[vec![0, 1]]).is_err());
    assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
}
