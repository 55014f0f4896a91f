use massey_core::face::{hochster_table, SimplicialComplex};
use massey_core::generators::{anr, cube, dodecahedron_nerve, multiwedge, polygon, qn, qn_support, qn_truncations};
use massey_core::Field;

const Q: Field = Field::Rational;

#[test]
fn shapes() {
    assert_eq!(cube(3).unwrap().f_vector(), vec![1, 6, 12, 8]);
    assert_eq!(polygon(7).unwrap().f_vector(), vec![1, 7, 7]);
    assert_eq!(dodecahedron_nerve().unwrap().m(), 12);
    assert_eq!(qn_truncations(4).len(), 5);
    assert_eq!(qn(4).unwrap().m(), 13);
    assert_eq!(qn_support(3, 2), 0b10010);
    for n in 2..=4 {
        let k = qn(n).unwrap();
        assert!(k.is_flag());
        assert_eq!(k.dim() as usize, n - 1);
    }
}

#[test]
fn polygon_betti_numbers() {
    // the moment-angle manifold of a polygon is a closed manifold of dimension m + 2
    for m in 4..=7 {
        let t = hochster_table(&polygon(m).unwrap(), Q).unwrap();
        let totals = t.totals();
        assert_eq!(totals.first(), Some(&1));
        assert_eq!(totals.last(), Some(&1));
        assert_eq!(totals.len(), m - 1);
    }
}

#[test]
fn multiwedge_of_a_point_pair() {
    let k = SimplicialComplex::from_minimal_nonfaces(2, &[vec![1, 2]]).unwrap();
    let w = multiwedge(&k, &[2, 1]).unwrap();
    assert_eq!(w.m(), 3);
    assert_eq!(w.minimal_nonfaces(), vec![vec![1, 2, 3]]);
    assert!(multiwedge(&k, &[1]).is_err());
    assert!(multiwedge(&k, &[0, 1]).is_err());
}

#[test]
fn anr_shapes() {
    assert_eq!(anr(3, 3, Q).unwrap().generators.len(), 10);
    assert!(anr(2, 1, Q).is_err());
    assert!(anr(0, 2, Q).is_err());
}
