use num_bigint::BigInt;

use massey_core::generators::anr;
use massey_core::resolution::{golod_series_check, minimal_resolution_betti, serre_bound, PowerSeries};
use massey_core::ring::MonomialQuotient;
use massey_core::Field;

const Q: Field = Field::Rational;

/// Product of two series truncated at `n`.
fn times(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    (0..=n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|c| BigInt::from(*c)).collect()
}

#[test]
fn tensor_products_multiply_poincare_series() {
    let n = 6;
    // k[x]/(x²) has 1/(1-t), so k[x,y]/(x²,y²) has 1/(1-t)²
    let point = vec![1i64; n + 1];
    let a = MonomialQuotient::new(2, vec![vec![2, 0], vec![0, 2]], Q).unwrap();
    let p = minimal_resolution_betti(&a, n).unwrap();
    assert_eq!(p.iter().map(|c| *c as i64).collect::<Vec<_>>(), times(&point, &point, n));

    // (x,z)² in k[x,z] tensored with (y,w)² in k[y,w]
    let a22: Vec<i64> = minimal_resolution_betti(&anr(2, 2, Q).unwrap(), n).unwrap().iter().map(|c| *c as i64).collect();
    let gens = vec![
        vec![2, 0, 0, 0],
        vec![1, 0, 1, 0],
        vec![0, 0, 2, 0],
        vec![0, 2, 0, 0],
        vec![0, 1, 0, 1],
        vec![0, 0, 0, 2],
    ];
    let c = golod_series_check(&MonomialQuotient::new(4, gens, Q).unwrap(), n).unwrap();
    assert_eq!(c.poincare.coefficients, to_big(&times(&a22, &a22, n)));
    assert!(c.dominated && !c.equal);
}

#[test]
fn serre_bound_of_a_truncated_polynomial_ring() {
    let b = serre_bound(1, &[1, 1], 5);
    assert_eq!(b, PowerSeries { coefficients: to_big(&[1; 6]) });
    assert_eq!(serre_bound(2, &[1, 2, 1], 4).coefficients, to_big(&[1, 2, 3, 5, 8]));
    let c = golod_series_check(&MonomialQuotient::new(1, vec![vec![3]], Q).unwrap(), 5).unwrap();
    assert!(c.equal);
}

#[test]
fn prime_field_agrees_for_monomial_rings() {
    let gens = vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 3]];
    let q = minimal_resolution_betti(&MonomialQuotient::new(3, gens.clone(), Q).unwrap(), 4).unwrap();
    let f = minimal_resolution_betti(&MonomialQuotient::new(3, gens, Field::prime(3).unwrap()).unwrap(), 4).unwrap();
    assert_eq!(q, f);
    assert_eq!(q[1], 3);
    assert_eq!(q[2], 5 + 3);
}

#[test]
fn infinite_quotients_are_rejected() {
    let a = MonomialQuotient::new(2, vec![vec![1, 1]], Q).unwrap();
    assert!(minimal_resolution_betti(&a, 3).is_err());
    assert!(minimal_resolution_betti(&anr(2, 2, Q).unwrap(), 7).is_err());
}
