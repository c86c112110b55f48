//! The Eisenstein and eta identities at full length.

use num_rational::Rational64;

use polysum::arith::{divisor_sigma, kronecker};
use polysum::modforms::{
    corollary_main_terms, eisenstein_e, eisenstein_e2, eisenstein_e_from_twists, eta4_coefficient_growth, eta_power,
    hexagonal2_positivity_failure, pentagonal_progression_failure, twist, verify_theta_split, MainTermFamily,
};
use polysum::polygonal::{count_squares_range, CongruenceInstance};

#[test]
fn e_series_from_twists_to_order_1000() {
    let e = eisenstein_e(1000).unwrap();
    assert_eq!(eisenstein_e_from_twists(1000).unwrap(), e);
    assert_eq!(e.integer_coeff(7).unwrap(), 8.into());
    assert_eq!(e.integer_coeff(6).unwrap(), 0.into());
}

#[test]
fn theta_split_to_order_400() {
    let r = verify_theta_split(400).unwrap();
    assert!(r.holds, "{r:?}");
    assert_eq!(r.compared, 400);
}

#[test]
fn progression_to_50() {
    assert_eq!(pentagonal_progression_failure(50).unwrap(), None);
}

#[test]
fn positivity_to_10000() {
    assert_eq!(hexagonal2_positivity_failure(10_000).unwrap(), None);
}

#[test]
fn eta4_growth_to_10000() {
    let g = eta4_coefficient_growth(10_000, 0.6).unwrap();
    assert!(g.constant < 2.0, "{g:?}");
    // Coefficients live on 24n + 4.
    let f = eta_power(24, 4, 10_001).unwrap();
    assert!(f.iter().all(|(n, _)| n % 24 == 4));
}

#[test]
fn cho_identity() {
    let inst = CongruenceInstance::all_integers(1, 2, [1; 4]).unwrap();
    let s = count_squares_range(&inst, 8 * 500 + 4).unwrap();
    for n in 0..=500u64 {
        assert_eq!(s[(8 * n + 4) as usize], 16 * divisor_sigma(2 * n + 1).unwrap(), "n={n}");
    }
}

#[test]
fn twist_by_principal_character() {
    let e2 = eisenstein_e2(60).unwrap();
    let t = twist(&e2, 9).unwrap();
    for n in 1..60i64 {
        let chi = (kronecker(-3, n) as i64).pow(2);
        assert_eq!(t.integer_coeff(n).unwrap(), (chi * -24 * divisor_sigma(n as u64).unwrap() as i64).into());
    }
}

#[test]
fn main_terms_against_divisor_sums() {
    for n in 0..200u64 {
        let s = divisor_sigma(2 * n + 1).unwrap() as i64;
        assert_eq!(corollary_main_terms(MainTermFamily::Hexagonal, n).unwrap(), Rational64::new(s, 16));
        let s = divisor_sigma(6 * n + 1).unwrap() as i64;
        assert_eq!(corollary_main_terms(MainTermFamily::Pentagonal, n).unwrap(), Rational64::new(s, 24));
        let m = 8 * n + 5;
        let t: i64 = (1..=m).filter(|d| m % d == 0).map(|d| kronecker(8, d as i64) as i64 * d as i64).sum();
        assert_eq!(corollary_main_terms(MainTermFamily::Hexagonal2, n).unwrap(), Rational64::new(-t, 64));
    }
}
