mod common;

use common::*;
use localroots::cartan::{density_gcd_oracle, is_power_dense, GroupSpec};
use localroots::lab::{has_kth_root, RootStatus};
use localroots::laurent::{LaurentProfile, LaurentScalar};
use localroots::local::LocalMatrix;
use localroots::matrix::Matrix;
use localroots::padic::{rational_valuation, FieldProfile, PadicScalar};
use localroots::poly::Poly;
use localroots::polyroots::rational_roots;
use localroots::ring::rat;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-500i64..500, 1i64..200).prop_map(|(a, b)| rat(a, b))
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn padic_field_operations_match_rationals(p in prime(), a in small_rational(), b in small_rational()) {
        let prof = FieldProfile::new(p, 30).unwrap();
        let x = PadicScalar::from_rational(&a, prof);
        let y = PadicScalar::from_rational(&b, prof);
        let sum = PadicScalar::from_rational(&(&a + &b), prof);
        prop_assert!(x.try_add(&y).unwrap().agrees_with(&sum));
        let prod = PadicScalar::from_rational(&(&a * &b), prof);
        prop_assert!(x.try_mul(&y).unwrap().agrees_with(&prod));
        if !b.is_zero() {
            let quot = PadicScalar::from_rational(&(&a / &b), prof);
            prop_assert!(x.try_div(&y).unwrap().agrees_with(&quot));
        }
        prop_assert_eq!(x.valuation(), rational_valuation(&a, p));
    }

    #[test]
    fn planted_rational_roots_are_found(roots in prop::collection::vec(small_rational(), 1..6)) {
        let f = roots.iter().fold(Poly::one(&()), |acc, r| acc.mul(&Poly::linear(&(), r)));
        let found = rational_roots(&f);
        let mut expect = roots.clone();
        expect.sort();
        let flat: Vec<BigRational> = found
            .iter()
            .flat_map(|(r, m)| std::iter::repeat_n(r.clone(), *m))
            .collect();
        prop_assert_eq!(flat, expect);
    }

    #[test]
    fn rational_matrix_json_round_trips(entries in prop::collection::vec(small_rational(), 9)) {
        let m = LocalMatrix::rational(Matrix::from_fn(&(), 3, |i, j| entries[3 * i + j].clone()));
        let text = serde_json::to_string(&m.to_json()).unwrap();
        prop_assert_eq!(LocalMatrix::from_json_str(&text, None).unwrap(), m);
    }

    #[test]
    fn laurent_matrix_json_round_trips(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let prof = LaurentProfile::prime_field(p, 16).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let m = Matrix::from_fn(&prof, 2, |i, j| {
            random_laurent_unit(&prof, 3, &mut rng).shift(i as i64 - j as i64)
        });
        let m = LocalMatrix::laurent(m);
        let text = serde_json::to_string(&m.to_json()).unwrap();
        prop_assert_eq!(LocalMatrix::from_json_str(&text, None).unwrap(), m);
    }

    #[test]
    fn laurent_division_inverts_multiplication(seed in any::<u64>()) {
        let prof = LaurentProfile::prime_field(3, 20).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let a: LaurentScalar = random_laurent_unit(&prof, 4, &mut rng).shift(-2);
        let b = random_laurent_unit(&prof, 2, &mut rng).shift(1);
        let back = a.try_mul(&b).unwrap().try_div(&b).unwrap();
        prop_assert!(back.try_sub(&a).unwrap().is_zero());
    }

    #[test]
    fn density_agrees_with_gcd_rule(half in 1u64..8, twice in 0i64..2, c in 0i64..15, k in 1u64..60) {
        let spec = GroupSpec::new(2 * half, Rational64::new(twice, 2), 2 * c).unwrap();
        prop_assert_eq!(is_power_dense(&spec, k), density_gcd_oracle(&spec, k));
    }
}

#[test]
fn split_semisimple_perfect_powers_have_roots() {
    let mut rng = StdRng::seed_from_u64(17);
    for trial in 0..40 {
        let k = 2 + trial % 4;
        let n = 1 + trial % 4;
        // Distinct k-th powers on the diagonal keep M non-derogatory.
        let diag = QMat::from_fn(&(), n, |i, j| {
            if i == j {
                let base = rat(i as i64 + 2, if trial % 2 == 0 { 1 } else { 3 });
                (0..k).fold(rat(1, 1), |acc, _| acc * &base)
            } else {
                BigRational::zero()
            }
        });
        let m = LocalMatrix::rational(conjugate(&diag, &unimodular(n, &mut rng)));
        let v = has_kth_root(&m, k as u64).unwrap();
        assert_eq!(v.status, RootStatus::Yes, "trial {trial}: {}", v.reason);
        assert_eq!(v.witness.unwrap().power(k as i64).unwrap(), m);
    }
}

#[test]
fn non_powers_on_the_diagonal_have_no_roots() {
    let mut rng = StdRng::seed_from_u64(18);
    for n in 1..=4 {
        // 2 is not a square in Q, and the eigenvalues are distinct.
        let diag = QMat::from_fn(&(), n, |i, j| {
            if i == j {
                rat(2 * (i as i64 + 1) * (i as i64 + 1), 1)
            } else {
                BigRational::zero()
            }
        });
        let m = LocalMatrix::rational(conjugate(&diag, &unimodular(n, &mut rng)));
        assert_eq!(has_kth_root(&m, 2).unwrap().status, RootStatus::No);
    }
}
