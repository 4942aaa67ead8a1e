//! The nine acceptance criteria, each run against its time limit.
//! Prints one PASS/FAIL line per criterion and fails if any criterion does.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use localroots::cartan::{cartan_classes, density_report, CartanKind, GroupSpec};
use localroots::global::{finite_order_coprimality, global_roots_all_orders, global_unipotent_power, Coprimality};
use localroots::lab::{
    eigenvalue_congruence_check, has_kth_root, one_parameter_sample, roots_all_orders,
    unipotent_kth_root, unipotent_power_bound, unipotent_tower, verify_tower, Certificate,
    CyclicClosure, Order, RootStatus,
};
use localroots::laurent::{LaurentProfile, LaurentScalar};
use localroots::local::{FieldDescriptor, LocalMatrix};
use localroots::matrix::Matrix;
use localroots::newton::{newton_polygon, CoeffValuation};
use localroots::padic::{rational_valuation, FieldProfile, PadicScalar};
use localroots::poly::Poly;
use localroots::ring::rat;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn criterion_1() {
    let spec = GroupSpec::worked_example();
    let classes = cartan_classes(&spec);
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[0].kind, CartanKind::Torus);
    assert_eq!((classes[1].kind, classes[1].order), (CartanKind::Cyclic, 4));
    for k in 1..=100u64 {
        let r = density_report(&spec, k).unwrap();
        assert_eq!(r.dense, k % 2 == 1, "k = {k}");
        assert!(r.oracle_agrees);
    }
}

fn criterion_2() {
    for p in [3u64, 5, 7] {
        let prof = FieldProfile::new(p, 5).unwrap();
        let modulus = p.pow(5);
        let units: Vec<u64> = (1..modulus).filter(|u| u % p != 0).collect();
        for k in 1..=12u64 {
            let powers: HashSet<u64> = units
                .iter()
                .map(|&y| (0..k).fold(1u64, |acc, _| acc * y % modulus))
                .collect();
            for &u in &units {
                let x = PadicScalar::from_parts(prof, 0, BigInt::from(u), 5).unwrap();
                let got = x
                    .kth_root_exists(k as i64)
                    .unwrap_or_else(|e| panic!("p={p} k={k} u={u}: {e}"));
                assert_eq!(got, powers.contains(&u), "p={p} k={k} u={u}");
            }
        }
    }
}

fn criterion_3() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = LocalMatrix::rational(random_unipotent(n, &mut rng));
        for k in 1..=10u64 {
            let w = unipotent_kth_root(&m, k).unwrap();
            assert_eq!(w.power(k as i64).unwrap(), m);
        }
        for _ in 0..20 {
            let s = random_rational(&mut rng, 20, 9);
            let t = random_rational(&mut rng, 20, 9);
            let lhs = one_parameter_sample(&m, &s)
                .unwrap()
                .mul(&one_parameter_sample(&m, &t).unwrap())
                .unwrap();
            assert_eq!(lhs, one_parameter_sample(&m, &(&s + &t)).unwrap());
        }
    }
}

fn perturbed(m: &LocalMatrix, p: u64, shift: u32) -> LocalMatrix {
    let n = m.n();
    let mut e = Matrix::zero(&(), n);
    e.set(0, n - 1, BigRational::from_integer(BigInt::from(p).pow(shift)));
    let bump = match m.field() {
        FieldDescriptor::Padic(prof) if m.as_rational().is_none() => {
            LocalMatrix::rational_over(*prof, e).to_padic_over(*prof)
        }
        FieldDescriptor::Padic(prof) => LocalMatrix::rational_over(*prof, e),
        _ => unreachable!(),
    };
    let neg_i = m.identity_like().sub(&m.identity_like()).unwrap().sub(&bump).unwrap();
    m.sub(&neg_i).unwrap()
}

fn criterion_4() {
    let mut rng = StdRng::seed_from_u64(4);
    for i in 0..50 {
        let p = [2u64, 3, 5, 7][i % 4];
        let n = rng.gen_range(2..=4);
        // Every fifth matrix carries digit entries instead of exact rationals.
        // Level-6 roots have entries of valuation near -2K, and their
        // determinants cancel 4K digits, so those get a larger precision.
        let digits = i % 5 == 4;
        let prof = FieldProfile::new(p, if digits { 96 } else { 48 }).unwrap();
        let exact = LocalMatrix::rational_over(prof, random_unipotent(n, &mut rng));
        let m = if digits { exact.to_padic_over(prof) } else { exact };
        let tower = unipotent_tower(&m, p, 6).unwrap();
        assert!(verify_tower(&tower), "tower {i} over Q_{p}");
        for k in 1..=6 {
            assert!(eigenvalue_congruence_check(&m, &BigUint::one(), k).unwrap(), "{i}: k = {k}");
        }
        let j = rng.gen_range(0..6);
        let mut bad = tower.clone();
        bad.witnesses[j] = perturbed(&bad.witnesses[j], p, rng.gen_range(0..5));
        assert!(!verify_tower(&bad), "perturbed tower {i} at level {j} passed");
        let mut short = tower.clone();
        short.witnesses.pop();
        assert!(!verify_tower(&short));
    }
}

/// Smallest `d` with `M^d = I` (to the working precision for digit entries).
fn brute_order(m: &LocalMatrix, limit: u64) -> u64 {
    let id = m.identity_like();
    let mut acc = m.clone();
    for d in 1..=limit {
        if acc.agrees_with(&id) {
            return d;
        }
        acc = acc.mul(m).unwrap();
    }
    panic!("no order up to {limit}");
}

fn criterion_5() {
    let q5 = FieldDescriptor::Padic(FieldProfile::new(5, 64).unwrap());
    let f2 = FieldDescriptor::Laurent(LaurentProfile::prime_field(2, 64).unwrap());
    let b5 = unipotent_power_bound(2, &q5).unwrap().value();
    let b2 = unipotent_power_bound(2, &f2).unwrap().value();
    assert_eq!(b5, BigUint::from(24u32));
    assert_eq!(b2, BigUint::from(6u32));
    let (b5, b2) = (b5.to_u64().unwrap(), b2.to_u64().unwrap());
    let mut rng = StdRng::seed_from_u64(5);
    let FieldDescriptor::Padic(prof5) = q5 else { unreachable!() };

    // Rational conjugates of cyclotomic companion matrices, seen in Q_5.
    let mut seen5 = 1u64;
    let degree_two: Vec<Vec<usize>> = vec![vec![3], vec![4], vec![6], vec![1, 1], vec![1, 2], vec![2, 2]];
    for _ in 0..200 {
        let pick = &degree_two[rng.gen_range(0..degree_two.len())];
        let blocks: Vec<QMat> = pick.iter().map(|&d| Matrix::companion(&cyclotomic(d)).unwrap()).collect();
        let c = blocks[1..].iter().fold(blocks[0].clone(), |acc, b| block_diag(&acc, b));
        let m = LocalMatrix::rational_over(prof5, conjugate(&c, &unimodular(2, &mut rng)));
        let d = brute_order(&m, 200);
        assert_eq!(b5 % d, 0, "order {d}");
        assert_eq!(CyclicClosure::of(&m).unwrap().order, Order::Finite(BigUint::from(d)));
        seen5 = seen5.lcm(&d);
    }
    // Teichmuller-type limits A^(25^64) of integer matrices invertible mod 5:
    // semisimple with eigenvalues of order dividing 4 or 24.
    let big = BigUint::from(25u32).pow(64);
    for _ in 0..150 {
        let a = loop {
            let a = QMat::from_fn(&(), 2, |_, _| rat(rng.gen_range(0..25), 1));
            if !(a.det().to_integer() % 5i32).is_zero() {
                break a;
            }
        };
        let t = LocalMatrix::rational_over(prof5, a).to_padic_over(prof5).power_big(&big);
        let d = brute_order(&t, 200);
        assert_eq!(b5 % d, 0, "order {d}");
        seen5 = seen5.lcm(&d);
    }
    assert_eq!(seen5, b5, "sampled orders do not reach the bound");

    // Over F_2((t)): semisimple (I or order 3) times a commuting unipotent.
    let FieldDescriptor::Laurent(prof2) = f2 else { unreachable!() };
    let lift = |x: &BigRational| LaurentScalar::from_i64(x.to_integer().to_i64().unwrap(), prof2.clone());
    let c3 = Matrix::companion(&cyclotomic(3)).unwrap().map(&prof2, lift);
    let mut seen2 = 1u64;
    for _ in 0..150 {
        let s = if rng.gen_bool(0.5) { c3.clone() } else { Matrix::identity(&prof2, 2) };
        let mut u = Matrix::identity(&prof2, 2);
        if s.is_identity() && rng.gen_bool(0.7) {
            u.set(0, 1, random_laurent_unit(&prof2, rng.gen_range(0..4), &mut rng).shift(rng.gen_range(-2..3)));
        }
        let p = unimodular(2, &mut rng).map(&prof2, lift);
        let m = p.mul(&s.mul(&u)).mul(&p.inverse().unwrap());
        let m = LocalMatrix::laurent(m);
        let d = brute_order(&m, 50);
        assert_eq!(b2 % d, 0, "order {d}");
        assert_eq!(CyclicClosure::of(&m).unwrap().order, Order::Finite(BigUint::from(d)));
        seen2 = seen2.lcm(&d);
    }
    assert_eq!(seen2, b2);
}

fn criterion_6() {
    let prof = LaurentProfile::prime_field(2, 32).unwrap();
    let entry = |s: &str| LaurentScalar::parse(s, &prof).unwrap();
    let m = LocalMatrix::laurent(
        Matrix::from_rows(&prof, vec![vec![entry("1"), entry("t")], vec![entry("0"), entry("1")]]).unwrap(),
    );
    assert_eq!(has_kth_root(&m, 2).unwrap().status, RootStatus::No);
    let v = has_kth_root(&m, 3).unwrap();
    assert_eq!(v.status, RootStatus::Yes);
    assert_eq!(v.witness.unwrap().power(3).unwrap(), m);
    let all = roots_all_orders(&m).unwrap();
    assert!(!all.holds);
    let Certificate::Blocked { k, .. } = &all.certificate else { panic!("{all:?}") };
    assert_eq!(has_kth_root(&m, k.to_u64().unwrap()).unwrap().status, RootStatus::No);
    let id = roots_all_orders(&m.identity_like()).unwrap();
    assert!(id.holds);
    assert_eq!(id.certificate, Certificate::Identity);
}

fn criterion_7() {
    let mut rng = StdRng::seed_from_u64(7);
    for d in 2..=12usize {
        let c = Matrix::companion(&cyclotomic(d)).unwrap();
        let m = LocalMatrix::rational(conjugate(&c, &unimodular(euler_phi(d), &mut rng)));
        for q in [2u64, 3, 5, 7] {
            let coprime = d as u64 % q != 0;
            match finite_order_coprimality(&m, q, 4).unwrap() {
                Coprimality::Consistent { order, tower } => {
                    assert!(coprime, "d={d} q={q} reported consistent");
                    assert_eq!(order, BigUint::from(d));
                    assert_eq!(tower.witnesses.len(), 4);
                    let mut prev = m.clone();
                    for w in &tower.witnesses {
                        assert_eq!(w.power(q as i64).unwrap(), prev, "d={d} q={q}");
                        prev = w.clone();
                    }
                }
                Coprimality::Violated { order, .. } => {
                    assert!(!coprime, "d={d} q={q} reported violated");
                    assert_eq!(order, BigUint::from(d));
                }
            }
        }
    }
}

fn random_global_matrix(i: usize, rng: &mut StdRng) -> QMat {
    let invertible = |m: &QMat| !m.det().is_zero();
    match i % 5 {
        0 => loop {
            let n = rng.gen_range(2..=4);
            let m = QMat::from_fn(&(), n, |_, _| rat(rng.gen_range(-3..=3), 1));
            if invertible(&m) {
                break m;
            }
        },
        1 => random_unipotent(rng.gen_range(1..=5), rng),
        2 => {
            let d = [1usize, 2, 3, 4, 5, 6, 8, 10, 12][rng.gen_range(0..9)];
            conjugate(&Matrix::companion(&cyclotomic(d)).unwrap(), &unimodular(euler_phi(d), rng))
        }
        3 => {
            let d = [2usize, 3, 4, 6][rng.gen_range(0..4)];
            let c = Matrix::companion(&cyclotomic(d)).unwrap();
            let u = jordan(&[rng.gen_range(1..=3)]);
            let m = block_diag(&c, &u);
            conjugate(&m, &unimodular(m.n(), rng))
        }
        _ => loop {
            let n = rng.gen_range(2..=3);
            let m = QMat::from_fn(&(), n, |_, _| random_rational(rng, 4, 3));
            if invertible(&m) {
                break m;
            }
        },
    }
}

fn criterion_8() {
    let mut rng = StdRng::seed_from_u64(8);
    let primes = [2u64, 3, 5, 7, 11];
    for i in 0..50 {
        let q = random_global_matrix(i, &mut rng);
        let m = LocalMatrix::rational(q.clone());
        let report = global_unipotent_power(&m, &primes).unwrap();
        let defined: Vec<&BigUint> =
            report.per_prime.iter().filter_map(|e| e.unipotent_power_exponent.as_ref()).collect();
        assert!(defined.windows(2).all(|w| w[0] == w[1]), "{i}: {defined:?}");
        if let Some(r) = defined.first() {
            let r = r.to_u64().unwrap();
            assert!(unipotent_oracle(&q.pow_u64(r)), "{i}: M^{r} is not unipotent");
            for e in (1..r).filter(|e| r % e == 0) {
                assert!(!unipotent_oracle(&q.pow_u64(e)), "{i}: M^{e} already unipotent");
            }
        }
        let unipotent = unipotent_oracle(&q);
        assert_eq!(report.is_unipotent, unipotent, "{i}");
        assert_eq!(global_roots_all_orders(&m).unwrap().holds, unipotent, "{i}");
    }
}

fn slopes_of(coeffs: Vec<CoeffValuation>) -> Vec<BigRational> {
    newton_polygon(&coeffs).unwrap().slope_multiset()
}

fn criterion_9() {
    let mut rng = StdRng::seed_from_u64(9);
    for i in 0..200 {
        let p = [2u64, 3, 5, 7][i % 4];
        let deg = rng.gen_range(1..=6);
        let mut vals = Vec::new();
        let mut roots = Vec::new();
        for _ in 0..deg {
            let v = rng.gen_range(-2i32..=2);
            let unit = loop {
                let a = rng.gen_range(-60i64..=60);
                let b = rng.gen_range(1i64..=30);
                if a % p as i64 != 0 && b % p as i64 != 0 {
                    break rat(a, b);
                }
            };
            let scale = BigRational::from_integer(BigInt::from(p)).pow(v);
            roots.push(unit * scale);
            vals.push(rat(v as i64, 1));
        }
        vals.sort();
        let f = roots.iter().fold(Poly::one(&()), |acc, r| acc.mul(&Poly::linear(&(), r)));
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| rational_valuation(c, p).map_or(CoeffValuation::Infinite, CoeffValuation::Exact))
            .collect();
        assert_eq!(slopes_of(coeffs), vals, "p={p} roots={roots:?}");
        if i % 4 == 0 {
            // The same polygon from a conjugated diagonal matrix over Q_p.
            let diag = QMat::from_fn(&(), deg, |a, b| if a == b { roots[a].clone() } else { BigRational::zero() });
            let prof = FieldProfile::new(p, 40).unwrap();
            let m = LocalMatrix::rational_over(prof, conjugate(&diag, &unimodular(deg, &mut rng)));
            assert_eq!(m.newton_polygon().unwrap().slope_multiset(), vals);
        }
    }
    // Laurent roots t^v * u(t) over F_p((t)).
    for i in 0..100 {
        let p = [2u64, 3, 5][i % 3];
        let prof = LaurentProfile::prime_field(p, 40).unwrap();
        let deg = rng.gen_range(1..=5);
        let mut vals = Vec::new();
        let f = (0..deg).fold(Poly::one(&prof), |acc, _| {
            let v = rng.gen_range(-2i64..=2);
            vals.push(rat(v, 1));
            let r = random_laurent_unit(&prof, rng.gen_range(0..3), &mut rng).shift(v);
            acc.mul(&Poly::linear(&prof, &r))
        });
        vals.sort();
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| c.valuation().map_or(CoeffValuation::Infinite, CoeffValuation::Exact))
            .collect();
        assert_eq!(slopes_of(coeffs), vals, "F_{p}((t))");
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn(),
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "worked circle group: dense iff k odd, classes {torus, cyclic(4)}", limit: secs(1), run: criterion_1 },
        Criterion { id: 2, name: "scalar k-th root test against exhaustive powering mod p^5", limit: secs(60), run: criterion_2 },
        Criterion { id: 3, name: "unipotent k-th roots and one-parameter homomorphism", limit: secs(60), run: criterion_3 },
        Criterion { id: 4, name: "unipotent towers of depth 6 and eigenvalue congruences", limit: None, run: criterion_4 },
        Criterion { id: 5, name: "exponent bounds 24 and 6 against sampled finite orders", limit: secs(60), run: criterion_5 },
        Criterion { id: 6, name: "characteristic p rigidity of [[1,t],[0,1]]", limit: None, run: criterion_6 },
        Criterion { id: 7, name: "coprimality of order and root degree", limit: None, run: criterion_7 },
        Criterion { id: 8, name: "global consistency over primes 2..11", limit: secs(120), run: criterion_8 },
        Criterion { id: 9, name: "Newton polygon slopes of planted roots", limit: None, run: criterion_9 },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.id.to_string() == *f) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run));
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let ok = outcome.is_ok() && in_time;
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        let note = match (&outcome, in_time) {
            (Err(_), _) => " (assertion failed)",
            (Ok(_), false) => " (too slow)",
            _ => "",
        };
        println!(
            "criterion {}: {} [{}] {:.2} s{limit}{note}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            elapsed.as_secs_f64()
        );
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
