//! Random matrix generators shared by the integration suites.
#![allow(dead_code)]

use localroots::laurent::{LaurentProfile, LaurentScalar};
use localroots::matrix::Matrix;
use localroots::poly::Poly;
use localroots::ring::rat;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

pub type QMat = Matrix<BigRational>;

/// `L * U` with unit diagonals and small integer entries: determinant 1.
pub fn unimodular(n: usize, rng: &mut StdRng) -> QMat {
    let lower = QMat::from_fn(&(), n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => BigRational::one(),
        std::cmp::Ordering::Greater => rat(rng.gen_range(-2..=2), 1),
        std::cmp::Ordering::Less => BigRational::zero(),
    });
    let upper = QMat::from_fn(&(), n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => BigRational::one(),
        std::cmp::Ordering::Less => rat(rng.gen_range(-2..=2), 1),
        std::cmp::Ordering::Greater => BigRational::zero(),
    });
    lower.mul(&upper)
}

pub fn conjugate(m: &QMat, p: &QMat) -> QMat {
    p.mul(m).mul(&p.inverse().expect("determinant 1"))
}

pub fn random_partition(n: usize, rng: &mut StdRng) -> Vec<usize> {
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        let b = rng.gen_range(1..=left);
        parts.push(b);
        left -= b;
    }
    parts
}

/// Unipotent Jordan form with the given block sizes.
pub fn jordan(blocks: &[usize]) -> QMat {
    let n = blocks.iter().sum();
    let mut m = QMat::identity(&(), n);
    let mut start = 0;
    for &b in blocks {
        for i in start..start + b - 1 {
            m.set(i, i + 1, BigRational::one());
        }
        start += b;
    }
    m
}

pub fn random_unipotent(n: usize, rng: &mut StdRng) -> QMat {
    conjugate(&jordan(&random_partition(n, rng)), &unimodular(n, rng))
}

pub fn block_diag(a: &QMat, b: &QMat) -> QMat {
    let (na, nb) = (a.n(), b.n());
    QMat::from_fn(&(), na + nb, |i, j| {
        if i < na && j < na {
            a.get(i, j).clone()
        } else if i >= na && j >= na {
            b.get(i - na, j - na).clone()
        } else {
            BigRational::zero()
        }
    })
}

/// Cyclotomic polynomials by division of `x^d - 1` by the smaller ones.
pub fn cyclotomic(d: usize) -> Poly<BigRational> {
    let mut f = Poly::monomial(&(), d).sub(&Poly::one(&()));
    for e in 1..d {
        if d % e == 0 {
            let (q, r) = f.div_rem(&cyclotomic(e)).unwrap();
            assert!(r.is_zero());
            f = q;
        }
    }
    f
}

pub fn euler_phi(d: usize) -> usize {
    (1..=d).filter(|&a| num_integer::gcd(a, d) == 1).count()
}

pub fn is_zero(m: &QMat) -> bool {
    m.entries().iter().all(|x| x.is_zero())
}

/// `(M - I)^n = 0`, by direct powering.
pub fn unipotent_oracle(m: &QMat) -> bool {
    let n = m.n();
    is_zero(&m.sub(&QMat::identity(&(), n)).pow_u64(n as u64))
}

pub fn random_rational(rng: &mut StdRng, num: i64, den: i64) -> BigRational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// A random polynomial in `t` over `F_p` with nonzero constant term.
pub fn random_laurent_unit(prof: &LaurentProfile, degree: usize, rng: &mut StdRng) -> LaurentScalar {
    let q = prof.q() as u32;
    let mut coeffs: Vec<u32> = (0..=degree).map(|_| rng.gen_range(0..q)).collect();
    coeffs[0] = rng.gen_range(1..q);
    LaurentScalar::from_coeffs(prof.clone(), 0, coeffs, None)
}
