//! Logarithms, exponentials and fractional powers of unipotent matrices in
//! characteristic zero. All series terminate, so rational input stays exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::local::{Entries, LocalMatrix};
use crate::matrix::Matrix;
use crate::padic::{FieldProfile, PadicScalar};
use crate::poly::Poly;
use crate::ring::{zero_test, Scalar, ZeroTest};

/// Scalars of characteristic zero, where dividing by integers makes sense.
pub trait CharZero: Scalar {
    fn from_rational_in(ctx: &Self::Ctx, x: &BigRational) -> Self;
}

impl CharZero for BigRational {
    fn from_rational_in(_: &(), x: &BigRational) -> Self {
        x.clone()
    }
}

impl CharZero for PadicScalar {
    fn from_rational_in(ctx: &FieldProfile, x: &BigRational) -> Self {
        PadicScalar::from_rational(x, *ctx)
    }
}

/// `char_poly(M) = (x - 1)^n`, decided coefficientwise. Entries known only
/// to finite precision can make the answer undecidable.
pub fn is_unipotent(m: &LocalMatrix) -> Result<bool> {
    fn check<T: Scalar>(m: &Matrix<T>) -> Result<bool> {
        let d = m.char_poly().sub(&Poly::unipotent_char(m.ctx(), m.n()));
        let mut unknown = false;
        for c in d.coeffs() {
            match zero_test(c) {
                ZeroTest::NonZero => return Ok(false),
                ZeroTest::Unknown => unknown = true,
                ZeroTest::Zero => {}
            }
        }
        if unknown {
            return Err(Error::InsufficientPrecision(
                "characteristic polynomial agrees with (x-1)^n only to the working precision".into(),
            ));
        }
        Ok(true)
    }
    match m.entries() {
        Entries::Rational(a) => check(a),
        Entries::Padic(a) => check(a),
        Entries::Laurent(a) => check(a),
    }
}

fn nilpotent_log<T: CharZero>(u: &Matrix<T>) -> Matrix<T> {
    let ctx = u.ctx();
    let n = u.n();
    let nil = u.sub(&Matrix::identity(ctx, n));
    let mut term = nil.clone();
    let mut acc = Matrix::zero(ctx, n);
    for i in 1..n {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let c = T::from_rational_in(ctx, &BigRational::new(BigInt::from(sign), BigInt::from(i)));
        acc = acc.add(&term.scale(&c));
        term = term.mul(&nil);
    }
    acc
}

fn nilpotent_exp<T: CharZero>(x: &Matrix<T>) -> Matrix<T> {
    let ctx = x.ctx();
    let n = x.n();
    let mut acc = Matrix::identity(ctx, n);
    let mut term = Matrix::identity(ctx, n);
    let mut fact = BigInt::one();
    for i in 1..n {
        fact *= i;
        term = term.mul(x);
        let c = T::from_rational_in(ctx, &BigRational::new(BigInt::one(), fact.clone()));
        acc = acc.add(&term.scale(&c));
    }
    acc
}

/// An exact rational matrix written `A / d` with `A` integral, so that
/// powers cost integer products instead of a gcd per operation.
struct Scaled {
    n: usize,
    powers: Vec<Vec<BigInt>>,
    d: BigInt,
}

impl Scaled {
    /// `A^0, ..., A^top`.
    fn new(m: &Matrix<BigRational>, top: usize) -> Self {
        let n = m.n();
        let d = m.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let a: Vec<BigInt> = m.entries().iter().map(|x| x.numer() * (&d / x.denom())).collect();
        let identity: Vec<BigInt> = (0..n * n).map(|k| BigInt::from((k / n == k % n) as u8)).collect();
        let mut powers = vec![identity];
        for i in 1..=top {
            let next = if i == 1 { a.clone() } else { int_mul(&powers[i - 1], &a, n) };
            powers.push(next);
        }
        Scaled { n, powers, d }
    }

    fn nilpotent(&self) -> bool {
        self.powers[self.n].iter().all(|x| x.is_zero())
    }

    /// `sum c_i (A / d)^i` over one common denominator.
    fn eval(&self, coeffs: &[BigRational]) -> Matrix<BigRational> {
        let n = self.n;
        let mut dpow = BigInt::one();
        let mut denom = BigInt::one();
        let mut scaled_d = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            scaled_d.push(dpow.clone());
            if !c.is_zero() {
                denom = denom.lcm(&(c.denom() * &dpow));
            }
            dpow *= &self.d;
        }
        let weights: Vec<BigInt> = coeffs
            .iter()
            .zip(&scaled_d)
            .map(|(c, dp)| c.numer() * (&denom / (c.denom() * dp)))
            .collect();
        Matrix::from_fn(&(), n, |i, j| {
            let num = weights
                .iter()
                .zip(&self.powers)
                .filter(|(w, _)| !w.is_zero())
                .fold(BigInt::zero(), |acc, (w, p)| acc + w * &p[i * n + j]);
            BigRational::new(num, denom.clone())
        })
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * &b[k * n + j];
            }
        }
    }
    out
}

fn log_coeffs(n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|i| match i {
            0 => BigRational::zero(),
            _ => BigRational::new(BigInt::from(if i % 2 == 1 { 1 } else { -1 }), BigInt::from(i)),
        })
        .collect()
}

fn exp_coeffs(n: usize) -> Vec<BigRational> {
    let mut fact = BigInt::one();
    (0..n)
        .map(|i| {
            if i > 0 {
                fact *= i;
            }
            BigRational::new(BigInt::one(), fact.clone())
        })
        .collect()
}

/// `log(U)` for rational `U`, or `None` when `U` is not unipotent.
fn rational_log(u: &Matrix<BigRational>) -> Option<Matrix<BigRational>> {
    let n = u.n();
    let s = Scaled::new(&u.sub(&Matrix::identity(&(), n)), n);
    s.nilpotent().then(|| s.eval(&log_coeffs(n)))
}

fn rational_exp(x: &Matrix<BigRational>) -> Matrix<BigRational> {
    let n = x.n();
    Scaled::new(x, n - 1).eval(&exp_coeffs(n))
}

fn not_unipotent() -> Error {
    Error::Precondition("matrix is not unipotent".into())
}

fn require_unipotent_char_zero(u: &LocalMatrix) -> Result<()> {
    if u.field().characteristic() != 0 {
        return Err(Error::UnsupportedField(format!(
            "unipotent logarithms need characteristic 0, got {}",
            u.field().describe()
        )));
    }
    // Digit entries can only agree with a unipotent matrix to the working
    // precision; the constructions below are then valid to that precision.
    match is_unipotent(u) {
        Ok(true) | Err(Error::InsufficientPrecision(_)) => Ok(()),
        Ok(false) => Err(not_unipotent()),
        Err(e) => Err(e),
    }
}

/// The nilpotent `X` with `exp(X) = U`.
pub fn unipotent_log(u: &LocalMatrix) -> Result<LocalMatrix> {
    let entries = match u.entries() {
        Entries::Rational(a) => Entries::Rational(rational_log(a).ok_or_else(not_unipotent)?),
        Entries::Padic(a) => {
            require_unipotent_char_zero(u)?;
            Entries::Padic(nilpotent_log(a))
        }
        Entries::Laurent(_) => return require_unipotent_char_zero(u).and(Err(not_unipotent())),
    };
    LocalMatrix::new(u.field().clone(), entries)
}

/// `exp(X)` for nilpotent `X` in characteristic 0.
pub fn nilpotent_exponential(x: &LocalMatrix) -> Result<LocalMatrix> {
    if x.field().characteristic() != 0 {
        return Err(Error::UnsupportedField("exponential in positive characteristic".into()));
    }
    let zero = LocalMatrix::new(x.field().clone(), match x.entries() {
        Entries::Rational(a) => Entries::Rational(Matrix::zero(a.ctx(), a.n())),
        Entries::Padic(a) => Entries::Padic(Matrix::zero(a.ctx(), a.n())),
        Entries::Laurent(_) => unreachable!(),
    })?;
    if !x.power(x.n() as i64)?.agrees_with(&zero) {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    let entries = match x.entries() {
        Entries::Rational(a) => Entries::Rational(rational_exp(a)),
        Entries::Padic(a) => Entries::Padic(nilpotent_exp(a)),
        Entries::Laurent(_) => unreachable!(),
    };
    LocalMatrix::new(x.field().clone(), entries)
}

/// `Phi(t) = exp(t log U)`, the one-parameter subgroup through `U`.
pub fn one_parameter_sample(u: &LocalMatrix, t: &BigRational) -> Result<LocalMatrix> {
    let entries = match u.entries() {
        Entries::Rational(a) => {
            let log = rational_log(a).ok_or_else(not_unipotent)?;
            Entries::Rational(rational_exp(&log.scale(t)))
        }
        Entries::Laurent(_) => return require_unipotent_char_zero(u).and(Err(not_unipotent())),
        Entries::Padic(a) => {
            require_unipotent_char_zero(u)?;
            let t = PadicScalar::from_rational(t, *a.ctx());
            Entries::Padic(nilpotent_exp(&nilpotent_log(a).scale(&t)))
        }
    };
    LocalMatrix::new(u.field().clone(), entries)
}

/// `exp(log(U) / k)`: unipotent, commuting with `U`, with `k`-th power `U`.
pub fn unipotent_kth_root(u: &LocalMatrix, k: u64) -> Result<LocalMatrix> {
    if k == 0 {
        return Err(Error::Precondition("root order must be positive".into()));
    }
    one_parameter_sample(u, &BigRational::new(BigInt::one(), BigInt::from(k)))
}

/// True for the zero matrix of the right size (used by nilpotency checks).
pub fn is_zero_matrix(m: &LocalMatrix) -> bool {
    match m.entries() {
        Entries::Rational(a) => a.entries().iter().all(|x| x.is_zero()),
        Entries::Padic(a) => a.entries().iter().all(|x| x.vanishes()),
        Entries::Laurent(a) => a.entries().iter().all(|x| x.vanishes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn q(rows: &[&[i64]]) -> LocalMatrix {
        LocalMatrix::from_int_rows(rows).unwrap()
    }

    fn qr(rows: Vec<Vec<BigRational>>) -> LocalMatrix {
        LocalMatrix::rational(Matrix::from_rows(&(), rows).unwrap())
    }

    #[test]
    fn integer_path_matches_generic_series() {
        let u = q(&[&[1, 3, -2, 5], &[0, 1, 4, -1], &[0, 0, 1, 7], &[0, 0, 0, 1]]);
        let p = Matrix::from_fn(&(), 4, |i, j| rat(((i * 3 + j * 5) % 7) as i64 - 3, (j + 1) as i64));
        let p = p.add(&Matrix::scalar(&(), 4, rat(9, 1)));
        let a = p.mul(u.as_rational().unwrap()).mul(&p.inverse().unwrap());
        assert_eq!(rational_log(&a).unwrap(), nilpotent_log(&a));
        let x = nilpotent_log(&a).scale(&rat(-5, 3));
        assert_eq!(rational_exp(&x), nilpotent_exp(&x));
        assert!(rational_log(&a.scale(&rat(2, 1))).is_none());
    }

    #[test]
    fn unipotency() {
        assert!(is_unipotent(&q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap());
        assert!(is_unipotent(&q(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(!is_unipotent(&q(&[&[2, 0], &[0, 1]])).unwrap());
    }

    #[test]
    fn log_examples() {
        let i3 = q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(is_zero_matrix(&unipotent_log(&i3).unwrap()));
        assert_eq!(unipotent_log(&q(&[&[1, 1], &[0, 1]])).unwrap(), q(&[&[0, 1], &[0, 0]]));
        // J = I + N with N the shift: log J = N - N^2/2
        let j = q(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let expected = qr(vec![
            vec![rat(0, 1), rat(1, 1), rat(-1, 2)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(0, 1), rat(0, 1)],
        ]);
        let x = unipotent_log(&j).unwrap();
        assert_eq!(x, expected);
        assert_eq!(nilpotent_exponential(&x).unwrap(), j);
    }

    #[test]
    fn root_examples() {
        let u = q(&[&[1, 1], &[0, 1]]);
        let half = unipotent_kth_root(&u, 2).unwrap();
        assert_eq!(
            half,
            qr(vec![vec![rat(1, 1), rat(1, 2)], vec![rat(0, 1), rat(1, 1)]])
        );
        // I + N/3 - N^2/9
        let j = q(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let cube = unipotent_kth_root(&j, 3).unwrap();
        let expected = qr(vec![
            vec![rat(1, 1), rat(1, 3), rat(-1, 9)],
            vec![rat(0, 1), rat(1, 1), rat(1, 3)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        ]);
        assert_eq!(cube, expected);
        assert_eq!(cube.power(3).unwrap(), j);
        assert_eq!(
            unipotent_kth_root(&j, 6).unwrap(),
            unipotent_kth_root(&unipotent_kth_root(&j, 2).unwrap(), 3).unwrap()
        );
    }

    #[test]
    fn one_parameter_identities() {
        let u = q(&[&[1, 2, 5], &[0, 1, -3], &[0, 0, 1]]);
        assert!(one_parameter_sample(&u, &rat(0, 1)).unwrap().is_identity());
        assert_eq!(one_parameter_sample(&u, &rat(1, 1)).unwrap(), u);
        let (s, t) = (rat(2, 7), rat(-5, 3));
        let lhs = one_parameter_sample(&u, &(&s + &t)).unwrap();
        let rhs = one_parameter_sample(&u, &s)
            .unwrap()
            .mul(&one_parameter_sample(&u, &t).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn padic_entries_supported_and_laurent_rejected() {
        let prof = FieldProfile::new(5, 10).unwrap();
        let u = q(&[&[1, 1], &[0, 1]]).to_padic_over(prof);
        assert!(matches!(is_unipotent(&u), Err(Error::InsufficientPrecision(_))));
        let r = unipotent_kth_root(&u, 5).unwrap();
        assert!(r.power(5).unwrap().agrees_with(&u));
        let lp = crate::laurent::LaurentProfile::prime_field(2, 8).unwrap();
        let m = LocalMatrix::laurent(Matrix::identity(&lp, 2));
        assert!(matches!(unipotent_log(&m), Err(Error::UnsupportedField(_))));
    }
}
