//! Distality, the least exponent making a matrix unipotent, eigenvalue
//! congruences of powers, and finite cyclic closures.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::bounds::{torsion_exponent_bound, unipotent_power_bound};
use super::unipotent::is_unipotent;
use crate::arith::{euler_phi, mod_inverse, Factored};
use crate::error::{Error, Result};
use crate::local::{Entries, FieldDescriptor, LocalMatrix};
use crate::matrix::Matrix;
use crate::padic::PadicScalar;
use crate::poly::Poly;
use crate::ring::{zero_test, Scalar, ZeroTest};

/// All eigenvalues have valuation 0, i.e. the Newton polygon of the
/// characteristic polynomial is flat.
pub fn is_distal(m: &LocalMatrix) -> Result<bool> {
    if *m.field() == FieldDescriptor::Rational {
        return Err(Error::UnsupportedField(
            "distality needs a valuation: view the matrix over Q_p".into(),
        ));
    }
    m.require_invertible()?;
    Ok(m.newton_polygon()?.is_flat())
}

/// `Phi_m` over `Q`.
fn cyclotomic(m: u64, cache: &mut Vec<(u64, Poly<BigRational>)>) -> Poly<BigRational> {
    if let Some((_, f)) = cache.iter().find(|(k, _)| *k == m) {
        return f.clone();
    }
    let mut f = Poly::monomial(&(), m as usize).sub(&Poly::one(&()));
    for d in 1..m {
        if m % d == 0 {
            let g = cyclotomic(d, cache);
            f = f.div_rem(&g).expect("monic divisor").0;
        }
    }
    cache.push((m, f.clone()));
    f
}

/// For a rational characteristic polynomial: the orders of the roots of
/// unity among its roots, or `None` if some root is not a root of unity.
pub fn cyclotomic_orders(f: &Poly<BigRational>) -> Option<Vec<u64>> {
    let n = f.degree()? as u64;
    let mut cache = Vec::new();
    let mut rest = f.clone();
    let mut orders = Vec::new();
    for m in 1..=2 * n * n {
        if euler_phi(m) > n {
            continue;
        }
        let phi = cyclotomic(m, &mut cache);
        loop {
            let (q, r) = rest.div_rem(&phi).expect("monic divisor");
            if !r.is_zero() {
                break;
            }
            rest = q;
            if !orders.contains(&m) {
                orders.push(m);
            }
        }
    }
    (rest.degree() == Some(0)).then_some(orders)
}

fn all_vanish<T: Scalar>(f: &Poly<T>) -> ZeroTest {
    let mut out = ZeroTest::Zero;
    for c in f.coeffs() {
        match zero_test(c) {
            ZeroTest::NonZero => return ZeroTest::NonZero,
            ZeroTest::Unknown => out = ZeroTest::Unknown,
            ZeroTest::Zero => {}
        }
    }
    out
}

/// `(x^d - 1)^n mod f`, classified as zero, nonzero or undecided.
fn power_unipotent_test<T: Scalar>(f: &Poly<T>, d: &BigUint) -> Result<ZeroTest> {
    let ctx = f.ctx();
    let n = f.degree().unwrap_or(0);
    let g = Poly::monomial(ctx, 1).pow_mod(d, f)?.sub(&Poly::one(ctx));
    let mut acc = Poly::one(ctx);
    for _ in 0..n {
        acc = acc.mul_mod(&g, f)?;
    }
    Ok(all_vanish(&acc))
}

fn search_divisors<T: Scalar>(f: &Poly<T>, bound: &Factored) -> Result<Option<BigUint>> {
    match power_unipotent_test(f, &bound.value())? {
        ZeroTest::NonZero => return Ok(None),
        ZeroTest::Unknown => {
            return Err(Error::InsufficientPrecision(
                "cannot tell whether the bounded power is unipotent".into(),
            ))
        }
        ZeroTest::Zero => {}
    }
    for d in bound.divisors() {
        match power_unipotent_test(f, &d)? {
            ZeroTest::Zero => return Ok(Some(d)),
            ZeroTest::NonZero => {}
            ZeroTest::Unknown => {
                return Err(Error::InsufficientPrecision(format!(
                    "cannot tell whether M^{d} is unipotent"
                )))
            }
        }
    }
    unreachable!("the bound itself passed")
}

/// The least `r` with `M^r` unipotent, or `None` if no power is unipotent.
///
/// Rational entries: the characteristic polynomial is split into cyclotomic
/// factors exactly. Otherwise the divisors of the bound `R` are searched in
/// increasing order after checking `R` itself; a non-flat Newton polygon
/// (or, over `F_q((t))`, a non-constant characteristic polynomial) rules out
/// every power at once.
pub fn unipotent_power_exponent(m: &LocalMatrix) -> Result<Option<BigUint>> {
    m.require_invertible()?;
    if let Some(a) = m.as_rational() {
        return Ok(cyclotomic_orders(&a.char_poly()).map(|orders| {
            orders
                .into_iter()
                .fold(BigUint::one(), |acc, d| acc.lcm(&BigUint::from(d)))
        }));
    }
    if !is_distal(m)? {
        return Ok(None);
    }
    let bound = unipotent_power_bound(m.n(), m.field())?.factored;
    match m.entries() {
        Entries::Padic(a) => search_divisors(&a.char_poly(), &bound),
        Entries::Laurent(a) => {
            let f = a.char_poly();
            // Roots of unity are algebraic over F_p, so the coefficients
            // of their characteristic polynomial lie in F_q.
            let known_nonconstant = f.coeffs().iter().any(|c| {
                let lo = c.valuation().unwrap_or(0).min(0);
                let hi = c.absolute_precision().unwrap_or(c.valuation().unwrap_or(0) + c.coeffs().len() as i64);
                (lo..hi).any(|e| e != 0 && c.coeff_at(e).is_some_and(|x| x != 0))
            });
            if known_nonconstant {
                return Ok(None);
            }
            search_divisors(&f, &bound)
        }
        Entries::Rational(_) => unreachable!("handled above"),
    }
}

/// Characteristic polynomial of `M^r`, computed as that of multiplication by
/// `x^r mod f` on `F[x]/(f)`, `f = char_poly(M)`. Requires `f` integral.
pub fn power_char_poly<T: Scalar>(m: &Matrix<T>, r: &BigUint) -> Result<Poly<T>> {
    let f = m.char_poly();
    let ctx = m.ctx();
    let n = m.n();
    let g = Poly::monomial(ctx, 1).pow_mod(r, &f)?;
    let mut columns = Vec::with_capacity(n);
    let mut col = g;
    for _ in 0..n {
        columns.push(col.clone());
        col = col.mul_mod(&Poly::monomial(ctx, 1), &f)?;
    }
    Ok(Matrix::from_fn(ctx, n, |i, j| columns[j].coeff(i)).char_poly())
}

/// `M` over `Q_p` as p-adic digits, with at least `min_precision` digits.
pub(crate) fn padic_entries(m: &LocalMatrix, min_precision: u32) -> Result<Matrix<PadicScalar>> {
    match (m.field(), m.entries()) {
        (FieldDescriptor::Padic(prof), Entries::Rational(a)) => {
            let prof = prof.with_precision(prof.precision().max(min_precision))?;
            Ok(a.map(&prof, |x| PadicScalar::from_rational(x, prof)))
        }
        (_, Entries::Padic(a)) => Ok(a.clone()),
        _ => Err(Error::UnsupportedField(format!(
            "{} is not a p-adic field",
            m.field().describe()
        ))),
    }
}

/// Whether `char_poly(M^r) = (x - 1)^n` modulo `p^(k + c)`, with `c = 1` for
/// odd `p` and `c = 2` for `p = 2`: the eigenvalues of `M^r` then lie in
/// `1 + p^(k+c) Z_p`, the `p^k`-th powers of principal units.
pub fn eigenvalue_congruence_check(m: &LocalMatrix, r: &BigUint, k: u32) -> Result<bool> {
    let FieldDescriptor::Padic(prof) = m.field() else {
        return Err(Error::UnsupportedField("congruences are taken in Q_p".into()));
    };
    if r.is_zero() {
        return Err(Error::Precondition("exponent must be positive".into()));
    }
    if !is_distal(m)? {
        return Err(Error::Precondition("eigenvalue congruences need a distal matrix".into()));
    }
    let c = if prof.p() == 2 { 2 } else { 1 };
    let b = k + c;
    let a = padic_entries(m, b + 1)?;
    let d = power_char_poly(&a, r)?.sub(&Poly::unipotent_char(a.ctx(), a.n()));
    for coeff in d.coeffs() {
        if !coeff.integer_mod(b)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

/// The group generated by `g`; for finite order it is its own Zariski closure.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicClosure {
    pub generator: LocalMatrix,
    pub order: Order,
}

fn identity_or_fail(m: &LocalMatrix) -> Result<bool> {
    m.identity_status().ok_or_else(|| {
        Error::InsufficientPrecision("power agrees with I only to the working precision".into())
    })
}

impl CyclicClosure {
    pub fn of(g: &LocalMatrix) -> Result<Self> {
        let order = match unipotent_power_exponent(g)? {
            None => Order::Infinite,
            Some(r) => {
                let mr = g.power_big(&r);
                if g.field().characteristic() == 0 {
                    // A unipotent power other than I has infinite order.
                    if identity_or_fail(&mr)? {
                        Order::Finite(r)
                    } else {
                        Order::Infinite
                    }
                } else {
                    // r is prime to p; the unipotent part has p-power order.
                    let p = g.field().characteristic();
                    let mut u = mr;
                    let mut d = r;
                    while !identity_or_fail(&u)? {
                        u = u.power_big(&BigUint::from(p));
                        d *= p;
                    }
                    Order::Finite(d)
                }
            }
        };
        if let Order::Finite(d) = &order {
            debug_assert!(is_unipotent(&g.power_big(d)).unwrap_or(true));
        }
        Ok(CyclicClosure {
            generator: g.clone(),
            order,
        })
    }

    pub fn finite_order(&self) -> Result<&BigUint> {
        match &self.order {
            Order::Finite(d) => Ok(d),
            Order::Infinite => Err(Error::InfiniteOrder),
        }
    }
}

/// `a` in `[0, d)` with `a * q^k = 1 mod d`, or `None` when `q | d`.
pub fn cyclic_root_exponent(h: &CyclicClosure, q: u64, k: u32) -> Result<Option<BigUint>> {
    let d = BigInt::from(h.finite_order()?.clone());
    if d.is_one() {
        return Ok(Some(BigUint::zero()));
    }
    let qk = BigInt::from(q).pow(k);
    Ok(mod_inverse(&qk.mod_floor(&d), &d).map(|a| a.to_biguint().expect("nonnegative")))
}

/// `y = g^a` inside `<g>` with `y^(q^k) = g`; `None` exactly when `q` divides
/// the order of `g`.
pub fn cyclic_root(h: &CyclicClosure, q: u64, k: u32) -> Result<Option<LocalMatrix>> {
    Ok(cyclic_root_exponent(h, q, k)?.map(|a| h.generator.power_big(&a)))
}

/// `v_q` of a factored exponent, as a plain integer.
pub(crate) fn exponent_valuation(x: &BigUint, q: u64) -> u32 {
    let mut v = 0;
    let mut x = x.clone();
    let q = BigUint::from(q);
    while !x.is_zero() && (&x % &q).is_zero() {
        x /= &q;
        v += 1;
    }
    v
}

/// `v_q(T) + 1 - v_q(d)`: the least `j` for which an element whose order
/// has `q`-part `q^{v_q(d)}` cannot have a `q^j`-th root of finite order
/// dividing the torsion bound `T`.
pub(crate) fn torsion_escape(n: usize, field: &FieldDescriptor, order: &BigUint, q: u64) -> Result<u32> {
    let t = torsion_exponent_bound(n, field)?;
    let vt = t.exponent_of(q);
    let vd = exponent_valuation(order, q);
    Ok((vt + 1).saturating_sub(vd).max(1))
}

pub(crate) fn to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}
