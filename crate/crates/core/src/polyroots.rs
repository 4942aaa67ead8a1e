//! Roots of polynomials lying in the base field itself: rational roots of
//! rational polynomials and Laurent-polynomial roots over `F_q((t))`.
//!
//! Both searches expand a candidate root digit by digit (2-adically for
//! integers, t-adically for `F_q[t]`), dividing out the content at each step
//! so that dead branches die quickly, and then verify every candidate
//! exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentScalar;
use crate::poly::Poly;
use crate::ring::Scalar;

/// Distinct rational roots with multiplicities, increasing.
pub fn rational_roots(f: &Poly<BigRational>) -> Vec<(BigRational, usize)> {
    let Some(n) = f.degree() else { return Vec::new() };
    let mut f = f.monic().expect("nonzero polynomial");
    let mut out = Vec::new();
    let zero_mult = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        out.push((BigRational::zero(), zero_mult));
        f = Poly::new((), f.coeffs()[zero_mult..].to_vec());
    }
    if n > zero_mult {
        let candidates = integer_candidates(&f);
        let mut found: Vec<BigRational> = candidates.into_iter().filter(|r| f.eval(r).is_zero()).collect();
        found.sort();
        found.dedup();
        for r in found {
            let m = multiplicity(&f, &r);
            out.push((r, m));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn multiplicity<T: Scalar>(f: &Poly<T>, r: &T) -> usize {
    let lin = Poly::linear(f.ctx(), r);
    let mut g = f.clone();
    let mut m = 0;
    loop {
        match g.div_rem(&lin) {
            Ok((q, rem)) if rem.coeffs().iter().all(|c| c.vanishes_exactly()) => {
                g = q;
                m += 1;
            }
            _ => return m,
        }
    }
}

/// Candidates `y / d` where `d^n f(x / d)` is a monic integer polynomial
/// in `y` and `y` runs over its possible integer roots.
fn integer_candidates(f: &Poly<BigRational>) -> Vec<BigRational> {
    let n = f.degree().unwrap();
    let d = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let h: Vec<BigInt> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (c * BigRational::from_integer(num_traits::pow(d.clone(), n - i))).to_integer())
        .collect();
    // Cauchy: every root has |y| <= 1 + max |h_i|.
    let bound = h[..n].iter().map(|c| c.abs()).max().unwrap_or_default() + 1u32;
    let depth = (bound * 2u32 + 1u32).bits() as u32 + 1;
    let modulus = BigInt::one() << depth;
    let half = &modulus >> 1;
    int_roots_mod2(&h, depth)
        .into_iter()
        .map(|r| {
            let y = if r >= half { r - &modulus } else { r };
            BigRational::new(y, d.clone())
        })
        .collect()
}

fn eval_int(h: &[BigInt], x: &BigInt) -> BigInt {
    h.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// `h(c + 2y)` with the power of 2 dividing every coefficient removed.
fn descend(h: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    // Taylor shift by repeated synthetic division.
    let mut a = h.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &a[j + 1] * c;
            a[j] += t;
        }
    }
    for (i, x) in a.iter_mut().enumerate() {
        *x <<= i;
    }
    let m = a
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.trailing_zeros().unwrap_or(0))
        .min()
        .unwrap_or(0);
    a.iter().map(|x| x >> m).collect()
}

fn int_roots_mod2(h: &[BigInt], depth: u32) -> Vec<BigInt> {
    if depth == 0 {
        return vec![BigInt::zero()];
    }
    let mut out = Vec::new();
    for c in [BigInt::zero(), BigInt::one()] {
        if eval_int(h, &c).is_odd() {
            continue;
        }
        let g = descend(h, &c);
        for r in int_roots_mod2(&g, depth - 1) {
            out.push(&c + (r << 1));
        }
    }
    out
}

/// Roots in `F_q[t, 1/t]` of a monic polynomial with exact Laurent
/// coefficients, with multiplicities.
pub fn laurent_roots(f: &Poly<LaurentScalar>) -> Result<Vec<(LaurentScalar, usize)>> {
    let prof = f.ctx().clone();
    let Some(n) = f.degree() else {
        return Err(Error::Precondition("roots of the zero polynomial".into()));
    };
    if f.coeffs().iter().any(|c| !c.is_exact()) {
        return Err(Error::InsufficientPrecision(
            "root search needs exact coefficients".into(),
        ));
    }
    let f = f.monic()?;
    let mut out = Vec::new();
    let zero_mult = f.coeffs().iter().take_while(|c| c.is_exact_zero()).count();
    if zero_mult > 0 {
        out.push((LaurentScalar::zero(prof.clone()), zero_mult));
    }
    let f = Poly::new(prof.clone(), f.coeffs()[zero_mult..].to_vec());
    let n = n - zero_mult;
    if n == 0 {
        return Ok(out);
    }
    // y = t^s x makes every coefficient a polynomial in t.
    let s = (0..n)
        .filter_map(|i| f.coeffs()[i].valuation().map(|v| (v, n - i)))
        .map(|(v, d)| if v >= 0 { 0 } else { (-v + d as i64 - 1) / d as i64 })
        .max()
        .unwrap_or(0);
    let h = Poly::new(
        prof.clone(),
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.shift((n - i) as i64 * s))
            .collect(),
    );
    // Every root r in F_q[t] has deg r <= deg(h_i) / (n - i) for some i.
    let max_deg = (0..n)
        .filter_map(|i| {
            let c = &h.coeffs()[i];
            c.valuation().map(|v| (v + c.coeffs().len() as i64 - 1) / (n - i) as i64)
        })
        .max()
        .unwrap_or(0);
    let mut found = Vec::new();
    for digits in t_adic_roots(&h, max_deg as u32 + 1) {
        let y = LaurentScalar::from_coeffs(prof.clone(), 0, digits, None);
        let x = y.shift(-s);
        if f.eval(&x).is_exact_zero() && !found.contains(&x) {
            found.push(x);
        }
    }
    for x in found {
        let m = multiplicity(&f, &x);
        out.push((x, m));
    }
    Ok(out)
}

fn t_adic_roots(h: &Poly<LaurentScalar>, depth: u32) -> Vec<Vec<u32>> {
    if depth == 0 {
        return vec![Vec::new()];
    }
    let prof = h.ctx().clone();
    let field = prof.field().clone();
    let mut out = Vec::new();
    for c in field.elements() {
        let shifted = h.taylor_shift(&LaurentScalar::constant(prof.clone(), c));
        if shifted.coeff(0).coeff_at(0) != Some(0) {
            continue;
        }
        let scaled: Vec<LaurentScalar> = shifted
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, x)| x.shift(i as i64))
            .collect();
        let m = scaled.iter().filter_map(|x| x.valuation()).min().unwrap_or(0);
        let g = Poly::new(prof.clone(), scaled.iter().map(|x| x.shift(-m)).collect());
        for mut rest in t_adic_roots(&g, depth - 1) {
            rest.insert(0, c);
            out.push(rest);
        }
    }
    out
}
