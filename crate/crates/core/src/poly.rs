//! Dense univariate polynomials over a [`Scalar`] field, lowest degree first.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Scalar> {
    ctx: T::Ctx,
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    /// Trailing exact zeros are dropped; inexact zeros are kept since they
    /// still carry precision.
    pub fn new(ctx: T::Ctx, coeffs: Vec<T>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.vanishes_exactly()) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn zero(ctx: &T::Ctx) -> Self {
        Poly {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(ctx: &T::Ctx, c: T) -> Self {
        Self::new(ctx.clone(), vec![c])
    }

    pub fn one(ctx: &T::Ctx) -> Self {
        Self::constant(ctx, T::one_in(ctx))
    }

    /// `x - c`.
    pub fn linear(ctx: &T::Ctx, c: &T) -> Self {
        Self::new(ctx.clone(), vec![c.negated(), T::one_in(ctx)])
    }

    pub fn monomial(ctx: &T::Ctx, degree: usize) -> Self {
        let mut coeffs = vec![T::zero_in(ctx); degree];
        coeffs.push(T::one_in(ctx));
        Poly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero past the end).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| T::zero_in(&self.ctx))
    }

    /// Index of the last stored coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i).plus(&other.coeff(i))).collect();
        Self::new(self.ctx.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.ctx.clone(),
            self.coeffs.iter().map(|c| c.negated()).collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.ctx.clone(), self.coeffs.iter().map(|x| x.times(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![T::zero_in(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(self.ctx.clone(), out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn require_monic(&self) -> Result<usize> {
        match self.coeffs.last() {
            Some(c) if c.minus(&T::one_in(&self.ctx)).vanishes() => Ok(self.coeffs.len() - 1),
            _ => Err(Error::Precondition("divisor must be monic".into())),
        }
    }

    /// Remainder modulo a monic polynomial; division-free.
    pub fn rem_monic(&self, modulus: &Self) -> Result<Self> {
        let d = modulus.require_monic()?;
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let lead = r.pop().unwrap();
            let shift = r.len() - d;
            for (k, m) in modulus.coeffs[..d].iter().enumerate() {
                r[shift + k] = r[shift + k].minus(&lead.times(m));
            }
        }
        Ok(Self::new(self.ctx.clone(), r))
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Result<Self> {
        self.mul(other).rem_monic(modulus)
    }

    /// `self^e mod modulus` by square and multiply.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Self) -> Result<Self> {
        let mut acc = Self::one(&self.ctx).rem_monic(modulus)?;
        let base = self.rem_monic(modulus)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus)?;
            if e.bit(i) {
                acc = acc.mul_mod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    /// Quotient and remainder; the divisor's leading coefficient must be
    /// invertible.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead = divisor
            .coeffs
            .last()
            .ok_or(Error::DivisionByZero)?
            .inverse()?;
        let d = divisor.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= d {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut q = vec![T::zero_in(&self.ctx); r.len() - d];
        while r.len() > d {
            let c = r.pop().unwrap().times(&lead);
            let shift = r.len() - d;
            for (k, m) in divisor.coeffs[..d].iter().enumerate() {
                r[shift + k] = r[shift + k].minus(&c.times(m));
            }
            q[shift] = c;
        }
        Ok((Self::new(self.ctx.clone(), q), Self::new(self.ctx.clone(), r)))
    }

    /// Divides out the leading coefficient.
    pub fn monic(&self) -> Result<Self> {
        let lead = self.coeffs.last().ok_or(Error::DivisionByZero)?.inverse()?;
        Ok(self.scale(&lead))
    }

    /// Monic greatest common divisor by Euclid's algorithm (exact fields).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.times(&T::from_i64_in(&self.ctx, i as i64)))
            .collect();
        Self::new(self.ctx.clone(), coeffs)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero_in(&self.ctx), |acc, c| acc.times(x).plus(c))
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<T>) -> Matrix<T> {
        let n = m.n();
        let mut acc = Matrix::zero(&self.ctx, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Matrix::scalar(&self.ctx, n, c.clone()));
        }
        acc
    }

    /// `p(x + c)`.
    pub fn taylor_shift(&self, c: &T) -> Self {
        let shift = Self::new(self.ctx.clone(), vec![c.clone(), T::one_in(&self.ctx)]);
        self.compose(&shift)
    }

    /// `p(q(x))` by Horner's rule.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(&self.ctx, c.clone()));
        }
        acc
    }

    /// `(x - 1)^n`.
    pub fn unipotent_char(ctx: &T::Ctx, n: usize) -> Self {
        Self::linear(ctx, &T::one_in(ctx)).pow(n as u64)
    }

    /// True if every coefficient of `self - other` vanishes exactly.
    pub fn equals_exactly(&self, other: &Self) -> bool {
        let d = self.sub(other);
        d.coeffs.iter().all(|c| c.vanishes_exactly())
    }
}

/// Truncated power series in `eps`, i.e. elements of `F[eps]/(eps^len)`.
pub mod truncated {
    use super::*;

    pub fn mul<T: Scalar>(a: &[T], b: &[T], len: usize, ctx: &T::Ctx) -> Vec<T> {
        let mut out = vec![T::zero_in(ctx); len];
        for (i, x) in a.iter().enumerate().take(len) {
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].plus(&x.times(y));
            }
        }
        out
    }

    pub fn pow<T: Scalar>(a: &[T], mut e: u64, len: usize, ctx: &T::Ctx) -> Vec<T> {
        let mut acc = one(len, ctx);
        let mut base = a.to_vec();
        base.resize(len, T::zero_in(ctx));
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &base, len, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = mul(&base, &base, len, ctx);
            }
        }
        acc
    }

    pub fn one<T: Scalar>(len: usize, ctx: &T::Ctx) -> Vec<T> {
        let mut v = vec![T::zero_in(ctx); len];
        if len > 0 {
            v[0] = T::one_in(ctx);
        }
        v
    }

    pub fn inverse<T: Scalar>(a: &[T], len: usize, ctx: &T::Ctx) -> Result<Vec<T>> {
        let b0 = a.first().ok_or(Error::DivisionByZero)?.inverse()?;
        let mut b = vec![T::zero_in(ctx); len];
        if len == 0 {
            return Ok(b);
        }
        b[0] = b0.clone();
        for j in 1..len {
            let mut acc = T::zero_in(ctx);
            for i in 1..=j.min(a.len().saturating_sub(1)) {
                acc = acc.plus(&a[i].times(&b[j - i]));
            }
            b[j] = acc.times(&b0).negated();
        }
        Ok(b)
    }

    pub fn sub<T: Scalar>(a: &[T], b: &[T], len: usize, ctx: &T::Ctx) -> Vec<T> {
        (0..len)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(|| T::zero_in(ctx));
                let y = b.get(i).cloned().unwrap_or_else(|| T::zero_in(ctx));
                x.minus(&y)
            })
            .collect()
    }
}
