//! Square matrices over a [`Scalar`] field.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Scalar> {
    n: usize,
    ctx: T::Ctx,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(ctx: &T::Ctx, rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Precondition("matrix must have at least one row".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition(format!("matrix with {n} rows is not square")));
        }
        Ok(Matrix {
            n,
            ctx: ctx.clone(),
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(ctx: &T::Ctx, n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix {
            n,
            ctx: ctx.clone(),
            data,
        }
    }

    pub fn zero(ctx: &T::Ctx, n: usize) -> Self {
        Self::from_fn(ctx, n, |_, _| T::zero_in(ctx))
    }

    pub fn scalar(ctx: &T::Ctx, n: usize, c: T) -> Self {
        Self::from_fn(ctx, n, |i, j| if i == j { c.clone() } else { T::zero_in(ctx) })
    }

    pub fn identity(ctx: &T::Ctx, n: usize) -> Self {
        Self::scalar(ctx, n, T::one_in(ctx))
    }

    /// Companion matrix of a monic polynomial `c_0 + ... + c_{n-1} x^{n-1} + x^n`.
    pub fn companion(poly: &Poly<T>) -> Result<Self> {
        let n = poly.degree().filter(|&d| d >= 1).ok_or_else(|| {
            Error::Precondition("companion matrix needs degree at least 1".into())
        })?;
        let ctx = poly.ctx();
        if poly.coeff(n) != T::one_in(ctx) {
            return Err(Error::Precondition("companion matrix needs a monic polynomial".into()));
        }
        Ok(Self::from_fn(ctx, n, |i, j| {
            if j == n - 1 {
                poly.coeff(i).negated()
            } else if i == j + 1 {
                T::one_in(ctx)
            } else {
                T::zero_in(ctx)
            }
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            ctx: ctx.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Scalar>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            n: self.n,
            ctx: ctx.clone(),
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Matrix {
            n: self.n,
            ctx: self.ctx.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Matrix {
            n: self.n,
            ctx: self.ctx.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix {
            n: self.n,
            ctx: self.ctx.clone(),
            data: self.data.iter().map(|a| a.times(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(&self.ctx, n, |i, j| {
            let mut acc = T::zero_in(&self.ctx);
            for k in 0..n {
                acc = acc.plus(&self.get(i, k).times(other.get(k, j)));
            }
            acc
        })
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        self.pow_big(&BigUint::from(e))
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        let mut acc = Self::identity(&self.ctx, self.n);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// `M^k` for any integer `k`; negative powers invert first.
    pub fn pow_i64(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow_u64(k as u64))
        } else {
            Ok(self.inverse()?.pow_u64(k.unsigned_abs()))
        }
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero_in(&self.ctx), |acc, i| acc.plus(self.get(i, i)))
    }

    /// Characteristic polynomial `det(xI - M)` by Berkowitz's
    /// division-free algorithm.
    pub fn char_poly(&self) -> Poly<T> {
        let ctx = &self.ctx;
        // v holds the coefficients of the leading r x r minor's polynomial,
        // highest degree first.
        let mut v = vec![T::one_in(ctx)];
        for r in 0..self.n {
            let a = self.get(r, r).clone();
            let mut t = Vec::with_capacity(r + 2);
            t.push(T::one_in(ctx));
            t.push(a.negated());
            // col = A_r^j * C
            let mut col: Vec<T> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let mut dot = T::zero_in(ctx);
                for (k, c) in col.iter().enumerate() {
                    dot = dot.plus(&self.get(r, k).times(c));
                }
                t.push(dot.negated());
                col = (0..r)
                    .map(|i| {
                        let mut acc = T::zero_in(ctx);
                        for (k, c) in col.iter().enumerate() {
                            acc = acc.plus(&self.get(i, k).times(c));
                        }
                        acc
                    })
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = T::zero_in(ctx);
                for j in 0..=i.min(v.len() - 1) {
                    if i - j < t.len() {
                        acc = acc.plus(&t[i - j].times(&v[j]));
                    }
                }
                next.push(acc);
            }
            v = next;
        }
        v.reverse();
        Poly::new(ctx.clone(), v)
    }

    pub fn det(&self) -> T {
        let c0 = self.char_poly().coeff(0);
        if self.n % 2 == 0 {
            c0
        } else {
            c0.negated()
        }
    }

    /// Adjugate via Cayley-Hamilton: `adj(M) = (-1)^(n+1) (M^(n-1) + c_{n-1} M^(n-2) + ... + c_1)`.
    pub fn adjugate(&self) -> Self {
        let chi = self.char_poly();
        let mut acc = Self::zero(&self.ctx, self.n);
        for i in (1..=self.n).rev() {
            acc = acc.mul(self).add(&Self::scalar(&self.ctx, self.n, chi.coeff(i)));
        }
        if self.n % 2 == 0 {
            acc.scale(&T::from_i64_in(&self.ctx, -1))
        } else {
            acc
        }
    }

    /// Gauss-Jordan inverse, pivoting on the entry of least weight.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let ctx = &self.ctx;
        let mut a = self.rows();
        let mut inv = Self::identity(ctx, n).rows();
        for col in 0..n {
            let pivot = pick_pivot(&a, col, col)?.ok_or(Error::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = a[col][col].inverse()?;
            for j in 0..n {
                a[col][j] = a[col][j].times(&scale);
                inv[col][j] = inv[col][j].times(&scale);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a[i][col].clone();
                if factor.vanishes_exactly() {
                    continue;
                }
                for j in 0..n {
                    let da = factor.times(&a[col][j]);
                    a[i][j] = a[i][j].minus(&da);
                    let di = factor.times(&inv[col][j]);
                    inv[i][j] = inv[i][j].minus(&di);
                }
            }
        }
        Self::from_rows(ctx, inv)
    }

    pub fn is_identity(&self) -> bool {
        self.sub(&Self::identity(&self.ctx, self.n))
            .data
            .iter()
            .all(|x| x.vanishes())
    }

    /// True when every entry of `self - other` is exactly zero.
    pub fn equals_exactly(&self, other: &Self) -> bool {
        self.sub(other).data.iter().all(|x| x.vanishes_exactly())
    }

    /// True when `self - other` vanishes to the available precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).data.iter().all(|x| x.vanishes())
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(|x| x.is_exact())
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other).agrees_with(&other.mul(self))
    }

    /// Degree of the minimal polynomial: the rank of `I, M, ..., M^(n-1)`
    /// viewed as vectors of length `n^2`.
    pub fn krylov_rank(&self) -> Result<usize> {
        let mut rows = Vec::with_capacity(self.n);
        let mut power = Self::identity(&self.ctx, self.n);
        for _ in 0..self.n {
            rows.push(power.data.clone());
            power = power.mul(self);
        }
        rank(rows)
    }

    /// Minimal polynomial equals characteristic polynomial.
    pub fn is_non_derogatory(&self) -> Result<bool> {
        Ok(self.krylov_rank()? == self.n)
    }
}

/// Row of the entry with least pivot weight in `col`, scanning rows from
/// `start`. Fails when the column is zero only to the available precision.
fn pick_pivot<T: Scalar>(a: &[Vec<T>], col: usize, start: usize) -> Result<Option<usize>> {
    let mut best: Option<(i64, usize)> = None;
    let mut uncertain = false;
    for (i, row) in a.iter().enumerate().skip(start) {
        match row[col].pivot_weight() {
            Some(w) if best.is_none_or(|(bw, _)| w < bw) => best = Some((w, i)),
            Some(_) => {}
            None if !row[col].vanishes_exactly() => uncertain = true,
            None => {}
        }
    }
    match best {
        Some((_, i)) => Ok(Some(i)),
        None if uncertain => Err(Error::InsufficientPrecision(
            "pivot column vanishes only to the working precision".into(),
        )),
        None => Ok(None),
    }
}

/// Rank of a list of equal-length rows by division-free elimination.
pub fn rank<T: Scalar>(rows: Vec<Vec<T>>) -> Result<usize> {
    let mut a = rows;
    let m = a.len();
    if m == 0 {
        return Ok(0);
    }
    let width = a[0].len();
    let mut r = 0;
    for col in 0..width {
        if r == m {
            break;
        }
        let Some(pivot) = pick_pivot(&a, col, r)? else {
            continue;
        };
        a.swap(r, pivot);
        let piv = a[r][col].clone();
        for i in r + 1..m {
            let factor = a[i][col].clone();
            if factor.vanishes_exactly() {
                continue;
            }
            for j in col..width {
                let keep = a[i][j].times(&piv);
                let drop = factor.times(&a[r][j]);
                a[i][j] = keep.minus(&drop);
            }
        }
        r += 1;
    }
    Ok(r)
}
