//! Deciding `Y^k = M`.
//!
//! Unipotent matrices in characteristic 0 always have roots. A
//! non-derogatory `M` whose characteristic polynomial splits over the base
//! field has all its roots inside `F[M] = prod F[x] / (x - c_i)^{e_i}`, so
//! the question splits into one equation per local factor, each solved in a
//! truncated power series ring and glued back together by CRT.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::unipotent::{is_unipotent, unipotent_kth_root};
use crate::error::{Error, Result};
use crate::laurent::LaurentScalar;
use crate::local::{Entries, FieldDescriptor, LocalMatrix};
use crate::matrix::Matrix;
use crate::padic::{FieldProfile, PadicScalar};
use crate::poly::{truncated, Poly};
use crate::polyroots::{laurent_roots, rational_roots};
use crate::ring::{format_rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootStatus {
    Yes,
    No,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootVerdict {
    pub status: RootStatus,
    pub witness: Option<LocalMatrix>,
    pub reason: String,
}

impl RootVerdict {
    fn yes(witness: LocalMatrix, reason: &str) -> Self {
        RootVerdict {
            status: RootStatus::Yes,
            witness: Some(witness),
            reason: reason.into(),
        }
    }

    fn no(reason: impl Into<String>) -> Self {
        RootVerdict {
            status: RootStatus::No,
            witness: None,
            reason: reason.into(),
        }
    }

    fn undecided(reason: impl Into<String>) -> Self {
        RootVerdict {
            status: RootStatus::Undecided,
            witness: None,
            reason: reason.into(),
        }
    }
}

pub const OUTSIDE_SCOPE: &str = "outside decision scope";

/// Exact `k`-th root of a rational number, if it is rational.
pub fn rational_kth_root(c: &BigRational, k: u64) -> Option<BigRational> {
    if c.is_zero() {
        return Some(c.clone());
    }
    if c.is_negative() && k % 2 == 0 {
        return None;
    }
    let k32 = u32::try_from(k).ok()?;
    let root = |x: &BigInt| {
        let r = x.abs().nth_root(k32);
        (num_traits::pow(r.clone(), k as usize) == x.abs()).then_some(r)
    };
    let (n, d) = (root(c.numer())?, root(c.denom())?);
    let y = BigRational::new(n, d);
    Some(if c.is_negative() { -y } else { y })
}

/// A root of an exact Laurent scalar, exact itself when one exists in
/// `F_q[t, 1/t]`.
fn laurent_scalar_root(c: &LaurentScalar, k: u64) -> Result<Option<LaurentScalar>> {
    let Some(r) = c.kth_root(k as i64)? else { return Ok(None) };
    if c.is_exact() && !r.is_exact() {
        if let Some(v) = r.valuation() {
            let exact = LaurentScalar::from_coeffs(r.profile().clone(), v, r.coeffs().to_vec(), None);
            if exact.pow_i64(k as i64)? == *c {
                return Ok(Some(exact));
            }
        }
    }
    Ok(Some(r))
}

enum Local<T: Scalar> {
    Root(Matrix<T>),
    No(String),
}

/// Solves `Y_i^k = c_i + eps` in `F[eps]/eps^{e_i}` for each eigenvalue and
/// evaluates the CRT interpolant at `M`.
fn commutant_root<T: Scalar>(
    m: &Matrix<T>,
    eigen: &[(T, usize)],
    scalar_roots: &[T],
    k: u64,
    characteristic: u64,
) -> Result<Local<T>> {
    let ctx = m.ctx();
    let mut locals = Vec::with_capacity(eigen.len());
    for ((c, e), y0) in eigen.iter().zip(scalar_roots) {
        let e = *e;
        let mut target = vec![c.clone(), T::one_in(ctx)];
        target.resize(e.max(2), T::zero_in(ctx));
        target.truncate(e);
        let mut y = vec![T::zero_in(ctx); e];
        y[0] = y0.clone();
        if e >= 2 {
            if characteristic != 0 && k % characteristic == 0 {
                return Ok(Local::No(format!(
                    "p = {characteristic} divides k and the eigenvalue repeats: a p-th power has no eps term"
                )));
            }
            let kk = T::from_i64_in(ctx, k as i64);
            let mut steps = 1;
            while (1usize << (steps - 1)) < e {
                steps += 1;
            }
            for _ in 0..steps + 1 {
                let residual = truncated::sub(&truncated::pow(&y, k, e, ctx), &target, e, ctx);
                let slope: Vec<T> = truncated::pow(&y, k - 1, e, ctx)
                    .iter()
                    .map(|x| x.times(&kk))
                    .collect();
                let step = truncated::mul(&residual, &truncated::inverse(&slope, e, ctx)?, e, ctx);
                y = truncated::sub(&y, &step, e, ctx);
            }
        }
        locals.push(y);
    }
    let mut interp = Poly::zero(ctx);
    for (i, ((c, e), y)) in eigen.iter().zip(&locals).enumerate() {
        let others = eigen
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(Poly::one(ctx), |acc, (_, (d, f))| {
                acc.mul(&Poly::linear(ctx, d).pow(*f as u64))
            });
        let mut local_others = others.taylor_shift(c).into_coeffs();
        local_others.resize(*e, T::zero_in(ctx));
        let u = truncated::inverse(&local_others, *e, ctx)?;
        let t = truncated::mul(y, &u, *e, ctx);
        let piece = Poly::new(ctx.clone(), t).taylor_shift(&c.negated());
        interp = interp.add(&piece.mul(&others));
    }
    Ok(Local::Root(interp.eval_matrix(m)))
}

fn finish(m: &LocalMatrix, witness: LocalMatrix, k: u64) -> Result<RootVerdict> {
    let ok = witness.power(k as i64)?.agrees_with(m) && witness.require_invertible().is_ok();
    Ok(if ok {
        RootVerdict::yes(witness, "commutant: root in F[M] by CRT over the eigenvalues")
    } else {
        RootVerdict::undecided("constructed witness failed verification at this precision")
    })
}

/// Decides whether `M` has a `k`-th root over its field. See the module
/// documentation for the scope; anything else is `Undecided`.
pub fn has_kth_root(m: &LocalMatrix, k: u64) -> Result<RootVerdict> {
    if k == 0 {
        return Err(Error::Precondition("root order must be positive".into()));
    }
    m.require_invertible()?;
    if k == 1 {
        return Ok(RootVerdict::yes(m.clone(), "k = 1"));
    }
    if m.field().characteristic() == 0 {
        match is_unipotent(m) {
            Ok(true) => {
                return Ok(RootVerdict::yes(
                    unipotent_kth_root(m, k)?,
                    "unipotent: exp(log(M) / k)",
                ))
            }
            Ok(false) => {}
            Err(Error::InsufficientPrecision(msg)) => {
                return Ok(RootVerdict::undecided(format!("insufficient precision: {msg}")))
            }
            Err(e) => return Err(e),
        }
    }
    if !m.is_exact() {
        return Ok(RootVerdict::undecided(
            "insufficient precision: eigenvalues of digit entries cannot be certified",
        ));
    }
    if !m.is_non_derogatory()? {
        return scalar_matrix_root(m, k);
    }
    match (m.field(), m.entries()) {
        (_, Entries::Rational(a)) => rational_case(m, a, k),
        (FieldDescriptor::Laurent(prof), Entries::Laurent(a)) => {
            let eigen = laurent_roots(&a.char_poly())?;
            if eigen.iter().map(|e| e.1).sum::<usize>() != a.n() {
                return Ok(RootVerdict::undecided(format!(
                    "{OUTSIDE_SCOPE}: characteristic polynomial does not split over F_q[t, 1/t]"
                )));
            }
            let mut roots = Vec::new();
            for (c, _) in &eigen {
                match laurent_scalar_root(c, k)? {
                    Some(y) => roots.push(y),
                    None => {
                        return Ok(RootVerdict::no(format!("eigenvalue {c} has no {k}-th root")))
                    }
                }
            }
            match commutant_root(a, &eigen, &roots, k, prof.p())? {
                Local::Root(w) => finish(m, LocalMatrix::laurent(w), k),
                Local::No(reason) => Ok(RootVerdict::no(reason)),
            }
        }
        _ => Ok(RootVerdict::undecided(OUTSIDE_SCOPE)),
    }
}

fn rational_case(m: &LocalMatrix, a: &Matrix<BigRational>, k: u64) -> Result<RootVerdict> {
    let eigen = rational_roots(&a.char_poly());
    if eigen.iter().map(|e| e.1).sum::<usize>() != a.n() {
        return Ok(RootVerdict::undecided(format!(
            "{OUTSIDE_SCOPE}: characteristic polynomial does not split over Q"
        )));
    }
    let prof = match m.field() {
        FieldDescriptor::Padic(prof) => Some(*prof),
        _ => None,
    };
    let mut rational = Vec::new();
    let mut padic_needed = false;
    for (c, _) in &eigen {
        match rational_kth_root(c, k) {
            Some(y) => rational.push(Some(y)),
            None => match prof {
                None => {
                    return Ok(RootVerdict::no(format!(
                        "eigenvalue {} has no rational {k}-th root",
                        format_rational(c)
                    )))
                }
                Some(prof) => {
                    if !PadicScalar::from_rational(c, prof).kth_root_exists(k as i64)? {
                        return Ok(RootVerdict::no(format!(
                            "eigenvalue {} has no {k}-th root in Q_{}",
                            format_rational(c),
                            prof.p()
                        )));
                    }
                    padic_needed = true;
                    rational.push(None);
                }
            },
        }
    }
    if !padic_needed {
        let roots: Vec<BigRational> = rational.into_iter().map(Option::unwrap).collect();
        return match commutant_root(a, &eigen, &roots, k, 0)? {
            Local::Root(w) => finish(m, LocalMatrix::new(m.field().clone(), Entries::Rational(w))?, k),
            Local::No(reason) => Ok(RootVerdict::no(reason)),
        };
    }
    let prof: FieldProfile = prof.expect("p-adic field");
    let ap = a.map(&prof, |x| PadicScalar::from_rational(x, prof));
    let eigen_p: Vec<(PadicScalar, usize)> = eigen
        .iter()
        .map(|(c, e)| (PadicScalar::from_rational(c, prof), *e))
        .collect();
    let mut roots = Vec::new();
    for ((c, _), r) in eigen_p.iter().zip(rational) {
        roots.push(match r {
            Some(y) => PadicScalar::from_rational(&y, prof),
            None => c.kth_root(k as i64)?.expect("existence checked"),
        });
    }
    match commutant_root(&ap, &eigen_p, &roots, k, 0)? {
        Local::Root(w) => finish(&m.to_padic_over(prof), LocalMatrix::padic(w), k),
        Local::No(reason) => Ok(RootVerdict::no(reason)),
    }
}

/// Derogatory input: only `c I` with a scalar root `y` is settled (by `y I`).
fn scalar_matrix_root(m: &LocalMatrix, k: u64) -> Result<RootVerdict> {
    let found = match m.entries() {
        Entries::Rational(a) => scalar_of(a).and_then(|c| rational_kth_root(&c, k)).map(|y| {
            LocalMatrix::new(m.field().clone(), Entries::Rational(Matrix::scalar(&(), a.n(), y)))
        }),
        Entries::Laurent(a) => match scalar_of(a) {
            Some(c) => laurent_scalar_root(&c, k)?
                .map(|y| LocalMatrix::new(m.field().clone(), Entries::Laurent(Matrix::scalar(a.ctx(), a.n(), y)))),
            None => None,
        },
        Entries::Padic(_) => None,
    };
    match found {
        Some(w) => {
            let w = w?;
            Ok(if w.power(k as i64)?.agrees_with(m) {
                RootVerdict::yes(w, "scalar matrix with a scalar root")
            } else {
                RootVerdict::undecided("constructed witness failed verification at this precision")
            })
        }
        None => Ok(RootVerdict::undecided(format!(
            "{OUTSIDE_SCOPE}: derogatory matrix"
        ))),
    }
}

fn scalar_of<T: Scalar>(a: &Matrix<T>) -> Option<T> {
    let c = a.get(0, 0).clone();
    a.equals_exactly(&Matrix::scalar(a.ctx(), a.n(), c.clone())).then_some(c)
}
