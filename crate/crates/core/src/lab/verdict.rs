//! Roots of every order: in characteristic 0 exactly the unipotent
//! matrices, in characteristic `p` only the identity. A negative answer
//! comes with a specific `k` for which no `k`-th root exists.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bounds::residue_unit_exponent;
use super::exponent::{
    exponent_valuation, padic_entries, power_char_poly, torsion_escape, unipotent_power_exponent,
    CyclicClosure, Order,
};
use super::unipotent::{is_unipotent, unipotent_log};
use crate::arith::{first_primes, is_prime};
use crate::error::{Error, Result};
use crate::local::{Entries, FieldDescriptor, LocalMatrix, DEFAULT_PRECISION};
use crate::newton::ramification_escape;
use crate::padic::FieldProfile;
use crate::poly::Poly;
use crate::ring::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// `M = exp(X)`, so `exp(X / k)` is a `k`-th root for every `k`.
    OneParameter { log: LocalMatrix },
    /// `M = I`.
    Identity,
    /// No `k`-th root exists; `prime` names the completion used over `Q`.
    Blocked {
        k: BigUint,
        prime: Option<u64>,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AllOrdersVerdict {
    pub holds: bool,
    pub certificate: Certificate,
}

const GLOBAL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

struct Block {
    k: BigUint,
    reason: String,
}

fn smaller(a: Option<Block>, b: Block) -> Option<Block> {
    match a {
        Some(a) if a.k <= b.k => Some(a),
        _ => Some(b),
    }
}

/// Primes worth trying as `ell` in an `ell^j` valuation obstruction: small
/// ones, the residue characteristic, and the first prime beyond `n`.
fn escape_primes(n: usize, p: u64) -> Vec<u64> {
    let mut out = first_primes(6);
    out.push(p);
    out.push((n as u64 + 1..).find(|&x| is_prime(x)).unwrap());
    out.sort();
    out.dedup();
    out
}

/// An eigenvalue of valuation `s != 0` would need a `k`-th root of
/// valuation `s / k`, whose denominator must not exceed the degree `n`.
fn slope_block(m: &LocalMatrix, p: u64) -> Result<Option<Block>> {
    let polygon = m.newton_polygon()?;
    let n = m.n();
    let mut best = None;
    for (s, _) in polygon.segments().iter().filter(|(s, _)| !s.is_zero()) {
        for ell in escape_primes(n, p) {
            let j = ramification_escape(s, ell, n as u64);
            let k = BigUint::from(ell).pow(j);
            best = smaller(
                best,
                Block {
                    k,
                    reason: format!(
                        "an eigenvalue has valuation {s}; a {ell}^{j}-th root would need ramification beyond {n}"
                    ),
                },
            );
        }
    }
    Ok(best)
}

/// Eigenvalue orders divisible by `q^{v_q(d)}` force the `q^j`-th root to
/// have order beyond the torsion bound.
fn torsion_block(m: &LocalMatrix, order: &BigUint) -> Result<Option<Block>> {
    let mut best = None;
    for (q, _) in crate::arith::factor_u64(super::exponent::to_u64(order).ok_or_else(|| {
        Error::OutOfRange(format!("order {order} exceeds 64 bits"))
    })?) {
        let j = torsion_escape(m.n(), m.field(), order, q)?;
        best = smaller(
            best,
            Block {
                k: BigUint::from(q).pow(j),
                reason: format!(
                    "eigenvalue orders have {q}-part {q}^{}; a {q}^{j}-th root would exceed the torsion bound",
                    exponent_valuation(order, q)
                ),
            },
        );
    }
    Ok(best)
}

/// For distal `M` with no unipotent power: the eigenvalues of `M^{R'}`
/// are principal units, and `p^j`-th powers of principal units are closer
/// to 1 than `w_j`. A coefficient of `char_poly(M^{R'}) - (x-1)^n` of
/// valuation `delta < w_j` rules out a `p^j`-th root.
fn congruence_block<T: Scalar>(
    a: &crate::matrix::Matrix<T>,
    r: &BigUint,
    p: u64,
    characteristic_zero: bool,
    valuation: impl Fn(&T) -> Option<i64>,
) -> Result<Block> {
    let n = a.n();
    let d = power_char_poly(a, r)?.sub(&Poly::unipotent_char(a.ctx(), n));
    let delta = d
        .coeffs()
        .iter()
        .filter_map(&valuation)
        .min()
        .ok_or_else(|| {
            Error::InsufficientPrecision(format!(
                "char_poly(M^{r}) agrees with (x-1)^n to the working precision"
            ))
        })?;
    let delta = BigRational::from_integer(delta.into());
    let pr = BigRational::from_integer(p.into());
    let mut w = BigRational::new(1.into(), (n as i64).into());
    let mut j = 0u32;
    while w <= delta {
        w = if characteristic_zero {
            (&w * &pr).min(&w + BigRational::one())
        } else {
            &w * &pr
        };
        j += 1;
    }
    Ok(Block {
        k: BigUint::from(p).pow(j),
        reason: format!(
            "eigenvalues of M^{r} differ from 1 at valuation {delta}, while {p}^{j}-th powers of principal units differ beyond it"
        ),
    })
}

fn local_block(m: &LocalMatrix) -> Result<Block> {
    let p = m
        .field()
        .residue_prime()
        .ok_or_else(|| Error::UnsupportedField("a local field is needed".into()))?;
    if let Some(b) = slope_block(m, p)? {
        return Ok(b);
    }
    match m.field() {
        FieldDescriptor::Padic(prof) => {
            if let Some(r) = unipotent_power_exponent(m)? {
                return torsion_block(m, &r)?.ok_or_else(|| {
                    Error::Precondition("unipotent matrix has roots of every order".into())
                });
            }
            let r = residue_unit_exponent(m.n(), p)?.value();
            let a = padic_entries(m, prof.precision())?;
            congruence_block(&a, &r, p, true, |x| x.valuation())
        }
        FieldDescriptor::Laurent(prof) => {
            if let Order::Finite(d) = CyclicClosure::of(m)?.order {
                return torsion_block(m, &d)?
                    .ok_or_else(|| Error::Precondition("the identity has roots of every order".into()));
            }
            let r = residue_unit_exponent(m.n(), prof.q())?.value();
            let Entries::Laurent(a) = m.entries() else { unreachable!() };
            congruence_block(a, &r, p, false, |x| x.valuation())
        }
        FieldDescriptor::Rational => unreachable!(),
    }
}

/// Whether `M` has a `k`-th root for every `k`, with a certificate.
pub fn roots_all_orders(m: &LocalMatrix) -> Result<AllOrdersVerdict> {
    m.require_invertible()?;
    match m.field() {
        FieldDescriptor::Laurent(_) => {
            match m.identity_status() {
                Some(true) => {
                    return Ok(AllOrdersVerdict {
                        holds: true,
                        certificate: Certificate::Identity,
                    })
                }
                None => {
                    return Err(Error::InsufficientPrecision(
                        "M agrees with I only to the working precision".into(),
                    ))
                }
                Some(false) => {}
            }
            let b = local_block(m)?;
            Ok(blocked(b, None))
        }
        FieldDescriptor::Padic(_) => {
            if is_unipotent(m)? {
                return Ok(AllOrdersVerdict {
                    holds: true,
                    certificate: Certificate::OneParameter { log: unipotent_log(m)? },
                });
            }
            Ok(blocked(local_block(m)?, None))
        }
        FieldDescriptor::Rational => {
            if is_unipotent(m)? {
                return Ok(AllOrdersVerdict {
                    holds: true,
                    certificate: Certificate::OneParameter { log: unipotent_log(m)? },
                });
            }
            global_block(m)
        }
    }
}

/// A rational non-unipotent matrix is blocked in some completion; the
/// smallest `k` found over a few small primes is reported.
fn global_block(m: &LocalMatrix) -> Result<AllOrdersVerdict> {
    let mut best: Option<(Block, u64)> = None;
    let mut last_err = None;
    for p in GLOBAL_PRIMES {
        let local = m.with_field(FieldDescriptor::Padic(FieldProfile::new(p, DEFAULT_PRECISION)?))?;
        match local_block(&local) {
            Ok(b) => {
                if best.as_ref().is_none_or(|(c, _)| b.k < c.k) {
                    best = Some((b, p));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match best {
        Some((b, p)) => Ok(blocked(b, Some(p))),
        None => Err(last_err.expect("at least one prime tried")),
    }
}

fn blocked(b: Block, prime: Option<u64>) -> AllOrdersVerdict {
    AllOrdersVerdict {
        holds: false,
        certificate: Certificate::Blocked {
            k: b.k,
            prime,
            reason: b.reason,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::roots::{has_kth_root, RootStatus};
    use crate::laurent::{LaurentProfile, LaurentScalar};
    use crate::matrix::Matrix;

    fn qp(rows: &[&[i64]], p: u64) -> LocalMatrix {
        LocalMatrix::from_int_rows(rows)
            .unwrap()
            .with_field(FieldDescriptor::Padic(FieldProfile::new(p, 32).unwrap()))
            .unwrap()
    }

    fn blocked_k(v: &AllOrdersVerdict) -> u64 {
        match &v.certificate {
            Certificate::Blocked { k, .. } => k.try_into().unwrap(),
            other => panic!("expected a blocked certificate, got {other:?}"),
        }
    }

    #[test]
    fn unipotent_yes() {
        let v = roots_all_orders(&qp(&[&[1, 1], &[0, 1]], 5)).unwrap();
        assert!(v.holds);
        assert!(matches!(v.certificate, Certificate::OneParameter { .. }));
        assert!(roots_all_orders(&qp(&[&[1, 0], &[0, 1]], 3)).unwrap().holds);
    }

    #[test]
    fn char_p_jordan_block_no() {
        let prof = LaurentProfile::prime_field(2, 16).unwrap();
        let s = |x: &str| LaurentScalar::parse(x, &prof).unwrap();
        let m = LocalMatrix::laurent(
            Matrix::from_rows(&prof, vec![vec![s("1"), s("t")], vec![s("0"), s("1")]]).unwrap(),
        );
        let v = roots_all_orders(&m).unwrap();
        assert!(!v.holds);
        assert_eq!(blocked_k(&v), 2);
        let id = LocalMatrix::laurent(Matrix::identity(&prof, 2));
        assert_eq!(roots_all_orders(&id).unwrap().certificate, Certificate::Identity);
    }

    #[test]
    fn blocked_k_really_has_no_root_where_decidable() {
        let cases: Vec<LocalMatrix> = vec![
            qp(&[&[4, 0], &[0, 1]], 3),
            qp(&[&[5, 0], &[0, 1]], 5),
            qp(&[&[-1, 0], &[0, 1]], 3),
            qp(&[&[2, 1], &[0, 2]], 7),
            qp(&[&[-1, 1], &[0, -1]], 5),
            LocalMatrix::from_int_rows(&[&[4, 0], &[0, 1]]).unwrap(),
            LocalMatrix::from_int_rows(&[&[3, 1], &[0, 3]]).unwrap(),
        ];
        for m in cases {
            let v = roots_all_orders(&m).unwrap();
            assert!(!v.holds);
            let k = blocked_k(&v);
            let r = has_kth_root(&m, k).unwrap();
            assert_eq!(r.status, RootStatus::No, "{m:?} k={k}: {}", r.reason);
        }
    }

    #[test]
    fn global_diag_four_one() {
        let m = LocalMatrix::from_int_rows(&[&[4, 0], &[0, 1]]).unwrap();
        let v = roots_all_orders(&m).unwrap();
        assert!(!v.holds);
        assert_eq!(blocked_k(&v), 3);
    }
}
