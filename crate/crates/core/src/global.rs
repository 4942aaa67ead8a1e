//! A rational matrix seen in many completions `Q_p` at once.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lab::exponent::{torsion_escape, CyclicClosure, Order};
use crate::lab::{
    cyclic_tower, is_distal, is_unipotent, roots_all_orders, unipotent_power_exponent,
    AllOrdersVerdict, TowerWitness,
};
use crate::local::{FieldDescriptor, LocalMatrix, DEFAULT_PRECISION};
use crate::padic::FieldProfile;

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeEntry {
    pub prime: u64,
    pub is_distal: bool,
    pub unipotent_power_exponent: Option<BigUint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalReport {
    pub per_prime: Vec<PrimeEntry>,
    pub is_unipotent: bool,
    /// The common exponent over all completions, if any power is unipotent.
    pub exponent: Option<BigUint>,
    pub order: Order,
    pub roots_all_orders: AllOrdersVerdict,
}

fn require_rational(m: &LocalMatrix) -> Result<()> {
    if m.as_rational().is_none() || *m.field() != FieldDescriptor::Rational {
        return Err(Error::UnsupportedField("a matrix over Q is required".into()));
    }
    Ok(())
}

fn analyze_prime(m: &LocalMatrix, p: u64) -> Result<PrimeEntry> {
    let local = m.with_field(FieldDescriptor::Padic(FieldProfile::new(p, DEFAULT_PRECISION)?))?;
    Ok(PrimeEntry {
        prime: p,
        is_distal: is_distal(&local)?,
        unipotent_power_exponent: unipotent_power_exponent(&local)?,
    })
}

/// Per-prime distality and unipotent-power exponents, computed in parallel
/// and reported in the order the primes were given.
pub fn global_unipotent_power(m: &LocalMatrix, primes: &[u64]) -> Result<GlobalReport> {
    require_rational(m)?;
    if primes.is_empty() {
        return Err(Error::Precondition("at least one prime is needed".into()));
    }
    m.require_invertible()?;
    let per_prime = primes
        .par_iter()
        .map(|&p| analyze_prime(m, p))
        .collect::<Result<Vec<_>>>()?;
    let mut exponent: Option<BigUint> = None;
    for e in &per_prime {
        match (&exponent, &e.unipotent_power_exponent) {
            (None, Some(r)) => exponent = Some(r.clone()),
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Precondition(format!(
                    "exponent {a} disagrees with {b} at p = {}",
                    e.prime
                )))
            }
            _ => {}
        }
    }
    Ok(GlobalReport {
        per_prime,
        is_unipotent: is_unipotent(m)?,
        exponent,
        order: CyclicClosure::of(m)?.order,
        roots_all_orders: global_roots_all_orders(m)?,
    })
}

/// Over `Q`: roots of every order exactly for unipotent matrices. Laurent
/// input stands for `F_q(t)` embedded at the `t`-adic place: only `I`.
pub fn global_roots_all_orders(m: &LocalMatrix) -> Result<AllOrdersVerdict> {
    match m.field() {
        FieldDescriptor::Rational | FieldDescriptor::Laurent(_) => roots_all_orders(m),
        FieldDescriptor::Padic(_) => Err(Error::UnsupportedField(
            "global verdicts take a matrix over Q or F_q(t)".into(),
        )),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coprimality {
    /// `gcd(d, q) = 1`; the tower holds the roots `g^{a_k}` for `k <= K`.
    Consistent { order: BigUint, tower: TowerWitness },
    /// `q | d`: no `q`-th root inside `<g>`, and no `q^j`-th root at all
    /// once `j >= no_root_depth`.
    Violated { order: BigUint, no_root_depth: u32 },
}

pub fn finite_order_coprimality(m: &LocalMatrix, q: u64, depth: usize) -> Result<Coprimality> {
    if !crate::arith::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if matches!(m.field(), FieldDescriptor::Padic(_)) {
        return Err(Error::UnsupportedField("rational or Laurent matrices only".into()));
    }
    let h = CyclicClosure::of(m)?;
    let order = h.finite_order()?.clone();
    match cyclic_tower(&h, q, depth)? {
        Some(tower) if (&order % q) != BigUint::ZERO => Ok(Coprimality::Consistent { order, tower }),
        _ => Ok(Coprimality::Violated {
            no_root_depth: torsion_escape(m.n(), m.field(), &order, q)?,
            order,
        }),
    }
}
