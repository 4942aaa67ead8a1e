//! Chains of successive `q`-th roots.

use super::exponent::{cyclic_root, CyclicClosure};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::unipotent::one_parameter_sample;
use crate::error::{Error, Result};
use crate::local::LocalMatrix;

/// `x_1, ..., x_K` with `x_k^q = x_{k-1}` and `x_0 = base`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerWitness {
    pub base: LocalMatrix,
    pub q: u64,
    pub depth: usize,
    pub witnesses: Vec<LocalMatrix>,
}

/// Checks every link by multiplication (exactly for exact entries, to the
/// working precision for digit entries) and that every witness is invertible.
pub fn verify_tower(w: &TowerWitness) -> bool {
    if w.witnesses.len() != w.depth || w.q < 2 {
        return false;
    }
    let mut prev = &w.base;
    for x in &w.witnesses {
        if x.n() != prev.n() || x.field() != prev.field() || x.require_invertible().is_err() {
            return false;
        }
        match x.power(w.q as i64) {
            Ok(xq) if xq.agrees_with(prev) => {}
            _ => return false,
        }
        prev = x;
    }
    true
}

/// Tower of unipotent roots `exp(log(U) / q^k)`. Every level is taken from
/// `log(U)` directly; rooting the previous level instead would compound the
/// digit loss of each log/exp round trip.
pub fn unipotent_tower(u: &LocalMatrix, q: u64, depth: usize) -> Result<TowerWitness> {
    if q < 2 {
        return Err(Error::Precondition("tower step must be at least 2".into()));
    }
    let mut witnesses = Vec::with_capacity(depth);
    let mut scale = BigInt::one();
    for _ in 0..depth {
        scale *= q;
        witnesses.push(one_parameter_sample(u, &BigRational::new(BigInt::one(), scale.clone()))?);
    }
    Ok(TowerWitness {
        base: u.clone(),
        q,
        depth,
        witnesses,
    })
}

/// Tower inside `<g>` for `g` of finite order prime to `q`; `None` when `q`
/// divides the order.
pub fn cyclic_tower(h: &CyclicClosure, q: u64, depth: usize) -> Result<Option<TowerWitness>> {
    let mut witnesses = Vec::with_capacity(depth);
    for k in 1..=depth {
        match cyclic_root(h, q, k as u32)? {
            Some(y) => witnesses.push(y),
            None => return Ok(None),
        }
    }
    Ok(Some(TowerWitness {
        base: h.generator.clone(),
        q,
        depth,
        witnesses,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::Entries;
    use crate::matrix::Matrix;
    use crate::ring::rat;

    #[test]
    fn depth_zero_and_built_towers() {
        let u = LocalMatrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]).unwrap();
        let empty = unipotent_tower(&u, 5, 0).unwrap();
        assert!(verify_tower(&empty));
        let tower = unipotent_tower(&u, 5, 4).unwrap();
        assert!(verify_tower(&tower));
    }

    #[test]
    fn tampering_detected() {
        let u = LocalMatrix::from_int_rows(&[&[1, 2], &[0, 1]]).unwrap();
        let mut tower = unipotent_tower(&u, 3, 3).unwrap();
        let Entries::Rational(m) = tower.witnesses[1].entries().clone() else { unreachable!() };
        let mut m: Matrix<_> = m;
        m.set(0, 1, m.get(0, 1) + rat(1, 1000));
        tower.witnesses[1] = LocalMatrix::rational(m);
        assert!(!verify_tower(&tower));
        let mut short = unipotent_tower(&u, 3, 3).unwrap();
        short.witnesses.pop();
        assert!(!verify_tower(&short));
    }

    #[test]
    fn cyclic_towers() {
        let g = LocalMatrix::from_int_rows(&[&[0, -1], &[1, -1]]).unwrap(); // order 3
        let h = CyclicClosure::of(&g).unwrap();
        let t = cyclic_tower(&h, 2, 4).unwrap().unwrap();
        assert!(verify_tower(&t));
        assert!(cyclic_tower(&h, 3, 1).unwrap().is_none());
    }
}
