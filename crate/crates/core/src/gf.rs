//! Small finite fields `F_q = F_p[x]/(f)` with table-driven multiplication.

use std::fmt;

use crate::arith::{checked_prime, is_prime};
use crate::error::{Error, Result};

/// Elements are packed as base-`p` digit strings: `c_0 + c_1 p + ...`
/// encodes `c_0 + c_1 x + ...`.
pub type Gf = u32;

const MAX_ORDER: u64 = 1 << 16;

#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    s: u32,
    modulus: Vec<u64>,
    q: u32,
    exp: Vec<Gf>,
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[x]/{:?}", self.p, self.modulus)
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let s = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (s..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (k, &m) in modulus.iter().enumerate() {
                let idx = d - s + k;
                prod[idx] = (prod[idx] + (p - c) * m) % p;
            }
        }
    }
    prod.truncate(s);
    prod.resize(s, 0);
    prod
}

fn poly_rem_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    // g monic
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (k, &m) in g.iter().enumerate() {
            r[shift + k] = (r[shift + k] + (p - c) * m % p) % p;
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

/// Exhaustive search for a monic factor of degree `1..=deg/2`.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let s = modulus.len() - 1;
    for d in 1..=s / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            if poly_rem_is_zero(modulus, &g, p) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// `modulus` lists the coefficients of a monic irreducible polynomial
    /// of degree `s`, constant term first.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        checked_prime(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::Precondition(
                "field modulus must be monic of degree at least 1".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Precondition(format!(
                "modulus coefficients must lie in [0, {p})"
            )));
        }
        let s = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(s)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::OutOfRange(format!("F_{p}^{s} exceeds {MAX_ORDER} elements")))?;
        if !is_irreducible(&modulus, p) {
            return Err(Error::Precondition(format!(
                "{modulus:?} is reducible over F_{p}"
            )));
        }
        let mut field = FiniteField {
            p,
            s,
            modulus,
            q: q as u32,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// The prime field `F_p` (modulus `x`).
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p > MAX_ORDER {
            checked_prime(p)?;
            return Err(Error::OutOfRange(format!("F_{p} exceeds {MAX_ORDER} elements")));
        }
        FiniteField::new(p, vec![0, 1])
    }

    /// `F_q` for a prime power `q`, modulus the first monic irreducible
    /// polynomial when coefficient vectors are read as base-`p` numerals.
    pub fn of_order(q: u64) -> Result<Self> {
        let factors = crate::arith::factor_u64(q);
        let (p, s) = match factors.iter().next() {
            Some((&p, &s)) if factors.len() == 1 => (p, s),
            _ => return Err(Error::Precondition(format!("{q} is not a prime power"))),
        };
        if q > MAX_ORDER {
            return Err(Error::OutOfRange(format!("F_{q} exceeds {MAX_ORDER} elements")));
        }
        if s == 1 {
            return FiniteField::prime(p);
        }
        let s = s as usize;
        for code in 0..q {
            let mut m = Vec::with_capacity(s + 1);
            let mut c = code;
            for _ in 0..s {
                m.push(c % p);
                c /= p;
            }
            m.push(1);
            if m[0] != 0 && is_irreducible(&m, p) {
                return FiniteField::new(p, m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn build_tables(&mut self) {
        let order = self.q as usize - 1;
        for g in 1..self.q {
            let gv = self.unpack(g);
            let mut exp = Vec::with_capacity(order);
            let mut cur = self.unpack(1);
            loop {
                exp.push(self.pack(&cur));
                cur = poly_mul_mod(&cur, &gv, &self.modulus, self.p);
                if self.pack(&cur) == 1 {
                    break;
                }
            }
            if exp.len() == order {
                let mut log = vec![0u32; self.q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn unpack(&self, x: Gf) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.s as usize);
        let mut c = x as u64;
        for _ in 0..self.s {
            out.push(c % self.p);
            c /= self.p;
        }
        out
    }

    pub fn pack(&self, coeffs: &[u64]) -> Gf {
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c % self.p) as Gf
    }

    /// Reads a coefficient list (constant first); longer lists are reduced
    /// modulo the field polynomial.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Gf {
        let p = self.p as i64;
        let reduced: Vec<u64> = coeffs.iter().map(|c| c.rem_euclid(p) as u64).collect();
        if reduced.len() <= self.s as usize {
            return self.pack(&reduced);
        }
        let mut acc = 0;
        let mut xpow = 1;
        let x = if self.s == 1 {
            self.from_int((self.p - self.modulus[0]) as i64)
        } else {
            self.p as Gf
        };
        for c in reduced {
            acc = self.add(acc, self.mul(self.from_int(c as i64), xpow));
            xpow = self.mul(xpow, x);
        }
        acc
    }

    pub fn from_int(&self, c: i64) -> Gf {
        c.rem_euclid(self.p as i64) as Gf
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        if self.s == 1 {
            return ((a as u64 + b as u64) % self.p) as Gf;
        }
        let (x, y) = (self.unpack(a), self.unpack(b));
        let sum: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, a: Gf) -> Gf {
        let x = self.unpack(a);
        let out: Vec<u64> = x.iter().map(|&u| (self.p - u) % self.p).collect();
        self.pack(&out)
    }

    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q as usize - 1;
        let idx = (self.log[a as usize] as usize + self.log[b as usize] as usize) % order;
        self.exp[idx]
    }

    pub fn inv(&self, a: Gf) -> Option<Gf> {
        if a == 0 {
            return None;
        }
        let order = self.q as usize - 1;
        Some(self.exp[(order - self.log[a as usize] as usize) % order])
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// The unique `p`-th root (Frobenius is bijective on a finite field).
    pub fn frobenius_inverse(&self, a: Gf) -> Gf {
        self.pow(a, self.q as u64 / self.p)
    }

    /// Some `y` with `y^m = a`, for `a != 0`.
    pub fn mth_root(&self, a: Gf, m: u64) -> Option<Gf> {
        if a == 0 {
            return Some(0);
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        if order == 1 {
            return Some(1);
        }
        let g = num_integer::gcd(m, order);
        if l % g != 0 {
            return None;
        }
        // m*y = l (mod order)  =>  y = (l/g) * (m/g)^{-1} mod (order/g)
        let md = order / g;
        let mg = (m / g) % md;
        let inv = (1..=md).find(|y| (mg * y) % md == 1 % md).unwrap_or(0);
        let y = ((l / g) % md) * inv % md;
        Some(self.exp[y as usize])
    }

    pub fn is_mth_power(&self, a: Gf, m: u64) -> bool {
        self.mth_root(a, m).is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        0..self.q
    }
}
