//! Integer helpers: primality, factorization, modular inverses, valuations.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn checked_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization of a 64-bit integer as `prime -> exponent`.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n <= 1 {
        return out;
    }
    for p in 2u64..1000 {
        if p * p > n {
            break;
        }
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    factor_into(n, &mut out);
    out
}

/// A positive integer kept in factored form, so that divisor enumeration
/// does not need to re-factor large least common multiples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factored {
    primes: BTreeMap<u64, u32>,
}

impl Factored {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn of(n: u64) -> Self {
        Factored { primes: factor_u64(n) }
    }

    pub fn prime_power(p: u64, e: u32) -> Self {
        let mut primes = BTreeMap::new();
        if e > 0 {
            primes.insert(p, e);
        }
        Factored { primes }
    }

    pub fn lcm(&self, other: &Factored) -> Factored {
        let mut primes = self.primes.clone();
        for (&p, &e) in &other.primes {
            let slot = primes.entry(p).or_insert(0);
            *slot = (*slot).max(e);
        }
        Factored { primes }
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        let mut primes = self.primes.clone();
        for (&p, &e) in &other.primes {
            *primes.entry(p).or_insert(0) += e;
        }
        Factored { primes }
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.primes.get(&p).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.primes.iter().map(|(&p, &e)| (p, e))
    }

    pub fn value(&self) -> BigUint {
        self.primes
            .iter()
            .fold(BigUint::one(), |acc, (&p, &e)| acc * BigUint::from(p).pow(e))
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut divs = vec![BigUint::one()];
        for (&p, &e) in &self.primes {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for d in &divs {
                let mut pk = d.clone();
                for _ in 0..=e {
                    next.push(pk.clone());
                    pk *= p;
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }
}

/// Exponent of `p` in the nonzero integer `x`.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// Splits `x = p^v * rest` with `rest` coprime to `p`.
pub fn split_valuation(x: &BigInt, p: u64) -> (u32, BigInt) {
    let v = valuation(x, p);
    (v, x / BigInt::from(p).pow(v))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() && g.gcd != -BigInt::one() {
        return None;
    }
    let inv = if g.gcd.is_negative() { -g.x } else { g.x };
    Some(inv.mod_floor(m))
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Multiplicative order of `a` modulo `m` (gcd(a, m) must be 1).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut order = euler_phi(m);
    for (p, _) in factor_u64(order) {
        while order % p == 0 && pow_mod(a, order / p, m) == 1 {
            order /= p;
        }
    }
    order
}

/// Smallest `e` with `p^e >= n`.
pub fn ceil_log(p: u64, n: u64) -> u32 {
    let mut e = 0;
    let mut pe: u128 = 1;
    while pe < n as u128 {
        pe *= p as u128;
        e += 1;
    }
    e
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::OutOfRange(format!("{base}^{exp} exceeds 64 bits")))
}

pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

pub fn biguint_to_u64(x: &BigUint) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::OutOfRange(format!("{x} exceeds 64 bits")))
}
