//! Bounded-precision arithmetic in `Q_p`.
//!
//! A nonzero [`PadicScalar`] is `p^v * u` with `u` a unit known modulo
//! `p^digits`; its absolute precision is `v + digits`. The number of digits
//! never exceeds the profile precision `N`, and every operation reports only
//! digits it can justify: additions lose digits on cancellation, divisions
//! keep the smaller relative precision of their operands. A zero is either
//! exact (`valuation == +inf`) or only known to vanish modulo some `p^a`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{checked_prime, mod_inverse, split_valuation, valuation as int_valuation};
use crate::error::{Error, Result};
use crate::ring::Scalar;

/// The prime `p` and the number of significant digits carried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldProfile {
    p: u64,
    precision: u32,
}

impl FieldProfile {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        checked_prime(p)?;
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(FieldProfile { p, precision })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        FieldProfile::new(self.p, precision)
    }

    pub(crate) fn pow(&self, e: u32) -> BigInt {
        BigInt::from(self.p).pow(e)
    }

    fn combine(&self, other: &FieldProfile) -> Result<FieldProfile> {
        if self.p != other.p {
            return Err(Error::ProfileMismatch(format!(
                "Q_{} against Q_{}",
                self.p, other.p
            )));
        }
        Ok(FieldProfile {
            p: self.p,
            precision: self.precision.min(other.precision),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Zero { known_to: Option<i64> },
    Nonzero { valuation: i64, unit: BigInt, digits: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    profile: FieldProfile,
    repr: Repr,
}

fn min_abs(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

impl PadicScalar {
    /// Normalizes `p^v * raw` known modulo `p^abs` (`None`: exact input,
    /// which is then rounded to the profile precision).
    fn make(profile: FieldProfile, v: i64, raw: BigInt, abs: Option<i64>) -> Self {
        let mut raw = raw;
        if let Some(a) = abs {
            if a <= v {
                return PadicScalar::approx_zero(profile, a);
            }
            raw = raw.mod_floor(&profile.pow((a - v) as u32));
        }
        if raw.is_zero() {
            return PadicScalar {
                profile,
                repr: Repr::Zero { known_to: abs },
            };
        }
        let (w, rest) = split_valuation(&raw, profile.p);
        let valuation = v + w as i64;
        let digits = match abs {
            Some(a) => ((a - valuation) as u32).min(profile.precision),
            None => profile.precision,
        };
        let unit = rest.mod_floor(&profile.pow(digits));
        PadicScalar {
            profile,
            repr: Repr::Nonzero {
                valuation,
                unit,
                digits,
            },
        }
    }

    pub fn zero(profile: FieldProfile) -> Self {
        PadicScalar {
            profile,
            repr: Repr::Zero { known_to: None },
        }
    }

    /// The class `O(p^known_to)`: zero to the stated absolute precision.
    pub fn approx_zero(profile: FieldProfile, known_to: i64) -> Self {
        PadicScalar {
            profile,
            repr: Repr::Zero {
                known_to: Some(known_to),
            },
        }
    }

    pub fn one(profile: FieldProfile) -> Self {
        Self::from_integer(&BigInt::one(), profile)
    }

    pub fn from_i64(value: i64, profile: FieldProfile) -> Self {
        Self::from_integer(&BigInt::from(value), profile)
    }

    pub fn from_integer(value: &BigInt, profile: FieldProfile) -> Self {
        Self::make(profile, 0, value.clone(), None)
    }

    /// Image of a rational number, correct to `N` significant digits.
    pub fn from_rational(value: &BigRational, profile: FieldProfile) -> Self {
        if value.is_zero() {
            return Self::zero(profile);
        }
        let (vn, n) = split_valuation(value.numer(), profile.p);
        let (vd, d) = split_valuation(value.denom(), profile.p);
        let v = vn as i64 - vd as i64;
        let modulus = profile.pow(profile.precision);
        let inv = mod_inverse(&d, &modulus).expect("denominator part is a unit");
        Self::make(profile, v, n * inv, Some(v + profile.precision as i64))
    }

    /// `p^v * unit` with `unit` known modulo `p^digits`.
    pub fn from_parts(profile: FieldProfile, valuation: i64, unit: BigInt, digits: u32) -> Result<Self> {
        if digits == 0 || digits > profile.precision {
            return Err(Error::Precondition(format!(
                "digit count {digits} outside 1..={}",
                profile.precision
            )));
        }
        if unit.is_zero() || unit.is_negative() || unit >= profile.pow(digits) {
            return Err(Error::Precondition(format!(
                "unit digits {unit} outside (0, p^{digits})"
            )));
        }
        if (&unit % profile.p).is_zero() {
            return Err(Error::Precondition(format!("unit digits {unit} divisible by p")));
        }
        Ok(PadicScalar {
            profile,
            repr: Repr::Nonzero {
                valuation,
                unit,
                digits,
            },
        })
    }

    pub fn profile(&self) -> FieldProfile {
        self.profile
    }

    pub fn p(&self) -> u64 {
        self.profile.p
    }

    /// The valuation, or `None` when no nonzero digit is known.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { valuation, .. } => Some(*valuation),
        }
    }

    pub fn unit_digits(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Number of significant digits (zero for any zero).
    pub fn digits(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { digits, .. } => *digits,
        }
    }

    /// The exponent `a` such that the value is known modulo `p^a`
    /// (`None` for an exact zero).
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { known_to } => *known_to,
            Repr::Nonzero {
                valuation, digits, ..
            } => Some(valuation + *digits as i64),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { known_to: None })
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let profile = self.profile.combine(&other.profile)?;
        let abs = min_abs(self.absolute_precision(), other.absolute_precision());
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, Repr::Zero { .. }) => PadicScalar {
                profile,
                repr: Repr::Zero { known_to: abs },
            },
            (Repr::Zero { .. }, Repr::Nonzero { valuation, unit, .. })
            | (Repr::Nonzero { valuation, unit, .. }, Repr::Zero { .. }) => {
                Self::make(profile, *valuation, unit.clone(), abs)
            }
            (
                Repr::Nonzero {
                    valuation: v1,
                    unit: u1,
                    ..
                },
                Repr::Nonzero {
                    valuation: v2,
                    unit: u2,
                    ..
                },
            ) => {
                let vm = (*v1).min(*v2);
                let raw = u1 * profile.pow((v1 - vm) as u32) + u2 * profile.pow((v2 - vm) as u32);
                Self::make(profile, vm, raw, abs)
            }
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let profile = self.profile.combine(&other.profile)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { known_to: a }, Repr::Zero { known_to: b }) => PadicScalar {
                profile,
                repr: Repr::Zero {
                    known_to: match (a, b) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    },
                },
            },
            (Repr::Zero { known_to }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { known_to }) => PadicScalar {
                profile,
                repr: Repr::Zero {
                    known_to: known_to.map(|a| a + valuation),
                },
            },
            (
                Repr::Nonzero {
                    valuation: v1,
                    unit: u1,
                    digits: d1,
                },
                Repr::Nonzero {
                    valuation: v2,
                    unit: u2,
                    digits: d2,
                },
            ) => {
                let v = v1 + v2;
                let d = (*d1).min(*d2);
                Self::make(profile, v, u1 * u2, Some(v + d as i64))
            }
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let profile = self.profile.combine(&other.profile)?;
        let (v2, u2, d2) = match &other.repr {
            Repr::Zero { known_to: None } => return Err(Error::DivisionByZero),
            Repr::Zero { known_to: Some(a) } => {
                return Err(Error::InsufficientPrecision(format!(
                    "divisor is O({}^{a})",
                    profile.p
                )))
            }
            Repr::Nonzero {
                valuation,
                unit,
                digits,
            } => (*valuation, unit, *digits),
        };
        Ok(match &self.repr {
            Repr::Zero { known_to } => PadicScalar {
                profile,
                repr: Repr::Zero {
                    known_to: known_to.map(|a| a - v2),
                },
            },
            Repr::Nonzero {
                valuation: v1,
                unit: u1,
                digits: d1,
            } => {
                let d = (*d1).min(d2);
                let inv = mod_inverse(u2, &profile.pow(d)).expect("unit digits are invertible");
                let v = v1 - v2;
                Self::make(profile, v, u1 * inv, Some(v + d as i64))
            }
        })
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero {
                valuation,
                unit,
                digits,
            } => Self::make(
                self.profile,
                *valuation,
                -unit.clone(),
                Some(valuation + *digits as i64),
            ),
        }
    }

    pub fn pow_i64(&self, k: i64) -> Result<Self> {
        let base = if k < 0 {
            Self::one(self.profile).try_div(self)?
        } else {
            self.clone()
        };
        Ok(base.pow_u64(k.unsigned_abs()))
    }

    /// Multiplies by `p^k` without touching the digits.
    pub fn shift(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Zero { known_to } => PadicScalar {
                profile: self.profile,
                repr: Repr::Zero {
                    known_to: known_to.map(|a| a + k),
                },
            },
            Repr::Nonzero {
                valuation,
                unit,
                digits,
            } => PadicScalar {
                profile: self.profile,
                repr: Repr::Nonzero {
                    valuation: valuation + k,
                    unit: unit.clone(),
                    digits: *digits,
                },
            },
        }
    }

    /// The unit `u` in `x = p^v * u`.
    pub fn unit_part(&self) -> Result<Self> {
        match self.valuation() {
            Some(v) => Ok(self.shift(-v)),
            None => Err(Error::Precondition("zero has no unit part".into())),
        }
    }

    /// `x mod p` for a unit.
    pub fn residue(&self) -> Result<u64> {
        match &self.repr {
            Repr::Nonzero {
                valuation: 0, unit, ..
            } => Ok((unit % self.profile.p).to_u64().expect("residue fits")),
            _ => Err(Error::Precondition("residue requires a unit".into())),
        }
    }

    /// The value of an integral element modulo `p^abs` as an integer in
    /// `[0, p^abs)`. Fails if fewer than `abs` digits are known.
    pub fn integer_mod(&self, abs: u32) -> Result<BigInt> {
        let modulus = self.profile.pow(abs);
        match &self.repr {
            Repr::Zero { known_to } => match known_to {
                Some(a) if *a < abs as i64 => Err(Error::InsufficientPrecision(format!(
                    "value known modulo p^{a}, needed p^{abs}"
                ))),
                _ => Ok(BigInt::zero()),
            },
            Repr::Nonzero {
                valuation,
                unit,
                digits,
            } => {
                if *valuation >= abs as i64 {
                    return Ok(BigInt::zero());
                }
                if *valuation < 0 {
                    return Err(Error::Precondition("element is not integral".into()));
                }
                if valuation + (*digits as i64) < abs as i64 {
                    return Err(Error::InsufficientPrecision(format!(
                        "value known modulo p^{}, needed p^{abs}",
                        valuation + *digits as i64
                    )));
                }
                Ok((unit * self.profile.pow(*valuation as u32)).mod_floor(&modulus))
            }
        }
    }

    /// True when `self - other` vanishes to the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.try_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// The root of unity congruent to a unit: the `(p-1)`-st root of unity
    /// `w = x mod p` for odd `p`, and the sign `w = +-1` with `w = x mod 4`
    /// for `p = 2`.
    pub fn teichmuller(&self) -> Result<Self> {
        let (unit, digits) = match &self.repr {
            Repr::Nonzero {
                valuation: 0,
                unit,
                digits,
            } => (unit, *digits),
            _ => return Err(Error::Precondition("Teichmuller lift needs a unit".into())),
        };
        let p = self.profile.p;
        if p == 2 {
            if digits < 2 {
                return Err(Error::InsufficientPrecision(
                    "sign of a 2-adic unit needs two digits".into(),
                ));
            }
            let sign = if (unit % 4u32) == BigInt::one() { 1 } else { -1 };
            return Ok(Self::make(self.profile, 0, BigInt::from(sign), Some(digits as i64)));
        }
        let modulus = self.profile.pow(digits);
        let residue = unit % p;
        let exponent = BigInt::from(p).pow(digits - 1);
        let omega = residue.modpow(&exponent, &modulus);
        Ok(Self::make(self.profile, 0, omega, Some(digits as i64)))
    }

    fn principal_floor(&self) -> i64 {
        if self.profile.p == 2 {
            2
        } else {
            1
        }
    }

    /// Logarithm of a principal unit by its power series. The result keeps
    /// the absolute precision of `x - 1`; for odd `p` its valuation equals
    /// `v(x - 1)`.
    pub fn principal_log(&self) -> Result<Self> {
        let z = self.try_sub(&Self::one(self.profile))?;
        let floor = self.principal_floor();
        let (w, abs) = match (z.valuation(), z.absolute_precision()) {
            (_, None) => return Ok(Self::zero(self.profile)),
            (None, Some(a)) if a >= floor => return Ok(z),
            (None, Some(a)) => {
                return Err(Error::InsufficientPrecision(format!(
                    "x - 1 is only known modulo p^{a}"
                )))
            }
            (Some(w), Some(a)) => (w, a),
        };
        if w < floor {
            return Err(Error::Precondition(format!(
                "log needs v(x - 1) >= {floor}, got {w}"
            )));
        }
        let p = self.profile.p;
        let mut sum = Self::zero(self.profile);
        let mut power = z.clone();
        let mut i: u64 = 1;
        loop {
            let floor_log = (i as f64).log(p as f64).floor() as i64;
            let floor_log = if (p as u128).pow(floor_log as u32 + 1) <= i as u128 {
                floor_log + 1
            } else {
                floor_log
            };
            if i as i64 * w - floor_log >= abs {
                break;
            }
            let term = power.try_div(&Self::from_i64(i as i64, self.profile))?;
            sum = if i % 2 == 1 {
                sum.try_add(&term)?
            } else {
                sum.try_sub(&term)?
            };
            power = power.try_mul(&z)?;
            i += 1;
        }
        Ok(sum)
    }

    /// Exponential of an element with `v(z) >= 1` (`>= 2` when `p = 2`).
    pub fn principal_exp(&self) -> Result<Self> {
        let floor = self.principal_floor();
        let one = Self::one(self.profile);
        let (w, abs) = match (self.valuation(), self.absolute_precision()) {
            (_, None) => return Ok(one),
            (None, Some(a)) if a >= floor => {
                return Ok(Self::make(self.profile, 0, BigInt::one(), Some(a)))
            }
            (None, Some(a)) => {
                return Err(Error::InsufficientPrecision(format!(
                    "argument only known modulo p^{a}"
                )))
            }
            (Some(w), Some(a)) => (w, a),
        };
        if w < floor {
            return Err(Error::Precondition(format!(
                "exp needs v(z) >= {floor}, got {w}"
            )));
        }
        let pm1 = self.profile.p as i64 - 1;
        let mut sum = one.clone();
        let mut term = one;
        let mut i: i64 = 1;
        // v(z^i / i!) >= i*w - (i-1)/(p-1), nondecreasing in i.
        while (i * w - abs) * pm1 < i - 1 {
            term = term
                .try_mul(self)?
                .try_div(&Self::from_i64(i, self.profile))?;
            sum = sum.try_add(&term)?;
            i += 1;
        }
        Ok(sum)
    }

    /// Number of unit digits needed before `kth_root_exists` is decided;
    /// beyond it the congruence describing `k`-th powers has stabilized.
    pub fn kth_power_stable_digits(p: u64, k: u64) -> u32 {
        let (a, _) = split_prime_power(k, p);
        match (p, a) {
            (_, 0) => 1,
            (2, a) => a + 2,
            (_, a) => a + 1,
        }
    }

    /// Decides whether `y^k = x` has a solution `y` in `Q_p`.
    pub fn kth_root_exists(&self, k: i64) -> Result<bool> {
        if k <= 0 {
            return Err(Error::Precondition(format!("root order must be positive, got {k}")));
        }
        let k = k as u64;
        let v = self
            .valuation()
            .ok_or_else(|| Error::Precondition("k-th root test needs a nonzero scalar".into()))?;
        if v.rem_euclid(k as i64) != 0 {
            return Ok(false);
        }
        let u = self.unit_part()?;
        let p = self.profile.p;
        let digits = u.digits();
        let (a, _) = split_prime_power(k, p);
        let needed = Self::kth_power_stable_digits(p, k);
        if p == 2 {
            if a == 0 {
                return Ok(true);
            }
            if digits < needed {
                return Err(insufficient_root_digits(digits, needed, k));
            }
            let modulus = BigInt::from(2u32).pow(needed);
            return Ok((u.unit_digits().unwrap() % modulus).is_one());
        }
        let r = u.residue()?;
        let g = num_integer::gcd(k, p - 1);
        if pow_mod_u64(r, (p - 1) / g, p) != 1 {
            return Ok(false);
        }
        if a == 0 {
            return Ok(true);
        }
        if digits < needed {
            return Err(insufficient_root_digits(digits, needed, k));
        }
        let principal = u.try_div(&u.teichmuller()?)?;
        let modulus = self.profile.pow(needed);
        Ok((principal.unit_digits().unwrap() % modulus).is_one())
    }

    /// A `k`-th root, or `None` exactly when none exists. The tame part is
    /// lifted by Newton iteration from a residue root; the wild part is
    /// `exp(log(u) / p^a)`.
    pub fn kth_root(&self, k: i64) -> Result<Option<Self>> {
        if !self.kth_root_exists(k)? {
            return Ok(None);
        }
        let k = k as u64;
        let p = self.profile.p;
        let v = self.valuation().unwrap() / k as i64;
        let u = self.unit_part()?;
        let (a, m) = split_prime_power(k, p);
        let wild_root = |x: &Self| -> Result<Self> {
            if a == 0 {
                return Ok(x.clone());
            }
            let pa = Self::from_integer(&self.profile.pow(a), self.profile);
            x.principal_log()?.try_div(&pa)?.principal_exp()
        };
        let unit_root = if p == 2 {
            if a == 0 {
                let sign = if u.digits() >= 2 {
                    u.teichmuller()?
                } else {
                    Self::one(self.profile)
                };
                let principal = u.try_mul(&sign)?;
                sign.try_mul(&principal.hensel_root(m)?)?
            } else {
                wild_root(&u)?.hensel_root(m)?
            }
        } else {
            let r = u.residue()?;
            let r0 = (1..p)
                .find(|&c| pow_mod_u64(c, k, p) == r)
                .expect("residue root exists when the test passes");
            let zeta = Self::make(self.profile, 0, BigInt::from(r0), Some(u.digits() as i64))
                .teichmuller()?;
            let principal = u.try_div(&u.teichmuller()?)?;
            zeta.try_mul(&wild_root(&principal)?.hensel_root(m)?)?
        };
        Ok(Some(unit_root.shift(v)))
    }

    /// The `m`-th root congruent to 1 of a principal unit, `p` not dividing `m`.
    fn hensel_root(&self, m: u64) -> Result<Self> {
        if m == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        let digits = self.digits();
        let modulus = self.profile.pow(digits);
        let target = self.unit_digits().unwrap().clone();
        let root = hensel_lift_root(&target, m, &BigInt::one(), &modulus);
        Ok(Self::make(self.profile, 0, root, Some(digits as i64)))
    }
}

fn insufficient_root_digits(digits: u32, needed: u32, k: u64) -> Error {
    Error::InsufficientPrecision(format!(
        "deciding {k}-th powers needs {needed} unit digits, have {digits}"
    ))
}

/// Splits `k = p^a * m` with `p` not dividing `m`.
pub fn split_prime_power(mut k: u64, p: u64) -> (u32, u64) {
    let mut a = 0;
    while k % p == 0 {
        k /= p;
        a += 1;
    }
    (a, k)
}

pub(crate) fn pow_mod_u64(base: u64, exp: u64, m: u64) -> u64 {
    let mut acc: u128 = 1 % m as u128;
    let mut b = (base % m) as u128;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Newton iteration for `y^m = target` modulo `modulus`, starting from a
/// simple root `start` of the reduction.
pub(crate) fn hensel_lift_root(target: &BigInt, m: u64, start: &BigInt, modulus: &BigInt) -> BigInt {
    let mut y = start.mod_floor(modulus);
    let m_big = BigInt::from(m);
    for _ in 0..256 {
        let f = (y.modpow(&m_big, modulus) - target).mod_floor(modulus);
        if f.is_zero() {
            break;
        }
        let df = (&m_big * y.modpow(&BigInt::from(m - 1), modulus)).mod_floor(modulus);
        let inv = mod_inverse(&df, modulus).expect("derivative is a unit");
        y = (y - f * inv).mod_floor(modulus);
    }
    y
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.profile.p;
        match &self.repr {
            Repr::Zero { known_to: None } => write!(f, "0"),
            Repr::Zero { known_to: Some(a) } => write!(f, "O({p}^{a})"),
            Repr::Nonzero {
                valuation,
                unit,
                digits,
            } => write!(f, "{unit}*{p}^{valuation} + O({p}^{})", valuation + *digits as i64),
        }
    }
}

impl Scalar for PadicScalar {
    type Ctx = FieldProfile;

    fn context(&self) -> FieldProfile {
        self.profile
    }

    fn zero_in(ctx: &FieldProfile) -> Self {
        Self::zero(*ctx)
    }

    fn one_in(ctx: &FieldProfile) -> Self {
        Self::one(*ctx)
    }

    fn from_i64_in(ctx: &FieldProfile, value: i64) -> Self {
        Self::from_i64(value, *ctx)
    }

    fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("p-adic profile mismatch")
    }

    fn minus(&self, other: &Self) -> Self {
        self.try_sub(other).expect("p-adic profile mismatch")
    }

    fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("p-adic profile mismatch")
    }

    fn negated(&self) -> Self {
        self.neg()
    }

    fn inverse(&self) -> Result<Self> {
        Self::one(self.profile).try_div(self)
    }

    fn divided(&self, other: &Self) -> Result<Self> {
        self.try_div(other)
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn vanishes_exactly(&self) -> bool {
        self.is_exact_zero()
    }

    fn is_exact(&self) -> bool {
        self.is_exact_zero()
    }

    fn pivot_weight(&self) -> Option<i64> {
        self.valuation()
    }
}

/// `"inf"` or an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValuationJson {
    Finite(i64),
    Infinite(String),
}

/// Wire form `{"p", "precision", "valuation", "unit_digits"}`. An inexact
/// zero `O(p^a)` is written with valuation `a`, unit digits `"0"` and
/// precision 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicScalarJson {
    pub p: u64,
    pub precision: u32,
    pub valuation: ValuationJson,
    pub unit_digits: String,
}

impl PadicScalar {
    pub fn to_json(&self) -> PadicScalarJson {
        let p = self.profile.p;
        match &self.repr {
            Repr::Zero { known_to: None } => PadicScalarJson {
                p,
                precision: self.profile.precision,
                valuation: ValuationJson::Infinite("inf".into()),
                unit_digits: "0".into(),
            },
            Repr::Zero { known_to: Some(a) } => PadicScalarJson {
                p,
                precision: 0,
                valuation: ValuationJson::Finite(*a),
                unit_digits: "0".into(),
            },
            Repr::Nonzero {
                valuation,
                unit,
                digits,
            } => PadicScalarJson {
                p,
                precision: *digits,
                valuation: ValuationJson::Finite(*valuation),
                unit_digits: unit.to_string(),
            },
        }
    }

    /// Reads the wire form; `cap` (when given) is the profile precision the
    /// element is placed in.
    pub fn from_json(json: &PadicScalarJson, cap: Option<u32>) -> Result<Self> {
        let unit: BigInt = json
            .unit_digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad unit digits {:?}", json.unit_digits)))?;
        match &json.valuation {
            ValuationJson::Infinite(tag) => {
                if tag != "inf" {
                    return Err(Error::Parse(format!("bad valuation {tag:?}")));
                }
                let profile = FieldProfile::new(json.p, cap.unwrap_or(json.precision.max(1)))?;
                Ok(Self::zero(profile))
            }
            ValuationJson::Finite(v) if unit.is_zero() => {
                let profile = FieldProfile::new(json.p, cap.unwrap_or(json.precision.max(1)))?;
                Ok(Self::approx_zero(profile, *v))
            }
            ValuationJson::Finite(v) => {
                let profile = FieldProfile::new(json.p, cap.unwrap_or(json.precision))?;
                Self::from_parts(profile, *v, unit, json.precision)
            }
        }
    }
}

impl Serialize for PadicScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PadicScalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = PadicScalarJson::deserialize(deserializer)?;
        Self::from_json(&json, None).map_err(serde::de::Error::custom)
    }
}

/// Valuation of a nonzero rational at `p`.
pub fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_int};

    fn prof(p: u64, n: u32) -> FieldProfile {
        FieldProfile::new(p, n).unwrap()
    }

    fn q(p: u64, n: u32, a: i64, b: i64) -> PadicScalar {
        PadicScalar::from_rational(&rat(a, b), prof(p, n))
    }

    #[test]
    fn profile_rejects_composites_and_zero_precision() {
        assert_eq!(FieldProfile::new(6, 4), Err(Error::NotPrime(6)));
        assert_eq!(FieldProfile::new(5, 0), Err(Error::ZeroPrecision));
    }

    #[test]
    fn from_rational_examples() {
        let x = q(5, 4, 50, 1);
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x.unit_digits(), Some(&BigInt::from(2)));
        assert!(PadicScalar::from_rational(&rat_int(0), prof(7, 4)).is_exact_zero());
        let third = q(5, 4, 1, 3);
        assert_eq!(third.valuation(), Some(0));
        assert_eq!(third.unit_digits(), Some(&BigInt::from(417)));
        assert_eq!(q(5, 4, 1, 5).valuation(), Some(-1));
    }

    #[test]
    fn arithmetic_examples() {
        let p = q(5, 4, 5, 1);
        let sq = p.try_mul(&p).unwrap();
        assert_eq!(sq.valuation(), Some(2));
        assert_eq!(sq.unit_digits(), Some(&BigInt::one()));
        let x = q(5, 4, 17, 3);
        assert!(x.try_add(&x.neg()).unwrap().is_zero());
        let third = PadicScalar::one(prof(5, 4)).try_div(&q(5, 4, 3, 1)).unwrap();
        assert_eq!(third.unit_digits(), Some(&BigInt::from(417)));
    }

    #[test]
    fn cancellation_loses_digits_honestly() {
        let a = q(5, 4, 1, 1);
        let b = q(5, 4, 26, 1);
        let d = b.try_sub(&a).unwrap();
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.digits(), 2);
        assert_eq!(d.absolute_precision(), Some(4));
        let z = a.try_sub(&a).unwrap();
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(z.absolute_precision(), Some(4));
    }

    #[test]
    fn division_errors() {
        let one = q(5, 4, 1, 1);
        assert_eq!(one.try_div(&PadicScalar::zero(prof(5, 4))), Err(Error::DivisionByZero));
        let fuzzy = one.try_sub(&one).unwrap();
        assert!(matches!(one.try_div(&fuzzy), Err(Error::InsufficientPrecision(_))));
        assert!(matches!(one.try_add(&q(7, 4, 1, 1)), Err(Error::ProfileMismatch(_))));
    }

    #[test]
    fn teichmuller_examples() {
        let t = q(5, 3, 2, 1).teichmuller().unwrap();
        assert_eq!(t.unit_digits(), Some(&BigInt::from(57)));
        let one = q(5, 3, 26, 1).teichmuller().unwrap();
        assert_eq!(one.unit_digits(), Some(&BigInt::one()));
        let minus = q(7, 4, -1, 1).teichmuller().unwrap();
        assert_eq!(minus.unit_digits(), Some(&BigInt::from(7i64.pow(4) - 1)));
        assert!(q(5, 3, 5, 1).teichmuller().is_err());
        let two_adic = q(2, 6, 7, 1).teichmuller().unwrap();
        assert!(two_adic.agrees_with(&q(2, 6, -1, 1)));
    }

    #[test]
    fn teichmuller_brute_force_oracle() {
        // y in [0, 125) with y^4 = 1 mod 125 and y = 2 mod 5.
        let hits: Vec<u64> = (0..125u64)
            .filter(|y| pow_mod_u64(*y, 4, 125) == 1 && y % 5 == 2)
            .collect();
        assert_eq!(hits, vec![57]);
    }

    #[test]
    fn log_examples() {
        assert!(q(5, 6, 1, 1).principal_log().unwrap().is_zero());
        assert_eq!(q(5, 6, 6, 1).principal_log().unwrap().valuation(), Some(1));
        assert_eq!(q(5, 6, 26, 1).principal_log().unwrap().valuation(), Some(2));
        assert!(matches!(q(5, 6, 2, 1).principal_log(), Err(Error::Precondition(_))));
        assert!(matches!(q(2, 6, 3, 1).principal_log(), Err(Error::Precondition(_))));
    }

    #[test]
    fn log_series_oracle() {
        // log(1 + 5) mod 5^6 summed directly over rationals with many terms.
        let p = 5u64;
        let modulus = BigInt::from(p).pow(6);
        let mut acc = BigRational::zero();
        for i in 1..60i64 {
            let term = BigRational::from_integer(BigInt::from(5).pow(i as u32)) / rat_int(i);
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        let expect = PadicScalar::from_rational(&acc, prof(5, 6));
        let got = q(5, 6, 6, 1).principal_log().unwrap();
        assert!(got.agrees_with(&expect), "{got} vs {expect}");
        let _ = modulus;
    }

    #[test]
    fn exp_inverts_log() {
        for x in [6i64, 11, 26, 31, 126] {
            let y = q(5, 8, x, 1);
            let back = y.principal_log().unwrap().principal_exp().unwrap();
            assert!(back.agrees_with(&y), "{x}");
        }
        let y = q(2, 10, 5, 1);
        assert!(y.principal_log().unwrap().principal_exp().unwrap().agrees_with(&y));
    }

    #[test]
    fn root_existence_examples() {
        assert!(q(7, 5, 1, 1).kth_root_exists(12).unwrap());
        assert!(!q(7, 5, 2, 1).kth_root_exists(3).unwrap());
        assert!(!q(5, 5, 6, 1).kth_root_exists(5).unwrap());
        assert!(q(5, 5, 26, 1).kth_root_exists(5).unwrap());
        assert!(!q(5, 5, 5, 1).kth_root_exists(2).unwrap());
        assert!(q(2, 5, 17, 1).kth_root_exists(2).unwrap());
        assert!(!q(2, 5, 5, 1).kth_root_exists(2).unwrap());
        assert!(matches!(q(5, 4, 1, 1).kth_root_exists(0), Err(Error::Precondition(_))));
        assert!(matches!(
            PadicScalar::zero(prof(5, 4)).kth_root_exists(2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cubes_mod_seven_by_exhaustion() {
        let cubes: Vec<u64> = (1..7u64).map(|y| pow_mod_u64(y, 3, 7)).collect();
        assert!(cubes.iter().all(|c| *c == 1 || *c == 6));
    }

    #[test]
    fn fifth_powers_mod_625_exclude_six() {
        let hit = (1..625u64).filter(|y| y % 5 != 0).any(|y| pow_mod_u64(y, 5, 625) == 6);
        assert!(!hit);
    }

    #[test]
    fn insufficient_digits_reported() {
        let x = PadicScalar::from_parts(prof(5, 1), 0, BigInt::one(), 1).unwrap();
        assert!(matches!(x.kth_root_exists(5), Err(Error::InsufficientPrecision(_))));
        assert!(x.kth_root_exists(2).unwrap());
    }

    #[test]
    fn root_construction_examples() {
        let r = q(5, 6, 25, 1).kth_root(2).unwrap().unwrap();
        assert!(r.agrees_with(&q(5, 6, 5, 1)) || r.agrees_with(&q(5, 6, -5, 1)));
        assert!(q(5, 6, 5, 1).kth_root(2).unwrap().is_none());
        let six = q(5, 4, 6, 1);
        let s = six.kth_root(2).unwrap().unwrap();
        assert!(s.try_mul(&s).unwrap().agrees_with(&six));
        assert_eq!(s.digits(), 4);
    }

    #[test]
    fn wild_roots_reproduce_input() {
        for (p, x, k) in [(5u64, 26i64, 5i64), (3, 10, 3), (3, 28, 9), (2, 17, 2), (2, 33, 4), (7, 50, 14), (2, 3, 3)] {
            let s = q(p, 10, x, 1);
            let r = s.kth_root(k).unwrap().expect("root exists");
            assert!(r.pow_u64(k as u64).agrees_with(&s), "p={p} x={x} k={k}: {r}");
        }
    }

    #[test]
    fn json_round_trip() {
        for x in [q(5, 4, 50, 1), q(5, 4, 1, 3), PadicScalar::zero(prof(7, 4))] {
            let text = serde_json::to_string(&x).unwrap();
            let back: PadicScalar = serde_json::from_str(&text).unwrap();
            assert_eq!(back, x, "{text}");
        }
        let text = serde_json::to_string(&q(5, 4, 50, 1)).unwrap();
        assert_eq!(text, r#"{"p":5,"precision":4,"valuation":2,"unit_digits":"2"}"#);
    }
}
