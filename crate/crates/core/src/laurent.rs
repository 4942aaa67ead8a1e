//! Laurent series over a finite field, `F_q((t))`.
//!
//! A nonzero [`LaurentScalar`] is `t^v * (c_0 + c_1 t + ...)` with `c_0 != 0`.
//! It is either an exact Laurent polynomial or known only modulo `t^(v+w)`
//! for a window `w <= N`. Zeros are exact or `O(t^a)`, as in [`crate::padic`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FiniteField, Gf};
use crate::padic::{split_prime_power, ValuationJson};
use crate::ring::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentProfile {
    field: Arc<FiniteField>,
    precision: u32,
}

impl LaurentProfile {
    pub fn new(field: FiniteField, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(LaurentProfile {
            field: Arc::new(field),
            precision,
        })
    }

    /// `F_q((t))` with `F_q = F_p[x]/(modulus)`.
    pub fn from_modulus(p: u64, modulus: Vec<u64>, precision: u32) -> Result<Self> {
        Self::new(FiniteField::new(p, modulus)?, precision)
    }

    /// `F_p((t))`.
    pub fn prime_field(p: u64, precision: u32) -> Result<Self> {
        Self::new(FiniteField::prime(p)?, precision)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(LaurentProfile {
            field: self.field.clone(),
            precision,
        })
    }

    fn combine(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::ProfileMismatch(format!(
                "{:?} against {:?}",
                self.field, other.field
            )));
        }
        Ok(LaurentProfile {
            field: self.field.clone(),
            precision: self.precision.min(other.precision),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Zero {
        known_to: Option<i64>,
    },
    Nonzero {
        valuation: i64,
        coeffs: Vec<Gf>,
        window: Option<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentScalar {
    profile: LaurentProfile,
    repr: Repr,
}

fn min_abs(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn convolve(field: &FiniteField, a: &[Gf], b: &[Gf], limit: Option<usize>) -> Vec<Gf> {
    let full = a.len() + b.len() - 1;
    let len = limit.map_or(full, |l| l.min(full));
    let mut out = vec![0; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    out
}

/// First `len` coefficients of `1 / (c_0 + c_1 t + ...)`.
fn series_inverse(field: &FiniteField, c: &[Gf], len: usize) -> Vec<Gf> {
    let b0 = field.inv(c[0]).expect("leading coefficient is nonzero");
    let mut b = vec![0; len];
    if len == 0 {
        return b;
    }
    b[0] = b0;
    for j in 1..len {
        let mut acc = 0;
        for i in 1..=j.min(c.len() - 1) {
            acc = field.add(acc, field.mul(c[i], b[j - i]));
        }
        b[j] = field.neg(field.mul(b0, acc));
    }
    b
}

impl LaurentScalar {
    fn make(profile: LaurentProfile, v: i64, raw: Vec<Gf>, abs: Option<i64>) -> Self {
        let mut raw = raw;
        if let Some(a) = abs {
            if a <= v {
                return Self::approx_zero(profile, a);
            }
            raw.truncate((a - v) as usize);
        }
        let lead = match raw.iter().position(|&c| c != 0) {
            Some(i) => i,
            None => {
                return LaurentScalar {
                    profile,
                    repr: Repr::Zero { known_to: abs },
                }
            }
        };
        raw.drain(..lead);
        let valuation = v + lead as i64;
        let window = match abs {
            None => {
                while raw.last() == Some(&0) {
                    raw.pop();
                }
                None
            }
            Some(a) => {
                let w = ((a - valuation) as u32).min(profile.precision);
                raw.resize(w as usize, 0);
                Some(w)
            }
        };
        LaurentScalar {
            profile,
            repr: Repr::Nonzero {
                valuation,
                coeffs: raw,
                window,
            },
        }
    }

    pub fn zero(profile: LaurentProfile) -> Self {
        LaurentScalar {
            profile,
            repr: Repr::Zero { known_to: None },
        }
    }

    pub fn approx_zero(profile: LaurentProfile, known_to: i64) -> Self {
        LaurentScalar {
            profile,
            repr: Repr::Zero {
                known_to: Some(known_to),
            },
        }
    }

    pub fn constant(profile: LaurentProfile, c: Gf) -> Self {
        Self::make(profile, 0, vec![c], None)
    }

    pub fn one(profile: LaurentProfile) -> Self {
        Self::constant(profile, 1)
    }

    /// The uniformizer `t`.
    pub fn t(profile: LaurentProfile) -> Self {
        Self::make(profile, 1, vec![1], None)
    }

    pub fn from_i64(value: i64, profile: LaurentProfile) -> Self {
        let c = profile.field.from_int(value);
        Self::constant(profile, c)
    }

    /// `t^v * sum coeffs[i] t^i`; exact when `window` is `None`, otherwise
    /// known modulo `t^(v + window)`.
    pub fn from_coeffs(profile: LaurentProfile, v: i64, coeffs: Vec<Gf>, window: Option<u32>) -> Self {
        Self::make(profile, v, coeffs, window.map(|w| v + w as i64))
    }

    pub fn profile(&self) -> &LaurentProfile {
        &self.profile
    }

    pub fn field(&self) -> &FiniteField {
        &self.profile.field
    }

    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { valuation, .. } => Some(*valuation),
        }
    }

    pub fn coeffs(&self) -> &[Gf] {
        match &self.repr {
            Repr::Zero { .. } => &[],
            Repr::Nonzero { coeffs, .. } => coeffs,
        }
    }

    /// Window length of a nonzero inexact value.
    pub fn window(&self) -> Option<u32> {
        match &self.repr {
            Repr::Nonzero { window, .. } => *window,
            Repr::Zero { .. } => None,
        }
    }

    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { known_to } => *known_to,
            Repr::Nonzero {
                valuation,
                window,
                ..
            } => window.map(|w| valuation + w as i64),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { known_to: None })
    }

    /// No precision bound: an exact Laurent polynomial or the exact zero.
    pub fn is_exact(&self) -> bool {
        self.absolute_precision().is_none()
    }

    /// The constant `c` if the value is exactly `c` in `F_q`.
    pub fn as_constant(&self) -> Option<Gf> {
        match &self.repr {
            Repr::Zero { known_to: None } => Some(0),
            Repr::Nonzero {
                valuation: 0,
                coeffs,
                window: None,
            } if coeffs.len() == 1 => Some(coeffs[0]),
            _ => None,
        }
    }

    /// Coefficient of `t^e`, or `None` beyond the known window.
    pub fn coeff_at(&self, e: i64) -> Option<Gf> {
        if let Some(a) = self.absolute_precision() {
            if e >= a {
                return None;
            }
        }
        match &self.repr {
            Repr::Zero { .. } => Some(0),
            Repr::Nonzero {
                valuation, coeffs, ..
            } => {
                let i = e - valuation;
                if i < 0 {
                    Some(0)
                } else {
                    Some(coeffs.get(i as usize).copied().unwrap_or(0))
                }
            }
        }
    }

    /// Drops digits so that at most `w` significant coefficients remain.
    pub fn truncated(&self, w: u32) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero {
                valuation, coeffs, window,
            } => {
                let w = window.map_or(w, |cur| cur.min(w));
                Self::make(
                    self.profile.clone(),
                    *valuation,
                    coeffs.clone(),
                    Some(valuation + w as i64),
                )
            }
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        match &mut out.repr {
            Repr::Zero { known_to } => *known_to = known_to.map(|a| a + k),
            Repr::Nonzero { valuation, .. } => *valuation += k,
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let profile = self.profile.combine(&other.profile)?;
        let abs = min_abs(self.absolute_precision(), other.absolute_precision());
        let field = profile.field.clone();
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, Repr::Zero { .. }) => LaurentScalar {
                profile,
                repr: Repr::Zero { known_to: abs },
            },
            (Repr::Zero { .. }, Repr::Nonzero { valuation, coeffs, .. })
            | (Repr::Nonzero { valuation, coeffs, .. }, Repr::Zero { .. }) => {
                Self::make(profile, *valuation, coeffs.clone(), abs)
            }
            (
                Repr::Nonzero {
                    valuation: v1,
                    coeffs: c1,
                    ..
                },
                Repr::Nonzero {
                    valuation: v2,
                    coeffs: c2,
                    ..
                },
            ) => {
                let vm = (*v1).min(*v2);
                let end = (v1 + c1.len() as i64).max(v2 + c2.len() as i64);
                let mut raw = vec![0; (end - vm) as usize];
                for (i, &c) in c1.iter().enumerate() {
                    let idx = (v1 - vm) as usize + i;
                    raw[idx] = field.add(raw[idx], c);
                }
                for (i, &c) in c2.iter().enumerate() {
                    let idx = (v2 - vm) as usize + i;
                    raw[idx] = field.add(raw[idx], c);
                }
                Self::make(profile, vm, raw, abs)
            }
        })
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero {
                valuation,
                coeffs,
                window,
            } => LaurentScalar {
                profile: self.profile.clone(),
                repr: Repr::Nonzero {
                    valuation: *valuation,
                    coeffs: coeffs.iter().map(|&c| self.field().neg(c)).collect(),
                    window: *window,
                },
            },
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let profile = self.profile.combine(&other.profile)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { known_to: a }, Repr::Zero { known_to: b }) => LaurentScalar {
                profile,
                repr: Repr::Zero {
                    known_to: match (a, b) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    },
                },
            },
            (Repr::Zero { known_to }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { known_to }) => LaurentScalar {
                profile,
                repr: Repr::Zero {
                    known_to: known_to.map(|a| a + valuation),
                },
            },
            (
                Repr::Nonzero {
                    valuation: v1,
                    coeffs: c1,
                    window: w1,
                },
                Repr::Nonzero {
                    valuation: v2,
                    coeffs: c2,
                    window: w2,
                },
            ) => {
                let v = v1 + v2;
                let w = match (w1, w2) {
                    (Some(a), Some(b)) => Some((*a).min(*b)),
                    (a, None) => *a,
                    (None, b) => *b,
                };
                let prod = convolve(&profile.field, c1, c2, w.map(|w| w as usize));
                Self::make(profile, v, prod, w.map(|w| v + w as i64))
            }
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let profile = self.profile.combine(&other.profile)?;
        let (v2, c2, w2) = match &other.repr {
            Repr::Zero { known_to: None } => return Err(Error::DivisionByZero),
            Repr::Zero { known_to: Some(a) } => {
                return Err(Error::InsufficientPrecision(format!("divisor is O(t^{a})")))
            }
            Repr::Nonzero {
                valuation,
                coeffs,
                window,
            } => (*valuation, coeffs, *window),
        };
        let (v1, c1, w1) = match &self.repr {
            Repr::Zero { known_to } => {
                return Ok(LaurentScalar {
                    profile,
                    repr: Repr::Zero {
                        known_to: known_to.map(|a| a - v2),
                    },
                })
            }
            Repr::Nonzero {
                valuation,
                coeffs,
                window,
            } => (*valuation, coeffs, *window),
        };
        let field = profile.field.clone();
        let v = v1 - v2;
        if w2.is_none() && c2.len() == 1 {
            let inv = field.inv(c2[0]).unwrap();
            let raw = c1.iter().map(|&c| field.mul(c, inv)).collect();
            return Ok(Self::make(profile, v, raw, w1.map(|w| v + w as i64)));
        }
        if w1.is_none() && w2.is_none() && c1.len() >= c2.len() {
            // exact quotient when the divisor divides the dividend
            let len = c1.len() - c2.len() + 1;
            let quot = convolve(&field, c1, &series_inverse(&field, c2, len), Some(len));
            if convolve(&field, &quot, c2, None) == *c1 {
                return Ok(Self::make(profile, v, quot, None));
            }
        }
        let w = [w1, w2, Some(profile.precision)]
            .into_iter()
            .flatten()
            .min()
            .unwrap() as usize;
        let inv = series_inverse(&field, c2, w);
        let prod = convolve(&field, c1, &inv, Some(w));
        Ok(Self::make(profile, v, prod, Some(v + w as i64)))
    }

    pub fn pow_i64(&self, k: i64) -> Result<Self> {
        let base = if k < 0 {
            Self::one(self.profile.clone()).try_div(self)?
        } else {
            self.clone()
        };
        Ok(base.pow_u64(k.unsigned_abs()))
    }

    /// `y` with `y^p = x`, when `v(x)` and the support of `x` lie in `pZ`.
    /// For a windowed input the root is determined modulo
    /// `t^ceil(a / p)` where `a` is the absolute precision of `x`.
    pub fn frobenius_root(&self) -> Result<Option<Self>> {
        let (v, coeffs, window) = match &self.repr {
            Repr::Zero { .. } => {
                return Err(Error::Precondition("Frobenius root of zero".into()))
            }
            Repr::Nonzero {
                valuation,
                coeffs,
                window,
            } => (*valuation, coeffs, *window),
        };
        let p = self.profile.p() as i64;
        if v.rem_euclid(p) != 0 {
            return Ok(None);
        }
        if coeffs
            .iter()
            .enumerate()
            .any(|(i, &c)| c != 0 && (i as i64) % p != 0)
        {
            return Ok(None);
        }
        let field = self.field();
        let raw: Vec<Gf> = coeffs
            .iter()
            .step_by(p as usize)
            .map(|&c| field.frobenius_inverse(c))
            .collect();
        let abs = window.map(|w| {
            let a = v + w as i64;
            (a + p - 1).div_euclid(p)
        });
        Ok(Some(Self::make(self.profile.clone(), v / p, raw, abs)))
    }

    fn nonzero_or_fail(&self, what: &str) -> Result<i64> {
        self.valuation()
            .ok_or_else(|| Error::Precondition(format!("{what} needs a nonzero scalar")))
    }

    /// Decides whether `y^k = x` has a solution in `F_q((t))`.
    ///
    /// For `k = p^a m` with `a >= 1` the answer depends on every coefficient
    /// of `x`, so a windowed input that passes all visible tests yields
    /// `InsufficientPrecision`.
    pub fn kth_root_exists(&self, k: i64) -> Result<bool> {
        if k <= 0 {
            return Err(Error::Precondition(format!("root order must be positive, got {k}")));
        }
        let v = self.nonzero_or_fail("k-th root test")?;
        if v.rem_euclid(k) != 0 {
            return Ok(false);
        }
        let (a, m) = split_prime_power(k as u64, self.profile.p());
        if !self.field().is_mth_power(self.coeffs()[0], m) {
            return Ok(false);
        }
        let mut u = self.shift(-v);
        for _ in 0..a {
            match u.frobenius_root()? {
                Some(root) => u = root,
                None => return Ok(false),
            }
        }
        if a > 0 && !self.is_exact() {
            return Err(Error::InsufficientPrecision(format!(
                "{k}-th roots depend on coefficients beyond t^{}",
                self.absolute_precision().unwrap()
            )));
        }
        Ok(true)
    }

    /// A `k`-th root, or `None` exactly when none exists: `a` Frobenius
    /// roots followed by a Newton lift of a residue `m`-th root.
    pub fn kth_root(&self, k: i64) -> Result<Option<Self>> {
        if !self.kth_root_exists(k)? {
            return Ok(None);
        }
        let (a, m) = split_prime_power(k as u64, self.profile.p());
        let mut z = self.clone();
        for _ in 0..a {
            z = z.frobenius_root()?.expect("chain checked above");
        }
        if m == 1 {
            return Ok(Some(z));
        }
        let v = z.valuation().unwrap();
        let u = z.shift(-v);
        let field = self.field();
        let r0 = field.mth_root(u.coeffs()[0], m).expect("residue checked above");
        if u.as_constant().is_some() {
            return Ok(Some(Self::constant(self.profile.clone(), r0).shift(v / m as i64)));
        }
        let w = u.window().unwrap_or(self.profile.precision).min(self.profile.precision);
        let u = u.truncated(w);
        let mut y = Self::make(self.profile.clone(), 0, vec![r0], Some(w as i64));
        let m_scalar = Self::from_i64(m as i64, self.profile.clone());
        for _ in 0..(2 * w + 2) {
            let residual = y.pow_u64(m).try_sub(&u)?;
            if residual.is_zero() {
                break;
            }
            let slope = m_scalar.try_mul(&y.pow_u64(m - 1))?;
            y = y.try_sub(&residual.try_div(&slope)?)?;
        }
        Ok(Some(y.shift(v / m as i64)))
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        let term = |c: Gf| -> String {
            if field.degree() == 1 {
                c.to_string()
            } else {
                format!("{:?}", field.unpack(c))
            }
        };
        match &self.repr {
            Repr::Zero { known_to: None } => write!(f, "0"),
            Repr::Zero { known_to: Some(a) } => write!(f, "O(t^{a})"),
            Repr::Nonzero {
                valuation,
                coeffs,
                window,
            } => {
                let mut parts = Vec::new();
                for (i, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let e = valuation + i as i64;
                    parts.push(match e {
                        0 => term(c),
                        1 if c == 1 => "t".to_string(),
                        _ if c == 1 => format!("t^{e}"),
                        1 => format!("{}*t", term(c)),
                        _ => format!("{}*t^{e}", term(c)),
                    });
                }
                if let Some(w) = window {
                    parts.push(format!("O(t^{})", valuation + *w as i64));
                }
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}

impl Scalar for LaurentScalar {
    type Ctx = LaurentProfile;

    fn context(&self) -> LaurentProfile {
        self.profile.clone()
    }

    fn zero_in(ctx: &LaurentProfile) -> Self {
        Self::zero(ctx.clone())
    }

    fn one_in(ctx: &LaurentProfile) -> Self {
        Self::one(ctx.clone())
    }

    fn from_i64_in(ctx: &LaurentProfile, value: i64) -> Self {
        Self::from_i64(value, ctx.clone())
    }

    fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("Laurent profile mismatch")
    }

    fn minus(&self, other: &Self) -> Self {
        self.try_sub(other).expect("Laurent profile mismatch")
    }

    fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("Laurent profile mismatch")
    }

    fn negated(&self) -> Self {
        self.neg()
    }

    fn inverse(&self) -> Result<Self> {
        Self::one(self.profile.clone()).try_div(self)
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
        LaurentScalar::is_exact(self)
    }

    fn pivot_weight(&self) -> Option<i64> {
        self.valuation()
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Wire form. `coeffs` lists `F_q` elements as coefficient vectors over
/// `F_p`. `"exact": true` marks a Laurent polynomial; otherwise the value
/// is known modulo `t^(valuation + precision)`. `O(t^a)` is written with
/// valuation `a`, no coefficients and precision 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentScalarJson {
    pub p: u64,
    pub s: u32,
    pub modulus: Vec<u64>,
    pub precision: u32,
    pub valuation: ValuationJson,
    pub coeffs: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub exact: bool,
}

impl LaurentScalar {
    pub fn to_json(&self) -> LaurentScalarJson {
        let field = self.field();
        let coeffs = self
            .coeffs()
            .iter()
            .map(|&c| field.unpack(c).into_iter().map(|d| d as i64).collect())
            .collect();
        let (precision, valuation, exact) = match &self.repr {
            Repr::Zero { known_to: None } => (
                self.profile.precision,
                ValuationJson::Infinite("inf".into()),
                true,
            ),
            Repr::Zero { known_to: Some(a) } => (0, ValuationJson::Finite(*a), false),
            Repr::Nonzero {
                valuation, window, ..
            } => (
                window.unwrap_or(self.profile.precision),
                ValuationJson::Finite(*valuation),
                window.is_none(),
            ),
        };
        LaurentScalarJson {
            p: field.p(),
            s: field.degree(),
            modulus: field.modulus().to_vec(),
            precision,
            valuation,
            coeffs,
            exact,
        }
    }

    /// Reads the wire form into `profile` when given, otherwise into the
    /// profile the record describes.
    pub fn from_json(json: &LaurentScalarJson, profile: Option<&LaurentProfile>) -> Result<Self> {
        let profile = match profile {
            Some(p) => {
                if p.p() != json.p || p.field().modulus() != json.modulus.as_slice() {
                    return Err(Error::ProfileMismatch(format!(
                        "entry over F_{}[x]/{:?} in a matrix over {:?}",
                        json.p,
                        json.modulus,
                        p.field()
                    )));
                }
                p.clone()
            }
            None => {
                let field = FiniteField::new(json.p, json.modulus.clone())?;
                LaurentProfile::new(field, json.precision.max(1))?
            }
        };
        if profile.field().degree() != json.s {
            return Err(Error::Parse(format!(
                "s = {} disagrees with a modulus of degree {}",
                json.s,
                profile.field().degree()
            )));
        }
        let field = profile.field.clone();
        let coeffs: Vec<Gf> = json.coeffs.iter().map(|c| field.from_coeffs(c)).collect();
        match &json.valuation {
            ValuationJson::Infinite(tag) if tag == "inf" => Ok(Self::zero(profile)),
            ValuationJson::Infinite(tag) => Err(Error::Parse(format!("bad valuation {tag:?}"))),
            ValuationJson::Finite(v) if coeffs.iter().all(|&c| c == 0) => {
                if json.exact {
                    Ok(Self::zero(profile))
                } else {
                    Ok(Self::approx_zero(profile, *v))
                }
            }
            ValuationJson::Finite(v) => {
                if coeffs[0] == 0 {
                    return Err(Error::Parse("leading coefficient must be nonzero".into()));
                }
                if json.exact {
                    Ok(Self::from_coeffs(profile, *v, coeffs, None))
                } else {
                    if json.precision == 0 {
                        return Err(Error::ZeroPrecision);
                    }
                    Ok(Self::from_coeffs(profile, *v, coeffs, Some(json.precision)))
                }
            }
        }
    }

    /// Parses sums of terms such as `"1 + t"`, `"2*t^-1 + t^3 + O(t^6)"`
    /// or `"[0,1]*t"` (an `F_q` element as a coefficient vector). A trailing
    /// `O(t^a)` makes the value inexact.
    pub fn parse(text: &str, profile: &LaurentProfile) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("{why} in Laurent term {text:?}"));
        let field = profile.field.clone();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0;
        let mut cur = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                _ => {}
            }
            let prev = compact[..i].chars().last();
            let is_sign = depth == 0 && (ch == '+' || ch == '-') && prev != Some('^');
            if is_sign {
                if !cur.is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad("dangling sign"));
        }
        terms.push((negative, cur));

        let mut window_end: Option<i64> = None;
        let mut monomials: Vec<(i64, Gf)> = Vec::new();
        for (negative, term) in terms {
            if let Some(inner) = term.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
                let e = parse_power(inner).ok_or_else(|| bad("bad O-term"))?;
                window_end = Some(window_end.map_or(e, |w: i64| w.min(e)));
                continue;
            }
            let (coef_text, power_text) = match term.find('t') {
                Some(pos) => {
                    let (c, rest) = term.split_at(pos);
                    (c.trim_end_matches('*'), Some(rest))
                }
                None => (term.as_str(), None),
            };
            let mut c = if coef_text.is_empty() {
                1
            } else if let Some(list) = coef_text.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let digits: std::result::Result<Vec<i64>, _> =
                    list.split(',').map(|d| d.trim().parse::<i64>()).collect();
                field.from_coeffs(&digits.map_err(|_| bad("bad coefficient vector"))?)
            } else {
                field.from_int(coef_text.parse::<i64>().map_err(|_| bad("bad coefficient"))?)
            };
            if negative {
                c = field.neg(c);
            }
            let e = match power_text {
                None => 0,
                Some(pt) => parse_power(pt).ok_or_else(|| bad("bad power of t"))?,
            };
            monomials.push((e, c));
        }
        let lo = monomials
            .iter()
            .map(|m| m.0)
            .chain(window_end)
            .min()
            .unwrap_or(0);
        let hi = monomials.iter().map(|m| m.0).max().unwrap_or(lo);
        let mut raw = vec![0; (hi - lo + 1) as usize];
        for (e, c) in monomials {
            let idx = (e - lo) as usize;
            raw[idx] = field.add(raw[idx], c);
        }
        Ok(Self::make(profile.clone(), lo, raw, window_end))
    }
}

/// `"t"`, `"t^5"`, `"t^-2"` to the exponent.
fn parse_power(text: &str) -> Option<i64> {
    let rest = text.strip_prefix('t')?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.strip_prefix('^')?.parse().ok()
}

impl Serialize for LaurentScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentScalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = LaurentScalarJson::deserialize(deserializer)?;
        Self::from_json(&json, None).map_err(serde::de::Error::custom)
    }
}
