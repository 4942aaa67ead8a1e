//! Matrices over one of the supported scalar fields, and their file format.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gf::FiniteField;
use crate::laurent::{LaurentProfile, LaurentScalar, LaurentScalarJson};
use crate::matrix::Matrix;
use crate::newton::{newton_polygon, CoeffValuation, NewtonPolygon};
use crate::padic::{rational_valuation, FieldProfile, PadicScalar, PadicScalarJson};
use crate::poly::Poly;
use crate::ring::{format_rational, parse_rational, Scalar};

pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldDescriptor {
    Rational,
    Padic(FieldProfile),
    Laurent(LaurentProfile),
}

impl FieldDescriptor {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Laurent(l) => l.p(),
            _ => 0,
        }
    }

    /// The residue characteristic, when the field is local.
    pub fn residue_prime(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Rational => None,
            FieldDescriptor::Padic(f) => Some(f.p()),
            FieldDescriptor::Laurent(l) => Some(l.p()),
        }
    }

    pub fn precision(&self) -> u32 {
        match self {
            FieldDescriptor::Rational => 0,
            FieldDescriptor::Padic(f) => f.precision(),
            FieldDescriptor::Laurent(l) => l.precision(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FieldDescriptor::Rational => "Q".into(),
            FieldDescriptor::Padic(f) => format!("Q_{}", f.p()),
            FieldDescriptor::Laurent(l) => format!("F_{}((t))", l.q()),
        }
    }

    pub fn to_json(&self) -> FieldJson {
        match self {
            FieldDescriptor::Rational => FieldJson::Rational,
            FieldDescriptor::Padic(f) => FieldJson::Padic {
                p: f.p(),
                precision: Some(f.precision()),
            },
            FieldDescriptor::Laurent(l) => FieldJson::Laurent {
                p: l.p(),
                s: Some(l.field().degree()),
                modulus: Some(l.field().modulus().to_vec()),
                precision: Some(l.precision()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldJson {
    Rational,
    Padic {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precision: Option<u32>,
    },
    Laurent {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precision: Option<u32>,
    },
}

impl FieldJson {
    /// `precision` overrides the recorded precision when given.
    pub fn resolve(&self, precision: Option<u32>) -> Result<FieldDescriptor> {
        Ok(match self {
            FieldJson::Rational => FieldDescriptor::Rational,
            FieldJson::Padic { p, precision: rec } => FieldDescriptor::Padic(FieldProfile::new(
                *p,
                precision.or(*rec).unwrap_or(DEFAULT_PRECISION),
            )?),
            FieldJson::Laurent {
                p,
                s,
                modulus,
                precision: rec,
            } => {
                let field = match (s, modulus) {
                    (_, Some(m)) => {
                        let f = FiniteField::new(*p, m.clone())?;
                        if s.is_some_and(|s| s != f.degree()) {
                            return Err(Error::Parse(format!(
                                "s = {} disagrees with a modulus of degree {}",
                                s.unwrap(),
                                f.degree()
                            )));
                        }
                        f
                    }
                    (None | Some(1), None) => FiniteField::prime(*p)?,
                    (Some(s), None) => {
                        return Err(Error::Parse(format!(
                            "F_{p}^{s} needs an explicit irreducible modulus"
                        )))
                    }
                };
                FieldDescriptor::Laurent(LaurentProfile::new(
                    field,
                    precision.or(*rec).unwrap_or(DEFAULT_PRECISION),
                )?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Rational(Matrix<BigRational>),
    Padic(Matrix<PadicScalar>),
    Laurent(Matrix<LaurentScalar>),
}

/// A square matrix tagged with its field. Rational entries may be viewed
/// in `Q_p`, in which case every computation on them stays exact.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMatrix {
    field: FieldDescriptor,
    entries: Entries,
}

macro_rules! map_entries {
    ($entries:expr, $m:ident => $body:expr) => {
        match $entries {
            Entries::Rational($m) => Entries::Rational($body),
            Entries::Padic($m) => Entries::Padic($body),
            Entries::Laurent($m) => Entries::Laurent($body),
        }
    };
}

#[derive(Clone, Debug, PartialEq)]
pub enum LocalPoly {
    Rational(Poly<BigRational>),
    Padic(Poly<PadicScalar>),
    Laurent(Poly<LaurentScalar>),
}

impl LocalPoly {
    pub fn degree(&self) -> Option<usize> {
        match self {
            LocalPoly::Rational(f) => f.degree(),
            LocalPoly::Padic(f) => f.degree(),
            LocalPoly::Laurent(f) => f.degree(),
        }
    }

    /// Coefficients as display strings, constant term first.
    pub fn coeff_strings(&self) -> Vec<String> {
        match self {
            LocalPoly::Rational(f) => f.coeffs().iter().map(format_rational).collect(),
            LocalPoly::Padic(f) => f.coeffs().iter().map(|c| c.to_string()).collect(),
            LocalPoly::Laurent(f) => f.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    /// Valuations of the coefficients in the given local field.
    pub fn coeff_valuations(&self, field: &FieldDescriptor) -> Result<Vec<CoeffValuation>> {
        Ok(match (self, field) {
            (LocalPoly::Rational(f), FieldDescriptor::Padic(prof)) => f
                .coeffs()
                .iter()
                .map(|c| match rational_valuation(c, prof.p()) {
                    Some(v) => CoeffValuation::Exact(v),
                    None => CoeffValuation::Infinite,
                })
                .collect(),
            (LocalPoly::Padic(f), _) => f
                .coeffs()
                .iter()
                .map(|c| match (c.valuation(), c.absolute_precision()) {
                    (Some(v), _) => CoeffValuation::Exact(v),
                    (None, None) => CoeffValuation::Infinite,
                    (None, Some(a)) => CoeffValuation::AtLeast(a),
                })
                .collect(),
            (LocalPoly::Laurent(f), _) => f
                .coeffs()
                .iter()
                .map(|c| match (c.valuation(), c.absolute_precision()) {
                    (Some(v), _) => CoeffValuation::Exact(v),
                    (None, None) => CoeffValuation::Infinite,
                    (None, Some(a)) => CoeffValuation::AtLeast(a),
                })
                .collect(),
            (_, FieldDescriptor::Rational) => {
                return Err(Error::UnsupportedField(
                    "valuations need a p-adic or Laurent field".into(),
                ))
            }
            (LocalPoly::Rational(_), FieldDescriptor::Laurent(_)) => {
                return Err(Error::UnsupportedField("rational polynomial over F_q((t))".into()))
            }
        })
    }
}

impl LocalMatrix {
    pub fn new(field: FieldDescriptor, entries: Entries) -> Result<Self> {
        match (&field, &entries) {
            (FieldDescriptor::Rational, Entries::Rational(_))
            | (FieldDescriptor::Padic(_), Entries::Rational(_)) => {}
            (FieldDescriptor::Padic(f), Entries::Padic(m)) => {
                if m.ctx().p() != f.p() {
                    return Err(Error::ProfileMismatch("entries over another prime".into()));
                }
            }
            (FieldDescriptor::Laurent(l), Entries::Laurent(m)) => {
                if m.ctx().field() != l.field() {
                    return Err(Error::ProfileMismatch("entries over another F_q".into()));
                }
            }
            _ => {
                return Err(Error::UnsupportedField(format!(
                    "entry type does not belong to {}",
                    field.describe()
                )))
            }
        }
        Ok(LocalMatrix { field, entries })
    }

    pub fn rational(m: Matrix<BigRational>) -> Self {
        LocalMatrix {
            field: FieldDescriptor::Rational,
            entries: Entries::Rational(m),
        }
    }

    /// A rational matrix viewed in `Q_p`.
    pub fn rational_over(profile: FieldProfile, m: Matrix<BigRational>) -> Self {
        LocalMatrix {
            field: FieldDescriptor::Padic(profile),
            entries: Entries::Rational(m),
        }
    }

    pub fn padic(m: Matrix<PadicScalar>) -> Self {
        LocalMatrix {
            field: FieldDescriptor::Padic(*m.ctx()),
            entries: Entries::Padic(m),
        }
    }

    pub fn laurent(m: Matrix<LaurentScalar>) -> Self {
        LocalMatrix {
            field: FieldDescriptor::Laurent(m.ctx().clone()),
            entries: Entries::Laurent(m),
        }
    }

    /// Rational matrix from integer rows (test and example convenience).
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        Ok(Self::rational(Matrix::from_rows(&(), rows)?))
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn n(&self) -> usize {
        match &self.entries {
            Entries::Rational(m) => m.n(),
            Entries::Padic(m) => m.n(),
            Entries::Laurent(m) => m.n(),
        }
    }

    /// The same entries viewed in another field descriptor.
    pub fn with_field(&self, field: FieldDescriptor) -> Result<Self> {
        Self::new(field, self.entries.clone())
    }

    /// Rational entries, if the matrix has them.
    pub fn as_rational(&self) -> Option<&Matrix<BigRational>> {
        match &self.entries {
            Entries::Rational(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_laurent(&self) -> Option<&Matrix<LaurentScalar>> {
        match &self.entries {
            Entries::Laurent(m) => Some(m),
            _ => None,
        }
    }

    /// Entries converted to `Q_p` digits (rational entries are rounded to
    /// the profile precision).
    pub fn to_padic(&self) -> Result<Matrix<PadicScalar>> {
        match (&self.field, &self.entries) {
            (FieldDescriptor::Padic(prof), Entries::Rational(m)) => {
                Ok(m.map(prof, |x| PadicScalar::from_rational(x, *prof)))
            }
            (_, Entries::Padic(m)) => Ok(m.clone()),
            _ => Err(Error::UnsupportedField(format!(
                "{} is not a p-adic field",
                self.field.describe()
            ))),
        }
    }

    /// Rational entries replaced by their `Q_p` digits at the given profile.
    pub fn to_padic_over(&self, profile: FieldProfile) -> LocalMatrix {
        match &self.entries {
            Entries::Rational(m) => Self::padic(m.map(&profile, |x| PadicScalar::from_rational(x, profile))),
            _ => self.clone(),
        }
    }

    /// Same field, new entries of the same kind.
    fn rewrap(&self, entries: Entries) -> Self {
        LocalMatrix {
            field: self.field.clone(),
            entries,
        }
    }

    pub fn is_exact(&self) -> bool {
        match &self.entries {
            Entries::Rational(_) => true,
            Entries::Padic(m) => m.is_exact(),
            Entries::Laurent(m) => m.is_exact(),
        }
    }

    pub fn identity_like(&self) -> Self {
        self.rewrap(map_entries!(&self.entries, m => Matrix::identity(m.ctx(), m.n())))
    }

    fn same_kind(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ProfileMismatch(format!(
                "{} against {}",
                self.field.describe(),
                other.field.describe()
            )));
        }
        if self.n() != other.n() {
            return Err(Error::Precondition(format!(
                "dimension {} against {}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_kind(other)?;
        let entries = match (&self.entries, &other.entries) {
            (Entries::Rational(a), Entries::Rational(b)) => Entries::Rational(a.mul(b)),
            (Entries::Laurent(a), Entries::Laurent(b)) => Entries::Laurent(a.mul(b)),
            _ => Entries::Padic(self.to_padic()?.mul(&other.to_padic()?)),
        };
        Ok(self.rewrap(entries))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_kind(other)?;
        let entries = match (&self.entries, &other.entries) {
            (Entries::Rational(a), Entries::Rational(b)) => Entries::Rational(a.sub(b)),
            (Entries::Laurent(a), Entries::Laurent(b)) => Entries::Laurent(a.sub(b)),
            _ => Entries::Padic(self.to_padic()?.sub(&other.to_padic()?)),
        };
        Ok(self.rewrap(entries))
    }

    /// `M^k`; negative `k` requires an invertible matrix.
    pub fn power(&self, k: i64) -> Result<Self> {
        Ok(self.rewrap(match &self.entries {
            Entries::Rational(m) => Entries::Rational(m.pow_i64(k)?),
            Entries::Padic(m) => Entries::Padic(m.pow_i64(k)?),
            Entries::Laurent(m) => Entries::Laurent(m.pow_i64(k)?),
        }))
    }

    pub fn power_big(&self, e: &num_bigint::BigUint) -> Self {
        self.rewrap(map_entries!(&self.entries, m => m.pow_big(e)))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.rewrap(match &self.entries {
            Entries::Rational(m) => Entries::Rational(m.inverse()?),
            Entries::Padic(m) => Entries::Padic(m.inverse()?),
            Entries::Laurent(m) => Entries::Laurent(m.inverse()?),
        }))
    }

    pub fn char_poly(&self) -> LocalPoly {
        match &self.entries {
            Entries::Rational(m) => LocalPoly::Rational(m.char_poly()),
            Entries::Padic(m) => LocalPoly::Padic(m.char_poly()),
            Entries::Laurent(m) => LocalPoly::Laurent(m.char_poly()),
        }
    }

    pub fn det_vanishing(&self) -> crate::ring::ZeroTest {
        use crate::ring::zero_test;
        match &self.entries {
            Entries::Rational(m) => zero_test(&m.det()),
            Entries::Padic(m) => zero_test(&m.det()),
            Entries::Laurent(m) => zero_test(&m.det()),
        }
    }

    /// Fails with `Singular` when the determinant is exactly zero and with
    /// `InsufficientPrecision` when it only vanishes to the working precision.
    pub fn require_invertible(&self) -> Result<()> {
        use crate::ring::ZeroTest;
        match self.det_vanishing() {
            ZeroTest::NonZero => Ok(()),
            ZeroTest::Zero => Err(Error::Singular),
            ZeroTest::Unknown => Err(Error::InsufficientPrecision(
                "determinant vanishes to the working precision".into(),
            )),
        }
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        newton_polygon(&self.char_poly().coeff_valuations(&self.field)?)
    }

    /// `Some(true)` / `Some(false)` when decided, `None` when every entry
    /// of `M - I` vanishes only to the working precision.
    pub fn identity_status(&self) -> Option<bool> {
        let d = self.sub(&self.identity_like()).expect("same shape");
        let (all_zero, all_exact) = match &d.entries {
            Entries::Rational(m) => flags(m),
            Entries::Padic(m) => flags(m),
            Entries::Laurent(m) => flags(m),
        };
        match (all_zero, all_exact) {
            (false, _) => Some(false),
            (true, true) => Some(true),
            (true, false) => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.identity_status() == Some(true)
    }

    /// Exact equality of entries; for inexact entries, agreement to the
    /// working precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => match &d.entries {
                Entries::Rational(m) => flags(m).0,
                Entries::Padic(m) => flags(m).0,
                Entries::Laurent(m) => flags(m).0,
            },
            Err(_) => false,
        }
    }

    pub fn is_non_derogatory(&self) -> Result<bool> {
        match &self.entries {
            Entries::Rational(m) => m.is_non_derogatory(),
            Entries::Padic(m) => m.is_non_derogatory(),
            Entries::Laurent(m) => m.is_non_derogatory(),
        }
    }

    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        match &self.entries {
            Entries::Rational(m) => m
                .rows()
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
            Entries::Padic(m) => m
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
            Entries::Laurent(m) => m
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> MatrixFile {
        let entries = match &self.entries {
            Entries::Rational(m) => m
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| Value::String(format_rational(x))).collect())
                .collect(),
            Entries::Padic(m) => m
                .rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| serde_json::to_value(x.to_json()).expect("serializable"))
                        .collect()
                })
                .collect(),
            Entries::Laurent(m) => m
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| Value::String(x.to_string())).collect())
                .collect(),
        };
        MatrixFile {
            field: self.field.to_json(),
            n: self.n(),
            entries,
        }
    }

    pub fn from_json(file: &MatrixFile, precision: Option<u32>) -> Result<Self> {
        let field = file.field.resolve(precision)?;
        if file.n == 0 || file.entries.len() != file.n || file.entries.iter().any(|r| r.len() != file.n) {
            return Err(Error::Parse(format!("entries do not form a {0}x{0} array", file.n)));
        }
        let rows = &file.entries;
        match &field {
            FieldDescriptor::Rational => {
                let m = parse_rows(rows, &(), parse_rational_value)?;
                Ok(Self::rational(m))
            }
            FieldDescriptor::Padic(prof) => {
                if rows.iter().flatten().any(|v| v.is_object()) {
                    let m = parse_rows(rows, prof, |v| parse_padic_value(v, prof))?;
                    Ok(Self::padic(m))
                } else {
                    let m = parse_rows(rows, &(), parse_rational_value)?;
                    Ok(Self::rational_over(*prof, m))
                }
            }
            FieldDescriptor::Laurent(prof) => {
                let m = parse_rows(rows, prof, |v| parse_laurent_value(v, prof))?;
                Ok(Self::laurent(m))
            }
        }
    }

    pub fn from_json_str(text: &str, precision: Option<u32>) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix file: {e}")))?;
        Self::from_json(&file, precision)
    }
}

fn flags<T: Scalar>(m: &Matrix<T>) -> (bool, bool) {
    (
        m.entries().iter().all(|x| x.vanishes()),
        m.entries().iter().all(|x| x.vanishes_exactly()),
    )
}

fn parse_rows<T: Scalar>(
    rows: &[Vec<Value>],
    ctx: &T::Ctx,
    f: impl Fn(&Value) -> Result<T>,
) -> Result<Matrix<T>> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(&f).collect::<Result<Vec<T>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(ctx, parsed)
}

fn parse_rational_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational entry, got {other}"))),
    }
}

fn parse_padic_value(v: &Value, prof: &FieldProfile) -> Result<PadicScalar> {
    match v {
        Value::Object(_) => {
            let json: PadicScalarJson = serde_json::from_value(v.clone())
                .map_err(|e| Error::Parse(format!("p-adic entry: {e}")))?;
            if json.p != prof.p() {
                return Err(Error::ProfileMismatch(format!(
                    "entry over Q_{} in a matrix over Q_{}",
                    json.p,
                    prof.p()
                )));
            }
            PadicScalar::from_json(&json, Some(prof.precision()))
        }
        _ => Ok(PadicScalar::from_rational(&parse_rational_value(v)?, *prof)),
    }
}

fn parse_laurent_value(v: &Value, prof: &LaurentProfile) -> Result<LaurentScalar> {
    match v {
        Value::Object(_) => {
            let json: LaurentScalarJson = serde_json::from_value(v.clone())
                .map_err(|e| Error::Parse(format!("Laurent entry: {e}")))?;
            LaurentScalar::from_json(&json, Some(prof))
        }
        Value::String(s) => LaurentScalar::parse(s, prof),
        Value::Number(n) if n.is_i64() => Ok(LaurentScalar::from_i64(n.as_i64().unwrap(), prof.clone())),
        other => Err(Error::Parse(format!("expected a Laurent entry, got {other}"))),
    }
}

/// `{"field": {...}, "n": int, "entries": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub field: FieldJson,
    pub n: usize,
    pub entries: Vec<Vec<Value>>,
}
