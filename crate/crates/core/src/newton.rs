//! Newton polygons of monic polynomials over a discretely valued field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::format_rational;

/// What is known about the valuation of one coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffValuation {
    Exact(i64),
    /// The coefficient is exactly zero.
    Infinite,
    /// Zero to the working precision: the valuation is at least this.
    AtLeast(i64),
}

/// Slopes with multiplicities in increasing order. A slope is the
/// valuation of the roots it accounts for (`v(p) = 1` or `v(t) = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    segments: Vec<(BigRational, u32)>,
}

impl NewtonPolygon {
    pub fn segments(&self) -> &[(BigRational, u32)] {
        &self.segments
    }

    /// Each slope repeated by its multiplicity, increasing.
    pub fn slope_multiset(&self) -> Vec<BigRational> {
        self.segments
            .iter()
            .flat_map(|(s, m)| std::iter::repeat_n(s.clone(), *m as usize))
            .collect()
    }

    pub fn is_flat(&self) -> bool {
        self.segments.iter().all(|(s, _)| s.is_zero())
    }

    pub fn degree(&self) -> u32 {
        self.segments.iter().map(|s| s.1).sum()
    }

    /// The polygon of the polynomial whose roots are the `j`-th powers.
    pub fn scaled(&self, j: i64) -> NewtonPolygon {
        let mut segments: Vec<(BigRational, u32)> = self
            .segments
            .iter()
            .map(|(s, m)| (s * BigRational::from_integer(BigInt::from(j)), *m))
            .collect();
        segments.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(BigRational, u32)> = Vec::new();
        for (s, m) in segments {
            match merged.last_mut() {
                Some(last) if last.0 == s => last.1 += m,
                _ => merged.push((s, m)),
            }
        }
        NewtonPolygon { segments: merged }
    }

    pub fn to_json(&self) -> Vec<SegmentJson> {
        self.segments
            .iter()
            .map(|(s, m)| SegmentJson {
                slope: format_rational(s),
                multiplicity: *m,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub slope: String,
    pub multiplicity: u32,
}

/// Polygon of `a_0 + a_1 x + ... + a_n x^n` from coefficient valuations
/// (constant term first). The lower convex hull of the points `(i, v(a_i))`
/// has gradients `g`; the slopes reported are `-g`.
///
/// A coefficient known only to vanish modulo `p^a` contributes the point
/// `(i, a)`; if that point lies on or below the hull of the known points,
/// the true coefficient could change the polygon and the call fails with
/// `InsufficientPrecision`.
pub fn newton_polygon(coeffs: &[CoeffValuation]) -> Result<NewtonPolygon> {
    if coeffs.is_empty() || coeffs.iter().all(|c| *c == CoeffValuation::Infinite) {
        return Err(Error::Precondition("Newton polygon of the zero polynomial".into()));
    }
    match coeffs[0] {
        CoeffValuation::Infinite => {
            return Err(Error::Precondition(
                "zero constant term: factor out powers of x first".into(),
            ))
        }
        CoeffValuation::AtLeast(a) => {
            return Err(Error::InsufficientPrecision(format!(
                "constant term only known to vanish modulo p^{a}"
            )))
        }
        CoeffValuation::Exact(_) => {}
    }
    let n = coeffs.len() - 1;
    if !matches!(coeffs[n], CoeffValuation::Exact(_)) {
        return Err(Error::Precondition("leading coefficient must be nonzero".into()));
    }
    let points: Vec<(i64, i64)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c {
            CoeffValuation::Exact(v) => Some((i as i64, *v)),
            _ => None,
        })
        .collect();
    // Andrew's monotone chain, lower hull only.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128
                - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    for (i, c) in coeffs.iter().enumerate() {
        if let CoeffValuation::AtLeast(a) = c {
            let i = i as i64;
            let seg = hull.windows(2).find(|w| w[0].0 <= i && i <= w[1].0).unwrap();
            let (x0, y0, x1, y1) = (seg[0].0, seg[0].1, seg[1].0, seg[1].1);
            // hull height at i, compared without division
            if (*a - y0) as i128 * (x1 - x0) as i128 <= (y1 - y0) as i128 * (i - x0) as i128 {
                return Err(Error::InsufficientPrecision(format!(
                    "coefficient of x^{i} is only known modulo p^{a}"
                )));
            }
        }
    }
    let mut segments: Vec<(BigRational, u32)> = hull
        .windows(2)
        .map(|w| {
            let run = w[1].0 - w[0].0;
            let rise = w[1].1 - w[0].1;
            (
                BigRational::new(BigInt::from(-rise), BigInt::from(run)),
                run as u32,
            )
        })
        .collect();
    segments.reverse();
    debug_assert!(segments.windows(2).all(|w| w[0].0 < w[1].0));
    Ok(NewtonPolygon { segments })
}

/// Smallest `j` such that the denominator of `slope / p^j` exceeds `bound`.
pub fn ramification_escape(slope: &BigRational, p: u64, bound: u64) -> u32 {
    assert!(!slope.is_zero());
    let mut j = 0;
    let mut s = slope.abs();
    loop {
        if s.denom() > &BigInt::from(bound) {
            return j;
        }
        s /= BigRational::from_integer(BigInt::from(p));
        j += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use CoeffValuation::*;

    #[test]
    fn examples() {
        let x_minus_p = newton_polygon(&[Exact(1), Exact(0)]).unwrap();
        assert_eq!(x_minus_p.segments(), &[(rat(1, 1), 1)]);
        let sqrt_p = newton_polygon(&[Exact(1), Infinite, Exact(0)]).unwrap();
        assert_eq!(sqrt_p.segments(), &[(rat(1, 2), 2)]);
        let units = newton_polygon(&[Exact(0), Exact(0), Exact(0)]).unwrap();
        assert_eq!(units.segments(), &[(rat(0, 1), 2)]);
        assert!(units.is_flat());
    }

    #[test]
    fn mixed_slopes_sorted() {
        // (x - p)(x - 1/p) = x^2 - (p + 1/p) x + 1
        let poly = newton_polygon(&[Exact(0), Exact(-1), Exact(0)]).unwrap();
        assert_eq!(poly.segments(), &[(rat(-1, 1), 1), (rat(1, 1), 1)]);
        assert_eq!(poly.scaled(-2).segments(), &[(rat(-2, 1), 1), (rat(2, 1), 1)]);
    }

    #[test]
    fn uncertain_points() {
        assert!(newton_polygon(&[Exact(2), AtLeast(5), Exact(0)]).is_ok());
        assert!(matches!(
            newton_polygon(&[Exact(2), AtLeast(1), Exact(0)]),
            Err(Error::InsufficientPrecision(_))
        ));
        assert!(matches!(
            newton_polygon(&[Infinite, Exact(0)]),
            Err(Error::Precondition(_))
        ));
        assert!(newton_polygon(&[]).is_err());
    }

    #[test]
    fn escape_exponent() {
        assert_eq!(ramification_escape(&rat(1, 1), 2, 2), 2);
        assert_eq!(ramification_escape(&rat(2, 1), 2, 2), 3);
        assert_eq!(ramification_escape(&rat(1, 2), 3, 2), 1);
    }
}
