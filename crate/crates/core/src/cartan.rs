//! The compact family `G = (S^1 x| Z/nZ) / Gamma`, odd components acting on
//! the circle by inversion, and density of the power maps `g -> g^k`.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angles are rationals modulo 1 (`e^{2 pi i a}`).
fn reduce(a: Rational64) -> Rational64 {
    a - a.floor()
}

fn parse_angle(text: &str) -> Result<Rational64> {
    let a: Rational64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad angle '{text}'")))?;
    Ok(reduce(a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub component: u64,
    pub angle: Rational64,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.angle, self.component)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    n: u64,
    gamma: GroupElement,
    gamma_order: u64,
}

impl GroupSpec {
    /// `n` even; the generator of `Gamma` must be central: even component
    /// and angle fixed by inversion (0 or 1/2).
    pub fn new(n: u64, angle: Rational64, component: i64) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::Precondition(format!("n must be even and positive, got {n}")));
        }
        let angle = reduce(angle);
        let component = component.rem_euclid(n as i64) as u64;
        if component % 2 != 0 {
            return Err(Error::Precondition("gamma must lie in an even component".into()));
        }
        if !(angle.is_zero() || angle == Rational64::new(1, 2)) {
            return Err(Error::Precondition("gamma angle must be 0 or 1/2".into()));
        }
        let angle_order = *angle.denom() as u64;
        let comp_order = n / n.gcd(&component);
        let gamma = GroupElement { component, angle };
        Ok(GroupSpec {
            n,
            gamma,
            gamma_order: angle_order.lcm(&comp_order),
        })
    }

    /// `n = 4`, `Gamma` generated by `(e^{i pi}, 2)`.
    pub fn worked_example() -> Self {
        Self::new(4, Rational64::new(1, 2), 2).expect("valid")
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn gamma(&self) -> GroupElement {
        self.gamma
    }

    pub fn element(&self, angle: Rational64, component: i64) -> GroupElement {
        self.canonical(GroupElement {
            component: component.rem_euclid(self.n as i64) as u64,
            angle: reduce(angle),
        })
    }

    pub fn identity(&self) -> GroupElement {
        self.element(Rational64::zero(), 0)
    }

    fn raw_mul(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        let beta = if x.component % 2 == 0 { y.angle } else { -y.angle };
        GroupElement {
            component: (x.component + y.component) % self.n,
            angle: reduce(x.angle + beta),
        }
    }

    /// Least representative of the coset `x Gamma`.
    pub fn canonical(&self, x: GroupElement) -> GroupElement {
        let mut best = x;
        let mut cur = x;
        for _ in 1..self.gamma_order {
            cur = self.raw_mul(cur, self.gamma);
            best = best.min(cur);
        }
        best
    }

    pub fn multiply(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        self.canonical(self.raw_mul(x, y))
    }

    pub fn inverse(&self, x: GroupElement) -> GroupElement {
        let angle = if x.component % 2 == 0 { -x.angle } else { x.angle };
        self.element(angle, -(x.component as i64))
    }

    pub fn pow(&self, x: GroupElement, k: u64) -> GroupElement {
        (0..k).fold(self.identity(), |acc, _| self.multiply(acc, x))
    }

    /// Order of `x`, if finite (angles of finite-order elements have
    /// denominators bounded by `2 n |Gamma|` times that of `x`).
    pub fn order(&self, x: GroupElement) -> Option<u64> {
        let id = self.identity();
        let limit = 2 * self.n * self.gamma_order * (*x.angle.denom() as u64).max(1);
        let mut cur = x;
        for m in 1..=limit {
            if cur == id {
                return Some(m);
            }
            cur = self.multiply(cur, x);
        }
        None
    }
}

/// Order of `G / G^0`: the components modulo the image of `Gamma`.
pub fn component_group_order(spec: &GroupSpec) -> u64 {
    spec.n.gcd(&spec.gamma.component)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CartanKind {
    Torus,
    Cyclic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanClass {
    pub kind: CartanKind,
    /// Order of the cyclic group; 0 for the torus.
    pub order: u64,
    pub generator: GroupElement,
}

/// The identity-component torus, plus one cyclic class for each family of
/// odd-component generators. Within an odd component every element is
/// conjugate to every other, since conjugating `(z, c)` by `(w, 0)` gives
/// `(z + 2w, c)`; so `(0, c)` represents them all, and components already
/// reached by powers of an earlier generator give the same subgroup class.
pub fn cartan_classes(spec: &GroupSpec) -> Vec<CartanClass> {
    let mut classes = vec![CartanClass {
        kind: CartanKind::Torus,
        order: 0,
        generator: spec.identity(),
    }];
    let mut covered: Vec<u64> = Vec::new();
    for c in (1..spec.n).step_by(2) {
        let g = spec.element(Rational64::zero(), c as i64);
        if covered.contains(&g.component) {
            continue;
        }
        let order = spec.order(g).expect("odd-component generators have finite order");
        let mut cur = g;
        for _ in 0..order {
            if cur.component % 2 == 1 {
                covered.push(cur.component);
            }
            cur = spec.multiply(cur, g);
        }
        classes.push(CartanClass {
            kind: CartanKind::Cyclic,
            order,
            generator: g,
        });
    }
    classes
}

pub fn pk_surjective_on_class(class: &CartanClass, k: u64) -> bool {
    match class.kind {
        CartanKind::Torus => true,
        CartanKind::Cyclic => k.gcd(&class.order) == 1,
    }
}

pub fn is_power_dense(spec: &GroupSpec, k: u64) -> bool {
    cartan_classes(spec).iter().all(|c| pk_surjective_on_class(c, k))
}

pub fn density_gcd_oracle(spec: &GroupSpec, k: u64) -> bool {
    k.gcd(&component_group_order(spec)).is_one()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaJson {
    pub angle: String,
    pub component: i64,
}

/// `{"n": int, "gamma": {"angle": "a/b", "component": int}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecJson {
    pub n: u64,
    pub gamma: GammaJson,
}

impl GroupSpecJson {
    pub fn resolve(&self) -> Result<GroupSpec> {
        GroupSpec::new(self.n, parse_angle(&self.gamma.angle)?, self.gamma.component)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub kind: CartanKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    pub generator: String,
}

impl From<&CartanClass> for ClassJson {
    fn from(c: &CartanClass) -> Self {
        ClassJson {
            kind: c.kind,
            order: (c.kind == CartanKind::Cyclic).then_some(c.order),
            generator: c.generator.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub classes: Vec<ClassJson>,
    pub k: u64,
    pub dense: bool,
    pub oracle_agrees: bool,
}

pub fn density_report(spec: &GroupSpec, k: u64) -> Result<DensityReport> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let classes = cartan_classes(spec);
    let dense = classes.iter().all(|c| pk_surjective_on_class(c, k));
    Ok(DensityReport {
        classes: classes.iter().map(ClassJson::from).collect(),
        k,
        dense,
        oracle_agrees: dense == density_gcd_oracle(spec, k),
    })
}
