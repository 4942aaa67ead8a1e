//! Closed-form exponents: every matrix whose eigenvalues are roots of unity
//! of degree at most `n` becomes unipotent after raising to `R`, and every
//! torsion matrix has order dividing the torsion bound.

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{ceil_log, checked_pow, euler_phi, Factored};
use crate::error::{Error, Result};
use crate::local::FieldDescriptor;

/// Residue degree and ramification index of an extension that can carry
/// an eigenvalue of an `n x n` matrix (`f * e <= n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ExtensionProfile {
    pub residue_degree: u32,
    pub ramification: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentBound {
    pub factored: Factored,
    pub profiles: Vec<ExtensionProfile>,
}

impl ExponentBound {
    pub fn value(&self) -> BigUint {
        self.factored.value()
    }
}

fn require_dim(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    Ok(n as u64)
}

/// `lcm{ q^f - 1 : 1 <= f <= n }`: kills every residue field unit of an
/// extension of residue degree at most `n`.
pub fn residue_unit_exponent(n: usize, q: u64) -> Result<Factored> {
    let n = require_dim(n)?;
    (1..=n as u32).try_fold(Factored::one(), |acc, f| {
        Ok(acc.lcm(&Factored::of(checked_pow(q, f)? - 1)))
    })
}

/// `R` with the extension profiles it was assembled from.
///
/// * `Q_p`: lcm over `f * phi(p^s) <= n` of `p^s (p^f - 1)`, i.e. of every
///   `m` whose primitive roots of unity have degree at most `n` over `Q_p`.
/// * `F_q((t))`: `p^ceil(log_p n) * lcm{ q^f - 1 : f <= n }`.
/// * `Q`: `lcm{ m : phi(m) <= n }`.
pub fn unipotent_power_bound(n: usize, field: &FieldDescriptor) -> Result<ExponentBound> {
    let nn = require_dim(n)?;
    match field {
        FieldDescriptor::Padic(prof) => {
            let p = prof.p();
            let mut factored = Factored::one();
            let mut profiles = Vec::new();
            for f in 1..=nn as u32 {
                let residue = Factored::of(checked_pow(p, f)? - 1);
                let mut s = 0u32;
                loop {
                    let e = if s == 0 { 1 } else { euler_phi(checked_pow(p, s)?) };
                    if f as u64 * e > nn {
                        break;
                    }
                    factored = factored.lcm(&residue.mul(&Factored::prime_power(p, s)));
                    if !profiles.iter().any(|x: &ExtensionProfile| x.residue_degree == f && x.ramification == e) {
                        profiles.push(ExtensionProfile {
                            residue_degree: f,
                            ramification: e,
                        });
                    }
                    s += 1;
                }
            }
            profiles.sort();
            Ok(ExponentBound { factored, profiles })
        }
        FieldDescriptor::Laurent(prof) => {
            let wild = Factored::prime_power(prof.p(), ceil_log(prof.p(), nn));
            let factored = wild.mul(&residue_unit_exponent(n, prof.q())?);
            let profiles = (1..=nn as u32)
                .map(|f| ExtensionProfile {
                    residue_degree: f,
                    ramification: 1,
                })
                .collect();
            Ok(ExponentBound { factored, profiles })
        }
        FieldDescriptor::Rational => {
            // phi(m) >= sqrt(m / 2), so m <= 2 n^2 suffices.
            let factored = (1..=2 * nn * nn)
                .filter(|&m| euler_phi(m) <= nn)
                .fold(Factored::one(), |acc, m| acc.lcm(&Factored::of(m)));
            Ok(ExponentBound {
                factored,
                profiles: Vec::new(),
            })
        }
    }
}

/// Every torsion element of `GL_n` over the field has order dividing this.
/// In characteristic 0 torsion elements are semisimple with root-of-unity
/// eigenvalues, giving the same value as `unipotent_power_bound`; in
/// characteristic `p` the unipotent part contributes `p^ceil(log_p n)`,
/// which the same formula already includes.
pub fn torsion_exponent_bound(n: usize, field: &FieldDescriptor) -> Result<Factored> {
    Ok(unipotent_power_bound(n, field)?.factored)
}
