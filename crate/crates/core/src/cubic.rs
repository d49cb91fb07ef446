//! Discriminant arithmetic for special cubic fourfolds.
//!
//! `C_d` is non-empty iff `d >= 8` and `d = 0, 2 mod 6`. If the Fano variety
//! of lines of a generic member is isomorphic to a Hilbert square then
//! `d a^2 = 2(m^2 + m + 1)` for positive `m, a`; `a = 1, m >= 2` is
//! sufficient. Writing `x = 2m + 1`, the necessary condition becomes
//! `x^2 = 2d a^2 - 3`.

use std::collections::BTreeSet;

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::lattice::make_named;
use crate::noether_lefschetz::{nl_density_check, NlQuery, NlVerdict};

pub const DEFAULT_A_BOUND: i64 = 10_000;
pub const DEFAULT_SIEVE_MODULI: [i64; 8] = [8, 16, 24, 5, 7, 9, 11, 13];

const D_LIMIT: i64 = 1_000_000_000_000;

pub fn is_admissible(d: i64) -> bool {
    d >= 8 && matches!(d.rem_euclid(6), 0 | 2)
}

/// Remark attached to small `d` where the admissibility range is strict.
pub fn admissibility_note(d: i64) -> Option<String> {
    match d {
        2 | 6 => Some(format!("d = {d} satisfies d = 0, 2 mod 6 but the range d >= 8 is applied")),
        _ => None,
    }
}

/// The `m >= 2` with `d = 2(m^2 + m + 1)`, if any.
pub fn hassett_sufficient(d: i64) -> Option<i64> {
    let disc = 2 * i128::from(d) - 3;
    if disc <= 0 {
        return None;
    }
    let x = Roots::sqrt(&disc);
    if x * x != disc || x % 2 == 0 {
        return None;
    }
    let m = (x - 1) / 2;
    (m >= 2).then_some(m as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NecessaryStatus {
    Witness,
    RefutedByCongruence,
    UnknownAtBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryWitness {
    pub m: i64,
    pub a: i64,
}

/// For each `a mod M`, the residue of `2d a^2 - 3`; a refutation when none
/// of them is a square mod `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCertificate {
    pub modulus: i64,
    pub square_residues: Vec<i64>,
    pub target_residues_by_a: Vec<i64>,
}

impl CongruenceCertificate {
    pub fn build(d: i64, modulus: i64) -> Self {
        let m = i128::from(modulus);
        let squares: BTreeSet<i64> = (0..m).map(|x| (x * x % m) as i64).collect();
        let targets = (0..m)
            .map(|a| ((2 * i128::from(d) * a * a - 3).rem_euclid(m)) as i64)
            .collect();
        CongruenceCertificate { modulus, square_residues: squares.into_iter().collect(), target_residues_by_a: targets }
    }

    pub fn refutes(&self) -> bool {
        self.target_residues_by_a.iter().all(|t| self.square_residues.binary_search(t).is_err())
    }

    /// Recomputes both tables for `d` and checks that they match and refute.
    pub fn replay(&self, d: i64) -> bool {
        self.modulus >= 2 && *self == Self::build(d, self.modulus) && self.refutes()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryResult {
    pub status: NecessaryStatus,
    pub witness: Option<NecessaryWitness>,
    /// Every refuting modulus among those tried, in the order given.
    pub certificates: Vec<CongruenceCertificate>,
    pub search_bound: i64,
    pub sieve_moduli: Vec<i64>,
}

fn check_d(d: i64) -> Result<()> {
    if d.abs() > D_LIMIT {
        return Err(Error::OutOfRange(format!("|d| must be at most {D_LIMIT}")));
    }
    Ok(())
}

/// Smallest `a <= a_bound` with `2d a^2 - 3` an odd square `(2m+1)^2`, `m >= 1`;
/// otherwise a congruence sieve over `moduli`.
pub fn hassett_necessary(d: i64, a_bound: i64, moduli: &[i64]) -> Result<NecessaryResult> {
    check_d(d)?;
    if a_bound < 1 {
        return Err(Error::InvalidParameter(format!("a_bound must be at least 1, got {a_bound}")));
    }
    if a_bound > 100_000_000 {
        return Err(Error::OutOfRange(format!("a_bound = {a_bound} is too large")));
    }
    if let Some(&bad) = moduli.iter().find(|&&m| !(2..=1_000_000).contains(&m)) {
        return Err(Error::InvalidParameter(format!("sieve modulus must lie in [2, 10^6], got {bad}")));
    }
    let mut result = NecessaryResult {
        status: NecessaryStatus::UnknownAtBound,
        witness: None,
        certificates: Vec::new(),
        search_bound: a_bound,
        sieve_moduli: moduli.to_vec(),
    };
    let two_d = 2 * i128::from(d);
    for a in 1..=i128::from(a_bound) {
        let v = two_d * a * a - 3;
        if v < 9 {
            continue;
        }
        let x = Roots::sqrt(&v);
        if x * x == v {
            // v is odd, so x is odd and x >= 3.
            result.status = NecessaryStatus::Witness;
            result.witness = Some(NecessaryWitness { m: ((x - 1) / 2) as i64, a: a as i64 });
            return Ok(result);
        }
    }
    result.certificates = moduli
        .iter()
        .map(|&m| CongruenceCertificate::build(d, m))
        .filter(CongruenceCertificate::refutes)
        .collect();
    if !result.certificates.is_empty() {
        result.status = NecessaryStatus::RefutedByCongruence;
    }
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantVerdict {
    pub d: i64,
    pub admissible: bool,
    pub sufficient_witness: Option<i64>,
    pub necessary_witness: Option<NecessaryWitness>,
    pub necessary_status: NecessaryStatus,
    pub search_bound: i64,
    pub certificates: Vec<CongruenceCertificate>,
    pub notes: Vec<String>,
}

pub fn discriminant_verdict(d: i64, a_bound: i64, moduli: &[i64]) -> Result<DiscriminantVerdict> {
    let nec = hassett_necessary(d, a_bound, moduli)?;
    Ok(DiscriminantVerdict {
        d,
        admissible: is_admissible(d),
        sufficient_witness: hassett_sufficient(d),
        necessary_witness: nec.witness,
        necessary_status: nec.status,
        search_bound: nec.search_bound,
        certificates: nec.certificates,
        notes: admissibility_note(d).into_iter().collect(),
    })
}

/// Density of cubics in `C_d` whose Fano variety is birational to a
/// Hilbert square of a K3 of degree `2 e0`.
///
/// Runs the density check in the `K3^[2]` lattice with
/// `N = <δ, h_S> = <-2> + <2 e0>`, `h_S = e1 + e0 f1`, polarized by the
/// Plücker class `2(e2 + f2) - δ` of square 6.
pub fn fano_density_check(d: i64, e0: i64) -> Result<NlVerdict> {
    if !is_admissible(d) {
        return Err(Error::InadmissibleDiscriminant(d));
    }
    if e0 < 1 {
        return Err(Error::OutOfRange(format!("e0 must be at least 1, got {e0}")));
    }
    if e0 > D_LIMIT {
        return Err(Error::OutOfRange(format!("e0 = {e0} is too large")));
    }
    let ambient = make_named("K3n", Some(2))?;
    let rank = ambient.rank();
    let delta = LatticeVector::unit(rank, rank - 1);
    let mut h_s = LatticeVector::zero(rank);
    h_s.0[0] = 1.into();
    h_s.0[1] = e0.into();
    let mut plucker = LatticeVector::zero(rank);
    plucker.0[2] = 2.into();
    plucker.0[3] = 2.into();
    plucker.0[rank - 1] = (-1).into();
    let query = NlQuery::new(ambient, Some(plucker), vec![delta, h_s]);
    let mut verdict = nl_density_check(&query)?;
    verdict.notes.push(format!(
        "Hassett lattice K: rank 2, discriminant {d}, contains h^2 (Gram not materialized)"
    ));
    verdict.notes.push(format!("N = <-2> + <{}>", 2 * e0));
    Ok(verdict)
}
