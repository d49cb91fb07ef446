//! Density test for Noether-Lefschetz loci and the orbit/projection
//! computations behind it.
//!
//! A query fixes an ambient lattice `Λ` (signature `(3, k)` for the
//! second cohomology of a hyperkähler manifold), an optional polarization
//! `h`, and generators of a sublattice `N`. The locus where `N` becomes
//! algebraic is dense in its moduli component when `N` has at most one
//! positive direction and `rank Λ - rank N >= 3`, provided the locus is not
//! empty. Non-emptiness is only certified by the dimension count
//! `rank L - rank N - 2 > 0` with `L = h^perp`; anything else is reported as
//! [`Outcome::EmptyOrUnknown`].

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{self, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::{parse_lattice_expr, BoxQuery, IntRange, Lattice, LatticeVector, Signature, Sublattice};
use crate::matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlQuery {
    pub ambient: Lattice,
    pub polarization: Option<LatticeVector>,
    /// Generators of `N`, in ambient coordinates.
    pub nl_generators: Vec<LatticeVector>,
    /// Replace `N` by its primitive closure before testing (default).
    pub saturate_first: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Dense,
    FailsSignature,
    FailsRank,
    EmptyOrUnknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::Dense => "Dense",
            Outcome::FailsSignature => "FailsSignature",
            Outcome::FailsRank => "FailsRank",
            Outcome::EmptyOrUnknown => "EmptyOrUnknown",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NlVerdict {
    pub outcome: Outcome,
    pub signature_of_n: Signature,
    pub rank_of_n: usize,
    /// `rank Λ - rank N`
    pub rank_gap: i64,
    /// `rank L`, with `L = h^perp` (or `rank Λ - 1` without a polarization).
    pub rank_of_l: usize,
    /// `rank L - rank N - 2`
    pub expected_dimension: i64,
    pub notes: Vec<String>,
}

impl NlQuery {
    pub fn new(ambient: Lattice, polarization: Option<LatticeVector>, nl_generators: Vec<LatticeVector>) -> Self {
        NlQuery { ambient, polarization, nl_generators, saturate_first: true }
    }

    /// Reads `{"ambient": <lattice or name>, "h": [..]?, "N": [[..], ..],
    /// "saturate_first": bool?}`. Unknown keys (e.g. `"depth"`) are ignored.
    pub fn from_json(v: &Value) -> Result<Self> {
        let ambient = lattice_from_json(v.get("ambient").ok_or_else(|| missing("ambient"))?)?;
        let polarization = match v.get("h") {
            None | Some(Value::Null) => None,
            Some(h) => Some(vector_from_json(h)?),
        };
        let gens = match v.get("N") {
            Some(Value::Array(rows)) => rows.iter().map(vector_from_json).collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Parse("\"N\" must be an array of vectors".into())),
            None => return Err(missing("N")),
        };
        let saturate_first = v.get("saturate_first").and_then(Value::as_bool).unwrap_or(true);
        Ok(NlQuery { ambient, polarization, nl_generators: gens, saturate_first })
    }
}

fn missing(key: &str) -> Error {
    Error::Parse(format!("query is missing \"{key}\""))
}

/// A lattice given either as `{"gram": ..}` or as a name expression string.
pub fn lattice_from_json(v: &Value) -> Result<Lattice> {
    match v {
        Value::String(s) => parse_lattice_expr(s),
        other => serde_json::from_value(other.clone()).map_err(|e| Error::Parse(e.to_string())),
    }
}

pub fn vector_from_json(v: &Value) -> Result<LatticeVector> {
    match v {
        Value::Array(xs) => xs
            .iter()
            .map(|x| arith::int_from_json(x).map_err(Error::Parse))
            .collect::<Result<Vec<_>>>()
            .map(LatticeVector),
        other => Err(Error::Parse(format!("expected a vector, got {other}"))),
    }
}

fn check_polarization(ambient: &Lattice, h: &LatticeVector) -> Result<()> {
    if !ambient.square(h)?.is_positive() {
        return Err(Error::OutOfRange("polarization must have positive square".into()));
    }
    Ok(())
}

/// Index `[sat : sub]` of a finite-index inclusion of sublattices.
fn inclusion_index(sub: &Sublattice, sat: &Sublattice) -> Int {
    let coords: matrix::IntMatrix = sub
        .basis
        .iter()
        .map(|row| {
            matrix::solve_in_span(&sat.basis, row)
                .expect("saturation contains the original span")
                .into_iter()
                .map(|c| c.to_integer())
                .collect()
        })
        .collect();
    matrix::det(&coords).abs()
}

/// The primitive sublattice `N` the check is actually run on.
pub fn effective_nl_lattice(q: &NlQuery) -> Result<Sublattice> {
    let n = q.ambient.sublattice(&q.nl_generators)?;
    if q.saturate_first {
        q.ambient.saturate(&n)
    } else {
        Ok(n)
    }
}

/// `L = h^perp` in the ambient lattice.
pub fn polarization_complement(ambient: &Lattice, h: &LatticeVector) -> Result<Sublattice> {
    check_polarization(ambient, h)?;
    ambient.orthogonal_complement(std::slice::from_ref(h))
}

pub fn nl_density_check(q: &NlQuery) -> Result<NlVerdict> {
    if q.ambient.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let mut notes = Vec::new();
    let raw = q.ambient.sublattice(&q.nl_generators)?;
    let n = if q.saturate_first {
        let sat = q.ambient.saturate(&raw)?;
        let index = inclusion_index(&raw, &sat);
        if index > Int::from(1) {
            notes.push(format!("N replaced by its saturation (index {index})"));
        }
        sat
    } else {
        notes.push("N used as given, without saturation".to_string());
        raw
    };
    let signature = n.lattice.signature();
    let rank_n = n.rank();
    let rank_lambda = q.ambient.rank();
    let rank_gap = rank_lambda as i64 - rank_n as i64;

    let rank_l = match &q.polarization {
        Some(h) => polarization_complement(&q.ambient, h)?.rank(),
        None => {
            notes.push("no polarization given; rank L taken as rank Λ - 1".to_string());
            rank_lambda.saturating_sub(1)
        }
    };
    let expected_dimension = rank_l as i64 - rank_n as i64 - 2;

    let outcome = if signature.positive >= 2 {
        notes.push(format!("N has {} positive directions; at most 1 is allowed", signature.positive));
        Outcome::FailsSignature
    } else if rank_gap < 3 {
        notes.push(format!("rank Λ - rank N = {rank_gap} < 3"));
        Outcome::FailsRank
    } else if expected_dimension > 0 {
        Outcome::Dense
    } else {
        notes.push(format!(
            "expected dimension {expected_dimension} <= 0: non-emptiness is not certified"
        ));
        Outcome::EmptyOrUnknown
    };
    Ok(NlVerdict {
        outcome,
        signature_of_n: signature,
        rank_of_n: rank_n,
        rank_gap,
        rank_of_l: rank_l,
        expected_dimension,
        notes,
    })
}

/// Orthogonal projection of `x` onto `h^perp` over the rationals.
pub fn project_to_complement(l: &Lattice, h: &LatticeVector, x: &LatticeVector) -> Result<crate::lattice::RationalVector> {
    l.project_to_complement(h, x)
}

/// Checks that the reflection in `d` maps the whole lattice into itself.
pub fn check_reflection_generator(l: &Lattice, d: &LatticeVector) -> Result<()> {
    let dd = l.square(d)?;
    if dd.is_zero() {
        return Err(Error::IsotropicVector);
    }
    let row = l.pairing_row(d)?;
    if row.iter().any(|p| !(p * Int::from(2)).is_multiple_of(&dd)) {
        return Err(Error::NonIntegralReflection { square: dd.to_string() });
    }
    Ok(())
}

/// Vectors of the given squares in the box `max |x_i| <= bound`, supported on
/// `support` (all coordinates if `None`). One of `±d` is kept, the one whose
/// first nonzero coordinate is positive.
pub fn root_generators(
    l: &Lattice,
    squares: &[i64],
    bound: u32,
    support: Option<&[usize]>,
) -> Result<Vec<LatticeVector>> {
    let n = l.rank();
    let idx: Vec<usize> = match support {
        Some(s) => {
            if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                return Err(Error::OutOfRange(format!("support index {bad} exceeds rank {n}")));
            }
            let set: BTreeSet<usize> = s.iter().copied().collect();
            set.into_iter().collect()
        }
        None => (0..n).collect(),
    };
    let sub_gram: matrix::IntMatrix = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| l.gram()[i][j].clone()).collect())
        .collect();
    let sub = Lattice::new(sub_gram)?;
    let mut out = BTreeSet::new();
    for &s in squares {
        for v in BoxQuery::new(&sub, bound).square(IntRange::exactly(s)).collect() {
            let first = v.0.iter().find(|c| !c.is_zero());
            if first.is_none_or(|c| c.is_negative()) {
                continue;
            }
            let mut full = LatticeVector::zero(n);
            for (k, &i) in idx.iter().enumerate() {
                full.0[i] = v.0[k].clone();
            }
            out.insert(full);
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub depth: u32,
    pub orbit_size: usize,
    /// Distinct squares of the projections `λ_α` to `h^perp`, increasing.
    #[serde(with = "arith::serde_rat_vec")]
    pub squares: Vec<Rat>,
}

/// Breadth-first closure of `{λ}` under the reflections in `generators`, up
/// to words of length `depth`, and the squares of the projections of the
/// orbit to `h^perp`.
pub fn orbit_projection_squares(
    l: &Lattice,
    h: &LatticeVector,
    lambda: &LatticeVector,
    generators: &[LatticeVector],
    depth: u32,
) -> Result<OrbitReport> {
    check_polarization(l, h)?;
    // Each generator with its pairing row and square.
    let mut prepared = Vec::with_capacity(generators.len());
    for d in generators {
        check_reflection_generator(l, d)?;
        prepared.push((d, l.pairing_row(d)?, l.square(d)?));
    }
    let reflect = |x: &LatticeVector, (d, row, dd): &(&LatticeVector, Vec<Int>, Int)| -> LatticeVector {
        let xd: Int = x.0.iter().zip(row).map(|(a, b)| a * b).sum();
        if xd.is_zero() {
            return x.clone();
        }
        // Integral: every entry of `row` is divisible by d^2 / 2.
        let q = (xd * Int::from(2)) / dd;
        LatticeVector(x.0.iter().zip(&d.0).map(|(xi, di)| xi - &q * di).collect())
    };
    let mut seen: BTreeSet<LatticeVector> = BTreeSet::new();
    seen.insert(lambda.clone());
    let mut frontier = vec![lambda.clone()];
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for x in &frontier {
            for g in &prepared {
                let y = reflect(x, g);
                if !seen.contains(&y) {
                    next.insert(y);
                }
            }
        }
        seen.extend(next.iter().cloned());
        frontier = next.into_iter().collect();
        if frontier.is_empty() {
            break;
        }
    }
    // Reflections are isometries, so q(x - (x,h)/q(h) h) = q(λ) - (x,h)^2 / q(h).
    let q_lambda = Rat::from_integer(l.square(lambda)?);
    let hh = Rat::from_integer(l.square(h)?);
    let h_row = l.pairing_row(h)?;
    let mut squares = BTreeSet::new();
    for x in &seen {
        let xh: Int = x.0.iter().zip(&h_row).map(|(a, b)| a * b).sum();
        let xh = Rat::from_integer(xh);
        squares.insert(&q_lambda - &xh * &xh / &hh);
    }
    Ok(OrbitReport { depth, orbit_size: seen.len(), squares: squares.into_iter().collect() })
}

/// Orbit computation input: `{"ambient", "h", "lambda", "generator_squares"?,
/// "generator_bound"?, "support"?, "depth"?}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitQuery {
    pub ambient: Lattice,
    pub h: LatticeVector,
    pub lambda: LatticeVector,
    pub generator_squares: Vec<i64>,
    pub generator_bound: u32,
    pub support: Option<Vec<usize>>,
    pub depth: u32,
}

pub const DEFAULT_ORBIT_DEPTH: u32 = 3;

impl OrbitQuery {
    pub fn from_json(v: &Value) -> Result<Self> {
        let ambient = lattice_from_json(v.get("ambient").ok_or_else(|| missing("ambient"))?)?;
        let h = vector_from_json(v.get("h").ok_or_else(|| missing("h"))?)?;
        let lambda = vector_from_json(v.get("lambda").ok_or_else(|| missing("lambda"))?)?;
        let small = |key: &str| -> Result<Option<u64>> {
            match v.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(x) => x.as_u64().map(Some).ok_or_else(|| Error::Parse(format!("\"{key}\" must be a non-negative integer"))),
            }
        };
        let to_u32 = |x: u64| u32::try_from(x).map_err(|_| Error::OutOfRange(format!("{x} is too large")));
        let generator_squares = match v.get("generator_squares") {
            None | Some(Value::Null) => vec![-2],
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Parse("generator squares must be integers".into())))
                .collect::<Result<_>>()?,
            Some(_) => return Err(Error::Parse("\"generator_squares\" must be an array".into())),
        };
        let support = match v.get("support") {
            None | Some(Value::Null) => None,
            Some(Value::Array(xs)) => Some(
                xs.iter()
                    .map(|x| x.as_u64().map(|i| i as usize).ok_or_else(|| Error::Parse("support entries must be indices".into())))
                    .collect::<Result<_>>()?,
            ),
            Some(_) => return Err(Error::Parse("\"support\" must be an array".into())),
        };
        Ok(OrbitQuery {
            ambient,
            h,
            lambda,
            generator_squares,
            generator_bound: small("generator_bound")?.map(to_u32).transpose()?.unwrap_or(1),
            support,
            depth: small("depth")?.map(to_u32).transpose()?.unwrap_or(DEFAULT_ORBIT_DEPTH),
        })
    }

    /// Reflection generators: box vectors of the requested squares whose
    /// reflections are integral.
    pub fn generators(&self) -> Result<Vec<LatticeVector>> {
        let all = root_generators(&self.ambient, &self.generator_squares, self.generator_bound, self.support.as_deref())?;
        Ok(all.into_iter().filter(|d| check_reflection_generator(&self.ambient, d).is_ok()).collect())
    }

    pub fn run(&self) -> Result<OrbitReport> {
        orbit_projection_squares(&self.ambient, &self.h, &self.lambda, &self.generators()?, self.depth)
    }
}
