//! Bounded enumeration of Mori cone wall classes for moduli of sheaves.
//!
//! Given the algebraic Mukai lattice, a Mukai vector `v` and a polarization
//! direction `h`, the extra generators are the classes `a` with
//! `a^2 >= -2` (`a^2 >= 0` on the Kummer side), `|(a, v)| <= v^2 / 2` and
//! `(h, a) > 0`, pushed to `v^perp`. The set is infinite in general, so it is
//! enumerated inside a coordinate box.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::{BoxQuery, IntRange, Lattice, LatticeVector, RationalVector};
use crate::noether_lefschetz::{lattice_from_json, vector_from_json};

pub const DEFAULT_COORD_BOUND: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoriQuery {
    pub mukai_alg: Lattice,
    pub v: LatticeVector,
    pub h: LatticeVector,
    pub kummer_flag: bool,
    pub coord_bound: u32,
}

impl MoriQuery {
    pub fn new(mukai_alg: Lattice, v: LatticeVector, h: LatticeVector, kummer_flag: bool, coord_bound: u32) -> Result<Self> {
        for x in [&v, &h] {
            if x.len() != mukai_alg.rank() {
                return Err(Error::DimensionMismatch { expected: mukai_alg.rank(), got: x.len() });
            }
        }
        let vv = mukai_alg.square(&v)?;
        if !vv.is_positive() || vv.is_odd() {
            return Err(Error::OutOfRange(format!("v^2 must be positive and even, got {vv}")));
        }
        Ok(MoriQuery { mukai_alg, v, h, kummer_flag, coord_bound })
    }

    /// Reads `{"lattice": <lattice or name>, "v": [..], "h": [..],
    /// "kummer": bool?, "coord_bound": int?}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let get = |k: &str| value.get(k).ok_or_else(|| Error::Parse(format!("query is missing \"{k}\"")));
        let lattice = lattice_from_json(get("lattice")?)?;
        let v = vector_from_json(get("v")?)?;
        let h = vector_from_json(get("h")?)?;
        let kummer = value.get("kummer").and_then(Value::as_bool).unwrap_or(false);
        let bound = match value.get("coord_bound") {
            None | Some(Value::Null) => DEFAULT_COORD_BOUND,
            Some(b) => b
                .as_u64()
                .and_then(|b| u32::try_from(b).ok())
                .ok_or_else(|| Error::Parse("\"coord_bound\" must be a non-negative integer".into()))?,
        };
        MoriQuery::new(lattice, v, h, kummer, bound)
    }

    pub fn v_square(&self) -> Int {
        self.mukai_alg.square(&self.v).expect("validated")
    }
}

/// All box classes satisfying the wall conditions, in ascending lex order.
pub fn mori_generators(q: &MoriQuery) -> Result<Vec<LatticeVector>> {
    let half = q.v_square() / Int::from(2);
    let floor = if q.kummer_flag { 0 } else { -2 };
    Ok(BoxQuery::new(&q.mukai_alg, q.coord_bound)
        .square(IntRange::at_least(floor))
        .pairing(&q.v, IntRange::between(-half.clone(), half))?
        .pairing(&q.h, IntRange::at_least(1))?
        .collect())
}

/// `a - (a, v)/v^2 v`, the projection to `v^perp` over Q.
pub fn theta_dual_projection(q: &MoriQuery, a: &LatticeVector) -> Result<RationalVector> {
    let vv = q.mukai_alg.square(&q.v)?;
    if vv.is_zero() {
        return Err(Error::IsotropicVector);
    }
    let coef = Rat::new(q.mukai_alg.pair(a, &q.v)?, vv);
    Ok(a.to_rational().sub(&q.v.to_rational().scaled(&coef)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriClass {
    pub class: LatticeVector,
    #[serde(with = "crate::arith::serde_int")]
    pub square: Int,
    #[serde(with = "crate::arith::serde_int")]
    pub pairing_v: Int,
    pub projection: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriReport {
    pub coord_bound: u32,
    pub kummer_flag: bool,
    #[serde(with = "crate::arith::serde_int")]
    pub v_square: Int,
    pub classes: Vec<MoriClass>,
}

pub fn mori_report(q: &MoriQuery) -> Result<MoriReport> {
    let classes = mori_generators(q)?
        .into_iter()
        .map(|a| {
            Ok(MoriClass {
                square: q.mukai_alg.square(&a)?,
                pairing_v: q.mukai_alg.pair(&a, &q.v)?,
                projection: theta_dual_projection(q, &a)?,
                class: a,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MoriReport { coord_bound: q.coord_bound, kummer_flag: q.kummer_flag, v_square: q.v_square(), classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn query(gram: &[&[i64]], v: &[i64], h: &[i64], kummer: bool, bound: u32) -> MoriQuery {
        MoriQuery::new(
            Lattice::from_i64(gram).unwrap(),
            LatticeVector::from_i64(v),
            LatticeVector::from_i64(h),
            kummer,
            bound,
        )
        .unwrap()
    }

    fn brute(q: &MoriQuery) -> Vec<LatticeVector> {
        let n = q.mukai_alg.rank();
        let b = i64::from(q.coord_bound);
        let width = (2 * b + 1) as usize;
        let half = q.v_square() / Int::from(2);
        let floor = Int::from(if q.kummer_flag { 0 } else { -2 });
        let mut out = Vec::new();
        for idx in 0..width.pow(n as u32) {
            let mut rest = idx;
            let mut c = vec![0i64; n];
            for slot in c.iter_mut().rev() {
                *slot = (rest % width) as i64 - b;
                rest /= width;
            }
            let a = LatticeVector::from_i64(&c);
            let l = &q.mukai_alg;
            let av = l.pair(&a, &q.v).unwrap();
            if l.square(&a).unwrap() >= floor && av.abs() <= half && l.pair(&q.h, &a).unwrap().is_positive() {
                out.push(a);
            }
        }
        out
    }

    #[test]
    fn zero_box_is_empty() {
        let q = query(&[&[2, 0], &[0, -2]], &[1, 0], &[1, 0], false, 0);
        assert!(mori_generators(&q).unwrap().is_empty());
    }

    #[test]
    fn small_diagonal_example_is_empty() {
        // (a, v) = 2x must lie in [-1, 1] and (h, a) = 2x must be positive.
        let q = query(&[&[2, 0], &[0, -2]], &[1, 0], &[1, 0], false, 2);
        assert!(mori_generators(&q).unwrap().is_empty());
        assert_eq!(brute(&q), Vec::<LatticeVector>::new());
    }

    #[test]
    fn matches_box_scan() {
        let q = query(&[&[0, -1, 0], &[-1, 0, 0], &[0, 0, 2]], &[1, 0, -1], &[0, -1, 1], false, 3);
        let got = mori_generators(&q).unwrap();
        assert!(!got.is_empty());
        assert_eq!(got, brute(&q));
        let qk = MoriQuery { kummer_flag: true, ..q.clone() };
        let kummer = mori_generators(&qk).unwrap();
        assert_eq!(kummer, brute(&qk));
        let removed: Vec<_> = got.iter().filter(|a| !kummer.contains(a)).collect();
        for a in &removed {
            let s = q.mukai_alg.square(a).unwrap();
            assert!(s == Int::from(-2) || s == Int::from(-1));
        }
        assert!(kummer.iter().all(|a| got.contains(a)));
    }

    #[test]
    fn projection_examples() {
        let q = query(&[&[2, 0], &[0, -2]], &[1, 0], &[1, 0], false, 2);
        let p = theta_dual_projection(&q, &LatticeVector::from_i64(&[1, 1])).unwrap();
        assert_eq!(p, RationalVector(vec![rat(0, 1), rat(1, 1)]));
        let p = theta_dual_projection(&q, &q.v).unwrap();
        assert!(p.is_zero());
        let a = LatticeVector::from_i64(&[0, 3]);
        assert_eq!(theta_dual_projection(&q, &a).unwrap(), a.to_rational());
    }

    #[test]
    fn rejects_bad_mukai_vectors() {
        let l = Lattice::from_i64(&[&[2, 0], &[0, -2]]).unwrap();
        let h = LatticeVector::from_i64(&[1, 0]);
        assert!(MoriQuery::new(l.clone(), LatticeVector::from_i64(&[0, 1]), h.clone(), false, 2).is_err());
        assert!(MoriQuery::new(l.clone(), LatticeVector::from_i64(&[1, 0, 0]), h, false, 2).is_err());
        let odd = Lattice::from_i64(&[&[1]]).unwrap();
        assert!(MoriQuery::new(odd, LatticeVector::from_i64(&[1]), LatticeVector::from_i64(&[1]), false, 2).is_err());
    }

    #[test]
    fn json_query() {
        let v: Value = serde_json::from_str(
            r#"{"lattice": {"gram": [[0,-1,0],[-1,0,0],[0,0,2]]}, "v": [1,0,-1], "h": [0,-1,1], "kummer": true}"#,
        )
        .unwrap();
        let q = MoriQuery::from_json(&v).unwrap();
        assert!(q.kummer_flag);
        assert_eq!(q.coord_bound, DEFAULT_COORD_BOUND);
        let report = mori_report(&q).unwrap();
        assert!(report.classes.iter().all(|c| c.square >= Int::zero()));
    }
}
