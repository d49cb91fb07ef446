//! Rational curves in `S^[n]` (K3 surface, `ε = 0`) and in generalized
//! Kummer varieties (abelian surface, `ε = 1`) coming from pencils on the
//! normalizations of nodal curves.
//!
//! Notation: `m = n - 1 + 2ε`, so the exceptional class `δ` has square `-2m`
//! and `τ = δ / 2m` has square `-1/2m`. A curve of arithmetic genus `p` with
//! `δ` nodes has geometric genus `g = p - δ`.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Int, Rat};
use crate::error::{Error, Result};

/// Inputs above this are rejected so that intermediate values stay in `i128`.
pub const PARAM_LIMIT: i64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceKind {
    K3,
    Abelian,
}

impl SurfaceKind {
    pub fn epsilon(self) -> i64 {
        match self {
            SurfaceKind::K3 => 0,
            SurfaceKind::Abelian => 1,
        }
    }

    pub fn from_epsilon(eps: i64) -> Result<Self> {
        match eps {
            0 => Ok(SurfaceKind::K3),
            1 => Ok(SurfaceKind::Abelian),
            other => Err(Error::OutOfRange(format!("epsilon must be 0 or 1, got {other}"))),
        }
    }

    /// `m = n - 1 + 2ε`
    pub fn half_modulus(self, n: i64) -> i64 {
        n - 1 + 2 * self.epsilon()
    }
}

fn check_limit(name: &str, v: i64) -> Result<()> {
    if v.abs() > PARAM_LIMIT {
        return Err(Error::OutOfRange(format!("{name} = {v} exceeds {PARAM_LIMIT}")));
    }
    Ok(())
}

fn check_n(kind: SurfaceKind, n: i64) -> Result<()> {
    check_limit("n", n)?;
    if n < 2 || n + kind.epsilon() < 2 {
        return Err(Error::OutOfRange(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// A surface of arithmetic genus `p` with a `δ`-nodal curve, and `n` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveParams {
    pub kind: SurfaceKind,
    pub n: i64,
    pub p: i64,
    pub delta: i64,
}

impl CurveParams {
    pub fn new(kind: SurfaceKind, n: i64, p: i64, delta: i64) -> Result<Self> {
        check_n(kind, n)?;
        check_limit("p", p)?;
        check_limit("delta", delta)?;
        let eps = kind.epsilon();
        if delta < 0 || delta > p - 2 * eps {
            return Err(Error::OutOfRange(format!(
                "need 0 <= delta <= p - 2*epsilon, got delta = {delta}, p = {p}, epsilon = {eps}"
            )));
        }
        Ok(CurveParams { kind, n, p, delta })
    }

    /// Parameters `(p, δ) = (g + δ_min + r, δ_min + r)` used for curve classes.
    pub fn from_genus(kind: SurfaceKind, n: i64, g: i64, r: i64) -> Result<Self> {
        check_limit("g", g)?;
        check_limit("r", r)?;
        if r < 0 {
            return Err(Error::OutOfRange(format!("r must be non-negative, got {r}")));
        }
        check_n(kind, n)?;
        check_genus(kind, g)?;
        let dm = delta_min_unchecked(g, kind, n)?;
        let delta = dm.delta_min.checked_add(r).ok_or(Error::Overflow)?;
        let p = g.checked_add(delta).ok_or(Error::Overflow)?;
        Self::new(kind, n, p, delta)
    }

    pub fn geometric_genus(&self) -> i64 {
        self.p - self.delta
    }
}

fn check_genus(kind: SurfaceKind, g: i64) -> Result<()> {
    if g < 2 * kind.epsilon() || g < 0 {
        return Err(Error::OutOfRange(format!(
            "geometric genus must be at least 2*epsilon = {}, got {g}",
            2 * kind.epsilon()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesExistence {
    pub exists: bool,
    /// `floor((p - δ - ε) / 2m)`
    pub alpha: i64,
    /// Right-hand side `α (p - δ - ε - m(α + 1))` of the node bound.
    pub required_nodes: i64,
}

/// Existence of a `g^1_{n+ε}` on the normalization of a `δ`-nodal curve in
/// `|H|`: true iff `δ >= α (p - δ - ε - m(α+1))`.
pub fn g1_exists(kind: SurfaceKind, n: i64, p: i64, delta: i64) -> Result<SeriesExistence> {
    let params = CurveParams::new(kind, n, p, delta)?;
    Ok(g1_exists_checked(&params))
}

fn g1_exists_checked(c: &CurveParams) -> SeriesExistence {
    let eps = i128::from(c.kind.epsilon());
    let m = i128::from(c.kind.half_modulus(c.n));
    let free = i128::from(c.p) - i128::from(c.delta) - eps;
    let alpha = free.div_euclid(2 * m);
    let required = alpha * (free - m * (alpha + 1));
    SeriesExistence {
        exists: i128::from(c.delta) >= required,
        alpha: alpha as i64,
        required_nodes: required as i64,
    }
}

/// Dimension `min(p - δ, 2(n - 1 + ε))` of the scheme of such pencils.
pub fn series_dimension(kind: SurfaceKind, n: i64, p: i64, delta: i64) -> Result<i64> {
    let params = CurveParams::new(kind, n, p, delta)?;
    if !g1_exists_checked(&params).exists {
        return Err(Error::NoLinearSeries);
    }
    Ok((p - delta).min(2 * (n - 1 + kind.epsilon())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaMin {
    pub delta_min: i64,
    /// `g - ε mod 2m`, in `[0, 2m)`
    pub k: i64,
    /// `(g - ε - k) / 2m`
    pub alpha: i64,
}

/// Minimal node count admitting a pencil at geometric genus `g`:
/// `δ_min = ((g - ε - k)/2)(α - 1) + kα`. Requires `g >= n`.
pub fn delta_min(g: i64, kind: SurfaceKind, n: i64) -> Result<DeltaMin> {
    check_n(kind, n)?;
    check_limit("g", g)?;
    if g < n {
        return Err(Error::OutOfRange(format!("delta_min needs g >= n, got g = {g}, n = {n}")));
    }
    delta_min_unchecked(g, kind, n)
}

fn delta_min_unchecked(g: i64, kind: SurfaceKind, n: i64) -> Result<DeltaMin> {
    let eps = i128::from(kind.epsilon());
    let m = i128::from(kind.half_modulus(n));
    let top = i128::from(g) - eps;
    let k = top.rem_euclid(2 * m);
    let alpha = (top - k) / (2 * m);
    let dm = (top - k) / 2 * (alpha - 1) + k * alpha;
    Ok(DeltaMin { delta_min: to_i64(dm)?, k: to_i64(k)?, alpha: to_i64(alpha)? })
}

/// Divisibility data of the divisor dual to the curve class `H - cτ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDivisibility {
    /// Representative of `c mod 2m` in `[-m, m)`.
    pub k_prime: i64,
    /// Additive order of `k'` in `Z/2m`.
    pub t: i64,
    pub modulus: i64,
}

fn divisibility_from_coefficient(c: i128, m: i128) -> Result<DualDivisibility> {
    let modulus = 2 * m;
    let mut kp = c.rem_euclid(modulus);
    if kp >= m {
        kp -= modulus;
    }
    let t = modulus / kp.gcd(&modulus);
    Ok(DualDivisibility { k_prime: to_i64(kp)?, t: to_i64(t)?, modulus: to_i64(modulus)? })
}

/// `k'` and the divisibility `t` of the dual divisor of
/// `H - ((g - ε) + m) τ`. Requires `g >= n`.
pub fn dual_divisor_divisibility(g: i64, kind: SurfaceKind, n: i64) -> Result<DualDivisibility> {
    check_n(kind, n)?;
    check_limit("g", g)?;
    if g < n {
        return Err(Error::OutOfRange(format!("need g >= n, got g = {g}, n = {n}")));
    }
    let m = i128::from(kind.half_modulus(n));
    let c = i128::from(g) - i128::from(kind.epsilon()) + m;
    divisibility_from_coefficient(c, m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClassReport {
    pub epsilon: i64,
    pub n: i64,
    pub g: i64,
    pub r: i64,
    /// Arithmetic genus `g + r + δ_min` of the polarization.
    pub p: i64,
    /// Node count `δ_min + r`.
    pub nodes: i64,
    pub delta_min: i64,
    pub alpha: i64,
    pub k: i64,
    /// `c` in the class `H - cτ`, `c = (g - ε) + m`.
    pub tau_coefficient: i64,
    /// Beauville-Bogomolov square of the curve class.
    #[serde(with = "arith::serde_rat")]
    pub square: Rat,
    pub k_prime: i64,
    pub divisibility_t: i64,
    pub series_dimension: i64,
    pub notes: Vec<String>,
}

/// The rational curve `R_{g, δ_min + r}`: its class `H - ((g-ε) + m)τ`, its
/// square `(2r - 2 + 2ε) - (m - k)^2 / 2m`, and the divisibility of its dual
/// divisor.
///
/// `g < n` is accepted (the pencil bound still applies) and flagged in the
/// notes.
pub fn curve_class(g: i64, r: i64, kind: SurfaceKind, n: i64) -> Result<CurveClassReport> {
    let params = CurveParams::from_genus(kind, n, g, r)?;
    let mut notes = Vec::new();
    if g < n {
        notes.push(format!("g = {g} < n = {n}: outside the range g >= n"));
    }
    if g == n && kind == SurfaceKind::Abelian {
        notes.push("g = n with epsilon = 1: borderline case, g >= n + 1 may be intended".to_string());
    }
    let dm = delta_min_unchecked(g, kind, n)?;
    let existence = g1_exists_checked(&params);
    assert!(existence.exists, "pencil must exist at delta_min + r nodes");
    assert_eq!(existence.alpha, dm.alpha);

    let eps = kind.epsilon();
    let m = kind.half_modulus(n);
    let c = i128::from(g) - i128::from(eps) + i128::from(m);

    let two_m = Rat::from_integer(Int::from(2 * m));
    let gap = Int::from(m - dm.k);
    let square = Rat::from_integer(Int::from(2 * r - 2 + 2 * eps)) - Rat::from_integer(&gap * &gap) / &two_m;

    // g + δ_min = ((g + ε + n - 1)^2 - k^2) / 4m - (m - 2k)/4 + ε
    let lhs = Rat::from_integer(Int::from(g) + Int::from(dm.delta_min));
    let s = Int::from(g + eps + n - 1);
    let kk = Int::from(dm.k);
    let rhs = Rat::new(&s * &s - &kk * &kk, Int::from(4 * m)) - Rat::new(Int::from(m - 2 * dm.k), Int::from(4))
        + Rat::from_integer(Int::from(eps));
    assert_eq!(lhs, rhs, "genus identity failed at g = {g}, epsilon = {eps}, n = {n}");

    // Cross-check: q(H) - c^2/2m with q(H) = 2p - 2.
    let via_class = Rat::from_integer(Int::from(2 * params.p - 2)) - Rat::from_integer(Int::from(c) * Int::from(c)) / &two_m;
    assert_eq!(via_class, square);

    let div = divisibility_from_coefficient(c, i128::from(m))?;
    Ok(CurveClassReport {
        epsilon: eps,
        n,
        g,
        r,
        p: params.p,
        nodes: params.delta,
        delta_min: dm.delta_min,
        alpha: dm.alpha,
        k: dm.k,
        tau_coefficient: to_i64(c)?,
        square,
        k_prime: div.k_prime,
        divisibility_t: div.t,
        series_dimension: g.min(2 * (n - 1 + eps)),
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverHit {
    pub g: i64,
    pub r: i64,
    pub k_prime: i64,
}

/// All `(g, r)` with `n <= g <= g_max` whose dual divisor `D = tR` has
/// `D^2 = square_2d` and divisibility `t`.
pub fn pair_component_cover(square_2d: i64, t: i64, kind: SurfaceKind, n: i64, g_max: i64) -> Result<Vec<CoverHit>> {
    check_n(kind, n)?;
    check_limit("square", square_2d)?;
    check_limit("g_max", g_max)?;
    check_limit("t", t)?;
    if square_2d <= 0 {
        return Err(Error::OutOfRange(format!("target square must be positive, got {square_2d}")));
    }
    if t <= 0 {
        return Err(Error::OutOfRange(format!("divisibility must be positive, got {t}")));
    }
    if g_max < n {
        return Err(Error::OutOfRange(format!("g_max = {g_max} < n = {n}")));
    }
    let eps = kind.epsilon();
    let m = kind.half_modulus(n);
    if (2 * m) % t != 0 {
        return Ok(Vec::new());
    }
    let target_curve_square = Rat::new(Int::from(square_2d), Int::from(t) * Int::from(t));
    let mut hits = Vec::new();
    for g in n..=g_max {
        let dm = delta_min_unchecked(g, kind, n)?;
        let c = i128::from(g) - i128::from(eps) + i128::from(m);
        let div = divisibility_from_coefficient(c, i128::from(m))?;
        if div.t != t {
            continue;
        }
        // q(R) = 2r - 2 + 2ε - (m - k)^2 / 2m  =>  solve for r.
        let gap = Int::from(m - dm.k);
        let correction = Rat::new(&gap * &gap, Int::from(2 * m));
        let two_r = &target_curve_square + Rat::from_integer(Int::from(2 - 2 * eps)) + correction;
        let r = two_r / Rat::from_integer(Int::from(2));
        if !r.is_integer() || r < Rat::zero() {
            continue;
        }
        let r = i64::try_from(r.to_integer()).map_err(|_| Error::Overflow)?;
        hits.push(CoverHit { g, r, k_prime: div.k_prime });
    }
    Ok(hits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCurveReport {
    pub epsilon: i64,
    pub n: i64,
    /// Every polarized manifold of this type carries a rational curve whose
    /// class is dual to the primitive polarization.
    pub conclusion: String,
    pub target_square: Option<i64>,
    pub target_t: Option<i64>,
    pub g_max: i64,
    /// First `(g, r)` in `g` order realizing the target, if one was requested.
    pub witness: Option<CoverHit>,
    /// A target was given and no parameters up to `g_max` realize it.
    pub unrealized: bool,
}

pub fn has_rational_curve_dual_to_polarization(
    kind: SurfaceKind,
    n: i64,
    target: Option<(i64, i64)>,
    g_max: i64,
) -> Result<RationalCurveReport> {
    check_n(kind, n)?;
    let variety = match kind {
        SurfaceKind::K3 => "K3^[n] type",
        SurfaceKind::Abelian => "generalized Kummer type",
    };
    let conclusion = format!(
        "every polarized manifold of {variety} (n = {n}) with primitive ample H contains a rational curve with class dual to H"
    );
    let (witness, unrealized) = match target {
        None => (None, false),
        Some((square, t)) => {
            let hits = pair_component_cover(square, t, kind, n, g_max)?;
            let w = hits.first().copied();
            (w, w.is_none())
        }
    };
    Ok(RationalCurveReport {
        epsilon: kind.epsilon(),
        n,
        conclusion,
        target_square: target.map(|t| t.0),
        target_t: target.map(|t| t.1),
        g_max,
        witness,
        unrealized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    const K3: SurfaceKind = SurfaceKind::K3;
    const AB: SurfaceKind = SurfaceKind::Abelian;

    /// Smallest δ >= 0 with a pencil on a curve of geometric genus g.
    fn brute_delta_min(g: i64, kind: SurfaceKind, n: i64) -> i64 {
        (0..).find(|&d| g1_exists(kind, n, g + d, d).unwrap().exists).unwrap()
    }

    #[test]
    fn pencil_existence() {
        let e = g1_exists(K3, 5, 9, 5).unwrap();
        assert!(e.exists);
        assert_eq!(e.alpha, 0);
        let e = g1_exists(K3, 2, 2, 0).unwrap();
        assert_eq!(e.alpha, 1);
        assert_eq!(e.required_nodes, 0);
        assert!(e.exists);
        // δ = p - 2ε is admissible.
        assert!(g1_exists(AB, 2, 9, 7).is_ok());
        assert!(g1_exists(AB, 2, 9, 8).is_err());
        assert!(g1_exists(K3, 1, 9, 0).is_err());
        assert!(g1_exists(K3, 2, 9, -1).is_err());
        // Genus 20, no nodes, n = 2: α = 10, needs 10 * (20 - 11) = 90 nodes.
        assert!(!g1_exists(K3, 2, 20, 0).unwrap().exists);
    }

    #[test]
    fn series_dimensions() {
        assert_eq!(series_dimension(K3, 5, 9, 5).unwrap(), 4);
        assert_eq!(series_dimension(AB, 2, 9, 3).unwrap(), 4);
        // p - δ = 2(n - 1 + ε) = 4
        assert_eq!(series_dimension(K3, 3, 9, 5).unwrap(), 4);
        assert_eq!(series_dimension(K3, 2, 20, 0), Err(Error::NoLinearSeries));
    }

    #[test]
    fn delta_min_examples() {
        assert_eq!(delta_min(5, K3, 5).unwrap(), DeltaMin { delta_min: 0, k: 5, alpha: 0 });
        assert_eq!(delta_min(16, K3, 2).unwrap(), DeltaMin { delta_min: 56, k: 0, alpha: 8 });
        assert_eq!(brute_delta_min(16, K3, 2), 56);
        assert!(delta_min(4, K3, 5).is_err());
        for n in 2..6 {
            for kind in [K3, AB] {
                let g = n + kind.epsilon();
                assert_eq!(delta_min(g, kind, n).unwrap().delta_min, brute_delta_min(g, kind, n));
            }
        }
    }

    #[test]
    fn worked_example_class() {
        let r = curve_class(4, 5, K3, 5).unwrap();
        assert_eq!(r.tau_coefficient, 8);
        assert_eq!(r.square, rat(8, 1));
        assert_eq!(r.p, 9);
        assert_eq!(r.nodes, 5);
        assert_eq!(r.series_dimension, 4);
        assert!(r.notes.iter().any(|n| n.contains("g >= n")));
    }

    #[test]
    fn class_square_examples() {
        let r = curve_class(16, 0, K3, 2).unwrap();
        assert_eq!(r.square, rat(-5, 2));
        // k = m: correction vanishes.
        let r = curve_class(12, 3, K3, 5).unwrap();
        assert_eq!(r.k, 4);
        assert_eq!(r.square, rat(2 * 3 - 2, 1));
        let r = curve_class(2, 0, AB, 2).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("borderline")));
        assert!(curve_class(1, 0, AB, 2).is_err());
        assert!(curve_class(5, -1, K3, 2).is_err());
    }

    #[test]
    fn divisibility_examples() {
        let d = dual_divisor_divisibility(5, K3, 5).unwrap();
        assert_eq!((d.k_prime, d.t), (1, 8));
        // m = 1, c = 3 = -1 mod 2: t = 2.
        let d = dual_divisor_divisibility(2, K3, 2).unwrap();
        assert_eq!((d.k_prime, d.t), (-1, 2));
        // ε = 1, n = 2: m = 3, c = (2 - 1) + 3 = 4, 4 = -2 mod 6, t = 3.
        let d = dual_divisor_divisibility(2, AB, 2).unwrap();
        assert_eq!((d.k_prime, d.t, d.modulus), (-2, 3, 6));
    }

    #[test]
    fn cover_examples() {
        let hits = pair_component_cover(2, 1, K3, 2, 30).unwrap();
        assert_eq!(hits.first(), Some(&CoverHit { g: 3, r: 2, k_prime: 0 }));
        assert!(pair_component_cover(2, 5, K3, 2, 30).unwrap().is_empty());
        assert!(pair_component_cover(2, 1, K3, 2, 1).is_err());
        assert!(pair_component_cover(0, 1, K3, 2, 10).is_err());
        let hits = pair_component_cover(2, 1, AB, 2, 30).unwrap();
        assert_eq!(hits.first(), Some(&CoverHit { g: 4, r: 1, k_prime: 0 }));
    }

    #[test]
    fn cover_matches_exhaustive_scan() {
        for kind in [K3, AB] {
            for n in 2..5 {
                for square in [2, 4, 6, 12, 30] {
                    for t in [1, 2, 3, 4, 6] {
                        let got = pair_component_cover(square, t, kind, n, 25).unwrap();
                        let mut want = Vec::new();
                        for g in n..=25 {
                            for r in 0..40 {
                                let c = curve_class(g, r, kind, n).unwrap();
                                let tt = Rat::from_integer(Int::from(c.divisibility_t));
                                if c.divisibility_t == t && &tt * &tt * &c.square == rat(square, 1) {
                                    want.push(CoverHit { g, r, k_prime: c.k_prime });
                                }
                            }
                        }
                        assert_eq!(got, want, "kind {kind:?} n {n} square {square} t {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn class_agrees_with_lattice_model() {
        use crate::lattice::{make_named, LatticeVector, RationalVector};
        for (kind, name) in [(K3, "K3n"), (AB, "Kum")] {
            for n in 2..5 {
                let l = make_named(name, Some(n)).unwrap();
                let last = l.rank() - 1;
                for g in n..n + 12 {
                    let rep = curve_class(g, 1, kind, n).unwrap();
                    let m = kind.half_modulus(n);
                    let mut h = LatticeVector::zero(l.rank());
                    h.0[0] = Int::from(1);
                    h.0[1] = Int::from(rep.p - 1);
                    let mut curve: Vec<Rat> = h.to_rational().0;
                    curve[last] = rat(-rep.tau_coefficient, 2 * m);
                    let curve = RationalVector(curve);
                    assert_eq!(l.square_rational(&curve).unwrap(), rep.square);
                    let d = l.dual_divisor(&curve).unwrap();
                    let t = Int::from(rep.divisibility_t);
                    assert_eq!(d, LatticeVector(curve.scaled(&Rat::from_integer(t.clone())).to_integral().unwrap().0));
                    assert_eq!(Rat::from_integer(l.square(&d).unwrap()), Rat::from_integer(&t * &t) * &rep.square);
                    assert_eq!(l.divisibility(&d).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn rational_curve_wrapper() {
        let rep = has_rational_curve_dual_to_polarization(K3, 2, Some((2, 1)), 30).unwrap();
        assert!(rep.witness.is_some());
        assert!(!rep.unrealized);
        let rep = has_rational_curve_dual_to_polarization(AB, 2, Some((2, 1)), 30).unwrap();
        assert!(rep.witness.is_some());
        let rep = has_rational_curve_dual_to_polarization(K3, 2, Some((2, 7)), 30).unwrap();
        assert!(rep.unrealized);
        assert!(has_rational_curve_dual_to_polarization(K3, 2, None, 30).unwrap().witness.is_none());
    }
}
