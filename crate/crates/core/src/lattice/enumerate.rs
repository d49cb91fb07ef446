//! Box-bounded vector enumeration.
//!
//! All searches scan the coordinate box `max |x_i| <= bound` depth-first,
//! coordinate 0 outermost. Branches are pruned with interval bounds on the
//! square and on every linear constraint, which never changes the set that
//! is produced, only how quickly it is produced.

use std::ops::ControlFlow;

use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Int};
use crate::error::Result;

use super::{Lattice, LatticeVector};

/// Inclusive integer interval; `None` ends are unbounded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    #[serde(default, with = "opt_int", skip_serializing_if = "Option::is_none")]
    pub min: Option<Int>,
    #[serde(default, with = "opt_int", skip_serializing_if = "Option::is_none")]
    pub max: Option<Int>,
}

pub type SquareRange = IntRange;

mod opt_int {
    use super::*;
    use serde::{Deserializer, Serializer};
    use std::result::Result;

    pub fn serialize<S: Serializer>(v: &Option<Int>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => arith::serde_int::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Int>, D::Error> {
        arith::serde_int::deserialize(d).map(Some)
    }
}

impl IntRange {
    pub fn any() -> Self {
        IntRange { min: None, max: None }
    }

    pub fn exactly(v: impl Into<Int>) -> Self {
        let v = v.into();
        IntRange { min: Some(v.clone()), max: Some(v) }
    }

    pub fn between(lo: impl Into<Int>, hi: impl Into<Int>) -> Self {
        IntRange { min: Some(lo.into()), max: Some(hi.into()) }
    }

    pub fn at_least(lo: impl Into<Int>) -> Self {
        IntRange { min: Some(lo.into()), max: None }
    }

    pub fn contains(&self, v: &Int) -> bool {
        self.min.as_ref().is_none_or(|m| v >= m) && self.max.as_ref().is_none_or(|m| v <= m)
    }

    pub fn is_unbounded(&self) -> bool {
        self.min.is_none() && self.max.is_none()
    }
}

/// `sum_i coefficients[i] * x_i` must lie in `range`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coefficients: Vec<Int>,
    pub range: IntRange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOrder {
    /// Lexicographically increasing coordinates.
    Ascending,
    /// Lexicographically decreasing coordinates.
    Descending,
}

/// A box scan over the coordinates of a lattice.
#[derive(Clone, Debug)]
pub struct BoxQuery<'a> {
    lattice: &'a Lattice,
    bound: u32,
    square: IntRange,
    linear: Vec<LinearConstraint>,
    order: ScanOrder,
    shell: bool,
}

impl<'a> BoxQuery<'a> {
    pub fn new(lattice: &'a Lattice, bound: u32) -> Self {
        BoxQuery {
            lattice,
            bound,
            square: IntRange::any(),
            linear: Vec::new(),
            order: ScanOrder::Ascending,
            shell: false,
        }
    }

    pub fn square(mut self, range: IntRange) -> Self {
        self.square = range;
        self
    }

    /// Adds the constraint `(w, x) in range`.
    pub fn pairing(mut self, w: &LatticeVector, range: IntRange) -> Result<Self> {
        let coefficients = self.lattice.pairing_row(w)?;
        self.linear.push(LinearConstraint { coefficients, range });
        Ok(self)
    }

    pub fn order(mut self, order: ScanOrder) -> Self {
        self.order = order;
        self
    }

    /// Restrict to the shell `max |x_i| = bound` instead of the whole box.
    pub fn shell_only(mut self, shell: bool) -> Self {
        self.shell = shell;
        self
    }

    pub fn for_each(&self, mut visit: impl FnMut(&LatticeVector) -> ControlFlow<()>) {
        let mut wrapped = |x: &[i64]| visit(&LatticeVector(x.iter().map(|&c| Int::from(c)).collect()));
        match self.small_gram() {
            Some(gram) => self.run::<i128>(gram, &mut wrapped),
            None => {
                let gram = self.lattice.gram().clone();
                self.run::<Int>(gram, &mut wrapped)
            }
        }
    }

    pub fn collect(&self) -> Vec<LatticeVector> {
        let mut out = Vec::new();
        self.for_each(|v| {
            out.push(v.clone());
            ControlFlow::Continue(())
        });
        out
    }

    pub fn first(&self) -> Option<LatticeVector> {
        let mut found = None;
        self.for_each(|v| {
            found = Some(v.clone());
            ControlFlow::Break(())
        });
        found
    }

    // i128 is exact when entries fit in i64 and the box is modest.
    fn small_gram(&self) -> Option<Vec<Vec<i128>>> {
        let n = self.lattice.rank();
        if n > 64 || self.bound > (1 << 20) {
            return None;
        }
        let entries = |rows: &[Vec<Int>]| -> Option<Vec<Vec<i128>>> {
            rows.iter()
                .map(|r| r.iter().map(|x| x.to_i64().map(i128::from)).collect())
                .collect()
        };
        let gram = entries(self.lattice.gram())?;
        let coeffs: Vec<Vec<Int>> = self.linear.iter().map(|c| c.coefficients.clone()).collect();
        entries(&coeffs)?;
        Some(gram)
    }

    fn run<T: Scalar>(&self, gram: Vec<Vec<T>>, visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>) {
        let n = self.lattice.rank();
        let b = i64::from(self.bound);
        let square = match ScalarRange::<T>::from_range(&self.square) {
            Some(r) => r,
            None => return,
        };
        let mut linear = Vec::with_capacity(self.linear.len());
        for c in &self.linear {
            let Some(range) = ScalarRange::<T>::from_range(&c.range) else {
                return;
            };
            let coeffs: Vec<T> = c.coefficients.iter().map(T::from_int).collect();
            // suffix[i] = b * sum_{j >= i} |c_j|
            let mut suffix = vec![T::zero(); n + 1];
            for j in (0..n).rev() {
                suffix[j] = suffix[j + 1].clone() + coeffs[j].abs() * T::from(b);
            }
            linear.push((coeffs, range, suffix));
        }
        // offdiag[i] = b^2 * sum_{i <= j < k} 2 |g_jk|
        let mut offdiag = vec![T::zero(); n + 1];
        for i in (0..n).rev() {
            let mut row = T::zero();
            for k in i + 1..n {
                row = row + gram[i][k].abs();
            }
            offdiag[i] = offdiag[i + 1].clone() + row * T::from(2 * b * b);
        }
        let values: Vec<i64> = match self.order {
            ScanOrder::Ascending => (-b..=b).collect(),
            ScanOrder::Descending => (-b..=b).rev().collect(),
        };
        let mut state = Dfs {
            gram,
            n,
            b,
            values,
            square,
            linear,
            offdiag,
            shell: self.shell,
            x: vec![0; n],
            cross: vec![T::zero(); n],
            lin: vec![T::zero(); self.linear.len()],
        };
        let _ = state.go(0, T::zero(), false, visit);
    }
}

pub(crate) trait Scalar: Clone + Ord + Signed + From<i64> {
    fn from_int(v: &Int) -> Self;
    fn try_from_int(v: &Int) -> Option<Self>;
}

impl Scalar for i128 {
    fn from_int(v: &Int) -> Self {
        v.to_i128().expect("checked by small_gram")
    }

    fn try_from_int(v: &Int) -> Option<Self> {
        v.to_i128()
    }
}

impl Scalar for Int {
    fn from_int(v: &Int) -> Self {
        v.clone()
    }

    fn try_from_int(v: &Int) -> Option<Self> {
        Some(v.clone())
    }
}

struct ScalarRange<T> {
    min: Option<T>,
    max: Option<T>,
}

impl<T: Scalar> ScalarRange<T> {
    /// `None` when the range is provably unreachable in `T`.
    fn from_range(r: &IntRange) -> Option<Self> {
        let min = match &r.min {
            None => None,
            Some(m) => match T::try_from_int(m) {
                Some(v) => Some(v),
                None if m.is_negative() => None,
                None => return None,
            },
        };
        let max = match &r.max {
            None => None,
            Some(m) => match T::try_from_int(m) {
                Some(v) => Some(v),
                None if m.is_positive() => None,
                None => return None,
            },
        };
        Some(ScalarRange { min, max })
    }

    fn contains(&self, v: &T) -> bool {
        self.min.as_ref().is_none_or(|m| v >= m) && self.max.as_ref().is_none_or(|m| v <= m)
    }

    fn misses(&self, lo: &T, hi: &T) -> bool {
        self.min.as_ref().is_some_and(|m| hi < m) || self.max.as_ref().is_some_and(|m| lo > m)
    }

    fn bounded(&self) -> bool {
        self.min.is_some() || self.max.is_some()
    }
}

struct Dfs<T> {
    gram: Vec<Vec<T>>,
    n: usize,
    b: i64,
    values: Vec<i64>,
    square: ScalarRange<T>,
    linear: Vec<(Vec<T>, ScalarRange<T>, Vec<T>)>,
    offdiag: Vec<T>,
    shell: bool,
    x: Vec<i64>,
    /// cross[j] = sum over fixed l of g_lj x_l
    cross: Vec<T>,
    lin: Vec<T>,
}

impl<T: Scalar> Dfs<T> {
    fn go(
        &mut self,
        i: usize,
        partial: T,
        on_shell: bool,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == self.n {
            if (!self.shell || on_shell || self.b == 0)
                && self.square.contains(&partial)
                && self.linear.iter().zip(&self.lin).all(|((_, r, _), v)| r.contains(v))
            {
                return visit(&self.x);
            }
            return ControlFlow::Continue(());
        }
        for (idx, (_, range, suffix)) in self.linear.iter().enumerate() {
            let lo = self.lin[idx].clone() - suffix[i].clone();
            let hi = self.lin[idx].clone() + suffix[i].clone();
            if range.misses(&lo, &hi) {
                return ControlFlow::Continue(());
            }
        }
        if self.square.bounded() {
            let (lo, hi) = self.remaining_square_bounds(i);
            if self.square.misses(&(partial.clone() + lo), &(partial.clone() + hi)) {
                return ControlFlow::Continue(());
            }
        }
        for vi in 0..self.values.len() {
            let c = self.values[vi];
            let ct = T::from(c);
            let next = partial.clone()
                + T::from(2) * ct.clone() * self.cross[i].clone()
                + self.gram[i][i].clone() * ct.clone() * ct.clone();
            self.x[i] = c;
            if c != 0 {
                for j in 0..self.n {
                    let delta = self.gram[i][j].clone() * ct.clone();
                    self.cross[j] = self.cross[j].clone() + delta;
                }
                for (idx, (coeffs, _, _)) in self.linear.iter().enumerate() {
                    self.lin[idx] = self.lin[idx].clone() + coeffs[i].clone() * ct.clone();
                }
            }
            let flow = self.go(i + 1, next, on_shell || c.abs() == self.b, visit);
            if c != 0 {
                for j in 0..self.n {
                    let delta = self.gram[i][j].clone() * ct.clone();
                    self.cross[j] = self.cross[j].clone() - delta;
                }
                for (idx, (coeffs, _, _)) in self.linear.iter().enumerate() {
                    self.lin[idx] = self.lin[idx].clone() - coeffs[i].clone() * ct.clone();
                }
            }
            self.x[i] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// Bounds on the part of the square that involves free coordinates `j >= i`.
    fn remaining_square_bounds(&self, i: usize) -> (T, T) {
        let b = self.b;
        let mut lo = -self.offdiag[i].clone();
        let mut hi = self.offdiag[i].clone();
        for j in i..self.n {
            let g = &self.gram[j][j];
            let two_c = T::from(2) * self.cross[j].clone();
            let f = |y: i64| -> T {
                let y = T::from(y);
                g.clone() * y.clone() * y.clone() + two_c.clone() * y
            };
            let mut cands = vec![f(-b), f(b), f(0)];
            if !g.is_zero() {
                // Integer points around the vertex -cross/g.
                let num = -self.cross[j].clone();
                let v = floor_div(num, g.clone());
                for y in [v.clone(), v + T::from(1)] {
                    if y >= T::from(-b) && y <= T::from(b) {
                        cands.push(g.clone() * y.clone() * y.clone() + two_c.clone() * y);
                    }
                }
            }
            let cmin = cands.iter().min().cloned().expect("nonempty");
            let cmax = cands.into_iter().max().expect("nonempty");
            lo = lo + cmin;
            hi = hi + cmax;
        }
        (lo, hi)
    }
}

fn floor_div<T: Scalar>(a: T, b: T) -> T {
    let q = a.clone() / b.clone();
    let r = a - q.clone() * b.clone();
    if !r.is_zero() && (r.is_negative() != b.is_negative()) {
        q - T::from(1)
    } else {
        q
    }
}

/// All vectors with coordinates in `[-bound, bound]` and square in `square`,
/// in increasing lexicographic order.
pub fn enumerate_vectors(lattice: &Lattice, square: &IntRange, coord_bound: u32) -> Vec<LatticeVector> {
    BoxQuery::new(lattice, coord_bound).square(square.clone()).collect()
}

/// Outcome of a bounded search for a hyperbolic pair. `pair == None` means
/// nothing was found with coordinates up to `bound`; it says nothing about
/// larger vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicSearch {
    pub bound: u32,
    pub pair: Option<(LatticeVector, LatticeVector)>,
}

/// Searches for primitive isotropic `e, f` with `(e, f) = 1`.
///
/// Candidates for `e` are visited shell by shell (increasing max-norm) and in
/// decreasing lexicographic order inside a shell; for each `e` the same order
/// is used for `f`. The first pair found is returned.
pub fn find_hyperbolic_pair(lattice: &Lattice, coord_bound: u32) -> HyperbolicSearch {
    let mut pair = None;
    'outer: for shell in 1..=coord_bound {
        let mut found = None;
        BoxQuery::new(lattice, shell)
            .square(IntRange::exactly(0))
            .order(ScanOrder::Descending)
            .shell_only(true)
            .for_each(|e| {
                if !e.content().is_one() {
                    return ControlFlow::Continue(());
                }
                for f_shell in 1..=coord_bound {
                    let f = BoxQuery::new(lattice, f_shell)
                        .square(IntRange::exactly(0))
                        .pairing(e, IntRange::exactly(1))
                        .expect("e comes from this lattice")
                        .order(ScanOrder::Descending)
                        .shell_only(true)
                        .first();
                    if let Some(f) = f {
                        found = Some((e.clone(), f));
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            });
        if found.is_some() {
            pair = found;
            break 'outer;
        }
    }
    HyperbolicSearch { bound: coord_bound, pair }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_named;
    use num_traits::Zero;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    /// Plain nested scan, no pruning.
    fn brute(l: &Lattice, range: &IntRange, bound: i64) -> Vec<LatticeVector> {
        let n = l.rank();
        let mut out = Vec::new();
        let mut x = vec![-bound; n];
        loop {
            let lv = v(&x);
            if range.contains(&l.square(&lv).unwrap()) {
                out.push(lv);
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < bound {
                    x[i] += 1;
                    for y in x.iter_mut().skip(i + 1) {
                        *y = -bound;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn isotropic_vectors_of_u() {
        let u = make_named("U", None).unwrap();
        let got = enumerate_vectors(&u, &IntRange::exactly(0), 1);
        assert_eq!(got, vec![v(&[-1, 0]), v(&[0, -1]), v(&[0, 0]), v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn definite_lattice_has_no_roots() {
        let l = Lattice::rank_one(Int::from(2));
        assert!(enumerate_vectors(&l, &IntRange::exactly(-2), 10).is_empty());
    }

    #[test]
    fn minus_two_vectors_of_u() {
        let u = make_named("U", None).unwrap();
        let got = enumerate_vectors(&u, &IntRange::exactly(-2), 2);
        assert_eq!(got, vec![v(&[-1, 1]), v(&[1, -1])]);
        assert_eq!(got, brute(&u, &IntRange::exactly(-2), 2));
    }

    #[test]
    fn pruned_scan_matches_brute_force() {
        let lattices = [
            parse("U+A2(-1)"),
            parse("rank1(2)+rank1(-6)+U"),
            Lattice::from_i64(&[&[2, 1, 0], &[1, -4, 3], &[0, 3, 6]]).unwrap(),
        ];
        let ranges = [
            IntRange::exactly(0),
            IntRange::exactly(-2),
            IntRange::between(-4, 2),
            IntRange::at_least(10),
            IntRange { min: None, max: Some(Int::from(-7)) },
            IntRange::any(),
        ];
        for l in &lattices {
            for r in &ranges {
                assert_eq!(enumerate_vectors(l, r, 2), brute(l, r, 2), "{:?} {:?}", l, r);
            }
        }
    }

    #[test]
    fn descending_order_and_linear_constraint() {
        let u = make_named("U", None).unwrap();
        let e = v(&[1, 0]);
        let got = BoxQuery::new(&u, 1)
            .square(IntRange::exactly(0))
            .pairing(&e, IntRange::exactly(1))
            .unwrap()
            .order(ScanOrder::Descending)
            .collect();
        assert_eq!(got, vec![v(&[0, 1])]);
        let shell = BoxQuery::new(&u, 2).square(IntRange::exactly(0)).shell_only(true).collect();
        assert_eq!(shell, vec![v(&[-2, 0]), v(&[0, -2]), v(&[0, 2]), v(&[2, 0])]);
    }

    fn parse(s: &str) -> Lattice {
        crate::lattice::parse_lattice_expr(s).unwrap()
    }

    #[test]
    fn hyperbolic_pairs() {
        let u = make_named("U", None).unwrap();
        let found = find_hyperbolic_pair(&u, 3);
        assert_eq!(found.pair, Some((v(&[1, 0]), v(&[0, 1]))));

        let l = parse("U+rank1(-6)");
        let found = find_hyperbolic_pair(&l, 2);
        assert_eq!(found.pair, Some((v(&[1, 0, 0]), v(&[0, 1, 0]))));

        let l = parse("rank1(2)+rank1(-2)");
        let found = find_hyperbolic_pair(&l, 5);
        assert_eq!(found, HyperbolicSearch { bound: 5, pair: None });

        assert_eq!(find_hyperbolic_pair(&u, 0).pair, None);
    }

    #[test]
    fn hyperbolic_pair_in_k3_lattice() {
        let k3 = make_named("K3", None).unwrap();
        let (e, f) = find_hyperbolic_pair(&k3, 1).pair.expect("K3 contains U");
        assert_eq!(k3.square(&e).unwrap(), Int::zero());
        assert_eq!(k3.square(&f).unwrap(), Int::zero());
        assert_eq!(k3.pair(&e, &f).unwrap(), Int::from(1));
    }
}
