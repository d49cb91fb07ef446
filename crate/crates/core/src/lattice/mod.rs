//! Finite-rank integral lattices given by a symmetric Gram matrix.

mod enumerate;
mod named;

pub use enumerate::{
    enumerate_vectors, find_hyperbolic_pair, BoxQuery, HyperbolicSearch, IntRange, LinearConstraint, ScanOrder,
    SquareRange,
};
pub use named::{e8_cartan, make_named, parse_lattice_expr, NamedLattice};

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Int, Rat};
use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};

/// Integral lattice: a symmetric integer Gram matrix plus an optional name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct Lattice {
    gram: IntMatrix,
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(with = "arith::serde_int_matrix")]
    gram: IntMatrix,
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = Error;

    fn try_from(j: LatticeJson) -> Result<Self> {
        let l = Lattice::new(j.gram)?;
        Ok(match j.label {
            Some(s) => l.with_label(s),
            None => l,
        })
    }
}

impl From<Lattice> for LatticeJson {
    fn from(l: Lattice) -> Self {
        LatticeJson { label: l.label, gram: l.gram }
    }
}

/// Integer coordinates with respect to the basis of some lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(#[serde(with = "arith::serde_int_vec")] pub Vec<Int>);

/// Rational coordinates, used for curve classes and projections.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(#[serde(with = "arith::serde_rat_vec")] pub Vec<Rat>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero == 0 {
            write!(f, "({},{})", self.positive, self.negative)
        } else {
            write!(f, "({},{},{})", self.positive, self.negative, self.zero)
        }
    }
}

/// Finite abelian group `L^dual / L` in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantGroup {
    #[serde(with = "arith::serde_int_vec")]
    pub invariant_factors: Vec<Int>,
    #[serde(with = "arith::serde_int")]
    pub order: Int,
    pub length: usize,
}

/// A sublattice together with its basis in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sublattice {
    pub lattice: Lattice,
    /// One row per basis vector, in coordinates of the ambient lattice.
    #[serde(with = "arith::serde_int_matrix")]
    pub basis: IntMatrix,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_vectors(&self) -> Vec<LatticeVector> {
        self.basis.iter().cloned().map(LatticeVector).collect()
    }
}

impl LatticeVector {
    pub fn from_i64(v: &[i64]) -> Self {
        LatticeVector(v.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![Int::zero(); n])
    }

    /// Standard basis vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = Int::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the coordinates; zero only for the zero vector.
    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self.content().is_one())
    }

    pub fn scaled(&self, s: &Int) -> Self {
        LatticeVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().cloned().map(Rat::from_integer).collect())
    }

    pub fn max_norm(&self) -> Int {
        self.0.iter().map(Signed::abs).max().unwrap_or_else(Int::zero)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl RationalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        RationalVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Common denominator of the coordinates.
    pub fn denominator(&self) -> Int {
        self.0.iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
    }

    /// The vector as integers, if every coordinate is integral.
    pub fn to_integral(&self) -> Option<LatticeVector> {
        self.0
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(LatticeVector)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(arith::fmt_rat).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let rank = gram.len();
        for (row, entries) in gram.iter().enumerate() {
            if entries.len() != rank {
                return Err(Error::NotSquare { row, len: entries.len(), rank });
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(Lattice { gram, label: None })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(matrix::from_i64(rows))
    }

    /// Rank-one lattice `<q>`.
    pub fn rank_one(q: Int) -> Self {
        Lattice { gram: vec![vec![q]], label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn without_label(mut self) -> Self {
        self.label = None;
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, row)| row[i].is_even())
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let (a, b) = (self.rank(), other.rank());
        let mut gram = matrix::zeros(a + b, a + b);
        for i in 0..a {
            gram[i][..a].clone_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            gram[a + i][a..].clone_from_slice(&other.gram[i]);
        }
        let label = match (&self.label, &other.label) {
            (Some(x), Some(y)) => Some(format!("{x}+{y}")),
            _ => None,
        };
        Lattice { gram, label }
    }

    /// The lattice `L(s)`: every pairing multiplied by `s`.
    pub fn twist(&self, s: &Int) -> Result<Lattice> {
        if s.is_zero() {
            return Err(Error::ZeroTwist);
        }
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|x| x * s).collect())
            .collect();
        let label = self.label.as_ref().map(|l| format!("{l}({s})"));
        Ok(Lattice { gram, label })
    }

    /// Gram matrix of the vectors given as rows of `basis`: `B G B^T`.
    pub fn induced_gram(&self, basis: &IntMatrix) -> IntMatrix {
        let bg = matrix::mul(basis, &self.gram);
        matrix::mul(&bg, &matrix::transpose(basis))
    }

    pub fn determinant(&self) -> Int {
        matrix::det(&self.gram)
    }

    pub fn is_degenerate(&self) -> bool {
        self.determinant().is_zero()
    }

    /// Signature by symmetric Gaussian elimination over the rationals.
    ///
    /// Only congruence moves are used (simultaneous row and column
    /// operations), so the counts are Sylvester invariants.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: Vec<Vec<Rat>> = self
            .gram
            .iter()
            .map(|row| row.iter().cloned().map(Rat::from_integer).collect())
            .collect();
        let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    sym_swap(&mut a, k, i);
                } else if let Some((i, j)) = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero())
                {
                    // All remaining diagonal entries vanish: e_i + e_j has square 2 a_ij.
                    sym_add(&mut a, i, j);
                    sym_swap(&mut a, k, i);
                } else {
                    sig.zero += n - k;
                    return sig;
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for r in k + 1..n {
                if a[r][k].is_zero() {
                    continue;
                }
                let f = &a[r][k] / &pivot;
                for c in k..n {
                    let delta = &f * &a[k][c];
                    a[r][c] -= delta;
                }
                for c in k..n {
                    let delta = &f * &a[c][k];
                    a[c][r] -= delta;
                }
            }
        }
        sig
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        let snf = matrix::smith_normal_form(&self.gram);
        if snf.diagonal.iter().any(Zero::is_zero) {
            return Err(Error::Degenerate);
        }
        let invariant_factors: Vec<Int> = snf.diagonal.into_iter().filter(|d| !d.is_one()).collect();
        let order = invariant_factors.iter().product();
        Ok(DiscriminantGroup { length: invariant_factors.len(), invariant_factors, order })
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: len });
        }
        Ok(())
    }

    /// `G v`, the pairing of `v` against every basis vector.
    pub fn pairing_row(&self, v: &LatticeVector) -> Result<Vec<Int>> {
        self.check_dim(v.len())?;
        Ok(matrix::vec_mul(&v.0, &self.gram))
    }

    pub fn pair(&self, v: &LatticeVector, w: &LatticeVector) -> Result<Int> {
        self.check_dim(w.len())?;
        let row = self.pairing_row(v)?;
        Ok(row.iter().zip(&w.0).map(|(a, b)| a * b).sum())
    }

    pub fn square(&self, v: &LatticeVector) -> Result<Int> {
        self.pair(v, v)
    }

    pub fn pair_rational(&self, v: &RationalVector, w: &RationalVector) -> Result<Rat> {
        self.check_dim(v.len())?;
        self.check_dim(w.len())?;
        let mut total = Rat::zero();
        for (i, vi) in v.0.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, wj) in w.0.iter().enumerate() {
                if !wj.is_zero() && !self.gram[i][j].is_zero() {
                    total += vi * wj * Rat::from_integer(self.gram[i][j].clone());
                }
            }
        }
        Ok(total)
    }

    pub fn square_rational(&self, v: &RationalVector) -> Result<Rat> {
        self.pair_rational(v, v)
    }

    /// Positive generator of the ideal `(v, L)`.
    pub fn divisibility(&self, v: &LatticeVector) -> Result<Int> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = self.pairing_row(v)?.iter().fold(Int::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(g)
    }

    /// Curve class `D / div(D)` of a primitive divisor `D`.
    pub fn dual_curve(&self, d: &LatticeVector) -> Result<RationalVector> {
        if !d.is_primitive()? {
            return Err(Error::NotPrimitive);
        }
        let div = Rat::from_integer(self.divisibility(d)?);
        Ok(d.to_rational().scaled(&div.recip()))
    }

    /// Smallest positive integral multiple of `c`; primitive by construction.
    pub fn dual_divisor(&self, c: &RationalVector) -> Result<LatticeVector> {
        self.check_dim(c.len())?;
        if c.is_zero() {
            return Err(Error::ZeroVector);
        }
        let den = Rat::from_integer(c.denominator());
        let cleared = c.scaled(&den).to_integral().expect("denominators cleared");
        let content = cleared.content();
        Ok(LatticeVector(cleared.0.into_iter().map(|x| x / &content).collect()))
    }

    /// Span of `gens` with the induced form. Generators must be independent.
    pub fn sublattice(&self, gens: &[LatticeVector]) -> Result<Sublattice> {
        for g in gens {
            self.check_dim(g.len())?;
        }
        let basis: IntMatrix = gens.iter().map(|g| g.0.clone()).collect();
        if matrix::rank(&basis) != basis.len() {
            return Err(Error::DependentGenerators);
        }
        let lattice = Lattice::new(self.induced_gram(&basis))?;
        Ok(Sublattice { lattice, basis })
    }

    /// Primitive closure `(S tensor Q) ∩ L`, returned with a Hermite basis.
    pub fn saturate(&self, s: &Sublattice) -> Result<Sublattice> {
        let n = self.rank();
        if s.basis.is_empty() {
            return Ok(Sublattice { lattice: Lattice::new(Vec::new())?, basis: Vec::new() });
        }
        for row in &s.basis {
            self.check_dim(row.len())?;
        }
        let annihilator = matrix::integer_kernel(&s.basis, n);
        let basis = if annihilator.is_empty() {
            matrix::identity(n)
        } else {
            matrix::integer_kernel(&annihilator, n)
        };
        let lattice = Lattice::new(self.induced_gram(&basis))?;
        Ok(Sublattice { lattice, basis })
    }

    /// `{ x in L : (x, s) = 0 for all s in S }`, with its induced form.
    pub fn orthogonal_complement(&self, s: &[LatticeVector]) -> Result<Sublattice> {
        let n = self.rank();
        let rows = s.iter().map(|v| self.pairing_row(v)).collect::<Result<IntMatrix>>()?;
        let basis = matrix::integer_kernel(&rows, n);
        let lattice = Lattice::new(self.induced_gram(&basis))?;
        Ok(Sublattice { lattice, basis })
    }

    /// Reflection `x - 2 (x,d)/(d,d) d`, required to be integral.
    pub fn reflect(&self, d: &LatticeVector, x: &LatticeVector) -> Result<LatticeVector> {
        let dd = self.square(d)?;
        if dd.is_zero() {
            return Err(Error::IsotropicVector);
        }
        let num: Int = self.pair(x, d)? * 2;
        let (q, r) = num.div_rem(&dd);
        if !r.is_zero() {
            return Err(Error::NonIntegralReflection { square: dd.to_string() });
        }
        Ok(LatticeVector(x.0.iter().zip(&d.0).map(|(xi, di)| xi - &q * di).collect()))
    }

    /// `x - (x,h)/(h,h) h`, the orthogonal projection onto `h^perp` over Q.
    pub fn project_to_complement(&self, h: &LatticeVector, x: &LatticeVector) -> Result<RationalVector> {
        let hh = self.square(h)?;
        if hh.is_zero() {
            return Err(Error::IsotropicVector);
        }
        let coef = Rat::new(self.pair(x, h)?, hh);
        Ok(x.to_rational().sub(&h.to_rational().scaled(&coef)))
    }
}

fn sym_swap(a: &mut [Vec<Rat>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Replace basis vector `i` by `e_i + e_j`.
fn sym_add(a: &mut [Vec<Rat>], i: usize, j: usize) {
    let n = a.len();
    for c in 0..n {
        let v = a[j][c].clone();
        a[i][c] += v;
    }
    for r in 0..n {
        let v = a[r][j].clone();
        a[r][i] += v;
    }
}

/// Change of basis check: is `target` (rows) a basis of the same lattice as
/// `basis` (rows)? Both are in ambient coordinates.
pub fn same_span(basis: &IntMatrix, target: &IntMatrix) -> bool {
    if basis.len() != target.len() {
        return false;
    }
    let mut coords = Vec::with_capacity(target.len());
    for t in target {
        let Some(c) = matrix::solve_in_span(basis, t) else {
            return false;
        };
        let Some(c) = c
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        coords.push(c);
    }
    matrix::det(&coords).abs().is_one()
}
