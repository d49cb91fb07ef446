//! Named lattices and the `"U+U+rank1(-4)"` expression grammar.

use std::fmt;
use std::str::FromStr;

use crate::arith::Int;
use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};

use super::Lattice;

/// E8 Cartan matrix, Bourbaki node order (node 2 hangs off node 4).
pub fn e8_cartan() -> IntMatrix {
    const EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8)];
    let mut m = matrix::zeros(8, 8);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Int::from(2);
    }
    for (a, b) in EDGES {
        m[a - 1][b - 1] = Int::from(-1);
        m[b - 1][a - 1] = Int::from(-1);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedLattice {
    U,
    E8Neg,
    A2Neg,
    RankOne(Int),
    K3,
    K3n(i64),
    Kum(i64),
    Og10,
}

impl NamedLattice {
    pub fn build(&self) -> Result<Lattice> {
        let u = || Lattice::from_i64(&[&[0, 1], &[1, 0]]);
        let e8 = || Lattice::new(e8_cartan())?.twist(&Int::from(-1));
        let k3 = || -> Result<Lattice> {
            let u = u()?;
            let e8 = e8()?;
            Ok(u.direct_sum(&u).direct_sum(&u).direct_sum(&e8).direct_sum(&e8))
        };
        let lattice = match self {
            NamedLattice::U => u()?,
            NamedLattice::E8Neg => e8()?,
            NamedLattice::A2Neg => Lattice::from_i64(&[&[-2, 1], &[1, -2]])?,
            NamedLattice::RankOne(q) => Lattice::rank_one(q.clone()),
            NamedLattice::K3 => k3()?,
            NamedLattice::K3n(n) => {
                check_n("K3n", *n)?;
                k3()?.direct_sum(&Lattice::rank_one(Int::from(-2 * (n - 1))))
            }
            NamedLattice::Kum(n) => {
                check_n("Kum", *n)?;
                let u = u()?;
                u.direct_sum(&u)
                    .direct_sum(&u)
                    .direct_sum(&Lattice::rank_one(Int::from(-2 * (n + 1))))
            }
            NamedLattice::Og10 => k3()?.direct_sum(&Lattice::from_i64(&[&[-2, 1], &[1, -2]])?),
        };
        Ok(lattice.with_label(self.to_string()))
    }
}

fn check_n(name: &str, n: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("{name} needs n >= 2, got {n}")));
    }
    Ok(())
}

impl fmt::Display for NamedLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedLattice::U => write!(f, "U"),
            NamedLattice::E8Neg => write!(f, "E8(-1)"),
            NamedLattice::A2Neg => write!(f, "A2(-1)"),
            NamedLattice::RankOne(q) => write!(f, "rank1({q})"),
            NamedLattice::K3 => write!(f, "K3"),
            NamedLattice::K3n(n) => write!(f, "K3n({n})"),
            NamedLattice::Kum(n) => write!(f, "Kum({n})"),
            NamedLattice::Og10 => write!(f, "OG10"),
        }
    }
}

impl FromStr for NamedLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.find('(') {
            Some(open) => {
                let close = s
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{s}`")))?;
                (s[..open].trim(), Some(close[open + 1..].trim()))
            }
            None => (s, None),
        };
        let int_arg = || -> Result<Int> {
            let a = arg.ok_or_else(|| Error::InvalidParameter(format!("`{head}` needs an argument")))?;
            a.parse::<Int>()
                .map_err(|_| Error::Parse(format!("expected an integer in `{s}`")))
        };
        let small_arg = || -> Result<i64> {
            let a = arg.ok_or_else(|| Error::InvalidParameter(format!("`{head}` needs an argument")))?;
            a.parse::<i64>()
                .map_err(|_| Error::Parse(format!("expected an integer in `{s}`")))
        };
        match (head, arg) {
            ("U", None) => Ok(NamedLattice::U),
            ("E8", Some("-1")) => Ok(NamedLattice::E8Neg),
            ("A2", Some("-1")) => Ok(NamedLattice::A2Neg),
            ("rank1", _) => Ok(NamedLattice::RankOne(int_arg()?)),
            ("K3", None) => Ok(NamedLattice::K3),
            ("K3n", _) => Ok(NamedLattice::K3n(small_arg()?)),
            ("Kum", _) => Ok(NamedLattice::Kum(small_arg()?)),
            ("OG10", None) => Ok(NamedLattice::Og10),
            _ => Err(Error::UnknownLattice(s.to_string())),
        }
    }
}

/// Builds a named lattice. `param` is the `q` of `rank1` or the `n` of
/// `K3n` / `Kum`; the name may also carry it inline, as in `"K3n(3)"`.
pub fn make_named(name: &str, param: Option<i64>) -> Result<Lattice> {
    let name = name.trim();
    let named = match (param, name) {
        (Some(p), "rank1") => NamedLattice::RankOne(Int::from(p)),
        (Some(p), "K3n") => NamedLattice::K3n(p),
        (Some(p), "Kum") => NamedLattice::Kum(p),
        (Some(_), other) if !other.contains('(') => {
            return Err(Error::InvalidParameter(format!("`{other}` takes no parameter")))
        }
        _ => name.parse()?,
    };
    named.build()
}

/// Parses `"U+U+rank1(-4)"`: named summands joined by `+`.
pub fn parse_lattice_expr(expr: &str) -> Result<Lattice> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in expr.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&expr[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in `{expr}`")));
        }
    }
    parts.push(&expr[start..]);
    let mut acc: Option<Lattice> = None;
    for part in parts {
        if part.trim().is_empty() {
            return Err(Error::Parse(format!("empty summand in `{expr}`")));
        }
        let l = part.parse::<NamedLattice>()?.build()?;
        acc = Some(match acc {
            None => l,
            Some(a) => a.direct_sum(&l),
        });
    }
    let lattice = acc.expect("at least one summand");
    Ok(lattice.with_label(expr.split_whitespace().collect::<String>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn named_shapes() {
        let u = make_named("U", None).unwrap();
        assert_eq!(u.gram(), &matrix::from_i64(&[&[0, 1], &[1, 0]]));
        let k3n = make_named("K3n", Some(2)).unwrap();
        assert_eq!(k3n.rank(), 23);
        assert_eq!(k3n.gram()[22][22], Int::from(-2));
        assert_eq!(k3n.label(), Some("K3n(2)"));
        let kum = make_named("Kum(3)", None).unwrap();
        assert_eq!(kum.rank(), 7);
        assert_eq!(kum.gram()[6][6], Int::from(-8));
        assert_eq!(make_named("OG10", None).unwrap().rank(), 24);
        assert_eq!(make_named("K3", None).unwrap().rank(), 22);
        assert_eq!(make_named("rank1", Some(-4)).unwrap().gram()[0][0], Int::from(-4));
    }

    #[test]
    fn e8_is_unimodular_and_even() {
        let e8 = Lattice::new(e8_cartan()).unwrap();
        assert_eq!(e8.determinant(), Int::from(1));
        assert!(e8.is_even());
        let neg = make_named("E8(-1)", None).unwrap();
        assert!(neg.gram().iter().enumerate().all(|(i, r)| r[i] == Int::from(-2)));
        assert_eq!(neg.determinant().abs(), Int::from(1));
    }

    #[test]
    fn named_errors() {
        assert!(matches!(make_named("K3n", Some(1)), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_named("Kum(0)", None), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_named("D4", None), Err(Error::UnknownLattice(_))));
        assert!(matches!(make_named("U", Some(3)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn expressions() {
        let l = parse_lattice_expr("U+U+rank1(-4)").unwrap();
        assert_eq!(l.rank(), 5);
        assert_eq!(l.gram()[4][4], Int::from(-4));
        assert_eq!(l.label(), Some("U+U+rank1(-4)"));
        let l = parse_lattice_expr(" U + E8(-1) ").unwrap();
        assert_eq!(l.rank(), 10);
        assert!(parse_lattice_expr("U++U").is_err());
        assert!(parse_lattice_expr("rank1(2").is_err());
        assert!(parse_lattice_expr("U+X").is_err());
    }
}
