//! Differential-polynomial operations on [`Poly`] relative to a [`Ranking`].
//!
//! Variables whose base name is ranked are derivatives `δ^k z`; all other
//! variables are constants for the derivation.

use std::cmp::Ordering;

use super::ranking::Ranking;
use crate::algebra::{Field, Monomial, Poly, RatFunc, RfPoly, Var};
use crate::error::{Error, Result};

/// Rank of a nonconstant differential polynomial: leader and its degree.
pub type Rank = (Var, u32);

/// Total derivative. `cap` bounds the order of any produced derivative.
pub fn derive(f: &Poly, r: &Ranking, cap: Option<u32>) -> Result<Poly> {
    let mut out = Poly::zero();
    for v in f.vars() {
        if !r.is_ranked(&v) {
            continue;
        }
        let dv = v.shifted(1);
        if let Some(c) = cap {
            if dv.order() > c {
                return Err(Error::JetCap {
                    order: dv.order(),
                    cap: c,
                });
            }
        }
        let part = f.derivative(&v);
        out = &out + &(&part * &Poly::var(dv));
    }
    Ok(out)
}

/// `k`-th total derivative.
pub fn derive_n(f: &Poly, k: u32, r: &Ranking, cap: Option<u32>) -> Result<Poly> {
    let mut g = f.clone();
    for _ in 0..k {
        g = derive(&g, r, cap)?;
    }
    Ok(g)
}

pub fn ranked_vars(f: &Poly, r: &Ranking) -> Vec<Var> {
    let mut vs: Vec<Var> = f.vars().into_iter().filter(|v| r.is_ranked(v)).collect();
    vs.sort_by(|a, b| r.cmp(a, b));
    vs
}

/// Highest ranked variable present, `None` for elements of the coefficient ring.
pub fn leader(f: &Poly, r: &Ranking) -> Option<Var> {
    f.vars()
        .into_iter()
        .filter(|v| r.is_ranked(v))
        .max_by(|a, b| r.cmp(a, b))
}

fn need_leader(f: &Poly, r: &Ranking) -> Result<Var> {
    leader(f, r).ok_or_else(|| Error::Invalid(format!("`{f}` has no leader")))
}

pub fn initial(f: &Poly, r: &Ranking) -> Result<Poly> {
    let v = need_leader(f, r)?;
    Ok(f.lead_coeff_in(&v))
}

pub fn separant(f: &Poly, r: &Ranking) -> Result<Poly> {
    let v = need_leader(f, r)?;
    Ok(f.derivative(&v))
}

pub fn rank(f: &Poly, r: &Ranking) -> Option<Rank> {
    leader(f, r).map(|v| {
        let d = f.degree_in(&v);
        (v, d)
    })
}

pub fn cmp_rank(a: &Rank, b: &Rank, r: &Ranking) -> Ordering {
    r.cmp(&a.0, &b.0).then(a.1.cmp(&b.1))
}

/// Compares polynomials by rank; constants are lowest.
pub fn cmp_poly_rank(f: &Poly, g: &Poly, r: &Ranking) -> Ordering {
    match (rank(f, r), rank(g, r)) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(a), Some(b)) => cmp_rank(&a, &b, r),
    }
}

/// `Some(k)` with `k > 0` when `v` is the `k`-th derivative of `of`.
pub fn proper_derivative_order(v: &Var, of: &Var) -> Option<u32> {
    (v.name() == of.name() && v.order() > of.order()).then(|| v.order() - of.order())
}

/// Whether `f` is reduced with respect to `g`.
pub fn is_reduced_wrt(f: &Poly, g: &Poly, r: &Ranking) -> bool {
    let Some(lg) = leader(g, r) else {
        return false;
    };
    let dg = g.degree_in(&lg);
    if f.vars().iter().any(|v| proper_derivative_order(v, &lg).is_some()) {
        return false;
    }
    f.degree_in(&lg) < dg
}

/// Lex comparison of monomials in which ranked variables are compared by the
/// ranking (highest most significant). Unranked variables are ignored.
pub fn ranked_lex_cmp(a: &Monomial, b: &Monomial, r: &Ranking) -> Ordering {
    let mut vs: Vec<&Var> = a
        .vars()
        .chain(b.vars())
        .filter(|v| r.is_ranked(v))
        .collect();
    vs.sort_by(|x, y| r.cmp(y, x));
    vs.dedup();
    for v in vs {
        match a.degree_in(v).cmp(&b.degree_in(v)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Splits `f` into ranked monomials with coefficients in the unranked variables.
pub fn split_ranked(f: &Poly, r: &Ranking) -> Vec<(Monomial, Poly)> {
    let mut map: std::collections::BTreeMap<Monomial, Poly> = Default::default();
    for (m, c) in f.terms() {
        let (ranked, rest): (Vec<_>, Vec<_>) = m
            .pairs()
            .iter()
            .cloned()
            .partition(|(v, _)| r.is_ranked(v));
        let key = Monomial::from_pairs(ranked);
        map.entry(key)
            .or_default()
            .add_term(Monomial::from_pairs(rest), c.clone());
    }
    map.into_iter().collect()
}

/// Reinterprets `f` over the field of fractions of the unranked variables.
pub fn to_rf(f: &Poly, r: &Ranking) -> RfPoly {
    RfPoly::from_terms(
        split_ranked(f, r)
            .into_iter()
            .map(|(m, c)| (m, RatFunc::from_poly(c))),
    )
}

/// Divides by the coefficient of the highest monomial under the
/// ranking-induced lex order.
pub fn monic_rf(f: &RfPoly, r: &Ranking) -> RfPoly {
    let Some((_, c)) = f
        .terms()
        .max_by(|a, b| ranked_lex_cmp(a.0, b.0, r))
    else {
        return RfPoly::zero();
    };
    let inv = c.finv();
    f.scale(&inv)
}

/// Highest monomial of `f` under the ranking-induced lex order.
pub fn highest_monomial<C: Field>(f: &crate::algebra::Polynomial<C>, r: &Ranking) -> Option<Monomial> {
    f.monomials()
        .max_by(|a, b| ranked_lex_cmp(a, b, r))
        .cloned()
}

/// Clears coefficient denominators of an [`RfPoly`], giving a polynomial
/// in ranked and unranked variables together.
pub fn clear_denominators(f: &RfPoly) -> Poly {
    let mut d = Poly::one();
    for (_, c) in f.terms() {
        d = crate::algebra::gcd::lcm(&d, c.den());
    }
    let mut out = Poly::zero();
    for (m, c) in f.terms() {
        let k = crate::algebra::gcd::exact_div(&d, c.den()).expect("lcm");
        let part = &c.num().clone() * &k;
        out = &out + &part.mul_monomial(m, &crate::algebra::rat(1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn j(n: &str, k: u32) -> Poly {
        Poly::var(Var::jet(n, k))
    }

    #[test]
    fn derivation_rules() {
        let r = Ranking::orderly(&["y1", "y4", "y"]).unwrap();
        assert_eq!(derive(&j("y1", 0), &r, None).unwrap(), j("y1", 1));
        let p = &j("y1", 0) * &j("y4", 0);
        assert_eq!(
            derive(&p, &r, None).unwrap(),
            &(&j("y1", 1) * &j("y4", 0)) + &(&j("y1", 0) * &j("y4", 1))
        );
        let mu = Poly::var(Var::new("mu"));
        assert_eq!(derive(&(&mu * &j("y", 0)), &r, None).unwrap(), &mu * &j("y", 1));
        assert!(matches!(derive(&j("y", 2), &r, Some(2)), Err(Error::JetCap { .. })));
    }

    #[test]
    fn leader_initial_separant() {
        let r = Ranking::elimination(&["y2", "y1", "y3"]).unwrap();
        // q1 = 2 y2 + 2 y1 y1' + 1
        let q1 = &(&j("y2", 0).scale(&rat(2)) + &(&j("y1", 0) * &j("y1", 1)).scale(&rat(2))) + &Poly::from_i64(1);
        assert_eq!(leader(&q1, &r), Some(Var::new("y2")));
        assert_eq!(initial(&q1, &r).unwrap(), Poly::from_i64(2));
        assert_eq!(separant(&q1, &r).unwrap(), Poly::from_i64(2));
        let r2 = Ranking::elimination(&["y1", "y2"]).unwrap();
        let a = Poly::var(Var::new("a"));
        let b = Poly::var(Var::new("b"));
        let p = &(&j("y1", 0) - &(&a * &j("y2", 0))) - &b;
        assert_eq!(leader(&p, &r2), Some(Var::new("y1")));
        assert!(initial(&p, &r2).unwrap().is_one());
        assert!(separant(&p, &r2).unwrap().is_one());
        assert!(initial(&a, &r2).is_err());
    }
}
