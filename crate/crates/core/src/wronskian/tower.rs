//! Finite algebraic extensions `ℚ(free)[v_1..v_k]/(A_1..A_k)` given by a
//! triangular set, one generator per algebraic leader.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::groebner::{normal_form, TermOrder};
use crate::algebra::{Field, Matrix, Monomial, Poly, RatFunc, Rational, RfPoly, Var};
use crate::error::{Error, Result};

/// Reinterprets `p` as a polynomial in `vars` with coefficients in the
/// fraction field of the remaining variables.
pub fn split_over(p: &Poly, vars: &BTreeSet<Var>) -> RfPoly {
    let mut map: std::collections::BTreeMap<Monomial, Poly> = Default::default();
    for (m, c) in p.terms() {
        let (ring, coef): (Vec<_>, Vec<_>) =
            m.pairs().iter().cloned().partition(|(v, _)| vars.contains(v));
        map.entry(Monomial::from_pairs(ring))
            .or_default()
            .add_term(Monomial::from_pairs(coef), c.clone());
    }
    RfPoly::from_terms(map.into_iter().map(|(m, c)| (m, RatFunc::from_poly(c))))
}

#[derive(Debug)]
pub struct Tower {
    /// Generators, highest first.
    vars: Vec<Var>,
    degrees: Vec<u32>,
    order: TermOrder,
    /// Monic relations with pure-power leading monomials.
    relations: Vec<RfPoly>,
}

impl Tower {
    /// Builds the tower from relations listed lowest generator first; each
    /// relation involves only its own generator and lower ones.
    pub fn new(defs: Vec<(Var, Poly)>) -> Result<Arc<Tower>> {
        let all: BTreeSet<Var> = defs.iter().map(|(v, _)| v.clone()).collect();
        let mut vars: Vec<Var> = defs.iter().map(|(v, _)| v.clone()).collect();
        vars.reverse();
        let order = TermOrder::lex(vars.clone());
        let mut t = Tower {
            vars: Vec::new(),
            degrees: Vec::new(),
            order: order.clone(),
            relations: Vec::new(),
        };
        for (v, p) in defs {
            let rp = split_over(&p, &all);
            let d = rp.degree_in(&v);
            if d == 0 {
                return Err(Error::Invalid(format!("relation does not involve {v}")));
            }
            let lc = rp.lead_coeff_in(&v);
            let arc = Arc::new(t.snapshot());
            let inv = AlgElem::new(lc, Some(arc)).try_inv()?;
            let monic = reduce(&(&rp * &inv.poly), &t.relations, &order);
            t.vars.insert(0, v);
            t.degrees.insert(0, d);
            t.relations.push(monic);
        }
        Ok(Arc::new(t))
    }

    fn snapshot(&self) -> Tower {
        Tower {
            vars: self.vars.clone(),
            degrees: self.degrees.clone(),
            order: self.order.clone(),
            relations: self.relations.clone(),
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn dimension(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).product()
    }

    fn basis(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        for (v, &d) in self.vars.iter().zip(&self.degrees) {
            let mut next = Vec::new();
            for m in &out {
                for e in 0..d {
                    let mut pairs = m.pairs().to_vec();
                    if e > 0 {
                        pairs.push((v.clone(), e));
                    }
                    next.push(Monomial::from_pairs(pairs));
                }
            }
            out = next;
        }
        out
    }

    pub fn reduce(&self, p: &RfPoly) -> RfPoly {
        reduce(p, &self.relations, &self.order)
    }
}

fn reduce(p: &RfPoly, rels: &[RfPoly], order: &TermOrder) -> RfPoly {
    if rels.is_empty() {
        return p.clone();
    }
    normal_form(p, rels, order)
}

/// Element of a [`Tower`], stored in normal form. Elements without a tower
/// live in the coefficient field and combine with any tower.
#[derive(Clone)]
pub struct AlgElem {
    poly: RfPoly,
    tower: Option<Arc<Tower>>,
}

impl AlgElem {
    pub fn new(p: RfPoly, tower: Option<Arc<Tower>>) -> Self {
        let poly = match &tower {
            Some(t) => t.reduce(&p),
            None => p,
        };
        AlgElem { poly, tower }
    }

    pub fn poly(&self) -> &RfPoly {
        &self.poly
    }

    /// Representative as a rational function with generators as variables.
    pub fn to_ratfunc(&self) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (m, c) in self.poly.terms() {
            let mono = RatFunc::from_poly(Poly::term(m.clone(), Rational::from_integer(1.into())));
            acc = acc.fadd(&mono.fmul(c));
        }
        acc
    }

    fn join(&self, o: &Self) -> Option<Arc<Tower>> {
        self.tower.clone().or_else(|| o.tower.clone())
    }

    pub fn try_inv(&self) -> Result<AlgElem> {
        if self.poly.is_zero() {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        if let Some(c) = self.poly.constant_value() {
            return Ok(AlgElem {
                poly: RfPoly::constant(c.finv()),
                tower: self.tower.clone(),
            });
        }
        let t = self.tower.clone().expect("non-constant element has a tower");
        let basis = t.basis();
        let n = basis.len();
        let mut m: Matrix<RatFunc> = Matrix::zeros(n, n + 1);
        for (j, b) in basis.iter().enumerate() {
            let prod = t.reduce(&self.poly.mul_monomial(b, &RatFunc::one()));
            for (i, bi) in basis.iter().enumerate() {
                m.set(i, j, prod.coeff(bi));
            }
        }
        m.set(0, n, RatFunc::one());
        let (rr, piv) = m.rref();
        if piv.len() < n || piv.contains(&n) {
            return Err(Error::Invalid(
                "extension relations do not define a field".into(),
            ));
        }
        let mut acc = RfPoly::zero();
        for (i, &p) in piv.iter().enumerate() {
            acc.add_term(basis[p].clone(), rr.get(i, n).clone());
        }
        Ok(AlgElem {
            poly: acc,
            tower: Some(t),
        })
    }
}

impl PartialEq for AlgElem {
    fn eq(&self, o: &Self) -> bool {
        self.poly == o.poly
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl Field for AlgElem {
    fn zero() -> Self {
        AlgElem {
            poly: RfPoly::zero(),
            tower: None,
        }
    }
    fn one() -> Self {
        AlgElem {
            poly: RfPoly::one(),
            tower: None,
        }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    fn is_one(&self) -> bool {
        self.poly.is_one()
    }
    fn fadd(&self, o: &Self) -> Self {
        AlgElem {
            poly: &self.poly + &o.poly,
            tower: self.join(o),
        }
    }
    fn fsub(&self, o: &Self) -> Self {
        AlgElem {
            poly: &self.poly - &o.poly,
            tower: self.join(o),
        }
    }
    fn fmul(&self, o: &Self) -> Self {
        AlgElem::new(&self.poly * &o.poly, self.join(o))
    }
    fn fneg(&self) -> Self {
        AlgElem {
            poly: -&self.poly,
            tower: self.tower.clone(),
        }
    }
    fn finv(&self) -> Self {
        self.try_inv().expect("invertible element")
    }
    fn from_rational(q: Rational) -> Self {
        AlgElem {
            poly: RfPoly::constant(RatFunc::from_rational(q)),
            tower: None,
        }
    }
    fn is_rational(&self) -> bool {
        self.poly.constant_value().is_some_and(|c| c.is_rational())
    }
    fn needs_parens(&self) -> bool {
        self.poly.len() > 1
            || self.poly.terms().any(|(m, c)| m.is_one() && c.needs_parens())
    }
    fn is_negative_printed(&self) -> bool {
        self.poly.len() == 1
            && self.poly.terms().all(|(m, c)| m.is_one() && c.is_negative_printed())
    }
}
