//! Wronskians of equation monomials and the fields generated by their
//! reduced row echelon forms.

mod tower;

pub use tower::{split_over, AlgElem, Tower};

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{rank_probabilistic, rank_symbolic, Field, Matrix, Poly, RatFunc, Rational, Var};
use crate::diff::diffpoly::{derive_n, ranked_lex_cmp};
use crate::diff::ritt::ritt_reduce;
use crate::diff::AutoreducedSet;
use crate::error::{Error, Result};
use crate::fields::FieldDesc;
use crate::io_elim::IoEquations;
use crate::model::{lie_derivative, JetPoint, OdeModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMethod {
    Symbolic,
    Probabilistic { seed: u64, trials: usize },
}

/// Wronskian data of one equation.
#[derive(Debug, Clone)]
pub struct EquationWronskian {
    pub monomials: Vec<Poly>,
    pub matrix: Matrix<RatFunc>,
    pub rref: Matrix<RatFunc>,
    pub pivots: Vec<usize>,
    pub nonleading: Vec<RatFunc>,
}

impl EquationWronskian {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

#[derive(Debug, Clone, Default)]
pub struct WronskianReport {
    pub equations: Vec<EquationWronskian>,
}

fn max_order(ps: &[Poly]) -> u32 {
    ps.iter()
        .flat_map(|p| p.vars())
        .map(|v| v.order())
        .max()
        .unwrap_or(0)
}

/// Square Wronskian of `mono`, rewritten through the model: row `k` holds
/// the `k`-th derivatives.
pub fn wronskian(mono: &[Poly], m: &OdeModel, cap: u32) -> Result<Matrix<RatFunc>> {
    let n = mono.len();
    let base = max_order(mono);
    let need = base + n.saturating_sub(1) as u32;
    if need > cap {
        return Err(Error::JetCap { order: need, cap });
    }
    let jp = JetPoint::new(m, base, cap)?;
    let mut rows: Vec<Vec<RatFunc>> = Vec::with_capacity(n);
    let mut cur = mono
        .iter()
        .map(|p| jp.eval(p, m))
        .collect::<Result<Vec<_>>>()?;
    for _ in 0..n {
        let next = cur.iter().map(|f| lie_derivative(m, f)).collect();
        rows.push(std::mem::replace(&mut cur, next));
    }
    Ok(Matrix::from_rows(rows))
}

/// Monomials of `p` as polynomials, lowest under the ranking first.
fn monomials_of(p: &crate::algebra::RfPoly, eqs: &IoEquations) -> Vec<Poly> {
    let r = eqs.ranking();
    let mut ms: Vec<_> = p.monomials().cloned().collect();
    ms.sort_by(|a, b| ranked_lex_cmp(a, b, r));
    ms.into_iter()
        .map(|mo| Poly::term(mo, Rational::from_integer(1.into())))
        .collect()
}

fn push_unique(out: &mut Vec<RatFunc>, e: RatFunc) {
    if !e.is_constant() && !out.contains(&e) {
        out.push(e);
    }
}

/// Field `F(p̄)` generated by the nonleading RREF entries of all equation
/// Wronskians.
pub fn f_field(eqs: &IoEquations, m: &OdeModel) -> Result<(FieldDesc, WronskianReport)> {
    let cap = jet_cap_for(eqs, m);
    let mut report = WronskianReport::default();
    let mut gens = Vec::new();
    for p in eqs.monic() {
        let mono = monomials_of(p, eqs);
        let w = wronskian(&mono, m, cap)?;
        let (rref, pivots) = w.rref();
        let nonleading = Matrix::nonleading_entries(&rref, &pivots);
        for e in &nonleading {
            push_unique(&mut gens, e.clone());
        }
        report.equations.push(EquationWronskian {
            monomials: mono,
            matrix: w,
            rref,
            pivots,
            nonleading,
        });
    }
    let mut ambient: BTreeSet<Var> = m.param_vars().into_iter().collect();
    ambient.extend(m.state_vars());
    for g in &gens {
        ambient.extend(g.vars());
    }
    Ok((FieldDesc::new(ambient.into_iter().collect(), gens), report))
}

fn jet_cap_for(eqs: &IoEquations, m: &OdeModel) -> u32 {
    let longest = eqs.monic().iter().map(|p| p.len()).max().unwrap_or(0) as u32;
    let base = max_order(eqs.primitive());
    (base + longest).max(m.default_jet_cap())
}

/// Ranks `r_i` of the Wronskians of the nonconstant-coefficient parts.
pub fn wronskian_ranks(eqs: &IoEquations, m: &OdeModel, method: RankMethod) -> Result<Vec<usize>> {
    let cap = jet_cap_for(eqs, m);
    eqs.decompose()
        .iter()
        .map(|d| {
            if d.parts.is_empty() {
                return Ok(0);
            }
            let w = wronskian(&d.parts, m, cap)?;
            match method {
                RankMethod::Symbolic => Ok(rank_symbolic(&w)),
                RankMethod::Probabilistic { seed, trials } => rank_probabilistic(&w, seed, trials),
            }
        })
        .collect()
}

/// Quotient field `Frac(K{y}/P)` of the prime ideal presented by an
/// autoreduced set: linear leaders are eliminated by Ritt reduction and
/// leaders of higher degree generate an algebraic tower. Errors when the
/// tower relations are not irreducible.
pub struct QuotientField {
    set: AutoreducedSet,
    tower: Option<Arc<Tower>>,
    alg: BTreeSet<Var>,
}

impl QuotientField {
    pub fn new(set: AutoreducedSet) -> Result<Self> {
        let mut defs = Vec::new();
        for (p, v) in set.elems().iter().zip(set.leaders()) {
            if p.degree_in(&v) >= 2 {
                defs.push((v, p.clone()));
            }
        }
        let alg: BTreeSet<Var> = defs.iter().map(|(v, _)| v.clone()).collect();
        let tower = if defs.is_empty() {
            None
        } else {
            Some(Tower::new(defs)?)
        };
        Ok(QuotientField { set, tower, alg })
    }

    /// Class of `f`.
    pub fn class(&self, f: &Poly) -> Result<AlgElem> {
        let red = ritt_reduce(f, &self.set);
        let num = AlgElem::new(split_over(&red.remainder, &self.alg), self.tower.clone());
        let den = AlgElem::new(split_over(&red.hpower, &self.alg), self.tower.clone());
        Ok(num.fmul(&den.try_inv()?))
    }
}

/// `F(p̄)` computed in the quotient field of `reduction` instead of through
/// a model.
pub fn f_field_from_charset(eqs: &AutoreducedSet, reduction: &AutoreducedSet) -> Result<FieldDesc> {
    let q = QuotientField::new(reduction.clone())?;
    let r = eqs.ranking();
    let mut gens = Vec::new();
    for p in eqs.elems() {
        let mut ms: Vec<_> = p.monomials().cloned().collect();
        ms.sort_by(|a, b| ranked_lex_cmp(a, b, r));
        let n = ms.len();
        let mut rows = Vec::with_capacity(n);
        for k in 0..n as u32 {
            let row = ms
                .iter()
                .map(|mo| {
                    let d = derive_n(&Poly::term(mo.clone(), Rational::from_integer(1.into())), k, r, None)?;
                    q.class(&d)
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let (rref, piv) = Matrix::from_rows(rows).rref();
        for e in Matrix::nonleading_entries(&rref, &piv) {
            push_unique(&mut gens, e.to_ratfunc());
        }
    }
    let mut ambient = BTreeSet::new();
    for g in &gens {
        ambient.extend(g.vars());
    }
    Ok(FieldDesc::new(ambient.into_iter().collect(), gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::Ranking;
    use crate::fields::member_mod;
    use crate::model::parse_model;

    fn j(n: &str, k: u32) -> Poly {
        Poly::var(Var::jet(n, k))
    }

    fn c(n: i64) -> Poly {
        Poly::from_i64(n)
    }

    const LINEAR_OBS: &str = "\
model linear_obs
states: x
params: a, b
x' = 0
y1 = a*x + b
y2 = x
";

    #[test]
    fn wronskian_of_affine_sensor() {
        let m = parse_model(LINEAR_OBS).unwrap();
        let w = wronskian(&[c(1), j("y1", 0), j("y2", 0)], &m, 6).unwrap();
        let a = RatFunc::var(Var::new("a"));
        let b = RatFunc::var(Var::new("b"));
        let x = RatFunc::var(Var::new("x"));
        assert_eq!(w.row(0), &[RatFunc::one(), a.fmul(&x).fadd(&b), x.clone()]);
        assert!(w.row(1).iter().chain(w.row(2)).all(|e| e.is_zero()));
        let w2 = wronskian(&[j("y2", 1)], &m, 6).unwrap();
        assert!(w2.is_zero());
    }

    #[test]
    fn jet_cap_is_enforced() {
        let m = parse_model(LINEAR_OBS).unwrap();
        let err = wronskian(&[j("y1", 2), j("y2", 0), c(1)], &m, 3).unwrap_err();
        assert_eq!(err, Error::JetCap { order: 4, cap: 3 });
    }

    #[test]
    fn free_jets_without_reduction() {
        let r = Ranking::orderly(&["y"]).unwrap();
        let eqs = AutoreducedSet::new(vec![&j("y", 1) - &c(1)], r.clone()).unwrap();
        let f = f_field_from_charset(&eqs, &AutoreducedSet::empty(r)).unwrap();
        // Wronskian of (1, y') is [[1, y'], [0, y'']]; its RREF is the identity.
        assert!(f.is_trivial());
    }

    fn ex33_p() -> AutoreducedSet {
        let r = Ranking::elimination(&["y1", "y2", "y3"]).unwrap();
        let p1 = &(&j("y1", 0).pow(2) + &j("y2", 0).pow(2)) + &j("y3", 0);
        let p2 = &j("y2", 1) - &c(1);
        let p3 = &j("y3", 1) - &c(1);
        AutoreducedSet::new(vec![p1, p2, p3], r).unwrap()
    }

    fn ex33_q() -> AutoreducedSet {
        let r = Ranking::elimination(&["y2", "y1", "y3"]).unwrap();
        let y1 = j("y1", 0);
        let d1 = j("y1", 1);
        let q1 = &(&(&c(2) * &j("y2", 0)) + &(&c(2) * &(&y1 * &d1))) + &c(1);
        let q2 = &(&(&(&c(4) * &(&y1.pow(2) * &d1.pow(2))) + &(&c(4) * &(&y1 * &d1)))
            + &(&c(4) * &y1.pow(2)))
            + &(&(&c(4) * &j("y3", 0)) + &c(1));
        let q3 = &j("y3", 1) - &c(1);
        AutoreducedSet::new(vec![q1, q2, q3], r).unwrap()
    }

    #[test]
    fn ranking_dependent_field_first_ranking() {
        let p = ex33_p();
        let f = f_field_from_charset(&p, &p).unwrap();
        assert!(f.is_trivial(), "{f}");
    }

    #[test]
    fn ranking_dependent_field_second_ranking() {
        let q = ex33_q();
        let f = f_field_from_charset(&q, &q).unwrap();
        assert!(!f.is_trivial());
        let w = &(&j("y1", 0) * &j("y1", 1)) + &j("y3", 0);
        let q2 = q.elems().iter().find(|e| e.contains_var(&Var::jet("y1", 1)) && !e.contains_var(&Var::jet("y2", 0))).unwrap();
        let inside = member_mod(&RatFunc::from_poly(w), &f, std::slice::from_ref(q2), &Default::default()).unwrap();
        assert!(inside);
    }
}
