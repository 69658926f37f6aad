//! Input-output equations: the characteristic presentation of the model's
//! differential ideal restricted to outputs and inputs.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::gcd::{content_in, exact_div, lcm};
use crate::algebra::groebner::{groebner, BlockKind, TermOrder};
use crate::algebra::{Budget, Field, Matrix, Monomial, Poly, RatFunc, Rational, RfPoly, Var};
use crate::diff::diffpoly::{
    clear_denominators, leader, monic_rf, ranked_lex_cmp, to_rf,
};
use crate::diff::ritt::{basic_set_closure, normalize_sign, ritt_reduce};
use crate::diff::{compare_autoreduced, strip_factors, AutoreducedSet, Ranking};
use crate::error::{Error, Result};
use crate::model::{JetPoint, OdeModel};

const T_VAR: &str = "$t";

#[derive(Debug, Clone, Default)]
pub struct IoOptions {
    pub ranking: Option<Ranking>,
    pub max_prolongation: Option<u32>,
    pub jet_cap: Option<u32>,
    pub budget: Budget,
}

/// Default ranking: outputs in one orderly block above inputs in another.
pub fn default_ranking(m: &OdeModel) -> Ranking {
    let mut blocks = vec![m.output_names()];
    if !m.inputs().is_empty() {
        blocks.push(m.inputs().to_vec());
    }
    Ranking::new(blocks).expect("model names are distinct")
}

/// Checks that `r` ranks exactly the outputs and inputs of `m`.
pub fn check_ranking(m: &OdeModel, r: &Ranking) -> Result<()> {
    let want: BTreeSet<String> = m
        .output_names()
        .into_iter()
        .chain(m.inputs().iter().cloned())
        .collect();
    let got: BTreeSet<String> = r.names().map(|s| s.to_string()).collect();
    if want != got {
        return Err(Error::Invalid(format!(
            "ranking must list exactly the outputs and inputs {:?}, got {:?}",
            want, got
        )));
    }
    Ok(())
}

/// Decomposition `p = f_{s+1} + Σ c_j f_j` with `c_j` ℚ-linearly independent
/// modulo constants and each `f_j` a ℚ-combination of monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub coeffs: Vec<RatFunc>,
    pub parts: Vec<Poly>,
    pub rest: Poly,
}

impl Decomposition {
    pub fn s(&self) -> usize {
        self.coeffs.len()
    }

    /// Rebuilds the equation.
    pub fn recompose(&self) -> RfPoly {
        let mut acc = self.rest.map_coeffs(|c| RatFunc::from_rational(c.clone()));
        for (c, f) in self.coeffs.iter().zip(&self.parts) {
            acc = &acc + &f.map_coeffs(|q| c.fmul(&RatFunc::from_rational(q.clone())));
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct IoEquations {
    ranking: Ranking,
    depth: u32,
    /// Integral primitive forms, highest rank first.
    primitive: Vec<Poly>,
    /// Monic forms over ℚ(μ), same order.
    monic: Vec<RfPoly>,
    params: Vec<Var>,
}

impl IoEquations {
    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    /// Prolongation depth at which the set was verified.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn primitive(&self) -> &[Poly] {
        &self.primitive
    }

    pub fn monic(&self) -> &[RfPoly] {
        &self.monic
    }

    pub fn len(&self) -> usize {
        self.monic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monic.is_empty()
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn as_autoreduced(&self) -> AutoreducedSet {
        AutoreducedSet::new_unchecked(self.primitive.clone(), self.ranking.clone())
    }

    pub fn decompose(&self) -> Vec<Decomposition> {
        self.monic
            .iter()
            .map(|p| decompose(p, &self.ranking))
            .collect()
    }

    /// Printed monic equations with the highest ranked monomial first.
    pub fn printed(&self) -> Vec<String> {
        self.monic.iter().map(|p| print_ranked(p, &self.ranking)).collect()
    }

    /// Builds from explicit equations (already a characteristic presentation).
    pub fn from_parts(primitive: Vec<Poly>, ranking: Ranking, params: Vec<Var>, depth: u32) -> Self {
        let monic = primitive
            .iter()
            .map(|p| monic_rf(&to_rf(p, &ranking), &ranking))
            .collect();
        IoEquations {
            ranking,
            depth,
            primitive,
            monic,
            params,
        }
    }
}

/// Prints with terms sorted by the ranking-induced lex order, highest first.
pub fn print_ranked(p: &RfPoly, r: &Ranking) -> String {
    let mut terms: Vec<(&Monomial, &RatFunc)> = p.terms().collect();
    terms.sort_by(|a, b| ranked_lex_cmp(b.0, a.0, r));
    struct W<'a>(&'a [(&'a Monomial, &'a RatFunc)]);
    impl std::fmt::Display for W<'_> {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            crate::algebra::poly::write_terms(f, self.0)
        }
    }
    W(&terms).to_string()
}

/// ℚ-linear decomposition of a monic equation. Coefficients are scanned from
/// the highest monomial down; each one not a ℚ-combination of 1 and earlier
/// basis elements becomes a new `c_j`.
pub fn decompose(p: &RfPoly, r: &Ranking) -> Decomposition {
    let mut terms: Vec<(Monomial, RatFunc)> =
        p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    terms.sort_by(|a, b| ranked_lex_cmp(&b.0, &a.0, r));
    let mut basis: Vec<RatFunc> = vec![RatFunc::one()];
    let mut combos: Vec<Vec<Rational>> = Vec::new();
    for (_, c) in &terms {
        match express(&basis, c) {
            Some(l) => combos.push(l),
            None => {
                basis.push(c.clone());
                let mut l = vec![Rational::from_integer(0.into()); basis.len()];
                *l.last_mut().unwrap() = Rational::from_integer(1.into());
                combos.push(l);
            }
        }
    }
    let mut parts = vec![Poly::zero(); basis.len()];
    for ((m, _), l) in terms.iter().zip(&combos) {
        for (b, lam) in l.iter().enumerate() {
            if !Field::is_zero(lam) {
                parts[b].add_term(m.clone(), lam.clone());
            }
        }
    }
    let rest = parts.remove(0);
    basis.remove(0);
    Decomposition {
        coeffs: basis,
        parts,
        rest,
    }
}

/// Rational coordinates of `v` in the ℚ-span of `basis`, if it lies there.
pub fn express(basis: &[RatFunc], v: &RatFunc) -> Option<Vec<Rational>> {
    let mut d = v.den().clone();
    for b in basis {
        d = lcm(&d, b.den());
    }
    let lift = |f: &RatFunc| &f.num().clone() * &exact_div(&d, f.den()).expect("lcm");
    let cols: Vec<Poly> = basis.iter().map(lift).collect();
    let target = lift(v);
    let mut monos: BTreeSet<Monomial> = target.monomials().cloned().collect();
    for c in &cols {
        monos.extend(c.monomials().cloned());
    }
    let monos: Vec<Monomial> = monos.into_iter().collect();
    let n = cols.len();
    let rows: Vec<Vec<Rational>> = monos
        .iter()
        .map(|m| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c.coeff(m)).collect();
            row.push(target.coeff(m));
            row
        })
        .collect();
    if rows.is_empty() {
        return Some(vec![Rational::from_integer(0.into()); n]);
    }
    let (rr, piv) = Matrix::from_rows(rows).rref();
    if piv.contains(&n) {
        return None;
    }
    let mut sol = vec![Rational::from_integer(0.into()); n];
    for (i, &p) in piv.iter().enumerate() {
        sol[p] = rr.get(i, n).clone();
    }
    Some(sol)
}

/// Splits a polynomial over ℚ into one over ℚ(params) in the other variables.
fn over_params(p: &Poly, params: &BTreeSet<Var>) -> RfPoly {
    let mut map: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (coef, ring): (Vec<_>, Vec<_>) =
            m.pairs().iter().cloned().partition(|(v, _)| params.contains(v));
        map.entry(Monomial::from_pairs(ring))
            .or_default()
            .add_term(Monomial::from_pairs(coef), c.clone());
    }
    RfPoly::from_terms(map.into_iter().map(|(m, c)| (m, RatFunc::from_poly(c))))
}

struct Stage {
    depth: u32,
    jets: JetPoint,
    elim: Vec<Poly>,
    charset: AutoreducedSet,
}

/// Elimination ideal `P ∩ ℚ(μ)[jets ≤ depth]` as primitive polynomials over ℚ.
fn eliminate_states(
    m: &OdeModel,
    r: &Ranking,
    depth: u32,
    cap: u32,
    budget: &Budget,
) -> Result<(JetPoint, Vec<Poly>)> {
    let jp = JetPoint::new(m, depth, cap)?;
    let params: BTreeSet<Var> = m.param_vars().into_iter().collect();
    let mut gens: Vec<RfPoly> = Vec::new();
    let mut dens: Vec<RfPoly> = Vec::new();
    for (y, _) in m.outputs() {
        for k in 0..=depth {
            let v = Var::jet(y, k);
            let e = jp.get(&v).expect("computed");
            let num = over_params(e.num(), &params);
            let den = over_params(e.den(), &params);
            gens.push(&(&den * &RfPoly::var(v)) - &num);
            if !den.is_constant() && !dens.contains(&den) {
                dens.push(den);
            }
        }
    }
    let t = Var::new(T_VAR);
    if !dens.is_empty() {
        let prod = dens.iter().fold(RfPoly::one(), |a, d| &a * d);
        gens.push(&(&RfPoly::var(t.clone()) * &prod) - &RfPoly::one());
    }
    let mut jets: Vec<Var> = Vec::new();
    for name in r.names() {
        for k in 0..=depth {
            jets.push(Var::jet(&**name, k));
        }
    }
    jets.sort_by(|a, b| r.cmp(b, a));
    let mut top = vec![t.clone()];
    top.extend(m.state_vars());
    let order = TermOrder::new(vec![(BlockKind::DegRevLex, top.clone()), (BlockKind::Lex, jets)]);
    let gb = groebner(&gens, &order, budget)?;
    let out = gb
        .into_iter()
        .filter(|g| !top.iter().any(|v| g.contains_var(v)))
        .map(|g| normalize_sign(&clear_denominators(&g), r))
        .collect();
    Ok((jp, out))
}

fn charset_of(elim: &[Poly], r: &Ranking, m: &OdeModel, jp: &JetPoint) -> Result<AutoreducedSet> {
    let mut failure: Option<Error> = None;
    let set = basic_set_closure(elim, r, |p| {
        pick_factor(p, r, m, jp).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            Poly::one()
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(set)
}

/// Keeps the factor of `p` that lies in the prime ideal: the content with
/// respect to the leader if it vanishes on the model, the primitive part
/// otherwise.
fn pick_factor(p: Poly, r: &Ranking, m: &OdeModel, jp: &JetPoint) -> Result<Poly> {
    let Some(v) = leader(&p, r) else {
        return Ok(p);
    };
    let c = content_in(&p, &v);
    if c.is_constant() {
        return Ok(normalize_sign(&p, r));
    }
    if leader(&c, r).is_some() && jp.eval(&c, m)?.is_zero() {
        return pick_factor(c, r, m, jp);
    }
    let pp = exact_div(&p, &c).expect("content divides");
    Ok(normalize_sign(&pp, r))
}

fn stage(m: &OdeModel, r: &Ranking, depth: u32, cap: u32, budget: &Budget) -> Result<Stage> {
    let (jets, elim) = eliminate_states(m, r, depth, cap, budget)?;
    let charset = charset_of(&elim, r, m, &jets)?;
    Ok(Stage {
        depth,
        jets,
        elim,
        charset,
    })
}

/// Verification of a candidate against the next prolongation.
fn verified(cur: &Stage, next: &Stage, m: &OdeModel) -> Result<bool> {
    let c = &cur.charset;
    if c.elems().iter().any(|p| leader(p, c.ranking()).is_none()) {
        return Err(Error::Invalid("model equations are inconsistent".into()));
    }
    if !c.is_autoreduced() {
        return Ok(false);
    }
    for p in c.elems() {
        if !next.jets.eval(p, m)?.is_zero() {
            return Ok(false);
        }
    }
    for e in &next.elim {
        if !ritt_reduce(e, c).remainder.is_zero() {
            return Ok(false);
        }
    }
    Ok(compare_autoreduced(c, &next.charset) == std::cmp::Ordering::Equal)
}

/// Computes the input-output equations of `m`.
pub fn io_equations(m: &OdeModel, opts: &IoOptions) -> Result<IoEquations> {
    let r = opts.ranking.clone().unwrap_or_else(|| default_ranking(m));
    check_ranking(m, &r)?;
    let cap = opts.jet_cap.unwrap_or_else(|| m.default_jet_cap());
    let max_d = opts.max_prolongation.unwrap_or(cap.saturating_sub(1)).min(cap.saturating_sub(1));
    let mut d = m.states().len() as u32;
    if d > max_d {
        return Err(Error::Prolongation {
            depth: d,
            candidate: "none".into(),
        });
    }
    let mut cur = stage(m, &r, d, cap, &opts.budget)?;
    loop {
        let next = stage(m, &r, d + 1, cap, &opts.budget)?;
        if verified(&cur, &next, m)? {
            break;
        }
        d += 1;
        if d > max_d {
            return Err(Error::Prolongation {
                depth: cur.depth,
                candidate: cur.charset.to_string(),
            });
        }
        cur = next;
    }
    let stripped = strip_factors(&cur.charset);
    let mut prim: Vec<Poly> = stripped.elems().to_vec();
    prim.reverse();
    Ok(IoEquations::from_parts(prim, r, m.param_vars(), cur.depth))
}

/// Whether every equation vanishes on the model (exact substitution).
pub fn vanishes_on_model(eqs: &IoEquations, m: &OdeModel) -> Result<bool> {
    let depth = eqs
        .primitive()
        .iter()
        .flat_map(|p| p.vars())
        .map(|v| v.order())
        .max()
        .unwrap_or(0);
    let cap = depth.max(m.default_jet_cap());
    let jp = JetPoint::new(m, depth, cap)?;
    for p in eqs.primitive() {
        if !jp.eval(p, m)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    fn load(name: &str) -> OdeModel {
        let path = format!("{}/models/{}.model", env!("CARGO_MANIFEST_DIR"), name);
        parse_model(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn two_compartment_equation() {
        let m = load("two_compartment");
        let eqs = io_equations(&m, &IoOptions::default()).unwrap();
        assert_eq!(eqs.printed(), vec!["y'' + (a01 + a12 + a21)*y' + a01*a12*y"]);
        let d = &eqs.decompose()[0];
        assert_eq!(d.s(), 2);
        assert_eq!(d.recompose(), eqs.monic()[0]);
    }

    #[test]
    fn linear_obs_equations() {
        let m = load("linear_obs");
        let r = Ranking::parse("y1,y2").unwrap();
        let opts = IoOptions {
            ranking: Some(r),
            ..Default::default()
        };
        let eqs = io_equations(&m, &opts).unwrap();
        assert_eq!(eqs.printed(), vec!["y1 - a*y2 - b", "y2'"]);
    }

    #[test]
    fn slow_fast_equations() {
        let m = load("slow_fast");
        let r = Ranking::parse("y2,y1,y3,y4").unwrap();
        let opts = IoOptions {
            ranking: Some(r.clone()),
            ..Default::default()
        };
        let eqs = io_equations(&m, &opts).unwrap();
        let params: BTreeSet<String> = m.params().iter().cloned().collect();
        let outs: BTreeSet<String> = m.output_names().into_iter().collect();
        let expected = [
            "k1*k2*(y2 - y1*y4) - eB*k1*y1' - k2*y1'*y3 - y1''*y3",
            "y1''' + (k1 + k2)*y1'' + k1*k2*y1'",
            "y3'",
            "y4'",
        ];
        for (got, want) in eqs.monic().iter().zip(expected) {
            let w = crate::model::parse_diff_expr(want, &params, &outs).unwrap();
            assert!(w.den().is_constant());
            assert_eq!(got, &monic_rf(&to_rf(w.num(), &r), &r));
        }
        assert!(vanishes_on_model(&eqs, &m).unwrap());
        let d = eqs.decompose();
        assert_eq!(d.iter().map(|x| x.s()).collect::<Vec<_>>(), vec![3, 2, 0, 0]);
        for (di, p) in d.iter().zip(eqs.monic()) {
            assert_eq!(&di.recompose(), p);
        }
    }

    #[test]
    fn prolongation_cap_reports_candidate() {
        let m = load("two_compartment");
        let opts = IoOptions {
            max_prolongation: Some(1),
            ..Default::default()
        };
        assert!(matches!(
            io_equations(&m, &opts),
            Err(Error::Prolongation { .. })
        ));
    }

    #[test]
    fn ranking_must_cover_outputs() {
        let m = load("linear_obs");
        let opts = IoOptions {
            ranking: Some(Ranking::parse("y1").unwrap()),
            ..Default::default()
        };
        assert!(matches!(io_equations(&m, &opts), Err(Error::Invalid(_))));
    }

    #[test]
    fn express_finds_rational_combination() {
        let a = RatFunc::var(Var::new("a"));
        let b = RatFunc::var(Var::new("b"));
        let basis = vec![RatFunc::one(), a.clone(), b.clone()];
        let v = a.fadd(&b.fmul(&RatFunc::from_rational(crate::algebra::rat(3))));
        let l = express(&basis, &v).unwrap();
        assert_eq!(l, vec![crate::algebra::rat(0), crate::algebra::rat(1), crate::algebra::rat(3)]);
        assert!(express(&basis, &a.fmul(&b)).is_none());
    }
}
