use std::collections::BTreeMap;

use super::OdeModel;
use crate::algebra::{Field, Poly, RatFunc, Var};
use crate::error::{Error, Result};

/// Total derivative along the model: states follow their right-hand sides,
/// input jets `u^(k)` step to `u^(k+1)`, everything else is constant.
pub fn lie_derivative(m: &OdeModel, f: &RatFunc) -> RatFunc {
    let mut out = RatFunc::zero();
    for (s, rhs) in m.states().iter().zip(m.state_rhs()) {
        let v = Var::new(s);
        if f.contains_var(&v) {
            out = out.fadd(&f.derivative(&v).fmul(rhs));
        }
    }
    for v in f.vars() {
        if m.inputs().iter().any(|u| u == v.name()) {
            out = out.fadd(&f.derivative(&v).fmul(&RatFunc::var(v.shifted(1))));
        }
    }
    out
}

/// Output derivatives rewritten through the model: `y_j^(k)` for `k <= depth`
/// as rational functions of states, parameters and input jets.
#[derive(Debug, Clone)]
pub struct JetPoint {
    depth: u32,
    entries: BTreeMap<Var, RatFunc>,
}

impl JetPoint {
    pub fn new(m: &OdeModel, depth: u32, cap: u32) -> Result<Self> {
        if depth > cap {
            return Err(Error::JetCap { order: depth, cap });
        }
        let mut entries = BTreeMap::new();
        for (y, g) in m.outputs() {
            let mut cur = g.clone();
            for k in 0..=depth {
                if k > 0 {
                    cur = lie_derivative(m, &cur);
                }
                entries.insert(Var::jet(y, k), cur.clone());
            }
        }
        Ok(JetPoint { depth, entries })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn get(&self, v: &Var) -> Option<&RatFunc> {
        self.entries.get(v)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Var, &RatFunc)> {
        self.entries.iter()
    }

    /// Substitutes output jets in `p`; other variables are kept. Fails if
    /// `p` needs an output derivative beyond the computed depth.
    pub fn eval(&self, p: &Poly, m: &OdeModel) -> Result<RatFunc> {
        let outs: Vec<&str> = m.outputs().iter().map(|(n, _)| n.as_str()).collect();
        for v in p.vars() {
            if outs.contains(&v.name()) && !self.entries.contains_key(&v) {
                return Err(Error::JetCap {
                    order: v.order(),
                    cap: self.depth,
                });
            }
        }
        Ok(eval_poly(p, &|v| self.entries.get(v).cloned()))
    }
}

/// Evaluates `p`, replacing each variable for which `subst` returns a value.
pub fn eval_poly(p: &Poly, subst: &dyn Fn(&Var) -> Option<RatFunc>) -> RatFunc {
    let mut cache: BTreeMap<(Var, u32), RatFunc> = BTreeMap::new();
    // group by the substituted part so untouched variables ride along
    let mut acc = RatFunc::zero();
    let mut polys: BTreeMap<Vec<(Var, u32)>, Poly> = BTreeMap::new();
    for (mono, c) in p.terms() {
        let mut key = Vec::new();
        let mut rest = Vec::new();
        for (v, e) in mono.pairs() {
            if subst(v).is_some() {
                key.push((v.clone(), *e));
            } else {
                rest.push((v.clone(), *e));
            }
        }
        polys
            .entry(key)
            .or_default()
            .add_term(crate::algebra::Monomial::from_pairs(rest), c.clone());
    }
    for (key, coeff) in polys {
        let mut t = RatFunc::from_poly(coeff);
        for (v, e) in key {
            let val = cache
                .entry((v.clone(), e))
                .or_insert_with(|| subst(&v).expect("checked").pow(e))
                .clone();
            t = t.fmul(&val);
        }
        acc = acc.fadd(&t);
    }
    acc
}
