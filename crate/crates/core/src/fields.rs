//! Subfields of rational function fields: membership, equality and
//! intersection.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::groebner::{groebner, normal_form, BlockKind, TermOrder};
use crate::algebra::{Budget, Field, Poly, RatFunc, RfPoly, Var};
use crate::error::{Error, Result};

/// Field generated over ℚ by rational functions in `ambient`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDesc {
    ambient: Vec<Var>,
    gens: Vec<RatFunc>,
}

impl FieldDesc {
    /// Drops constant generators and syntactic duplicates after a
    /// field-preserving normalization: reciprocals of constant-numerator
    /// generators and a positive leading sign. The ambient list is extended
    /// by every generator variable.
    pub fn new(ambient: Vec<Var>, gens: Vec<RatFunc>) -> Self {
        let mut amb: BTreeSet<Var> = ambient.into_iter().collect();
        let mut out: Vec<RatFunc> = Vec::new();
        for mut g in gens {
            if g.is_constant() {
                continue;
            }
            if g.num().is_constant() {
                g = g.finv();
            }
            if g.is_negative_printed() {
                g = g.fneg();
            }
            if out.contains(&g) {
                continue;
            }
            amb.extend(g.vars());
            out.push(g);
        }
        FieldDesc {
            ambient: amb.into_iter().collect(),
            gens: out,
        }
    }

    /// `ℚ(vars)`.
    pub fn from_vars(vars: Vec<Var>) -> Self {
        let gens = vars.iter().cloned().map(RatFunc::var).collect();
        FieldDesc::new(vars, gens)
    }

    pub fn ambient(&self) -> &[Var] {
        &self.ambient
    }

    pub fn gens(&self) -> &[RatFunc] {
        &self.gens
    }

    /// True for the field of constants.
    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn with_ambient(&self, extra: &[Var]) -> Self {
        let mut a = self.ambient.clone();
        a.extend(extra.iter().cloned());
        FieldDesc::new(a, self.gens.clone())
    }

    pub fn gen_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "C");
        }
        write!(f, "C(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

fn tag(prefix: &str, i: usize) -> Var {
    Var::new(format!("${prefix}{i}"))
}

fn to_poly_rf(p: &Poly) -> RfPoly {
    p.map_coeffs(|c| RatFunc::from_rational(c.clone()))
}

/// Whether `h` lies in `l`.
pub fn member(h: &RatFunc, l: &FieldDesc, budget: &Budget) -> Result<bool> {
    member_mod(h, l, &[], budget)
}

/// Membership in `l` inside the fraction field of `ℚ[ambient]/relations`;
/// `relations` must generate a prime ideal.
pub fn member_mod(h: &RatFunc, l: &FieldDesc, relations: &[Poly], budget: &Budget) -> Result<bool> {
    if h.is_constant() {
        return Ok(true);
    }
    let t0 = tag("T", 0);
    let sat = Var::new("$s");
    let mut gens: Vec<Poly> = relations.to_vec();
    let mut dens = Poly::one();
    let mut tags = Vec::new();
    for (i, g) in l.gens().iter().enumerate() {
        let t = tag("T", i + 1);
        gens.push(&(g.den() * &Poly::var(t.clone())) - g.num());
        if !g.den().is_constant() {
            dens = &dens * g.den();
        }
        tags.push(t);
    }
    gens.push(&(h.den() * &Poly::var(t0.clone())) - h.num());
    if !h.den().is_constant() {
        dens = &dens * h.den();
    }
    gens.push(&(&Poly::var(sat.clone()) * &dens) - &Poly::one());
    let mut top: BTreeSet<Var> = l.ambient().iter().cloned().collect();
    top.extend(h.vars());
    for r in relations {
        top.extend(r.vars());
    }
    let mut top: Vec<Var> = top.into_iter().collect();
    top.insert(0, sat);
    let order = TermOrder::new(vec![
        (BlockKind::DegRevLex, top.clone()),
        (BlockKind::DegRevLex, vec![t0.clone()]),
        (BlockKind::DegRevLex, tags),
    ]);
    let gb = groebner(&gens, &order, budget)?;
    let elim: Vec<Poly> = gb
        .into_iter()
        .filter(|g| !top.iter().any(|v| g.contains_var(v)))
        .collect();
    let rel: Vec<Poly> = elim.iter().filter(|g| !g.contains_var(&t0)).cloned().collect();
    for g in &elim {
        if g.degree_in(&t0) == 1 {
            let c = g.lead_coeff_in(&t0);
            if !normal_form(&c, &rel, &order).is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Mutual membership of generators.
pub fn fields_equal(a: &FieldDesc, b: &FieldDesc, budget: &Budget) -> Result<bool> {
    for g in a.gens() {
        if !member(g, b, budget)? {
            return Ok(false);
        }
    }
    for g in b.gens() {
        if !member(g, a, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ideals of the intersection chain, in order of computation.
#[derive(Debug, Clone, Default)]
pub struct IntersectTrace {
    /// Coordinate variables `Z_i`, one per ambient variable.
    pub coords: Vec<Var>,
    pub steps: Vec<(String, Vec<RfPoly>)>,
}

struct Chain<'a> {
    ambient: Vec<Var>,
    z: Vec<Var>,
    a: Vec<Var>,
    budget: &'a Budget,
}

impl Chain<'_> {
    fn z_order(&self) -> TermOrder {
        TermOrder::drl(self.z.clone())
    }

    fn rename_to_a(&self, p: &Poly) -> Poly {
        p.map_vars(|v| match self.ambient.iter().position(|x| x == v) {
            Some(i) => self.a[i].clone(),
            None => v.clone(),
        })
    }

    /// Ideal of the ambient point over `l`, in the `A` coordinates, with
    /// coefficients in `l`.
    fn point_ideal(&self, l: &FieldDesc) -> Vec<RfPoly> {
        let mut out = Vec::new();
        for g in l.gens() {
            let num = to_poly_rf(&self.rename_to_a(g.num()));
            let den = to_poly_rf(&self.rename_to_a(g.den()));
            out.push(&num - &den.scale(g));
        }
        out
    }

    fn point_dens(&self, l: &FieldDesc) -> RfPoly {
        let mut d = RfPoly::one();
        for g in l.gens() {
            if !g.den().is_constant() {
                d = &d * &to_poly_rf(&self.rename_to_a(g.den()));
            }
        }
        d
    }

    /// Contraction of `ideal` to `l[Z]`, extended back.
    fn contract(&self, ideal: &[RfPoly], l: &FieldDesc) -> Result<Vec<RfPoly>> {
        let sat = Var::new("$s");
        let mut gens = self.point_ideal(l);
        let mut dens = self.point_dens(l);
        for f in ideal {
            let (lifted, d) = self.lift(f);
            gens.push(lifted);
            if !d.is_constant() {
                dens = &dens * &d;
            }
        }
        gens.push(&(&RfPoly::var(sat.clone()) * &dens) - &RfPoly::one());
        let mut top = vec![sat];
        top.extend(self.a.iter().cloned());
        let order = TermOrder::new(vec![
            (BlockKind::DegRevLex, top.clone()),
            (BlockKind::DegRevLex, self.z.clone()),
        ]);
        let gb = groebner(&gens, &order, self.budget)?;
        Ok(gb
            .into_iter()
            .filter(|g| !top.iter().any(|v| g.contains_var(v)))
            .collect())
    }

    /// Clears coefficient denominators of `f` and renames ambient variables
    /// to `A`, returning the result and the cleared denominator.
    fn lift(&self, f: &RfPoly) -> (RfPoly, RfPoly) {
        let mut d = Poly::one();
        for (_, c) in f.terms() {
            d = crate::algebra::gcd::lcm(&d, c.den());
        }
        let mut acc = Poly::zero();
        for (m, c) in f.terms() {
            let k = crate::algebra::gcd::exact_div(&d, c.den()).expect("lcm");
            let part = &c.num().clone() * &k;
            acc = &acc + &part.mul_monomial(m, &crate::algebra::rat(1));
        }
        (
            to_poly_rf(&self.rename_to_a(&acc)),
            to_poly_rf(&self.rename_to_a(&d)),
        )
    }

    fn equal(&self, a: &[RfPoly], b: &[RfPoly]) -> Result<bool> {
        let o = self.z_order();
        Ok(groebner(a, &o, self.budget)? == groebner(b, &o, self.budget)?)
    }
}

/// Generators of `l1 ∩ l2`, with the ideal chain that produced them. One of
/// the fields should be algebraically closed in the ambient field; if the
/// chain does not settle within the round limit, or an output generator
/// fails membership in either field, an error is returned.
pub fn intersect(l1: &FieldDesc, l2: &FieldDesc, budget: &Budget) -> Result<(FieldDesc, IntersectTrace)> {
    let mut amb: BTreeSet<Var> = l1.ambient().iter().cloned().collect();
    amb.extend(l2.ambient().iter().cloned());
    let ambient: Vec<Var> = amb.into_iter().collect();
    let n = ambient.len();
    let chain = Chain {
        z: (1..=n).map(|i| Var::new(format!("Z{i}"))).collect(),
        a: (1..=n).map(|i| tag("A", i)).collect(),
        ambient: ambient.clone(),
        budget,
    };
    let mut trace = IntersectTrace {
        coords: chain.z.clone(),
        steps: Vec::new(),
    };
    let start: Vec<RfPoly> = chain
        .z
        .iter()
        .zip(&ambient)
        .map(|(z, x)| &RfPoly::var(z.clone()) - &RfPoly::constant(RatFunc::var(x.clone())))
        .collect();
    let mut j = chain.contract(&start, l1)?;
    trace.steps.push(("J1".into(), j.clone()));
    let mut stable = None;
    for k in 2..=n + 2 {
        let i = chain.contract(&j, l2)?;
        trace.steps.push((format!("I{k}"), i.clone()));
        if chain.equal(&i, &j)? {
            stable = Some(i);
            break;
        }
        let jn = chain.contract(&i, l1)?;
        trace.steps.push((format!("J{k}"), jn.clone()));
        if chain.equal(&jn, &i)? {
            stable = Some(jn);
            break;
        }
        j = jn;
    }
    let Some(ideal) = stable else {
        return Err(Error::SelfCheck(format!(
            "intersection chain did not stabilize within {} rounds",
            n + 1
        )));
    };
    let gb = groebner(&ideal, &chain.z_order(), budget)?;
    let mut gens = Vec::new();
    for g in &gb {
        for (_, c) in g.terms() {
            gens.push(c.clone());
        }
    }
    let out = FieldDesc::new(ambient, gens);
    for g in out.gens() {
        if !member(g, l1, budget)? || !member(g, l2, budget)? {
            return Err(Error::SelfCheck(format!(
                "intersection generator {g} is not in both fields"
            )));
        }
    }
    Ok((out, trace))
}
