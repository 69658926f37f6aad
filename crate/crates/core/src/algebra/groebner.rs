//! Buchberger's algorithm over an arbitrary coefficient field, with block
//! term orders, elimination and saturation on top.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use super::field::Field;
use super::monomial::Monomial;
use super::poly::Polynomial;
use super::var::Var;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Lex,
    DegRevLex,
}

/// Product of lex/degrevlex blocks over an explicit variable list. The first
/// block is the most significant, and within a lex block the first variable is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    vars: Vec<Var>,
    blocks: Vec<(BlockKind, usize, usize)>,
}

impl TermOrder {
    pub fn new(blocks: Vec<(BlockKind, Vec<Var>)>) -> Self {
        let mut vars = Vec::new();
        let mut spans = Vec::new();
        let mut seen = BTreeSet::new();
        for (kind, vs) in blocks {
            let start = vars.len();
            for v in vs {
                if seen.insert(v.clone()) {
                    vars.push(v);
                }
            }
            if vars.len() > start {
                spans.push((kind, start, vars.len()));
            }
        }
        TermOrder {
            vars,
            blocks: spans,
        }
    }

    pub fn drl(vars: Vec<Var>) -> Self {
        Self::new(vec![(BlockKind::DegRevLex, vars)])
    }

    pub fn lex(vars: Vec<Var>) -> Self {
        Self::new(vec![(BlockKind::Lex, vars)])
    }

    /// Elimination order `drop >> keep`, degrevlex inside each block.
    pub fn elimination(drop: Vec<Var>, keep: Vec<Var>) -> Self {
        Self::new(vec![
            (BlockKind::DegRevLex, drop),
            (BlockKind::DegRevLex, keep),
        ])
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// Appends any variables of `polys` the order does not mention as a last
    /// degrevlex block, in `Var` order.
    pub fn covering<C: Field>(mut self, polys: &[Polynomial<C>]) -> Self {
        let known: BTreeSet<Var> = self.vars.iter().cloned().collect();
        let mut extra = BTreeSet::new();
        for p in polys {
            for v in p.vars() {
                if !known.contains(&v) {
                    extra.insert(v);
                }
            }
        }
        if !extra.is_empty() {
            let start = self.vars.len();
            self.vars.extend(extra);
            self.blocks.push((BlockKind::DegRevLex, start, self.vars.len()));
        }
        self
    }

    fn cmp_exp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for &(kind, s, e) in &self.blocks {
            let o = match kind {
                BlockKind::Lex => a[s..e].cmp(&b[s..e]),
                BlockKind::DegRevLex => {
                    let da: u32 = a[s..e].iter().sum();
                    let db: u32 = b[s..e].iter().sum();
                    da.cmp(&db).then_with(|| {
                        for i in (s..e).rev() {
                            match a[i].cmp(&b[i]) {
                                Ordering::Equal => continue,
                                o => return o.reverse(),
                            }
                        }
                        Ordering::Equal
                    })
                }
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }

    /// Compares two monomials under this order.
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let ea = self.exp_of(a).expect("monomial outside order");
        let eb = self.exp_of(b).expect("monomial outside order");
        self.cmp_exp(&ea, &eb)
    }

    fn index_of(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    fn exp_of(&self, m: &Monomial) -> Option<Vec<u32>> {
        let mut e = vec![0u32; self.vars.len()];
        for (v, k) in m.pairs() {
            e[self.index_of(v)?] = *k;
        }
        Some(e)
    }
}

/// Resource limits for Gröbner computations; exceeding any is an error.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_degree: u32,
    pub max_basis: usize,
    pub max_terms: usize,
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: 200,
            max_basis: 5000,
            max_terms: 200_000,
            deadline: None,
            cancel: None,
        }
    }
}

impl Budget {
    pub fn with_timeout(mut self, d: Duration) -> Self {
        self.deadline = Some(Instant::now() + d);
        self
    }

    pub fn check(&self) -> Result<()> {
        if let Some(c) = &self.cancel {
            if c.load(AtomicOrdering::Relaxed) {
                return Err(Error::Budget("cancelled".into()));
            }
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(Error::Budget("wall-clock limit reached".into()));
            }
        }
        Ok(())
    }
}

type Exp = Vec<u32>;

#[derive(Clone)]
struct DPoly<C> {
    // terms in strictly decreasing order
    terms: Vec<(Exp, C)>,
    sugar: u32,
}

fn deg(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn exp_lcm(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn exp_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn exp_sub(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn exp_add(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn disjoint(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

struct Ctx<'a> {
    order: &'a TermOrder,
    budget: &'a Budget,
}

impl<'a> Ctx<'a> {
    fn to_dpoly<C: Field>(&self, p: &Polynomial<C>) -> DPoly<C> {
        let mut terms: Vec<(Exp, C)> = p
            .terms()
            .map(|(m, c)| (self.order.exp_of(m).expect("variable outside order"), c.clone()))
            .collect();
        terms.sort_by(|a, b| self.order.cmp_exp(&b.0, &a.0));
        let sugar = terms.iter().map(|t| deg(&t.0)).max().unwrap_or(0);
        DPoly { terms, sugar }
    }

    fn to_polynomial<C: Field>(&self, p: &DPoly<C>) -> Polynomial<C> {
        Polynomial::from_terms(p.terms.iter().map(|(e, c)| {
            (
                Monomial::from_pairs(
                    self.order
                        .vars
                        .iter()
                        .zip(e)
                        .map(|(v, k)| (v.clone(), *k)),
                ),
                c.clone(),
            )
        }))
    }

    /// `a - c * x^m * b`
    fn sub_mul<C: Field>(&self, a: &[(Exp, C)], c: &C, m: &[u32], b: &[(Exp, C)]) -> Vec<(Exp, C)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let shifted: Vec<(Exp, C)> = b.iter().map(|(e, k)| (exp_add(e, m), k.fmul(c))).collect();
        while i < a.len() && j < shifted.len() {
            match self.order.cmp_exp(&a[i].0, &shifted[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted[j].0.clone(), shifted[j].1.fneg()));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = a[i].1.fsub(&shifted[j].1);
                    if !s.is_zero() {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for (e, k) in &shifted[j..] {
            out.push((e.clone(), k.fneg()));
        }
        out
    }

    fn make_monic<C: Field>(&self, p: &mut DPoly<C>) {
        if let Some((_, c)) = p.terms.first() {
            if !c.is_one() {
                let inv = c.finv();
                for t in p.terms.iter_mut() {
                    t.1 = t.1.fmul(&inv);
                }
            }
        }
    }

    fn check_size<C>(&self, p: &DPoly<C>) -> Result<()> {
        if p.terms.len() > self.budget.max_terms {
            return Err(Error::Budget(format!(
                "polynomial with {} terms exceeds term cap {}",
                p.terms.len(),
                self.budget.max_terms
            )));
        }
        if let Some((e, _)) = p.terms.first() {
            let d = p.terms.iter().map(|t| deg(&t.0)).max().unwrap_or(0);
            let _ = e;
            if d > self.budget.max_degree {
                return Err(Error::Budget(format!(
                    "degree {} exceeds degree cap {}",
                    d, self.budget.max_degree
                )));
            }
        }
        Ok(())
    }

    /// Full reduction of `p` by monic `basis` (elements selected by `live`).
    fn reduce<C: Field>(
        &self,
        mut p: DPoly<C>,
        basis: &[DPoly<C>],
        live: &[usize],
        tail: bool,
    ) -> Result<DPoly<C>> {
        let mut done: Vec<(Exp, C)> = Vec::new();
        let mut steps = 0usize;
        while !p.terms.is_empty() {
            let (lead_e, lead_c) = p.terms[0].clone();
            let mut reduced = false;
            for &k in live {
                let g = &basis[k];
                let ge = &g.terms[0].0;
                if exp_divides(ge, &lead_e) {
                    let m = exp_sub(&lead_e, ge);
                    p.sugar = p.sugar.max(g.sugar + deg(&m));
                    p.terms = self.sub_mul(&p.terms, &lead_c, &m, &g.terms);
                    reduced = true;
                    break;
                }
            }
            if !reduced {
                if !tail {
                    break;
                }
                done.push(p.terms.remove(0));
            }
            steps += 1;
            if steps.is_multiple_of(64) {
                self.budget.check()?;
                if p.terms.len() + done.len() > self.budget.max_terms {
                    return Err(Error::Budget(format!(
                        "intermediate polynomial exceeds term cap {}",
                        self.budget.max_terms
                    )));
                }
            }
        }
        if tail {
            done.extend(p.terms);
            p.terms = done;
        }
        Ok(p)
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exp,
    sugar: u32,
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic and sorted
/// by increasing leading monomial. The zero ideal gives an empty list.
pub fn groebner<C: Field>(
    gens: &[Polynomial<C>],
    order: &TermOrder,
    budget: &Budget,
) -> Result<Vec<Polynomial<C>>> {
    let order = order.clone().covering(gens);
    let ctx = Ctx {
        order: &order,
        budget,
    };
    let mut basis: Vec<DPoly<C>> = Vec::new();
    let mut live: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut input: Vec<DPoly<C>> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| ctx.to_dpoly(p))
        .collect();
    input.sort_by(|a, b| {
        a.sugar
            .cmp(&b.sugar)
            .then_with(|| order.cmp_exp(&a.terms[0].0, &b.terms[0].0))
    });
    for p in input {
        let mut h = ctx.reduce(p, &basis, &live, false)?;
        if h.terms.is_empty() {
            continue;
        }
        ctx.make_monic(&mut h);
        if h.terms[0].0.iter().all(|e| *e == 0) {
            return Ok(vec![Polynomial::one()]);
        }
        update(&order, &mut basis, &mut live, &mut pairs, h);
    }

    while !pairs.is_empty() {
        budget.check()?;
        // lowest sugar, then smallest lcm
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            if a.sugar < b.sugar
                || (a.sugar == b.sugar && order.cmp_exp(&a.lcm, &b.lcm) == Ordering::Less)
            {
                best = k;
            }
        }
        let pr = pairs.swap_remove(best);
        let s = spoly(&ctx, &basis[pr.i], &basis[pr.j], &pr.lcm, pr.sugar);
        let mut h = ctx.reduce(s, &basis, &live, false)?;
        if h.terms.is_empty() {
            continue;
        }
        ctx.check_size(&h)?;
        ctx.make_monic(&mut h);
        if h.terms[0].0.iter().all(|e| *e == 0) {
            return Ok(vec![Polynomial::one()]);
        }
        if live.len() >= budget.max_basis {
            return Err(Error::Budget(format!(
                "basis size exceeds cap {}",
                budget.max_basis
            )));
        }
        update(&order, &mut basis, &mut live, &mut pairs, h);
    }

    // interreduce
    let mut lead_sorted: Vec<usize> = live.clone();
    lead_sorted.sort_by(|a, b| order.cmp_exp(&basis[*a].terms[0].0, &basis[*b].terms[0].0));
    let mut out = Vec::new();
    let mut finished: Vec<DPoly<C>> = Vec::new();
    for (pos, &k) in lead_sorted.iter().enumerate() {
        let others: Vec<usize> = lead_sorted
            .iter()
            .enumerate()
            .filter(|(q, _)| *q != pos)
            .map(|(_, k)| *k)
            .collect();
        let mut r = ctx.reduce(basis[k].clone(), &basis, &others, true)?;
        ctx.make_monic(&mut r);
        finished.push(r);
    }
    for r in &finished {
        out.push(ctx.to_polynomial(r));
    }
    Ok(out)
}

fn spoly<C: Field>(ctx: &Ctx<'_>, f: &DPoly<C>, g: &DPoly<C>, lcm: &[u32], sugar: u32) -> DPoly<C> {
    let mf = exp_sub(lcm, &f.terms[0].0);
    let mg = exp_sub(lcm, &g.terms[0].0);
    // both monic
    let a: Vec<(Exp, C)> = f.terms[1..]
        .iter()
        .map(|(e, c)| (exp_add(e, &mf), c.clone()))
        .collect();
    let terms = ctx.sub_mul(&a, &C::one(), &mg, &g.terms[1..]);
    DPoly { terms, sugar }
}

/// Gebauer–Möller installation of a new basis element.
fn update<C: Field>(
    order: &TermOrder,
    basis: &mut Vec<DPoly<C>>,
    live: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: DPoly<C>,
) {
    let hk = basis.len();
    let he = h.terms[0].0.clone();
    let hs = h.sugar;
    basis.push(h);

    let cands: Vec<(usize, Exp, bool)> = live
        .iter()
        .map(|&g| {
            let ge = &basis[g].terms[0].0;
            (g, exp_lcm(&he, ge), disjoint(&he, ge))
        })
        .collect();
    // criterion M and F over the new pairs
    let mut keep: Vec<bool> = vec![true; cands.len()];
    for a in 0..cands.len() {
        for b in 0..cands.len() {
            if a == b || !keep[b] {
                continue;
            }
            let (la, lb) = (&cands[a].1, &cands[b].1);
            if exp_divides(lb, la) && (lb != la || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    // product criterion
    let new_pairs: Vec<Pair> = cands
        .into_iter()
        .zip(keep)
        .filter(|((_, _, dis), k)| *k && !*dis)
        .map(|((g, lcm, _), _)| {
            let ge = &basis[g].terms[0].0;
            let d = deg(&lcm);
            let sugar = (hs + d - deg(&he)).max(basis[g].sugar + d - deg(ge));
            Pair {
                i: g,
                j: hk,
                lcm,
                sugar,
            }
        })
        .collect();
    // criterion B on old pairs
    pairs.retain(|p| {
        if !exp_divides(&he, &p.lcm) {
            return true;
        }
        let li = exp_lcm(&basis[p.i].terms[0].0, &he);
        let lj = exp_lcm(&basis[p.j].terms[0].0, &he);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);
    live.retain(|&g| !exp_divides(&he, &basis[g].terms[0].0));
    live.push(hk);
    let _ = order;
}

/// Normal form of `p` with respect to `basis` (need not be a Gröbner basis).
pub fn normal_form<C: Field>(
    p: &Polynomial<C>,
    basis: &[Polynomial<C>],
    order: &TermOrder,
) -> Polynomial<C> {
    let mut all = basis.to_vec();
    all.push(p.clone());
    let order = order.clone().covering(&all);
    let budget = Budget {
        max_terms: usize::MAX,
        ..Budget::default()
    };
    let ctx = Ctx {
        order: &order,
        budget: &budget,
    };
    let mut b: Vec<DPoly<C>> = basis
        .iter()
        .filter(|q| !q.is_zero())
        .map(|q| ctx.to_dpoly(q))
        .collect();
    for q in b.iter_mut() {
        ctx.make_monic(q);
    }
    let live: Vec<usize> = (0..b.len()).collect();
    let r = ctx
        .reduce(ctx.to_dpoly(p), &b, &live, true)
        .expect("unbudgeted reduction");
    ctx.to_polynomial(&r)
}

/// Leading monomial of `p` under `order`.
pub fn leading_monomial<C: Field>(p: &Polynomial<C>, order: &TermOrder) -> Option<Monomial> {
    p.monomials()
        .max_by(|a, b| order.cmp_monomials(a, b))
        .cloned()
}

/// Generators of the ideal intersected with the subring free of `drop`.
pub fn eliminate<C: Field>(
    gens: &[Polynomial<C>],
    drop: &[Var],
    budget: &Budget,
) -> Result<Vec<Polynomial<C>>> {
    let dropset: BTreeSet<&Var> = drop.iter().collect();
    let mut keep = BTreeSet::new();
    for g in gens {
        for v in g.vars() {
            if !dropset.contains(&v) {
                keep.insert(v);
            }
        }
    }
    let order = TermOrder::elimination(drop.to_vec(), keep.into_iter().collect());
    let gb = groebner(gens, &order, budget)?;
    Ok(gb
        .into_iter()
        .filter(|g| !drop.iter().any(|v| g.contains_var(v)))
        .collect())
}

/// Name of the auxiliary variable used for saturation.
pub const SAT_VAR: &str = "$sat";

/// Generators of `I : f^∞` via `I + (1 - t f)` with `t` eliminated.
pub fn saturate<C: Field>(
    gens: &[Polynomial<C>],
    f: &Polynomial<C>,
    budget: &Budget,
) -> Result<Vec<Polynomial<C>>> {
    assert!(!f.is_zero(), "saturation by zero");
    if f.is_constant() {
        let vars = collect_vars(gens);
        return groebner(gens, &TermOrder::drl(vars), budget);
    }
    let t = Var::new(SAT_VAR);
    let mut all = gens.to_vec();
    all.push(&(&Polynomial::var(t.clone()) * f) - &Polynomial::one());
    eliminate(&all, &[t], budget)
}

pub fn collect_vars<C: Field>(gens: &[Polynomial<C>]) -> Vec<Var> {
    let mut s = BTreeSet::new();
    for g in gens {
        s.extend(g.vars());
    }
    s.into_iter().collect()
}

/// True when every element of `a` reduces to zero modulo the Gröbner basis `gb`.
pub fn all_reduce_to_zero<C: Field>(a: &[Polynomial<C>], gb: &[Polynomial<C>], order: &TermOrder) -> bool {
    a.iter().all(|p| normal_form(p, gb, order).is_zero())
}

/// Equality of ideals given by two generating sets.
pub fn ideals_equal<C: Field>(
    a: &[Polynomial<C>],
    b: &[Polynomial<C>],
    order: &TermOrder,
    budget: &Budget,
) -> Result<bool> {
    let ga = groebner(a, order, budget)?;
    let gb = groebner(b, order, budget)?;
    Ok(ga == gb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;

    fn v(s: &str) -> Poly {
        Poly::var(Var::new(s))
    }
    fn c(n: i64) -> Poly {
        Poly::from_i64(n)
    }

    #[test]
    fn trivial_reduction() {
        let x = v("x");
        let gb = groebner(
            &[&x - &c(1), &x.pow(2) - &c(1)],
            &TermOrder::lex(vec![Var::new("x")]),
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(gb, vec![&x - &c(1)]);
    }

    #[test]
    fn singleton_is_made_monic() {
        let f = &v("x").scale(&crate::algebra::field::rat(3)) + &c(6);
        let gb = groebner(&[f], &TermOrder::drl(vec![Var::new("x")]), &Budget::default()).unwrap();
        assert_eq!(gb, vec![&v("x") + &c(2)]);
    }

    #[test]
    fn saturation_examples() {
        let b = Budget::default();
        let s = saturate(&[&v("x") * &v("y")], &v("x"), &b).unwrap();
        assert_eq!(s, vec![v("y")]);
        let s = saturate(&[v("x")], &v("x"), &b).unwrap();
        assert_eq!(s, vec![c(1)]);
    }

    #[test]
    fn elimination_examples() {
        let b = Budget::default();
        let gens = vec![&v("Z1") - &v("a"), &v("Z2") - &v("b"), &v("Z3") - &v("x")];
        let e = eliminate(&gens, &[Var::new("x")], &b).unwrap();
        let order = TermOrder::drl(vec![Var::new("Z1"), Var::new("Z2"), Var::new("a"), Var::new("b")]);
        let expect = vec![&v("Z1") - &v("a"), &v("Z2") - &v("b")];
        assert!(ideals_equal(&e, &expect, &order, &b).unwrap());
        let e = eliminate(&[&v("x") - &v("y")], &[Var::new("x")], &b).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn cyclic3_basis_is_reduced() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let gens = vec![
            &(&x + &y) + &z,
            &(&(&x * &y) + &(&y * &z)) + &(&z * &x),
            &(&(&x * &y) * &z) - &c(1),
        ];
        let order = TermOrder::lex(vec![Var::new("x"), Var::new("y"), Var::new("z")]);
        let gb = groebner(&gens, &order, &Budget::default()).unwrap();
        assert!(all_reduce_to_zero(&gens, &gb, &order));
        assert_eq!(gb.len(), 3);
        assert!(gb.iter().any(|g| *g == &v("z").pow(3) - &c(1)));
    }

    #[test]
    fn budget_is_enforced() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let gens = vec![&x.pow(5) - &(&y * &z), &y.pow(5) - &(&x * &z), &z.pow(5) - &(&x * &y)];
        let budget = Budget {
            max_basis: 2,
            ..Budget::default()
        };
        let r = groebner(&gens, &TermOrder::lex(vec![Var::new("x"), Var::new("y"), Var::new("z")]), &budget);
        assert!(matches!(r, Err(Error::Budget(_))));
    }
}
