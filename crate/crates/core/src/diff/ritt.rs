//! Ritt reduction, autoreduced sets and their ordering.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::diffpoly::{
    cmp_poly_rank, cmp_rank, derive_n, is_reduced_wrt, leader, proper_derivative_order, rank,
    ranked_vars, Rank,
};
use super::ranking::Ranking;
use crate::algebra::gcd::{exact_div, gcd};
use crate::algebra::{Monomial, Poly, Var};
use crate::error::{Error, Result};

/// An autoreduced set, kept sorted by increasing rank.
#[derive(Clone, PartialEq, Eq)]
pub struct AutoreducedSet {
    ranking: Ranking,
    elems: Vec<Poly>,
}

impl AutoreducedSet {
    /// Sorts `elems` by rank and checks that they are autoreduced.
    pub fn new(elems: Vec<Poly>, ranking: Ranking) -> Result<Self> {
        let s = Self::new_unchecked(elems, ranking);
        if !s.is_autoreduced() {
            return Err(Error::Invalid(format!("set is not autoreduced: {s}")));
        }
        Ok(s)
    }

    pub fn new_unchecked(mut elems: Vec<Poly>, ranking: Ranking) -> Self {
        elems.sort_by(|a, b| cmp_poly_rank(a, b, &ranking));
        AutoreducedSet { ranking, elems }
    }

    pub fn empty(ranking: Ranking) -> Self {
        AutoreducedSet {
            ranking,
            elems: Vec::new(),
        }
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn elems(&self) -> &[Poly] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn leaders(&self) -> Vec<Var> {
        self.elems
            .iter()
            .map(|p| leader(p, &self.ranking).expect("nonconstant element"))
            .collect()
    }

    pub fn ranks(&self) -> Vec<Rank> {
        self.elems
            .iter()
            .map(|p| rank(p, &self.ranking).expect("nonconstant element"))
            .collect()
    }

    pub fn is_autoreduced(&self) -> bool {
        for (i, p) in self.elems.iter().enumerate() {
            if leader(p, &self.ranking).is_none() {
                return false;
            }
            for (j, q) in self.elems.iter().enumerate() {
                if i != j && !is_reduced_wrt(p, q, &self.ranking) {
                    return false;
                }
            }
        }
        true
    }

    /// Product of all initials and separants.
    pub fn h_product(&self) -> Poly {
        let mut h = Poly::one();
        for p in &self.elems {
            let v = leader(p, &self.ranking).expect("nonconstant element");
            h = &h * &p.lead_coeff_in(&v);
            h = &h * &p.derivative(&v);
        }
        h
    }
}

impl fmt::Display for AutoreducedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for AutoreducedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One step's contribution `q * δ^order A[element]` to the congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cofactor {
    pub element: usize,
    pub order: u32,
    pub q: Poly,
}

/// Result of Ritt reduction: `hpower * f = remainder + Σ q * δ^order A[element]`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub remainder: Poly,
    pub hpower: Poly,
    pub cofactors: Vec<Cofactor>,
}

/// Sparse pseudo-division in `v`: returns `(e, q, r)` with
/// `lc(g)^e * f = q * g + r` and `deg_v r < deg_v g`.
pub fn pseudo_divide(f: &Poly, g: &Poly, v: &Var) -> (u32, Poly, Poly) {
    let dg = g.degree_in(v);
    let lc = g.lead_coeff_in(v);
    let mut r = f.clone();
    let mut q = Poly::zero();
    let mut e = 0;
    while !r.is_zero() && r.contains_var(v) && r.degree_in(v) >= dg {
        let d = r.degree_in(v);
        let lr = r.lead_coeff_in(v);
        let t = &lr * &Poly::var(v.clone()).pow(d - dg);
        r = &(&lc * &r) - &(&t * g);
        q = &(&lc * &q) + &t;
        e += 1;
    }
    if dg == 0 {
        // g free of v: nothing to do
        return (0, Poly::zero(), f.clone());
    }
    (e, q, r)
}

/// Ritt reduction of `f` by `a`.
pub fn ritt_reduce(f: &Poly, a: &AutoreducedSet) -> Reduction {
    let r = &a.ranking;
    let leaders = a.leaders();
    let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
    let mut rem = f.clone();
    let mut h = Poly::one();
    let mut cof: Vec<Cofactor> = Vec::new();
    loop {
        let mut step: Option<(usize, u32, Var)> = None;
        'outer: for v in ranked_vars(&rem, r).into_iter().rev() {
            for (i, l) in leaders.iter().enumerate() {
                if let Some(k) = proper_derivative_order(&v, l) {
                    step = Some((i, k, v));
                    break 'outer;
                }
                if v == *l && rem.degree_in(&v) >= a.elems[i].degree_in(l) {
                    step = Some((i, 0, v));
                    break 'outer;
                }
            }
        }
        let Some((i, k, v)) = step else {
            break;
        };
        let g = cache
            .entry((i, k))
            .or_insert_with(|| derive_n(&a.elems[i], k, r, None).expect("uncapped derivative"))
            .clone();
        let (e, q, newr) = pseudo_divide(&rem, &g, &v);
        if e > 0 {
            let lc = g.lead_coeff_in(&v).pow(e);
            h = &h * &lc;
            for c in cof.iter_mut() {
                c.q = &c.q * &lc;
            }
        }
        cof.push(Cofactor {
            element: i,
            order: k,
            q,
        });
        rem = newr;
    }
    Reduction {
        remainder: rem,
        hpower: h,
        cofactors: cof,
    }
}

/// Recomputes `hpower * f - remainder - Σ q δ^k A_i`; zero when the
/// reduction certificate is valid.
pub fn reduction_defect(f: &Poly, a: &AutoreducedSet, red: &Reduction) -> Poly {
    let mut acc = &(&red.hpower * f) - &red.remainder;
    for c in &red.cofactors {
        let d = derive_n(&a.elems[c.element], c.order, &a.ranking, None).expect("uncapped");
        acc = &acc - &(&c.q * &d);
    }
    acc
}

/// Whether `f` is reduced with respect to every element of `a`.
pub fn is_reduced_wrt_set(f: &Poly, a: &AutoreducedSet) -> bool {
    a.elems.iter().all(|g| is_reduced_wrt(f, g, &a.ranking))
}

/// The ordering of autoreduced sets: `Less` means `a < b` (lower rank).
pub fn compare_autoreduced(a: &AutoreducedSet, b: &AutoreducedSet) -> Ordering {
    let r = &a.ranking;
    let (ra, rb) = (a.ranks(), b.ranks());
    for (x, y) in ra.iter().zip(&rb) {
        match cmp_rank(x, y, r) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    // a longer set with equal prefix is smaller
    rb.len().cmp(&ra.len())
}

/// Divides each element by its largest factor free of every leader of the
/// set, then scales it to be integral and primitive with positive highest
/// coefficient under the ranking-induced lex order.
pub fn strip_factors(a: &AutoreducedSet) -> AutoreducedSet {
    let leaders: BTreeSet<Var> = a.leaders().into_iter().collect();
    let elems = a
        .elems
        .iter()
        .map(|p| normalize_sign(&remove_nonleading_content(p, &leaders), &a.ranking))
        .collect();
    AutoreducedSet::new_unchecked(elems, a.ranking.clone())
}

/// `p` divided by the gcd of its coefficients as a polynomial in `vars`.
pub fn remove_nonleading_content(p: &Poly, vars: &BTreeSet<Var>) -> Poly {
    let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (inside, outside): (Vec<_>, Vec<_>) =
            m.pairs().iter().cloned().partition(|(v, _)| vars.contains(v));
        groups
            .entry(Monomial::from_pairs(inside))
            .or_default()
            .add_term(Monomial::from_pairs(outside), c.clone());
    }
    let mut g = Poly::zero();
    for c in groups.values() {
        g = gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    if g.is_constant() || g.is_zero() {
        return p.clone();
    }
    exact_div(p, &g).expect("content divides")
}

/// Integral, primitive, positive at the highest ranked-lex monomial.
pub fn normalize_sign(p: &Poly, r: &Ranking) -> Poly {
    let (_, q) = p.integer_primitive();
    let Some(m) = super::diffpoly::highest_monomial(&q, r) else {
        return q;
    };
    // coefficient of the highest ranked monomial is a polynomial in the rest
    let lead: Poly = Poly::from_terms(
        q.terms()
            .filter(|(k, _)| {
                let ranked: Vec<_> = k.pairs().iter().filter(|(v, _)| r.is_ranked(v)).cloned().collect();
                Monomial::from_pairs(ranked) == m
            })
            .map(|(k, c)| (k.clone(), c.clone())),
    );
    let neg = {
        use crate::algebra::Field;
        lead.leading_coeff().is_negative_printed()
    };
    if neg {
        -&q
    } else {
        q
    }
}

/// Characteristic-set style selection: repeatedly adds the lowest-rank
/// nonzero Ritt remainder of `pool` against the current set, dropping
/// elements no longer reduced. `select` may replace a remainder by a factor
/// of it before insertion.
pub fn basic_set_closure(
    pool: &[Poly],
    ranking: &Ranking,
    mut select: impl FnMut(Poly) -> Poly,
) -> AutoreducedSet {
    let mut cur = AutoreducedSet::empty(ranking.clone());
    loop {
        let mut cands: Vec<Poly> = Vec::new();
        for p in pool {
            let red = ritt_reduce(p, &cur);
            if !red.remainder.is_zero() {
                cands.push(red.remainder);
            }
        }
        if cands.is_empty() {
            return cur;
        }
        cands.sort_by(|a, b| {
            cmp_poly_rank(a, b, ranking)
                .then(a.len().cmp(&b.len()))
                .then_with(|| a.to_string().cmp(&b.to_string()))
        });
        let best = select(cands.swap_remove(0));
        if leader(&best, ranking).is_none() {
            // a nonzero constant: the ideal is the unit ideal
            return AutoreducedSet::new_unchecked(vec![best], ranking.clone());
        }
        let mut elems: Vec<Poly> = cur
            .elems
            .into_iter()
            .filter(|e| is_reduced_wrt(e, &best, ranking))
            .collect();
        elems.push(best);
        cur = AutoreducedSet::new_unchecked(elems, ranking.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn j(n: &str, k: u32) -> Poly {
        Poly::var(Var::jet(n, k))
    }
    fn p(n: &str) -> Poly {
        Poly::var(Var::new(n))
    }

    #[test]
    fn reduce_against_two_compartment_equation() {
        let r = Ranking::orderly(&["y"]).unwrap();
        let s = &(&p("a01") + &p("a12")) + &p("a21");
        let eq = &(&j("y", 2) + &(&s * &j("y", 1))) + &(&(&p("a01") * &p("a12")) * &j("y", 0));
        let a = AutoreducedSet::new(vec![eq], r).unwrap();
        let red = ritt_reduce(&j("y", 2), &a);
        let expect = -&(&(&s * &j("y", 1)) + &(&(&p("a01") * &p("a12")) * &j("y", 0)));
        assert_eq!(red.remainder, expect);
        assert!(red.hpower.is_one());
        assert!(reduction_defect(&j("y", 2), &a, &red).is_zero());
    }

    #[test]
    fn reduced_input_is_unchanged() {
        let r = Ranking::orderly(&["y"]).unwrap();
        let a = AutoreducedSet::new(vec![&j("y", 2) - &j("y", 0)], r).unwrap();
        let red = ritt_reduce(&j("y", 1), &a);
        assert_eq!(red.remainder, j("y", 1));
        assert!(red.hpower.is_one());
    }

    #[test]
    fn separant_is_used_for_proper_derivatives() {
        let r = Ranking::elimination(&["y1", "y2", "y3"]).unwrap();
        let p1 = &(&j("y1", 0).pow(2) + &j("y2", 0).pow(2)) + &j("y3", 0);
        let p2 = &j("y2", 1) - &Poly::from_i64(1);
        let p3 = &j("y3", 1) - &Poly::from_i64(1);
        let a = AutoreducedSet::new(vec![p1, p2, p3], r).unwrap();
        let f = j("y1", 1);
        let red = ritt_reduce(&f, &a);
        assert_eq!(red.hpower, j("y1", 0).scale(&rat(2)));
        assert_eq!(red.remainder, &j("y2", 0).scale(&rat(-2)) - &Poly::from_i64(1));
        assert!(reduction_defect(&f, &a, &red).is_zero());
    }

    #[test]
    fn autoreduced_order() {
        let r = Ranking::orderly(&["y"]).unwrap();
        let a = AutoreducedSet::new(vec![j("y", 1)], r.clone()).unwrap();
        let b = AutoreducedSet::new(vec![j("y", 2)], r.clone()).unwrap();
        assert_eq!(compare_autoreduced(&a, &b), Ordering::Less);
        assert_eq!(compare_autoreduced(&a, &a.clone()), Ordering::Equal);
        let r2 = Ranking::elimination(&["y", "z"]).unwrap();
        let c = AutoreducedSet::new(vec![j("y", 1), j("z", 1)], r2.clone()).unwrap();
        let d = AutoreducedSet::new(vec![j("z", 1)], r2).unwrap();
        assert_eq!(compare_autoreduced(&c, &d), Ordering::Less);
        let e = AutoreducedSet::new(vec![j("z", 1), j("y", 1)], c.ranking().clone()).unwrap();
        assert_eq!(compare_autoreduced(&e, &c), Ordering::Equal);
    }

    #[test]
    fn stripping_factors() {
        let r = Ranking::elimination(&["y1", "y2"]).unwrap();
        let a = p("a");
        let f = &(&a * &j("y1", 0)) - &(&a.pow(2) * &j("y2", 0));
        let s = strip_factors(&AutoreducedSet::new(vec![f], r.clone()).unwrap());
        assert_eq!(s.elems()[0], &j("y1", 0) - &(&a * &j("y2", 0)));
        let g = &a * &j("y", 1);
        let r3 = Ranking::orderly(&["y"]).unwrap();
        let s = strip_factors(&AutoreducedSet::new(vec![g], r3).unwrap());
        assert_eq!(s.elems()[0], j("y", 1));
    }
}
