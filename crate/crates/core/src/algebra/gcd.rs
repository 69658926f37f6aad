//! Exact division and gcd of multivariate rational polynomials.

use super::field::{Field, Rational};
use super::monomial::Monomial;
use super::poly::Poly;
use super::var::Var;

/// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
pub fn exact_div(a: &Poly, b: &Poly) -> Option<Poly> {
    assert!(!b.is_zero(), "division by zero polynomial");
    if a.is_zero() {
        return Some(Poly::zero());
    }
    if let Some(c) = b.constant_value() {
        return Some(a.scale(&c.finv()));
    }
    let (bm, bc) = b.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let binv = bc.finv();
    let mut r = a.clone();
    let mut q = Poly::zero();
    while let Some((rm, rc)) = r.leading_term() {
        let m = rm.div(&bm)?;
        let c = rc.fmul(&binv);
        r = &r - &b.mul_monomial(&m, &c);
        q.add_term(m, c);
    }
    Some(q)
}

/// Gcd of all monomials of `p`.
pub fn monomial_content(p: &Poly) -> Monomial {
    let mut it = p.monomials();
    let Some(first) = it.next() else {
        return Monomial::one();
    };
    let mut g = first.clone();
    for m in it {
        if g.is_one() {
            break;
        }
        g = g.gcd(m);
    }
    g
}

/// Makes the lex leading coefficient equal to one.
pub fn normalize(p: &Poly) -> Poly {
    p.monic()
}

/// Monic gcd (lex leading coefficient 1); `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    normalize(&gcd_inner(a, b))
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    normalize(&(&exact_div(a, &g).expect("gcd divides") * b))
}

fn gcd_inner(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // pull out common monomial factor
    let ma = monomial_content(a);
    let mb = monomial_content(b);
    let mg = ma.gcd(&mb);
    let one = <Rational as Field>::one();
    let a = if ma.is_one() { a.clone() } else { div_monomial(a, &ma) };
    let b = if mb.is_one() { b.clone() } else { div_monomial(b, &mb) };
    let core = gcd_monomial_free(&a, &b);
    if mg.is_one() {
        core
    } else {
        core.mul_monomial(&mg, &one)
    }
}

fn div_monomial(p: &Poly, m: &Monomial) -> Poly {
    Poly::from_terms(p.terms().map(|(k, c)| (k.div(m).expect("monomial content"), c.clone())))
}

fn gcd_monomial_free(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.len() <= b.len() {
        if exact_div(b, a).is_some() {
            return a.clone();
        }
    } else if exact_div(a, b).is_some() {
        return b.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    // a variable present in one side only: gcd divides every coefficient there
    if let Some(v) = va.iter().find(|v| !vb.contains(*v)) {
        let mut g = b.clone();
        for c in a.coeffs_in(v).iter().filter(|c| !c.is_zero()) {
            g = gcd_inner(&g, c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        return g;
    }
    if let Some(v) = vb.iter().find(|v| !va.contains(*v)) {
        let mut g = a.clone();
        for c in b.coeffs_in(v).iter().filter(|c| !c.is_zero()) {
            g = gcd_inner(&g, c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        return g;
    }
    let v = va
        .iter()
        .min_by_key(|v| (a.degree_in(v).max(b.degree_in(v)), (*v).clone()))
        .cloned()
        .expect("nonconstant");
    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let pa = exact_div(a, &ca).expect("content divides");
    let pb = exact_div(b, &cb).expect("content divides");
    let gc = gcd_inner(&ca, &cb);
    let gp = subresultant_gcd(&pa, &pb, &v);
    &gc * &gp
}

/// Gcd of the coefficients of `p` viewed as univariate in `v`.
pub fn content_in(p: &Poly, v: &Var) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c } else { gcd_inner(&g, &c) };
        if g.is_constant() {
            return Poly::one();
        }
    }
    normalize(&g)
}

pub fn primitive_part_in(p: &Poly, v: &Var) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    exact_div(p, &content_in(p, v)).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` with respect to `v`:
/// `lc(b)^(deg a - deg b + 1) * a mod b`.
pub fn prem(a: &Poly, b: &Poly, v: &Var) -> Poly {
    let db = b.degree_in(v);
    let mut da = a.degree_in(v);
    if a.is_zero() || da < db {
        return a.clone();
    }
    let lb = b.lead_coeff_in(v);
    let bred = b - &(&lb * &Poly::var(v.clone()).pow(db));
    let mut r = a.clone();
    let mut e = da - db + 1;
    while !r.is_zero() && r.degree_in(v) >= db {
        da = r.degree_in(v);
        let lr = r.lead_coeff_in(v);
        let rred = &r - &(&lr * &Poly::var(v.clone()).pow(da));
        let shift = Poly::var(v.clone()).pow(da - db);
        r = &(&rred * &lb) - &(&(&lr * &shift) * &bred);
        e -= 1;
    }
    if e > 0 {
        r = &r * &lb.pow(e);
    }
    r
}

fn subresultant_gcd(a: &Poly, b: &Poly, v: &Var) -> Poly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let d = a.degree_in(v) - b.degree_in(v);
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return primitive_part_in(&b, v);
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        let div = &g * &h.pow(d);
        b = exact_div(&r, &div).expect("subresultant division");
        g = a.lead_coeff_in(v);
        h = if d == 0 {
            h
        } else {
            let num = g.pow(d);
            exact_div(&num, &h.pow(d - 1)).expect("subresultant h")
        };
    }
}



#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Poly {
        Poly::var(Var::new(s))
    }
    fn c(n: i64) -> Poly {
        Poly::from_i64(n)
    }

    #[test]
    fn gcd_of_products() {
        let f = &(&v("x") + &v("y")) * &(&v("x") - &c(2));
        let g = &(&v("x") + &v("y")) * &(&v("y").pow(2) + &c(1));
        assert_eq!(gcd(&f, &g), &v("x") + &v("y"));
        let h = &(&v("a") * &v("x")) + &v("b");
        let k = &h * &h;
        assert_eq!(gcd(&k, &(&h * &v("a"))), normalize(&h));
    }

    #[test]
    fn coprime_and_monomial_factors() {
        let f = &(&v("x").pow(2) * &v("y")) + &v("x");
        let g = &v("x").pow(3) * &v("z");
        assert_eq!(gcd(&f, &g), v("x"));
        assert_eq!(gcd(&(&v("x") + &c(1)), &(&v("x") - &c(1))), c(1));
    }

    #[test]
    fn exact_division_detects_remainder() {
        let f = &(&v("x") + &v("y")).pow(3);
        assert_eq!(exact_div(f, &(&v("x") + &v("y"))), Some((&v("x") + &v("y")).pow(2)));
        assert_eq!(exact_div(f, &v("x")), None);
    }
}
