use std::fmt;

use super::field::{Field, Rational};
use super::gcd::{exact_div, gcd};
use super::poly::{Poly, Polynomial};
use super::var::Var;

/// Reduced quotient of two rational polynomials.
///
/// `gcd(num, den) = 1` and `den` has lex leading coefficient 1, so equal
/// functions have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Polynomial whose coefficients are rational functions.
pub type RfPoly = Polynomial<RatFunc>;

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::one(),
            };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    exact_div(&num, &g).expect("gcd divides"),
                    exact_div(&den, &g).expect("gcd divides"),
                )
            }
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.finv();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.num.constant_term().fdiv(&self.den.constant_term()))
        } else {
            None
        }
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: &Var) -> Self {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return RatFunc::new(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        RatFunc::new(num, &self.den * &self.den)
    }

    pub fn substitute(&self, v: &Var, by: &RatFunc) -> Self {
        if !self.contains_var(v) {
            return self.clone();
        }
        eval_poly_rf(&self.num, v, by).fdiv(&eval_poly_rf(&self.den, v, by))
    }

    pub fn map_vars(&self, f: impl Fn(&Var) -> Var) -> Self {
        RatFunc::new(self.num.map_vars(&f), self.den.map_vars(&f))
    }

    /// Value at a rational point; `None` if a variable is missing or the
    /// denominator vanishes.
    pub fn eval(&self, point: &dyn Fn(&Var) -> Option<Rational>) -> Option<Rational> {
        let d = self.den.eval(point)?;
        if Field::is_zero(&d) {
            return None;
        }
        Some(self.num.eval(point)? / d)
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }
}

/// Substitutes `by` for `v` in a polynomial, producing a rational function.
fn eval_poly_rf(p: &Poly, v: &Var, by: &RatFunc) -> RatFunc {
    let coeffs = p.coeffs_in(v);
    if coeffs.is_empty() {
        return RatFunc::zero();
    }
    let d = coeffs.len() - 1;
    // sum c_i num^i den^(d-i) / den^d
    let mut num = Poly::zero();
    let mut npow = Poly::one();
    let dpows: Vec<Poly> = {
        let mut v = vec![Poly::one()];
        for i in 1..=d {
            v.push(&v[i - 1] * &by.den);
        }
        v
    };
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            num = &num + &(&(c * &npow) * &dpows[d - i]);
        }
        if i < d {
            npow = &npow * &by.num;
        }
    }
    RatFunc::new(num, dpows[d].clone())
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn one() -> Self {
        RatFunc {
            num: Poly::one(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn fadd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc {
                num: &(&self.num * &o.den) + &o.num,
                den: o.den.clone(),
            };
        }
        if o.den.is_one() {
            return RatFunc {
                num: &self.num + &(&o.num * &self.den),
                den: self.den.clone(),
            };
        }
        let g = gcd(&self.den, &o.den);
        let a = exact_div(&self.den, &g).expect("gcd divides");
        let b = exact_div(&o.den, &g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&o.num * &a);
        RatFunc::new(num, &(&a * &b) * &g)
    }
    fn fsub(&self, o: &Self) -> Self {
        self.fadd(&o.fneg())
    }
    fn fmul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc {
                num: &self.num * &o.num,
                den: Poly::one(),
            };
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = exact_div(&self.num, &g1).expect("gcd divides");
        let d2 = exact_div(&o.den, &g1).expect("gcd divides");
        let n2 = exact_div(&o.num, &g2).expect("gcd divides");
        let d1 = exact_div(&self.den, &g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coeff();
        let inv = lc.finv();
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }
    fn fneg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn finv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let lc = self.num.leading_coeff();
        let inv = lc.finv();
        RatFunc {
            num: self.den.scale(&inv),
            den: self.num.scale(&inv),
        }
    }
    fn from_rational(q: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(q))
    }
    fn is_rational(&self) -> bool {
        self.is_constant()
    }
    fn needs_parens(&self) -> bool {
        self.num.len() > 1 || !self.den.is_one()
    }
    fn is_negative_printed(&self) -> bool {
        self.num.to_string().starts_with('-')
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let simple = self.den.len() == 1
            && self
                .den
                .terms()
                .next()
                .map(|(m, c)| c.is_one() && m.pairs().len() == 1)
                .unwrap_or(false);
        if simple {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> RatFunc {
        RatFunc::var(Var::new(s))
    }

    #[test]
    fn canonical_form() {
        let x = v("x");
        let y = v("y");
        let a = x.fdiv(&y);
        let b = x.fmul(&x).fdiv(&x.fmul(&y));
        assert_eq!(a, b);
        let c = a.fadd(&RatFunc::one()).fsub(&y.fadd(&x).fdiv(&y));
        assert!(c.is_zero());
        let two = RatFunc::from_rational(Rational::from_integer(2.into()));
        let d = x.fdiv(&y.fmul(&two));
        assert!(d.den().leading_coeff().is_one());
        assert_eq!(d.to_string(), "1/2*x/y");
    }

    #[test]
    fn derivative_quotient_rule() {
        let x = v("x");
        let f = RatFunc::one().fdiv(&x);
        let d = f.derivative(&Var::new("x"));
        assert_eq!(d, RatFunc::one().fdiv(&x.fmul(&x)).fneg());
    }
}
