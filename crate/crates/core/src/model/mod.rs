//! Rational ODE models `x' = f(x, μ, u)`, `y = g(x, μ, u)`.

mod appendix;
mod lie;
mod parser;
mod replicate;

use std::collections::BTreeSet;
use std::fmt;

pub use appendix::gen_appendix;
pub use lie::{lie_derivative, JetPoint};
pub use parser::{parse_diff_expr, parse_expr, parse_model};
pub use replicate::{copy_name, replicate};

use crate::algebra::gcd::{exact_div, lcm};
use crate::algebra::{Poly, RatFunc, Var};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct OdeModel {
    name: String,
    states: Vec<String>,
    params: Vec<String>,
    inputs: Vec<String>,
    state_rhs: Vec<RatFunc>,
    outputs: Vec<(String, RatFunc)>,
}

impl OdeModel {
    /// Validates and builds a model. `state_rhs[i]` is the derivative of `states[i]`.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        params: Vec<String>,
        inputs: Vec<String>,
        state_rhs: Vec<RatFunc>,
        outputs: Vec<(String, RatFunc)>,
    ) -> Result<Self> {
        let m = OdeModel {
            name: name.into(),
            states,
            params,
            inputs,
            state_rhs,
            outputs,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.state_rhs.len() != self.states.len() {
            return Err(Error::Semantic("every state needs exactly one equation".into()));
        }
        if self.outputs.is_empty() {
            return Err(Error::Semantic("model has no outputs".into()));
        }
        let mut seen = BTreeSet::new();
        let all = self
            .states
            .iter()
            .chain(&self.params)
            .chain(&self.inputs)
            .chain(self.outputs.iter().map(|(n, _)| n));
        for n in all {
            if !seen.insert(n.as_str()) {
                return Err(Error::Semantic(format!("name `{n}` declared twice")));
            }
        }
        let allowed: BTreeSet<&str> = self
            .states
            .iter()
            .chain(&self.params)
            .chain(&self.inputs)
            .map(|s| s.as_str())
            .collect();
        for f in self.state_rhs.iter().chain(self.outputs.iter().map(|(_, g)| g)) {
            for v in f.vars() {
                if v.order() != 0 || !allowed.contains(v.name()) {
                    return Err(Error::Semantic(format!("unknown symbol `{v}`")));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn state_rhs(&self) -> &[RatFunc] {
        &self.state_rhs
    }

    pub fn outputs(&self) -> &[(String, RatFunc)] {
        &self.outputs
    }

    pub fn output_names(&self) -> Vec<String> {
        self.outputs.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn param_vars(&self) -> Vec<Var> {
        self.params.iter().map(Var::new).collect()
    }

    pub fn state_vars(&self) -> Vec<Var> {
        self.states.iter().map(Var::new).collect()
    }

    pub fn rhs_of(&self, state: &str) -> Option<&RatFunc> {
        self.states
            .iter()
            .position(|s| s == state)
            .map(|i| &self.state_rhs[i])
    }

    /// Default jet cap `2 * |x| + 2`.
    pub fn default_jet_cap(&self) -> u32 {
        2 * self.states.len() as u32 + 2
    }

    /// `(F, G, Q)` with `f = F / Q` and `g = G / Q`.
    pub fn common_denominator(&self) -> (Vec<Poly>, Vec<Poly>, Poly) {
        let all: Vec<&RatFunc> = self
            .state_rhs
            .iter()
            .chain(self.outputs.iter().map(|(_, g)| g))
            .collect();
        let q = all.iter().fold(Poly::one(), |acc, f| lcm(&acc, f.den()));
        let lift = |f: &RatFunc| &f.num().clone() * &exact_div(&q, f.den()).expect("lcm");
        (
            self.state_rhs.iter().map(lift).collect(),
            self.outputs.iter().map(|(_, g)| lift(g)).collect(),
            q,
        )
    }
}

impl fmt::Display for OdeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {}", self.name)?;
        writeln!(f, "states: {}", self.states.join(", "))?;
        writeln!(f, "params: {}", self.params.join(", "))?;
        if !self.inputs.is_empty() {
            writeln!(f, "inputs: {}", self.inputs.join(", "))?;
        }
        for (s, r) in self.states.iter().zip(&self.state_rhs) {
            writeln!(f, "{s}' = {r}")?;
        }
        for (y, g) in &self.outputs {
            writeln!(f, "{y} = {g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for OdeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
