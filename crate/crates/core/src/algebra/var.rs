use std::fmt;
use std::sync::Arc;

/// A polynomial indeterminate.
///
/// Plain symbols (parameters, states, tag variables) have `order == 0` and are
/// never differentiated. Differential variables use `order` for the number of
/// applications of the derivation; which names are differential is decided by
/// the surrounding context (a `Ranking` or a model).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    order: u32,
}

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var {
            name: Arc::from(name.as_ref()),
            order: 0,
        }
    }

    pub fn jet(name: impl AsRef<str>, order: u32) -> Self {
        Var {
            name: Arc::from(name.as_ref()),
            order,
        }
    }

    pub fn from_arc(name: Arc<str>, order: u32) -> Self {
        Var { name, order }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn name_arc(&self) -> &Arc<str> {
        &self.name
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The same base with its order bumped by `k`.
    pub fn shifted(&self, k: u32) -> Var {
        Var {
            name: self.name.clone(),
            order: self.order + k,
        }
    }

    pub fn base(&self) -> Var {
        Var {
            name: self.name.clone(),
            order: 0,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for _ in 0..self.order {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}
