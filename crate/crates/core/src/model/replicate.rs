use super::OdeModel;
use crate::algebra::{RatFunc, Var};
use crate::error::Result;

/// Name of copy `i` (1-based) of `name` in a replicated model.
pub fn copy_name(name: &str, i: usize) -> String {
    format!("{name}#{i}")
}

/// The `n`-experiment model: `n` copies of states, outputs and inputs with
/// shared parameters.
pub fn replicate(m: &OdeModel, n: usize) -> Result<OdeModel> {
    assert!(n >= 1, "at least one experiment");
    let mut states = Vec::new();
    let mut inputs = Vec::new();
    let mut rhs = Vec::new();
    let mut outputs = Vec::new();
    for i in 1..=n {
        let rename = |v: &Var| {
            if m.states().iter().chain(m.inputs()).any(|s| s == v.name()) {
                Var::jet(copy_name(v.name(), i), v.order())
            } else {
                v.clone()
            }
        };
        let ren = |f: &RatFunc| f.map_vars(rename);
        for (s, r) in m.states().iter().zip(m.state_rhs()) {
            states.push(copy_name(s, i));
            rhs.push(ren(r));
        }
        for u in m.inputs() {
            inputs.push(copy_name(u, i));
        }
        for (y, g) in m.outputs() {
            outputs.push((copy_name(y, i), ren(g)));
        }
    }
    OdeModel::new(
        format!("{}_x{n}", m.name()),
        states,
        m.params().to_vec(),
        inputs,
        rhs,
        outputs,
    )
}
