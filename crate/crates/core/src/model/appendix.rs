use super::OdeModel;
use crate::algebra::{Field, RatFunc, Var};
use crate::error::{Error, Result};

/// The benchmark family `x1' = c1 + Σ_{i≥2} c_i x_i`, `x_i^(h) = 0` for
/// `2 <= i <= h`, `x_i' = 0` for `i > h`, `y_i = x_i`.
///
/// Each `x_i^(h) = 0` becomes the chain `x_i' = x_i_d1`, …, `x_i_d(h-1)' = 0`.
pub fn gen_appendix(n: usize, h: usize) -> Result<OdeModel> {
    if h == 0 || n == 0 || h > n {
        return Err(Error::Invalid(format!("need 1 <= h <= n, got n={n}, h={h}")));
    }
    let x = |i: usize| format!("x{i}");
    let mut states = vec![x(1)];
    let mut rhs = Vec::new();
    let params: Vec<String> = (1..=n).map(|i| format!("c{i}")).collect();
    let mut x1 = RatFunc::var(Var::new("c1"));
    for i in 2..=n {
        x1 = x1.fadd(&RatFunc::var(Var::new(format!("c{i}"))).fmul(&RatFunc::var(Var::new(x(i)))));
    }
    rhs.push(x1);
    for i in 2..=n {
        if i <= h {
            let chain: Vec<String> = std::iter::once(x(i))
                .chain((1..h).map(|k| format!("x{i}_d{k}")))
                .collect();
            for (k, s) in chain.iter().enumerate() {
                states.push(s.clone());
                rhs.push(match chain.get(k + 1) {
                    Some(next) => RatFunc::var(Var::new(next)),
                    None => RatFunc::zero(),
                });
            }
        } else {
            states.push(x(i));
            rhs.push(RatFunc::zero());
        }
    }
    let outputs = (1..=n)
        .map(|i| (format!("y{i}"), RatFunc::var(Var::new(x(i)))))
        .collect();
    OdeModel::new(
        format!("appendix_n{n}_h{h}"),
        states,
        params,
        Vec::new(),
        rhs,
        outputs,
    )
}
