//! Multi-experiment identifiability: the field of IO-equation coefficients
//! and the number of experiments sufficient to identify it.

use crate::error::Result;
use crate::fields::FieldDesc;
use crate::io_elim::IoEquations;
use crate::model::OdeModel;
use crate::wronskian::{wronskian_ranks, RankMethod};

#[derive(Debug, Clone)]
pub struct MultiExpReport {
    pub field: FieldDesc,
    /// `(s_i, r_i)` per equation.
    pub pairs: Vec<(usize, usize)>,
    pub bound: usize,
}

/// Field generated by all nonconstant IO coefficients.
pub fn multiexp_field(eqs: &IoEquations) -> FieldDesc {
    let gens = eqs
        .decompose()
        .into_iter()
        .flat_map(|d| d.coeffs)
        .collect();
    FieldDesc::new(eqs.params().to_vec(), gens)
}

/// `max_i (s_i - r_i + 1)`, at least 1.
pub fn bound_from_pairs(pairs: &[(usize, usize)]) -> usize {
    pairs
        .iter()
        .map(|&(s, r)| s - r.min(s) + 1)
        .max()
        .unwrap_or(1)
}

pub fn experiment_bound(eqs: &IoEquations, m: &OdeModel, method: RankMethod) -> Result<MultiExpReport> {
    let ranks = wronskian_ranks(eqs, m, method)?;
    let pairs: Vec<(usize, usize)> = eqs
        .decompose()
        .iter()
        .zip(ranks)
        .map(|(d, r)| (d.s(), r))
        .collect();
    Ok(MultiExpReport {
        field: multiexp_field(eqs),
        bound: bound_from_pairs(&pairs),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_convention() {
        assert_eq!(bound_from_pairs(&[(3, 2), (2, 2), (0, 0), (0, 0)]), 2);
        assert_eq!(bound_from_pairs(&[(0, 0)]), 1);
        assert_eq!(bound_from_pairs(&[]), 1);
    }
}
