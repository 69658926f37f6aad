//! Shared fixtures, strategies and property checks for the integration
//! suites. Each check returns `Err` with a message on violation so it can be
//! driven either by `proptest!` or by a plain `TestRunner`.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Duration;

use ident_core::algebra::groebner::leading_monomial;
use ident_core::algebra::{
    groebner, normal_form, rank_probabilistic, rank_symbolic, rat, saturate, Budget, Field, Matrix,
    Monomial, Poly, RatFunc, RfPoly, TermOrder, Var,
};
use ident_core::diff::diffpoly::derive;
use ident_core::diff::ritt::{is_reduced_wrt_set, reduction_defect};
use ident_core::diff::{ritt_reduce, AutoreducedSet, Ranking};
use ident_core::fields::{fields_equal, intersect, member, FieldDesc};
use ident_core::io_elim::{io_equations, IoEquations, IoOptions};
use ident_core::model::{copy_name, gen_appendix, lie_derivative, parse_model, replicate, OdeModel};
use ident_core::multi_exp::multiexp_field;
use ident_core::pipeline::{analyze, Options, Stage};
use ident_core::wronskian::{f_field, wronskian};
use proptest::prelude::*;

pub fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("models")
        .join(format!("{name}.model"))
}

pub fn load(name: &str) -> OdeModel {
    let text = std::fs::read_to_string(model_path(name)).expect("model file");
    parse_model(&text).expect("model parses")
}

pub fn rf(text: &str, m: &OdeModel) -> RatFunc {
    let allowed = m.params().iter().cloned().collect();
    ident_core::model::parse_expr(text, &allowed).expect("expression parses")
}

/// Elimination ranking that keeps the slow-fast model at desk scale.
pub const SLOW_FAST_RANKING: &str = "y2,y1,y3,y4";

pub fn options(ranking: Option<&str>) -> Options {
    Options {
        io: IoOptions {
            ranking: ranking.map(|r| Ranking::parse(r).expect("ranking parses")),
            ..Default::default()
        },
        timing: false,
        ..Default::default()
    }
}

/// A model with the rankings it is analyzed under; `None` is the default.
pub struct Case {
    pub label: String,
    pub model: OdeModel,
    pub rankings: Vec<Option<String>>,
}

fn reversed_orderly(m: &OdeModel) -> Option<String> {
    let outs = m.output_names();
    if outs.len() < 2 || !m.inputs().is_empty() {
        return None;
    }
    Some(outs.iter().rev().cloned().collect::<Vec<_>>().join("|"))
}

pub fn corpus() -> Vec<Case> {
    let mut out = Vec::new();
    let named: &[(&str, &[&str])] = &[
        ("two_compartment", &[]),
        ("slow_fast", &[SLOW_FAST_RANKING, "y2,y1,y4,y3"]),
        ("linear_obs", &["y2,y1", "y1,y2"]),
        ("constant_pair", &["y2,y1", "y1,y2"]),
        ("theta", &["y2,y1", "y1,y2"]),
        ("forced_decay", &["y|u"]),
        ("michaelis_menten", &[]),
    ];
    for (name, extra) in named {
        let model = load(name);
        let mut rankings: Vec<Option<String>> = Vec::new();
        if *name != "slow_fast" {
            rankings.push(None);
            rankings.extend(reversed_orderly(&model).map(Some));
        }
        rankings.extend(extra.iter().map(|r| Some(r.to_string())));
        out.push(Case {
            label: name.to_string(),
            model,
            rankings,
        });
    }
    for (n, h) in [(2, 1), (2, 2), (3, 2), (3, 3)] {
        let model = gen_appendix(n, h).expect("appendix model");
        let mut rankings = vec![None];
        rankings.extend(reversed_orderly(&model).map(Some));
        out.push(Case {
            label: format!("appendix({n},{h})"),
            model,
            rankings,
        });
    }
    out
}

pub fn equations(m: &OdeModel, ranking: Option<&str>) -> IoEquations {
    io_equations(m, &options(ranking).io).expect("input-output equations")
}

fn fail(msg: impl Into<String>) -> TestCaseError {
    TestCaseError::fail(msg.into())
}

// ---------------------------------------------------------------- strategies

const XYZ: [&str; 3] = ["x", "y", "z"];

/// Polynomials over ℚ in `x, y, z` with up to four terms of degree ≤ 3.
pub fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -4i64..5), 1..4).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|((a, b, c), k)| {
            let m = Monomial::from_pairs(
                [(a, 0), (b, 1), (c, 2)]
                    .into_iter()
                    .map(|(e, i)| (Var::new(XYZ[i]), e)),
            );
            (m, rat(k))
        }))
    })
}

pub fn nonzero_poly() -> impl Strategy<Value = Poly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

/// Differential polynomials in jets of `names` (order ≤ `max_order`) with
/// coefficients in `params`.
pub fn jet_poly(
    names: &'static [&'static str],
    params: &'static [&'static str],
    max_order: u32,
) -> impl Strategy<Value = Poly> {
    let factor = (0..names.len() + params.len(), 0..=max_order, 1u32..3);
    let term = (prop::collection::vec(factor, 0..3), -3i64..4);
    prop::collection::vec(term, 1..4).prop_map(move |terms| {
        Poly::from_terms(terms.into_iter().map(|(fs, k)| {
            let m = Monomial::from_pairs(fs.into_iter().map(|(i, o, e)| {
                if i < names.len() {
                    (Var::jet(names[i], o), e)
                } else {
                    (Var::new(params[i - names.len()]), e)
                }
            }));
            (m, rat(k))
        }))
    })
}

pub fn rational_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..4, c), r)
    })
}

/// Square matrices over ℚ(a, b), frequently rank deficient: a random subset
/// of rows is replaced by combinations of the others.
pub fn function_matrix() -> impl Strategy<Value = Matrix<RatFunc>> {
    let entry = prop::collection::vec(((0u32..3, 0u32..2), -3i64..4), 0..3);
    (1usize..4).prop_flat_map(move |n| {
        (
            prop::collection::vec(prop::collection::vec(entry.clone(), n), n),
            prop::collection::vec(any::<bool>(), n),
            -2i64..3,
        )
            .prop_map(move |(rows, dep, k)| {
                let mut m: Vec<Vec<RatFunc>> = rows
                    .into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|terms| {
                                RatFunc::from_poly(Poly::from_terms(terms.into_iter().map(
                                    |((ea, eb), c)| {
                                        let mono = Monomial::from_pairs([
                                            (Var::new("a"), ea),
                                            (Var::new("b"), eb),
                                        ]);
                                        (mono, rat(c))
                                    },
                                )))
                            })
                            .collect()
                    })
                    .collect();
                let mult = RatFunc::from_poly(&Poly::var(Var::new("a")) + &Poly::from_i64(k));
                for i in 1..n {
                    if dep[i] {
                        let row: Vec<RatFunc> = (0..n)
                            .map(|j| m[0][j].fmul(&mult).fadd(&m[i - 1][j]))
                            .collect();
                        m[i] = row;
                    }
                }
                Matrix::from_rows(m)
            })
    })
}

// ------------------------------------------------------------ algebra checks

fn gb_budget() -> Budget {
    Budget::default().with_timeout(Duration::from_secs(5))
}

fn xyz_order() -> TermOrder {
    TermOrder::drl(XYZ.iter().map(|v| Var::new(*v)).collect())
}

fn s_poly(f: &Poly, g: &Poly, o: &TermOrder) -> Poly {
    let (lf, lg) = (
        leading_monomial(f, o).expect("nonzero"),
        leading_monomial(g, o).expect("nonzero"),
    );
    let l = lf.mul(&lg).div(&lf.gcd(&lg)).expect("lcm");
    let cf = f.coeff(&lf).finv();
    let cg = g.coeff(&lg).finv();
    &f.mul_monomial(&l.div(&lf).expect("divides"), &cf)
        - &g.mul_monomial(&l.div(&lg).expect("divides"), &cg)
}

/// Membership of generators, the Buchberger criterion, reducedness and
/// idempotence of a Gröbner basis.
pub fn check_groebner(gens: &[Poly], mult: &Poly) -> Result<(), TestCaseError> {
    let o = xyz_order();
    let Ok(gb) = groebner(gens, &o, &gb_budget()) else {
        return Err(TestCaseError::reject("budget"));
    };
    for g in gens {
        if !normal_form(g, &gb, &o).is_zero() {
            return Err(fail(format!("generator {g} not in its own ideal")));
        }
    }
    let combo = gens
        .iter()
        .fold(Poly::zero(), |acc, g| &acc + &(g * mult));
    if !normal_form(&combo, &gb, &o).is_zero() {
        return Err(fail("ideal combination does not reduce to zero"));
    }
    for (i, f) in gb.iter().enumerate() {
        for g in &gb[i + 1..] {
            if !normal_form(&s_poly(f, g, &o), &gb, &o).is_zero() {
                return Err(fail(format!("S-polynomial of {f} and {g} is nonzero")));
            }
        }
        let rest: Vec<Poly> = gb.iter().filter(|h| *h != f).cloned().collect();
        if normal_form(f, &rest, &o) != *f {
            return Err(fail(format!("basis element {f} is not reduced")));
        }
        if !f.coeff(&leading_monomial(f, &o).expect("nonzero")).is_one() {
            return Err(fail(format!("basis element {f} is not monic")));
        }
    }
    let again = groebner(&gb, &o, &gb_budget()).map_err(|e| fail(e.to_string()))?;
    if again != gb {
        return Err(fail("recomputing the basis changed it"));
    }
    Ok(())
}

/// `I ⊆ I : f^∞`, `f·h ∈ I ⇒ h ∈ I : f^∞`, and saturating twice changes nothing.
pub fn check_saturate(gens: &[Poly], f: &Poly) -> Result<(), TestCaseError> {
    let o = xyz_order();
    let b = gb_budget();
    let Ok(sat) = saturate(gens, f, &b) else {
        return Err(TestCaseError::reject("budget"));
    };
    let Ok(sat_gb) = groebner(&sat, &o, &b) else {
        return Err(TestCaseError::reject("budget"));
    };
    for g in gens {
        if !normal_form(g, &sat_gb, &o).is_zero() {
            return Err(fail(format!("{g} missing from the saturation")));
        }
    }
    let fg: Vec<Poly> = gens.iter().map(|g| g * f).collect();
    let Ok(sat_fg) = saturate(&fg, f, &b) else {
        return Err(TestCaseError::reject("budget"));
    };
    let Ok(sat_fg_gb) = groebner(&sat_fg, &o, &b) else {
        return Err(TestCaseError::reject("budget"));
    };
    for g in gens {
        if !normal_form(g, &sat_fg_gb, &o).is_zero() {
            return Err(fail(format!("{g} not recovered from f*{g}")));
        }
    }
    let Ok(twice) = saturate(&sat, f, &b) else {
        return Err(TestCaseError::reject("budget"));
    };
    let twice_gb = groebner(&twice, &o, &b).map_err(|e| fail(e.to_string()))?;
    if twice_gb != sat_gb {
        return Err(fail("saturation is not idempotent"));
    }
    Ok(())
}

/// RREF is idempotent, has unit pivot columns, preserves the row space and
/// reports the rank through its pivots.
pub fn check_rref(rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let a = Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect(),
    );
    let (r, piv) = a.rref();
    let (r2, piv2) = r.rref();
    if r2 != r || piv2 != piv {
        return Err(fail("rref is not idempotent"));
    }
    for (i, &c) in piv.iter().enumerate() {
        if i > 0 && piv[i - 1] >= c {
            return Err(fail("pivots not increasing"));
        }
        for k in 0..r.rows() {
            let want = if k == i { rat(1) } else { rat(0) };
            if *r.get(k, c) != want {
                return Err(fail("pivot column is not a unit vector"));
            }
        }
    }
    for k in piv.len()..r.rows() {
        if r.row(k).iter().any(|x| !Field::is_zero(x)) {
            return Err(fail("nonzero row below the pivots"));
        }
    }
    let mut stacked = a.to_rows();
    stacked.extend(r.to_rows());
    if Matrix::from_rows(stacked).rank() != piv.len() || a.rank() != piv.len() {
        return Err(fail("row space changed"));
    }
    Ok(())
}

pub fn check_rank_methods(m: &Matrix<RatFunc>, seed: u64) -> Result<(), TestCaseError> {
    let s = rank_symbolic(m);
    let p = rank_probabilistic(m, seed, 3).map_err(|e| fail(e.to_string()))?;
    if s != p {
        return Err(fail(format!("symbolic rank {s} but probabilistic rank {p}")));
    }
    Ok(())
}

/// Totality, antisymmetry, transitivity and compatibility with derivation.
pub fn check_ranking(r: &Ranking, vs: &[Var; 3], k: u32) -> Result<(), TestCaseError> {
    for a in vs {
        if r.cmp(a, &a.shifted(1)) != std::cmp::Ordering::Less {
            return Err(fail(format!("{a} is not below its derivative")));
        }
        for b in vs {
            if r.cmp(a, b) != r.cmp(b, a).reverse() {
                return Err(fail(format!("{a} and {b} compare asymmetrically")));
            }
            if (r.cmp(a, b) == std::cmp::Ordering::Equal) != (a == b) {
                return Err(fail(format!("{a} and {b} tie")));
            }
            if r.cmp(a, b) != r.cmp(&a.shifted(k), &b.shifted(k)) {
                return Err(fail(format!("order of {a} and {b} not preserved by derivation")));
            }
            for c in vs {
                use std::cmp::Ordering::Less;
                if r.cmp(a, b) == Less && r.cmp(b, c) == Less && r.cmp(a, c) != Less {
                    return Err(fail("not transitive"));
                }
            }
        }
    }
    Ok(())
}

pub fn check_leibniz(f: &Poly, g: &Poly) -> Result<(), TestCaseError> {
    let r = Ranking::parse("y1|y2").expect("ranking");
    let d = |p: &Poly| derive(p, &r, None).expect("uncapped");
    let lhs = d(&(f * g));
    let rhs = &(&d(f) * g) + &(f * &d(g));
    if lhs != rhs {
        return Err(fail("derivation is not a derivation"));
    }
    let sum = d(&(f + g));
    if sum != &d(f) + &d(g) {
        return Err(fail("derivation is not additive"));
    }
    Ok(())
}

/// The slow-fast characteristic set, computed once.
pub fn slow_fast_set() -> &'static AutoreducedSet {
    static SET: OnceLock<AutoreducedSet> = OnceLock::new();
    SET.get_or_init(|| {
        equations(&load("slow_fast"), Some(SLOW_FAST_RANKING)).as_autoreduced()
    })
}

/// `h·f = remainder + Σ q δ^k A_i` exactly, and the remainder is reduced.
pub fn check_ritt(f: &Poly, a: &AutoreducedSet) -> Result<(), TestCaseError> {
    let red = ritt_reduce(f, a);
    if !reduction_defect(f, a, &red).is_zero() {
        return Err(fail(format!("reduction of {f} breaks the congruence")));
    }
    if !is_reduced_wrt_set(&red.remainder, a) {
        return Err(fail(format!("remainder of {f} is not reduced")));
    }
    if red.hpower.is_zero() {
        return Err(fail("zero multiplier"));
    }
    Ok(())
}

// ------------------------------------------------------------- corpus checks

/// Each equation's Wronskian annihilates its coefficient vector.
pub fn check_wronskian_kernel(case: &Case) -> Result<(), String> {
    let r = case.rankings[0].as_deref();
    let eqs = equations(&case.model, r);
    let (_, rep) = f_field(&eqs, &case.model).map_err(|e| e.to_string())?;
    for (p, w) in eqs.monic().iter().zip(&rep.equations) {
        let coeffs: Vec<RatFunc> = w
            .monomials
            .iter()
            .map(|mono| {
                let (m, _) = mono.leading_term().expect("monomial");
                p.coeff(m)
            })
            .collect();
        if w.matrix.mul_vec(&coeffs).iter().any(|x| !Field::is_zero(x)) {
            return Err(format!("{}: W·c ≠ 0 for {p}", case.label));
        }
    }
    Ok(())
}

/// Generators of `F(p̄)` have zero total derivative along the model.
pub fn check_constancy(case: &Case) -> Result<(), String> {
    let eqs = equations(&case.model, case.rankings[0].as_deref());
    let (f, _) = f_field(&eqs, &case.model).map_err(|e| e.to_string())?;
    for g in f.gens() {
        if !Field::is_zero(&lie_derivative(&case.model, g)) {
            return Err(format!("{}: generator {g} is not constant", case.label));
        }
    }
    Ok(())
}

pub fn check_corpus_ranks(case: &Case, seed: u64) -> Result<(), String> {
    let eqs = equations(&case.model, case.rankings[0].as_deref());
    let (_, rep) = f_field(&eqs, &case.model).map_err(|e| e.to_string())?;
    for w in &rep.equations {
        let p = rank_probabilistic(&w.matrix, seed, 3).map_err(|e| e.to_string())?;
        if p != rank_symbolic(&w.matrix) || p != w.rank() {
            return Err(format!("{}: rank methods disagree", case.label));
        }
    }
    Ok(())
}

/// The single-experiment field does not depend on the ranking; every run
/// also passes the built-in intersection self-checks.
pub fn check_ranking_invariance(case: &Case) -> Result<(), String> {
    let mut first: Option<FieldDesc> = None;
    for r in &case.rankings {
        let a = analyze(&case.model, &options(r.as_deref()), Stage::Ident)
            .map_err(|e| format!("{} under {r:?}: {e}", case.label))?;
        let single = a.single.expect("computed");
        match &first {
            None => first = Some(single),
            Some(f0) => {
                if !fields_equal(f0, &single, &Budget::default()).map_err(|e| e.to_string())? {
                    return Err(format!("{}: field changes under {r:?}", case.label));
                }
            }
        }
    }
    Ok(())
}

fn replicated_ranking(base: &str, n: usize) -> String {
    base.split(',')
        .map(|y| {
            (1..=n)
                .map(|i| copy_name(y, i))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// The equations of `Σ_N` are the copies of those of the model, so the
/// coefficient field does not move.
pub fn check_replication(name: &str, ranking: &str, n: usize) -> Result<(), String> {
    let m = load(name);
    let base = equations(&m, Some(ranking));
    let mn = replicate(&m, n).map_err(|e| e.to_string())?;
    let rn = replicated_ranking(ranking, n);
    let eqs_n = equations(&mn, Some(&rn));
    if eqs_n.len() != n * base.len() {
        return Err(format!("{name}: Σ_{n} has {} equations", eqs_n.len()));
    }
    for i in 1..=n {
        for p in base.monic() {
            let renamed: RfPoly = p.map_vars(|v| Var::jet(copy_name(v.name(), i), v.order()));
            if !eqs_n.monic().contains(&renamed) {
                return Err(format!("{name}: copy {i} of {p} missing from Σ_{n}"));
            }
        }
    }
    let (f1, fn_) = (multiexp_field(&base), multiexp_field(&eqs_n));
    let amb: Vec<Var> = m.param_vars();
    let same = fields_equal(&f1.with_ambient(&amb), &fn_.with_ambient(&amb), &Budget::default())
        .map_err(|e| e.to_string())?;
    if !same {
        return Err(format!("{name}: coefficient field of Σ_{n} differs"));
    }
    Ok(())
}

/// `L1 ∩ L2 = L2 ∩ L1` for the parameter field and `F(p̄)`.
pub fn check_intersect_symmetry(case: &Case) -> Result<(), String> {
    let eqs = equations(&case.model, case.rankings[0].as_deref());
    let (f, _) = f_field(&eqs, &case.model).map_err(|e| e.to_string())?;
    let params = FieldDesc::from_vars(case.model.param_vars());
    let b = Budget::default();
    let (a, _) = intersect(&params, &f, &b).map_err(|e| e.to_string())?;
    let (c, _) = intersect(&f, &params, &b).map_err(|e| e.to_string())?;
    if !fields_equal(&a, &c, &b).map_err(|e| e.to_string())? {
        return Err(format!("{}: intersection depends on argument order", case.label));
    }
    Ok(())
}

/// Scaling one monomial of an equation by a nonzero constant changes
/// neither the Wronskian rank nor the field of its RREF entries.
pub fn check_scale_invariance(case: &Case, col: usize, c: i64) -> Result<(), String> {
    let eqs = equations(&case.model, case.rankings[0].as_deref());
    let (f, rep) = f_field(&eqs, &case.model).map_err(|e| e.to_string())?;
    let b = Budget::default();
    for w in &rep.equations {
        let mut mono = w.monomials.clone();
        let j = col % mono.len();
        mono[j] = mono[j].scale(&rat(c));
        let cap = mono
            .iter()
            .flat_map(|p| p.vars())
            .map(|v| v.order())
            .max()
            .unwrap_or(0)
            + mono.len() as u32;
        let ws = wronskian(&mono, &case.model, cap).map_err(|e| e.to_string())?;
        let (rref, piv) = ws.rref();
        if piv.len() != w.rank() {
            return Err(format!("{}: scaling changed the rank", case.label));
        }
        let scaled = FieldDesc::new(f.ambient().to_vec(), Matrix::nonleading_entries(&rref, &piv));
        let orig = FieldDesc::new(f.ambient().to_vec(), w.nonleading.clone());
        if !fields_equal(&scaled, &orig, &b).map_err(|e| e.to_string())? {
            return Err(format!("{}: scaling changed the field", case.label));
        }
    }
    Ok(())
}

/// Single-experiment field of `Σ_N`, with `N` the computed bound, equals the
/// coefficient field of the model.
pub fn check_replication_consistency(name: &str, ranking: &str) -> Result<(), String> {
    let m = load(name);
    let a = analyze(&m, &options(Some(ranking)), Stage::Multi).map_err(|e| e.to_string())?;
    let mx = a.multi.expect("computed");
    let mn = replicate(&m, mx.bound).map_err(|e| e.to_string())?;
    let rn = replicated_ranking(ranking, mx.bound);
    let an = analyze(&mn, &options(Some(&rn)), Stage::Ident).map_err(|e| e.to_string())?;
    let single = an.single.expect("computed");
    let amb = m.param_vars();
    let same = fields_equal(&single.with_ambient(&amb), &mx.field.with_ambient(&amb), &Budget::default())
        .map_err(|e| e.to_string())?;
    if !same {
        return Err(format!("{name}: Σ_{} gives {single}, expected {}", mx.bound, mx.field));
    }
    Ok(())
}

/// For `n - h = 1`, one experiment misses some coefficient.
pub fn check_appendix_sharpness(n: usize, h: usize) -> Result<(), String> {
    let m = gen_appendix(n, h).map_err(|e| e.to_string())?;
    let m1 = replicate(&m, n - h).map_err(|e| e.to_string())?;
    let a = analyze(&m1, &options(None), Stage::Ident).map_err(|e| e.to_string())?;
    let single = a.single.expect("computed");
    let mf = multiexp_field(&a.eqs);
    let b = Budget::default();
    for g in mf.gens() {
        if !member(g, &single, &b).map_err(|e| e.to_string())? {
            return Ok(());
        }
    }
    Err(format!("appendix({n},{h}): one experiment already identifies {mf}"))
}

/// `h ∈ L` and `L ⊆ L'` imply `h ∈ L'`.
pub fn check_member_monotone(h: &RatFunc, extra: &RatFunc) -> Result<(), TestCaseError> {
    let amb: Vec<Var> = ["k1", "k2"].iter().map(|v| Var::new(*v)).collect();
    let k = |s: &str| RatFunc::var(Var::new(s));
    let l = FieldDesc::new(amb.clone(), vec![k("k1").fmul(&k("k2")), k("k1").fadd(&k("k2"))]);
    let mut bigger = l.gens().to_vec();
    bigger.push(extra.clone());
    let l2 = FieldDesc::new(amb, bigger);
    let b = gb_budget();
    let Ok(inside) = member(h, &l, &b) else {
        return Err(TestCaseError::reject("budget"));
    };
    if inside {
        let Ok(still) = member(h, &l2, &b) else {
            return Err(TestCaseError::reject("budget"));
        };
        if !still {
            return Err(fail(format!("{h} left the field after adding {extra}")));
        }
    }
    Ok(())
}

/// Rational functions of `k1, k2`, mostly symmetric ones.
pub fn k_function() -> impl Strategy<Value = RatFunc> {
    let poly = prop::collection::vec(((0u32..3, 0u32..3), -3i64..4), 1..3);
    (poly.clone(), poly, any::<bool>()).prop_map(|(n, d, sym)| {
        let build = |terms: Vec<((u32, u32), i64)>| {
            let mut p = Poly::zero();
            for ((a, b), c) in terms {
                let mono = |x: u32, y: u32| {
                    Poly::term(
                        Monomial::from_pairs([(Var::new("k1"), x), (Var::new("k2"), y)]),
                        rat(c),
                    )
                };
                p = &p + &mono(a, b);
                if sym {
                    p = &p + &mono(b, a);
                }
            }
            p
        };
        let (num, den) = (build(n), build(d));
        if den.is_zero() {
            RatFunc::from_poly(num)
        } else {
            RatFunc::new(num, den)
        }
    })
}
