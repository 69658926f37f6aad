//! End-to-end analysis of a model and its serialized report.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{intersect, member, FieldDesc, IntersectTrace};
use crate::io_elim::{io_equations, IoEquations, IoOptions};
use crate::model::{parse_expr, OdeModel};
use crate::multi_exp::{experiment_bound, MultiExpReport};
use crate::wronskian::{f_field, RankMethod, WronskianReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Input-output equations only.
    Io,
    /// Input-output equations and the multi-experiment analysis.
    Multi,
    /// Everything.
    Ident,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub io: IoOptions,
    pub method: RankMethod,
    /// Record wall-clock time in the report; off gives byte-stable output.
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            io: IoOptions::default(),
            method: RankMethod::Symbolic,
            timing: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub model: String,
    pub eqs: IoEquations,
    pub f_field: Option<FieldDesc>,
    pub wronskians: Option<WronskianReport>,
    pub single: Option<FieldDesc>,
    pub trace: Option<IntersectTrace>,
    pub multi: Option<MultiExpReport>,
    pub ms: u64,
}

pub fn analyze(m: &OdeModel, opts: &Options, stage: Stage) -> Result<Analysis> {
    let start = Instant::now();
    let eqs = io_equations(m, &opts.io)?;
    let mut out = Analysis {
        model: m.name().to_string(),
        eqs,
        f_field: None,
        wronskians: None,
        single: None,
        trace: None,
        multi: None,
        ms: 0,
    };
    if stage == Stage::Ident {
        let (f, w) = f_field(&out.eqs, m)?;
        let params = FieldDesc::from_vars(m.param_vars());
        let (single, trace) = intersect(&params, &f, &opts.io.budget)?;
        out.f_field = Some(f);
        out.wronskians = Some(w);
        out.single = Some(single);
        out.trace = Some(trace);
    }
    if stage != Stage::Io {
        out.multi = Some(experiment_bound(&out.eqs, m, opts.method)?);
    }
    if let (Some(s), Some(mx)) = (&out.single, &out.multi) {
        for g in s.gens() {
            if !member(g, &mx.field, &opts.io.budget)? {
                return Err(Error::SelfCheck(format!(
                    "identifiable function {g} missing from the multi-experiment field"
                )));
            }
        }
    }
    if opts.timing {
        out.ms = start.elapsed().as_millis() as u64;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerEquation {
    pub s: usize,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub method: String,
    pub ms: u64,
}

/// Serialized analysis; sections not computed are `null`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentReport {
    pub model: String,
    pub ranking: Vec<String>,
    pub io_equations: Vec<String>,
    pub per_equation: Option<Vec<PerEquation>>,
    pub f_field: Option<Vec<String>>,
    pub single_experiment: Option<Vec<String>>,
    pub multi_experiment: Option<Vec<String>>,
    pub bound: Option<usize>,
    pub meta: Meta,
}

impl IdentReport {
    pub fn new(a: &Analysis, method: RankMethod, seed: u64) -> Self {
        let name = match method {
            RankMethod::Symbolic => "symbolic",
            RankMethod::Probabilistic { .. } => "prob",
        };
        IdentReport {
            model: a.model.clone(),
            ranking: a.eqs.ranking().descriptor(),
            io_equations: a.eqs.printed(),
            per_equation: a.multi.as_ref().map(|m| {
                m.pairs
                    .iter()
                    .map(|&(s, r)| PerEquation { s, r })
                    .collect()
            }),
            f_field: a.f_field.as_ref().map(FieldDesc::gen_strings),
            single_experiment: a.single.as_ref().map(FieldDesc::gen_strings),
            multi_experiment: a.multi.as_ref().map(|m| m.field.gen_strings()),
            bound: a.multi.as_ref().map(|m| m.bound),
            meta: Meta {
                seed,
                method: name.to_string(),
                ms: a.ms,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        fn field(gens: &[String]) -> String {
            if gens.is_empty() {
                return "C".to_string();
            }
            format!("C({})", gens.join(", "))
        }
        let mut s = String::new();
        let _ = writeln!(s, "model: {}", self.model);
        let _ = writeln!(s, "ranking: {}", self.ranking.join(" > "));
        let _ = writeln!(s, "input-output equations:");
        for (i, e) in self.io_equations.iter().enumerate() {
            let _ = write!(s, "  p{} = {}", i + 1, e);
            if let Some(pe) = &self.per_equation {
                let _ = write!(s, "    (s = {}, r = {})", pe[i].s, pe[i].r);
            }
            let _ = writeln!(s);
        }
        if let Some(f) = &self.f_field {
            let _ = writeln!(s, "F(p): {}", field(f));
        }
        if let Some(f) = &self.single_experiment {
            let _ = writeln!(s, "single-experiment identifiable: {}", field(f));
        }
        if let Some(f) = &self.multi_experiment {
            let _ = writeln!(s, "multi-experiment identifiable: {}", field(f));
        }
        if let Some(n) = self.bound {
            let _ = writeln!(s, "experiments sufficient: {n}");
        }
        s
    }
}

/// Whether `expr` (over the parameters) is identifiable from one experiment,
/// or from several when `multi` is set.
pub fn check(m: &OdeModel, expr: &str, multi: bool, opts: &Options) -> Result<bool> {
    let allowed: BTreeSet<String> = m.params().iter().cloned().collect();
    let h = parse_expr(expr, &allowed)?;
    if multi {
        let a = analyze(m, opts, Stage::Multi)?;
        member(&h, &a.multi.expect("computed").field, &opts.io.budget)
    } else {
        let a = analyze(m, opts, Stage::Ident)?;
        member(&h, a.single.as_ref().expect("computed"), &opts.io.budget)
    }
}
