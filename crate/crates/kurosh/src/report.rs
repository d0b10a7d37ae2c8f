//! JSON report structures for the command-line front end.
//!
//! Field order is declaration order (fixed), maps are sorted, and rationals
//! and possibly-infinite quantities are rendered as strings, so identical
//! inputs produce byte-identical reports. Timings are opt-in (`None` fields
//! are omitted) to keep the default output deterministic.

use num_rational::Ratio;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::amalgam::{AmalgamSpec, LiftedSubgroup, TauClosure};
use crate::extremal::{CaseInstance, SharpnessReport};
use crate::graph::SubgroupGraph;
use crate::group::QStar;
use crate::verify::{BoundCheck, Theorem2Check};

pub const SCHEMA: &str = "kurosh-report/1";

pub fn ratio_string(r: Ratio<i64>) -> String {
    r.to_string()
}

pub fn q_star_string(q: QStar) -> String {
    match q {
        QStar::Finite(v) => v.to_string(),
        QStar::Infinite => "infinity".to_string(),
    }
}

/// Everything the graph of one subgroup determines.
#[derive(Debug, Clone, Serialize)]
pub struct SubgroupSummary {
    pub name: String,
    pub states: usize,
    pub complete: bool,
    /// `null` means infinite index.
    pub index: Option<usize>,
    pub rank: usize,
    pub reduced_rank: usize,
    pub euler_characteristic: i64,
    pub basis: Vec<String>,
}

impl SubgroupSummary {
    pub fn new(name: &str, graph: &SubgroupGraph) -> SubgroupSummary {
        let product = graph.automaton().product();
        let euler = graph.euler();
        SubgroupSummary {
            name: name.to_string(),
            states: graph.automaton().num_states(),
            complete: graph.is_complete(),
            index: graph.index(),
            rank: graph.rank(),
            reduced_rank: graph.reduced_rank(),
            euler_characteristic: euler.chi,
            basis: graph.basis().iter().map(|w| product.display_word(w)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub ambient: String,
    pub subgroup: SubgroupSummary,
    pub factor_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub ambient: String,
    pub subgroup: String,
    pub word: String,
    pub normalized: String,
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub ambient: String,
    pub left: SubgroupSummary,
    pub right: SubgroupSummary,
    pub intersection: SubgroupSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub ambient: String,
    pub q_star: String,
    pub coefficient: String,
    pub left: SubgroupSummary,
    pub right: SubgroupSummary,
    pub intersection: SubgroupSummary,
    /// `r̄(H₁ ∩ H₂)`
    pub lhs: usize,
    /// `coefficient · r̄(H₁) · r̄(H₂)`
    pub rhs: String,
    pub holds: bool,
    pub equality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl BoundReport {
    pub fn new(
        ambient: &str,
        names: [&str; 2],
        check: &BoundCheck,
        graphs: &[SubgroupGraph; 3],
    ) -> BoundReport {
        BoundReport {
            schema: SCHEMA,
            command: "verify-bound",
            ambient: ambient.to_string(),
            q_star: q_star_string(check.q_star),
            coefficient: ratio_string(check.coefficient),
            left: SubgroupSummary::new(names[0], &graphs[0]),
            right: SubgroupSummary::new(names[1], &graphs[1]),
            intersection: SubgroupSummary::new(
                &format!("{} ∩ {}", names[0], names[1]),
                &graphs[2],
            ),
            lhs: check.r_intersection,
            rhs: ratio_string(check.rhs),
            holds: check.holds,
            equality: check.equality,
            elapsed_ms: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub amalgam: String,
    pub edge_order: usize,
    pub q_star: String,
    pub coefficient: String,
    pub left: SubgroupSummary,
    pub right: SubgroupSummary,
    pub left_twists: Vec<usize>,
    pub right_twists: Vec<usize>,
    /// quotient-level intersection
    pub intersection: SubgroupSummary,
    pub quotient_reduced_rank: usize,
    pub tau_image_size: usize,
    pub tau_surjective: bool,
    /// τ-image element → witness word
    pub tau_witnesses: BTreeMap<usize, String>,
    /// exact `r̄(H₁ ∩ H₂)` of the lifted intersection
    pub lhs: usize,
    /// `coefficient · |T| · r̄₁ · r̄₂`
    pub rhs: String,
    pub holds: bool,
    pub equality: bool,
    pub normal_and_covering: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indices_multiply: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Theorem2Report {
    pub fn new(
        amalgam_name: &str,
        am: &AmalgamSpec,
        names: [&str; 2],
        lifted: [&LiftedSubgroup; 2],
        check: &Theorem2Check,
        closure: &TauClosure,
    ) -> Theorem2Report {
        let product = am.quotient_product();
        Theorem2Report {
            schema: SCHEMA,
            command: "verify-theorem2",
            amalgam: amalgam_name.to_string(),
            edge_order: check.t_order,
            q_star: q_star_string(check.q_star),
            coefficient: ratio_string(check.coefficient),
            left: SubgroupSummary::new(names[0], lifted[0].graph()),
            right: SubgroupSummary::new(names[1], lifted[1].graph()),
            left_twists: lifted[0].twists().to_vec(),
            right_twists: lifted[1].twists().to_vec(),
            intersection: SubgroupSummary::new(
                &format!("{} ∩ {}", names[0], names[1]),
                &closure.intersection,
            ),
            quotient_reduced_rank: check.quotient_r_intersection,
            tau_image_size: check.tau_image_size,
            tau_surjective: check.tau_surjective,
            tau_witnesses: closure
                .witnesses
                .iter()
                .map(|(t, w)| (*t, product.display_word(w)))
                .collect(),
            lhs: check.r_intersection,
            rhs: ratio_string(check.rhs),
            holds: check.holds,
            equality: check.equality,
            normal_and_covering: check.normal_and_covering,
            indices_multiply: check.indices_multiply,
            elapsed_ms: None,
        }
    }

    pub fn violation(&self) -> bool {
        !self.holds
    }
}

/// The amalgam-lift section of a `paper-case` report.
#[derive(Debug, Clone, Serialize)]
pub struct CaseLiftReport {
    pub amalgam: String,
    pub edge_order: usize,
    pub solved_twists: Vec<usize>,
    /// `τ(w_i)` per distinguished word, in order.
    pub tau_of_words: Vec<usize>,
    pub tau_image_size: usize,
    pub tau_surjective: bool,
    pub quotient_reduced_rank: usize,
    pub lhs: usize,
    pub rhs: String,
    pub holds: bool,
    pub equality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indices_multiply: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PaperCaseReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub case: usize,
    pub n: usize,
    /// Only the first construction takes a prime parameter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub ambient: String,
    pub quotient_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangle_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frontier_size: Option<usize>,
    pub h1: SubgroupSummary,
    pub h2: SubgroupSummary,
    pub intersection: SubgroupSummary,
    pub distinguished_words: Vec<String>,
    pub h1_normal: bool,
    pub covers: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_product_exact: Option<bool>,
    pub words_in_both: bool,
    pub q_star: String,
    pub coefficient: String,
    pub lhs: usize,
    pub rhs: String,
    pub holds: bool,
    pub equality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amalgam: Option<CaseLiftReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl PaperCaseReport {
    pub fn new(
        inst: &CaseInstance,
        sharp: &SharpnessReport,
        graphs: &[SubgroupGraph; 3],
        lift: Option<CaseLiftReport>,
    ) -> PaperCaseReport {
        let product = &inst.product;
        PaperCaseReport {
            schema: SCHEMA,
            command: "paper-case",
            case: inst.case,
            n: inst.n,
            p: (inst.case == 1).then_some(inst.p),
            ambient: product.name(),
            quotient_order: inst.quotient.order(),
            triangle_degree: inst.triangle_degree,
            separation_size: inst.separation_size,
            frontier_size: inst.frontier_size,
            h1: SubgroupSummary::new("H1", &graphs[0]),
            h2: SubgroupSummary::new("H2", &graphs[1]),
            intersection: SubgroupSummary::new("H1 ∩ H2", &graphs[2]),
            distinguished_words: inst.w_words.iter().map(|w| product.display_word(w)).collect(),
            h1_normal: sharp.h1_normal,
            covers: sharp.covers,
            index_product_exact: sharp.index_product_exact,
            words_in_both: sharp.words_in_both,
            q_star: q_star_string(sharp.bound.q_star),
            coefficient: ratio_string(sharp.bound.coefficient),
            lhs: sharp.bound.r_intersection,
            rhs: ratio_string(sharp.bound.rhs),
            holds: sharp.bound.holds,
            equality: sharp.bound.equality,
            amalgam: lift,
            elapsed_ms: None,
        }
    }

    /// Anything that should have held but did not.
    pub fn violation(&self) -> bool {
        !self.holds
            || !self.equality
            || !self.h1_normal
            || !self.covers
            || self.index_product_exact == Some(false)
            || !self.words_in_both
            || self
                .amalgam
                .as_ref()
                .is_some_and(|a| !a.holds || !a.equality || !a.tau_surjective)
    }
}

/// Wrapper for `paper-case --all`.
#[derive(Debug, Clone, Serialize)]
pub struct AllCasesReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub cases: Vec<PaperCaseReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Serialize any report to its canonical textual form.
pub fn render<T: Serialize>(report: &T) -> crate::error::Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}
