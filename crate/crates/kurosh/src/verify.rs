//! Verified rank inequalities for intersections of factor-free subgroups.
//!
//! Two settings:
//!
//! * **Free products** ([`intersection_bound`]): for factor-free subgroups
//!   `H₁, H₂` of `G₁ ∗ … ∗ G_n`,
//!   `r̄(H₁ ∩ H₂) ≤ (2q*/(q*−2)) · r̄(H₁) · r̄(H₂)`,
//!   where `q*` is the smallest order `≥ 3` of a subgroup of any factor
//!   (coefficient `2` when no such subgroup exists).
//!
//! * **Amalgamated products** ([`theorem2`]): for subgroups of
//!   `G₁ ∗_T G₂` (T finite, normal in both sides) that intersect `T`
//!   trivially, presented as [`LiftedSubgroup`]s,
//!   `r̄(H₁ ∩ H₂) ≤ (2q_f*/(q_f*−2)) · |T| · r̄(H₁) · r̄(H₂)`,
//!   with `q_f*` taken over the quotients `Gᵢ/T`. The left side is exact:
//!   it is `|image(τ)| · r̄(H₁' ∩ H₂')` from the τ-closure.
//!
//! Both checkers compute every quantity exactly and report whether the bound
//! holds and whether it is attained with equality. [`theorem2`] additionally
//! reports the two structural conditions under which equality can occur
//! (`H₁'` normal with `H₁'H₂'` covering the whole quotient product, and `τ`
//! surjective onto `T`) and, when it applies, the exact index factorization
//! `[G' : H₁'∩H₂'] = [G' : H₁'] · [G' : H₂']`.

use num_rational::Ratio;

use crate::amalgam::{tau_closure, AmalgamSpec, LiftedSubgroup, TauClosure};
use crate::automaton::{product_covers_group, Automaton};
use crate::error::{Error, Result};
use crate::graph::SubgroupGraph;
use crate::group::{coefficient, q_star, QStar};

/// Outcome of checking the free-product intersection bound.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub q_star: QStar,
    pub coefficient: Ratio<i64>,
    pub r1: usize,
    pub r2: usize,
    pub r_intersection: usize,
    /// `coefficient · r1 · r2`
    pub rhs: Ratio<i64>,
    pub holds: bool,
    pub equality: bool,
    pub index1: Option<usize>,
    pub index2: Option<usize>,
    pub index_intersection: Option<usize>,
}

/// Check the bound for two factor-free subgroups of the same free product.
/// Returns the check data together with the three subgroup graphs
/// `(H₁, H₂, H₁ ∩ H₂)`.
pub fn intersection_bound(
    a1: &Automaton,
    a2: &Automaton,
) -> Result<(BoundCheck, [SubgroupGraph; 3])> {
    if a1.product() != a2.product() {
        return Err(Error::AmbientMismatch);
    }
    let g1 = SubgroupGraph::new(a1)?;
    let g2 = SubgroupGraph::new(a2)?;
    let gi = SubgroupGraph::new(&a1.intersect(a2)?)?;
    let factors: Vec<_> = (0..a1.product().num_factors()).map(|f| a1.product().factor(f)).collect();
    let q = q_star(&factors)?;
    let coeff = coefficient(q)?;
    let (r1, r2, ri) = (g1.reduced_rank(), g2.reduced_rank(), gi.reduced_rank());
    let rhs = coeff * Ratio::from_integer((r1 * r2) as i64);
    let lhs = Ratio::from_integer(ri as i64);
    let check = BoundCheck {
        q_star: q,
        coefficient: coeff,
        r1,
        r2,
        r_intersection: ri,
        rhs,
        holds: lhs <= rhs,
        equality: lhs == rhs,
        index1: g1.index(),
        index2: g2.index(),
        index_intersection: gi.index(),
    };
    Ok((check, [g1, g2, gi]))
}

/// Outcome of checking the amalgamated-product intersection bound.
#[derive(Debug, Clone)]
pub struct Theorem2Check {
    pub t_order: usize,
    /// `q_f*`, over the quotient groups `Gᵢ/T`
    pub q_star: QStar,
    pub coefficient: Ratio<i64>,
    pub r1: usize,
    pub r2: usize,
    /// exact `r̄(H₁ ∩ H₂) = |image(τ)| · r̄(H₁' ∩ H₂')`
    pub r_intersection: usize,
    /// `coefficient · |T| · r1 · r2`
    pub rhs: Ratio<i64>,
    pub holds: bool,
    pub equality: bool,
    pub tau_image_size: usize,
    pub quotient_r_intersection: usize,
    /// indices of `H₁'`, `H₂'`, `H₁' ∩ H₂'` in the quotient product
    pub index1: Option<usize>,
    pub index2: Option<usize>,
    pub index_intersection: Option<usize>,
    /// `H₁'` is normal in the quotient product and `H₁'H₂'` covers it
    pub normal_and_covering: bool,
    /// `image(τ) = T`
    pub tau_surjective: bool,
    /// when `normal_and_covering` and all indices are finite:
    /// `index_intersection == index1 · index2`
    pub indices_multiply: Option<bool>,
}

/// Check the amalgamated bound for two lifted subgroups. Returns the check
/// data together with the τ-closure (which carries the intersection graph).
pub fn theorem2(
    am: &AmalgamSpec,
    h1: &LiftedSubgroup,
    h2: &LiftedSubgroup,
) -> Result<(Theorem2Check, TauClosure)> {
    let tc = tau_closure(am, h1, h2)?;
    let q = q_star(&[&am.quotient(0).group, &am.quotient(1).group])?;
    let coeff = coefficient(q)?;
    let t_order = am.t().order();
    let (r1, r2) = (h1.graph().reduced_rank(), h2.graph().reduced_rank());
    let ri = tc.intersection_reduced_rank();
    let rhs = coeff * Ratio::from_integer((t_order * r1 * r2) as i64);
    let lhs = Ratio::from_integer(ri as i64);

    let a1 = h1.graph().automaton();
    let normal_and_covering = a1.is_complete()
        && a1.is_normal(h1.graph().basis())?
        && product_covers_group(a1, h2.graph().basis())?;
    let (index1, index2) = (h1.graph().index(), h2.graph().index());
    let index_intersection = tc.intersection.index();
    let indices_multiply = match (normal_and_covering, index1, index2, index_intersection) {
        (true, Some(i1), Some(i2), Some(ii)) => Some(ii == i1 * i2),
        _ => None,
    };

    let check = Theorem2Check {
        t_order,
        q_star: q,
        coefficient: coeff,
        r1,
        r2,
        r_intersection: ri,
        rhs,
        holds: lhs <= rhs,
        equality: lhs == rhs,
        tau_image_size: tc.image.len(),
        quotient_r_intersection: tc.intersection.reduced_rank(),
        index1,
        index2,
        index_intersection,
        normal_and_covering,
        tau_surjective: tc.image.len() == t_order,
        indices_multiply,
    };
    Ok((check, tc))
}
