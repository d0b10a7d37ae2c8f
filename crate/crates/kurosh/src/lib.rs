//! Subgroup graphs, ranks and intersection bounds in free products of finite
//! groups and in amalgamated free products with a finite normal amalgamated
//! subgroup.
//!
//! The crate revolves around one data structure: the *subgroup graph* of a
//! finitely generated subgroup that contains no conjugate of a nontrivial
//! factor element (here called *factor-free*). It is a pointed, partial,
//! deterministic automaton whose transitions are labelled by nontrivial
//! elements of the free factors, folded until deterministic and saturated.
//! From it the crate derives:
//!
//! * exact reduced rank `r̄(H) = max(0, rank(H) - 1)` via an Euler
//!   characteristic, plus a free basis and membership tests;
//! * intersections of subgroups via a product (pullback) construction;
//! * verified inequalities bounding `r̄(H₁ ∩ H₂)` in terms of
//!   `r̄(H₁)·r̄(H₂)`, both over plain free products and over amalgamated
//!   products with finite normal amalgamated subgroup;
//! * machine-checked extremal families showing the bounds are sharp.
//!
//! Entry points: [`word::FreeProduct`] to fix an ambient product,
//! [`automaton::Automaton::fold`] to build a subgroup graph from generators,
//! [`graph::SubgroupGraph`] for ranks/bases, [`amalgam::AmalgamSpec`] for the
//! amalgamated setting, and [`extremal`] for the sharpness families.

pub mod amalgam;
pub mod automaton;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod group;
pub mod input;
pub mod parse;
pub mod report;
pub mod verify;
pub mod word;

pub use amalgam::{tau, tau_closure, AmalgamElement, AmalgamSpec, LiftedSubgroup, TauClosure};
pub use automaton::{brute_force_elements, product_covers_group, Automaton};
pub use error::{Error, Result};
pub use extremal::{build_case, lift_case, triangle_quotient_search, verify_sharpness, CaseInstance, LiftedCase, SharpnessReport, TriangleQuotient};
pub use graph::{Euler, FrontierSlot, Secondary, SubgroupGraph};
pub use group::{coefficient, find_isomorphism, q_star, FiniteGroup, GroupHom, QStar, Quotient};
pub use input::{InputDoc, Session, SubgroupEntry};
pub use verify::{intersection_bound, theorem2, BoundCheck, Theorem2Check};
pub use word::{FreeProduct, Letter, Word};
