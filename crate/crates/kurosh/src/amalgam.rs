//! Amalgamated free products `G₁ ∗_T G₂` with `T` finite and normal in both
//! factors, and subgroups of them presented as *lifts* of factor-free
//! subgroups of the quotient free product `(G₁/T) ∗ (G₂/T)`.
//!
//! # Normal forms
//!
//! Fix right transversals of `T` in each `Gᵢ` by taking the smallest element
//! of each coset. Every element of `G₁ ∗_T G₂` then has a unique normal form
//! `r₁ r₂ … r_k · t` where the `rᵢ` are non-`T` transversal representatives of
//! alternating sides and `t ∈ T`. [`AmalgamSpec`] implements multiplication,
//! inversion, projection `φ` to the quotient free product (drop the tail, map
//! representatives to their cosets) and the canonical section `σ` (take
//! representatives, identity tail).
//!
//! # Lifted subgroups and τ
//!
//! A subgroup `H ≤ G` with `H ∩ T = 1` projects isomorphically to a subgroup
//! `H' = φ(H)` of the quotient product; conversely `H` is recovered from `H'`
//! by choosing one *twist* `t_k ∈ T` per free-basis element `w_k` of `H'` and
//! lifting `w_k ↦ σ(w_k)·t_k` ([`LiftedSubgroup`]).
//!
//! For two lifted subgroups the defect map `τ(u) = lift₂(u)⁻¹·lift₁(u) ∈ T`,
//! defined on `H₁' ∩ H₂'`, satisfies the crossed-homomorphism law
//! `τ(uv) = (lift₂(v)⁻¹ τ(u) lift₂(v)) · τ(v)`, so its image is computed by a
//! finite closure over the basis of the intersection ([`tau_closure`]). The
//! kernel `{u : τ(u) = 1}` is isomorphic to `H₁ ∩ H₂` and has index
//! `|image(τ)|` in `H₁' ∩ H₂'`, giving the exact reduced rank
//! `r̄(H₁ ∩ H₂) = |image(τ)| · r̄(H₁' ∩ H₂')`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::graph::SubgroupGraph;
use crate::group::{FiniteGroup, GroupHom, Quotient};
use crate::word::{FreeProduct, Word};

/// A validated amalgamated product `G₁ ∗_T G₂` with `T` normal in both sides.
#[derive(Debug, Clone)]
pub struct AmalgamSpec {
    sides: [FiniteGroup; 2],
    t: FiniteGroup,
    emb: [GroupHom; 2],
    /// element of `T` represented by a side element, if any
    preimage: [Vec<Option<usize>>; 2],
    quotients: [Quotient; 2],
    quotient_product: FreeProduct,
    /// `conj[side][g][t] = emb⁻¹(g⁻¹·emb(t)·g)`
    conj: [Vec<Vec<usize>>; 2],
    /// letter naming over the full factors, for display only
    naming: FreeProduct,
}

/// Normal form `r₁ r₂ … r_k · t`: alternating non-`T` transversal
/// representatives `(side, element)` and a `T`-tail.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AmalgamElement {
    sylls: Vec<(usize, usize)>,
    tail: usize,
}

impl AmalgamElement {
    pub fn identity() -> Self {
        AmalgamElement::default()
    }

    pub fn syllables(&self) -> &[(usize, usize)] {
        &self.sylls
    }

    pub fn tail(&self) -> usize {
        self.tail
    }

    pub fn is_identity(&self) -> bool {
        self.sylls.is_empty() && self.tail == 0
    }

    /// In `T`: no representative syllables.
    pub fn is_in_t(&self) -> bool {
        self.sylls.is_empty()
    }
}

impl AmalgamSpec {
    /// Validate and build.  `img1`/`img2` list the image in each side of every
    /// element of `t`; they must be injective homomorphisms onto proper normal
    /// subgroups.
    pub fn new(
        g1: FiniteGroup,
        g2: FiniteGroup,
        t: FiniteGroup,
        img1: Vec<usize>,
        img2: Vec<usize>,
    ) -> Result<AmalgamSpec> {
        let emb1 = GroupHom::new(t.clone(), g1.clone(), img1)?;
        let emb2 = GroupHom::new(t.clone(), g2.clone(), img2)?;
        let sides = [g1, g2];
        let emb = [emb1, emb2];
        let mut preimage: [Vec<Option<usize>>; 2] = [vec![], vec![]];
        for side in 0..2 {
            if !emb[side].is_injective() {
                return Err(Error::NotInjective);
            }
            if t.order() >= sides[side].order() {
                return Err(Error::AmalgamMismatch(format!(
                    "the amalgamated subgroup must be proper in {}",
                    sides[side].name()
                )));
            }
            let mut pre = vec![None; sides[side].order()];
            for ti in 0..t.order() {
                pre[emb[side].apply(ti)] = Some(ti);
            }
            preimage[side] = pre;
        }
        // quotient() validates normality of the image
        let image_set =
            |side: usize| -> Vec<usize> { (0..t.order()).map(|ti| emb[side].apply(ti)).collect() };
        let quotients = [
            sides[0].quotient(&image_set(0))?,
            sides[1].quotient(&image_set(1))?,
        ];
        let quotient_product =
            FreeProduct::new(vec![quotients[0].group.clone(), quotients[1].group.clone()])?;
        let mut conj: [Vec<Vec<usize>>; 2] = [vec![], vec![]];
        for side in 0..2 {
            let g = &sides[side];
            let mut table = Vec::with_capacity(g.order());
            for ge in 0..g.order() {
                let row = (0..t.order())
                    .map(|ti| {
                        let m = g.mul(g.mul(g.inv(ge), emb[side].apply(ti)), ge);
                        preimage[side][m].expect("normal image is closed under conjugation")
                    })
                    .collect();
                table.push(row);
            }
            conj[side] = table;
        }
        let naming = FreeProduct::new(vec![sides[0].clone(), sides[1].clone()])?;
        Ok(AmalgamSpec { sides, t, emb, preimage, quotients, quotient_product, conj, naming })
    }

    pub fn side(&self, i: usize) -> &FiniteGroup {
        &self.sides[i]
    }

    pub fn t(&self) -> &FiniteGroup {
        &self.t
    }

    pub fn embedding(&self, side: usize) -> &GroupHom {
        &self.emb[side]
    }

    /// The quotient free product `(G₁/T) ∗ (G₂/T)`.
    pub fn quotient_product(&self) -> &FreeProduct {
        &self.quotient_product
    }

    pub fn quotient(&self, side: usize) -> &Quotient {
        &self.quotients[side]
    }

    pub fn identity(&self) -> AmalgamElement {
        AmalgamElement::identity()
    }

    pub fn elem_from_t(&self, t: usize) -> AmalgamElement {
        debug_assert!(t < self.t.order());
        AmalgamElement { sylls: vec![], tail: t }
    }

    /// The element of `G` given by one side element.
    pub fn elem_from_side(&self, side: usize, g: usize) -> AmalgamElement {
        let mut acc = AmalgamElement::identity();
        self.append_side(&mut acc, side, g);
        acc
    }

    /// Right-multiply the normal form by an arbitrary element `s` of one side.
    fn append_side(&self, acc: &mut AmalgamElement, side: usize, s: usize) {
        let g = &self.sides[side];
        // absorb the tail: acc = sylls · emb(tail) · s = sylls · q
        let q = g.mul(self.emb[side].apply(acc.tail), s);
        if let Some(t) = self.preimage[side][q] {
            acc.tail = t;
            return;
        }
        let rho = self.quotients[side].section[self.quotients[side].coset_of[q]];
        let tau = self.preimage[side][g.mul(g.inv(rho), q)]
            .expect("q and its representative lie in the same T-coset");
        match acc.sylls.last() {
            Some(&(ls, lr)) if ls == side => {
                acc.sylls.pop();
                let m = g.mul(lr, rho);
                if let Some(t2) = self.preimage[side][m] {
                    acc.tail = self.t.mul(t2, tau);
                } else {
                    let rho2 = self.quotients[side].section[self.quotients[side].coset_of[m]];
                    let tau2 = self.preimage[side][g.mul(g.inv(rho2), m)]
                        .expect("m and its representative lie in the same T-coset");
                    acc.sylls.push((side, rho2));
                    acc.tail = self.t.mul(tau2, tau);
                }
            }
            _ => {
                acc.sylls.push((side, rho));
                acc.tail = tau;
            }
        }
    }

    pub fn mul_elem(&self, a: &AmalgamElement, b: &AmalgamElement) -> AmalgamElement {
        let mut acc = a.clone();
        for &(side, rep) in &b.sylls {
            self.append_side(&mut acc, side, rep);
        }
        acc.tail = self.t.mul(acc.tail, b.tail);
        acc
    }

    pub fn inv_elem(&self, a: &AmalgamElement) -> AmalgamElement {
        let mut acc = self.elem_from_t(self.t.inv(a.tail));
        for &(side, rep) in a.sylls.iter().rev() {
            self.append_side(&mut acc, side, self.sides[side].inv(rep));
        }
        acc
    }

    /// `g⁻¹·emb(t)·g` as an element of `T` (well-defined by normality).
    pub fn conj_t(&self, t: usize, g: &AmalgamElement) -> usize {
        let mut cur = t;
        for &(side, rep) in &g.sylls {
            cur = self.conj[side][rep][cur];
        }
        // conjugation by the tail, inside T itself
        self.t.mul(self.t.mul(self.t.inv(g.tail), cur), g.tail)
    }

    /// `φ`: the image in the quotient free product (the tail vanishes).
    pub fn project(&self, a: &AmalgamElement) -> Word {
        let sylls = a
            .sylls
            .iter()
            .map(|&(side, rep)| (side, self.quotients[side].coset_of[rep]))
            .collect();
        Word::from_normalized(sylls)
    }

    /// `σ`: the canonical lift (transversal representatives, identity tail).
    /// `project ∘ lift_word` is the identity on normal forms.
    pub fn lift_word(&self, w: &Word) -> AmalgamElement {
        let sylls = w
            .syllables()
            .iter()
            .map(|&(side, coset)| (side, self.quotients[side].section[coset]))
            .collect();
        AmalgamElement { sylls, tail: 0 }
    }

    /// Human-readable rendering: representative letters, with a nontrivial
    /// tail shown in braces using its embedding into the first side.
    pub fn display_elem(&self, a: &AmalgamElement) -> String {
        let mut s = String::new();
        for &(side, rep) in &a.sylls {
            s.push_str(self.naming.element_name(side, rep));
        }
        if a.tail != 0 {
            s.push('{');
            s.push_str(self.naming.element_name(0, self.emb[0].apply(a.tail)));
            s.push('}');
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

/// A subgroup `H ≤ G₁ ∗_T G₂` with `H ∩ T = 1`, presented as the graph of its
/// projection `H'` plus one twist per free-basis element.
#[derive(Debug, Clone)]
pub struct LiftedSubgroup {
    graph: SubgroupGraph,
    twists: Vec<usize>,
    lifts: Vec<AmalgamElement>,
}

impl LiftedSubgroup {
    /// `automaton` must live over the amalgam's quotient product and be
    /// factor-free; `twists` gives one `T`-element per basis word of its
    /// graph (in basis order).
    pub fn new(am: &AmalgamSpec, automaton: &Automaton, twists: Vec<usize>) -> Result<LiftedSubgroup> {
        if automaton.product() != am.quotient_product() {
            return Err(Error::AmbientMismatch);
        }
        let graph = SubgroupGraph::new(automaton)?;
        if twists.len() != graph.basis().len() {
            return Err(Error::AmalgamMismatch(format!(
                "{} twists supplied for a basis of {} words",
                twists.len(),
                graph.basis().len()
            )));
        }
        for &t in &twists {
            if t >= am.t().order() {
                return Err(Error::AmalgamMismatch(format!(
                    "twist {t} is not an element of T (order {})",
                    am.t().order()
                )));
            }
        }
        let lifts = graph
            .basis()
            .iter()
            .zip(&twists)
            .map(|(w, &t)| am.mul_elem(&am.lift_word(w), &am.elem_from_t(t)))
            .collect();
        Ok(LiftedSubgroup { graph, twists, lifts })
    }

    pub fn graph(&self) -> &SubgroupGraph {
        &self.graph
    }

    pub fn twists(&self) -> &[usize] {
        &self.twists
    }

    /// Lift of the `k`-th basis word.
    pub fn basis_lift(&self, k: usize) -> &AmalgamElement {
        &self.lifts[k]
    }

    /// The unique element of `H` over a word `u ∈ H'`: express `u` in the
    /// basis and multiply the basis lifts.
    pub fn lift(&self, am: &AmalgamSpec, u: &Word) -> Result<AmalgamElement> {
        let letters = self.graph.express_in_basis(u)?;
        let mut acc = AmalgamElement::identity();
        for (k, inverted) in letters {
            let l = if inverted { am.inv_elem(&self.lifts[k]) } else { self.lifts[k].clone() };
            acc = am.mul_elem(&acc, &l);
        }
        debug_assert!(self.graph.automaton().is_member(u));
        debug_assert_eq!(am.project(&acc), *u);
        Ok(acc)
    }
}

/// `τ(u) = lift₂(u)⁻¹ · lift₁(u)` for `u ∈ H₁' ∩ H₂'`; always lands in `T`.
pub fn tau(am: &AmalgamSpec, h1: &LiftedSubgroup, h2: &LiftedSubgroup, u: &Word) -> Result<usize> {
    let l1 = h1.lift(am, u)?;
    let l2 = h2.lift(am, u)?;
    let d = am.mul_elem(&am.inv_elem(&l2), &l1);
    if !d.is_in_t() {
        return Err(Error::Internal(
            "lift defect of a common word has nontrivial projection".into(),
        ));
    }
    Ok(d.tail())
}

/// The image of `τ` with witnesses, plus the intersection graph it was
/// computed over.
#[derive(Debug, Clone)]
pub struct TauClosure {
    /// graph of `H₁' ∩ H₂'` in the quotient product
    pub intersection: SubgroupGraph,
    /// all attained values of τ
    pub image: BTreeSet<usize>,
    /// for each attained value, a witness word `u ∈ H₁' ∩ H₂'` with `τ(u)` = value
    pub witnesses: BTreeMap<usize, Word>,
}

impl TauClosure {
    /// `r̄(H₁ ∩ H₂) = |image(τ)| · r̄(H₁' ∩ H₂')`.
    pub fn intersection_reduced_rank(&self) -> usize {
        self.image.len() * self.intersection.reduced_rank()
    }
}

/// Compute the image of `τ` by closing `{1}` under the crossed-homomorphism
/// moves `t ↦ (t conjugated by lift₂(v)) · τ(v)` for every basis word `v` of
/// the intersection and its inverse.
pub fn tau_closure(am: &AmalgamSpec, h1: &LiftedSubgroup, h2: &LiftedSubgroup) -> Result<TauClosure> {
    let inter_aut = h1.graph().automaton().intersect(h2.graph().automaton())?;
    let intersection = SubgroupGraph::new(&inter_aut)?;
    let p = am.quotient_product().clone();

    struct Move {
        word: Word,
        tau_v: usize,
        /// conjugation by lift₂(v), tabulated on T
        act: Vec<usize>,
    }
    let mut moves: Vec<Move> = Vec::new();
    for v in intersection.basis() {
        for w in [v.clone(), p.invert(v)] {
            let tau_v = tau(am, h1, h2, &w)?;
            let l2 = h2.lift(am, &w)?;
            let act = (0..am.t().order()).map(|t| am.conj_t(t, &l2)).collect();
            moves.push(Move { word: w, tau_v, act });
        }
    }

    let mut image = BTreeSet::from([0usize]);
    let mut witnesses = BTreeMap::from([(0usize, Word::empty())]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        for m in &moves {
            let nt = am.t().mul(m.act[t], m.tau_v);
            if image.insert(nt) {
                let witness = p.mul(&witnesses[&t], &m.word);
                witnesses.insert(nt, witness);
                queue.push_back(nt);
            }
        }
    }
    Ok(TauClosure { intersection, image, witnesses })
}
