//! The bipartite graph view of a subgroup automaton: Euler characteristic,
//! free basis, and structure queries.
//!
//! For a factor-free subgroup the automaton is re-read as a bipartite graph:
//!
//! * **primary vertices** — the states (cosets `Hg`);
//! * **secondary vertices** — for each factor `f`, the classes of states
//!   connected by `f`-transitions (cosets of the form `Hg·G_f`); saturation
//!   makes each class a complete graph, so a class is simply a state together
//!   with all its `f`-neighbours;
//! * **edges** — one edge `(p, S)` per state `p` in a class `S`.
//!
//! The subgroup is free on the cotree edges of a spanning tree, and with
//! `V − E = χ` its rank is `1 − χ` and its reduced rank `r̄ = max(0, −χ)`.
//! Edge labels around a secondary vertex carry a gauge freedom: only
//! `label(e₁)·label(e₂)⁻¹` is canonical, so each class fixes the gauge by
//! giving its discovery vertex the identity label.
//!
//! The spanning tree is breadth-first from the base with ascending tie-breaks,
//! so bases, tree words and the basis itself are deterministic functions of
//! the (canonical) automaton.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::word::Word;

/// A secondary vertex: one factor class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Secondary {
    pub factor: usize,
    /// Sorted member states.
    pub members: Vec<usize>,
}

/// One absent edge label of a deficient factor class: attaching a fresh state
/// behind `access` is the minimal move towards saturating that class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierSlot {
    /// Index into [`SubgroupGraph::secondaries`].
    pub secondary: usize,
    pub factor: usize,
    /// The absent gauge label (never the identity).
    pub missing: usize,
    /// Reduced word for the coset a new state filling the label would carry.
    pub access: Word,
}

/// Vertex/edge counts and the rank data they determine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Euler {
    pub primary: usize,
    pub secondary: usize,
    pub vertices: usize,
    pub edges: usize,
    pub chi: i64,
    pub rank: usize,
    pub reduced_rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeKind {
    Tree,
    Cotree(usize),
}

/// The analyzed graph of a factor-free subgroup.
#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    aut: Automaton,
    secondaries: Vec<Secondary>,
    /// secondary index at `[state * num_factors + factor]`, if any.
    sec_at: Vec<Option<usize>>,
    /// discovery vertex of each secondary (gauge: its label is the identity).
    sec_root: Vec<usize>,
    /// gauge labels, parallel to `secondaries[i].members`.
    gauge: Vec<Vec<usize>>,
    treewords: Vec<Word>,
    edge_kind: BTreeMap<(usize, usize), EdgeKind>,
    basis: Vec<Word>,
}

impl SubgroupGraph {
    /// Analyze an automaton. The automaton is cored first (idempotent); a
    /// self-transition anywhere means the subgroup contains a conjugate of a
    /// factor element and [`Error::NotFactorFree`] is returned.
    pub fn new(automaton: &Automaton) -> Result<SubgroupGraph> {
        let aut = automaton.core();
        if !aut.is_factor_free() {
            return Err(Error::NotFactorFree);
        }
        let nf = aut.product().num_factors();
        let n = aut.num_states();

        // secondary vertices: factor classes, ascending by (first member, factor)
        let mut sec_at: Vec<Option<usize>> = vec![None; n * nf];
        let mut secondaries: Vec<Secondary> = Vec::new();
        for s in 0..n {
            for f in 0..nf {
                if sec_at[s * nf + f].is_some() {
                    continue;
                }
                let mut members: Vec<usize> = aut
                    .transitions_at(s)
                    .filter(|&(tf, _, _)| tf == f)
                    .map(|(_, _, t)| t)
                    .collect();
                if members.is_empty() {
                    continue;
                }
                members.push(s);
                members.sort_unstable();
                members.dedup();
                let id = secondaries.len();
                for &m in &members {
                    debug_assert!(sec_at[m * nf + f].is_none(), "factor classes must partition");
                    sec_at[m * nf + f] = Some(id);
                }
                secondaries.push(Secondary { factor: f, members });
            }
        }

        // breadth-first spanning tree over the bipartite graph
        #[derive(Clone, Copy)]
        enum Node {
            Primary(usize),
            Secondary(usize),
        }
        let mut seen_p = vec![false; n];
        let mut seen_s = vec![false; secondaries.len()];
        let mut sec_root = vec![usize::MAX; secondaries.len()];
        let mut treewords: Vec<Option<Word>> = vec![None; n];
        let mut edge_kind: BTreeMap<(usize, usize), EdgeKind> = BTreeMap::new();
        let base = aut.base();
        seen_p[base] = true;
        treewords[base] = Some(Word::empty());
        let mut queue = std::collections::VecDeque::from([Node::Primary(base)]);
        while let Some(node) = queue.pop_front() {
            match node {
                Node::Primary(p) => {
                    for f in 0..nf {
                        if let Some(sid) = sec_at[p * nf + f] {
                            if !seen_s[sid] {
                                seen_s[sid] = true;
                                sec_root[sid] = p;
                                edge_kind.insert((p, sid), EdgeKind::Tree);
                                queue.push_back(Node::Secondary(sid));
                            }
                        }
                    }
                }
                Node::Secondary(sid) => {
                    let root = sec_root[sid];
                    let f = secondaries[sid].factor;
                    for &q in &secondaries[sid].members {
                        if seen_p[q] {
                            continue;
                        }
                        seen_p[q] = true;
                        edge_kind.insert((q, sid), EdgeKind::Tree);
                        // factor-free: exactly one label root -> q
                        let x = (1..aut.product().factor(f).order())
                            .find(|&x| aut.delta(root, f, x) == Some(q))
                            .expect("saturated class has a direct transition");
                        let tw = aut
                            .product()
                            .mul(treewords[root].as_ref().unwrap(), &Word::from_normalized(vec![(f, x)]));
                        treewords[q] = Some(tw);
                        queue.push_back(Node::Primary(q));
                    }
                }
            }
        }
        debug_assert!(seen_p.iter().all(|&s| s), "cored automaton must be connected");

        // gauge labels: identity at the root, l(q) = t(root -> q)^-1 elsewhere
        let mut gauge: Vec<Vec<usize>> = Vec::with_capacity(secondaries.len());
        for (sid, sec) in secondaries.iter().enumerate() {
            let root = sec_root[sid];
            let f = sec.factor;
            let g = aut.product().factor(f);
            let labels = sec
                .members
                .iter()
                .map(|&q| {
                    if q == root {
                        0
                    } else {
                        let x = (1..g.order())
                            .find(|&x| aut.delta(root, f, x) == Some(q))
                            .expect("saturated class has a direct transition");
                        g.inv(x)
                    }
                })
                .collect();
            gauge.push(labels);
        }

        // basis: cotree edges, ascending by (secondary, member)
        let treewords: Vec<Word> = treewords.into_iter().map(Option::unwrap).collect();
        let mut basis: Vec<Word> = Vec::new();
        for (sid, sec) in secondaries.iter().enumerate() {
            let f = sec.factor;
            let root = sec_root[sid];
            for (mi, &p) in sec.members.iter().enumerate() {
                if edge_kind.contains_key(&(p, sid)) {
                    continue;
                }
                // loop: tree path to p, cross into the class, leave through the
                // tree at the root: middle syllable is t(p -> root) = gauge(p)
                let x = gauge[sid][mi];
                debug_assert_ne!(x, 0);
                debug_assert_eq!(aut.delta(p, f, x), Some(root));
                let product = aut.product();
                let w = product.mul(
                    &product.mul(&treewords[p], &Word::from_normalized(vec![(f, x)])),
                    &product.invert(&treewords[root]),
                );
                edge_kind.insert((p, sid), EdgeKind::Cotree(basis.len()));
                basis.push(w);
            }
        }

        Ok(SubgroupGraph {
            aut,
            secondaries,
            sec_at,
            sec_root,
            gauge,
            treewords,
            edge_kind,
            basis,
        })
    }

    pub fn automaton(&self) -> &Automaton {
        &self.aut
    }

    pub fn secondaries(&self) -> &[Secondary] {
        &self.secondaries
    }

    /// The secondary vertex through which `state` meets factor `f`.
    pub fn secondary_at(&self, state: usize, f: usize) -> Option<usize> {
        self.sec_at[state * self.aut.product().num_factors() + f]
    }

    /// Reduced word reaching `state` from the base along the spanning tree.
    pub fn treeword(&self, state: usize) -> &Word {
        &self.treewords[state]
    }

    /// A free basis of the subgroup, in normal form, one word per cotree edge.
    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn reduced_rank(&self) -> usize {
        self.rank().saturating_sub(1)
    }

    pub fn index(&self) -> Option<usize> {
        self.aut.index()
    }

    pub fn is_complete(&self) -> bool {
        self.aut.is_complete()
    }

    /// Vertex/edge counts; checks `rank = 1 − χ` and the degree-sum identity
    /// `2·(E − V) = Σ(deg − 2)` along the way.
    pub fn euler(&self) -> Euler {
        let primary = self.aut.num_states();
        let secondary = self.secondaries.len();
        let edges: usize = self.secondaries.iter().map(|s| s.members.len()).sum();
        let vertices = primary + secondary;
        let chi = vertices as i64 - edges as i64;
        let rank = self.basis.len();
        debug_assert_eq!(rank as i64, 1 - chi);
        // degree sum: primaries count one per incident class, secondaries count members
        let nf = self.aut.product().num_factors();
        let mut degree_sum: i64 = 0;
        for s in 0..primary {
            degree_sum += (0..nf).filter(|&f| self.sec_at[s * nf + f].is_some()).count() as i64;
        }
        degree_sum += edges as i64;
        debug_assert_eq!(degree_sum, 2 * edges as i64);
        let reduced_rank = (-chi).max(0) as usize;
        debug_assert_eq!(reduced_rank, rank.saturating_sub(1));
        Euler { primary, secondary, vertices, edges, chi, rank, reduced_rank }
    }

    /// The degree-sum route to the reduced rank: `½ Σ_v (deg(v) − 2)`,
    /// computed from explicit vertex degrees. Agrees with `−χ` for graphs
    /// with no vertices of degree < 2 (complete graphs in particular).
    pub fn degree_sum_half(&self) -> i64 {
        let nf = self.aut.product().num_factors();
        let mut total: i64 = 0;
        for s in 0..self.aut.num_states() {
            let deg = (0..nf).filter(|&f| self.sec_at[s * nf + f].is_some()).count() as i64;
            total += deg - 2;
        }
        for sec in &self.secondaries {
            total += sec.members.len() as i64 - 2;
        }
        debug_assert_eq!(total % 2, 0);
        total / 2
    }

    /// Express a member word in the free basis as signed basis indices
    /// (`true` = inverted), free-reduced. [`Error::NotMember`] if the word is
    /// not in the subgroup.
    pub fn express_in_basis(&self, w: &Word) -> Result<Vec<(usize, bool)>> {
        let nf = self.aut.product().num_factors();
        let mut out: Vec<(usize, bool)> = Vec::new();
        let push = |item: (usize, bool), out: &mut Vec<(usize, bool)>| {
            if out.last() == Some(&(item.0, !item.1)) {
                out.pop();
            } else {
                out.push(item);
            }
        };
        let mut cur = self.aut.base();
        for &(f, x) in w.syllables() {
            let nxt = self.aut.delta(cur, f, x).ok_or(Error::NotMember)?;
            let sid = self.sec_at[cur * nf + f].expect("transition implies class membership");
            if let EdgeKind::Cotree(i) = self.edge_kind[&(cur, sid)] {
                push((i, false), &mut out);
            }
            if let EdgeKind::Cotree(i) = self.edge_kind[&(nxt, sid)] {
                push((i, true), &mut out);
            }
            cur = nxt;
        }
        if cur != self.aut.base() {
            return Err(Error::NotMember);
        }
        Ok(out)
    }

    /// The completion frontier: one entry per absent gauge label of each
    /// deficient factor class, ascending by (class, label).
    ///
    /// Distinct entries name distinct cosets — several undefined `(state,
    /// element)` slots of one class alias the same absent label, while this
    /// enumeration counts each prospective new state exactly once. The access
    /// word leaves the class root through the label's inverse, matching the
    /// gauge convention `label(q) = t(q → root)`.
    pub fn completion_frontier(&self) -> Vec<FrontierSlot> {
        let mut out = Vec::new();
        for (sid, sec) in self.secondaries.iter().enumerate() {
            let g = self.aut.product().factor(sec.factor);
            let mut present = vec![false; g.order()];
            present[0] = true;
            for &lab in &self.gauge[sid] {
                present[lab] = true;
            }
            let root = self.sec_root[sid];
            for (missing, _) in present.iter().enumerate().skip(1).filter(|(_, &seen)| !seen) {
                let access = self.access_word(root, sec.factor, g.inv(missing));
                out.push(FrontierSlot { secondary: sid, factor: sec.factor, missing, access });
            }
        }
        out
    }

    /// Undefined transition slots, ascending by (state, factor, element).
    pub fn missing_slots(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.aut.num_states() {
            for f in 0..self.aut.product().num_factors() {
                for x in 1..self.aut.product().factor(f).order() {
                    if self.aut.delta(s, f, x).is_none() {
                        out.push((s, f, x));
                    }
                }
            }
        }
        out
    }

    /// The reduced word for the coset behind an undefined slot: tree word of
    /// the state followed by the missing syllable.
    pub fn access_word(&self, state: usize, f: usize, x: usize) -> Word {
        self.aut
            .product()
            .mul(&self.treewords[state], &Word::from_normalized(vec![(f, x)]))
    }

    /// Graphviz rendering: primary states as boxes (base doubled), factor
    /// classes as circles, edges carrying their gauge labels.
    pub fn to_dot(&self, title: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph {:?} {{", title);
        let _ = writeln!(s, "  layout=neato;");
        let _ = writeln!(s, "  node [fontsize=11];");
        for p in 0..self.aut.num_states() {
            let extra = if p == self.aut.base() { ", peripheries=2" } else { "" };
            let _ = writeln!(s, "  p{p} [shape=box, label=\"{p}\"{extra}];");
        }
        for (sid, sec) in self.secondaries.iter().enumerate() {
            let fname = self.aut.product().factor(sec.factor).name();
            let _ = writeln!(
                s,
                "  s{sid} [shape=circle, style=dashed, label=\"{fname}[{sid}]\"];"
            );
        }
        for (sid, sec) in self.secondaries.iter().enumerate() {
            for (mi, &p) in sec.members.iter().enumerate() {
                let label = self.aut.product().element_name(sec.factor, self.gauge[sid][mi]);
                let style = match self.edge_kind[&(p, sid)] {
                    EdgeKind::Tree => "",
                    EdgeKind::Cotree(_) => ", style=bold",
                };
                let _ = writeln!(s, "  p{p} -- s{sid} [label=\"{label}\"{style}];");
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupHom};
    use crate::word::FreeProduct;

    fn z2_z3() -> FreeProduct {
        FreeProduct::new(vec![
            FiniteGroup::cyclic(2).unwrap(),
            FiniteGroup::cyclic(3).unwrap(),
        ])
        .unwrap()
    }

    fn w(p: &FreeProduct, s: &str) -> Word {
        p.parse_word(s).unwrap()
    }

    #[test]
    fn single_generator_graph() {
        let p = z2_z3();
        let g = SubgroupGraph::new(&Automaton::fold(&p, &[w(&p, "ab")])).unwrap();
        let e = g.euler();
        assert_eq!((e.primary, e.secondary, e.edges), (2, 2, 4));
        assert_eq!(e.chi, 0);
        assert_eq!(e.rank, 1);
        assert_eq!(e.reduced_rank, 0);
        assert_eq!(g.basis().len(), 1);
        assert_eq!(p.display_word(&g.basis()[0]), "ab");
        assert_eq!(p.display_word(g.treeword(1)), "a");
    }

    #[test]
    fn trivial_subgroup_graph() {
        let p = z2_z3();
        let g = SubgroupGraph::new(&Automaton::fold(&p, &[])).unwrap();
        let e = g.euler();
        assert_eq!(e.vertices, 1);
        assert_eq!(e.edges, 0);
        assert_eq!(e.chi, 1);
        assert_eq!(e.rank, 0);
        assert_eq!(e.reduced_rank, 0);
        assert!(g.basis().is_empty());
    }

    #[test]
    fn s3_kernel_graph() {
        let p = z2_z3();
        let s3 = FiniteGroup::dihedral(3).unwrap();
        let ia = GroupHom::new(p.factor(0).clone(), s3.clone(), vec![0, 3]).unwrap();
        let ib = GroupHom::new(p.factor(1).clone(), s3.clone(), vec![0, 1, 2]).unwrap();
        let g = SubgroupGraph::new(&Automaton::cayley(&p, &s3, &[ia, ib]).unwrap()).unwrap();
        let e = g.euler();
        assert_eq!(e.primary, 6);
        assert_eq!(e.secondary, 5); // three a-classes of size 2, two b-classes of size 3
        assert_eq!(e.vertices, 11);
        assert_eq!(e.edges, 12);
        assert_eq!(e.chi, -1);
        assert_eq!(e.rank, 2);
        assert_eq!(e.reduced_rank, 1);
        assert_eq!(g.degree_sum_half(), 1);
        assert_eq!(g.index(), Some(6));

        // Schreier: r = index * (sum(1 - 1/|G_f|) - 1) for complete graphs
        assert_eq!(e.reduced_rank as i64, 6 / 6);

        // the basis generates the kernel: both basis words map to the
        // identity, and the subgroup they fold to is the kernel again
        let refold = Automaton::fold(&p, g.basis());
        assert_eq!(&refold, g.automaton());

        // each basis word expresses as itself
        for (i, b) in g.basis().iter().enumerate() {
            assert_eq!(g.express_in_basis(b).unwrap(), vec![(i, false)]);
            assert_eq!(
                g.express_in_basis(&p.invert(b)).unwrap(),
                vec![(i, true)]
            );
        }
        // products express as concatenations
        let b0b1 = p.mul(&g.basis()[0], &g.basis()[1]);
        assert_eq!(g.express_in_basis(&b0b1).unwrap(), vec![(0, false), (1, false)]);
        assert!(g.express_in_basis(&w(&p, "ab")).is_err());
    }

    #[test]
    fn express_powers() {
        let p = z2_z3();
        let g = SubgroupGraph::new(&Automaton::fold(&p, &[w(&p, "ab")])).unwrap();
        assert_eq!(
            g.express_in_basis(&w(&p, "(ab)^3")).unwrap(),
            vec![(0, false), (0, false), (0, false)]
        );
        assert_eq!(g.express_in_basis(&Word::empty()).unwrap(), vec![]);
        assert!(matches!(g.express_in_basis(&w(&p, "ab^2")), Err(Error::NotMember)));
        assert!(matches!(g.express_in_basis(&w(&p, "a")), Err(Error::NotMember)));
    }

    #[test]
    fn missing_slots_and_access_words() {
        let p = z2_z3();
        let g = SubgroupGraph::new(&Automaton::fold(&p, &[w(&p, "ab")])).unwrap();
        let slots = g.missing_slots();
        assert_eq!(slots, vec![(0, 1, 1), (1, 1, 2)]);
        let words: Vec<String> = slots
            .iter()
            .map(|&(s, f, x)| p.display_word(&g.access_word(s, f, x)))
            .collect();
        assert_eq!(words, vec!["b", "ab^2"]);
    }

    #[test]
    fn rejects_non_factor_free() {
        let p = z2_z3();
        let a = Automaton::fold(&p, &[w(&p, "a^(b^-1)")]);
        assert!(matches!(SubgroupGraph::new(&a), Err(Error::NotFactorFree)));
    }

    #[test]
    fn rank_two_free_subgroup() {
        let p = z2_z3();
        // (ab)^2 and its conjugate (ba)^2 = ((ab)^2)^a generate a rank-2
        // subgroup of the factor-free S3-kernel
        let g = SubgroupGraph::new(&Automaton::fold(&p, &[w(&p, "(ab)^2"), w(&p, "(ba)^2")])).unwrap();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.reduced_rank(), 1);
        // basis refolds to the same automaton
        assert_eq!(&Automaton::fold(&p, g.basis()), g.automaton());
        // every basis word is a member
        for b in g.basis() {
            assert!(g.automaton().is_member(b));
        }
    }

    #[test]
    fn dot_output_shape() {
        let p = z2_z3();
        let g = SubgroupGraph::new(&Automaton::fold(&p, &[w(&p, "ab")])).unwrap();
        let dot = g.to_dot("example");
        assert!(dot.starts_with("graph \"example\" {"));
        assert!(dot.contains("p0 [shape=box, label=\"0\", peripheries=2];"));
        assert!(dot.contains("p0 -- s0"));
        assert!(dot.ends_with("}\n"));
        // two states, two classes, four edges
        assert_eq!(dot.matches("shape=box").count(), 2);
        assert_eq!(dot.matches("shape=circle").count(), 2);
        assert_eq!(dot.matches(" -- ").count(), 4);
    }
}
