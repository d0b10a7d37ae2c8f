//! Pointed partial deterministic automata over free products, with folding.
//!
//! States are right cosets `Hg` of a subgroup `H`; a transition labelled by a
//! nontrivial factor element `x ∈ G_f` sends `Hg` to `Hgx`. Three invariants
//! are maintained by every constructor:
//!
//! * **determinism** — at most one target per `(state, factor, element)`;
//! * **symmetry** — `δ(p, x) = q` iff `δ(q, x⁻¹) = p`;
//! * **saturation** — if `δ(p, x) = q` and `δ(p, y) = r` with `x, y` in the
//!   same factor, then `δ(q, x⁻¹y) = r`. Saturation materializes every
//!   coset equality that follows from two transitions sharing a source, so
//!   membership reduces to tracing normal forms and the states sharing a
//!   factor component form a complete graph.
//!
//! A word `w` lies in `H` exactly when tracing `w` from the base state is
//! everywhere defined and returns to the base. The automaton is *complete*
//! (every slot defined everywhere) exactly when `H` has finite index, and the
//! index is then the number of states. `H` contains no conjugate of a
//! nontrivial factor element exactly when there are no self-transitions.
//!
//! All constructors return a canonical form: states are renumbered by
//! breadth-first search from the base, exploring slots in ascending order, so
//! two isomorphic pointed automata compare equal with `==`.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};
use crate::word::{FreeProduct, Word};

const NONE: usize = usize::MAX;

/// A folded subgroup automaton. See the module docs for the invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    product: FreeProduct,
    stride: usize,
    num_states: usize,
    base: usize,
    /// `delta[s * stride + slot]`, `usize::MAX` for undefined.
    delta: Vec<usize>,
}

impl Automaton {
    /// Fold the loops of the given words at a fresh base state.
    ///
    /// The result accepts exactly the subgroup generated by the words.
    pub fn fold(product: &FreeProduct, generators: &[Word]) -> Automaton {
        let mut fl = Folder::new(product);
        let base = fl.new_state();
        for w in generators {
            let sylls = w.syllables();
            let mut cur = base;
            for (i, &(f, x)) in sylls.iter().enumerate() {
                let slot = product.slot_of(f, x);
                cur = fl.find(cur);
                if i + 1 == sylls.len() {
                    let b = fl.find(base);
                    fl.enqueue(cur, slot, b);
                    fl.drain();
                } else if let Some(t) = fl.lookup(cur, slot) {
                    cur = t;
                } else {
                    let fresh = fl.new_state();
                    fl.enqueue(cur, slot, fresh);
                    fl.drain();
                    cur = fl.find(fresh);
                }
            }
        }
        fl.into_automaton(base)
    }

    /// The automaton of the kernel of the homomorphism `G_0 * … * G_{k-1} → Q`
    /// determined by one embedding per factor.
    ///
    /// States are the elements of `Q`, the base is the identity, and tracing a
    /// word multiplies its image on the right. Each factor map must be
    /// injective (otherwise the kernel meets a factor nontrivially) and the
    /// images must jointly generate `Q` (otherwise states would be
    /// unreachable and the index wrong).
    pub fn cayley(product: &FreeProduct, target: &FiniteGroup, images: &[GroupHom]) -> Result<Automaton> {
        if images.len() != product.num_factors() {
            return Err(Error::NotHomomorphism(format!(
                "{} factor maps supplied, {} factors",
                images.len(),
                product.num_factors()
            )));
        }
        for (f, img) in images.iter().enumerate() {
            if img.source() != product.factor(f) {
                return Err(Error::NotHomomorphism(format!(
                    "map {f} does not start at factor {f}"
                )));
            }
            if img.target() != target {
                return Err(Error::NotHomomorphism(format!("map {f} does not land in the target")));
            }
            if !img.is_injective() {
                return Err(Error::NotInjective);
            }
        }
        let n = target.order();
        let mut gen_elems: Vec<usize> = Vec::new();
        for img in images {
            gen_elems.extend(img.image_vec().iter().copied().filter(|&v| v != 0));
        }
        let reached = crate::group::closure_under(n, |a, b| target.mul(a, b), &gen_elems);
        if reached.len() != n {
            return Err(Error::DoesNotGenerate { got: reached.len(), want: n });
        }
        let stride = product.slot_count();
        let mut delta = vec![NONE; n * stride];
        for q in 0..n {
            for f in 0..product.num_factors() {
                for x in 1..product.factor(f).order() {
                    delta[q * stride + product.slot_of(f, x)] = target.mul(q, images[f].apply(x));
                }
            }
        }
        Ok(canonicalize(product, &delta, stride, n, 0))
    }

    /// Coset enumeration for the normal closure of the given words.
    ///
    /// Every word is required to trace a loop at every state (that is what
    /// normality means coset-wise), gaps are filled with fresh states, and a
    /// new state is defined at the lowest undefined slot whenever scanning
    /// stalls. Terminates when the table is complete; trips
    /// [`Error::Indeterminate`] once more than `max_states` states have been
    /// created, which is the fate of every infinite-index closure.
    pub fn normal_closure(product: &FreeProduct, generators: &[Word], max_states: usize) -> Result<Automaton> {
        let mut fl = Folder::new(product);
        let base = fl.new_state();
        loop {
            let version0 = fl.version;
            let mut s = 0;
            while s < fl.num_created() {
                if fl.find(s) == s {
                    for w in generators {
                        if w.is_empty() {
                            continue;
                        }
                        scan_loop(&mut fl, s, w);
                        if fl.num_created() > max_states {
                            return Err(Error::Indeterminate { max_states });
                        }
                        if fl.find(s) != s {
                            break; // state merged away; its edges were replayed
                        }
                    }
                }
                s += 1;
            }
            if fl.is_complete() {
                break;
            }
            if fl.version == version0 {
                // Stable but incomplete: define a fresh state at the lowest
                // undefined slot (ascending state id, then ascending slot).
                let (p, slot) = fl.lowest_undefined().expect("incomplete table has a hole");
                let fresh = fl.new_state();
                fl.enqueue(p, slot, fresh);
                fl.drain();
            }
            if fl.num_created() > max_states {
                return Err(Error::Indeterminate { max_states });
            }
        }
        let aut = fl.into_automaton(base);
        // Completeness plus scanning should have closed every loop everywhere;
        // anything else is a bug in the enumeration.
        for s in 0..aut.num_states {
            for w in generators {
                if aut.trace(s, w) != Some(s) {
                    return Err(Error::Internal(format!(
                        "normal closure scan left an open loop at state {s}"
                    )));
                }
            }
        }
        Ok(aut)
    }

    /// The pullback: states are reachable pairs, transitions act
    /// componentwise, and the result is cored. Accepts exactly the
    /// intersection of the two subgroups.
    pub fn intersect(&self, other: &Automaton) -> Result<Automaton> {
        if self.product != other.product {
            return Err(Error::AmbientMismatch);
        }
        let stride = self.stride;
        let mut ids: std::collections::HashMap<(usize, usize), usize> = std::collections::HashMap::new();
        let mut pairs: Vec<(usize, usize)> = vec![(self.base, other.base)];
        ids.insert((self.base, other.base), 0);
        let mut delta: Vec<usize> = Vec::new();
        let mut at = 0;
        while at < pairs.len() {
            let (p1, p2) = pairs[at];
            delta.extend(std::iter::repeat_n(NONE, stride));
            for slot in 0..stride {
                let t1 = self.delta[p1 * stride + slot];
                let t2 = other.delta[p2 * stride + slot];
                if t1 != NONE && t2 != NONE {
                    let key = (t1, t2);
                    let id = *ids.entry(key).or_insert_with(|| {
                        pairs.push(key);
                        pairs.len() - 1
                    });
                    delta[at * stride + slot] = id;
                }
            }
            at += 1;
        }
        let raw = canonicalize(&self.product, &delta, stride, pairs.len(), 0);
        Ok(raw.core())
    }

    /// Iteratively delete non-base states attached to fewer than two factor
    /// components, then renumber canonically. The result accepts the same
    /// subgroup with the minimal state set.
    pub fn core(&self) -> Automaton {
        let stride = self.stride;
        let n = self.num_states;
        let mut delta = self.delta.clone();
        let mut alive = vec![true; n];
        let degree = |delta: &[usize], s: usize| -> usize {
            (0..self.product.num_factors())
                .filter(|&f| {
                    (1..self.product.factor(f).order())
                        .any(|x| delta[s * stride + self.product.slot_of(f, x)] != NONE)
                })
                .count()
        };
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| s != self.base).collect();
        while let Some(p) = queue.pop_front() {
            if !alive[p] || p == self.base || degree(&delta, p) > 1 {
                continue;
            }
            alive[p] = false;
            for slot in 0..stride {
                let t = delta[p * stride + slot];
                if t == NONE {
                    continue;
                }
                delta[p * stride + slot] = NONE;
                if t != p && alive[t] {
                    let islot = self.inv_slot(slot);
                    delta[t * stride + islot] = NONE;
                    if t != self.base {
                        queue.push_back(t);
                    }
                }
            }
        }
        let kept = alive.iter().filter(|&&a| a).count();
        let out = canonicalize(&self.product, &delta, stride, n, self.base);
        debug_assert_eq!(out.num_states, kept, "pruning disconnected the graph");
        out
    }

    /// Transport the automaton onto another product of the same shape by
    /// applying one element bijection per factor to every transition label.
    ///
    /// `maps[f]` must be a group isomorphism `factor(f) → target.factor(f)`
    /// written as an element table; only then do the structural invariants
    /// survive the relabeling. Callers are expected to obtain the tables from
    /// [`crate::group::find_isomorphism`].
    pub(crate) fn relabel(&self, target: &FreeProduct, maps: &[Vec<usize>]) -> Result<Automaton> {
        if target.num_factors() != self.product.num_factors() || maps.len() != self.product.num_factors() {
            return Err(Error::AmbientMismatch);
        }
        for (f, map) in maps.iter().enumerate() {
            if target.factor(f).order() != self.product.factor(f).order()
                || map.len() != self.product.factor(f).order()
                || map[0] != 0
            {
                return Err(Error::AmbientMismatch);
            }
        }
        let stride = target.slot_count();
        debug_assert_eq!(stride, self.stride);
        let mut delta = vec![NONE; self.num_states * stride];
        for s in 0..self.num_states {
            for (f, x, t) in self.transitions_at(s) {
                delta[s * stride + target.slot_of(f, maps[f][x])] = t;
            }
        }
        let out = canonicalize(target, &delta, stride, self.num_states, self.base);
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }

    pub fn product(&self) -> &FreeProduct {
        &self.product
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn base(&self) -> usize {
        self.base
    }

    #[inline]
    pub fn delta(&self, s: usize, f: usize, x: usize) -> Option<usize> {
        let t = self.delta[s * self.stride + self.product.slot_of(f, x)];
        (t != NONE).then_some(t)
    }

    fn inv_slot(&self, slot: usize) -> usize {
        let (f, x) = self.product.syllable_of_slot(slot);
        self.product.slot_of(f, self.product.factor(f).inv(x))
    }

    /// All transitions leaving `s`, ascending by slot.
    pub fn transitions_at(&self, s: usize) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.stride).filter_map(move |slot| {
            let t = self.delta[s * self.stride + slot];
            (t != NONE).then(|| {
                let (f, x) = self.product.syllable_of_slot(slot);
                (f, x, t)
            })
        })
    }

    /// Follow a normal-form word from `from`; `None` when a needed transition
    /// is missing.
    pub fn trace(&self, from: usize, w: &Word) -> Option<usize> {
        let mut cur = from;
        for &(f, x) in w.syllables() {
            cur = self.delta(cur, f, x)?;
        }
        Some(cur)
    }

    /// Membership: the word loops at the base.
    pub fn is_member(&self, w: &Word) -> bool {
        self.trace(self.base, w) == Some(self.base)
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|&t| t != NONE)
    }

    /// Finite index when complete, `None` (infinite) otherwise.
    pub fn index(&self) -> Option<usize> {
        self.is_complete().then_some(self.num_states)
    }

    /// No self-transitions: the subgroup meets every conjugate of every factor
    /// trivially (and is therefore free).
    pub fn is_factor_free(&self) -> bool {
        (0..self.num_states).all(|s| (0..self.stride).all(|slot| self.delta[s * self.stride + slot] != s))
    }

    /// Whether the (finite-index) subgroup is normal: every generator must
    /// trace a loop at every state.
    pub fn is_normal(&self, generators: &[Word]) -> Result<bool> {
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        for s in 0..self.num_states {
            for w in generators {
                if self.trace(s, w) != Some(s) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Check the three structural invariants and all index ranges. Intended
    /// for tests and for distrusted inputs.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_states;
        if self.base >= n {
            return Err(Error::Internal("base out of range".into()));
        }
        if self.delta.len() != n * self.stride {
            return Err(Error::Internal("table size mismatch".into()));
        }
        for s in 0..n {
            for slot in 0..self.stride {
                let t = self.delta[s * self.stride + slot];
                if t == NONE {
                    continue;
                }
                if t >= n {
                    return Err(Error::Internal(format!("target out of range at ({s},{slot})")));
                }
                if self.delta[t * self.stride + self.inv_slot(slot)] != s {
                    return Err(Error::Internal(format!("symmetry fails at ({s},{slot})")));
                }
            }
        }
        for s in 0..n {
            for f in 0..self.product.num_factors() {
                let g = self.product.factor(f);
                let row: Vec<(usize, usize)> = (1..g.order())
                    .filter_map(|x| self.delta(s, f, x).map(|t| (x, t)))
                    .collect();
                for &(x, q) in &row {
                    for &(y, r) in &row {
                        if x == y {
                            continue;
                        }
                        let z = g.mul(g.inv(x), y);
                        if self.delta(q, f, z) != Some(r) {
                            return Err(Error::Internal(format!(
                                "saturation fails at state {s}, factor {f}: ({x}->{q}, {y}->{r})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether the orbit of the base of a complete automaton for `H₁` under the
/// words of `gens2` (and their inverses) reaches every state — equivalently,
/// whether `H₁·⟨gens2⟩` is the whole ambient group.
pub fn product_covers_group(a1: &Automaton, gens2: &[Word]) -> Result<bool> {
    if !a1.is_complete() {
        return Err(Error::NotComplete);
    }
    let p = a1.product().clone();
    let mut moves: Vec<Word> = gens2.to_vec();
    moves.extend(gens2.iter().map(|w| p.invert(w)));
    let mut seen = vec![false; a1.num_states()];
    seen[a1.base()] = true;
    let mut queue = VecDeque::from([a1.base()]);
    let mut count = 1;
    while let Some(s) = queue.pop_front() {
        for w in &moves {
            let t = a1.trace(s, w).expect("complete automaton");
            if !seen[t] {
                seen[t] = true;
                count += 1;
                queue.push_back(t);
            }
        }
    }
    Ok(count == a1.num_states())
}

/// All subgroup elements reachable from the generators while every
/// intermediate product stays within `max_len` syllables; closed under
/// inverses. A reference oracle for membership testing, guarded by
/// `max_words`.
pub fn brute_force_elements(
    product: &FreeProduct,
    generators: &[Word],
    max_len: usize,
    max_words: usize,
) -> Result<BTreeSet<Word>> {
    let mut moves: Vec<Word> = generators.to_vec();
    moves.extend(generators.iter().map(|w| product.invert(w)));
    moves.retain(|w| !w.is_empty());
    moves.sort();
    moves.dedup();
    let mut set: BTreeSet<Word> = BTreeSet::new();
    set.insert(Word::empty());
    loop {
        let mut grew = false;
        let mut queue: VecDeque<Word> = set.iter().cloned().collect();
        while let Some(u) = queue.pop_front() {
            for m in &moves {
                let v = product.mul(&u, m);
                if v.len() <= max_len && !set.contains(&v) {
                    if set.len() >= max_words {
                        return Err(Error::GuardExceeded {
                            what: "brute-force closure size",
                            reached: set.len() + 1,
                            limit: max_words,
                        });
                    }
                    set.insert(v.clone());
                    queue.push_back(v);
                    grew = true;
                }
            }
        }
        // close under inverses, then re-close under products if that added any
        let inverses: Vec<Word> = set.iter().map(|w| product.invert(w)).collect();
        for w in inverses {
            if !set.contains(&w) {
                if set.len() >= max_words {
                    return Err(Error::GuardExceeded {
                        what: "brute-force closure size",
                        reached: set.len() + 1,
                        limit: max_words,
                    });
                }
                set.insert(w);
                grew = true;
            }
        }
        if !grew {
            return Ok(set);
        }
    }
}

/// Renumber states canonically: breadth-first from the base, slots ascending.
/// Unreachable states are dropped (constructors never produce any).
fn canonicalize(product: &FreeProduct, delta: &[usize], stride: usize, n: usize, base: usize) -> Automaton {
    let mut order: Vec<usize> = vec![NONE; n];
    let mut bfs: Vec<usize> = Vec::with_capacity(n);
    order[base] = 0;
    bfs.push(base);
    let mut at = 0;
    while at < bfs.len() {
        let s = bfs[at];
        at += 1;
        for slot in 0..stride {
            let t = delta[s * stride + slot];
            if t != NONE && order[t] == NONE {
                order[t] = bfs.len();
                bfs.push(t);
            }
        }
    }
    let m = bfs.len();
    let mut out = vec![NONE; m * stride];
    for (new_s, &old_s) in bfs.iter().enumerate() {
        for slot in 0..stride {
            let t = delta[old_s * stride + slot];
            if t != NONE {
                out[new_s * stride + slot] = order[t];
            }
        }
    }
    Automaton {
        product: product.clone(),
        stride,
        num_states: m,
        base: 0,
        delta: out,
    }
}

/// Union-find folding engine with a deferred-edge worklist.
///
/// Every queued `(p, slot, q)` demand is resolved by [`Folder::do_insert`],
/// which merges on determinism conflicts and enqueues the saturation
/// consequences of every genuinely new edge, so a drained folder satisfies all
/// three automaton invariants.
struct Folder<'p> {
    product: &'p FreeProduct,
    stride: usize,
    parent: Vec<usize>,
    rank: Vec<u8>,
    delta: Vec<usize>,
    pending: VecDeque<(usize, usize, usize)>,
    version: u64,
}

impl<'p> Folder<'p> {
    fn new(product: &'p FreeProduct) -> Self {
        Folder {
            product,
            stride: product.slot_count(),
            parent: Vec::new(),
            rank: Vec::new(),
            delta: Vec::new(),
            pending: VecDeque::new(),
            version: 0,
        }
    }

    fn new_state(&mut self) -> usize {
        let s = self.parent.len();
        self.parent.push(s);
        self.rank.push(0);
        self.delta.extend(std::iter::repeat_n(NONE, self.stride));
        s
    }

    fn num_created(&self) -> usize {
        self.parent.len()
    }

    fn find(&mut self, mut s: usize) -> usize {
        while self.parent[s] != s {
            self.parent[s] = self.parent[self.parent[s]];
            s = self.parent[s];
        }
        s
    }

    /// Resolved transition at a live state, with path-compressed store-back.
    fn lookup(&mut self, p: usize, slot: usize) -> Option<usize> {
        let p = self.find(p);
        let t = self.delta[p * self.stride + slot];
        if t == NONE {
            return None;
        }
        let t = self.find(t);
        self.delta[p * self.stride + slot] = t;
        Some(t)
    }

    fn inv_slot(&self, slot: usize) -> usize {
        let (f, x) = self.product.syllable_of_slot(slot);
        self.product.slot_of(f, self.product.factor(f).inv(x))
    }

    fn enqueue(&mut self, p: usize, slot: usize, q: usize) {
        self.pending.push_back((p, slot, q));
    }

    fn drain(&mut self) {
        while let Some((p, slot, q)) = self.pending.pop_front() {
            self.do_insert(p, slot, q);
        }
    }

    fn do_insert(&mut self, p: usize, slot: usize, q: usize) {
        let p = self.find(p);
        let q = self.find(q);
        if let Some(t) = self.lookup(p, slot) {
            if t != q {
                self.merge(t, q);
            }
            return;
        }
        let islot = self.inv_slot(slot);
        match self.lookup(q, islot) {
            Some(t2) if t2 == p => {
                // the symmetric half already exists; fill the forward half
                self.saturate(p, slot, q);
                self.delta[p * self.stride + slot] = q;
                self.version += 1;
            }
            Some(t2) => {
                // q already maps back to a different state: coincide, retry
                self.merge(t2, p);
                let (p, q) = (self.find(p), self.find(q));
                self.enqueue(p, slot, q);
            }
            None => {
                self.saturate(p, slot, q);
                if p == q && slot == islot {
                    self.delta[p * self.stride + slot] = q;
                } else {
                    self.saturate(q, islot, p);
                    self.delta[p * self.stride + slot] = q;
                    self.delta[q * self.stride + islot] = p;
                }
                self.version += 1;
            }
        }
    }

    /// Enqueue the saturation consequences of the new edge `p --slot--> q`
    /// against every edge currently leaving `p` in the same factor.
    fn saturate(&mut self, p: usize, slot: usize, q: usize) {
        let (f, x) = self.product.syllable_of_slot(slot);
        let g = self.product.factor(f);
        let row: Vec<(usize, usize)> = (1..g.order())
            .filter(|&y| y != x)
            .filter_map(|y| {
                let s = self.product.slot_of(f, y);
                let t = self.delta[p * self.stride + s];
                (t != NONE).then_some((y, t))
            })
            .collect();
        for (y, r) in row {
            let z = g.mul(g.inv(x), y);
            debug_assert_ne!(z, 0);
            self.enqueue(q, self.product.slot_of(f, z), r);
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return;
        }
        let (winner, loser) = if self.rank[a] >= self.rank[b] { (a, b) } else { (b, a) };
        if self.rank[winner] == self.rank[loser] {
            self.rank[winner] += 1;
        }
        self.parent[loser] = winner;
        self.version += 1;
        for slot in 0..self.stride {
            let t = self.delta[loser * self.stride + slot];
            if t != NONE {
                self.delta[loser * self.stride + slot] = NONE;
                self.enqueue(winner, slot, t);
            }
        }
    }

    /// Explicit coincidence of two states (used by coset enumeration).
    fn force_merge(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        self.drain();
    }

    fn is_complete(&mut self) -> bool {
        for s in 0..self.parent.len() {
            if self.find(s) != s {
                continue;
            }
            for slot in 0..self.stride {
                if self.delta[s * self.stride + slot] == NONE {
                    return false;
                }
            }
        }
        true
    }

    fn lowest_undefined(&mut self) -> Option<(usize, usize)> {
        for s in 0..self.parent.len() {
            if self.find(s) != s {
                continue;
            }
            for slot in 0..self.stride {
                if self.delta[s * self.stride + slot] == NONE {
                    return Some((s, slot));
                }
            }
        }
        None
    }

    fn into_automaton(mut self, base: usize) -> Automaton {
        debug_assert!(self.pending.is_empty());
        // freeze: resolve every live row through find
        let created = self.parent.len();
        let mut resolved = vec![NONE; created * self.stride];
        for s in 0..created {
            if self.find(s) != s {
                continue;
            }
            for slot in 0..self.stride {
                let t = self.delta[s * self.stride + slot];
                if t != NONE {
                    resolved[s * self.stride + slot] = self.find(t);
                }
            }
        }
        let base = self.find(base);
        canonicalize(self.product, &resolved, self.stride, created, base)
    }
}

/// Require the loop of `w` at state `s`: trace forward as far as defined,
/// backward from `s` as far as defined, then fill the remaining gap with
/// fresh states (the final edge closing the loop, possibly forcing
/// coincidences).
fn scan_loop(fl: &mut Folder, s: usize, w: &Word) {
    let sylls = w.syllables();
    let len = sylls.len();
    let mut cur = fl.find(s);
    let mut i = 0;
    while i < len {
        let (f, x) = sylls[i];
        match fl.lookup(cur, fl.product.slot_of(f, x)) {
            Some(t) => {
                cur = t;
                i += 1;
            }
            None => break,
        }
    }
    if i == len {
        let home = fl.find(s);
        if cur != home {
            fl.force_merge(cur, home);
        }
        return;
    }
    let mut cur2 = fl.find(s);
    let mut j = len;
    while j > i + 1 {
        let (f, x) = sylls[j - 1];
        let back = fl.product.slot_of(f, fl.product.factor(f).inv(x));
        match fl.lookup(cur2, back) {
            Some(t) => {
                cur2 = t;
                j -= 1;
            }
            None => break,
        }
    }
    // fill positions i..j: cur sits at position i, cur2 at position j
    let mut c = cur;
    for (k, &(f, x)) in sylls.iter().enumerate().take(j).skip(i) {
        let slot = fl.product.slot_of(f, x);
        let target = if k + 1 == j { fl.find(cur2) } else { fl.new_state() };
        let from = fl.find(c);
        fl.enqueue(from, slot, target);
        fl.drain();
        c = fl.find(target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

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
    fn fold_single_generator() {
        let p = z2_z3();
        let a = Automaton::fold(&p, &[w(&p, "ab")]);
        a.validate().unwrap();
        assert_eq!(a.num_states(), 2);
        assert!(!a.is_complete());
        assert_eq!(a.index(), None);
        assert!(a.is_factor_free());
        for s in ["ab", "(ab)^2", "(ab)^-3", "1"] {
            assert!(a.is_member(&w(&p, s)), "{s} should be a member");
        }
        for s in ["ba", "a", "b", "ab^2", "(ab)^2a"] {
            assert!(!a.is_member(&w(&p, s)), "{s} should not be a member");
        }
    }

    #[test]
    fn fold_collapses_to_whole_group() {
        let p = z2_z3();
        // <ab, ab^2> contains b = (ab)^-1(ab^2) and then a: the whole group.
        let a = Automaton::fold(&p, &[w(&p, "ab"), w(&p, "ab^2")]);
        a.validate().unwrap();
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.index(), Some(1));
        assert!(!a.is_factor_free()); // contains factor elements
        assert!(a.is_member(&w(&p, "a")));
        assert!(a.is_member(&w(&p, "b")));
    }

    #[test]
    fn fold_is_canonical_in_generator_order() {
        let p = z2_z3();
        let g1 = [w(&p, "ab"), w(&p, "ba")];
        let g2 = [w(&p, "ba"), w(&p, "ab")];
        assert_eq!(Automaton::fold(&p, &g1), Automaton::fold(&p, &g2));
    }

    #[test]
    fn conjugate_generator_keeps_factor_detection() {
        let p = z2_z3();
        // bab^-1 is a conjugate of a factor element
        let a = Automaton::fold(&p, &[w(&p, "a^(b^-1)")]);
        a.validate().unwrap();
        assert!(!a.is_factor_free());
        assert!(a.is_member(&w(&p, "bab^2")));
        assert!(!a.is_member(&w(&p, "a")));
    }

    #[test]
    fn cayley_kernel_of_s3_map() {
        let p = z2_z3();
        let s3 = FiniteGroup::dihedral(3).unwrap();
        // a -> the reflection s, b -> the rotation r
        let img_a = GroupHom::new(p.factor(0).clone(), s3.clone(), vec![0, 3]).unwrap();
        let img_b = GroupHom::new(p.factor(1).clone(), s3.clone(), vec![0, 1, 2]).unwrap();
        let a = Automaton::cayley(&p, &s3, &[img_a, img_b]).unwrap();
        a.validate().unwrap();
        assert_eq!(a.index(), Some(6));
        assert!(a.is_factor_free());
        // sr is a reflection, so (ab)^2 maps to (sr)^2 = 1
        assert!(a.is_member(&w(&p, "(ab)^2")));
        assert!(!a.is_member(&w(&p, "ab")));
        assert!(a.is_member(&w(&p, "(ab^2)^2")));

        // non-injective factor map is rejected
        let bad = GroupHom::new(p.factor(1).clone(), s3.clone(), vec![0, 0, 0]).unwrap();
        let img_a2 = GroupHom::new(p.factor(0).clone(), s3.clone(), vec![0, 3]).unwrap();
        assert!(matches!(
            Automaton::cayley(&p, &s3, &[img_a2, bad]),
            Err(Error::NotInjective)
        ));

        // injective maps whose joint image generates a proper subgroup are rejected
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let pp = FreeProduct::new(vec![z2.clone(), z2.clone()]).unwrap();
        let v4 = FiniteGroup::direct_product(&z2, &z2);
        let j1 = GroupHom::new(pp.factor(0).clone(), v4.clone(), vec![0, 1]).unwrap();
        let j2 = GroupHom::new(pp.factor(1).clone(), v4.clone(), vec![0, 1]).unwrap();
        assert!(matches!(
            Automaton::cayley(&pp, &v4, &[j1, j2]),
            Err(Error::DoesNotGenerate { got: 2, want: 4 })
        ));
    }

    #[test]
    fn normal_closure_of_b() {
        let p = z2_z3();
        let a = Automaton::normal_closure(&p, &[w(&p, "b")], 100).unwrap();
        a.validate().unwrap();
        assert_eq!(a.index(), Some(2));
        assert!(a.is_member(&w(&p, "b")));
        assert!(a.is_member(&w(&p, "aba")));
        assert!(a.is_member(&w(&p, "ab^2a")));
        assert!(!a.is_member(&w(&p, "a")));
        assert!(!a.is_member(&w(&p, "ab")));
        assert!(a.is_normal(&[w(&p, "b")]).unwrap());
    }

    #[test]
    fn normal_closure_trips_guard_on_infinite_index() {
        let p = z2_z3();
        // normal closure of (ab)^6 has infinite index (quotient is the
        // infinite triangle-type group)
        let res = Automaton::normal_closure(&p, &[w(&p, "(ab)^6")], 200);
        assert!(matches!(res, Err(Error::Indeterminate { .. })));
    }

    #[test]
    fn normal_closure_matches_cayley_kernel() {
        let p = z2_z3();
        // The kernel of Z2*Z3 -> Z6 (a -> 3, b -> 2) is the normal closure of
        // the commutator a b a^-1 b^-1 = abab^2.
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let ia = GroupHom::new(p.factor(0).clone(), z6.clone(), vec![0, 3]).unwrap();
        let ib = GroupHom::new(p.factor(1).clone(), z6.clone(), vec![0, 2, 4]).unwrap();
        let via_cayley = Automaton::cayley(&p, &z6, &[ia, ib]).unwrap();
        let via_closure = Automaton::normal_closure(&p, &[w(&p, "abab^2")], 500).unwrap();
        via_closure.validate().unwrap();
        assert_eq!(via_closure, via_cayley);
    }

    #[test]
    fn intersection_of_cyclic_subgroups_is_trivial() {
        let p = z2_z3();
        let a1 = Automaton::fold(&p, &[w(&p, "ab")]);
        let a2 = Automaton::fold(&p, &[w(&p, "ba")]);
        let i = a1.intersect(&a2).unwrap();
        i.validate().unwrap();
        assert_eq!(i.num_states(), 1);
        assert_eq!(i.transitions_at(0).count(), 0);
        assert!(i.is_member(&Word::empty()));
        assert!(!i.is_member(&w(&p, "ab")));
    }

    #[test]
    fn intersection_with_self_is_identity() {
        let p = z2_z3();
        let a = Automaton::fold(&p, &[w(&p, "ab"), w(&p, "ab^2ab")]);
        let i = a.intersect(&a).unwrap();
        i.validate().unwrap();
        assert_eq!(i, a.core());
        assert_eq!(i, a); // fold output is already cored
    }

    #[test]
    fn core_prunes_pendant_paths() {
        let p = z2_z3();
        // Build a pullback that needs pruning (done inside intersect); also
        // check core() is idempotent on folded graphs.
        let a = Automaton::fold(&p, &[w(&p, "(ab)^2"), w(&p, "b^2a^(b)")]);
        assert_eq!(a.core(), a);
    }

    #[test]
    fn cover_detection() {
        let p = z2_z3();
        let s3 = FiniteGroup::dihedral(3).unwrap();
        let ia = GroupHom::new(p.factor(0).clone(), s3.clone(), vec![0, 3]).unwrap();
        let ib = GroupHom::new(p.factor(1).clone(), s3.clone(), vec![0, 1, 2]).unwrap();
        let k = Automaton::cayley(&p, &s3, &[ia, ib]).unwrap();
        assert!(product_covers_group(&k, &[w(&p, "a"), w(&p, "b")]).unwrap());
        assert!(!product_covers_group(&k, &[w(&p, "a")]).unwrap());
        assert!(!product_covers_group(&k, &[w(&p, "ab")]).unwrap());

        let partial = Automaton::fold(&p, &[w(&p, "ab")]);
        assert!(matches!(product_covers_group(&partial, &[]), Err(Error::NotComplete)));
    }

    #[test]
    fn brute_force_matches_membership_on_small_example() {
        let p = z2_z3();
        let gens = [w(&p, "ab")];
        let a = Automaton::fold(&p, &gens);
        let set = brute_force_elements(&p, &gens, 8, 10_000).unwrap();
        assert_eq!(set.len(), 9); // (ab)^k for k = -4..=4
        for word in &set {
            assert!(a.is_member(word));
        }
    }

    #[test]
    fn normality_detection() {
        let p = z2_z3();
        let s3 = FiniteGroup::dihedral(3).unwrap();
        let ia = GroupHom::new(p.factor(0).clone(), s3.clone(), vec![0, 3]).unwrap();
        let ib = GroupHom::new(p.factor(1).clone(), s3.clone(), vec![0, 1, 2]).unwrap();
        let k = Automaton::cayley(&p, &s3, &[ia, ib]).unwrap();
        // the kernel is normal; (ab)^2 and (ab^2)^2 generate it (rank 2)
        assert!(k.is_normal(&[w(&p, "(ab)^2"), w(&p, "(ab^2)^2")]).unwrap());

        // The preimage of the non-normal reflection subgroup of S3 has
        // index 3, with Schreier generators a, bab, b^2ab^2 — not normal.
        let h = Automaton::fold(&p, &[w(&p, "a"), w(&p, "bab"), w(&p, "b^2ab^2")]);
        h.validate().unwrap();
        assert_eq!(h.index(), Some(3));
        assert!(!h.is_normal(&[w(&p, "a"), w(&p, "bab"), w(&p, "b^2ab^2")]).unwrap());
    }
}
