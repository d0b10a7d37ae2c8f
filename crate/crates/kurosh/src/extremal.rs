//! Families of finite-index subgroup pairs that meet the intersection bounds
//! with equality.
//!
//! Four parametrised constructions are provided, one per ambient shape:
//!
//! 1. `Z_p * Z_2` for an odd prime `p` (tightness factor `2p/(p−2)`),
//! 2. `Z_4 * Z_2` (factor 4),
//! 3. `Z_2 * (Z_2 × Z_2)` (factor 4),
//! 4. `Z_2 * Z_2 * Z_2` (factor 2, all factors of order two).
//!
//! Each construction returns a pair `H₁, H₂` of finite-index factor-free
//! subgroups with `H₁` normal, `H₁H₂` the whole group, and the reduced rank of
//! `H₁ ∩ H₂` exactly equal to the bound. The member `n` of each family makes
//! the reduced rank of the intersection `n` times the product `r̄₁·r̄₂`, which
//! is what [`lift_case`] exploits: over an amalgam whose edge group has order
//! `n`, the `n` deviation classes of the intersection can be realised as the
//! `n` twist values of lifted subgroups, giving equality in the edge-group
//! bound as well.
//!
//! Cases 1 and 2 are search-based: the normal subgroup `H₁` is the kernel of a
//! map to a finite transitive permutation group found by a backtracking scan
//! over coset tables ([`triangle_quotient_search`]), and `H₂` starts from a
//! folded list of words that is completed to finite index by attaching new
//! states along the [`SubgroupGraph::completion_frontier`]. Cases 3 and 4 are
//! closed-form: both subgroups are written down directly at every `n` and the
//! expected index/rank arithmetic is asserted during the build.

use std::collections::BTreeSet;

use crate::amalgam::{tau, AmalgamSpec, LiftedSubgroup};
use crate::automaton::{product_covers_group, Automaton};
use crate::error::{Error, Result};
use crate::graph::SubgroupGraph;
use crate::group::{find_isomorphism, FiniteGroup, GroupHom};
use crate::verify::{intersection_bound, BoundCheck};
use crate::word::{FreeProduct, Word};

/// Maximum group order tolerated when closing the permutations of a candidate
/// coset table into a group; larger closures reject the candidate.
pub const CLOSURE_GUARD: usize = 2048;

/// Maximum number of twist assignments tried by the fallback (non-linear)
/// search in [`lift_case`].
const TWIST_ENUMERATION_GUARD: usize = 4096;

/// A finite transitive permutation quotient of the group
/// `⟨a, b | a^α = b^β = (ab)^γ = 1⟩`.
#[derive(Debug, Clone)]
pub struct TriangleQuotient {
    /// The image group, elements in discovery order (identity first).
    pub group: FiniteGroup,
    /// Number of points of the permutation representation.
    pub degree: usize,
    /// Element index of the image of `a`.
    pub a: usize,
    /// Element index of the image of `b`.
    pub b: usize,
}

/// One member of an extremal family, ready for verification or lifting.
#[derive(Debug, Clone)]
pub struct CaseInstance {
    /// Which construction (1–4).
    pub case: usize,
    /// Family parameter; the edge-group order a lift must match.
    pub n: usize,
    /// Order of the first factor (the prime for case 1, 4 for case 2, 2 for
    /// cases 3 and 4).
    pub p: usize,
    pub product: FreeProduct,
    /// The normal subgroup, as a complete kernel automaton.
    pub h1: Automaton,
    /// The companion subgroup, complete and factor-free.
    pub h2: Automaton,
    /// The distinguished members `w₁, …, w_n` of `H₁ ∩ H₂` whose images under
    /// a lift enumerate the edge group.
    pub w_words: Vec<Word>,
    /// The finite image `G/H₁`.
    pub quotient: FiniteGroup,
    /// Permutation degree of the searched quotient (cases 1 and 2).
    pub triangle_degree: Option<usize>,
    /// Size of the word set the searched quotient must separate (cases 1, 2).
    pub separation_size: Option<usize>,
    /// Number of frontier slots the completion step filled (cases 1 and 2).
    pub frontier_size: Option<usize>,
}

/// The structural facts that make an instance extremal, bundled with the
/// generic bound check.
#[derive(Debug, Clone)]
pub struct SharpnessReport {
    pub bound: BoundCheck,
    /// `H₁` has finite index and is normal.
    pub h1_normal: bool,
    /// `H₁H₂` is the whole group.
    pub covers: bool,
    /// `[G : H₁∩H₂] = [G : H₁]·[G : H₂]`, when the premises for the index
    /// product law hold (`None` when they do not).
    pub index_product_exact: Option<bool>,
    /// Every `w_i` lies in both subgroups.
    pub words_in_both: bool,
}

/// The two lifted subgroups realising equality over an amalgam, plus the
/// transported distinguished words.
#[derive(Debug, Clone)]
pub struct LiftedCase {
    pub h1: LiftedSubgroup,
    pub h2: LiftedSubgroup,
    /// `w_i` rewritten over the amalgam's quotient product, with
    /// `τ(w_i) = t_i⁻¹` enumerating the edge group.
    pub words: Vec<Word>,
}

// ---------------------------------------------------------------------------
// Triangle-quotient search
// ---------------------------------------------------------------------------

const UNDEF: usize = usize::MAX;

/// Partial action of two generators on points `0..n`.
#[derive(Clone)]
struct Tables {
    /// `fwd[g][x]` = image of point `x` under generator `g`.
    fwd: [Vec<usize>; 2],
    /// `bwd[g][y]` = preimage of point `y` under generator `g`.
    bwd: [Vec<usize>; 2],
    n: usize,
}

impl Tables {
    fn new(cap: usize) -> Tables {
        Tables { fwd: [vec![UNDEF; cap], vec![UNDEF; cap]], bwd: [vec![UNDEF; cap], vec![UNDEF; cap]], n: 1 }
    }

    /// Record `g: x ↦ y`; `false` on a clash with an existing entry.
    fn set(&mut self, g: usize, x: usize, y: usize) -> bool {
        match (self.fwd[g][x], self.bwd[g][y]) {
            (UNDEF, UNDEF) => {
                self.fwd[g][x] = y;
                self.bwd[g][y] = x;
                true
            }
            (fx, _) if fx == y => true,
            _ => false,
        }
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        (0..self.n).flat_map(|x| (0..2).map(move |g| (g, x))).find(|&(g, x)| self.fwd[g][x] == UNDEF)
    }
}

/// Close one relator cycle at one point as far as the table allows.
enum Scan {
    /// Cycle fully defined and consistent.
    Closed,
    /// Exactly one gap; it was filled (table changed).
    Deduced,
    /// More than one gap; nothing to conclude.
    Open,
    /// The cycle cannot close.
    Clash,
}

fn scan_relator(t: &mut Tables, rel: &[usize], x: usize) -> Scan {
    let len = rel.len();
    let mut i = 0;
    let mut front = x;
    while i < len && t.fwd[rel[i]][front] != UNDEF {
        front = t.fwd[rel[i]][front];
        i += 1;
    }
    if i == len {
        return if front == x { Scan::Closed } else { Scan::Clash };
    }
    let mut j = len;
    let mut back = x;
    while j > i + 1 && t.bwd[rel[j - 1]][back] != UNDEF {
        back = t.bwd[rel[j - 1]][back];
        j -= 1;
    }
    if j == i + 1 {
        if t.set(rel[i], front, back) {
            Scan::Deduced
        } else {
            Scan::Clash
        }
    } else {
        Scan::Open
    }
}

/// Run relator scans to a fixpoint; `false` on contradiction.
fn deduce(t: &mut Tables, relators: &[Vec<usize>]) -> bool {
    loop {
        let mut changed = false;
        for rel in relators {
            for x in 0..t.n {
                match scan_relator(t, rel, x) {
                    Scan::Clash => return false,
                    Scan::Deduced => changed = true,
                    Scan::Closed | Scan::Open => {}
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn perm_power(p: &[usize], k: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..p.len()).collect();
    for _ in 0..k {
        out = out.iter().map(|&x| p[x]).collect();
    }
    out
}

fn perm_order(p: &[usize]) -> usize {
    let id: Vec<usize> = (0..p.len()).collect();
    let mut cur = p.to_vec();
    let mut k = 1;
    while cur != id {
        cur = cur.iter().map(|&x| p[x]).collect();
        k += 1;
    }
    k
}

/// Permutations in breadth-first discovery order plus their index lookup.
type PermClosure = (Vec<Vec<usize>>, std::collections::BTreeMap<Vec<usize>, usize>);

/// Close a set of permutations into a group; elements in breadth-first
/// discovery order with the identity first. `None` when the closure exceeds
/// `CLOSURE_GUARD` elements.
fn permutation_closure(gens: &[Vec<usize>]) -> Option<PermClosure> {
    let degree = gens[0].len();
    let id: Vec<usize> = (0..degree).collect();
    let mut elements = vec![id.clone()];
    let mut index = std::collections::BTreeMap::new();
    index.insert(id, 0usize);
    let mut head = 0;
    while head < elements.len() {
        let e = elements[head].clone();
        head += 1;
        for g in gens {
            // apply e then g
            let prod: Vec<usize> = e.iter().map(|&x| g[x]).collect();
            if !index.contains_key(&prod) {
                if elements.len() >= CLOSURE_GUARD {
                    return None;
                }
                index.insert(prod.clone(), elements.len());
                elements.push(prod);
            }
        }
    }
    Some((elements, index))
}

/// Find the first (in a fixed backtracking order) transitive permutation
/// representation of `⟨a, b | a^α = b^β = (ab)^γ = 1⟩` on at most
/// `degree_bound` points whose image group
///
/// * restricts injectively to `⟨a⟩` and `⟨b⟩` (the generator images have
///   exact orders `α` and `β`), and
/// * separates the given words: their images must be pairwise distinct.
///
/// The words are read over `product`, whose factors must be cyclic of orders
/// `α` (letter `a`) and `β` (letter `b`). The result is deterministic: the
/// table scan fills the lowest undefined entry first and tries existing
/// points in ascending order before a fresh one.
pub fn triangle_quotient_search(
    orders: (usize, usize, usize),
    separate: &[Word],
    product: &FreeProduct,
    degree_bound: usize,
) -> Result<TriangleQuotient> {
    let (alpha, beta, gamma) = orders;
    if alpha < 2 || beta < 2 || gamma < 2 {
        return Err(Error::InvalidGroup("triangle orders must be at least 2".into()));
    }
    // Spherical parameter triples have finite full quotient groups; the
    // interesting searches are the flat/hyperbolic ones. Both are accepted.
    if product.num_factors() != 2
        || product.factor(0).order() != alpha
        || product.factor(1).order() != beta
    {
        return Err(Error::AmbientMismatch);
    }
    let relators: Vec<Vec<usize>> = vec![
        vec![0; alpha],
        vec![1; beta],
        (0..gamma).flat_map(|_| [0, 1]).collect(),
    ];
    let mut tables = Tables::new(degree_bound);
    if !deduce(&mut tables, &relators) {
        return Err(Error::QuotientNotFound { degree_bound });
    }
    search(&tables, &relators, orders, separate, degree_bound)
        .ok_or(Error::QuotientNotFound { degree_bound })
}

fn search(
    t: &Tables,
    relators: &[Vec<usize>],
    orders: (usize, usize, usize),
    separate: &[Word],
    degree_bound: usize,
) -> Option<TriangleQuotient> {
    match t.first_undefined() {
        None => candidate(t, orders, separate),
        Some((g, x)) => {
            let fresh = (t.n < degree_bound).then_some(t.n);
            let existing = (0..t.n).filter(|&y| t.bwd[g][y] == UNDEF);
            for y in existing.chain(fresh) {
                let mut next = t.clone();
                if y == next.n {
                    next.n += 1;
                }
                if !next.set(g, x, y) || !deduce(&mut next, relators) {
                    continue;
                }
                if let Some(found) = search(&next, relators, orders, separate, degree_bound) {
                    return Some(found);
                }
            }
            None
        }
    }
}

/// Check a complete table and package it as a quotient group.
fn candidate(
    t: &Tables,
    orders: (usize, usize, usize),
    separate: &[Word],
) -> Option<TriangleQuotient> {
    let degree = t.n;
    let pa: Vec<usize> = t.fwd[0][..degree].to_vec();
    let pb: Vec<usize> = t.fwd[1][..degree].to_vec();
    // factor injectivity: generator images of exact order
    if perm_order(&pa) != orders.0 || perm_order(&pb) != orders.1 {
        return None;
    }
    let (elements, index) = permutation_closure(&[pa.clone(), pb.clone()])?;
    // word separation
    let mut images: BTreeSet<Vec<usize>> = BTreeSet::new();
    for w in separate {
        let mut img: Vec<usize> = (0..degree).collect();
        for &(f, x) in w.syllables() {
            let step = perm_power(if f == 0 { &pa } else { &pb }, x);
            img = img.iter().map(|&pt| step[pt]).collect();
        }
        if !images.insert(img) {
            return None;
        }
    }
    let order = elements.len();
    let mut table = vec![vec![0usize; order]; order];
    for (i, e) in elements.iter().enumerate() {
        for (j, f) in elements.iter().enumerate() {
            // apply e then f
            let prod: Vec<usize> = e.iter().map(|&x| f[x]).collect();
            table[i][j] = index[&prod];
        }
    }
    let a = index[&pa];
    let b = index[&pb];
    let group = FiniteGroup::from_table(format!("Q{order}"), table, vec![a, b])
        .expect("permutation closure is a group");
    Some(TriangleQuotient { group, degree, a, b })
}

// ---------------------------------------------------------------------------
// Shared build helpers
// ---------------------------------------------------------------------------

fn parse(product: &FreeProduct, s: &str) -> Word {
    product.parse_word(s).expect("construction words are well-formed")
}

/// `y·x·y⁻¹` — the conjugation orientation of the construction recipes (the
/// filler words below are spelled `z·s·z⁻¹` in the same orientation).
fn lconj(product: &FreeProduct, x: &Word, y: &Word) -> Word {
    product.mul(&product.mul(y, x), &product.invert(y))
}

/// `w_i = ((ab)^6)^{(b a⁻¹ b a⁻²)^{i−1}}` for `i = 1..=n`, the distinguished
/// members shared by cases 1 and 2.
fn distinguished_words_search_cases(product: &FreeProduct, n: usize) -> Vec<Word> {
    let base = parse(product, "(ab)^6");
    let shift = parse(product, "ba^-1ba^-2");
    (0..n).map(|i| lconj(product, &base, &product.pow(&shift, i as i64))).collect()
}

/// Treewords of every state of the fold of `words`, plus the frontier access
/// words, plus the identity and all single-letter words: a quotient that
/// separates this set keeps the listed cosets distinct, which is exactly what
/// the search-based constructions need from their finite image.
fn separation_set(product: &FreeProduct, words: &[Word]) -> Result<Vec<Word>> {
    let graph = SubgroupGraph::new(&Automaton::fold(product, words))?;
    let mut set: BTreeSet<Word> = BTreeSet::new();
    for s in 0..graph.automaton().num_states() {
        set.insert(graph.treeword(s).clone());
    }
    for slot in graph.completion_frontier() {
        set.insert(slot.access);
    }
    set.insert(Word::empty());
    for f in 0..product.num_factors() {
        for x in 1..product.factor(f).order() {
            set.insert(Word::from_normalized(vec![(f, x)]));
        }
    }
    Ok(set.into_iter().collect())
}

fn kernel_from_quotient(product: &FreeProduct, tq: &TriangleQuotient) -> Result<Automaton> {
    let ha = GroupHom::new(
        product.factor(0).clone(),
        tq.group.clone(),
        (0..product.factor(0).order()).map(|k| tq.group.pow(tq.a, k as i64)).collect(),
    )?;
    let hb = GroupHom::new(
        product.factor(1).clone(),
        tq.group.clone(),
        (0..product.factor(1).order()).map(|k| tq.group.pow(tq.b, k as i64)).collect(),
    )?;
    Automaton::cayley(product, &tq.group, &[ha, hb])
}

/// Fold the base words, then saturate: every deficient factor class gets its
/// absent labels filled by the filler words (conjugated into place by the
/// frontier access words). Returns the automaton plus the frontier size.
fn complete_with_fillers(
    product: &FreeProduct,
    base_words: &[Word],
    fillers: &[Word],
) -> Result<(Automaton, usize)> {
    let graph = SubgroupGraph::new(&Automaton::fold(product, base_words))?;
    let frontier = graph.completion_frontier();
    let mut gens: Vec<Word> = base_words.to_vec();
    for slot in &frontier {
        for s in fillers {
            let conj = product.mul(&product.mul(&slot.access, s), &product.invert(&slot.access));
            gens.push(conj);
        }
    }
    let aut = Automaton::fold(product, &gens);
    if !aut.is_complete() {
        return Err(Error::Internal(
            "conjugated fillers did not close the automaton to finite index".into(),
        ));
    }
    Ok((aut, frontier.len()))
}

/// Fold the base words, then join consecutive frontier slots `2j−1, 2j` with
/// a connecting letter: each new edge merges two deficient classes.
fn complete_with_pairing(
    product: &FreeProduct,
    base_words: &[Word],
    connector: &Word,
) -> Result<(Automaton, usize)> {
    let graph = SubgroupGraph::new(&Automaton::fold(product, base_words))?;
    let frontier = graph.completion_frontier();
    if frontier.len() % 2 != 0 {
        return Err(Error::Internal(format!(
            "frontier pairing needs an even boundary, found {} slots",
            frontier.len()
        )));
    }
    let mut gens: Vec<Word> = base_words.to_vec();
    for pair in frontier.chunks(2) {
        let w = product.mul(&product.mul(&pair[0].access, connector), &product.invert(&pair[1].access));
        gens.push(w);
    }
    let aut = Automaton::fold(product, &gens);
    if !aut.is_complete() {
        return Err(Error::Internal(
            "frontier pairing did not close the automaton to finite index".into(),
        ));
    }
    Ok((aut, frontier.len()))
}

fn ensure(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(format!("construction invariant failed: {what}")))
    }
}

fn check_membership(inst: &CaseInstance) -> Result<()> {
    ensure(
        inst.w_words.iter().all(|w| inst.h1.is_member(w)),
        "distinguished words lie in the normal subgroup",
    )?;
    ensure(
        inst.w_words.iter().all(|w| inst.h2.is_member(w)),
        "distinguished words lie in the companion subgroup",
    )
}

// ---------------------------------------------------------------------------
// The four constructions
// ---------------------------------------------------------------------------

fn is_odd_prime(p: usize) -> bool {
    p >= 3 && p % 2 == 1 && (3..p).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn validate_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidGroup("family parameter n must be at least 1".into()));
    }
    Ok(())
}

/// Family over `Z_p * Z_2`, `p` an odd prime. `H₁` is the kernel of the first
/// separating quotient of `⟨a, b | a^p = b² = (ab)⁶ = 1⟩`; `H₂` folds the
/// distinguished words together with two fixed loops and is completed by
/// conjugated fillers `b a^{2i−1} b a^{−2i} b`.
pub fn build_case1(p: usize, n: usize, degree_bound: usize) -> Result<CaseInstance> {
    validate_n(n)?;
    if !is_odd_prime(p) {
        return Err(Error::InvalidGroup(format!("case 1 needs an odd prime, got {p}")));
    }
    let product = FreeProduct::new(vec![FiniteGroup::cyclic(p)?, FiniteGroup::cyclic(2)?])?;
    let w_words = distinguished_words_search_cases(&product, n);
    let separate = separation_set(&product, &w_words)?;
    let tq = triangle_quotient_search((p, 2, 6), &separate, &product, degree_bound)?;
    let h1 = kernel_from_quotient(&product, &tq)?;

    let mut base_words = w_words.clone();
    base_words.push(parse(&product, "(ba)^5"));
    base_words.push(parse(&product, "(ba)^2(ba^-1)^5(ba)^2"));
    let fillers: Vec<Word> = (1..=(p - 1) / 2)
        .map(|i| parse(&product, &format!("ba^{}ba^-{}b", 2 * i - 1, 2 * i)))
        .collect();
    let (h2, frontier) = complete_with_fillers(&product, &base_words, &fillers)?;

    let inst = CaseInstance {
        case: 1,
        n,
        p,
        product,
        h1,
        h2,
        w_words,
        quotient: tq.group.clone(),
        triangle_degree: Some(tq.degree),
        separation_size: Some(separate.len()),
        frontier_size: Some(frontier),
    };
    check_membership(&inst)?;
    Ok(inst)
}

/// Family over `Z_4 * Z_2`. Same skeleton as case 1, but the quotient comes
/// from `⟨a, b | a⁴ = b² = (ab)⁶ = 1⟩`, the folded loops differ, and the
/// completion joins frontier slots in consecutive pairs through the letter
/// `b` (the frontier must have even size).
pub fn build_case2(n: usize, degree_bound: usize) -> Result<CaseInstance> {
    validate_n(n)?;
    let product = FreeProduct::new(vec![FiniteGroup::cyclic(4)?, FiniteGroup::cyclic(2)?])?;
    let w_words = distinguished_words_search_cases(&product, n);
    let separate = separation_set(&product, &w_words)?;
    let tq = triangle_quotient_search((4, 2, 6), &separate, &product, degree_bound)?;
    let h1 = kernel_from_quotient(&product, &tq)?;

    let mut base_words = w_words.clone();
    base_words.push(parse(&product, "(ba)^5"));
    base_words.push(parse(&product, "(ba)^2(ba^2)^5(ba)^2"));
    base_words.push(parse(&product, "(ba^2)^2"));
    let connector = parse(&product, "b");
    let (h2, frontier) = complete_with_pairing(&product, &base_words, &connector)?;

    let inst = CaseInstance {
        case: 2,
        n,
        p: 4,
        product,
        h1,
        h2,
        w_words,
        quotient: tq.group.clone(),
        triangle_degree: Some(tq.degree),
        separation_size: Some(separate.len()),
        frontier_size: Some(frontier),
    };
    check_membership(&inst)?;
    Ok(inst)
}

/// The dihedral-flavoured finite image shared by cases 3 and 4:
/// `D_{n+1} × Z_2` with `a ↦ (s, 0)`, `b ↦ (sr, 0)`, `c ↦ (1, 1)`.
fn dihedral_image(n: usize) -> Result<(FiniteGroup, usize, usize, usize)> {
    let target = FiniteGroup::direct_product(&FiniteGroup::dihedral(n + 1)?, &FiniteGroup::cyclic(2)?);
    let s = 2 * (n + 1); // (reflection s, 0)
    let sr = 2 * (n + 2); // (reflection s·r, 0)
    let z = 1; // (identity, 1)
    Ok((target, s, sr, z))
}

/// Family over `Z_2 * (Z_2 × Z_2)` with letters `a`, `b`, `c` (where `b`, `c`
/// span the second factor). `H₁ = ⟪acac, (ab)^{n+1}⟫` realised as the kernel
/// onto `D_{n+1} × Z_2` and cross-checked against coset enumeration; `H₂`
/// folds the distinguished words and four fixed words, and is complete as
/// written, with rank `n+4` and index `4(n+3)`.
pub fn build_case3(n: usize) -> Result<CaseInstance> {
    validate_n(n)?;
    let z2 = FiniteGroup::cyclic(2)?;
    let v4 = FiniteGroup::direct_product(&z2, &z2);
    let product = FreeProduct::new(vec![z2.clone(), v4.clone()])?;
    let (target, s, sr, z) = dihedral_image(n)?;
    let ha = GroupHom::new(z2.clone(), target.clone(), vec![0, s])?;
    // second-factor elements: 0 = 1, 1 = c, 2 = b, 3 = bc
    let hbc = GroupHom::new(v4, target.clone(), vec![0, z, sr, target.mul(sr, z)])?;
    let h1 = Automaton::cayley(&product, &target, &[ha, hbc])?;
    let closure_words = vec![parse(&product, "acac"), parse(&product, &format!("(ab)^{}", n + 1))];
    let enumerated = Automaton::normal_closure(&product, &closure_words, 10_000)?;
    ensure(enumerated == h1, "kernel automaton matches the enumerated normal closure")?;

    let acac = parse(&product, "acac");
    let ba = parse(&product, "ba");
    let b = parse(&product, "b");
    let w_words: Vec<Word> = (0..n)
        .map(|i| lconj(&product, &acac, &product.mul(&product.pow(&ba, i as i64), &b)))
        .collect();
    let mut gens = w_words.clone();
    gens.push(lconj(&product, &parse(&product, "ab"), &acac));
    gens.push(parse(&product, "acababa"));
    gens.push(parse(&product, "abcac"));
    gens.push(lconj(&product, &parse(&product, "ac"), &product.mul(&product.pow(&ba, n as i64), &b)));
    let h2 = Automaton::fold(&product, &gens).core();
    ensure(h2.is_complete(), "companion subgroup has finite index as written")?;
    ensure(h1.index() == Some(4 * (n + 1)), "normal subgroup index is 4(n+1)")?;
    ensure(h2.index() == Some(4 * (n + 3)), "companion index is 4(n+3)")?;
    ensure(SubgroupGraph::new(&h2)?.rank() == n + 4, "companion rank is n+4")?;

    let inst = CaseInstance {
        case: 3,
        n,
        p: 2,
        product,
        h1,
        h2,
        w_words,
        quotient: target,
        triangle_degree: None,
        separation_size: None,
        frontier_size: None,
    };
    check_membership(&inst)?;
    Ok(inst)
}

/// Family over `Z_2 * Z_2 * Z_2`. `H₁ = ⟪bcbc, acac, (ab)^{n+1}⟫`, again the
/// kernel onto `D_{n+1} × Z_2`; `H₂` extends the case-3 word list by the
/// conjugates of `bcbc` under `{(ba)^j, a, aca}`, giving rank `2n+7` and
/// index `4(n+3)`.
pub fn build_case4(n: usize) -> Result<CaseInstance> {
    validate_n(n)?;
    let z2 = FiniteGroup::cyclic(2)?;
    let product = FreeProduct::new(vec![z2.clone(), z2.clone(), z2.clone()])?;
    let (target, s, sr, z) = dihedral_image(n)?;
    let ha = GroupHom::new(z2.clone(), target.clone(), vec![0, s])?;
    let hb = GroupHom::new(z2.clone(), target.clone(), vec![0, sr])?;
    let hc = GroupHom::new(z2.clone(), target.clone(), vec![0, z])?;
    let h1 = Automaton::cayley(&product, &target, &[ha, hb, hc])?;
    let closure_words = vec![
        parse(&product, "bcbc"),
        parse(&product, "acac"),
        parse(&product, &format!("(ab)^{}", n + 1)),
    ];
    let enumerated = Automaton::normal_closure(&product, &closure_words, 10_000)?;
    ensure(enumerated == h1, "kernel automaton matches the enumerated normal closure")?;

    let acac = parse(&product, "acac");
    let bcbc = parse(&product, "bcbc");
    let ba = parse(&product, "ba");
    let b = parse(&product, "b");
    let w_words: Vec<Word> = (0..n)
        .map(|i| lconj(&product, &acac, &product.mul(&product.pow(&ba, i as i64), &b)))
        .collect();
    let mut gens = w_words.clone();
    gens.push(lconj(&product, &parse(&product, "ab"), &acac));
    gens.push(parse(&product, "acababa"));
    gens.push(parse(&product, "abcac"));
    gens.push(lconj(&product, &parse(&product, "ac"), &product.mul(&product.pow(&ba, n as i64), &b)));
    for j in 0..=n {
        gens.push(lconj(&product, &bcbc, &product.pow(&ba, j as i64)));
    }
    gens.push(lconj(&product, &bcbc, &parse(&product, "a")));
    gens.push(lconj(&product, &bcbc, &parse(&product, "aca")));
    let h2 = Automaton::fold(&product, &gens).core();
    ensure(h2.is_complete(), "companion subgroup has finite index as written")?;
    ensure(h1.index() == Some(4 * (n + 1)), "normal subgroup index is 4(n+1)")?;
    ensure(h2.index() == Some(4 * (n + 3)), "companion index is 4(n+3)")?;
    ensure(SubgroupGraph::new(&h2)?.rank() == 2 * n + 7, "companion rank is 2n+7")?;

    let inst = CaseInstance {
        case: 4,
        n,
        p: 2,
        product,
        h1,
        h2,
        w_words,
        quotient: target,
        triangle_degree: None,
        separation_size: None,
        frontier_size: None,
    };
    check_membership(&inst)?;
    Ok(inst)
}

/// Build one family member. `p` is only meaningful for case 1 (default 3).
pub fn build_case(case: usize, n: usize, p: Option<usize>, degree_bound: usize) -> Result<CaseInstance> {
    match case {
        1 => build_case1(p.unwrap_or(3), n, degree_bound),
        2 => build_case2(n, degree_bound),
        3 => build_case3(n),
        4 => build_case4(n),
        other => Err(Error::InvalidGroup(format!("unknown construction {other}, expected 1-4"))),
    }
}

// ---------------------------------------------------------------------------
// Verification and lifting
// ---------------------------------------------------------------------------

/// Check everything that makes an instance extremal: the generic bound (with
/// its equality flag), normality of `H₁`, the product covering `H₁H₂ = G`,
/// exactness of the index product, and membership of the distinguished words.
pub fn verify_sharpness(inst: &CaseInstance) -> Result<(SharpnessReport, [SubgroupGraph; 3])> {
    let (bound, graphs) = intersection_bound(&inst.h1, &inst.h2)?;
    let h1_normal = inst.h1.is_complete() && inst.h1.is_normal(graphs[0].basis())?;
    let covers = product_covers_group(&inst.h1, graphs[1].basis())?;
    let index_product_exact = match (h1_normal && covers, bound.index1, bound.index2, bound.index_intersection) {
        (true, Some(i1), Some(i2), Some(ii)) => Some(ii == i1 * i2),
        _ => None,
    };
    let words_in_both = inst.w_words.iter().all(|w| inst.h1.is_member(w) && inst.h2.is_member(w));
    Ok((
        SharpnessReport { bound, h1_normal, covers, index_product_exact, words_in_both },
        graphs,
    ))
}

/// Solve `A·x ≡ b (mod m)` for prime `m`; any one solution, free variables 0.
fn solve_mod_prime(mut a: Vec<Vec<i64>>, mut b: Vec<i64>, m: i64) -> Option<Vec<i64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let md = |v: i64| v.rem_euclid(m);
    let inv = |v: i64| -> i64 {
        // Fermat: v^(m-2) mod m
        let mut acc = 1i64;
        let mut base = md(v);
        let mut e = m - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc
    };
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| md(a[i][c]) != 0) else { continue };
        a.swap(r, pr);
        b.swap(r, pr);
        let scale = inv(a[r][c]);
        for v in &mut a[r] {
            *v = md(*v * scale);
        }
        b[r] = md(b[r] * scale);
        let pivot_row = a[r].clone();
        for i in 0..rows {
            if i != r && md(a[i][c]) != 0 {
                let factor = md(a[i][c]);
                for (v, &p) in a[i].iter_mut().zip(&pivot_row) {
                    *v = md(*v - factor * p);
                }
                b[i] = md(b[i] - factor * b[r]);
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| md(b[i]) != 0) {
        return None;
    }
    let mut x = vec![0i64; cols];
    for &(row, col) in &pivots {
        x[col] = b[row];
    }
    Some(x)
}

fn is_prime(m: usize) -> bool {
    m >= 2 && (2..m).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

/// Whether the embedded edge group is central in side `side` of the amalgam.
fn edge_group_central(am: &AmalgamSpec, side: usize) -> bool {
    let g = am.side(side);
    let emb = am.embedding(side);
    (0..g.order()).all(|x| (0..am.t().order()).all(|t| {
        let e = emb.apply(t);
        g.mul(x, e) == g.mul(e, x)
    }))
}

/// Realise an instance over an amalgam whose edge group has order `n`.
///
/// The instance's ambient factors are matched to the amalgam's vertex-group
/// quotients by isomorphism search and the automata transported accordingly.
/// `H₁` lifts with zero twists; the twists of `H₂` are solved for so that the
/// lift deviations of the distinguished words enumerate the whole edge group
/// (`τ(w_i) = t_i⁻¹` over the edge group's elements in index order). When the
/// edge group is central on both sides and of prime order the twists come
/// from a linear solve; otherwise a bounded exhaustive search runs.
pub fn lift_case(am: &AmalgamSpec, inst: &CaseInstance) -> Result<LiftedCase> {
    if inst.product.num_factors() != 2 {
        return Err(Error::AmalgamMismatch(
            "only two-factor instances can be lifted over an amalgam".into(),
        ));
    }
    if am.t().order() != inst.n {
        return Err(Error::AmalgamMismatch(format!(
            "edge group has order {}, instance needs {}",
            am.t().order(),
            inst.n
        )));
    }
    let mut isos: Vec<Vec<usize>> = Vec::with_capacity(2);
    for f in 0..2 {
        let iso = find_isomorphism(inst.product.factor(f), &am.quotient(f).group).ok_or_else(|| {
            Error::AmalgamMismatch(format!(
                "instance factor {f} is not isomorphic to the amalgam's side-{f} quotient"
            ))
        })?;
        isos.push(iso);
    }
    let qp = am.quotient_product();
    let h1t = inst.h1.relabel(qp, &isos)?;
    let h2t = inst.h2.relabel(qp, &isos)?;
    let words: Vec<Word> = inst
        .w_words
        .iter()
        .map(|w| Word::from_normalized(w.syllables().iter().map(|&(f, x)| (f, isos[f][x])).collect()))
        .collect();

    let rank1 = SubgroupGraph::new(&h1t)?.rank();
    let graph2 = SubgroupGraph::new(&h2t)?;
    let rank2 = graph2.rank();
    let h1 = LiftedSubgroup::new(am, &h1t, vec![0; rank1])?;
    let zero2 = LiftedSubgroup::new(am, &h2t, vec![0; rank2])?;

    let t = am.t();
    let m = t.order();
    // target: τ(w_i) = (t_i)⁻¹ with t_1, …, t_n the edge group in index order
    let mut coeffs: Vec<Vec<i64>> = Vec::with_capacity(words.len());
    let mut rhs: Vec<i64> = Vec::with_capacity(words.len());
    let mut zero_dev: Vec<usize> = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        let d = tau(am, &h1, &zero2, w)?;
        zero_dev.push(d);
        let mut row = vec![0i64; rank2];
        for (k, inverted) in graph2.express_in_basis(w)? {
            row[k] += if inverted { -1 } else { 1 };
        }
        coeffs.push(row);
        rhs.push(t.mul(d, i) as i64);
    }

    let central = edge_group_central(am, 0) && edge_group_central(am, 1);
    let twists: Vec<usize> = if central && t.is_cyclic() && is_prime(m) {
        // In the additive cyclic edge group: Σ_k c_ik·x_k = d_i + t_i.
        let solved = solve_mod_prime(coeffs, rhs, m as i64).ok_or(Error::TwistSearchFailed)?;
        solved.into_iter().map(|v| v.rem_euclid(m as i64) as usize).collect()
    } else {
        let total = (m as u128).checked_pow(rank2 as u32).unwrap_or(u128::MAX);
        if total > TWIST_ENUMERATION_GUARD as u128 {
            return Err(Error::TwistSearchFailed);
        }
        let mut found: Option<Vec<usize>> = None;
        let mut assignment = vec![0usize; rank2];
        'outer: loop {
            let cand = LiftedSubgroup::new(am, &h2t, assignment.clone())?;
            if words
                .iter()
                .enumerate()
                .all(|(i, w)| tau(am, &h1, &cand, w).map(|v| v == t.inv(i)).unwrap_or(false))
            {
                found = Some(assignment.clone());
                break;
            }
            // increment odometer
            for slot in (0..rank2).rev() {
                assignment[slot] += 1;
                if assignment[slot] < m {
                    continue 'outer;
                }
                assignment[slot] = 0;
            }
            break;
        }
        found.ok_or(Error::TwistSearchFailed)?
    };

    let h2 = LiftedSubgroup::new(am, &h2t, twists)?;
    for (i, w) in words.iter().enumerate() {
        if tau(am, &h1, &h2, w)? != t.inv(i) {
            return Err(Error::Internal("twist solve produced mismatched lift deviations".into()));
        }
    }
    Ok(LiftedCase { h1, h2, words })
}
