//! Finite groups as validated Cayley tables.
//!
//! A [`FiniteGroup`] is a multiplication table over element indices `0..n` with the
//! identity pinned at index `0`. Construction always validates: the table must be a
//! Latin square with two-sided identity `0`, and associativity is checked with
//! Light's test against a generating set (full O(n³) verification for tiny tables).
//!
//! Beyond the table itself this module provides the two quantities that drive the
//! rank bounds elsewhere in the crate:
//!
//! * [`q_star`] — the minimum order `> 2` of a subgroup of any of the given groups
//!   (infinite when every proper subgroup has order ≤ 2, i.e. all groups are
//!   elementary abelian 2-groups of rank ≤ 1... in practice: all factors `Z2`).
//!   Computed twice, by exhaustive subgroup enumeration and by a Sylow-type closed
//!   form (minimum over odd primes dividing some order, and 4 when 4 divides some
//!   order), and the two answers are required to agree.
//! * [`coefficient`] — the exact rational `2q/(q-2)`, which degrades to `2` as
//!   `q → ∞`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest group order accepted by the exhaustive subgroup-spectrum search.
pub const SPECTRUM_ORDER_GUARD: usize = 512;
/// Cap on the number of distinct subgroups the spectrum search will enumerate.
const SPECTRUM_COUNT_GUARD: usize = 100_000;

/// A finite group presented by its full multiplication table.
///
/// Invariants (enforced by every constructor):
/// * element `0` is the identity;
/// * the table is a Latin square;
/// * multiplication is associative;
/// * `inverse[g]` is the two-sided inverse of `g`.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    /// Row-major: `table[a * order + b] = a * b`.
    table: Vec<usize>,
    inverse: Vec<usize>,
    /// Distinguished generators, used to assign display letters in free products.
    gens: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

/// Structural equality: same order and same table. Names and distinguished
/// generators are presentation metadata and do not participate.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validate and wrap an explicit multiplication table.
    ///
    /// `gens` may be empty, in which case a small generating set is computed
    /// greedily (ascending element order) and used both for Light's
    /// associativity test and as the display generators.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>, gens: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidGroup(format!("entry {v} out of range")));
                }
                flat.push(v);
            }
        }
        Self::from_flat(name.into(), n, flat, gens)
    }

    fn from_flat(name: String, n: usize, table: Vec<usize>, mut gens: Vec<usize>) -> Result<Self> {
        // Two-sided identity at 0.
        for g in 0..n {
            if table[g] != g || table[g * n] != g {
                return Err(Error::InvalidGroup("element 0 is not a two-sided identity".into()));
            }
        }
        // Latin square.
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let v = table[a * n + b];
                if seen[v] {
                    return Err(Error::InvalidGroup(format!("row {a} repeats entry {v}")));
                }
                seen[v] = true;
            }
        }
        for b in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..n {
                let v = table[a * n + b];
                if seen[v] {
                    return Err(Error::InvalidGroup(format!("column {b} repeats entry {v}")));
                }
                seen[v] = true;
            }
        }
        // Inverses (each row contains 0 exactly once by the Latin property).
        let mut inverse = vec![0usize; n];
        for a in 0..n {
            let b = (0..n).find(|&b| table[a * n + b] == 0).unwrap();
            if table[b * n + a] != 0 {
                return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse")));
            }
            inverse[a] = b;
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        if gens.is_empty() {
            gens = greedy_generators(n, mul);
        } else {
            for &g in &gens {
                if g >= n {
                    return Err(Error::InvalidGroup(format!("generator {g} out of range")));
                }
            }
            let cl = closure_under(n, mul, &gens);
            if cl.len() != n {
                // Distinguished generators must actually generate; otherwise fall back.
                return Err(Error::InvalidGroup("declared generators do not generate".into()));
            }
        }
        // Associativity. Full check for small tables, Light's test (sound with a
        // verified generating set) above the cutoff.
        let assoc_gens: Vec<usize> = if n <= 24 { (0..n).collect() } else { greedy_generators(n, mul) };
        for &g in &assoc_gens {
            for a in 0..n {
                let ag = mul(a, g);
                for b in 0..n {
                    if mul(ag, b) != mul(a, mul(g, b)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}*{g})*{b}"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { name, order: n, table, inverse, gens })
    }

    /// Internal constructor for tables that are correct by construction
    /// (products of validated groups, permutation closures, quotients).
    /// Debug builds still run the full validation.
    fn from_flat_trusted(name: String, n: usize, table: Vec<usize>, gens: Vec<usize>) -> Self {
        #[cfg(debug_assertions)]
        {
            Self::from_flat(name.clone(), n, table.clone(), gens.clone())
                .expect("internally constructed table must validate")
        }
        #[cfg(not(debug_assertions))]
        {
            let mul = |a: usize, b: usize| table[a * n + b];
            let mut inverse = vec![0usize; n];
            for a in 0..n {
                inverse[a] = (0..n).find(|&b| mul(a, b) == 0).unwrap();
            }
            let gens = if gens.is_empty() { greedy_generators(n, mul) } else { gens };
            FiniteGroup { name, order: n, table, inverse, gens }
        }
    }

    /// Cyclic group of order `n`, generated by element `1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push((a + b) % n);
            }
        }
        let gens = if n > 1 { vec![1] } else { vec![] };
        Ok(Self::from_flat_trusted(format!("Z{n}"), n, table, gens))
    }

    /// Dihedral group of order `2n`: elements `0..n` are the rotations
    /// `r^0..r^(n-1)`, elements `n..2n` are the reflections `s·r^0..s·r^(n-1)`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("dihedral group D0".into()));
        }
        let m = 2 * n;
        let mut table = vec![0usize; m * m];
        let idx = |refl: bool, i: usize| if refl { n + i } else { i };
        for i in 0..n {
            for j in 0..n {
                // r^i * r^j = r^(i+j)
                table[idx(false, i) * m + idx(false, j)] = idx(false, (i + j) % n);
                // r^i * s r^j = s r^(j-i)
                table[idx(false, i) * m + idx(true, j)] = idx(true, (j + n - i) % n);
                // s r^i * r^j = s r^(i+j)
                table[idx(true, i) * m + idx(false, j)] = idx(true, (i + j) % n);
                // s r^i * s r^j = r^(j-i)
                table[idx(true, i) * m + idx(true, j)] = idx(false, (j + n - i) % n);
            }
        }
        let gens = if n > 1 { vec![1, n] } else { vec![n] };
        Ok(Self::from_flat_trusted(format!("D{n}"), m, table, gens))
    }

    /// Direct product; element `(a, b)` gets index `a * |B| + b`.
    /// Display generators are the generators of both factors, embedded.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0usize; n * n];
        for xa in 0..na {
            for xb in 0..nb {
                for ya in 0..na {
                    for yb in 0..nb {
                        let x = xa * nb + xb;
                        let y = ya * nb + yb;
                        table[x * n + y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
                    }
                }
            }
        }
        let mut gens: Vec<usize> = a.gens.iter().map(|&g| g * nb).collect();
        gens.extend(b.gens.iter().copied());
        Self::from_flat_trusted(format!("{}x{}", a.name, b.name), n, table, gens)
    }

    /// Quotient by a normal subgroup given as an element set.
    ///
    /// Cosets are numbered by their smallest member, ascending, which puts the
    /// coset of the identity at index 0. Returns the quotient group together
    /// with the projection (`coset_of`) and the canonical section (`section`,
    /// smallest element of each coset).
    pub fn quotient(&self, normal: &[usize]) -> Result<Quotient> {
        let n = self.order;
        let nset: BTreeSet<usize> = normal.iter().copied().collect();
        if !nset.contains(&0) {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        for &a in &nset {
            if a >= n {
                return Err(Error::InvalidGroup(format!("element {a} out of range")));
            }
            for &b in &nset {
                if !nset.contains(&self.mul(a, b)) {
                    return Err(Error::InvalidGroup("subset is not closed under multiplication".into()));
                }
            }
        }
        for g in 0..n {
            for &t in &nset {
                let conj = self.mul(self.mul(g, t), self.inv(g));
                if !nset.contains(&conj) {
                    return Err(Error::NotNormal(self.name.clone()));
                }
            }
        }
        // Enumerate cosets Ng; identify each by its smallest member.
        let mut coset_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(g); // g is the smallest member: anything smaller was already visited
            for &t in &nset {
                coset_of[self.mul(t, g)] = id;
            }
        }
        let q = reps.len();
        let mut table = vec![0usize; q * q];
        for (i, &gi) in reps.iter().enumerate() {
            for (j, &gj) in reps.iter().enumerate() {
                table[i * q + j] = coset_of[self.mul(gi, gj)];
            }
        }
        let mut gens: Vec<usize> = Vec::new();
        for &g in &self.gens {
            let img = coset_of[g];
            if img != 0 && !gens.contains(&img) {
                gens.push(img);
            }
        }
        let name = format!("{}/N{}", self.name, nset.len());
        let mul = |a: usize, b: usize| table[a * q + b];
        if closure_under(q, mul, &gens).len() != q {
            gens = greedy_generators(q, mul);
        }
        let group = Self::from_flat_trusted(name, q, table, gens);
        Ok(Quotient { group, coset_of, section: reps })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g^k` for any integer `k`.
    pub fn pow(&self, g: usize, k: i64) -> usize {
        let (base, mut k) = if k < 0 { (self.inv(g), (-k) as u64) } else { (g, k as u64) };
        let mut acc = 0usize;
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Distinguished generators (used for display letters in free products).
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|g| self.element_order(g) == self.order)
    }

    /// Orders of all subgroups, by exhaustive closure over the subgroup lattice.
    ///
    /// Guarded: group order ≤ 512 and at most 100 000 subgroups enumerated.
    pub fn subgroup_order_spectrum(&self) -> Result<BTreeSet<usize>> {
        let n = self.order;
        if n > SPECTRUM_ORDER_GUARD {
            return Err(Error::GuardExceeded {
                what: "subgroup spectrum group order",
                reached: n,
                limit: SPECTRUM_ORDER_GUARD,
            });
        }
        let mul = |a: usize, b: usize| self.mul(a, b);
        let trivial: Vec<usize> = vec![0];
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        seen.insert(trivial.clone());
        queue.push_back(trivial);
        let mut spectrum = BTreeSet::new();
        spectrum.insert(1);
        while let Some(h) = queue.pop_front() {
            for g in 1..n {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let bigger = closure_under(n, mul, &gens);
                if seen.insert(bigger.clone()) {
                    if seen.len() > SPECTRUM_COUNT_GUARD {
                        return Err(Error::GuardExceeded {
                            what: "subgroup spectrum subgroup count",
                            reached: seen.len(),
                            limit: SPECTRUM_COUNT_GUARD,
                        });
                    }
                    spectrum.insert(bigger.len());
                    queue.push_back(bigger);
                }
            }
        }
        Ok(spectrum)
    }
}

/// Closure of a subset under the group operation, returned sorted.
pub(crate) fn closure_under(n: usize, mul: impl Fn(usize, usize) -> usize, gens: &[usize]) -> Vec<usize> {
    let mut in_set = vec![false; n];
    in_set[0] = true;
    let mut elems = vec![0usize];
    let mut frontier: Vec<usize> = Vec::new();
    for &g in gens {
        if !in_set[g] {
            in_set[g] = true;
            elems.push(g);
            frontier.push(g);
        }
    }
    while let Some(x) = frontier.pop() {
        // multiply on both sides by every current member (inverses arrive for free
        // in a finite group: powers of x eventually hit them)
        let snapshot: Vec<usize> = elems.clone();
        for &y in &snapshot {
            for v in [mul(x, y), mul(y, x)] {
                if !in_set[v] {
                    in_set[v] = true;
                    elems.push(v);
                    frontier.push(v);
                }
            }
        }
    }
    elems.sort_unstable();
    elems
}

/// Small generating set, found greedily: repeatedly adjoin the least element
/// outside the current closure.
fn greedy_generators(n: usize, mul: impl Fn(usize, usize) -> usize + Copy) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut cl = closure_under(n, mul, &gens);
    while cl.len() < n {
        let missing = (0..n).find(|g| cl.binary_search(g).is_err()).unwrap();
        gens.push(missing);
        cl = closure_under(n, mul, &gens);
    }
    gens
}

/// A quotient group together with the projection and its canonical section.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `coset_of[g]` = index of the coset containing `g`.
    pub coset_of: Vec<usize>,
    /// `section[q]` = smallest element of coset `q` (so `section[0] = 0`).
    pub section: Vec<usize>,
}

/// A homomorphism between finite groups, stored as the image of every element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    image: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.order() {
            return Err(Error::NotHomomorphism(format!(
                "image vector has length {}, source has order {}",
                image.len(),
                source.order()
            )));
        }
        for &v in &image {
            if v >= target.order() {
                return Err(Error::NotHomomorphism(format!("image {v} out of range")));
            }
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if image[source.mul(a, b)] != target.mul(image[a], image[b]) {
                    return Err(Error::NotHomomorphism(format!(
                        "f({a}*{b}) != f({a})*f({b})"
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, image })
    }

    /// Extend `letter -> image` assignments on the distinguished generators to a
    /// full homomorphism (fails if the assignment is inconsistent).
    pub fn from_generator_images(
        source: FiniteGroup,
        target: FiniteGroup,
        gen_images: &[(usize, usize)],
    ) -> Result<Self> {
        let n = source.order();
        let mut image = vec![usize::MAX; n];
        image[0] = 0;
        // BFS over the source, extending multiplicatively.
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);
        let mut pending = true;
        while pending {
            pending = false;
            let mut progressed = false;
            while let Some(x) = queue.pop_front() {
                for &(g, img_g) in gen_images {
                    let y = source.mul(x, g);
                    let img_y = target.mul(image[x], img_g);
                    if image[y] == usize::MAX {
                        image[y] = img_y;
                        queue.push_back(y);
                        progressed = true;
                    } else if image[y] != img_y {
                        return Err(Error::NotHomomorphism(
                            "generator images are inconsistent".into(),
                        ));
                    }
                }
            }
            if image.contains(&usize::MAX) {
                if !progressed {
                    return Err(Error::NotHomomorphism(
                        "generator images do not reach the whole source".into(),
                    ));
                }
                pending = true;
                for (x, &v) in image.iter().enumerate() {
                    if v != usize::MAX {
                        queue.push_back(x);
                    }
                }
            }
        }
        GroupHom::new(source, target, image)
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn apply(&self, g: usize) -> usize {
        self.image[g]
    }

    pub fn image_vec(&self) -> &[usize] {
        &self.image
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.image.iter().all(|&v| {
            if seen[v] {
                false
            } else {
                seen[v] = true;
                true
            }
        })
    }
}

/// Minimum order `> 2` of a subgroup of any of the groups; `Infinite` when no
/// such subgroup exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QStar {
    Finite(usize),
    Infinite,
}

impl fmt::Display for QStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QStar::Finite(q) => write!(f, "{q}"),
            QStar::Infinite => write!(f, "inf"),
        }
    }
}

/// Compute [`QStar`] over a family of finite groups.
///
/// Two independent routes must agree:
/// * spectrum route — exhaustive subgroup enumeration per group;
/// * closed form — `min({odd primes dividing some order} ∪ {4 if 4 divides some order})`,
///   which is exactly the attainable minimum by Cauchy's theorem (odd prime order
///   subgroups) and the subgroup structure of 2-groups (order-4 subgroups).
pub fn q_star(groups: &[&FiniteGroup]) -> Result<QStar> {
    let mut best: Option<usize> = None;
    for g in groups {
        for &k in g.subgroup_order_spectrum()?.iter() {
            if k > 2 {
                best = Some(best.map_or(k, |b| b.min(k)));
                break; // spectrum is sorted ascending
            }
        }
    }
    let spectrum_route = best.map_or(QStar::Infinite, QStar::Finite);

    let mut closed: Option<usize> = None;
    for g in groups {
        let mut n = g.order();
        let mut two = 0u32;
        while n % 2 == 0 {
            n /= 2;
            two += 1;
        }
        if two >= 2 {
            closed = Some(closed.map_or(4, |b| b.min(4)));
        }
        let mut p = 3;
        while p * p <= n {
            if n % p == 0 {
                closed = Some(closed.map_or(p, |b| b.min(p)));
                break;
            }
            p += 2;
        }
        if p * p > n && n > 1 {
            closed = Some(closed.map_or(n, |b| b.min(n)));
        }
    }
    let closed_route = closed.map_or(QStar::Infinite, QStar::Finite);

    if spectrum_route != closed_route {
        return Err(Error::Internal(format!(
            "q* routes disagree: spectrum {spectrum_route}, closed form {closed_route}"
        )));
    }
    Ok(spectrum_route)
}

/// The exact rational `2q/(q-2)`; `2` when `q` is infinite.
pub fn coefficient(q: QStar) -> Result<Ratio<i64>> {
    match q {
        QStar::Infinite => Ok(Ratio::from_integer(2)),
        QStar::Finite(q) if q > 2 => Ok(Ratio::new(2 * q as i64, q as i64 - 2)),
        QStar::Finite(q) => Err(Error::InvalidGroup(format!(
            "coefficient undefined for q = {q}"
        ))),
    }
}

/// Search for an isomorphism, returned as the image vector of every element of
/// `a`. Deterministic: candidates are tried in ascending element order, first
/// match wins. `None` when no isomorphism exists.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    let gens = if a.gens.is_empty() { greedy_generators(a.order, |x, y| a.mul(x, y)) } else { a.gens.clone() };
    let mut assignment: Vec<usize> = Vec::new();
    fn extend(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], assignment: &mut Vec<usize>) -> Option<Vec<usize>> {
        if assignment.len() == gens.len() {
            let pairs: Vec<(usize, usize)> = gens.iter().copied().zip(assignment.iter().copied()).collect();
            if let Ok(h) = GroupHom::from_generator_images(a.clone(), b.clone(), &pairs) {
                if h.is_injective() {
                    return Some(h.image_vec().to_vec());
                }
            }
            return None;
        }
        let g = gens[assignment.len()];
        let want = a.element_order(g);
        for cand in 0..b.order() {
            if b.element_order(cand) != want {
                continue;
            }
            assignment.push(cand);
            if let Some(found) = extend(a, b, gens, assignment) {
                return Some(found);
            }
            assignment.pop();
        }
        None
    }
    extend(a, b, &gens, &mut assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_dihedral_tables_validate() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(z6.order(), 6);
        assert_eq!(z6.mul(4, 5), 3);
        assert_eq!(z6.inv(2), 4);
        assert!(z6.is_abelian());

        let d3 = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(d3.order(), 6);
        assert!(!d3.is_abelian());
        // s * s = 1, s r * s r = 1: all reflections are involutions
        for i in 3..6 {
            assert_eq!(d3.element_order(i), 2);
        }
        assert_eq!(d3.element_order(1), 3);
        // r * s = s * r^{-1}
        assert_eq!(d3.mul(1, 3), d3.mul(3, d3.inv(1)));
    }

    #[test]
    fn from_table_rejects_bad_tables() {
        // Latin square with right identity only.
        let sub3 = vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]];
        assert!(FiniteGroup::from_table("sub3", sub3, vec![]).is_err());

        // Order-5 loop: Latin square with identity and inverses, but not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table("loop5", loop5, vec![]) {
            Err(Error::InvalidGroup(msg)) => assert!(msg.contains("associativity")),
            other => panic!("expected associativity failure, got {other:?}"),
        }

        // Repeated row entry.
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table("bad", bad, vec![]).is_err());
    }

    #[test]
    fn direct_product_and_quotient() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::direct_product(&z2, &z2);
        assert_eq!(v4.order(), 4);
        assert!(v4.is_abelian());
        assert!(!v4.is_cyclic());
        assert_eq!(v4.generators(), &[2, 1]);

        let z4 = FiniteGroup::cyclic(4).unwrap();
        let q = z4.quotient(&[0, 2]).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.coset_of, vec![0, 1, 0, 1]);
        assert_eq!(q.section, vec![0, 1]);

        // Non-normal subgroup is rejected: <s> inside D3.
        let d3 = FiniteGroup::dihedral(3).unwrap();
        assert!(matches!(d3.quotient(&[0, 3]), Err(Error::NotNormal(_))));
        // Rotation subgroup is normal, quotient has order 2.
        let qd = d3.quotient(&[0, 1, 2]).unwrap();
        assert_eq!(qd.group.order(), 2);
    }

    #[test]
    fn subgroup_spectra() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let v4 = FiniteGroup::direct_product(&z2, &z2);
        let d3 = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(z2.subgroup_order_spectrum().unwrap().into_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(z4.subgroup_order_spectrum().unwrap().into_iter().collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(v4.subgroup_order_spectrum().unwrap().into_iter().collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(d3.subgroup_order_spectrum().unwrap().into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 6]);
    }

    #[test]
    fn q_star_and_coefficient() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let v4 = FiniteGroup::direct_product(&z2, &z2);

        assert_eq!(q_star(&[&z2, &z3]).unwrap(), QStar::Finite(3));
        assert_eq!(q_star(&[&z2, &v4]).unwrap(), QStar::Finite(4));
        assert_eq!(q_star(&[&z2, &z4]).unwrap(), QStar::Finite(4));
        assert_eq!(q_star(&[&z2, &z2]).unwrap(), QStar::Infinite);
        assert_eq!(q_star(&[&z2, &z2, &z2]).unwrap(), QStar::Infinite);

        assert_eq!(coefficient(QStar::Finite(3)).unwrap(), Ratio::from_integer(6));
        assert_eq!(coefficient(QStar::Finite(4)).unwrap(), Ratio::from_integer(4));
        assert_eq!(coefficient(QStar::Finite(5)).unwrap(), Ratio::new(10, 3));
        assert_eq!(coefficient(QStar::Infinite).unwrap(), Ratio::from_integer(2));
        assert!(coefficient(QStar::Finite(2)).is_err());
    }

    #[test]
    fn homs_and_isomorphisms() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::direct_product(&z2, &z2);

        let proj = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(!proj.is_injective());
        assert!(GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 1, 0]).is_err());

        assert!(find_isomorphism(&z4, &v4).is_none());
        let z2z2 = FiniteGroup::direct_product(&z2, &z2);
        let iso = find_isomorphism(&v4, &z2z2).unwrap();
        assert_eq!(iso.len(), 4);

        // D3 is isomorphic to the symmetric group on 3 letters given by a table.
        let s3_perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
        ];
        let mut table = vec![vec![0usize; 6]; 6];
        for (i, p) in s3_perms.iter().enumerate() {
            for (j, q) in s3_perms.iter().enumerate() {
                let comp = [q[p[0]], q[p[1]], q[p[2]]];
                table[i][j] = s3_perms.iter().position(|r| *r == comp).unwrap();
            }
        }
        let s3 = FiniteGroup::from_table("S3", table, vec![]).unwrap();
        let d3 = FiniteGroup::dihedral(3).unwrap();
        assert!(find_isomorphism(&d3, &s3).is_some());
    }

    #[test]
    fn pow_and_element_order() {
        let z5 = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(z5.pow(2, 3), 1);
        assert_eq!(z5.pow(2, -1), 3);
        assert_eq!(z5.pow(2, 0), 0);
        assert_eq!(z5.element_order(1), 5);
        assert_eq!(z5.element_order(0), 1);
    }
}
