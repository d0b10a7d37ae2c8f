//! Free products of finite groups and their normal-form words.
//!
//! A [`FreeProduct`] fixes an ordered list of finite factors `G_0, …, G_{k-1}`
//! (each of order ≥ 2). A [`Word`] is a normal form: an alternating sequence of
//! *syllables* `(factor, element)` with `element ≠ identity` and consecutive
//! syllables from distinct factors. The empty word is the identity.
//!
//! Display and parsing use a letter alphabet assigned sequentially across the
//! factors' distinguished generators (`a`, `b`, `c`, …); every factor element
//! is named by its shortest product of that factor's letters (breadth-first,
//! first name wins, runs compressed to powers). Parsing merges adjacent
//! same-factor letters, so `display ∘ parse` and `parse ∘ display` are
//! round-trips on normal forms.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// One display letter: a distinguished generator of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub ch: char,
    pub factor: usize,
    pub element: usize,
}

/// An ordered free product of finite groups, with its display alphabet.
#[derive(Debug, Clone)]
pub struct FreeProduct {
    factors: Vec<FiniteGroup>,
    letters: Vec<Letter>,
    /// `names[f][x]` = display name of element `x` of factor `f` (`names[f][0] = "1"`).
    names: Vec<Vec<String>>,
    /// `slot_base[f]` = first transition-slot index of factor `f`; one slot per
    /// nontrivial factor element, used to index automaton transition tables.
    slot_base: Vec<usize>,
    slot_total: usize,
}

impl PartialEq for FreeProduct {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}
impl Eq for FreeProduct {}

impl FreeProduct {
    pub fn new(factors: Vec<FiniteGroup>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("free product needs at least one factor".into()));
        }
        for g in &factors {
            if g.order() < 2 {
                return Err(Error::InvalidGroup(format!(
                    "factor {} is trivial; trivial factors are not allowed",
                    g.name()
                )));
            }
        }
        let total_letters: usize = factors.iter().map(|g| g.generators().len()).sum();
        if total_letters > 26 {
            return Err(Error::InvalidGroup(format!(
                "{total_letters} generator letters needed, alphabet has 26"
            )));
        }
        let mut letters = Vec::with_capacity(total_letters);
        let mut next = b'a';
        for (f, g) in factors.iter().enumerate() {
            for &e in g.generators() {
                letters.push(Letter { ch: next as char, factor: f, element: e });
                next += 1;
            }
        }
        let names = factors
            .iter()
            .enumerate()
            .map(|(f, g)| {
                let my_letters: Vec<&Letter> = letters.iter().filter(|l| l.factor == f).collect();
                element_names(g, &my_letters)
            })
            .collect();
        let mut slot_base = Vec::with_capacity(factors.len());
        let mut slot_total = 0usize;
        for g in &factors {
            slot_base.push(slot_total);
            slot_total += g.order() - 1;
        }
        Ok(FreeProduct { factors, letters, names, slot_base, slot_total })
    }

    pub fn factors(&self) -> &[FiniteGroup] {
        &self.factors
    }

    pub fn factor(&self, f: usize) -> &FiniteGroup {
        &self.factors[f]
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, ch: char) -> Option<Letter> {
        self.letters.iter().copied().find(|l| l.ch == ch)
    }

    pub fn name(&self) -> String {
        self.factors.iter().map(|g| g.name()).collect::<Vec<_>>().join("*")
    }

    /// Total number of transition slots (one per nontrivial factor element).
    pub fn slot_count(&self) -> usize {
        self.slot_total
    }

    /// Slot index of the nontrivial element `x` of factor `f`.
    #[inline]
    pub fn slot_of(&self, f: usize, x: usize) -> usize {
        debug_assert!(x != 0);
        self.slot_base[f] + x - 1
    }

    /// Inverse of [`slot_of`](Self::slot_of).
    pub fn syllable_of_slot(&self, slot: usize) -> (usize, usize) {
        let f = match self.slot_base.binary_search(&slot) {
            Ok(i) => {
                // several factors may share a base only if earlier ones were
                // empty, which cannot happen (order ≥ 2); take the exact hit
                i
            }
            Err(i) => i - 1,
        };
        (f, slot - self.slot_base[f] + 1)
    }

    /// Validate a syllable: the factor exists and the element is a nontrivial
    /// member of it.
    pub fn check_syllable(&self, f: usize, x: usize) -> Result<()> {
        if f >= self.factors.len() || x == 0 || x >= self.factors[f].order() {
            return Err(Error::InvalidSyllable { factor: f, element: x });
        }
        Ok(())
    }

    /// Build a normal-form word from raw syllables (validated, then merged).
    pub fn word(&self, syllables: &[(usize, usize)]) -> Result<Word> {
        for &(f, x) in syllables {
            // identity syllables are tolerated here; they just vanish
            if f >= self.factors.len() || x >= self.factors[f].order() {
                return Err(Error::InvalidSyllable { factor: f, element: x });
            }
        }
        Ok(self.normalize(syllables.iter().copied()))
    }

    /// Normalize any syllable stream: drop identities, merge adjacent
    /// same-factor syllables (cascading).
    pub fn normalize(&self, syllables: impl IntoIterator<Item = (usize, usize)>) -> Word {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (f, x) in syllables {
            if x == 0 {
                continue;
            }
            match out.last_mut() {
                Some(&mut (lf, ref mut lx)) if lf == f => {
                    *lx = self.factors[f].mul(*lx, x);
                    if *lx == 0 {
                        out.pop();
                    }
                }
                _ => out.push((f, x)),
            }
        }
        Word { syllables: out }
    }

    pub fn mul(&self, a: &Word, b: &Word) -> Word {
        self.normalize(a.syllables.iter().chain(b.syllables.iter()).copied())
    }

    pub fn invert(&self, w: &Word) -> Word {
        let syllables = w
            .syllables
            .iter()
            .rev()
            .map(|&(f, x)| (f, self.factors[f].inv(x)))
            .collect();
        // reversing and inverting a normal form is again a normal form
        Word { syllables }
    }

    pub fn pow(&self, w: &Word, k: i64) -> Word {
        let (base, k) = if k < 0 { (self.invert(w), (-k) as u64) } else { (w.clone(), k as u64) };
        let mut acc = Word::empty();
        for _ in 0..k {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// `x^y = y⁻¹ x y`.
    pub fn conjugate(&self, x: &Word, y: &Word) -> Word {
        self.mul(&self.mul(&self.invert(y), x), y)
    }

    /// All normalized words of at most `max_len` syllables, shortest first and
    /// in syllable order within a length. Exhaustive, so only sensible for
    /// small products and small lengths (the count grows geometrically).
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for stem in &frontier {
                let last = stem.last().map(|&(f, _)| f);
                for f in 0..self.num_factors() {
                    if Some(f) == last {
                        continue;
                    }
                    for x in 1..self.factors[f].order() {
                        let mut sylls = stem.clone();
                        sylls.push((f, x));
                        out.push(Word { syllables: sylls.clone() });
                        next.push(sylls);
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Display name of a factor element (`"1"` for the identity).
    pub fn element_name(&self, f: usize, x: usize) -> &str {
        &self.names[f][x]
    }

    pub fn display_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        for &(f, x) in &w.syllables {
            s.push_str(&self.names[f][x]);
        }
        s
    }
}

/// Name every element of one factor by its shortest product of the factor's
/// letters (breadth-first over right-multiplication; first name wins; runs of a
/// repeated letter are rendered `x^k`).
fn element_names(g: &FiniteGroup, letters: &[&Letter]) -> Vec<String> {
    let n = g.order();
    // letter sequence per element, BFS from the identity
    let mut seq: Vec<Option<Vec<char>>> = vec![None; n];
    seq[0] = Some(vec![]);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(0usize);
    while let Some(x) = queue.pop_front() {
        for l in letters {
            let y = g.mul(x, l.element);
            if seq[y].is_none() {
                let mut s = seq[x].clone().unwrap();
                s.push(l.ch);
                seq[y] = Some(s);
                queue.push_back(y);
            }
        }
    }
    (0..n)
        .map(|x| {
            let s = seq[x]
                .as_ref()
                .unwrap_or_else(|| panic!("generators of {} do not reach element {x}", g.name()));
            if s.is_empty() {
                return "1".to_string();
            }
            let mut out = String::new();
            let mut i = 0;
            while i < s.len() {
                let mut j = i + 1;
                while j < s.len() && s[j] == s[i] {
                    j += 1;
                }
                let run = j - i;
                if run == 1 {
                    out.push(s[i]);
                } else {
                    let _ = write!(out, "{}^{}", s[i], run);
                }
                i = j;
            }
            out
        })
        .collect()
}

/// A normal-form word: alternating nontrivial syllables. Ordering is
/// lexicographic on the syllable list (used only for deterministic iteration).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    syllables: Vec<(usize, usize)>,
}

impl Word {
    pub fn empty() -> Self {
        Word { syllables: vec![] }
    }

    /// Wrap syllables that are already in normal form (debug-checked).
    pub(crate) fn from_normalized(syllables: Vec<(usize, usize)>) -> Self {
        debug_assert!(syllables.iter().all(|&(_, x)| x != 0));
        debug_assert!(syllables.windows(2).all(|w| w[0].0 != w[1].0));
        Word { syllables }
    }

    pub fn syllables(&self) -> &[(usize, usize)] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}
