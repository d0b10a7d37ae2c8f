//! Membership in a folded subgroup graph, cross-checked against a brute-force
//! closure of the generators.
//!
//! A word lies in the subgroup iff it traces a loop at the base state. The
//! brute-force oracle multiplies generators in all patterns up to a syllable
//! budget; on that budget the two answers must agree exactly.
//!
//! Run with: cargo run --example membership

use kurosh::{brute_force_elements, Automaton, FiniteGroup, FreeProduct, Result};

fn main() -> Result<()> {
    let product = FreeProduct::new(vec![FiniteGroup::cyclic(2)?, FiniteGroup::cyclic(3)?])?;
    let gens = vec![product.parse_word("ab")?];
    let aut = Automaton::fold(&product, &gens);

    for text in ["ab", "ba", "abab", "a", "b", "(ab)^5", "b^-1a"] {
        let w = product.parse_word(text)?;
        println!(
            "{:8} → normalized {:12} member: {}",
            text,
            product.display_word(&w),
            aut.is_member(&w)
        );
    }

    // Exhaustive agreement with the closure oracle on all short words.
    let closure = brute_force_elements(&product, &gens, 16, 100_000)?;
    let mut checked = 0usize;
    for w in product.words_up_to(8) {
        assert_eq!(aut.is_member(&w), closure.contains(&w), "disagree on {}", product.display_word(&w));
        checked += 1;
    }
    println!("automaton ≡ brute-force closure on all {checked} words of ≤ 8 syllables");
    Ok(())
}
