//! Exact arithmetic in an amalgamated free product G₁ *_T G₂ whose edge group
//! T is finite and normal in both sides.
//!
//! Elements are kept in a normal form: a sequence of coset representatives
//! with strictly alternating sides, times a tail element of T. Multiplication
//! pushes T-parts to the right through the representatives (T is normal, so
//! conjugation stays inside T) and cancels syllables that fall into T.
//!
//! Run with: cargo run --example amalgam_arithmetic

use kurosh::{AmalgamSpec, FiniteGroup, Result};

fn main() -> Result<()> {
    // Z₄ *_{Z₂} (Z₂)³: the edge group embeds as {0,2} ⊂ Z₄ and as the first
    // coordinate of the cube. Both quotients are elementary abelian: Z₂ and V₄.
    let z2 = FiniteGroup::cyclic(2)?;
    let z4 = FiniteGroup::cyclic(4)?;
    let cube = FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z2), &z2);
    let am = AmalgamSpec::new(z4.clone(), cube.clone(), z2, vec![0, 2], vec![0, 1])?;

    println!("edge group order : {}", am.t().order());
    println!("side 0           : {} (quotient {})", am.side(0).name(), am.quotient(0).group.name());
    println!("side 1           : {} (quotient {})", am.side(1).name(), am.quotient(1).group.name());
    println!("quotient product : {}", am.quotient_product().name());

    // g = (side 0 element 1)·(side 1 element 6): a length-2 normal form.
    let a1 = am.elem_from_side(0, 1);
    let b6 = am.elem_from_side(1, 6);
    let g = am.mul_elem(&a1, &b6);
    println!("g                = {}", am.display_elem(&g));
    println!("g syllables      : {:?}, tail in T: {}", g.syllables(), g.tail());

    // Multiplying by the inverse cancels back to the identity.
    let gi = am.inv_elem(&g);
    println!("g⁻¹              = {}", am.display_elem(&gi));
    println!("g·g⁻¹ trivial    : {}", am.mul_elem(&g, &gi).is_identity());

    // Squaring the order-4 generator lands inside T: the syllables cancel and
    // only a tail remains.
    let sq = am.mul_elem(&a1, &a1);
    println!("a₁²              = {} (in T: {})", am.display_elem(&sq), sq.is_in_t());

    // T is normal: conjugating its generator through any element stays in T.
    let t1 = am.conj_t(1, &g);
    println!("g⁻¹·t·g in T     : element {t1}");

    // Words over the quotient product lift to the amalgam by choosing coset
    // representatives; projecting forgets the T-part again.
    let w = am.quotient_product().parse_word("ab")?;
    let lifted = am.lift_word(&w);
    println!("lift of ab       = {}", am.display_elem(&lifted));
    println!("projects back to : {}", am.quotient_product().display_word(&am.project(&lifted)));
    Ok(())
}
