//! Complete subgroup graphs from homomorphisms to finite groups.
//!
//! The graph of the kernel of φ: G₁*G₂ → Q is the coset graph of Q: states
//! are the elements reached by φ-images, the base is the identity, and the
//! index equals |image(φ)|. The same machinery enumerates cosets of a normal
//! closure by saturating the fold with conjugates.
//!
//! Run with: cargo run --example coset_enumeration

use kurosh::{Automaton, FiniteGroup, FreeProduct, GroupHom, Result, SubgroupGraph};

fn main() -> Result<()> {
    let product = FreeProduct::new(vec![FiniteGroup::cyclic(2)?, FiniteGroup::cyclic(3)?])?;

    // φ: Z₂*Z₃ → S₃ (dihedral of degree 3) sending a to a reflection and b to
    // a 3-cycle. The images generate, so the kernel has index 6.
    let s3 = FiniteGroup::dihedral(3)?;
    let reflection = 3; // elements 0..2 rotate, 3..5 reflect
    let rotation = 1;
    let phi_a = GroupHom::new(product.factor(0).clone(), s3.clone(), vec![0, reflection])?;
    let phi_b = GroupHom::new(product.factor(1).clone(), s3.clone(), vec![0, rotation, s3.inv(rotation)])?;

    let kernel = Automaton::cayley(&product, &s3, &[phi_a, phi_b])?;
    let graph = SubgroupGraph::new(&kernel)?;
    println!("kernel of Z2*Z3 → S3:");
    println!("  index        : {:?}", kernel.index());
    println!("  rank         : {}", graph.rank());
    println!("  reduced rank : {}", graph.reduced_rank());
    for w in graph.basis() {
        println!("  basis word   : {}", product.display_word(w));
    }

    // Words map into the kernel iff their φ-image is trivial.
    for text in ["abab", "ababab", "ab^-1ab^-1ab^-1", "ba"] {
        let w = product.parse_word(text)?;
        println!("  {:16} in kernel: {}", text, kernel.is_member(&w));
    }

    // Normal closures arrive at the same graphs: imposing (ab)² = 1 presents
    // exactly S₃, so ⟨⟨abab⟩⟩ is the kernel of φ — including the graph.
    let closure = Automaton::normal_closure(&product, &[product.parse_word("abab")?], 10_000)?;
    let cgraph = SubgroupGraph::new(&closure)?;
    println!("normal closure ⟨⟨abab⟩⟩:");
    println!("  index        : {:?}", closure.index());
    println!("  rank         : {}", cgraph.rank());
    println!("  normal       : {}", closure.is_normal(cgraph.basis())?);
    assert_eq!(closure, kernel, "closure of (ab)² and kernel of φ must coincide");
    println!("  identical to the kernel graph: true");
    Ok(())
}
