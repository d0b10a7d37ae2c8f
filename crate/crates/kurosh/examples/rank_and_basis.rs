//! Fold a generating set into a subgroup graph and read off the invariants
//! that the graph determines: rank, reduced rank, Euler characteristic, a
//! free basis, and (when the graph is complete) the index.
//!
//! Run with: cargo run --example rank_and_basis

use kurosh::{Automaton, FiniteGroup, FreeProduct, Result, SubgroupGraph};

fn main() -> Result<()> {
    // The modular group's little sibling: Z₂ * Z₃, letters a (order 2), b (order 3).
    let product = FreeProduct::new(vec![FiniteGroup::cyclic(2)?, FiniteGroup::cyclic(3)?])?;

    // H = ⟨abab, ab²ab²⟩. Folding identifies states until the automaton is
    // deterministic; the result is canonical for the subgroup. This H is the
    // kernel of the natural map onto S₃, so its graph closes up completely.
    let gens = vec![product.parse_word("abab")?, product.parse_word("ab^2ab^2")?];
    let aut = Automaton::fold(&product, &gens);
    let graph = SubgroupGraph::new(&aut)?;

    println!("ambient          : {}", product.name());
    println!("generators       : abab, ab^2ab^2");
    println!("states           : {}", aut.num_states());
    println!("complete         : {}", aut.is_complete());
    println!(
        "index            : {}",
        aut.index().map_or("infinite".to_string(), |i| i.to_string())
    );

    // Euler characteristic of the bipartite graph gives the rank directly:
    // rank = 1 - χ, reduced rank = max(0, rank - 1) = -χ when χ ≤ 0.
    let euler = graph.euler();
    println!(
        "euler data       : V = {} (primary {} + factor classes {}), E = {}, χ = {}",
        euler.vertices, euler.primary, euler.secondary, euler.edges, euler.chi
    );
    println!("rank             : {}", graph.rank());
    println!("reduced rank     : {}", graph.reduced_rank());

    // A free basis, one word per edge outside a spanning tree.
    println!("basis:");
    for w in graph.basis() {
        println!("  {}", product.display_word(w));
    }

    // Every basis word must loop at the base state, and the subgroup is free
    // on the basis, so expressing a product of basis words recovers exactly
    // the letters we multiplied.
    let w = product.mul(&gens[0], &product.invert(&gens[1]));
    let letters = graph.express_in_basis(&w)?;
    println!(
        "g₀·g₁⁻¹ in basis letters: {:?}",
        letters
            .iter()
            .map(|&(k, inv)| format!("{}{}", if inv { "-" } else { "+" }, k))
            .collect::<Vec<_>>()
    );
    Ok(())
}
