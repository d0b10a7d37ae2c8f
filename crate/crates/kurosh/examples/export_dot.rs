//! Render a subgroup graph as Graphviz DOT.
//!
//! Primary vertices (states) are boxes — the base state doubly framed —
//! and each factor class is a dashed circle whose edges carry the gauge
//! labels; cotree edges (one per basis element) are bold.
//!
//! Run with: cargo run --example export_dot > graph.dot && neato -Tsvg graph.dot

use kurosh::{Automaton, FiniteGroup, FreeProduct, Result, SubgroupGraph};

fn main() -> Result<()> {
    let product = FreeProduct::new(vec![FiniteGroup::cyclic(2)?, FiniteGroup::cyclic(3)?])?;
    let aut = Automaton::fold(&product, &[product.parse_word("ab")?]);
    let graph = SubgroupGraph::new(&aut)?;

    let dot = graph.to_dot("subgroup of Z2*Z3 generated by ab");
    print!("{dot}");

    // Vertex and edge counts in the rendering match the Euler data.
    let euler = graph.euler();
    assert_eq!(dot.matches("shape=box").count(), euler.primary);
    assert_eq!(dot.matches("shape=circle").count(), euler.secondary);
    assert_eq!(dot.matches(" -- ").count(), euler.edges);
    eprintln!(
        "// verified: {} boxes + {} circles, {} edges = Euler data",
        euler.primary, euler.secondary, euler.edges
    );
    Ok(())
}
