//! The amalgam intersection-rank bound, exercised on a pair where it is an
//! equality:
//!
//!     r̄(H₁ ∩ H₂) ≤ (2·q*)/(q* − 2) · |T| · r̄(H₁) · r̄(H₂)
//!
//! The pair comes from the second extremal family over Z₂ * (Z₂×Z₂), lifted
//! over the amalgam Z₄ *_{Z₂} (Z₂)³ whose quotients are those factors. The
//! lift chooses twists (T-parts attached to basis elements) so that the
//! deviation map τ on the intersection attains all of T, which multiplies the
//! quotient-level intersection rank by |T| exactly.
//!
//! Run with: cargo run --example theorem2_equality

use kurosh::report::{q_star_string, ratio_string};
use kurosh::{build_case, lift_case, theorem2, AmalgamSpec, FiniteGroup, Result};

fn main() -> Result<()> {
    let z2 = FiniteGroup::cyclic(2)?;
    let z4 = FiniteGroup::cyclic(4)?;
    let cube = FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z2), &z2);
    let am = AmalgamSpec::new(z4, cube, z2, vec![0, 2], vec![0, 1])?;

    // Quotient-level pair with r̄₁ = 3, r̄₂ = 5 and intersection rank 60.
    let inst = build_case(3, 2, None, 12)?;
    let lifted = lift_case(&am, &inst)?;
    println!("solved twists on H₂ basis: {:?}", lifted.h2.twists());

    let (check, closure) = theorem2(&am, &lifted.h1, &lifted.h2)?;
    println!("|T|                      : {}", check.t_order);
    println!("q*                       : {}", q_star_string(check.q_star));
    println!("coefficient              : {}", ratio_string(check.coefficient));
    println!("r̄(H₁), r̄(H₂)             : {}, {}", check.r1, check.r2);
    println!("quotient-level r̄(∩)      : {}", check.quotient_r_intersection);
    println!("|image(τ)|               : {} (surjective: {})", check.tau_image_size, check.tau_surjective);
    println!(
        "r̄(H₁ ∩ H₂) = |image(τ)|·r̄ = {} · {} = {}",
        check.tau_image_size, check.quotient_r_intersection, check.r_intersection
    );
    println!(
        "bound: {} ≤ {} = {}·{}·{}·{}  holds: {}  equality: {}",
        check.r_intersection,
        ratio_string(check.rhs),
        ratio_string(check.coefficient),
        check.t_order,
        check.r1,
        check.r2,
        check.holds,
        check.equality
    );

    // Witnesses: one intersection word per attained τ-value.
    let qp = am.quotient_product();
    for (t, w) in &closure.witnesses {
        println!("τ = {t} witnessed by {}", qp.display_word(w));
    }
    assert!(check.holds && check.equality && check.tau_surjective);
    Ok(())
}
