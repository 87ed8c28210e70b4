//! Run the bundled Serre spectral sequence scenarios: the solver
//! enumerates differentials consistent with the known entries, reports
//! which maps are forced, pins unknown groups, and refuses impossible
//! tables with an attributed blockage.

use calgrass::registry::embedded_scenario;
use calgrass::spectral::{solve, SolveOptions};

fn main() {
    let opts = SolveOptions::default();

    // sphere bundle SO(4)-frames: V_2(R^5) -> S^4 with fiber S^3. The only
    // unknown is one differential, and Euler class 2 forces it
    let rep = solve(&embedded_scenario("v2r5_s4").unwrap(), &opts).unwrap();
    println!("v2r5_s4: consistent {}, survivors {}", rep.consistent, rep.survivor_classes);
    for f in &rep.forced {
        println!(
            "  forced d{} at ({},{}): {} -> {}, matrix {:?}",
            f.page, f.from.0, f.from.1, f.source, f.target, f.matrix
        );
    }
    println!("  total: {:?}", rep.resolved_total.as_ref().unwrap());

    // V_3(R^6) -> S^5 with fiber V_2(R^5): every differential must vanish
    // and the total cohomology is pinned in all thirteen degrees
    let rep = solve(&embedded_scenario("v3r6_s5").unwrap(), &opts).unwrap();
    println!(
        "\nv3r6_s5: consistent {}, forced nonzero maps {}, total pinned {}",
        rep.consistent,
        rep.forced.len(),
        rep.resolved_total.is_some()
    );
    println!("  total: {:?}", rep.resolved_total.as_ref().unwrap());

    // SO(3) -> SU(3) -> SU(3)/SO(3): the unknown base groups in degrees 2
    // and 3 are forced, and a nonsplit extension shows up on diagonal 3
    let rep = solve(&embedded_scenario("su3_slag").unwrap(), &opts).unwrap();
    println!("\nsu3_slag: consistent {}", rep.consistent);
    for (slot, val) in &rep.resolved {
        println!("  pinned {} = {}", slot, val);
    }
    for e in &rep.extension_flags {
        println!("  extension on diagonal {}: nonsplit {}", e.diagonal, e.nonsplit);
    }

    // frame bundle SO(3) -> V_3(R^6) -> G: the fourth cohomology of the
    // Grassmannian is forced free
    let rep = solve(&embedded_scenario("so3_g3r6").unwrap(), &opts).unwrap();
    println!("\nso3_g3r6: consistent {}, base[4] = {}", rep.consistent, rep.resolved["base[4]"]);
    assert_eq!(rep.resolved["base[4]"], "Z");

    // the same bundle with a deliberately wrong base table: no assignment
    // of differentials survives, and the solver says where it dies
    let rep = solve(&embedded_scenario("lemma41_hypothetical").unwrap(), &opts).unwrap();
    println!("\nlemma41_hypothetical: consistent {}", rep.consistent);
    let b = rep.blocked.as_ref().unwrap();
    println!(
        "  blocked at ({},{}) on page {}, diagonal {}: {}",
        b.position.0, b.position.1, b.page, b.diagonal, b.detail
    );
    assert!(!rep.consistent);
}
