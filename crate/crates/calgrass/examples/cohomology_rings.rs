//! Truncated cohomology rings from the registry: additive comparison
//! against the homology tables, perfect pairing into the top class, and
//! verification of the two bundled pullback homomorphisms.

use calgrass::registry::Registry;
use calgrass::ring::{duality_pairing_check, parse_monomial, ring_matches_cohomology, verify_ring_hom};

fn main() {
    let reg = Registry::load_default().unwrap();

    // each named ring reproduces the universal-coefficients cohomology of
    // its space, degree by degree
    for name in ["g3r6", "v2r5", "v3r6", "slag"] {
        let ring = &reg.ring(name).unwrap().ring;
        let space = reg.space(name).unwrap();
        let ok = ring_matches_cohomology(ring, &space.homology);
        println!("{}: ring matches cohomology of {} -> {}", name, space.label, ok);
        assert!(ok);
    }

    // multiplication pairs complementary degrees perfectly into the top
    // class; for the Grassmannian that class is x4*x5
    println!();
    for name in ["g3r6", "v3r6"] {
        let ring = &reg.ring(name).unwrap().ring;
        let n = reg.space(name).unwrap().dimension as u32;
        let rep = duality_pairing_check(ring, n);
        println!("{}: top class {}, pairing ok {}", name, rep.top_monomial.as_ref().unwrap(), rep.ok);
        assert!(rep.ok);
        for issue in &rep.issues {
            println!("  {}", issue);
        }
    }

    // the two pullbacks: restriction to the calibrated face kills x4 and
    // y7, and the classifying map to the product of projective planes is
    // zero on every generator
    println!();
    for name in ["slag_pullback", "pont_pullback"] {
        let hom = reg.ring_hom(name).unwrap();
        let source = &reg.ring(&hom.source).unwrap().ring;
        let target = &reg.ring(&hom.target).unwrap().ring;
        let rep = verify_ring_hom(source, target, &hom.images).unwrap();
        println!("{} ({} -> {}): {}", name, hom.source, hom.target, if rep.ok { "ring map" } else { "NOT a ring map" });
        for (g, img) in &hom.images {
            println!("  {} -> {}", g, img);
        }
        assert!(rep.ok);
    }

    // a wrong guess fails with a reason: sending y3 to y7 is not
    // degree-preserving
    let g = &reg.ring("g3r6").unwrap().ring;
    let mut images = reg.ring_hom("slag_pullback").unwrap().images.clone();
    images.insert("y3".into(), "y7".into());
    let slag = &reg.ring("slag").unwrap().ring;
    match verify_ring_hom(g, slag, &images) {
        Ok(rep) => {
            println!("\ncorrupted map: ok {}", rep.ok);
            for issue in &rep.issues {
                println!("  {}", issue);
            }
            assert!(!rep.ok);
        }
        Err(e) => println!("\ncorrupted map rejected outright: {}", e),
    }

    // monomial parsing is lenient about separators
    assert_eq!(parse_monomial("y3 y7").unwrap(), parse_monomial("y3*y7").unwrap());
}
