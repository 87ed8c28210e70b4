//! The finitely generated abelian group toolkit against the registry
//! tables: Smith normal form homology of small complexes, universal
//! coefficients, Poincare duality, and the Hurewicz consistency check.

use calgrass::fgab::homology::{
    euler_characteristic, hurewicz_check, poincare_duality_check, poincare_polynomial,
    poincare_polynomial_check, uct_cohomology, uct_with_coefficients,
};
use calgrass::registry::{self, Registry};

fn main() {
    // cellular homology of embedded complexes, straight from boundary
    // matrices through Smith normal form
    for name in ["rp2", "torus", "s2"] {
        let c = registry::embedded_complex(name).unwrap();
        let h = c.homology();
        let strs: Vec<String> = h.iter().map(|g| g.to_string()).collect();
        println!("H_*({}) = ({})", name, strs.join(", "));
    }

    let reg = Registry::load_default().unwrap();
    let g = reg.space("g3r6").unwrap();
    let strs: Vec<String> = g.homology.iter().map(|x| x.to_string()).collect();
    println!("\n{}: H_* = ({})", g.label, strs.join(", "));

    // Poincare duality over Z for the closed oriented 9-manifold: free
    // parts match across complementary degrees, torsion shifts by one
    assert!(poincare_duality_check(&g.homology, 9));
    println!("Poincare duality at n = 9: pass");

    // the free part is an exterior algebra on degrees 4 and 5, so the
    // Poincare polynomial factors as (1 + t^4)(1 + t^5)
    let poly = poincare_polynomial(&g.homology);
    println!("Poincare polynomial coefficients: {:?}", poly);
    assert!(poincare_polynomial_check(&g.homology, &[1, 0, 0, 0, 1, 1, 0, 0, 0, 1]));

    // odd-dimensional closed manifolds have vanishing Euler characteristic
    for (name, entry) in &reg.spaces {
        if entry.dimension % 2 == 1 {
            let chi = euler_characteristic(&entry.homology);
            println!("chi({}) = {}", name, chi);
            assert_eq!(chi, 0);
        }
    }

    // universal coefficients, both directions: torsion contributes twice
    // mod 2 (its own degree and one above), and integral cohomology
    // shifts it up by one
    let mod2 = uct_with_coefficients(&g.homology, 2);
    let m2: Vec<String> = mod2.iter().map(|x| x.to_string()).collect();
    println!("mod 2 homology: ({})", m2.join(", "));
    assert_eq!(m2.join(","), "Z2,0,Z2,Z2,Z2,Z2,Z2,Z2,0,Z2");
    let coh = uct_cohomology(&g.homology);
    let cstrs: Vec<String> = coh.iter().map(|x| x.to_string()).collect();
    println!("H^* = ({})", cstrs.join(", "));

    // the first nontrivial homotopy group must agree with homology
    let hur = hurewicz_check(&g.homology, &g.homotopy);
    println!(
        "Hurewicz: first nontrivial degree {:?}, consistent {}  ({})",
        hur.first_nontrivial, hur.consistent, hur.detail
    );
    assert!(hur.consistent);
}
