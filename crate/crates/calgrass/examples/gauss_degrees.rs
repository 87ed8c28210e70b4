//! Surfaces in R^4 through the twistor-style splitting: tangent planes as
//! pairs of points on two 2-spheres, degrees of the two half Gauss maps,
//! and grid scans for special Lagrangian tangencies.

use calgrass::slfree::{
    dimension_equation_solutions, gauss_degree, sl_tangent_scan, slag_dim, split_plus_minus,
    surface, surface_names, W_TORUS,
};
use calgrass::grassmann::random_plane;
use calgrass::DEFAULT_SEED;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() {
    // the incidence dimension count: a generic k-subspace of R^{2n} meets
    // a special Lagrangian plane only when the dimensions force it, which
    // happens exactly twice
    let sols = dimension_equation_solutions(12);
    println!("dimension equation solutions (k, n): {:?}", sols);
    assert_eq!(sols, vec![(2, 2), (6, 5)]);
    println!("slag face dimensions: n=2 -> {}, n=3 -> {}", slag_dim(2), slag_dim(3));

    // an oriented 2-plane in R^4 is a pair of unit points, one on each
    // factor sphere; rotations move the points without changing angles
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let plane = random_plane(4, 2, &mut rng);
    let (p, q) = split_plus_minus(&plane).unwrap();
    println!("\nsplit of a random plane: plus {:?}, minus {:?}", p, q);
    let n2 = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    assert!((n2(p) - 1.0).abs() < 1e-12 && (n2(q) - 1.0).abs() < 1e-12);

    // degrees of the two half Gauss maps over the catalog surfaces: both
    // vanish for tori, and the round sphere hits each factor once (the
    // Euler characteristic is the sum of the two degrees... up to the
    // orientation conventions fixed in the library)
    println!();
    for name in surface_names() {
        let s = surface(name).unwrap();
        let rep = gauss_degree(s, 64);
        println!(
            "{:13} degrees ({:+}, {:+})  raw ({:+.4}, {:+.4})  residual {:.1e}",
            rep.surface, rep.degrees.0, rep.degrees.1, rep.raw.0, rep.raw.1, rep.residual
        );
        assert!(rep.residual < 0.1);
    }

    // scanning for special Lagrangian tangent planes: the product torus
    // has none, the Clifford torus has a full curve along u + v = 0 mod
    // pi, the round sphere exactly two isolated points
    println!();
    let none = sl_tangent_scan(&W_TORUS, 32, 1e-2);
    println!("w_torus: max |Re Omega| residual {:.2e}, candidates {}", none.max_abs_re, none.candidates.len());
    assert!(none.candidates.is_empty());

    let sphere = sl_tangent_scan(surface("round_sphere").unwrap(), 48, 1e-2);
    println!("round_sphere: {} candidates", sphere.candidates.len());
    for c in &sphere.candidates {
        println!(
            "  (u, v) = ({:.4}, {:.4})  in units of pi ({:.4}, {:.4})  verified {}",
            c.u,
            c.v,
            c.u / PI,
            c.v / PI,
            c.verified
        );
        assert!(c.verified);
    }

    let cliff = sl_tangent_scan(surface("z_clifford").unwrap(), 32, 1e-2);
    println!("z_clifford: {} candidates on the line u + v = 0 mod pi", cliff.candidates.len());
    for c in cliff.candidates.iter().take(4) {
        let r = (c.u + c.v) % PI;
        println!("  (u, v) = ({:.4}, {:.4}), u + v mod pi = {:.2e}", c.u, c.v, r.min(PI - r));
    }
}
