//! Free subspaces of a calibration: subspaces containing no calibrated
//! plane at all. Certifies structured examples, samples random ones, and
//! brackets the largest dimension where freeness survives.

use calgrass::calibrations::{
    builtin_form, free_dimension, is_free_subspace, pullback, structured_free_subspace, Freeness,
};
use calgrass::DEFAULT_SEED;

fn main() {
    // hand-built free subspaces shipped with each calibration: for sl6 a
    // 4-dimensional coordinate slice on which Re(dz1 dz2 dz3) restricts to
    // zero identically
    for name in ["sl4", "sl6", "kaehler4"] {
        let (form, desc) = builtin_form(name).unwrap();
        let w = structured_free_subspace(name).unwrap();
        let restricted = pullback(&form, &w);
        let check = is_free_subspace(&form, &w, 8, DEFAULT_SEED);
        println!(
            "{} ({}): structured subspace of dim {}, pullback norm {:.1e}, verdict {:?}",
            name,
            desc,
            w.ncols(),
            restricted.norm(),
            check.verdict
        );
        assert!(matches!(check.verdict, Freeness::Free));
    }

    // random sampling per dimension brackets the free dimension; for these
    // three the bracket collapses to an exact answer
    println!();
    for (name, expected) in [("sl4", 2), ("sl6", 4), ("kaehler4", 2)] {
        let (form, _) = builtin_form(name).unwrap();
        let rep = free_dimension(&form, 30, 8, DEFAULT_SEED);
        print!("{}: ", name);
        for r in &rep.rows {
            print!("dim {} -> {}/{} free  ", r.m, r.free, r.free + r.not_free + r.inconclusive);
        }
        println!("\n  free dimension = {:?}", rep.exact);
        assert_eq!(rep.exact, Some(expected));
    }

    // a not-free verdict comes with a witness: an embedded calibrated plane
    let (omega, _) = builtin_form("kaehler4").unwrap();
    let mut rng = rand_chacha();
    let w3 = calgrass::grassmann::random_subspace(4, 3, &mut rng);
    let check = is_free_subspace(&omega, &w3, 8, DEFAULT_SEED);
    println!(
        "\nrandom 3-subspace of R^4 under omega: {:?}, witness plane {}",
        check.verdict,
        if check.witness.is_some() { "recorded" } else { "none" }
    );
    assert!(matches!(check.verdict, Freeness::NotFree));
}

fn rand_chacha() -> impl rand::Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(DEFAULT_SEED)
}
