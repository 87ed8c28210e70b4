//! Inventory the critical manifolds of the special Lagrangian form on the
//! Grassmannian of 3-planes in R^6: two critical values, each carrying a
//! 5-dimensional manifold, and a regular zero level in between.

use calgrass::calibrations::{builtin_form, morse_scan, probe_zero_level};
use calgrass::DEFAULT_SEED;

fn main() {
    let (phi, _) = builtin_form("sl3").unwrap();
    let rep = morse_scan(&phi, 48, DEFAULT_SEED);

    println!("critical classes from {} ascent/descent runs:", rep.starts);
    println!("  value      index nullity positive hits");
    for c in &rep.classes {
        println!(
            "  {:+.6}  {:<5} {:<7} {:<8} {}",
            c.value, c.index, c.nullity, c.positive, c.count
        );
    }
    println!("unresolved limits: {}", rep.unresolved);

    // the maximum level is the face of the calibration, a copy of
    // SU(3)/SO(3); the minimum is its orientation flip. No saddles show
    // up: an ascent/descent scan only ever lands on extrema
    assert_eq!(rep.classes.len(), 2);
    let top = &rep.classes[0];
    assert!((top.value - 1.0).abs() < 1e-6);
    assert_eq!((top.index, top.nullity), (4, 5));
    let bottom = &rep.classes[1];
    assert_eq!((bottom.index, bottom.nullity, bottom.positive), (0, 5, 4));

    // the zero level {Phi = 0} is cut out regularly, hence a hypersurface
    let z = &rep.zero_level;
    println!(
        "zero level: {}/{} probes regular, min gradient norm {:.3}, dimension {:?}",
        z.regular, z.probes, z.min_grad_norm, z.level_dim
    );
    assert_eq!(z.level_dim, Some(8));

    // a denser probe of the same level set, standalone
    let probe = probe_zero_level(&phi, 200, DEFAULT_SEED);
    println!(
        "dense probe: {}/{} regular, min gradient norm {:.3}",
        probe.regular, probe.probes, probe.min_grad_norm
    );
    assert_eq!(probe.regular, probe.probes);
}
