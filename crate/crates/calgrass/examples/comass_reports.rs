//! Comass by multistart Riemannian ascent: certify that the special
//! Lagrangian forms have unit comass and inspect the maximizer.

use calgrass::calibrations::{builtin_form, classify_critical, comass, is_sl_plane, ComassOptions};
use calgrass::DEFAULT_SEED;

fn main() {
    for name in ["sl2", "sl3", "assoc7"] {
        let (form, desc) = builtin_form(name).unwrap();
        let opts = ComassOptions { starts: 48, seed: DEFAULT_SEED, ..Default::default() };
        let rep = comass(&form, &opts);
        println!(
            "{}  ({})\n  comass {:.9} from {} starts, {} converged, grad norm {:.1e}",
            name, desc, rep.comass, rep.starts, rep.converged_starts, rep.grad_norm_at_argmax
        );

        // the Hessian inertia at the argmax: the nullity is the dimension
        // of the critical manifold through it (the calibrated face)
        let crit = classify_critical(&form, &rep.argmax);
        println!(
            "  argmax inertia: index {}, nullity {}, positive {} (gap ratio {:.0})",
            crit.class.index, crit.class.nullity, crit.class.positive, crit.class.gap_ratio
        );
        assert!((rep.comass - 1.0).abs() < 1e-6, "{} should calibrate", name);

        // for the SL forms the maximizer must pass the exact pointwise
        // predicate: Lagrangian for omega and phase aligned
        if name.starts_with("sl") {
            let special = is_sl_plane(&rep.argmax, 0.0, 1e-6).unwrap();
            println!("  maximizer is a special Lagrangian plane: {}", special);
            assert!(special);
        }
        println!();
    }

    // every ascent from a random start reaches the global maximum: the
    // form has no spurious local maxima to get stuck on
    let (phi, _) = builtin_form("sl3").unwrap();
    let rep = comass(&phi, &ComassOptions { starts: 48, seed: 7, ..Default::default() });
    let lo = rep.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = rep.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    println!("ascent limit values for sl3 lie in [{:.6}, {:.6}]", lo, hi);
    assert!(lo > 1.0 - 1e-6);
}
