//! Tour of the sparse exterior algebra: wedge products, Hodge duality,
//! and the built-in calibration forms with their normalizations.

use calgrass::exterior::{
    associative_form, im_sl_form, kaehler_form, kaehler_power, sl_form, MultiVector,
};

fn main() {
    // two ways to build e1^e2 + 2 e3^e4 on R^4
    let mut a = MultiVector::zero(4, 2);
    a.set(&[1, 2], 1.0).unwrap();
    a.set(&[3, 4], 2.0).unwrap();
    let b = MultiVector::from_terms(4, 2, &[(&[1, 2], 1.0), (&[3, 4], 2.0)]).unwrap();
    assert_eq!(a.sub(&b).unwrap().norm(), 0.0);
    println!("a = {}", a);

    // wedge squares to twice the cross term times the volume form
    let aa = a.wedge(&a).unwrap();
    println!("a ^ a = {}", aa);
    assert_eq!(aa.coeff(&[1, 2, 3, 4]), 4.0);

    // Hodge star swaps the two summands of a; applying it twice returns a
    // up to the sign (-1)^{k(n-k)}, which is +1 here
    let sa = a.hodge_star();
    println!("*a = {}", sa);
    assert_eq!(a.sub(&sa.hodge_star()).unwrap().norm(), 0.0);

    // the special Lagrangian form on C^3 = R^6 has four monomials with
    // signs from the quarter-turn phases of i^m
    let phi = sl_form(3, 0.0);
    println!("\nRe(dz1 dz2 dz3) = {}", phi);
    assert_eq!(phi.num_terms(), 4);

    // rotating the phase by pi/2 lands on the imaginary part
    let im = im_sl_form(3, 0.0);
    let rot = sl_form(3, std::f64::consts::FRAC_PI_2);
    assert!(rot.sub(&im).unwrap().norm() < 1e-15);
    println!("phase pi/2 gives Im: {}", im);

    // the Kaehler form and its normalized powers; omega^n/n! is the
    // volume form of C^n
    let omega = kaehler_form(3);
    println!("\nomega on R^6 = {}", omega);
    let vol = kaehler_power(3, 3);
    println!("omega^3/3! = {}", vol);
    assert_eq!(vol.coeff(&[1, 2, 3, 4, 5, 6]), 1.0);

    // the associative form on R^7 calibrates the imaginary octonion
    // multiplication table: seven monomials, unit comass
    let assoc = associative_form();
    println!("\nassociative 3-form = {}", assoc);
    assert_eq!(assoc.num_terms(), 7);

    // forms of mismatched dimension refuse to wedge
    let e12_r5 = MultiVector::from_terms(5, 2, &[(&[1, 2], 1.0)]).unwrap();
    assert!(a.wedge(&e12_r5).is_err());
    println!("\nwedge across ambient dimensions is rejected, as it should be");
}
