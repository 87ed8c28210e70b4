//! Riemannian first-order ascent on the oriented Grassmannian for
//! Phi(F) = <form, pluecker(F)>, plus critical-point classification.

use crate::exterior::MultiVector;
use crate::grassmann::{minor_det, Frame};
use nalgebra::{DMatrix, SymmetricEigen};

/// Phi evaluated on (the column span of) an n x k matrix: the sum over
/// index tuples of form coefficients times the matching k x k minors.
pub fn phi(form: &MultiVector, m: &DMatrix<f64>) -> f64 {
    let cols: Vec<usize> = (0..m.ncols()).collect();
    form.terms()
        .map(|(idx, c)| {
            let rows: Vec<usize> = idx.iter().map(|&a| a as usize - 1).collect();
            c * minor_det(m, &rows, &cols)
        })
        .sum()
}

fn cofactor_matrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
    let k = rows.len();
    let mut cof = vec![vec![0.0; k]; k];
    for r in 0..k {
        let sub_rows: Vec<usize> = rows.iter().enumerate().filter(|(i, _)| *i != r).map(|(_, &x)| x).collect();
        for c in 0..k {
            let sub_cols: Vec<usize> = cols.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect();
            let s = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
            cof[r][c] = s * minor_det(m, &sub_rows, &sub_cols);
        }
    }
    cof
}

/// Euclidean gradient of Phi in the matrix entries: d det/dM is the
/// cofactor matrix, accumulated minor by minor.
pub fn euclid_grad(form: &MultiVector, m: &DMatrix<f64>) -> DMatrix<f64> {
    let cols: Vec<usize> = (0..m.ncols()).collect();
    let mut g = DMatrix::<f64>::zeros(m.nrows(), m.ncols());
    for (idx, coeff) in form.terms() {
        let rows: Vec<usize> = idx.iter().map(|&a| a as usize - 1).collect();
        let cof = cofactor_matrix(m, &rows, &cols);
        for (r, &row) in rows.iter().enumerate() {
            for c in 0..cols.len() {
                g[(row, c)] += coeff * cof[r][c];
            }
        }
    }
    g
}

/// Gradient projected to the horizontal space at the frame.
pub fn riem_grad(form: &MultiVector, f: &Frame) -> DMatrix<f64> {
    f.tangent_project(&euclid_grad(form, f.matrix()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitReason {
    /// gradient norm fell below gtol
    Gtol,
    /// line search exhausted its halvings
    StallLs,
    /// iteration budget spent
    MaxIt,
}

#[derive(Clone, Copy, Debug)]
pub struct AscentOptions {
    pub gtol: f64,
    pub maxit: usize,
    /// Armijo acceptance constant. Weak values accept non-contracting
    /// oscillation steps near the maximum and stall the run, so the
    /// default is deliberately strict.
    pub armijo: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions { gtol: 1e-9, maxit: 2000, armijo: 0.3 }
    }
}

#[derive(Clone, Debug)]
pub struct StartRun {
    pub frame: Frame,
    pub value: f64,
    pub grad_norm: f64,
    pub iters: usize,
    pub exit: ExitReason,
}

/// Backtracking gradient ascent with QR retraction. The step regrows
/// after each accepted move and is capped at 4.
pub fn ascend(form: &MultiVector, start: Frame, opts: &AscentOptions) -> StartRun {
    let mut f = start;
    let mut val = phi(form, f.matrix());
    let mut t = 1.0f64;
    for it in 0..opts.maxit {
        let g = riem_grad(form, &f);
        let gn = g.norm();
        if gn < opts.gtol {
            return StartRun { frame: f, value: val, grad_norm: gn, iters: it, exit: ExitReason::Gtol };
        }
        let mut accepted = None;
        let mut tt = t;
        for _ in 0..=50 {
            if let Ok(f2) = f.retract(&g, tt) {
                let v2 = phi(form, f2.matrix());
                if v2 > val + opts.armijo * tt * gn * gn {
                    accepted = Some((f2, v2, tt));
                    break;
                }
            }
            tt *= 0.5;
        }
        match accepted {
            Some((f2, v2, used)) => {
                f = f2;
                val = v2;
                t = (used * 2.0).min(4.0);
            }
            None => {
                return StartRun { frame: f, value: val, grad_norm: gn, iters: it, exit: ExitReason::StallLs };
            }
        }
    }
    let gn = riem_grad(form, &f).norm();
    StartRun { frame: f, value: val, grad_norm: gn, iters: opts.maxit, exit: ExitReason::MaxIt }
}

/// Finite-difference Hessian of Phi in a fixed horizontal basis at the
/// frame: differentiate the projected gradient at retracted points and
/// symmetrize. Returns the basis alongside the matrix.
pub fn hessian_matrix(form: &MultiVector, f: &Frame, h: f64) -> (Vec<DMatrix<f64>>, DMatrix<f64>) {
    let basis = f.horizontal_basis();
    let d = basis.len();
    let mut hess = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        let fp = f.retract(&basis[i], h).expect("hessian probe step");
        let fm = f.retract(&basis[i], -h).expect("hessian probe step");
        let gp = riem_grad(form, &fp);
        let gm = riem_grad(form, &fm);
        for j in 0..d {
            hess[(i, j)] = (gp.dot(&basis[j]) - gm.dot(&basis[j])) / (2.0 * h);
        }
    }
    let sym = (&hess + hess.transpose()) * 0.5;
    (basis, sym)
}

/// Eigenvalues sorted descending.
pub fn spectrum(hess: &DMatrix<f64>) -> Vec<f64> {
    let eig = SymmetricEigen::new(hess.clone());
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub index: usize,
    pub nullity: usize,
    pub positive: usize,
    /// smallest kept |eigenvalue| over largest discarded one; large is good
    pub gap_ratio: f64,
    pub inconclusive: bool,
}

/// Split a spectrum into negative / null / positive with a relative
/// threshold, flagging the result when the gap around the threshold is
/// too tight to trust.
pub fn classify_spectrum(eigs: &[f64]) -> Classification {
    let maxabs = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    if maxabs < 1e-8 {
        return Classification {
            index: 0,
            nullity: eigs.len(),
            positive: 0,
            gap_ratio: 0.0,
            inconclusive: true,
        };
    }
    let tol = 1e-5 * maxabs;
    let mut index = 0;
    let mut nullity = 0;
    let mut positive = 0;
    let mut largest_null = 0.0f64;
    let mut smallest_kept = f64::INFINITY;
    for &e in eigs {
        if e.abs() < tol {
            nullity += 1;
            largest_null = largest_null.max(e.abs());
        } else {
            smallest_kept = smallest_kept.min(e.abs());
            if e < 0.0 {
                index += 1;
            } else {
                positive += 1;
            }
        }
    }
    let gap_ratio = if nullity == 0 || largest_null == 0.0 {
        f64::INFINITY
    } else {
        smallest_kept / largest_null
    };
    Classification { index, nullity, positive, gap_ratio, inconclusive: gap_ratio < 10.0 }
}

#[derive(Clone, Debug)]
pub struct PolishResult {
    pub frame: Frame,
    pub grad_norm: f64,
    pub converged: bool,
}

/// Drive the gradient norm to gtol by damped Newton steps on the
/// nondegenerate block of the Hessian. Value-based line search cannot
/// certify progress below one ulp of Phi, so the ascent above typically
/// stops a few orders of magnitude short; the gradient itself is analytic
/// and supports much finer targets.
pub fn newton_polish(form: &MultiVector, start: Frame, gtol: f64, maxit: usize) -> PolishResult {
    let mut f = start;
    let mut gn = riem_grad(form, &f).norm();
    for _ in 0..maxit {
        if gn < gtol {
            break;
        }
        let (basis, hess) = hessian_matrix(form, &f, 1e-4);
        let eig = SymmetricEigen::new(hess);
        let maxabs = eig.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        if maxabs < 1e-8 {
            break;
        }
        let cutoff = 1e-3 * maxabs;
        let g = riem_grad(form, &f);
        let gc: Vec<f64> = basis.iter().map(|e| g.dot(e)).collect();
        // d = -H^+ g restricted to eigenvalues above the cutoff
        let d = basis.len();
        let mut step_c = vec![0.0f64; d];
        for m in 0..d {
            let lam = eig.eigenvalues[m];
            if lam.abs() < cutoff {
                continue;
            }
            let proj: f64 = (0..d).map(|i| eig.eigenvectors[(i, m)] * gc[i]).sum();
            let scale = -proj / lam;
            for i in 0..d {
                step_c[i] += scale * eig.eigenvectors[(i, m)];
            }
        }
        let mut delta = DMatrix::<f64>::zeros(f.ambient_dim(), f.plane_dim());
        for i in 0..d {
            delta += &basis[i] * step_c[i];
        }
        let mut improved = false;
        let mut s = 1.0f64;
        for _ in 0..20 {
            if let Ok(f2) = f.retract(&delta, s) {
                let gn2 = riem_grad(form, &f2).norm();
                if gn2 < gn {
                    f = f2;
                    gn = gn2;
                    improved = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if !improved {
            break;
        }
    }
    PolishResult { converged: gn < gtol, frame: f, grad_norm: gn }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{kaehler_form, sl_form};
    use crate::grassmann::random_plane;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let form = sl_form(3, 0.0);
        let h = 1e-5;
        for _ in 0..50 {
            let f = random_plane(6, 3, &mut rng);
            let g = riem_grad(&form, &f);
            for e in f.horizontal_basis() {
                let vp = phi(&form, f.retract(&e, h).unwrap().matrix());
                let vm = phi(&form, f.retract(&e, -h).unwrap().matrix());
                let fd = (vp - vm) / (2.0 * h);
                let an = g.dot(&e);
                // unit-scale floor: FD truncation is absolute, around h^2
                let denom = an.abs().max(1.0);
                assert!(
                    (fd - an).abs() / denom < 1e-8,
                    "fd {} vs analytic {}",
                    fd,
                    an
                );
            }
        }
    }

    #[test]
    fn ascent_reaches_the_calibrated_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let form = sl_form(3, 0.0);
        let opts = AscentOptions::default();
        let mut best: f64 = f64::NEG_INFINITY;
        for _ in 0..8 {
            let run = ascend(&form, random_plane(6, 3, &mut rng), &opts);
            best = best.max(run.value);
        }
        assert!((best - 1.0).abs() < 1e-9, "best {}", best);
    }

    #[test]
    fn polish_certifies_tiny_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let form = kaehler_form(2);
        let run = ascend(&form, random_plane(4, 2, &mut rng), &AscentOptions::default());
        let p = newton_polish(&form, run.frame, 1e-9, 12);
        assert!(p.converged, "grad norm stuck at {:.3e}", p.grad_norm);
        assert!(p.grad_norm < 1e-9);
    }

    #[test]
    fn spectrum_classification_thresholds() {
        let eigs = [-3.0, -2.0, -2.0, -2.0, 1e-8, 5e-9, -3e-9, 1e-9, 0.0];
        let c = classify_spectrum(&eigs);
        assert_eq!((c.index, c.nullity, c.positive), (4, 5, 0));
        assert!(!c.inconclusive);
        // eigenvalue sitting right at the threshold trips the guard
        let bad = [-3.0, -1e-5 * 3.0 * 2.0, 1e-5 * 3.0 * 0.9];
        let cb = classify_spectrum(&bad);
        assert!(cb.inconclusive);
    }
}
