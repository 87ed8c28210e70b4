//! Comass computation, critical-point classification, special Lagrangian
//! plane tests, free subspaces and free dimension, and a Morse inventory
//! of Phi on the Grassmannian.

use crate::exterior::{associative_form, coassociative_form, im_sl_form, kaehler_form, sl_form, MultiVector};
use crate::grassmann::{
    combinations, minor_det, random_plane, random_subspace, Frame, SubspaceGrassmannian,
};
use crate::optimize::{
    ascend, classify_spectrum, hessian_matrix, newton_polish, phi, riem_grad, spectrum,
    AscentOptions, Classification, ExitReason,
};
use crate::{Error, Result};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Resolve a calibration by name. `sl4` and `sl6` are the ambient-labelled
/// aliases of the special Lagrangian forms on R^4 and R^6.
pub fn builtin_form(name: &str) -> Result<(MultiVector, &'static str)> {
    match name {
        "sl3" | "sl6" => Ok((sl_form(3, 0.0), "Re(dz1 dz2 dz3) on R^6")),
        "sl2" | "sl4" => Ok((sl_form(2, 0.0), "Re(dz1 dz2) on R^4")),
        "kaehler4" => Ok((kaehler_form(2), "omega on R^4")),
        "assoc7" => Ok((associative_form(), "associative 3-form on R^7")),
        "coassoc7" => Ok((coassociative_form(), "coassociative 4-form on R^7")),
        other => Err(Error::UnknownName(format!("calibration '{}'", other))),
    }
}

/// A subspace on which the named form is known to pull back to zero,
/// giving an exact freeness certificate.
pub fn structured_free_subspace(name: &str) -> Option<DMatrix<f64>> {
    let axes: &[usize] = match name {
        "sl3" | "sl6" => &[0, 1, 2, 3],
        "sl2" | "sl4" => &[0, 1],
        "kaehler4" => &[0, 2],
        _ => return None,
    };
    let n = match name {
        "sl3" | "sl6" => 6,
        _ => 4,
    };
    let mut w = DMatrix::<f64>::zeros(n, axes.len());
    for (j, &a) in axes.iter().enumerate() {
        w[(a, j)] = 1.0;
    }
    Some(w)
}

#[derive(Clone, Copy, Debug)]
pub struct ComassOptions {
    pub starts: usize,
    pub gtol: f64,
    pub maxit: usize,
    pub seed: u64,
}

impl Default for ComassOptions {
    fn default() -> Self {
        ComassOptions { starts: 64, gtol: 1e-9, maxit: 2000, seed: crate::DEFAULT_SEED }
    }
}

#[derive(Clone, Debug)]
pub struct ComassReport {
    pub comass: f64,
    pub argmax: Frame,
    pub grad_norm_at_argmax: f64,
    pub starts: usize,
    /// starts whose final gradient norm fell below 1e-6
    pub converged_starts: usize,
    pub mean_iters: f64,
    pub exits_gtol: usize,
    pub exits_stall: usize,
    pub exits_maxit: usize,
    pub values: Vec<f64>,
    /// set when the argmax could not be certified to gtol
    pub inconclusive: bool,
}

/// Multistart ascent for the comass of a form, i.e. the maximum of Phi
/// over the oriented Grassmannian. Phi is odd under orientation flip, so
/// the maximum equals the comass.
pub fn comass(form: &MultiVector, opts: &ComassOptions) -> ComassReport {
    let n = form.dim() as usize;
    let k = form.degree() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let a_opts = AscentOptions { gtol: opts.gtol, maxit: opts.maxit, armijo: 0.3 };
    let mut best: Option<crate::optimize::StartRun> = None;
    let mut values = Vec::with_capacity(opts.starts);
    let mut converged = 0;
    let mut iters_total = 0usize;
    let (mut eg, mut es, mut em) = (0usize, 0usize, 0usize);
    for _ in 0..opts.starts {
        let run = ascend(form, random_plane(n, k, &mut rng), &a_opts);
        if run.grad_norm < 1e-6 {
            converged += 1;
        }
        match run.exit {
            ExitReason::Gtol => eg += 1,
            ExitReason::StallLs => es += 1,
            ExitReason::MaxIt => em += 1,
        }
        iters_total += run.iters;
        values.push(run.value);
        if best.as_ref().map_or(true, |b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one start");
    let polish = newton_polish(form, best.frame, opts.gtol, 12);
    let comass = phi(form, polish.frame.matrix());
    ComassReport {
        comass,
        grad_norm_at_argmax: polish.grad_norm,
        inconclusive: !polish.converged,
        argmax: polish.frame,
        starts: opts.starts,
        converged_starts: converged,
        mean_iters: iters_total as f64 / opts.starts.max(1) as f64,
        exits_gtol: eg,
        exits_stall: es,
        exits_maxit: em,
        values,
    }
}

#[derive(Clone, Debug)]
pub struct CriticalReport {
    pub value: f64,
    pub grad_norm: f64,
    pub eigenvalues: Vec<f64>,
    pub class: Classification,
}

/// Hessian spectrum and inertia of Phi at a frame, for classifying the
/// critical manifold through it (the nullity counts its dimension).
pub fn classify_critical(form: &MultiVector, frame: &Frame) -> CriticalReport {
    let value = phi(form, frame.matrix());
    let grad_norm = riem_grad(form, frame).norm();
    let (_, hess) = hessian_matrix(form, frame, 1e-4);
    let eigenvalues = spectrum(&hess);
    let class = classify_spectrum(&eigenvalues);
    CriticalReport { value, grad_norm, eigenvalues, class }
}

/// Nullity of the Hessian at a certified comass maximizer: the local
/// dimension of the calibration's contact set (the face) through it.
pub fn contact_nullity(form: &MultiVector, report: &ComassReport) -> Result<usize> {
    if report.inconclusive {
        return Err(Error::Numeric(
            "comass maximizer is not certified; rerun with more starts or iterations".into(),
        ));
    }
    let crit = classify_critical(form, &report.argmax);
    if crit.class.inconclusive {
        return Err(Error::Numeric(format!(
            "eigenvalue cluster straddles the null threshold (gap ratio {:.1})",
            crit.class.gap_ratio
        )));
    }
    Ok(crit.class.nullity)
}

/// Evaluate a 2-form on a pair of ambient vectors.
fn two_form_eval(form: &MultiVector, u: &[f64], v: &[f64]) -> f64 {
    form.terms()
        .map(|(idx, c)| {
            let (a, b) = (idx[0] as usize - 1, idx[1] as usize - 1);
            c * (u[a] * v[b] - u[b] * v[a])
        })
        .sum()
}

/// Is the frame a special Lagrangian plane at phase theta: omega vanishes
/// on every column pair, the imaginary part of the phase-rotated volume
/// form vanishes on the plane, and the real part is positive.
pub fn is_sl_plane(frame: &Frame, theta: f64, tol: f64) -> Result<bool> {
    let n = frame.ambient_dim();
    let k = frame.plane_dim();
    if n != 2 * k {
        return Err(Error::Usage(format!(
            "special Lagrangian test needs an n-plane in R^2n, got {} in R^{}",
            k, n
        )));
    }
    let omega = kaehler_form(k);
    let cols: Vec<Vec<f64>> = (0..k)
        .map(|j| (0..n).map(|i| frame.matrix()[(i, j)]).collect())
        .collect();
    for a in 0..k {
        for b in a + 1..k {
            if two_form_eval(&omega, &cols[a], &cols[b]).abs() > tol {
                return Ok(false);
            }
        }
    }
    let p = frame.pluecker();
    let re = sl_form(k, theta).inner(&p);
    let im = im_sl_form(k, theta).inner(&p);
    Ok(im.abs() < tol && re > 0.0)
}

/// Pull a k-form on R^n back to the span of the columns of w (n x m),
/// expressed in the orthonormal coordinates given by those columns.
pub fn pullback(form: &MultiVector, w: &DMatrix<f64>) -> MultiVector {
    let m = w.ncols();
    let k = form.degree() as usize;
    let mut out = MultiVector::zero(m as u8, k as u8);
    for cols in combinations(m, k) {
        let mut acc = 0.0;
        for (idx, c) in form.terms() {
            let rows: Vec<usize> = idx.iter().map(|&a| a as usize - 1).collect();
            acc += c * minor_det(w, &rows, &cols);
        }
        if acc != 0.0 {
            let j: Vec<u8> = cols.iter().map(|&c| (c + 1) as u8).collect();
            out.set(&j, acc).unwrap();
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Freeness {
    Free,
    NotFree,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct FreeCheck {
    pub verdict: Freeness,
    /// largest |Phi| found among k-planes inside the subspace
    pub max_value: f64,
    pub pullback_norm: f64,
    /// an embedded calibrated plane when the verdict is NotFree
    pub witness: Option<DMatrix<f64>>,
}

/// Decide whether a subspace (columns of w, orthonormal) contains a plane
/// calibrated by the form. Free means the restricted maximum stays clearly
/// below 1; NotFree requires a near-unit witness.
pub fn is_free_subspace(form: &MultiVector, w: &DMatrix<f64>, starts: usize, seed: u64) -> FreeCheck {
    let m = w.ncols();
    let k = form.degree() as usize;
    if m < k {
        return FreeCheck { verdict: Freeness::Free, max_value: 0.0, pullback_norm: 0.0, witness: None };
    }
    if m == k {
        let v = phi(form, w).abs();
        let verdict = if v >= 1.0 - 1e-6 {
            Freeness::NotFree
        } else if v < 1.0 - 1e-3 {
            Freeness::Free
        } else {
            Freeness::Inconclusive
        };
        return FreeCheck {
            verdict,
            max_value: v,
            pullback_norm: v,
            witness: if verdict == Freeness::NotFree { Some(w.clone()) } else { None },
        };
    }
    let restricted = pullback(form, w);
    let pb_norm = restricted.norm();
    if pb_norm < 1e-12 {
        return FreeCheck { verdict: Freeness::Free, max_value: 0.0, pullback_norm: pb_norm, witness: None };
    }
    // ascend on the restricted form over the small Grassmannian; the
    // embedder pushes winners back out to ambient witnesses
    let sg = SubspaceGrassmannian::new(w.clone(), k)
        .expect("is_free_subspace needs an orthonormal basis");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = AscentOptions::default();
    let mut max_value = 0.0f64;
    let mut witness = None;
    for _ in 0..starts {
        let run = ascend(&restricted, random_plane(m, k, &mut rng), &opts);
        if run.value > max_value {
            max_value = run.value;
            witness = Some(sg.embed(&run.frame).matrix().clone());
        }
        if max_value >= 1.0 - 1e-6 {
            break;
        }
    }
    let verdict = if max_value >= 1.0 - 1e-6 {
        Freeness::NotFree
    } else if max_value < 1.0 - 1e-3 {
        Freeness::Free
    } else {
        Freeness::Inconclusive
    };
    FreeCheck {
        verdict,
        max_value,
        pullback_norm: pb_norm,
        witness: if verdict == Freeness::NotFree { witness } else { None },
    }
}

#[derive(Clone, Debug)]
pub struct FdRow {
    pub m: usize,
    pub free: usize,
    pub not_free: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug)]
pub struct FdReport {
    pub rows: Vec<FdRow>,
    /// largest dimension where a free subspace was found
    pub d_low: Option<usize>,
    /// last dimension before every sample certified not-free
    pub d_high: Option<usize>,
    pub exact: Option<usize>,
    pub trials: usize,
}

/// Sample subspaces of each dimension from the form's degree up to n-1 and
/// certify each free or not. The free dimension is bracketed by the largest
/// dimension with a free sample and the dimension below the first with
/// unanimous not-free certificates; monotonicity (a subspace of a free
/// subspace is free) makes the bracket sound.
pub fn free_dimension(form: &MultiVector, trials: usize, starts: usize, seed: u64) -> FdReport {
    let n = form.dim() as usize;
    let k = form.degree() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for m in k..n {
        let mut row = FdRow { m, free: 0, not_free: 0, inconclusive: 0 };
        for t in 0..trials {
            let w = random_subspace(n, m, &mut rng);
            let sub_seed = seed ^ ((m as u64) << 32) ^ t as u64;
            match is_free_subspace(form, &w, starts, sub_seed).verdict {
                Freeness::Free => row.free += 1,
                Freeness::NotFree => row.not_free += 1,
                Freeness::Inconclusive => row.inconclusive += 1,
            }
        }
        rows.push(row);
    }
    let d_low = rows.iter().filter(|r| r.free > 0).map(|r| r.m).max();
    let d_high = rows
        .iter()
        .find(|r| r.free == 0 && r.inconclusive == 0 && r.not_free == trials)
        .map(|r| r.m - 1)
        .or(Some(n - 1));
    let exact = match (d_low, d_high) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    };
    FdReport { rows, d_low, d_high, exact, trials }
}

#[derive(Clone, Debug)]
pub struct CriticalClass {
    pub value: f64,
    pub index: usize,
    pub nullity: usize,
    pub positive: usize,
    pub count: usize,
    pub worst_grad: f64,
}

#[derive(Clone, Debug)]
pub struct ZeroLevelProbe {
    pub probes: usize,
    pub regular: usize,
    pub min_grad_norm: f64,
    /// dimension of the level set when every probe was regular
    pub level_dim: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct MorseScanReport {
    pub starts: usize,
    pub classes: Vec<CriticalClass>,
    pub unresolved: usize,
    pub zero_level: ZeroLevelProbe,
}

/// Inventory the critical manifolds of Phi: run ascent and descent from
/// many starts, polish and classify each limit, bucket by value and
/// inertia, and probe the zero level for regularity.
pub fn morse_scan(form: &MultiVector, starts: usize, seed: u64) -> MorseScanReport {
    let n = form.dim() as usize;
    let k = form.degree() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = AscentOptions::default();
    let neg = form.scale(-1.0);
    let mut buckets: Vec<CriticalClass> = Vec::new();
    let mut unresolved = 0usize;
    for s in 0..2 * starts {
        let start = random_plane(n, k, &mut rng);
        let target = if s % 2 == 0 { form } else { &neg };
        let run = ascend(target, start, &opts);
        let polish = newton_polish(target, run.frame, 1e-9, 12);
        if polish.grad_norm >= 1e-6 {
            unresolved += 1;
            continue;
        }
        let rep = classify_critical(form, &polish.frame);
        let key_value = (rep.value * 1e6).round() / 1e6;
        let found = buckets.iter_mut().find(|b| {
            b.value == key_value && b.index == rep.class.index && b.nullity == rep.class.nullity
        });
        match found {
            Some(b) => {
                b.count += 1;
                b.worst_grad = b.worst_grad.max(rep.grad_norm);
            }
            None => buckets.push(CriticalClass {
                value: key_value,
                index: rep.class.index,
                nullity: rep.class.nullity,
                positive: rep.class.positive,
                count: 1,
                worst_grad: rep.grad_norm,
            }),
        }
    }
    buckets.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap());
    let zero_level = probe_zero_level(form, 20, seed ^ 0x5eed);
    MorseScanReport { starts: 2 * starts, classes: buckets, unresolved, zero_level }
}

/// Walk a rotation of the last frame column toward its antipode to cross
/// Phi = 0, then check the zero level is regular (nonzero gradient) there.
/// A regular level is a hypersurface, of dimension k(n-k) - 1.
pub fn probe_zero_level(form: &MultiVector, probes: usize, seed: u64) -> ZeroLevelProbe {
    let n = form.dim() as usize;
    let k = form.degree() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut regular = 0usize;
    let mut min_gn = f64::INFINITY;
    for _ in 0..probes {
        let f = random_plane(n, k, &mut rng);
        let comp = f.complement();
        let w: Vec<f64> = (0..n).map(|i| comp[(i, 0)]).collect();
        let eval = |theta: f64| -> (Frame, f64) {
            let mut m = f.matrix().clone();
            for i in 0..n {
                m[(i, k - 1)] = theta.cos() * f.matrix()[(i, k - 1)] + theta.sin() * w[i];
            }
            let fr = Frame::from_orthonormal(m);
            let v = phi(form, fr.matrix());
            (fr, v)
        };
        let (_, v0) = eval(0.0);
        if v0 == 0.0 {
            continue;
        }
        // Phi at pi is exactly -v0 (one column negated), so a sign change
        // is guaranteed somewhere in (0, pi)
        let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
        let mut vlo = v0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let (_, vm) = eval(mid);
            if vm == 0.0 || (vm > 0.0) == (vlo > 0.0) {
                lo = mid;
                vlo = vm;
                if vm == 0.0 {
                    break;
                }
            } else {
                hi = mid;
            }
        }
        let (fr, v) = eval(0.5 * (lo + hi));
        if v.abs() > 1e-9 {
            continue;
        }
        let gn = riem_grad(form, &fr).norm();
        min_gn = min_gn.min(gn);
        if gn > 1e-3 {
            regular += 1;
        }
    }
    let level_dim = if regular > 0 && regular == probes { Some(k * (n - k) - 1) } else { None };
    ZeroLevelProbe { probes, regular, min_grad_norm: min_gn, level_dim }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_resolve_and_aliases_agree() {
        let (a, _) = builtin_form("sl3").unwrap();
        let (b, _) = builtin_form("sl6").unwrap();
        assert_eq!(a, b);
        assert!(builtin_form("nope").is_err());
    }

    #[test]
    fn contact_nullity_counts_the_face_dimension() {
        // both faces over R^4 are 2-spheres: the SL planes at phase 0 and
        // the complex lines
        for name in ["sl2", "kaehler4"] {
            let (form, _) = builtin_form(name).unwrap();
            let rep = comass(&form, &ComassOptions { starts: 16, ..Default::default() });
            assert_eq!(contact_nullity(&form, &rep).unwrap(), 2, "{}", name);
        }
        // an uncertified report is refused
        let (form, _) = builtin_form("sl2").unwrap();
        let mut rep = comass(&form, &ComassOptions { starts: 4, ..Default::default() });
        rep.inconclusive = true;
        assert!(contact_nullity(&form, &rep).is_err());
    }

    #[test]
    fn comass_of_the_kaehler_form_is_one() {
        let (form, _) = builtin_form("kaehler4").unwrap();
        let opts = ComassOptions { starts: 16, ..Default::default() };
        let rep = comass(&form, &opts);
        assert!((rep.comass - 1.0).abs() < 1e-9, "comass {}", rep.comass);
        assert!(rep.grad_norm_at_argmax < 1e-9);
        assert!(!rep.inconclusive);
    }

    #[test]
    fn comass_is_phase_independent() {
        for theta in [0.0, 0.7, 2.1] {
            let form = sl_form(2, theta);
            let opts = ComassOptions { starts: 12, seed: 99, ..Default::default() };
            let rep = comass(&form, &opts);
            assert!((rep.comass - 1.0).abs() < 1e-8, "theta {}: {}", theta, rep.comass);
        }
    }

    #[test]
    fn standard_slag_plane_detected() {
        let mut m = DMatrix::<f64>::zeros(6, 3);
        m[(0, 0)] = 1.0; // e1
        m[(2, 1)] = 1.0; // e3
        m[(4, 2)] = 1.0; // e5
        let f = Frame::new(m).unwrap();
        assert!(is_sl_plane(&f, 0.0, 1e-9).unwrap());
        // rotating the first column by a unitary phase breaks the phase
        // condition until the angle returns to zero
        let alpha = 0.4f64;
        let mut m2 = f.matrix().clone();
        m2[(0, 0)] = alpha.cos();
        m2[(1, 0)] = alpha.sin();
        let f2 = Frame::new(m2).unwrap();
        assert!(!is_sl_plane(&f2, 0.0, 1e-9).unwrap());
    }

    #[test]
    fn structured_subspaces_pull_back_to_zero() {
        for name in ["sl6", "sl4", "kaehler4"] {
            let (form, _) = builtin_form(name).unwrap();
            let w = structured_free_subspace(name).unwrap();
            if w.ncols() > form.degree() as usize {
                assert_eq!(pullback(&form, &w).norm(), 0.0, "{}", name);
            } else {
                assert_eq!(phi(&form, &w), 0.0, "{}", name);
            }
        }
    }

    #[test]
    fn hyperplanes_in_r4_are_never_free() {
        // every 3-plane in R^4 contains a plane calibrated by Re(dz1 dz2)
        let (form, _) = builtin_form("sl4").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for t in 0..5 {
            let w = random_subspace(4, 3, &mut rng);
            let chk = is_free_subspace(&form, &w, 8, 1000 + t);
            assert_eq!(chk.verdict, Freeness::NotFree, "max {}", chk.max_value);
            assert!(chk.max_value > 1.0 - 1e-9);
        }
    }
}
