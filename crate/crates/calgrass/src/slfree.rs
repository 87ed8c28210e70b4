//! Surfaces in R^4 through the bivector lens: the invariant splitting of
//! their tangent planes, degrees of the two half Gauss maps, scans for
//! special Lagrangian tangencies, and the dimension count that singles out
//! the geometries where freeness can fail.

use crate::exterior::{im_sl_form, kaehler_form, sl_form, MultiVector};
use crate::grassmann::Frame;
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Integer solutions (k, n) of the incidence dimension count
///   (n^2 + n - 2)/2 + (k - n)(2n - k) + k = k(2n - k)
/// in the admissible window n <= k <= 2n - 2.
pub fn dimension_equation_solutions(k_max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k in 2..=k_max {
        for n in 2..=k {
            if k > 2 * n - 2 {
                continue;
            }
            let lhs = (n * n + n - 2) / 2 + (k - n) * (2 * n - k) + k;
            let rhs = k * (2 * n - k);
            if lhs == rhs {
                out.push((k, n));
            }
        }
    }
    out
}

/// Dimension of the special Lagrangian face of the Grassmannian of
/// n-planes in C^n: (n^2 + n - 2)/2.
pub fn slag_dim(n: u32) -> u32 {
    (n * n + n - 2) / 2
}

/// Wedge of two vectors in R^4 as a 2-vector.
pub fn vec_wedge(x: &[f64; 4], y: &[f64; 4]) -> MultiVector {
    let mut w = MultiVector::zero(4, 2);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let c = x[i] * y[j] - x[j] * y[i];
            if c != 0.0 {
                w.set(&[(i + 1) as u8, (j + 1) as u8], c).unwrap();
            }
        }
    }
    w
}

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Coordinates of a 2-vector in the orthonormal self-dual basis
///   (e12+e34)/sqrt2, (e14+e23)/sqrt2, (e13-e24)/sqrt2
/// and the anti-self-dual basis
///   (e12-e34)/sqrt2, (e13+e24)/sqrt2, (e14-e23)/sqrt2.
pub fn split_two_vector(w: &MultiVector) -> ([f64; 3], [f64; 3]) {
    assert_eq!(w.dim(), 4);
    assert_eq!(w.degree(), 2);
    let c = |i: u8, j: u8| w.coeff(&[i, j]);
    let plus = [
        (c(1, 2) + c(3, 4)) * INV_SQRT2,
        (c(1, 4) + c(2, 3)) * INV_SQRT2,
        (c(1, 3) - c(2, 4)) * INV_SQRT2,
    ];
    let minus = [
        (c(1, 2) - c(3, 4)) * INV_SQRT2,
        (c(1, 3) + c(2, 4)) * INV_SQRT2,
        (c(1, 4) - c(2, 3)) * INV_SQRT2,
    ];
    (plus, minus)
}

/// The two points on S^2 x S^2 attached to an oriented 2-plane in R^4:
/// normalized self-dual and anti-self-dual halves of its unit 2-vector.
/// Errors if either half is numerically zero, which cannot happen for a
/// genuine plane (each half of a unit simple 2-vector has norm 1/sqrt2).
pub fn split_plus_minus(frame: &Frame) -> Result<([f64; 3], [f64; 3])> {
    if frame.ambient_dim() != 4 || frame.plane_dim() != 2 {
        return Err(Error::Usage("split_plus_minus expects a 2-plane in R^4".into()));
    }
    let m = frame.matrix();
    let x = [m[(0, 0)], m[(1, 0)], m[(2, 0)], m[(3, 0)]];
    let y = [m[(0, 1)], m[(1, 1)], m[(2, 1)], m[(3, 1)]];
    let (p, q) = split_two_vector(&vec_wedge(&x, &y));
    let np = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let nq = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    if np < 1e-12 || nq < 1e-12 {
        return Err(Error::Numeric("degenerate half of a split 2-vector".into()));
    }
    Ok(([p[0] / np, p[1] / np, p[2] / np], [q[0] / nq, q[1] / nq, q[2] / nq]))
}

/// An immersed doubly periodic (or polar) surface with analytic first and
/// second partials.
#[derive(Clone, Copy)]
pub struct Surface {
    pub name: &'static str,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub f: fn(f64, f64) -> [f64; 4],
    pub fu: fn(f64, f64) -> [f64; 4],
    pub fv: fn(f64, f64) -> [f64; 4],
    pub fuu: fn(f64, f64) -> [f64; 4],
    pub fuv: fn(f64, f64) -> [f64; 4],
    pub fvv: fn(f64, f64) -> [f64; 4],
}

const TAU: f64 = 2.0 * PI;

pub static W_TORUS: Surface = Surface {
    name: "w_torus",
    u_range: (0.0, TAU),
    v_range: (0.0, TAU),
    f: |u, v| [u.cos(), v.cos(), u.sin(), v.sin()],
    fu: |u, _| [-u.sin(), 0.0, u.cos(), 0.0],
    fv: |_, v| [0.0, -v.sin(), 0.0, v.cos()],
    fuu: |u, _| [-u.cos(), 0.0, -u.sin(), 0.0],
    fuv: |_, _| [0.0; 4],
    fvv: |_, v| [0.0, -v.cos(), 0.0, -v.sin()],
};

pub static Z_CLIFFORD: Surface = Surface {
    name: "z_clifford",
    u_range: (0.0, TAU),
    v_range: (0.0, TAU),
    f: |u, v| [u.cos(), u.sin(), v.cos(), v.sin()],
    fu: |u, _| [-u.sin(), u.cos(), 0.0, 0.0],
    fv: |_, v| [0.0, 0.0, -v.sin(), v.cos()],
    fuu: |u, _| [-u.cos(), -u.sin(), 0.0, 0.0],
    fuv: |_, _| [0.0; 4],
    fvv: |_, v| [0.0, 0.0, -v.cos(), -v.sin()],
};

pub static ROUND_SPHERE: Surface = Surface {
    name: "round_sphere",
    u_range: (0.0, PI),
    v_range: (0.0, TAU),
    f: |u, v| [u.sin() * v.cos(), u.sin() * v.sin(), u.cos(), 0.0],
    fu: |u, v| [u.cos() * v.cos(), u.cos() * v.sin(), -u.sin(), 0.0],
    fv: |u, v| [-u.sin() * v.sin(), u.sin() * v.cos(), 0.0, 0.0],
    fuu: |u, v| [-u.sin() * v.cos(), -u.sin() * v.sin(), -u.cos(), 0.0],
    fuv: |u, v| [-u.cos() * v.sin(), u.cos() * v.cos(), 0.0, 0.0],
    fvv: |u, v| [-u.sin() * v.cos(), -u.sin() * v.sin(), 0.0, 0.0],
};

pub fn surface_names() -> [&'static str; 3] {
    ["w_torus", "z_clifford", "round_sphere"]
}

pub fn surface(name: &str) -> Result<&'static Surface> {
    match name {
        "w_torus" => Ok(&W_TORUS),
        "z_clifford" => Ok(&Z_CLIFFORD),
        "round_sphere" => Ok(&ROUND_SPHERE),
        _ => Err(Error::UnknownName(format!("no surface named '{}'", name))),
    }
}

fn sub3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// Derivative of a/|a| given a and a_t.
fn unit_derivative(a: [f64; 3], at: [f64; 3]) -> [f64; 3] {
    let n = norm3(a);
    let coef = dot3(a, at) / (n * n * n);
    [
        at[0] / n - a[0] * coef,
        at[1] / n - a[1] * coef,
        at[2] / n - a[2] * coef,
    ]
}

#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub surface: &'static str,
    pub raw: (f64, f64),
    pub degrees: (i64, i64),
    pub residual: f64,
    pub samples: usize,
}

/// Degrees of the two half Gauss maps by midpoint quadrature of the pulled
/// back area form of the 2-sphere, n x n samples.
pub fn gauss_degree(surf: &Surface, n: usize) -> DegreeReport {
    let (u0, u1) = surf.u_range;
    let (v0, v1) = surf.v_range;
    let du = (u1 - u0) / n as f64;
    let dv = (v1 - v0) / n as f64;
    let mut acc_plus = 0.0;
    let mut acc_minus = 0.0;
    for i in 0..n {
        let u = u0 + (i as f64 + 0.5) * du;
        for j in 0..n {
            let v = v0 + (j as f64 + 0.5) * dv;
            let fu = (surf.fu)(u, v);
            let fv = (surf.fv)(u, v);
            let fuu = (surf.fuu)(u, v);
            let fuv = (surf.fuv)(u, v);
            let fvv = (surf.fvv)(u, v);
            let w = vec_wedge(&fu, &fv);
            let wu = vec_wedge(&fuu, &fv).add(&vec_wedge(&fu, &fuv)).unwrap();
            let wv = vec_wedge(&fuv, &fv).add(&vec_wedge(&fu, &fvv)).unwrap();
            let (a, b) = split_two_vector(&w);
            let (au, bu) = split_two_vector(&wu);
            let (av, bv) = split_two_vector(&wv);
            let ahat = sub3(a, 1.0 / norm3(a));
            let ahat_u = unit_derivative(a, au);
            let ahat_v = unit_derivative(a, av);
            acc_plus += dot3(ahat, cross3(ahat_u, ahat_v));
            let bhat = sub3(b, 1.0 / norm3(b));
            let bhat_u = unit_derivative(b, bu);
            let bhat_v = unit_derivative(b, bv);
            acc_minus += dot3(bhat, cross3(bhat_u, bhat_v));
        }
    }
    let scale = du * dv / (4.0 * PI);
    let raw = (acc_plus * scale, acc_minus * scale);
    let degrees = (raw.0.round() as i64, raw.1.round() as i64);
    let residual = (raw.0 - degrees.0 as f64)
        .abs()
        .max((raw.1 - degrees.1 as f64).abs());
    DegreeReport { surface: surf.name, raw, degrees, residual, samples: n * n }
}

/// Calibration residuals of the unit tangent 2-vector at one point.
pub fn tangent_residuals(surf: &Surface, u: f64, v: f64) -> (f64, f64, f64) {
    let fu = (surf.fu)(u, v);
    let fv = (surf.fv)(u, v);
    let w = vec_wedge(&fu, &fv);
    let n = w.norm();
    let re = sl_form(2, 0.0);
    let im = im_sl_form(2, 0.0);
    let om = kaehler_form(4);
    (w.inner(&re) / n, w.inner(&om) / n, w.inner(&im) / n)
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    pub u: f64,
    pub v: f64,
    pub re_res: f64,
    pub omega_res: f64,
    pub im_res: f64,
}

#[derive(Clone, Debug)]
pub struct SlCandidate {
    pub u: f64,
    pub v: f64,
    pub re_res: f64,
    pub omega_res: f64,
    pub im_res: f64,
    /// The tangent plane passes the exact special Lagrangian predicate at
    /// the phase suggested by the sign of the residual.
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub surface: &'static str,
    pub rows: Vec<ScanRow>,
    pub candidates: Vec<SlCandidate>,
    pub max_abs_re: f64,
}

fn wrapped_dist(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).abs() % period;
    d.min(period - d)
}

/// Scan the parameter grid for points whose tangent plane is special
/// Lagrangian up to `tol`. Flagged cells are clustered by non maximum
/// suppression and each surviving local peak is refined by repeated
/// eightfold subdivision.
pub fn sl_tangent_scan(surf: &Surface, n: usize, tol: f64) -> ScanReport {
    let (u0, u1) = surf.u_range;
    let (v0, v1) = surf.v_range;
    let du = (u1 - u0) / n as f64;
    let dv = (v1 - v0) / n as f64;
    let mut rows = Vec::with_capacity(n * n);
    let mut flagged: Vec<(f64, f64, f64)> = Vec::new();
    let mut max_abs_re: f64 = 0.0;
    for i in 0..n {
        let u = u0 + (i as f64 + 0.5) * du;
        for j in 0..n {
            let v = v0 + (j as f64 + 0.5) * dv;
            let (re, om, im) = tangent_residuals(surf, u, v);
            max_abs_re = max_abs_re.max(re.abs());
            rows.push(ScanRow { u, v, re_res: re, omega_res: om, im_res: im });
            if re.abs() > 1.0 - tol {
                flagged.push((u, v, re));
            }
        }
    }
    flagged.sort_by(|x, y| y.2.abs().partial_cmp(&x.2.abs()).unwrap());
    let radius = 3.0 * du.max(dv);
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    'outer: for f in &flagged {
        for s in &seeds {
            if wrapped_dist(f.0, s.0, u1 - u0) < radius
                && wrapped_dist(f.1, s.1, v1 - v0) < radius
            {
                continue 'outer;
            }
        }
        seeds.push((f.0, f.1));
    }
    let mut candidates = Vec::new();
    for (su, sv) in seeds {
        let (cu, cv, _) = refine_cell(surf, su, sv, du, dv);
        let (re2, om2, im2) = tangent_residuals(surf, cu, cv);
        max_abs_re = max_abs_re.max(re2.abs());
        candidates.push(SlCandidate {
            u: cu,
            v: cv,
            re_res: re2,
            omega_res: om2,
            im_res: im2,
            verified: verify_sl_tangent(surf, cu, cv, re2),
        });
    }
    ScanReport { surface: surf.name, rows, candidates, max_abs_re }
}

/// Three rounds of eightfold subdivision around a flagged cell, following
/// the maximum of |ReOmega residual|.
fn refine_cell(surf: &Surface, u: f64, v: f64, du: f64, dv: f64) -> (f64, f64, f64) {
    let mut best = (u, v, tangent_residuals(surf, u, v).0);
    let (mut cu, mut cv, mut su, mut sv) = (u, v, du, dv);
    for _ in 0..3 {
        for i in 0..8 {
            let uu = cu - su / 2.0 + (i as f64 + 0.5) * su / 8.0;
            for j in 0..8 {
                let vv = cv - sv / 2.0 + (j as f64 + 0.5) * sv / 8.0;
                let (re, _, _) = tangent_residuals(surf, uu, vv);
                if re.abs() > best.2.abs() {
                    best = (uu, vv, re);
                }
            }
        }
        cu = best.0;
        cv = best.1;
        su /= 8.0;
        sv /= 8.0;
    }
    best
}

fn verify_sl_tangent(surf: &Surface, u: f64, v: f64, re_res: f64) -> bool {
    let fu = (surf.fu)(u, v);
    let fv = (surf.fv)(u, v);
    let nu = fu.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu < 1e-12 {
        return false;
    }
    let e1: Vec<f64> = fu.iter().map(|x| x / nu).collect();
    let d: f64 = e1.iter().zip(&fv).map(|(a, b)| a * b).sum();
    let mut e2: Vec<f64> = fv.iter().zip(&e1).map(|(b, a)| b - d * a).collect();
    let n2 = e2.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n2 < 1e-12 {
        return false;
    }
    for x in &mut e2 {
        *x /= n2;
    }
    let mut m = DMatrix::zeros(4, 2);
    for i in 0..4 {
        m[(i, 0)] = e1[i];
        m[(i, 1)] = e2[i];
    }
    let Ok(frame) = Frame::new(m) else {
        return false;
    };
    let theta = if re_res >= 0.0 { 0.0 } else { PI };
    crate::calibrations::is_sl_plane(&frame, theta, 1e-3).unwrap_or(false)
}

/// CSV of a full scan: u, v, |ReOmega residual|, omega residual, ImOmega
/// residual.
pub fn scan_csv(report: &ScanReport) -> String {
    let mut out = String::from("u,v,abs_re_omega,omega_res,im_omega_res\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{:.6},{:.6},{:.9},{:.9},{:.9}\n",
            r.u,
            r.v,
            r.re_res.abs(),
            r.omega_res,
            r.im_res
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{random_plane, random_rotation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn dimension_count_has_exactly_two_solutions() {
        assert_eq!(dimension_equation_solutions(40), vec![(2, 2), (6, 5)]);
        assert_eq!(slag_dim(1), 0);
        assert_eq!(slag_dim(2), 2);
        assert_eq!(slag_dim(3), 5);
    }

    #[test]
    fn split_of_coordinate_planes() {
        let e12 = vec_wedge(&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]);
        let (p, m) = split_two_vector(&e12);
        let s = INV_SQRT2;
        assert!((p[0] - s).abs() < 1e-15 && p[1] == 0.0 && p[2] == 0.0);
        assert!((m[0] - s).abs() < 1e-15 && m[1] == 0.0 && m[2] == 0.0);
        let e34 = vec_wedge(&[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]);
        let (p, m) = split_two_vector(&e34);
        assert!((p[0] - s).abs() < 1e-15);
        assert!((m[0] + s).abs() < 1e-15);
        // the normalized map sends e12 and e34 to antipodes in the second factor
        let id2 = Frame::new(DMatrix::from_fn(4, 2, |i, j| if i == j { 1.0 } else { 0.0 }))
            .unwrap();
        let (p, m) = split_plus_minus(&id2).unwrap();
        assert_eq!(p, [1.0, 0.0, 0.0]);
        assert_eq!(m, [1.0, 0.0, 0.0]);
        let e34f = Frame::new(DMatrix::from_fn(4, 2, |i, j| {
            if i == j + 2 { 1.0 } else { 0.0 }
        }))
        .unwrap();
        let (p, m) = split_plus_minus(&e34f).unwrap();
        assert_eq!(p, [1.0, 0.0, 0.0]);
        assert_eq!(m, [-1.0, 0.0, 0.0]);
    }

    #[test]
    fn split_halves_of_unit_planes_and_rotation_equivariance() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..20 {
            let f = random_plane(4, 2, &mut rng);
            let fm = f.matrix();
            let x = [fm[(0, 0)], fm[(1, 0)], fm[(2, 0)], fm[(3, 0)]];
            let y = [fm[(0, 1)], fm[(1, 1)], fm[(2, 1)], fm[(3, 1)]];
            let w = vec_wedge(&x, &y);
            let (p, m) = split_two_vector(&w);
            // a unit simple 2-vector splits into halves of norm 1/sqrt(2)
            assert!((norm3(p) - INV_SQRT2).abs() < 1e-12);
            assert!((norm3(m) - INV_SQRT2).abs() < 1e-12);
            // rotations act orthogonally on each half separately
            let r = random_rotation(4, &mut rng);
            let rx = {
                let mut o = [0.0; 4];
                for i in 0..4 {
                    for k in 0..4 {
                        o[i] += r[(i, k)] * x[k];
                    }
                }
                o
            };
            let ry = {
                let mut o = [0.0; 4];
                for i in 0..4 {
                    for k in 0..4 {
                        o[i] += r[(i, k)] * y[k];
                    }
                }
                o
            };
            let (p2, m2) = split_two_vector(&vec_wedge(&rx, &ry));
            assert!((norm3(p2) - norm3(p)).abs() < 1e-9);
            assert!((norm3(m2) - norm3(m)).abs() < 1e-9);
        }
        // rotating a pair of planes preserves the angles between their
        // split points, factor by factor
        for _ in 0..10 {
            let f = random_plane(4, 2, &mut rng);
            let g = random_plane(4, 2, &mut rng);
            let (pf, mf) = split_plus_minus(&f).unwrap();
            let (pg, mg) = split_plus_minus(&g).unwrap();
            let r = random_rotation(4, &mut rng);
            let (pf2, mf2) = split_plus_minus(&f.rotate(&r)).unwrap();
            let (pg2, mg2) = split_plus_minus(&g.rotate(&r)).unwrap();
            assert!((dot3(pf, pg) - dot3(pf2, pg2)).abs() < 1e-8);
            assert!((dot3(mf, mg) - dot3(mf2, mg2)).abs() < 1e-8);
        }
    }

    #[test]
    fn clifford_residuals_are_trigonometric() {
        let (re, om, im) = tangent_residuals(&Z_CLIFFORD, 0.7, 1.1);
        assert!((re + (0.7f64 + 1.1).cos()).abs() < 1e-12);
        assert!(om.abs() < 1e-12);
        assert!((im + (0.7f64 + 1.1).sin()).abs() < 1e-12);
        // the product torus never touches the special Lagrangian locus
        let (re_t, _, _) = tangent_residuals(&W_TORUS, 0.9, 2.3);
        assert!(re_t.abs() < 1e-12);
    }

    #[test]
    fn degrees_of_catalog_surfaces() {
        for (surf, expect) in [
            (&W_TORUS, (0, 0)),
            (&Z_CLIFFORD, (0, 0)),
            (&ROUND_SPHERE, (-1, -1)),
        ] {
            let rep = gauss_degree(surf, 64);
            assert_eq!(rep.degrees, expect, "{}", surf.name);
            assert!(rep.residual < 0.1, "{}: residual {}", surf.name, rep.residual);
        }
        // stability under refinement
        let a = gauss_degree(&ROUND_SPHERE, 48);
        let b = gauss_degree(&ROUND_SPHERE, 64);
        assert_eq!(a.degrees, b.degrees);
    }

    #[test]
    fn sphere_scan_finds_the_two_sl_points() {
        let rep = sl_tangent_scan(&ROUND_SPHERE, 48, 1e-2);
        assert!(rep.max_abs_re > 1.0 - 1e-6);
        assert_eq!(rep.candidates.len(), 2);
        for c in &rep.candidates {
            let near_first =
                (c.u - PI / 2.0).abs() < 0.05 && (c.v - PI / 2.0).abs() < 0.05;
            let near_second =
                (c.u - PI / 2.0).abs() < 0.05 && (c.v - 3.0 * PI / 2.0).abs() < 0.05;
            assert!(near_first || near_second, "stray candidate at ({}, {})", c.u, c.v);
            assert!(c.verified, "candidate at ({}, {}) fails the exact predicate", c.u, c.v);
        }
        // and the flat torus has none at all, even at an absurd tolerance
        for tol in [1e-2, 0.49] {
            let none = sl_tangent_scan(&W_TORUS, 32, tol);
            assert!(none.candidates.is_empty());
            assert!(none.max_abs_re < 1e-9);
        }
        // the diagonal torus has a full curve of them
        let many = sl_tangent_scan(&Z_CLIFFORD, 32, 1e-2);
        assert!(many.max_abs_re > 1.0 - 1e-6);
        assert!(!many.candidates.is_empty());
    }
}
