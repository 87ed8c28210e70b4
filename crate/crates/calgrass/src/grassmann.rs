//! Oriented Grassmannian G_k+(R^n) as n x k column-orthonormal frames.

use crate::exterior::MultiVector;
use crate::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Orthonormal n x k frame. Columns span the plane, their order and signs
/// carry the orientation.
#[derive(Clone, Debug)]
pub struct Frame {
    mat: DMatrix<f64>,
}

impl Frame {
    /// Wrap a matrix after checking column orthonormality.
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        let k = mat.ncols();
        let gram = mat.transpose() * &mat;
        let mut err = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { 1.0 } else { 0.0 };
                err = err.max((gram[(i, j)] - want).abs());
            }
        }
        if err > 1e-8 {
            return Err(Error::Numeric(format!(
                "frame columns not orthonormal, gram deviation {:.2e}",
                err
            )));
        }
        Ok(Frame { mat })
    }

    pub(crate) fn from_orthonormal(mat: DMatrix<f64>) -> Self {
        Frame { mat }
    }

    pub fn ambient_dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn plane_dim(&self) -> usize {
        self.mat.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// All k x k minors as a unit simple k-vector (Pluecker coordinates).
    pub fn pluecker(&self) -> MultiVector {
        let n = self.ambient_dim();
        let k = self.plane_dim();
        let mut mv = MultiVector::zero(n as u8, k as u8);
        for rows in combinations(n, k) {
            let d = minor_det(&self.mat, &rows, &(0..k).collect::<Vec<_>>());
            if d != 0.0 {
                let idx: Vec<u8> = rows.iter().map(|r| (r + 1) as u8).collect();
                mv.set(&idx, d).unwrap();
            }
        }
        mv
    }

    /// Same plane, opposite orientation. Negating one column negates every
    /// k x k minor exactly, so the Pluecker image flips bit for bit.
    pub fn orientation_flip(&self) -> Frame {
        let mut m = self.mat.clone();
        let last = m.ncols() - 1;
        for r in 0..m.nrows() {
            m[(r, last)] = -m[(r, last)];
        }
        Frame { mat: m }
    }

    /// Project an ambient n x k perturbation onto the horizontal space at
    /// this frame: (I - F F^T) A.
    pub fn tangent_project(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        a - &self.mat * (self.mat.transpose() * a)
    }

    /// Move along a horizontal direction and re-orthonormalize by QR with
    /// positive diagonal. A zero step or zero direction returns the frame
    /// unchanged, bit for bit. Rank-deficient inputs are rejected.
    pub fn retract(&self, delta: &DMatrix<f64>, step: f64) -> Result<Frame> {
        if step == 0.0 || delta.iter().all(|&x| x == 0.0) {
            return Ok(self.clone());
        }
        let target = &self.mat + delta * step;
        orthonormalize(&target).ok_or_else(|| {
            Error::Numeric(format!(
                "retract: target matrix is rank deficient (step {:.3e})",
                step
            ))
        })
    }

    /// Orthonormal basis of the orthogonal complement of the plane,
    /// read off the full QR of [F | I].
    pub fn complement(&self) -> DMatrix<f64> {
        let n = self.ambient_dim();
        let k = self.plane_dim();
        let mut ext = DMatrix::<f64>::zeros(n, k + n);
        ext.view_mut((0, 0), (n, k)).copy_from(&self.mat);
        for i in 0..n {
            ext[(i, k + i)] = 1.0;
        }
        let qr = ext.qr();
        let q = qr.q();
        q.columns(k, n - k).into_owned()
    }

    /// Basis of the horizontal tangent space: one n x k matrix per pair of
    /// a complement direction and a column slot.
    pub fn horizontal_basis(&self) -> Vec<DMatrix<f64>> {
        let n = self.ambient_dim();
        let k = self.plane_dim();
        let comp = self.complement();
        let mut basis = Vec::with_capacity((n - k) * k);
        for a in 0..n - k {
            for j in 0..k {
                let mut e = DMatrix::<f64>::zeros(n, k);
                for r in 0..n {
                    e[(r, j)] = comp[(r, a)];
                }
                basis.push(e);
            }
        }
        basis
    }

    /// Apply an ambient rotation.
    pub fn rotate(&self, r: &DMatrix<f64>) -> Frame {
        Frame { mat: r * &self.mat }
    }
}

/// QR with the R diagonal forced positive; None if numerically singular.
fn orthonormalize(m: &DMatrix<f64>) -> Option<Frame> {
    let k = m.ncols();
    let scale = m.amax().max(1.0);
    let qr = m.clone().qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        let d = r[(j, j)];
        if d.abs() < 1e-12 * scale {
            return None;
        }
        if d < 0.0 {
            for i in 0..q.nrows() {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    Some(Frame { mat: q })
}

/// Haar-random oriented k-plane in R^n: orthonormalize a Gaussian matrix,
/// fixing signs by the positive-diagonal QR convention.
pub fn random_plane<R: Rng>(n: usize, k: usize, rng: &mut R) -> Frame {
    assert!(k >= 1 && k < n || k == n);
    loop {
        let g = DMatrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal));
        if let Some(f) = orthonormalize(&g) {
            return f;
        }
    }
}

/// Haar-random element of SO(n).
pub fn random_rotation<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let mut q = random_plane(n, n, rng).mat;
    if q.determinant() < 0.0 {
        let last = n - 1;
        for i in 0..n {
            q[(i, last)] = -q[(i, last)];
        }
    }
    q
}

/// Orthonormal basis of a random m-dimensional subspace (orientation not
/// meaningful here).
pub fn random_subspace<R: Rng>(n: usize, m: usize, rng: &mut R) -> DMatrix<f64> {
    random_plane(n, m, rng).mat
}

/// Does the subspace spanned by w contain every column of f, up to tol?
pub fn subspace_contains(w: &DMatrix<f64>, f: &DMatrix<f64>, tol: f64) -> bool {
    let resid = f - w * (w.transpose() * f);
    resid.amax() < tol
}

/// The Grassmannian of k-planes constrained to a subspace: samples points
/// of G_k(span W) and embeds frames of the small Grassmannian as ambient
/// frames whose columns lie in span(W).
pub struct SubspaceGrassmannian {
    w: DMatrix<f64>,
    k: usize,
}

impl SubspaceGrassmannian {
    /// `w` must have orthonormal columns and at least k of them.
    pub fn new(w: DMatrix<f64>, k: usize) -> Result<Self> {
        let d = w.ncols();
        if k > d {
            return Err(Error::Usage(format!(
                "cannot fit {}-planes inside a {}-dimensional subspace",
                k, d
            )));
        }
        let gram = w.transpose() * &w;
        let mut dev = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((gram[(i, j)] - want).abs());
            }
        }
        if dev > 1e-8 {
            return Err(Error::Numeric(format!(
                "subspace basis is not orthonormal (gram deviation {:.2e})",
                dev
            )));
        }
        Ok(SubspaceGrassmannian { w, k })
    }

    pub fn ambient_dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn subspace_dim(&self) -> usize {
        self.w.ncols()
    }

    /// Dimension k(d - k) of the constrained Grassmannian itself.
    pub fn intrinsic_dim(&self) -> usize {
        self.k * (self.w.ncols() - self.k)
    }

    /// Push a frame of the small Grassmannian out to the ambient space.
    /// The product of two orthonormal-column matrices is orthonormal, so
    /// no renormalization happens.
    pub fn embed(&self, inner: &Frame) -> Frame {
        assert_eq!(inner.ambient_dim(), self.w.ncols());
        assert_eq!(inner.plane_dim(), self.k);
        Frame::from_orthonormal(&self.w * inner.matrix())
    }

    /// Haar-random k-plane inside the subspace.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Frame {
        self.embed(&random_plane(self.w.ncols(), self.k, rng))
    }
}

/// Determinant of the square submatrix picked by `rows` and `cols`,
/// expanded directly (sizes up to 4).
pub fn minor_det(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    debug_assert_eq!(rows.len(), cols.len());
    match rows.len() {
        0 => 1.0,
        1 => m[(rows[0], cols[0])],
        2 => {
            m[(rows[0], cols[0])] * m[(rows[1], cols[1])]
                - m[(rows[0], cols[1])] * m[(rows[1], cols[0])]
        }
        3 => {
            let a = |i: usize, j: usize| m[(rows[i], cols[j])];
            a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
        }
        _ => {
            // Laplace expansion along the first row
            let mut acc = 0.0;
            let sub_rows = &rows[1..];
            for (j, &c) in cols.iter().enumerate() {
                let v = m[(rows[0], c)];
                if v == 0.0 {
                    continue;
                }
                let sub_cols: Vec<usize> =
                    cols.iter().enumerate().filter(|(jj, _)| *jj != j).map(|(_, &cc)| cc).collect();
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += s * v * minor_det(m, sub_rows, &sub_cols);
            }
            acc
        }
    }
}

/// All k-element subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn subspace_grassmannian_samples_stay_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // a 2-dim subspace holds exactly one 2-plane
        let w2 = DMatrix::from_fn(4, 2, |i, j| if i == j { 1.0 } else { 0.0 });
        let only = SubspaceGrassmannian::new(w2, 2).unwrap();
        let p = only.sample(&mut rng).pluecker();
        assert!((p.coeff(&[1, 2]).abs() - 1.0).abs() < 1e-12);

        // k larger than the subspace is rejected, as is a skew basis
        let w2 = DMatrix::from_fn(4, 2, |i, j| if i == j { 1.0 } else { 0.0 });
        assert!(SubspaceGrassmannian::new(w2, 3).is_err());
        let skew = DMatrix::from_fn(4, 2, |i, _| if i < 2 { 1.0 } else { 0.0 });
        assert!(SubspaceGrassmannian::new(skew, 1).is_err());

        // containment residual over a random 3-dim subspace of R^6
        let w = random_subspace(6, 3, &mut rng);
        let sg = SubspaceGrassmannian::new(w.clone(), 2).unwrap();
        for _ in 0..100 {
            let f = sg.sample(&mut rng);
            let resid = f.matrix() - &w * (w.transpose() * f.matrix());
            assert!(resid.amax() < 1e-10);
        }

        // local rank probe: perturbing a sampled plane inside a 3-dim
        // subspace moves it in exactly intrinsic_dim = 2 directions
        assert_eq!(sg.intrinsic_dim(), 2);
        let inner0 = random_plane(3, 2, &mut rng);
        let base = sg.embed(&inner0).pluecker();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for _ in 0..40 {
            let delta = inner0.tangent_project(&DMatrix::from_fn(3, 2, |_, _| {
                rng.gen::<f64>() - 0.5
            }));
            let nearby = sg.embed(&inner0.retract(&delta, 1e-4).unwrap());
            let diff = nearby.pluecker().sub(&base).unwrap();
            rows.push((1..=6).flat_map(|i| ((i + 1)..=6).map(move |j| (i, j)))
                .map(|(i, j)| diff.coeff(&[i as u8, j as u8]))
                .collect());
        }
        let m = DMatrix::from_fn(rows.len(), 15, |r, c| rows[r][c]);
        let sv = m.svd(false, false).singular_values;
        // two directions at the perturbation scale, the rest second order
        assert!(sv[1] > 1e-6);
        assert!(sv[2] / sv[1] < 1e-2);
    }

    #[test]
    fn combinations_count_and_order() {
        let c = combinations(6, 3);
        assert_eq!(c.len(), 20);
        assert_eq!(c[0], vec![0, 1, 2]);
        assert_eq!(c[19], vec![3, 4, 5]);
        assert_eq!(combinations(4, 4), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn random_plane_is_orthonormal_with_unit_pluecker() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_plane(6, 3, &mut rng);
            assert!(Frame::new(f.matrix().clone()).is_ok());
            assert!((f.pluecker().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn axis_plane_pluecker() {
        let mut m = DMatrix::<f64>::zeros(6, 3);
        m[(0, 0)] = 1.0;
        m[(2, 1)] = 1.0;
        m[(4, 2)] = 1.0;
        let f = Frame::new(m).unwrap();
        let p = f.pluecker();
        assert_eq!(p.coeff(&[1, 3, 5]), 1.0);
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn orientation_flip_negates_pluecker_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let f = random_plane(6, 3, &mut rng);
            let p = f.pluecker();
            let q = f.orientation_flip().pluecker();
            for (idx, c) in p.terms() {
                assert_eq!(q.coeff(idx), -c, "flip must negate coefficient at {:?}", idx);
            }
        }
    }

    #[test]
    fn retract_zero_step_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_plane(6, 3, &mut rng);
        let dir = DMatrix::from_fn(6, 3, |i, j| (i + 2 * j) as f64 * 0.1);
        let same = f.retract(&dir, 0.0).unwrap();
        assert_eq!(f.matrix(), same.matrix());
        let zero = DMatrix::<f64>::zeros(6, 3);
        let same2 = f.retract(&zero, 0.5).unwrap();
        assert_eq!(f.matrix(), same2.matrix());
    }

    #[test]
    fn retract_rejects_rank_deficient() {
        let mut m = DMatrix::<f64>::zeros(6, 3);
        m[(0, 0)] = 1.0;
        m[(1, 1)] = 1.0;
        m[(2, 2)] = 1.0;
        let f = Frame::new(m.clone()).unwrap();
        // direction that collapses column 2 onto zero
        let mut d = DMatrix::<f64>::zeros(6, 3);
        d[(2, 2)] = -1.0;
        let err = f.retract(&d, 1.0);
        assert!(err.is_err());
    }

    #[test]
    fn complement_and_horizontal_basis_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_plane(6, 3, &mut rng);
        let c = f.complement();
        assert_eq!((c.nrows(), c.ncols()), (6, 3));
        // complement columns orthonormal and orthogonal to the frame
        let g = c.transpose() * &c;
        assert!((g - DMatrix::<f64>::identity(3, 3)).amax() < 1e-10);
        assert!((f.matrix().transpose() * &c).amax() < 1e-10);
        let basis = f.horizontal_basis();
        assert_eq!(basis.len(), 9);
        // basis elements are horizontal and orthonormal in the Frobenius sense
        for (i, e) in basis.iter().enumerate() {
            assert!((f.tangent_project(e) - e).amax() < 1e-10);
            for (j, e2) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e.dot(e2) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pluecker_inner_product_is_rotation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let f = random_plane(6, 3, &mut rng);
            let g = random_plane(6, 3, &mut rng);
            let rot = random_rotation(6, &mut rng);
            let before = f.pluecker().inner(&g.pluecker());
            let after = f.rotate(&rot).pluecker().inner(&g.rotate(&rot).pluecker());
            assert!((before - after).abs() < 1e-9);
        }
    }
}
