//! Non-normal eigendecomposition and matrix exponentials for small dense
//! complex matrices.
//!
//! Eigenvalues come from a complex Schur form (Householder reduction to
//! Hessenberg form followed by single-shift QR sweeps with Wilkinson shifts).
//! Right eigenvectors are back-substituted from the triangular factor; left
//! eigenvectors are the right eigenvectors of the adjoint, paired by
//! `conj(lambda)` and rescaled so that `<left_k|right_k> = 1`.

use num_complex::Complex;

use super::matrix::{inner, norm2, ComplexMatrix, Vector};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 200;

/// One eigenvalue with its binormalized right and left eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub value: Complex<T>,
    /// `a * right = value * right`, unit 2-norm.
    pub right: Vector<T>,
    /// `left^† a = value left^†`, scaled so `<left|right> = 1`.
    pub left: Vector<T>,
}

/// Unitary `q` and upper-triangular `t` with `a = q t q^†`.
#[derive(Debug, Clone)]
pub struct Schur<T> {
    pub q: ComplexMatrix<T>,
    pub t: ComplexMatrix<T>,
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn householder_hessenberg<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = norm2(&x);
        if xnorm == T::zero() {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == T::zero() { Complex::new(T::one(), T::zero()) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] = v[0] - alpha;
        let vnorm = norm2(&v);
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        let two = T::one() + T::one();
        // h <- (I - 2 v v^†) h
        for j in 0..n {
            let mut s = zero::<T>();
            for (m, vm) in v.iter().enumerate() {
                s = s + vm.conj() * h[(k + 1 + m, j)];
            }
            for (m, vm) in v.iter().enumerate() {
                h[(k + 1 + m, j)] = h[(k + 1 + m, j)] - *vm * s * two;
            }
        }
        // h <- h (I - 2 v v^†), q <- q (I - 2 v v^†)
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = zero::<T>();
                for (m, vm) in v.iter().enumerate() {
                    s = s + mat[(i, k + 1 + m)] * *vm;
                }
                for (m, vm) in v.iter().enumerate() {
                    mat[(i, k + 1 + m)] = mat[(i, k + 1 + m)] - s * vm.conj() * two;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = zero();
        }
    }
    (h, q)
}

/// Givens rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == T::zero() {
        return (T::one(), zero());
    }
    if na == T::zero() {
        return (T::zero(), Complex::new(T::one(), T::zero()) * (b.conj() / nb));
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn wilkinson_shift<T: Real>(h: &ComplexMatrix<T>, hi: usize) -> Complex<T> {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let two = T::one() + T::one();
    let half_tr = (a + d) / two;
    let disc = ((a - d) / two * ((a - d) / two) + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition `a = q t q^†`.
pub fn schur<T: Real>(a: &ComplexMatrix<T>) -> Result<Schur<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite("eigen input"));
    }
    let n = a.dim();
    let (mut h, mut q) = householder_hessenberg(a);
    if n == 1 {
        return Ok(Schur { q, t: h });
    }
    let eps = T::epsilon();
    let scale = a.max_abs().max(T::min_positive_value());
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // Deflate negligible subdiagonals.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= eps * diag || sub <= eps * eps * scale {
                h[(lo, lo - 1)] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NoConvergence(total));
        }
        let mu = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex::new(h[(hi, hi - 1)].norm() * T::of(0.75), T::zero())
        } else {
            wilkinson_shift(&h, hi)
        };
        for i in lo..=hi {
            h[(i, i)] = h[(i, i)] - mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rots.push((k, c, s));
        }
        for &(k, c, s) in &rots {
            let top = (k + 2).min(hi);
            for i in 0..=top {
                let (p, r) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = p * c + r * s.conj();
                h[(i, k + 1)] = -p * s + r * c;
            }
            for i in 0..n {
                let (p, r) = (q[(i, k)], q[(i, k + 1)]);
                q[(i, k)] = p * c + r * s.conj();
                q[(i, k + 1)] = -p * s + r * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] = h[(i, i)] + mu;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = zero();
        }
    }
    Ok(Schur { q, t: h })
}

/// Eigenvalues in Schur order; repeated eigenvalues are allowed.
pub fn eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    let s = schur(a)?;
    Ok((0..a.dim()).map(|i| s.t[(i, i)]).collect())
}

/// Largest eigenvalue modulus.
pub fn spectral_radius<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    Ok(eigenvalues(a)?.iter().fold(T::zero(), |acc, z| acc.max(z.norm())))
}

/// Right eigenvectors from a Schur form, unit norm, in diagonal order.
fn schur_vectors<T: Real>(s: &Schur<T>) -> Vec<Vector<T>> {
    let n = s.t.dim();
    let tiny = T::epsilon() * s.t.max_abs().max(T::min_positive_value());
    (0..n)
        .map(|k| {
            let lambda = s.t[(k, k)];
            let mut x = vec![zero::<T>(); n];
            x[k] = Complex::new(T::one(), T::zero());
            for j in (0..k).rev() {
                let mut acc = zero::<T>();
                for m in j + 1..=k {
                    acc = acc + s.t[(j, m)] * x[m];
                }
                let mut d = s.t[(j, j)] - lambda;
                if d.norm() < tiny {
                    d = Complex::new(tiny, T::zero());
                }
                x[j] = -acc / d;
            }
            let v = s.q.mul_vec(&x);
            canonical_phase(&v)
        })
        .collect()
}

/// Scales to unit norm with the largest-modulus component real positive.
pub(crate) fn canonical_phase<T: Real>(v: &[Complex<T>]) -> Vector<T> {
    let nrm = norm2(v);
    let pivot = v
        .iter()
        .fold(zero::<T>(), |best, &z| if z.norm() > best.norm() * (T::one() + T::of(1e-12)) { z } else { best });
    if nrm == T::zero() || pivot.norm() == T::zero() {
        return v.to_vec();
    }
    let rot = pivot.conj() / (pivot.norm() * nrm);
    v.iter().map(|&z| z * rot).collect()
}

/// Minimum pairwise separation below which a spectrum counts as degenerate.
pub fn degeneracy_tolerance<T: Real>(values: &[Complex<T>]) -> T {
    let radius = values.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    T::of(1e-8) * (T::one() + radius)
}

fn min_gap<T: Real>(values: &[Complex<T>]) -> T {
    let mut gap = T::infinity();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Binormalized left/right eigen-decomposition of a matrix with distinct
/// eigenvalues, sorted by descending real part then descending imaginary part.
pub fn eig_pairs<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<EigenPair<T>>> {
    let n = a.dim();
    let s = schur(a)?;
    let values: Vec<Complex<T>> = (0..n).map(|i| s.t[(i, i)]).collect();
    let tol = degeneracy_tolerance(&values);
    let gap = min_gap(&values);
    if gap < tol {
        return Err(Error::DegenerateSpectrum { gap: gap.to_f64_lossy(), tolerance: tol.to_f64_lossy() });
    }
    let rights = schur_vectors(&s);

    let sa = schur(&a.adjoint())?;
    let adj_values: Vec<Complex<T>> = (0..n).map(|i| sa.t[(i, i)]).collect();
    let lefts = schur_vectors(&sa);

    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(n);
    for (k, &lambda) in values.iter().enumerate() {
        let target = lambda.conj();
        let j = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&x, &y| {
                (adj_values[x] - target)
                    .norm()
                    .partial_cmp(&(adj_values[y] - target).norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(Error::NonDiagonalizable("eigenvalue pairing failed"))?;
        used[j] = true;
        let overlap = inner(&lefts[j], &rights[k]);
        if overlap.norm() < T::of(1e-13) || !overlap.re.is_finite() {
            return Err(Error::NonDiagonalizable("left and right eigenvectors are orthogonal"));
        }
        let left = lefts[j].iter().map(|&z| z / overlap.conj()).collect();
        pairs.push(EigenPair { value: lambda, right: rights[k].clone(), left });
    }
    pairs.sort_by(|p, q| {
        q.value
            .re
            .partial_cmp(&p.value.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(q.value.im.partial_cmp(&p.value.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(pairs)
}

/// `sum_k f(lambda_k) |right_k><left_k|`.
pub fn spectral_sum<T: Real>(pairs: &[EigenPair<T>], f: impl Fn(Complex<T>) -> Complex<T>) -> ComplexMatrix<T> {
    let n = pairs[0].right.len();
    let mut out = ComplexMatrix::zeros(n);
    for p in pairs {
        let w = f(p.value);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = out[(i, j)] + w * p.right[i] * p.left[j].conj();
            }
        }
    }
    out
}

/// Eigenvector condition estimate `max_k |left_k| |right_k|`.
fn spectral_condition<T: Real>(pairs: &[EigenPair<T>]) -> T {
    pairs.iter().fold(T::zero(), |acc, p| acc.max(norm2(&p.left) * norm2(&p.right)))
}

/// Matrix exponential.
///
/// Uses the spectral sum over [`eig_pairs`]. Matrices whose spectrum is
/// degenerate (the zero matrix, multiples of the identity) or whose
/// eigenvectors are nearly parallel fall back to [`mat_exp_series`].
pub fn mat_exp<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    match eig_pairs(a) {
        Ok(pairs) if spectral_condition(&pairs) < T::of(1e6) => Ok(spectral_sum(&pairs, |z| z.exp())),
        Ok(_) | Err(Error::DegenerateSpectrum { .. }) | Err(Error::NonDiagonalizable(_)) => mat_exp_series(a),
        Err(e) => Err(e),
    }
}

/// Scaling-and-squaring Taylor exponential; valid for any finite matrix.
pub fn mat_exp_series<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix exponential input"));
    }
    let n = a.dim();
    let norm = a.norm_one();
    let mut squarings = 0i32;
    if norm > T::of(0.5) {
        squarings = (norm / T::of(0.5)).log2().ceil().to_i32().unwrap_or(0).max(0);
    }
    let scaled = a.scale(Complex::new(T::one() / T::of(2f64.powi(squarings)), T::zero()));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=24 {
        term = (&term * &scaled).scale(Complex::new(T::one() / T::of(k as f64), T::zero()));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::super::matrix::gates::*;
    use super::*;
    use crate::scalar::cplx;

    type M = ComplexMatrix<f64>;

    fn completeness_defect(pairs: &[EigenPair<f64>]) -> f64 {
        spectral_sum(pairs, |_| cplx(1.0, 0.0)).identity_defect()
    }

    fn check_eigen_relations(a: &M, pairs: &[EigenPair<f64>], tol: f64) {
        for (k, p) in pairs.iter().enumerate() {
            let av = a.mul_vec(&p.right);
            for i in 0..a.dim() {
                assert!((av[i] - p.value * p.right[i]).norm() < tol, "right relation");
            }
            let ah_l = a.adjoint().mul_vec(&p.left);
            for i in 0..a.dim() {
                assert!((ah_l[i] - p.value.conj() * p.left[i]).norm() < tol, "left relation");
            }
            for (l, q) in pairs.iter().enumerate() {
                let expect = if k == l { 1.0 } else { 0.0 };
                assert!((inner(&p.left, &q.right) - cplx(expect, 0.0)).norm() < tol, "binormalization");
            }
        }
        assert!(completeness_defect(pairs) < tol);
    }

    #[test]
    fn hermitian_pauli_z() {
        let pairs = eig_pairs(&pauli_z::<f64>()).unwrap();
        assert_eq!(pairs[0].value, cplx(1.0, 0.0));
        assert_eq!(pairs[1].value, cplx(-1.0, 0.0));
        assert!((pairs[0].right[0] - cplx(1.0, 0.0)).norm() < 1e-15);
        assert!((pairs[1].right[1] - cplx(1.0, 0.0)).norm() < 1e-15);
        for p in &pairs {
            for i in 0..2 {
                assert!((p.left[i] - p.right[i]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn non_normal_upper_triangular_example() {
        // [[0,1],[0,1]]: right_0 ∝ (1,0), left_0 ∝ (1,-1); right_1 ∝ (1,1), left_1 ∝ (0,1).
        let a = M::from_rows(&[vec![cplx(0.0, 0.0), cplx(1.0, 0.0)], vec![cplx(0.0, 0.0), cplx(1.0, 0.0)]]).unwrap();
        let pairs = eig_pairs(&a).unwrap();
        let one = pairs.iter().find(|p| (p.value - cplx(1.0, 0.0)).norm() < 1e-14).unwrap();
        let zero = pairs.iter().find(|p| p.value.norm() < 1e-14).unwrap();
        // direction checks via cross products
        assert!((zero.right[1]).norm() < 1e-14);
        assert!((zero.left[0] + zero.left[1]).norm() < 1e-14);
        assert!((one.right[0] - one.right[1]).norm() < 1e-14);
        assert!((one.left[0]).norm() < 1e-14);
        check_eigen_relations(&a, &pairs, 1e-13);
        // with right_1 = (1,1) unnormalized, left_1 would be (0,1)
        let s = one.right[0];
        assert!((one.left[1] * s.conj() - cplx(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn diagonal_complex() {
        let a = M::diag(&[cplx(2.0, 1.0), cplx(3.0, 0.0)]);
        let pairs = eig_pairs(&a).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].value - cplx(3.0, 0.0)).norm() < 1e-15);
        assert!((pairs[1].value - cplx(2.0, 1.0)).norm() < 1e-15);
        check_eigen_relations(&a, &pairs, 1e-14);
    }

    #[test]
    fn degenerate_spectrum_rejected() {
        assert!(matches!(eig_pairs(&M::identity(3)), Err(Error::DegenerateSpectrum { .. })));
        let near = M::diag(&[cplx(1.0, 0.0), cplx(1.0 + 1e-10, 0.0)]);
        assert!(matches!(eig_pairs(&near), Err(Error::DegenerateSpectrum { .. })));
    }

    #[test]
    fn jordan_block_is_not_decomposed() {
        let j = M::from_rows(&[vec![cplx(1.0, 0.0), cplx(1.0, 0.0)], vec![cplx(0.0, 0.0), cplx(1.0, 0.0)]]).unwrap();
        assert!(eig_pairs(&j).is_err());
        // but the exponential still exists: exp(J) = e [[1,1],[0,1]]
        let e = mat_exp(&j).unwrap();
        let expect = j.scale(cplx(std::f64::consts::E, 0.0));
        assert!(e.max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert!(mat_exp(&M::zeros(3)).unwrap().identity_defect() < 1e-15);
    }

    #[test]
    fn exp_of_pauli_z_quarter_turn() {
        let a = pauli_z::<f64>().scale(cplx(0.0, -std::f64::consts::FRAC_PI_2));
        let e = mat_exp(&a).unwrap();
        let expect = M::diag(&[cplx(0.0, -1.0), cplx(0.0, 1.0)]);
        assert!(e.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn exp_inverse_property() {
        let a = M::from_rows(&[
            vec![cplx(0.3, -0.2), cplx(1.0, 0.5), cplx(0.0, 0.1)],
            vec![cplx(-0.7, 0.0), cplx(0.1, 0.9), cplx(0.4, 0.0)],
            vec![cplx(0.2, 0.2), cplx(0.0, -1.1), cplx(-0.5, 0.3)],
        ])
        .unwrap();
        let p = mat_exp(&a).unwrap();
        let m = mat_exp(&(-&a)).unwrap();
        assert!((&p * &m).identity_defect() < 1e-12);
        assert!(p.max_abs_diff(&mat_exp_series(&a).unwrap()) < 1e-12);
    }

    #[test]
    fn schur_reconstructs_input() {
        let a = M::from_rows(&[
            vec![cplx(1.0, 2.0), cplx(0.0, 1.0), cplx(3.0, 0.0), cplx(-1.0, 0.5)],
            vec![cplx(0.0, 0.0), cplx(2.0, -1.0), cplx(1.0, 1.0), cplx(0.2, 0.0)],
            vec![cplx(4.0, 0.0), cplx(0.0, 0.0), cplx(-1.0, 0.0), cplx(0.0, 2.0)],
            vec![cplx(0.1, 0.3), cplx(1.5, 0.0), cplx(0.0, -0.4), cplx(0.5, 0.5)],
        ])
        .unwrap();
        let s = schur(&a).unwrap();
        let rebuilt = &(&s.q * &s.t) * &s.q.adjoint();
        assert!(rebuilt.max_abs_diff(&a) < 1e-13);
        assert!((&s.q.adjoint() * &s.q).identity_defect() < 1e-14);
    }

    #[test]
    fn single_precision_instantiation() {
        let a = ComplexMatrix::<f32>::diag(&[Complex::new(1.0, 0.0), Complex::new(-2.0, 0.5)]);
        let pairs = eig_pairs(&a).unwrap();
        assert!((pairs[0].value - Complex::new(1.0f32, 0.0)).norm() < 1e-6);
        let e = mat_exp(&a).unwrap();
        assert!((e[(0, 0)] - Complex::new(1.0f32.exp(), 0.0)).norm() < 1e-5);
    }
}
