//! Cyclic Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then annihilates the (now real) pivot with a real Givens
//! rotation. Sweeps stop once the off-diagonal Frobenius norm drops below
//! `OFF_DIAGONAL_TOLERANCE` (scaled by the matrix norm when that exceeds 1).

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 100;
/// Inputs with a larger Hermiticity error are rejected.
pub const HERMITIAN_INPUT_TOLERANCE: f64 = 1e-8;

/// Eigenvalues (descending) and the unitary whose column `k` is the
/// eigenvector belonging to `eigenvalues[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n).expect("dimension already validated");
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for (k, &lambda) in self.eigenvalues.iter().enumerate() {
                    s += v[(i, k)] * lambda * v[(j, k)].conj();
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    /// Column `k` of the eigenvector matrix.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvalues.len();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }
}

pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    let herm_err = m.hermiticity_error();
    if herm_err > HERMITIAN_INPUT_TOLERANCE {
        return Err(Error::NotHermitian(herm_err));
    }

    let n = m.dim();
    // symmetrise so round-off in the input cannot accumulate
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n)?;
    let threshold = OFF_DIAGONAL_TOLERANCE * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    while a.off_diagonal_norm() > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: a.off_diagonal_norm(),
            });
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // sort_by is stable: ties keep their diagonal order
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));

    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n)?;
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, col)] = v[(i, k)];
        }
    }
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Applies `A <- J† A J`, `V <- V J` with `J` chosen so that `A[p][q] = 0`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    // e^{-iα} where a_pq = g e^{iα}
    let phase = apq.conj() / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J restricted to the (p, q) plane: diag(1, e^{-iα}) · [[c, s], [-s, c]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase * (-s);
    let jqq = phase * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;

        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }

    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_hermitian(vals: &[f64]) -> ComplexMatrix {
        // 16 numbers -> 4 real diagonals + 6 complex upper entries
        let mut m = ComplexMatrix::zeros(4).unwrap();
        let mut it = vals.iter().copied();
        for i in 0..4 {
            m[(i, i)] = Complex64::new(it.next().unwrap(), 0.0);
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                let z = Complex64::new(it.next().unwrap(), it.next().unwrap());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn diagonal_input_is_returned_unchanged() {
        let m = ComplexMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let es = hermitian_eigendecomposition(&m).unwrap();
        assert_eq!(es.eigenvalues, vec![0.7, 0.3]);
        assert_eq!(es.eigenvectors, ComplexMatrix::identity(2).unwrap());
    }

    #[test]
    fn rank_one_projector() {
        let m = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let es = hermitian_eigendecomposition(&m).unwrap();
        assert!((es.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(es.eigenvalues[1].abs() < 1e-14);
    }

    #[test]
    fn ties_keep_diagonal_order() {
        let m = ComplexMatrix::from_diagonal(&[0.25, 0.5, 0.25, 0.0]).unwrap();
        let es = hermitian_eigendecomposition(&m).unwrap();
        assert_eq!(es.eigenvalues, vec![0.5, 0.25, 0.25, 0.0]);
        // first 0.25 came from index 0, second from index 2
        assert_eq!(es.eigenvectors[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(es.eigenvectors[(2, 2)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[1.0, 0.2, 0.0, 1.0]).unwrap();
        assert!(matches!(
            hermitian_eigendecomposition(&m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn complex_pivots() {
        // Pauli-Y has eigenvalues ±1 with complex eigenvectors
        let y = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let es = hermitian_eigendecomposition(&y).unwrap();
        assert!((es.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((es.eigenvalues[1] + 1.0).abs() < 1e-14);
        assert!(es.reconstruct().max_abs_diff(&y).unwrap() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reconstruction_and_ordering(vals in prop::collection::vec(-1.0f64..1.0, 16)) {
            let m = random_hermitian(&vals);
            let es = hermitian_eigendecomposition(&m).unwrap();
            prop_assert!(es.reconstruct().max_abs_diff(&m).unwrap() <= 1e-10);
            prop_assert!(es.eigenvectors.unitarity_error() <= 1e-10);
            prop_assert!(es.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
