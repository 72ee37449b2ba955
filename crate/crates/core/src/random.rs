//! Haar-random sampling helpers.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::unitary::{Matrix, Unitary};

pub(crate) fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random element of U(2): a uniformly random point on S³ gives the
/// SU(2) part, times a uniform global phase.
pub fn random_u2<R: Rng + ?Sized>(rng: &mut R) -> Unitary {
    let (mut a, mut b) = (gaussian_complex(rng), gaussian_complex(rng));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    a /= norm;
    b /= norm;
    let phase = Complex64::from_polar(
        1.0,
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    );
    let m = Matrix::from_row_slice(
        2,
        2,
        &[a * phase, -b.conj() * phase, b * phase, a.conj() * phase],
    );
    Unitary::from_matrix_unchecked(m)
}

/// Haar-random normalized pair `(a, b)`.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    let (a, b) = (gaussian_complex(rng), gaussian_complex(rng));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / norm, b / norm)
}
