//! Scalar support: real numbers and complex numbers with modulus and
//! conjugation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The scalar type. Real computations keep the imaginary part at zero.
pub type Scalar = Complex64;

/// Whether a computation runs over the reals or the complex numbers.
///
/// The mode is a property of a whole computation, not of individual
/// entries; sampling and CLI validation dispatch on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Real,
    Complex,
}

/// z / |z| for z != 0, and 1 for z = 0.
///
/// The zero convention makes `phase(z).conj() * z == |z|` hold for every
/// scalar, which is what the norming-functional constructions need.
pub fn phase(z: Scalar) -> Scalar {
    let m = z.norm();
    if m == 0.0 {
        Scalar::new(1.0, 0.0)
    } else {
        z / m
    }
}

/// |z|, the modulus.
pub fn modulus(z: Scalar) -> f64 {
    z.norm()
}

pub fn is_real(z: Scalar) -> bool {
    z.im == 0.0
}
