//! Dense vectors over the real or complex scalars.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// An element of `R^n` or `C^n`, n >= 1.
///
/// Entries are stored as complex scalars; a vector is "real" when every
/// imaginary part is exactly zero. Serialization uses
/// `{"mode":"real"|"complex","entries":[...]}` with `[re, im]` pairs in
/// complex mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::VectorRepr", into = "repr::VectorRepr")]
pub struct Vector {
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(vec![Scalar::new(0.0, 0.0); dim])
    }

    /// Standard basis vector `e_k` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: k,
            });
        }
        let mut v = vec![Scalar::new(0.0, 0.0); dim];
        v[k] = Scalar::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Real parts, failing if any entry has a nonzero imaginary part.
    pub fn to_real(&self) -> Result<Vec<f64>> {
        if !self.is_real() {
            return Err(Error::ComplexUnsupported);
        }
        Ok(self.entries.iter().map(|z| z.re).collect())
    }

    pub fn check_same_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_same_dim(other)?;
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_same_dim(other)?;
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, alpha: Scalar) -> Vector {
        Vector {
            entries: self.entries.iter().map(|a| a * alpha).collect(),
        }
    }

    /// Unconjugated pairing `sum_j v_j w_j`.
    pub fn dot(&self, other: &Vector) -> Result<Scalar> {
        self.check_same_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Hermitian pairing `sum_j v_j conj(w_j)` (the standard inner product).
    pub fn hdot(&self, other: &Vector) -> Result<Scalar> {
        self.check_same_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn conj(&self) -> Vector {
        Vector {
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn norm2(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }
}

mod repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct VectorRepr {
        mode: crate::scalar::Mode,
        entries: Entries,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Entries {
        Real(Vec<f64>),
        Complex(Vec<[f64; 2]>),
    }

    impl From<Vector> for VectorRepr {
        fn from(v: Vector) -> Self {
            if v.is_real() {
                VectorRepr {
                    mode: crate::scalar::Mode::Real,
                    entries: Entries::Real(v.entries.iter().map(|z| z.re).collect()),
                }
            } else {
                VectorRepr {
                    mode: crate::scalar::Mode::Complex,
                    entries: Entries::Complex(v.entries.iter().map(|z| [z.re, z.im]).collect()),
                }
            }
        }
    }

    impl TryFrom<VectorRepr> for Vector {
        type Error = Error;
        fn try_from(r: VectorRepr) -> Result<Vector> {
            let entries = match r.entries {
                Entries::Real(xs) => xs.into_iter().map(|x| Scalar::new(x, 0.0)).collect(),
                Entries::Complex(ps) => {
                    if r.mode == crate::scalar::Mode::Real && ps.iter().any(|[_, im]| *im != 0.0) {
                        return Err(Error::InvalidNorm(
                            "real-mode vector has complex entries".into(),
                        ));
                    }
                    ps.into_iter().map(|[re, im]| Scalar::new(re, im)).collect()
                }
            };
            Vector::new(entries)
        }
    }
}
