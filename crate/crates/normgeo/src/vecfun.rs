//! Vector-valued functions on a finite index set: mixed (p, V)-norms
//! and lifting of scalar linear operators.

use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::opnorm::{self, LinearMap};
use crate::sampling;
use crate::scalar::{Mode, Scalar};
use crate::spaces::{p_norm, Exponent, NormSpec};
use crate::tolerance::ToleranceProfile;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

/// A function from a finite set of `m` points into `V = R^n`/`C^n`,
/// with the norm carried by the value space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::VectorFieldRepr", into = "repr::VectorFieldRepr")]
pub struct VectorField {
    values: Vec<Vector>,
    value_norm: NormSpec,
}

impl VectorField {
    pub fn new(values: Vec<Vector>, value_norm: NormSpec) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        let n = values[0].dim();
        if values.iter().any(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.iter().map(|v| v.dim()).find(|&d| d != n).unwrap(),
            });
        }
        Ok(Self { values, value_norm })
    }

    pub fn points(&self) -> usize {
        self.values.len()
    }

    pub fn value_dim(&self) -> usize {
        self.values[0].dim()
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn value_norm(&self) -> &NormSpec {
        &self.value_norm
    }
}

/// The mixed norm `( sum_x |f(x)|^p )^(1/p)` (max over points for
/// p = ∞), reducing to the scalar p-norm when the value dimension is 1.
pub fn mixed_norm(f: &VectorField, p: Exponent) -> Result<f64> {
    let norms: Vec<f64> = f
        .values
        .iter()
        .map(|v| f.value_norm.norm(v))
        .collect::<Result<Vec<_>>>()?;
    let carrier = Vector::new(norms.into_iter().map(|n| Scalar::new(n, 0.0)).collect())?;
    Ok(p_norm(&carrier, p))
}

/// Apply a scalar operator pointwise-in-`V`: the output value at `x` is
/// `sum_y T[x][y] f(y)`, using the same coefficients as the scalar case.
pub fn lift_operator(t: &Matrix, f: &VectorField) -> Result<VectorField> {
    if t.rows() != t.cols() {
        return Err(Error::DimensionMismatch {
            expected: t.cols(),
            got: t.rows(),
        });
    }
    if t.cols() != f.points() {
        return Err(Error::DimensionMismatch {
            expected: f.points(),
            got: t.cols(),
        });
    }
    let m = f.points();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut acc = Vector::zero(f.value_dim())?;
        for j in 0..m {
            acc = acc.add(&f.values[j].scale(t[(i, j)]))?;
        }
        out.push(acc);
    }
    VectorField::new(out, f.value_norm.clone())
}

/// Outcome of the lifted-norm comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedNormCheck {
    pub scalar_opnorm: CertifiedValue,
    pub max_ratio: f64,
    pub holds: bool,
}

/// Checks that lifting preserves the operator norm when the value norm
/// is the matching p-norm or the Euclidean norm: sampled field ratios
/// `|T f| / |f|` never exceed the scalar (p -> p) operator norm, and the
/// one-component embedding of the scalar witness attains it.
pub fn lifted_norm_check(
    t: &Matrix,
    p: Exponent,
    value_norm: &NormSpec,
    value_dim: usize,
    trials: usize,
    seed: u64,
    profile: &ToleranceProfile,
) -> Result<LiftedNormCheck> {
    let matching_p = matches!(value_norm, NormSpec::P { p: q } if *q == p);
    let euclidean = matches!(value_norm, NormSpec::P { p: Exponent::Finite(q) } if *q == 2.0);
    if !(matching_p || euclidean) {
        return Err(Error::Unsupported(
            "lifted-norm preservation holds for a matching p-norm or Euclidean values".into(),
        ));
    }
    let m = t.rows();
    let scalar_map = LinearMap::new(t.clone(), NormSpec::p(p), NormSpec::p(p))?;
    let scalar_opnorm = opnorm::operator_norm(&scalar_map, profile, seed)?;

    let mode = if t.is_real() {
        Mode::Real
    } else {
        Mode::Complex
    };
    let mut rng = sampling::rng(seed);
    let mut max_ratio: f64 = 0.0;
    for _ in 0..trials {
        let values: Vec<Vector> = (0..m)
            .map(|_| sampling::gaussian_vector(&mut rng, value_dim, mode))
            .collect();
        let f = VectorField::new(values, value_norm.clone())?;
        let nf = mixed_norm(&f, p)?;
        if nf < 1e-12 {
            continue;
        }
        let tf = lift_operator(t, &f)?;
        max_ratio = max_ratio.max(mixed_norm(&tf, p)? / nf);
    }

    // embed the scalar witness in the first component; this attains the
    // scalar operator norm exactly
    if let Some(wit) = &scalar_opnorm.witness {
        let values: Vec<Vector> = (0..m)
            .map(|i| {
                let mut entries = vec![Scalar::new(0.0, 0.0); value_dim];
                entries[0] = wit[i];
                Vector::new(entries)
            })
            .collect::<Result<Vec<_>>>()?;
        let f = VectorField::new(values, value_norm.clone())?;
        let nf = mixed_norm(&f, p)?;
        if nf > 1e-12 {
            let tf = lift_operator(t, &f)?;
            max_ratio = max_ratio.max(mixed_norm(&tf, p)? / nf);
        }
    }

    let tol = profile.eps_iter * (1.0 + scalar_opnorm.upper);
    let holds = max_ratio <= scalar_opnorm.upper + tol && max_ratio >= scalar_opnorm.lower - tol;
    Ok(LiftedNormCheck {
        scalar_opnorm,
        max_ratio,
        holds,
    })
}

mod repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct VectorFieldRepr {
        values: Vec<Vector>,
        value_norm: NormSpec,
    }

    impl From<VectorField> for VectorFieldRepr {
        fn from(f: VectorField) -> Self {
            VectorFieldRepr {
                values: f.values,
                value_norm: f.value_norm,
            }
        }
    }

    impl TryFrom<VectorFieldRepr> for VectorField {
        type Error = Error;
        fn try_from(r: VectorFieldRepr) -> Result<VectorField> {
            VectorField::new(r.values, r.value_norm)
        }
    }
}
