//! Dual cones: the nonnegative orthant, finitely generated cones, and
//! the cone of positive semidefinite self-adjoint maps under the trace
//! pairing `lambda_T(A) = tr(A T)`.

use crate::convexgeo::{self, ConvexSet};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::realvec as rv;
use crate::sampling;
use crate::scalar::{Mode, Scalar};
use crate::tolerance::ToleranceProfile;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

/// A self-adjoint (Hermitian) linear map, validated on construction.
///
/// Serializes as `{"hermitian": true, "entries": [[...]]}` with the same
/// entry convention as [`Matrix`]; validation is enforced on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::SelfAdjointRepr", into = "repr::SelfAdjointRepr")]
pub struct SelfAdjointMap {
    matrix: Matrix,
}

impl SelfAdjointMap {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_hermitian(ToleranceProfile::default().eps_exact) {
            return Err(Error::NotHermitian);
        }
        Ok(Self { matrix })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows)?)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n)?;
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = Scalar::new(d, 0.0);
        }
        Self::new(m)
    }

    /// Rank-one map `u u^H`.
    pub fn rank_one(u: &Vector) -> Result<Self> {
        let n = u.dim();
        let mut m = Matrix::zeros(n, n)?;
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = u[i] * u[j].conj();
            }
        }
        Self::new(m)
    }

    /// `B B^H` for an arbitrary square factor, always PSD.
    pub fn gram_of(b: &Matrix) -> Result<Self> {
        Self::new(b.mul(&b.conj_transpose())?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Ascending eigenvalues by the Jacobi iteration.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.matrix.hermitian_eigen(1e-13, 60)?.eigenvalues)
    }

    /// PSD test with the relative threshold
    /// `min eigenvalue >= -eps_iter * (1 + spectral radius)`.
    pub fn is_psd(&self, profile: &ToleranceProfile) -> Result<bool> {
        let eig = self.eigenvalues()?;
        let radius = eig.iter().map(|l| l.abs()).fold(0.0, f64::max);
        Ok(eig[0] >= -profile.eps_iter * (1.0 + radius))
    }
}

/// The primal cone whose dual is being queried.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DualConeSpec {
    Orthant {
        dim: usize,
    },
    #[serde(rename = "cone")]
    Generated {
        generators: Vec<Vec<f64>>,
    },
    Psd {
        dim: usize,
    },
}

/// An element paired against a dual cone: a weight vector for the vector
/// cones, a self-adjoint map for the PSD cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConeElement {
    Vector(Vec<f64>),
    Map(SelfAdjointMap),
}

/// Membership of `w` in the dual cone of the primal:
/// * orthant — all entries nonnegative (the orthant is self-dual);
/// * generated cone — `<w, g> >= 0` for every generator `g`;
/// * PSD cone — `w` is itself PSD.
pub fn dual_cone_membership(
    spec: &DualConeSpec,
    w: &ConeElement,
    profile: &ToleranceProfile,
) -> Result<bool> {
    match (spec, w) {
        (DualConeSpec::Orthant { dim }, ConeElement::Vector(v)) => {
            if v.len() != *dim {
                return Err(Error::DimensionMismatch {
                    expected: *dim,
                    got: v.len(),
                });
            }
            Ok(v.iter().all(|&x| x >= -profile.eps_exact))
        }
        (DualConeSpec::Generated { generators }, ConeElement::Vector(v)) => {
            if generators.is_empty() {
                return Err(Error::InvalidSet(
                    "cone needs at least one generator".into(),
                ));
            }
            if generators[0].len() != v.len() {
                return Err(Error::DimensionMismatch {
                    expected: generators[0].len(),
                    got: v.len(),
                });
            }
            Ok(generators
                .iter()
                .all(|g| rv::dot(g, v) >= -profile.eps_exact))
        }
        (DualConeSpec::Psd { dim }, ConeElement::Map(m)) => {
            if m.dim() != *dim {
                return Err(Error::DimensionMismatch {
                    expected: *dim,
                    got: m.dim(),
                });
            }
            m.is_psd(profile)
        }
        _ => Err(Error::InvalidSet(
            "element kind does not match the cone's ambient space".into(),
        )),
    }
}

/// The trace pairing `lambda_T(A) = tr(A T)`, real for Hermitian inputs.
pub fn trace_pairing(t: &SelfAdjointMap, a: &SelfAdjointMap) -> Result<f64> {
    if t.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            got: a.dim(),
        });
    }
    let tr = a.matrix().mul(t.matrix())?.trace();
    debug_assert!(tr.im.abs() <= 1e-9 * (1.0 + tr.re.abs()));
    Ok(tr.re)
}

/// Outcome of the PSD duality biconditional check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdDualityReport {
    pub is_psd: bool,
    pub pairing_nonneg: bool,
    /// Rank-one `u u^H` with a strictly negative pairing, built from an
    /// eigenvector of a negative eigenvalue, when `T` is not PSD.
    pub witness: Option<SelfAdjointMap>,
    pub witness_pairing: Option<f64>,
}

/// Checks that `tr(A T) >= 0` over PSD probes `A` if and only if `T` is
/// PSD. Probes are random Gram maps `B B^H` plus the rank-one
/// eigenvector probes of `T` itself, which are what the diagonalization
/// argument uses and what certifies every negative case.
pub fn psd_duality_check(
    t: &SelfAdjointMap,
    trials: usize,
    seed: u64,
    profile: &ToleranceProfile,
) -> Result<PsdDualityReport> {
    let n = t.dim();
    let eig = t.matrix().hermitian_eigen(1e-13, 60)?;
    let radius = eig.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let tol = profile.eps_iter * (1.0 + radius);
    let is_psd = eig.eigenvalues[0] >= -tol;

    let mode = if t.matrix().is_real() {
        Mode::Real
    } else {
        Mode::Complex
    };
    let mut rng = sampling::rng(seed);
    let mut pairing_nonneg = true;
    for _ in 0..trials {
        let mut b = Matrix::zeros(n, n)?;
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] = sampling::gaussian_scalar(&mut rng, mode);
            }
        }
        let a = SelfAdjointMap::gram_of(&b)?;
        if trace_pairing(t, &a)? < -tol {
            pairing_nonneg = false;
            break;
        }
    }
    // rank-one eigenvector probes detect indefiniteness deterministically
    let mut witness = None;
    let mut witness_pairing = None;
    if pairing_nonneg {
        for (l, u) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
            if *l < -tol {
                let a = SelfAdjointMap::rank_one(u)?;
                let pairing = trace_pairing(t, &a)?;
                if pairing < -tol {
                    pairing_nonneg = false;
                    witness_pairing = Some(pairing);
                    witness = Some(a);
                    break;
                }
            }
        }
    } else if !is_psd {
        // a random probe already went negative; still report the
        // rank-one certificate
        let u = &eig.eigenvectors[0];
        let a = SelfAdjointMap::rank_one(u)?;
        witness_pairing = Some(trace_pairing(t, &a)?);
        witness = Some(a);
    }
    Ok(PsdDualityReport {
        is_psd,
        pairing_nonneg,
        witness,
        witness_pairing,
    })
}

/// Bidual spot-check for vector cones: members pair nonnegatively with
/// sampled dual elements, and every sampled non-member admits a dual
/// element (from cone separation) pairing strictly negatively.
pub fn bidual_check(
    primal: &ConvexSet,
    samples: usize,
    seed: u64,
    profile: &ToleranceProfile,
) -> Result<bool> {
    let spec = match primal {
        ConvexSet::Orthant { dim } => DualConeSpec::Orthant { dim: *dim },
        ConvexSet::GeneratedCone { generators } => DualConeSpec::Generated {
            generators: generators.clone(),
        },
        _ => {
            return Err(Error::InvalidSet(
                "bidual check expects an orthant or a generated cone".into(),
            ))
        }
    };
    let dim = primal.dim();
    let mut rng = sampling::rng(seed);

    // sample dual elements by filtering random directions
    let mut duals: Vec<Vec<f64>> = Vec::new();
    let mut attempts = 0;
    while duals.len() < 32 && attempts < 20_000 {
        attempts += 1;
        let w = sampling::gaussian_real_vec(&mut rng, dim);
        if dual_cone_membership(&spec, &ConeElement::Vector(w.clone()), profile)? {
            duals.push(w);
        }
    }

    for _ in 0..samples {
        let x = rv::scale(&sampling::gaussian_real_vec(&mut rng, dim), 2.0);
        let dist = convexgeo::project(primal, &x, profile)?.distance;
        if dist <= profile.eps_iter {
            // member: every dual element pairs nonnegatively
            for w in &duals {
                if rv::dot(w, &x) < -10.0 * profile.eps_iter * (1.0 + rv::norm2(&x)) {
                    return Ok(false);
                }
            }
        } else {
            // non-member: separation provides the negative dual element
            let sep = convexgeo::separate_cone(primal, &x, profile)?;
            let v = ConeElement::Vector(sep.normal.clone());
            if !dual_cone_membership(&spec, &v, profile)? {
                return Ok(false);
            }
            if rv::dot(&sep.normal, &x) >= -profile.eps_iter {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

mod repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct SelfAdjointRepr {
        hermitian: bool,
        entries: Matrix,
    }

    impl From<SelfAdjointMap> for SelfAdjointRepr {
        fn from(m: SelfAdjointMap) -> Self {
            SelfAdjointRepr {
                hermitian: true,
                entries: m.matrix,
            }
        }
    }

    impl TryFrom<SelfAdjointRepr> for SelfAdjointMap {
        type Error = Error;
        fn try_from(r: SelfAdjointRepr) -> Result<SelfAdjointMap> {
            if !r.hermitian {
                return Err(Error::NotHermitian);
            }
            SelfAdjointMap::new(r.entries)
        }
    }
}
