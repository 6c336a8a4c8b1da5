//! Operator norms of linear maps between normed spaces.
//!
//! Exact rules: an `l1` domain (maximum of column norms), an `l∞`
//! codomain (maximum of row dual norms), the spectral case (power
//! iteration on `T^H T` with a residual certificate), and the real
//! `l∞ -> l1` norm by sign-vertex enumeration in small dimension.
//! Everything else gets a certified interval: an alternating-ascent
//! lower bound with a witness, and an upper envelope assembled from the
//! exact corner rules and dimension-comparison factors.

use crate::certified::CertifiedValue;
use crate::duality::{attaining_vector, norming_functional, Functional};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sampling;
use crate::scalar::{Mode, Scalar};
use crate::spaces::{p_norm, Exponent, NormSpec};
use crate::tolerance::ToleranceProfile;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

/// Cap for exact sign-vertex enumeration of the real `l∞ -> l1` norm,
/// which is NP-hard in general.
pub const SIGN_ENUMERATION_LIMIT: usize = 20;

const ASCENT_RESTARTS: usize = 16;

/// A linear map `V -> W` in standard bases with norms on both spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::LinearMapRepr", into = "repr::LinearMapRepr")]
pub struct LinearMap {
    pub matrix: Matrix,
    pub domain: NormSpec,
    pub codomain: NormSpec,
}

impl LinearMap {
    pub fn new(matrix: Matrix, domain: NormSpec, codomain: NormSpec) -> Result<Self> {
        if let NormSpec::InnerProduct { gram } = &domain {
            if gram.rows() != matrix.cols() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.cols(),
                    got: gram.rows(),
                });
            }
        }
        if let NormSpec::InnerProduct { gram } = &codomain {
            if gram.rows() != matrix.rows() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.rows(),
                    got: gram.rows(),
                });
            }
        }
        Ok(Self {
            matrix,
            domain,
            codomain,
        })
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        self.matrix.mul_vec(v)
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// The operator norm `sup { |T v|_W : |v|_V <= 1 }` as a certified
/// value; the witness is a unit-domain-norm input achieving the lower
/// bound.
pub fn operator_norm(
    t: &LinearMap,
    profile: &ToleranceProfile,
    seed: u64,
) -> Result<CertifiedValue> {
    if t.matrix.is_zero() {
        let w = unit_domain_vector(&t.domain, t.input_dim())?;
        return Ok(CertifiedValue::exact(0.0, Some(w)));
    }
    if matches!(t.domain, NormSpec::P { p: Exponent::Finite(p) } if p == 1.0) {
        return column_rule(t);
    }
    if matches!(
        t.codomain,
        NormSpec::P {
            p: Exponent::Infinity
        }
    ) {
        return row_rule(t);
    }
    let both_l2 = matches!(t.domain, NormSpec::P { p: Exponent::Finite(p) } if p == 2.0)
        && matches!(t.codomain, NormSpec::P { p: Exponent::Finite(p) } if p == 2.0);
    if both_l2 {
        return spectral_norm(t, profile, seed);
    }
    let inf_to_one = matches!(
        t.domain,
        NormSpec::P {
            p: Exponent::Infinity
        }
    ) && matches!(t.codomain, NormSpec::P { p: Exponent::Finite(p) } if p == 1.0);
    if inf_to_one && t.matrix.is_real() && t.input_dim() <= SIGN_ENUMERATION_LIMIT {
        return sign_vertex_rule(t);
    }
    estimate_norm(t, profile, seed)
}

/// Exact rule for an `l1` domain: the maximum codomain norm of a column.
fn column_rule(t: &LinearMap) -> Result<CertifiedValue> {
    let mut best = -1.0;
    let mut best_j = 0;
    for j in 0..t.input_dim() {
        let n = t.codomain.norm(&t.matrix.col_vec(j))?;
        if n > best {
            best = n;
            best_j = j;
        }
    }
    Ok(CertifiedValue::exact(
        best,
        Some(Vector::basis(t.input_dim(), best_j)?),
    ))
}

/// Exact rule for an `l∞` codomain: the maximum dual norm of a row.
fn row_rule(t: &LinearMap) -> Result<CertifiedValue> {
    let mut best = -1.0;
    let mut best_i = 0;
    for i in 0..t.output_dim() {
        let f = Functional::new(t.matrix.row_vec(i), t.domain.clone());
        let n = f.dual_norm()?.lower;
        if n > best {
            best = n;
            best_i = i;
        }
    }
    let row = Functional::new(t.matrix.row_vec(best_i), t.domain.clone());
    let witness = if row.weights.is_zero() {
        unit_domain_vector(&t.domain, t.input_dim())?
    } else {
        attaining_vector(&row)?
    };
    Ok(CertifiedValue::exact(best, Some(witness)))
}

/// Largest singular value via power iteration on `T^H T`, with the
/// Rayleigh-residual a posteriori certificate. Uncertified runs fall
/// back to the interval `[rayleigh, envelope]`.
fn spectral_norm(t: &LinearMap, profile: &ToleranceProfile, seed: u64) -> Result<CertifiedValue> {
    let a = t.matrix.conj_transpose().mul(&t.matrix)?;
    let n = a.rows();
    let mode = if t.matrix.is_real() {
        Mode::Real
    } else {
        Mode::Complex
    };
    let mut rng = sampling::rng(seed ^ 0x9e37_79b9);
    let mut best_lambda = 0.0f64;
    let mut best_residual = f64::INFINITY;
    let mut best_v: Option<Vector> = None;
    for _ in 0..4 {
        let mut v = sampling::unit_vector(&mut rng, n, mode);
        let mut lambda = 0.0;
        let mut residual = f64::INFINITY;
        for _ in 0..profile.max_iter {
            let w = a.mul_vec(&v)?;
            lambda = w.hdot(&v)?.re;
            let r = w.sub(&v.scale(Scalar::new(lambda, 0.0)))?.norm2();
            residual = r;
            let wn = w.norm2();
            if wn == 0.0 {
                // the start sat in the kernel of a nonzero map: this
                // restart learns nothing about the top eigenvalue
                lambda = 0.0;
                residual = f64::INFINITY;
                break;
            }
            v = w.scale(Scalar::new(1.0 / wn, 0.0));
            if r <= 1e-14 * lambda.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        if lambda > best_lambda || (lambda == best_lambda && residual < best_residual) {
            best_lambda = lambda;
            best_residual = residual;
            best_v = Some(v);
        }
    }
    let sigma = best_lambda.max(0.0).sqrt();
    if best_residual <= profile.eps_iter * best_lambda.abs().max(f64::MIN_POSITIVE) {
        Ok(CertifiedValue::exact(sigma, best_v))
    } else {
        let upper = sigma_upper_envelope(&t.matrix)?;
        Ok(CertifiedValue::interval(sigma, upper.max(sigma), best_v))
    }
}

/// Rigorous upper bound on the largest singular value:
/// `min(frobenius, sqrt(N_{1->1} N_{inf->inf}))`.
fn sigma_upper_envelope(m: &Matrix) -> Result<f64> {
    let n11 = (0..m.cols())
        .map(|j| p_norm(&m.col_vec(j), Exponent::ONE))
        .fold(0.0, f64::max);
    let ninf = (0..m.rows())
        .map(|i| p_norm(&m.row_vec(i), Exponent::ONE))
        .fold(0.0, f64::max);
    Ok(m.frobenius().min((n11 * ninf).sqrt()))
}

/// Exact real `l∞ -> l1` norm: maximize `|T s|_1` over sign vectors.
fn sign_vertex_rule(t: &LinearMap) -> Result<CertifiedValue> {
    let m = t.input_dim();
    let mut s = vec![1.0f64; m];
    let mut image: Vec<f64> = (0..t.output_dim())
        .map(|i| (0..m).map(|j| t.matrix[(i, j)].re).sum())
        .collect();
    let mut best: f64 = image.iter().map(|x| x.abs()).sum();
    let mut best_s = s.clone();
    // Gray-code walk: flip one sign per step, update the image in O(rows)
    let total: u64 = 1u64 << (m - 1); // s and -s give the same value
    for k in 1..total {
        let flip = k.trailing_zeros() as usize;
        s[flip] = -s[flip];
        let delta = 2.0 * s[flip];
        for (i, img) in image.iter_mut().enumerate() {
            *img += delta * t.matrix[(i, flip)].re;
        }
        let value: f64 = image.iter().map(|x| x.abs()).sum();
        if value > best {
            best = value;
            best_s = s.clone();
        }
    }
    Ok(CertifiedValue::exact(
        best,
        Some(Vector::from_real(&best_s)?),
    ))
}

/// Certified estimate for norm pairs without an exact rule: alternating
/// ascent (norming-functional power iteration) for the lower bound and
/// the corner-rule envelope for the upper bound.
fn estimate_norm(t: &LinearMap, profile: &ToleranceProfile, seed: u64) -> Result<CertifiedValue> {
    let mode = if t.matrix.is_real() {
        Mode::Real
    } else {
        Mode::Complex
    };
    let tt = t.matrix.transpose();
    let mut rng = sampling::rng(seed);
    let mut best = 0.0f64;
    let mut witness = unit_domain_vector(&t.domain, t.input_dim())?;
    for _ in 0..ASCENT_RESTARTS {
        let g = sampling::gaussian_vector(&mut rng, t.input_dim(), mode);
        let gn = t.domain.norm(&g)?;
        if gn <= 1e-12 {
            continue;
        }
        let mut v = g.scale(Scalar::new(1.0 / gn, 0.0));
        let mut value = t.codomain.norm(&t.apply(&v)?)?;
        for _ in 0..profile.max_iter {
            let image = t.apply(&v)?;
            if image.is_zero() {
                break;
            }
            let mu = norming_functional(&image, &t.codomain)?;
            // pullback functional v -> mu(T v) has weights T^T mu
            let g = Functional::new(tt.mul_vec(&mu.weights)?, t.domain.clone());
            if g.weights.is_zero() {
                break;
            }
            let vnext = attaining_vector(&g)?;
            let next = t.codomain.norm(&t.apply(&vnext)?)?;
            if next <= value * (1.0 + profile.eps_iter) {
                if next > value {
                    value = next;
                    v = vnext;
                }
                break;
            }
            value = next;
            v = vnext;
        }
        if value > best {
            best = value;
            witness = v;
        }
    }
    let upper = upper_envelope(t, profile)?.max(best);
    Ok(CertifiedValue::interval(best, upper, Some(witness)))
}

/// Upper envelope from the exact corner rules and the norm-comparison
/// constants: `gamma1 * N_{1->W}`, `delta_inf * N_{V->inf}`, and the
/// spectral route `b_hi * sigma_max_bound / a_lo`.
fn upper_envelope(t: &LinearMap, _profile: &ToleranceProfile) -> Result<f64> {
    let m = t.input_dim() as f64;
    let n = t.output_dim() as f64;

    // sup |v|_1 / |v|_V
    let gamma1 = match &t.domain {
        NormSpec::P { p } => m.powf(1.0 - p.recip()),
        NormSpec::InnerProduct { .. } => {
            let (a_lo, _) = t.domain.l2_comparison(t.input_dim())?;
            m.sqrt() / a_lo
        }
    };
    let n_1_to_w = (0..t.input_dim())
        .map(|j| t.codomain.norm(&t.matrix.col_vec(j)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let bound_a = gamma1 * n_1_to_w;

    // sup |w|_W / |w|_inf
    let delta_inf = match &t.codomain {
        NormSpec::P { p } => n.powf(p.recip()),
        NormSpec::InnerProduct { .. } => {
            let (_, b_hi) = t.codomain.l2_comparison(t.output_dim())?;
            b_hi * n.sqrt()
        }
    };
    let n_v_to_inf = (0..t.output_dim())
        .map(|i| Functional::new(t.matrix.row_vec(i), t.domain.clone()).dual_norm())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .map(|c| c.lower)
        .fold(0.0, f64::max);
    let bound_b = delta_inf * n_v_to_inf;

    let (a_lo, _) = t.domain.l2_comparison(t.input_dim())?;
    let (_, b_hi) = t.codomain.l2_comparison(t.output_dim())?;
    let bound_c = b_hi * sigma_upper_envelope(&t.matrix)? / a_lo;

    Ok(bound_a.min(bound_b).min(bound_c))
}

fn unit_domain_vector(spec: &NormSpec, dim: usize) -> Result<Vector> {
    let e = Vector::basis(dim, 0)?;
    let n = spec.norm(&e)?;
    Ok(e.scale(Scalar::new(1.0 / n, 0.0)))
}

/// The dual map `T* : W* -> V*` under the unconjugated pairing: the
/// plain transpose, with dual norms on both sides.
pub fn adjoint(t: &LinearMap) -> Result<LinearMap> {
    LinearMap::new(t.matrix.transpose(), t.codomain.dual()?, t.domain.dual()?)
}

/// Operator norms of `T` and `T*`, with an interval-overlap consistency
/// verdict (exact rules make both sides points, so overlap means
/// equality to tolerance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjointCheck {
    pub primal: CertifiedValue,
    pub dual: CertifiedValue,
    pub consistent: bool,
}

pub fn adjoint_norm_check(
    t: &LinearMap,
    profile: &ToleranceProfile,
    seed: u64,
) -> Result<AdjointCheck> {
    let primal = operator_norm(t, profile, seed)?;
    let dual = operator_norm(&adjoint(t)?, profile, seed)?;
    let scale = primal.lower.abs().max(dual.lower.abs()).max(1.0);
    let consistent = primal.overlaps(&dual, profile.eps_iter * scale);
    Ok(AdjointCheck {
        primal,
        dual,
        consistent,
    })
}

/// Operator norm of the rank-one map `v -> lambda(v) w`: exactly the
/// product of the dual norm of `lambda` and the codomain norm of `w`.
pub fn rank_one_norm(lambda: &Functional, w: &Vector, codomain: &NormSpec) -> Result<f64> {
    Ok(lambda.dual_norm()?.lower * codomain.norm(w)?)
}

/// The rank-one map itself, for cross-checks against the estimator.
pub fn rank_one_map(lambda: &Functional, w: &Vector, codomain: &NormSpec) -> Result<LinearMap> {
    let mut m = Matrix::zeros(w.dim(), lambda.dim())?;
    for i in 0..w.dim() {
        for j in 0..lambda.dim() {
            m[(i, j)] = w[i] * lambda.weights[j];
        }
    }
    LinearMap::new(m, lambda.space_norm.clone(), codomain.clone())
}

mod repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct LinearMapRepr {
        matrix: Matrix,
        domain: NormSpec,
        codomain: NormSpec,
    }

    impl From<LinearMap> for LinearMapRepr {
        fn from(t: LinearMap) -> Self {
            LinearMapRepr {
                matrix: t.matrix,
                domain: t.domain,
                codomain: t.codomain,
            }
        }
    }

    impl TryFrom<LinearMapRepr> for LinearMap {
        type Error = Error;
        fn try_from(r: LinearMapRepr) -> Result<LinearMap> {
            LinearMap::new(r.matrix, r.domain, r.codomain)
        }
    }
}
