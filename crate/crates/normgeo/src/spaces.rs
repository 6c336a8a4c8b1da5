//! Norms on `R^n` / `C^n`: p-norms, inner-product norms, and the
//! classical inequality battery (Young, Hölder, Minkowski, p–q norm
//! comparisons, ball convexity, equivalence with the Euclidean norm).

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sampling;
use crate::scalar::{Mode, Scalar};
use crate::tolerance::ToleranceProfile;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

/// An exponent p in [1, ∞]. Infinity is a distinguished variant rather
/// than a floating sentinel, so `1/p` never produces NaN arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::ExponentRepr", into = "repr::ExponentRepr")]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);
    pub const INF: Exponent = Exponent::Infinity;

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            Ok(Exponent::Infinity)
        } else {
            Ok(Exponent::Finite(p))
        }
    }

    /// 1/p, with the convention 1/∞ = 0.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// The conjugate exponent q with 1/p + 1/q = 1.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "Inf" | "INF" | "infinity" => Ok(Exponent::Infinity),
            _ => Exponent::new(
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidExponent(f64::NAN))?,
            ),
        }
    }
}

/// A norm descriptor: a p-norm or the norm of a Hermitian
/// positive-definite inner product (Gram matrix).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    P { p: Exponent },
    InnerProduct { gram: Matrix },
}

impl NormSpec {
    pub fn p(p: Exponent) -> NormSpec {
        NormSpec::P { p }
    }

    pub fn euclidean() -> NormSpec {
        NormSpec::P { p: Exponent::TWO }
    }

    pub fn inner_product(gram: Matrix) -> Result<NormSpec> {
        let spec = NormSpec::InnerProduct { gram };
        spec.validate(&ToleranceProfile::default())?;
        Ok(spec)
    }

    /// Check well-formedness: Gram matrices must be Hermitian with
    /// strictly positive minimum eigenvalue.
    pub fn validate(&self, profile: &ToleranceProfile) -> Result<()> {
        match self {
            NormSpec::P { .. } => Ok(()),
            NormSpec::InnerProduct { gram } => {
                if !gram.is_hermitian(profile.eps_exact) {
                    return Err(Error::InvalidNorm("Gram matrix is not Hermitian".into()));
                }
                let eig = gram.hermitian_eigen(1e-13, 60)?;
                let min = eig.eigenvalues[0];
                if min <= 0.0 {
                    return Err(Error::InvalidNorm(format!(
                        "Gram matrix is not positive definite (min eigenvalue {min:.3e})"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Evaluate the norm.
    pub fn norm(&self, v: &Vector) -> Result<f64> {
        match self {
            NormSpec::P { p } => Ok(p_norm(v, *p)),
            NormSpec::InnerProduct { gram } => {
                let gv = gram.mul_vec(v)?;
                let q = v.conj().dot(&gv)?; // v^H G v
                Ok(q.re.max(0.0).sqrt())
            }
        }
    }

    /// Norm spec of the dual space under the unconjugated pairing
    /// `sum v_j w_j`: the dual of `P(p)` is `P(q)`, and the dual of a
    /// Gram norm `G` is the Gram norm `conj(G^{-1})`.
    pub fn dual(&self) -> Result<NormSpec> {
        match self {
            NormSpec::P { p } => Ok(NormSpec::P { p: p.conjugate() }),
            NormSpec::InnerProduct { gram } => Ok(NormSpec::InnerProduct {
                gram: gram.inverse()?.conj(),
            }),
        }
    }

    /// Constants `(lo, hi)` with `lo * |v|_2 <= |v| <= hi * |v|_2` for all
    /// v in dimension `dim`. Exact for both norm kinds.
    pub fn l2_comparison(&self, dim: usize) -> Result<(f64, f64)> {
        let n = dim as f64;
        match self {
            NormSpec::P { p } => {
                let r = p.recip();
                // |v|_p vs |v|_2: for p <= 2 the p-norm dominates, with
                // worst-case factor n^(1/p - 1/2); mirrored for p >= 2.
                if r >= 0.5 {
                    Ok((1.0, n.powf(r - 0.5)))
                } else {
                    Ok((n.powf(r - 0.5), 1.0))
                }
            }
            NormSpec::InnerProduct { gram } => {
                let eig = gram.hermitian_eigen(1e-13, 60)?;
                let min = eig.eigenvalues[0].max(0.0);
                let max = *eig.eigenvalues.last().unwrap();
                Ok((min.sqrt(), max.max(0.0).sqrt()))
            }
        }
    }
}

/// Anything that can evaluate a candidate norm, for the sampling checks
/// that accept user-supplied evaluators.
pub trait NormEvaluator {
    fn eval(&self, v: &Vector) -> f64;
}

impl NormEvaluator for NormSpec {
    fn eval(&self, v: &Vector) -> f64 {
        self.norm(v).unwrap_or(f64::NAN)
    }
}

impl<F: Fn(&Vector) -> f64> NormEvaluator for F {
    fn eval(&self, v: &Vector) -> f64 {
        self(v)
    }
}

/// The p-norm, computed overflow-safely by factoring out the largest
/// modulus before powering.
pub fn p_norm(v: &Vector, p: Exponent) -> f64 {
    let m = v.max_modulus();
    if m == 0.0 {
        return 0.0;
    }
    match p {
        Exponent::Infinity => m,
        Exponent::Finite(p) if p == 1.0 => v.entries().iter().map(|z| z.norm()).sum(),
        Exponent::Finite(p) if p == 2.0 => v.norm2(),
        Exponent::Finite(p) => {
            let s: f64 = v.entries().iter().map(|z| (z.norm() / m).powf(p)).sum();
            m * s.powf(1.0 / p)
        }
    }
}

/// Inner product against `spec` (which must be of InnerProduct kind):
/// `<v, w> = w^H G v`, linear in `v` and Hermitian-symmetric.
pub fn inner_product(v: &Vector, w: &Vector, spec: &NormSpec) -> Result<Scalar> {
    match spec {
        NormSpec::P { .. } => Err(Error::InvalidNorm(
            "inner_product requires an inner-product norm spec".into(),
        )),
        NormSpec::InnerProduct { gram } => {
            let gv = gram.mul_vec(v)?;
            gv.hdot(w)
        }
    }
}

/// The conjugate exponent (1/p + 1/q = 1, with 1/∞ = 0).
pub fn conjugate_exponent(p: Exponent) -> Exponent {
    p.conjugate()
}

/// Both sides of an inequality together with a tolerance verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Young's inequality `a b <= a^p / p + b^q / q` for conjugate
/// exponents with 1 < p, q < ∞.
pub fn young_bound(
    a: f64,
    b: f64,
    p: f64,
    q: f64,
    profile: &ToleranceProfile,
) -> Result<InequalityCheck> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::InvalidNorm(
            "Young's inequality needs a, b >= 0".into(),
        ));
    }
    if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite()) {
        return Err(Error::NotConjugate { p, q });
    }
    if ((1.0 / p) + (1.0 / q) - 1.0).abs() > 1e-12 {
        return Err(Error::NotConjugate { p, q });
    }
    let lhs = a * b;
    let rhs = a.powf(p) / p + b.powf(q) / q;
    Ok(InequalityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + profile.eps_exact * rhs.max(1.0),
    })
}

/// Hölder's inequality `|sum v_j w_j| <= |v|_p |w|_q`.
pub fn holder_check(
    v: &Vector,
    w: &Vector,
    p: Exponent,
    profile: &ToleranceProfile,
) -> Result<InequalityCheck> {
    let lhs = v.dot(w)?.norm();
    let rhs = p_norm(v, p) * p_norm(w, p.conjugate());
    Ok(InequalityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + profile.eps_exact * rhs.max(1.0),
    })
}

/// Minkowski's inequality `|v + w|_p <= |v|_p + |w|_p`.
pub fn minkowski_check(
    v: &Vector,
    w: &Vector,
    p: Exponent,
    profile: &ToleranceProfile,
) -> Result<InequalityCheck> {
    let lhs = p_norm(&v.add(w)?, p);
    let rhs = p_norm(v, p) + p_norm(w, p);
    Ok(InequalityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + profile.eps_exact * rhs.max(1.0),
    })
}

/// Two-sided comparison of `|v|_p` against `|v|_q` for p <= q:
/// `|v|_q <= |v|_p <= n^(1/p - 1/q) |v|_q`. `low`/`high` are the bracket
/// endpoints around `|v|_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormComparison {
    pub low: f64,
    pub high: f64,
    pub holds: bool,
}

pub fn norm_comparison(
    v: &Vector,
    p: Exponent,
    q: Exponent,
    profile: &ToleranceProfile,
) -> Result<NormComparison> {
    if p.recip() < q.recip() {
        // 1/p < 1/q means p > q
        return Err(Error::InvalidNorm(format!("need p <= q, got p={p}, q={q}")));
    }
    let n = v.dim() as f64;
    let np = p_norm(v, p);
    let nq = p_norm(v, q);
    let low = nq;
    let high = n.powf(p.recip() - q.recip()) * nq;
    let tol = profile.eps_exact;
    let holds = np >= low - tol * low.max(1.0) && np <= high + tol * high.max(1.0);
    Ok(NormComparison { low, high, holds })
}

/// Outcome of the ball-convexity sampling check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCheck {
    pub ok: bool,
    /// `(u, v, t, norm_of_combination)` on failure.
    pub witness: Option<(Vector, Vector, f64, f64)>,
}

/// Sample pairs with norm ≤ 1 and verify the segment between them stays
/// in the unit ball: the ball-convexity criterion equivalent to the
/// triangle inequality for homogeneous positive-definite evaluators.
pub fn check_ball_convexity<N: NormEvaluator + ?Sized>(
    norm: &N,
    dim: usize,
    mode: Mode,
    trials: usize,
    seed: u64,
    profile: &ToleranceProfile,
) -> ConvexityCheck {
    let mut rng = sampling::rng(seed);
    for _ in 0..trials {
        let u = sample_in_unit_ball(norm, dim, mode, &mut rng);
        let v = sample_in_unit_ball(norm, dim, mode, &mut rng);
        let t = sampling::uniform(&mut rng, 0.0, 1.0);
        let mix = u
            .scale(Scalar::new(t, 0.0))
            .add(&v.scale(Scalar::new(1.0 - t, 0.0)))
            .expect("same dim");
        let value = norm.eval(&mix);
        if value > 1.0 + profile.eps_exact {
            return ConvexityCheck {
                ok: false,
                witness: Some((u, v, t, value)),
            };
        }
    }
    ConvexityCheck {
        ok: true,
        witness: None,
    }
}

fn sample_in_unit_ball<N: NormEvaluator + ?Sized>(
    norm: &N,
    dim: usize,
    mode: Mode,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vector {
    loop {
        let g = sampling::gaussian_vector(rng, dim, mode);
        let n = norm.eval(&g);
        if n > 1e-12 && n.is_finite() {
            let t = sampling::uniform(rng, 0.0, 1.0);
            return g.scale(Scalar::new(t / n, 0.0));
        }
    }
}

/// Empirical range of `norm(v) / |v|_2` over sampled unit Euclidean
/// vectors. These are inner estimates: the true infimum and supremum lie
/// outside or on the reported bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceEstimate {
    pub c_low: f64,
    pub c_high: f64,
    /// Always false: sampling can only shrink the true range.
    pub certified: bool,
}

pub fn equivalence_constants<N: NormEvaluator + ?Sized>(
    norm: &N,
    dim: usize,
    mode: Mode,
    trials: usize,
    seed: u64,
) -> EquivalenceEstimate {
    let mut rng = sampling::rng(seed);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    // include the basis directions so the common extremes are always seen
    for k in 0..dim {
        let e = Vector::basis(dim, k).expect("dim >= 1");
        let r = norm.eval(&e);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    for _ in 0..trials {
        let v = sampling::unit_vector(&mut rng, dim, mode);
        let r = norm.eval(&v);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    EquivalenceEstimate {
        c_low: lo,
        c_high: hi,
        certified: false,
    }
}

mod repr {
    use super::*;

    /// `p` on the wire: a number, or the string `"inf"`.
    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub enum ExponentRepr {
        Num(f64),
        Tag(String),
    }

    impl From<Exponent> for ExponentRepr {
        fn from(e: Exponent) -> Self {
            match e {
                Exponent::Finite(p) => ExponentRepr::Num(p),
                Exponent::Infinity => ExponentRepr::Tag("inf".into()),
            }
        }
    }

    impl TryFrom<ExponentRepr> for Exponent {
        type Error = Error;
        fn try_from(r: ExponentRepr) -> Result<Exponent> {
            match r {
                ExponentRepr::Num(p) => Exponent::new(p),
                ExponentRepr::Tag(s) => s.parse(),
            }
        }
    }
}
