//! Dual norms, norming functionals, and the real/complex functional
//! correspondence.
//!
//! A functional is represented by its weight vector under the
//! unconjugated pairing `lambda_w(v) = sum_j v_j w_j`, in both real and
//! complex mode. The Hermitian inner product lives separately in
//! [`crate::spaces::inner_product`].
//!
//! Norming functionals use closed forms for p-norms and Gram norms. For
//! a norm given only as a ball description, the geometric route is
//! [`crate::convexgeo::supporting_hyperplane`] at a boundary point of
//! the ball; for a norm given only as an evaluator, [`dual_norm_custom`]
//! reports an ascent lower bound.

use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::sampling;
use crate::scalar::{phase, Mode, Scalar};
use crate::spaces::{p_norm, Exponent, NormEvaluator, NormSpec};
use crate::tolerance::ToleranceProfile;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

/// A linear functional `v -> sum_j v_j w_j` together with the norm on
/// the underlying space against which its dual norm is measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    pub weights: Vector,
    #[serde(rename = "norm")]
    pub space_norm: NormSpec,
}

impl Functional {
    pub fn new(weights: Vector, space_norm: NormSpec) -> Self {
        Self {
            weights,
            space_norm,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    /// `sum_j v_j w_j` (unconjugated, also in complex mode).
    pub fn evaluate(&self, v: &Vector) -> Result<Scalar> {
        self.weights.dot(v)
    }

    /// Dual norm `sup { |lambda(v)| : |v| <= 1 }`, exact for p-norms
    /// (`|w|_q` with q conjugate) and for inner-product norms (through
    /// the Gram inverse).
    pub fn dual_norm(&self) -> Result<CertifiedValue> {
        let value = match &self.space_norm {
            NormSpec::P { p } => p_norm(&self.weights, p.conjugate()),
            NormSpec::InnerProduct { gram } => {
                // sup |w^T v| over v^H G v <= 1 equals sqrt(w^T G^-1 conj(w))
                let ginv = gram.inverse()?;
                let q = self.weights.dot(&ginv.mul_vec(&self.weights.conj())?)?;
                q.re.max(0.0).sqrt()
            }
        };
        let witness = if self.weights.is_zero() {
            None
        } else {
            Some(attaining_vector(self)?)
        };
        Ok(CertifiedValue::exact(value, witness))
    }
}

/// A unit vector (in the space norm) at which the functional attains its
/// dual norm: `lambda(v) = |lambda|_*` with `|v| = 1`.
pub fn attaining_vector(f: &Functional) -> Result<Vector> {
    if f.weights.is_zero() {
        return Err(Error::ZeroVector);
    }
    // The attainer for (w, |.|) is the weight vector of the norming
    // functional of w under the dual norm.
    let dual_spec = f.space_norm.dual()?;
    Ok(norming_functional(&f.weights, &dual_spec)?.weights)
}

/// A functional with dual norm 1 attaining `lambda(v) = |v|` at the
/// given nonzero `v`.
///
/// Closed forms per norm: Euclidean and Gram norms use `conj(G v)/|v|`;
/// p in (1, ∞) uses the signed power construction; p = 1 uses the
/// conjugate phase vector supported on the nonzero entries; p = ∞ puts
/// the conjugate phase at the smallest max-modulus index.
pub fn norming_functional(v: &Vector, space_norm: &NormSpec) -> Result<Functional> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let weights = match space_norm {
        NormSpec::P { p } => match *p {
            Exponent::Finite(pv) if pv == 1.0 => Vector::new(
                v.entries()
                    .iter()
                    .map(|&z| {
                        if z.norm() == 0.0 {
                            Scalar::new(0.0, 0.0)
                        } else {
                            phase(z).conj()
                        }
                    })
                    .collect(),
            )?,
            Exponent::Finite(pv) if pv == 2.0 => {
                let n = v.norm2();
                v.conj().scale(Scalar::new(1.0 / n, 0.0))
            }
            Exponent::Finite(pv) => {
                let n = p_norm(v, *p);
                let scale = n.powf(pv - 1.0);
                Vector::new(
                    v.entries()
                        .iter()
                        .map(|&z| {
                            phase(z).conj() * Scalar::new(z.norm().powf(pv - 1.0) / scale, 0.0)
                        })
                        .collect(),
                )?
            }
            Exponent::Infinity => {
                let max = v.max_modulus();
                let k = v
                    .entries()
                    .iter()
                    .position(|z| z.norm() == max)
                    .expect("nonzero vector has a max-modulus entry");
                let mut w = vec![Scalar::new(0.0, 0.0); v.dim()];
                w[k] = phase(v[k]).conj();
                Vector::new(w)?
            }
        },
        NormSpec::InnerProduct { gram } => {
            let n = space_norm.norm(v)?;
            gram.mul_vec(v)?.conj().scale(Scalar::new(1.0 / n, 0.0))
        }
    };
    Ok(Functional::new(weights, space_norm.clone()))
}

/// The real part of a complex functional, viewed as a real-linear form
/// on `C^n` identified with `R^(2n)`:
/// `r(v) = sum_j a_j Re(v_j) + b_j Im(v_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealLinearForm {
    pub coeff_re: Vec<f64>,
    pub coeff_im: Vec<f64>,
}

impl RealLinearForm {
    pub fn evaluate(&self, v: &Vector) -> Result<f64> {
        if v.dim() != self.coeff_re.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeff_re.len(),
                got: v.dim(),
            });
        }
        Ok(v.entries()
            .iter()
            .zip(self.coeff_re.iter().zip(&self.coeff_im))
            .map(|(z, (a, b))| a * z.re + b * z.im)
            .sum())
    }
}

/// Real part of `lambda_w`: with `w = u + i s`,
/// `Re lambda(v) = sum_j u_j x_j - s_j y_j` for `v = x + i y`.
pub fn real_part_functional(f: &Functional) -> RealLinearForm {
    RealLinearForm {
        coeff_re: f.weights.entries().iter().map(|z| z.re).collect(),
        coeff_im: f.weights.entries().iter().map(|z| -z.im).collect(),
    }
}

/// The unique complex-linear functional whose real part is `r`:
/// `lambda(v) = r(v) - i r(iv)`, i.e. weights `a_j - i b_j`.
pub fn complexify(r: &RealLinearForm, space_norm: NormSpec) -> Result<Functional> {
    if r.coeff_re.len() != r.coeff_im.len() {
        return Err(Error::DimensionMismatch {
            expected: r.coeff_re.len(),
            got: r.coeff_im.len(),
        });
    }
    let weights = Vector::new(
        r.coeff_re
            .iter()
            .zip(&r.coeff_im)
            .map(|(&a, &b)| Scalar::new(a, -b))
            .collect(),
    )?;
    Ok(Functional::new(weights, space_norm))
}

/// Dual-norm estimate for a custom norm evaluator: normalized-ascent
/// with random restarts over the unit ball. The best value found is a
/// valid lower bound; no rigorous upper envelope exists for an arbitrary
/// evaluator, so the upper bound is reported as infinite and
/// `exact = false`.
pub fn dual_norm_custom<N: NormEvaluator + ?Sized>(
    weights: &Vector,
    norm: &N,
    mode: Mode,
    profile: &ToleranceProfile,
    seed: u64,
    restarts: usize,
) -> CertifiedValue {
    let dim = weights.dim();
    let mut best = 0.0f64;
    let mut best_witness: Option<Vector> = None;
    let mut rng = sampling::rng(seed);

    // basis directions and the conjugate-weight direction catch the
    // vertices of polyhedral balls that plain ascent can stall short of
    let mut starts: Vec<Vector> = (0..dim)
        .filter_map(|k| Vector::basis(dim, k).ok())
        .collect();
    if !weights.is_zero() {
        starts.push(weights.conj());
    }
    for _ in 0..restarts.max(1) {
        starts.push(sampling::unit_vector(&mut rng, dim, mode));
    }

    for start in starts {
        let n0 = norm.eval(&start);
        if !(n0 > 0.0 && n0.is_finite()) {
            continue;
        }
        let mut v = start.scale(Scalar::new(1.0 / n0, 0.0));
        let mut value = eval_abs(weights, &v);
        for _ in 0..profile.max_iter {
            // ascent direction for |lambda(v)|: conj(phase(lambda(v))) * w
            let lam = weights.dot(&v).expect("same dim");
            let dir = weights.scale(phase(lam).conj());
            let mut improved = false;
            for step in [16.0, 4.0, 1.0, 0.25] {
                let stepped = v.add(&dir.scale(Scalar::new(step, 0.0))).expect("same dim");
                let n = norm.eval(&stepped);
                if !(n > 0.0 && n.is_finite()) {
                    continue;
                }
                let cand = stepped.scale(Scalar::new(1.0 / n, 0.0));
                let cand_value = eval_abs(weights, &cand);
                if cand_value > value * (1.0 + profile.eps_iter) {
                    value = cand_value;
                    v = cand;
                    improved = true;
                    break;
                }
            }
            if !improved {
                break;
            }
        }
        if value > best {
            best = value;
            best_witness = Some(v);
        }
    }
    CertifiedValue::interval(best, f64::INFINITY, best_witness)
}

fn eval_abs(weights: &Vector, v: &Vector) -> f64 {
    weights.dot(v).map(|z| z.norm()).unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn vr(xs: &[f64]) -> Vector {
        Vector::from_real(xs).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = Functional::new(vr(&[1.0, 2.0]), NormSpec::euclidean());
        assert_eq!(
            f.evaluate(&vr(&[3.0, 4.0])).unwrap(),
            Scalar::new(11.0, 0.0)
        );

        let zero = Functional::new(Vector::zero(2).unwrap(), NormSpec::euclidean());
        assert_eq!(
            zero.evaluate(&vr(&[5.0, -7.0])).unwrap(),
            Scalar::new(0.0, 0.0)
        );

        let i = Scalar::new(0.0, 1.0);
        let one = Scalar::new(1.0, 0.0);
        let f = Functional::new(Vector::new(vec![one, i]).unwrap(), NormSpec::euclidean());
        let v = Vector::new(vec![i, one]).unwrap();
        assert_eq!(f.evaluate(&v).unwrap(), Scalar::new(0.0, 2.0));
    }

    #[test]
    fn dual_norm_p_examples() {
        let f = Functional::new(vr(&[3.0, 4.0]), NormSpec::euclidean());
        let d = f.dual_norm().unwrap();
        assert!(d.exact);
        assert_relative_eq!(d.lower, 5.0, max_relative = 1e-12);

        let f = Functional::new(vr(&[1.0, 1.0]), NormSpec::p(Exponent::INF));
        assert_relative_eq!(f.dual_norm().unwrap().lower, 2.0);

        let f = Functional::new(vr(&[2.0, -1.0]), NormSpec::p(Exponent::ONE));
        assert_relative_eq!(f.dual_norm().unwrap().lower, 2.0);
    }

    #[test]
    fn dual_norm_gram_matches_ascent_bound() {
        use crate::matrix::Matrix;
        let gram = Matrix::from_real_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let spec = NormSpec::inner_product(gram).unwrap();
        let f = Functional::new(vr(&[1.0, -2.0]), spec.clone());
        let exact = f.dual_norm().unwrap();
        // the attaining vector certifies the value from below
        let v = attaining_vector(&f).unwrap();
        assert_relative_eq!(spec.norm(&v).unwrap(), 1.0, max_relative = 1e-10);
        let attained = f.evaluate(&v).unwrap().norm();
        assert_relative_eq!(attained, exact.lower, max_relative = 1e-10);
        // and sampling never beats it
        let mut rng = sampling::rng(17);
        for _ in 0..500 {
            let g = sampling::gaussian_vector(&mut rng, 2, Mode::Real);
            let n = spec.norm(&g).unwrap();
            if n < 1e-9 {
                continue;
            }
            let u = g.scale(Scalar::new(1.0 / n, 0.0));
            assert!(f.evaluate(&u).unwrap().norm() <= exact.lower + 1e-9);
        }
    }

    #[test]
    fn norming_functional_examples() {
        let v = vr(&[3.0, 4.0]);
        let f = norming_functional(&v, &NormSpec::euclidean()).unwrap();
        assert_relative_eq!(f.weights[0].re, 0.6, max_relative = 1e-12);
        assert_relative_eq!(f.weights[1].re, 0.8, max_relative = 1e-12);
        assert_relative_eq!(f.evaluate(&v).unwrap().re, 5.0, max_relative = 1e-12);

        let v = vr(&[1.0, -2.0]);
        let f = norming_functional(&v, &NormSpec::p(Exponent::ONE)).unwrap();
        assert_eq!(f.weights[0], Scalar::new(1.0, 0.0));
        assert_eq!(f.weights[1], Scalar::new(-1.0, 0.0));
        assert_relative_eq!(f.evaluate(&v).unwrap().re, 3.0);
        assert_relative_eq!(f.dual_norm().unwrap().lower, 1.0);

        let v = vr(&[5.0, 2.0]);
        let f = norming_functional(&v, &NormSpec::p(Exponent::INF)).unwrap();
        assert_eq!(f.weights[0], Scalar::new(1.0, 0.0));
        assert_eq!(f.weights[1], Scalar::new(0.0, 0.0));
        assert_relative_eq!(f.evaluate(&v).unwrap().re, 5.0);

        assert!(norming_functional(&Vector::zero(2).unwrap(), &NormSpec::euclidean()).is_err());
    }

    #[test]
    fn norming_functional_ties_pick_smallest_index() {
        let v = vr(&[2.0, -2.0, 1.0]);
        let f = norming_functional(&v, &NormSpec::p(Exponent::INF)).unwrap();
        assert_eq!(f.weights[0], Scalar::new(1.0, 0.0));
        assert_eq!(f.weights[1], Scalar::new(0.0, 0.0));
    }

    #[test]
    fn norming_functional_complex_attains() {
        let prof = ToleranceProfile::default();
        let mut rng = sampling::rng(23);
        for p in [
            Exponent::ONE,
            Exponent::Finite(1.5),
            Exponent::TWO,
            Exponent::Finite(3.0),
            Exponent::INF,
        ] {
            let spec = NormSpec::p(p);
            for _ in 0..50 {
                let v = sampling::gaussian_vector(&mut rng, 4, Mode::Complex);
                if v.is_zero() {
                    continue;
                }
                let f = norming_functional(&v, &spec).unwrap();
                let lam = f.evaluate(&v).unwrap();
                let nv = p_norm(&v, p);
                assert!(lam.im.abs() <= 1e-10 * nv.max(1.0));
                assert_relative_eq!(lam.re, nv, max_relative = 1e-9);
                assert_relative_eq!(
                    f.dual_norm().unwrap().lower,
                    1.0,
                    max_relative = prof.eps_exact * 10.0
                );
            }
        }
    }

    #[test]
    fn real_part_round_trip_and_identity() {
        let w = Vector::new(vec![Scalar::new(1.0, 2.0), Scalar::new(-0.5, 0.25)]).unwrap();
        let f = Functional::new(w, NormSpec::euclidean());
        let r = real_part_functional(&f);
        let back = complexify(&r, NormSpec::euclidean()).unwrap();
        assert_eq!(back.weights, f.weights);

        // real part of lambda with w = (1, 0) is Re(v_1)
        let f = Functional::new(vr(&[1.0, 0.0]), NormSpec::euclidean());
        let r = real_part_functional(&f);
        let v = Vector::new(vec![Scalar::new(3.0, 7.0), Scalar::new(9.0, -2.0)]).unwrap();
        assert_eq!(r.evaluate(&v).unwrap(), 3.0);

        // lambda(v) = r(v) - i r(iv)
        let mut rng = sampling::rng(31);
        for _ in 0..50 {
            let w = sampling::gaussian_vector(&mut rng, 3, Mode::Complex);
            let f = Functional::new(w, NormSpec::p(Exponent::Finite(3.0)));
            let r = real_part_functional(&f);
            let v = sampling::gaussian_vector(&mut rng, 3, Mode::Complex);
            let iv = v.scale(Scalar::new(0.0, 1.0));
            let lam = f.evaluate(&v).unwrap();
            let viaparts = Scalar::new(r.evaluate(&v).unwrap(), -r.evaluate(&iv).unwrap());
            assert!((lam - viaparts).norm() < 1e-10 * (1.0 + lam.norm()));
        }
    }

    #[test]
    fn real_part_has_same_dual_norm() {
        // sup of Re(lambda) over the unit p-ball equals the dual norm:
        // check by sampling and by the norming attainer.
        let mut rng = sampling::rng(37);
        for p in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
            let w = sampling::gaussian_vector(&mut rng, 3, Mode::Complex);
            if w.is_zero() {
                continue;
            }
            let f = Functional::new(w, NormSpec::p(p));
            let r = real_part_functional(&f);
            let dual = f.dual_norm().unwrap().lower;
            // attainer: lambda(v*) = dual (real positive), so r(v*) = dual
            let vstar = attaining_vector(&f).unwrap();
            assert_relative_eq!(r.evaluate(&vstar).unwrap(), dual, max_relative = 1e-9);
            for _ in 0..300 {
                let g = sampling::gaussian_vector(&mut rng, 3, Mode::Complex);
                let n = p_norm(&g, p);
                if n < 1e-9 {
                    continue;
                }
                let u = g.scale(Scalar::new(1.0 / n, 0.0));
                assert!(r.evaluate(&u).unwrap() <= dual + 1e-9 * dual.max(1.0));
            }
        }
    }

    #[test]
    fn custom_dual_norm_lower_bounds_p_norm_truth() {
        let prof = ToleranceProfile::default();
        // custom evaluator that is secretly the l1 norm: dual norm = max |w_j|
        let l1 = |v: &Vector| p_norm(v, Exponent::ONE);
        let w = vr(&[2.0, -1.0, 0.5]);
        let est = dual_norm_custom(&w, &l1, Mode::Real, &prof, 11, 16);
        assert!(!est.exact);
        assert!(est.lower <= 2.0 + 1e-9);
        assert!(est.lower >= 2.0 - 1e-9, "ascent found {}", est.lower);
        assert!(est.upper.is_infinite());
    }

    #[test]
    fn functional_json_shape() {
        let f = Functional::new(vr(&[1.0, 1.0]), NormSpec::p(Exponent::INF));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"weights":{"mode":"real","entries":[1.0,1.0]},"norm":{"kind":"p","p":"inf"}}"#
        );
        let back: Functional = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
