//! Quotient norms `inf { |x + w| : w in W }` and norm-preserving
//! extension of linear functionals from a subspace to the whole space.
//!
//! Exactness map: the Euclidean and Gram cases minimize by normal
//! equations; for `l1`/`l∞` over the reals the infimum is piecewise
//! linear and coercive, so it is attained at a vertex of the active
//! constraint arrangement and found by exact enumeration whenever the
//! candidate budget allows. Everything else is a certified interval:
//! coordinate descent from the Euclidean minimizer for the upper bound,
//! annihilator-functional probes for the lower bound.

use crate::certified::CertifiedValue;
use crate::duality::{norming_functional, Functional};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sampling;
use crate::scalar::{Mode, Scalar};
use crate::spaces::{Exponent, NormSpec};
use crate::tolerance::ToleranceProfile;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

/// Budget on enumerated candidate systems in the exact piecewise-linear
/// paths; anything larger falls back to the certified interval.
const ENUMERATION_BUDGET: usize = 100_000;

/// A linear subspace given by an independent basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::SubspaceRepr", into = "repr::SubspaceRepr")]
pub struct Subspace {
    basis: Vec<Vector>,
    ambient: usize,
}

impl Subspace {
    /// An empty basis is allowed and describes the zero subspace.
    pub fn new(basis: Vec<Vector>, ambient: usize) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::EmptyVector);
        }
        for b in &basis {
            if b.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: b.dim(),
                });
            }
        }
        if !basis.is_empty() {
            let m = Matrix::from_cols(&basis)?;
            let rank = m.rank(ToleranceProfile::default().eps_exact);
            if rank != basis.len() {
                return Err(Error::InvalidSet(format!(
                    "subspace basis is dependent (rank {rank} of {})",
                    basis.len()
                )));
            }
        }
        Ok(Self { basis, ambient })
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn basis_matrix(&self) -> Result<Matrix> {
        Matrix::from_cols(&self.basis)
    }

    /// `sum_k c_k b_k` for coordinate vector `c`.
    pub fn member(&self, coords: &[Scalar]) -> Result<Vector> {
        if coords.len() != self.basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.len(),
                got: coords.len(),
            });
        }
        let mut out = Vector::zero(self.ambient)?;
        for (c, b) in coords.iter().zip(&self.basis) {
            out = out.add(&b.scale(*c))?;
        }
        Ok(out)
    }
}

/// The quotient norm of `x + W`, with the minimizing representative as
/// witness when available.
pub fn quotient_norm(
    x: &Vector,
    w: &Subspace,
    norm: &NormSpec,
    profile: &ToleranceProfile,
) -> Result<CertifiedValue> {
    if x.dim() != w.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: w.ambient_dim(),
            got: x.dim(),
        });
    }
    norm.validate(profile)?;
    if w.dim() == 0 {
        return Ok(CertifiedValue::exact(norm.norm(x)?, Some(x.clone())));
    }
    let euclidean_like = match norm {
        NormSpec::InnerProduct { .. } => true,
        NormSpec::P {
            p: Exponent::Finite(p),
        } => *p == 2.0,
        _ => false,
    };
    if euclidean_like {
        let rep = gram_minimizer(x, w, norm)?;
        return Ok(CertifiedValue::exact(norm.norm(&rep)?, Some(rep)));
    }
    let real_inputs = x.is_real() && w.basis.iter().all(|b| b.is_real());
    if real_inputs {
        if matches!(norm, NormSpec::P { p: Exponent::Finite(p) } if *p == 1.0) {
            if let Some(cv) = l1_exact(x, w, profile)? {
                return Ok(cv);
            }
        }
        if matches!(
            norm,
            NormSpec::P {
                p: Exponent::Infinity
            }
        ) {
            if let Some(cv) = linf_exact(x, w, profile)? {
                return Ok(cv);
            }
        }
    }
    interval_quotient(x, w, norm, profile)
}

/// Exact minimizer of `|x + B c|` for the Euclidean or Gram norm via the
/// normal equations `(B^H G B) c = -B^H G x`.
fn gram_minimizer(x: &Vector, w: &Subspace, norm: &NormSpec) -> Result<Vector> {
    if w.dim() == 0 {
        return Ok(x.clone());
    }
    let b = w.basis_matrix()?;
    let gb = match norm {
        NormSpec::InnerProduct { gram } => gram.mul(&b)?,
        _ => b.clone(),
    };
    let bh = b.conj_transpose();
    let lhs = bh.mul(&gb)?;
    let gx = match norm {
        NormSpec::InnerProduct { gram } => gram.mul_vec(x)?,
        _ => x.clone(),
    };
    let rhs = bh.mul_vec(&gx)?.scale(Scalar::new(-1.0, 0.0));
    let c = lhs.lu_solve(&rhs)?;
    x.add(&b.mul_vec(&c)?)
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance odometer
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Exact `l1` quotient over the reals: the coercive piecewise-linear
/// objective attains its minimum at an intersection of `dim W` active
/// coordinate lines, so enumerate those systems and take the best.
fn l1_exact(
    x: &Vector,
    w: &Subspace,
    _profile: &ToleranceProfile,
) -> Result<Option<CertifiedValue>> {
    let n = x.dim();
    let d = w.dim();
    if binomial(n, d) > ENUMERATION_BUDGET {
        return Ok(None);
    }
    let xr = x.to_real()?;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| w.basis.iter().map(|b| b[i].re).collect())
        .collect();
    let eval = |t: &[f64]| -> f64 {
        (0..n)
            .map(|i| (xr[i] + crate::realvec::dot(&rows[i], t)).abs())
            .sum()
    };
    let mut best = eval(&vec![0.0; d]);
    let mut best_t = vec![0.0; d];
    let mut solved_any = false;
    combinations(n, d, &mut |subset| {
        let m: Vec<Vec<f64>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let rhs: Vec<f64> = subset.iter().map(|&i| -xr[i]).collect();
        if let (Ok(mm), Ok(rv)) = (Matrix::from_real_rows(&m), Vector::from_real(&rhs)) {
            if let Ok(t) = mm.lu_solve(&rv) {
                solved_any = true;
                let tt: Vec<f64> = (0..d).map(|k| t[k].re).collect();
                let v = eval(&tt);
                if v < best {
                    best = v;
                    best_t = tt;
                }
            }
        }
    });
    if !solved_any && d > 0 {
        return Ok(None);
    }
    let rep = representative(x, w, &best_t)?;
    Ok(Some(CertifiedValue::exact(best, Some(rep))))
}

/// Exact `l∞` quotient over the reals: vertices of the epigraph LP have
/// `dim W + 1` active constraints `±l_i(t) = z`.
fn linf_exact(
    x: &Vector,
    w: &Subspace,
    _profile: &ToleranceProfile,
) -> Result<Option<CertifiedValue>> {
    let n = x.dim();
    let d = w.dim();
    if binomial(2 * n, d + 1) > ENUMERATION_BUDGET {
        return Ok(None);
    }
    let xr = x.to_real()?;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| w.basis.iter().map(|b| b[i].re).collect())
        .collect();
    let eval = |t: &[f64]| -> f64 {
        (0..n)
            .map(|i| (xr[i] + crate::realvec::dot(&rows[i], t)).abs())
            .fold(0.0, f64::max)
    };
    let mut best = eval(&vec![0.0; d]);
    let mut best_t = vec![0.0; d];
    combinations(2 * n, d + 1, &mut |subset| {
        // constraint 2i is +l_i(t) = z, constraint 2i+1 is -l_i(t) = z
        let mut m = vec![vec![0.0; d + 1]; d + 1];
        let mut rhs = vec![0.0; d + 1];
        for (r, &c) in subset.iter().enumerate() {
            let i = c / 2;
            let s = if c % 2 == 0 { 1.0 } else { -1.0 };
            for k in 0..d {
                m[r][k] = s * rows[i][k];
            }
            m[r][d] = -1.0;
            rhs[r] = -s * xr[i];
        }
        if let (Ok(mm), Ok(rv)) = (Matrix::from_real_rows(&m), Vector::from_real(&rhs)) {
            if let Ok(sol) = mm.lu_solve(&rv) {
                let tt: Vec<f64> = (0..d).map(|k| sol[k].re).collect();
                let v = eval(&tt);
                if v < best {
                    best = v;
                    best_t = tt;
                }
            }
        }
    });
    let rep = representative(x, w, &best_t)?;
    Ok(Some(CertifiedValue::exact(best, Some(rep))))
}

fn representative(x: &Vector, w: &Subspace, t: &[f64]) -> Result<Vector> {
    let coords: Vec<Scalar> = t.iter().map(|&v| Scalar::new(v, 0.0)).collect();
    x.add(&w.member(&coords)?)
}

/// High-accuracy minimizer of `|x + B c|_p` over real coordinates for
/// smooth finite p > 1: Barzilai–Borwein gradient steps with Armijo
/// backtracking, run to gradient-level tolerance (the norming
/// functional at the result then annihilates `W` to the same level).
fn smooth_p_minimizer(
    x: &Vector,
    w: &Subspace,
    p: f64,
    profile: &ToleranceProfile,
) -> Result<Option<Vector>> {
    if !(p > 1.0 && p.is_finite()) || !x.is_real() || w.basis.iter().any(|b| !b.is_real()) {
        return Ok(None);
    }
    let d = w.dim();
    let xr = x.to_real()?;
    let cols: Vec<Vec<f64>> = w
        .basis
        .iter()
        .map(|b| b.to_real())
        .collect::<Result<Vec<_>>>()?;
    let norm_spec = NormSpec::p(Exponent::Finite(p));

    let rep = |c: &[f64]| -> Vec<f64> {
        let mut r = xr.clone();
        for (ck, col) in c.iter().zip(&cols) {
            r = crate::realvec::add_scaled(&r, *ck, col);
        }
        r
    };
    let value = |r: &[f64]| -> f64 {
        norm_spec
            .norm(&Vector::from_real(r).expect("n >= 1"))
            .expect("p-norm")
    };
    // gradient of |r|_p pulled back through B
    let grad = |r: &[f64], f: f64| -> Vec<f64> {
        if f == 0.0 {
            return vec![0.0; d];
        }
        let scale = f.powf(p - 1.0);
        let g: Vec<f64> = r
            .iter()
            .map(|&ri| ri.signum() * ri.abs().powf(p - 1.0) / scale)
            .collect();
        (0..d).map(|k| crate::realvec::dot(&g, &cols[k])).collect()
    };

    // start from the Euclidean minimizer
    let mut c = {
        let l2rep = gram_minimizer(x, w, &NormSpec::euclidean())?;
        let b = w.basis_matrix()?;
        let bh = b.conj_transpose();
        let lhs = bh.mul(&b)?;
        let rhs = bh.mul_vec(&l2rep.sub(x)?)?;
        let sol = lhs.lu_solve(&rhs)?;
        (0..d).map(|k| sol[k].re).collect::<Vec<f64>>()
    };
    let mut r = rep(&c);
    let mut f = value(&r);
    let mut g = grad(&r, f);
    let mut alpha = 1.0f64;
    let gtol = |f: f64| 1e-11 * (1.0 + f);

    for iter in 0..profile.max_iter.min(5_000) {
        let gnorm = crate::realvec::norm2(&g);
        if gnorm <= gtol(f) {
            break;
        }
        // Armijo backtracking from the BB step
        let mut step = alpha.clamp(1e-12, 1e6);
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = c.iter().zip(&g).map(|(ck, gk)| ck - step * gk).collect();
            let rc = rep(&cand);
            let fc = value(&rc);
            if fc <= f - 1e-4 * step * gnorm * gnorm {
                let y: Vec<f64> = {
                    let gc = grad(&rc, fc);
                    gc.iter().zip(&g).map(|(a, b)| a - b).collect()
                };
                let s: Vec<f64> = cand.iter().zip(&c).map(|(a, b)| a - b).collect();
                let sy = crate::realvec::dot(&s, &y);
                alpha = if sy > 1e-300 {
                    crate::realvec::dot(&s, &s) / sy
                } else {
                    step * 2.0
                };
                c = cand;
                r = rc;
                f = fc;
                g = grad(&r, f);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        let _ = iter;
    }
    Ok(Some(Vector::from_real(&r)?))
}

/// Certified interval for the general case: coordinate descent upper
/// bound (started at the Euclidean minimizer) and a duality lower bound
/// from functionals that annihilate `W`.
fn interval_quotient(
    x: &Vector,
    w: &Subspace,
    norm: &NormSpec,
    profile: &ToleranceProfile,
) -> Result<CertifiedValue> {
    // smooth real p-norms get the gradient minimizer for the upper bound
    if let NormSpec::P {
        p: Exponent::Finite(pv),
    } = norm
    {
        if let Some(rep) = smooth_p_minimizer(x, w, *pv, profile)? {
            let upper = norm.norm(&rep)?.min(norm.norm(x)?);
            let lower = annihilator_lower_bound(x, w, norm, profile)?.min(upper);
            return Ok(CertifiedValue {
                lower,
                upper,
                exact: false,
                witness: Some(rep),
            });
        }
    }
    let b = w.basis_matrix()?;
    let complex = !(x.is_real() && w.basis.iter().all(|v| v.is_real()));
    let d = w.dim();
    let ncoords = if complex { 2 * d } else { d };

    // start from the Euclidean minimizer, which is also never worse
    // than the zero representative for the upper bound
    let l2rep = gram_minimizer(x, w, &NormSpec::euclidean())?;
    let mut coords = {
        // recover its coordinates by solving B c = l2rep - x in the LS sense
        let bh = b.conj_transpose();
        let lhs = bh.mul(&b)?;
        let rhs = bh.mul_vec(&l2rep.sub(x)?)?;
        let c = lhs.lu_solve(&rhs)?;
        let mut v = vec![0.0; ncoords];
        for k in 0..d {
            v[k] = c[k].re;
            if complex {
                v[d + k] = c[k].im;
            }
        }
        v
    };

    let assemble = |cr: &[f64]| -> Result<Vector> {
        let cs: Vec<Scalar> = (0..d)
            .map(|k| Scalar::new(cr[k], if complex { cr[d + k] } else { 0.0 }))
            .collect();
        x.add(&b.mul_vec(&Vector::new(cs)?)?)
    };
    let objective = |cr: &[f64]| -> f64 {
        assemble(cr)
            .and_then(|rep| norm.norm(&rep))
            .unwrap_or(f64::INFINITY)
    };

    let mut value = objective(&coords);
    if norm.norm(x)? < value {
        coords = vec![0.0; ncoords];
        value = norm.norm(x)?;
    }
    let budget = profile.max_iter.max(60);
    let mut spent = 0;
    'outer: loop {
        let before = value;
        for k in 0..ncoords {
            spent += 1;
            if spent > budget {
                break 'outer;
            }
            let base = coords.clone();
            let phi = |s: f64| {
                let mut c = base.clone();
                c[k] += s;
                objective(&c)
            };
            let (s, v) = golden_min(&phi, value, profile);
            if v < value {
                coords[k] += s;
                value = v;
            }
        }
        if before - value <= profile.eps_iter * (1.0 + value) {
            break;
        }
    }
    let upper = value;
    let witness = assemble(&coords)?;
    let lower = annihilator_lower_bound(x, w, norm, profile)?.min(upper);
    Ok(CertifiedValue {
        lower,
        upper,
        exact: false,
        witness: Some(witness),
    })
}

/// Duality lower bound on the quotient norm: a functional vanishing on
/// `W` satisfies `|lambda(x)| <= |lambda|_* inf |x + w|`, so probing the
/// annihilator of `W` brackets the infimum from below.
fn annihilator_lower_bound(
    x: &Vector,
    w: &Subspace,
    norm: &NormSpec,
    profile: &ToleranceProfile,
) -> Result<f64> {
    let b = w.basis_matrix()?;
    let complex = !(x.is_real() && w.basis.iter().all(|v| v.is_real()));
    let annihilators = b.transpose().nullspace(profile.eps_exact);
    let mut lower: f64 = 0.0;
    let mut probes: Vec<Vector> = Vec::new();
    // the conjugate Euclidean residual annihilates W by orthogonality
    let resid = gram_minimizer(x, w, &NormSpec::euclidean())?.conj();
    if !resid.is_zero() {
        probes.push(resid);
    }
    probes.extend(annihilators.iter().cloned());
    let mut rng = sampling::rng(0xa771);
    for _ in 0..16 {
        if annihilators.is_empty() {
            break;
        }
        let mut combo = Vector::zero(x.dim())?;
        for a in &annihilators {
            let c = sampling::gaussian_scalar(
                &mut rng,
                if complex { Mode::Complex } else { Mode::Real },
            );
            combo = combo.add(&a.scale(c))?;
        }
        probes.push(combo);
    }
    for lam in probes {
        if lam.is_zero() {
            continue;
        }
        let f = Functional::new(lam, norm.clone());
        let dn = f.dual_norm()?.lower;
        if dn > 0.0 {
            lower = lower.max(f.evaluate(x)?.norm() / dn);
        }
    }
    Ok(lower)
}

/// One-dimensional golden-section minimization of `phi(s)` around 0 with
/// an expanding bracket; returns the best step and its value.
fn golden_min(phi: &dyn Fn(f64) -> f64, f0: f64, profile: &ToleranceProfile) -> (f64, f64) {
    let mut r = 1.0;
    let mut lo = -r;
    let mut hi = r;
    for _ in 0..40 {
        if phi(lo) >= f0 && phi(hi) >= f0 {
            break;
        }
        r *= 4.0;
        lo = -r;
        hi = r;
    }
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut a = lo;
    let mut bb = hi;
    let mut c = bb - inv_phi * (bb - a);
    let mut dd = a + inv_phi * (bb - a);
    let mut fc = phi(c);
    let mut fd = phi(dd);
    for _ in 0..90 {
        if (bb - a).abs() <= profile.eps_iter * 1e-2 * (1.0 + a.abs().max(bb.abs())) {
            break;
        }
        if fc < fd {
            bb = dd;
            dd = c;
            fd = fc;
            c = bb - inv_phi * (bb - a);
            fc = phi(c);
        } else {
            a = c;
            c = dd;
            fc = fd;
            dd = a + inv_phi * (bb - a);
            fd = phi(dd);
        }
    }
    let s = 0.5 * (a + bb);
    let fs = phi(s);
    if fs < f0 {
        (s, fs)
    } else {
        (0.0, f0)
    }
}

/// Norm of the functional `lambda` on `Z` (the restriction of the space
/// norm to `Z`): `sup { |lambda(z)| : z in Z, |z| <= 1 }`, computed
/// through the quotient identity `1 / inf { |z0 + w| : w in ker lambda }`.
pub fn restriction_norm(
    z: &Subspace,
    values: &[Scalar],
    norm: &NormSpec,
    profile: &ToleranceProfile,
) -> Result<CertifiedValue> {
    let (z0, kernel) = functional_frame(z, values)?;
    let Some(z0) = z0 else {
        return Ok(CertifiedValue::exact(0.0, None));
    };
    let qn = quotient_norm(&z0, &kernel, norm, profile)?;
    let witness = qn.witness.as_ref().and_then(|rep| {
        let n = norm.norm(rep).ok()?;
        (n > 0.0).then(|| rep.scale(Scalar::new(1.0 / n, 0.0)))
    });
    Ok(CertifiedValue {
        lower: if qn.upper > 0.0 {
            1.0 / qn.upper
        } else {
            f64::INFINITY
        },
        upper: if qn.lower > 0.0 {
            1.0 / qn.lower
        } else {
            f64::INFINITY
        },
        exact: qn.exact,
        witness,
    })
}

/// Shared setup: a vector `z0 in Z` with `lambda(z0) = 1` and a basis of
/// `ker lambda` inside `Z`. `None` when `lambda = 0`.
fn functional_frame(z: &Subspace, values: &[Scalar]) -> Result<(Option<Vector>, Subspace)> {
    if values.len() != z.dim() {
        return Err(Error::InconsistentValues(format!(
            "{} values for a basis of {}",
            values.len(),
            z.dim()
        )));
    }
    let norm_sq: f64 = values.iter().map(|v| v.norm_sqr()).sum();
    if norm_sq == 0.0 {
        return Ok((None, Subspace::new(vec![], z.ambient_dim())?));
    }
    let coeff: Vec<Scalar> = values.iter().map(|v| v.conj() / norm_sq).collect();
    let z0 = z.member(&coeff)?;
    // kernel coordinates: nullspace of the 1 x k row [values]
    let row = Matrix::from_rows(vec![values.to_vec()])?;
    let kernel_coords = row.nullspace(1e-12);
    let kernel_basis: Vec<Vector> = kernel_coords
        .iter()
        .map(|c| z.member(c.entries()))
        .collect::<Result<Vec<_>>>()?;
    Ok((Some(z0), Subspace::new(kernel_basis, z.ambient_dim())?))
}

/// Norm-preserving extension: a functional on the whole space agreeing
/// with `lambda` on `Z` whose dual norm equals the norm of `lambda` on
/// `Z`.
///
/// The smooth cases (Euclidean, Gram, finite p > 1) realize the quotient
/// construction directly: minimize `|z0 + w|` over `w in ker lambda`,
/// take the norming functional at the minimizer (which annihilates the
/// kernel), and rescale. For `l1`/`l∞` over the reals the norming
/// functional at a nonsmooth minimizer must be picked inside the
/// annihilator, which is exactly the minimal-dual-norm extension; that
/// linear program is solved exactly by basic-solution enumeration.
pub fn extend_functional(
    z: &Subspace,
    values: &[Scalar],
    norm: &NormSpec,
    profile: &ToleranceProfile,
) -> Result<Functional> {
    norm.validate(profile)?;
    if z.dim() == 0 {
        return Err(Error::InconsistentValues(
            "the subspace has an empty basis".into(),
        ));
    }
    let (z0, kernel) = functional_frame(z, values)?;
    let Some(z0) = z0 else {
        return Ok(Functional::new(
            Vector::zero(z.ambient_dim())?,
            norm.clone(),
        ));
    };

    let real_inputs = values.iter().all(|v| v.im == 0.0) && z.basis.iter().all(|b| b.is_real());

    match norm {
        NormSpec::InnerProduct { .. } => extend_smooth(&z0, &kernel, norm, profile),
        NormSpec::P {
            p: Exponent::Finite(pv),
        } if *pv == 2.0 => extend_smooth(&z0, &kernel, norm, profile),
        NormSpec::P {
            p: Exponent::Finite(pv),
        } if *pv > 1.0 => {
            if real_inputs || kernel.dim() == 0 {
                extend_smooth(&z0, &kernel, norm, profile)
            } else {
                Err(Error::Unsupported(
                    "complex extension is exact for Euclidean and Gram norms only".into(),
                ))
            }
        }
        NormSpec::P { p } if real_inputs => {
            let b = z.basis_matrix()?;
            let vals: Vec<f64> = values.iter().map(|v| v.re).collect();
            let weights = match p {
                Exponent::Infinity => min_l1_extension(&b, &vals)?,
                _ => min_linf_extension(&b, &vals)?,
            };
            Ok(Functional::new(Vector::from_real(&weights)?, norm.clone()))
        }
        _ => Err(Error::Unsupported(
            "complex extension is exact for Euclidean and Gram norms only".into(),
        )),
    }
}

/// Quotient construction for norms with a unique norming functional at
/// the minimizer.
fn extend_smooth(
    z0: &Vector,
    kernel: &Subspace,
    norm: &NormSpec,
    profile: &ToleranceProfile,
) -> Result<Functional> {
    let rep = match norm {
        NormSpec::InnerProduct { .. } => gram_minimizer(z0, kernel, norm)?,
        NormSpec::P {
            p: Exponent::Finite(pv),
        } if *pv == 2.0 => gram_minimizer(z0, kernel, norm)?,
        NormSpec::P {
            p: Exponent::Finite(pv),
        } if kernel.dim() > 0 => match smooth_p_minimizer(z0, kernel, *pv, profile)? {
            Some(rep) => rep,
            None => quotient_norm(z0, kernel, norm, profile)?
                .witness
                .expect("interval path returns a representative"),
        },
        _ => {
            if kernel.dim() == 0 {
                z0.clone()
            } else {
                quotient_norm(z0, kernel, norm, profile)?
                    .witness
                    .expect("interval path returns a representative")
            }
        }
    };
    let f = norming_functional(&rep, norm)?;
    // clean up solver-level residue: project the weights onto the exact
    // annihilator of the kernel, then rescale at the pivot
    let mut weights = f.weights;
    if kernel.dim() > 0 {
        let b = kernel.basis_matrix()?;
        let bt = b.transpose();
        let bconj = b.conj();
        let lhs = bt.mul(&bconj)?;
        let mu = lhs.lu_solve(&bt.mul_vec(&weights)?)?;
        weights = weights.sub(&bconj.mul_vec(&mu)?)?;
    }
    let at_z0 = weights.dot(z0)?;
    if at_z0.norm() == 0.0 {
        return Err(Error::InconsistentValues(
            "norming functional degenerated at the pivot".into(),
        ));
    }
    let weights = weights.scale(Scalar::new(1.0, 0.0) / at_z0);
    Ok(Functional::new(weights, norm.clone()))
}

/// Minimize `|u|_1` subject to `B^T u = values` (extension for an `l∞`
/// space norm): some optimal point is a basic solution supported on at
/// most `k = dim Z` coordinates.
fn min_l1_extension(b: &Matrix, values: &[f64]) -> Result<Vec<f64>> {
    let n = b.rows();
    let k = b.cols();
    if binomial(n, k) > ENUMERATION_BUDGET {
        return Err(Error::Unsupported(
            "l∞ extension enumeration exceeds the candidate budget".into(),
        ));
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    combinations(n, k, &mut |support| {
        // solve sum_{j in S} B[j][i] u_j = values[i]
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|i| support.iter().map(|&j| b[(j, i)].re).collect())
            .collect();
        if let (Ok(mm), Ok(rhs)) = (Matrix::from_real_rows(&rows), Vector::from_real(values)) {
            if let Ok(sol) = mm.lu_solve(&rhs) {
                let mut u = vec![0.0; n];
                for (l, &j) in support.iter().enumerate() {
                    u[j] = sol[l].re;
                }
                let cost: f64 = u.iter().map(|v| v.abs()).sum();
                if best.as_ref().map(|(c, _)| cost < *c).unwrap_or(true) {
                    best = Some((cost, u));
                }
            }
        }
    });
    best.map(|(_, u)| u)
        .ok_or_else(|| Error::InconsistentValues("no basic extension found".into()))
}

/// Minimize `|u|_∞` subject to `B^T u = values` (extension for an `l1`
/// space norm): vertices of the epigraph LP pin `n + 1 - k` coordinates
/// to `±z`.
fn min_linf_extension(b: &Matrix, values: &[f64]) -> Result<Vec<f64>> {
    let n = b.rows();
    let k = b.cols();
    if k > n {
        return Err(Error::InconsistentValues(
            "subspace larger than ambient".into(),
        ));
    }
    let pinned = n + 1 - k;
    if binomial(n, pinned) * (1usize << pinned.min(20)) > ENUMERATION_BUDGET * 4 {
        return Err(Error::Unsupported(
            "l1 extension enumeration exceeds the candidate budget".into(),
        ));
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    combinations(n, pinned, &mut |pinned_set| {
        let free: Vec<usize> = (0..n).filter(|j| !pinned_set.contains(j)).collect();
        for mask in 0u64..(1u64 << pinned_set.len()) {
            // unknowns: u_j for free j, then z; pinned u_j = s_j z
            let unknowns = free.len() + 1;
            let mut m = vec![vec![0.0; unknowns]; k];
            let rhs: Vec<f64> = values.to_vec();
            for i in 0..k {
                for (c, &j) in free.iter().enumerate() {
                    m[i][c] = b[(j, i)].re;
                }
                let mut zcoef = 0.0;
                for (l, &j) in pinned_set.iter().enumerate() {
                    let s = if mask >> l & 1 == 0 { 1.0 } else { -1.0 };
                    zcoef += s * b[(j, i)].re;
                }
                m[i][free.len()] = zcoef;
            }
            if unknowns != k {
                continue; // dimensions line up only when |pinned| = n + 1 - k
            }
            if let (Ok(mm), Ok(rv)) = (Matrix::from_real_rows(&m), Vector::from_real(&rhs)) {
                if let Ok(sol) = mm.lu_solve(&rv) {
                    let z = sol[free.len()].re;
                    let mut u = vec![0.0; n];
                    for (c, &j) in free.iter().enumerate() {
                        u[j] = sol[c].re;
                    }
                    for (l, &j) in pinned_set.iter().enumerate() {
                        let s = if mask >> l & 1 == 0 { 1.0 } else { -1.0 };
                        u[j] = s * z;
                    }
                    let cost = u.iter().map(|v| v.abs()).fold(0.0, f64::max);
                    if best.as_ref().map(|(c, _)| cost < *c).unwrap_or(true) {
                        best = Some((cost, u));
                    }
                }
            }
        }
    });
    best.map(|(_, u)| u)
        .ok_or_else(|| Error::InconsistentValues("no vertex extension found".into()))
}

/// Sampling check that the quotient norm is a norm: homogeneity,
/// subadditivity, vanishing exactly on `W`.
pub fn quotient_map_check(
    w: &Subspace,
    norm: &NormSpec,
    trials: usize,
    seed: u64,
    profile: &ToleranceProfile,
) -> Result<bool> {
    let n = w.ambient_dim();
    let mut rng = sampling::rng(seed);
    let tol = |scale: f64| 10.0 * profile.eps_iter * (1.0 + scale);
    for _ in 0..trials {
        let x = sampling::gaussian_vector(&mut rng, n, Mode::Real);
        let y = sampling::gaussian_vector(&mut rng, n, Mode::Real);
        let qx = quotient_norm(&x, w, norm, profile)?;
        let qy = quotient_norm(&y, w, norm, profile)?;

        // homogeneity
        let alpha = sampling::uniform(&mut rng, -3.0, 3.0);
        let qax = quotient_norm(&x.scale(Scalar::new(alpha, 0.0)), w, norm, profile)?;
        let scaled = CertifiedValue {
            lower: alpha.abs() * qx.lower,
            upper: alpha.abs() * qx.upper,
            exact: qx.exact,
            witness: None,
        };
        if !qax.overlaps(&scaled, tol(qax.upper)) {
            return Ok(false);
        }

        // subadditivity
        let qxy = quotient_norm(&x.add(&y)?, w, norm, profile)?;
        if qxy.lower > qx.upper + qy.upper + tol(qxy.lower) {
            return Ok(false);
        }

        // members map to zero
        if w.dim() > 0 {
            let coords: Vec<Scalar> = (0..w.dim())
                .map(|_| Scalar::new(sampling::gaussian(&mut rng), 0.0))
                .collect();
            let member = w.member(&coords)?;
            let qm = quotient_norm(&member, w, norm, profile)?;
            let scale = norm.norm(&member)?;
            if qm.upper > tol(scale) {
                return Ok(false);
            }
        }

        // points far from W in the Euclidean sense have positive norm
        let l2rep = gram_minimizer(&x, w, &NormSpec::euclidean())?;
        if l2rep.norm2() > 0.05 && qx.lower <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

mod repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct SubspaceRepr {
        basis: Vec<Vector>,
    }

    impl From<Subspace> for SubspaceRepr {
        fn from(s: Subspace) -> Self {
            SubspaceRepr { basis: s.basis }
        }
    }

    impl TryFrom<SubspaceRepr> for Subspace {
        type Error = Error;
        fn try_from(r: SubspaceRepr) -> Result<Subspace> {
            let ambient = r.basis.first().map(|b| b.dim()).ok_or(Error::EmptyVector)?;
            Subspace::new(r.basis, ambient)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn prof() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn vr(xs: &[f64]) -> Vector {
        Vector::from_real(xs).unwrap()
    }

    fn span(vs: &[&[f64]], ambient: usize) -> Subspace {
        Subspace::new(vs.iter().map(|v| vr(v)).collect(), ambient).unwrap()
    }

    #[test]
    fn l2_quotient_is_orthogonal_distance() {
        let w = span(&[&[1.0, 0.0]], 2);
        let q = quotient_norm(&vr(&[3.0, 4.0]), &w, &NormSpec::euclidean(), &prof()).unwrap();
        assert!(q.exact);
        assert_relative_eq!(q.lower, 4.0, max_relative = 1e-12);
        let rep = q.witness.unwrap();
        assert!(rep[0].re.abs() < 1e-12);
        assert_relative_eq!(rep[1].re, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn linf_quotient_line_example() {
        // W = span{(1,1)}, x = (1,-1): min over t of max(|1+t|, |-1+t|) = 1
        let w = span(&[&[1.0, 1.0]], 2);
        let q = quotient_norm(&vr(&[1.0, -1.0]), &w, &NormSpec::p(Exponent::INF), &prof()).unwrap();
        assert!(q.exact);
        assert_relative_eq!(q.lower, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn member_has_zero_quotient_norm() {
        let w = span(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0]], 3);
        let member = vr(&[2.0, 5.0, 1.0]); // b1 * 2 + b2 * 1
        for norm in [
            NormSpec::euclidean(),
            NormSpec::p(Exponent::ONE),
            NormSpec::p(Exponent::INF),
            NormSpec::p(Exponent::Finite(3.0)),
        ] {
            let q = quotient_norm(&member, &w, &norm, &prof()).unwrap();
            assert!(q.upper < 1e-6, "{norm:?} gave {:?}", q);
        }
    }

    #[test]
    fn quotient_never_exceeds_plain_norm() {
        let mut rng = sampling::rng(5);
        let w = span(&[&[1.0, 0.5, -0.5], &[0.0, 1.0, 2.0]], 3);
        for norm in [
            NormSpec::euclidean(),
            NormSpec::p(Exponent::ONE),
            NormSpec::p(Exponent::INF),
            NormSpec::p(Exponent::Finite(1.7)),
        ] {
            for _ in 0..20 {
                let x = sampling::gaussian_vector(&mut rng, 3, Mode::Real);
                let q = quotient_norm(&x, &w, &norm, &prof()).unwrap();
                assert!(q.upper <= norm.norm(&x).unwrap() + 1e-9);
                assert!(q.lower <= q.upper + 1e-12);
            }
        }
    }

    #[test]
    fn exact_pl_matches_interval_bounds() {
        // the exact l1/linf paths should land inside the generic interval
        let mut rng = sampling::rng(8);
        for _ in 0..10 {
            let w = Subspace::new(
                vec![
                    sampling::gaussian_vector(&mut rng, 4, Mode::Real),
                    sampling::gaussian_vector(&mut rng, 4, Mode::Real),
                ],
                4,
            )
            .unwrap();
            let x = sampling::gaussian_vector(&mut rng, 4, Mode::Real);
            for p in [Exponent::ONE, Exponent::Infinity] {
                let norm = NormSpec::p(p);
                let exact = quotient_norm(&x, &w, &norm, &prof()).unwrap();
                assert!(exact.exact);
                let interval = interval_quotient(&x, &w, &norm, &prof()).unwrap();
                assert!(
                    exact.lower <= interval.upper + 1e-7 && exact.lower >= interval.lower - 1e-7,
                    "exact {} of p={p} outside interval [{}, {}]",
                    exact.lower,
                    interval.lower,
                    interval.upper
                );
            }
        }
    }

    #[test]
    fn extension_l2_example() {
        let z = span(&[&[1.0, 0.0]], 2);
        let f = extend_functional(
            &z,
            &[Scalar::new(1.0, 0.0)],
            &NormSpec::euclidean(),
            &prof(),
        )
        .unwrap();
        assert_relative_eq!(f.weights[0].re, 1.0, epsilon = 1e-10);
        assert!(f.weights[1].norm() < 1e-10);
        assert_relative_eq!(f.dual_norm().unwrap().lower, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn extension_l1_example() {
        // Z = span{(1,1)} in (R^2, l1), lambda((1,1)) = 2:
        // the extension (1,1) has dual (l-inf) norm 1, matching the
        // restriction norm 2 / |(1,1)|_1.
        let z = span(&[&[1.0, 1.0]], 2);
        let f = extend_functional(
            &z,
            &[Scalar::new(2.0, 0.0)],
            &NormSpec::p(Exponent::ONE),
            &prof(),
        )
        .unwrap();
        let on_z = f.evaluate(&vr(&[1.0, 1.0])).unwrap();
        assert_relative_eq!(on_z.re, 2.0, epsilon = 1e-10);
        assert_relative_eq!(f.dual_norm().unwrap().lower, 1.0, epsilon = 1e-10);

        let r = restriction_norm(
            &z,
            &[Scalar::new(2.0, 0.0)],
            &NormSpec::p(Exponent::ONE),
            &prof(),
        )
        .unwrap();
        assert!(r.exact);
        assert_relative_eq!(r.lower, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn zero_functional_extends_to_zero() {
        let z = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]], 3);
        let f = extend_functional(
            &z,
            &[Scalar::new(0.0, 0.0), Scalar::new(0.0, 0.0)],
            &NormSpec::p(Exponent::INF),
            &prof(),
        )
        .unwrap();
        assert!(f.weights.is_zero());
    }

    #[test]
    fn extension_annihilates_kernel_in_nonsmooth_case() {
        // the case where the naive max-index norming functional fails:
        // Z = span{(1,1,0), (1,-1,0)} in l∞, lambda = (1, 0)
        let z = span(&[&[1.0, 1.0, 0.0], &[1.0, -1.0, 0.0]], 3);
        let values = [Scalar::new(1.0, 0.0), Scalar::new(0.0, 0.0)];
        let norm = NormSpec::p(Exponent::INF);
        let f = extend_functional(&z, &values, &norm, &prof()).unwrap();
        // agrees on both basis vectors
        assert_relative_eq!(
            f.evaluate(&vr(&[1.0, 1.0, 0.0])).unwrap().re,
            1.0,
            epsilon = 1e-9
        );
        assert!(f.evaluate(&vr(&[1.0, -1.0, 0.0])).unwrap().norm() < 1e-9);
        // dual norm equals the restriction norm
        let r = restriction_norm(&z, &values, &norm, &prof()).unwrap();
        assert_relative_eq!(f.dual_norm().unwrap().lower, r.lower, epsilon = 1e-9);
    }

    #[test]
    fn random_extensions_preserve_norm() {
        let mut rng = sampling::rng(31);
        for p in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
            let norm = NormSpec::p(p);
            for _ in 0..25 {
                let n = 3 + sampling::uniform_index(&mut rng, 3); // 3..5
                let k = 1 + sampling::uniform_index(&mut rng, n - 1);
                let basis: Vec<Vector> = (0..k)
                    .map(|_| sampling::gaussian_vector(&mut rng, n, Mode::Real))
                    .collect();
                let Ok(z) = Subspace::new(basis, n) else {
                    continue;
                };
                let values: Vec<Scalar> = (0..k)
                    .map(|_| Scalar::new(sampling::gaussian(&mut rng), 0.0))
                    .collect();
                let f = extend_functional(&z, &values, &norm, &prof()).unwrap();
                for (b, v) in z.basis().iter().zip(&values) {
                    assert!(
                        (f.evaluate(b).unwrap() - v).norm() < 1e-7 * (1.0 + v.norm()),
                        "extension disagrees on the basis"
                    );
                }
                let r = restriction_norm(&z, &values, &norm, &prof()).unwrap();
                let dual = f.dual_norm().unwrap().lower;
                if r.exact {
                    assert!(
                        (dual - r.lower).abs() <= 1e-6 * r.lower.max(1e-12),
                        "p={p}: dual {} vs restriction {}",
                        dual,
                        r.lower
                    );
                } else {
                    assert!(dual <= r.upper * (1.0 + 1e-6) && dual >= r.lower * (1.0 - 1e-6));
                }
            }
        }
    }

    #[test]
    fn quotient_map_check_runs_green() {
        let w = span(&[&[1.0, 0.0, 1.0]], 3);
        for norm in [
            NormSpec::euclidean(),
            NormSpec::p(Exponent::ONE),
            NormSpec::p(Exponent::INF),
        ] {
            assert!(quotient_map_check(&w, &norm, 30, 7, &prof()).unwrap());
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let r = Subspace::new(vec![vr(&[1.0, 1.0]), vr(&[2.0, 2.0])], 2);
        assert!(r.is_err());
    }

    #[test]
    fn subspace_json_round_trip() {
        let w = span(&[&[1.0, 0.0, 1.0]], 3);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"basis":[{"mode":"real","entries":[1.0,0.0,1.0]}]}"#);
        assert_eq!(serde_json::from_str::<Subspace>(&s).unwrap(), w);
    }
}
