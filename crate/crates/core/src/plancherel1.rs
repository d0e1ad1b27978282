//! Rank one residue calculus for the trace density `η` of type `A₁`.
//!
//! With `X` the root lattice, `α(t) = t` on `T = ℂ^×` and
//!
//! ```text
//! η(t) = q⁻¹ (1 − t⁻¹)(1 − t) / ((1 − q⁻¹t⁻¹)(1 − q⁻¹t)),
//! ```
//!
//! integrated against the normalized angular measure `dt / (2πi t)`. On a
//! small circle only `t = 0` is enclosed and the integral is `τ(1) = 1`.
//! Moving the contour out to `|t| = 1` crosses one of the poles `q^{±1}`;
//! its residue becomes a point mass and the rest is the continuous part.
//!
//! Residues are computed twice: exactly, on `η/t` as a reduced rational
//! function over `ℚ`, and numerically, by trapezoidal quadrature on a
//! small circle. The two are asserted to agree.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{dot, fmt_q, to_f64, Q};
use crate::residual::OrbitTable;

pub const TOL: f64 = 1e-10;
pub const DENSITY_SAMPLES: usize = 1 << 10;

/// Dense univariate polynomial over `ℚ`, coefficients low degree first,
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    /// `t − a`.
    pub fn linear_root(a: &Q) -> Self {
        Poly::new(vec![-a.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    fn lead(&self) -> Option<&Q> {
        self.0.last()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Q::zero)
                        + o.0.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(i.into()))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dl = d.lead().expect("division by the zero polynomial").clone();
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly(Vec::new()), self.clone());
        }
        let mut quot = vec![Q::zero(); r.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &r[i + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        r.truncate(dd);
        (Poly::new(quot), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&(Q::one() / l)),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// `num / den` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let g = if g.is_zero() {
            Poly::constant(Q::one())
        } else {
            g
        };
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.lead().cloned().unwrap_or_else(Q::one);
        RatFn {
            num: n.scale(&(Q::one() / &l)),
            den: d.monic(),
        }
    }

    pub fn derivative(&self) -> RatFn {
        RatFn::new(
            self.num
                .derivative()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }

    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// Order of the pole at `a` (0 if `a` is regular).
    pub fn pole_order(&self, a: &Q) -> usize {
        let lin = Poly::linear_root(a);
        let mut d = self.den.clone();
        let mut m = 0;
        loop {
            let (quo, r) = d.div_rem(&lin);
            if !r.is_zero() || d.degree().unwrap_or(0) == 0 {
                return m;
            }
            d = quo;
            m += 1;
        }
    }

    /// Exact residue at `a`: `1/(m−1)! · d^{m−1}/dt^{m−1} [(t−a)^m f]` at `a`.
    pub fn residue(&self, a: &Q) -> Q {
        let m = self.pole_order(a);
        if m == 0 {
            return Q::zero();
        }
        let mut d = self.den.clone();
        let lin = Poly::linear_root(a);
        for _ in 0..m {
            d = d.div_rem(&lin).0;
        }
        let mut g = RatFn::new(self.num.clone(), d);
        let mut fact = Q::one();
        for j in 1..m {
            g = g.derivative();
            fact *= Q::from_integer(j.into());
        }
        g.eval(a).expect("regular after removing the pole") / fact
    }
}

/// `η` as a density on `T`.
#[derive(Clone, Debug)]
pub struct RankOneDensity {
    pub q: Q,
    qf: f64,
}

impl RankOneDensity {
    pub fn new(q: &Q) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Domain(format!(
                "q must be positive, got {}",
                fmt_q(q)
            )));
        }
        Ok(RankOneDensity {
            q: q.clone(),
            qf: to_f64(q),
        })
    }

    /// `η(t)`, straight from the defining product.
    pub fn eta(&self, t: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let qi = 1.0 / self.qf;
        let ti = one / t;
        qi * (one - ti) * (one - t) / ((one - qi * ti) * (one - qi * t))
    }

    /// `q⁻¹ |1 − t|² / |1 − q⁻¹t|²` at `t = e^{iθ}`; equals `η` on the circle.
    pub fn density(&self, theta: f64) -> f64 {
        if self.q.is_one() {
            // Numerator and denominator cancel identically.
            return 1.0;
        }
        let t = Complex64::from_polar(1.0, theta);
        let qi = 1.0 / self.qf;
        qi * (1.0 - t).norm_sqr() / (1.0 - qi * t).norm_sqr()
    }

    /// `η(t)/t` as an exact rational function:
    /// `−q⁻¹ (t − 1)² / (t (t − q⁻¹)(1 − q⁻¹t))`.
    pub fn eta_over_t(&self) -> RatFn {
        let qi = Q::one() / &self.q;
        let tm1 = Poly::linear_root(&Q::one());
        let num = tm1.mul(&tm1).scale(&-qi.clone());
        let t = Poly::linear_root(&Q::zero());
        let den = t
            .mul(&Poly::linear_root(&qi))
            .mul(&Poly::new(vec![Q::one(), -qi]));
        RatFn::new(num, den)
    }

    /// Poles of `η/t` in `{0, q⁻¹, q}` that survive reduction.
    pub fn poles(&self) -> Vec<Q> {
        let f = self.eta_over_t();
        let mut ps = vec![Q::zero(), Q::one() / &self.q, self.q.clone()];
        ps.sort();
        ps.dedup();
        ps.into_iter().filter(|a| f.pole_order(a) > 0).collect()
    }

    /// Residue of `η/t` at `a` by trapezoidal quadrature on a circle around
    /// `a` of half the distance to the nearest other pole.
    pub fn numeric_residue(&self, a: &Q) -> f64 {
        let af = to_f64(a);
        let others: Vec<f64> = self
            .poles()
            .iter()
            .filter(|p| *p != a)
            .map(to_f64)
            .collect();
        let rho = others
            .iter()
            .map(|p| (p - af).abs() / 2.0)
            .fold(0.5, f64::min);
        let center = Complex64::new(af, 0.0);
        circle_mean(|theta| {
            let d = Complex64::from_polar(rho, theta);
            let t = center + d;
            self.eta(t) / t * d
        })
        .re
    }
}

/// `∮ f(θ) dθ/2π` by the trapezoid rule, doubling the node count until two
/// successive estimates agree to near machine precision.
fn circle_mean(f: impl Fn(f64) -> Complex64) -> Complex64 {
    let sample = |n: usize| -> Complex64 {
        let vals: Vec<Complex64> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        pairwise_sum(&vals) / n as f64
    };
    let mut n = 64;
    let mut prev = sample(n);
    while n < 1 << 22 {
        n *= 2;
        let cur = sample(n);
        if (cur - prev).norm() <= 1e-15 * cur.norm().max(1.0) {
            return cur;
        }
        prev = cur;
    }
    prev
}

fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 16 {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b);
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// `∮_{|t| = p} η(t) dt/(2πi t)`, which equals `τ(1) = 1` when the circle
/// encloses only `t = 0`.
pub fn trace_of_one(q: &Q, p: f64) -> Result<f64> {
    let d = RankOneDensity::new(q)?;
    let qf = to_f64(q);
    let bound = 1f64.min(qf).min(1.0 / qf);
    if !(p > 0.0 && p < bound) {
        return Err(Error::Contract(format!(
            "radius {p} must lie in (0, {bound}) to enclose only t = 0"
        )));
    }
    Ok(circle_mean(|theta| d.eta(Complex64::from_polar(p, theta))).re)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointMass {
    /// `"q^-1"` or `"q"`.
    pub t: String,
    pub location: f64,
    pub mass: f64,
    /// Exact value, `"p/q"`.
    pub exact: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankOneSpectrum {
    pub q: String,
    pub point_masses: Vec<PointMass>,
    pub continuous_total: f64,
    /// `(θ, η(e^{iθ}))`.
    pub density: Vec<(f64, f64)>,
    pub total: f64,
}

impl RankOneSpectrum {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("angle,density\n");
        for (a, v) in &self.density {
            let _ = writeln!(s, "{a:.17e},{v:.17e}");
        }
        s
    }
}

/// Point mass at the pole crossed when moving the contour from a small
/// circle to the unit circle, computed exactly: minus the residue of `η/t`.
/// `None` when no pole lies strictly between (that is, `q = 1`).
pub fn exact_point_mass(q: &Q) -> Result<Option<(String, Q, Q)>> {
    let d = RankOneDensity::new(q)?;
    let one = Q::one();
    let crossed = if *q > one {
        ("q^-1".to_string(), &one / q)
    } else if *q < one {
        ("q".to_string(), q.clone())
    } else {
        return Ok(None);
    };
    let f = d.eta_over_t();
    if f.pole_order(&crossed.1) == 0 {
        return Ok(None);
    }
    let mass = -f.residue(&crossed.1);
    Ok(Some((crossed.0, crossed.1, mass)))
}

/// Splits `τ|_𝒜` into the point mass at the residual orbit `{q, q⁻¹}` and
/// the continuous part on the unit circle.
pub fn decompose(q: &Q) -> Result<RankOneSpectrum> {
    let d = RankOneDensity::new(q)?;
    // The residue at the origin fixes the normalization τ(1) = 1.
    let origin = d.eta_over_t().residue(&Q::zero());
    if origin != Q::one() {
        return Err(Error::Verification(format!(
            "residue of η/t at 0 is {}, expected 1",
            fmt_q(&origin)
        )));
    }

    let mut point_masses = Vec::new();
    if let Some((label, at, mass)) = exact_point_mass(q)? {
        let numeric = -d.numeric_residue(&at);
        let mf = to_f64(&mass);
        if (numeric - mf).abs() > TOL {
            return Err(Error::Verification(format!(
                "symbolic residue {mf} and quadrature {numeric} disagree at t = {label}"
            )));
        }
        if !mass.is_positive() {
            return Err(Error::Verification(format!(
                "point mass {} is not positive",
                fmt_q(&mass)
            )));
        }
        point_masses.push(PointMass {
            t: label,
            location: to_f64(&at),
            mass: mf,
            exact: fmt_q(&mass),
        });
    }

    let continuous_total = if *q == Q::one() {
        // η ≡ 1; no need to integrate.
        1.0
    } else {
        circle_mean(|theta| d.eta(Complex64::from_polar(1.0, theta))).re
    };
    let total = point_masses.iter().map(|m| m.mass).sum::<f64>() + continuous_total;
    if (total - 1.0).abs() > TOL {
        return Err(Error::Verification(format!(
            "point masses plus continuous part total {total}, expected 1"
        )));
    }

    let density = (0..DENSITY_SAMPLES)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / DENSITY_SAMPLES as f64;
            (a, d.density(a))
        })
        .collect();

    Ok(RankOneSpectrum {
        q: fmt_q(q),
        point_masses,
        continuous_total,
        density,
        total,
    })
}

/// Matches the spectrum of `decompose(q)` against an `A₁` residual table
/// computed at some `k` with the sign of `log q` (`t = e^v`, so `α(t) = q`
/// corresponds to `α(v) = k`).
///
/// True iff the point masses sit exactly on the dimension 0 orbit, with
/// `t = q^e` matching a table point with `α(v) = e·k`, and the continuous
/// part corresponds to the single dimension 1 orbit `V`.
pub fn cross_check_support(q: &Q, table: &OrbitTable) -> Result<bool> {
    let spectrum = decompose(q)?;
    if table.label != "A1" || table.params.values.len() != 1 {
        return Ok(false);
    }
    let k = &table.params.values[0];
    let one = Q::one();
    let sign_ok = (*q > one && k.is_positive())
        || (*q < one && k.is_negative())
        || (*q == one && k.is_zero());
    if !sign_ok {
        return Ok(false);
    }

    let lines = table.orbits.iter().filter(|o| o.dim == 1).count();
    let points: Vec<_> = table.point_orbits().collect();
    if lines != 1 || spectrum.continuous_total <= 0.0 {
        return Ok(false);
    }
    if points.len() != spectrum.point_masses.len() {
        return Ok(false);
    }
    let root = &crate::rootsys::RootSystem::from_label("A1")?.roots[0];
    for (orbit, pm) in points.iter().zip(&spectrum.point_masses) {
        let e = if *q > one { -Q::one() } else { Q::one() };
        // `t = q^{-1}` for q > 1 and `t = q` for q < 1.
        let expected_exp = if pm.t == "q^-1" { -Q::one() } else { Q::one() };
        if e != expected_exp {
            return Ok(false);
        }
        let target = &e * k;
        let hit = orbit
            .members
            .iter()
            .any(|&m| dot(root, table.cosets[m].flat.center()) == target);
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}
