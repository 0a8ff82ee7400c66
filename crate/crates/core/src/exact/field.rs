use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Width (as a power of two) to which the isolating interval is refined at
/// construction. Sign decisions start from this interval.
const WORKING_BITS: u32 = 96;

/// A real number field `Q[θ]/(p)` with a distinguished real root of `p`.
///
/// The minimal polynomial must be irreducible over `Q` (squarefreeness and
/// irreducibility are both checked at construction), so an element is zero
/// exactly when its reduced coefficient vector is zero.
pub struct NumberField {
    generator_name: String,
    min_poly: Vec<BigInt>,
    approx_root: f64,
    root_isolation: (BigRational, BigRational),
    working: (BigRational, BigRational),
    poly: Poly,
    // θ^(n+k) expressed in the power basis, k = 0..n-1
    power_reduction: Vec<Vec<BigRational>>,
    theta_pows: Vec<f64>,
    rational_marker: bool,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("generator_name", &self.generator_name)
            .field("min_poly", &self.min_poly)
            .field("approx_root", &self.approx_root)
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        if self.degree() == 1 && other.degree() == 1 {
            return true;
        }
        self.min_poly == other.min_poly && self.contains_same_root(other)
    }
}

impl NumberField {
    /// The field of rational numbers, encoded as `θ = 1`.
    pub fn rational() -> Arc<NumberField> {
        let mut f = Self::build(
            "t".to_string(),
            vec![BigInt::from(-1), BigInt::from(1)],
            1.0,
            (BigRational::zero(), BigRational::from_integer(2.into())),
        );
        f.rational_marker = true;
        Arc::new(f)
    }

    /// `Q(√n)` with the positive square root; `n` must not be a perfect square.
    pub fn quadratic(generator: &str, n: i64) -> Result<Arc<NumberField>> {
        let approx = (n as f64).sqrt();
        Self::new(generator, &[-n, 0, 1], approx, None)
    }

    /// Builds a field from integer coefficients (lowest degree first), an
    /// approximation of the chosen real root and an optional isolating
    /// interval. When no interval is given the real roots are isolated and
    /// the one nearest `approx_root` is chosen.
    pub fn new(
        generator: &str,
        min_poly: &[i64],
        approx_root: f64,
        isolation: Option<(BigRational, BigRational)>,
    ) -> Result<Arc<NumberField>> {
        let coeffs: Vec<BigInt> = min_poly.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_big(generator, coeffs, approx_root, isolation)
    }

    pub fn from_big(
        generator: &str,
        min_poly: Vec<BigInt>,
        approx_root: f64,
        isolation: Option<(BigRational, BigRational)>,
    ) -> Result<Arc<NumberField>> {
        if generator.is_empty() || !generator.chars().all(|c| c.is_ascii_alphabetic() || c == '_') {
            return Err(Error::InvalidField(format!("bad generator name {generator:?}")));
        }
        if min_poly.len() < 2 || min_poly.last().is_some_and(|c| c.is_zero()) {
            return Err(Error::InvalidField(
                "minimal polynomial needs degree >= 1 and a nonzero leading coefficient".into(),
            ));
        }
        if !approx_root.is_finite() {
            return Err(Error::InvalidField("approximate root is not finite".into()));
        }
        let p = poly::from_ints(&min_poly);
        let g = poly::gcd(&p, &poly::derivative(&p));
        if poly::degree(&g) != Some(0) {
            return Err(Error::InvalidField("minimal polynomial is not squarefree".into()));
        }
        if p.len() > 2 && !is_irreducible(&min_poly) {
            return Err(Error::InvalidField("minimal polynomial is reducible over Q".into()));
        }
        let seq = poly::sturm_sequence(&p);
        let interval = match isolation {
            Some((lo, hi)) => {
                if lo >= hi {
                    return Err(Error::InvalidField("isolation interval is empty".into()));
                }
                let slo = poly::sign(&poly::eval(&p, &lo));
                let shi = poly::sign(&poly::eval(&p, &hi));
                if slo * shi >= 0 {
                    return Err(Error::InvalidField(
                        "minimal polynomial does not change sign over the isolation interval".into(),
                    ));
                }
                if poly::count_roots(&seq, &lo, &hi) != 1 {
                    return Err(Error::InvalidField(
                        "isolation interval contains more than one root".into(),
                    ));
                }
                let a = rational_from_f64(approx_root);
                if a < lo || a > hi {
                    return Err(Error::InvalidField(
                        "approximate root lies outside the isolation interval".into(),
                    ));
                }
                (lo, hi)
            }
            None => isolate_nearest(&p, &seq, approx_root)?,
        };
        Ok(Arc::new(Self::build(generator.to_string(), min_poly, approx_root, interval)))
    }

    fn build(
        generator_name: String,
        min_poly: Vec<BigInt>,
        approx_root: f64,
        root_isolation: (BigRational, BigRational),
    ) -> NumberField {
        let p = poly::from_ints(&min_poly);
        let n = p.len() - 1;
        let lead = p[n].clone();
        // θ^n = -(1/lead) Σ_{i<n} p_i θ^i
        let base: Vec<BigRational> = p[..n].iter().map(|c| -c / &lead).collect();
        let mut power_reduction = vec![base.clone()];
        for _ in 1..n {
            let prev = power_reduction.last().unwrap();
            let top = prev[n - 1].clone();
            let mut next = vec![BigRational::zero(); n];
            for i in (1..n).rev() {
                next[i] = prev[i - 1].clone();
            }
            for i in 0..n {
                next[i] += &top * &base[i];
            }
            power_reduction.push(next);
        }
        let working = refine_to_width(&p, root_isolation.clone(), WORKING_BITS);
        let mid = (&working.0 + &working.1) / BigRational::from_integer(2.into());
        let root_f64 = mid.to_f64().unwrap_or(approx_root);
        let theta_pows = (0..n).map(|k| root_f64.powi(k as i32)).collect();
        NumberField {
            generator_name,
            min_poly,
            approx_root,
            root_isolation,
            working,
            poly: p,
            power_reduction,
            theta_pows,
            rational_marker: false,
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn is_rational_field(&self) -> bool {
        self.rational_marker || self.degree() == 1
    }

    pub fn generator_name(&self) -> &str {
        &self.generator_name
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn approx_root(&self) -> f64 {
        self.approx_root
    }

    pub fn root_isolation(&self) -> &(BigRational, BigRational) {
        &self.root_isolation
    }

    /// Double-precision value of the distinguished root.
    pub fn root_f64(&self) -> f64 {
        self.theta_pows.get(1).copied().unwrap_or_else(|| self.root_value_deg1())
    }

    fn root_value_deg1(&self) -> f64 {
        (-&self.poly[0] / &self.poly[1]).to_f64().unwrap_or(f64::NAN)
    }

    /// `θ^k` in double precision for `k < degree`.
    pub fn theta_powers_f64(&self) -> &[f64] {
        &self.theta_pows
    }

    fn contains_same_root(&self, other: &NumberField) -> bool {
        let (a, b) = &self.working;
        let (c, d) = &other.working;
        a <= d && c <= b
    }

    /// Reduces an arbitrary polynomial in θ to the power basis.
    pub(crate) fn reduce(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let n = self.degree();
        if c.len() <= n {
            c.resize(n, BigRational::zero());
            return c;
        }
        if c.len() <= 2 * n {
            let mut out: Vec<BigRational> = c[..n].to_vec();
            for (k, coef) in c[n..].iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                for (o, r) in out.iter_mut().zip(&self.power_reduction[k]) {
                    *o += coef * r;
                }
            }
            return out;
        }
        let mut r = poly::rem(&c, &self.poly);
        r.resize(n, BigRational::zero());
        r
    }

    /// Inverse of a nonzero element given by its power-basis coefficients.
    pub(crate) fn invert(&self, c: &[BigRational]) -> Option<Vec<BigRational>> {
        let mut a = c.to_vec();
        poly::trim(&mut a);
        if a.is_empty() {
            return None;
        }
        let (g, s) = poly::gcd_ext(&a, &self.poly);
        if poly::degree(&g) != Some(0) {
            return None;
        }
        Some(self.reduce(s))
    }

    /// Double-precision evaluation of power-basis coefficients.
    pub(crate) fn eval_f64(&self, c: &[BigRational]) -> f64 {
        if self.degree() == 1 {
            return c[0].to_f64().unwrap_or(f64::NAN);
        }
        c.iter()
            .zip(&self.theta_pows)
            .map(|(x, t)| x.to_f64().unwrap_or(f64::NAN) * t)
            .sum()
    }

    /// Exact sign at the distinguished root, decided by interval refinement.
    pub(crate) fn sign_at_root(&self, c: &[BigRational]) -> i8 {
        if c.iter().all(|x| x.is_zero()) {
            return 0;
        }
        if self.degree() == 1 {
            return poly::sign(&c[0]);
        }
        let mut iv = self.working.clone();
        loop {
            let (lo, hi) = enclose(c, &iv);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            iv = bisect(&self.poly, iv);
        }
    }

    /// Rational approximation within `2^-bits` of the value at the root.
    pub(crate) fn approximate(&self, c: &[BigRational], bits: u32) -> BigRational {
        if self.degree() == 1 {
            return c[0].clone();
        }
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let mut iv = self.working.clone();
        loop {
            let (lo, hi) = enclose(c, &iv);
            if &hi - &lo <= eps {
                return (lo + hi) / BigRational::from_integer(2.into());
            }
            iv = bisect(&self.poly, iv);
        }
    }
}

/// Interval enclosure of `Σ c_k θ^k` for θ in `iv` (Horner with interval ops).
fn enclose(c: &[BigRational], iv: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let (a, b) = iv;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for coef in c.iter().rev() {
        let cands = [&lo * a, &lo * b, &hi * a, &hi * b];
        let mut mn = cands[0].clone();
        let mut mx = cands[0].clone();
        for v in &cands[1..] {
            if *v < mn {
                mn = v.clone();
            }
            if *v > mx {
                mx = v.clone();
            }
        }
        lo = mn + coef;
        hi = mx + coef;
    }
    (lo, hi)
}

fn bisect(p: &Poly, iv: (BigRational, BigRational)) -> (BigRational, BigRational) {
    let (lo, hi) = iv;
    if lo == hi {
        return (lo, hi);
    }
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    let sm = poly::sign(&poly::eval(p, &mid));
    if sm == 0 {
        return (mid.clone(), mid);
    }
    let slo = poly::sign(&poly::eval(p, &lo));
    if slo * sm < 0 {
        (lo, mid)
    } else {
        (mid, hi)
    }
}

fn refine_to_width(p: &Poly, mut iv: (BigRational, BigRational), bits: u32) -> (BigRational, BigRational) {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    while &iv.1 - &iv.0 > eps {
        iv = bisect(p, iv);
    }
    iv
}

pub(crate) fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Isolates every real root and returns the isolating interval nearest to
/// `approx`.
fn isolate_nearest(p: &Poly, seq: &[Poly], approx: f64) -> Result<(BigRational, BigRational)> {
    if poly::degree(p) == Some(1) {
        let r = -&p[0] / &p[1];
        let one = BigRational::one();
        return Ok((&r - &one, &r + &one));
    }
    let b = poly::root_bound(p);
    let mut stack = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        match poly::count_roots(seq, &lo, &hi) {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    if isolated.is_empty() {
        return Err(Error::InvalidField("minimal polynomial has no real root".into()));
    }
    let a = rational_from_f64(approx);
    let dist = |iv: &(BigRational, BigRational)| -> BigRational {
        if a < iv.0 {
            &iv.0 - &a
        } else if a > iv.1 {
            &a - &iv.1
        } else {
            BigRational::zero()
        }
    };
    isolated.sort_by(|x, y| dist(x).cmp(&dist(y)).then_with(|| x.0.cmp(&y.0)));
    // no rational roots in degree >= 2, so the endpoints are never roots
    Ok(isolated.swap_remove(0))
}

/// Irreducibility over `Q` for an integer polynomial of degree >= 2.
///
/// Every factor of a primitive `p ∈ Z[x]` has the form `c·Π(x - r)` for a
/// subset of the complex roots and a divisor `c` of the leading coefficient;
/// candidates are located numerically and confirmed by exact division.
pub(crate) fn is_irreducible(coeffs: &[BigInt]) -> bool {
    let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let prim: Vec<BigInt> = coeffs.iter().map(|c| c / &content).collect();
    let n = prim.len() - 1;
    let exact = poly::from_ints(&prim);
    if prim[0].is_zero() {
        return false;
    }
    let lead = prim[n].abs();
    let divisors = small_divisors(&lead);
    let roots = complex_roots(&prim);
    for k in 1..=n / 2 {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let mut f = vec![Complex64::new(1.0, 0.0)];
            for &i in &subset {
                let mut next = vec![Complex64::new(0.0, 0.0); f.len() + 1];
                for (j, c) in f.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * roots[i];
                }
                f = next;
            }
            if f.iter().all(|c| c.im.abs() < 1e-6 * (1.0 + c.re.abs())) {
                for c in &divisors {
                    let cf = c.to_f64().unwrap_or(f64::INFINITY);
                    let cand: Option<Vec<BigInt>> = f
                        .iter()
                        .map(|z| {
                            let v = z.re * cf;
                            let r = v.round();
                            ((v - r).abs() < 1e-4 * (1.0 + v.abs()).sqrt()).then(|| BigInt::from(r as i64))
                        })
                        .collect();
                    if let Some(cand) = cand {
                        let cp = poly::from_ints(&cand);
                        if poly::degree(&cp) == Some(k) && poly::rem(&exact, &cp).is_empty() {
                            return false;
                        }
                    }
                }
            }
            if !next_subset(&mut subset, n) {
                break;
            }
        }
    }
    true
}

fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.to_u64().unwrap_or(1);
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out
}

/// All complex roots by Durand–Kerner iteration followed by Newton polishing.
fn complex_roots(coeffs: &[BigInt]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].to_f64().unwrap_or(1.0);
    let a: Vec<f64> = coeffs.iter().map(|c| c.to_f64().unwrap_or(0.0) / lead).collect();
    let eval = |z: Complex64| a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let deriv = |z: Complex64| {
        a.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64)
    };
    let radius = 1.0 + a[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = deriv(*r);
            if d.norm() > 0.0 {
                *r -= eval(*r) / d;
            }
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_squarefree() {
        let err = NumberField::new("t", &[1, -2, 1], 1.0, None).unwrap_err();
        assert!(matches!(err, Error::InvalidField(_)));
    }

    #[test]
    fn rejects_reducible() {
        // (x^2 - 2)(x^2 - 3)
        assert!(NumberField::new("t", &[6, 0, -5, 0, 1], 1.4142, None).is_err());
        // (x - 1)(x - 2)
        assert!(NumberField::new("t", &[2, -3, 1], 1.0, None).is_err());
    }

    #[test]
    fn accepts_irreducible_quartic() {
        let f = NumberField::new("t", &[1, 0, -10, 0, 1], 3.146, None).unwrap();
        assert_eq!(f.degree(), 4);
        assert!((f.root_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-12);
        assert!(is_irreducible(&[-2, 0, 0, 0, 0, 1].map(BigInt::from)));
    }

    #[test]
    fn picks_root_nearest_to_approximation() {
        let f = NumberField::new("t", &[-2, 0, 1], -1.4, None).unwrap();
        assert!((f.root_f64() + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn validates_user_isolation() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert!(NumberField::new("t", &[-2, 0, 1], 1.41, Some((q(1, 1), q(3, 2)))).is_ok());
        // contains no root
        assert!(NumberField::new("t", &[-2, 0, 1], 1.6, Some((q(3, 2), q(2, 1)))).is_err());
        // contains both roots
        assert!(NumberField::new("t", &[-2, 0, 1], 1.41, Some((q(-2, 1), q(2, 1)))).is_err());
        // approximation outside
        assert!(NumberField::new("t", &[-2, 0, 1], 1.6, Some((q(1, 1), q(3, 2)))).is_err());
    }

    #[test]
    fn degree_one_field_behaves_like_rationals() {
        let f = NumberField::new("t", &[-1, 1], 1.0, None).unwrap();
        assert!(f.is_rational_field());
        assert_eq!(*f, *NumberField::rational());
    }
}
