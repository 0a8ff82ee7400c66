//! Restriction of a pair to rational hyperplanes, and the search for a
//! hyperplane that keeps the density hypotheses and lands in type I.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::{classify_type, CanonicalLabel, PairKind};
use crate::conditions::{check_conjecture, check_theorem, ConditionReport, PencilMode, Verdict};
use crate::error::{Error, Result};
use crate::exact::FieldScalar;
use crate::forms::{restrict_to_kernel, LinearForm, PairQL};

/// `{ℓ = 0}` for a primitive integer form `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalHyperplane {
    ell: Vec<i64>,
    height: i64,
}

impl RationalHyperplane {
    /// Divides out the content; rejects the zero form.
    pub fn new(ell: Vec<i64>) -> Result<RationalHyperplane> {
        let g = ell.iter().fold(0i64, |g, &v| g.gcd(&v));
        if g == 0 {
            return Err(Error::ZeroForm);
        }
        let ell: Vec<i64> = ell.into_iter().map(|v| v / g).collect();
        let height = ell.iter().map(|v| v.abs()).max().unwrap_or(0);
        Ok(RationalHyperplane { ell, height })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.ell
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn linear_form(&self, field: &std::sync::Arc<crate::exact::NumberField>) -> LinearForm {
        LinearForm::from_ints(field, &self.ell)
    }
}

/// A pair restricted to a rational hyperplane.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub ell: RationalHyperplane,
    /// Integer basis of the hyperplane's lattice, one vector per new coordinate.
    pub kernel_basis: Vec<Vec<BigInt>>,
    pub restricted: PairQL,
    /// `φ(ℓ)`: determinant of `Q` on `{ℓ = 0}` in the kernel basis.
    pub phi: FieldScalar,
    /// `ψ(ℓ)`: determinant of `Q` on `{ℓ = 0, L = 0}`; `None` when `L`
    /// vanishes on the hyperplane.
    pub psi: Option<FieldScalar>,
    pub report: ConditionReport,
    /// Present when the restricted `Q` is nondegenerate and `L` is nonzero.
    pub type_label: Option<CanonicalLabel>,
}

impl ReductionStep {
    /// Type I exactly when `φ ≠ 0`, `ψ ≠ 0` and `L` stays nonzero.
    pub fn is_type_one(&self) -> bool {
        !self.phi.is_zero() && self.psi.as_ref().is_some_and(|x| !x.is_zero())
    }
}

struct Quick {
    kernel_basis: Vec<Vec<BigInt>>,
    restricted: PairQL,
    phi: FieldScalar,
    psi: Option<FieldScalar>,
}

fn restrict_quick(p: &PairQL, ell: &RationalHyperplane) -> Result<Quick> {
    if ell.coeffs().len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: ell.coeffs().len() });
    }
    let r = restrict_to_kernel(p, &ell.linear_form(p.field()))?;
    let restricted = r.pair;
    let phi = restricted.q.determinant();
    let psi = if restricted.l.is_zero() {
        None
    } else {
        Some(restrict_to_kernel(&restricted, &restricted.l)?.pair.q.determinant())
    };
    Ok(Quick { kernel_basis: r.integer_basis.expect("rational hyperplane"), restricted, phi, psi })
}

/// Restricts `(Q, L)` to `{ℓ = 0}` and evaluates the restricted pair.
pub fn restrict_pair(p: &PairQL, ell: &RationalHyperplane) -> Result<ReductionStep> {
    if p.dim() < 2 {
        return Err(Error::PreconditionViolated("restriction needs d >= 2".into()));
    }
    let Quick { kernel_basis, restricted, phi, psi } = restrict_quick(p, ell)?;
    if restricted.l.is_zero() {
        return Err(Error::ZeroL);
    }
    let report = check_theorem(&restricted, PencilMode::Exact)?;
    let type_label = if phi.is_zero() { None } else { Some(classify_type(&restricted)?) };
    Ok(ReductionStep { ell: ell.clone(), kernel_basis, restricted, phi, psi, report, type_label })
}

/// Normalized primitive forms (first nonzero entry positive) with
/// `‖ℓ‖∞ = h`, in lexicographic order.
pub fn sweep_candidates(d: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![-h; d];
    loop {
        let max = x.iter().map(|v| v.abs()).max().unwrap_or(0);
        let first = x.iter().find(|&&v| v != 0).copied().unwrap_or(0);
        if max == h && first > 0 && x.iter().fold(0i64, |g, &v| g.gcd(&v)) == 1 {
            out.push(x.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < h {
                x[i] += 1;
                break;
            }
            x[i] = -h;
        }
    }
}

/// Deterministic candidate stream: a full sweep by increasing height while
/// the sweep fits in the budget, then seeded random forms of height ≤ H.
pub fn candidate_stream(d: usize, height_bound: i64, attempts: usize, seed: u64) -> Vec<RationalHyperplane> {
    let mut out = Vec::with_capacity(attempts);
    let mut h = 1;
    while h <= height_bound {
        let layer = sweep_candidates(d, h);
        if out.len() + layer.len() > attempts {
            break;
        }
        out.extend(layer.into_iter().map(|v| RationalHyperplane::new(v).expect("nonzero")));
        h += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < attempts && height_bound >= 1 {
        let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-height_bound..=height_bound)).collect();
        let Ok(mut hp) = RationalHyperplane::new(v) else { continue };
        if hp.ell.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
            hp.ell.iter_mut().for_each(|c| *c = -*c);
        }
        out.push(hp);
    }
    out
}

fn admissible(verdict: &Verdict) -> bool {
    matches!(verdict, Verdict::TheoremApplies | Verdict::ConjectureOnly)
}

/// First hyperplane of height ≤ `height_bound` whose restriction satisfies
/// the density hypotheses and is of type I; `None` after `attempts`
/// candidates.
///
/// Pairs that only satisfy the weaker conjectural hypotheses are accepted as
/// input; for them the search is expected to fail.
pub fn find_reduction_hyperplane(
    p: &PairQL,
    height_bound: i64,
    attempts: usize,
    seed: u64,
) -> Result<Option<ReductionStep>> {
    let d = p.dim();
    if d < 5 {
        return Err(Error::PreconditionViolated(format!("reduction needs d >= 5, got {d}")));
    }
    let pre = check_conjecture(p, PencilMode::Exact)?;
    if !admissible(&pre.verdict) {
        return Err(Error::PreconditionViolated(format!("hypotheses fail: {:?}", pre.verdict)));
    }
    for ell in candidate_stream(d, height_bound, attempts, seed) {
        let Ok(quick) = restrict_quick(p, &ell) else { continue };
        if quick.phi.is_zero() || !quick.psi.as_ref().is_some_and(|x| !x.is_zero()) {
            continue;
        }
        // cheap necessary condition before the full report
        let Ok(inner) = restrict_to_kernel(&quick.restricted, &quick.restricted.l) else { continue };
        if !inner.pair.q.signature().is_indefinite() {
            continue;
        }
        let step = restrict_pair(p, &ell)?;
        if step.report.verdict == Verdict::TheoremApplies
            && step.type_label.is_some_and(|l| l.kind == PairKind::TypeI)
        {
            return Ok(Some(step));
        }
    }
    Ok(None)
}

/// Chains reduction steps down to dimension 4.
pub fn reduce_to_dim4(p: &PairQL, height_bound: i64, attempts: usize, seed: u64) -> Result<Vec<ReductionStep>> {
    if p.dim() < 4 {
        return Err(Error::PreconditionViolated(format!("reduction needs d >= 4, got {}", p.dim())));
    }
    if p.dim() == 4 {
        return Ok(Vec::new());
    }
    let report = check_theorem(p, PencilMode::Exact)?;
    if report.verdict != Verdict::TheoremApplies {
        return Err(Error::PreconditionViolated(format!("hypotheses fail: {:?}", report.verdict)));
    }
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut current = p.clone();
    while current.dim() > 4 {
        match find_reduction_hyperplane(&current, height_bound, attempts, seed)? {
            Some(step) => {
                current = step.restricted.clone();
                steps.push(step);
            }
            None => return Err(Error::ReductionFailed { depth: steps.len() }),
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::forms::Signature;

    #[test]
    fn sweep_counts() {
        assert_eq!(sweep_candidates(3, 1).len(), 13);
        assert_eq!(sweep_candidates(2, 2).len(), 4);
        assert!(sweep_candidates(4, 2).iter().all(|v| v.iter().any(|x| x.abs() == 2)));
    }

    #[test]
    fn coordinate_deletion() {
        let p = catalog::type_one_canonical();
        let step = restrict_pair(&p, &RationalHyperplane::new(vec![1, 0, 0, 0]).unwrap()).unwrap();
        assert_eq!(step.restricted.q.signature(), Signature { pos: 1, neg: 2, zero: 0 });
        assert_eq!(step.type_label.unwrap().kind, PairKind::TypeI);
        assert!(step.is_type_one());
    }

    #[test]
    fn tangent_hyperplane_is_degenerate() {
        let p = catalog::type_two_canonical();
        let step = restrict_pair(&p, &RationalHyperplane::new(vec![1, 0, 0, 0]).unwrap()).unwrap();
        assert!(step.phi.is_zero());
        assert!(matches!(&step.report.verdict, Verdict::Fails(v) if v.contains(&crate::conditions::FailReason::DegenerateQ)));
    }

    #[test]
    fn e5_along_x4_keeps_a_rational_pencil_member() {
        let p = catalog::e5();
        let step = restrict_pair(&p, &RationalHyperplane::new(vec![0, 0, 0, 1, 0]).unwrap()).unwrap();
        assert_eq!(step.type_label.unwrap().kind, PairKind::TypeI);
        assert!(step.report.restriction_indefinite);
        assert!(!step.report.pencil_irrational);
    }

    #[test]
    fn e5_reduces() {
        let step = find_reduction_hyperplane(&catalog::e5(), 3, 1000, 7).unwrap().unwrap();
        assert_eq!(step.restricted.dim(), 4);
        assert_eq!(step.report.verdict, Verdict::TheoremApplies);
        assert!(reduce_to_dim4(&catalog::e1(), 3, 10, 0).unwrap().is_empty());
    }

    #[test]
    fn rational_pencil_is_rejected() {
        let f = crate::exact::NumberField::rational();
        let q = crate::forms::QuadraticForm::diagonal_ints(&f, &[1, 1, -1, -1, 1]);
        let p = PairQL::new(q, LinearForm::coordinate(&f, 5, 4)).unwrap();
        assert!(matches!(find_reduction_hyperplane(&p, 3, 100, 0), Err(Error::PreconditionViolated(_))));
    }
}
