//! Decision procedures for the density hypotheses of a pair: indefiniteness
//! of `Q|_{L=0}`, irrationality of the pencil `αQ + βL²`, existence of a
//! definite pencil member, plus stabilizer computations.

mod heuristic;
mod lll;
mod stabilizer;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

pub use stabilizer::{
    fixed_dual_vectors, invariant_quadratic_forms, so21_algebra_generators, so21_group_generators,
    unipotent_generator, InvarianceMode,
};

use crate::canonical::{classify_type, PairKind};
use crate::error::{Error, Result};
use crate::exact::{rational_span_witness, FieldScalar};
use crate::forms::{restrict_to_kernel, PairQL, QuadraticForm, Signature};
use crate::linalg::{self, Matrix};

/// How condition 2 is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PencilMode {
    /// Exact linear algebra over the declared field: a proof either way.
    Exact,
    /// Lattice reduction on `digits`-digit approximations; a negative answer
    /// is evidence only.
    Heuristic { digits: u32, max_denominator: u64 },
}

impl PencilMode {
    pub fn heuristic_default() -> PencilMode {
        PencilMode::Heuristic { digits: 64, max_denominator: 1_000_000 }
    }
}

/// `α·Gram(Q) + β·Gram(L²) = rational_matrix`.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilWitness {
    pub alpha: FieldScalar,
    pub beta: FieldScalar,
    pub rational_matrix: Matrix<BigRational>,
    /// `false` for witnesses found in heuristic mode, where the identity
    /// holds only to `residual`.
    pub exact: bool,
    pub residual: f64,
}

impl PencilWitness {
    /// Exact recomputation of the defining identity.
    pub fn verify(&self, p: &PairQL) -> bool {
        let combo = p.q.scaled(&self.alpha).plus(&QuadraticForm::square_of(&p.l).scaled(&self.beta));
        combo.gram().iter().zip(&self.rational_matrix).all(|(row, rrow)| {
            row.iter().zip(rrow).all(|(x, r)| x.is_rational().as_ref() == Some(r))
        })
    }
}

/// Open interval `(lo, hi)` of `β` with `Q + βL²` definite; `None` ends are
/// infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaInterval {
    pub lo: Option<FieldScalar>,
    pub hi: Option<FieldScalar>,
    /// `+1` for positive definite members, `−1` for negative definite ones.
    pub sign: i8,
}

impl BetaInterval {
    pub fn contains(&self, beta: &FieldScalar) -> bool {
        self.lo.as_ref().is_none_or(|lo| beta.exact_cmp(lo).is_gt())
            && self.hi.as_ref().is_none_or(|hi| beta.exact_cmp(hi).is_lt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FailReason {
    Dimension,
    DegenerateQ,
    RestrictionNotIndefinite,
    DefinitePencil,
    PencilRational,
}

impl FailReason {
    pub fn describe(&self) -> &'static str {
        match self {
            FailReason::Dimension => "dimension below 4",
            FailReason::DegenerateQ => "Q degenerate",
            FailReason::RestrictionNotIndefinite => "restriction not indefinite",
            FailReason::DefinitePencil => "some Q + bL^2 is definite",
            FailReason::PencilRational => "pencil rational",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    TheoremApplies,
    /// All checks pass but condition 2 was only tested heuristically.
    LikelyApplies,
    /// Conjecture hypotheses hold while the restriction is not indefinite.
    ConjectureOnly,
    Fails(Vec<FailReason>),
}

#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub dim: usize,
    pub dim_ok: bool,
    pub q_nondegenerate: bool,
    pub restriction_signature: Signature,
    pub restriction_indefinite: bool,
    pub pencil_irrational: bool,
    pub pencil_witness: Option<PencilWitness>,
    /// Condition 2 was decided heuristically.
    pub evidence_only: bool,
    /// No member of `Q + βL²` is definite.
    pub conjecture_indefinite_pencil: bool,
    pub definite_interval: Option<BetaInterval>,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
}

/// Whether `Q|_{L=0}` is indefinite.
pub fn indefinite_restriction(p: &PairQL) -> Result<bool> {
    Ok(restriction_signature(p)?.is_indefinite())
}

fn restriction_signature(p: &PairQL) -> Result<Signature> {
    if p.l.is_zero() {
        return Err(Error::ZeroL);
    }
    Ok(restrict_to_kernel(p, &p.l)?.pair.q.signature())
}

fn upper_to_matrix(entries: &[BigRational], d: usize) -> Matrix<BigRational> {
    let mut m = vec![vec![BigRational::zero(); d]; d];
    let mut it = entries.iter();
    for i in 0..d {
        for j in i..d {
            let v = it.next().expect("d(d+1)/2 entries").clone();
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    m
}

/// A witness that some nonzero `αQ + βL²` is rational, or `None` when no
/// such combination exists (exact mode) or none was detected (heuristic).
pub fn pencil_rationality(p: &PairQL, mode: PencilMode) -> Result<Option<PencilWitness>> {
    let u = p.q.upper_entries();
    let v = QuadraticForm::square_of(&p.l).upper_entries();
    let d = p.dim();
    match mode {
        PencilMode::Exact => {
            if p.float_input {
                return Err(Error::NoFieldDeclared);
            }
            Ok(rational_span_witness(&u, &v).map(|w| PencilWitness {
                alpha: w.alpha,
                beta: w.beta,
                rational_matrix: upper_to_matrix(&w.rational, d),
                exact: true,
                residual: 0.0,
            }))
        }
        PencilMode::Heuristic { digits, max_denominator } => {
            let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32;
            let ua: Vec<BigRational> = u.iter().map(|x| x.approx_rational(bits)).collect();
            let va: Vec<BigRational> = v.iter().map(|x| x.approx_rational(bits)).collect();
            let Some(hit) = heuristic::detect(&ua, &va, digits, &BigInt::from(max_denominator)) else {
                return Ok(None);
            };
            let field = p.field();
            let r: Vec<BigRational> = hit.r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            Ok(Some(PencilWitness {
                alpha: FieldScalar::from_rational(field, hit.alpha),
                beta: FieldScalar::from_rational(field, hit.beta),
                rational_matrix: upper_to_matrix(&r, d),
                exact: false,
                residual: hit.residual,
            }))
        }
    }
}

/// The open set of `β` with `Q + βL²` definite, if nonempty.
///
/// A definite member exists exactly for type I pairs with definite
/// `Q|_{L=0}`. Since `det(A + β·c·cᵀ) = det(A)·(1 + β·cᵀA⁻¹c)`, the only
/// degenerate member is at `β₀ = −1/(cᵀA⁻¹c)` and the interval is the side
/// of `β₀` where the last inertia index agrees with the restriction.
pub fn definite_pencil(p: &PairQL) -> Result<Option<BetaInterval>> {
    let label = classify_type(p)?;
    let sr = restriction_signature(p)?;
    if label.kind != PairKind::TypeI || !sr.is_definite() {
        return Ok(None);
    }
    let field = p.field();
    let zero = FieldScalar::zero(field);
    let a_inv = linalg::inverse(p.q.gram(), &zero).ok_or(Error::DegenerateQ)?;
    let c = p.l.coeffs();
    let y = linalg::mat_vec(&a_inv, c);
    let s = c.iter().zip(&y).fold(zero.clone(), |acc, (x, z)| &acc + &(x * z));
    let beta0 = -(s.checked_inv()?);
    // a one-dimensional restriction space (d = 1) counts as positive
    let sign = if sr.neg == 0 { 1 } else { -1 };
    Ok(Some(if sign > 0 {
        BetaInterval { lo: Some(beta0), hi: None, sign }
    } else {
        BetaInterval { lo: None, hi: Some(beta0), sign }
    }))
}

struct Checks {
    report: ConditionReport,
    reasons_theorem: Vec<FailReason>,
    reasons_conjecture: Vec<FailReason>,
}

fn run_checks(p: &PairQL, mode: PencilMode) -> Result<Checks> {
    if p.l.is_zero() {
        return Err(Error::ZeroL);
    }
    let d = p.dim();
    let mut warnings = Vec::new();
    let dim_ok = d >= 4;
    if d == 3 {
        warnings.push(
            "d = 3 is below the supported range d >= 4; density can fail here even when every other check passes"
                .to_string(),
        );
    }
    let q_nondegenerate = p.q.is_nondegenerate();
    let restriction_signature = restriction_signature(p)?;
    let restriction_indefinite = restriction_signature.is_indefinite();
    let pencil_witness = pencil_rationality(p, mode)?;
    let pencil_irrational = pencil_witness.is_none();
    let evidence_only = matches!(mode, PencilMode::Heuristic { .. });
    if evidence_only {
        warnings.push("condition 2 decided heuristically: evidence, not proof".to_string());
    }
    let definite_interval = if q_nondegenerate { definite_pencil(p)? } else { None };
    let conjecture_indefinite_pencil = q_nondegenerate && definite_interval.is_none();

    let mut common = Vec::new();
    if !dim_ok {
        common.push(FailReason::Dimension);
    }
    if !q_nondegenerate {
        common.push(FailReason::DegenerateQ);
    }
    let mut reasons_theorem = common.clone();
    if !restriction_indefinite {
        reasons_theorem.push(FailReason::RestrictionNotIndefinite);
    }
    let mut reasons_conjecture = common;
    if q_nondegenerate && !conjecture_indefinite_pencil {
        reasons_conjecture.push(FailReason::DefinitePencil);
    }
    if !pencil_irrational {
        reasons_theorem.push(FailReason::PencilRational);
        reasons_conjecture.push(FailReason::PencilRational);
    }
    let report = ConditionReport {
        dim: d,
        dim_ok,
        q_nondegenerate,
        restriction_signature,
        restriction_indefinite,
        pencil_irrational,
        pencil_witness,
        evidence_only,
        conjecture_indefinite_pencil,
        definite_interval,
        verdict: Verdict::TheoremApplies,
        warnings,
    };
    Ok(Checks { report, reasons_theorem, reasons_conjecture })
}

fn passing(evidence_only: bool) -> Verdict {
    if evidence_only {
        Verdict::LikelyApplies
    } else {
        Verdict::TheoremApplies
    }
}

/// Report on the density theorem's hypotheses.
pub fn check_theorem(p: &PairQL, mode: PencilMode) -> Result<ConditionReport> {
    let Checks { mut report, reasons_theorem, .. } = run_checks(p, mode)?;
    report.verdict = if reasons_theorem.is_empty() {
        passing(report.evidence_only)
    } else {
        Verdict::Fails(reasons_theorem)
    };
    Ok(report)
}

/// Report on the weaker hypotheses where condition 1 is replaced by "no
/// member of the pencil `Q + βL²` is definite".
pub fn check_conjecture(p: &PairQL, mode: PencilMode) -> Result<ConditionReport> {
    let Checks { mut report, reasons_theorem, reasons_conjecture } = run_checks(p, mode)?;
    report.verdict = if !reasons_conjecture.is_empty() {
        Verdict::Fails(reasons_conjecture)
    } else if reasons_theorem.is_empty() {
        passing(report.evidence_only)
    } else {
        Verdict::ConjectureOnly
    };
    Ok(report)
}
