//! Search over primitive integer vectors: approximation of targets by
//! `(Q(x), L(x))`, grid density scans and exact gap certificates.
//!
//! Work is split into slabs by the first nonzero coordinate and spread over
//! threads. Every per-slab result is merged with a total order, so the
//! outcome does not depend on the shard count.

mod engine;
mod enumerate;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::FieldScalar;
use crate::forms::PairQL;
use engine::{preferred, Engine, Values};
pub use enumerate::{enumerate_primitive, PrimitiveVectors};
use enumerate::{slabs, Slab};

/// Best approximation of a target found in a box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_x: Vec<i64>,
    pub value: (f64, f64),
    /// `max(|Q(x) − a|, |L(x) − b|)`.
    pub error: f64,
    /// Number of values `(Q(x), L(x))` compared, counting both signs.
    pub evaluations: u64,
    pub bound_used: i64,
}

/// Per-cell best approximations over a grid of targets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub rect: (f64, f64, f64, f64),
    pub grid: (usize, usize),
    pub cell_a: Vec<f64>,
    pub cell_b: Vec<f64>,
    /// `errors[i][j]` belongs to the target `(cell_a[i], cell_b[j])`.
    pub errors: Vec<Vec<f64>>,
    pub best_x: Vec<Vec<Vec<i64>>>,
    pub eps: f64,
    pub coverage: f64,
    pub bound: i64,
    pub evaluations: u64,
}

impl ScanReport {
    /// Fraction of cells whose best error is at most `eps`.
    pub fn coverage_at(&self, eps: f64) -> f64 {
        let hit = self.errors.iter().flatten().filter(|&&e| e <= eps).count();
        hit as f64 / (self.grid.0 * self.grid.1) as f64
    }
}

/// Exact minimum of `max(|Q(x)|, |L(x)|)` over the primitive vectors in a box.
#[derive(Debug, Clone)]
pub struct GapCertificate {
    pub bound: i64,
    pub min_distance: FieldScalar,
    pub argmin: Vec<i64>,
    pub q_value: FieldScalar,
    pub l_value: FieldScalar,
    pub evaluations: u64,
}

impl GapCertificate {
    pub fn min_distance_f64(&self) -> f64 {
        self.min_distance.to_f64()
    }
}

/// Number of worker threads the machine offers.
pub fn available_shards() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn check_bound(bound: i64) -> Result<()> {
    if bound < 1 {
        return Err(Error::PreconditionViolated(format!("bound must be >= 1, got {bound}")));
    }
    Ok(())
}

/// Runs `work` over all slabs, slab `u` on shard `u mod shards`, and returns
/// the per-shard states.
fn run_sharded<S: Send>(
    slab_list: &[Slab],
    shards: usize,
    init: impl Fn() -> S + Sync,
    work: impl Fn(&mut S, Slab) + Sync,
) -> Vec<S> {
    let shards = shards.clamp(1, slab_list.len().max(1));
    if shards == 1 {
        let mut s = init();
        slab_list.iter().for_each(|&sl| work(&mut s, sl));
        return vec![s];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|k| {
                let (init, work) = (&init, &work);
                scope.spawn(move || {
                    let mut s = init();
                    slab_list.iter().skip(k).step_by(shards).for_each(|&sl| work(&mut s, sl));
                    s
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search shard panicked")).collect()
    })
}

#[derive(Clone)]
struct Best {
    error: f64,
    x: Vec<i64>,
    value: (f64, f64),
}

impl Best {
    fn empty(d: usize) -> Best {
        Best { error: f64::INFINITY, x: vec![0; d], value: (f64::NAN, f64::NAN) }
    }

    /// Offers the signed vector `sign·x` with value `value`.
    fn offer(&mut self, error: f64, x: &[i64], sign: i64, value: (f64, f64)) {
        if error > self.error {
            return;
        }
        if error == self.error {
            let signed: Vec<i64> = x.iter().map(|v| v * sign).collect();
            if !preferred(&signed, &self.x) {
                return;
            }
            self.x = signed;
        } else {
            self.x.iter_mut().zip(x).for_each(|(s, v)| *s = v * sign);
        }
        self.error = error;
        self.value = value;
    }

    fn merge(&mut self, other: &Best) {
        if other.error < self.error || (other.error == self.error && preferred(&other.x, &self.x)) {
            *self = other.clone();
        }
    }
}

/// Best `x` (either sign of each representative) for the target `(a, b)`
/// in the max metric. Ties go to smaller `‖x‖∞`, then smaller `‖x‖₁`, then
/// the lexicographically larger vector.
pub fn approximate(p: &PairQL, target: (f64, f64), bound: i64, shards: usize) -> Result<SearchResult> {
    check_bound(bound)?;
    let eng = Engine::new(p, bound)?;
    let d = eng.dim();
    let (a, b) = target;
    let states = run_sharded(
        &slabs(d, bound),
        shards,
        || (Best::empty(d), 0u64),
        |(best, count), slab| {
            eng.run_slab(slab, bound, |x, v| {
                *count += 2;
                let eq = (v.qf - a).abs();
                best.offer(eq.max((v.lf - b).abs()), x, 1, (v.qf, v.lf));
                best.offer(eq.max((-v.lf - b).abs()), x, -1, (v.qf, -v.lf));
            })
        },
    );
    let mut best = Best::empty(d);
    let mut evaluations = 0;
    for (s, c) in &states {
        best.merge(s);
        evaluations += c;
    }
    Ok(SearchResult { best_x: best.x, value: best.value, error: best.error, evaluations, bound_used: bound })
}

fn grid_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![(lo + hi) / 2.0];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

struct ScanState {
    cells: Vec<Best>,
    /// Largest per-cell error; values farther than this from every cell
    /// cannot improve anything.
    reach: f64,
    count: u64,
}

/// Per-cell best errors for targets on a grid over `rect = (a_min, a_max,
/// b_min, b_max)`, from one enumeration pass.
///
/// Grid points include both ends of each side; a side with one point uses
/// its midpoint.
pub fn density_scan(
    p: &PairQL,
    rect: (f64, f64, f64, f64),
    grid: (usize, usize),
    bound: i64,
    eps: f64,
    shards: usize,
) -> Result<ScanReport> {
    check_bound(bound)?;
    let (na, nb) = grid;
    if na == 0 || nb == 0 {
        return Err(Error::PreconditionViolated("grid dimensions must be >= 1".into()));
    }
    let (a_min, a_max, b_min, b_max) = rect;
    if !(a_min <= a_max && b_min <= b_max) {
        return Err(Error::PreconditionViolated("empty rectangle".into()));
    }
    let eng = Engine::new(p, bound)?;
    let d = eng.dim();
    let ca = grid_points(a_min, a_max, na);
    let cb = grid_points(b_min, b_max, nb);
    let step = |c: &[f64]| if c.len() > 1 { c[1] - c[0] } else { f64::INFINITY };
    let (sa, sb) = (step(&ca), step(&cb));
    // candidate index window around a value, widened by one cell for rounding
    let window = |v: f64, reach: f64, c: &[f64], s: f64| -> (usize, usize) {
        if c.len() == 1 || !reach.is_finite() || !(s > 0.0) {
            return (0, c.len() - 1);
        }
        let lo = ((v - reach - c[0]) / s).floor() - 1.0;
        let hi = ((v + reach - c[0]) / s).ceil() + 1.0;
        let top = (c.len() - 1) as f64;
        if hi < 0.0 || lo > top {
            return (1, 0);
        }
        (lo.max(0.0) as usize, hi.min(top) as usize)
    };

    let states = run_sharded(
        &slabs(d, bound),
        shards,
        || ScanState { cells: vec![Best::empty(d); na * nb], reach: f64::INFINITY, count: 0 },
        |st, slab| {
            eng.run_slab(slab, bound, |x, v| {
                st.count += 2;
                let (ilo, ihi) = window(v.qf, st.reach, &ca, sa);
                if ilo > ihi {
                    return;
                }
                let mut improved = false;
                for (sign, l) in [(1, v.lf), (-1, -v.lf)] {
                    let (jlo, jhi) = window(l, st.reach, &cb, sb);
                    for i in ilo..=ihi {
                        let ea = (v.qf - ca[i]).abs();
                        for j in jlo..=jhi {
                            let e = ea.max((l - cb[j]).abs());
                            let cell = &mut st.cells[i * nb + j];
                            if e <= cell.error {
                                cell.offer(e, x, sign, (v.qf, l));
                                improved = true;
                            }
                        }
                    }
                }
                if improved {
                    st.reach = st.cells.iter().map(|c| c.error).fold(0.0, f64::max);
                }
            })
        },
    );
    let mut cells = vec![Best::empty(d); na * nb];
    let mut evaluations = 0;
    for st in &states {
        cells.iter_mut().zip(&st.cells).for_each(|(c, o)| c.merge(o));
        evaluations += st.count;
    }
    let errors: Vec<Vec<f64>> = (0..na).map(|i| (0..nb).map(|j| cells[i * nb + j].error).collect()).collect();
    let best_x = (0..na).map(|i| (0..nb).map(|j| cells[i * nb + j].x.clone()).collect()).collect();
    let mut report = ScanReport {
        rect,
        grid,
        cell_a: ca,
        cell_b: cb,
        errors,
        best_x,
        eps,
        coverage: 0.0,
        bound,
        evaluations,
    };
    report.coverage = report.coverage_at(eps);
    Ok(report)
}

struct GapState {
    best: Option<(FieldScalar, f64, Vec<i64>, FieldScalar, FieldScalar)>,
    count: u64,
}

fn gap_better(val: &FieldScalar, x: &[i64], cur: &(FieldScalar, f64, Vec<i64>, FieldScalar, FieldScalar)) -> bool {
    match val.exact_cmp(&cur.0) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => preferred(x, &cur.2),
        std::cmp::Ordering::Greater => false,
    }
}

/// Relative slack covering the rounding error of the float evaluation.
const FLOAT_SLACK: f64 = 1e-9;

/// Exact minimum of `max(|Q(x)|, |L(x)|)` over primitive `x` with
/// `‖x‖∞ ≤ bound`.
///
/// Doubles only discard vectors that are provably worse than the current
/// best; every survivor is compared in exact arithmetic.
pub fn gap_certificate(p: &PairQL, bound: i64, shards: usize) -> Result<GapCertificate> {
    check_bound(bound)?;
    let eng = Engine::new(p, bound)?;
    let d = eng.dim();
    let visit = |st: &mut GapState, x: &[i64], v: &Values| {
        st.count += 1;
        let approx = v.qf.abs().max(v.lf.abs());
        let slack = FLOAT_SLACK * eng.magnitude(v);
        if let Some(cur) = &st.best {
            if approx - slack > cur.1 {
                return;
            }
        }
        let (q, l) = eng.exact(v);
        let (qa, la) = (q.abs(), l.abs());
        let val = if qa.exact_cmp(&la).is_ge() { qa } else { la };
        if st.best.as_ref().map_or(true, |cur| gap_better(&val, x, cur)) {
            // upper bound for later filtering, rounded outward
            let up = val.to_f64() + FLOAT_SLACK * (val.to_f64().abs() + eng.magnitude(v));
            st.best = Some((val, up, x.to_vec(), q, l));
        }
    };
    let states = run_sharded(
        &slabs(d, bound),
        shards,
        || GapState { best: None, count: 0 },
        |st, slab| eng.run_slab(slab, bound, |x, v| visit(st, x, v)),
    );
    let mut best: Option<(FieldScalar, f64, Vec<i64>, FieldScalar, FieldScalar)> = None;
    let mut evaluations = 0;
    for st in states {
        evaluations += st.count;
        if let Some(cand) = st.best {
            if best.as_ref().map_or(true, |cur| gap_better(&cand.0, &cand.2, cur)) {
                best = Some(cand);
            }
        }
    }
    let (min_distance, _, argmin, q_value, l_value) = best.expect("the box contains e1");
    Ok(GapCertificate { bound, min_distance, argmin, q_value, l_value, evaluations })
}
