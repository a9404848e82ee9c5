//! Exact learning from membership and equivalence queries.
//!
//! The learner keeps a labeled sample, proposes the hypothesis built by
//! [`consistent`], and walks each counterexample down immediate predecessors
//! until it reaches a local minimal element of `f ⊕ h`.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::boolfn::{BoolFn, DenseFunction, XorHypothesis};
use crate::bounds::product_bound;
use crate::consistent::{consistent, ConsistentError, LabeledSample};
use crate::lattice::{Elem, Lattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LearnError {
    #[error("target is not {degree}-monotone (point {point} cannot be fit); retry with degree {}", degree + 1)]
    DegreeTooSmall { degree: usize, point: Elem },
    #[error("{0} is not a counterexample: hypothesis and target agree there")]
    NotACounterexample(Elem),
    #[error("learner exceeded its iteration cap of {0}")]
    IterationCap(usize),
    #[error(transparent)]
    Consistent(ConsistentError),
}

/// Answers `f(x)` and counts every call.
pub struct MembershipOracle<'a> {
    answer: Box<dyn Fn(Elem) -> bool + 'a>,
    queries: usize,
}

impl<'a> MembershipOracle<'a> {
    pub fn new(answer: impl Fn(Elem) -> bool + 'a) -> Self {
        Self {
            answer: Box::new(answer),
            queries: 0,
        }
    }

    /// Backed by the target's truth table.
    pub fn for_target(target: &impl BoolFn) -> MembershipOracle<'static> {
        let dense = target.to_dense();
        MembershipOracle::new(move |x| dense.eval(x))
    }

    pub fn query(&mut self, x: Elem) -> bool {
        self.queries += 1;
        (self.answer)(x)
    }

    pub fn queries(&self) -> usize {
        self.queries
    }
}

/// Answers `None` (YES) or a point where the hypothesis is wrong.
pub trait EquivalenceOracle {
    fn query(&mut self, h: &XorHypothesis) -> Option<Elem>;
    fn queries(&self) -> usize;
}

/// Compares against the whole truth table and returns the first
/// disagreement in canonical element order.
pub struct ExhaustiveEq {
    target: DenseFunction,
    queries: usize,
}

impl ExhaustiveEq {
    pub fn new(target: &impl BoolFn) -> Self {
        Self {
            target: target.to_dense(),
            queries: 0,
        }
    }
}

impl EquivalenceOracle for ExhaustiveEq {
    fn query(&mut self, h: &XorHypothesis) -> Option<Elem> {
        self.queries += 1;
        let diff = h.to_dense().xor(&self.target);
        let first = diff.ones().next();
        first
    }

    fn queries(&self) -> usize {
        self.queries
    }
}

/// Probes `probes` uniformly random points per query. May answer YES
/// wrongly; meant for lattices too large to sweep.
pub struct SamplingEq<'a> {
    target: &'a dyn BoolFn,
    probes: usize,
    rng: ChaCha8Rng,
    queries: usize,
}

impl<'a> SamplingEq<'a> {
    pub fn new(target: &'a dyn BoolFn, probes: usize, seed: u64) -> Self {
        Self {
            target,
            probes,
            rng: ChaCha8Rng::seed_from_u64(seed),
            queries: 0,
        }
    }
}

impl EquivalenceOracle for SamplingEq<'_> {
    fn query(&mut self, h: &XorHypothesis) -> Option<Elem> {
        self.queries += 1;
        let len = self.target.lattice().len() as u32;
        (0..self.probes)
            .map(|_| Elem(self.rng.gen_range(0..len)))
            .find(|&x| h.eval(x) != self.target.eval(x))
    }

    fn queries(&self) -> usize {
        self.queries
    }
}

/// Result of one counterexample descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Descent {
    /// A local minimal element of `f ⊕ h`.
    pub point: Elem,
    /// Number of moves to a predecessor.
    pub steps: usize,
    /// Predecessors inspected, counting repeats that the cache answered.
    pub inspections: usize,
    /// Membership queries actually sent to the oracle.
    pub oracle_calls: usize,
}

/// Walks from counterexample `a` to the first (canonical order) immediate
/// predecessor where `h` and `f` disagree, until none does.
///
/// `known` memoizes target values for the run. If `f(a)` is not known it is
/// asked once.
pub fn descend_to_local_min(
    lattice: &Lattice,
    a: Elem,
    h: &XorHypothesis,
    mq: &mut MembershipOracle<'_>,
    known: &mut HashMap<Elem, bool>,
) -> Result<Descent, LearnError> {
    let calls_before = mq.queries();
    let mut value =
        |x: Elem, mq: &mut MembershipOracle<'_>| *known.entry(x).or_insert_with(|| mq.query(x));
    if value(a, mq) == h.eval(a) {
        return Err(LearnError::NotACounterexample(a));
    }
    let mut point = a;
    let mut steps = 0;
    let mut inspections = 0;
    'descend: loop {
        for b in lattice.preds(point) {
            inspections += 1;
            if value(b, mq) != h.eval(b) {
                point = b;
                steps += 1;
                continue 'descend;
            }
        }
        break;
    }
    Ok(Descent {
        point,
        steps,
        inspections,
        oracle_calls: mq.queries() - calls_before,
    })
}

/// Query accounting for one run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct QueryStats {
    /// Equivalence queries including the final YES.
    pub eq_used: usize,
    pub counterexamples: usize,
    /// Membership queries sent to the oracle.
    pub mq_used: usize,
    /// Predecessor inspections over all descents.
    pub mq_inspections: usize,
    pub max_descent_inspections: usize,
    /// `∏ (size(g_i) + 1) − 1`, bounding the counterexamples.
    pub eq_bound: Option<u128>,
    /// `σ(X) · eq_bound`.
    pub mq_bound: Option<u128>,
}

impl QueryStats {
    /// Attaches the bounds for a target `F(g_1, …, g_d)` with the given
    /// `size(g_i)` on a lattice with maximal predecessor sum `sigma`.
    pub fn with_bounds(mut self, inner_sizes: &[usize], sigma: u64) -> Self {
        let eq = product_bound(inner_sizes);
        self.eq_bound = Some(eq);
        self.mq_bound = Some(eq.saturating_mul(sigma as u128));
        self
    }

    /// Both query counts respect the attached bounds (true when absent).
    pub fn within_bounds(&self) -> bool {
        self.eq_bound
            .is_none_or(|b| self.counterexamples as u128 <= b)
            && self.mq_bound.is_none_or(|b| self.mq_used as u128 <= b)
    }
}

/// One counterexample handled by the learner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub counterexample: Elem,
    pub point: Elem,
    pub label: bool,
    pub descent_steps: usize,
    pub inspections: usize,
}

#[derive(Debug, Clone)]
pub struct LearnOutcome {
    pub hypothesis: XorHypothesis,
    pub stats: QueryStats,
    pub sample: LabeledSample,
    pub trace: Vec<TraceEntry>,
    /// Time spent rebuilding hypotheses.
    pub rebuild_time: Duration,
}

/// Learns a target of monotonicity degree at most `degree`.
pub fn learn<E: EquivalenceOracle + ?Sized>(
    lattice: &Arc<Lattice>,
    degree: usize,
    mq: &mut MembershipOracle<'_>,
    eq: &mut E,
) -> Result<LearnOutcome, LearnError> {
    if degree == 0 {
        return Err(LearnError::Consistent(ConsistentError::ZeroDegree));
    }
    let cap = lattice.len() + 1;
    let mq_start = mq.queries();
    let eq_start = eq.queries();
    let mut known: HashMap<Elem, bool> = HashMap::new();
    let mut sample = LabeledSample::default();
    let mut hypothesis = XorHypothesis::zero(lattice.clone());
    let mut stats = QueryStats::default();
    let mut trace = Vec::new();
    let mut rebuild_time = Duration::ZERO;

    while let Some(a) = eq.query(&hypothesis) {
        stats.counterexamples += 1;
        if stats.counterexamples > cap {
            return Err(LearnError::IterationCap(cap));
        }
        known.insert(a, !hypothesis.eval(a));
        let descent = descend_to_local_min(lattice, a, &hypothesis, mq, &mut known)?;
        let label = known[&descent.point];
        stats.mq_inspections += descent.inspections;
        stats.max_descent_inspections = stats.max_descent_inspections.max(descent.inspections);
        trace.push(TraceEntry {
            counterexample: a,
            point: descent.point,
            label,
            descent_steps: descent.steps,
            inspections: descent.inspections,
        });
        sample.insert(descent.point, label);

        let started = Instant::now();
        hypothesis = consistent(lattice, degree, &sample).map_err(|e| match e {
            ConsistentError::Inconsistent { degree, point } => {
                LearnError::DegreeTooSmall { degree, point }
            }
            other => LearnError::Consistent(other),
        })?;
        rebuild_time += started.elapsed();
    }

    stats.eq_used = eq.queries() - eq_start;
    stats.mq_used = mq.queries() - mq_start;
    Ok(LearnOutcome {
        hypothesis,
        stats,
        sample,
        trace,
        rebuild_time,
    })
}
