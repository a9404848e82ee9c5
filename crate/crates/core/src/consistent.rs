//! Building a `d`-level XOR-of-monotone hypothesis that agrees with a
//! labeled sample.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::boolfn::{BoolFn, MonotoneDnf, XorHypothesis};
use crate::lattice::{Elem, Lattice, LatticeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConsistentError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("point {0} is labeled both 0 and 1")]
    OverlappingLabels(Elem),
    #[error("no {degree}-monotone function fits the sample; point {point} stays mislabeled")]
    Inconsistent { degree: usize, point: Elem },
}

/// Points labeled 0 (`negatives`) and 1 (`positives`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledSample {
    pub negatives: BTreeSet<Elem>,
    pub positives: BTreeSet<Elem>,
}

impl LabeledSample {
    pub fn new(
        negatives: impl IntoIterator<Item = Elem>,
        positives: impl IntoIterator<Item = Elem>,
    ) -> Self {
        Self {
            negatives: negatives.into_iter().collect(),
            positives: positives.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, x: Elem, label: bool) {
        if label {
            self.positives.insert(x);
        } else {
            self.negatives.insert(x);
        }
    }

    pub fn label(&self, x: Elem) -> Option<bool> {
        if self.positives.contains(&x) {
            Some(true)
        } else if self.negatives.contains(&x) {
            Some(false)
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.negatives.len() + self.positives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = (Elem, bool)> + '_ {
        self.negatives
            .iter()
            .map(|&x| (x, false))
            .chain(self.positives.iter().map(|&x| (x, true)))
    }
}

/// Returns exactly `d` levels `[F_1, …, F_d]` whose XOR matches every label.
///
/// Each round takes `F_i = ∨_{a ∈ Min(S_1)} M_a`, collects the negatives
/// `W_0` that `F_i` leaves at 0, and swaps roles:
/// `S_1 ← S_0 \ W_0`, `S_0 ← S_1 ∪ W_0` (simultaneously).
pub fn consistent(
    lattice: &Arc<Lattice>,
    degree: usize,
    sample: &LabeledSample,
) -> Result<XorHypothesis, ConsistentError> {
    if degree == 0 {
        return Err(ConsistentError::ZeroDegree);
    }
    for (x, _) in sample.points() {
        lattice.check(x)?;
    }
    if let Some(&x) = sample.negatives.intersection(&sample.positives).next() {
        return Err(ConsistentError::OverlappingLabels(x));
    }

    let mut s0: Vec<Elem> = sample.negatives.iter().copied().collect();
    let mut s1: Vec<Elem> = sample.positives.iter().copied().collect();
    let mut levels = Vec::with_capacity(degree);
    for _ in 0..degree {
        let w1 = lattice.min_antichain(&s1);
        let level = MonotoneDnf::from_antichain_unchecked(lattice.clone(), w1);
        let (covered, w0): (Vec<Elem>, Vec<Elem>) = s0.iter().partition(|&&x| level.eval(x));
        let mut next_s0 = s1;
        next_s0.extend(w0);
        s1 = covered;
        s0 = next_s0;
        levels.push(level);
    }
    if let Some(&point) = s1.iter().min() {
        return Err(ConsistentError::Inconsistent { degree, point });
    }
    Ok(XorHypothesis::new(lattice.clone(), levels).expect("levels share the lattice"))
}
