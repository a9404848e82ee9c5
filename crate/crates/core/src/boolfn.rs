//! Boolean functions over a lattice and the monotone-closure algebra.
//!
//! Four representations share the [`BoolFn`] trait: dense truth tables,
//! monotone DNFs (an antichain of minimal elements), XORs of monotone DNFs,
//! and composed targets `F(g_1, …, g_d)`. Every analysis (minimal elements,
//! closure, strict decomposition) materializes a dense table and runs one
//! topological sweep.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::lattice::{Elem, Lattice, LatticeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolFnError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("representations live on different lattices")]
    LatticeMismatch,
    #[error("minimal elements {0} and {1} are comparable")]
    NotAntichain(Elem, Elem),
    #[error("expected {expected} values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("outer truth table has {found} entries but {inner} inner functions need {expected}")]
    OuterArity {
        inner: usize,
        expected: usize,
        found: usize,
    },
    #[error("strict decomposition did not terminate within {0} levels")]
    LevelCapExceeded(usize),
    #[error("chain is not strictly ascending at position {0}")]
    InvalidChain(usize),
}

/// Common interface of all function representations.
pub trait BoolFn {
    fn lattice(&self) -> &Arc<Lattice>;

    /// Value at `x`. `x` must belong to the lattice; `⊥` is never passed.
    fn eval(&self, x: Elem) -> bool;

    /// Full truth table over the lattice.
    fn to_dense(&self) -> DenseFunction {
        let lattice = self.lattice().clone();
        let mut values = FixedBitSet::with_capacity(lattice.len());
        for x in lattice.elements() {
            values.set(x.index(), self.eval(x));
        }
        DenseFunction { lattice, values }
    }
}

pub(crate) fn same_lattice(a: &Arc<Lattice>, b: &Arc<Lattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Truth table indexed by element id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseFunction {
    lattice: Arc<Lattice>,
    values: FixedBitSet,
}

impl DenseFunction {
    pub fn zero(lattice: Arc<Lattice>) -> Self {
        let values = FixedBitSet::with_capacity(lattice.len());
        Self { lattice, values }
    }

    pub fn from_fn(lattice: Arc<Lattice>, mut f: impl FnMut(Elem) -> bool) -> Self {
        let mut values = FixedBitSet::with_capacity(lattice.len());
        for x in lattice.elements() {
            values.set(x.index(), f(x));
        }
        Self { lattice, values }
    }

    pub fn from_bits(lattice: Arc<Lattice>, bits: &[bool]) -> Result<Self, BoolFnError> {
        if bits.len() != lattice.len() {
            return Err(BoolFnError::WrongLength {
                expected: lattice.len(),
                found: bits.len(),
            });
        }
        Ok(Self::from_fn(lattice, |x| bits[x.index()]))
    }

    pub fn values(&self) -> &FixedBitSet {
        &self.values
    }

    pub fn set(&mut self, x: Elem, v: bool) {
        self.values.set(x.index(), v);
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_clear()
    }

    pub fn ones(&self) -> impl Iterator<Item = Elem> + '_ {
        self.values.ones().map(|i| Elem(i as u32))
    }

    /// Pointwise XOR. Panics if the lattices differ in size.
    pub fn xor(&self, other: &DenseFunction) -> DenseFunction {
        assert_eq!(self.values.len(), other.values.len());
        let mut values = self.values.clone();
        values.symmetric_difference_with(&other.values);
        Self {
            lattice: self.lattice.clone(),
            values,
        }
    }

    /// `self ⇒ other` pointwise.
    pub fn implies(&self, other: &DenseFunction) -> bool {
        self.values.is_subset(&other.values)
    }

    /// One topological sweep computing the minimum monotone closure
    /// (`below[a]` = some `b <= a` has value 1) together with `Min(f)`.
    fn closure_sweep(&self) -> (DenseFunction, Vec<Elem>) {
        let l = &*self.lattice;
        let mut below = FixedBitSet::with_capacity(l.len());
        let mut mins = Vec::new();
        for a in l.topological() {
            let from_preds = l.preds(a).any(|p| below.contains(p.index()));
            let here = self.values.contains(a.index());
            if here && !from_preds {
                mins.push(a);
            }
            below.set(a.index(), here || from_preds);
        }
        mins.sort_unstable();
        let closure = DenseFunction {
            lattice: self.lattice.clone(),
            values: below,
        };
        (closure, mins)
    }
}

impl BoolFn for DenseFunction {
    fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    #[inline]
    fn eval(&self, x: Elem) -> bool {
        self.values.contains(x.index())
    }

    fn to_dense(&self) -> DenseFunction {
        self.clone()
    }
}

/// A monotone function stored as its set of minimal elements `Min(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneDnf {
    lattice: Arc<Lattice>,
    minimals: Vec<Elem>,
}

impl MonotoneDnf {
    /// Validates that `minimals` is an antichain; stores it sorted.
    pub fn new(lattice: Arc<Lattice>, minimals: Vec<Elem>) -> Result<Self, BoolFnError> {
        for &a in &minimals {
            lattice.check(a)?;
        }
        let mut minimals = minimals;
        minimals.sort_unstable();
        for (i, &a) in minimals.iter().enumerate() {
            for &b in &minimals[i + 1..] {
                if a == b || lattice.leq(a, b) || lattice.leq(b, a) {
                    return Err(BoolFnError::NotAntichain(a, b));
                }
            }
        }
        Ok(Self { lattice, minimals })
    }

    /// `∨_{a ∈ S} M_a`, reduced to `Min(S)`.
    pub fn from_elems(lattice: Arc<Lattice>, elems: &[Elem]) -> Result<Self, BoolFnError> {
        let minimals = lattice.try_min_antichain(elems)?;
        Ok(Self { lattice, minimals })
    }

    pub(crate) fn from_antichain_unchecked(lattice: Arc<Lattice>, minimals: Vec<Elem>) -> Self {
        Self { lattice, minimals }
    }

    pub fn zero(lattice: Arc<Lattice>) -> Self {
        Self {
            lattice,
            minimals: Vec::new(),
        }
    }

    /// The single monotone term `M_a`.
    pub fn term(lattice: Arc<Lattice>, a: Elem) -> Result<Self, BoolFnError> {
        lattice.check(a)?;
        Ok(Self {
            lattice,
            minimals: vec![a],
        })
    }

    pub fn minimals(&self) -> &[Elem] {
        &self.minimals
    }

    /// Number of minimal elements.
    pub fn size(&self) -> usize {
        self.minimals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.minimals.is_empty()
    }

    /// `self ⇒ other`: each minimal of `self` lies above a minimal of `other`.
    pub fn implies(&self, other: &MonotoneDnf) -> bool {
        self.minimals
            .iter()
            .all(|&a| other.minimals.iter().any(|&b| self.lattice.leq(b, a)))
    }
}

impl BoolFn for MonotoneDnf {
    fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    #[inline]
    fn eval(&self, x: Elem) -> bool {
        self.minimals.iter().any(|&m| self.lattice.leq(m, x))
    }

    fn to_dense(&self) -> DenseFunction {
        let l = &*self.lattice;
        let mut marks = FixedBitSet::with_capacity(l.len());
        for &m in &self.minimals {
            marks.insert(m.index());
        }
        let mut values = FixedBitSet::with_capacity(l.len());
        for a in l.topological() {
            let v = marks.contains(a.index()) || l.preds(a).any(|p| values.contains(p.index()));
            values.set(a.index(), v);
        }
        DenseFunction {
            lattice: self.lattice.clone(),
            values,
        }
    }
}

/// `F_1 ⊕ F_2 ⊕ … ⊕ F_k` of monotone DNFs. Empty is constant 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorHypothesis {
    lattice: Arc<Lattice>,
    levels: Vec<MonotoneDnf>,
}

impl XorHypothesis {
    pub fn new(lattice: Arc<Lattice>, levels: Vec<MonotoneDnf>) -> Result<Self, BoolFnError> {
        if levels.iter().any(|g| !same_lattice(&lattice, &g.lattice)) {
            return Err(BoolFnError::LatticeMismatch);
        }
        Ok(Self { lattice, levels })
    }

    pub fn zero(lattice: Arc<Lattice>) -> Self {
        Self {
            lattice,
            levels: Vec::new(),
        }
    }

    pub fn levels(&self) -> &[MonotoneDnf] {
        &self.levels
    }

    pub fn into_levels(self) -> Vec<MonotoneDnf> {
        self.levels
    }

    /// `Σ |Min(F_i)|`.
    pub fn size(&self) -> usize {
        self.levels.iter().map(MonotoneDnf::size).sum()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(MonotoneDnf::size).collect()
    }

    /// Drops trailing constant-0 levels.
    pub fn trimmed(&self) -> XorHypothesis {
        let mut levels = self.levels.clone();
        while levels.last().is_some_and(MonotoneDnf::is_zero) {
            levels.pop();
        }
        Self {
            lattice: self.lattice.clone(),
            levels,
        }
    }

    /// `F_{i+1} ⇒ F_i` and `Min(F_i) ∩ Min(F_{i+1}) = ∅` for every
    /// consecutive pair of nonzero levels; trailing zero levels are ignored.
    pub fn is_strict(&self) -> bool {
        let t = self.trimmed();
        t.levels.iter().all(|g| !g.is_zero())
            && t.levels.windows(2).all(|w| {
                w[1].implies(&w[0])
                    && !w[1]
                        .minimals
                        .iter()
                        .any(|m| w[0].minimals.binary_search(m).is_ok())
            })
    }
}

impl BoolFn for XorHypothesis {
    fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    fn eval(&self, x: Elem) -> bool {
        self.levels.iter().fold(false, |acc, g| acc ^ g.eval(x))
    }

    fn to_dense(&self) -> DenseFunction {
        let mut out = DenseFunction::zero(self.lattice.clone());
        for g in &self.levels {
            out.values.symmetric_difference_with(&g.to_dense().values);
        }
        out
    }
}

/// `F(g_1(x), …, g_d(x))` with `F` a `2^d`-entry truth table indexed by the
/// packed inner values (`g_1` least significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposedTarget {
    lattice: Arc<Lattice>,
    outer: Vec<bool>,
    inner: Vec<MonotoneDnf>,
}

impl ComposedTarget {
    pub fn new(
        lattice: Arc<Lattice>,
        outer: Vec<bool>,
        inner: Vec<MonotoneDnf>,
    ) -> Result<Self, BoolFnError> {
        if inner.len() >= 32 || outer.len() != 1usize << inner.len() {
            return Err(BoolFnError::OuterArity {
                inner: inner.len(),
                expected: 1usize << inner.len().min(31),
                found: outer.len(),
            });
        }
        if inner.iter().any(|g| !same_lattice(&lattice, &g.lattice)) {
            return Err(BoolFnError::LatticeMismatch);
        }
        Ok(Self {
            lattice,
            outer,
            inner,
        })
    }

    /// Parity of the inner functions.
    pub fn parity(lattice: Arc<Lattice>, inner: Vec<MonotoneDnf>) -> Result<Self, BoolFnError> {
        let d = inner.len();
        let outer = (0..1usize << d.min(31))
            .map(|i| i.count_ones() % 2 == 1)
            .collect();
        Self::new(lattice, outer, inner)
    }

    pub fn arity(&self) -> usize {
        self.inner.len()
    }

    pub fn outer(&self) -> &[bool] {
        &self.outer
    }

    pub fn inner(&self) -> &[MonotoneDnf] {
        &self.inner
    }

    /// `Σ size(g_i)`.
    pub fn size(&self) -> usize {
        self.inner.iter().map(MonotoneDnf::size).sum()
    }

    pub fn inner_sizes(&self) -> Vec<usize> {
        self.inner.iter().map(MonotoneDnf::size).collect()
    }

    /// Whether `F(0^d) = 0`.
    pub fn zero_at_origin(&self) -> bool {
        !self.outer[0]
    }
}

impl BoolFn for ComposedTarget {
    fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    fn eval(&self, x: Elem) -> bool {
        let idx = self
            .inner
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, g)| acc | (usize::from(g.eval(x)) << i));
        self.outer[idx]
    }

    fn to_dense(&self) -> DenseFunction {
        let inner: Vec<DenseFunction> = self.inner.iter().map(BoolFn::to_dense).collect();
        DenseFunction::from_fn(self.lattice.clone(), |x| {
            let idx = inner
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, g)| acc | (usize::from(g.eval(x)) << i));
            self.outer[idx]
        })
    }
}

/// Any of the four representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Function {
    Dense(DenseFunction),
    Mdnf(MonotoneDnf),
    Xor(XorHypothesis),
    Composed(ComposedTarget),
}

impl BoolFn for Function {
    fn lattice(&self) -> &Arc<Lattice> {
        match self {
            Function::Dense(f) => f.lattice(),
            Function::Mdnf(f) => f.lattice(),
            Function::Xor(f) => f.lattice(),
            Function::Composed(f) => f.lattice(),
        }
    }

    fn eval(&self, x: Elem) -> bool {
        match self {
            Function::Dense(f) => f.eval(x),
            Function::Mdnf(f) => f.eval(x),
            Function::Xor(f) => f.eval(x),
            Function::Composed(f) => f.eval(x),
        }
    }

    fn to_dense(&self) -> DenseFunction {
        match self {
            Function::Dense(f) => f.to_dense(),
            Function::Mdnf(f) => f.to_dense(),
            Function::Xor(f) => f.to_dense(),
            Function::Composed(f) => f.to_dense(),
        }
    }
}

/// Global minimal elements `Min(f)`: `f(a) = 1` and `f = 0` strictly below.
pub fn global_min(f: &impl BoolFn) -> Vec<Elem> {
    f.to_dense().closure_sweep().1
}

/// Local minimal elements `min(f)`: `f(a) = 1` and `f = 0` on every
/// immediate predecessor (the implicit `⊥` counts as 0).
pub fn local_min(f: &impl BoolFn) -> Vec<Elem> {
    let dense = f.to_dense();
    let l = dense.lattice.clone();
    dense
        .ones()
        .filter(|&a| !l.preds(a).any(|p| dense.eval(p)))
        .collect()
}

/// Minimum monotone closure `M(f)`, represented by `Min(M(f)) = Min(f)`.
pub fn monotone_closure(f: &impl BoolFn) -> MonotoneDnf {
    MonotoneDnf::from_antichain_unchecked(f.lattice().clone(), global_min(f))
}

/// Strict monotone representation: iterate `f_{i+1} = f_i ⊕ M(f_i)` from
/// `f_1 = f` until the closure vanishes, returning `[M(f_1), …, M(f_m)]`.
pub fn strict_decompose(f: &impl BoolFn, cap: usize) -> Result<XorHypothesis, BoolFnError> {
    let lattice = f.lattice().clone();
    let mut current = f.to_dense();
    let mut levels = Vec::new();
    loop {
        let (closure, mins) = current.closure_sweep();
        if mins.is_empty() {
            break;
        }
        if levels.len() == cap {
            return Err(BoolFnError::LevelCapExceeded(cap));
        }
        levels.push(MonotoneDnf::from_antichain_unchecked(lattice.clone(), mins));
        current = current.xor(&closure);
    }
    Ok(XorHypothesis { lattice, levels })
}

/// The least `d` for which `f` is `d`-monotone.
pub fn monotone_degree(f: &impl BoolFn) -> usize {
    let cap = f.lattice().len();
    strict_decompose(f, cap)
        .map(|h| h.levels.len())
        .expect("strict decomposition terminates within |X| levels")
}

/// `⋃_{∅≠I⊆[d]} ∨_{i∈I} sets[i]`: every join taking one element from each
/// of a nonempty selection of the sets, in canonical order.
pub fn join_products(lattice: &Lattice, sets: &[&[Elem]]) -> Vec<Elem> {
    let mut acc: Vec<Option<Elem>> = vec![None];
    for set in sets {
        let mut next = acc.clone();
        for &partial in &acc {
            for &u in *set {
                next.push(Some(match partial {
                    Some(p) => lattice.join(p, u),
                    None => u,
                }));
            }
        }
        next.sort_unstable();
        next.dedup();
        acc = next;
    }
    acc.into_iter().flatten().collect()
}

/// Number of value changes along `⊥ < x_1 < … < x_t`, with `f(⊥) = 0`.
pub fn chain_alternations(f: &impl BoolFn, chain: &[Elem]) -> Result<usize, BoolFnError> {
    let l = f.lattice();
    for &x in chain {
        l.check(x)?;
    }
    for (i, w) in chain.windows(2).enumerate() {
        if !l.lt(w[0], w[1]) {
            return Err(BoolFnError::InvalidChain(i + 1));
        }
    }
    let mut prev = false;
    let mut changes = 0;
    for &x in chain {
        let v = f.eval(x);
        if v != prev {
            changes += 1;
        }
        prev = v;
    }
    Ok(changes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(n: u32) -> Arc<Lattice> {
        Arc::new(Lattice::cube(n).unwrap())
    }

    fn el(l: &Lattice, s: &str) -> Elem {
        l.parse_elem(s).unwrap()
    }

    fn mdnf(l: &Arc<Lattice>, words: &[&str]) -> MonotoneDnf {
        MonotoneDnf::new(l.clone(), words.iter().map(|w| el(l, w)).collect()).unwrap()
    }

    fn names(l: &Lattice, xs: &[Elem]) -> Vec<String> {
        xs.iter().map(|&x| l.name(x)).collect()
    }

    fn xor2(l: &Arc<Lattice>) -> DenseFunction {
        DenseFunction::from_fn(l.clone(), |x| x.0.count_ones() == 1)
    }

    #[test]
    fn eval_examples() {
        let l = cube(2);
        assert!(mdnf(&l, &["01", "10"]).eval(el(&l, "11")));
        let t =
            ComposedTarget::parity(l.clone(), vec![mdnf(&l, &["10"]), mdnf(&l, &["01"])]).unwrap();
        assert!(!t.eval(el(&l, "11")));
        assert!(t.eval(el(&l, "10")));
        let h = XorHypothesis::zero(l.clone());
        assert!(l.elements().all(|x| !h.eval(x)));
    }

    #[test]
    fn rejects_non_antichain() {
        let l = cube(2);
        let err = MonotoneDnf::new(l.clone(), vec![el(&l, "01"), el(&l, "11")]).unwrap_err();
        assert_eq!(err, BoolFnError::NotAntichain(Elem(1), Elem(3)));
    }

    #[test]
    fn composed_outer_arity_checked() {
        let l = cube(2);
        let err = ComposedTarget::new(l.clone(), vec![false, true], vec![mdnf(&l, &["01"]); 2]);
        assert!(matches!(err, Err(BoolFnError::OuterArity { .. })));
    }

    #[test]
    fn lattice_mismatch() {
        let g = mdnf(&cube(3), &["001"]);
        assert_eq!(
            XorHypothesis::new(cube(2), vec![g]).unwrap_err(),
            BoolFnError::LatticeMismatch
        );
    }

    #[test]
    fn minimal_elements_of_xor() {
        let l = cube(2);
        let f = xor2(&l);
        assert_eq!(names(&l, &global_min(&f)), ["01", "10"]);
        assert_eq!(names(&l, &local_min(&f)), ["01", "10"]);
        assert!(global_min(&DenseFunction::zero(l.clone())).is_empty());
    }

    #[test]
    fn local_min_at_bottom_and_top() {
        let l = cube(2);
        let f = DenseFunction::from_fn(l.clone(), |x| x.0 == 0 || x.0 == 3);
        assert_eq!(names(&l, &local_min(&f)), ["00", "11"]);
        assert_eq!(names(&l, &global_min(&f)), ["00"]);
    }

    #[test]
    fn monotone_minimals_round_trip() {
        let l = cube(3);
        let g = mdnf(&l, &["011", "100"]);
        assert_eq!(global_min(&g), g.minimals());
        assert_eq!(local_min(&g), g.minimals());
        assert_eq!(monotone_closure(&g), g);
    }

    #[test]
    fn closure_of_xor_is_or() {
        let l = cube(2);
        assert_eq!(monotone_closure(&xor2(&l)), mdnf(&l, &["01", "10"]));
        assert!(monotone_closure(&DenseFunction::zero(l)).is_zero());
    }

    #[test]
    fn decompose_xor2() {
        let l = cube(2);
        let h = strict_decompose(&xor2(&l), 4).unwrap();
        assert_eq!(h.levels(), &[mdnf(&l, &["01", "10"]), mdnf(&l, &["11"])]);
        assert!(h.is_strict());
        assert_eq!(monotone_degree(&xor2(&l)), 2);
    }

    #[test]
    fn decompose_trivial_cases() {
        let l = cube(3);
        let term = MonotoneDnf::term(l.clone(), el(&l, "101")).unwrap();
        assert_eq!(
            strict_decompose(&term, 3).unwrap().levels(),
            std::slice::from_ref(&term)
        );
        assert_eq!(monotone_degree(&term), 1);
        let zero = DenseFunction::zero(l);
        assert!(strict_decompose(&zero, 1).unwrap().levels().is_empty());
        assert_eq!(monotone_degree(&zero), 0);
    }

    #[test]
    fn decompose_cap() {
        let l = cube(2);
        assert_eq!(
            strict_decompose(&xor2(&l), 1).unwrap_err(),
            BoolFnError::LevelCapExceeded(1)
        );
    }

    #[test]
    fn chain_alternation_examples() {
        let l = cube(2);
        let chain = [el(&l, "00"), el(&l, "01"), el(&l, "11")];
        assert_eq!(chain_alternations(&xor2(&l), &chain).unwrap(), 2);
        let one = DenseFunction::from_fn(l.clone(), |_| true);
        assert_eq!(chain_alternations(&one, &chain).unwrap(), 1);
        assert_eq!(
            chain_alternations(&DenseFunction::zero(l.clone()), &chain).unwrap(),
            0
        );
        let bad = [el(&l, "01"), el(&l, "10")];
        assert_eq!(
            chain_alternations(&one, &bad).unwrap_err(),
            BoolFnError::InvalidChain(1)
        );
    }

    #[test]
    fn join_products_of_two_singletons() {
        let l = cube(2);
        let a = [el(&l, "01")];
        let b = [el(&l, "10")];
        assert_eq!(names(&l, &join_products(&l, &[&a, &b])), ["01", "10", "11"]);
        assert!(join_products(&l, &[]).is_empty());
    }

    #[test]
    fn strictness_detects_shared_minterms() {
        let l = cube(2);
        let h = XorHypothesis::new(l.clone(), vec![mdnf(&l, &["01", "10"]), mdnf(&l, &["01"])])
            .unwrap();
        assert!(!h.is_strict());
        let h = XorHypothesis::new(l.clone(), vec![mdnf(&l, &["01"]), mdnf(&l, &["10"])]).unwrap();
        assert!(!h.is_strict());
    }
}
