//! Finite lattices: the Boolean cube `{0,1}^n` and explicit lattices given by
//! a covering relation.
//!
//! The artificial bottom `⊥` that sits below every element is never stored.
//! Elements without in-lattice predecessors simply have an empty predecessor
//! list, and every Boolean function is taken to be `0` on `⊥`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest cube dimension the library will enumerate.
pub const MAX_CUBE_DIM: u32 = 30;

/// An element of a [`Lattice`].
///
/// For the cube this is the `n`-bit word itself; for explicit lattices it is
/// the declaration index. The derived `Ord` is the canonical tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("element {0} is not in the lattice")]
    InvalidElement(Elem),
    #[error("unknown element name `{0}`")]
    UnknownName(String),
    #[error("cube dimension {0} exceeds the supported maximum {MAX_CUBE_DIM}")]
    DimensionTooLarge(u32),
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("element `{0}` declared twice")]
    DuplicateElement(String),
    #[error("covering relation has a cycle through `{0}`")]
    Cycle(String),
    #[error("multiple maximal elements: `{0}` and `{1}` have no common upper bound")]
    MultipleMaximal(String, String),
    #[error("`{0}` and `{1}` have no upper bound")]
    NoJoin(String, String),
    #[error("`{0}` and `{1}` have {2} minimal upper bounds, so no unique join")]
    AmbiguousJoin(String, String, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A validated finite lattice. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Cube { n: u32 },
    Explicit(Box<Explicit>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Explicit {
    names: Vec<String>,
    by_name: HashMap<String, u32>,
    /// Immediate predecessors, canonical order.
    preds: Vec<Vec<Elem>>,
    /// `up[a]` holds every `b` with `a <= b`.
    up: Vec<FixedBitSet>,
    topo: Vec<Elem>,
    /// Row-major `k x k` join table.
    join: Vec<u32>,
    top: Elem,
}

impl Lattice {
    /// The Boolean cube `{0,1}^n` ordered coordinatewise.
    pub fn cube(n: u32) -> Result<Self, LatticeError> {
        if n > MAX_CUBE_DIM {
            return Err(LatticeError::DimensionTooLarge(n));
        }
        Ok(Self {
            kind: Kind::Cube { n },
        })
    }

    /// Builds and validates an explicit lattice from element names (in
    /// declaration order) and `(lower, upper)` covering pairs.
    ///
    /// Redundant pairs implied by transitivity are accepted and dropped from
    /// the immediate-predecessor relation.
    pub fn explicit<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
    ) -> Result<Self, LatticeError> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(LatticeError::Empty);
        }
        let mut by_name = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if by_name.insert(name.clone(), i as u32).is_some() {
                return Err(LatticeError::DuplicateElement(name.clone()));
            }
        }
        let lookup = |s: &str| {
            by_name
                .get(s)
                .copied()
                .ok_or_else(|| LatticeError::UnknownName(s.to_string()))
        };
        let mut edges = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            let (lo, hi) = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
            if lo == hi {
                return Err(LatticeError::Cycle(names[lo as usize].clone()));
            }
            edges.push((lo as usize, hi as usize));
        }
        validate_explicit(names, by_name, edges)
    }

    /// Parses the `lattice v1` text format.
    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        let parse_err = |line: usize, msg: String| LatticeError::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, "lattice v1")) => {}
            Some((no, other)) => {
                return Err(parse_err(
                    no,
                    format!("expected `lattice v1`, found `{other}`"),
                ))
            }
            None => return Err(parse_err(1, "missing `lattice v1` header".into())),
        }
        let mut elements: Vec<String> = Vec::new();
        let mut covers: Vec<(String, String)> = Vec::new();
        let mut declared: HashMap<String, usize> = HashMap::new();
        for (no, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["elem", name] => {
                    if !covers.is_empty() {
                        return Err(parse_err(no, "`elem` after `cover` lines".into()));
                    }
                    if declared.insert(name.to_string(), no).is_some() {
                        return Err(parse_err(no, format!("element `{name}` declared twice")));
                    }
                    elements.push(name.to_string());
                }
                ["cover", lo, hi] => {
                    for name in [lo, hi] {
                        if !declared.contains_key(*name) {
                            return Err(parse_err(no, format!("unknown element `{name}`")));
                        }
                    }
                    covers.push((lo.to_string(), hi.to_string()));
                }
                _ => return Err(parse_err(no, format!("unrecognized record `{line}`"))),
            }
        }
        Self::explicit(&elements, &covers)
    }

    /// Writes the `lattice v1` text format. Cubes are written out explicitly.
    pub fn to_text(&self) -> String {
        let mut out = String::from("lattice v1\n");
        for a in self.elements() {
            out.push_str(&format!("elem {}\n", self.name(a)));
        }
        for a in self.elements() {
            for b in self.preds(a) {
                out.push_str(&format!("cover {} {}\n", self.name(b), self.name(a)));
            }
        }
        out
    }

    /// The same order as an explicit lattice (element names are bit words
    /// for the cube).
    pub fn to_explicit(&self) -> Result<Self, LatticeError> {
        Self::parse(&self.to_text())
    }

    /// Cube dimension, or `None` for explicit lattices.
    pub fn cube_dim(&self) -> Option<u32> {
        match &self.kind {
            Kind::Cube { n } => Some(*n),
            Kind::Explicit(_) => None,
        }
    }

    /// Number of elements (excluding the implicit `⊥`).
    pub fn len(&self) -> usize {
        match &self.kind {
            Kind::Cube { n } => 1usize << n,
            Kind::Explicit(e) => e.names.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.index() < self.len()
    }

    pub fn check(&self, a: Elem) -> Result<Elem, LatticeError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(LatticeError::InvalidElement(a))
        }
    }

    pub fn top(&self) -> Elem {
        match &self.kind {
            Kind::Cube { n } => Elem(((1u64 << n) - 1) as u32),
            Kind::Explicit(e) => e.top,
        }
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> {
        (0..self.len() as u32).map(Elem)
    }

    /// Elements in an order where every element follows all elements below it.
    pub fn topological(&self) -> Topological<'_> {
        match &self.kind {
            Kind::Cube { n } => Topological::Cube(0..(1u32 << n)),
            Kind::Explicit(e) => Topological::Explicit(e.topo.iter()),
        }
    }

    /// `a <= b`. Both ids must belong to the lattice.
    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        match &self.kind {
            Kind::Cube { .. } => a.0 & !b.0 == 0,
            Kind::Explicit(e) => e.up[a.index()].contains(b.index()),
        }
    }

    pub fn try_leq(&self, a: Elem, b: Elem) -> Result<bool, LatticeError> {
        Ok(self.leq(self.check(a)?, self.check(b)?))
    }

    /// `a < b`.
    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    /// Least upper bound.
    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            Kind::Cube { .. } => Elem(a.0 | b.0),
            Kind::Explicit(e) => Elem(e.join[a.index() * e.names.len() + b.index()]),
        }
    }

    pub fn try_join(&self, a: Elem, b: Elem) -> Result<Elem, LatticeError> {
        Ok(self.join(self.check(a)?, self.check(b)?))
    }

    /// Immediate in-lattice predecessors of `a`, in canonical order.
    #[inline]
    pub fn preds(&self, a: Elem) -> Preds<'_> {
        match &self.kind {
            Kind::Cube { .. } => Preds::Cube {
                word: a.0,
                rest: a.0,
            },
            Kind::Explicit(e) => Preds::Explicit(e.preds[a.index()].iter()),
        }
    }

    pub fn try_preds(&self, a: Elem) -> Result<Vec<Elem>, LatticeError> {
        Ok(self.preds(self.check(a)?).collect())
    }

    pub fn pred_count(&self, a: Elem) -> usize {
        match &self.kind {
            Kind::Cube { .. } => a.0.count_ones() as usize,
            Kind::Explicit(e) => e.preds[a.index()].len(),
        }
    }

    /// Display name: the MSB-first bit word for the cube, the declared name
    /// otherwise.
    pub fn name(&self, a: Elem) -> String {
        match &self.kind {
            Kind::Cube { n } => {
                if *n == 0 {
                    String::new()
                } else {
                    format!("{:0width$b}", a.0, width = *n as usize)
                }
            }
            Kind::Explicit(e) => e.names[a.index()].clone(),
        }
    }

    /// Inverse of [`Lattice::name`].
    pub fn parse_elem(&self, s: &str) -> Result<Elem, LatticeError> {
        match &self.kind {
            Kind::Cube { n } => {
                let ok = s.len() == *n as usize && s.bytes().all(|c| c == b'0' || c == b'1');
                if !ok {
                    return Err(LatticeError::UnknownName(s.to_string()));
                }
                if s.is_empty() {
                    return Ok(Elem(0));
                }
                u32::from_str_radix(s, 2)
                    .map(Elem)
                    .map_err(|_| LatticeError::UnknownName(s.to_string()))
            }
            Kind::Explicit(e) => e
                .by_name
                .get(s)
                .map(|&i| Elem(i))
                .ok_or_else(|| LatticeError::UnknownName(s.to_string())),
        }
    }

    /// Maximal predecessor sum. Closed form `n(n+1)/2` on the cube, the
    /// memoized recursion otherwise.
    pub fn sigma(&self) -> u64 {
        match &self.kind {
            Kind::Cube { n } => u64::from(*n) * u64::from(n + 1) / 2,
            Kind::Explicit(_) => self.sigma_recursive(),
        }
    }

    /// The recursion `σ(↓m) = |preds(m)| + max σ(↓x_i)` over the immediate
    /// predecessors `x_i` of `m`, with `σ = 0` on a singleton, memoized on
    /// element id and evaluated at the top.
    pub fn sigma_recursive(&self) -> u64 {
        let mut memo = vec![0u64; self.len()];
        for a in self.topological() {
            let below = self.preds(a).map(|p| memo[p.index()]).max();
            memo[a.index()] = match below {
                Some(m) => self.pred_count(a) as u64 + m,
                None => 0,
            };
        }
        memo[self.top().index()]
    }

    /// `Min(S)`: members of `s` not strictly above another member, in
    /// canonical order without duplicates.
    pub fn min_antichain(&self, s: &[Elem]) -> Vec<Elem> {
        let mut out: Vec<Elem> = s
            .iter()
            .copied()
            .filter(|&a| !s.iter().any(|&b| self.lt(b, a)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn try_min_antichain(&self, s: &[Elem]) -> Result<Vec<Elem>, LatticeError> {
        for &a in s {
            self.check(a)?;
        }
        Ok(self.min_antichain(s))
    }

    /// True when no two distinct members of `s` are comparable.
    pub fn is_antichain(&self, s: &[Elem]) -> bool {
        s.iter().enumerate().all(|(i, &a)| {
            s[i + 1..]
                .iter()
                .all(|&b| a != b && !self.leq(a, b) && !self.leq(b, a))
        })
    }
}

fn validate_explicit(
    names: Vec<String>,
    by_name: HashMap<String, u32>,
    edges: Vec<(usize, usize)>,
) -> Result<Lattice, LatticeError> {
    let k = names.len();
    let mut lower: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(lo, hi) in &edges {
        if !lower[hi].contains(&lo) {
            lower[hi].push(lo);
            upper[lo].push(hi);
        }
    }

    // Kahn's algorithm, smallest declaration index first.
    let mut indegree: Vec<usize> = lower.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..k).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut topo = Vec::with_capacity(k);
    while let Some(Reverse(a)) = ready.pop() {
        topo.push(Elem(a as u32));
        for &b in &upper[a] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.push(Reverse(b));
            }
        }
    }
    if topo.len() < k {
        let stuck = (0..k).find(|&i| indegree[i] > 0).unwrap_or(0);
        return Err(LatticeError::Cycle(names[stuck].clone()));
    }

    let mut up = vec![FixedBitSet::with_capacity(k); k];
    for &a in topo.iter().rev() {
        let a = a.index();
        let mut set = FixedBitSet::with_capacity(k);
        set.insert(a);
        for &b in &upper[a] {
            set.union_with(&up[b]);
        }
        up[a] = set;
    }

    let maximal: Vec<usize> = (0..k).filter(|&a| upper[a].is_empty()).collect();
    if maximal.len() > 1 {
        return Err(LatticeError::MultipleMaximal(
            names[maximal[0]].clone(),
            names[maximal[1]].clone(),
        ));
    }
    let top = Elem(maximal[0] as u32);

    // An edge (b, a) is a cover unless b sits below another given lower
    // neighbour of a.
    let preds: Vec<Vec<Elem>> = lower
        .iter()
        .map(|ls| {
            let mut ps: Vec<Elem> = ls
                .iter()
                .filter(|&&b| !ls.iter().any(|&c| c != b && up[b].contains(c)))
                .map(|&b| Elem(b as u32))
                .collect();
            ps.sort_unstable();
            ps
        })
        .collect();

    let mut down = vec![FixedBitSet::with_capacity(k); k];
    for (a, ups) in up.iter().enumerate() {
        for b in ups.ones() {
            down[b].insert(a);
        }
    }

    let mut join = vec![0u32; k * k];
    for a in 0..k {
        for b in a..k {
            let mut ub = up[a].clone();
            ub.intersect_with(&up[b]);
            let minimal: Vec<usize> = ub
                .ones()
                .filter(|&m| down[m].intersection(&ub).count() == 1)
                .collect();
            match minimal.as_slice() {
                [m] => {
                    join[a * k + b] = *m as u32;
                    join[b * k + a] = *m as u32;
                }
                [] => return Err(LatticeError::NoJoin(names[a].clone(), names[b].clone())),
                many => {
                    return Err(LatticeError::AmbiguousJoin(
                        names[a].clone(),
                        names[b].clone(),
                        many.len(),
                    ))
                }
            }
        }
    }

    Ok(Lattice {
        kind: Kind::Explicit(Box::new(Explicit {
            names,
            by_name,
            preds,
            up,
            topo,
            join,
            top,
        })),
    })
}

/// Iterator over immediate predecessors.
#[derive(Clone)]
pub enum Preds<'a> {
    Cube { word: u32, rest: u32 },
    Explicit(std::slice::Iter<'a, Elem>),
}

impl Iterator for Preds<'_> {
    type Item = Elem;

    #[inline]
    fn next(&mut self) -> Option<Elem> {
        match self {
            // Clearing the highest set bit first yields ascending words.
            Preds::Cube { word, rest } => {
                if *rest == 0 {
                    return None;
                }
                let bit = 31 - rest.leading_zeros();
                *rest &= !(1 << bit);
                Some(Elem(*word & !(1 << bit)))
            }
            Preds::Explicit(it) => it.next().copied(),
        }
    }
}

/// Iterator over elements in topological order.
pub enum Topological<'a> {
    Cube(std::ops::Range<u32>),
    Explicit(std::slice::Iter<'a, Elem>),
}

impl Iterator for Topological<'_> {
    type Item = Elem;

    #[inline]
    fn next(&mut self) -> Option<Elem> {
        match self {
            Topological::Cube(r) => r.next().map(Elem),
            Topological::Explicit(it) => it.next().copied(),
        }
    }
}
