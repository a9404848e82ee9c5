//! Structured and random target families on the Boolean cube.
//!
//! Block `i` (1-based) of a family occupies consecutive bit positions,
//! least significant first: block 1 starts at bit 0.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolfn::{
    BoolFn, BoolFnError, ComposedTarget, DenseFunction, MonotoneDnf, XorHypothesis,
};
use crate::lattice::{Elem, Lattice, LatticeError};

/// Attempts allowed when sampling an antichain of an exact size.
pub const RETRY_BUDGET: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{name} must be at least {min}")]
    TooSmall { name: &'static str, min: usize },
    #[error("n = {n} is not a multiple of {divisor} for {family} with d = {d}")]
    Divisibility {
        family: &'static str,
        n: u32,
        d: usize,
        divisor: usize,
    },
    #[error("expected {expected} column indices, found {found}")]
    IndexCount { expected: usize, found: usize },
    #[error("column index {index} out of range for block {block} of width {width}")]
    IndexOutOfRange {
        block: usize,
        index: usize,
        width: usize,
    },
    #[error(
        "could not sample an antichain of size {size} on n = {n} within {RETRY_BUDGET} attempts"
    )]
    Generation { size: usize, n: u32 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    BoolFn(#[from] BoolFnError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Tightness,
    Takimoto,
    Random,
}

/// Parameters of a generated target; stored alongside it in function files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub d: usize,
    /// Block width; 0 for random targets and uneven blocks.
    #[serde(default)]
    pub t: usize,
    /// Cube dimension.
    pub n: u32,
    /// Block widths for structured families.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub widths: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Requested `size(g_i)` for random targets.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<usize>,
}

/// A generated target together with how it was made.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: FamilySpec,
    pub target: ComposedTarget,
}

impl Instance {
    pub fn lattice(&self) -> &Arc<Lattice> {
        self.target.lattice()
    }
}

fn at_least(name: &'static str, value: usize, min: usize) -> Result<(), FamilyError> {
    if value < min {
        Err(FamilyError::TooSmall { name, min })
    } else {
        Ok(())
    }
}

fn block_offsets(widths: &[usize]) -> Vec<usize> {
    widths
        .iter()
        .scan(0, |acc, &w| {
            let start = *acc;
            *acc += w;
            Some(start)
        })
        .collect()
}

/// The single-variable minterms of blocks `from..widths.len()` (0-based).
fn block_union(lattice: &Arc<Lattice>, widths: &[usize], from: usize) -> MonotoneDnf {
    let offsets = block_offsets(widths);
    let minimals = (from..widths.len())
        .flat_map(|i| (0..widths[i]).map(move |j| (i, j)))
        .map(|(i, j)| Elem(1 << (offsets[i] + j)))
        .collect();
    MonotoneDnf::new(lattice.clone(), minimals).expect("distinct variables form an antichain")
}

/// `y_1 ⊕ … ⊕ y_d` with `y_i` the OR of the `t` variables in block `i`, on
/// the cube of dimension `d·t`.
pub fn tightness_family(d: usize, t: usize) -> Result<Instance, FamilyError> {
    at_least("d", d, 1)?;
    at_least("t", t, 1)?;
    let n = (d * t) as u32;
    let lattice = Arc::new(Lattice::cube(n)?);
    let widths = vec![t; d];
    let inner = (0..d)
        .map(|i| block_union(&lattice, &widths[..=i], i))
        .collect();
    let target = ComposedTarget::parity(lattice, inner)?;
    Ok(Instance {
        spec: FamilySpec {
            family: Family::Tightness,
            d,
            t,
            n,
            widths,
            seed: None,
            sizes: Vec::new(),
        },
        target,
    })
}

/// Block width of the tightness family with `n` variables.
pub fn tightness_width(d: usize, n: u32) -> Result<usize, FamilyError> {
    at_least("d", d, 1)?;
    if n == 0 || !(n as usize).is_multiple_of(d) {
        return Err(FamilyError::Divisibility {
            family: "tightness",
            n,
            d,
            divisor: d,
        });
    }
    Ok(n as usize / d)
}

/// `(y_1 ∨ … ∨ y_d) ⊕ (y_2 ∨ … ∨ y_d) ⊕ … ⊕ y_d` with blocks of width `t`.
///
/// The nested representation has size `n = d(d+1)t/2`; the target lives on
/// the cube of that dimension, with the blocks in the low `d·t` bits and the
/// remaining variables irrelevant.
pub fn takimoto_family(d: usize, t: usize) -> Result<Instance, FamilyError> {
    at_least("d", d, 2)?;
    at_least("t", t, 1)?;
    let n = (d * (d + 1) * t / 2) as u32;
    let mut inst = nested_family(vec![t; d], n)?;
    inst.spec.t = t;
    Ok(inst)
}

/// Block width of the takimoto family whose nested size is `n`.
pub fn takimoto_width(d: usize, n: u32) -> Result<usize, FamilyError> {
    at_least("d", d, 2)?;
    let divisor = d * (d + 1) / 2;
    if n == 0 || !(n as usize).is_multiple_of(divisor) {
        return Err(FamilyError::Divisibility {
            family: "takimoto",
            n,
            d,
            divisor,
        });
    }
    Ok(n as usize / divisor)
}

/// The nested family with block `j` of width `⌊n/(j·d)⌋` (at least 1), on
/// the cube of dimension `n`. The nested size `Σ_j j·w_j` stays within `n`.
pub fn takimoto_uneven(d: usize, n: u32) -> Result<Instance, FamilyError> {
    at_least("d", d, 2)?;
    let widths: Vec<usize> = (1..=d).map(|j| (n as usize / (j * d)).max(1)).collect();
    let needed: usize = widths.iter().enumerate().map(|(j, w)| (j + 1) * w).sum();
    nested_family(widths, n.max(needed as u32))
}

fn nested_family(widths: Vec<usize>, n: u32) -> Result<Instance, FamilyError> {
    let d = widths.len();
    let lattice = Arc::new(Lattice::cube(n)?);
    let inner = (0..d).map(|i| block_union(&lattice, &widths, i)).collect();
    let target = ComposedTarget::parity(lattice, inner)?;
    Ok(Instance {
        spec: FamilySpec {
            family: Family::Takimoto,
            d,
            t: 0,
            n,
            widths,
            seed: None,
            sizes: Vec::new(),
        },
        target,
    })
}

/// Expected strict decomposition of [`tightness_family`]: level `k` holds
/// every join of one variable from each of `k` distinct blocks.
pub fn prefix_levels(d: usize, t: usize) -> Result<XorHypothesis, FamilyError> {
    at_least("d", d, 1)?;
    at_least("t", t, 1)?;
    let lattice = Arc::new(Lattice::cube((d * t) as u32)?);
    // by_count[k] collects joins over exactly k blocks
    let mut by_count: Vec<Vec<u32>> = vec![vec![0]];
    for block in 0..d {
        let mut next = by_count.clone();
        next.push(Vec::new());
        for k in 0..by_count.len() {
            for &word in &by_count[k] {
                for j in 0..t {
                    next[k + 1].push(word | 1 << (block * t + j));
                }
            }
        }
        by_count = next;
    }
    let levels = by_count
        .into_iter()
        .skip(1)
        .map(|words| {
            let minimals = words.into_iter().map(Elem).collect();
            MonotoneDnf::new(lattice.clone(), minimals)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(XorHypothesis::new(lattice, levels)?)
}

/// For column choices `indices[i] ∈ 0..widths[i]`, builds
/// `x⁽¹⁾ < … < x⁽ᵈ⁾` where `x⁽ˡ⁾` sets the chosen bit of blocks `1..=ℓ`,
/// and checks that each `x⁽ⁱ⁾` is a minimal element of level `i` of
/// `decomposition`.
pub fn chain_witness_check(
    widths: &[usize],
    decomposition: &XorHypothesis,
    indices: &[usize],
) -> Result<bool, FamilyError> {
    if indices.len() != widths.len() {
        return Err(FamilyError::IndexCount {
            expected: widths.len(),
            found: indices.len(),
        });
    }
    let offsets = block_offsets(widths);
    let mut word = 0u32;
    for (i, &j) in indices.iter().enumerate() {
        if j >= widths[i] {
            return Err(FamilyError::IndexOutOfRange {
                block: i + 1,
                index: j,
                width: widths[i],
            });
        }
        word |= 1 << (offsets[i] + j);
        let Some(level) = decomposition.levels().get(i) else {
            return Ok(false);
        };
        if level.minimals().binary_search(&Elem(word)).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every column choice, in lexicographic order.
pub fn witness_indices(widths: &[usize]) -> Vec<Vec<usize>> {
    widths.iter().fold(vec![Vec::new()], |acc, &w| {
        acc.into_iter()
            .flat_map(|prefix| {
                (0..w).map(move |j| {
                    let mut p = prefix.clone();
                    p.push(j);
                    p
                })
            })
            .collect()
    })
}

/// A random antichain of exactly `size` elements: sample `size` points,
/// reduce to `Min`, retry on collisions.
pub fn random_antichain(
    lattice: &Arc<Lattice>,
    size: usize,
    rng: &mut impl Rng,
) -> Result<MonotoneDnf, FamilyError> {
    let len = lattice.len() as u32;
    for _ in 0..RETRY_BUDGET {
        let picks: Vec<Elem> = (0..size).map(|_| Elem(rng.gen_range(0..len))).collect();
        let mins = lattice.min_antichain(&picks);
        if mins.len() == size {
            return Ok(MonotoneDnf::new(lattice.clone(), mins)?);
        }
    }
    Err(FamilyError::Generation {
        size,
        n: lattice.cube_dim().unwrap_or(0),
    })
}

/// Seeded random `F(g_1, …, g_d)` on the cube of dimension `n` with
/// `F(0^d) = 0` and `size(g_i) = sizes[i]`.
pub fn random_composed(n: u32, sizes: &[usize], seed: u64) -> Result<Instance, FamilyError> {
    at_least("d", sizes.len(), 1)?;
    let lattice = Arc::new(Lattice::cube(n)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = sizes.len();
    let mut outer: Vec<bool> = (0..1usize << d).map(|_| rng.gen()).collect();
    outer[0] = false;
    let inner = sizes
        .iter()
        .map(|&s| random_antichain(&lattice, s, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    let target = ComposedTarget::new(lattice, outer, inner)?;
    Ok(Instance {
        spec: FamilySpec {
            family: Family::Random,
            d,
            t: 0,
            n,
            widths: Vec::new(),
            seed: Some(seed),
            sizes: sizes.to_vec(),
        },
        target,
    })
}

/// Seeded uniformly random truth table.
pub fn random_dense(lattice: &Arc<Lattice>, seed: u64) -> DenseFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseFunction::from_fn(lattice.clone(), |_| rng.gen())
}

/// A seeded random sample of `count` distinct points, labeled by `target`.
pub fn random_sample(
    target: &impl BoolFn,
    count: usize,
    seed: u64,
) -> crate::consistent::LabeledSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Elem> = target.lattice().elements().collect();
    points.shuffle(&mut rng);
    let mut sample = crate::consistent::LabeledSample::default();
    for x in points.into_iter().take(count) {
        sample.insert(x, target.eval(x));
    }
    sample
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{monotone_degree, strict_decompose};

    fn words(l: &Lattice, g: &MonotoneDnf) -> Vec<String> {
        g.minimals().iter().map(|&m| l.name(m)).collect()
    }

    #[test]
    fn tightness_minimal_parameters_is_xor2() {
        let inst = tightness_family(2, 1).unwrap();
        let l = inst.lattice().clone();
        assert_eq!(l.cube_dim(), Some(2));
        let truth: Vec<bool> = l.elements().map(|x| inst.target.eval(x)).collect();
        assert_eq!(truth, [false, true, true, false]);
    }

    #[test]
    fn tightness_single_block_is_or() {
        let inst = tightness_family(1, 3).unwrap();
        assert_eq!(inst.target.size(), 3);
        assert_eq!(monotone_degree(&inst.target), 1);
    }

    #[test]
    fn tightness_2_2_size() {
        let inst = tightness_family(2, 2).unwrap();
        let h = strict_decompose(&inst.target, 8).unwrap();
        assert_eq!(h.size(), 8);
    }

    #[test]
    fn prefix_level_sizes() {
        let l = |d, t| prefix_levels(d, t).unwrap().level_sizes();
        assert_eq!(l(2, 2), [4, 4]);
        assert_eq!(l(3, 1), [3, 3, 1]);
        let h = prefix_levels(2, 1).unwrap();
        let lat = h.lattice().clone();
        assert_eq!(words(&lat, &h.levels()[0]), ["01", "10"]);
        assert_eq!(words(&lat, &h.levels()[1]), ["11"]);
    }

    #[test]
    fn takimoto_small_reading() {
        let inst = takimoto_family(2, 1).unwrap();
        let l = inst.lattice().clone();
        assert_eq!(l.cube_dim(), Some(3));
        let g = inst.target.inner();
        assert_eq!(words(&l, &g[0]), ["001", "010"]);
        assert_eq!(words(&l, &g[1]), ["010"]);
        assert!(g[1].implies(&g[0]));
        assert!(g[1].minimals().iter().all(|m| g[0].minimals().contains(m)));
    }

    #[test]
    fn takimoto_3_1_is_not_recovered() {
        let inst = takimoto_family(3, 1).unwrap();
        let h = strict_decompose(&inst.target, 6).unwrap();
        assert_ne!(h.levels(), inst.target.inner());
    }

    #[test]
    fn takimoto_witnesses() {
        let inst = takimoto_family(2, 2).unwrap();
        let h = strict_decompose(&inst.target, 8).unwrap();
        assert!(chain_witness_check(&inst.spec.widths, &h, &[0, 0]).unwrap());
        let all = witness_indices(&inst.spec.widths);
        assert_eq!(all.len(), 4);
        for idx in all {
            assert!(chain_witness_check(&inst.spec.widths, &h, &idx).unwrap());
        }
        assert!(h.levels()[1].size() >= 4);
        assert!(matches!(
            chain_witness_check(&inst.spec.widths, &h, &[0, 2]),
            Err(FamilyError::IndexOutOfRange { block: 2, .. })
        ));
        assert!(matches!(
            chain_witness_check(&inst.spec.widths, &h, &[0]),
            Err(FamilyError::IndexCount { .. })
        ));
    }

    #[test]
    fn takimoto_2_1_witness() {
        let inst = takimoto_family(2, 1).unwrap();
        let h = strict_decompose(&inst.target, 8).unwrap();
        assert!(chain_witness_check(&inst.spec.widths, &h, &[0, 0]).unwrap());
    }

    #[test]
    fn uneven_widths() {
        let inst = takimoto_uneven(2, 12).unwrap();
        assert_eq!(inst.spec.widths, [6, 3]);
        // nested size Σ j·w_j = 12
        assert_eq!(inst.target.size(), 12);
        let h = strict_decompose(&inst.target, 16).unwrap();
        for idx in witness_indices(&inst.spec.widths) {
            assert!(chain_witness_check(&inst.spec.widths, &h, &idx).unwrap());
        }
    }

    #[test]
    fn widths_from_n() {
        assert_eq!(tightness_width(2, 6).unwrap(), 3);
        assert!(matches!(
            tightness_width(2, 5),
            Err(FamilyError::Divisibility { .. })
        ));
        assert_eq!(takimoto_width(3, 12).unwrap(), 2);
        assert!(takimoto_width(3, 7).is_err());
        assert!(takimoto_family(1, 2).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_composed(6, &[2, 1], 42).unwrap();
        let b = random_composed(6, &[2, 1], 42).unwrap();
        assert_eq!(a.target, b.target);
        assert_eq!(a.target.inner_sizes(), [2, 1]);
        assert!(a.target.zero_at_origin());
        let c = random_composed(6, &[2, 1], 43).unwrap();
        assert_ne!(a.target, c.target);
    }

    #[test]
    fn random_single_minterm() {
        let inst = random_composed(5, &[1], 3).unwrap();
        assert!(monotone_degree(&inst.target) <= 1);
    }

    #[test]
    fn impossible_antichain_size() {
        // the cube of dimension 2 has antichains of size at most 2
        assert!(matches!(
            random_composed(2, &[3], 1),
            Err(FamilyError::Generation { size: 3, n: 2 })
        ));
    }
}
