//! Brute-force reference implementations used as independent oracles.
//! Everything here follows the textbook definitions directly and avoids the
//! library's sweeps.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use dmono::{BoolFn, Elem, Lattice};

pub fn cube(n: u32) -> Arc<Lattice> {
    Arc::new(Lattice::cube(n).unwrap())
}

/// Coordinatewise comparison of two n-bit words.
pub fn cube_leq(n: u32, a: u32, b: u32) -> bool {
    (0..n).all(|i| (a >> i) & 1 <= (b >> i) & 1)
}

/// `b < a` with no `c` strictly between.
pub fn brute_preds(l: &Lattice, a: Elem) -> Vec<Elem> {
    l.elements()
        .filter(|&b| l.lt(b, a) && !l.elements().any(|c| l.lt(b, c) && l.lt(c, a)))
        .collect()
}

/// `f(a) = 1` and `f(b) = 0` for every `b < a`.
pub fn brute_global_min(f: &impl BoolFn) -> Vec<Elem> {
    let l = f.lattice();
    l.elements()
        .filter(|&a| f.eval(a) && !l.elements().any(|b| l.lt(b, a) && f.eval(b)))
        .collect()
}

/// `f(a) = 1` and `f(b) = 0` for every immediate predecessor `b`.
pub fn brute_local_min(f: &impl BoolFn) -> Vec<Elem> {
    let l = f.lattice();
    l.elements()
        .filter(|&a| f.eval(a) && !brute_preds(l, a).into_iter().any(|b| f.eval(b)))
        .collect()
}

/// `M(f)(x) = 1` iff some `y <= x` has `f(y) = 1`.
pub fn brute_closure(f: &impl BoolFn) -> Vec<bool> {
    let l = f.lattice();
    l.elements()
        .map(|x| l.elements().any(|y| l.leq(y, x) && f.eval(y)))
        .collect()
}

/// Every maximal chain `0^n < … < 1^n` of the cube, one per bit permutation.
pub fn cube_maximal_chains(n: u32) -> Vec<Vec<Elem>> {
    fn perms(rest: &mut Vec<u32>, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let bit = rest.remove(i);
            prefix.push(bit);
            perms(rest, prefix, out);
            prefix.pop();
            rest.insert(i, bit);
        }
    }
    let mut all = Vec::new();
    perms(&mut (0..n).collect(), &mut Vec::new(), &mut all);
    all.into_iter()
        .map(|order| {
            let mut word = 0u32;
            let mut chain = vec![Elem(0)];
            for bit in order {
                word |= 1 << bit;
                chain.push(Elem(word));
            }
            chain
        })
        .collect()
}

/// Maximum value changes along any maximal chain, starting from f(⊥) = 0.
pub fn brute_cube_degree(f: &impl BoolFn, n: u32) -> usize {
    cube_maximal_chains(n)
        .iter()
        .map(|chain| {
            let mut prev = false;
            chain
                .iter()
                .filter(|&&x| {
                    let v = f.eval(x);
                    let changed = v != prev;
                    prev = v;
                    changed
                })
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// The down-set recursion for σ without memoization.
pub fn brute_sigma(l: &Lattice, top: Elem) -> u64 {
    let preds = brute_preds(l, top);
    if preds.is_empty() {
        return 0;
    }
    preds.len() as u64 + preds.iter().map(|&p| brute_sigma(l, p)).max().unwrap()
}

/// All joins over nonempty selections, one element per chosen set.
pub fn brute_join_span(l: &Lattice, sets: &[Vec<Elem>]) -> BTreeSet<Elem> {
    let mut out = BTreeSet::new();
    let d = sets.len();
    for mask in 1u32..(1 << d) {
        let chosen: Vec<&Vec<Elem>> = (0..d)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &sets[i])
            .collect();
        let mut partial: Vec<Elem> = vec![];
        for (k, set) in chosen.iter().enumerate() {
            partial = if k == 0 {
                set.to_vec()
            } else {
                partial
                    .iter()
                    .flat_map(|&p| set.iter().map(move |&u| (p, u)))
                    .map(|(p, u)| {
                        // least upper bound by scanning
                        let ubs: Vec<Elem> = l
                            .elements()
                            .filter(|&z| l.leq(p, z) && l.leq(u, z))
                            .collect();
                        *ubs.iter()
                            .find(|&&z| ubs.iter().all(|&w| l.leq(z, w)))
                            .unwrap()
                    })
                    .collect()
            };
        }
        out.extend(partial);
    }
    out
}

type LatticeSpec<'a> = (Vec<&'a str>, Vec<(&'a str, &'a str)>);

/// Small explicit lattices for exhaustive checks.
pub fn explicit_lattices() -> Vec<Arc<Lattice>> {
    let specs: Vec<LatticeSpec> = vec![
        (
            vec!["b", "p", "q", "t"],
            vec![("b", "p"), ("b", "q"), ("p", "t"), ("q", "t")],
        ),
        (
            vec!["c0", "c1", "c2", "c3"],
            vec![("c0", "c1"), ("c1", "c2"), ("c2", "c3")],
        ),
        // M3
        (
            vec!["0", "a", "b", "c", "1"],
            vec![
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "1"),
                ("b", "1"),
                ("c", "1"),
            ],
        ),
        // N5, declared out of topological order
        (
            vec!["1", "c", "b", "a", "0"],
            vec![("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        ),
        // no bottom: three minimal elements under pairwise joins
        (
            vec!["x", "y", "z", "xy", "yz", "top"],
            vec![
                ("x", "xy"),
                ("y", "xy"),
                ("y", "yz"),
                ("z", "yz"),
                ("xy", "top"),
                ("yz", "top"),
            ],
        ),
    ];
    specs
        .into_iter()
        .map(|(e, c)| Arc::new(Lattice::explicit(&e, &c).unwrap()))
        .chain(std::iter::once(Arc::new(
            Lattice::cube(3).unwrap().to_explicit().unwrap(),
        )))
        .collect()
}
