#![allow(dead_code)]

use std::sync::Arc;

use cosetmod::{AlgebraSpec, LevelSpec, RootDatum, Series, Weight};

pub fn datum(s: Series, r: usize) -> Arc<RootDatum> {
    Arc::new(RootDatum::new(AlgebraSpec::new(s, r).unwrap()).unwrap())
}

pub fn level(s: Series, r: usize, k: u32) -> LevelSpec {
    LevelSpec::new(datum(s, r), k).unwrap()
}

pub fn w(v: &[i64]) -> Weight {
    Weight::new(v.to_vec())
}

/// Every Weyl group element as a word, by breadth-first search on the images of `ρ`.
pub fn weyl_words(d: &RootDatum) -> Vec<Vec<usize>> {
    let n = d.rank();
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![(d.rho().clone(), Vec::new())];
    seen.insert(d.rho().clone());
    let mut out = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (v, word) in frontier {
            for i in 0..n {
                let image = reflect(d, &v, i);
                if seen.insert(image.clone()) {
                    // s_i applied after the word
                    let mut wd: Vec<usize> = word.clone();
                    wd.push(i);
                    next.push((image, wd));
                }
            }
            out.push(word);
        }
        frontier = next;
    }
    out
}

/// `s_i(λ) = λ − λ_i α_i`, with `α_i` read off row `i` of the Cartan matrix.
pub fn reflect(d: &RootDatum, v: &Weight, i: usize) -> Weight {
    let c = v.labels()[i];
    Weight::new(
        v.labels()
            .iter()
            .zip(&d.cartan()[i])
            .map(|(a, b)| a - c * b)
            .collect(),
    )
}

pub fn apply_word(d: &RootDatum, word: &[usize], v: &Weight) -> Weight {
    word.iter().fold(v.clone(), |acc, &i| reflect(d, &acc, i))
}

/// `1/Π(1−q^m)` to order `n`.
pub fn partitions(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        for g in m..=n {
            p[g] += p[g - m];
        }
    }
    p
}

pub fn convolve(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}
