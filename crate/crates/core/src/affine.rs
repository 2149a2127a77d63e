//! Level-`k` integrable data: `P_+^k`, conformal weights, central charge,
//! the Kac–Peterson S-matrix and the simple-current action of `P∨/Q∨`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::liealg::{RootDatum, Series, Weight};

/// Structural tolerance for symmetry and unitarity of S-matrices.
pub const STRUCTURAL_TOL: f64 = 1e-9;

/// A root datum together with a positive level.
#[derive(Debug, Clone)]
pub struct LevelSpec {
    datum: Arc<RootDatum>,
    level: u32,
}

impl LevelSpec {
    pub fn new(datum: Arc<RootDatum>, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        Ok(Self { datum, level })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `k + h∨`.
    pub fn shifted_level(&self) -> i64 {
        self.level as i64 + self.datum.dual_coxeter()
    }

    fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.datum.rank() {
            return Err(Error::LengthMismatch {
                expected: self.datum.rank(),
                found: w.rank(),
            });
        }
        if !w.is_dominant() || self.datum.level_of(w) > self.level as i64 {
            return Err(Error::NotInLevel {
                weight: w.to_string(),
                level: self.level,
            });
        }
        Ok(())
    }

    /// All dominant weights with `⟨Λ, θ⟩ ≤ k`, graded-lex ordered.
    pub fn enumerate_level_weights(&self) -> WeightListing {
        let comarks = self.datum.comarks();
        let mut found = Vec::new();
        let mut labels = vec![0i64; comarks.len()];
        fill_labels(comarks, 0, self.level as i64, &mut labels, &mut found);
        found.sort_by_key(|w: &Weight| (self.datum.level_of(w), w.clone()));
        let index = found.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        WeightListing {
            spec: self.clone(),
            weights: found,
            index,
        }
    }

    /// `⟨Λ, Λ+2ρ⟩ / (2(k+h∨))`.
    pub fn conformal_weight(&self, w: &Weight) -> Result<Rational64> {
        self.check_weight(w)?;
        Ok(self.conformal_weight_unchecked(w))
    }

    pub(crate) fn conformal_weight_unchecked(&self, w: &Weight) -> Rational64 {
        let d = &self.datum;
        let two_rho = d.rho().scale(2);
        let num = d.inner_scaled(w.labels(), (w + &two_rho).labels());
        Rational64::new(num, 2 * self.shifted_level() * d.form_den())
    }

    /// `k · dim g / (k + h∨)`.
    pub fn central_charge(&self) -> Rational64 {
        Rational64::new(
            self.level as i64 * self.datum.dim() as i64,
            self.shifted_level(),
        )
    }

    /// The vacuum row `S_{0,Λ}` from the product formula.
    pub fn s_row_vacuum(&self) -> Vec<f64> {
        let listing = self.enumerate_level_weights();
        self.vacuum_row_for(&listing)
    }

    fn vacuum_row_for(&self, listing: &WeightListing) -> Vec<f64> {
        let d = &self.datum;
        let kh = self.shifted_level() as f64;
        let prefactor =
            (d.long_root_index() as f64).powf(-0.5) * kh.powf(-(d.rank() as f64) / 2.0);
        let den = d.form_den() as f64;
        listing
            .weights
            .iter()
            .map(|w| {
                let shifted = w + d.rho();
                d.positive_roots().iter().fold(prefactor, |acc, alpha| {
                    let ip = d.inner_scaled(shifted.labels(), alpha.labels()) as f64 / den;
                    acc * 2.0 * (PI * ip / kh).sin()
                })
            })
            .collect()
    }

    /// The full modular S-matrix.
    ///
    /// The vacuum row uses the product formula; every other entry is
    /// `S_{0,Λ'} · χ_Λ(−2πi(Λ'+ρ)/(k+h∨))`, with the finite character summed
    /// exactly into residue classes of `⟨μ, Λ'+ρ⟩` before any floating point.
    pub fn s_matrix(&self, exec: Exec) -> Result<ModularS> {
        let listing = self.enumerate_level_weights();
        let d = &self.datum;
        let n = listing.len();
        let vacuum = self.vacuum_row_for(&listing);
        let modulus = (d.form_den() * self.shifted_level()) as usize;
        let functionals: Vec<Vec<i64>> = listing
            .weights
            .iter()
            .map(|w| d.functional(&(w + d.rho())))
            .collect();

        let systems: Vec<Vec<(Weight, u64)>> = exec
            .map_slice(&listing.weights, |w| {
                d.weight_system(w).map(|m| m.into_iter().collect::<Vec<_>>())
            })
            .into_iter()
            .collect::<Result<_>>()?;
        let tasks: Vec<(usize, &Weight, u64)> = systems
            .iter()
            .enumerate()
            .flat_map(|(row, sys)| sys.iter().map(move |(mu, m)| (row, mu, *m)))
            .collect();
        let partial: Vec<Vec<u64>> = exec.map_slice(&tasks, |&(_, mu, m)| {
            let mut hist = vec![0u64; n * modulus];
            d.for_each_orbit_element(mu, |nu| {
                for (col, f) in functionals.iter().enumerate() {
                    let s: i64 = nu.iter().zip(f).map(|(a, b)| a * b).sum();
                    hist[col * modulus + s.rem_euclid(modulus as i64) as usize] += m;
                }
            });
            hist
        });
        let mut row_hist = vec![vec![0u64; n * modulus]; n];
        for ((row, _, _), hist) in tasks.iter().zip(&partial) {
            for (acc, h) in row_hist[*row].iter_mut().zip(hist) {
                *acc += h;
            }
        }

        let roots: Vec<Complex64> = (0..modulus)
            .map(|r| Complex64::from_polar(1.0, -2.0 * PI * r as f64 / modulus as f64))
            .collect();
        let primes = prime_factors(modulus);
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (row, hist) in row_hist.iter().enumerate() {
            for col in 0..n {
                let mut counts: Vec<i64> = hist[col * modulus..(col + 1) * modulus]
                    .iter()
                    .map(|&c| c as i64)
                    .collect();
                reduce_cyclotomic(&mut counts, &primes);
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, w) in counts.iter().zip(&roots) {
                    if *c != 0 {
                        acc += w * (*c as f64);
                    }
                }
                entries[row * n + col] = acc * vacuum[col];
            }
        }
        let s = ModularS {
            listing,
            n,
            entries,
        };
        s.validate(STRUCTURAL_TOL)?;
        Ok(s)
    }

    /// Permutations of `P_+^k` induced by the classes of `P∨/Q∨`.
    pub fn simple_current_action(&self) -> SimpleCurrentTable {
        let listing = self.enumerate_level_weights();
        let d = &self.datum;
        let mut classes = vec![SimpleCurrent {
            node: None,
            perm: (0..listing.len()).collect(),
        }];
        for &j in d.j_nodes() {
            let sigma = affine_diagram_automorphism(d.spec().series(), d.rank(), j + 1);
            let perm = listing
                .weights
                .iter()
                .map(|w| {
                    let image = apply_affine_permutation(d, self.level, &sigma, w);
                    listing.index_of(&image).expect("diagram automorphism preserves P+^k")
                })
                .collect();
            classes.push(SimpleCurrent {
                node: Some(j),
                perm,
            });
        }
        SimpleCurrentTable {
            spec: self.clone(),
            listing,
            classes,
        }
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Subtracts the vanishing sums `Σ_j ζ^{r + jN/p}` (`p` prime, `p | N`) so the
/// counts are small before they meet floating point.
fn reduce_cyclotomic(counts: &mut [i64], primes: &[usize]) {
    let n = counts.len();
    for &p in primes {
        let step = n / p;
        for r in 0..step {
            let m = (0..p).map(|j| counts[r + j * step]).min().unwrap_or(0);
            if m != 0 {
                for j in 0..p {
                    counts[r + j * step] -= m;
                }
            }
        }
    }
}

fn fill_labels(comarks: &[i64], pos: usize, budget: i64, labels: &mut Vec<i64>, out: &mut Vec<Weight>) {
    if pos == comarks.len() {
        out.push(Weight::new(labels.clone()));
        return;
    }
    let mut a = 0;
    while a * comarks[pos] <= budget {
        labels[pos] = a;
        fill_labels(comarks, pos + 1, budget - a * comarks[pos], labels, out);
        a += 1;
    }
    labels[pos] = 0;
}

/// The affine Dynkin diagram automorphism sending node 0 to `node`
/// (1-based Bourbaki labels, node 0 is the affine node). Entry `i` is `σ(i)`.
fn affine_diagram_automorphism(series: Series, n: usize, node: usize) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..=n).collect();
    match series {
        Series::A => {
            for (i, s) in sigma.iter_mut().enumerate() {
                *s = (i + node) % (n + 1);
            }
        }
        Series::B => {
            sigma.swap(0, 1);
        }
        Series::C => {
            for (i, s) in sigma.iter_mut().enumerate() {
                *s = n - i;
            }
        }
        Series::D => {
            if node == 1 {
                sigma.swap(0, 1);
                sigma.swap(n - 1, n);
            } else {
                for (i, s) in sigma.iter_mut().enumerate().take(n - 1).skip(2) {
                    *s = n - i;
                }
                let other = if node == n { n - 1 } else { n };
                if n.is_multiple_of(2) {
                    // involution 0 ↔ node, 1 ↔ other
                    sigma[0] = node;
                    sigma[node] = 0;
                    sigma[1] = other;
                    sigma[other] = 1;
                } else {
                    // order four: 0 → node → 1 → other → 0
                    sigma[0] = node;
                    sigma[node] = 1;
                    sigma[1] = other;
                    sigma[other] = 0;
                }
            }
        }
        Series::E if n == 6 => {
            let forward = [(0, 1), (1, 6), (6, 0), (2, 3), (3, 5), (5, 2)];
            for (a, b) in forward {
                sigma[a] = b;
            }
            if node == 6 {
                let once = sigma.clone();
                for s in sigma.iter_mut() {
                    *s = once[*s];
                }
            }
        }
        Series::E if n == 7 => {
            for (a, b) in [(0, 7), (1, 6), (3, 5)] {
                sigma[a] = b;
                sigma[b] = a;
            }
        }
        Series::E | Series::F | Series::G => {}
    }
    debug_assert_eq!(sigma[0], node);
    sigma
}

fn apply_affine_permutation(d: &RootDatum, level: u32, sigma: &[usize], w: &Weight) -> Weight {
    let n = d.rank();
    let mut affine = Vec::with_capacity(n + 1);
    affine.push(level as i64 - d.level_of(w));
    affine.extend_from_slice(w.labels());
    let mut image = vec![0i64; n + 1];
    for (i, &a) in affine.iter().enumerate() {
        image[sigma[i]] = a;
    }
    Weight::new(image[1..].to_vec())
}

/// `P_+^k` in its canonical order.
#[derive(Debug, Clone)]
pub struct WeightListing {
    spec: LevelSpec,
    weights: Vec<Weight>,
    index: HashMap<Weight, usize>,
}

impl WeightListing {
    pub fn spec(&self) -> &LevelSpec {
        &self.spec
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }
}

/// A level-`k` modular S-matrix indexed by a [`WeightListing`].
#[derive(Debug, Clone)]
pub struct ModularS {
    listing: WeightListing,
    n: usize,
    entries: Vec<Complex64>,
}

impl ModularS {
    pub fn listing(&self) -> &WeightListing {
        &self.listing
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn vacuum_row(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.entry(0, j).re).collect()
    }

    /// Symmetry, unitarity and positivity of the vacuum row.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.n;
        let sym = max_symmetry_defect(&self.entries, n);
        if sym >= tol {
            return Err(Error::NumericCheck {
                check: "symmetry",
                deviation: sym,
                tolerance: tol,
            });
        }
        let uni = max_unitarity_defect(&self.entries, n);
        if uni >= tol {
            return Err(Error::NumericCheck {
                check: "unitarity",
                deviation: uni,
                tolerance: tol,
            });
        }
        for j in 0..n {
            let e = self.entry(0, j);
            if e.re <= 0.0 || e.im.abs() >= 1e-10 {
                return Err(Error::NumericCheck {
                    check: "vacuum row positivity",
                    deviation: e.im.abs().max(-e.re),
                    tolerance: 1e-10,
                });
            }
        }
        Ok(())
    }

    /// `max |S_ij − S_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        max_symmetry_defect(&self.entries, self.n)
    }

    /// `max |(S S†)_ij − δ_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        max_unitarity_defect(&self.entries, self.n)
    }

    /// `|Σ_Λ S_{0,Λ}² − 1|`.
    pub fn vacuum_norm_defect(&self) -> f64 {
        (self.vacuum_row().iter().map(|x| x * x).sum::<f64>() - 1.0).abs()
    }

    /// Per congruence class of `P/Q`: `(class key, Σ S_{0,Λ}²)`.
    pub fn congruence_class_sums(&self) -> Vec<(Vec<i64>, f64)> {
        let d = self.listing.spec.datum();
        let mut sums: Vec<(Vec<i64>, f64)> = Vec::new();
        for (j, w) in self.listing.weights.iter().enumerate() {
            let key = d.congruence_class(w);
            let v = self.entry(0, j).re.powi(2);
            match sums.iter_mut().find(|(k, _)| *k == key) {
                Some((_, s)) => *s += v,
                None => sums.push((key, v)),
            }
        }
        sums.sort_by(|a, b| a.0.cmp(&b.0));
        sums
    }
}

pub(crate) fn max_symmetry_defect(m: &[Complex64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((m[i * n + j] - m[j * n + i]).norm());
        }
    }
    worst
}

pub(crate) fn max_unitarity_defect(m: &[Complex64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                acc += m[i * n + a] * m[j * n + a].conj();
            }
            if i == j {
                acc -= 1.0;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct SimpleCurrent {
    /// `None` for the identity class, `Some(j)` (0-based node) for `h^j + Q∨`.
    pub node: Option<usize>,
    /// `perm[i]` is the listing index of `Λ_i^{(h)}`.
    pub perm: Vec<usize>,
}

/// The action of `P∨/Q∨` on `P_+^k`.
#[derive(Debug, Clone)]
pub struct SimpleCurrentTable {
    spec: LevelSpec,
    listing: WeightListing,
    classes: Vec<SimpleCurrent>,
}

impl SimpleCurrentTable {
    pub fn spec(&self) -> &LevelSpec {
        &self.spec
    }

    pub fn listing(&self) -> &WeightListing {
        &self.listing
    }

    pub fn classes(&self) -> &[SimpleCurrent] {
        &self.classes
    }

    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn apply(&self, class: usize, index: usize) -> usize {
        self.classes[class].perm[index]
    }

    /// Cayley table of the classes under composition, or `None` if the
    /// permutations are not closed under composition.
    pub fn group_table(&self) -> Option<Vec<Vec<usize>>> {
        let m = self.classes.len();
        let mut table = vec![vec![0; m]; m];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                let composed: Vec<usize> = self.classes[b]
                    .perm
                    .iter()
                    .map(|&i| self.classes[a].perm[i])
                    .collect();
                *cell = self.classes.iter().position(|c| c.perm == composed)?;
            }
        }
        Some(table)
    }
}

impl fmt::Display for SimpleCurrentTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.classes {
            match c.node {
                None => write!(f, "0:")?,
                Some(j) => write!(f, "h{}:", j + 1)?,
            }
            for (i, &p) in c.perm.iter().enumerate() {
                write!(f, " {}→{}", self.listing.weights[i], self.listing.weights[p])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
