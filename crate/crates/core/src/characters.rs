//! Graded characters of integrable highest-weight modules and branching
//! functions of the diagonal embedding `L(k+l) ⊂ L(k) ⊗ L(l)`.
//!
//! Characters are carried as full weight multisets per grade. The affine
//! character is the Weyl–Kac numerator, truncated to translations of small
//! depth, with each finite Weyl-group alternating sum folded into a finite
//! irreducible character, then divided by the `q`-part of the affine
//! denominator one factor at a time.

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;

use crate::affine::LevelSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::liealg::{RootDatum, Weight};

/// Largest rank for which characters are computed.
pub const MAX_CHARACTER_RANK: usize = 3;

/// Default truncation grade.
pub const DEFAULT_ORDER: usize = 10;

type Layer = HashMap<Weight, i64>;

/// `q^offset · Σ_n coeffs[n] q^n`, known up to `q^{offset + order}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    pub offset: Rational64,
    pub coeffs: Vec<i64>,
    pub order: usize,
}

/// Dominant-weight multiplicities per grade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCharacter {
    pub grades: Vec<BTreeMap<Weight, i64>>,
}

impl FormalCharacter {
    pub fn grade(&self, g: usize) -> &BTreeMap<Weight, i64> {
        &self.grades[g]
    }
}

/// Full weight multisets for grades `0..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct GradedCharacter {
    layers: Vec<Layer>,
}

impl GradedCharacter {
    fn zero(order: usize) -> Self {
        Self {
            layers: vec![Layer::new(); order + 1],
        }
    }

    fn order(&self) -> usize {
        self.layers.len() - 1
    }

    fn q_dimensions(&self) -> Vec<i64> {
        self.layers.iter().map(|l| l.values().sum()).collect()
    }

    fn dominant_part(&self) -> FormalCharacter {
        FormalCharacter {
            grades: self
                .layers
                .iter()
                .map(|l| {
                    l.iter()
                        .filter(|(w, &m)| m != 0 && w.is_dominant())
                        .map(|(w, &m)| (w.clone(), m))
                        .collect()
                })
                .collect(),
        }
    }

    /// Divides in place by `1 − q^step e^{shift}`.
    fn divide_by(&mut self, step: usize, shift: &Weight) {
        for g in step..self.layers.len() {
            let lower: Vec<(Weight, i64)> = self.layers[g - step]
                .iter()
                .filter(|(_, &m)| m != 0)
                .map(|(w, &m)| (w + shift, m))
                .collect();
            let layer = &mut self.layers[g];
            for (w, m) in lower {
                *layer.entry(w).or_insert(0) += m;
            }
        }
    }

    /// Adds `factor · other`, with `other` shifted up by `shift` grades.
    fn add_shifted(&mut self, other: &GradedCharacter, shift: usize, factor: i64) {
        for g in shift..self.layers.len() {
            let Some(src) = other.layers.get(g - shift) else {
                break;
            };
            let layer = &mut self.layers[g];
            for (w, &m) in src {
                let e = layer.entry(w.clone()).or_insert(0);
                *e += factor * m;
                if *e == 0 {
                    layer.remove(w);
                }
            }
        }
    }

    fn tensor(&self, other: &GradedCharacter) -> GradedCharacter {
        let order = self.order().min(other.order());
        let mut out = GradedCharacter::zero(order);
        for g1 in 0..=order {
            for g2 in 0..=order - g1 {
                let layer = &mut out.layers[g1 + g2];
                for (a, &ma) in &self.layers[g1] {
                    for (b, &mb) in &other.layers[g2] {
                        *layer.entry(a + b).or_insert(0) += ma * mb;
                    }
                }
            }
        }
        for layer in &mut out.layers {
            layer.retain(|_, m| *m != 0);
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.layers.iter().all(|l| l.values().all(|&m| m == 0))
    }
}

fn guard_rank(d: &RootDatum) -> Result<()> {
    if d.rank() > MAX_CHARACTER_RANK {
        return Err(Error::RankGuard {
            rank: d.rank(),
            max: MAX_CHARACTER_RANK,
        });
    }
    Ok(())
}

fn check_in_level(spec: &LevelSpec, w: &Weight) -> Result<()> {
    spec.conformal_weight(w).map(|_| ())
}

/// Coroot lattice vectors `γ` with `⟨λ, γ⟩ + m|γ|²/2 ≤ order`, paired with that depth.
fn translations(d: &RootDatum, lambda: &Weight, m: i64, order: usize) -> Vec<(Weight, usize)> {
    let n = d.rank();
    let coroots: Vec<Weight> = (0..n)
        .map(|i| {
            let scale = num_rational::Rational64::from_integer(2) / d.root_norms()[i];
            debug_assert!(scale.is_integer());
            d.simple_roots()[i].scale(scale.to_integer())
        })
        .collect();
    let den = d.form_den();
    let fd = den as f64;
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| d.inner_scaled(coroots[i].labels(), coroots[j].labels()) as f64 / fd)
                .collect()
        })
        .collect();
    let lam_norm = (d.inner_scaled(lambda.labels(), lambda.labels()) as f64 / fd).sqrt();
    let mf = m as f64;
    let radius = (lam_norm + (lam_norm * lam_norm + 2.0 * mf * order as f64).sqrt()) / mf;
    let inv = invert_f64(&gram);
    let bounds: Vec<i64> = (0..n)
        .map(|i| (radius * inv[i][i].sqrt()).ceil() as i64 + 1)
        .collect();

    let mut out = Vec::new();
    let mut coeffs: Vec<i64> = bounds.iter().map(|b| -b).collect();
    let limit = 2 * order as i64 * den;
    loop {
        let mut gamma = Weight::zero(n);
        for (c, v) in coeffs.iter().zip(&coroots) {
            if *c != 0 {
                gamma = &gamma + &v.scale(*c);
            }
        }
        let twice_scaled = 2 * d.inner_scaled(lambda.labels(), gamma.labels())
            + m * d.inner_scaled(gamma.labels(), gamma.labels());
        if twice_scaled <= limit {
            debug_assert!(twice_scaled % (2 * den) == 0);
            out.push((gamma, (twice_scaled / (2 * den)) as usize));
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if coeffs[i] < bounds[i] {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bounds[i];
            i += 1;
        }
    }
}

fn invert_f64(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        a.swap(c, p);
        let piv = a[c][c];
        for x in a[c].iter_mut() {
            *x /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let pr = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pr) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub(crate) fn graded_character(spec: &LevelSpec, hw: &Weight, order: usize) -> Result<GradedCharacter> {
    let d = spec.datum();
    guard_rank(d)?;
    check_in_level(spec, hw)?;
    let m = spec.shifted_level();
    let lambda = hw + d.rho();

    let mut ch = GradedCharacter::zero(order);
    let mut terms = translations(d, &lambda, m, order);
    terms.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    for (gamma, depth) in terms {
        let shifted = &lambda + &gamma.scale(m);
        let (dom, sign) = d.to_dominant(&shifted);
        if sign == 0 {
            continue;
        }
        let top = &dom - d.rho();
        for (w, mult) in d.all_weights(&top)? {
            *ch.layers[depth].entry(w).or_insert(0) += sign as i64 * mult as i64;
        }
    }
    for layer in &mut ch.layers {
        layer.retain(|_, v| *v != 0);
    }

    let zero = Weight::zero(d.rank());
    let roots: Vec<Weight> = d
        .positive_roots()
        .iter()
        .flat_map(|a| [a.clone(), -a])
        .collect();
    for step in 1..=order {
        for _ in 0..d.rank() {
            ch.divide_by(step, &zero);
        }
        for alpha in &roots {
            ch.divide_by(step, alpha);
        }
    }
    for layer in &mut ch.layers {
        layer.retain(|_, v| *v != 0);
    }
    Ok(ch)
}

/// Graded character of `L(k, Λ)` to grade `order`, with its `q`-dimension series.
///
/// The series offset is `h_Λ − c/24`.
pub fn affine_character(spec: &LevelSpec, hw: &Weight, order: usize) -> Result<(FormalCharacter, QSeries)> {
    let ch = graded_character(spec, hw, order)?;
    let offset = spec.conformal_weight(hw)? - spec.central_charge() / Rational64::from_integer(24);
    let series = QSeries {
        offset,
        coeffs: ch.q_dimensions(),
        order,
    };
    Ok((ch.dominant_part(), series))
}

/// One branching function `b^Λ_{Λ̇,Λ̈}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingSeries {
    pub lam: Weight,
    /// Offset includes the `−c^d/24` shift and the first grade at which `Λ` occurs.
    pub series: QSeries,
    /// Leading exponent plus `c^d/24`.
    pub conformal_weight: Rational64,
    /// Grade of the first occurrence, relative to the top of `L(k,Λ̇) ⊗ L(l,Λ̈)`.
    pub first_grade: usize,
}

impl BranchingSeries {
    /// Coefficient at grade `g` of the tensor product grading.
    pub fn coefficient_at_grade(&self, g: usize) -> i64 {
        g.checked_sub(self.first_grade)
            .and_then(|i| self.series.coeffs.get(i).copied())
            .unwrap_or(0)
    }
}

/// All nonzero branching functions of `L(k,Λ̇) ⊗ L(l,Λ̈)`, ordered by the
/// level-`(k+l)` listing.
#[derive(Debug, Clone)]
pub struct Branching {
    pub order: usize,
    /// `c^k + c^l − c^{k+l}`.
    pub coset_central_charge: Rational64,
    pub series: Vec<BranchingSeries>,
}

fn peel(
    spec_kl: &LevelSpec,
    product: &GradedCharacter,
    cache: &mut HashMap<Weight, GradedCharacter>,
) -> Result<BTreeMap<Weight, Vec<i64>>> {
    let d = spec_kl.datum();
    let order = product.order();
    let rho = d.rho().clone();
    let mut rest = product.clone();
    let mut found: BTreeMap<Weight, Vec<i64>> = BTreeMap::new();
    for g in 0..=order {
        loop {
            let top = rest.layers[g]
                .iter()
                .filter(|(w, &m)| m != 0 && w.is_dominant())
                .max_by_key(|(w, _)| (d.inner_scaled(w.labels(), rho.labels()), (*w).clone()))
                .map(|(w, &m)| (w.clone(), m));
            let Some((hw, mult)) = top else { break };
            if mult < 0 {
                return Err(Error::NegativeMultiplicity {
                    weight: hw.to_string(),
                    grade: g,
                    mult,
                });
            }
            if d.level_of(&hw) > spec_kl.level() as i64 {
                return Err(Error::LevelOverflow {
                    weight: hw.to_string(),
                    level: spec_kl.level(),
                });
            }
            if !cache.contains_key(&hw) {
                cache.insert(hw.clone(), graded_character(spec_kl, &hw, order)?);
            }
            rest.add_shifted(&cache[&hw], g, -mult);
            found.entry(hw).or_insert_with(|| vec![0; order + 1])[g] += mult;
        }
        if let Some((w, &m)) = rest.layers[g].iter().find(|(_, &m)| m != 0) {
            return Err(Error::NegativeMultiplicity {
                weight: w.to_string(),
                grade: g,
                mult: m,
            });
        }
    }
    Ok(found)
}

fn same_algebra(a: &LevelSpec, b: &LevelSpec) -> Result<()> {
    if a.datum().spec() != b.datum().spec() {
        return Err(Error::LengthMismatch {
            expected: a.datum().rank(),
            found: b.datum().rank(),
        });
    }
    Ok(())
}

/// Decomposes `L(k,Λ̇) ⊗ L(l,Λ̈)` grade by grade into `L(k+l,Λ) ⊗ b^Λ`.
pub fn branching(spec_k: &LevelSpec, dot: &Weight, spec_l: &LevelSpec, ddot: &Weight, order: usize) -> Result<Branching> {
    same_algebra(spec_k, spec_l)?;
    guard_rank(spec_k.datum())?;
    let spec_kl = LevelSpec::new(spec_k.datum_arc().clone(), spec_k.level() + spec_l.level())?;
    let a = graded_character(spec_k, dot, order)?;
    let b = graded_character(spec_l, ddot, order)?;
    let product = a.tensor(&b);
    let mut cache = HashMap::new();
    let found = peel(&spec_kl, &product, &mut cache)?;

    let c_d = spec_k.central_charge() + spec_l.central_charge() - spec_kl.central_charge();
    let shift = c_d / Rational64::from_integer(24);
    let h_top = spec_k.conformal_weight(dot)? + spec_l.conformal_weight(ddot)?;
    let listing = spec_kl.enumerate_level_weights();
    let mut series: Vec<BranchingSeries> = found
        .into_iter()
        .map(|(lam, coeffs)| {
            let first = coeffs.iter().position(|&c| c != 0).expect("nonzero by construction");
            let weight = h_top - spec_kl.conformal_weight_unchecked(&lam) + Rational64::from_integer(first as i64);
            BranchingSeries {
                series: QSeries {
                    offset: weight - shift,
                    coeffs: coeffs[first..].to_vec(),
                    order: order - first,
                },
                conformal_weight: weight,
                first_grade: first,
                lam,
            }
        })
        .collect();
    series.sort_by_key(|s| listing.index_of(&s.lam));
    Ok(Branching {
        order,
        coset_central_charge: c_d,
        series,
    })
}

/// Result of re-assembling a tensor product from its branching functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionCheck {
    pub holds: bool,
    /// First `(grade, weight)` where the two sides differ.
    pub first_failure: Option<(usize, Weight)>,
}

/// Checks `ch L(k,Λ̇) · ch L(l,Λ̈) = Σ_Λ ch L(k+l,Λ) · b^Λ` exactly to grade `order`.
pub fn verify_decomposition(
    spec_k: &LevelSpec,
    dot: &Weight,
    spec_l: &LevelSpec,
    ddot: &Weight,
    order: usize,
) -> Result<DecompositionCheck> {
    let br = branching(spec_k, dot, spec_l, ddot, order)?;
    let spec_kl = LevelSpec::new(spec_k.datum_arc().clone(), spec_k.level() + spec_l.level())?;
    let a = graded_character(spec_k, dot, order)?;
    let b = graded_character(spec_l, ddot, order)?;
    let mut diff = a.tensor(&b);
    for s in &br.series {
        let ch = graded_character(&spec_kl, &s.lam, order)?;
        for g in 0..=order {
            let c = s.coefficient_at_grade(g);
            if c != 0 {
                diff.add_shifted(&ch, g, -c);
            }
        }
    }
    if diff.is_zero() {
        return Ok(DecompositionCheck {
            holds: true,
            first_failure: None,
        });
    }
    let (g, layer) = diff
        .layers
        .iter()
        .enumerate()
        .find(|(_, l)| l.values().any(|&m| m != 0))
        .expect("nonzero difference");
    let w = layer.iter().filter(|(_, &m)| m != 0).map(|(w, _)| w.clone()).min().expect("nonzero");
    Ok(DecompositionCheck {
        holds: false,
        first_failure: Some((g, w)),
    })
}

/// Branching for every pair `(Λ̇, Λ̈) ∈ P_+^k × P_+^l`, pairs in listing order.
pub fn branching_all(spec_k: &LevelSpec, spec_l: &LevelSpec, order: usize, exec: Exec) -> Result<Vec<((Weight, Weight), Branching)>> {
    guard_rank(spec_k.datum())?;
    let lk = spec_k.enumerate_level_weights();
    let ll = spec_l.enumerate_level_weights();
    let pairs: Vec<(Weight, Weight)> = lk
        .weights()
        .iter()
        .flat_map(|a| ll.weights().iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    exec.map_slice(&pairs, |(a, b)| branching(spec_k, a, spec_l, b, order).map(|br| ((a.clone(), b.clone()), br)))
        .into_iter()
        .collect()
}
