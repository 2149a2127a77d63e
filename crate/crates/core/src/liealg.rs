//! Finite-dimensional simple Lie algebras: root data, the normalized
//! invariant form, Weyl-group walks and weight multiplicities.
//!
//! Weights are written in the basis of fundamental weights (Dynkin labels)
//! and nodes use Bourbaki numbering, stored 0-based. All lattice arithmetic
//! is exact: the form is kept as an integer matrix over a common
//! denominator.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for Series {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            other => Err(format!("unknown series `{other}` (expected one of A-G)")),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A validated (series, rank) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    series: Series,
    rank: usize,
}

impl AlgebraSpec {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if !ok {
            let reason = match series {
                Series::A => "type A needs rank >= 1",
                Series::B => "type B needs rank >= 2",
                Series::C => "type C needs rank >= 2",
                Series::D => "type D needs rank >= 3",
                Series::E => "type E needs rank 6, 7 or 8",
                Series::F => "type F needs rank 4",
                Series::G => "type G needs rank 2",
            };
            return Err(Error::InvalidAlgebra {
                series: series.to_string(),
                rank,
                reason,
            });
        }
        Ok(Self { series, rank })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Simple-root inner products `⟨α_i, α_j⟩` with long roots of length 2.
    fn simple_root_gram(&self) -> Vec<Vec<Rational64>> {
        let n = self.rank;
        let r = |a: i64, b: i64| Rational64::new(a, b);
        let mut norms = vec![r(2, 1); n];
        // (i, j, ⟨α_i, α_j⟩), 1-based Bourbaki labels
        let mut edges: Vec<(usize, usize, Rational64)> = Vec::new();
        match self.series {
            Series::A | Series::B => {
                for i in 1..n {
                    edges.push((i, i + 1, r(-1, 1)));
                }
                if self.series == Series::B {
                    norms[n - 1] = r(1, 1);
                }
            }
            Series::C => {
                for nrm in norms.iter_mut().take(n - 1) {
                    *nrm = r(1, 1);
                }
                for i in 1..n - 1 {
                    edges.push((i, i + 1, r(-1, 2)));
                }
                edges.push((n - 1, n, r(-1, 1)));
            }
            Series::D => {
                for i in 1..n - 1 {
                    edges.push((i, i + 1, r(-1, 1)));
                }
                edges.push((n - 2, n, r(-1, 1)));
            }
            Series::E => {
                edges.push((1, 3, r(-1, 1)));
                edges.push((2, 4, r(-1, 1)));
                for i in 3..n {
                    edges.push((i, i + 1, r(-1, 1)));
                }
            }
            Series::F => {
                norms[2] = r(1, 1);
                norms[3] = r(1, 1);
                edges.push((1, 2, r(-1, 1)));
                edges.push((2, 3, r(-1, 1)));
                edges.push((3, 4, r(-1, 2)));
            }
            Series::G => {
                norms[0] = r(2, 3);
                edges.push((1, 2, r(-1, 1)));
            }
        }
        let mut gram = vec![vec![Rational64::zero(); n]; n];
        for (i, nrm) in norms.into_iter().enumerate() {
            gram[i][i] = nrm;
        }
        for (i, j, v) in edges {
            gram[i - 1][j - 1] = v;
            gram[j - 1][i - 1] = v;
        }
        gram
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// An integral weight in Dynkin labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(labels: Vec<i64>) -> Self {
        Self(labels)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    /// The fundamental weight `Λ_{node+1}` (0-based node).
    pub fn fundamental(rank: usize, node: usize) -> Self {
        let mut v = vec![0; rank];
        v[node] = 1;
        Self(v)
    }

    pub fn labels(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self(self.0.iter().map(|a| a * c).collect())
    }

    pub fn into_labels(self) -> Vec<i64> {
        self.0
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// Complete combinatorial data of one simple Lie algebra.
#[derive(Debug, Clone)]
pub struct RootDatum {
    spec: AlgebraSpec,
    /// `cartan[i][j] = 2⟨α_i, α_j⟩ / ⟨α_j, α_j⟩`; row `i` is `α_i` in Dynkin labels.
    cartan: Vec<Vec<i64>>,
    root_norms: Vec<Rational64>,
    /// `⟨Λ_i, Λ_j⟩ = form_num[i][j] / form_den`.
    form_num: Vec<Vec<i64>>,
    form_den: i64,
    simple_roots: Vec<Weight>,
    positive_roots: Vec<Weight>,
    positive_root_coeffs: Vec<Vec<i64>>,
    rho: Weight,
    theta: Weight,
    dual_coxeter: i64,
    marks: Vec<i64>,
    comarks: Vec<i64>,
    center_order: i64,
    j_nodes: Vec<usize>,
    long_root_index: i64,
    cartan_det: i64,
    /// `det(A) · A⁻¹`, used for exact root-lattice coordinates.
    cartan_adj: Vec<Vec<i64>>,
}

impl RootDatum {
    /// Builds the root datum; positive roots come from reflection closure.
    pub fn new(spec: AlgebraSpec) -> Result<Self> {
        let n = spec.rank();
        let gram = spec.simple_root_gram();
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = gram[i][j] * Rational64::from_integer(2) / gram[j][j];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let root_norms: Vec<Rational64> = (0..n).map(|i| gram[i][i]).collect();

        let inverse = rational_inverse(&cartan);
        let cartan_det = integer_det(&cartan);
        let cartan_adj: Vec<Vec<i64>> = inverse
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let v = *x * Rational64::from_integer(cartan_det);
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();

        // ⟨Λ_i, Λ_m⟩ = (A⁻¹)_{im} ⟨α_m, α_m⟩ / 2
        let form: Vec<Vec<Rational64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|m| inverse[i][m] * root_norms[m] / Rational64::from_integer(2))
                    .collect()
            })
            .collect();
        let form_den = form
            .iter()
            .flatten()
            .fold(1i64, |acc, x| acc.lcm(x.denom()));
        let form_num: Vec<Vec<i64>> = form
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| (*x * Rational64::from_integer(form_den)).to_integer())
                    .collect()
            })
            .collect();

        let simple_roots: Vec<Weight> = cartan.iter().cloned().map(Weight).collect();
        let (positive_roots, positive_root_coeffs) = reflection_closure(&cartan);

        let rho = Weight(vec![1; n]);
        let (theta_idx, _) = positive_root_coeffs
            .iter()
            .enumerate()
            .max_by_key(|(_, c)| c.iter().sum::<i64>())
            .expect("nonempty root system");
        let theta = positive_roots[theta_idx].clone();
        let marks = positive_root_coeffs[theta_idx].clone();
        let comarks: Vec<i64> = marks
            .iter()
            .zip(&root_norms)
            .map(|(&a, nrm)| {
                let v = Rational64::from_integer(a) * nrm / Rational64::from_integer(2);
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect();
        let j_nodes: Vec<usize> = (0..n).filter(|&i| marks[i] == 1).collect();

        let long_root_index = root_norms.iter().fold(Rational64::from_integer(cartan_det.abs()), |acc, nrm| {
            acc * Rational64::from_integer(2) / nrm
        });
        debug_assert!(long_root_index.is_integer());

        let mut datum = Self {
            spec,
            cartan,
            root_norms,
            form_num,
            form_den,
            simple_roots,
            positive_roots,
            positive_root_coeffs,
            rho,
            theta,
            dual_coxeter: 0,
            marks,
            comarks,
            center_order: cartan_det.abs(),
            j_nodes,
            long_root_index: long_root_index.to_integer(),
            cartan_det,
            cartan_adj,
        };
        let rho_theta = datum.inner_unchecked(&datum.rho, &datum.theta);
        debug_assert!(rho_theta.is_integer());
        datum.dual_coxeter = rho_theta.to_integer() + 1;
        Ok(datum)
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `⟨α_i, α_i⟩` for each simple root.
    pub fn root_norms(&self) -> &[Rational64] {
        &self.root_norms
    }

    /// Entry `F_ij = ⟨Λ_i, Λ_j⟩` of the normalized form.
    pub fn form(&self, i: usize, j: usize) -> Rational64 {
        Rational64::new(self.form_num[i][j], self.form_den)
    }

    /// Common denominator of the form; `⟨λ, μ⟩ · form_den` is always an integer.
    pub fn form_den(&self) -> i64 {
        self.form_den
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    /// Positive roots in Dynkin labels, sorted by height.
    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// Positive roots in simple-root coordinates, aligned with [`Self::positive_roots`].
    pub fn positive_root_coeffs(&self) -> &[Vec<i64>] {
        &self.positive_root_coeffs
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn theta(&self) -> &Weight {
        &self.theta
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    /// `θ = Σ a_i α_i`.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    /// `θ∨ = Σ a_i∨ α_i∨`; `⟨Λ, θ⟩ = Σ a_i∨ λ_i`.
    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    /// `|P/Q|`.
    pub fn center_order(&self) -> i64 {
        self.center_order
    }

    /// Nodes (0-based) with mark 1; they index the nontrivial classes of `P∨/Q∨`.
    pub fn j_nodes(&self) -> &[usize] {
        &self.j_nodes
    }

    /// Class representatives of `P∨/Q∨`: `None` for the identity class, then `Some(i)` for `i ∈ J`.
    pub fn coweight_reps(&self) -> Vec<Option<usize>> {
        std::iter::once(None)
            .chain(self.j_nodes.iter().map(|&i| Some(i)))
            .collect()
    }

    /// `|P/Q_L|` where `Q_L` is spanned by the long roots.
    pub fn long_root_index(&self) -> i64 {
        self.long_root_index
    }

    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        self.rank() + 2 * self.positive_roots.len()
    }

    fn check_len(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::LengthMismatch {
                expected: self.rank(),
                found: w.rank(),
            });
        }
        Ok(())
    }

    /// `⟨λ, μ⟩ · form_den`.
    pub(crate) fn inner_scaled(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.form_num[i];
            let mut s = 0i64;
            for (j, &bj) in b.iter().enumerate() {
                s += row[j] * bj;
            }
            acc += ai * s;
        }
        acc
    }

    /// `F · μ` scaled by `form_den`: the linear functional `λ ↦ ⟨λ, μ⟩ · form_den`.
    pub(crate) fn functional(&self, mu: &Weight) -> Vec<i64> {
        (0..self.rank())
            .map(|i| {
                self.form_num[i]
                    .iter()
                    .zip(mu.labels())
                    .map(|(f, m)| f * m)
                    .sum()
            })
            .collect()
    }

    fn inner_unchecked(&self, a: &Weight, b: &Weight) -> Rational64 {
        Rational64::new(self.inner_scaled(a.labels(), b.labels()), self.form_den)
    }

    /// The normalized invariant form `⟨λ, μ⟩`, exact.
    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Result<Rational64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.inner_unchecked(a, b))
    }

    /// `⟨Λ, θ⟩`.
    pub fn level_of(&self, w: &Weight) -> i64 {
        w.labels().iter().zip(&self.comarks).map(|(a, c)| a * c).sum()
    }

    /// Coordinates of `λ` in the simple-root basis, scaled by `det(A)`.
    fn root_coords_scaled(&self, w: &Weight) -> Vec<i64> {
        let n = self.rank();
        // λ_j = Σ_i c_i A_ij, so c = (A⁻¹)ᵀ λ
        (0..n)
            .map(|i| (0..n).map(|j| self.cartan_adj[j][i] * w.labels()[j]).sum())
            .collect()
    }

    /// Exact simple-root coordinates of `λ`.
    pub fn root_coordinates(&self, w: &Weight) -> Result<Vec<Rational64>> {
        self.check_len(w)?;
        Ok(self
            .root_coords_scaled(w)
            .into_iter()
            .map(|c| Rational64::new(c, self.cartan_det))
            .collect())
    }

    /// `λ ∈ Q`, decided by integrality of the root coordinates.
    pub fn in_root_lattice(&self, w: &Weight) -> bool {
        let d = self.cartan_det;
        self.root_coords_scaled(w).iter().all(|c| c % d == 0)
    }

    /// A canonical key for the class of `λ` in `P/Q`.
    pub fn congruence_class(&self, w: &Weight) -> Vec<i64> {
        let d = self.cartan_det.abs();
        self.root_coords_scaled(w)
            .into_iter()
            .map(|c| c.rem_euclid(d))
            .collect()
    }

    /// Reflects into the dominant chamber. Returns the dominant representative
    /// and the sign of the reflecting element, or sign 0 when `λ` lies on a wall.
    pub fn to_dominant(&self, w: &Weight) -> (Weight, i8) {
        let mut labels = w.labels().to_vec();
        let mut sign = 1i8;
        while let Some(i) = labels.iter().position(|&a| a < 0) {
            self.reflect_in_place(&mut labels, i);
            sign = -sign;
        }
        if labels.contains(&0) {
            sign = 0;
        }
        (Weight(labels), sign)
    }

    /// Simple reflection `s_i`.
    pub fn reflect(&self, w: &Weight, i: usize) -> Weight {
        let mut labels = w.labels().to_vec();
        self.reflect_in_place(&mut labels, i);
        Weight(labels)
    }

    fn reflect_in_place(&self, labels: &mut [i64], i: usize) {
        let c = labels[i];
        if c != 0 {
            for (l, a) in labels.iter_mut().zip(&self.cartan[i]) {
                *l -= c * a;
            }
        }
    }

    fn dominant_labels(&self, labels: &mut [i64]) {
        while let Some(i) = labels.iter().position(|&a| a < 0) {
            self.reflect_in_place(labels, i);
        }
    }

    /// Weyl dimension formula, evaluated exactly.
    pub fn weyl_dimension(&self, hw: &Weight) -> Result<BigUint> {
        self.check_len(hw)?;
        if !hw.is_dominant() {
            return Err(Error::NotDominant(hw.to_string()));
        }
        let shifted = hw + &self.rho;
        let mut acc = BigRational::one();
        for alpha in &self.positive_roots {
            let num = self.inner_scaled(shifted.labels(), alpha.labels());
            let den = self.inner_scaled(self.rho.labels(), alpha.labels());
            acc *= BigRational::new(num.into(), den.into());
        }
        debug_assert!(acc.is_integer() && acc.is_positive());
        Ok(acc.to_integer().to_biguint().expect("positive"))
    }

    /// Calls `f` once for every element of the Weyl orbit of the dominant weight `mu`.
    ///
    /// Walks down from `mu` applying `s_i` only where label `i` is positive;
    /// each layer holds the elements whose minimal coset representative has
    /// a given length, so duplicates can only occur within a layer.
    pub fn for_each_orbit_element<F: FnMut(&[i64])>(&self, mu: &Weight, mut f: F) {
        debug_assert!(mu.is_dominant());
        let mut layer: Vec<Vec<i64>> = vec![mu.labels().to_vec()];
        while !layer.is_empty() {
            let mut next: HashSet<Vec<i64>> = HashSet::new();
            for v in &layer {
                f(v);
                for i in 0..v.len() {
                    if v[i] > 0 {
                        let mut u = v.clone();
                        self.reflect_in_place(&mut u, i);
                        next.insert(u);
                    }
                }
            }
            let mut next: Vec<Vec<i64>> = next.into_iter().collect();
            next.sort_unstable();
            layer = next;
        }
    }

    /// The Weyl orbit of a dominant weight, in walk order.
    pub fn weyl_orbit(&self, mu: &Weight) -> Vec<Weight> {
        let mut out = Vec::new();
        self.for_each_orbit_element(mu, |v| out.push(Weight(v.to_vec())));
        out
    }

    /// Dominant weights of `L(Λ)` with multiplicities (Freudenthal recursion).
    pub fn weight_system(&self, hw: &Weight) -> Result<BTreeMap<Weight, u64>> {
        self.check_len(hw)?;
        if !hw.is_dominant() {
            return Err(Error::NotDominant(hw.to_string()));
        }
        let rho = self.rho.labels();

        // dominant weights below Λ, connected through positive-root steps
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut stack = vec![hw.labels().to_vec()];
        seen.insert(hw.labels().to_vec());
        while let Some(mu) = stack.pop() {
            for alpha in &self.positive_roots {
                let nu: Vec<i64> = mu.iter().zip(alpha.labels()).map(|(a, b)| a - b).collect();
                if nu.iter().all(|&a| a >= 0) && seen.insert(nu.clone()) {
                    stack.push(nu);
                }
            }
        }
        let mut order: Vec<Vec<i64>> = seen.into_iter().collect();
        // higher weights first
        order.sort_by_key(|mu| (std::cmp::Reverse(self.inner_scaled(mu, rho)), mu.clone()));

        let top_norm = self.inner_scaled(hw.labels(), hw.labels());
        let shifted_hw: Vec<i64> = hw.labels().iter().zip(rho).map(|(a, b)| a + b).collect();
        let casimir_top = self.inner_scaled(&shifted_hw, &shifted_hw) as i128;

        let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
        mult.insert(hw.labels().to_vec(), 1);
        for mu in order.iter().skip(1) {
            let shifted: Vec<i64> = mu.iter().zip(rho).map(|(a, b)| a + b).collect();
            let denom = casimir_top - self.inner_scaled(&shifted, &shifted) as i128;
            debug_assert!(denom > 0);
            let mut numer: i128 = 0;
            for alpha in &self.positive_roots {
                let a = alpha.labels();
                let mut nu = mu.clone();
                loop {
                    for (x, y) in nu.iter_mut().zip(a) {
                        *x += y;
                    }
                    if self.inner_scaled(&nu, &nu) > top_norm {
                        break;
                    }
                    let mut dom = nu.clone();
                    self.dominant_labels(&mut dom);
                    if let Some(&m) = mult.get(&dom) {
                        numer += m as i128 * self.inner_scaled(&nu, a) as i128;
                    }
                }
            }
            let value = 2 * numer;
            debug_assert!(value % denom == 0, "Freudenthal division not exact");
            let m = value / denom;
            if m > 0 {
                mult.insert(mu.clone(), m as u64);
            }
        }
        Ok(mult.into_iter().map(|(k, v)| (Weight(k), v)).collect())
    }

    /// Every weight of `L(Λ)` with multiplicity, orbit-expanded from [`Self::weight_system`].
    pub fn all_weights(&self, hw: &Weight) -> Result<Vec<(Weight, u64)>> {
        let sys = self.weight_system(hw)?;
        let mut out = Vec::new();
        for (mu, m) in &sys {
            self.for_each_orbit_element(mu, |v| out.push((Weight(v.to_vec()), *m)));
        }
        Ok(out)
    }

    /// `|W|` from the identity `|W| = Π_{α>0} (ht α + 1) / ht α`.
    pub fn weyl_group_order(&self) -> u128 {
        let mut acc = BigRational::one();
        for c in &self.positive_root_coeffs {
            let h: i64 = c.iter().sum();
            acc *= BigRational::new((h + 1).into(), h.into());
        }
        acc.to_integer().to_u128().expect("fits")
    }
}

/// Positive roots by reflection closure from the simple roots.
///
/// `s_i` permutes the positive roots other than `α_i`, and every non-simple
/// positive root is `s_i` of a lower one, so the closure over positive
/// results reaches them all.
fn reflection_closure(cartan: &[Vec<i64>]) -> (Vec<Weight>, Vec<Vec<i64>>) {
    let n = cartan.len();
    let mut found: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    let mut queue: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for (i, row) in cartan.iter().enumerate() {
        let mut c = vec![0; n];
        c[i] = 1;
        found.insert(c.clone(), row.clone());
        queue.push((c, row.clone()));
    }
    while let Some((coeffs, labels)) = queue.pop() {
        for i in 0..n {
            let p = labels[i];
            if p == 0 {
                continue;
            }
            let mut c2 = coeffs.clone();
            c2[i] -= p;
            if c2.iter().any(|&x| x < 0) || c2.iter().all(|&x| x == 0) {
                continue;
            }
            if found.contains_key(&c2) {
                continue;
            }
            let l2: Vec<i64> = labels.iter().zip(&cartan[i]).map(|(a, b)| a - p * b).collect();
            found.insert(c2.clone(), l2.clone());
            queue.push((c2, l2));
        }
    }
    let mut roots: Vec<(Vec<i64>, Vec<i64>)> = found.into_iter().collect();
    roots.sort_by_key(|(c, _)| (c.iter().sum::<i64>(), std::cmp::Reverse(c.clone())));
    let coeffs = roots.iter().map(|(c, _)| c.clone()).collect();
    let labels = roots.into_iter().map(|(_, l)| Weight(l)).collect();
    (labels, coeffs)
}

fn rational_inverse(m: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational64> = row.iter().map(|&x| Rational64::from_integer(x)).collect();
            r.extend((0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("Cartan matrix is invertible");
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn integer_det(m: &[Vec<i64>]) -> i64 {
    // Bareiss fraction-free elimination
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}
