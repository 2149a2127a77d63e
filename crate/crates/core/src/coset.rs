//! The diagonal coset `C(L(k+l,0), L(k,0) ⊗ L(l,0))`.
//!
//! Module labels are triples `(Λ̇, Λ̈, Λ) ∈ P_+^k × P_+^l × P_+^{k+l}` with
//! `Λ̇ + Λ̈ − Λ ∈ Q`. The group `P∨/Q∨` acts diagonally on them; when the
//! action is free (and the coset is rational) the orbits are exactly the
//! irreducible modules, and the coset S-matrix is a product of the three
//! affine S-matrices.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::affine::{
    max_symmetry_defect, max_unitarity_defect, LevelSpec, ModularS, SimpleCurrentTable,
    STRUCTURAL_TOL,
};
use crate::error::{Error, HypothesisViolation, Result};
use crate::exec::Exec;
use crate::fusion::{self, FusionTensor, ModularData};
use crate::liealg::{RootDatum, Series, Weight};

#[derive(Debug, Clone)]
pub struct CosetSpec {
    datum: Arc<RootDatum>,
    k: u32,
    l: u32,
    rationality_assumed: bool,
}

impl CosetSpec {
    /// Rationality is assumed by default only where it is known to hold:
    /// `E8` with one of the two levels equal to 2.
    pub fn new(datum: Arc<RootDatum>, k: u32, l: u32) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::ZeroLevel);
        }
        let mut spec = Self {
            datum,
            k,
            l,
            rationality_assumed: false,
        };
        spec.rationality_assumed = spec.rationality_proven();
        Ok(spec)
    }

    /// Records an explicit assumption that the coset is rational and C2-cofinite.
    pub fn assume_rational(mut self) -> Self {
        self.rationality_assumed = true;
        self
    }

    pub fn rationality_proven(&self) -> bool {
        let s = self.datum.spec();
        s.series() == Series::E && s.rank() == 8 && (self.k == 2 || self.l == 2)
    }

    pub fn rationality_assumed(&self) -> bool {
        self.rationality_assumed
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }
}

/// A coset module label `(Λ̇, Λ̈, Λ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleTriple {
    pub dot: Weight,
    pub ddot: Weight,
    pub lam: Weight,
}

impl fmt::Display for ModuleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            fundamental_notation(&self.dot),
            fundamental_notation(&self.ddot),
            fundamental_notation(&self.lam)
        )
    }
}

/// `2Λ1+Λ3` style rendering; the zero weight is `0`.
pub fn fundamental_notation(w: &Weight) -> String {
    let terms: Vec<String> = w
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| match a {
            1 => format!("Λ{}", i + 1),
            _ => format!("{a}Λ{}", i + 1),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[derive(Debug, Clone)]
pub struct Orbit {
    /// Index into Ω of the lex-least member.
    pub representative: usize,
    /// Indices into Ω, sorted.
    pub members: Vec<usize>,
    /// Classes of `P∨/Q∨` (indices into the simple-current tables) fixing the representative.
    pub stabilizer: Vec<usize>,
}

/// The partition of Ω into `P∨/Q∨` orbits.
#[derive(Debug, Clone)]
pub struct OrbitSet {
    pub orbits: Vec<Orbit>,
    pub group_order: usize,
}

impl OrbitSet {
    pub fn is_free(&self) -> bool {
        self.orbits.iter().all(|o| o.stabilizer.len() == 1)
    }
}

/// Coset S-matrix on orbit representatives.
#[derive(Debug, Clone)]
pub struct CosetModularS {
    index: Vec<ModuleTriple>,
    n: usize,
    entries: Vec<Complex64>,
}

impl CosetModularS {
    pub fn index(&self) -> &[ModuleTriple] {
        &self.index
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

impl ModularData for CosetModularS {
    fn dim(&self) -> usize {
        self.n
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }
}

/// Outcome of comparing coset fusion with the product of affine fusions.
#[derive(Debug, Clone)]
pub struct FactorizationCheck {
    pub entries_checked: usize,
    pub mismatches: usize,
    /// `(i, j, m, coset value, product value)` for the first mismatch.
    pub first_mismatch: Option<(usize, usize, usize, u32, u32)>,
}

impl FactorizationCheck {
    pub fn holds(&self) -> bool {
        self.mismatches == 0
    }
}

/// Precomputed affine data for the three levels `k`, `l`, `k+l`.
#[derive(Debug, Clone)]
pub struct Coset {
    spec: CosetSpec,
    exec: Exec,
    s: [Arc<ModularS>; 3],
    currents: [Arc<SimpleCurrentTable>; 3],
    omega: Vec<[usize; 3]>,
    omega_index: HashMap<[usize; 3], usize>,
}

impl Coset {
    pub fn new(spec: CosetSpec, exec: Exec) -> Result<Self> {
        let levels = [spec.k, spec.l, spec.k + spec.l];
        let mut cache: HashMap<u32, (Arc<ModularS>, Arc<SimpleCurrentTable>)> = HashMap::new();
        for &lv in &levels {
            if cache.contains_key(&lv) {
                continue;
            }
            let ls = LevelSpec::new(spec.datum.clone(), lv)?;
            let s = ls.s_matrix(exec)?;
            let t = ls.simple_current_action();
            cache.insert(lv, (Arc::new(s), Arc::new(t)));
        }
        let pick = |lv: u32| cache[&lv].clone();
        let (s0, c0) = pick(levels[0]);
        let (s1, c1) = pick(levels[1]);
        let (s2, c2) = pick(levels[2]);

        let d = &spec.datum;
        let mut omega = Vec::new();
        for (a, dot) in s0.listing().weights().iter().enumerate() {
            for (b, ddot) in s1.listing().weights().iter().enumerate() {
                let sum = dot + ddot;
                for (c, lam) in s2.listing().weights().iter().enumerate() {
                    if d.in_root_lattice(&(&sum - lam)) {
                        omega.push([a, b, c]);
                    }
                }
            }
        }
        let omega_index = omega.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        Ok(Self {
            spec,
            exec,
            s: [s0, s1, s2],
            currents: [c0, c1, c2],
            omega,
            omega_index,
        })
    }

    pub fn spec(&self) -> &CosetSpec {
        &self.spec
    }

    /// The affine S-matrices at levels `k`, `l`, `k+l`.
    pub fn affine_s(&self) -> [&ModularS; 3] {
        [&self.s[0], &self.s[1], &self.s[2]]
    }

    fn triple(&self, idx: &[usize; 3]) -> ModuleTriple {
        ModuleTriple {
            dot: self.s[0].listing().weights()[idx[0]].clone(),
            ddot: self.s[1].listing().weights()[idx[1]].clone(),
            lam: self.s[2].listing().weights()[idx[2]].clone(),
        }
    }

    fn locate(&self, t: &ModuleTriple) -> Option<[usize; 3]> {
        Some([
            self.s[0].listing().index_of(&t.dot)?,
            self.s[1].listing().index_of(&t.ddot)?,
            self.s[2].listing().index_of(&t.lam)?,
        ])
    }

    /// Ω in lex order of the three listings.
    pub fn enumerate_omega(&self) -> Vec<ModuleTriple> {
        self.omega.iter().map(|t| self.triple(t)).collect()
    }

    pub fn omega_len(&self) -> usize {
        self.omega.len()
    }

    /// Listing indices `[a, b, c]` of the `i`-th element of Ω.
    pub fn omega_indices(&self, i: usize) -> [usize; 3] {
        self.omega[i]
    }

    /// Image of the `i`-th element of Ω under class `g`.
    pub fn act(&self, g: usize, i: usize) -> usize {
        let [a, b, c] = self.omega[i];
        let image = [
            self.currents[0].apply(g, a),
            self.currents[1].apply(g, b),
            self.currents[2].apply(g, c),
        ];
        self.omega_index[&image]
    }

    pub fn group_order(&self) -> usize {
        self.currents[0].order()
    }

    pub fn orbit_decomposition(&self) -> OrbitSet {
        let g = self.group_order();
        let mut assigned = vec![false; self.omega.len()];
        let mut orbits = Vec::new();
        for i in 0..self.omega.len() {
            if assigned[i] {
                continue;
            }
            let images: Vec<usize> = (0..g).map(|h| self.act(h, i)).collect();
            let stabilizer: Vec<usize> = (0..g).filter(|&h| images[h] == i).collect();
            let mut members = images;
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                assigned[m] = true;
            }
            orbits.push(Orbit {
                representative: members[0],
                members,
                stabilizer,
            });
        }
        OrbitSet {
            orbits,
            group_order: g,
        }
    }

    pub fn free_action_check(&self) -> bool {
        self.orbit_decomposition().is_free()
    }

    fn check_hypotheses(&self, orbits: &OrbitSet) -> Result<()> {
        if !self.spec.rationality_assumed {
            return Err(Error::Hypothesis(HypothesisViolation::RationalityNotAssumed {
                algebra: self.spec.datum.spec().to_string(),
                k: self.spec.k,
                l: self.spec.l,
            }));
        }
        if let Some(o) = orbits.orbits.iter().find(|o| o.stabilizer.len() > 1) {
            let t = self.triple(&self.omega[o.representative]);
            return Err(Error::Hypothesis(HypothesisViolation::FixedPoint {
                triple: t.to_string(),
                labels: format!("{}, {}, {}", t.dot, t.ddot, t.lam),
                stabilizer_order: o.stabilizer.len(),
            }));
        }
        Ok(())
    }

    /// One lex-least representative per orbit; refuses unless the coset is
    /// assumed rational and the action on Ω is free.
    pub fn classify_irreducibles(&self) -> Result<Vec<ModuleTriple>> {
        let orbits = self.orbit_decomposition();
        self.check_hypotheses(&orbits)?;
        Ok(orbits
            .orbits
            .iter()
            .map(|o| self.triple(&self.omega[o.representative]))
            .collect())
    }

    /// Orbit representatives as indices into Ω, after the hypothesis check.
    fn representatives(&self) -> Result<Vec<usize>> {
        let orbits = self.orbit_decomposition();
        self.check_hypotheses(&orbits)?;
        Ok(orbits.orbits.iter().map(|o| o.representative).collect())
    }

    fn qdim_at(&self, idx: &[usize; 3]) -> f64 {
        (0..3)
            .map(|x| self.s[x].entry(0, idx[x]).re / self.s[x].entry(0, 0).re)
            .product()
    }

    /// Triple product of affine vacuum-row ratios.
    pub fn quantum_dimension(&self, t: &ModuleTriple) -> Result<f64> {
        let idx = self
            .locate(t)
            .filter(|idx| self.omega_index.contains_key(idx))
            .ok_or_else(|| Error::NotInOmega(t.to_string()))?;
        Ok(self.qdim_at(&idx))
    }

    /// Quantum dimensions of every element of Ω, in Ω order.
    pub fn omega_quantum_dimensions(&self) -> Vec<f64> {
        self.omega.iter().map(|idx| self.qdim_at(idx)).collect()
    }

    /// `1 / (|P/Q|² S_{k;0,0}² S_{l;0,0}² S_{k+l;0,0}²)`.
    pub fn global_dimension(&self) -> f64 {
        let p = self.spec.datum.center_order() as f64;
        let prod: f64 = self.s.iter().map(|s| s.entry(0, 0).re).product();
        1.0 / (p * p * prod * prod)
    }

    /// `Σ qdim²` over orbit representatives.
    pub fn global_dimension_from_representatives(&self) -> Result<f64> {
        let reps = self.representatives()?;
        Ok(reps
            .iter()
            .map(|&r| self.qdim_at(&self.omega[r]).powi(2))
            .sum())
    }

    fn product_entry(&self, x: &[usize; 3], y: &[usize; 3]) -> Complex64 {
        let p = self.spec.datum.center_order() as f64;
        self.s[0].entry(x[0], y[0]) * self.s[1].entry(x[1], y[1]) * self.s[2].entry(x[2], y[2]).conj() * p
    }

    /// `|P/Q| · S_k · S_l · conj(S_{k+l})` on orbit representatives.
    pub fn coset_s_matrix(&self) -> Result<CosetModularS> {
        let orbits = self.orbit_decomposition();
        self.check_hypotheses(&orbits)?;
        let reps: Vec<usize> = orbits.orbits.iter().map(|o| o.representative).collect();
        let n = reps.len();
        let rows: Vec<Vec<Complex64>> = self.exec.map_range(n, |i| {
            let x = &self.omega[reps[i]];
            reps.iter().map(|&r| self.product_entry(x, &self.omega[r])).collect()
        });
        let entries: Vec<Complex64> = rows.into_iter().flatten().collect();

        // the formula must not depend on which orbit member labels a row
        let mut drift = 0.0f64;
        for (i, o) in orbits.orbits.iter().enumerate() {
            for &m in &o.members {
                for (j, &r) in reps.iter().enumerate() {
                    let v = self.product_entry(&self.omega[m], &self.omega[r]);
                    drift = drift.max((v - entries[i * n + j]).norm());
                }
            }
        }
        if drift >= STRUCTURAL_TOL {
            return Err(Error::NumericCheck {
                check: "representative independence",
                deviation: drift,
                tolerance: STRUCTURAL_TOL,
            });
        }
        for (check, deviation) in [
            ("coset symmetry", max_symmetry_defect(&entries, n)),
            ("coset unitarity", max_unitarity_defect(&entries, n)),
        ] {
            if deviation >= STRUCTURAL_TOL {
                return Err(Error::NumericCheck {
                    check,
                    deviation,
                    tolerance: STRUCTURAL_TOL,
                });
            }
        }
        if let Some(j) = (0..n).find(|&j| entries[j].re <= 0.0 || entries[j].im.abs() >= 1e-10) {
            return Err(Error::NumericCheck {
                check: "coset vacuum row positivity",
                deviation: entries[j].norm(),
                tolerance: 1e-10,
            });
        }
        Ok(CosetModularS {
            index: reps.iter().map(|&r| self.triple(&self.omega[r])).collect(),
            n,
            entries,
        })
    }

    /// Verlinde fusion on the coset S-matrix.
    pub fn coset_fusion(&self, tol: f64) -> Result<FusionTensor> {
        let s = self.coset_s_matrix()?;
        fusion::verlinde(&s, tol, self.exec)
    }

    /// Affine fusion tensors at levels `k`, `l`, `k+l`.
    pub fn affine_fusions(&self, tol: f64) -> Result<[FusionTensor; 3]> {
        Ok([
            fusion::verlinde(self.s[0].as_ref(), tol, self.exec)?,
            fusion::verlinde(self.s[1].as_ref(), tol, self.exec)?,
            fusion::verlinde(self.s[2].as_ref(), tol, self.exec)?,
        ])
    }

    /// Compares coset fusion entrywise with `N^{(k)} · N^{(l)} · N^{(k+l)}`,
    /// lifting each representative to its three affine labels.
    pub fn fusion_factorization(&self, tol: f64) -> Result<FactorizationCheck> {
        let coset = self.coset_fusion(tol)?;
        let [nk, nl, nkl] = self.affine_fusions(tol)?;
        let reps = self.representatives()?;
        let lift: Vec<[usize; 3]> = reps.iter().map(|&r| self.omega[r]).collect();
        let n = lift.len();
        let mut check = FactorizationCheck {
            entries_checked: 0,
            mismatches: 0,
            first_mismatch: None,
        };
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    let (x, y, z) = (&lift[i], &lift[j], &lift[m]);
                    let product = nk.get(x[0], y[0], z[0]) * nl.get(x[1], y[1], z[1]) * nkl.get(x[2], y[2], z[2]);
                    let value = coset.get(i, j, m);
                    check.entries_checked += 1;
                    if value != product {
                        check.mismatches += 1;
                        check.first_mismatch.get_or_insert((i, j, m, value, product));
                    }
                }
            }
        }
        Ok(check)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::AlgebraSpec;
    use approx::assert_abs_diff_eq;

    fn coset(s: Series, r: usize, k: u32, l: u32, assume: bool) -> Coset {
        let d = Arc::new(RootDatum::new(AlgebraSpec::new(s, r).unwrap()).unwrap());
        let mut spec = CosetSpec::new(d, k, l).unwrap();
        if assume {
            spec = spec.assume_rational();
        }
        Coset::new(spec, Exec::Sequential).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    fn t(a: i64, b: i64, c: i64) -> ModuleTriple {
        ModuleTriple {
            dot: w(&[a]),
            ddot: w(&[b]),
            lam: w(&[c]),
        }
    }

    #[test]
    fn omega_sizes() {
        let c = coset(Series::E, 8, 1, 2, false);
        assert_eq!(c.omega_len(), 15);
        let c = coset(Series::A, 1, 1, 1, true);
        let omega = c.enumerate_omega();
        assert_eq!(omega.len(), 6);
        assert!(!omega.contains(&t(0, 0, 1)));
        for x in &omega {
            assert_eq!((x.dot.labels()[0] + x.ddot.labels()[0] - x.lam.labels()[0]) % 2, 0);
        }
    }

    #[test]
    fn ising_orbits() {
        let c = coset(Series::A, 1, 1, 1, true);
        let orbits = c.orbit_decomposition();
        assert_eq!(orbits.orbits.len(), 3);
        let sets: Vec<Vec<ModuleTriple>> = orbits
            .orbits
            .iter()
            .map(|o| o.members.iter().map(|&m| c.triple(&c.omega[m])).collect())
            .collect();
        assert_eq!(sets[0], vec![t(0, 0, 0), t(1, 1, 2)]);
        assert_eq!(sets[1], vec![t(0, 0, 2), t(1, 1, 0)]);
        assert_eq!(sets[2], vec![t(0, 1, 1), t(1, 0, 1)]);
        assert!(c.free_action_check());
        for o in &orbits.orbits {
            assert_eq!(o.members.len() * o.stabilizer.len(), orbits.group_order);
        }
    }

    #[test]
    fn fixed_point_refusal() {
        let c = coset(Series::A, 1, 2, 2, true);
        assert!(!c.free_action_check());
        match c.classify_irreducibles() {
            Err(Error::Hypothesis(HypothesisViolation::FixedPoint { triple, stabilizer_order, .. })) => {
                assert_eq!(triple, "(Λ1, Λ1, 2Λ1)");
                assert_eq!(stabilizer_order, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rationality_refusal() {
        let c = coset(Series::A, 1, 1, 1, false);
        assert!(matches!(
            c.classify_irreducibles(),
            Err(Error::Hypothesis(HypothesisViolation::RationalityNotAssumed { .. }))
        ));
        let c = coset(Series::E, 8, 1, 2, false);
        assert!(c.spec().rationality_assumed());
        assert_eq!(c.classify_irreducibles().unwrap().len(), 15);
    }

    #[test]
    fn ising_dimensions_and_s_matrix() {
        let c = coset(Series::A, 1, 1, 1, true);
        assert_abs_diff_eq!(c.quantum_dimension(&t(0, 0, 0)).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.quantum_dimension(&t(0, 1, 1)).unwrap(), 2f64.sqrt(), epsilon = 1e-12);
        assert!(matches!(c.quantum_dimension(&t(0, 0, 1)), Err(Error::NotInOmega(_))));
        assert_abs_diff_eq!(c.global_dimension(), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.global_dimension_from_representatives().unwrap(), 4.0, epsilon = 1e-12);

        let s = c.coset_s_matrix().unwrap();
        let h = 0.5f64.sqrt();
        let expect = [[0.5, 0.5, h], [0.5, 0.5, -h], [h, -h, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(s.entry(i, j).re, expect[i][j], epsilon = 1e-12);
            }
        }
        let n = c.coset_fusion(fusion::INTEGRALITY_TOL).unwrap();
        // σ × σ = 1 + ε
        assert_eq!((n.get(2, 2, 0), n.get(2, 2, 1), n.get(2, 2, 2)), (1, 1, 0));
        assert_eq!((n.get(1, 1, 0), n.get(1, 2, 2)), (1, 1));
    }

    #[test]
    fn qdims_constant_on_orbits() {
        for (k, l) in [(1, 1), (1, 2), (2, 3)] {
            let c = coset(Series::A, 1, k, l, true);
            let q = c.omega_quantum_dimensions();
            for o in c.orbit_decomposition().orbits {
                for &m in &o.members {
                    assert_abs_diff_eq!(q[m], q[o.representative], epsilon = 1e-9);
                }
            }
        }
    }
}
