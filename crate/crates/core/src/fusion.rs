//! Verlinde fusion coefficients and quantum dimensions for any unitary,
//! symmetric S-matrix whose index 0 is the vacuum.

use num_complex::Complex64;

use crate::affine::ModularS;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Default distance-to-integer tolerance for Verlinde values.
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// Anything shaped like a modular S-matrix.
pub trait ModularData: Sync {
    fn dim(&self) -> usize;
    fn entry(&self, i: usize, j: usize) -> Complex64;
}

impl ModularData for ModularS {
    fn dim(&self) -> usize {
        ModularS::dim(self)
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        ModularS::entry(self, i, j)
    }
}

/// Nonnegative integer fusion coefficients `N_{ij}^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionTensor {
    n: usize,
    coeffs: Vec<u32>,
}

impl FusionTensor {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> u32) -> Self {
        let mut coeffs = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    coeffs.push(f(i, j, k));
                }
            }
        }
        Self { n, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.coeffs[(i * self.n + j) * self.n + k]
    }

    /// Nonzero entries as `(i, j, k, N)` in index order.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, u32)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if v != 0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    /// `N_{0j}^k = δ_{jk}` and `N_{j0}^k = δ_{jk}`.
    pub fn satisfies_unit_law(&self) -> bool {
        let n = self.n;
        (0..n).all(|j| {
            (0..n).all(|k| {
                let e = u32::from(j == k);
                self.get(0, j, k) == e && self.get(j, 0, k) == e
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.get(i, j, k) == self.get(j, i, k))))
    }

    /// `Σ_m N_{ij}^m N_{mk}^p = Σ_m N_{jk}^m N_{im}^p` for all `i, j, k, p`.
    pub fn is_associative(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for p in 0..n {
                        let mut lhs = 0u64;
                        let mut rhs = 0u64;
                        for m in 0..n {
                            lhs += self.get(i, j, m) as u64 * self.get(m, k, p) as u64;
                            rhs += self.get(j, k, m) as u64 * self.get(i, m, p) as u64;
                        }
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `max |Σ_k N_{ij}^k d_k − d_i d_j|`.
    pub fn qdim_homomorphism_defect(&self, qdims: &[f64]) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let lhs: f64 = (0..n).map(|k| self.get(i, j, k) as f64 * qdims[k]).sum();
                worst = worst.max((lhs - qdims[i] * qdims[j]).abs());
            }
        }
        worst
    }
}

/// Fusion coefficients from the Verlinde formula, with `S⁻¹ = S†`.
///
/// Every raw value must be within `tol` of a nonnegative integer; the error
/// names the worst offender.
pub fn verlinde<S: ModularData + ?Sized>(s: &S, tol: f64, exec: Exec) -> Result<FusionTensor> {
    let n = s.dim();
    let m: Vec<Complex64> = (0..n * n).map(|x| s.entry(x / n, x % n)).collect();
    let vac: Vec<Complex64> = (0..n).map(|a| m[a]).collect();
    if let Some(a) = vac.iter().position(|v| v.norm() < 1e-300) {
        return Err(Error::NumericCheck {
            check: "nonzero vacuum row",
            deviation: vac[a].norm(),
            tolerance: 0.0,
        });
    }

    let raw: Vec<Vec<Complex64>> = exec.map_range(n * n, |ij| {
        let (i, j) = (ij / n, ij % n);
        let weights: Vec<Complex64> = (0..n).map(|a| m[i * n + a] * m[j * n + a] / vac[a]).collect();
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, w) in weights.iter().enumerate() {
                    acc += w * m[k * n + a].conj();
                }
                acc
            })
            .collect()
    });

    let mut worst: Option<(usize, usize, usize, f64, f64)> = None;
    let mut coeffs = Vec::with_capacity(n * n * n);
    for (ij, row) in raw.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let rounded = v.re.round();
            let dist = (v - Complex64::new(rounded, 0.0)).norm();
            if worst.is_none_or(|w| dist > w.4) {
                worst = Some((ij / n, ij % n, k, v.re, dist));
            }
            if rounded < 0.0 && dist <= tol {
                return Err(Error::NegativeFusion {
                    i: ij / n,
                    j: ij % n,
                    k,
                    value: rounded as i64,
                });
            }
            coeffs.push(rounded.max(0.0) as u32);
        }
    }
    if let Some((i, j, k, value, distance)) = worst {
        if distance > tol {
            return Err(Error::Integrality {
                i,
                j,
                k,
                value,
                distance,
                tolerance: tol,
            });
        }
    }
    Ok(FusionTensor { n, coeffs })
}

/// Truncated Clebsch–Gordan rule for `sl2` at level `k` (labels are Dynkin labels).
pub fn sl2_fusion_oracle(k: u32, a: u32, b: u32, c: u32) -> Result<u32> {
    if a > k || b > k || c > k {
        return Err(Error::OutOfRange(format!("({a}, {b}, {c}) at level {k}")));
    }
    let (a, b, c, k) = (a as i64, b as i64, c as i64, k as i64);
    let ok = (a - b).abs() <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0;
    Ok(u32::from(ok))
}

/// `qdim_i = S_{0,i} / S_{0,0}`.
pub fn quantum_dimensions<S: ModularData + ?Sized>(s: &S) -> Vec<f64> {
    let s00 = s.entry(0, 0).re;
    (0..s.dim()).map(|i| s.entry(0, i).re / s00).collect()
}
