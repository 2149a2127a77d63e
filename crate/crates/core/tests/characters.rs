mod common;

use std::collections::BTreeMap;

use common::{convolve, level, partitions, w};
use cosetmod::characters::{affine_character, branching, branching_all, verify_decomposition, Branching};
use cosetmod::{Error, Exec, LevelSpec, Series, Weight};
use num_rational::Rational64;
use num_traits::ToPrimitive;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// `Σ_{n∈ℤ} q^{(n+s)²}` as integer-offset coefficients above `q^{s²}`, for `s ∈ {0, 1/2}`.
fn theta(half: bool, order: usize) -> Vec<i64> {
    let mut out = vec![0i64; order + 1];
    for n in -20i64..=20 {
        let e = if half { n * n + n } else { n * n };
        if (0..=order as i64).contains(&e) {
            out[e as usize] += 1;
        }
    }
    out
}

#[test]
fn a1_level_one_is_theta_over_eta() {
    let spec = level(Series::A, 1, 1);
    let order = 10;
    for (lam, half) in [(0, false), (1, true)] {
        let (_, q) = affine_character(&spec, &w(&[lam]), order).unwrap();
        let want = convolve(&theta(half, order), &partitions(order), order);
        assert_eq!(q.coeffs, want, "Λ = {lam}Λ1");
        let h = if half { r(1, 4) } else { r(0, 1) };
        assert_eq!(q.offset, h - r(1, 24));
    }
}

#[test]
fn grade_zero_layer_is_the_finite_module() {
    for (s, rank, k) in [(Series::A, 2, 2), (Series::B, 2, 2), (Series::C, 3, 1), (Series::A, 3, 1), (Series::G, 2, 2)] {
        let spec = level(s, rank, k);
        for hw in spec.enumerate_level_weights().weights() {
            let (ch, q) = affine_character(&spec, hw, 1).unwrap();
            let finite: BTreeMap<Weight, i64> = spec
                .datum()
                .weight_system(hw)
                .unwrap()
                .into_iter()
                .map(|(k, v)| (k, v as i64))
                .collect();
            assert_eq!(ch.grade(0), &finite, "{s}{rank} {hw}");
            assert_eq!(q.coeffs[0], spec.datum().weyl_dimension(hw).unwrap().to_i64().unwrap());
        }
    }
}

#[test]
fn adjoint_appears_at_grade_one_of_the_vacuum() {
    // the grade-1 space of L(k,0) is a copy of the adjoint
    for (s, rank) in [(Series::A, 2), (Series::B, 3), (Series::G, 2)] {
        let spec = level(s, rank, 1);
        let (_, q) = affine_character(&spec, &Weight::zero(rank), 1).unwrap();
        assert_eq!(q.coeffs[1] as usize, spec.datum().dim());
    }
}

/// Rocha-Caridi character of the `(p, p') = (4, 3)` minimal model, coefficients
/// above its leading exponent, plus that exponent.
fn ising(r_: i64, s_: i64, order: usize) -> (Rational64, Vec<i64>) {
    let (p, pp) = (4i64, 3i64);
    let mut terms: Vec<(Rational64, i64)> = Vec::new();
    for n in -10i64..=10 {
        let a = 2 * p * pp * n + p * r_ - pp * s_;
        let b = 2 * p * pp * n + p * r_ + pp * s_;
        terms.push((r(a * a, 4 * p * pp) - r(1, 24), 1));
        terms.push((r(b * b, 4 * p * pp) - r(1, 24), -1));
    }
    let lead = terms.iter().map(|t| t.0).min().unwrap();
    let mut num = vec![0i64; order + 1];
    for (e, c) in terms {
        let gap = e - lead;
        assert!(gap.is_integer());
        let g = gap.to_integer() as usize;
        if g <= order {
            num[g] += c;
        }
    }
    (lead, convolve(&num, &partitions(order), order))
}

fn series_for<'a>(br: &'a Branching, lam: &[i64]) -> Option<&'a cosetmod::characters::BranchingSeries> {
    br.series.iter().find(|s| s.lam.labels() == lam)
}

#[test]
fn ising_branching_functions() {
    let one = level(Series::A, 1, 1);
    let order = 10;
    let (e0, c0) = ising(1, 1, order);
    let (e_eps, c_eps) = ising(1, 3, order);
    let (e_sig, c_sig) = ising(1, 2, order);
    assert_eq!(e0, r(-1, 48));

    let br = branching(&one, &w(&[0]), &one, &w(&[0]), order).unwrap();
    assert_eq!(br.series.len(), 2);
    assert!(series_for(&br, &[1]).is_none());
    let b0 = series_for(&br, &[0]).unwrap();
    let b2 = series_for(&br, &[2]).unwrap();
    assert_eq!((b0.series.offset, &b0.series.coeffs), (e0, &c0));
    assert_eq!(b2.series.offset, e_eps);
    assert_eq!(b2.series.coeffs, c_eps[..b2.series.coeffs.len()].to_vec());
    assert_eq!(b2.series.coeffs.len(), order);
    assert_eq!((b0.conformal_weight, b2.conformal_weight), (r(0, 1), r(1, 2)));

    let br = branching(&one, &w(&[0]), &one, &w(&[1]), order).unwrap();
    let b1 = series_for(&br, &[1]).unwrap();
    assert_eq!((b1.series.offset, &b1.series.coeffs), (e_sig, &c_sig));
    assert_eq!(b1.conformal_weight, r(1, 16));

    // the π-image of (0, 0) is (Λ1, Λ1)
    let br = branching(&one, &w(&[1]), &one, &w(&[1]), order).unwrap();
    assert_eq!(series_for(&br, &[2]).unwrap().series.coeffs, c0);
    assert_eq!(series_for(&br, &[0]).unwrap().conformal_weight, r(1, 2));
}

#[test]
fn decompositions_hold() {
    for (s, rank, k, l, order) in [(Series::A, 1, 1, 1, 10), (Series::A, 1, 1, 2, 8), (Series::A, 1, 2, 2, 6), (Series::A, 2, 1, 1, 6), (Series::B, 2, 1, 1, 4)] {
        let (sk, sl) = (level(s, rank, k), level(s, rank, l));
        for a in sk.enumerate_level_weights().weights() {
            for b in sl.enumerate_level_weights().weights() {
                let check = verify_decomposition(&sk, a, &sl, b, order).unwrap();
                assert!(check.holds, "{s}{rank} ({k},{l}) {a} {b}: {:?}", check.first_failure);
            }
        }
    }
}

#[test]
fn branching_respects_root_lattice_and_positivity() {
    for (s, rank, k, l) in [(Series::A, 1, 1, 2), (Series::A, 2, 1, 1), (Series::A, 2, 1, 2), (Series::C, 2, 1, 1)] {
        let (sk, sl) = (level(s, rank, k), level(s, rank, l));
        let all = branching_all(&sk, &sl, 5, Exec::Parallel).unwrap();
        for ((a, b), br) in &all {
            for s in &br.series {
                assert!(sk.datum().in_root_lattice(&(&(a + b) - &s.lam)));
                assert!(s.series.coeffs[0] >= 1);
                assert!(s.series.coeffs.iter().all(|&c| c >= 0));
                assert!(s.conformal_weight >= r(0, 1));
            }
        }
    }
}

#[test]
fn branching_is_symmetric_in_the_factors() {
    let (one, two) = (level(Series::A, 1, 1), level(Series::A, 1, 2));
    for a in 0..=1 {
        for b in 0..=2 {
            let x = branching(&one, &w(&[a]), &two, &w(&[b]), 6).unwrap();
            let y = branching(&two, &w(&[b]), &one, &w(&[a]), 6).unwrap();
            assert_eq!(x.series, y.series);
        }
    }
}

#[test]
fn branching_is_invariant_under_the_current_action() {
    let (one, two) = (level(Series::A, 2, 1), level(Series::A, 2, 1));
    let three = LevelSpec::new(one.datum_arc().clone(), 2).unwrap();
    let (t1, t2) = (one.simple_current_action(), three.simple_current_action());
    let l1 = one.enumerate_level_weights();
    let l2 = three.enumerate_level_weights();
    for (i, a) in l1.weights().iter().enumerate() {
        for (j, b) in l1.weights().iter().enumerate() {
            let base = branching(&one, a, &two, b, 5).unwrap();
            for c in 1..t1.order() {
                let (ia, ib) = (t1.apply(c, i), t1.apply(c, j));
                let moved = branching(&one, &l1.weights()[ia], &two, &l1.weights()[ib], 5).unwrap();
                for s in &base.series {
                    let lam_idx = l2.index_of(&s.lam).unwrap();
                    let image = &l2.weights()[t2.apply(c, lam_idx)];
                    let other = moved.series.iter().find(|x| &x.lam == image).unwrap();
                    // the two series agree wherever both are known
                    let shift = other.first_grade as i64 - s.first_grade as i64;
                    assert_eq!(other.conformal_weight, s.conformal_weight);
                    let len = s.series.coeffs.len().min(other.series.coeffs.len());
                    assert_eq!(&s.series.coeffs[..len], &other.series.coeffs[..len], "shift {shift}");
                }
            }
        }
    }
}

#[test]
fn zero_weight_triples() {
    // conformal weight 0 occurs exactly at (kΛ_i, lΛ_i, (k+l)Λ_i), i ∈ J ∪ {0}
    for (s, rank, k, l) in [(Series::A, 1, 1, 1), (Series::A, 1, 1, 2), (Series::A, 2, 1, 1), (Series::C, 2, 1, 1), (Series::B, 2, 1, 2)] {
        let (sk, sl) = (level(s, rank, k), level(s, rank, l));
        let d = sk.datum();
        let mut expected: Vec<(Weight, Weight, Weight)> = vec![(Weight::zero(rank), Weight::zero(rank), Weight::zero(rank))];
        for &j in d.j_nodes() {
            let f = Weight::fundamental(rank, j);
            expected.push((f.scale(k as i64), f.scale(l as i64), f.scale((k + l) as i64)));
        }
        expected.sort();
        let mut found = Vec::new();
        for ((a, b), br) in branching_all(&sk, &sl, 3, Exec::Parallel).unwrap() {
            for s in &br.series {
                if s.conformal_weight == r(0, 1) {
                    found.push((a.clone(), b.clone(), s.lam.clone()));
                }
            }
        }
        found.sort();
        assert_eq!(found, expected, "{s}{rank} ({k},{l})");
    }
}

#[test]
fn guards() {
    let e8 = level(Series::E, 8, 1);
    assert!(matches!(branching(&e8, &Weight::zero(8), &e8, &Weight::zero(8), 2), Err(Error::RankGuard { .. })));
    let a1 = level(Series::A, 1, 1);
    assert!(branching(&a1, &w(&[2]), &a1, &w(&[0]), 2).is_err());
}
