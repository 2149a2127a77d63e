use std::sync::Arc;

use cosetmod::affine::STRUCTURAL_TOL;
use cosetmod::characters::{self, Branching};
use cosetmod::coset::{fundamental_notation, Coset};
use cosetmod::fusion::{quantum_dimensions, verlinde, FusionTensor, ModularData};
use cosetmod::{AlgebraSpec, CosetSpec, Error, Exec, LevelSpec, RootDatum, Series, Weight};
use serde_json::{json, Value};

use crate::output::{complex_value, fmt_complex, fmt_float, num, rational, Report, Table};
use crate::CosetAction;

/// Relative tolerance for the two global-dimension routes.
const GLOBAL_DIM_TOL: f64 = 1e-6;

pub struct Outcome {
    pub report: Report,
    pub code: u8,
    /// Printed to stderr when a check fails.
    pub message: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self {
            report,
            code: 0,
            message: None,
        }
    }
}

pub struct Failure {
    pub report: Option<Box<Report>>,
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NumericCheck { .. }
            | Error::Integrality { .. }
            | Error::NegativeFusion { .. }
            | Error::NegativeMultiplicity { .. }
            | Error::LevelOverflow { .. } => 3,
            Error::Hypothesis(_) => 4,
            Error::RankGuard { .. } => 5,
            _ => 2,
        };
        Self {
            report: None,
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn datum(series: Series, rank: usize) -> Result<Arc<RootDatum>, Failure> {
    let spec = AlgebraSpec::new(series, rank)?;
    Ok(Arc::new(RootDatum::new(spec)?))
}

fn labels(w: &Weight) -> Value {
    json!(w.labels())
}

fn algebra_name(series: Series, rank: usize) -> String {
    format!("{series}{rank}")
}

fn check_entry(name: &str, deviation: f64, tolerance: f64) -> (Value, bool) {
    let pass = deviation < tolerance;
    (
        json!({ "check": name, "deviation": num(deviation), "tolerance": tolerance, "pass": pass }),
        pass,
    )
}

pub fn algebra_info(series: Series, rank: usize) -> CmdResult {
    let d = datum(series, rank)?;
    let mut r = Report::new(algebra_name(series, rank), Value::Null);
    let j: Vec<usize> = d.j_nodes().iter().map(|i| i + 1).collect();
    let norms: Vec<String> = d.root_norms().iter().map(|n| rational(*n)).collect();
    r.set("series", json!(series.to_string()));
    r.set("rank", json!(rank));
    r.set("dim", json!(d.dim()));
    r.set("dual_coxeter", json!(d.dual_coxeter()));
    r.set("positive_roots", json!(d.positive_roots().len()));
    r.set("marks", json!(d.marks()));
    r.set("comarks", json!(d.comarks()));
    r.set("center_order", json!(d.center_order()));
    r.set("J", json!(j));
    r.set("root_norms", json!(norms));
    r.set("cartan", json!(d.cartan()));
    r.set("weyl_group_order", json!(d.weyl_group_order().to_string()));

    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    let mut t = Table::new(["quantity", "value"]);
    for (k, v) in [
        ("algebra", algebra_name(series, rank)),
        ("dim", d.dim().to_string()),
        ("h∨", d.dual_coxeter().to_string()),
        ("|Δ+|", d.positive_roots().len().to_string()),
        ("marks", join(d.marks())),
        ("comarks", join(d.comarks())),
        ("|P/Q|", d.center_order().to_string()),
        (
            "J",
            format!("{{{}}}", j.iter().map(usize::to_string).collect::<Vec<_>>().join(",")),
        ),
        ("|W|", d.weyl_group_order().to_string()),
    ] {
        t.push(vec![k.to_string(), v]);
    }
    r.table = t;
    Ok(Outcome::ok(r))
}

fn matrix_table(names: &[String], dim: usize, entry: impl Fn(usize, usize) -> (f64, f64)) -> Table {
    let mut t = Table::new(std::iter::once("".to_string()).chain(names.iter().cloned()));
    for (i, name) in names.iter().enumerate().take(dim) {
        let mut row = vec![name.clone()];
        row.extend((0..dim).map(|j| {
            let (re, im) = entry(i, j);
            fmt_complex(re, im)
        }));
        t.push(row);
    }
    t
}

fn matrix_csv(names: &[String], dim: usize, entry: impl Fn(usize, usize) -> (f64, f64)) -> Table {
    let mut t = Table::new(["row", "col", "row_label", "col_label", "re", "im"]);
    for i in 0..dim {
        for j in 0..dim {
            let (re, im) = entry(i, j);
            t.push(vec![
                i.to_string(),
                j.to_string(),
                names[i].clone(),
                names[j].clone(),
                fmt_float(re),
                fmt_float(im),
            ]);
        }
    }
    t
}

fn matrix_json(dim: usize, entry: impl Fn(usize, usize) -> (f64, f64)) -> Value {
    Value::Array(
        (0..dim)
            .map(|i| {
                Value::Array(
                    (0..dim)
                        .map(|j| {
                            let (re, im) = entry(i, j);
                            complex_value(re, im)
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn smatrix(series: Series, rank: usize, level: u32, check: bool, exec: Exec) -> CmdResult {
    let spec = LevelSpec::new(datum(series, rank)?, level)?;
    let sm = spec.s_matrix(exec)?;
    let listing = sm.listing();
    let mut r = Report::new(algebra_name(series, rank), json!({ "level": level }));
    r.tolerances = json!({ "structural": STRUCTURAL_TOL });
    let names: Vec<String> = listing.weights().iter().map(|w| w.to_string()).collect();
    let hs: Vec<String> = listing
        .weights()
        .iter()
        .map(|w| spec.conformal_weight(w).map(rational))
        .collect::<Result<_, _>>()?;
    r.set("weights", json!(listing.weights().iter().map(labels).collect::<Vec<_>>()));
    r.set("conformal_weights", json!(hs));
    r.set("central_charge", json!(rational(spec.central_charge())));
    let n = sm.dim();
    let entry = |i: usize, j: usize| {
        let e = sm.entry(i, j);
        (e.re, e.im)
    };
    r.set("entries", matrix_json(n, entry));
    r.table = matrix_csv(&names, n, entry);
    r.display = Some(matrix_table(&names, n, entry));

    if !check {
        return Ok(Outcome::ok(r));
    }
    let target = 1.0 / spec.datum().center_order() as f64;
    let class_defect = sm
        .congruence_class_sums()
        .iter()
        .map(|(_, s)| (s - target).abs())
        .fold(0.0, f64::max);
    let checks = [
        check_entry("symmetry", sm.symmetry_defect(), STRUCTURAL_TOL),
        check_entry("unitarity", sm.unitarity_defect(), STRUCTURAL_TOL),
        check_entry("vacuum row normalization", sm.vacuum_norm_defect(), STRUCTURAL_TOL),
        check_entry("congruence class sums", class_defect, STRUCTURAL_TOL),
    ];
    let all = checks.iter().all(|c| c.1);
    for (c, _) in &checks {
        r.notes.push(format!(
            "check {}: deviation {} (tolerance {:e}) {}",
            c["check"].as_str().unwrap_or_default(),
            c["deviation"],
            STRUCTURAL_TOL,
            if c["pass"].as_bool() == Some(true) { "ok" } else { "FAILED" }
        ));
    }
    r.set("checks", Value::Array(checks.into_iter().map(|c| c.0).collect()));
    Ok(Outcome {
        report: r,
        code: if all { 0 } else { 3 },
        message: (!all).then(|| "S-matrix property checks failed".to_string()),
    })
}

fn fusion_rows(n: &FusionTensor, names: &[String], sparse: bool) -> (Value, Table) {
    let mut t = Table::new(["i", "j", "k", "N", "Λi", "Λj", "Λk"]);
    let mut triples = Vec::new();
    for (i, j, k, v) in n.nonzero() {
        if sparse && (i == 0 || j == 0) {
            continue;
        }
        triples.push(json!([i, j, k, v]));
        t.push(vec![
            i.to_string(),
            j.to_string(),
            k.to_string(),
            v.to_string(),
            names[i].clone(),
            names[j].clone(),
            names[k].clone(),
        ]);
    }
    (Value::Array(triples), t)
}

fn ring_checks(n: &FusionTensor, qdims: &[f64]) -> (Value, bool) {
    let unit = n.satisfies_unit_law();
    let comm = n.is_commutative();
    let assoc = n.is_associative();
    let defect = n.qdim_homomorphism_defect(qdims);
    let ok = unit && comm && assoc && defect < STRUCTURAL_TOL;
    (
        json!({
            "unit": unit,
            "commutative": comm,
            "associative": assoc,
            "qdim_homomorphism_defect": num(defect),
        }),
        ok,
    )
}

pub fn fusion(series: Series, rank: usize, level: u32, sparse: bool, tol: f64, exec: Exec) -> CmdResult {
    let spec = LevelSpec::new(datum(series, rank)?, level)?;
    let sm = spec.s_matrix(exec)?;
    let n = verlinde(&sm, tol, exec)?;
    let mut r = Report::new(algebra_name(series, rank), json!({ "level": level }));
    r.tolerances = json!({ "integrality": tol, "structural": STRUCTURAL_TOL });
    let names: Vec<String> = sm.listing().weights().iter().map(|w| w.to_string()).collect();
    r.set("weights", json!(sm.listing().weights().iter().map(labels).collect::<Vec<_>>()));
    let (triples, table) = fusion_rows(&n, &names, sparse);
    r.set("coefficients", triples);
    r.set("sparse", json!(sparse));
    let (checks, ok) = ring_checks(&n, &quantum_dimensions(&sm));
    r.set("checks", checks);
    r.table = table;
    Ok(Outcome {
        report: r,
        code: if ok { 0 } else { 3 },
        message: (!ok).then(|| "fusion ring axioms failed".to_string()),
    })
}

fn triple_value(t: &cosetmod::ModuleTriple) -> Value {
    json!([t.dot.labels(), t.ddot.labels(), t.lam.labels()])
}

#[allow(clippy::too_many_arguments)]
pub fn coset(action: CosetAction, series: Series, rank: usize, k: u32, l: u32, assume: bool, tol: f64, exec: Exec) -> CmdResult {
    let d = datum(series, rank)?;
    let mut spec = CosetSpec::new(d, k, l)?;
    let proven = spec.rationality_proven();
    if assume {
        spec = spec.assume_rational();
    }
    let c = Coset::new(spec, exec)?;
    let orbits = c.orbit_decomposition();
    let free = orbits.is_free();

    let mut r = Report::new(algebra_name(series, rank), json!({ "k": k, "l": l, "k+l": k + l }));
    r.tolerances = json!({
        "integrality": tol,
        "structural": STRUCTURAL_TOL,
        "global_dimension_relative": GLOBAL_DIM_TOL,
    });
    r.set("free_action", json!(free));
    r.set("omega_size", json!(c.omega_len()));
    r.set("group_order", json!(orbits.group_order));
    r.set("orbits", json!(orbits.orbits.len()));
    r.set(
        "rationality",
        json!(if proven { "proven" } else if assume { "assumed" } else { "not assumed" }),
    );
    if assume && !proven {
        r.warnings.push(format!(
            "rationality of the coset for {} at levels ({k}, {l}) is assumed, not proven",
            algebra_name(series, rank)
        ));
    }
    r.notes.push(format!("free action: {free}"));
    r.notes.push(format!("|Ω| = {}, |P∨/Q∨| = {}, orbits = {}", c.omega_len(), orbits.group_order, orbits.orbits.len()));

    let reps = match c.classify_irreducibles() {
        Ok(reps) => reps,
        Err(e) => {
            let mut f = Failure::from(e);
            r.set("refused", json!(f.message));
            r.table = Table::new(["free_action", "omega_size", "group_order", "refused"]);
            r.table.push(vec![free.to_string(), c.omega_len().to_string(), orbits.group_order.to_string(), f.message.clone()]);
            r.notes.clear();
            f.report = Some(Box::new(r));
            return Err(f);
        }
    };
    let notation: Vec<String> = reps.iter().map(|t| t.to_string()).collect();
    let qdims: Vec<f64> = reps.iter().map(|t| c.quantum_dimension(t)).collect::<Result<_, _>>()?;
    r.set(
        "modules",
        Value::Array(
            reps.iter()
                .zip(&notation)
                .map(|(t, s)| json!({ "triple": triple_value(t), "notation": s }))
                .collect(),
        ),
    );

    match action {
        CosetAction::Classify | CosetAction::Qdims => {
            let sizes: Vec<usize> = orbits.orbits.iter().map(|o| o.members.len()).collect();
            let mut t = Table::new(["index", "module", "labels", "qdim", "orbit_size"]);
            let mut mods = Vec::new();
            for (i, ((tr, s), q)) in reps.iter().zip(&notation).zip(&qdims).enumerate() {
                mods.push(json!({
                    "triple": triple_value(tr),
                    "notation": s,
                    "qdim": num(*q),
                    "orbit_size": sizes[i],
                }));
                t.push(vec![
                    i.to_string(),
                    s.clone(),
                    format!("{}; {}; {}", tr.dot, tr.ddot, tr.lam),
                    fmt_float(*q),
                    sizes[i].to_string(),
                ]);
            }
            r.set("modules", Value::Array(mods));
            r.table = t;
            r.notes.push(format!("{} irreducible modules", reps.len()));
            Ok(Outcome::ok(r))
        }
        CosetAction::Globaldim => {
            let closed = c.global_dimension();
            let sum = c.global_dimension_from_representatives()?;
            let rel = (closed - sum).abs() / closed;
            r.set("closed_form", num(closed));
            r.set("sum_of_squares", num(sum));
            r.set("relative_difference", num(rel));
            let mut t = Table::new(["quantity", "value"]);
            t.push(vec!["closed form".into(), fmt_float(closed)]);
            t.push(vec!["Σ qdim²".into(), fmt_float(sum)]);
            t.push(vec!["relative difference".into(), fmt_float(rel)]);
            r.table = t;
            let ok = rel < GLOBAL_DIM_TOL;
            Ok(Outcome {
                report: r,
                code: if ok { 0 } else { 3 },
                message: (!ok).then(|| format!("global dimension routes differ by {rel:e}")),
            })
        }
        CosetAction::Smatrix => {
            let s = c.coset_s_matrix()?;
            let n = s.dim();
            let entry = |i: usize, j: usize| {
                let e = s.entry(i, j);
                (e.re, e.im)
            };
            r.set("entries", matrix_json(n, entry));
            r.table = matrix_csv(&notation, n, entry);
            r.display = Some(matrix_table(&notation, n, entry));
            Ok(Outcome::ok(r))
        }
        CosetAction::Fusion => {
            let s = c.coset_s_matrix()?;
            let n = verlinde(&s, tol, exec)?;
            let (triples, table) = fusion_rows(&n, &notation, false);
            r.set("coefficients", triples);
            let (checks, ring_ok) = ring_checks(&n, &quantum_dimensions(&s));
            r.set("checks", checks);
            r.table = table;
            let mut ok = ring_ok;
            if orbits.group_order == 1 {
                let f = c.fusion_factorization(tol)?;
                r.set(
                    "factorization",
                    json!({
                        "applicable": true,
                        "entries_checked": f.entries_checked,
                        "mismatches": f.mismatches,
                        "holds": f.holds(),
                    }),
                );
                r.notes.push(format!(
                    "factorization into affine fusions: {} ({} entries, {} mismatches)",
                    if f.holds() { "verified" } else { "FAILED" },
                    f.entries_checked,
                    f.mismatches
                ));
                ok &= f.holds();
            } else {
                r.set("factorization", json!({ "applicable": false }));
            }
            Ok(Outcome {
                report: r,
                code: if ok { 0 } else { 3 },
                message: (!ok).then(|| "coset fusion checks failed".to_string()),
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn branching(series: Series, rank: usize, k: u32, l: u32, dot: &[i64], ddot: &[i64], order: usize) -> CmdResult {
    let d = datum(series, rank)?;
    let sk = LevelSpec::new(d.clone(), k)?;
    let sl = LevelSpec::new(d, l)?;
    let (dot, ddot) = (Weight::new(dot.to_vec()), Weight::new(ddot.to_vec()));
    let br: Branching = characters::branching(&sk, &dot, &sl, &ddot, order)?;
    let verified = characters::verify_decomposition(&sk, &dot, &sl, &ddot, order)?;

    let mut r = Report::new(algebra_name(series, rank), json!({ "k": k, "l": l, "k+l": k + l }));
    r.tolerances = json!({ "exact": true });
    r.set("dot", labels(&dot));
    r.set("ddot", labels(&ddot));
    r.set("order", json!(order));
    r.set("coset_central_charge", json!(rational(br.coset_central_charge)));
    r.set("decomposition_verified", json!(verified.holds));
    let mut t = Table::new(["Λ", "module", "conformal_weight", "offset", "coefficients"]);
    let mut series_out = Vec::new();
    for s in &br.series {
        series_out.push(json!({
            "lam": labels(&s.lam),
            "offset": rational(s.series.offset),
            "conformal_weight": rational(s.conformal_weight),
            "first_grade": s.first_grade,
            "coeffs": s.series.coeffs,
        }));
        t.push(vec![
            s.lam.to_string(),
            fundamental_notation(&s.lam),
            rational(s.conformal_weight),
            rational(s.series.offset),
            s.series.coeffs.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
        ]);
    }
    r.set("series", Value::Array(series_out));
    r.table = t;
    r.notes.push(format!("coset central charge {}", rational(br.coset_central_charge)));
    r.notes.push(format!("decomposition verified to grade {order}: {}", verified.holds));
    let ok = verified.holds;
    Ok(Outcome {
        report: r,
        code: if ok { 0 } else { 3 },
        message: (!ok).then(|| format!("decomposition fails at {:?}", verified.first_failure)),
    })
}
