//! Label-level checks used by several test targets.

use std::collections::BTreeMap;

use orbit_strata::{
    e2, solve_system, verify_label, BundleSector, CohClass2, CohClass4, HoweSignature, Int,
    ManifoldModel, OrbitTypeLabel, SolutionKind, SolveOptions,
};

use super::oracle::{box_solutions, OracleManifold, RawLabel};

pub fn raw(label: &OrbitTypeLabel) -> RawLabel {
    RawLabel {
        alpha2: label.alpha2.iter().map(|a| (a.free.clone(), a.torsion.clone())).collect(),
        alpha4: label.alpha4.iter().map(|a| a.coeff).collect(),
    }
}

/// Every completion of `raw` by some `xi` that the library accepts.
pub fn completions(
    j: &HoweSignature,
    raw: &RawLabel,
    model: &ManifoldModel,
    sector: &BundleSector,
) -> Vec<OrbitTypeLabel> {
    let g = j.g() as Int;
    model
        .h1_mod_elements(g)
        .into_iter()
        .map(|xi| OrbitTypeLabel {
            j: j.clone(),
            alpha2: raw
                .alpha2
                .iter()
                .map(|(f, t)| CohClass2 { free: f.clone(), torsion: t.clone() })
                .collect(),
            alpha4: raw.alpha4.iter().map(|&a| CohClass4::new(a)).collect(),
            xi,
        })
        .filter(|l| verify_label(l, model, sector).unwrap_or(false))
        .collect()
}

/// `g beta_g(xi) = 0` and `E_m^(2)(alpha) = 0`.
pub fn structural_identities(label: &OrbitTypeLabel, model: &ManifoldModel) -> Result<(), String> {
    let j = &label.j;
    let g = j.g() as Int;
    let beta = model.bockstein(g).apply(&label.xi);
    let free_ok = beta.free.iter().all(|&x| g * x == 0);
    let tors_ok = beta.torsion.iter().zip(model.h1_torsion()).all(|(&t, &d)| (g * t) % d == 0);
    if !free_ok || !tors_ok {
        return Err(format!("g * beta(xi) != 0 for {label:?}"));
    }
    let m: Vec<Int> = j.m().iter().map(|&x| x as Int).collect();
    let sum = e2(j, &m, &label.alpha2, model).map_err(|e| e.to_string())?;
    if !sum.is_zero() {
        return Err(format!("E_m^(2) = {sum} for {label:?}"));
    }
    Ok(())
}

/// Compares `solve_system` with the box oracle on the box of radius `bound`.
///
/// Finite sets must agree exactly on the box, including the number of `xi`
/// per class. For an infinite set every oracle point must belong to the
/// reported family and every listed representative inside the box must be an
/// oracle point.
pub fn compare_with_oracle(
    j: &HoweSignature,
    model: &ManifoldModel,
    oracle_model: &OracleManifold,
    c2: Int,
    bound: Int,
) -> Result<(), String> {
    let sector = BundleSector::new(c2);
    let set = solve_system(j, model, &sector, &SolveOptions::with_bound(bound))
        .map_err(|e| format!("{j}: {e}"))?;
    let expected = box_solutions(j.k(), j.m(), oracle_model, c2, bound);
    let r = j.r();
    let free4: Vec<usize> = (0..r).filter(|&i| j.k()[i] > 1 && model.h4_rank() == 1).collect();
    let boxed4 = &free4[..free4.len().saturating_sub(1)];
    let in_box = |l: &OrbitTypeLabel| {
        l.alpha2.iter().all(|a| a.free.iter().all(|x| x.abs() <= bound))
            && boxed4.iter().all(|&i| l.alpha4[i].coeff.abs() <= bound)
    };
    let ctx = format!("{j} on {} with c2 = {c2}, bound {bound}", model.name());

    for (raw_label, &mult) in &expected {
        let full = completions(j, raw_label, model, &sector);
        if full.len() != mult {
            return Err(format!("{ctx}: {raw_label:?} has {} xi, oracle {mult}", full.len()));
        }
    }
    for l in &set.labels {
        if !verify_label(l, model, &sector).map_err(|e| e.to_string())? {
            return Err(format!("{ctx}: emitted label fails verification: {l:?}"));
        }
        structural_identities(l, model).map_err(|e| format!("{ctx}: {e}"))?;
    }
    match set.kind {
        SolutionKind::Empty => {
            if !expected.is_empty() {
                return Err(format!("{ctx}: solver empty, oracle found {}", expected.len()));
            }
        }
        SolutionKind::Finite => {
            let mut got: BTreeMap<RawLabel, usize> = BTreeMap::new();
            for l in set.labels.iter().filter(|l| in_box(l)) {
                *got.entry(raw(l)).or_default() += 1;
            }
            if got != expected {
                return Err(format!("{ctx}: solver {got:?} != oracle {expected:?}"));
            }
        }
        SolutionKind::Infinite => {
            let family = set.family.as_ref().ok_or_else(|| format!("{ctx}: no family"))?;
            for raw_label in expected.keys() {
                for l in completions(j, raw_label, model, &sector) {
                    if !family.contains(&l) {
                        return Err(format!("{ctx}: oracle point outside family: {l:?}"));
                    }
                }
            }
            for l in set.labels.iter().filter(|l| in_box(l)) {
                if !expected.contains_key(&raw(l)) {
                    return Err(format!("{ctx}: representative unknown to oracle: {l:?}"));
                }
            }
        }
    }
    Ok(())
}
