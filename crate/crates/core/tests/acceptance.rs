//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use common::checks::{compare_with_oracle, structural_identities};
use common::oracle::{box_solutions, divisor_count, signature_multisets, OracleManifold};
use orbit_strata::classifying::{integral_ring, modg_ring, postnikov5};
use orbit_strata::nodes::{charge_lattice, enumerate_strata, node_coefficient};
use orbit_strata::solver::FamilyCondition;
use orbit_strata::{
    builtin_manifold, classify, classify_signatures, enumerate_classes, enumerate_signatures,
    solve_system, verify_label, BundleSector, Catalog, HoweSignature, Int, ManifoldModel,
    SolutionKind, SolveOptions,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sig(s: &str) -> HoweSignature {
    s.parse().expect("valid signature")
}

fn model(name: &str, params: &[Int]) -> ManifoldModel {
    builtin_manifold(name, params).expect("catalog model")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_classify(n: u32, m: &ManifoldModel, c2: Int) -> Result<Catalog, String> {
    classify(n, m, &BundleSector::new(c2), &SolveOptions::default()).map_err(|e| e.to_string())
}

fn class_count(cat: &Catalog, j: &str) -> usize {
    cat.stratum(&sig(j)).map_or(0, |s| s.solutions.classes.len())
}

fn total_classes(cat: &Catalog) -> usize {
    cat.strata.iter().map(|s| s.solutions.classes.len()).sum()
}

/// Dimension-four catalog manifolds plus surfaces.
fn catalog_models() -> Vec<ManifoldModel> {
    vec![
        model("S4", &[]),
        model("S2xS2", &[]),
        model("T4", &[]),
        model("LensP3xS1", &[2]),
        model("LensP3xS1", &[3]),
        model("LensP3xS1", &[4]),
        model("LensP3xS1", &[5]),
        model("Sigma", &[0]),
        model("Sigma", &[1]),
        model("Sigma", &[2]),
    ]
}

fn sectors(m: &ManifoldModel) -> Vec<Int> {
    if m.h4_rank() == 0 {
        vec![0]
    } else {
        vec![-3, -2, -1, 0, 1, 2, 3, 4]
    }
}

fn criterion_1() -> Outcome {
    for (n, expected) in [(2, 3), (3, 5), (4, 11)] {
        let got = enumerate_classes(n).map_err(|e| e.to_string())?.len();
        ensure(got == expected, || format!("|K^({n})| = {got}, expected {expected}"))?;
    }
    for n in 1..=8 {
        let classes = enumerate_classes(n).map_err(|e| e.to_string())?;
        let oracle = signature_multisets(n);
        ensure(classes.len() == oracle.len(), || {
            format!("n = {n}: {} classes, oracle {}", classes.len(), oracle.len())
        })?;
        for j in &classes {
            let mut pairs: Vec<(u32, u32)> = j.pairs().collect();
            pairs.sort();
            ensure(oracle.contains(&pairs), || format!("{j} not an oracle multiset"))?;
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let s4 = model("S4", &[]);
    let cat = run_classify(2, &s4, 0)?;
    ensure(total_classes(&cat) == 3, || format!("trivial sector: {} types", total_classes(&cat)))?;
    for j in ["1|2", "1,1|1,1", "2|1"] {
        ensure(class_count(&cat, j) == 1, || format!("({j}) missing in trivial sector"))?;
    }
    for c2 in [-5, -2, -1, 1, 2, 7] {
        let cat = run_classify(2, &s4, c2)?;
        ensure(total_classes(&cat) == 1 && class_count(&cat, "2|1") == 1, || {
            format!("c2 = {c2}: {} types", total_classes(&cat))
        })?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let m = model("S2xS2", &[]);
    let oracle_model = OracleManifold::s2xs2();
    for (l, expected) in [(1u64, 1usize), (2, 2), (6, 4), (12, 6)] {
        let c2 = 2 * l as Int;
        let cat = run_classify(2, &m, c2)?;
        let got = class_count(&cat, "1,1|1,1");
        let bound = 2 * l as Int;
        let oracle: std::collections::BTreeSet<_> =
            box_solutions(&[1, 1], &[1, 1], &oracle_model, c2, bound)
                .into_keys()
                .map(|mut raw| {
                    raw.alpha2.sort();
                    raw
                })
                .collect();
        ensure(
            got == expected && oracle.len() == expected && divisor_count(l) == expected,
            || format!("l = {l}: solver {got}, oracle {}, expected {expected}", oracle.len()),
        )?;
        ensure(class_count(&cat, "1|2") == 0 && class_count(&cat, "2|1") == 1, || {
            format!("l = {l}: unexpected Z2 or generic count")
        })?;
    }
    for c2 in [-3, 1, 3, 5] {
        let cat = run_classify(2, &m, c2)?;
        ensure(total_classes(&cat) == 1 && class_count(&cat, "2|1") == 1, || {
            format!("odd c2 = {c2}: {} types", total_classes(&cat))
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    for (p, z2, u1) in [(4, 4, 3), (5, 2, 3)] {
        let cat = run_classify(2, &model("LensP3xS1", &[p]), 0)?;
        let got =
            (class_count(&cat, "1|2"), class_count(&cat, "1,1|1,1"), class_count(&cat, "2|1"));
        ensure(got == (z2, u1, 1), || format!("p = {p}: got {got:?}, expected ({z2}, {u1}, 1)"))?;
    }
    Ok(())
}

fn pfaffian(a: &[Int]) -> Int {
    // basis order 12, 13, 14, 23, 24, 34
    a[0] * a[5] - a[1] * a[4] + a[2] * a[3]
}

fn criterion_5() -> Outcome {
    let t4 = model("T4", &[]);
    let cat = run_classify(2, &t4, 0)?;
    let z2 = class_count(&cat, "1|2");
    ensure(z2 == 16, || format!("{z2} Z2 strata on T4"))?;
    for m in [-2, -1, 1, 3] {
        let c2 = 2 * m;
        let cat = run_classify(2, &t4, c2)?;
        let s = cat.stratum(&sig("1,1|1,1")).ok_or("no U(1) stratum")?;
        ensure(s.solutions.kind == SolutionKind::Infinite, || format!("m = {m}: not infinite"))?;
        let fam = s.solutions.family.as_ref().ok_or("no family")?;
        ensure(fam.rank() == 6 && fam.charge_basis == vec![vec![1, -1]], || {
            format!("m = {m}: rank {}, charge basis {:?}", fam.rank(), fam.charge_basis)
        })?;
        let expected_gram: Vec<Vec<Int>> =
            fam.intersection_form.iter().map(|row| row.iter().map(|x| -2 * x).collect()).collect();
        ensure(fam.gram == expected_gram, || format!("m = {m}: gram {:?}", fam.gram))?;
        ensure(fam.condition == FamilyCondition::Quadratic { c2 }, || {
            format!("m = {m}: condition {:?}", fam.condition)
        })?;
        ensure(!s.solutions.classes.is_empty(), || format!("m = {m}: no representative"))?;
        for l in &s.solutions.classes {
            let a = &l.alpha2[0].free;
            ensure(
                -2 * pfaffian(a) == c2 && l.alpha2[1].free.iter().zip(a).all(|(x, y)| *x == -y),
                || format!("m = {m}: representative {a:?} fails substitution"),
            )?;
            ensure(verify_label(l, &t4, &BundleSector::new(c2)).unwrap_or(false), || {
                format!("m = {m}: representative fails verification")
            })?;
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let j = sig("2|2");
    for m in catalog_models() {
        for c2 in sectors(&m) {
            let set = solve_system(&j, &m, &BundleSector::new(c2), &SolveOptions::default())
                .map_err(|e| e.to_string())?;
            let ctx = format!("{} c2 = {c2}", m.name());
            if c2 % 2 != 0 {
                ensure(set.kind == SolutionKind::Empty, || format!("{ctx}: nonempty for odd c2"))?;
                continue;
            }
            let xis = m.h1_mod_elements(2);
            ensure(set.kind == SolutionKind::Finite && set.labels.len() == xis.len(), || {
                format!(
                    "{ctx}: {:?} with {} labels, |H1(M,Z2)| = {}",
                    set.kind,
                    set.labels.len(),
                    xis.len()
                )
            })?;
            let mut seen: Vec<_> = set.labels.iter().map(|l| l.xi.clone()).collect();
            seen.sort();
            seen.dedup();
            ensure(seen.len() == xis.len(), || format!("{ctx}: xi not a bijection"))?;
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let j = sig("2,3|1,1");
    let mut rng = StdRng::seed_from_u64(7);
    for m in catalog_models() {
        for c2 in sectors(&m) {
            let sector = BundleSector::new(c2);
            let set = solve_system(&j, &m, &sector, &SolveOptions::default())
                .map_err(|e| e.to_string())?;
            let ctx = format!("{} c2 = {c2}", m.name());
            ensure(set.kind == SolutionKind::Infinite && set.family_rank() >= 1, || {
                format!("{ctx}: {:?} rank {}", set.kind, set.family_rank())
            })?;
            let fam = set.family.as_ref().ok_or("no family")?;
            let mut checked = 0;
            while checked < 20 {
                let d = rng.gen_range(0..fam.discrete.len());
                let t: Vec<Int> = (0..fam.free_params()).map(|_| rng.gen_range(-20..=20)).collect();
                let s: Vec<Int> =
                    (0..fam.degree4_kernel.len()).map(|_| rng.gen_range(-20..=20)).collect();
                let Some(label) = fam.point(d, &t, &s) else {
                    continue;
                };
                ensure(verify_label(&label, &m, &sector).unwrap_or(false), || {
                    format!("{ctx}: coset point fails: {label:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let bound = 3;
    let rows = enumerate_strata(&sig("1,1|1,1"), 1, bound).map_err(|e| e.to_string())?;
    ensure(!rows.is_empty(), || "no rows".into())?;
    for row in &rows {
        let zero = row.charge.iter().all(|&c| c == 0);
        ensure(row.nodal != zero, || {
            format!("charge {:?} flagged nodal = {}", row.charge, row.nodal)
        })?;
        ensure(row.charge.iter().all(|c| c.abs() <= bound), || {
            format!("charge {:?} out of bound", row.charge)
        })?;
    }
    ensure(rows.iter().filter(|r| !r.nodal).count() == 1, || "expected one nonnodal row".into())?;
    let single = enumerate_strata(&sig("1|2"), 0, bound).map_err(|e| e.to_string())?;
    ensure(single.len() == 1 && !single[0].nodal && single[0].charge == vec![0], || {
        format!("(1|2) on genus 0: {single:?}")
    })?;
    let genus1 = enumerate_strata(&sig("1|2"), 1, bound).map_err(|e| e.to_string())?;
    ensure(genus1.iter().all(|r| !r.nodal && r.charge == vec![0]), || {
        "(1|2) on genus 1 has a nodal row".into()
    })?;

    let mut rng = StdRng::seed_from_u64(8);
    let signatures = enumerate_signatures(6).map_err(|e| e.to_string())?;
    for _ in 0..50 {
        let j = signatures.choose(&mut rng).expect("nonempty");
        let basis = charge_lattice(j);
        let mut c = vec![0; j.r()];
        for row in &basis {
            let coef: Int = rng.gen_range(-5..=5);
            for (ci, bi) in c.iter_mut().zip(row) {
                *ci += coef * bi;
            }
        }
        let relabeled = j
            .pairs()
            .zip(&c)
            .map(|((k, m), &ci)| Ratio::new((m as Int * ci).pow(2), (k * m) as Int))
            .fold(Ratio::from_integer(0), |a, b| a + b);
        ensure(node_coefficient(j, &c) == relabeled, || {
            format!("{j} at {c:?}: relabeling changes coefficient")
        })?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    // (a), (b): emitted labels of full classifications
    for m in catalog_models() {
        let ns: &[u32] = if m.name() == "T4" { &[2, 3] } else { &[2, 3, 4] };
        for &n in ns {
            for c2 in sectors(&m).into_iter().filter(|c| (-2..=2).contains(c)) {
                let cat = run_classify(n, &m, c2)?;
                for s in &cat.strata {
                    for l in &s.solutions.classes {
                        ensure(
                            verify_label(l, &m, &BundleSector::new(c2)).unwrap_or(false),
                            || format!("{} n = {n} c2 = {c2}: {l:?} fails", m.name()),
                        )?;
                        structural_identities(l, &m)?;
                    }
                }
            }
        }
    }
    // (c): oracle equivalence
    let mut cases: Vec<(ManifoldModel, OracleManifold)> = vec![
        (model("S4", &[]), OracleManifold::s4()),
        (model("S2xS2", &[]), OracleManifold::s2xs2()),
    ];
    for p in 2..=6 {
        cases.push((model("LensP3xS1", &[p]), OracleManifold::lens(p)));
    }
    for (m, om) in &cases {
        for n in 1..=3 {
            for j in enumerate_signatures(n).map_err(|e| e.to_string())? {
                let bound = if j.r() * m.b2() > 4 { 3 } else { 6 };
                for c2 in [-2, 0, 1, 2, 4] {
                    if n == 1 && c2 != 0 {
                        continue;
                    }
                    compare_with_oracle(&j, m, om, c2, bound)?;
                }
            }
        }
    }
    // (d): permutation invariance
    let mut rng = StdRng::seed_from_u64(9);
    for m in [model("S2xS2", &[]), model("LensP3xS1", &[4]), model("T4", &[])] {
        for n in 2..=3 {
            for c2 in [0, 2] {
                let opts = SolveOptions::default();
                let sector = BundleSector::new(c2);
                let reference = classify(n, &m, &sector, &opts).map_err(|e| e.to_string())?;
                for _ in 0..3 {
                    let mut sigs = enumerate_signatures(n).map_err(|e| e.to_string())?;
                    sigs.shuffle(&mut rng);
                    let shuffled = classify_signatures(&sigs, &m, &sector, &opts)
                        .map_err(|e| e.to_string())?;
                    ensure(shuffled == reference, || {
                        format!("{} n = {n} c2 = {c2}: order dependence", m.name())
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let golden = include_str!("goldens/postnikov_k4.txt");
    let rendered: String = enumerate_classes(4)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|j| {
            let p = postnikov5(j);
            format!("{j} r-1={} r*={} g={}\n", p.kz2_count, p.kz4_count, p.modulus)
        })
        .collect();
    ensure(rendered == golden, || format!("postnikov table differs:\n{rendered}"))?;

    let golden = include_str!("goldens/rings.txt");
    let mut rendered = String::new();
    for j in ["1|2", "1|3", "1|4", "2|1", "1,1|1,1"] {
        let j = sig(j);
        rendered.push_str(&format!("{j} z {}\n", integral_ring(&j)));
        rendered.push_str(&format!("{j} zg {}\n", modg_ring(&j)));
    }
    ensure(rendered == golden, || format!("ring presentations differ:\n{rendered}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Howe enumeration counts", criterion_1),
        ("SU(2) on S4", criterion_2),
        ("SU(2) on S2xS2 divisor counts", criterion_3),
        ("SU(2) on lens space times circle", criterion_4),
        ("SU(2) on T4", criterion_5),
        ("SU(4), J = (2|2)", criterion_6),
        ("SU(5), J = (2,3|1,1) infinite family", criterion_7),
        ("node scan", criterion_8),
        ("property suites and oracle equivalence", criterion_9),
        ("classifying-space goldens", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {title} ({:.2?})", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {title}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
