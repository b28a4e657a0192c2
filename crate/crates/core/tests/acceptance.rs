//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime budget.

mod common;

use std::time::{Duration, Instant};

use common::{gaussian_binomial, invariant_factors, random_filtered, Cells};
use mbflow::fixtures::{
    borel_product, catalog, continuation_from_sphere_z2, continuation_square, continuation_to_sphere_z2,
    cp_circle_model, cpn_act, rp2, s2_rotation_fiber, s2_two_point, schubert_indices, sphere_z2, standard_s2_module,
    tautological_module, torus_flat, BorelSpec, Fixture,
};
use mbflow::flowcat::{
    bimodule_to_map, dualize, include_and_quotient, realize, shift_category, BimoduleData, FlowCategoryData,
};
use mbflow::homalg::{dim_t, preceq, smith_normal_form, Preceq};
use mbflow::inequalities::{equivariant_inequality, mb_inequality};
use mbflow::twisted::spectral_sequence;
use mbflow::{homology, CoefficientRing, GradedChainComplex, HomologySummary, IntegerMatrix, LaurentPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Z: CoefficientRing = CoefficientRing::Integers;
const F2: CoefficientRing = CoefficientRing::PrimeField(2);

type Check = Result<(), String>;

/// Number, name, runtime budget and check.
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn h(f: &FlowCategoryData) -> Result<HomologySummary, String> {
    let t = realize(f).map_err(|e| e.to_string())?;
    homology(&t.totalize().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn valid_fixtures() -> Vec<Fixture> {
    catalog().into_iter().filter(|f| f.expected.is_some()).collect()
}

/// Underlying manifolds with their cell structures and dimensions.
fn manifolds() -> Vec<(String, FlowCategoryData, Cells, i64)> {
    let s2 = Cells::zero_differentials(0, &[1, 0, 1]);
    let rp2_cells = Cells { lo: 0, ranks: vec![1, 1, 1], d: vec![vec![vec![0]], vec![vec![2]]] };
    let mut out = vec![
        ("s2_two_point".to_string(), s2_two_point(), s2.clone(), 2),
        ("sphere_z2".to_string(), sphere_z2(), s2, 2),
        ("torus_flat".to_string(), torus_flat(), Cells::zero_differentials(0, &[1, 2, 1]), 2),
        ("rp2".to_string(), rp2(Z), rp2_cells.clone(), 2),
        ("rp2/F2".to_string(), rp2(F2), rp2_cells, 2),
    ];
    for n in 0..=4usize {
        let mut ranks = vec![0; 2 * n + 1];
        for k in 0..=n {
            ranks[2 * k] = 1;
        }
        out.push((format!("cpn_act({n})"), cpn_act(n), Cells::zero_differentials(0, &ranks), 2 * n as i64));
    }
    out
}

fn criterion_1() -> Check {
    for (name, f, cells, _) in manifolds() {
        let got = h(&f)?;
        let want = cells.homology(f.ring);
        ensure(got == want, || format!("{name}: realization {got:?}, cellular {want:?}"))?;
    }
    Ok(())
}

fn criterion_2() -> Check {
    for (name, f, cells, dim) in manifolds() {
        let d = dualize(&f, dim).map_err(|e| format!("{name}: {e}"))?;
        let got = h(&d)?;
        let want = cells.cohomology_negated(f.ring);
        ensure(got == want, || format!("{name}: dual {got:?}, cohomology {want:?}"))?;
    }
    // universal coefficients over F_2 on RP^2: each H^k has dimension 1
    let d = h(&dualize(&rp2(F2), 2).map_err(|e| e.to_string())?)?;
    ensure((0..=2).all(|k| d.rank(-k) == 1), || format!("RP^2 over F_2: {d:?}"))
}

fn criterion_3() -> Check {
    for fx in valid_fixtures() {
        let r = mb_inequality(&fx.category).map_err(|e| format!("{}: {e}", fx.name))?;
        ensure(r.holds, || format!("{}: {r}", fx.name))?;
    }
    let t = mb_inequality(&torus_flat()).map_err(|e| e.to_string())?;
    ensure(t.witness == Some(LaurentPoly::zero()), || format!("torus witness {:?}", t.witness))?;
    let s = mb_inequality(&sphere_z2()).map_err(|e| e.to_string())?;
    ensure(s.witness == Some(LaurentPoly::monomial(1, 1.into())), || format!("sphere witness {:?}", s.witness))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..1000 {
        let f = random_filtered(&mut rng, F2, 12);
        let lhs = dim_t(&homology(&f.twisted.totalize().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?);
        let mut rhs = LaurentPoly::zero();
        for (&i, piece) in f.twisted.pieces() {
            rhs = rhs.add(&dim_t(&homology(piece).map_err(|e| e.to_string())?).shift(i));
        }
        ensure(preceq(&lhs, &rhs).holds(), || format!("random complex {trial}: {lhs} vs {rhs}"))?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    for fx in valid_fixtures() {
        let f = &fx.category;
        let t = realize(f).map_err(|e| e.to_string())?;
        let mut indices: Vec<i64> = f.objects.iter().map(|o| o.index).collect();
        indices.sort_unstable();
        indices.dedup();
        for &p in indices.iter().chain([indices.first().map_or(0, |i| i - 1)].iter()) {
            let names: Vec<&str> = f.objects.iter().filter(|o| o.index <= p).map(|o| o.name.as_str()).collect();
            let split = include_and_quotient(f, &names).map_err(|e| format!("{} at {p}: {e}", fx.name))?;
            ensure(split.audit.is_exact(), || format!("{} at {p}: category split not exact", fx.name))?;
            let sub = realize(&split.sub).and_then(|t| t.totalize()).map_err(|e| e.to_string())?;
            let quo = realize(&split.quotient).and_then(|t| t.totalize()).map_err(|e| e.to_string())?;
            ensure(sub == split.audit.sub && quo == split.audit.quotient, || {
                format!("{} at {p}: realization does not commute with the split", fx.name)
            })?;
            let qs = t.quotient_sequence(p).map_err(|e| e.to_string())?;
            ensure(qs.audit.is_exact(), || format!("{} at {p}: twisted split not exact", fx.name))?;
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    for fx in valid_fixtures() {
        let base = h(&fx.category)?;
        for a in -5..=5 {
            let got = h(&shift_category(&fx.category, a))?;
            ensure(got == base, || format!("{} shifted by {a}", fx.name))?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    for fx in valid_fixtures() {
        let m = bimodule_to_map(&BimoduleData::diagonal(&fx.category)).map_err(|e| format!("{}: {e}", fx.name))?;
        let cone = homology(&m.cone().totalize().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(cone.is_zero(), || format!("{}: cone of the identity has homology {cone:?}", fx.name))?;
    }
    for b in [continuation_to_sphere_z2(), continuation_from_sphere_z2()] {
        let m = bimodule_to_map(&b).map_err(|e| e.to_string())?;
        ensure(m.to_chain_map().is_quasi_isomorphism().map_err(|e| e.to_string())?, || {
            "continuation is not a quasi-isomorphism".into()
        })?;
    }
    let good = continuation_square(1).and_then(|w| w.verify()).map_err(|e| e.to_string())?;
    let bad = continuation_square(-1).and_then(|w| w.verify()).map_err(|e| e.to_string())?;
    ensure(good.holds() && !bad.holds(), || format!("square verdicts {good:?} / {bad:?}"))
}

fn criterion_7() -> Check {
    let rp2_chain = GradedChainComplex::new(
        Z,
        0,
        vec![1, 1, 1],
        vec![IntegerMatrix::from_i64_rows(&[&[0]]), IntegerMatrix::from_i64_rows(&[&[2]])],
    )
    .map_err(|e| e.to_string())?;
    for (chain, r) in [
        (GradedChainComplex::with_zero_differentials(Z, 0, vec![1, 2, 1]), 0),
        (GradedChainComplex::with_zero_differentials(Z, 0, vec![1, 0, 1]), 3),
        (rp2_chain, -2),
    ] {
        let m = mbflow::flowcat::relative_map(&tautological_module(chain.clone(), r)).map_err(|e| e.to_string())?;
        let id = mbflow::homalg::ChainMap::identity(m.map.source());
        ensure(m.map.is_isomorphism() && m.quasi_isomorphism, || format!("tautological module at r = {r}"))?;
        ensure(m.map.source() == m.map.target() && m.map == id, || {
            format!("tautological module at r = {r} is not the identity")
        })?;
    }
    let s = mbflow::flowcat::relative_map(&standard_s2_module()).map_err(|e| e.to_string())?;
    ensure(s.quasi_isomorphism, || "standard module of the two-point sphere".into())
}

fn criterion_8() -> Check {
    for n in 0..=4usize {
        let mut ranks = vec![0; 2 * n + 2];
        ranks[0] = 1;
        ranks[2 * n + 1] = 1;
        let want = Cells::zero_differentials(0, &ranks).homology(Z);
        let got = h(&cp_circle_model(n))?;
        ensure(got == want, || format!("circle model N = {n}: {got:?}"))?;
    }
    // CP^1-bundle over CP^3: one cell in each even degree pair (2a + 2b), a <= 3, b <= 1
    let mut ranks = vec![0usize; 9];
    for a in 0..=3 {
        for b in 0..=1 {
            ranks[2 * (a + b)] += 1;
        }
    }
    let oracle = Cells::zero_differentials(0, &ranks).homology(Z);
    let borel = h(&borel_product(&BorelSpec::new(3, s2_rotation_fiber())).map_err(|e| e.to_string())?)?;
    let low = |s: &HomologySummary| (0..=4).map(|n| s.rank(n)).collect::<Vec<_>>();
    ensure(low(&borel) == vec![1, 0, 2, 0, 2] && low(&oracle) == low(&borel), || {
        format!("Borel ranks {:?}", low(&borel))
    })?;
    let eq = equivariant_inequality(&BorelSpec::new(3, s2_rotation_fiber()), 4).map_err(|e| e.to_string())?;
    ensure(eq.holds && eq.is_equality(), || format!("rotation sphere: {eq}"))?;
    let free = equivariant_inequality(&BorelSpec::new(3, cp_circle_model(0)), 3).map_err(|e| e.to_string())?;
    ensure(free.holds && !free.is_equality(), || format!("free circle: {free}"))
}

fn criterion_9() -> Check {
    for n in 0..=8usize {
        for k in 0..=n {
            let idx = schubert_indices(k, n, false).map_err(|e| e.to_string())?;
            let mut poly = vec![0i64; idx.last().map_or(0, |&m| m as usize + 1)];
            for i in idx {
                poly[i as usize] += 1;
            }
            let want = gaussian_binomial(n, k);
            ensure(poly == want, || format!("k = {k}, n = {n}: {poly:?} vs {want:?}"))?;
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    for fx in valid_fixtures() {
        let f = fx.category.with_ring(F2).map_err(|e| e.to_string())?;
        let t = realize(&f).map_err(|e| e.to_string())?;
        let ss = spectral_sequence(&t, 12).map_err(|e| e.to_string())?;
        ensure(ss.is_consistent(), || format!("{}: {:?}", fx.name, ss.audit_failure))?;
        let hf = homology(&t.totalize().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let limit: Vec<(i64, usize)> = ss.limit.iter().filter(|(_, &d)| d > 0).map(|(&n, &d)| (n, d)).collect();
        let want: Vec<(i64, usize)> = hf.free_rank.iter().map(|(&n, &d)| (n, d)).collect();
        ensure(limit == want, || format!("{}: limit {limit:?}, homology {want:?}", fx.name))?;
        let e1 = &ss.pages[0];
        for (&i, piece) in t.pieces() {
            let hp = homology(piece).map_err(|e| e.to_string())?;
            let col: Vec<(i64, usize)> = e1.column(i).into_iter().filter(|&(_, d)| d > 0).collect();
            let want: Vec<(i64, usize)> = hp.free_rank.iter().map(|(&q, &d)| (q, d)).collect();
            ensure(col == want, || format!("{}: E1 column {i} is {col:?}, piece homology {want:?}", fx.name))?;
        }
    }
    for (name, f, expect) in
        [("torus_flat", torus_flat(), vec![(0, 1), (1, 2), (2, 1)]), ("rp2", rp2(F2), vec![(0, 1), (1, 1), (2, 1)])]
    {
        let ss =
            spectral_sequence(&realize(&f.with_ring(F2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?, 4)
                .map_err(|e| e.to_string())?;
        let limit: Vec<(i64, usize)> = ss.limit.iter().filter(|(_, &d)| d > 0).map(|(&n, &d)| (n, d)).collect();
        ensure(ss.collapse_page == Some(1) && ss.pages[0].is_degenerate() && limit == expect, || {
            format!("{name}: collapse {:?}, limit {limit:?}", ss.collapse_page)
        })?;
    }
    let torus = spectral_sequence(&realize(&torus_flat().with_ring(F2).unwrap()).unwrap(), 4).unwrap();
    ensure(torus.pages[0].column(0) == vec![(0, 1), (1, 1)] && torus.pages[0].column(1) == vec![(0, 1), (1, 1)], || {
        format!("torus E1 columns {:?} {:?}", torus.pages[0].column(0), torus.pages[0].column(1))
    })
}

fn criterion_11() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..10_000 {
        let (r, c) = (rng.gen_range(1..=4usize), rng.gen_range(1..=4usize));
        let m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
        let snf = smith_normal_form(&IntegerMatrix::from_i64_rows(&rows));
        let got: Vec<i128> = snf.diagonal.iter().map(|d| i128::try_from(d).unwrap()).collect();
        let (rank, want) = invariant_factors(&m, c);
        ensure(snf.rank == rank && got == want, || format!("matrix {trial} {m:?}: {got:?} vs {want:?}"))?;
        ensure(got.windows(2).all(|w| w[1] % w[0] == 0), || format!("matrix {trial}: divisibility"))?;
    }
    // every polynomial with support in [0, 4] and coefficients 0..=3
    let grid: Vec<LaurentPoly> = (0..4i64.pow(5))
        .map(|mut code| {
            let c: Vec<i64> = (0..5)
                .map(|_| {
                    let d = code % 4;
                    code /= 4;
                    d
                })
                .collect();
            LaurentPoly::from_coefficients(0, &c)
        })
        .collect();
    let le: Vec<Vec<bool>> = grid.iter().map(|p| grid.iter().map(|q| preceq(p, q).holds()).collect()).collect();
    for (i, p) in grid.iter().enumerate() {
        ensure(le[i][i], || format!("not reflexive at {p}"))?;
        for (j, q) in grid.iter().enumerate() {
            if le[i][j] {
                ensure(p.evaluate_at_minus_one() == q.evaluate_at_minus_one(), || {
                    format!("{p} <= {q} but values at -1 differ")
                })?;
                ensure(!le[j][i] || i == j, || format!("antisymmetry fails for {p}, {q}"))?;
                if let Preceq::Holds { witness } = preceq(p, q) {
                    ensure(q.sub(p) == LaurentPoly::from_coefficients(0, &[1, 1]).mul(&witness), || {
                        format!("witness for {p}, {q}")
                    })?;
                }
            }
        }
    }
    // transitivity through every middle element
    for i in 0..grid.len() {
        for j in (0..grid.len()).filter(|&j| le[i][j]) {
            for k in (0..grid.len()).filter(|&k| le[j][k]) {
                ensure(le[i][k], || format!("transitivity fails: {} {} {}", grid[i], grid[j], grid[k]))?;
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        (1, "realization recovers cellular homology", Duration::from_secs(1), criterion_1),
        (2, "dual computes cohomology", Duration::from_secs(1), criterion_2),
        (3, "Morse-Bott inequalities", Duration::from_secs(10), criterion_3),
        (4, "quotient sequences", Duration::from_secs(2), criterion_4),
        (5, "shift invariance", Duration::from_secs(5), criterion_5),
        (6, "bimodules and homotopies", Duration::from_secs(5), criterion_6),
        (7, "relative modules", Duration::from_secs(5), criterion_7),
        (8, "equivariant model", Duration::from_secs(5), criterion_8),
        (9, "Schubert indices", Duration::from_secs(1), criterion_9),
        (10, "spectral sequence", Duration::from_secs(5), criterion_10),
        (11, "kernel correctness", Duration::from_secs(30), criterion_11),
    ];
    let mut failures = Vec::new();
    for (n, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match (&result, elapsed <= budget) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over budget of {budget:?})"),
            (Err(msg), _) => format!("FAIL ({msg})"),
        };
        println!("{} criterion {n:>2} {name} [{:.3}s / {}s]", verdict, elapsed.as_secs_f64(), budget.as_secs());
        if !verdict.starts_with("PASS") {
            failures.push(n);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
