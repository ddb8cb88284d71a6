//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lagsphere_core::cone::{enumerate_exceptional, in_cone, is_lagrangian_spherical};
use lagsphere_core::oracle::{enumerate, knull_coeff_bound, orbit_search, EnumQuery, Target};
use lagsphere_core::reduction::{
    cremona_reduce, is_k_null_spherical, ruled_knull_classes, NormalKind,
};
use lagsphere_core::twist::{
    decompose_k, decompose_k_alpha, decompose_ruled, null_generators, rational_twist_generators,
    IsometryMatrix,
};
use lagsphere_core::{
    form_pairing, is_characteristic, pairing, parse_class, parse_form, print_class, print_form,
    reflect, FormClass, HomClass, Int, LatticeModel, ReflectionWord,
};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2026;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn knull_set(n: usize) -> Result<Vec<HomClass>, String> {
    let m = LatticeModel::rational(n);
    let bound = knull_coeff_bound(n).ok_or("no bound")?;
    let q = EnumQuery::new(m, bound).square(-2).k_pairing(0);
    let all = enumerate(&q).map_err(|e| e.to_string())?;
    let k = m.k0_form();
    let mut out = Vec::new();
    for x in all {
        if is_k_null_spherical(&x, &k).map_err(|e| e.to_string())? {
            out.push(x);
        }
    }
    Ok(out)
}

fn exceptional_counts() -> Outcome {
    let expected = [1, 3, 6, 10, 16, 27, 56, 240];
    for (n, &want) in (1..=8).zip(&expected) {
        let m = LatticeModel::rational(n);
        let set = enumerate_exceptional(m, &m.k0_form(), None).map_err(|e| e.to_string())?;
        ensure(set.complete && set.classes.len() == want, || {
            format!("n={n}: got {} classes, want {want}", set.classes.len())
        })?;
        // independent Diophantine scan: square -1, K-pairing -1, |coeff| <= 7
        let scan = enumerate(&EnumQuery::new(m, 7).square(-1).k_pairing(-1))
            .map_err(|e| e.to_string())?;
        ensure(scan == set.classes, || format!("n={n}: scan disagrees with enumeration"))?;
    }
    Ok("counts 1, 3, 6, 10, 16, 27, 56, 240".into())
}

fn knull_counts() -> Outcome {
    let expected = [2, 8, 20, 40, 72, 126, 240];
    for (n, &want) in (2..=8).zip(&expected) {
        let got = knull_set(n)?.len();
        ensure(got == want, || format!("n={n}: got {got}, want {want}"))?;
    }
    Ok("counts 2, 8, 20, 40, 72, 126, 240".into())
}

fn reduction_totality() -> Outcome {
    let mut total = 0;
    for n in 2..=8 {
        let m = LatticeModel::rational(n);
        let t = parse_class("H - E1 - E2 - E3", m).ok();
        for x in knull_set(n)? {
            let nf = cremona_reduce(&x).map_err(|e| e.to_string())?;
            ensure(nf.certifies(&x), || format!("unsound certificate for {x}"))?;
            match nf.kind {
                NormalKind::Binary => {
                    ensure(n != 3 || Some(&x) != t.as_ref() && Some(-&x) != t, || {
                        format!("{x} should be ternary")
                    })?;
                }
                NormalKind::Ternary => {
                    ensure(n != 3 || Some(&x) == t.as_ref() || Some(-&x) == t, || {
                        format!("{x} terminated ternary at n=3")
                    })?;
                }
                other => return Err(format!("{x} reduced to {}", other.name())),
            }
            total += 1;
        }
    }
    Ok(format!("{total} classes reduced with sound certificates"))
}

fn non_spherical() -> Outcome {
    let m = LatticeModel::rational(11);
    let x = parse_class("3H + E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9 - E10 - E11", m)
        .map_err(|e| e.to_string())?;
    let k = m.k0_form();
    ensure(x.square() == Int::from(-2), || "square is not -2".into())?;
    ensure(form_pairing(&k, &x).unwrap().is_zero(), || "K-pairing is not 0".into())?;
    let nf = cremona_reduce(&x).map_err(|e| e.to_string())?;
    ensure(nf.kind == NormalKind::NegativeCoefficient, || {
        format!("kind {}", nf.kind.name())
    })?;
    ensure(!is_k_null_spherical(&x, &k).unwrap(), || "accepted as spherical".into())?;
    let found = orbit_search(&x, Target::Spherical, 6).map_err(|e| e.to_string())?;
    ensure(found.is_none(), || "orbit search reached a binary/ternary class".into())?;
    Ok("NegativeCoefficient certificate; depth-6 orbit search finds no normal form".into())
}

fn random_word(rng: &mut ChaCha8Rng, m: LatticeModel, gens: &[HomClass]) -> ReflectionWord {
    let len = rng.gen_range(0..=12);
    let picked = (0..len).map(|_| gens.choose(rng).unwrap().clone()).collect();
    ReflectionWord::from_generators(m, picked).unwrap()
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let trials = 1000;
    let mut ok = [0usize; 3];
    for _ in 0..trials {
        let n = rng.gen_range(2..=8);
        let m = LatticeModel::rational(n);
        let w = random_word(&mut rng, m, &rational_twist_generators(m));
        let got = decompose_k(&IsometryMatrix::from_word(&w)).map_err(|e| e.to_string())?;
        if got.matrix() == w.matrix() {
            ok[0] += 1;
        }
    }
    for _ in 0..trials {
        let n = rng.gen_range(2..=8);
        let m = LatticeModel::rational(n);
        let alpha = FormClass::from(&-m.k0());
        let gens = null_generators(rational_twist_generators(m), &alpha).unwrap();
        let w = random_word(&mut rng, m, &gens);
        let got = decompose_k_alpha(&IsometryMatrix::from_word(&w), &alpha, None, false)
            .map_err(|e| e.to_string())?;
        let null = got
            .generators()
            .iter()
            .all(|g| form_pairing(&alpha, g).unwrap().is_zero());
        if got.matrix() == w.matrix() && null {
            ok[1] += 1;
        }
    }
    for _ in 0..trials {
        let genus = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=4);
        let m = LatticeModel::ruled(genus, n);
        let e_area = rng.gen_range(1..=3);
        let mut c = vec![(2 * e_area, 1), (rng.gen_range(1..=5), 1)];
        c.extend((0..n).map(|_| (-e_area, 1)));
        let alpha = FormClass::from_ratios(m, &c).unwrap();
        let gens = null_generators(ruled_knull_classes(m), &alpha).unwrap();
        let w = if gens.is_empty() {
            ReflectionWord::new(m)
        } else {
            random_word(&mut rng, m, &gens)
        };
        let got = decompose_ruled(&IsometryMatrix::from_word(&w), &alpha).map_err(|e| e.to_string())?;
        if got.matrix() == w.matrix() {
            ok[2] += 1;
        }
    }
    ensure(ok == [trials; 3], || format!("round trips {ok:?} of {trials}"))?;
    Ok(format!("K: {}/{trials}, (K, alpha): {}/{trials}, ruled: {}/{trials}", ok[0], ok[1], ok[2]))
}

fn lagrangian_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let sets: Vec<Vec<HomClass>> = (2..=6).map(knull_set).collect::<Result<_, _>>()?;
    let (mut forms, mut yes, mut checked) = (0, 0, 0);
    let mut binary_equal_area = 0;
    while forms < 200 {
        let n = rng.gen_range(2..=6);
        let m = LatticeModel::rational(n);
        let mut c = vec![(rng.gen_range(n as i64 + 1..=3 * n as i64), 1)];
        c.extend((0..n).map(|_| {
            let choices = [(-1, 1), (-1, 1), (-2, 1), (-1, 2), (-3, 2)];
            *choices.choose(&mut rng).unwrap()
        }));
        let tau = FormClass::from_ratios(m, &c).unwrap();
        let k = m.k0_form();
        if !in_cone(&tau, &k, None).map_err(|e| e.to_string())?.is_yes() {
            continue;
        }
        forms += 1;
        for xi in &sets[n - 2] {
            let v = is_lagrangian_spherical(xi, &tau, &k, None, false).map_err(|e| e.to_string())?;
            let zero = form_pairing(&tau, xi).unwrap().is_zero();
            ensure(v.is_yes() == zero, || format!("{xi} against {tau}: {v:?}"))?;
            checked += 1;
            if zero {
                yes += 1;
                if xi.coeffs()[0].is_zero() {
                    binary_equal_area += 1;
                }
            }
        }
    }
    ensure(binary_equal_area > 0, || "no equal-area binary class was exercised".into())?;
    Ok(format!(
        "{forms} forms, {checked} verdicts, {yes} Lagrangian ({binary_equal_area} equal-area binary)"
    ))
}

fn random_model(rng: &mut ChaCha8Rng) -> LatticeModel {
    if rng.gen_bool(0.5) {
        LatticeModel::rational(rng.gen_range(0..=9))
    } else {
        LatticeModel::ruled(rng.gen_range(1..=3), rng.gen_range(0..=6))
    }
}

fn random_class(rng: &mut ChaCha8Rng, m: LatticeModel, bound: i64) -> HomClass {
    let c: Vec<i64> = (0..m.rank()).map(|_| rng.gen_range(-bound..=bound)).collect();
    HomClass::from_i64(m, &c).unwrap()
}

fn random_admissible(rng: &mut ChaCha8Rng, m: LatticeModel) -> HomClass {
    loop {
        let g = random_class(rng, m, 2);
        let s = g.square();
        if [1, -1, 2, -2].iter().any(|&v| s == Int::from(v)) {
            return g;
        }
    }
}

fn random_knull(rng: &mut ChaCha8Rng, m: LatticeModel) -> Option<HomClass> {
    let pool = if m.is_rational() {
        rational_twist_generators(m)
    } else {
        ruled_knull_classes(m)
    };
    let seed = pool.choose(rng)?.clone();
    let w = random_word(rng, m, &pool);
    Some(w.apply(&seed).unwrap())
}

fn reflection_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let trials = 10_000;
    for _ in 0..trials {
        let m = random_model(&mut rng);
        let g = random_admissible(&mut rng, m);
        let x = random_class(&mut rng, m, 9);
        let y = random_class(&mut rng, m, 9);
        let rx = reflect(&g, &x).unwrap();
        ensure(reflect(&g, &rx).unwrap() == x, || format!("involution fails for {g}, {x}"))?;
        let ry = reflect(&g, &y).unwrap();
        ensure(pairing(&rx, &ry).unwrap() == pairing(&x, &y).unwrap(), || {
            format!("isometry fails for {g}")
        })?;
    }
    let mut fixing = 0;
    while fixing < trials {
        let m = random_model(&mut rng);
        let Some(g) = random_knull(&mut rng, m) else { continue };
        let k0 = m.k0();
        ensure(g.square() == Int::from(-2) && pairing(&k0, &g).unwrap().is_zero(), || {
            format!("{g} is not K-null")
        })?;
        ensure(reflect(&g, &k0).unwrap() == k0, || format!("R({g}) moves K_0"))?;
        fixing += 1;
    }
    let mut invariant = 0;
    while invariant < trials {
        let m = random_model(&mut rng);
        let pool = if m.is_rational() {
            rational_twist_generators(m)
        } else {
            ruled_knull_classes(m)
        };
        if pool.is_empty() {
            continue;
        }
        let w = random_word(&mut rng, m, &pool);
        let x = random_class(&mut rng, m, 5);
        let y = w.apply(&x).unwrap();
        ensure(is_characteristic(&x) == is_characteristic(&y), || {
            format!("characteristic status of {x} changes")
        })?;
        invariant += 1;
    }
    Ok(format!("{trials} instances each of 4 properties"))
}

fn parser_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let trials = 10_000;
    for _ in 0..trials {
        let m = random_model(&mut rng);
        let x = random_class(&mut rng, m, 50);
        let text = print_class(&x);
        let back = parse_class(&text, m).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == x, || format!("{text} parsed to {back}"))?;

        let c: Vec<(i64, i64)> = (0..m.rank())
            .map(|_| (rng.gen_range(-30..=30), rng.gen_range(1..=6)))
            .collect();
        let f = FormClass::from_ratios(m, &c).unwrap();
        let text = print_form(&f);
        let back = parse_form(&text, m).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == f, || format!("{text} parsed differently"))?;
    }
    Ok(format!("{trials} classes and {trials} forms"))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exceptional-class counts", exceptional_counts, 10),
        ("K-null spherical counts", knull_counts, 30),
        ("reduction totality", reduction_totality, 30),
        ("non-spherical certificate", non_spherical, 60),
        ("decomposition round trip", round_trips, 120),
        ("Lagrangian criterion consistency", lagrangian_consistency, 60),
        ("reflection algebra", reflection_algebra, 30),
        ("parser round trip", parser_round_trip, 5),
    ];
    println!("acceptance suite (seed {SEED:#x})");
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*limit);
        let (tag, detail) = match (&outcome, over) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; over the {limit} s budget")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {tag} {name} ({:.2} s): {detail}", i + 1, took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
