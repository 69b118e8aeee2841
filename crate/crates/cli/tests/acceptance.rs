//! Acceptance suite: one line per criterion, each checked against an
//! independent oracle and a wall-clock limit. Exits non-zero if any fails.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use k3cert_core::classifier::{classify, Verdict};
use k3cert_core::conditions::{
    check_a1, check_a2, check_a3, genus1_bound_holds, hodge_index_validate, hodge_scalar_inequality,
    regeneration_degree_bound,
};
use k3cert_core::isometry::lattice_isomorphic;
use k3cert_core::linalg::diagonalize;
use k3cert_core::local::local_global;
use k3cert_core::positivity::{is_big_nef, minimal_nef_decompose, validate_ample, BigNefVerdict, PrecBasis};
use k3cert_core::qform::{isotropic_exists, IsotropyMethod, SearchConfig};
use k3cert_core::{corpus, corpus_entry, extended_corpus, DivisorClass, Int, Lattice, RootSet};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lat(rows: &[Vec<i64>]) -> Lattice {
    let refs: Vec<&[i64]> = rows.iter().map(|r| &r[..]).collect();
    Lattice::from_i64s(&refs).unwrap()
}

fn gram(l: &Lattice) -> Vec<Vec<i64>> {
    l.gram().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

fn pair(g: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    (0..u.len()).map(|i| (0..v.len()).map(|j| u[i] * g[i][j] * v[j]).sum::<i64>()).sum()
}

fn ints(v: &DivisorClass) -> Vec<i64> {
    v.coords().iter().map(|x| x.to_i64().unwrap()).collect()
}

fn class(v: &[i64]) -> DivisorClass {
    DivisorClass::from_i64s(v)
}

fn boxed(rank: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|p| (-r..=r).map(move |c| [p.clone(), vec![c]].concat())).collect();
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

fn bryan_leung() -> Outcome {
    let e = corpus_entry("bryan-leung").unwrap();
    let l = &e.lattice;
    ensure!(l.discriminant() == &Int::from(-1), "det {}", l.discriminant());
    ensure!(!check_a1(l).unwrap(), "A1 holds on an odd-determinant lattice");
    let iso = isotropic_exists(l, &SearchConfig::default()).unwrap();
    ensure!(iso.witness() == Some(&class(&[0, 1])), "isotropic witness {:?}", iso.witness());

    let a = class(&[1, 3]);
    ensure!(l.square(&a).unwrap() == Int::from(4), "(C+3F)² = {}", l.square(&a).unwrap());
    ensure!(validate_ample(l, &a).is_ok(), "C+3F rejected as ample");
    let roots = RootSet::enumerate(l, &a, &Int::from(10)).unwrap();
    ensure!(roots.roots == vec![class(&[1, 0])], "roots {:?}", roots.roots);
    // Every (−2)-class: −2x² + 2xy = −2 forces x(x − y) = 1, so ±C only.
    let brute: Vec<Vec<i64>> = boxed(2, 50).into_iter().filter(|v| pair(&gram(l), v, v) == -2).collect();
    ensure!(brute == vec![vec![-1, 0], vec![1, 0]], "brute roots {brute:?}");
    ensure!(l.pair(&a, &roots.roots[0]).unwrap() == Int::from(1), "degree on C");
    ensure!(matches!(is_big_nef(l, &a, &roots).unwrap(), BigNefVerdict::BigAndNef), "C+3F not big and nef");

    ensure!(check_a2(l, &a, &roots).unwrap().is_none(), "A2 holds for C+3F");
    let w = check_a2(l, &class(&[3, 9]), &roots).unwrap().ok_or("A2 fails for 3(C+3F)")?;
    ensure!(w.parts == vec![a.clone(), a.clone(), a], "A2 witness {:?}", w.parts);
    Ok("det −1, F isotropic, C+3F ample of square 4, A2 witness (C+3F)×3".into())
}

fn genus1_threshold() -> Outcome {
    for x in 0..=50i64 {
        // A = e1 with A² = 2, R = e2 with R² = −2 and A·R = x.
        let l = lat(&[vec![2, x], vec![x, -2]]);
        let got = genus1_bound_holds(&l, &class(&[1, 0]), &class(&[0, 1])).unwrap();
        ensure!(got == (x >= 8), "x = {x}: bound says {got}");
    }
    Ok("A² = 2: bound ⇔ A·R ≥ 8 on x ∈ [0, 50]".into())
}

fn isotropy_oracle() -> Outcome {
    let grid = boxed(2, 100);
    let mut forms = 0;
    for a in -5i64..=5 {
        for b in -10i64..=10 {
            for c in -5i64..=5 {
                let g = vec![vec![2 * a, b], vec![b, 2 * c]];
                let l = lat(&g);
                if !l.signature().is_hyperbolic() {
                    continue;
                }
                forms += 1;
                let brute = grid.iter().any(|v| (v[0] != 0 || v[1] != 0) && pair(&g, v, v) == 0);
                let verdict = isotropic_exists(&l, &SearchConfig::default()).unwrap();
                ensure!(verdict.method == IsotropyMethod::ClosedFormRank2, "{g:?}: method {:?}", verdict.method);
                ensure!(verdict.is_isotropic() == brute, "{g:?}: closed form {verdict:?}, brute force {brute}");
                ensure!(verdict.is_isotropic() || verdict.is_anisotropic(), "{g:?} undecided");
                if let Some(w) = verdict.witness() {
                    let w = ints(w);
                    ensure!(pair(&g, &w, &w) == 0 && gcd(w[0], w[1]) == 1, "{g:?}: bad witness {w:?}");
                }
            }
        }
    }
    Ok(format!("{forms} forms, zero mismatches"))
}

fn a2_a3_oracle() -> Outcome {
    const R: i64 = 30;
    let mut targets = 0;
    for name in ["U", "bryan-leung", "diag-2-m6", "det-5"] {
        let e = corpus_entry(name).unwrap();
        let l = &e.lattice;
        let g = gram(l);
        let ai = ints(&e.ample);
        let basis = PrecBasis::from_ample(l, &e.ample).unwrap();
        let key = |v: &[i64]| -> (Vec<Int>, Vec<i64>) { (basis.degrees(l, &class(v)), v.to_vec()) };
        let grid = boxed(2, R);
        let on_edge = |v: &[i64]| v.iter().any(|c| c.abs() == R);
        for t in boxed(2, 12) {
            let (tt, deg) = (pair(&g, &t, &t), pair(&g, &ai, &t));
            if tt <= 0 || deg <= 0 || deg > 12 {
                continue;
            }
            targets += 1;
            let dt = class(&t);
            let sub = |u: &[i64], v: &[i64]| vec![u[0] - v[0], u[1] - v[1]];

            // A2: every ordered split into three parts, then the minimax choice.
            let parts: Vec<&Vec<i64>> = grid.iter().filter(|p| pair(&g, &t, p) > 0 && pair(&g, p, p) > 0).collect();
            let positive: HashSet<&Vec<i64>> = parts.iter().copied().collect();
            let mut best: Option<(Vec<(Vec<Int>, Vec<i64>)>, Vec<Vec<i64>>)> = None;
            for p in &parts {
                for q in &parts {
                    let rest = sub(&sub(&t, p), q);
                    if !positive.contains(&rest) {
                        continue;
                    }
                    let mut triple = vec![(*p).clone(), (*q).clone(), rest];
                    ensure!(!triple.iter().any(|v| on_edge(v)), "{name} {t:?}: A2 part on the box edge");
                    triple.sort_by_key(|v| key(v));
                    let score: Vec<_> = triple.iter().rev().map(|v| key(v)).collect();
                    if best.as_ref().map_or(true, |(s, _)| score < *s) {
                        best = Some((score, triple));
                    }
                }
            }
            let got = check_a2(l, &dt, &e.roots).unwrap().map(|w| w.parts.iter().map(ints).collect::<Vec<_>>());
            ensure!(got == best.map(|b| b.1), "A2 on {name} {t:?}: search {got:?} disagrees with the box");

            // A3: every (−2)-class L2 meeting L positively with admissible L1.
            let mut a3: Option<((Vec<Int>, Vec<Int>), Vec<Vec<i64>>)> = None;
            for r in grid.iter().filter(|r| pair(&g, r, r) == -2 && pair(&g, &t, r) > 0) {
                let l1 = sub(&t, r);
                let d = sub(&l1, r);
                let ok = pair(&g, &t, &l1) > 0
                    && pair(&g, &l1, &l1) > 0
                    && gcd(l1[0], l1[1]) % 2 == 1
                    && gcd(d[0], d[1]) == 1
                    && pair(&g, &l1, &l1) + 2 * pair(&g, &l1, r) >= 18;
                if !ok {
                    continue;
                }
                ensure!(!on_edge(r) && !on_edge(&l1), "{name} {t:?}: A3 part on the box edge");
                let score = (key(&l1).0, key(r).0);
                if a3.as_ref().map_or(true, |(s, _)| score < *s) {
                    a3 = Some((score, vec![l1, r.clone()]));
                }
            }
            let got = check_a3(l, &dt, &e.roots).unwrap().map(|w| w.parts.iter().map(ints).collect::<Vec<_>>());
            ensure!(got == a3.map(|b| b.1), "A3 on {name} {t:?}: search {got:?} disagrees with the box");
        }
    }
    Ok(format!("{targets} targets, existence and witnesses identical"))
}

fn decomposition_in_u() -> Outcome {
    let e = corpus_entry("U").unwrap();
    let l = &e.lattice;
    let d = class(&[1, 1]);
    let dec = minimal_nef_decompose(l, &d, &e.roots).unwrap();
    ensure!(dec.is_complete(), "partial decomposition {dec:?}");
    let nef: Vec<(Vec<i64>, i64)> =
        dec.nef_parts.iter().map(|p| (ints(&p.class), p.multiplicity.to_i64().unwrap())).collect();
    let res: Vec<(Vec<i64>, i64)> =
        dec.residual.iter().map(|m| (ints(&m.class), m.multiplicity.to_i64().unwrap())).collect();
    ensure!(nef == vec![(vec![1, 0], 2)], "nef parts {nef:?}");
    ensure!(res == vec![(vec![-1, 1], 1)], "residual {res:?}");
    ensure!(dec.reconstruct(2) == d, "reconstruction {}", dec.reconstruct(2));
    let sig = k3cert_core::lattice::signature_of(&l.gram_of(&dec.residual_support()).unwrap());
    ensure!((sig.positive, sig.negative, sig.zero) == (0, 1, 0), "residual signature {sig}");

    // Oracle: effective and nef classes by brute force in a box, then every
    // combination of minimal nef classes and irreducible (−2)-curves with
    // coefficients ≤ 3 that sums to D with negative definite curve support.
    let g = gram(l);
    let ai = ints(&e.ample);
    let deg_d = pair(&g, &ai, &[1, 1]);
    let grid = boxed(2, 8);
    let mut eff: BTreeSet<Vec<i64>> = BTreeSet::new();
    eff.insert(vec![0, 0]);
    let gens: Vec<&Vec<i64>> = grid.iter().filter(|v| pair(&g, &ai, v) > 0 && pair(&g, v, v) >= -2).collect();
    for deg in 1..=deg_d {
        for v in grid.iter().filter(|v| pair(&g, &ai, v) == deg) {
            if gens.iter().any(|gen| eff.contains(&vec![v[0] - gen[0], v[1] - gen[1]])) {
                eff.insert(v.clone());
            }
        }
    }
    let roots: Vec<&Vec<i64>> = gens.iter().copied().filter(|v| pair(&g, v, v) == -2).collect();
    let irreducible: Vec<&Vec<i64>> = roots
        .iter()
        .copied()
        .filter(|r| !roots.iter().any(|s| s != r && eff.contains(&vec![r[0] - s[0], r[1] - s[1]]) && pair(&g, &ai, s) < pair(&g, &ai, r)))
        .collect();
    let is_nef = |v: &[i64]| pair(&g, v, v) >= 0 && pair(&g, &ai, v) >= 0 && roots.iter().all(|r| pair(&g, v, r) >= 0);
    let minimal: Vec<&Vec<i64>> = grid
        .iter()
        .filter(|v| {
            let dv = pair(&g, &ai, v);
            dv > 0
                && dv <= deg_d
                && is_nef(v)
                && !grid.iter().any(|m| {
                    let dm = pair(&g, &ai, m);
                    dm > 0 && dm < dv && is_nef(m) && eff.contains(&vec![v[0] - m[0], v[1] - m[1]])
                })
        })
        .collect();
    let pieces: Vec<&Vec<i64>> = minimal.iter().chain(irreducible.iter()).copied().collect();
    let mut solutions = Vec::new();
    let mut coeffs = vec![0i64; pieces.len()];
    loop {
        let sum = pieces.iter().zip(&coeffs).fold(vec![0, 0], |s, (p, c)| vec![s[0] + c * p[0], s[1] + c * p[1]]);
        let support: Vec<DivisorClass> =
            irreducible.iter().zip(&coeffs[minimal.len()..]).filter(|(_, c)| **c > 0).map(|(r, _)| class(r)).collect();
        let definite = support.is_empty() || {
            let s = k3cert_core::lattice::signature_of(&l.gram_of(&support).unwrap());
            s.negative == support.len()
        };
        if sum == [1, 1] && definite {
            let nef: Vec<(Vec<i64>, i64)> =
                minimal.iter().zip(&coeffs).filter(|(_, c)| **c > 0).map(|(p, c)| ((*p).clone(), *c)).collect();
            let res: Vec<(Vec<i64>, i64)> = irreducible
                .iter()
                .zip(&coeffs[minimal.len()..])
                .filter(|(_, c)| **c > 0)
                .map(|(p, c)| ((*p).clone(), *c))
                .collect();
            solutions.push((nef, res));
        }
        let Some(i) = coeffs.iter().position(|c| *c < 3) else { break };
        coeffs[i] += 1;
        coeffs[..i].iter_mut().for_each(|c| *c = 0);
    }
    ensure!(solutions == vec![(nef.clone(), res.clone())], "oracle found {solutions:?}");
    Ok("e+f = 2e + (f−e), residual signature (0,1,0), unique in the exhaustive search".into())
}

fn hodge_index() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut applicable = 0;
    for e in corpus() {
        let l = &e.lattice;
        let g = gram(l);
        let n = l.rank();
        let random = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.gen_range(-6i64..=6)).collect::<Vec<i64>>();
        for i in 0..1000 {
            let a = if i % 2 == 0 {
                let p = random(&mut rng);
                ints(&e.ample).iter().zip(p).map(|(x, y)| 3 * x + y / 3).collect()
            } else {
                random(&mut rng)
            };
            let d = random(&mut rng);
            let r = if i % 3 != 2 && !e.roots.roots.is_empty() {
                ints(&e.roots.roots[rng.gen_range(0..e.roots.roots.len())])
            } else {
                random(&mut rng)
            };
            let triple = [class(&a), class(&d), class(&r)];
            ensure!(hodge_index_validate(l, &triple).unwrap(), "{}: rejected {a:?} {d:?} {r:?}", e.name());
            let (aa, dd, rr) = (pair(&g, &a, &a) as i128, pair(&g, &d, &d) as i128, pair(&g, &r, &r));
            let (ad, ar, dr) = (pair(&g, &a, &d) as i128, pair(&g, &a, &r) as i128, pair(&g, &d, &r) as i128);
            let scalar = hodge_scalar_inequality(l, &triple[0], &triple[1], &triple[2]).unwrap();
            if aa > 0 && rr == -2 {
                applicable += 1;
                let lhs = 2 * ad + ar * dr;
                let holds = lhs * lhs >= (2 * aa + ar * ar) * (2 * dd + dr * dr);
                ensure!(holds && scalar == Some(true), "{}: scalar inequality fails on {a:?} {d:?} {r:?}", e.name());
            } else {
                ensure!(scalar.is_none(), "{}: scalar form applied without its preconditions", e.name());
            }
        }
    }
    ensure!(applicable > 1000, "only {applicable} triples met the scalar preconditions");
    Ok(format!("7000 triples, scalar form applied to {applicable}"))
}

fn vinberg() -> Outcome {
    let v1 = corpus_entry("vinberg-1").unwrap();
    let v2 = corpus_entry("vinberg-2").unwrap();
    for e in [&v1, &v2] {
        let s = e.lattice.signature();
        ensure!((s.positive, s.negative, s.zero) == (1, 3, 0), "{}: signature {s}", e.name());
        let diag: Vec<Int> = diagonalize(e.lattice.gram()).iter().map(|q| q.numer() * q.denom()).collect();
        let lg = local_global(&diag);
        ensure!(lg.real && lg.obstruction.is_some(), "{}: local–global says isotropic", e.name());
        let iso = isotropic_exists(&e.lattice, &SearchConfig::default()).unwrap();
        ensure!(iso.is_anisotropic(), "{}: {iso:?}", e.name());
    }
    ensure!(v1.lattice.discriminant() != v2.lattice.discriminant(), "equal discriminants");
    ensure!(lattice_isomorphic(&v1.lattice, &v2.lattice).unwrap().is_none(), "isometry found");
    for (e, which) in [(&v1, 1), (&v2, 2)] {
        let q = e.ample.scale(&Int::from(3));
        let cert = classify(&e.lattice, &e.ample, Some(&q), 0, Some(&e.roots)).unwrap();
        ensure!(
            matches!(&cert.verdict, Verdict::Rank4Exceptional { which: w, .. } if *w == which),
            "{} on {q}: {}",
            e.name(),
            cert.verdict.label()
        );
        cert.verify().map_err(|err| format!("{}: certificate rejected: {err}", e.name()))?;
    }
    Ok(format!("discriminants {} and {}, both anisotropic, both exceptional on 3A", v1.lattice.discriminant(), v2.lattice.discriminant()))
}

fn regeneration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let holds = |n: i64, a: i64, b: i64, c: i64| {
        let (n, a, b, c) = (n as i128, a as i128, b as i128, c as i128);
        n * a > b && (n * a - b).pow(2) > b * b - a * c
    };
    let mut cases = 0;
    while cases < 500 {
        let a = 2 * rng.gen_range(1i64..=50);
        let b = rng.gen_range(-200i64..=200);
        let c = rng.gen_range(-200i64..=200);
        if b * b - a * c <= 0 {
            continue;
        }
        cases += 1;
        let n = regeneration_degree_bound(&Int::from(a), &Int::from(b), &Int::from(c)).unwrap().to_i64().unwrap();
        // The returned bound is n₀ + 2 for the least admissible degree n₀.
        let n0 = n - 2;
        ensure!(holds(n0, a, b, c), "(a,b,c) = ({a},{b},{c}): n₀ = {n0} fails");
        ensure!(!holds(n0 - 1, a, b, c), "(a,b,c) = ({a},{b},{c}): n₀ − 1 = {} also holds", n0 - 1);
        // Independent scan: the least n with both inequalities.
        let scan = ((b.div_euclid(a))..).find(|&m| holds(m, a, b, c)).unwrap();
        ensure!(scan == n0, "(a,b,c) = ({a},{b},{c}): scan {scan}, bound {n0}");
    }
    Ok("500 triples minimal".into())
}

fn certificate_round_trip() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_k3cert");
    let dir = std::env::temp_dir().join(format!("k3cert-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut verified = 0;
    for e in extended_corpus() {
        let triple = ints(&e.ample).iter().map(|c| (3 * c).to_string()).collect::<Vec<_>>().join(",");
        for query in [None, Some(triple)] {
            let mut args = vec!["classify".to_string(), "--lattice".into(), e.name().into(), "--json".into()];
            if let Some(q) = &query {
                args.push(format!("--class={q}"));
            }
            let out = Command::new(bin).args(&args).output().map_err(|e| e.to_string())?;
            ensure!(matches!(out.status.code(), Some(0 | 2)), "{args:?}: exit {:?}", out.status.code());
            let path = dir.join(format!("{}-{verified}.json", e.name()));
            std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
            let check = Command::new(bin).arg("check").arg("--certificate").arg(&path).output().map_err(|e| e.to_string())?;
            ensure!(
                check.status.code() == Some(0),
                "{args:?}: check exited {:?}: {}",
                check.status.code(),
                String::from_utf8_lossy(&check.stderr)
            );
            verified += 1;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{verified} certificates re-verified"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("Bryan–Leung lattice", bryan_leung, 1),
        ("genus-1 bound at A² = 2", genus1_threshold, 1),
        ("rank-2 isotropy vs brute force", isotropy_oracle, 30),
        ("A2/A3 slab search vs box", a2_a3_oracle, 60),
        ("minimal nef decomposition in U", decomposition_in_u, 1),
        ("Hodge index on random triples", hodge_index, 10),
        ("Vinberg lattices", vinberg, 10),
        ("regeneration bound minimality", regeneration, 5),
        ("certificate round trip", certificate_round_trip, 10),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed >= Duration::from_secs(*limit) => Err(format!("{detail}; exceeded the {limit} s limit")),
            other => other,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {} {name} ({:.2} s, limit {limit} s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
