//! Acceptance gate: one test per shipped criterion, each printing a single
//! verdict line (`criterion NN <name> PASS/SKIP in <time>`). Run with
//! `cargo test --test acceptance` (add `-- --show-output` for the lines).
//!
//! Time budgets are asserted only in optimized builds; debug builds print the
//! measured time but do not fail on it.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use kurosh::{
    build_case, intersection_bound, lift_case, theorem2, AmalgamSpec, Automaton, CaseInstance,
    FiniteGroup, FreeProduct, GroupHom, LiftedSubgroup, QStar, Result, SharpnessReport,
    SubgroupGraph, Word,
};

enum Verdict {
    Pass,
    Skip(String),
}

fn criterion(number: usize, name: &str, budget: Duration, body: impl FnOnce() -> Verdict) {
    let start = Instant::now();
    let verdict = body();
    let elapsed = start.elapsed();
    match verdict {
        Verdict::Pass => println!(
            "criterion {number:2} {name:<36} PASS in {elapsed:.2?} (budget {budget:.0?})"
        ),
        Verdict::Skip(why) => println!(
            "criterion {number:2} {name:<36} SKIP in {elapsed:.2?} ({why})"
        ),
    }
    if !cfg!(debug_assertions) {
        assert!(
            elapsed <= budget,
            "criterion {number} took {elapsed:.2?}, budget {budget:.2?}"
        );
    }
}

fn z2_z3() -> FreeProduct {
    FreeProduct::new(vec![
        FiniteGroup::cyclic(2).unwrap(),
        FiniteGroup::cyclic(3).unwrap(),
    ])
    .unwrap()
}

fn z2_v4() -> FreeProduct {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    let v4 = FiniteGroup::direct_product(&z2, &z2);
    FreeProduct::new(vec![z2, v4]).unwrap()
}

fn random_word(rng: &mut StdRng, p: &FreeProduct, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    let mut sylls = Vec::with_capacity(len);
    let mut last = usize::MAX;
    for _ in 0..len {
        let mut f = rng.gen_range(0..p.num_factors());
        while f == last {
            f = rng.gen_range(0..p.num_factors());
        }
        let x = rng.gen_range(1..p.factor(f).order());
        sylls.push((f, x));
        last = f;
    }
    p.word(&sylls).unwrap()
}

/// The two amalgams whose quotient factors are Z₂ and Z₂×Z₂.
fn amalgam_specs() -> Vec<(&'static str, AmalgamSpec)> {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    let z3 = FiniteGroup::cyclic(3).unwrap();
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let z6 = FiniteGroup::cyclic(6).unwrap();
    let cube = FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z2), &z2);
    let z3v4 = FiniteGroup::direct_product(&FiniteGroup::direct_product(&z3, &z2), &z2);
    vec![
        (
            "Z4 *_{Z2} Z2^3",
            AmalgamSpec::new(z4, cube, z2, vec![0, 2], vec![0, 1]).unwrap(),
        ),
        (
            "Z6 *_{Z3} Z3xZ2xZ2",
            AmalgamSpec::new(z6, z3v4, z3, vec![0, 2, 4], vec![0, 4, 8]).unwrap(),
        ),
    ]
}

struct CaseData {
    inst: CaseInstance,
    sharp: SharpnessReport,
    graphs: [SubgroupGraph; 3],
}

/// Cases 3 and 4 at n = 1, 2 — always constructible.
fn dihedral_cases() -> &'static Vec<CaseData> {
    static CASES: OnceLock<Vec<CaseData>> = OnceLock::new();
    CASES.get_or_init(|| {
        let mut out = Vec::new();
        for case in [3, 4] {
            for n in [1, 2] {
                let inst = build_case(case, n, None, 12).unwrap();
                let (sharp, graphs) = kurosh::verify_sharpness(&inst).unwrap();
                out.push(CaseData { inst, sharp, graphs });
            }
        }
        out
    })
}

/// Cases 1 and 2 at n = 1 need a finite-quotient search that is not
/// guaranteed to close within the degree ceiling; `Err` means "not found".
fn searched_cases() -> &'static [Result<CaseData>; 2] {
    static CASES: OnceLock<[Result<CaseData>; 2]> = OnceLock::new();
    CASES.get_or_init(|| {
        [1, 2].map(|case| {
            let inst = build_case(case, 1, None, 12)?;
            let (sharp, graphs) = kurosh::verify_sharpness(&inst)?;
            Ok(CaseData { inst, sharp, graphs })
        })
    })
}

#[test]
fn criterion_01_membership_matches_brute_force_closure() {
    criterion(1, "membership ≡ brute-force closure", Duration::from_secs(60), || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        for product in [z2_z3(), z2_v4()] {
            let short_words = product.words_up_to(8);
            for _ in 0..200 {
                let gens: Vec<Word> = (0..rng.gen_range(1..=3))
                    .map(|_| random_word(&mut rng, &product, 6))
                    .collect();
                let aut = Automaton::fold(&product, &gens);
                let closure =
                    kurosh::brute_force_elements(&product, &gens, 16, 500_000).unwrap();
                for w in &short_words {
                    assert_eq!(
                        aut.is_member(w),
                        closure.contains(w),
                        "disagreement on {} for generators {:?}",
                        product.display_word(w),
                        gens.iter().map(|g| product.display_word(g)).collect::<Vec<_>>(),
                    );
                }
            }
        }
        Verdict::Pass
    });
}

/// −χ, the secondary-degree sum and |basis| − 1 agree on every graph; on
/// complete graphs the reduced rank is index-proportional with the exact
/// per-product constant.
fn check_rank_identities(graph: &SubgroupGraph) {
    let e = graph.euler();
    let degree_sum: i64 = graph
        .secondaries()
        .iter()
        .map(|s| s.members.len() as i64 - 1)
        .sum::<i64>()
        - e.primary as i64;
    assert_eq!(-e.chi, degree_sum, "χ vs degree sum");
    assert_eq!(-e.chi, graph.basis().len() as i64 - 1, "χ vs basis size");
    assert_eq!(e.rank, graph.basis().len());
    assert_eq!(e.reduced_rank, graph.reduced_rank());

    let aut = graph.automaton();
    if let Some(index) = aut.index() {
        // r̄ · lcm = index · (Σ(lcm − lcm/|G_α|) − lcm), kept in integers
        let product = aut.product();
        let mut lcm = 1usize;
        for f in product.factors() {
            lcm = lcm / gcd(lcm, f.order()) * f.order();
        }
        let weight: i64 = product
            .factors()
            .iter()
            .map(|f| (lcm - lcm / f.order()) as i64)
            .sum::<i64>()
            - lcm as i64;
        assert_eq!(
            graph.reduced_rank() as i64 * lcm as i64,
            index as i64 * weight,
            "reduced rank is not index-proportional"
        );
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn criterion_02_rank_identities_across_suite() {
    criterion(2, "rank identities on the suite", Duration::from_secs(10), || {
        let p23 = z2_z3();
        let mut suite: Vec<(String, SubgroupGraph)> = Vec::new();

        // hand-picked graphs over Z₂*Z₃
        for (name, gens) in [
            ("trivial", vec![]),
            ("ab", vec!["ab"]),
            ("s3-kernel", vec!["abab", "ab^2ab^2"]),
            ("cube", vec!["ababab", "ab^-1ab^-1"]),
        ] {
            let words: Vec<Word> = gens.iter().map(|s| p23.parse_word(s).unwrap()).collect();
            let aut = Automaton::fold(&p23, &words);
            suite.push((name.to_string(), SubgroupGraph::new(&aut).unwrap()));
        }
        let a4 = Automaton::normal_closure(&p23, &[p23.parse_word("ababab").unwrap()], 10_000)
            .unwrap();
        suite.push(("a4-kernel".into(), SubgroupGraph::new(&a4).unwrap()));

        // random folds over both small products
        let mut rng = StdRng::seed_from_u64(0x5eed_0002);
        for product in [z2_z3(), z2_v4()] {
            for i in 0..30 {
                let gens: Vec<Word> = (0..rng.gen_range(1..=3))
                    .map(|_| random_word(&mut rng, &product, 6))
                    .collect();
                let aut = Automaton::fold(&product, &gens);
                if aut.is_factor_free() {
                    suite.push((format!("random-{i}"), SubgroupGraph::new(&aut).unwrap()));
                }
            }
        }

        // all graphs of the always-constructible extremal families
        for data in dihedral_cases() {
            for g in &data.graphs {
                suite.push((format!("case{}-n{}", data.inst.case, data.inst.n), g.clone()));
            }
        }
        for data in searched_cases().iter().flatten() {
            for g in &data.graphs {
                suite.push((format!("case{}-n{}", data.inst.case, data.inst.n), g.clone()));
            }
        }

        let mut complete_seen = [false; 3];
        for (name, graph) in &suite {
            check_rank_identities(graph);

            // the per-product index/rank ratios on complete graphs
            let aut = graph.automaton();
            if let Some(index) = aut.index() {
                let orders: Vec<usize> =
                    aut.product().factors().iter().map(|f| f.order()).collect();
                let mut sorted = orders.clone();
                sorted.sort();
                let r = graph.reduced_rank();
                match sorted.as_slice() {
                    [2, 3] => {
                        assert_eq!(index % 6, 0, "{name}: index must be divisible by 6");
                        complete_seen[0] = true;
                    }
                    [2, 4] => {
                        assert_eq!(index, 4 * r, "{name}: index must be 4·r̄");
                        complete_seen[1] = true;
                    }
                    [2, 2, 2] => {
                        assert_eq!(index, 2 * r, "{name}: index must be 2·r̄");
                        complete_seen[2] = true;
                    }
                    _ => {}
                }
            }
        }
        assert!(complete_seen[0], "no complete graph over Z2*Z3 in the suite");
        assert!(complete_seen[1], "no complete graph over Z2*(Z2xZ2) in the suite");
        assert!(complete_seen[2], "no complete graph over Z2*Z2*Z2 in the suite");
        Verdict::Pass
    });
}

#[test]
fn criterion_03_s3_kernel_benchmark() {
    criterion(3, "kernel of Z2*Z3 → S3", Duration::from_secs(1), || {
        let p = z2_z3();
        let s3 = FiniteGroup::dihedral(3).unwrap();
        let phi_a = GroupHom::new(p.factor(0).clone(), s3.clone(), vec![0, 3]).unwrap();
        let phi_b = GroupHom::new(p.factor(1).clone(), s3.clone(), vec![0, 1, 2]).unwrap();
        let kernel = Automaton::cayley(&p, &s3, &[phi_a, phi_b]).unwrap();
        let graph = SubgroupGraph::new(&kernel).unwrap();
        assert_eq!(kernel.index(), Some(6));
        assert_eq!(graph.rank(), 2);
        assert_eq!(graph.reduced_rank(), 1);
        Verdict::Pass
    });
}

#[test]
fn criterion_04_family3_sharpness_n2_n3() {
    criterion(4, "family 3 exact values (n = 2, 3)", Duration::from_secs(5), || {
        let inst = build_case(3, 2, None, 12).unwrap();
        let (sharp, graphs) = kurosh::verify_sharpness(&inst).unwrap();
        let b = &sharp.bound;
        assert_eq!(b.index1, Some(12));
        assert_eq!(b.r1, 3);
        assert_eq!(graphs[1].rank(), 6);
        assert_eq!(b.index2, Some(20));
        assert_eq!(b.r2, 5);
        assert_eq!(b.index_intersection, Some(240));
        assert_eq!(240, 12 * 20);
        assert_eq!(b.r_intersection, 60);
        assert_eq!(60, 4 * 3 * 5);
        assert!(b.holds && b.equality);

        let inst3 = build_case(3, 3, None, 12).unwrap();
        let (sharp3, _) = kurosh::verify_sharpness(&inst3).unwrap();
        let b3 = &sharp3.bound;
        assert_eq!(b3.r_intersection, 96);
        assert_eq!(96, 4 * 4 * 6);
        assert_eq!(b3.index_intersection, Some(384));
        assert!(b3.holds && b3.equality);
        Verdict::Pass
    });
}

#[test]
fn criterion_05_family4_sharpness_n2() {
    criterion(5, "family 4 exact values (n = 2)", Duration::from_secs(5), || {
        let inst = build_case(4, 2, None, 12).unwrap();
        let (sharp, _) = kurosh::verify_sharpness(&inst).unwrap();
        let b = &sharp.bound;
        assert_eq!(b.r1, 6);
        assert_eq!(b.r2, 10);
        assert_eq!(b.r_intersection, 120);
        assert_eq!(120, 2 * 6 * 10);
        assert_eq!(b.index_intersection, Some(240));
        assert_eq!(b.q_star, QStar::Infinite);
        assert!(b.holds && b.equality);
        Verdict::Pass
    });
}

#[test]
fn criterion_06_amalgam_equalities() {
    criterion(6, "amalgam bound attained", Duration::from_secs(30), || {
        let specs = amalgam_specs();

        // edge group Z₂ under family 3 at n = 2: 120 = 4·|T|·3·5
        let inst2 = build_case(3, 2, None, 12).unwrap();
        let lifted2 = lift_case(&specs[0].1, &inst2).unwrap();
        let (check2, _) = theorem2(&specs[0].1, &lifted2.h1, &lifted2.h2).unwrap();
        assert_eq!(check2.t_order, 2);
        assert_eq!(check2.quotient_r_intersection, 60);
        assert_eq!(check2.r_intersection, 120);
        assert_eq!(120, 2 * 60);
        assert_eq!((check2.r1, check2.r2), (3, 5));
        assert!(check2.holds && check2.equality && check2.tau_surjective);

        // edge group Z₃ under family 3 at n = 3: 288 = 4·|T|·4·6
        let inst3 = build_case(3, 3, None, 12).unwrap();
        let lifted3 = lift_case(&specs[1].1, &inst3).unwrap();
        let (check3, _) = theorem2(&specs[1].1, &lifted3.h1, &lifted3.h2).unwrap();
        assert_eq!(check3.t_order, 3);
        assert_eq!(check3.quotient_r_intersection, 96);
        assert_eq!(check3.r_intersection, 288);
        assert_eq!(288, 3 * 96);
        assert_eq!(288, 4 * 3 * 4 * 6);
        assert_eq!((check3.r1, check3.r2), (4, 6));
        assert!(check3.holds && check3.equality && check3.tau_surjective);
        Verdict::Pass
    });
}

/// A random homomorphism from one factor into `q`: generator images sampled
/// among order-compatible elements, extended by closure, rejected on clash.
fn random_hom(rng: &mut StdRng, source: &FiniteGroup, q: &FiniteGroup) -> Option<GroupHom> {
    let gens = source.generators().to_vec();
    let picks: Vec<usize> = gens
        .iter()
        .map(|&g| {
            let og = source.element_order(g);
            let fitting: Vec<usize> =
                (0..q.order()).filter(|&t| og.is_multiple_of(q.element_order(t))).collect();
            fitting[rng.gen_range(0..fitting.len())]
        })
        .collect();
    let mut img = vec![usize::MAX; source.order()];
    img[0] = 0;
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for (k, &g) in gens.iter().enumerate() {
            let y = source.mul(x, g);
            let ty = q.mul(img[x], picks[k]);
            if img[y] == usize::MAX {
                img[y] = ty;
                stack.push(y);
            } else if img[y] != ty {
                return None;
            }
        }
    }
    GroupHom::new(source.clone(), q.clone(), img).ok()
}

/// A finite-index subgroup: the kernel of a random homomorphism onto a random
/// small group (resampled until the images generate the target).
fn random_kernel(rng: &mut StdRng, product: &FreeProduct, pool: &[FiniteGroup]) -> Automaton {
    loop {
        let q = &pool[rng.gen_range(0..pool.len())];
        let homs: Option<Vec<GroupHom>> = (0..product.num_factors())
            .map(|f| random_hom(rng, product.factor(f), q))
            .collect();
        let Some(homs) = homs else { continue };
        match Automaton::cayley(product, q, &homs) {
            Ok(aut) => return aut,
            Err(_) => continue, // images do not generate; resample
        }
    }
}

#[test]
fn criterion_07_random_lifted_pairs_never_violate() {
    criterion(7, "random lifted pairs obey bounds", Duration::from_secs(300), || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0007);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let pool = vec![
            z2.clone(),
            FiniteGroup::direct_product(&z2, &z2),
            FiniteGroup::dihedral(3).unwrap(),
            FiniteGroup::dihedral(4).unwrap(),
            FiniteGroup::dihedral(6).unwrap(),
            FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z2), &z2),
        ];
        for (name, am) in amalgam_specs() {
            let qp = am.quotient_product();
            let t_order = am.t().order();
            for i in 0..100 {
                let pair: Vec<LiftedSubgroup> = (0..2)
                    .map(|_| {
                        let kernel = random_kernel(&mut rng, qp, &pool);
                        let rank = SubgroupGraph::new(&kernel).unwrap().rank();
                        let twists: Vec<usize> =
                            (0..rank).map(|_| rng.gen_range(0..t_order)).collect();
                        LiftedSubgroup::new(&am, &kernel, twists).unwrap()
                    })
                    .collect();
                let (check, _) = theorem2(&am, &pair[0], &pair[1]).unwrap();
                assert!(check.holds, "amalgam bound violated over {name} (pair {i})");
                assert!(
                    check.tau_image_size <= t_order,
                    "τ image exceeds the edge group over {name} (pair {i})"
                );
                let (free_check, _) = intersection_bound(
                    pair[0].graph().automaton(),
                    pair[1].graph().automaton(),
                )
                .unwrap();
                assert!(
                    free_check.holds,
                    "quotient-level bound violated over {name} (pair {i})"
                );
                if check.normal_and_covering {
                    assert_eq!(
                        check.indices_multiply,
                        Some(true),
                        "normal covering pair must multiply indices over {name} (pair {i})"
                    );
                }
            }
        }
        Verdict::Pass
    });
}

#[test]
fn criterion_08_normal_covering_pairs_multiply_indices() {
    criterion(8, "normal + covering ⇒ index product", Duration::from_secs(60), || {
        // every constructed family instance
        for data in dihedral_cases() {
            assert!(data.sharp.h1_normal && data.sharp.covers);
            assert_eq!(data.sharp.index_product_exact, Some(true));
        }
        for data in searched_cases().iter().flatten() {
            assert!(data.sharp.h1_normal && data.sharp.covers);
            assert_eq!(data.sharp.index_product_exact, Some(true));
        }

        // an independent normal + covering pair: the S₃ kernel against the
        // A₄ kernel inside Z₂*Z₃ — indices 6 and 12, intersection 72
        let p = z2_z3();
        let s3_kernel = Automaton::fold(
            &p,
            &[p.parse_word("abab").unwrap(), p.parse_word("ab^2ab^2").unwrap()],
        );
        let a4_kernel =
            Automaton::normal_closure(&p, &[p.parse_word("ababab").unwrap()], 10_000).unwrap();
        let (check, graphs) = intersection_bound(&s3_kernel, &a4_kernel).unwrap();
        assert!(s3_kernel.is_normal(graphs[0].basis()).unwrap());
        assert!(kurosh::product_covers_group(&s3_kernel, graphs[1].basis()).unwrap());
        assert_eq!(check.index_intersection, Some(6 * 12));
        Verdict::Pass
    });
}

#[test]
fn criterion_09_searched_families_best_effort() {
    criterion(9, "families 1, 2 via quotient search", Duration::from_secs(120), || {
        let labels = ["family 1 (p = 3, n = 1)", "family 2 (n = 1)"];
        let want_coefficient = ["6", "4"];
        let mut skipped = Vec::new();
        for (k, result) in searched_cases().iter().enumerate() {
            match result {
                Ok(data) => {
                    let b = &data.sharp.bound;
                    assert!(b.holds, "{} bound", labels[k]);
                    assert!(b.equality, "{} must attain its bound", labels[k]);
                    assert_eq!(
                        kurosh::report::ratio_string(b.coefficient),
                        want_coefficient[k],
                        "{} coefficient",
                        labels[k]
                    );
                    assert!(data.sharp.h1_normal && data.sharp.covers && data.sharp.words_in_both);
                }
                Err(kurosh::Error::QuotientNotFound { degree_bound }) => {
                    skipped.push(format!("{} (no quotient within degree {degree_bound})", labels[k]));
                }
                Err(e) => panic!("{} failed for a non-search reason: {e}", labels[k]),
            }
        }
        if skipped.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Skip(skipped.join("; "))
        }
    });
}

#[test]
fn criterion_10_reports_are_byte_identical() {
    criterion(10, "deterministic reports", Duration::from_secs(120), || {
        let exe = env!("CARGO_BIN_EXE_kurosh");
        let run = || {
            let out = Command::new(exe)
                .args(["paper-case", "--case", "3", "--n", "2"])
                .output()
                .expect("binary must run");
            assert!(out.status.success(), "paper-case must exit 0");
            out.stdout
        };
        let first = run();
        let second = run();
        assert!(!first.is_empty());
        assert_eq!(first, second, "two runs must emit identical bytes");
        Verdict::Pass
    });
}
