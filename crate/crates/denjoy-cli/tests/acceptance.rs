//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. Run with
//! `cargo test -p denjoy-cli --test acceptance -- --nocapture`.

use denjoy::circle::{build_map, BlowupSchedule, GapIndex};
use denjoy::rng::Lcg64;
use denjoy::sphere::{end_count, induced_end_map, EndsModel};
use denjoy::topology::{
    boundary_genus, euler_and_rank, gap_orbit_genus, glue_eval, mapping_torus_complex,
    parse_expression, BasePiece, HandleAttachment, HandleRecord,
};
use denjoy::{gl2z_equivalent, gl2z_matrix_search, ContinuedFraction, Gl2zVerdict, IntegerMatrix2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::time::{Duration, Instant};

fn cf(text: &str) -> ContinuedFraction {
    text.parse().unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1u8) << bits)
}

fn report(name: &str, elapsed: Duration, detail: &str) {
    println!("PASS {} [{:?}] {}", name, elapsed, detail);
}

#[test]
fn criterion_1_classification() {
    let start = Instant::now();

    let a = cf("[0; (2)]");
    let b = cf("[0; 1, (2)]");
    let g = cf("[0; (1)]");

    let verdict = gl2z_equivalent(&a, &b, 64);
    assert!(matches!(verdict, Gl2zVerdict::Equivalent { .. }));
    let witness = gl2z_matrix_search(&a, &b, 1, &rat(1, 1_000_000))
        .unwrap()
        .expect("witness matrix within entry bound 1");
    assert_eq!(witness, IntegerMatrix2::from_i64(0, 1, 1, 1).unwrap());

    assert_eq!(gl2z_equivalent(&a, &g, 64), Gl2zVerdict::NotEquivalent);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {:?}", elapsed);
    report(
        "criterion 1 (classification)",
        elapsed,
        "sqrt2-1 ~ 1/sqrt2 with witness [[0, 1], [1, 1]]; sqrt2-1 !~ 1/phi",
    );
}

#[test]
fn criterion_2_pairwise_inequivalent_family() {
    let start = Instant::now();
    let family: Vec<ContinuedFraction> = [
        "[0; (1)]",
        "[0; (2)]",
        "[0; (3)]",
        "[0; (1, 2)]",
        "[0; (1, 3)]",
        "[0; (2, 3)]",
    ]
    .iter()
    .map(|t| cf(t))
    .collect();

    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            let verdict = gl2z_equivalent(a, b, 64);
            if i == j {
                assert!(
                    matches!(verdict, Gl2zVerdict::Equivalent { .. }),
                    "diagonal pair {} not equivalent to itself",
                    a
                );
            } else {
                assert_eq!(
                    verdict,
                    Gl2zVerdict::NotEquivalent,
                    "{} and {} should be inequivalent",
                    a,
                    b
                );
            }
        }
    }

    // tail rotations identify: (1,2) and (2,1) name the same class
    assert!(matches!(
        gl2z_equivalent(&cf("[0; (1, 2)]"), &cf("[0; (2, 1)]"), 64),
        Gl2zVerdict::Equivalent { .. }
    ));

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {:?}", elapsed);
    report(
        "criterion 2 (pairwise non-equivalence)",
        elapsed,
        "full 6x6 verdict matrix exact: tails (1),(2),(3),(1,2),(1,3),(2,3)",
    );
}

#[test]
fn criterion_3_semiconjugacy() {
    let start = Instant::now();
    let map = build_map(BlowupSchedule::single(cf("[0; (2)]")), 30).unwrap();
    let result = map.semiconjugacy_check(10_000, 1_000, 0).unwrap();
    assert_eq!(
        result.gap_residual,
        rat(0, 1),
        "gap residual must be exactly 0"
    );
    assert!(
        result.base_residual_bound <= pow2_inv(20),
        "base residual bound {} exceeds 2^-20",
        result.base_residual_bound
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {:?}", elapsed);
    report(
        "criterion 3 (semi-conjugacy)",
        elapsed,
        &format!(
            "N=30, 10^4 base samples, 10^3 iterates: gap residual 0, base bound {}",
            result.base_residual_bound
        ),
    );
}

#[test]
fn criterion_4_wandering_structure() {
    let start = Instant::now();
    let map = build_map(BlowupSchedule::single(cf("[0; (2)]")), 25).unwrap();

    let report_w = map.wandering_images(25).unwrap();
    assert!(report_w.pass, "{:?}", report_w.first_violation);

    let approx = map.cantor_approx();
    let total = &approx.resolved_gap_total + &approx.total_arc_length;
    let gap = (total - rat(4, 1)).abs();
    assert!(
        gap <= pow2_inv(24),
        "circumference bookkeeping off by {}",
        gap
    );
    assert_eq!(map.tail_bound(), &pow2_inv(24));

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {:?}", elapsed);
    report(
        "criterion 4 (wandering structure)",
        elapsed,
        "f^j(I_0) = I_j for |j| <= 25, 51 gaps certified disjoint, gaps + arcs = 4 within 2^-24",
    );
}

#[test]
fn criterion_5_genus_identities() {
    let start = Instant::now();

    for m in 1..=5u64 {
        for k in 1..=50u64 {
            let complex = mapping_torus_complex(m, k).unwrap();
            let (chi, rank) = euler_and_rank(&complex).unwrap();
            assert_eq!(chi, -(m as i64), "chi mismatch at m={}, k={}", m, k);
            assert_eq!(rank, m + 1, "rank mismatch at m={}, k={}", m, k);
        }
    }

    // brute-force oracle: orbits of (i, n) -> (i, n + k) on |n| <= 1000
    fn orbit_count_oracle(m: u64, k: u64) -> u64 {
        let width = 1000i64;
        let mut count = 0u64;
        for _ in 0..m {
            let mut seen = vec![false; (2 * width + 1) as usize];
            for n in -width..=width {
                let idx = (n + width) as usize;
                if !seen[idx] {
                    count += 1;
                    let mut at = n;
                    while at <= width {
                        seen[(at + width) as usize] = true;
                        at += k as i64;
                    }
                }
            }
        }
        count
    }
    for m in 1..=10u64 {
        for k in 1..=10u64 {
            let genus = gap_orbit_genus(m, k).unwrap();
            // the window meets every residue class mod k, so the truncated
            // shift has exactly m*k orbits
            assert_eq!(orbit_count_oracle(m, k), m * k, "oracle disagrees");
            assert_eq!(genus, orbit_count_oracle(m, k) + 1);
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {:?}", elapsed);
    report(
        "criterion 5 (genus identities)",
        elapsed,
        "chi = -m, rank = m+1 for m <= 5, k <= 50; gap-orbit genus = mk+1 vs brute force for m, k <= 10",
    );
}

#[test]
fn criterion_6_gluing_calculus() {
    let start = Instant::now();

    // the mapping torus itself: genus 2
    let v2 = glue_eval(&parse_expression("denjoy(m=1)").unwrap()).unwrap();
    assert_eq!((v2.genus, v2.orientable), (2, true));

    // compression body V2 minus V1: boundary genus 2
    let compression = HandleRecord {
        pieces: vec![BasePiece::SolidTorus],
        one_handles: vec![HandleAttachment {
            from: 0,
            to: 0,
            orientable: true,
        }],
    };
    assert_eq!(boundary_genus(&compression).unwrap().genus, 2);
    let two_tori = HandleRecord {
        pieces: vec![BasePiece::SolidTorus, BasePiece::SolidTorus],
        one_handles: vec![HandleAttachment {
            from: 0,
            to: 1,
            orientable: true,
        }],
    };
    assert_eq!(boundary_genus(&two_tori).unwrap().genus, 2);

    // the composite with a shifted one-holed-torus family: genus 4
    let composite =
        glue_eval(&parse_expression("glue(denjoy(m=1), shift_or(g=1, n=0))").unwrap()).unwrap();
    assert_eq!((composite.genus, composite.orientable), (4, true));

    // orientable family: genus 2g + n + 2
    for g in 0..=4u64 {
        for n in 0..=4u64 {
            let text = format!("glue(denjoy(m=1), shift_or(g={}, n={}))", g, n);
            let d = glue_eval(&parse_expression(&text).unwrap()).unwrap();
            assert_eq!(
                d.genus,
                2 * g + n + 2,
                "orientable family at g={}, n={}",
                g,
                n
            );
            assert!(d.orientable);
        }
    }

    // non-orientable parity cases: genus g + n + 2, non-orientable
    for g in [1u64, 2, 5, 6] {
        for n in 0..=2u64 {
            let text = format!("glue(denjoy(m=1), shift_nonor(g={}, n={}))", g, n);
            let d = glue_eval(&parse_expression(&text).unwrap()).unwrap();
            assert_eq!(
                d.genus,
                g + n + 2,
                "non-orientable family at g={}, n={}",
                g,
                n
            );
            assert!(!d.orientable);
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {:?}", elapsed);
    report(
        "criterion 6 (gluing calculus)",
        elapsed,
        "genus 2 core, boundary genus 2 compression bodies, genus 4 composite, 2g+n+2 and g+n+2 families",
    );
}

#[test]
fn criterion_7_end_counts() {
    let start = Instant::now();

    for alpha in ["[0; (2)]", "[0; (1)]", "[0; (1, 2)]"] {
        let map = build_map(BlowupSchedule::single(cf(alpha)), 7).unwrap();
        for resolution in 0..=6 {
            let model = induced_end_map(&map, resolution).unwrap();
            assert_eq!(
                end_count(&model),
                1,
                "end count at alpha={}, resolution={}",
                alpha,
                resolution
            );
        }
    }

    // finite models: 50 random permutations on up to 12 ends, against a
    // union-find cycle-count oracle
    let mut rng = Lcg64::new(0);
    for _ in 0..50 {
        let m = 1 + rng.next_below(12) as usize;
        let mut perm: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            let j = rng.next_below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        let model = EndsModel::finite(perm.clone()).unwrap();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..m {
            let a = find(&mut parent, i);
            let b = find(&mut parent, perm[i]);
            if a != b {
                parent[a] = b;
            }
        }
        let oracle = (0..m).filter(|&x| find(&mut parent, x) == x).count();
        assert_eq!(end_count(&model), oracle);
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {:?}", elapsed);
    report(
        "criterion 7 (end counts)",
        elapsed,
        "one end at resolutions 0..6 for three rotation numbers; permutation cycles match union-find oracle",
    );
}

#[test]
fn criterion_8_orbit_density() {
    let start = Instant::now();
    for alpha in ["[0; (2)]", "[0; (1)]", "[0; (1, 2)]"] {
        let map = build_map(BlowupSchedule::single(cf(alpha)), 6).unwrap();
        let left_endpoint = map
            .gap_point(GapIndex { orbit: 0, n: 0 }, rat(0, 1))
            .unwrap();
        let result = map.orbit_density(&left_endpoint, 5, 100_000).unwrap();
        assert!(
            result.dense_at_resolution,
            "alpha={}: arcs {:?} unvisited",
            alpha, result.unvisited
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {:?}", elapsed);
    report(
        "criterion 8 (orbit density)",
        elapsed,
        "left endpoint of I_0 visits all resolution-5 arcs within 10^5 iterations for three rotation numbers",
    );
}

#[test]
fn criterion_9_determinism() {
    let start = Instant::now();
    let run = || {
        std::process::Command::new(env!("CARGO_BIN_EXE_denjoy"))
            .args([
                "verify",
                "--alpha",
                "[0;(2)]",
                "--depth",
                "12",
                "--samples",
                "200",
                "--iters",
                "50",
                "--seed",
                "7",
                "--resolution",
                "4",
            ])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert!(first.status.success(), "verify run failed");
    assert_eq!(first.stdout, second.stdout, "reports differ between runs");
    assert_eq!(first.stderr, second.stderr);
    let elapsed = start.elapsed();
    report(
        "criterion 9 (determinism)",
        elapsed,
        "two cmd_verify runs with identical flags and seed are byte-identical",
    );
}
