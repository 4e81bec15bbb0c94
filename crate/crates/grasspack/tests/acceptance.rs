//! Acceptance gate: each test exercises one stated goal end to end and
//! prints a single `criterion N ...: PASS` or `... FAIL` line. Run with
//! `cargo test --test acceptance -- --nocapture` to see every line.

use std::process::Command;
use std::time::Instant;

use grasspack::constructions::{
    diplo_simplex_lines, hamming10_code, lines_from_code, lines_from_conference_matrix,
    paley_conference_matrix, planes18_g42, planes28_g73, planes70_g84,
};
use grasspack::{
    audit, best_matching, chordal_distance, chordal_from_projection, embed_points,
    embedding_dimension, lr_distances, lr_to_plane, min_distance, min_interplane_angle, optimize,
    plane_to_lr, potential_gradient, principal_angles, projection_matrix, random_packing,
    random_plane, Metric, OptimConfig, Packing,
};
use nalgebra::DMatrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

// ─── harness ───────────────────────────────────────────────────────────────

/// Returns `Err` with the formatted message when the condition fails.
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !($cond) {
            return Err(format!($($fmt)+));
        }
    };
}

/// Runs one criterion body and prints its single pass/fail line.
fn gate(label: &str, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(detail) => println!("{label}: PASS {detail}"),
        Err(msg) => {
            println!("{label}: FAIL ({msg})");
            panic!("{label}: {msg}");
        }
    }
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_grasspack"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot spawn CLI: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "`grasspack {}` exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| format!("stdout not UTF-8: {e}"))
}

/// First numeric token after `key` on the report line starting with `key`.
fn field(text: &str, key: &str) -> Result<f64, String> {
    let line = text
        .lines()
        .find(|l| l.starts_with(key))
        .ok_or_else(|| format!("no '{key}' line in:\n{text}"))?;
    line[key.len()..]
        .split_whitespace()
        .next()
        .ok_or_else(|| format!("empty '{key}' line"))?
        .parse()
        .map_err(|e| format!("bad '{key}' value: {e}"))
}

fn lib_err(e: grasspack::Error) -> String {
    e.to_string()
}

// ─── criterion 1: minimal angles of small line packings ────────────────────

#[test]
fn criterion_1_small_line_packings_reach_the_known_angles() {
    gate("criterion 1 (lines in R^3, N = 2..7 minimal angles)", || {
        let targets = [
            (2, 90.0),
            (3, 90.0),
            (4, 70.5288),
            (5, 63.4349),
            (6, 63.4349),
            (7, 54.7356),
        ];
        let start = Instant::now();
        for (count, target) in targets {
            let text = cli(&[
                "optimize",
                "3",
                "1",
                &count.to_string(),
                "--restarts",
                "10",
                "--seed",
                "0",
            ])?;
            let angle = field(&text, "min angle")?;
            ensure!(
                (angle - target).abs() <= 0.05,
                "N = {count}: angle {angle} deg vs target {target} deg"
            );
        }
        let elapsed = start.elapsed().as_secs_f64();
        ensure!(elapsed <= 300.0, "runtime {elapsed:.1}s exceeds 5 minutes");
        Ok(format!(
            "(10 restarts per N, tolerance 0.05 deg, {elapsed:.1}s total)"
        ))
    });
}

// ─── criterion 2: minimal distances of small plane packings ────────────────

#[test]
fn criterion_2_small_plane_packings_reach_the_known_distances() {
    gate("criterion 2 (planes in G(4,2), chordal N = 2..6 and geodesic N = 2..3)", || {
        let start = Instant::now();
        let chordal = [
            (2, 2.0),
            (3, 1.5),
            (4, 4.0 / 3.0),
            (5, 1.25),
            (6, 1.2),
        ];
        for (count, target) in chordal {
            let text = cli(&[
                "optimize",
                "4",
                "2",
                &count.to_string(),
                "--metric",
                "chordal",
                "--restarts",
                "10",
                "--seed",
                "0",
            ])?;
            let d2 = field(&text, "min distance^2")?;
            ensure!(
                (d2 - target).abs() <= 1e-3,
                "chordal N = {count}: d_c^2 = {d2} vs target {target}"
            );
        }
        // The geodesic N = 3 landscape has a strong suboptimal basin; more
        // restarts keep the global one in reach.
        let geodesic = [(2, 4.9348, 10usize), (3, 2.7416, 50)];
        for (count, target, restarts) in geodesic {
            let text = cli(&[
                "optimize",
                "4",
                "2",
                &count.to_string(),
                "--metric",
                "geodesic",
                "--restarts",
                &restarts.to_string(),
                "--seed",
                "0",
            ])?;
            let d2 = field(&text, "min distance^2")?;
            ensure!(
                (d2 - target).abs() <= 1e-2,
                "geodesic N = {count}: d_g^2 = {d2} vs target {target}"
            );
        }
        Ok(format!("({:.1}s total)", start.elapsed().as_secs_f64()))
    });
}

// ─── criterion 3: construction goldens ─────────────────────────────────────

#[test]
fn criterion_3_construction_goldens_hit_their_bounds() {
    gate("criterion 3 (construction goldens, each under 1s)", || {
        let t = Instant::now();
        let p70 = planes70_g84();
        ensure!(p70.len() == 70, "planes70 count {}", p70.len());
        let (d, _) = min_distance(&p70, Metric::Chordal).map_err(lib_err)?;
        ensure!((d * d - 2.0).abs() <= 1e-12, "planes70 d_c^2 = {}", d * d);
        let report = audit(&p70).map_err(lib_err)?;
        ensure!(
            (report.ratio - 1.0).abs() <= 1e-12,
            "planes70 orthoplex ratio {}",
            report.ratio
        );
        ensure!(t.elapsed().as_secs_f64() < 1.0, "planes70 took {:?}", t.elapsed());

        let t = Instant::now();
        let p18 = planes18_g42();
        let (d, _) = min_distance(&p18, Metric::Chordal).map_err(lib_err)?;
        ensure!((d * d - 1.0).abs() <= 1e-12, "planes18 d_c^2 = {}", d * d);
        ensure!(t.elapsed().as_secs_f64() < 1.0, "planes18 took {:?}", t.elapsed());

        let t = Instant::now();
        let p28 = planes28_g73();
        let report = audit(&p28).map_err(lib_err)?;
        ensure!(
            (report.achieved_sq - 16.0 / 9.0).abs() <= 1e-9,
            "planes28 d_c^2 = {} vs simplex bound 16/9",
            report.achieved_sq
        );
        ensure!(report.meets, "planes28 does not meet its bound");
        ensure!(t.elapsed().as_secs_f64() < 1.0, "planes28 took {:?}", t.elapsed());

        let t = Instant::now();
        let conf = lines_from_conference_matrix(&paley_conference_matrix(5).map_err(lib_err)?)
            .map_err(lib_err)?;
        ensure!(conf.len() == 6, "conference q=5 count {}", conf.len());
        let angle = min_interplane_angle(&conf).map_err(lib_err)?;
        let target = (1.0 / 5f64.sqrt()).acos();
        ensure!(
            (angle - target).abs() <= 1e-9,
            "conference angle {} vs {}",
            angle.to_degrees(),
            target.to_degrees()
        );
        ensure!(t.elapsed().as_secs_f64() < 1.0, "conference took {:?}", t.elapsed());

        let t = Instant::now();
        let diplo = diplo_simplex_lines(4).map_err(lib_err)?;
        let angle = min_interplane_angle(&diplo).map_err(lib_err)?;
        let target = 0.25f64.acos();
        ensure!(
            (angle - target).abs() <= 1e-9,
            "diplo angle {} vs {}",
            angle.to_degrees(),
            target.to_degrees()
        );
        ensure!(t.elapsed().as_secs_f64() < 1.0, "diplo took {:?}", t.elapsed());

        let t = Instant::now();
        let hamming = lines_from_code(&hamming10_code()).map_err(lib_err)?;
        ensure!(hamming.m() == 10 && hamming.n() == 1, "hamming dims");
        ensure!(hamming.len() == 16, "hamming count {}", hamming.len());
        let report = audit(&hamming).map_err(lib_err)?;
        ensure!(
            (report.achieved_sq - 0.96).abs() <= 1e-12,
            "hamming d_c^2 = {}",
            report.achieved_sq
        );
        ensure!(
            (report.simplex_bound - 0.96).abs() <= 1e-12 && report.meets,
            "hamming bound {} meets {}",
            report.simplex_bound,
            report.meets
        );
        ensure!(t.elapsed().as_secs_f64() < 1.0, "hamming took {:?}", t.elapsed());

        Ok("(70/18/28-plane families, conference q=5, diplo n=4, shortened Hamming)".into())
    });
}

// ─── criterion 4: bound soundness ──────────────────────────────────────────

#[test]
fn criterion_4_bounds_are_never_exceeded() {
    gate("criterion 4 (bound soundness on 1000 random packings)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let m = rng.random_range(2usize..=8);
            let n = rng.random_range(1usize..=3.min(m - 1));
            let count = rng.random_range(2usize..=20);
            let packing = random_packing(m, n, count, Metric::Chordal, &mut rng);
            let report = audit(&packing).map_err(lib_err)?;
            ensure!(
                report.ratio <= 1.0 + 1e-9,
                "G({m},{n}) N={count}: ratio {} exceeds the bound",
                report.ratio
            );
            worst = worst.max(report.ratio);
        }
        Ok(format!("(worst ratio {worst:.6})"))
    });
}

// ─── criterion 5: representation identities ────────────────────────────────

#[test]
fn criterion_5_representation_identities_hold() {
    gate("criterion 5 (distance representations agree)", || {
        // Angle route vs projection route, 1e4 random pairs, 1e-9 relative.
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let dims = [(2, 1), (3, 1), (4, 1), (4, 2), (5, 2), (6, 3)];
        let mut worst_rel: f64 = 0.0;
        for k in 0..10_000 {
            let (m, n) = dims[k % dims.len()];
            let p = random_plane(m, n, &mut rng);
            let q = random_plane(m, n, &mut rng);
            let via_angles = chordal_distance(&p, &q).map_err(lib_err)?;
            let via_projections =
                chordal_from_projection(&projection_matrix(&p), &projection_matrix(&q))
                    .map_err(lib_err)?;
            let rel = (via_angles - via_projections).abs() / via_projections.max(1e-12);
            ensure!(
                rel <= 1e-9,
                "pair {k} in G({m},{n}): angle route {via_angles} vs projection route {via_projections}"
            );
            worst_rel = worst_rel.max(rel);
        }

        // Sphere embedding is a chordal isometry, 1e-10 absolute.
        let mut worst_embed: f64 = 0.0;
        for _ in 0..100 {
            let m = rng.random_range(2usize..=5);
            let n = rng.random_range(1usize..=(m - 1));
            let count = rng.random_range(2usize..=8);
            let packing = random_packing(m, n, count, Metric::Chordal, &mut rng);
            let points = embed_points(&packing);
            for i in 0..count {
                for j in (i + 1)..count {
                    let euclid: f64 = points[i]
                        .iter()
                        .zip(&points[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    let chordal =
                        chordal_distance(&packing.planes()[i], &packing.planes()[j])
                            .map_err(lib_err)?;
                    let diff = (euclid - chordal).abs();
                    ensure!(
                        diff <= 1e-10,
                        "embedding of G({m},{n}) pair ({i},{j}): |{euclid} - {chordal}| = {diff}"
                    );
                    worst_embed = worst_embed.max(diff);
                }
            }
        }

        // Two-sphere angle formulas vs SVD principal angles on 1e4 G(4,2)
        // pairs, plus the round trip through the pair representation.
        let mut worst_lr: f64 = 0.0;
        let mut worst_round: f64 = 0.0;
        for k in 0..10_000 {
            let p = random_plane(4, 2, &mut rng);
            let q = random_plane(4, 2, &mut rng);
            let angles = principal_angles(&p, &q).map_err(lib_err)?;
            let lr_p = plane_to_lr(&p).map_err(lib_err)?;
            let lr_q = plane_to_lr(&q).map_err(lib_err)?;
            let lr = lr_distances(&lr_p, &lr_q);
            let t1 = (lr.theta1 - angles.angles()[0]).abs();
            let t2 = (lr.theta2 - angles.angles()[1]).abs();
            let dc = (lr.chordal_sq - angles.chordal_sq()).abs();
            let dg = (lr.geodesic_sq - angles.geodesic_sq()).abs();
            ensure!(
                t1 <= 1e-9 && t2 <= 1e-9 && dc <= 1e-9 && dg <= 1e-9,
                "pair {k}: angle errors ({t1:.3e}, {t2:.3e}), chordal error {dc:.3e}, geodesic error {dg:.3e}"
            );
            worst_lr = worst_lr.max(t1.max(t2).max(dc).max(dg));

            let back = lr_to_plane(&lr_p);
            let round = chordal_distance(&p, &back).map_err(lib_err)?;
            ensure!(round <= 1e-9, "round trip moved plane {k} by {round:.3e}");
            worst_round = worst_round.max(round);
        }

        Ok(format!(
            "(worst: routes {worst_rel:.1e} rel, embedding {worst_embed:.1e}, two-sphere {worst_lr:.1e}, round trip {worst_round:.1e})"
        ))
    });
}

// ─── criterion 6: gradient check ───────────────────────────────────────────

/// Inverse-distance potential extended off the orthonormal manifold: the
/// same trace formula evaluated on raw generators without re-orthonormalizing.
/// The analytic gradient is the exact gradient of this extension, so central
/// differences through it are the independent oracle.
fn extended_chordal_potential(gens: &[DMatrix<f64>], n: usize, a: f64) -> f64 {
    let mut phi = 0.0;
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let prod = &gens[i] * gens[j].transpose();
            let dist = (n as f64 - prod.norm_squared()).max(0.0).sqrt();
            phi += 1.0 / (dist - a);
        }
    }
    phi
}

fn central_difference_gradient(packing: &Packing, a: f64) -> Vec<DMatrix<f64>> {
    let h = 1e-6;
    let gens: Vec<DMatrix<f64>> = packing.planes().iter().map(|p| p.gen().clone()).collect();
    let n = packing.n();
    (0..gens.len())
        .map(|p| {
            DMatrix::from_fn(gens[p].nrows(), gens[p].ncols(), |r, c| {
                let mut plus = gens.clone();
                plus[p][(r, c)] += h;
                let mut minus = gens.clone();
                minus[p][(r, c)] -= h;
                (extended_chordal_potential(&plus, n, a)
                    - extended_chordal_potential(&minus, n, a))
                    / (2.0 * h)
            })
        })
        .collect()
}

#[test]
fn criterion_6_analytic_gradient_matches_central_differences() {
    gate("criterion 6 (chordal potential gradient vs central differences)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let mut worst: f64 = 0.0;
        for k in 0..100 {
            // A draw with a nearly coincident pair puts the potential's pole
            // inside the difference stencil's error floor; redraw those. The
            // gradient identity itself does not depend on the configuration.
            let (packing, min_d) = loop {
                let m = rng.random_range(2usize..=5);
                let n = rng.random_range(1usize..=2.min(m - 1));
                let count = rng.random_range(2usize..=6);
                let candidate = random_packing(m, n, count, Metric::Chordal, &mut rng);
                let (d, _) = min_distance(&candidate, Metric::Chordal).map_err(lib_err)?;
                if d >= 0.05 {
                    break (candidate, d);
                }
            };
            let (m, n, count) = (packing.m(), packing.n(), packing.len());
            // Alternate between the free potential and a pole halfway up.
            let a = if k % 2 == 0 { 0.0 } else { min_d / 2.0 };
            let analytic = potential_gradient(&packing, a, Metric::Chordal).map_err(lib_err)?;
            let numeric = central_difference_gradient(&packing, a);
            let mut diff_sq = 0.0;
            let mut norm_sq = 0.0;
            for (g, f) in analytic.iter().zip(&numeric) {
                diff_sq += (g - f).norm_squared();
                norm_sq += g.norm_squared();
            }
            let rel = (diff_sq / norm_sq.max(1e-300)).sqrt();
            ensure!(
                rel < 1e-5,
                "config {k} (G({m},{n}), N={count}, A={a:.3}): relative error {rel:.3e}"
            );
            worst = worst.max(rel);
        }
        Ok(format!("(100 configurations, worst relative error {worst:.1e})"))
    });
}

// ─── criterion 7: matching oracle ──────────────────────────────────────────

fn for_each_permutation(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Exhaustive optimum over every class permutation and sign choice.
fn brute_force_best(reps: &[[f64; 3]]) -> f64 {
    let k = reps.len();
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let dots: Vec<Vec<f64>> = reps
        .iter()
        .map(|a| reps.iter().map(|b| dot(a, b)).collect())
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut perm: Vec<usize> = (0..k).collect();
    for_each_permutation(&mut perm, 0, &mut |perm| {
        for signs in 0..(1u32 << k) {
            let mut min = f64::INFINITY;
            for i in 0..k {
                for j in (i + 1)..k {
                    let si = if signs >> i & 1 == 1 { -1.0 } else { 1.0 };
                    let sj = if signs >> j & 1 == 1 { -1.0 } else { 1.0 };
                    let value = 1.0 - dots[i][j] * si * sj * dots[perm[i]][perm[j]];
                    min = min.min(value);
                }
            }
            best = best.max(min);
        }
    });
    best
}

fn with_antipodes(reps: &[[f64; 3]]) -> Vec<[f64; 3]> {
    reps.iter()
        .flat_map(|p| [[p[0], p[1], p[2]], [-p[0], -p[1], -p[2]]])
        .collect()
}

fn unit(p: [f64; 3]) -> [f64; 3] {
    let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / norm, p[1] / norm, p[2] / norm]
}

fn icosahedron_classes() -> Vec<[f64; 3]> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    vec![
        unit([0.0, 1.0, phi]),
        unit([0.0, -1.0, phi]),
        unit([1.0, phi, 0.0]),
        unit([-1.0, phi, 0.0]),
        unit([phi, 0.0, 1.0]),
        unit([phi, 0.0, -1.0]),
    ]
}

#[test]
fn criterion_7_matching_equals_brute_force() {
    gate("criterion 7 (matching solver vs brute force, up to 6 orbits)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let mut sets: Vec<(String, Vec<[f64; 3]>)> = Vec::new();
        sets.push((
            "octahedron".into(),
            vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        ));
        let s = 1.0 / 3f64.sqrt();
        sets.push((
            "cube".into(),
            vec![[s, s, s], [s, s, -s], [s, -s, s], [s, -s, -s]],
        ));
        sets.push(("icosahedron".into(), icosahedron_classes()));
        for orbits in 2..=6 {
            for sample in 0..5 {
                let reps: Vec<[f64; 3]> = (0..orbits)
                    .map(|_| {
                        unit([
                            StandardNormal.sample(&mut rng),
                            StandardNormal.sample(&mut rng),
                            StandardNormal.sample(&mut rng),
                        ])
                    })
                    .collect();
                sets.push((format!("random {orbits}-orbit #{sample}"), reps));
            }
        }
        for (name, reps) in &sets {
            let expected = brute_force_best(reps);
            let matching = best_matching(&with_antipodes(reps)).map_err(lib_err)?;
            let got = matching.objective();
            ensure!(
                (got - expected).abs() <= 1e-12,
                "{name}: solver {got} vs brute force {expected}"
            );
        }
        let ico = best_matching(&with_antipodes(&icosahedron_classes())).map_err(lib_err)?;
        ensure!(
            (ico.objective() - 1.2).abs() <= 1e-12,
            "icosahedron objective {} vs 6/5",
            ico.objective()
        );
        Ok(format!("({} point sets, icosahedron at 6/5)", sets.len()))
    });
}

// ─── criterion 8: embedding dimension and equidistance ─────────────────────

#[test]
fn criterion_8_plane_packings_span_nine_dimensions() {
    gate("criterion 8 (G(4,2) packings span 9 dimensions; 10-plane simplex)", || {
        let p18 = planes18_g42();
        let report = embedding_dimension(&p18, 1e-8).map_err(lib_err)?;
        ensure!(
            report.d_found == 9 && report.d_theory == 9,
            "18-plane packing: D_found {} D_theory {}",
            report.d_found,
            report.d_theory
        );

        let mut config = OptimConfig::new(Metric::Chordal);
        config.restarts = 8;
        let result = optimize(4, 2, 10, &config).map_err(lib_err)?;
        let report = embedding_dimension(&result.packing, 1e-8).map_err(lib_err)?;
        ensure!(
            report.d_found == 9,
            "10-plane packing: D_found {}",
            report.d_found
        );
        let dist = result
            .packing
            .distance_matrix(Metric::Chordal)
            .map_err(lib_err)?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..10 {
            for j in (i + 1)..10 {
                lo = lo.min(dist[i][j]);
                hi = hi.max(dist[i][j]);
            }
        }
        ensure!(
            hi - lo <= 1e-8,
            "10-plane packing distance spread {:.3e}",
            hi - lo
        );
        Ok(format!("(10-plane distance spread {:.1e})", hi - lo))
    });
}

// ─── criterion 9: declared out of desk scale ───────────────────────────────

#[test]
fn criterion_9_large_tables_are_declared_out_of_scope() {
    println!(
        "criterion 9 (large-N table rows): NOT GATED; published values came from \
         publisher-scale searches (over 15000 restarts per entry) and are out of \
         desk-scale reach, so they are tracked by regression only"
    );
}
