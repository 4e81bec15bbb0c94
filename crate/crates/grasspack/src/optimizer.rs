//! Maximin packing search: an inverse-distance potential with a sliding pole,
//! minimized by Hooke-Jeeves pattern search over raw generator entries.
//!
//! The potential sum 1/(d_ij - A) blows up as any pair approaches the pole A,
//! so minimizing it at fixed A pushes the closest pairs apart; advancing A
//! halfway to the current minimal distance after every epoch tightens the
//! barrier until the minimal distance stalls, turning soft repulsion into a
//! maximin search.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::packing::{min_distance, Metric, Packing};
use crate::plane::{chordal_sq_from_gens, geodesic_distance, orthonormalize, random_plane, Plane};

/// Hard cap on epochs per restart; the stall and step tests below terminate
/// far earlier in practice.
const MAX_EPOCHS: usize = 10_000;

/// An epoch counts as stalled when it improves the minimal distance by less
/// than this.
const EPOCH_TOL: f64 = 1e-12;

/// Consecutive stalled epochs before a restart stops. The pole keeps
/// advancing through a stall, and the tightened barrier often unsticks a
/// configuration that one epoch alone would abandon.
const MAX_STALLS: usize = 5;

/// Central-difference width for the geodesic gradient.
const FD_STEP: f64 = 1e-6;

/// Relative margin a trial potential must clear to count as an improvement.
/// Each evaluation carries a few ulps of roundoff; accepting bare `<` would
/// let that noise walk the configuration at dust-sized steps.
const ACCEPT_EPS: f64 = 1e-14;

fn improves(trial: f64, current: f64) -> bool {
    if current.is_finite() {
        trial < current - current.abs() * ACCEPT_EPS
    } else {
        trial.is_finite()
    }
}

/// Tuning knobs for [`optimize`] and [`pattern_search_epoch`].
#[derive(Clone, Debug)]
pub struct OptimConfig {
    /// Distance to maximize: chordal or geodesic (max-angle is evaluation-only).
    pub metric: Metric,
    /// Independent random starts; the best final packing wins.
    pub restarts: usize,
    /// Pattern-search iterations between pole advances.
    pub steps_per_epoch: usize,
    /// First exploratory step width, in raw generator-entry units.
    pub initial_step: f64,
    /// Multiplier applied to the step width after an iteration with no
    /// accepted move; must lie in (0, 1).
    pub step_shrink: f64,
    /// Step width below which a restart is considered converged.
    pub min_step: f64,
    /// Seed of the per-restart RNG streams; restart r draws its start from
    /// stream r, so results do not depend on scheduling.
    pub seed: u64,
    /// Replaces the random start of restart 0 when present.
    pub initial_packing: Option<Packing>,
}

impl OptimConfig {
    /// Desk-scale defaults: 50 restarts of 100-step epochs, step 0.1 halved
    /// down to 1e-12.
    pub fn new(metric: Metric) -> Self {
        Self {
            metric,
            restarts: 50,
            steps_per_epoch: 100,
            initial_step: 0.1,
            step_shrink: 0.5,
            min_step: 1e-12,
            seed: 0,
            initial_packing: None,
        }
    }
}

/// Outcome of [`optimize`]: the winning restart's packing and its epoch trace.
#[derive(Clone, Debug)]
pub struct OptimResult {
    /// Best packing found, tagged with the optimized metric.
    pub packing: Packing,
    /// Its minimal pairwise distance, recomputed from the final planes.
    pub min_dist: f64,
    /// Restart that produced it; ties go to the lowest index.
    pub restart_index: usize,
    /// One (epoch, pole, minimal distance) row per epoch of the winning
    /// restart.
    pub potential_trace: Vec<(usize, f64, f64)>,
}

fn reject_max_angle(metric: Metric) -> Result<()> {
    if metric == Metric::MaxAngle {
        return Err(Error::InvalidArgument(
            "max-angle distance is evaluation-only; optimize with chordal or geodesic".into(),
        ));
    }
    Ok(())
}

fn validate_config(config: &OptimConfig) -> Result<()> {
    reject_max_angle(config.metric)?;
    if config.restarts == 0 {
        return Err(Error::InvalidArgument("need at least one restart".into()));
    }
    if config.steps_per_epoch == 0 {
        return Err(Error::InvalidArgument(
            "need at least one step per epoch".into(),
        ));
    }
    if !(config.initial_step > 0.0 && config.initial_step.is_finite()) {
        return Err(Error::InvalidArgument(
            "initial step must be positive and finite".into(),
        ));
    }
    if !(config.step_shrink > 0.0 && config.step_shrink < 1.0) {
        return Err(Error::InvalidArgument(
            "step shrink must lie strictly between 0 and 1".into(),
        ));
    }
    if !(config.min_step > 0.0) {
        return Err(Error::InvalidArgument(
            "minimum step must be positive".into(),
        ));
    }
    Ok(())
}

// ─── potential and gradient ───

/// Packing potential sum over pairs of 1/(d_ij - a).
///
/// Finite only while every pairwise distance stays above the pole `a`;
/// otherwise reports the first offending pair.
pub fn potential(packing: &Packing, a: f64, metric: Metric) -> Result<f64> {
    reject_max_angle(metric)?;
    let dist = packing.distance_matrix(metric)?;
    let mut phi = 0.0;
    for i in 0..packing.len() {
        for j in (i + 1)..packing.len() {
            let d = dist[i][j];
            if d <= a {
                return Err(Error::PoleCrossed { i, j, dist: d, a });
            }
            phi += 1.0 / (d - a);
        }
    }
    Ok(phi)
}

/// Gradient of [`potential`] with respect to every raw generator entry, one
/// n x m matrix per plane.
///
/// The chordal gradient is analytic, differentiating the trace formula
/// d_ij = sqrt(n - ||G_i G_j^T||_F^2) as a function of unconstrained entries.
/// The geodesic gradient is a central finite difference through
/// re-orthonormalization. Both leave in-plane rotations flat: the n x n
/// product (gradient_i)(G_i)^T is symmetric.
pub fn potential_gradient(packing: &Packing, a: f64, metric: Metric) -> Result<Vec<DMatrix<f64>>> {
    reject_max_angle(metric)?;
    match metric {
        Metric::Chordal => chordal_gradient(packing, a),
        _ => geodesic_gradient(packing, a),
    }
}

fn chordal_gradient(packing: &Packing, a: f64) -> Result<Vec<DMatrix<f64>>> {
    let planes = packing.planes();
    let count = planes.len();
    let mut dist = vec![vec![0.0; count]; count];
    for i in 0..count {
        for j in (i + 1)..count {
            let d = chordal_sq_from_gens(planes[i].gen(), planes[j].gen()).sqrt();
            if d <= a {
                return Err(Error::PoleCrossed { i, j, dist: d, a });
            }
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut grads = Vec::with_capacity(count);
    for i in 0..count {
        let gi = planes[i].gen();
        let mut grad = DMatrix::zeros(packing.n(), packing.m());
        for (j, other) in planes.iter().enumerate() {
            if j == i {
                continue;
            }
            let gj = other.gen();
            let d = dist[i][j];
            // d(phi)/d(G_i) for the pair: G_i G_j^T G_j / (d (d - a)^2).
            let weight = 1.0 / (d * (d - a) * (d - a));
            grad += (gi * gj.transpose() * gj) * weight;
        }
        grads.push(grad);
    }
    Ok(grads)
}

fn geodesic_gradient(packing: &Packing, a: f64) -> Result<Vec<DMatrix<f64>>> {
    let planes = packing.planes();
    let count = planes.len();
    let dist = packing.distance_matrix(Metric::Geodesic)?;
    for i in 0..count {
        for j in (i + 1)..count {
            if dist[i][j] <= a {
                return Err(Error::PoleCrossed { i, j, dist: dist[i][j], a });
            }
        }
    }
    let mut grads = Vec::with_capacity(count);
    for p in 0..count {
        let mut grad = DMatrix::zeros(packing.n(), packing.m());
        for r in 0..packing.n() {
            for c in 0..packing.m() {
                let plus = shifted_row_potential(planes, p, r, c, FD_STEP, a)?;
                let minus = shifted_row_potential(planes, p, r, c, -FD_STEP, a)?;
                grad[(r, c)] = (plus - minus) / (2.0 * FD_STEP);
            }
        }
        grads.push(grad);
    }
    Ok(grads)
}

/// Potential terms touching plane `p` after nudging one generator entry and
/// re-orthonormalizing; terms not involving `p` cancel in central differences.
fn shifted_row_potential(
    planes: &[Plane],
    p: usize,
    r: usize,
    c: usize,
    h: f64,
    a: f64,
) -> Result<f64> {
    let mut raw = planes[p].gen().clone();
    raw[(r, c)] += h;
    let plane = orthonormalize(&raw)?;
    let mut sum = 0.0;
    for (j, other) in planes.iter().enumerate() {
        if j == p {
            continue;
        }
        let d = geodesic_distance(&plane, other)?;
        if d <= a {
            let (lo, hi) = (p.min(j), p.max(j));
            return Err(Error::PoleCrossed { i: lo, j: hi, dist: d, a });
        }
        sum += 1.0 / (d - a);
    }
    Ok(sum)
}

// ─── pattern search ───

/// Distance used inside the search loop: the trace formula for chordal (no
/// SVD), the principal-angle route otherwise.
fn pair_distance(metric: Metric, p: &Plane, q: &Plane) -> f64 {
    match metric {
        Metric::Chordal => chordal_sq_from_gens(p.gen(), q.gen()).sqrt(),
        _ => metric
            .distance(p, q)
            .expect("search planes share dimensions"),
    }
}

fn phi_from_dist(dist: &[Vec<f64>], a: f64) -> f64 {
    let count = dist.len();
    let mut phi = 0.0;
    for (i, row) in dist.iter().enumerate() {
        for &d in row.iter().take(count).skip(i + 1) {
            if d <= a {
                return f64::INFINITY;
            }
            phi += 1.0 / (d - a);
        }
    }
    phi
}

/// Search state over one configuration: raw entries, their orthonormalized
/// planes, the pairwise distance matrix, and the current potential. A
/// configuration whose minimal distance falls at or below the pole carries an
/// infinite potential instead of an error, so trials there are simply never
/// accepted.
#[derive(Clone)]
struct SearchState {
    metric: Metric,
    a: f64,
    m: usize,
    n: usize,
    count: usize,
    raw: Vec<f64>,
    planes: Vec<Plane>,
    dist: Vec<Vec<f64>>,
    phi: f64,
}

impl SearchState {
    fn from_planes(planes: Vec<Plane>, metric: Metric, a: f64) -> Self {
        let m = planes[0].m();
        let n = planes[0].n();
        let count = planes.len();
        let mut raw = Vec::with_capacity(count * n * m);
        for plane in &planes {
            for r in 0..n {
                for c in 0..m {
                    raw.push(plane.gen()[(r, c)]);
                }
            }
        }
        let mut state = SearchState {
            metric,
            a,
            m,
            n,
            count,
            raw,
            planes,
            dist: vec![vec![0.0; count]; count],
            phi: 0.0,
        };
        for i in 0..count {
            for j in (i + 1)..count {
                let d = pair_distance(metric, &state.planes[i], &state.planes[j]);
                state.dist[i][j] = d;
                state.dist[j][i] = d;
            }
        }
        state.phi = phi_from_dist(&state.dist, a);
        state
    }

    /// Rebuilds a full state from raw entries; `None` if any plane is rank
    /// deficient.
    fn try_from_raw(raw: Vec<f64>, like: &SearchState) -> Option<Self> {
        let per = like.n * like.m;
        let mut planes = Vec::with_capacity(like.count);
        for p in 0..like.count {
            let block = DMatrix::from_row_slice(like.n, like.m, &raw[p * per..(p + 1) * per]);
            planes.push(orthonormalize(&block).ok()?);
        }
        let mut state = SearchState {
            metric: like.metric,
            a: like.a,
            m: like.m,
            n: like.n,
            count: like.count,
            raw,
            planes,
            dist: vec![vec![0.0; like.count]; like.count],
            phi: 0.0,
        };
        for i in 0..state.count {
            for j in (i + 1)..state.count {
                let d = pair_distance(state.metric, &state.planes[i], &state.planes[j]);
                state.dist[i][j] = d;
                state.dist[j][i] = d;
            }
        }
        state.phi = phi_from_dist(&state.dist, state.a);
        Some(state)
    }

    fn set_pole(&mut self, a: f64) {
        self.a = a;
        self.phi = phi_from_dist(&self.dist, a);
    }

    fn min_dist(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.count {
            for j in (i + 1)..self.count {
                best = best.min(self.dist[i][j]);
            }
        }
        best
    }

    /// Potential with row `p` of the distance matrix replaced; summed from
    /// scratch each time so accepted moves never accumulate drift.
    fn phi_with_row(&self, p: usize, row: &[f64]) -> f64 {
        let mut phi = 0.0;
        for i in 0..self.count {
            for j in (i + 1)..self.count {
                let d = if i == p {
                    row[j]
                } else if j == p {
                    row[i]
                } else {
                    self.dist[i][j]
                };
                if d <= self.a {
                    return f64::INFINITY;
                }
                phi += 1.0 / (d - self.a);
            }
        }
        phi
    }

    /// Evaluates one changed raw entry without committing it; `None` if the
    /// perturbed plane loses rank.
    fn probe(&self, coord: usize, value: f64) -> Option<(Plane, Vec<f64>, f64)> {
        let per = self.n * self.m;
        let p = coord / per;
        let mut block = self.raw[p * per..(p + 1) * per].to_vec();
        block[coord - p * per] = value;
        let plane = orthonormalize(&DMatrix::from_row_slice(self.n, self.m, &block)).ok()?;
        let mut row = vec![0.0; self.count];
        for (j, other) in self.planes.iter().enumerate() {
            if j != p {
                row[j] = pair_distance(self.metric, &plane, other);
            }
        }
        let phi = self.phi_with_row(p, &row);
        Some((plane, row, phi))
    }

    fn apply(&mut self, coord: usize, value: f64, plane: Plane, row: Vec<f64>, phi: f64) {
        let p = coord / (self.n * self.m);
        self.raw[coord] = value;
        self.planes[p] = plane;
        for j in 0..self.count {
            self.dist[p][j] = row[j];
            self.dist[j][p] = row[j];
        }
        self.phi = phi;
    }
}

/// One exploratory pass: each coordinate in turn tries +step then -step,
/// keeping the first strict improvement so later coordinates see it.
fn exploratory(state: &mut SearchState, step: f64) {
    for coord in 0..state.raw.len() {
        let base = state.raw[coord];
        for trial in [base + step, base - step] {
            if let Some((plane, row, phi)) = state.probe(coord, trial) {
                if improves(phi, state.phi) {
                    state.apply(coord, trial, plane, row, phi);
                    break;
                }
            }
        }
    }
}

/// One pattern-search iteration: exploratory around the base, then a pattern
/// jump doubling the accumulated move with another exploratory pass around it,
/// kept only if it beats the plain exploratory point. Returns false when no
/// move was accepted at all (the caller then shrinks the step).
fn hj_iteration(state: &mut SearchState, step: f64) -> bool {
    let base = state.clone();
    exploratory(state, step);
    if state.phi >= base.phi {
        return false;
    }
    let pattern: Vec<f64> = state
        .raw
        .iter()
        .zip(&base.raw)
        .map(|(t, b)| 2.0 * t - b)
        .collect();
    if let Some(mut jumped) = SearchState::try_from_raw(pattern, state) {
        exploratory(&mut jumped, step);
        if improves(jumped.phi, state.phi) {
            *state = jumped;
        }
    }
    true
}

struct Search {
    state: SearchState,
    step: f64,
    steps_per_epoch: usize,
    shrink: f64,
    min_step: f64,
}

impl Search {
    fn run_epoch(&mut self) {
        for _ in 0..self.steps_per_epoch {
            if self.step < self.min_step {
                break;
            }
            if !hj_iteration(&mut self.state, self.step) {
                self.step *= self.shrink;
            }
        }
    }
}

/// Runs one epoch of pattern search at a fixed pole `a` and returns the
/// improved packing; its potential never exceeds the input's.
///
/// The step width starts at `config.initial_step` each call. [`optimize`]
/// instead carries the step across epochs while it slides the pole.
pub fn pattern_search_epoch(packing: &Packing, a: f64, config: &OptimConfig) -> Result<Packing> {
    validate_config(config)?;
    if packing.len() < 2 {
        return Err(Error::InvalidArgument(
            "pattern search needs at least two planes".into(),
        ));
    }
    let mut search = Search {
        state: SearchState::from_planes(packing.planes().to_vec(), config.metric, a),
        step: config.initial_step,
        steps_per_epoch: config.steps_per_epoch,
        shrink: config.step_shrink,
        min_step: config.min_step,
    };
    search.run_epoch();
    Packing::new(search.state.planes, config.metric)
}

// ─── restarts ───

struct RestartOutcome {
    planes: Vec<Plane>,
    min_dist: f64,
    trace: Vec<(usize, f64, f64)>,
}

fn run_restart(
    m: usize,
    n: usize,
    count: usize,
    config: &OptimConfig,
    restart: usize,
) -> RestartOutcome {
    let planes = match (&config.initial_packing, restart) {
        (Some(init), 0) => init.planes().to_vec(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(restart as u64);
            (0..count).map(|_| random_plane(m, n, &mut rng)).collect()
        }
    };
    let mut search = Search {
        state: SearchState::from_planes(planes, config.metric, 0.0),
        step: config.initial_step,
        steps_per_epoch: config.steps_per_epoch,
        shrink: config.step_shrink,
        min_step: config.min_step,
    };
    let mut trace = Vec::new();
    let mut best_min = f64::NEG_INFINITY;
    let mut best_planes = search.state.planes.clone();
    let mut prev_min = f64::NEG_INFINITY;
    let mut stalls = 0;
    let mut a = 0.0;
    for epoch in 0..MAX_EPOCHS {
        search.state.set_pole(a);
        search.run_epoch();
        let min = search.state.min_dist();
        trace.push((epoch, a, min));
        if min > best_min {
            best_min = min;
            best_planes = search.state.planes.clone();
        }
        if min - prev_min < EPOCH_TOL {
            stalls += 1;
            if stalls >= MAX_STALLS {
                break;
            }
        } else {
            stalls = 0;
        }
        prev_min = min;
        a += (min - a) / 2.0;
        // Converging at one pole exhausts the step; reopen it to the pole gap
        // so the next epoch can work at the new scale.
        search.step = search.step.max((min - a).min(config.initial_step));
        if search.step < search.min_step {
            break;
        }
    }
    RestartOutcome {
        min_dist: best_min,
        planes: best_planes,
        trace,
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var("GRASSPACK_THREADS")
        .ok()?
        .parse::<usize>()
        .ok()
        .filter(|&threads| threads > 0)
}

fn run_restarts(m: usize, n: usize, count: usize, config: &OptimConfig) -> Vec<RestartOutcome> {
    let work = || {
        (0..config.restarts)
            .into_par_iter()
            .map(|restart| run_restart(m, n, count, config, restart))
            .collect::<Vec<_>>()
    };
    match thread_cap() {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    }
}

/// Maximizes the minimal pairwise distance of `count` planes in G(m, n) by
/// multi-restart pattern search with a sliding pole.
///
/// Each restart starts from its own RNG stream (or from
/// `config.initial_packing` for restart 0), runs epochs of
/// `config.steps_per_epoch` iterations, and advances the pole halfway to the
/// current minimal distance between epochs until the minimum stalls or the
/// step width is exhausted. Restarts run in parallel, capped by the
/// GRASSPACK_THREADS environment variable; results are identical for a given
/// seed and config regardless of thread count.
pub fn optimize(m: usize, n: usize, count: usize, config: &OptimConfig) -> Result<OptimResult> {
    if n == 0 || n >= m {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n < m, got n = {n}, m = {m}"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidArgument(
            "need at least two planes to optimize".into(),
        ));
    }
    validate_config(config)?;
    if let Some(init) = &config.initial_packing {
        if init.len() != count {
            return Err(Error::CountMismatch {
                expected: count,
                found: init.len(),
            });
        }
        if init.m() != m || init.n() != n {
            return Err(Error::DimensionMismatch {
                expected_m: m,
                expected_n: n,
                got_m: init.m(),
                got_n: init.n(),
            });
        }
    }
    let mut outcomes = run_restarts(m, n, count, config);
    let mut best = 0;
    for r in 1..outcomes.len() {
        if outcomes[r].min_dist > outcomes[best].min_dist {
            best = r;
        }
    }
    let outcome = outcomes.swap_remove(best);
    let packing = Packing::new(outcome.planes, config.metric)?;
    let (min_dist, _) = min_distance(&packing, config.metric)?;
    Ok(OptimResult {
        packing,
        min_dist,
        restart_index: best,
        potential_trace: outcome.trace,
    })
}
