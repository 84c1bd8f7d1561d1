//! Empirical applicability test: rejection sampling from π with an adaptive
//! constant, support-size estimation, and the weight, smoothness and
//! expansion condition tests on each seed sample.

use std::collections::HashMap;

use rand::seq::index::sample as sample_indices;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{ball_size, binomial, combinations, flip_masks, qubit_mask, subset_mask};
use crate::error::{invalid, Error, Result};
use crate::oracle::AmplitudeOracle;
use crate::rng::{stream_rng, Rng};

/// Node expansions allowed per expansion-test path search.
pub const SEARCH_CAP: u64 = 20_000;
/// Neighbourhoods up to this size are enumerated instead of sampled.
pub const EXHAUSTIVE_LIMIT: u64 = 4096;
pub const MAX_PATH_LEN: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GlepParams {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Default 3n.
    pub c_u_prime: Option<f64>,
    pub c_l: f64,
    pub c_u: f64,
    pub alpha: f64,
    /// Initial rejection constant; default c_u′.
    pub c: Option<f64>,
    /// Largest constant the adaptive search may reach; default n³.
    pub c_max: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[serde(rename = "R")]
    pub r: Option<usize>,
    /// Relaxed expansion: one good path per pair instead of αN disjoint ones.
    pub relaxed: bool,
    pub known_support: Option<f64>,
    /// Smallest acceptable support estimate; default n.
    pub min_support: Option<f64>,
    /// Use the Hoeffding lower confidence bound on Ĉ₂ (larger support).
    pub conservative_support: bool,
}

impl Default for GlepParams {
    fn default() -> Self {
        Self {
            k: 2,
            epsilon: 0.1,
            delta: 0.05,
            c_u_prime: None,
            c_l: 1.0 / 11.0,
            c_u: 5.0,
            alpha: 0.1,
            c: None,
            c_max: None,
            s: None,
            m: None,
            r: None,
            relaxed: true,
            known_support: None,
            min_support: None,
            conservative_support: false,
        }
    }
}

/// Parameters with every default filled in for a given n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedParams {
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub c_u_prime: f64,
    pub c_l: f64,
    pub c_u: f64,
    pub alpha: f64,
    pub c0: f64,
    pub c_max: f64,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub relaxed: bool,
    pub min_support: f64,
}

pub fn seed_sample_size(epsilon: f64, delta: f64) -> usize {
    (2.0 / (epsilon * epsilon) * (6.0 / delta).ln()).ceil() as usize
}

pub fn test_sample_size(epsilon: f64, delta: f64, s: usize) -> usize {
    (2.0 / (epsilon * epsilon) * (6.0 * s as f64 / delta).ln()).ceil() as usize
}

impl GlepParams {
    pub fn resolve(&self, n: usize) -> Result<ResolvedParams> {
        if self.k == 0 || self.k > n {
            return Err(invalid(format!("need 1 ≤ k ≤ n, got k = {}", self.k)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 && self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid("ε and δ must lie in (0, 1)"));
        }
        if !(self.c_l > 0.0 && self.c_l < self.c_u && (0.0..=1.0).contains(&self.alpha)) {
            return Err(invalid("need 0 < c_l < c_u and α ∈ [0, 1]"));
        }
        let s_min = seed_sample_size(self.epsilon, self.delta);
        let s = self.s.unwrap_or(s_min).max(2);
        let mr = test_sample_size(self.epsilon, self.delta, s);
        let c_u_prime = self.c_u_prime.unwrap_or(3.0 * n as f64);
        let c0 = self.c.unwrap_or(c_u_prime).max(1.0);
        Ok(ResolvedParams {
            n,
            k: self.k,
            epsilon: self.epsilon,
            delta: self.delta,
            c_u_prime,
            c_l: self.c_l,
            c_u: self.c_u,
            alpha: self.alpha,
            c0,
            c_max: self.c_max.unwrap_or((n as f64).powi(3)).max(c0),
            s,
            m: self.m.unwrap_or(mr),
            r: self.r.unwrap_or(mr),
            relaxed: self.relaxed,
            min_support: self.min_support.unwrap_or(n as f64),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionOutcome {
    pub samples: Vec<u64>,
    pub trials: u64,
}

/// Draws `s` exact samples of π by proposing uniformly and accepting with
/// probability 2^n π(x)/C. Fails with [`Error::CInvalid`] on the first
/// ratio above C, or with a budget error after 64·C·S trials.
pub fn rejection_sample(oracle: &AmplitudeOracle, c: f64, s: usize, seed: u64) -> Result<RejectionOutcome> {
    if !(c >= 1.0) {
        return Err(invalid(format!("rejection constant {c} < 1")));
    }
    let (out, err) = propose(oracle, c, s, &mut crate::rng::rng_from(seed));
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Runs the sampler until `s` acceptances or the first error; the outcome
/// always reports the proposals consumed.
fn propose(oracle: &AmplitudeOracle, c: f64, s: usize, rng: &mut Rng) -> (RejectionOutcome, Option<Error>) {
    let n = oracle.n();
    let scale = (2.0f64).powi(n as i32);
    let cap = (64.0 * c * s as f64).ceil() as u64;
    let mut samples = Vec::with_capacity(s);
    let mut trials = 0u64;
    let mut err = None;
    while samples.len() < s {
        if trials >= cap {
            err = Some(Error::BudgetExceeded(format!(
                "{trials} proposals for {} of {s} samples at C = {c}",
                samples.len()
            )));
            break;
        }
        trials += 1;
        let x = rng.random_range(0..1u64 << n);
        let ratio = scale * oracle.prob(x);
        if ratio > c {
            err = Some(Error::CInvalid { ratio, c });
            break;
        }
        if rng.random::<f64>() * c < ratio {
            samples.push(x);
        }
    }
    (RejectionOutcome { samples, trials }, err)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveOutcome {
    pub c_final: f64,
    pub samples: Vec<u64>,
    pub restarts: usize,
    /// Proposals over all attempts.
    pub trials: u64,
}

/// Doubling search: on a violation set C ← max(2C, observed ratio), discard
/// everything and restart. Gives up once C would exceed `c_max`.
pub fn adaptive_c(oracle: &AmplitudeOracle, c0: f64, s: usize, c_max: f64, seed: u64) -> Result<AdaptiveOutcome> {
    if !(c0 >= 1.0) {
        return Err(invalid(format!("initial constant {c0} < 1")));
    }
    let mut c = c0;
    let mut restarts = 0;
    let mut trials = 0;
    loop {
        let mut rng = stream_rng(seed, restarts as u64);
        let (out, err) = propose(oracle, c, s, &mut rng);
        trials += out.trials;
        match err {
            None => {
                return Ok(AdaptiveOutcome {
                    c_final: c,
                    samples: out.samples,
                    restarts,
                    trials,
                })
            }
            Some(Error::CInvalid { ratio, .. }) => {
                let next = (2.0 * c).max(ratio);
                if next > c_max {
                    return Err(Error::BudgetExceeded(format!(
                        "rejection constant would reach {next} > C_max = {c_max}"
                    )));
                }
                c = next;
                restarts += 1;
            }
            Some(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportMethod {
    Known,
    Collision,
    NoCollisionLowerBound,
    CDerived,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportEstimate {
    pub value: f64,
    pub method: SupportMethod,
    /// 1/max(Ĉ₂ − t, 0); infinite when the bound reaches zero.
    pub conservative: Option<f64>,
    pub collision_rate: Option<f64>,
}

/// Collision estimate 1/Ĉ₂ when any repeat occurs, otherwise the larger of
/// C(S,2)/ln(1/δ) and 2^n/C.
pub fn estimate_support(samples: &[u64], delta: f64, c_final: f64, n: usize) -> Result<SupportEstimate> {
    let s = samples.len();
    if s < 2 {
        return Err(invalid("support estimate needs at least two samples"));
    }
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for &x in samples {
        *counts.entry(x).or_default() += 1;
    }
    let pairs: u64 = counts.values().map(|&c| c * (c - 1)).sum();
    let c2 = pairs as f64 / (s as f64 * (s as f64 - 1.0));
    if pairs > 0 {
        let t = ((1.0 / 0.5) * (2.0 / delta).ln() / s as f64).sqrt();
        let lower = (c2 - t).max(0.0);
        return Ok(SupportEstimate {
            value: 1.0 / c2,
            method: SupportMethod::Collision,
            conservative: Some(if lower > 0.0 { 1.0 / lower } else { f64::INFINITY }),
            collision_rate: Some(c2),
        });
    }
    let no_coll = binomial(s, 2) as f64 / (1.0 / delta).ln();
    let from_c = (2.0f64).powi(n as i32) / c_final;
    let (value, method) = if no_coll >= from_c {
        (no_coll, SupportMethod::NoCollisionLowerBound)
    } else {
        (from_c, SupportMethod::CDerived)
    };
    Ok(SupportEstimate {
        value,
        method,
        conservative: None,
        collision_rate: Some(0.0),
    })
}

pub fn test_weight(pi_x: f64, support: f64, c_u_prime: f64) -> bool {
    pi_x <= c_u_prime / support
}

/// Memoised probability access for one seed sample; misses are counted per phase.
struct Prober<'a> {
    oracle: &'a AmplitudeOracle,
    memo: HashMap<u64, f64>,
    misses: u64,
}

impl<'a> Prober<'a> {
    fn new(oracle: &'a AmplitudeOracle) -> Self {
        Self {
            oracle,
            memo: HashMap::new(),
            misses: 0,
        }
    }

    fn prob(&mut self, x: u64) -> f64 {
        if let Some(&p) = self.memo.get(&x) {
            return p;
        }
        self.misses += 1;
        let p = self.oracle.prob(x);
        self.memo.insert(x, p);
        p
    }

    fn take_misses(&mut self) -> u64 {
        std::mem::take(&mut self.misses)
    }
}

struct Context<'a> {
    p: &'a ResolvedParams,
    support: f64,
    masks: Vec<u64>,
}

impl Context<'_> {
    fn good(&self, pr: &mut Prober, x: u64) -> bool {
        let v = pr.prob(x);
        v > 0.0 && v >= self.p.c_l / self.support && v <= self.p.c_u / self.support
    }
}

fn random_flip(n: usize, r: usize, rng: &mut Rng) -> u64 {
    sample_indices(rng, n, r)
        .into_iter()
        .fold(0, |acc, q| acc | qubit_mask(q, n))
}

fn smooth(ctx: &Context, pr: &mut Prober, x: u64, rng: &mut Rng) -> bool {
    let n = ctx.p.n;
    let big_n = ctx.masks.len() as u64;
    let (good, total) = if big_n <= EXHAUSTIVE_LIMIT {
        let g = ctx.masks.iter().filter(|&&m| ctx.good(pr, x ^ m)).count();
        (g, ctx.masks.len())
    } else {
        let g = (0..ctx.p.m)
            .filter(|_| {
                let m = ctx.masks[rng.random_range(0..ctx.masks.len())];
                ctx.good(pr, x ^ m)
            })
            .count();
        (g, ctx.p.m)
    };
    let _ = n;
    good as f64 >= ctx.p.alpha * total as f64
}

/// Draws y with 1 ≤ d(x, y) ≤ 3k uniformly from the ball.
fn ball_draw(n: usize, radius: usize, x: u64, weights: &[f64], rng: &mut Rng) -> u64 {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut r = radius;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            r = i + 1;
            break;
        }
        u -= w;
    }
    x ^ random_flip(n, r, rng)
}

fn dist(a: u64, b: u64) -> usize {
    (a ^ b).count_ones() as usize
}

/// Bounded-depth search for a path x → y of length ≤ 5 with good internal
/// vertices, iterative deepening with the admissible bound ⌈d/k⌉.
fn relaxed_path(ctx: &Context, pr: &mut Prober, x: u64, y: u64) -> bool {
    let k = ctx.p.k;
    let h = |v: u64| dist(v, y).div_ceil(k);
    let mut budget = SEARCH_CAP;
    fn dfs(
        ctx: &Context,
        pr: &mut Prober,
        v: u64,
        y: u64,
        depth: usize,
        bound: usize,
        path: &mut Vec<u64>,
        budget: &mut u64,
        h: &dyn Fn(u64) -> usize,
    ) -> bool {
        if v == y {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let mut moves: Vec<(usize, u64)> = ctx
            .masks
            .iter()
            .map(|&m| v ^ m)
            .filter(|&w| depth + 1 + h(w) <= bound && !path.contains(&w))
            .map(|w| (h(w), w))
            .collect();
        moves.sort_unstable();
        for (_, w) in moves {
            if w != y && !ctx.good(pr, w) {
                continue;
            }
            path.push(w);
            let found = dfs(ctx, pr, w, y, depth + 1, bound, path, budget, h);
            path.pop();
            if found {
                return true;
            }
        }
        false
    }
    let start = h(x).max(1);
    for bound in start..=MAX_PATH_LEN {
        let mut path = vec![x];
        if dfs(ctx, pr, x, y, 0, bound, &mut path, &mut budget, &h) {
            return true;
        }
        if budget == 0 {
            break;
        }
    }
    false
}

/// Cyclic paths: for each start position i, flip the differing bits in
/// cyclic order from i (bracketed by flipping i itself when it agrees),
/// grouped into steps of at most k bits. Counts paths of length ≤ 5 whose
/// internal vertices are good.
fn strict_paths(ctx: &Context, pr: &mut Prober, x: u64, y: u64) -> usize {
    let n = ctx.p.n;
    let k = ctx.p.k;
    let diff: Vec<usize> = (0..n).filter(|&q| (x ^ y) & qubit_mask(q, n) != 0).collect();
    let mut count = 0;
    for i in 0..n {
        let start = diff.iter().position(|&q| q >= i).unwrap_or(0);
        let order: Vec<usize> = diff[start..].iter().chain(&diff[..start]).copied().collect();
        let outside = !diff.contains(&i);
        let mut seq: Vec<usize> = Vec::new();
        if outside {
            seq.push(i);
        }
        seq.extend(&order);
        if outside {
            seq.push(i);
        }
        let mut cur = x;
        let mut ok = true;
        let steps: Vec<&[usize]> = if outside && seq.len() > 2 {
            // keep the bracketing flips in their own first and last steps
            let inner = &seq[1..seq.len() - 1];
            std::iter::once(&seq[..1])
                .chain(inner.chunks(k))
                .chain(std::iter::once(&seq[seq.len() - 1..]))
                .collect()
        } else {
            seq.chunks(k).collect()
        };
        if steps.len() > MAX_PATH_LEN {
            continue;
        }
        for (si, step) in steps.iter().enumerate() {
            cur ^= step.iter().fold(0, |acc, &q| acc | qubit_mask(q, n));
            if si + 1 < steps.len() && !ctx.good(pr, cur) {
                ok = false;
                break;
            }
        }
        if ok && cur == y {
            count += 1;
        }
    }
    count
}

/// Good vertices of the ball 1 ≤ d(x, y) ≤ radius, or `None` when the ball
/// is too large to enumerate.
fn good_ball(ctx: &Context, pr: &mut Prober, x: u64, radius: usize) -> Option<Vec<u64>> {
    let n = ctx.p.n;
    if ball_size(n, radius) - 1 > EXHAUSTIVE_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    for r in 1..=radius {
        for c in combinations(n, r) {
            let y = x ^ subset_mask(&c, n);
            if ctx.good(pr, y) {
                out.push(y);
            }
        }
    }
    Some(out)
}

fn expand(ctx: &Context, pr: &mut Prober, x: u64, rng: &mut Rng) -> bool {
    let n = ctx.p.n;
    let radius = (3 * ctx.p.k).min(n);
    let weights: Vec<f64> = (1..=radius).map(|r| binomial(n, r) as f64).collect();
    // Rejection resampling of a uniform ball draw is a uniform draw from the
    // good part of the ball; small balls are enumerated once instead.
    let pool = good_ball(ctx, pr, x, radius);
    if pool.as_ref().is_some_and(|g| g.is_empty()) {
        return false;
    }
    let mut draws_left = 50 * ctx.p.r as u64;
    let mut successes = 0usize;
    for _ in 0..ctx.p.r {
        let y = match &pool {
            Some(g) => g[rng.random_range(0..g.len())],
            None => loop {
                if draws_left == 0 {
                    return false;
                }
                draws_left -= 1;
                let y = ball_draw(n, radius, x, &weights, rng);
                if ctx.good(pr, y) {
                    break y;
                }
            },
        };
        let ok = if ctx.p.relaxed {
            relaxed_path(ctx, pr, x, y)
        } else {
            strict_paths(ctx, pr, x, y) as f64 >= ctx.p.alpha * n as f64
        };
        successes += ok as usize;
    }
    successes as f64 >= (1.0 - ctx.p.epsilon) * ctx.p.r as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseQueries {
    pub sampler: u64,
    pub weight: u64,
    pub smooth: u64,
    pub expand: u64,
}

impl PhaseQueries {
    pub fn total(&self) -> u64 {
        self.sampler + self.weight + self.smooth + self.expand
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlepReport {
    pub verdict: Verdict,
    pub p_weight: f64,
    pub p_smooth: f64,
    pub p_expand: f64,
    pub support_estimate: Option<SupportEstimate>,
    pub queries_used: u64,
    pub query_budget: u64,
    pub phase_queries: PhaseQueries,
    #[serde(rename = "C_final")]
    pub c_final: Option<f64>,
    pub restarts: usize,
    pub params: ResolvedParams,
    pub failure: Option<String>,
}

/// Upper bound on queries. Constants tried by the sampler at least double
/// each restart, so their proposal caps sum to at most 128·C_final·S plus
/// one per attempt. Each sample then costs at most its weight query, its
/// neighbourhood, its enumerated expansion ball (or 50R ball draws when the
/// ball is too large) and R capped searches, and never more than
/// 2^n thanks to memoisation.
pub fn query_budget(p: &ResolvedParams, c_final: f64, attempts: usize) -> u64 {
    let sampler = (128.0 * c_final * p.s as f64).ceil() as u64 + attempts as u64;
    let n_ball = ball_size(p.n, p.k);
    let smooth = if n_ball <= EXHAUSTIVE_LIMIT { n_ball } else { p.m as u64 };
    let expansion = ball_size(p.n, (3 * p.k).min(p.n)) - 1;
    let expansion = if expansion <= EXHAUSTIVE_LIMIT { expansion } else { 50 * p.r as u64 };
    let per_sample = (1 + smooth)
        .saturating_add(expansion)
        .saturating_add((p.r as u64).saturating_mul(SEARCH_CAP).saturating_mul(n_ball));
    let cap = if p.n < 63 { 1u64 << p.n } else { u64::MAX };
    sampler.saturating_add((p.s as u64).saturating_mul(per_sample.min(cap)))
}

pub fn run_check(oracle: &AmplitudeOracle, params: &GlepParams, seed: u64) -> Result<GlepReport> {
    let n = oracle.n();
    let p = params.resolve(n)?;
    let q0 = oracle.queries();
    let fail = |failure: String, phase: PhaseQueries, c_final: Option<f64>, restarts, p: ResolvedParams| GlepReport {
        verdict: Verdict::Fail,
        p_weight: 0.0,
        p_smooth: 0.0,
        p_expand: 0.0,
        support_estimate: None,
        queries_used: oracle.queries() - q0,
        query_budget: query_budget(&p, c_final.unwrap_or(p.c_max), restarts + 1),
        phase_queries: phase,
        c_final,
        restarts,
        params: p,
        failure: Some(failure),
    };
    let sampled = adaptive_c(oracle, p.c0, p.s, p.c_max, crate::rng::derive_seed(seed, 0));
    let sampler_queries = oracle.queries() - q0;
    let ad = match sampled {
        Ok(a) => a,
        Err(Error::BudgetExceeded(msg)) => {
            let phase = PhaseQueries {
                sampler: sampler_queries,
                ..Default::default()
            };
            let attempts = (p.c_max / p.c0).log2().ceil().max(0.0) as usize + 1;
            return Ok(fail(format!("sampling: {msg}"), phase, None, attempts, p));
        }
        Err(e) => return Err(e),
    };
    let est = estimate_support(&ad.samples, p.delta, ad.c_final, n)?;
    let support = match params.known_support {
        Some(v) => v,
        None if params.conservative_support => est.conservative.unwrap_or(est.value),
        None => est.value,
    };
    let est = match params.known_support {
        Some(v) => SupportEstimate {
            value: v,
            method: SupportMethod::Known,
            ..est
        },
        None => SupportEstimate { value: support, ..est },
    };
    let ctx = Context {
        p: &p,
        support,
        masks: flip_masks(n, p.k),
    };
    let per_sample: Vec<(bool, bool, bool, [u64; 3])> = ad
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut rng = stream_rng(crate::rng::derive_seed(seed, 1), i as u64);
            let mut pr = Prober::new(oracle);
            let w = test_weight(pr.prob(x), support, p.c_u_prime);
            let qw = pr.take_misses();
            let s = smooth(&ctx, &mut pr, x, &mut rng);
            let qs = pr.take_misses();
            let e = expand(&ctx, &mut pr, x, &mut rng);
            let qe = pr.take_misses();
            (w, s, e, [qw, qs, qe])
        })
        .collect();
    let frac = |f: fn(&(bool, bool, bool, [u64; 3])) -> bool| {
        per_sample.iter().filter(|t| f(t)).count() as f64 / per_sample.len() as f64
    };
    let phase = PhaseQueries {
        sampler: sampler_queries,
        weight: per_sample.iter().map(|t| t.3[0]).sum(),
        smooth: per_sample.iter().map(|t| t.3[1]).sum(),
        expand: per_sample.iter().map(|t| t.3[2]).sum(),
    };
    let (pw, ps, pe) = (frac(|t| t.0), frac(|t| t.1), frac(|t| t.2));
    let thresh = 1.0 - p.epsilon / 2.0;
    // reject on support only when even the upper confidence value is too small
    let support_upper = match params.known_support {
        Some(v) => v,
        None => est.conservative.unwrap_or(est.value).max(support),
    };
    let support_ok = support_upper >= p.min_support;
    let verdict = if pw >= thresh && ps >= thresh && pe >= thresh && support_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let failure = (!support_ok).then(|| format!("support estimate {support_upper:.3} below minimum {}", p.min_support));
    Ok(GlepReport {
        verdict,
        p_weight: pw,
        p_smooth: ps,
        p_expand: pe,
        support_estimate: Some(est),
        queries_used: oracle.queries() - q0,
        query_budget: query_budget(&p, ad.c_final, ad.restarts + 1),
        phase_queries: phase,
        c_final: Some(ad.c_final),
        restarts: ad.restarts,
        params: p,
        failure,
    })
}
