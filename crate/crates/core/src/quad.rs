//! Change-of-variable quadratures on finite intervals.
//!
//! Three strictly increasing odd maps ψ: ℝ → (−1, 1) are supported. Each
//! turns the trapezoid rule on the real line into a rule on (−1, 1) whose
//! nodes cluster at the endpoints:
//!
//! * tanh-sinh: x = tanh((π/2)·sinh t) — double-exponential decay, the
//!   workhorse for endpoint-singular integrands,
//! * tanh:      x = tanh t,
//! * erf:       x = erf t.
//!
//! Node tables are truncated where the weight drops to 10^(−2p) for the
//! requested digits p, and tables at successive levels (h = 2^−j) share
//! abscissae bitwise: t = k·h is exact in binary, so a node reached at a
//! coarse level reappears untouched at every finer one. The adaptive driver
//! exploits that to reuse integrand values, re-evaluating only nodes a new
//! level introduces.
//!
//! Integrands receive `(x, dist_lo, dist_hi)` where the distances to the
//! interval endpoints are formed from the stored `1 − |ψ(t)|` rather than by
//! subtraction, so factors like `sqrt(hi - x)` stay accurate at nodes within
//! 1e−30 of an endpoint.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, LazyLock, Mutex};

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Ceiling on the total node count of a single rule.
pub const MAX_RULE_NODES: usize = 1 << 22;

/// Highest level for which node identities fit the shared key space.
const MAX_SUPPORTED_LEVEL: u32 = 28;

/// The change of variable applied before the trapezoid rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    TanhSinh,
    Tanh,
    Erf,
}

impl TransformKind {
    /// ψ′(t), the weight density, evaluated overflow-free.
    pub fn weight_density(self, t: f64) -> f64 {
        match self {
            TransformKind::TanhSinh => {
                let u = FRAC_PI_2 * t.sinh();
                // sech²(u) = (2e^{−u}/(1 + e^{−2u}))² for u ≥ 0
                let em = (-u.abs()).exp();
                let sech = 2.0 * em / (1.0 + em * em);
                FRAC_PI_2 * t.cosh() * sech * sech
            }
            TransformKind::Tanh => {
                let em = (-t.abs()).exp();
                let sech = 2.0 * em / (1.0 + em * em);
                sech * sech
            }
            TransformKind::Erf => (2.0 / PI.sqrt()) * (-t * t).exp(),
        }
    }

    /// (ψ(t), 1 − ψ(t)) for t ≥ 0, the complement formed without cancellation.
    fn map_nonnegative(self, t: f64) -> (f64, f64) {
        debug_assert!(t >= 0.0);
        match self {
            TransformKind::TanhSinh => {
                let u = FRAC_PI_2 * t.sinh();
                let em = (-2.0 * u).exp();
                ((1.0 - em) / (1.0 + em), 2.0 * em / (1.0 + em))
            }
            TransformKind::Tanh => {
                let em = (-2.0 * t).exp();
                ((1.0 - em) / (1.0 + em), 2.0 * em / (1.0 + em))
            }
            TransformKind::Erf => (libm::erf(t), libm::erfc(t)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TransformKind::TanhSinh => "tanh-sinh",
            TransformKind::Tanh => "tanh",
            TransformKind::Erf => "erf",
        }
    }
}

impl std::str::FromStr for TransformKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "tanh-sinh" | "tanhsinh" => Ok(TransformKind::TanhSinh),
            "tanh" => Ok(TransformKind::Tanh),
            "erf" => Ok(TransformKind::Erf),
            other => Err(format!(
                "unknown scheme `{other}` (expected tanh-sinh, tanh or erf)"
            )),
        }
    }
}

/// One abscissa/weight pair on (−1, 1).
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub weight: f64,
    /// 1 − |x|, computed from the transform's tail form.
    pub endpoint_distance: f64,
}

/// Symmetric truncated trapezoid rule for one transform at one level.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub transform: TransformKind,
    pub level: u32,
    pub digits: u32,
    /// Nodes for k = −N..=N in ascending k.
    nodes: Vec<Node>,
    n_half: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// N, the largest |k| retained.
    pub fn half_count(&self) -> usize {
        self.n_half
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Step size h = 2^−level.
    pub fn step(&self) -> f64 {
        0.5f64.powi(self.level as i32)
    }

    /// Signed index of the node at table position `i`.
    fn index_of(&self, i: usize) -> i64 {
        i as i64 - self.n_half as i64
    }
}

fn rule_cache() -> &'static Mutex<HashMap<(TransformKind, u32, u32), Arc<QuadratureRule>>> {
    static CACHE: LazyLock<Mutex<HashMap<(TransformKind, u32, u32), Arc<QuadratureRule>>>> =
        LazyLock::new(|| Mutex::new(HashMap::new()));
    &CACHE
}

/// Builds (or fetches) the node table for `transform` at `level`.
///
/// Nodes run k = −N..N with t = k·2^−level; N is the smallest k whose weight
/// falls to 10^(−2·digits), so the last retained weight sits at or below the
/// cutoff and every dropped tail weight is smaller.
pub fn build_rule(transform: TransformKind, level: u32, digits: u32) -> Result<Arc<QuadratureRule>> {
    assert!(digits >= 1, "digits must be at least 1");
    if level > MAX_SUPPORTED_LEVEL {
        return Err(Error::RuleTooLarge {
            transform,
            level,
            nodes: usize::MAX,
            ceiling: MAX_RULE_NODES,
        });
    }
    if let Some(rule) = rule_cache().lock().unwrap().get(&(transform, level, digits)) {
        return Ok(rule.clone());
    }

    let h = 0.5f64.powi(level as i32);
    let cutoff = 10f64.powi(-2 * digits as i32);

    let mut n_half = 0usize;
    loop {
        n_half += 1;
        if 2 * n_half + 1 > MAX_RULE_NODES {
            return Err(Error::RuleTooLarge {
                transform,
                level,
                nodes: 2 * n_half + 1,
                ceiling: MAX_RULE_NODES,
            });
        }
        let t = n_half as f64 * h;
        if h * transform.weight_density(t) <= cutoff {
            break;
        }
    }

    let mut nodes = Vec::with_capacity(2 * n_half + 1);
    // Positive half first, mirrored afterwards so x_{−k} = −x_k exactly.
    let mut positive = Vec::with_capacity(n_half + 1);
    for k in 0..=n_half {
        let t = k as f64 * h;
        let (x, dist) = transform.map_nonnegative(t);
        positive.push(Node {
            x,
            weight: h * transform.weight_density(t),
            endpoint_distance: dist,
        });
    }
    for k in (1..=n_half).rev() {
        let p = positive[k];
        nodes.push(Node {
            x: -p.x,
            weight: p.weight,
            endpoint_distance: p.endpoint_distance,
        });
    }
    nodes.extend(positive);

    let rule = Arc::new(QuadratureRule {
        transform,
        level,
        digits,
        nodes,
        n_half,
    });
    rule_cache()
        .lock()
        .unwrap()
        .insert((transform, level, digits), rule.clone());
    Ok(rule)
}

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct IntegrationResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Number of distinct abscissae the integrand was called at.
    pub evaluations: usize,
    pub levels_used: u32,
    /// False when the adaptive driver ran out of levels before reaching the
    /// requested tolerance; `value`/`error_estimate` then carry the best pass.
    pub converged: bool,
}

#[inline]
fn map_node(node: &Node, k: i64, lo: f64, hi: f64) -> (f64, f64, f64) {
    let half = 0.5 * (hi - lo);
    let range = hi - lo;
    if k < 0 {
        let dist_lo = node.endpoint_distance * half;
        (lo + dist_lo, dist_lo, range - dist_lo)
    } else {
        let dist_hi = node.endpoint_distance * half;
        (hi - dist_hi, range - dist_hi, dist_hi)
    }
}

/// Accumulates Σ f(x_k)·w_k over the full table in ascending k, then scales
/// by the interval half-width. Both the fixed and adaptive paths run through
/// here so their sums agree bitwise.
fn sum_rule<F>(rule: &QuadratureRule, lo: f64, hi: f64, mut value_at: F) -> Result<f64>
where
    F: FnMut(i64, f64, f64, f64) -> Result<f64>,
{
    let mut acc = KahanSum::new();
    for (i, node) in rule.nodes().iter().enumerate() {
        let k = rule.index_of(i);
        let (x, dist_lo, dist_hi) = map_node(node, k, lo, hi);
        let v = value_at(k, x, dist_lo, dist_hi)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                abscissa: x,
                value: v,
            });
        }
        acc.add(v * node.weight);
    }
    Ok(acc.value() * 0.5 * (hi - lo))
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::BadInterval { lo, hi });
    }
    Ok(())
}

/// Single-level quadrature of `f` over (lo, hi) with a prebuilt rule.
///
/// Abscissae lie strictly inside the interval; `f` receives the point plus
/// its distances to both endpoints.
pub fn integrate_fixed<F>(
    mut f: F,
    rule: &QuadratureRule,
    lo: f64,
    hi: f64,
) -> Result<IntegrationResult>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    check_interval(lo, hi)?;
    let mut evaluations = 0usize;
    let value = sum_rule(rule, lo, hi, |_, x, dlo, dhi| {
        evaluations += 1;
        Ok(f(x, dlo, dhi))
    })?;
    Ok(IntegrationResult {
        value,
        error_estimate: 0.0,
        evaluations,
        levels_used: 1,
        converged: true,
    })
}

/// Level-to-level error estimate.
///
/// Geometric extrapolation of the successive differences, clamped to the
/// last difference: with Δ₁ = |curr − prev| and Δ₀ = |prev − prev2|, the
/// estimate is min(Δ₁, Δ₁²/Δ₀). Bitwise-equal passes give 0; degenerate
/// inputs fall back to Δ₁.
pub fn estimate_error(value_prev: f64, value_curr: f64, value_prev2: f64) -> f64 {
    let d1 = (value_curr - value_prev).abs();
    if d1 == 0.0 {
        return 0.0;
    }
    let d0 = (value_prev - value_prev2).abs();
    if d0 == 0.0 {
        return d1;
    }
    (d1 * (d1 / d0)).min(d1)
}

/// Adaptive quadrature: runs levels 0, 1, 2, … reusing every node already
/// evaluated (new integrand calls happen only at abscissae a level
/// introduces), and stops once the error estimate reaches `tolerance`.
///
/// The per-level sum re-walks the full table in the same order as
/// [`integrate_fixed`], so the returned value is bit-identical to a fixed
/// rule at the final level.
pub fn integrate_adaptive<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    tolerance: f64,
    max_level: u32,
    transform: TransformKind,
    digits: u32,
) -> Result<IntegrationResult>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    check_interval(lo, hi)?;
    assert!(tolerance > 0.0, "tolerance must be positive");
    let max_level = max_level.min(MAX_SUPPORTED_LEVEL);

    let mut cache: HashMap<i64, f64> = HashMap::new();
    let mut evaluations = 0usize;
    let mut history: Vec<f64> = Vec::new();
    let mut estimate = f64::INFINITY;

    for level in 0..=max_level {
        let rule = build_rule(transform, level, digits)?;
        let shift = 1i64 << (MAX_SUPPORTED_LEVEL - level);
        let value = sum_rule(&rule, lo, hi, |k, x, dlo, dhi| {
            let key = k * shift;
            if let Some(&v) = cache.get(&key) {
                return Ok(v);
            }
            let v = f(x, dlo, dhi);
            evaluations += 1;
            cache.insert(key, v);
            Ok(v)
        })?;
        history.push(value);

        if history.len() >= 2 {
            let curr = history[history.len() - 1];
            let prev = history[history.len() - 2];
            let prev2 = if history.len() >= 3 {
                history[history.len() - 3]
            } else {
                prev
            };
            estimate = estimate_error(prev, curr, prev2);
            if estimate <= tolerance {
                return Ok(IntegrationResult {
                    value,
                    error_estimate: estimate,
                    evaluations,
                    levels_used: level + 1,
                    converged: true,
                });
            }
        }
    }

    Ok(IntegrationResult {
        value: *history.last().unwrap(),
        error_estimate: estimate,
        evaluations,
        levels_used: max_level + 1,
        converged: false,
    })
}
