//! Composite Gauss-Legendre rules on the circle, graded toward breakpoints.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

pub const PANEL_ORDER: usize = 20;

pub(crate) fn reference_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let order = NonZeroUsize::new(PANEL_ORDER).expect("nonzero order");
        GaussLegendre::new(order).as_node_weight_pairs().to_vec()
    })
}

/// Appends the Gauss nodes of `[a, b]` to `nodes` and `weights`.
pub fn push_panel(a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for &(x, w) in reference_rule() {
        nodes.push(mid + half * x);
        weights.push(half * w);
    }
}

/// Panels on `[a, b]` whose widths halve geometrically toward the chosen ends.
///
/// `levels_a` and `levels_b` count the halvings toward `a` and `b`; zero means
/// no grading at that end.
pub fn graded_interval(
    a: f64,
    b: f64,
    levels_a: u32,
    levels_b: u32,
    nodes: &mut Vec<f64>,
    weights: &mut Vec<f64>,
) {
    let mut anchored = AnchoredNodes::default();
    anchored.graded(a, b, b - a, levels_a, levels_b, f64::INFINITY);
    nodes.extend(anchored.nodes());
    weights.extend(anchored.weights);
}

/// Nodes stored as anchor + offset, so that nodes within an ulp of a nonzero anchor
/// keep their distance to it.
#[derive(Debug, Clone, Default)]
struct AnchoredNodes {
    anchors: Vec<f64>,
    offsets: Vec<f64>,
    weights: Vec<f64>,
}

impl AnchoredNodes {
    fn nodes(&self) -> Vec<f64> {
        self.anchors.iter().zip(&self.offsets).map(|(a, o)| a + o).collect()
    }

    /// The interval of the given length from `a` to `b` (equal to `a + length` up to a
    /// multiple of 2π), graded toward both ends.
    fn graded(&mut self, a: f64, b: f64, length: f64, levels_a: u32, levels_b: u32, max_width: f64) {
        let half = 0.5 * length;
        for (anchor, dir, levels) in [(a, 1.0, levels_a), (b, -1.0, levels_b)] {
            let mut edges = vec![0.0];
            for k in (0..levels).rev() {
                edges.push(0.5f64.powi(k as i32));
            }
            if levels == 0 {
                edges.push(1.0);
            }
            for pair in edges.windows(2) {
                let (lo, hi) = (half * pair[0], half * pair[1]);
                let pieces = ((hi - lo) / max_width).ceil().max(1.0) as usize;
                let width = (hi - lo) / pieces as f64;
                for j in 0..pieces {
                    let mut offsets = Vec::with_capacity(PANEL_ORDER);
                    push_panel(lo + width * j as f64, lo + width * (j + 1) as f64, &mut offsets, &mut self.weights);
                    self.offsets.extend(offsets.iter().map(|o| dir * o));
                    self.anchors.extend(std::iter::repeat_n(anchor, offsets.len()));
                }
            }
        }
    }
}

/// A breakpoint on the circle and the number of panel halvings toward it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub angle: f64,
    pub levels: u32,
}

/// Quadrature for `(1/2π)∫ f(e^{it}) dt` over the whole circle.
///
/// Node i is `anchors[i] + offsets[i]`; evaluating through the pair keeps the
/// resolution of nodes packed against a breakpoint.
#[derive(Debug, Clone)]
pub struct CircleRule {
    pub nodes: Vec<f64>,
    pub anchors: Vec<f64>,
    pub offsets: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CircleRule {
    /// Builds the rule from breakpoints; with none, a single breakpoint at angle 0
    /// without grading is used.
    pub fn graded(breakpoints: &[Breakpoint]) -> Self {
        Self::graded_capped(breakpoints, f64::INFINITY)
    }

    /// As [`CircleRule::graded`], with no panel wider than `max_width`.
    pub fn graded_capped(breakpoints: &[Breakpoint], max_width: f64) -> Self {
        let mut bps: Vec<Breakpoint> = breakpoints
            .iter()
            .map(|b| Breakpoint {
                angle: reduce_angle(b.angle),
                levels: b.levels,
            })
            .collect();
        bps.sort_by(|x, y| x.angle.total_cmp(&y.angle));
        bps.dedup_by(|x, y| {
            let same = (x.angle - y.angle).abs() < 1e-14;
            if same {
                y.levels = y.levels.max(x.levels);
            }
            same
        });
        if bps.is_empty() {
            bps.push(Breakpoint { angle: 0.0, levels: 0 });
        }
        let mut anchored = AnchoredNodes::default();
        let n = bps.len();
        for i in 0..n {
            let a = bps[i];
            let b = bps[(i + 1) % n];
            let length = if i + 1 == n { b.angle + TAU - a.angle } else { b.angle - a.angle };
            anchored.graded(a.angle, b.angle, length, a.levels, b.levels, max_width);
        }
        for w in &mut anchored.weights {
            *w /= TAU;
        }
        Self {
            nodes: anchored.nodes(),
            anchors: anchored.anchors,
            offsets: anchored.offsets,
            weights: anchored.weights,
        }
    }

    /// Uniform rectangle rule with `n` points (exact for trigonometric polynomials of degree < n).
    pub fn uniform(n: usize) -> Self {
        let h = TAU / n as f64;
        let nodes: Vec<f64> = (0..n).map(|k| -PI + h * k as f64).collect();
        Self {
            anchors: vec![0.0; n],
            offsets: nodes.clone(),
            nodes,
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Reduces an angle to `(-π, π]`.
pub fn reduce_angle(t: f64) -> f64 {
    // keeps tiny negative angles, which rem_euclid would round to 2π
    if t > -PI && t <= PI {
        return t;
    }
    let mut r = t.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    reduce_angle(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_rule_integrates_trig_polynomials() {
        let rule = CircleRule::graded(&[
            Breakpoint { angle: 0.0, levels: 40 },
            Breakpoint { angle: 2.0, levels: 10 },
        ]);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        let c: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(t, w)| w * (3.0 * t).cos().powi(2))
            .sum();
        assert!((c - 0.5).abs() < 1e-13);
    }

    #[test]
    fn graded_rule_resolves_log_singularity() {
        // (1/2π)∫ log|2 sin(t/2)| dt = 0
        let rule = CircleRule::graded(&[Breakpoint { angle: 0.0, levels: 40 }]);
        let v: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(t, w)| w * (2.0 * (0.5 * t).sin()).abs().ln())
            .sum();
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn offsets_resolve_nonzero_breakpoints() {
        let rule = CircleRule::graded(&[Breakpoint { angle: PI, levels: 100 }]);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        let closest = rule.offsets.iter().map(|o| o.abs()).fold(f64::INFINITY, f64::min);
        assert!(closest > 0.0 && closest < 1e-30, "{closest}");
        assert!(rule.offsets.iter().any(|&o| o < 0.0 && o > -1e-30));
    }

    #[test]
    fn angle_reduction() {
        assert_eq!(reduce_angle(-1e-300), -1e-300);
        assert!((reduce_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((reduce_angle(-PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((angle_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-14);
    }
}
