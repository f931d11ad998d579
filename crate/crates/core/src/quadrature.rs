//! Globally adaptive Gauss-Kronrod (7/15) quadrature in one and two
//! dimensions. Used only as an independent oracle for closed forms.

use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

const XK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for nodes XK[1], XK[3], XK[5], XK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// The 15 nodes on `[-1, 1]` with Kronrod and Gauss weights (Gauss weight 0
/// where the node is Kronrod-only).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    let mut k = 0;
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[k] = (-XK[i], WK[i], wg);
        out[k + 1] = (XK[i], WK[i], wg);
        k += 2;
    }
    out[14] = (0.0, WK[7], WG[3]);
    out
}

struct Cell<R> {
    region: R,
    value: f64,
    error: f64,
}

impl<R> PartialEq for Cell<R> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<R> Eq for Cell<R> {}
impl<R> PartialOrd for Cell<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<R> Ord for Cell<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk_1d<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (mut k, mut g) = (0.0, 0.0);
    for (x, wk, wg) in rule() {
        let v = f(c + h * x);
        k += wk * v;
        g += wg * v;
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive integral of `f` over `[a, b]`, stopping when the summed error
/// estimate is below `max(abs_tol, rel_tol |value|)`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64, max_evals: usize) -> QuadResult {
    let (v, e) = gk_1d(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Cell {
        region: (a, b),
        value: v,
        error: e,
    });
    let (mut value, mut error, mut evals) = (v, e, 15);
    while error > abs_tol.max(rel_tol * value.abs()) && evals + 30 <= max_evals {
        let cell = heap.pop().expect("non-empty heap");
        let (lo, hi) = cell.region;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            heap.push(cell);
            break;
        }
        let (v1, e1) = gk_1d(&f, lo, mid);
        let (v2, e2) = gk_1d(&f, mid, hi);
        evals += 30;
        value += v1 + v2 - cell.value;
        error += e1 + e2 - cell.error;
        heap.push(Cell {
            region: (lo, mid),
            value: v1,
            error: e1,
        });
        heap.push(Cell {
            region: (mid, hi),
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed accumulated rounding from the running updates
    let value_sum: f64 = heap.iter().map(|c| c.value).sum();
    let error_sum: f64 = heap.iter().map(|c| c.error).sum();
    QuadResult {
        value: value_sum,
        error: error_sum,
        evals,
        converged: error_sum <= abs_tol.max(rel_tol * value_sum.abs()),
    }
}

#[derive(Clone, Copy)]
struct Rect {
    x: (f64, f64),
    y: (f64, f64),
}

/// Returns the K x K value and the errors of K x G and G x K against it.
fn gk_2d<F: Fn(f64, f64) -> f64>(f: &F, r: Rect) -> (f64, f64, f64) {
    let (cx, hx) = (0.5 * (r.x.0 + r.x.1), 0.5 * (r.x.1 - r.x.0));
    let (cy, hy) = (0.5 * (r.y.0 + r.y.1), 0.5 * (r.y.1 - r.y.0));
    let nodes = rule();
    let (mut kk, mut kg, mut gk) = (0.0, 0.0, 0.0);
    for &(x, wkx, wgx) in &nodes {
        let xv = cx + hx * x;
        for &(y, wky, wgy) in &nodes {
            let v = f(xv, cy + hy * y);
            kk += wkx * wky * v;
            kg += wkx * wgy * v;
            gk += wgx * wky * v;
        }
    }
    let s = hx * hy;
    (kk * s, ((kk - gk) * s).abs(), ((kk - kg) * s).abs())
}

/// Adaptive integral of `f(x, y)` over `[x0, x1] x [y0, y1]`. Cells are split
/// along the direction whose embedded error estimate dominates.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x: (f64, f64),
    y: (f64, f64),
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
) -> QuadResult {
    let eval = |r: Rect| {
        let (v, ex, ey) = gk_2d(&f, r);
        (v, ex, ey)
    };
    let root = Rect { x, y };
    let (v, ex, ey) = eval(root);
    let mut heap = BinaryHeap::new();
    heap.push(Cell {
        region: (root, ex >= ey),
        value: v,
        error: ex + ey,
    });
    let (mut value, mut error, mut evals) = (v, ex + ey, 225);
    while error > abs_tol.max(rel_tol * value.abs()) && evals + 450 <= max_evals {
        let cell = heap.pop().expect("non-empty heap");
        let (r, split_x) = cell.region;
        let halves = if split_x {
            let m = 0.5 * (r.x.0 + r.x.1);
            [Rect { x: (r.x.0, m), y: r.y }, Rect { x: (m, r.x.1), y: r.y }]
        } else {
            let m = 0.5 * (r.y.0 + r.y.1);
            [Rect { x: r.x, y: (r.y.0, m) }, Rect { x: r.x, y: (m, r.y.1) }]
        };
        value -= cell.value;
        error -= cell.error;
        for h in halves {
            let (v, ex, ey) = eval(h);
            value += v;
            error += ex + ey;
            heap.push(Cell {
                region: (h, ex >= ey),
                value: v,
                error: ex + ey,
            });
        }
        evals += 450;
    }
    let value_sum: f64 = heap.iter().map(|c| c.value).sum();
    let error_sum: f64 = heap.iter().map(|c| c.error).sum();
    QuadResult {
        value: value_sum,
        error: error_sum,
        evals,
        converged: error_sum <= abs_tol.max(rel_tol * value_sum.abs()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate_1d(|x| x.powi(20), 0.0, 1.0, 1e-14, 0.0, 10_000);
        assert!((r.value - 1.0 / 21.0).abs() < 1e-15);
        assert!(r.converged);
    }

    #[test]
    fn peaked_and_singular_derivative() {
        let r = integrate_1d(|x| x.sqrt(), 0.0, 1.0, 1e-12, 0.0, 100_000);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12, "{r:?}");
        let r = integrate_1d(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 0.0, 100_000);
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!(((r.value - exact) / exact).abs() < 1e-11);
    }

    #[test]
    fn two_dimensional_separable() {
        let r = integrate_2d(|x, y| x.exp() * y.cos().powi(2), (0.0, 1.0), (0.0, 2.0 * PI), 1e-12, 0.0, 1_000_000);
        let exact = (1f64.exp() - 1.0) * PI;
        assert!(((r.value - exact) / exact).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn two_dimensional_peak() {
        let f = |x: f64, y: f64| (-200.0 * (x * x + y * y)).exp();
        let r = integrate_2d(f, (-1.0, 1.0), (-1.0, 1.0), 1e-10, 0.0, 2_000_000);
        let exact = PI / 200.0;
        assert!(((r.value - exact) / exact).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn budget_exhaustion_reported() {
        let r = integrate_1d(|x| (1.0 / x).sin(), 1e-6, 1.0, 1e-14, 0.0, 60);
        assert!(!r.converged);
    }
}
