//! Piecewise-cubic interpolation of sampled curves.
//!
//! Two flavors are used downstream: plain Hermite cubics where both values
//! and derivatives are stored (the eigenfunction y, whose y' is part of the
//! solver state), and Fritsch-Carlson monotone cubics (PCHIP) where only
//! values are known (the gradient magnitude |y'|, whose interpolant must not
//! overshoot, or the sublevel-set machinery would see phantom crossings).

/// Cubic Hermite evaluation on [x0, x1] from endpoint values and slopes.
pub(crate) fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + d0 * h * (t3 - 2.0 * t2 + t)
        + y1 * (-2.0 * t3 + 3.0 * t2)
        + d1 * h * (t3 - t2)
}

/// Derivative of the Hermite cubic at x.
pub(crate) fn hermite_deriv(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    (y0 * (6.0 * t2 - 6.0 * t) + y1 * (6.0 * t - 6.0 * t2)) / h
        + d0 * (3.0 * t2 - 4.0 * t + 1.0)
        + d1 * (3.0 * t2 - 2.0 * t)
}

/// Shape-preserving piecewise cubic on a strictly increasing grid.
#[derive(Clone, Debug)]
pub(crate) struct MonotoneCubic {
    x: Vec<f64>,
    v: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    /// Fritsch-Carlson slopes: zero at local extrema of the data, weighted
    /// harmonic mean of adjacent secants elsewhere. The interpolant is then
    /// monotone on every data interval where the data are.
    pub fn new(x: Vec<f64>, v: Vec<f64>) -> Self {
        assert_eq!(x.len(), v.len());
        assert!(x.len() >= 2, "monotone cubic needs at least two points");
        let n = x.len();
        let mut slope = vec![0.0; n];
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|i| (v[i + 1] - v[i]) / h[i]).collect();
        slope[0] = endpoint_slope(h[0], h.get(1).copied().unwrap_or(h[0]), d[0], d.get(1).copied().unwrap_or(d[0]));
        slope[n - 1] = endpoint_slope(
            h[n - 2],
            if n >= 3 { h[n - 3] } else { h[n - 2] },
            d[n - 2],
            if n >= 3 { d[n - 3] } else { d[n - 2] },
        );
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                slope[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                slope[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        MonotoneCubic { x, v, slope }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn eval(&self, xq: f64) -> f64 {
        let i = self.locate(xq);
        hermite(
            self.x[i],
            self.x[i + 1],
            self.v[i],
            self.v[i + 1],
            self.slope[i],
            self.slope[i + 1],
            xq,
        )
    }

    fn locate(&self, xq: f64) -> usize {
        if xq <= self.x[0] {
            return 0;
        }
        let n = self.x.len();
        if xq >= self.x[n - 1] {
            return n - 2;
        }
        match self.x.binary_search_by(|p| p.total_cmp(&xq)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        }
    }

    /// Solve eval(x) = target inside data interval i by bisection. The data
    /// must bracket the target on that interval; the interpolant is monotone
    /// there, so the root is unique.
    pub fn solve_in_interval(&self, i: usize, target: f64) -> f64 {
        let (mut a, mut b) = (self.x[i], self.x[i + 1]);
        let f = |x: f64| {
            hermite(
                self.x[i],
                self.x[i + 1],
                self.v[i],
                self.v[i + 1],
                self.slope[i],
                self.slope[i + 1],
                x,
            ) - target
        };
        let fa = f(a);
        if fa == 0.0 {
            return a;
        }
        let increasing = fa < 0.0;
        for _ in 0..80 {
            if b - a < 1e-15 {
                break;
            }
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return m;
            }
            if (fm < 0.0) == increasing {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    // three-point one-sided estimate, clamped to preserve shape
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}
