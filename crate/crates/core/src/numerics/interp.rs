//! Interpolants used for memo tables and tabulated inverse CDFs.

/// Polynomial interpolant through Chebyshev points of the second kind on
/// `[lo, hi]`, evaluated in barycentric form.
#[derive(Debug, Clone)]
pub struct Chebyshev {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl Chebyshev {
    /// Nodes of an `n`-point rule on `[lo, hi]`, ascending.
    pub fn nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        assert!(n >= 2, "need at least two nodes");
        let m = (n - 1) as f64;
        (0..n)
            .map(|j| {
                let c = -(std::f64::consts::PI * j as f64 / m).cos();
                0.5 * (lo + hi) + 0.5 * (hi - lo) * c
            })
            .collect()
    }

    /// Samples `f` at the nodes.
    pub fn build<F: FnMut(f64) -> f64>(lo: f64, hi: f64, n: usize, f: F) -> Self {
        let nodes = Self::nodes(lo, hi, n);
        let values = nodes.iter().copied().map(f).collect();
        Self::from_values(lo, hi, nodes, values)
    }

    pub fn from_values(lo: f64, hi: f64, nodes: Vec<f64>, values: Vec<f64>) -> Self {
        let n = nodes.len();
        let weights = (0..n)
            .map(|j| {
                let w = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == n - 1 {
                    0.5 * w
                } else {
                    w
                }
            })
            .collect();
        Self { lo, hi, nodes, values, weights }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &fj), &wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = x - xj;
            if d == 0.0 {
                return fj;
            }
            let t = wj / d;
            num += t * fj;
            den += t;
        }
        num / den
    }
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// `x` strictly increasing, `y` monotone, at least two points.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 2 && y.len() == n, "need matching abscissae and ordinates");
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
            return Self { x, y, d };
        }
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        Self { x, y, d }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.x.partition_point(|&xi| xi <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_is_spectrally_accurate_on_smooth_functions() {
        let c = Chebyshev::build(-2.0, 3.0, 41, |x| (x * 1.3).sin() * (-0.2 * x).exp());
        for i in 0..97 {
            let x = -2.0 + 5.0 * i as f64 / 96.0;
            let want = (x * 1.3).sin() * (-0.2 * x).exp();
            assert!((c.eval(x) - want).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn chebyshev_nodes_are_ascending_and_span_domain() {
        let n = Chebyshev::nodes(1.0, 5.0, 9);
        assert_eq!(n[0], 1.0);
        assert!((n[8] - 5.0).abs() < 1e-15);
        assert!(n.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn monotone_cubic_preserves_monotonicity() {
        let x: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| if v < 5.0 { 0.0 } else { 1.0 - (-(v - 5.0)).exp() }).collect();
        let m = MonotoneCubic::new(x, y);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=1100 {
            let v = m.eval(i as f64 / 100.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert_eq!(m.eval(-1.0), 0.0);
    }

    #[test]
    fn monotone_cubic_reproduces_nodes() {
        let x = vec![0.0, 0.5, 1.7, 2.0, 4.0];
        let y = vec![0.0, 0.1, 0.5, 0.9, 1.0];
        let m = MonotoneCubic::new(x.clone(), y.clone());
        for (a, b) in x.iter().zip(&y) {
            assert!((m.eval(*a) - b).abs() < 1e-15);
        }
    }
}
