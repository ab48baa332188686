//! Distribution function tabulated from a density on a finite window.

use crate::error::{Error, Result};

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// `F(x) = ∫_a^x f` on `[a, b]`, stored at knots together with `f`, and
/// interpolated between knots by cubic Hermite polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl TabulatedCdf {
    /// Knots are geometric when `a > 0`, so intervals stay proportionate on
    /// wide windows; each interval is integrated by 5-point Gauss–Legendre.
    pub fn from_density<F>(density: F, a: f64, b: f64, intervals: usize) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64>,
    {
        if !(a < b) || !a.is_finite() || !b.is_finite() || intervals == 0 {
            return Err(Error::Domain(format!("bad window [{a}, {b}] with {intervals} intervals")));
        }
        let knots: Vec<f64> = (0..=intervals)
            .map(|i| {
                let u = i as f64 / intervals as f64;
                if a > 0.0 {
                    a * (b / a).powf(u)
                } else {
                    a + (b - a) * u
                }
            })
            .collect();
        let slopes = knots.iter().map(|&x| density(x)).collect::<Result<Vec<_>>>()?;
        let mut values = Vec::with_capacity(knots.len());
        values.push(0.0);
        for w in knots.windows(2) {
            let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            let mut piece = 0.0;
            for (x, wt) in GL_NODES.iter().zip(GL_WEIGHTS) {
                piece += wt * density(c + h * x)?;
            }
            values.push(values[values.len() - 1] + h * piece);
        }
        Ok(Self { knots, values, slopes })
    }

    /// Mass of the window, `F(b)`.
    pub fn total(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn window(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// `F(x)`, constant outside the window.
    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.window();
        if x <= a {
            return 0.0;
        }
        if x >= b {
            return self.total();
        }
        let i = self.knots.partition_point(|&k| k <= x) - 1;
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[i] + h10 * h * self.slopes[i] + h01 * self.values[i + 1] + h11 * h * self.slopes[i + 1]
    }

    /// Distribution function conditioned on the window.
    pub fn eval_conditional(&self, x: f64) -> f64 {
        self.eval(x) / self.total()
    }
}
