//! Uniform grids, sampled functions and Simpson quadrature.

use crate::error::{ensure, Error, Result};
use crate::wavefunction::WaveFunction;

/// Uniform grid `x_i = start + i * step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    start: f64,
    step: f64,
    len: usize,
}

impl Grid {
    /// Grid spanning `[start, end]` with `intervals` equal steps.
    pub fn uniform(start: f64, end: f64, intervals: usize) -> Result<Self> {
        ensure(start.is_finite(), "start", start, "must be finite")?;
        ensure(end > start && end.is_finite(), "end", end, "must exceed start")?;
        ensure(intervals >= 2, "intervals", intervals as f64, "need at least two intervals")?;
        Ok(Self {
            start,
            step: (end - start) / intervals as f64,
            len: intervals + 1,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.x(self.len - 1)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.x(i))
    }

    /// Evaluates `f` at every grid point.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.points().map(f).collect()
    }
}

/// Composite Simpson rule for equally spaced samples.
///
/// An even number of samples is handled by closing the last three intervals
/// with the 3/8 rule.
pub fn simpson(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * step * (values[0] + values[1]),
        3 => step / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let (body, tail) = if n % 2 == 1 {
                (values, 0.0)
            } else {
                let t = &values[n - 4..];
                (
                    &values[..n - 3],
                    3.0 * step / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]),
                )
            };
            let last = body.len() - 1;
            if last == 0 {
                return tail;
            }
            let mut acc = body[0] + body[last];
            for (i, v) in body.iter().enumerate().take(last).skip(1) {
                acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            acc * step / 3.0 + tail
        }
    }
}

/// Simpson integral of `f` over `[a, b]` with `intervals` steps.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let values: Vec<f64> = (0..=intervals).map(|i| f(a + i as f64 * h)).collect();
    simpson(&values, h)
}

/// Number of strict sign changes in a sequence, skipping exact zeros.
pub fn sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// A function tabulated on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::MismatchedGrid);
        }
        Ok(Self { grid, values })
    }

    pub fn from_wavefunction<W: WaveFunction + ?Sized>(psi: &W, grid: Grid) -> Self {
        let values = grid.sample(|x| psi.value(x));
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm_squared(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        simpson(&sq, self.grid.step())
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_squared().sqrt();
        if n > 0.0 {
            self.values.iter_mut().for_each(|v| *v /= n);
        }
        self
    }

    pub fn nodes(&self) -> usize {
        sign_changes(&self.values)
    }
}

/// `int psi_a psi_b dx` by Simpson on the shared grid.
pub fn wavefunction_overlap(a: &GridFunction, b: &GridFunction) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::MismatchedGrid);
    }
    let product: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect();
    Ok(simpson(&product, a.grid.step()))
}
