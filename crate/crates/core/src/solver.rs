//! Numerov shooting solver for `psi'' = (V(x) - E) psi` on `(0, x_max]`.
//!
//! Independent of the analytic machinery: levels are bracketed by counting
//! the nodes of the outward solution, then refined by bisection on the
//! mismatch between outward and inward solutions at a matching point.

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::grid::{sign_changes, Grid, GridFunction};
use crate::potential::Potential;

/// The default grid starts at the origin, where `psi = 0` exactly.
pub const DEFAULT_X_MIN: f64 = 0.0;
pub const DEFAULT_GRID_POINTS: usize = 200_000;
pub const MIN_GRID_POINTS: usize = 1_000;
pub const ENERGY_SAMPLES: usize = 200;
pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const MAX_BISECTION_ITERATIONS: usize = 200;
/// Largest acceptable final bracket width.
pub const CONVERGED_WIDTH: f64 = 1e-9;

const RESCALE_ABOVE: f64 = 1e150;

/// Outer edge rule: `30 / sqrt(-E_hi)` clamped to `[30, 400]`.
pub fn default_x_max(e_hi: f64) -> f64 {
    if e_hi >= 0.0 {
        return 400.0;
    }
    (30.0 / (-e_hi).sqrt()).clamp(30.0, 400.0)
}

pub struct RadialProblem<'a> {
    potential: &'a dyn Potential,
    origin_exponent: f64,
    x_min: f64,
    x_max: f64,
    grid_points: usize,
}

impl<'a> RadialProblem<'a> {
    pub fn new(
        potential: &'a dyn Potential,
        x_min: f64,
        x_max: f64,
        grid_points: usize,
    ) -> Result<Self> {
        ensure(x_min >= 0.0, "x_min", x_min, "must not be negative")?;
        ensure(x_max > x_min && x_max.is_finite(), "x_max", x_max, "must exceed x_min")?;
        ensure(
            grid_points >= MIN_GRID_POINTS,
            "grid_points",
            grid_points as f64,
            "need at least 1000 points",
        )?;
        Ok(Self {
            potential,
            origin_exponent: potential.origin_exponent(),
            x_min,
            x_max,
            grid_points,
        })
    }

    /// Defaults for an energy window topping out at `e_hi`.
    pub fn for_window(potential: &'a dyn Potential, e_hi: f64) -> Self {
        Self {
            potential,
            origin_exponent: potential.origin_exponent(),
            x_min: DEFAULT_X_MIN,
            x_max: default_x_max(e_hi),
            grid_points: DEFAULT_GRID_POINTS,
        }
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Result<Self> {
        ensure(
            grid_points >= MIN_GRID_POINTS,
            "grid_points",
            grid_points as f64,
            "need at least 1000 points",
        )?;
        self.grid_points = grid_points;
        Ok(self)
    }

    pub fn with_x_max(mut self, x_max: f64) -> Result<Self> {
        ensure(x_max > self.x_min && x_max.is_finite(), "x_max", x_max, "must exceed x_min")?;
        self.x_max = x_max;
        Ok(self)
    }

    pub fn with_origin_exponent(mut self, s: f64) -> Result<Self> {
        ensure(s > 0.0, "s", s, "must be positive")?;
        self.origin_exponent = s;
        Ok(self)
    }

    pub fn origin_exponent(&self) -> f64 {
        self.origin_exponent
    }

    pub fn grid(&self) -> Grid {
        Grid::uniform(self.x_min, self.x_max, self.grid_points - 1)
            .expect("validated on construction")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericalLevel {
    /// Level index, `nodes + 1` for a regular level.
    pub n: usize,
    pub energy: f64,
    pub nodes: usize,
    pub bisection_iterations: usize,
    pub bracket_width: f64,
    pub matching_point: f64,
    #[serde(skip)]
    pub wavefunction: GridFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericalSpectrum {
    pub levels: Vec<NumericalLevel>,
    pub grid_points: usize,
    pub x_min: f64,
    pub x_max: f64,
    /// Fewer than the requested number of levels lie in the window.
    pub window_exhausted: bool,
}

impl NumericalSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

struct Shooter {
    grid: Grid,
    potential: Vec<f64>,
    s: f64,
    /// `gamma = h^2 lim(x^s V) / (12 2^s h^s)` when the grid starts at the
    /// origin; see [`Shooter::first_step`].
    origin_term: Option<f64>,
}

impl Shooter {
    fn new(problem: &RadialProblem<'_>) -> Self {
        let grid = problem.grid();
        let at_origin = grid.start() == 0.0;
        let mut potential = grid.sample(|x| if x > 0.0 { problem.potential.value(x) } else { 0.0 });
        let origin_term = at_origin.then(|| {
            let eps: f64 = 1e-9;
            let h = grid.step();
            let s = problem.origin_exponent;
            let limit = eps.powf(s) * problem.potential.value(eps);
            h * h * limit / (12.0 * 2f64.powf(s) * h.powf(s))
        });
        if at_origin {
            // never read through q(); keeps the matching search finite
            potential[0] = potential[1];
        }
        Self {
            grid,
            potential,
            s: problem.origin_exponent,
            origin_term,
        }
    }

    #[inline]
    fn q(&self, i: usize, energy: f64) -> f64 {
        let h = self.grid.step();
        1.0 - h * h * (self.potential[i] - energy) / 12.0
    }

    #[inline]
    fn step(&self, energy: f64, prev: f64, cur: f64, i_prev: usize, i: usize, i_next: usize) -> f64 {
        if let (0, Some(gamma)) = (i_prev, self.origin_term) {
            return self.first_step(energy, cur, gamma);
        }
        ((12.0 - 10.0 * self.q(i, energy)) * cur - self.q(i_prev, energy) * prev)
            / self.q(i_next, energy)
    }

    /// Numerov step off the origin. `psi_0 = 0`, but `(V - E) psi -> A lim x^s V`
    /// with `psi ~ A x^s + B x^{s+1}`, and eliminating `B` between the first two
    /// points gives `A = (2^{s+1} psi_1 - psi_2) / (2^s h^s)`. The step is then
    /// linear in `psi_2`.
    fn first_step(&self, energy: f64, psi1: f64, gamma: f64) -> f64 {
        let two_s1 = 2f64.powf(self.s + 1.0);
        psi1 * (12.0 - 10.0 * self.q(1, energy) + gamma * two_s1) / (self.q(2, energy) + gamma)
    }

    /// `psi ~ x^s` on the first two points; exactly zero at the origin.
    fn start(&self) -> (f64, f64) {
        (self.grid.x(0).powf(self.s), self.grid.x(1).powf(self.s))
    }

    /// Sign changes of the outward solution over the whole grid.
    fn count_nodes(&self, energy: f64) -> usize {
        let (mut prev, mut cur) = self.start();
        let mut nodes = 0;
        let mut last_sign = cur.signum();
        for i in 1..self.grid.len() - 1 {
            let next = self.step(energy, prev, cur, i - 1, i, i + 1);
            prev = cur;
            cur = next;
            if cur != 0.0 {
                let sign = cur.signum();
                if sign != last_sign {
                    nodes += 1;
                    last_sign = sign;
                }
            }
            if cur.abs() > RESCALE_ABOVE {
                prev /= RESCALE_ABOVE;
                cur /= RESCALE_ABOVE;
            }
        }
        nodes
    }

    /// Outward solution on `0..=end`.
    fn outward(&self, energy: f64, end: usize) -> Vec<f64> {
        let (a, b) = self.start();
        let mut psi = Vec::with_capacity(end + 1);
        psi.push(a);
        psi.push(b);
        for i in 1..end {
            let next = self.step(energy, psi[i - 1], psi[i], i - 1, i, i + 1);
            psi.push(next);
            if next.abs() > RESCALE_ABOVE {
                psi.iter_mut().for_each(|v| *v /= RESCALE_ABOVE);
            }
        }
        psi
    }

    /// Inward solution on `start..len`, vanishing at the outer edge.
    fn inward(&self, energy: f64, start: usize) -> Vec<f64> {
        let n = self.grid.len();
        let mut psi = vec![0.0; n];
        psi[n - 2] = 1e-30;
        let mut i = n - 2;
        while i > start {
            psi[i - 1] = self.step(energy, psi[i + 1], psi[i], i + 1, i, i - 1);
            if psi[i - 1].abs() > RESCALE_ABOVE {
                psi[i - 1..].iter_mut().for_each(|v| *v /= RESCALE_ABOVE);
            }
            i -= 1;
        }
        psi
    }

    /// Outermost classically allowed point for `energy`, or the potential
    /// minimum when nothing is allowed.
    fn matching_index(&self, energy: f64) -> usize {
        let n = self.grid.len();
        let lo = 2;
        let hi = n - 3;
        match (lo..=hi).rev().find(|&i| self.potential[i] < energy) {
            Some(i) => i,
            None => (lo..=hi)
                .min_by(|&a, &b| self.potential[a].total_cmp(&self.potential[b]))
                .unwrap_or(lo),
        }
    }

    /// Normalized log-derivative mismatch at grid index `m`,
    /// `(psi_L' psi_R - psi_R' psi_L) / (|(psi_L, psi_L')| |(psi_R, psi_R')|)`.
    /// Free of the poles of `psi'/psi` and zero exactly at eigenvalues.
    fn mismatch(&self, energy: f64, m: usize) -> f64 {
        let h2 = 2.0 * self.grid.step();
        let left = self.outward(energy, m + 1);
        let right = self.inward(energy, m - 1);
        let (l0, dl) = (left[m], (left[m + 1] - left[m - 1]) / h2);
        let (r0, dr) = (right[m], (right[m + 1] - right[m - 1]) / h2);
        let nl = l0.hypot(dl);
        let nr = r0.hypot(dr);
        (dl * r0 - dr * l0) / (nl * nr)
    }

    fn wavefunction(&self, energy: f64, m: usize) -> GridFunction {
        let mut psi = self.outward(energy, m);
        let right = self.inward(energy, m);
        let scale = psi[m] / right[m];
        psi.extend(right[m + 1..].iter().map(|v| v * scale));
        GridFunction::new(self.grid, psi)
            .expect("one value per grid point")
            .normalized()
    }

    /// Bisection on the mismatch inside a bracket holding one level.
    fn refine(&self, lo: f64, hi: f64, nodes_below: usize) -> Result<NumericalLevel> {
        let m = self.matching_index(0.5 * (lo + hi));
        let (mut a, mut b) = (lo, hi);
        let mut fa = self.mismatch(a, m);
        let fb = self.mismatch(b, m);
        if fa.signum() == fb.signum() {
            return Err(Error::NonConvergence {
                energy: 0.5 * (a + b),
                width: b - a,
                iterations: 0,
            });
        }
        let mut iterations = 0;
        while b - a > BISECTION_TOLERANCE && iterations < MAX_BISECTION_ITERATIONS {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.mismatch(mid, m);
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
            iterations += 1;
        }
        let energy = 0.5 * (a + b);
        if b - a > CONVERGED_WIDTH {
            return Err(Error::NonConvergence {
                energy,
                width: b - a,
                iterations,
            });
        }
        let wavefunction = self.wavefunction(energy, m);
        let nodes = sign_changes(wavefunction.values());
        Ok(NumericalLevel {
            n: nodes_below + 1,
            energy,
            nodes,
            bisection_iterations: iterations,
            bracket_width: b - a,
            matching_point: self.grid.x(m),
            wavefunction,
        })
    }

    /// Splits `[a, b]` until every piece holds exactly one level.
    fn isolate(&self, a: f64, na: usize, b: f64, nb: usize, out: &mut Vec<(f64, f64, usize)>) {
        if nb <= na {
            return;
        }
        if nb == na + 1 || b - a < BISECTION_TOLERANCE {
            out.push((a, b, na));
            return;
        }
        let mid = 0.5 * (a + b);
        let nm = self.count_nodes(mid);
        self.isolate(a, na, mid, nm, out);
        self.isolate(mid, nm, b, nb, out);
    }
}

/// All bound states with energy in `window`, at most `max_levels` of them.
pub fn solve_bound_states(
    problem: &RadialProblem<'_>,
    window: (f64, f64),
    max_levels: usize,
) -> Result<NumericalSpectrum> {
    let (e_lo, e_hi) = window;
    ensure(e_lo.is_finite(), "E_lo", e_lo, "must be finite")?;
    ensure(e_hi > e_lo, "E_hi", e_hi, "must exceed E_lo")?;
    ensure(e_hi < 0.0, "E_hi", e_hi, "bound states need negative energies")?;
    ensure(max_levels >= 1, "max_levels", max_levels as f64, "must be positive")?;

    let shooter = Shooter::new(problem);
    let energies: Vec<f64> = (0..ENERGY_SAMPLES)
        .map(|j| e_lo + (e_hi - e_lo) * j as f64 / (ENERGY_SAMPLES - 1) as f64)
        .collect();
    let counts: Vec<usize> = energies.iter().map(|&e| shooter.count_nodes(e)).collect();

    let mut brackets = Vec::new();
    for j in 0..ENERGY_SAMPLES - 1 {
        shooter.isolate(energies[j], counts[j], energies[j + 1], counts[j + 1], &mut brackets);
        if brackets.len() >= max_levels {
            break;
        }
    }
    brackets.truncate(max_levels);

    let levels = brackets
        .iter()
        .map(|&(a, b, below)| shooter.refine(a, b, below))
        .collect::<Result<Vec<_>>>()?;

    Ok(NumericalSpectrum {
        window_exhausted: levels.len() < max_levels,
        levels,
        grid_points: problem.grid_points,
        x_min: problem.x_min,
        x_max: problem.x_max,
    })
}
