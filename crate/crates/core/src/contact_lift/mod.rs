//! Primitives of compactly supported exact symplectomorphisms of the plane.
//!
//! With `omega = dx ^ dy` and `theta = (x dy - y dx) / 2`, the time-one map
//! `phi` of a Hamiltonian flow satisfies `phi^* theta = theta + dH_phi` for a
//! compactly supported `H_phi`. We compute `H_phi(p)` by integrating
//! `theta(X) + sign * H` along the trajectory of `p` with classical RK4.

mod hamiltonian;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::scalar::Real;

pub use hamiltonian::{Bump, HamiltonianError, Jet, PlanarHamiltonian, Term};
use hamiltonian::lit;

/// Sign in front of `H` in the action integrand. Both signs were tried
/// against the finite-difference residual; only `+1` passes with the vector
/// field convention `X = (dH/dy, -dH/dx)`.
pub const PRIMITIVE_SIGN: f64 = 1.0;

/// Far-field point where reconstructed primitives are pinned to zero.
pub const FAR_FIELD: (f64, f64) = (-2.0, -2.0);

/// Amplitude `k` of the composition clock, see [`HamiltonianPath`].
pub const CLOCK_WOBBLE: f64 = 0.25;

/// Trajectories integrated side by side, see [`FlowMap::integrate_many`].
pub const LANES: usize = 4;

pub const DEFAULT_STEPS: usize = 1000;
pub const DEFAULT_GRID: usize = 201;
pub const DEFAULT_HALF_WIDTH: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("step count must be positive")]
    NoSteps,
    #[error("flow time {0} outside [0, 1]")]
    Time(String),
    #[error("integration produced a non-finite value")]
    NonFinite,
    #[error("support of the Hamiltonian is not inside the grid box")]
    SupportOutsideGrid,
    #[error("lifted maps live on different grids or step counts")]
    GridMismatch,
    #[error("the left edge of the grid meets the support, no far-field anchor")]
    NoFarField,
    #[error("grid needs at least two points per side")]
    GridSize,
}

/// Square sample grid `n x n` over `[lo, hi]^2`, indexed row by row in `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub n: usize,
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Grid<T> {
    pub fn new(n: usize, half_width: T) -> Result<Self, LiftError> {
        if n < 2 {
            return Err(LiftError::GridSize);
        }
        Ok(Grid { n, lo: -half_width, hi: half_width })
    }

    pub fn spacing(&self) -> T {
        (self.hi - self.lo) / T::from_usize(self.n - 1).unwrap()
    }

    pub fn coord(&self, i: usize) -> T {
        self.lo + self.spacing() * T::from_usize(i).unwrap()
    }

    pub fn point(&self, index: usize) -> (T, T) {
        (self.coord(index % self.n), self.coord(index / self.n))
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

impl Default for Grid<f64> {
    fn default() -> Self {
        Grid::new(DEFAULT_GRID, DEFAULT_HALF_WIDTH).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftConfig<T> {
    /// RK4 steps per unit of path parameter.
    pub steps: usize,
    pub grid: Grid<T>,
    pub sign: T,
    /// Skip grid points outside every bump disk, where the map is the identity.
    pub skip_outside: bool,
    pub fd_step: T,
}

impl<T: Real> LiftConfig<T> {
    pub fn new(steps: usize, grid: usize) -> Result<Self, LiftError> {
        if steps == 0 {
            return Err(LiftError::NoSteps);
        }
        Ok(LiftConfig {
            steps,
            grid: Grid::new(grid, lit(DEFAULT_HALF_WIDTH))?,
            sign: lit(PRIMITIVE_SIGN),
            skip_outside: true,
            fd_step: T::epsilon().powf(lit(0.2)) * lit(4e-4),
        })
    }
}

impl Default for LiftConfig<f64> {
    fn default() -> Self {
        LiftConfig::new(DEFAULT_STEPS, DEFAULT_GRID).unwrap()
    }
}

/// Time-ordered Hamiltonian segments, each run for its own duration.
///
/// A single segment runs on `[0, duration]`. Several segments share the unit
/// interval, each on its own slice with the clock `s + k sin(2 pi s) / 2 pi`,
/// so a composition is integrated as one flow on a different time grid than
/// its factors.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianPath<T> {
    segments: Vec<(PlanarHamiltonian<T>, T)>,
}

impl<T: Real> HamiltonianPath<T> {
    pub fn identity() -> Self {
        HamiltonianPath { segments: Vec::new() }
    }

    pub fn single(h: PlanarHamiltonian<T>, duration: T) -> Self {
        let mut p = HamiltonianPath::identity();
        if !h.is_zero() && duration != T::zero() {
            p.segments.push((h, duration));
        }
        p
    }

    /// The path whose time-one map is `later . self`.
    pub fn then(&self, later: &Self) -> Self {
        let mut segments = self.segments.clone();
        segments.extend(later.segments.iter().cloned());
        HamiltonianPath { segments }
    }

    pub fn segments(&self) -> &[(PlanarHamiltonian<T>, T)] {
        &self.segments
    }

    pub fn is_identity(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn near_support(&self, x: T, y: T, margin: T) -> bool {
        self.segments.iter().any(|(h, _)| h.near_support(x, y, margin))
    }

    pub fn support_radius(&self) -> T {
        self.segments.iter().map(|(h, _)| h.support_radius()).fold(T::zero(), T::max)
    }

    /// Segment time and clock speed at local time `s` of segment `k`.
    fn clock(&self, k: usize, s: T) -> (T, T) {
        let n = self.segments.len();
        let d = self.segments[k].1;
        if n == 1 {
            return (d * s, d);
        }
        let nt = T::from_usize(n).unwrap();
        let two_pi = lit::<T>(std::f64::consts::TAU);
        let kappa = lit::<T>(CLOCK_WOBBLE);
        let a = s + kappa * (two_pi * s).sin() / two_pi;
        let da = T::one() + kappa * (two_pi * s).cos();
        (d * a, d * nt * da)
    }

    /// Effective jet at path parameter `t`, scaled by the clock speed.
    fn jet(&self, x: T, y: T, k: usize, (tau, speed): (T, T)) -> Jet<T> {
        let j = self.segments[k].0.jet(x, y, tau);
        Jet {
            value: j.value * speed,
            gx: j.gx * speed,
            gy: j.gy * speed,
            hxx: j.hxx * speed,
            hxy: j.hxy * speed,
            hyy: j.hyy * speed,
        }
    }
}

/// Endpoint of one trajectory together with its action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowPoint<T> {
    pub x: T,
    pub y: T,
    pub action: T,
    /// Jacobian of the map, row major, when requested.
    pub jacobian: Option<[T; 4]>,
}

/// Numeric time-one map of a Hamiltonian path.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMap<T> {
    path: HamiltonianPath<T>,
    steps: usize,
    sign: T,
    /// `(segment time, clock speed)` at every RK4 stage: index `2 i + j` for
    /// local time `(i + j / 2) / steps`, one table per segment.
    clock: Vec<Vec<(T, T)>>,
}

/// Flow of `h` for time `t`, with `steps` RK4 steps.
pub fn flow<T: Real>(h: &PlanarHamiltonian<T>, t: T, steps: usize) -> Result<FlowMap<T>, LiftError> {
    if steps == 0 {
        return Err(LiftError::NoSteps);
    }
    if !(t >= T::zero() && t <= T::one()) {
        return Err(LiftError::Time(format!("{t}")));
    }
    FlowMap::from_path(HamiltonianPath::single(h.clone(), t), steps, lit(PRIMITIVE_SIGN))
}

impl<T: Real> FlowMap<T> {
    pub fn from_path(path: HamiltonianPath<T>, steps: usize, sign: T) -> Result<Self, LiftError> {
        if steps == 0 {
            return Err(LiftError::NoSteps);
        }
        let stages = T::from_usize(2 * steps).unwrap();
        let clock = (0..path.segments.len())
            .map(|k| (0..=2 * steps).map(|m| path.clock(k, T::from_usize(m).unwrap() / stages)).collect())
            .collect();
        Ok(FlowMap { path, steps, sign, clock })
    }

    pub fn path(&self) -> &HamiltonianPath<T> {
        &self.path
    }

    pub fn apply(&self, x: T, y: T) -> Result<(T, T), LiftError> {
        let p = self.integrate(x, y, false)?;
        Ok((p.x, p.y))
    }

    /// Trajectory endpoint and action; with `jacobian` also the variational equations.
    pub fn integrate(&self, x: T, y: T, jacobian: bool) -> Result<FlowPoint<T>, LiftError> {
        if !jacobian {
            return self.integrate_plain(x, y);
        }
        let mut s = [x, y, T::zero(), T::one(), T::zero(), T::zero(), T::one()];
        let dt = self.step_size();
        let half = lit::<T>(0.5);
        let sixth = dt / lit::<T>(6.0);
        let two = lit::<T>(2.0);
        for k in 0..self.path.segments.len() {
            for i in 0..self.steps {
                let k1 = self.rhs(&s, k, 2 * i);
                let k2 = self.rhs(&axpy(&s, half * dt, &k1), k, 2 * i + 1);
                let k3 = self.rhs(&axpy(&s, half * dt, &k2), k, 2 * i + 1);
                let k4 = self.rhs(&axpy(&s, dt, &k3), k, 2 * i + 2);
                for c in 0..7 {
                    s[c] = s[c] + sixth * (k1[c] + two * (k2[c] + k3[c]) + k4[c]);
                }
            }
        }
        if !s.iter().all(|v| v.is_finite()) {
            return Err(LiftError::NonFinite);
        }
        Ok(FlowPoint { x: s[0], y: s[1], action: s[2], jacobian: jacobian.then_some([s[3], s[4], s[5], s[6]]) })
    }

    fn integrate_plain(&self, x: T, y: T) -> Result<FlowPoint<T>, LiftError> {
        let out = self.integrate_lanes::<1>(&[(x, y)])?;
        Ok(out[0])
    }

    /// Endpoints and actions of many trajectories. Trajectories are advanced
    /// in lockstep groups of [`LANES`], which hides the latency of the
    /// dependent chain inside one RK4 step.
    pub fn integrate_many(&self, points: &[(T, T)]) -> Result<Vec<FlowPoint<T>>, LiftError> {
        let groups: Result<Vec<Vec<FlowPoint<T>>>, LiftError> =
            points.par_chunks(LANES).map(|chunk| self.integrate_lanes::<LANES>(chunk)).collect();
        Ok(groups?.into_iter().flatten().collect())
    }

    fn integrate_lanes<const L: usize>(&self, points: &[(T, T)]) -> Result<Vec<FlowPoint<T>>, LiftError> {
        let mut px = [T::zero(); L];
        let mut py = [T::zero(); L];
        for l in 0..L {
            let (x, y) = points[l.min(points.len() - 1)];
            px[l] = x;
            py[l] = y;
        }
        let mut act = [T::zero(); L];
        let dt = self.step_size();
        let half = lit::<T>(0.5);
        let half_dt = half * dt;
        let sixth = dt / lit::<T>(6.0);
        let two = lit::<T>(2.0);
        let sign = self.sign;
        for ((h, _), table) in self.path.segments.iter().zip(&self.clock) {
            // outside every bump the field and the integrand vanish, so a
            // trajectory starting there is exactly fixed for the whole segment
            if (0..L).all(|l| !h.near_support(px[l], py[l], T::zero())) {
                continue;
            }
            let rhs = |x: &[T; L], y: &[T; L], (tau, speed): (T, T)| {
                let mut out = [(T::zero(), T::zero(), T::zero()); L];
                for l in 0..L {
                    let (v, gx, gy) = h.gradient(x[l], y[l], tau);
                    let (gx, gy) = (gx * speed, gy * speed);
                    out[l] = (gy, -gx, -half * (x[l] * gx + y[l] * gy) + sign * speed * v);
                }
                out
            };
            let shift = |base: &[T; L], a: T, k: &[(T, T, T); L], pick: fn(&(T, T, T)) -> T| {
                let mut out = *base;
                for l in 0..L {
                    out[l] = base[l] + a * pick(&k[l]);
                }
                out
            };
            let fx: fn(&(T, T, T)) -> T = |k| k.0;
            let fy: fn(&(T, T, T)) -> T = |k| k.1;
            for stage in table.windows(3).step_by(2) {
                let k1 = rhs(&px, &py, stage[0]);
                let k2 = rhs(&shift(&px, half_dt, &k1, fx), &shift(&py, half_dt, &k1, fy), stage[1]);
                let k3 = rhs(&shift(&px, half_dt, &k2, fx), &shift(&py, half_dt, &k2, fy), stage[1]);
                let k4 = rhs(&shift(&px, dt, &k3, fx), &shift(&py, dt, &k3, fy), stage[2]);
                for l in 0..L {
                    px[l] = px[l] + sixth * (k1[l].0 + two * (k2[l].0 + k3[l].0) + k4[l].0);
                    py[l] = py[l] + sixth * (k1[l].1 + two * (k2[l].1 + k3[l].1) + k4[l].1);
                    act[l] = act[l] + sixth * (k1[l].2 + two * (k2[l].2 + k3[l].2) + k4[l].2);
                }
            }
        }
        (0..points.len())
            .map(|l| {
                if px[l].is_finite() && py[l].is_finite() && act[l].is_finite() {
                    Ok(FlowPoint { x: px[l], y: py[l], action: act[l], jacobian: None })
                } else {
                    Err(LiftError::NonFinite)
                }
            })
            .collect()
    }

    /// Step in path parameter.
    fn step_size(&self) -> T {
        (T::from_usize(self.steps).unwrap() * T::from_usize(self.path.segments.len().max(1)).unwrap()).recip()
    }

    fn rhs(&self, s: &[T; 7], k: usize, m: usize) -> [T; 7] {
        let (x, y) = (s[0], s[1]);
        let j = self.path.jet(x, y, k, self.clock[k][m]);
        let vx = j.gy;
        let vy = -j.gx;
        let half = lit::<T>(0.5);
        let action = half * (x * vy - y * vx) + self.sign * j.value;
        // d/dt J = DX J with DX = [[H_xy, H_yy], [-H_xx, -H_xy]]
        let (a, b, c, d) = (j.hxy, j.hyy, -j.hxx, -j.hxy);
        [vx, vy, action, a * s[3] + b * s[5], a * s[4] + b * s[6], c * s[3] + d * s[5], c * s[4] + d * s[6]]
    }
}

fn axpy<T: Real>(s: &[T; 7], a: T, k: &[T; 7]) -> [T; 7] {
    let mut out = *s;
    for c in 0..7 {
        out[c] = s[c] + a * k[c];
    }
    out
}

/// A flow map with its primitive sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedMap<T> {
    map: FlowMap<T>,
    config: LiftConfig<T>,
    image: Vec<(T, T)>,
    values: Vec<T>,
}

/// Primitive of the time-one map of `h`.
pub fn primitive<T: Real>(h: &PlanarHamiltonian<T>, config: &LiftConfig<T>) -> Result<LiftedMap<T>, LiftError> {
    LiftedMap::from_path(HamiltonianPath::single(h.clone(), T::one()), config)
}

/// `phi . psi` with its primitive computed directly from the concatenated flow.
pub fn compose_lifts<T: Real>(phi: &LiftedMap<T>, psi: &LiftedMap<T>) -> Result<LiftedMap<T>, LiftError> {
    if phi.config != psi.config {
        return Err(LiftError::GridMismatch);
    }
    LiftedMap::from_path(psi.map.path.then(&phi.map.path), &phi.config)
}

/// `sup |H_(phi psi) - (H_psi + H_phi . psi)|` over the grid.
pub fn cocycle_residual<T: Real>(phi: &LiftedMap<T>, psi: &LiftedMap<T>, composed: &LiftedMap<T>) -> Result<T, LiftError> {
    if phi.config != psi.config || composed.config != phi.config {
        return Err(LiftError::GridMismatch);
    }
    // where psi left a grid point in place, H_phi there is already sampled
    let g = phi.config.grid;
    let moved: Vec<usize> = (0..g.len()).filter(|&i| psi.image[i] != g.point(i)).collect();
    let fresh = phi.points_many(&moved.iter().map(|&i| psi.image[i]).collect::<Vec<_>>())?;
    let mut later = phi.values.clone();
    for (i, p) in moved.into_iter().zip(fresh) {
        later[i] = p.action;
    }
    let worst = (0..composed.values.len())
        .map(|i| (composed.values[i] - (psi.values[i] + later[i])).abs())
        .fold(T::zero(), T::max);
    Ok(worst)
}

impl<T: Real> LiftedMap<T> {
    pub fn from_path(path: HamiltonianPath<T>, config: &LiftConfig<T>) -> Result<Self, LiftError> {
        let g = config.grid;
        for (h, _) in path.segments() {
            for t in h.terms() {
                let b = &t.bump;
                if b.cx - b.radius < g.lo || b.cx + b.radius > g.hi || b.cy - b.radius < g.lo || b.cy + b.radius > g.hi {
                    return Err(LiftError::SupportOutsideGrid);
                }
            }
        }
        let map = FlowMap::from_path(path, config.steps, config.sign)?;
        let mut lifted = LiftedMap { map, config: *config, image: Vec::new(), values: Vec::new() };
        let points: Vec<(T, T)> = (0..g.len()).map(|i| g.point(i)).collect();
        let samples = lifted.points_many(&points)?;
        lifted.image = samples.iter().map(|p| (p.x, p.y)).collect();
        lifted.values = samples.iter().map(|p| p.action).collect();
        Ok(lifted)
    }

    /// [`Self::point`] for many points, batching the ones that need a flow.
    fn points_many(&self, points: &[(T, T)]) -> Result<Vec<FlowPoint<T>>, LiftError> {
        let busy: Vec<usize> = (0..points.len())
            .filter(|&i| !self.config.skip_outside || self.map.path.near_support(points[i].0, points[i].1, T::zero()))
            .collect();
        let moved = self.map.integrate_many(&busy.iter().map(|&i| points[i]).collect::<Vec<_>>())?;
        let mut out: Vec<FlowPoint<T>> =
            points.iter().map(|&(x, y)| FlowPoint { x, y, action: T::zero(), jacobian: None }).collect();
        for (i, p) in busy.into_iter().zip(moved) {
            out[i] = p;
        }
        Ok(out)
    }

    fn point(&self, x: T, y: T) -> Result<FlowPoint<T>, LiftError> {
        if self.config.skip_outside && !self.map.path.near_support(x, y, T::zero()) {
            return Ok(FlowPoint { x, y, action: T::zero(), jacobian: None });
        }
        self.map.integrate(x, y, false)
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.config.grid
    }

    pub fn config(&self) -> &LiftConfig<T> {
        &self.config
    }

    pub fn flow_map(&self) -> &FlowMap<T> {
        &self.map
    }

    pub fn path(&self) -> &HamiltonianPath<T> {
        &self.map.path
    }

    /// Sampled primitive, indexed like [`Grid::point`].
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn image(&self) -> &[(T, T)] {
        &self.image
    }

    /// Primitive at an arbitrary point, integrated afresh.
    pub fn primitive_at(&self, x: T, y: T) -> Result<T, LiftError> {
        Ok(self.point(x, y)?.action)
    }

    /// `sup |phi^* theta - theta - dH_phi|` over the grid, with every
    /// derivative taken by central differences of the numeric map.
    pub fn exactness_residual(&self) -> Result<T, LiftError> {
        let g = self.config.grid;
        let h = self.config.fd_step;
        let half = lit::<T>(0.5);
        let two_h = h + h;
        let centres: Vec<usize> = (0..g.len())
            .filter(|&i| {
                let (x, y) = g.point(i);
                self.map.path.near_support(x, y, two_h)
            })
            .collect();
        let stencil: Vec<(T, T)> = centres
            .iter()
            .flat_map(|&i| {
                let (x, y) = g.point(i);
                [(x + h, y), (x - h, y), (x + two_h, y), (x - two_h, y), (x, y + h), (x, y - h), (x, y + two_h), (x, y - two_h)]
            })
            .collect();
        let ends = self.map.integrate_many(&stencil)?;
        // fourth-order central differences
        let (eight, twelve_h) = (lit::<T>(8.0), lit::<T>(12.0) * h);
        let d = |e: &[FlowPoint<T>]| {
            let one = |f: fn(&FlowPoint<T>) -> T| (eight * (f(&e[0]) - f(&e[1])) - (f(&e[2]) - f(&e[3]))) / twelve_h;
            (one(|p| p.x), one(|p| p.y), one(|p| p.action))
        };
        let worst = centres
            .iter()
            .zip(ends.chunks(8))
            .map(|(&i, e)| {
                let (x, y) = g.point(i);
                let (fx_x, fy_x, h_x) = d(&e[..4]);
                let (fx_y, fy_y, h_y) = d(&e[4..]);
                let (cx, cy) = self.image[i];
                let ax = half * (cx * fy_x - cy * fx_x) + half * y - h_x;
                let ay = half * (cx * fy_y - cy * fx_y) - half * x - h_y;
                ax.abs().max(ay.abs())
            })
            .fold(T::zero(), T::max);
        Ok(worst)
    }

    /// Largest `|H_phi|` at grid points farther than `margin` from the support,
    /// integrated without the outside-support shortcut.
    pub fn support_leak(&self, margin: T) -> Result<T, LiftError> {
        let g = self.config.grid;
        let far: Vec<(T, T)> =
            (0..g.len()).map(|i| g.point(i)).filter(|&(x, y)| !self.map.path.near_support(x, y, margin)).collect();
        Ok(self.map.integrate_many(&far)?.iter().map(|p| p.action.abs()).fold(T::zero(), T::max))
    }

    /// Rebuilds `H_phi` by integrating the one-form `phi^* theta - theta`
    /// along every `stride`-th grid row, starting from zero at the left edge,
    /// and returns the largest disagreement with the sampled primitive.
    ///
    /// The form is evaluated from the variational equations and integrated
    /// with adaptive 4-point Gauss-Legendre, since the map can shear a short
    /// stretch of a row very strongly.
    pub fn reconstruction_gap(&self, stride: usize) -> Result<T, LiftError> {
        let g = self.config.grid;
        let stride = stride.max(1);
        let h = g.spacing();
        let tol = lit::<T>(1e-10);
        let rows: Vec<usize> = (0..g.n).step_by(stride).collect();
        let gaps: Result<Vec<T>, LiftError> = rows
            .par_iter()
            .map(|&j| {
                let y = g.coord(j);
                if self.map.path.near_support(g.lo, y, h) {
                    return Err(LiftError::NoFarField);
                }
                let mut acc = T::zero();
                let mut worst = (self.values[j * g.n]).abs();
                for i in 0..g.n - 1 {
                    let (a, b) = (g.coord(i), g.coord(i + 1));
                    if self.map.path.near_support(a, y, h) || self.map.path.near_support(b, y, h) {
                        let whole = self.gauss_row(a, b, y)?;
                        acc = acc + self.adaptive_row(a, b, y, whole, tol, 24)?;
                    }
                    worst = worst.max((acc - self.values[j * g.n + i + 1]).abs());
                }
                Ok(worst)
            })
            .collect();
        Ok(gaps?.into_iter().fold(T::zero(), T::max))
    }

    /// `(phi^* theta - theta)(d/dx)` at `(x, y)`.
    fn row_form(&self, x: T, y: T) -> Result<T, LiftError> {
        let half = lit::<T>(0.5);
        if !self.map.path.near_support(x, y, T::zero()) {
            return Ok(T::zero());
        }
        let p = self.map.integrate(x, y, true)?;
        let jac = p.jacobian.expect("requested");
        Ok(half * (p.x * jac[2] - p.y * jac[0]) + half * y)
    }

    fn gauss_row(&self, a: T, b: T, y: T) -> Result<T, LiftError> {
        const NODES: [(f64, f64); 4] = [
            (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
            (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
            (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
            (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
        ];
        let half = lit::<T>(0.5);
        let (mid, rad) = ((a + b) * half, (b - a) * half);
        let mut sum = T::zero();
        for (node, weight) in NODES {
            sum = sum + lit::<T>(weight) * self.row_form(mid + rad * lit(node), y)?;
        }
        Ok(sum * rad)
    }

    fn adaptive_row(&self, a: T, b: T, y: T, whole: T, tol: T, depth: u32) -> Result<T, LiftError> {
        let mid = (a + b) * lit(0.5);
        let (left, right) = (self.gauss_row(a, mid, y)?, self.gauss_row(mid, b, y)?);
        if depth == 0 || (left + right - whole).abs() <= tol {
            return Ok(left + right);
        }
        let half_tol = tol * lit(0.5);
        Ok(self.adaptive_row(a, mid, y, left, half_tol, depth - 1)? + self.adaptive_row(mid, b, y, right, half_tol, depth - 1)?)
    }
}

/// Observed order of the integrator: `log2(e(N) / e(2N))`, where `e(n)` is
/// the largest endpoint error over `points` against a run with `32 N` steps.
pub fn convergence_order<T: Real>(h: &PlanarHamiltonian<T>, points: &[(T, T)], base_steps: usize) -> Result<T, LiftError> {
    let run = |n: usize| -> Result<Vec<FlowPoint<T>>, LiftError> {
        let m = flow(h, T::one(), n)?;
        points.iter().map(|&(x, y)| m.integrate(x, y, false)).collect()
    };
    let reference = run(32 * base_steps)?;
    let error = |n: usize| -> Result<T, LiftError> {
        let pts = run(n)?;
        Ok(pts.iter().zip(&reference).map(|(p, q)| (p.x - q.x).hypot(p.y - q.y)).fold(T::zero(), T::max))
    };
    Ok((error(base_steps)? / error(2 * base_steps)?).log2())
}

/// Largest change of `|p|` under the flow of a radial Hamiltonian, over `points`.
pub fn radius_drift<T: Real>(map: &FlowMap<T>, points: &[(T, T)]) -> Result<T, LiftError> {
    let mut worst = T::zero();
    for &(x, y) in points {
        let (u, v) = map.apply(x, y)?;
        worst = worst.max((u.hypot(v) - x.hypot(y)).abs());
    }
    Ok(worst)
}

/// A random Hamiltonian with one or two bump terms of low degree, all
/// supported well inside `[-2, 2]^2`.
pub fn random_hamiltonian<R: Rng + ?Sized>(rng: &mut R) -> PlanarHamiltonian<f64> {
    let count = rng.gen_range(1..=2);
    let terms = (0..count)
        .map(|_| {
            let radius = rng.gen_range(0.3..0.8);
            let reach = 1.8 - radius;
            Term {
                coeff: rng.gen_range(-1.0..1.0),
                bump: Bump { radius, cx: rng.gen_range(-reach..reach), cy: rng.gen_range(-reach..reach) },
                px: rng.gen_range(0..=1),
                py: rng.gen_range(0..=1),
                pt: rng.gen_range(0..=1),
            }
        })
        .collect();
    PlanarHamiltonian::new(terms).expect("positive radii")
}
