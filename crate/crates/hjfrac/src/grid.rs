//! Uniform node-centered grids on axis-aligned boxes (1D and 2D), grid
//! functions, one-sided differences, norms, and CSV snapshots.

use crate::error::{HjError, Result};
use std::io::Write;

/// How the solver treats boundary nodes during time marching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    /// Index arithmetic wraps around (the grid omits the duplicate node).
    Periodic,
    /// Boundary nodes keep their initial values for all time.
    DirichletFrozen,
    /// Boundary nodes are assigned from the exact solution at each level.
    DirichletFromExact,
}

/// Uniform grid specification. `dim` is 1 or 2; the spacing `h` is the same
/// on every axis. `closed` grids include both endpoints; periodic grids omit
/// the right endpoint (node i sits at lo + i h, indices mod n).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    /// Nodes per axis (axis 1 has n[1] = 1 when dim = 1).
    pub n: [usize; 2],
    pub h: f64,
    pub closed: bool,
}

fn check_axis(lo: f64, hi: f64, h: f64) -> Result<usize> {
    if !(hi > lo) {
        return Err(HjError::Config(format!(
            "box must have positive extent, got [{lo}, {hi}]"
        )));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(HjError::Config(format!("grid spacing must be positive, got {h}")));
    }
    let cells_f = (hi - lo) / h;
    let cells = cells_f.round();
    if cells < 1.0 || (cells_f - cells).abs() > 1e-9 * cells.max(1.0) {
        return Err(HjError::Config(format!(
            "box extent {} is not an integer multiple of h = {h}",
            hi - lo
        )));
    }
    Ok(cells as usize)
}

impl GridSpec {
    /// Grid including both endpoints on each axis.
    pub fn new_closed(dim: usize, lo: [f64; 2], hi: [f64; 2], h: f64) -> Result<Self> {
        Self::build(dim, lo, hi, h, true)
    }

    /// Periodic grid: omits the right endpoint on each axis.
    pub fn new_periodic(dim: usize, lo: [f64; 2], hi: [f64; 2], h: f64) -> Result<Self> {
        Self::build(dim, lo, hi, h, false)
    }

    fn build(dim: usize, lo: [f64; 2], hi: [f64; 2], h: f64, closed: bool) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(HjError::Config(format!("dim must be 1 or 2, got {dim}")));
        }
        let mut n = [1usize; 2];
        for ax in 0..dim {
            let cells = check_axis(lo[ax], hi[ax], h)?;
            n[ax] = if closed { cells + 1 } else { cells };
        }
        Ok(Self {
            dim,
            lo,
            hi,
            n,
            h,
            closed,
        })
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major linear index (axis 0 outer, axis 1 inner).
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n[1] + j
    }

    /// Inverse of `index`.
    #[inline]
    pub fn unindex(&self, idx: usize) -> (usize, usize) {
        (idx / self.n[1], idx % self.n[1])
    }

    /// Physical coordinates of node (i, j).
    #[inline]
    pub fn coord(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.lo[0] + i as f64 * self.h,
            if self.dim == 2 {
                self.lo[1] + j as f64 * self.h
            } else {
                0.0
            },
        ]
    }

    /// True when node (i, j) lies on the closed boundary of the box.
    #[inline]
    pub fn on_boundary(&self, i: usize, j: usize) -> bool {
        if !self.closed {
            return false;
        }
        let mut b = i == 0 || i == self.n[0] - 1;
        if self.dim == 2 {
            b = b || j == 0 || j == self.n[1] - 1;
        }
        b
    }
}

/// A scalar field sampled on a grid, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(spec: &GridSpec) -> Self {
        Self {
            spec: spec.clone(),
            values: vec![0.0; spec.len()],
        }
    }

    /// Sample a function of the node coordinates.
    pub fn sample(spec: &GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        let mut values = Vec::with_capacity(spec.len());
        for i in 0..spec.n[0] {
            for j in 0..spec.n[1] {
                let x = spec.coord(i, j);
                values.push(f(&x[..spec.dim]));
            }
        }
        Self {
            spec: spec.clone(),
            values,
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.spec.index(i, j)]
    }

    pub fn has_non_finite(&self) -> bool {
        self.values.iter().any(|v| !v.is_finite())
    }
}

/// Values used past the grid edge when differencing a full grid function.
pub enum BoundaryValues<'a> {
    /// Wrap indices (valid only on periodic grids).
    Periodic,
    /// Evaluate a ghost value at the out-of-grid coordinates.
    Ghost(&'a dyn Fn(&[f64]) -> f64),
}

fn edge_value(
    u: &GridFunction,
    axis: usize,
    i: usize,
    j: usize,
    step: isize,
    bv: &BoundaryValues,
) -> f64 {
    let spec = &u.spec;
    let n_ax = spec.n[axis];
    let pos = if axis == 0 { i as isize } else { j as isize } + step;
    if pos >= 0 && (pos as usize) < n_ax {
        let (ii, jj) = if axis == 0 {
            (pos as usize, j)
        } else {
            (i, pos as usize)
        };
        return u.at(ii, jj);
    }
    match bv {
        BoundaryValues::Periodic => {
            let wrapped = pos.rem_euclid(n_ax as isize) as usize;
            let (ii, jj) = if axis == 0 { (wrapped, j) } else { (i, wrapped) };
            u.at(ii, jj)
        }
        BoundaryValues::Ghost(g) => {
            let mut x = spec.coord(i, j);
            x[axis] += step as f64 * spec.h;
            g(&x[..spec.dim])
        }
    }
}

/// Forward difference (u(x + h e_axis) − u(x)) / h at every node.
pub fn forward_diff(u: &GridFunction, axis: usize, bv: &BoundaryValues) -> GridFunction {
    diff_impl(u, axis, 1, bv)
}

/// Backward difference (u(x) − u(x − h e_axis)) / h at every node.
pub fn backward_diff(u: &GridFunction, axis: usize, bv: &BoundaryValues) -> GridFunction {
    diff_impl(u, axis, -1, bv)
}

fn diff_impl(u: &GridFunction, axis: usize, step: isize, bv: &BoundaryValues) -> GridFunction {
    assert!(axis < u.spec.dim, "axis {axis} out of range");
    let spec = u.spec.clone();
    let mut out = GridFunction::zeros(&spec);
    let h = spec.h;
    for i in 0..spec.n[0] {
        for j in 0..spec.n[1] {
            let here = u.at(i, j);
            let there = edge_value(u, axis, i, j, step, bv);
            let d = if step > 0 {
                (there - here) / h
            } else {
                (here - there) / h
            };
            out.values[spec.index(i, j)] = d;
        }
    }
    out
}

/// Sup norm of the values (assumes finite entries).
pub fn sup_norm(u: &GridFunction) -> f64 {
    u.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
}

/// Sup distance between two fields on the same grid.
pub fn sup_dist(a: &GridFunction, b: &GridFunction) -> f64 {
    assert_eq!(a.values.len(), b.values.len(), "grid size mismatch");
    a.values
        .iter()
        .zip(&b.values)
        .fold(0.0f64, |m, (&x, &y)| m.max((x - y).abs()))
}

/// Write a snapshot as CSV: header `x,u` (1D) or `x,y,u` (2D), one node per
/// row in row-major order, 17 significant digits, LF line endings.
pub fn write_csv<W: Write>(u: &GridFunction, mut w: W) -> std::io::Result<()> {
    let spec = &u.spec;
    if spec.dim == 1 {
        w.write_all(b"x,u\n")?;
        for i in 0..spec.n[0] {
            let x = spec.coord(i, 0)[0];
            writeln!(w, "{:.16e},{:.16e}", x, u.at(i, 0))?;
        }
    } else {
        w.write_all(b"x,y,u\n")?;
        for i in 0..spec.n[0] {
            for j in 0..spec.n[1] {
                let x = spec.coord(i, j);
                writeln!(w, "{:.16e},{:.16e},{:.16e}", x[0], x[1], u.at(i, j))?;
            }
        }
    }
    Ok(())
}
