//! Sampling grids on the disk.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Polar sampling grid: `n_radii` equispaced radii in `(0, max_r]` times
/// `n_angles` equispaced angles, plus optionally the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarGrid {
    pub n_angles: usize,
    pub n_radii: usize,
    pub max_r: f64,
    pub include_origin: bool,
}

impl PolarGrid {
    pub const fn new(n_angles: usize, n_radii: usize, max_r: f64) -> Self {
        PolarGrid { n_angles, n_radii, max_r, include_origin: true }
    }

    /// Default grid for the generator inequality: 64 angles x 32 radii up to 0.995.
    pub const fn condition_ii() -> Self {
        PolarGrid::new(64, 32, 0.995)
    }

    /// Grid for structural residual checks: 32 x 32 up to 0.95.
    pub const fn residual() -> Self {
        PolarGrid::new(32, 32, 0.95)
    }

    /// Grid for proportionality and commutator tests: 32 x 16 up to 0.9.
    pub const fn interior() -> Self {
        PolarGrid::new(32, 16, 0.9)
    }

    pub fn len(&self) -> usize {
        self.n_angles * self.n_radii + usize::from(self.include_origin)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.len());
        if self.include_origin {
            pts.push(Complex64::new(0.0, 0.0));
        }
        for j in 0..self.n_radii {
            let r = self.max_r * (j + 1) as f64 / self.n_radii as f64;
            for k in 0..self.n_angles {
                let theta = 2.0 * PI * k as f64 / self.n_angles as f64;
                pts.push(Complex64::from_polar(r, theta));
            }
        }
        pts
    }
}

/// `n` equispaced points on the circle of radius `r` about `center`.
pub fn circle(center: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| center + Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = PolarGrid::condition_ii();
        let pts = g.points();
        assert_eq!(pts.len(), 64 * 32 + 1);
        assert_eq!(pts[0], Complex64::new(0.0, 0.0));
        let rmax = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((rmax - 0.995).abs() < 1e-15);
    }
}
