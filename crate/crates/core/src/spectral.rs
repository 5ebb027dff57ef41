//! Trigonometric differentiation on the periodic unit cell.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::field::CellGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    S,
    Varphi,
}

/// FFT plans and wavenumbers for one [`CellGrid`].
///
/// Fields may carry a Bloch wavevector `k`: the stored samples are the full
/// `e^{i k.r} u(r)` with `u` periodic, and derivatives act as `(i k + d) u`.
pub struct Spectral {
    grid: CellGrid,
    s_fwd: Arc<dyn Fft<f64>>,
    s_inv: Arc<dyn Fft<f64>>,
    p_fwd: Arc<dyn Fft<f64>>,
    p_inv: Arc<dyn Fft<f64>>,
    wn_s: Vec<f64>,
    wn_p: Vec<f64>,
}

/// Signed integer mode of FFT bin `m` out of `n`; the Nyquist bin maps to `-n/2`.
pub fn signed_mode(m: usize, n: usize) -> i64 {
    if 2 * m >= n {
        m as i64 - n as i64
    } else {
        m as i64
    }
}

fn wavenumbers(n: usize, period: f64) -> Vec<f64> {
    (0..n).map(|m| 2.0 * PI * signed_mode(m, n) as f64 / period).collect()
}

impl Spectral {
    pub fn new(grid: CellGrid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            s_fwd: planner.plan_fft_forward(grid.n_s),
            s_inv: planner.plan_fft_inverse(grid.n_s),
            p_fwd: planner.plan_fft_forward(grid.n_phi),
            p_inv: planner.plan_fft_inverse(grid.n_phi),
            wn_s: wavenumbers(grid.n_s, grid.period_s),
            wn_p: wavenumbers(grid.n_phi, grid.period_varphi),
        }
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    fn bloch_phase(&self, bloch: [f64; 2], i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, bloch[0] * self.grid.s(i) + bloch[1] * self.grid.varphi(j))
    }

    /// Forward 2D DFT (unnormalized), in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.s_fwd, &self.p_fwd);
    }

    /// Inverse 2D DFT including the `1 / (n_s n_phi)` factor, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.s_inv, &self.p_inv);
        let scale = 1.0 / self.grid.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }

    fn transform(&self, data: &mut [Complex64], along_s: &Arc<dyn Fft<f64>>, along_p: &Arc<dyn Fft<f64>>) {
        let (ns, np) = (self.grid.n_s, self.grid.n_phi);
        assert_eq!(data.len(), ns * np);
        for row in data.chunks_exact_mut(np) {
            along_p.process(row);
        }
        let mut col = vec![Complex64::default(); ns];
        for j in 0..np {
            for i in 0..ns {
                col[i] = data[i * np + j];
            }
            along_s.process(&mut col);
            for i in 0..ns {
                data[i * np + j] = col[i];
            }
        }
    }

    /// `order`-th derivative along `axis` of a Bloch field.
    ///
    /// Odd orders drop the Nyquist bin so that real periodic input stays real.
    pub fn derivative(&self, values: &[Complex64], bloch: [f64; 2], axis: Axis, order: u32) -> Vec<Complex64> {
        let (ns, np) = (self.grid.n_s, self.grid.n_phi);
        let mut work: Vec<Complex64> = values.to_vec();
        let shifted = bloch != [0.0, 0.0];
        if shifted {
            for i in 0..ns {
                for j in 0..np {
                    work[i * np + j] *= self.bloch_phase(bloch, i, j).conj();
                }
            }
        }
        self.forward(&mut work);
        let (n, wn, offset) = match axis {
            Axis::S => (ns, &self.wn_s, bloch[0]),
            Axis::Varphi => (np, &self.wn_p, bloch[1]),
        };
        for i in 0..ns {
            for j in 0..np {
                let m = if axis == Axis::S { i } else { j };
                let nyquist = n % 2 == 0 && 2 * m == n;
                let factor = if nyquist && order % 2 == 1 {
                    Complex64::default()
                } else {
                    Complex64::new(0.0, wn[m] + offset).powu(order)
                };
                work[i * np + j] *= factor;
            }
        }
        self.inverse(&mut work);
        if shifted {
            for i in 0..ns {
                for j in 0..np {
                    work[i * np + j] *= self.bloch_phase(bloch, i, j);
                }
            }
        }
        work
    }
}
