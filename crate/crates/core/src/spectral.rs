//! Zero-padded N-dimensional FFTs on a [`Grid`].
//!
//! A box field is embedded in the corner of a `(2M)^N` array; a symmetric
//! kernel with offsets `-(M-1)..=(M-1)` is stored wrapped around, with index
//! `M` left at zero. Products of their transforms are then exact linear
//! (non-circular) convolutions restricted to the box.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::fields::Grid;

/// FFT plans and index bookkeeping for one grid.
#[derive(Clone)]
pub struct Spectral {
    grid: Grid,
    padded: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("grid", &self.grid)
            .field("padded", &self.padded)
            .finish()
    }
}

impl Spectral {
    pub fn new(grid: &Grid) -> Self {
        let padded = 2 * grid.points_per_axis();
        let mut planner = FftPlanner::new();
        Self {
            grid: *grid,
            padded,
            forward: planner.plan_fft_forward(padded),
            inverse: planner.plan_fft_inverse(padded),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Padded points per axis, `2M`.
    pub fn padded_size(&self) -> usize {
        self.padded
    }

    /// Total number of padded entries, `(2M)^N`.
    pub fn padded_len(&self) -> usize {
        self.padded.pow(self.grid.n_dim() as u32)
    }

    /// Transform of a box field embedded in the padded array.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(values.len(), self.grid.len());
        let m = self.grid.points_per_axis();
        let mut buf = vec![Complex64::new(0.0, 0.0); self.padded_len()];
        for (row, chunk) in values.chunks(m).enumerate() {
            let base = self.padded_row_offset(row);
            for (k, &v) in chunk.iter().enumerate() {
                buf[base + k] = Complex64::new(v, 0.0);
            }
        }
        self.transform(&mut buf, &self.forward);
        buf
    }

    /// Inverse transform restricted to the box (real part, scaled).
    pub fn inverse(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut spectrum, &self.inverse);
        let m = self.grid.points_per_axis();
        let scale = 1.0 / self.padded_len() as f64;
        let mut out = vec![0.0; self.grid.len()];
        for (row, chunk) in out.chunks_mut(m).enumerate() {
            let base = self.padded_row_offset(row);
            for (k, v) in chunk.iter_mut().enumerate() {
                *v = spectrum[base + k].re * scale;
            }
        }
        out
    }

    /// Real DFT (length `2M`) of a symmetric 1D kernel given on offsets `0..M`.
    pub fn kernel_spectrum(&self, kernel: &[f64]) -> Vec<f64> {
        let m = self.grid.points_per_axis();
        debug_assert_eq!(kernel.len(), m);
        let p = self.padded;
        let mut buf = vec![Complex64::new(0.0, 0.0); p];
        buf[0] = Complex64::new(kernel[0], 0.0);
        for d in 1..m {
            buf[d] = Complex64::new(kernel[d], 0.0);
            buf[p - d] = Complex64::new(kernel[d], 0.0);
        }
        self.forward.process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// Outer product of a 1D spectrum over all axes.
    pub fn expand(&self, spectrum_1d: &[f64]) -> Vec<f64> {
        let n = self.grid.n_dim();
        let p = self.padded;
        let mut out = spectrum_1d.to_vec();
        for _ in 1..n {
            let mut next = Vec::with_capacity(out.len() * p);
            for &a in &out {
                next.extend(spectrum_1d.iter().map(|&b| a * b));
            }
            out = next;
        }
        out
    }

    fn padded_row_offset(&self, row: usize) -> usize {
        // row enumerates the leading N-1 box indices, last one fastest
        let m = self.grid.points_per_axis();
        let mut r = row;
        let mut offset = 0;
        let mut stride = self.padded;
        for _ in 1..self.grid.n_dim() {
            offset += (r % m) * stride;
            r /= m;
            stride *= self.padded;
        }
        offset
    }

    fn transform(&self, buf: &mut Vec<Complex64>, fft: &Arc<dyn Fft<f64>>) {
        let n = self.grid.n_dim();
        let p = self.padded;
        if n == 1 {
            fft.process(buf);
            return;
        }
        let scratch_len = fft.get_inplace_scratch_len();
        for _ in 0..n {
            buf.par_chunks_mut(p).for_each_init(
                || vec![Complex64::new(0.0, 0.0); scratch_len],
                |scratch, line| fft.process_with_scratch(line, scratch),
            );
            *buf = rotate_axes(buf, p);
        }
    }
}

/// Moves the last axis to the front: `new[k][r] = old[r][k]`.
fn rotate_axes(old: &[Complex64], p: usize) -> Vec<Complex64> {
    let rest = old.len() / p;
    let mut new = vec![Complex64::new(0.0, 0.0); old.len()];
    new.par_chunks_mut(rest).enumerate().for_each(|(k, row)| {
        for (r, v) in row.iter_mut().enumerate() {
            *v = old[r * p + k];
        }
    });
    new
}
