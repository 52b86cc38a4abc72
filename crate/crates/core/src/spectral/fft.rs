//! Three-dimensional complex FFT assembled from one-dimensional line
//! transforms. Every line is transformed independently, so the result is
//! bit-identical regardless of the number of worker threads.

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::SpectralGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    /// `f̂_k = N^{-1} Σ_x f(x) e^{-2πi k·x/L}`
    Forward,
    /// `f(x) = Σ_k f̂_k e^{2πi k·x/L}`
    Inverse,
}

pub(crate) fn fft3(grid: &SpectralGrid, data: &mut [Complex64], dir: Direction) {
    let n = grid.n();
    assert_eq!(data.len(), n * n * n);
    let plan = match dir {
        Direction::Forward => grid.fft_forward.clone(),
        Direction::Inverse => grid.fft_inverse.clone(),
    };

    // contiguous axis
    data.par_chunks_mut(n).for_each(|line| plan.process(line));

    // strided axes: gather into lines, transform, scatter back
    let mut scratch = vec![Complex64::new(0.0, 0.0); data.len()];
    for stride in [n, n * n] {
        let src: &[Complex64] = data;
        scratch
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(line_id, line)| {
                let base = line_base(line_id, stride, n);
                for (m, v) in line.iter_mut().enumerate() {
                    *v = src[base + m * stride];
                }
                plan.process(line);
            });
        let lines: &[Complex64] = &scratch;
        data.par_chunks_mut(n).enumerate().for_each(|(chunk_id, chunk)| {
            // chunk holds flat indices chunk_id*n .. chunk_id*n+n
            for (off, v) in chunk.iter_mut().enumerate() {
                let flat = chunk_id * n + off;
                let (line_id, m) = line_of(flat, stride, n);
                *v = lines[line_id * n + m];
            }
        });
    }

    if dir == Direction::Forward {
        let scale = 1.0 / (n * n * n) as f64;
        data.par_iter_mut().for_each(|v| *v *= scale);
    }
}

/// First flat index of strided line `line_id`.
#[inline]
fn line_base(line_id: usize, stride: usize, n: usize) -> usize {
    // lines are enumerated by the flat index with the strided coordinate removed
    let outer = line_id / stride;
    let inner = line_id % stride;
    outer * stride * n + inner
}

#[inline]
fn line_of(flat: usize, stride: usize, n: usize) -> (usize, usize) {
    let outer = flat / (stride * n);
    let rem = flat % (stride * n);
    let m = rem / stride;
    let inner = rem % stride;
    (outer * stride + inner, m)
}
