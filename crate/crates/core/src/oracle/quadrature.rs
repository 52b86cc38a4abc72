use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

/// Kronrod estimate and `|K - G|` on `[a, b]` for a vector-valued
/// integrand of fixed length.
fn gk21<F>(f: &F, a: f64, b: f64, dim: usize) -> (Vec<f64>, f64)
where
    F: Fn(f64) -> Vec<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    let centre = f(c);
    for d in 0..dim {
        k[d] = WGK[10] * centre[d];
    }
    for j in 0..10 {
        let dx = h * XGK[j];
        let lo = f(c - dx);
        let hi = f(c + dx);
        for d in 0..dim {
            let s = lo[d] + hi[d];
            k[d] += WGK[j] * s;
            if j % 2 == 1 {
                g[d] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0;
    for d in 0..dim {
        k[d] *= h;
        g[d] *= h;
        err += (k[d] - g[d]).abs();
    }
    (k, err)
}

struct Piece {
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Tolerances and limits for [`integrate_adaptive`].
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_pieces: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_pieces: 4000,
        }
    }
}

/// Globally adaptive Gauss–Kronrod integration of a vector integrand over
/// the partition given by `breaks` (sorted, at least two points). The
/// piece with the largest error estimate is bisected until the summed
/// error falls below `max(abs_tol, rel_tol·|Σ value|)`, measured on the
/// sum of components.
pub fn integrate_adaptive<F>(
    f: F,
    breaks: &[f64],
    dim: usize,
    opts: QuadOptions,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64) -> Vec<f64>,
{
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("quadrature breaks must increase".into()));
    }
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        let (value, err) = gk21(&f, w[0], w[1], dim);
        heap.push(Piece { a: w[0], b: w[1], value, err });
    }
    loop {
        let (total, err) = totals(&heap, dim);
        let scale: f64 = total.iter().map(|v| v.abs()).sum();
        let target = opts.abs_tol.max(opts.rel_tol * scale);
        if err <= target {
            return Ok((total, err));
        }
        if heap.len() >= opts.max_pieces {
            return Err(Error::QuadratureNonconvergence {
                rel_err: if scale > 0.0 { err / scale } else { f64::INFINITY },
                tol: opts.rel_tol,
            });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::QuadratureNonconvergence {
                rel_err: err / scale.max(f64::MIN_POSITIVE),
                tol: opts.rel_tol,
            });
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, err) = gk21(&f, a, b, dim);
            heap.push(Piece { a, b, value, err });
        }
    }
}

fn totals(heap: &BinaryHeap<Piece>, dim: usize) -> (Vec<f64>, f64) {
    // Sum in interval order so the result does not depend on heap layout.
    let mut pieces: Vec<&Piece> = heap.iter().collect();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut total = vec![0.0; dim];
    let mut err = 0.0;
    for p in pieces {
        for (t, v) in total.iter_mut().zip(&p.value) {
            *t += v;
        }
        err += p.err;
    }
    (total, err)
}
