//! Reduction helpers with a fixed summation order.
//!
//! Every reduction that feeds a reported number goes through these so that
//! results do not depend on the rayon thread count.

use num_complex::Complex64;

const BLOCK: usize = 64;

/// Pairwise (tree) sum of `term(i)` for `i` in `0..len`.
pub fn pairwise_sum<F: Fn(usize) -> f64>(len: usize, term: F) -> f64 {
    fn rec<F: Fn(usize) -> f64>(lo: usize, hi: usize, term: &F) -> f64 {
        if hi - lo <= BLOCK {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += term(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            rec(lo, mid, term) + rec(mid, hi, term)
        }
    }
    rec(0, len, &term)
}

pub fn pairwise_sum_complex<F: Fn(usize) -> Complex64>(len: usize, term: F) -> Complex64 {
    fn rec<F: Fn(usize) -> Complex64>(lo: usize, hi: usize, term: &F) -> Complex64 {
        if hi - lo <= BLOCK {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in lo..hi {
                acc += term(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            rec(lo, mid, term) + rec(mid, hi, term)
        }
    }
    rec(0, len, &term)
}

/// 8-point Gauss–Legendre nodes on [−1, 1] (positive half) and weights.
const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Composite 8-point Gauss–Legendre rule over `cells` equal cells of [a, b].
pub fn gauss_legendre_complex<F: Fn(f64) -> Complex64>(
    a: f64,
    b: f64,
    cells: usize,
    f: F,
) -> Complex64 {
    let w = (b - a) / cells as f64;
    pairwise_sum_complex(cells, |c| {
        let mid = a + (c as f64 + 0.5) * w;
        let half = 0.5 * w;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, wt) in &GL8 {
            acc += (f(mid - half * x) + f(mid + half * x)) * wt;
        }
        acc * half
    })
}

pub fn gauss_legendre<F: Fn(f64) -> f64>(a: f64, b: f64, cells: usize, f: F) -> f64 {
    gauss_legendre_complex(a, b, cells, |x| Complex64::new(f(x), 0.0)).re
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Relative spread (max − min) / |mean| of a nonempty sample.
pub fn relative_spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean.abs()
}
