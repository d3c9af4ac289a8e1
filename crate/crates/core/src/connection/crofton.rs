use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hyperbolic::{crossing, distance, Sl2};
use crate::metrics::UPoint;
use crate::report::CsvTable;

/// Default margin added to d(x, y) for the sampled range of t.
pub const DEFAULT_MARGIN: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CroftonResult {
    pub d_true: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
    /// half-width of the sampled t range
    pub t_max: f64,
}

impl CroftonResult {
    /// CSV with header `d_true,estimate,stderr,n,seed`.
    pub fn to_csv(results: &[CroftonResult]) -> String {
        let mut table = CsvTable::new(&["d_true", "estimate", "stderr", "n", "seed"]);
        for r in results {
            table.push_raw(vec![
                crate::report::sig(r.d_true),
                crate::report::sig(r.estimate),
                crate::report::sig(r.std_error),
                r.n.to_string(),
                r.seed.to_string(),
            ]);
        }
        table.render()
    }
}

/// Boundary points of the oriented geodesic at fibre point (phi, t) over
/// `base`: the geodesic through the Y-flow image at time t, in its direction.
fn geodesic_of(base: (f64, f64), phi: f64, t: f64) -> (f64, f64) {
    let u = UPoint { x: base.0, y: base.1, phi };
    let g = Sl2::from_point(u).mul(&Sl2::rotation(-FRAC_PI_2)).mul(&Sl2::diag(t)).mul(&Sl2::rotation(FRAC_PI_2));
    g.geodesic_ends()
}

/// Monte Carlo symplectic area of the geodesics crossing the segment [x, y]
/// in one orientation, for the hyperbolic plane.
///
/// The fibre over x is charted by (phi, t) with density cosh t dt dphi; the
/// estimate is twice the hyperbolic length of [x, y].
pub fn crofton_measure(x: (f64, f64), y: (f64, f64), n: usize, seed: u64) -> Result<CroftonResult> {
    crofton_measure_with(x, y, n, seed, DEFAULT_MARGIN)
}

/// As [`crofton_measure`] with t sampled on |t| <= d(x, y) + margin.
pub fn crofton_measure_with(x: (f64, f64), y: (f64, f64), n: usize, seed: u64, margin: f64) -> Result<CroftonResult> {
    if n < 100 {
        return Err(Error::Validation(format!("Crofton needs at least 100 samples, got {n}")));
    }
    if !(x.1 > 0.0 && y.1 > 0.0) {
        return Err(Error::Validation("Crofton points must lie in the upper half-plane".into()));
    }
    if !(margin >= 0.0) {
        return Err(Error::Validation("Crofton margin must be non-negative".into()));
    }
    let d = distance(x, y);
    // every geodesic meeting [x, y] passes within d of x
    let t_max = d + margin;
    let area = TAU * 2.0 * t_max;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for i in 0..n {
        // two u64 draws per sample, so sample i always reads the same words
        rng.set_word_pos(4 * i as u128);
        let phi = TAU * rng.gen::<f64>();
        let t = t_max * (2.0 * rng.gen::<f64>() - 1.0);
        let w = if crossing(geodesic_of(x, phi, t), x, y) == 1 { area * t.cosh() } else { 0.0 };
        sum += w;
        sum2 += w * w;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum2 / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    Ok(CroftonResult { d_true: d, estimate: mean, std_error: (var / nf).sqrt(), n, seed, t_max })
}
