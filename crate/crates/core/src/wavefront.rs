//! Numerical wave front set estimation on sampled 1D and 2D grids.
//!
//! At each grid site the samples are multiplied by a compactly supported smooth bump, Fourier
//! transformed, and the decay of the spectrum is fitted as a power law inside each direction
//! cone. A cone whose fitted exponent stays below `nstar` is flagged as singular.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_WINDOW: usize = 32;
pub const DEFAULT_DIRECTIONS: usize = 16;
pub const DEFAULT_NSTAR: f64 = 4.0;
pub const DEFAULT_SHARPNESS: f64 = 4.0;
const PAD: usize = 4;
const REL_FLOOR: f64 = 1e-13;
pub const DEFAULT_SENSITIVITY: f64 = 1e-5;
const CONE_APERTURE: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WavefrontError {
    #[error("window of {0} samples is too small (minimum 8, power of two)")]
    WindowTooSmall(usize),
    #[error("{0} directions requested; 2D estimation needs an even count of at least 8")]
    BadDirections(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grids differ in shape or spacing")]
    ShapeMismatch,
    #[error("opposite directions {direction} flagged at site {site:?} in both factors")]
    ObstructionPresent { site: Vec<usize>, direction: usize },
}

/// Samples of a distribution on a regular 1D or 2D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDistribution {
    pub shape: Vec<usize>,
    pub samples: Vec<Complex64>,
    pub spacing: f64,
}

/// Header accompanying a little-endian float64 sample file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub dims: usize,
    pub shape: Vec<usize>,
    pub spacing: f64,
}

impl GridDistribution {
    pub fn new(shape: Vec<usize>, samples: Vec<Complex64>, spacing: f64) -> Result<Self, WavefrontError> {
        if shape.is_empty() || shape.len() > 2 {
            return Err(WavefrontError::InvalidGrid(format!("{} dimensions", shape.len())));
        }
        if let Some(n) = shape.iter().find(|n| !n.is_power_of_two()) {
            return Err(WavefrontError::InvalidGrid(format!("side {n} is not a power of two")));
        }
        if samples.len() != shape.iter().product::<usize>() {
            return Err(WavefrontError::InvalidGrid("sample count does not match shape".into()));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(WavefrontError::InvalidGrid(format!("spacing {spacing}")));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WavefrontError::InvalidGrid("non-finite sample".into()));
        }
        Ok(GridDistribution { shape, samples, spacing })
    }

    pub fn real(shape: Vec<usize>, values: &[f64], spacing: f64) -> Result<Self, WavefrontError> {
        Self::new(shape, values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), spacing)
    }

    pub fn from_fn_1d(n: usize, f: impl Fn(usize) -> f64) -> Result<Self, WavefrontError> {
        let v: Vec<f64> = (0..n).map(f).collect();
        Self::real(vec![n], &v, 1.0)
    }

    pub fn from_fn_2d(n: usize, m: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self, WavefrontError> {
        let v: Vec<f64> = (0..n * m).map(|k| f(k / m, k % m)).collect();
        Self::real(vec![n, m], &v, 1.0)
    }

    pub fn dims(&self) -> usize {
        self.shape.len()
    }

    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|z| z.im == 0.0)
    }

    pub fn sites(&self) -> usize {
        self.samples.len()
    }

    pub fn coords(&self, i: usize) -> Vec<usize> {
        match self.shape.as_slice() {
            [_] => vec![i],
            [_, m] => vec![i / m, i % m],
            _ => unreachable!(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn compatible(&self, other: &GridDistribution) -> Result<(), WavefrontError> {
        if self.shape != other.shape || self.spacing != other.spacing {
            return Err(WavefrontError::ShapeMismatch);
        }
        Ok(())
    }

    pub fn pointwise(&self, other: &GridDistribution) -> Result<GridDistribution, WavefrontError> {
        self.compatible(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        Ok(GridDistribution { shape: self.shape.clone(), samples, spacing: self.spacing })
    }

    /// Forward difference along `axis`, with a constant extension past the last sample.
    pub fn difference(&self, axis: usize) -> GridDistribution {
        let m = if self.dims() == 2 { self.shape[1] } else { 1 };
        let (stride, len) = if axis == 0 { (m, self.shape[0]) } else { (1, self.shape[1]) };
        let samples = (0..self.sites())
            .map(|i| {
                let c = self.coords(i)[axis];
                if c + 1 < len {
                    (self.samples[i + stride] - self.samples[i]) / self.spacing
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        GridDistribution { shape: self.shape.clone(), samples, spacing: self.spacing }
    }

    pub fn header(&self) -> GridHeader {
        GridHeader { dims: self.dims(), shape: self.shape.clone(), spacing: self.spacing }
    }

    /// Real parts as little-endian float64.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.samples.iter().flat_map(|z| z.re.to_le_bytes()).collect()
    }

    pub fn from_le_bytes(header: &GridHeader, bytes: &[u8]) -> Result<Self, WavefrontError> {
        if header.dims != header.shape.len() {
            return Err(WavefrontError::InvalidGrid("dims does not match shape".into()));
        }
        if bytes.len() % 8 != 0 {
            return Err(WavefrontError::InvalidGrid("byte count is not a multiple of 8".into()));
        }
        let v: Vec<f64> = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Self::real(header.shape.clone(), &v, header.spacing)
    }
}

/// The bump exp(s(1 − 1/(1 − r²))) on |r| < 1, zeroed below machine epsilon.
pub fn bump(r: f64, sharpness: f64) -> f64 {
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let v = (sharpness * (1.0 - 1.0 / (1.0 - r * r))).exp();
    if v < f64::EPSILON {
        0.0
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WfParams {
    pub window: usize,
    pub directions: usize,
    pub nstar: f64,
    pub sharpness: f64,
    /// Spectral magnitudes below this fraction of sup|u| times the window mass are treated as zero.
    pub sensitivity: f64,
}

impl Default for WfParams {
    fn default() -> Self {
        WfParams {
            window: DEFAULT_WINDOW,
            directions: DEFAULT_DIRECTIONS,
            nstar: DEFAULT_NSTAR,
            sharpness: DEFAULT_SHARPNESS,
            sensitivity: DEFAULT_SENSITIVITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flag {
    pub site: Vec<usize>,
    pub direction: usize,
    pub exponent: f64,
}

/// Flagged (site, direction) pairs and the fitted exponent of every evaluated pair.
///
/// Directions in 1D are 0 (positive frequencies) and 1 (negative). In 2D, direction d is the
/// cone around angle 2πd/n, measured from axis 0 towards axis 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WFReport {
    pub shape: Vec<usize>,
    pub params: WfParams,
    pub directions: usize,
    pub evaluated_sites: usize,
    #[serde(skip)]
    pub exponents: Vec<f64>,
    #[serde(skip)]
    pub flags: BTreeSet<(usize, usize)>,
    #[serde(rename = "flags")]
    pub flag_list: Vec<Flag>,
    pub conic_symmetric: Option<bool>,
}

impl WFReport {
    pub fn flagged(&self, site: usize, d: usize) -> bool {
        self.flags.contains(&(site, d))
    }

    pub fn exponent(&self, site: usize, d: usize) -> f64 {
        self.exponents[site * self.directions + d]
    }

    pub fn flagged_sites(&self) -> BTreeSet<usize> {
        self.flags.iter().map(|&(s, _)| s).collect()
    }

    pub fn directions_at(&self, site: usize) -> BTreeSet<usize> {
        self.flags.range((site, 0)..(site + 1, 0)).map(|&(_, d)| d).collect()
    }

    pub fn opposite(&self, d: usize) -> usize {
        (d + self.directions / 2) % self.directions
    }

    /// Directions within one angular bin of `d`; in 1D the two signs are exact.
    pub fn dilate(&self, d: usize) -> Vec<usize> {
        if self.shape.len() == 1 {
            vec![d]
        } else {
            let n = self.directions;
            vec![(d + n - 1) % n, d, (d + 1) % n]
        }
    }

    /// Spatial slack of inclusion claims, in sites per axis.
    pub fn site_slack(&self) -> usize {
        self.params.window / 8
    }

    /// Sites within the spatial slack of `site`.
    pub fn neighborhood(&self, site: usize) -> Vec<usize> {
        let k = self.site_slack() as isize;
        let within = |c: usize, n: usize, o: isize| {
            let v = c as isize + o;
            (v >= 0 && v < n as isize).then_some(v as usize)
        };
        match self.shape.as_slice() {
            [n] => (-k..=k).filter_map(|o| within(site, *n, o)).collect(),
            [n, m] => {
                let (i, j) = (site / m, site % m);
                let mut out = Vec::new();
                for a in -k..=k {
                    for b in -k..=k {
                        if let (Some(x), Some(y)) = (within(i, *n, a), within(j, *m, b)) {
                            out.push(x * m + y);
                        }
                    }
                }
                out
            }
            _ => unreachable!(),
        }
    }

    /// Flags of `self` not covered by `other` dilated by one angular bin and the site slack.
    pub fn excess_over(&self, other: &WFReport) -> Vec<(usize, usize)> {
        self.flags
            .iter()
            .copied()
            .filter(|&(s, d)| {
                let dirs = other.dilate(d);
                !other.neighborhood(s).into_iter().any(|t| dirs.iter().any(|&e| other.flagged(t, e)))
            })
            .collect()
    }
}

struct Estimator {
    dims: usize,
    radius: usize,
    p: usize,
    ndir: usize,
    shells: Vec<f64>,
    masks: Vec<Vec<Vec<usize>>>,
    weights: Vec<(isize, isize, f64)>,
    fft: Arc<dyn Fft<f64>>,
}

fn freq(i: usize, p: usize) -> f64 {
    let s = if i < p / 2 { i as f64 } else { i as f64 - p as f64 };
    s / PAD as f64
}

impl Estimator {
    fn new(dims: usize, params: &WfParams) -> Result<Self, WavefrontError> {
        let w = params.window;
        if w < 8 || !w.is_power_of_two() {
            return Err(WavefrontError::WindowTooSmall(w));
        }
        let ndir = if dims == 1 { 2 } else { params.directions };
        if dims == 2 && (ndir < 8 || ndir % 2 == 1) {
            return Err(WavefrontError::BadDirections(ndir));
        }
        let radius = w / 2;
        let p = PAD * w;
        let lo = w / 8;
        let hi = if dims == 1 { w / 2 } else { (w as f64 / (2.0 * 2f64.sqrt())).ceil() as usize };
        let shells: Vec<usize> = (lo..hi).collect();
        let mut masks = vec![vec![Vec::new(); shells.len()]; ndir];
        let bw = 2.0 * PI / ndir as f64;
        let cells = if dims == 1 { p } else { p * p };
        for idx in 0..cells {
            let (fx, fy) = if dims == 1 { (freq(idx, p), 0.0) } else { (freq(idx / p, p), freq(idx % p, p)) };
            let rho = fx.hypot(fy);
            let k = rho.floor() as usize;
            if k < lo || k >= hi {
                continue;
            }
            let si = k - lo;
            if dims == 1 {
                masks[if fx > 0.0 { 0 } else { 1 }][si].push(idx);
            } else {
                let ang = fy.atan2(fx);
                for (d, m) in masks.iter_mut().enumerate() {
                    let off = (ang - d as f64 * bw + PI).rem_euclid(2.0 * PI) - PI;
                    if off.abs() <= CONE_APERTURE * bw / 2.0 {
                        m[si].push(idx);
                    }
                }
            }
        }
        let r = radius as isize;
        let mut weights = Vec::new();
        for a in -(r - 1)..r {
            let bs = if dims == 1 { 0..1 } else { -(r - 1)..r };
            for b in bs {
                let rr = ((a * a + b * b) as f64).sqrt() / radius as f64;
                let v = bump(rr, params.sharpness);
                if v > 0.0 {
                    weights.push((a, b, v));
                }
            }
        }
        let fft = FftPlanner::new().plan_fft_forward(p);
        let shells = shells.into_iter().map(|k| k as f64).collect();
        Ok(Estimator { dims, radius, p, ndir, shells, masks, weights, fft })
    }

    fn spectrum(&self, u: &GridDistribution, center: &[usize], buf: &mut [Complex64]) -> f64 {
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let p = self.p as isize;
        let mut mass = 0.0;
        for &(a, b, w) in &self.weights {
            let (src, dst) = if self.dims == 1 {
                ((center[0] as isize + a) as usize, a.rem_euclid(p) as usize)
            } else {
                let i = (center[0] as isize + a) as usize;
                let j = (center[1] as isize + b) as usize;
                (i * u.shape[1] + j, (a.rem_euclid(p) * p + b.rem_euclid(p)) as usize)
            };
            let v = u.samples[src] * w;
            mass += v.norm();
            buf[dst] = v;
        }
        if self.dims == 1 {
            self.fft.process(buf);
        } else {
            let n = self.p;
            for row in buf.chunks_exact_mut(n) {
                self.fft.process(row);
            }
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for c in 0..n {
                for r in 0..n {
                    col[r] = buf[r * n + c];
                }
                self.fft.process(&mut col);
                for r in 0..n {
                    buf[r * n + c] = col[r];
                }
            }
        }
        mass
    }

    fn exponent(&self, buf: &[Complex64], d: usize, floor: f64) -> f64 {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (si, m) in self.masks[d].iter().enumerate() {
            let env = m.iter().map(|&i| buf[i].norm()).fold(0.0, f64::max);
            if m.is_empty() {
                continue;
            }
            if env <= floor {
                return f64::INFINITY;
            }
            xs.push(self.shells[si].ln());
            ys.push(env.ln());
        }
        if xs.len() < 2 {
            return f64::INFINITY;
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        -sxy / sxx
    }
}

/// Estimates the wave front set of `u`.
pub fn wf_estimate(
    u: &GridDistribution,
    window: usize,
    directions: usize,
    nstar: f64,
) -> Result<WFReport, WavefrontError> {
    wf_estimate_with(u, &WfParams { window, directions, nstar, ..WfParams::default() })
}

pub fn wf_estimate_with(u: &GridDistribution, params: &WfParams) -> Result<WFReport, WavefrontError> {
    let est = Estimator::new(u.dims(), params)?;
    if u.shape.iter().any(|&n| n < 2 * est.radius) {
        return Err(WavefrontError::WindowTooSmall(params.window));
    }
    let ndir = est.ndir;
    let mut exponents = vec![f64::NAN; u.sites() * ndir];
    let mut flags = BTreeSet::new();
    let mut flag_list = Vec::new();
    let window_mass: f64 = est.weights.iter().map(|w| w.2).sum();
    let abs_floor = params.sensitivity * u.max_abs() * window_mass;
    let cells = if est.dims == 1 { est.p } else { est.p * est.p };
    let mut buf = vec![Complex64::new(0.0, 0.0); cells];
    let r = est.radius;
    let mut evaluated = 0;
    for site in 0..u.sites() {
        let c = u.coords(site);
        if c.iter().zip(&u.shape).any(|(&x, &n)| x + 1 < r || x + r > n) {
            continue;
        }
        evaluated += 1;
        let mass = est.spectrum(u, &c, &mut buf);
        let floor = (REL_FLOOR * mass).max(abs_floor);
        for d in 0..ndir {
            let e = est.exponent(&buf, d, floor);
            exponents[site * ndir + d] = e;
            if e < params.nstar {
                flags.insert((site, d));
                flag_list.push(Flag { site: c.clone(), direction: d, exponent: e });
            }
        }
    }
    let conic_symmetric = u
        .is_real()
        .then(|| flags.iter().all(|&(s, d)| flags.contains(&(s, (d + ndir / 2) % ndir))));
    Ok(WFReport {
        shape: u.shape.clone(),
        params: *params,
        directions: ndir,
        evaluated_sites: evaluated,
        exponents,
        flags,
        flag_list,
        conic_symmetric,
    })
}

fn shorter_arc(a: usize, b: usize, n: usize) -> Vec<usize> {
    let fwd = (b + n - a) % n;
    if fwd * 2 == n {
        vec![a, b]
    } else if fwd * 2 < n {
        (0..=fwd).map(|k| (a + k) % n).collect()
    } else {
        (0..=n - fwd).map(|k| (a + n - k) % n).collect()
    }
}

/// Directions allowed at a site by the product bound, before dilation.
fn product_bound(wf_u: &WFReport, wf_v: &WFReport, site: usize) -> BTreeSet<usize> {
    let du = wf_u.directions_at(site);
    let dv = wf_v.directions_at(site);
    let mut out: BTreeSet<usize> = du.union(&dv).copied().collect();
    for &a in &du {
        for &b in &dv {
            out.extend(shorter_arc(a, b, wf_u.directions));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductReport {
    #[serde(skip)]
    pub product: GridDistribution,
    pub wf: WFReport,
    pub bound_respected: bool,
    pub violations: Vec<Flag>,
}

fn find_obstruction(wf_u: &WFReport, wf_v: &WFReport) -> Option<(usize, usize)> {
    wf_u.flags.iter().copied().find(|&(s, d)| wf_v.flagged(s, wf_v.opposite(d)))
}

/// Pointwise product with the bound check; refuses factors whose flags cancel at a site.
pub fn multiply_distributions(
    u: &GridDistribution,
    v: &GridDistribution,
    wf_u: &WFReport,
    wf_v: &WFReport,
) -> Result<ProductReport, WavefrontError> {
    if let Some((s, d)) = find_obstruction(wf_u, wf_v) {
        return Err(WavefrontError::ObstructionPresent { site: u.coords(s), direction: d });
    }
    multiply_unchecked(u, v, wf_u, wf_v)
}

/// Pointwise product and bound check without the opposite-direction precondition.
pub fn multiply_unchecked(
    u: &GridDistribution,
    v: &GridDistribution,
    wf_u: &WFReport,
    wf_v: &WFReport,
) -> Result<ProductReport, WavefrontError> {
    let product = u.pointwise(v)?;
    let wf = wf_estimate_with(&product, &wf_u.params)?;
    let mut allowed: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut violations = Vec::new();
    for &(s, d) in &wf.flags {
        let ok = allowed.entry(s).or_insert_with(|| {
            wf_u.neighborhood(s).into_iter().flat_map(|t| product_bound(wf_u, wf_v, t)).collect()
        });
        if !wf.dilate(d).iter().any(|e| ok.contains(e)) {
            violations.push(Flag { site: product.coords(s), direction: d, exponent: wf.exponent(s, d) });
        }
    }
    Ok(ProductReport { product, wf, bound_respected: violations.is_empty(), violations })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothMultReport {
    pub holds: bool,
    pub extra: Vec<Flag>,
    pub flags_v: usize,
    pub flags_product: usize,
}

/// Checks that multiplying by the smooth window `phi` adds no flags to `v`.
pub fn smooth_mult_check(
    phi: &GridDistribution,
    v: &GridDistribution,
    params: &WfParams,
) -> Result<SmoothMultReport, WavefrontError> {
    let wv = wf_estimate_with(v, params)?;
    let wp = wf_estimate_with(&phi.pointwise(v)?, params)?;
    let extra: Vec<Flag> = wp
        .excess_over(&wv)
        .into_iter()
        .map(|(s, d)| Flag { site: v.coords(s), direction: d, exponent: wp.exponent(s, d) })
        .collect();
    Ok(SmoothMultReport { holds: extra.is_empty(), extra, flags_v: wv.flags.len(), flags_product: wp.flags.len() })
}

/// Analytic test grids.
pub mod corpus {
    use super::{bump, GridDistribution};

    pub fn gaussian(n: usize, sigma: f64) -> GridDistribution {
        let c = n as f64 / 2.0;
        GridDistribution::from_fn_1d(n, |i| (-((i as f64 - c) / sigma).powi(2) / 2.0).exp()).unwrap()
    }

    pub fn impulse(n: usize, at: usize) -> GridDistribution {
        GridDistribution::from_fn_1d(n, |i| if i == at { 1.0 } else { 0.0 }).unwrap()
    }

    /// Jump between samples `at − 1` and `at`.
    pub fn heaviside(n: usize, at: usize) -> GridDistribution {
        GridDistribution::from_fn_1d(n, |i| if i >= at { 1.0 } else { 0.0 }).unwrap()
    }

    pub fn kink(n: usize, at: usize) -> GridDistribution {
        GridDistribution::from_fn_1d(n, |i| (i as f64 - at as f64).abs() / n as f64).unwrap()
    }

    pub fn constant(n: usize, value: f64) -> GridDistribution {
        GridDistribution::from_fn_1d(n, |_| value).unwrap()
    }

    /// A smooth bump of the given radius in samples, centred at `center`.
    pub fn window(n: usize, center: f64, radius: f64) -> GridDistribution {
        GridDistribution::from_fn_1d(n, |i| bump((i as f64 - center) / radius, 1.0)).unwrap()
    }

    pub fn diagonal_delta(n: usize) -> GridDistribution {
        GridDistribution::from_fn_2d(n, n, |i, j| if i == j { 1.0 } else { 0.0 }).unwrap()
    }

    pub fn gaussian_2d(n: usize, sigma: f64) -> GridDistribution {
        let c = n as f64 / 2.0;
        GridDistribution::from_fn_2d(n, n, |i, j| {
            let r2 = (i as f64 - c).powi(2) + (j as f64 - c).powi(2);
            (-r2 / (2.0 * sigma * sigma)).exp()
        })
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::corpus::*;
    use super::*;

    fn est(u: &GridDistribution) -> WFReport {
        wf_estimate_with(u, &WfParams::default()).unwrap()
    }

    #[test]
    fn gaussian_is_smooth() {
        let r = est(&gaussian(256, 32.0));
        assert!(r.flags.is_empty());
        assert!(r.evaluated_sites > 200);
    }

    #[test]
    fn impulse_flags_within_radius_both_ways() {
        let r = est(&impulse(256, 128));
        let sites = r.flagged_sites();
        assert!(sites.contains(&128));
        let radius = DEFAULT_WINDOW / 2;
        assert!(sites.iter().all(|&s| s.abs_diff(128) < radius));
        assert!(r.flagged(128, 0) && r.flagged(128, 1));
        assert_eq!(r.conic_symmetric, Some(true));
        for &(s, d) in &r.flags {
            assert!(r.exponent(s, d) < r.params.nstar);
        }
    }

    #[test]
    fn singular_support_is_covered() {
        for (u, sing) in [(heaviside(256, 128), vec![127, 128]), (kink(256, 100), vec![100]), (impulse(256, 60), vec![60])] {
            let r = est(&u);
            for s in sing {
                assert!(r.flagged_sites().contains(&s));
            }
        }
    }

    #[test]
    fn window_size_is_checked() {
        let u = gaussian(256, 32.0);
        assert_eq!(wf_estimate(&u, 4, 16, 4.0).unwrap_err(), WavefrontError::WindowTooSmall(4));
        let d = diagonal_delta(64);
        assert!(matches!(wf_estimate(&d, 16, 4, 4.0), Err(WavefrontError::BadDirections(4))));
    }

    #[test]
    fn diagonal_delta_points_across_the_diagonal() {
        let u = diagonal_delta(64);
        let r = est(&u);
        assert!(!r.flags.is_empty());
        let n = r.directions;
        let target = [3 * n / 8, 7 * n / 8];
        let near = r
            .flags
            .iter()
            .filter(|&&(_, d)| target.iter().any(|&t| d.abs_diff(t) <= 1))
            .count();
        assert!(near as f64 >= 0.9 * r.flags.len() as f64, "{near} of {}", r.flags.len());
        for &(s, d) in &r.flags {
            if target.contains(&d) {
                let c = u.coords(s);
                assert!(c[0].abs_diff(c[1]) < DEFAULT_WINDOW);
            }
        }
        assert_eq!(r.conic_symmetric, Some(true));
        assert!(est(&gaussian_2d(64, 12.0)).flags.is_empty());
    }

    #[test]
    fn products() {
        let g = gaussian(256, 32.0);
        let h = heaviside(256, 128);
        let (wg, wh) = (est(&g), est(&h));
        let p = multiply_distributions(&g, &g, &wg, &wg).unwrap();
        assert!(p.wf.flags.is_empty() && p.bound_respected);
        let p = multiply_distributions(&h, &g, &wh, &wg).unwrap();
        assert!(p.bound_respected);
        assert!(p.wf.excess_over(&wh).is_empty());
        assert!(matches!(multiply_distributions(&h, &h, &wh, &wh), Err(WavefrontError::ObstructionPresent { .. })));
        let p = multiply_unchecked(&h, &h, &wh, &wh).unwrap();
        assert_eq!(p.product, h);
        assert!(p.bound_respected);
        assert_eq!(p.wf.flags, wh.flags);
    }

    #[test]
    fn smooth_multiplication() {
        let params = WfParams::default();
        let imp = impulse(256, 128);
        let one = constant(256, 1.0);
        let rep = smooth_mult_check(&one, &imp, &params).unwrap();
        assert!(rep.holds && rep.flags_product == rep.flags_v);
        let rep = smooth_mult_check(&window(256, 128.0, 40.0), &imp, &params).unwrap();
        assert!(rep.holds && rep.flags_product > 0);
        let phi = window(256, 60.0, 30.0);
        let rep = smooth_mult_check(&phi, &imp, &params).unwrap();
        assert!(rep.holds && rep.flags_product == 0);
        let rep = smooth_mult_check(&window(256, 120.0, 40.0), &heaviside(256, 128), &params).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn derivative_inclusion() {
        for u in [heaviside(256, 128), kink(256, 128), impulse(256, 128), gaussian(256, 32.0)] {
            let wu = est(&u);
            let wd = est(&u.difference(0));
            assert!(wd.excess_over(&wu).is_empty());
        }
    }

    #[test]
    fn estimates_are_deterministic() {
        let u = kink(256, 77);
        let (a, b) = (est(&u), est(&u));
        assert_eq!(a.flags, b.flags);
        assert_eq!(
            a.exponents.iter().map(|e| e.to_bits()).collect::<Vec<_>>(),
            b.exponents.iter().map(|e| e.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn grid_round_trip() {
        let u = kink(64, 20);
        let bytes = u.to_le_bytes();
        let back = GridDistribution::from_le_bytes(&u.header(), &bytes).unwrap();
        assert_eq!(back, u);
        assert!(GridDistribution::real(vec![100], &[0.0; 100], 1.0).is_err());
        assert!(GridDistribution::real(vec![4], &[0.0, f64::NAN, 0.0, 0.0], 1.0).is_err());
    }
}
