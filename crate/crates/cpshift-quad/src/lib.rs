//! Adaptive Gauss–Kronrod (7/15) quadrature over finite and semi-infinite intervals.
//!
//! Integrands may be scalar or vector valued (anything implementing [`QuadValue`]),
//! so several related integrals can share one adaptive subdivision.

use cpshift_core::{Error, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Length scale of the map x = a + s·t/(1−t) used for semi-infinite ranges.
    pub decay_scale: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-30, max_subdivisions: 2000, decay_scale: 1.0 }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_decay_scale(mut self, s: f64) -> Self {
        self.decay_scale = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_subdivisions >= 1 && self.decay_scale > 0.0)
        {
            return Err(Error::InvalidInput(format!("invalid quadrature configuration {self:?}")));
        }
        Ok(())
    }
}

/// Values that can be integrated: a vector space with a max-norm.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
    fn abs(self) -> Self;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn abs(self) -> Self {
        Complex64::new(self.re.abs(), self.im.abs())
    }
}

impl<V: QuadValue, const N: usize> QuadValue for [V; N] {
    fn zero() -> Self {
        [V::zero(); N]
    }
    fn add(self, o: Self) -> Self {
        std::array::from_fn(|i| self[i].add(o[i]))
    }
    fn sub(self, o: Self) -> Self {
        std::array::from_fn(|i| self[i].sub(o[i]))
    }
    fn scale(self, s: f64) -> Self {
        std::array::from_fn(|i| self[i].scale(s))
    }
    fn norm(self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
    fn abs(self) -> Self {
        std::array::from_fn(|i| self[i].abs())
    }
}

/// Integral estimate with its error bound and the number of subintervals used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Piece<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    resabs: f64,
}

impl<V> PartialEq for Piece<V> {
    fn eq(&self, o: &Self) -> bool {
        self.error.total_cmp(&o.error) == Ordering::Equal
    }
}
impl<V> Eq for Piece<V> {}
impl<V> PartialOrd for Piece<V> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<V> Ord for Piece<V> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn gk15<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> Piece<V> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc.scale(WGK[7]);
    let mut gauss = fc.scale(WG[3]);
    let mut resabs = fc.abs().scale(WGK[7]);
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        let s = f1.add(f2);
        kron = kron.add(s.scale(WGK[j]));
        resabs = resabs.add(f1.abs().add(f2.abs()).scale(WGK[j]));
        if j % 2 == 1 {
            gauss = gauss.add(s.scale(WG[j / 2]));
        }
    }
    let value = kron.scale(h);
    let error = kron.sub(gauss).scale(h).norm();
    let resabs = resabs.scale(h.abs()).norm();
    Piece { a, b, value, error, resabs }
}

/// Adaptive integral of `f` over [a, b].
///
/// Stops when the summed error estimate is ≤ max(rel_tol·|value|, abs_tol), or when the
/// remaining error is at the rounding level of Σ∫|f|. Exhausting `max_subdivisions`
/// returns [`Error::NonConvergence`].
pub fn integrate_finite<V, F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidInput(format!("invalid interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: V::zero(), error: 0.0, subdivisions: 0 });
    }
    let first = gk15(&mut f, a, b);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut total_abs = first.resabs;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut count = 1usize;
    let mut frozen_err = 0.0;
    loop {
        let target = (cfg.rel_tol * total.norm()).max(cfg.abs_tol);
        if total_err <= target || total_err <= 50.0 * f64::EPSILON * total_abs {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 1e-14 * worst.a.abs().max(worst.b.abs())
        {
            // interval too narrow to split further; keep its contribution as is
            frozen_err += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if count >= cfg.max_subdivisions {
            heap.push(worst);
            return Err(Error::NonConvergence { estimate: total.norm(), error: total_err });
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        total = total.sub(worst.value).add(left.value).add(right.value);
        total_err += left.error + right.error - worst.error;
        total_abs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        count += 1;
    }
    // recompute sums from the pieces to shed accumulated rounding
    let mut value = V::zero();
    let mut error = frozen_err;
    for p in heap.iter() {
        value = value.add(p.value);
        error += p.error;
    }
    let _ = total;
    Ok(Estimate { value, error, subdivisions: count })
}

/// Adaptive integral of `f` over [a, ∞) through x = a + s·t/(1−t), s = `cfg.decay_scale`.
pub fn integrate_semiinfinite<V, F>(mut f: F, a: f64, cfg: &QuadratureConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::InvalidInput("lower limit must be finite".into()));
    }
    let s = cfg.decay_scale;
    let g = move |t: f64| {
        let one_m = 1.0 - t;
        if one_m <= 0.0 {
            return V::zero();
        }
        let x = a + s * t / one_m;
        let jac = s / (one_m * one_m);
        let fx = f(x);
        if jac.is_finite() && x.is_finite() {
            fx.scale(jac)
        } else {
            V::zero()
        }
    };
    integrate_finite(g, 0.0, 1.0, cfg)
}

/// Sum of adaptive integrals over consecutive breakpoints `pts[0] < pts[1] < …`.
pub fn integrate_pieces<V, F>(mut f: F, pts: &[f64], cfg: &QuadratureConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    let mut acc = Estimate { value: V::zero(), error: 0.0, subdivisions: 0 };
    for w in pts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let e = integrate_finite(&mut f, w[0], w[1], cfg)?;
        acc.value = acc.value.add(e.value);
        acc.error += e.error;
        acc.subdivisions += e.subdivisions;
    }
    Ok(acc)
}
