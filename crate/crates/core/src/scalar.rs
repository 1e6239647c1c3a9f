//! Scalar abstraction shared by the numerical kernels.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Floating point type the kernels are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e(x) = exp(2 pi i x)`, with `x` reduced modulo 1 first so large phases keep full accuracy.
#[inline]
pub fn e<T: Real>(x: T) -> Complex<T> {
    let frac = x - x.round();
    Complex::from_polar(T::one(), T::TAU() * frac)
}

/// Neumaier-compensated sum of complex values in iteration order.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = Complex<T>>>(it: I) -> Complex<T> {
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    for z in it {
        re.add(z.re);
        im.add(z.im);
    }
    Complex::new(re.total(), im.total())
}

#[derive(Default, Clone, Copy, Debug)]
pub(crate) struct Kahan<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Kahan<T> {
    pub(crate) fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> T {
        self.sum + self.comp
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
