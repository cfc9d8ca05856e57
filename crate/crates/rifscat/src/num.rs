//! Scalar plumbing shared by the numerical modules.

use std::fmt::{Debug, Display};

use nalgebra as na;
use num_complex::Complex;
use num_traits as nt;

/// Floating point type the engine is generic over.
pub trait Real:
    Copy + Debug + Display + Default + Send + Sync + na::RealField + nt::FromPrimitive + nt::ToPrimitive + 'static
{
    const EPS: f64;
}

impl Real for f32 {
    const EPS: f64 = f32::EPSILON as f64;
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON;
}

pub type Cx<T> = Complex<T>;

/// Converts an f64 literal into the working type.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal out of range")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn abs2<T: Real>(z: Cx<T>) -> T {
    z.re * z.re + z.im * z.im
}

#[inline]
pub fn cabs<T: Real>(z: Cx<T>) -> T {
    abs2(z).sqrt()
}

#[inline]
pub fn pi<T: Real>() -> T {
    T::pi()
}

/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

/// Reduced Planck constant in eV s, only used to report interval widths.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

#[inline]
pub fn c_light<T: Real>() -> T {
    lit(C_LIGHT)
}


/// Unevaluated sum hi + lo carrying about twice the working precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Twofold<T> {
    pub hi: T,
    pub lo: T,
}

impl<T: Real> Twofold<T> {
    pub fn new(x: T) -> Self {
        Self { hi: x, lo: T::zero() }
    }

    fn two_sum(a: T, b: T) -> Self {
        let s = a + b;
        let bb = s - a;
        Self { hi: s, lo: (a - (s - bb)) + (b - bb) }
    }

    fn fast_two_sum(a: T, b: T) -> Self {
        let s = a + b;
        Self { hi: s, lo: b - (s - a) }
    }

    pub fn mul_exact(a: T, b: T) -> Self {
        let p = a * b;
        Self { hi: p, lo: a.mul_add(b, -p) }
    }

    pub fn value(self) -> T {
        self.hi + self.lo
    }

    pub fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let v = Self::fast_two_sum(s.hi, s.lo + t.hi);
        Self::fast_two_sum(v.hi, v.lo + t.lo)
    }

    pub fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let p = Self::mul_exact(self.hi, o.hi);
        let lo = p.lo + (self.hi * o.lo + self.lo * o.hi);
        Self::fast_two_sum(p.hi, lo)
    }

    pub fn scale(self, x: T) -> Self {
        self.mul(Self::new(x))
    }

    pub fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.scale(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.scale(q2));
        let q3 = r.hi / o.hi;
        Self::fast_two_sum(q1, q2).add(Self::new(q3))
    }
}
