//! Number representations for decoder messages.

use std::fmt::Debug;

/// Arithmetic used to store and combine LLRs inside the decoder.
///
/// `add_raw` accumulates without saturation; every value written back to
/// decoder state goes through [`saturate`](Self::saturate).
pub trait LlrArithmetic: Copy + Send + Sync + Debug {
    type Value: Copy + PartialEq + PartialOrd + Debug + Send + Sync;

    fn quantize(&self, llr: f64) -> Self::Value;
    fn to_f64(&self, v: Self::Value) -> f64;
    fn zero(&self) -> Self::Value;
    fn saturate(&self, v: Self::Value) -> Self::Value;
    fn add_raw(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn abs(&self, v: Self::Value) -> Self::Value;
    fn neg(&self, v: Self::Value) -> Self::Value;
    fn is_negative(&self, v: Self::Value) -> bool;
    /// Largest magnitude a saturated value can take.
    fn max_magnitude(&self) -> Self::Value;
}

/// `f64` with an optional symmetric clamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatArith {
    pub clamp: Option<f64>,
}

impl LlrArithmetic for FloatArith {
    type Value = f64;

    fn quantize(&self, llr: f64) -> f64 {
        self.saturate(llr)
    }

    fn to_f64(&self, v: f64) -> f64 {
        v
    }

    fn zero(&self) -> f64 {
        0.0
    }

    #[inline]
    fn saturate(&self, v: f64) -> f64 {
        match self.clamp {
            Some(c) => v.clamp(-c, c),
            None => v,
        }
    }

    #[inline]
    fn add_raw(&self, a: f64, b: f64) -> f64 {
        a + b
    }

    #[inline]
    fn sub(&self, a: f64, b: f64) -> f64 {
        self.saturate(a - b)
    }

    #[inline]
    fn abs(&self, v: f64) -> f64 {
        v.abs()
    }

    #[inline]
    fn neg(&self, v: f64) -> f64 {
        -v
    }

    #[inline]
    fn is_negative(&self, v: f64) -> bool {
        v < 0.0
    }

    fn max_magnitude(&self) -> f64 {
        self.clamp.unwrap_or(f64::INFINITY)
    }
}

/// Signed Q-format integers: `total_bits` including sign, `frac_bits` of
/// fraction, symmetric saturation at `±(2^(total_bits-1) - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedArith {
    total_bits: u32,
    frac_bits: u32,
    limit: i32,
}

impl FixedArith {
    pub const MAX_TOTAL_BITS: u32 = 24;

    /// `None` unless `2 <= total_bits <= 24` and `frac_bits < total_bits`.
    pub fn new(total_bits: u32, frac_bits: u32) -> Option<Self> {
        if !(2..=Self::MAX_TOTAL_BITS).contains(&total_bits) || frac_bits >= total_bits {
            return None;
        }
        Some(Self {
            total_bits,
            frac_bits,
            limit: (1 << (total_bits - 1)) - 1,
        })
    }

    pub fn total_bits(&self) -> u32 {
        self.total_bits
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn step(&self) -> f64 {
        1.0 / f64::from(1u32 << self.frac_bits)
    }
}

impl LlrArithmetic for FixedArith {
    type Value = i32;

    fn quantize(&self, llr: f64) -> i32 {
        let scaled = (llr * f64::from(1u32 << self.frac_bits)).round();
        scaled.clamp(-f64::from(self.limit), f64::from(self.limit)) as i32
    }

    fn to_f64(&self, v: i32) -> f64 {
        f64::from(v) * self.step()
    }

    fn zero(&self) -> i32 {
        0
    }

    #[inline]
    fn saturate(&self, v: i32) -> i32 {
        v.clamp(-self.limit, self.limit)
    }

    #[inline]
    fn add_raw(&self, a: i32, b: i32) -> i32 {
        a.saturating_add(b)
    }

    #[inline]
    fn sub(&self, a: i32, b: i32) -> i32 {
        self.saturate(a.saturating_sub(b))
    }

    #[inline]
    fn abs(&self, v: i32) -> i32 {
        v.saturating_abs()
    }

    #[inline]
    fn neg(&self, v: i32) -> i32 {
        v.saturating_neg()
    }

    #[inline]
    fn is_negative(&self, v: i32) -> bool {
        v < 0
    }

    fn max_magnitude(&self) -> i32 {
        self.limit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q8_4_range() {
        let q = FixedArith::new(8, 4).unwrap();
        assert_eq!(q.max_magnitude(), 127);
        assert_eq!(q.to_f64(127), 7.9375);
        assert_eq!(q.quantize(100.0), 127);
        assert_eq!(q.quantize(-100.0), -127);
        assert_eq!(q.quantize(0.53), 8);
        assert_eq!(q.quantize(-0.53), -8);
        assert_eq!(q.sub(100, -100), 127);
        assert_eq!(q.saturate(q.add_raw(120, 20)), 127);
        assert!(FixedArith::new(8, 8).is_none());
        assert!(FixedArith::new(1, 0).is_none());
        assert!(FixedArith::new(32, 4).is_none());
    }

    #[test]
    fn float_clamp() {
        let f = FloatArith { clamp: Some(8.0) };
        assert_eq!(f.saturate(f.add_raw(7.0, 5.0)), 8.0);
        assert_eq!(f.sub(-7.0, 5.0), -8.0);
        let open = FloatArith { clamp: None };
        assert_eq!(open.sub(-7.0, 5.0), -12.0);
    }
}
