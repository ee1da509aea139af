//! Dense univariate polynomials over a pluggable coefficient field.
//!
//! The field is passed as a context value (so a runtime-modulus prime field
//! needs no per-element modulus); elements stay plain data. Exactly two
//! contexts are provided: the rationals with arbitrary precision, and odd
//! prime fields 𝔽_q.

use std::fmt::{Debug, Display};

pub use num::rational::BigRational;
use num::{BigInt, Zero};

/// A field given as a context: element type plus arithmetic.
pub trait FieldCtx {
    type El: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn embed_i64(&self, n: i64) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
    fn is_zero(&self, a: &Self::El) -> bool;
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl FieldCtx for Rationals {
    type El = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(1))
    }

    fn embed_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// The prime field 𝔽_q for an odd prime modulus known at runtime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Construct the field; `None` unless `q` is an odd prime.
    pub fn new(q: u64) -> Option<PrimeField> {
        if q < 3 || q.is_multiple_of(2) {
            return None;
        }
        let mut d = 3u64;
        while d * d <= q {
            if q.is_multiple_of(d) {
                return None;
            }
            d += 2;
        }
        Some(PrimeField { q })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.q;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.q;
            }
            base = base * base % self.q;
            exp >>= 1;
        }
        acc
    }

    /// Euler's criterion: is a nonzero element a square?
    pub fn is_square(&self, a: u64) -> bool {
        debug_assert!(!a.is_multiple_of(self.q), "squareness of zero is undefined");
        self.pow(a, (self.q - 1) / 2) == 1
    }

    /// The smallest non-square of the field.
    pub fn a_nonsquare(&self) -> u64 {
        (2..self.q)
            .find(|&a| !self.is_square(a))
            .expect("every prime field of odd order has a non-square")
    }
}

impl FieldCtx for PrimeField {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn embed_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.q as i64) as u64
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.q
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.q - b % self.q) % self.q
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.q
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if a.is_multiple_of(self.q) {
            None
        } else {
            Some(self.pow(*a, self.q - 2))
        }
    }

    fn is_zero(&self, a: &u64) -> bool {
        a.is_multiple_of(self.q)
    }
}

/// Dense polynomial; `coeffs[k]` is the coefficient of t^k, with no trailing
/// zero (the zero polynomial is the empty vector).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq + Debug> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs<F: FieldCtx<El = E>>(ctx: &F, coeffs: Vec<E>) -> Self {
        let mut p = Poly { coeffs };
        p.trim(ctx);
        p
    }

    pub fn constant<F: FieldCtx<El = E>>(ctx: &F, value: E) -> Self {
        Poly::from_coeffs(ctx, vec![value])
    }

    /// The monomial value·t^k.
    pub fn term<F: FieldCtx<El = E>>(ctx: &F, value: E, k: usize) -> Self {
        if ctx.is_zero(&value) {
            return Poly::zero();
        }
        let mut coeffs = vec![ctx.zero(); k + 1];
        coeffs[k] = value;
        Poly { coeffs }
    }

    fn trim<F: FieldCtx<El = E>>(&mut self, ctx: &F) {
        while self.coeffs.last().map(|c| ctx.is_zero(c)).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// t-adic valuation: the lowest power with a nonzero coefficient; `None`
    /// (infinity) for the zero polynomial.
    pub fn valuation<F: FieldCtx<El = E>>(&self, ctx: &F) -> Option<u32> {
        self.coeffs
            .iter()
            .position(|c| !ctx.is_zero(c))
            .map(|k| k as u32)
    }

    /// The coefficient of t^v where v is the valuation: the residue of the
    /// unit part at t = 0. `None` for the zero polynomial.
    pub fn unit_residue<F: FieldCtx<El = E>>(&self, ctx: &F) -> Option<E> {
        self.valuation(ctx).map(|v| self.coeffs[v as usize].clone())
    }

    pub fn add<F: FieldCtx<El = E>>(&self, ctx: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(|| ctx.zero());
                let b = other.coeffs.get(k).cloned().unwrap_or_else(|| ctx.zero());
                ctx.add(&a, &b)
            })
            .collect();
        Poly::from_coeffs(ctx, coeffs)
    }

    pub fn sub<F: FieldCtx<El = E>>(&self, ctx: &F, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn neg<F: FieldCtx<El = E>>(&self, ctx: &F) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| ctx.neg(c)).collect(),
        }
    }

    pub fn mul<F: FieldCtx<El = E>>(&self, ctx: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(&coeffs[i + j], &ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(ctx, coeffs)
    }

    pub fn scale<F: FieldCtx<El = E>>(&self, ctx: &F, s: &E) -> Self {
        let coeffs = self.coeffs.iter().map(|c| ctx.mul(c, s)).collect();
        Poly::from_coeffs(ctx, coeffs)
    }

    pub fn scale_i64<F: FieldCtx<El = E>>(&self, ctx: &F, n: i64) -> Self {
        self.scale(ctx, &ctx.embed_i64(n))
    }

    /// Small-exponent power.
    pub fn pow<F: FieldCtx<El = E>>(&self, ctx: &F, k: u32) -> Self {
        let mut acc = Poly::constant(ctx, ctx.one());
        for _ in 0..k {
            acc = acc.mul(ctx, self);
        }
        acc
    }

    /// Exact division by t^k; panics when the valuation is smaller.
    pub fn div_t_pow<F: FieldCtx<El = E>>(&self, ctx: &F, k: u32) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let v = self.valuation(ctx).expect("nonzero polynomial");
        assert!(v >= k, "division by t^{k} needs valuation >= {k}, got {v}");
        Poly::from_coeffs(ctx, self.coeffs[k as usize..].to_vec())
    }

    /// Human-readable form like `-64*t^3 - 432*t^6`.
    pub fn display(&self, var: &str) -> String
    where
        E: Display,
    {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            let s = c.to_string();
            if s == "0" {
                continue;
            }
            let (sign, magnitude) = match s.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", s),
            };
            if first {
                if sign == "-" {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let power = match k {
                0 => String::new(),
                1 => format!("*{var}"),
                _ => format!("*{var}^{k}"),
            };
            if power.is_empty() {
                out.push_str(&magnitude);
            } else if magnitude == "1" {
                out.push_str(&power[1..]);
            } else {
                out.push_str(&magnitude);
                out.push_str(&power);
            }
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites_and_finds_nonsquares() {
        assert!(PrimeField::new(4).is_none());
        assert!(PrimeField::new(9).is_none());
        let f5 = PrimeField::new(5).unwrap();
        // Squares mod 5 are {1, 4}.
        assert!(f5.is_square(4));
        assert!(!f5.is_square(2));
        assert_eq!(f5.a_nonsquare(), 2);
        let f13 = PrimeField::new(13).unwrap();
        assert_eq!((1..13).filter(|&a| f13.is_square(a)).count(), 6);
    }

    #[test]
    fn rational_polys_multiply_and_shift() {
        let q = Rationals;
        // (1 + t)·(1 − t) = 1 − t².
        let p = Poly::from_coeffs(&q, vec![q.one(), q.one()]);
        let m = Poly::from_coeffs(&q, vec![q.one(), q.embed_i64(-1)]);
        let prod = p.mul(&q, &m);
        assert_eq!(
            prod,
            Poly::from_coeffs(&q, vec![q.one(), q.zero(), q.embed_i64(-1)])
        );
        let t3 = Poly::term(&q, q.embed_i64(7), 3);
        assert_eq!(t3.valuation(&q), Some(3));
        assert_eq!(t3.div_t_pow(&q, 2), Poly::term(&q, q.embed_i64(7), 1));
        assert_eq!(Poly::<BigRational>::zero().valuation(&q), None);
    }

    #[test]
    fn display_is_sign_aware() {
        let q = Rationals;
        let p = Poly::from_coeffs(
            &q,
            vec![q.zero(), q.zero(), q.zero(), q.embed_i64(-64), q.zero(), q.zero(), q.embed_i64(-432)],
        );
        assert_eq!(p.display("t"), "-64*t^3 - 432*t^6");
        let one_t = Poly::from_coeffs(&q, vec![q.zero(), q.one()]);
        assert_eq!(one_t.display("t"), "t");
    }
}
