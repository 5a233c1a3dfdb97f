//! Coefficient fields.
//!
//! Every correctness-bearing computation runs over [`Scalar`], the exact
//! rationals. [`Fp`] is a small prime field used only to pre-filter
//! candidates in the classification search.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always reduced with a positive denominator.
pub type Scalar = BigRational;

/// Field operations the polynomial engine needs from its coefficients.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    /// Image of a rational, or `None` when the denominator is not invertible.
    fn from_scalar(q: &Scalar) -> Option<Self>;
    /// Split into (is negative, absolute value) for printing.
    fn sign_abs(&self) -> (bool, Self);
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_scalar(q: &Scalar) -> Option<Self> {
        Some(q.clone())
    }
    fn sign_abs(&self) -> (bool, Self) {
        (self.is_negative(), self.abs())
    }
}

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer-valued rational.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Residue class modulo the odd prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn inverse(self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = self.0 as u64;
        let mut exp = P - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            exp >>= 1;
        }
        Some(Fp(acc as u32))
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Coeff for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 + other.0 as u64) % P as u64) as u32)
    }
    fn add_assign(&mut self, other: &Self) {
        *self = Coeff::add(self, other);
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 * other.0 as u64) % P as u64) as u32)
    }
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(P - self.0)
        }
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn from_scalar(q: &Scalar) -> Option<Self> {
        let p = BigInt::from(P);
        let num = q.numer().mod_floor(&p).to_i64()?;
        let den = q.denom().mod_floor(&p).to_i64()?;
        Some(Fp::new(num).mul(&Fp::new(den).inverse()?))
    }
    fn sign_abs(&self) -> (bool, Self) {
        (false, *self)
    }
}

/// Primes accepted by the prime-field pre-filter.
pub const SUPPORTED_PRIMES: &[u32] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 1009, 10007, 65521, 1000003, 2147483647,
];

/// Calls `$body` with the type alias `$f` bound to `Fp<p>` for a runtime
/// prime `p` from [`SUPPORTED_PRIMES`]; evaluates to `None` otherwise.
#[macro_export]
macro_rules! with_prime_field {
    ($p:expr, $f:ident => $body:expr) => {
        $crate::__prime_match!($p, $f, $body; 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
            53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 1009, 10007, 65521, 1000003, 2147483647)
    };
}

#[doc(hidden)]
#[macro_export]
macro_rules! __prime_match {
    ($p:expr, $f:ident, $body:expr; $($q:literal),*) => {
        match $p {
            $($q => {
                #[allow(dead_code)]
                type $f = $crate::scalar::Fp<$q>;
                Some($body)
            })*
            _ => None,
        }
    };
}
