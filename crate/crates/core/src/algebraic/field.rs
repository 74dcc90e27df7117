//! GF(2^64) as polynomials over GF(2) modulo `x^64 + x^4 + x^3 + x + 1`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Sub};

use rand::Rng;

/// An element of GF(2^64); bit `i` is the coefficient of `x^i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Gf64(pub u64);

impl Gf64 {
    pub const ZERO: Gf64 = Gf64(0);
    pub const ONE: Gf64 = Gf64(1);

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Gf64(rng.random())
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Gf64::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(2^64 - 2)`; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(u64::MAX - 1))
    }
}

impl fmt::Debug for Gf64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf64({:#018x})", self.0)
    }
}

/// Carry-less 64x64 -> 128 bit product, four bits of `b` at a time.
fn clmul(a: u64, b: u64) -> u128 {
    let mut table = [0u128; 16];
    table[1] = a as u128;
    for i in 2..16 {
        table[i] = if i % 2 == 0 {
            table[i / 2] << 1
        } else {
            table[i - 1] ^ a as u128
        };
    }
    let mut acc = 0u128;
    for nibble in (0..16).rev() {
        acc = (acc << 4) ^ table[((b >> (4 * nibble)) & 0xf) as usize];
    }
    acc
}

/// Folds the high half back using `x^64 = x^4 + x^3 + x + 1`.
fn reduce(wide: u128) -> u64 {
    let fold = |hi: u128| hi ^ (hi << 1) ^ (hi << 3) ^ (hi << 4);
    let once = fold(wide >> 64);
    let twice = fold(once >> 64);
    (wide as u64) ^ (once as u64) ^ (twice as u64)
}

impl Add for Gf64 {
    type Output = Gf64;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf64) -> Gf64 {
        Gf64(self.0 ^ rhs.0)
    }
}

impl Sub for Gf64 {
    type Output = Gf64;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Gf64) -> Gf64 {
        Gf64(self.0 ^ rhs.0)
    }
}

impl Mul for Gf64 {
    type Output = Gf64;
    fn mul(self, rhs: Gf64) -> Gf64 {
        Gf64(reduce(clmul(self.0, rhs.0)))
    }
}

impl AddAssign for Gf64 {
    fn add_assign(&mut self, rhs: Gf64) {
        *self = *self + rhs;
    }
}

impl MulAssign for Gf64 {
    fn mul_assign(&mut self, rhs: Gf64) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Gf64 {
    fn sum<I: Iterator<Item = Gf64>>(iter: I) -> Gf64 {
        iter.fold(Gf64::ZERO, Add::add)
    }
}

impl std::iter::Product for Gf64 {
    fn product<I: Iterator<Item = Gf64>>(iter: I) -> Gf64 {
        iter.fold(Gf64::ONE, Mul::mul)
    }
}

/// Determinant by Gaussian elimination; consumes the matrix.
pub fn determinant(mut m: Vec<Vec<Gf64>>) -> Gf64 {
    let n = m.len();
    let mut det = Gf64::ONE;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Gf64::ZERO;
        };
        // row swaps flip the sign, which is invisible in characteristic 2
        m.swap(col, pivot);
        let p = m[col][col];
        det *= p;
        let inv = p.inverse().expect("pivot is non-zero");
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let factor = row[col] * inv;
            if factor.is_zero() {
                continue;
            }
            for (entry, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry += factor * p;
            }
        }
    }
    det
}
