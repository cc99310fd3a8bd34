//! Exact arithmetic in prime fields GF(q).
//!
//! Everything downstream (parity-check blocks, repair systems, coefficient
//! tables) is phrased in powers of a designated primitive element `c`, so a
//! prime field is all we need. Elements are stored reduced in `[0, q)` as
//! `u64`; q stays below [`MAX_FIELD`], which leaves plenty of headroom for a
//! single product before reduction.

use thiserror::Error;

/// Upper bound for the prime scan in [`find_field`] and for user-supplied
/// moduli. Desk-scale instances use q < 2^16; the cap keeps primality tests
/// and field searches cheap even on hostile input.
pub const MAX_FIELD: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum {MAX_FIELD}")]
    TooLarge(u64),
    #[error("no prime q with q > {lower} and {divisor} | q-1 found below 2^20")]
    SearchExhausted { lower: u64, divisor: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero base with negative exponent")]
    ZeroBaseNegativeExponent,
    #[error("{c} is not a primitive element of GF({q})")]
    NotPrimitive { q: u64, c: u64 },
}

/// A field element, always reduced to `[0, q)`.
///
/// The wrapper is deliberately thin: matrices and codewords store raw `u64`
/// values for locality, and `Felt` marks the public boundary where reduction
/// is guaranteed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Felt(u64);

impl Felt {
    pub fn value(self) -> u64 {
        self.0
    }
}

/// A prime field GF(q) together with a designated primitive element `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    q: u64,
    c: u64,
}

impl FieldSpec {
    /// Field with the smallest primitive element as generator.
    pub fn new(q: u64) -> Result<Self, GfError> {
        if q > MAX_FIELD {
            return Err(GfError::TooLarge(q));
        }
        if q < 3 || !is_prime(q) {
            return Err(GfError::NotPrime(q));
        }
        let c = smallest_primitive(q);
        Ok(FieldSpec { q, c })
    }

    /// Field with a caller-chosen primitive element; its multiplicative order
    /// is verified to be exactly q-1.
    pub fn with_primitive(q: u64, c: u64) -> Result<Self, GfError> {
        let base = Self::new(q)?;
        if c == 0 || c >= q || !has_full_order(q, c) {
            return Err(GfError::NotPrimitive { q, c });
        }
        Ok(FieldSpec { q: base.q, c })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn primitive(&self) -> Felt {
        Felt(self.c)
    }

    /// Reduce an arbitrary integer into the field.
    pub fn felt(&self, v: u64) -> Felt {
        Felt(v % self.q)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        a * b % self.q
    }

    pub fn inv(&self, a: u64) -> Result<u64, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        // q is prime, so a^(q-2) is the inverse.
        Ok(pow_mod(a, self.q - 2, self.q))
    }

    /// `base^exp` by square-and-multiply; a negative exponent means the
    /// inverse power.
    pub fn pow(&self, base: Felt, exp: i64) -> Result<Felt, GfError> {
        let b = base.0;
        if exp >= 0 {
            return Ok(Felt(pow_mod(b, exp as u64, self.q)));
        }
        if b == 0 {
            return Err(GfError::ZeroBaseNegativeExponent);
        }
        let inv = self.inv(b)?;
        Ok(Felt(pow_mod(inv, exp.unsigned_abs(), self.q)))
    }

    /// `c^exp` for the designated primitive element, with the exponent taken
    /// modulo q-1. This is the workhorse behind every coefficient assignment.
    pub fn cpow(&self, exp: i64) -> u64 {
        let ord = (self.q - 1) as i64;
        let e = exp.rem_euclid(ord) as u64;
        pow_mod(self.c, e, self.q)
    }
}

/// Smallest prime q with `q > lower_bound` and, when given, `divisor | q-1`,
/// paired with its smallest primitive element. Deterministic.
pub fn find_field(lower_bound: u64, divisor: Option<u64>) -> Result<FieldSpec, GfError> {
    assert!(lower_bound >= 2, "lower_bound must be at least 2");
    if let Some(d) = divisor {
        assert!(d >= 2, "divisor must be at least 2");
    }
    let mut q = lower_bound + 1;
    while q <= MAX_FIELD {
        if is_prime(q) && divisor.is_none_or(|d| (q - 1).is_multiple_of(d)) {
            return FieldSpec::new(q);
        }
        q += 1;
    }
    Err(GfError::SearchExhausted {
        lower: lower_bound,
        divisor: divisor.unwrap_or(1),
    })
}

/// Smallest generator of GF(q)^*.
pub fn primitive_element(q: u64) -> Result<Felt, GfError> {
    Ok(FieldSpec::new(q)?.primitive())
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Order of g in GF(q)^* is exactly q-1 iff g^((q-1)/p) != 1 for every prime
/// p dividing q-1.
fn has_full_order(q: u64, g: u64) -> bool {
    prime_factors(q - 1)
        .into_iter()
        .all(|p| pow_mod(g, (q - 1) / p, q) != 1)
}

fn smallest_primitive(q: u64) -> u64 {
    (2..q)
        .find(|&g| has_full_order(q, g))
        .expect("every prime field has a primitive element")
}
