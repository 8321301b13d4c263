//! Closed-form counting bounds, evaluated exactly.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};

/// `binom(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C_d(N) = binom(dN, N) / ((d-1)N + 1)`, an upper bound on the number of
/// trees of `N` `d`-simplices.
pub fn fuss_catalan(d: u64, n: u64) -> BigUint {
    let num = binomial(d * n, n);
    let den = BigUint::from((d.max(1) - 1) * n + 1);
    let (q, r) = num.div_rem(&den);
    debug_assert!(r == BigUint::from(0u32));
    q
}

/// Default rational upper bound for `e`.
pub fn e_upper() -> BigRational {
    BigRational::new(BigInt::from(27_182_818_285u64), BigInt::from(10_000_000_000u64))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Upper bound on the number of simplicial `d`-manifolds with `n` facets
/// admitting a boundary-critical matching with `m` interior critical
/// ridges, with `e` replaced by `e_bound`. For `m = 0` this is the bound
/// `(de)^N · 2^{d(dN - N + 2)}` for manifolds built by adjacent gluings only.
pub fn enumeration_bound(d: u64, n: u64, m: i64, e_bound: &BigRational) -> Result<BigRational> {
    if m < 0 {
        return Err(Error::Precondition(format!("m must be nonnegative, got {m}")));
    }
    if d < 1 || n < 1 {
        return Err(Error::Precondition("the bound needs d ≥ 1 and N ≥ 1".into()));
    }
    let m = m as u64;
    let trees = Pow::pow(int(d) * e_bound, n as u32);
    let two = int(2);
    if m == 0 {
        let exponent = d * ((d - 1) * n + 2);
        return Ok(trees * Pow::pow(two, exponent as u32));
    }
    let glue = BigRational::from_integer(BigInt::from(2u32).pow((d * (d - 1) * n) as u32));
    let ridges = Pow::pow(int((d - 1) * n + 2), (2 * m) as u32);
    let ways = BigRational::from_integer(factorial(m));
    let per = int(1u64 << d) * e_bound * e_bound * BigRational::from_integer(factorial(d)) / int(2 * m * m);
    let per = Pow::pow(per, m as u32);
    let corner = int(4u64.pow(d as u32));
    Ok(trees * glue * ridges * ways * per * corner)
}

/// Smallest integer not below `x`.
pub fn ceiling(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// Approximate base-10 logarithm, for display.
pub fn log10(x: &BigRational) -> f64 {
    let digits = |b: &BigInt| {
        let s = b.magnitude().to_string();
        let lead: f64 = s[..s.len().min(15)].parse().unwrap_or(1.0);
        lead.log10() + (s.len() - s.len().min(15)) as f64
    };
    digits(x.numer()) - digits(x.denom())
}

/// Rough float value, for display.
pub fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fuss_catalan_values() {
        assert_eq!(fuss_catalan(3, 2), BigUint::from(3u32));
        assert_eq!(fuss_catalan(2, 3), BigUint::from(5u32));
        for d in 1..6 {
            assert_eq!(fuss_catalan(d, 1), BigUint::one());
        }
    }

    #[test]
    fn lc_only_bound_for_one_tetrahedron() {
        let e = e_upper();
        let b = enumeration_bound(3, 1, 0, &e).unwrap();
        assert_eq!(b, int(3) * &e * int(4096));
        assert!(enumeration_bound(3, 1, -1, &e).is_err());
    }
}
