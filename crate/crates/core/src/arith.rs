//! Exact integer and prime-field arithmetic on 64-bit moduli.

use crate::error::{Error, Result};

/// A modulus `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        Modulus::new(n)
    }
}

/// `base^exp mod m` by square-and-multiply with 128-bit intermediates.
pub fn mod_pow(base: u64, mut exp: u64, m: Modulus) -> u64 {
    let mut base = base % m.get();
    let mut acc = 1 % m.get();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = m.mul(acc, base);
        }
        base = m.mul(base, base);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` in `1..m`, via the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, m: Modulus) -> Result<u64> {
    let n = m.get() as i128;
    let (mut old_r, mut r) = ((a % m.get()) as i128, n);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { a, m: m.get() });
    }
    Ok(old_s.rem_euclid(n) as u64)
}

// Witness set that is exact for every n < 3.3 * 10^24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test (Miller-Rabin with a fixed witness set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let m = Modulus(n);
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = mod_pow(a, d, m);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = m.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending. Trial division; `n` is small in practice.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `g` generates the multiplicative group of the prime field `GF(q)`.
pub fn is_primitive_root(g: u64, q: u64) -> Result<bool> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let m = Modulus(q);
    let g = g % q;
    if g == 0 {
        return Ok(false);
    }
    Ok(prime_factors(q - 1)
        .into_iter()
        .all(|p| mod_pow(g, (q - 1) / p, m) != 1))
}

/// Smallest positive primitive root of the prime `q`.
pub fn primitive_root(q: u64) -> Result<u64> {
    primitive_roots(q)?.next().ok_or(Error::NotPrime(q))
}

/// All primitive roots of the prime `q`, ascending.
pub fn primitive_roots(q: u64) -> Result<impl Iterator<Item = u64>> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let m = Modulus(q);
    let factors = prime_factors(q - 1);
    Ok((1..q).filter(move |&g| factors.iter().all(|&p| mod_pow(g, (q - 1) / p, m) != 1)))
}

pub fn euler_phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Units of `Z_N`, ascending.
pub fn units(n: Modulus) -> Vec<u64> {
    (1..n.get()).filter(|&r| gcd(r, n.get()) == 1).collect()
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn is_prime_trial(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(19));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(91));
        assert!(is_prime(2));
        assert!(is_prime(18_446_744_073_709_551_557));
        // strong pseudoprime to every base up to 23
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), is_prime_trial(n), "n = {n}");
        }
    }

    #[test]
    fn pow_examples() {
        assert_eq!(mod_pow(3, 6, m(31)), 16);
        assert_eq!(mod_pow(5, 0, m(7)), 1);
        assert_eq!(mod_pow(0, 4, m(7)), 0);
        assert_eq!(mod_pow(u64::MAX - 1, 2, m(u64::MAX)), 1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(7, m(15)), Ok(13));
        assert_eq!(mod_inverse(1, m(9)), Ok(1));
        assert_eq!(
            mod_inverse(4, m(8)),
            Err(Error::NotInvertible { a: 4, m: 8 })
        );
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(31), Ok(3));
        assert_eq!(primitive_root(19), Ok(2));
        assert_eq!(primitive_root(3), Ok(2));
        assert_eq!(primitive_root(2), Ok(1));
        assert_eq!(primitive_root(15), Err(Error::NotPrime(15)));
    }

    #[test]
    fn primitive_root_generates_everything() {
        for q in (3..10_000).filter(|&q| is_prime(q)) {
            let g = primitive_root(q).unwrap();
            let mut seen = vec![false; q as usize];
            let mut x = 1;
            for _ in 0..q - 1 {
                x = x * g % q;
                seen[x as usize] = true;
            }
            assert!(seen[1..].iter().all(|&b| b), "q = {q}, g = {g}");
        }
    }

    #[test]
    fn phi_and_units() {
        assert_eq!(euler_phi(15), 8);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(19), 18);
        assert_eq!(units(m(15)), vec![1, 2, 4, 7, 8, 11, 13, 14]);
        assert_eq!(units(m(2)), vec![1]);
        assert_eq!(units(m(7)), (1..7).collect::<Vec<_>>());
        for n in 2..=3_000u64 {
            assert_eq!(units(m(n)).len() as u64, euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn sqrt() {
        assert_eq!(exact_sqrt(4), Some(2));
        assert_eq!(exact_sqrt(2), None);
        assert_eq!(exact_sqrt(0), Some(0));
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(n in 2u64..1_000_000, a in 1u64..1_000_000) {
            let md = m(n);
            match mod_inverse(a, md) {
                Ok(b) => {
                    prop_assert!(b > 0 && b < n);
                    prop_assert_eq!(md.mul(a % n, b), 1 % n);
                }
                Err(_) => prop_assert_ne!(gcd(a, n), 1),
            }
        }

        #[test]
        fn pow_matches_repeated_multiplication(b in 0u64..1000, e in 0u64..64, n in 2u64..1000) {
            let md = m(n);
            let naive = (0..e).fold(1 % n, |acc, _| acc * (b % n) % n);
            prop_assert_eq!(mod_pow(b, e, md), naive);
        }
    }
}
