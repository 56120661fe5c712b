//! Cyclotomic difference sets in `Z_N`, multiplier groups and decimation orbits.
//!
//! The multiplier machinery works for any subset of `Z_N`: `r` is a multiplier
//! of `D` when `rD` is a translate of `D`, which is tested by comparing least
//! rotations of the characteristic sequences.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{euler_phi, exact_sqrt, gcd, is_prime, mod_inverse, primitive_root, Modulus};
use crate::cyclotomy::{CyclotomicSystem, HallParameter};
use crate::error::{Error, Result};
use crate::sequence::{BinarySequence, SupportSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Paley,
    #[serde(rename = "twinprime")]
    TwinPrime,
    Hall,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Paley, Family::TwinPrime, Family::Hall];

    pub fn name(self) -> &'static str {
        match self {
            Family::Paley => "paley",
            Family::TwinPrime => "twinprime",
            Family::Hall => "hall",
        }
    }

    /// Number of distinct decimations of the family's sequences.
    pub fn orbit_size(self) -> usize {
        match self {
            Family::Paley | Family::TwinPrime => 2,
            Family::Hall => 6,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paley" => Ok(Family::Paley),
            "twinprime" | "twin-prime" | "twin_prime" | "twin" => Ok(Family::TwinPrime),
            "hall" => Ok(Family::Hall),
            other => Err(Error::Parse(format!(
                "unknown family {other:?} (expected paley, twinprime or hall)"
            ))),
        }
    }
}

/// `(v, k, lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DesignParameters {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
}

impl fmt::Display for DesignParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.v, self.k, self.lambda)
    }
}

/// An admissible member of one of the three families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDescriptor {
    family: Family,
    q: u64,
    hall: Option<(CyclotomicSystem, HallParameter)>,
    params: DesignParameters,
}

impl FamilyDescriptor {
    pub fn new(family: Family, q: u64, alpha: Option<u64>) -> Result<Self> {
        match family {
            Family::Paley => Self::paley(q),
            Family::TwinPrime => Self::twin_prime(q),
            Family::Hall => Self::hall(q, alpha),
        }
    }

    pub fn paley(q: u64) -> Result<Self> {
        check_paley(q)?;
        let v = q as usize;
        Ok(FamilyDescriptor {
            family: Family::Paley,
            q,
            hall: None,
            params: DesignParameters {
                v,
                k: (v - 1) / 2,
                lambda: (v - 3) / 4,
            },
        })
    }

    pub fn twin_prime(q: u64) -> Result<Self> {
        check_twin_prime(q)?;
        let v = (q * (q + 2)) as usize;
        Ok(FamilyDescriptor {
            family: Family::TwinPrime,
            q,
            hall: None,
            params: DesignParameters {
                v,
                k: (v - 1) / 2,
                lambda: (v - 3) / 4,
            },
        })
    }

    pub fn hall(q: u64, alpha: Option<u64>) -> Result<Self> {
        let (system, x) = hall_system(q, alpha)?;
        let v = q as usize;
        Ok(FamilyDescriptor {
            family: Family::Hall,
            q,
            hall: Some((system, x)),
            params: DesignParameters {
                v,
                k: (v - 1) / 2,
                lambda: (v - 3) / 4,
            },
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn period(&self) -> usize {
        self.params.v
    }

    pub fn parameters(&self) -> DesignParameters {
        self.params
    }

    pub fn hall_parameter(&self) -> Option<HallParameter> {
        self.hall.as_ref().map(|(_, x)| *x)
    }

    /// The order-6 classes behind a Hall descriptor.
    pub fn hall_system(&self) -> Option<&CyclotomicSystem> {
        self.hall.as_ref().map(|(s, _)| s)
    }

    pub fn alpha(&self) -> Option<u64> {
        self.hall_system().map(CyclotomicSystem::alpha)
    }

    /// Number of distinct decimations; 1 for the degenerate Paley set `{1}` mod 3.
    pub fn expected_orbit_size(&self) -> usize {
        match (self.family, self.q) {
            (Family::Paley, 3) => 1,
            (family, _) => family.orbit_size(),
        }
    }

    /// The difference set itself.
    pub fn support(&self) -> SupportSet {
        match self.family {
            Family::Paley => paley_set(self.q).expect("validated"),
            Family::TwinPrime => twin_prime_set(self.q).expect("validated"),
            Family::Hall => {
                let (sys, _) = self.hall.as_ref().expect("hall descriptor");
                hall_conjugate(sys, 0)
            }
        }
    }

    /// The conjugates in family order: `D` then the non-residue conjugate for
    /// Paley and twin-prime sets; `D_i = C_i ∪ C_{i+1} ∪ C_{i+3}` for Hall sets.
    pub fn conjugates(&self) -> Vec<SupportSet> {
        match self.family {
            Family::Paley | Family::TwinPrime => {
                let d = self.support();
                let r = self.non_residue_unit();
                vec![d.clone(), d.scale(r)]
            }
            Family::Hall => {
                let (sys, _) = self.hall.as_ref().expect("hall descriptor");
                (0..6).map(|i| hall_conjugate(sys, i)).collect()
            }
        }
    }

    // A unit swapping the two quadratic classes (of the second factor, for twin primes).
    fn non_residue_unit(&self) -> usize {
        let q = self.q as usize;
        match self.family {
            Family::Paley => q - 1,
            _ => {
                let p = q + 2;
                let g = primitive_root(p as u64).expect("q + 2 is prime") as usize;
                // r = 1 mod q, r = g mod p
                let t = (g + p - 1) % p * inverse_mod(q % p, p) % p;
                1 + q * t
            }
        }
    }
}

fn inverse_mod(r: usize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    mod_inverse(r as u64, Modulus::new(n as u64).expect("n >= 2")).expect("unit") as usize
}

fn check_paley(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q % 4 != 3 {
        return Err(Error::BadCongruence {
            q,
            residue: 3,
            modulus: 4,
        });
    }
    Ok(())
}

fn check_twin_prime(q: u64) -> Result<()> {
    if !(is_prime(q) && is_prime(q + 2)) {
        return Err(Error::NotTwinPrime { q });
    }
    Ok(())
}

/// Quadratic residues modulo a prime `q = 3 mod 4`.
pub fn paley_set(q: u64) -> Result<SupportSet> {
    check_paley(q)?;
    let sys = CyclotomicSystem::new(q, 2, None)?;
    SupportSet::new(q as usize, sys.class(0)?.into_iter().map(|z| z as usize))
}

/// `(C_0 x C'_0) ∪ (C_1 x C'_1) ∪ (GF(q) x {0})` in `Z_{q(q+2)}`, with
/// `z` identified with `(z mod q, z mod q+2)`.
pub fn twin_prime_set(q: u64) -> Result<SupportSet> {
    check_twin_prime(q)?;
    let p = q + 2;
    let left = CyclotomicSystem::new(q, 2, None)?;
    let right = CyclotomicSystem::new(p, 2, None)?;
    let n = (q * p) as usize;
    let members = (0..n as u64).filter(|&z| {
        let (a, b) = (z % q, z % p);
        b == 0 || (a != 0 && left.class_of_nonzero(a) == right.class_of_nonzero(b))
    });
    SupportSet::new(n, members.map(|z| z as usize))
}

/// The Hall difference set `C_0 ∪ C_1 ∪ C_3` (order 6) and its parameter `x`.
pub fn hall_set(q: u64, alpha: Option<u64>) -> Result<(SupportSet, HallParameter)> {
    let (sys, x) = hall_system(q, alpha)?;
    Ok((hall_conjugate(&sys, 0), x))
}

/// Order-6 classes for a Hall prime, validated against the closed-form table.
///
/// With no explicit `alpha` the primitive roots are tried in ascending order
/// until one reproduces the table; an explicit `alpha` is used as given.
pub fn hall_system(q: u64, alpha: Option<u64>) -> Result<(CyclotomicSystem, HallParameter)> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let is_hall = q % 6 == 1 && q > 27 && exact_sqrt(q - 27).is_some();
    if !is_hall {
        return Err(Error::NotHallPrime(q));
    }
    if alpha.is_some() {
        let sys = CyclotomicSystem::new(q, 6, alpha)?;
        let x = sys.derive_hall_x()?;
        return Ok((sys, x));
    }
    let mut first_err = None;
    for g in crate::arith::primitive_roots(q)? {
        let sys = CyclotomicSystem::new(q, 6, Some(g))?;
        match sys.derive_hall_x() {
            Ok(x) => return Ok((sys, x)),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or(Error::NotHallPrime(q)))
}

/// `D_i = C_i ∪ C_{i+1} ∪ C_{i+3}` (indices mod 6).
pub fn hall_conjugate(sys: &CyclotomicSystem, i: usize) -> SupportSet {
    let wanted = [i % 6, (i + 1) % 6, (i + 3) % 6];
    let q = sys.q();
    SupportSet::new(
        q as usize,
        (1..q)
            .filter(|&z| wanted.contains(&sys.class_of_nonzero(z)))
            .map(|z| z as usize),
    )
    .expect("residues below q")
}

/// `(N, |D|, lambda)` when every nonzero difference occurs exactly `lambda` times.
pub fn verify_difference_set(d: &SupportSet) -> Option<DesignParameters> {
    if d.is_empty() {
        return None;
    }
    let counts = difference_counts(d);
    let lambda = counts.get(1).copied().unwrap_or(0);
    counts[1..]
        .iter()
        .all(|&c| c == lambda)
        .then_some(DesignParameters {
            v: d.modulus(),
            k: d.len(),
            lambda,
        })
}

/// `counts[g]` = number of ordered pairs `(x, y)` in `D x D` with `x - y = g`.
pub fn difference_counts(d: &SupportSet) -> Vec<usize> {
    let n = d.modulus();
    let k = d.len();
    if k * k <= n * n / 64 {
        let mut counts = vec![0usize; n];
        for &x in d.members() {
            for &y in d.members() {
                counts[(x + n - y) % n] += 1;
            }
        }
        return counts;
    }
    // |D ∩ (D + g)| word by word over a doubled bitmap.
    let words = n.div_ceil(64);
    let mut doubled = vec![0u64; (2 * n).div_ceil(64) + 1];
    let mut base = vec![0u64; words];
    for &x in d.members() {
        base[x / 64] |= 1 << (x % 64);
        for pos in [x, x + n] {
            doubled[pos / 64] |= 1 << (pos % 64);
        }
    }
    let tail_bits = n % 64;
    (0..n)
        .into_par_iter()
        .map(|g| {
            // window bits [n - g, 2n - g) hold D + g
            let start = n - g;
            let (w0, off) = (start / 64, start % 64);
            (0..words)
                .map(|i| {
                    let lo = doubled[w0 + i] >> off;
                    let hi = if off == 0 {
                        0
                    } else {
                        doubled[w0 + i + 1] << (64 - off)
                    };
                    let mut word = (lo | hi) & base[i];
                    if i == words - 1 && tail_bits != 0 {
                        word &= (1u64 << tail_bits) - 1;
                    }
                    word.count_ones() as usize
                })
                .sum()
        })
        .collect()
}

/// The units of `Z_N` (just `{0}` for the trivial ring `Z_1`).
pub fn unit_residues(n: usize) -> Vec<usize> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&r| gcd(r as u64, n as u64) == 1).collect()
}

/// The multipliers of a subset of `Z_N`: units `r` with `rD = D + g` for some `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplierGroup {
    modulus: usize,
    members: Vec<usize>,
}

impl MultiplierGroup {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, r: usize) -> bool {
        self.members.binary_search(&(r % self.modulus)).is_ok()
    }

    /// `phi(N) / |M|`, the number of distinct decimations.
    pub fn index(&self) -> usize {
        euler_phi(self.modulus as u64) as usize / self.order()
    }
}

pub fn multiplier_group(d: &SupportSet) -> MultiplierGroup {
    let n = d.modulus();
    let tester = MultiplierTest::new(d);
    let members = unit_residues(n)
        .into_par_iter()
        .filter(|&r| tester.is_multiplier(r))
        .collect();
    MultiplierGroup {
        modulus: n,
        members,
    }
}

/// Whether `rD` is a translate of `D`, for a unit `r`.
pub fn is_multiplier(d: &SupportSet, r: usize) -> bool {
    MultiplierTest::new(d).is_multiplier(r)
}

struct MultiplierTest<'a> {
    d: &'a SupportSet,
    mask: Vec<bool>,
    sum: u128,
    canonical: std::sync::OnceLock<BinarySequence>,
}

// Above this many candidate translates, compare least rotations instead.
const MAX_TRANSLATE_CANDIDATES: usize = 8;

impl<'a> MultiplierTest<'a> {
    fn new(d: &'a SupportSet) -> Self {
        MultiplierTest {
            d,
            mask: d.mask(),
            sum: d.members().iter().map(|&x| x as u128).sum(),
            canonical: std::sync::OnceLock::new(),
        }
    }

    fn is_multiplier(&self, r: usize) -> bool {
        let n = self.d.modulus();
        let k = self.d.len();
        if k == 0 || k == n {
            return true;
        }
        // rD = D + g forces k*g = sum(rD) - sum(D) (mod n).
        let scaled_sum: u128 = self
            .d
            .members()
            .iter()
            .map(|&x| x as u128 * r as u128 % n as u128)
            .sum();
        let target =
            ((scaled_sum + n as u128 * k as u128 - self.sum % n as u128) % n as u128) as u64;
        let h = gcd(k as u64, n as u64);
        if !target.is_multiple_of(h) {
            return false;
        }
        if h as usize > MAX_TRANSLATE_CANDIDATES {
            let canonical = self
                .canonical
                .get_or_init(|| self.d.characteristic_sequence().canonical_rotation());
            return self
                .d
                .scale(r)
                .characteristic_sequence()
                .canonical_rotation()
                == *canonical;
        }
        let step = n as u64 / h;
        let g0 = if step == 1 {
            0
        } else {
            let unit = (k as u64 / h) % step;
            let inv = mod_inverse(unit, Modulus::new(step).expect("step >= 2"))
                .expect("k/h is a unit mod n/h");
            ((target / h) as u128 * inv as u128 % step as u128) as u64
        };
        (0..h).any(|j| {
            let g = (g0 + j * step) as usize;
            self.d.members().iter().all(|&x| {
                let rx = (x as u128 * r as u128 % n as u128) as usize;
                self.mask[(rx + n - g) % n]
            })
        })
    }
}

/// One coset of the multiplier group: its least representative `r` and the
/// conjugate `r^{-1} D`, the support of the decimation `s[r]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conjugate {
    pub representative: usize,
    pub support: SupportSet,
}

impl Conjugate {
    pub fn sequence(&self) -> BinarySequence {
        self.support.characteristic_sequence()
    }
}

/// Coset decomposition of the units of `Z_N` by the multiplier group of `D`,
/// ordered by least representative (so `r_0 = 1` comes first).
pub fn decimation_orbit(d: &SupportSet) -> Vec<Conjugate> {
    orbit_with_group(d, &multiplier_group(d))
}

pub fn orbit_with_group(d: &SupportSet, m: &MultiplierGroup) -> Vec<Conjugate> {
    let n = d.modulus();
    let mut covered = vec![false; n];
    let mut out = Vec::new();
    for r in unit_residues(n) {
        if covered[r] {
            continue;
        }
        for &g in m.members() {
            covered[(r * g) % n] = true;
        }
        out.push(Conjugate {
            representative: r,
            support: d.scale(inverse_mod(r, n)),
        });
    }
    out
}

/// `(C_0 x C'_0) ∪ (C_1 x C'_1)` as units of `Z_{q(q+2)}`.
pub fn twin_prime_expected_multipliers(q: u64) -> Result<Vec<usize>> {
    check_twin_prime(q)?;
    let p = q + 2;
    let left = CyclotomicSystem::new(q, 2, None)?;
    let right = CyclotomicSystem::new(p, 2, None)?;
    Ok((1..q * p)
        .filter(|&z| {
            let (a, b) = (z % q, z % p);
            a != 0 && b != 0 && left.class_of_nonzero(a) == right.class_of_nonzero(b)
        })
        .map(|z| z as usize)
        .collect())
}

/// Computes the multiplier group of the twin-prime set and checks it against
/// the product-set description.
pub fn twin_prime_multipliers_checked(q: u64) -> Result<MultiplierGroup> {
    let expected = twin_prime_expected_multipliers(q)?;
    let group = multiplier_group(&twin_prime_set(q)?);
    if group.members() != expected.as_slice() {
        return Err(Error::MultiplierMismatch {
            q,
            expected,
            computed: group.members().to_vec(),
        });
    }
    Ok(group)
}
