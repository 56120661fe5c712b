//! Periodic binary sequences, their supports, and periodic correlation.
//!
//! Correlation follows the orientation
//! `C_{s,t}(w) = sum_i (-1)^(s_i - t_{i+w})`, i.e. `s` against `t` shifted
//! left by `w`. With supports `B` and `C` of equal size this is
//! `N - 4(|B| - d_{B,C}(w))` where `d_{B,C}(w) = |(B + w) ∩ C|`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::gcd;
use crate::error::{Error, Result};

/// A subset of `Z_N`, stored as strictly ascending residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportSet {
    modulus: usize,
    members: Vec<usize>,
}

impl SupportSet {
    /// Members must lie in `0..modulus`; duplicates are dropped and the
    /// result is sorted.
    pub fn new(modulus: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::EmptySequence);
        }
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m >= modulus) {
            return Err(Error::Parse(format!(
                "residue {bad} out of range for N={modulus}"
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(SupportSet { modulus, members })
    }

    pub fn empty(modulus: usize) -> Result<Self> {
        SupportSet::new(modulus, [])
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, z: usize) -> bool {
        self.members.binary_search(&(z % self.modulus)).is_ok()
    }

    pub(crate) fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.modulus];
        for &m in &self.members {
            mask[m] = true;
        }
        mask
    }

    /// `rD = { r*z mod N }`.
    pub fn scale(&self, r: usize) -> SupportSet {
        let n = self.modulus;
        let r = r % n;
        let mut members: Vec<usize> = self
            .members
            .iter()
            .map(|&z| ((z as u128 * r as u128) % n as u128) as usize)
            .collect();
        members.sort_unstable();
        members.dedup();
        SupportSet {
            modulus: n,
            members,
        }
    }

    /// `D + g`.
    pub fn translate(&self, g: usize) -> SupportSet {
        let n = self.modulus;
        let mut members: Vec<usize> = self.members.iter().map(|&z| (z + g % n) % n).collect();
        members.sort_unstable();
        SupportSet {
            modulus: n,
            members,
        }
    }

    pub fn characteristic_sequence(&self) -> BinarySequence {
        BinarySequence { bits: self.mask() }
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}:", self.modulus)?;
        for (k, m) in self.members.iter().enumerate() {
            let sep = if k == 0 { " " } else { "," };
            write!(f, "{sep}{m}")?;
        }
        Ok(())
    }
}

impl FromStr for SupportSet {
    type Err = Error;

    /// Parses `"N=15: 0,1,2,4,5,8,10"`. Members must be strictly ascending.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let rest = text
            .strip_prefix("N=")
            .ok_or_else(|| Error::Parse(format!("expected leading \"N=\" in {text:?}")))?;
        let (n, list) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected ':' after the modulus in {text:?}")))?;
        let modulus: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus {:?}", n.trim())))?;
        let mut members = Vec::new();
        if !list.trim().is_empty() {
            for item in list.split(',') {
                let z: usize = item
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue {:?}", item.trim())))?;
                if members.last().is_some_and(|&prev| prev >= z) {
                    return Err(Error::Parse(format!(
                        "residues must be strictly ascending ({z} after {})",
                        members.last().unwrap()
                    )));
                }
                members.push(z);
            }
        }
        SupportSet::new(modulus, members)
    }
}

/// A binary sequence of period `N >= 1`, indexed cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinarySequence {
    bits: Vec<bool>,
}

impl BinarySequence {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(BinarySequence { bits })
    }

    /// From `0`/`1` bytes; anything nonzero counts as 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        BinarySequence::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i % self.bits.len()]
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn support(&self) -> SupportSet {
        SupportSet {
            modulus: self.period(),
            members: (0..self.period()).filter(|&i| self.bits[i]).collect(),
        }
    }

    /// `T^k s`: bit `i` of the result is bit `i + k` of `self`.
    pub fn shift(&self, k: i64) -> BinarySequence {
        let n = self.period();
        let k = k.rem_euclid(n as i64) as usize;
        let mut bits = Vec::with_capacity(n);
        bits.extend_from_slice(&self.bits[k..]);
        bits.extend_from_slice(&self.bits[..k]);
        BinarySequence { bits }
    }

    /// The `r`-decimation: bit `i` of the result is bit `r*i mod N` of `self`.
    pub fn decimate(&self, r: usize) -> Result<BinarySequence> {
        let n = self.period();
        if gcd(r as u64, n as u64) != 1 {
            return Err(Error::NotCoprime {
                r: r as u64,
                n: n as u64,
            });
        }
        let r = r % n;
        let mut idx = 0usize;
        let bits = (0..n)
            .map(|_| {
                let b = self.bits[idx];
                idx += r;
                if idx >= n {
                    idx -= n;
                }
                b
            })
            .collect();
        Ok(BinarySequence { bits })
    }

    /// Offset of the lexicographically least rotation (with `false < true`).
    pub fn least_rotation(&self) -> usize {
        let s = &self.bits;
        let n = s.len();
        let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
        while i < n && j < n && k < n {
            let a = s[(i + k) % n];
            let b = s[(j + k) % n];
            if a == b {
                k += 1;
                continue;
            }
            if a & !b {
                i += k + 1;
            } else {
                j += k + 1;
            }
            if i == j {
                j += 1;
            }
            k = 0;
        }
        i.min(j)
    }

    /// The least rotation itself; equal for two sequences iff they are phases
    /// of one another.
    pub fn canonical_rotation(&self) -> BinarySequence {
        self.shift(self.least_rotation() as i64)
    }

    /// Smallest `p >= 1` with `T^p s = s`; always divides `N`.
    pub fn minimal_period(&self) -> usize {
        let n = self.period();
        (1..=n)
            .filter(|p| n.is_multiple_of(*p))
            .find(|&p| (0..n).all(|i| self.bits[i] == self.bits[(i + p) % n]))
            .unwrap_or(n)
    }

    /// Smallest `y >= 0` with `T^y self = other`, if any.
    pub fn phase_equivalent(&self, other: &BinarySequence) -> Result<Option<usize>> {
        check_periods(self, other)?;
        let (rs, rt) = (self.least_rotation(), other.least_rotation());
        let n = self.period();
        let same = (0..n).all(|i| self.bits[(rs + i) % n] == other.bits[(rt + i) % n]);
        if !same {
            return Ok(None);
        }
        let y = (rs + n - rt) % n;
        Ok(Some(y % self.minimal_period()))
    }

    /// Agreement count minus disagreement count of `self` against `other` shifted by `w`.
    pub fn cross_correlation(&self, other: &BinarySequence, w: i64) -> Result<i64> {
        check_periods(self, other)?;
        Ok(self.correlate_unchecked(other, w.rem_euclid(self.period() as i64) as usize))
    }

    fn correlate_unchecked(&self, other: &BinarySequence, w: usize) -> i64 {
        let n = self.period();
        let (head, tail) = other.bits.split_at(w);
        let agree = self
            .bits
            .iter()
            .zip(tail.iter().chain(head))
            .filter(|(a, b)| a == b)
            .count() as i64;
        2 * agree - n as i64
    }

    pub fn autocorrelation(&self, w: i64) -> i64 {
        self.correlate_unchecked(self, w.rem_euclid(self.period() as i64) as usize)
    }

    /// `C_{s,t}(w)` for every shift `w`.
    pub fn correlation_spectrum(&self, other: &BinarySequence) -> Result<CorrelationSpectrum> {
        check_periods(self, other)?;
        let n = self.period();
        let values: Vec<i64> = if n < PAR_THRESHOLD {
            (0..n).map(|w| self.correlate_unchecked(other, w)).collect()
        } else {
            (0..n)
                .into_par_iter()
                .map(|w| self.correlate_unchecked(other, w))
                .collect()
        };
        Ok(CorrelationSpectrum::from_values(values))
    }

    pub fn autocorrelation_spectrum(&self) -> CorrelationSpectrum {
        self.correlation_spectrum(self)
            .expect("a sequence has its own period")
    }

    /// Autocorrelation `-1` at every nonzero shift. Vacuously true for `N = 1`.
    pub fn is_perfect(&self) -> bool {
        let n = self.period();
        if n < PAR_THRESHOLD {
            return (1..n).all(|w| self.correlate_unchecked(self, w) == -1);
        }
        (1..n)
            .into_par_iter()
            .all(|w| self.correlate_unchecked(self, w) == -1)
    }
}

// Below this period a spectrum is cheaper than a thread hand-off.
const PAR_THRESHOLD: usize = 512;

fn check_periods(a: &BinarySequence, b: &BinarySequence) -> Result<()> {
    if a.period() != b.period() {
        return Err(Error::PeriodMismatch {
            left: a.period(),
            right: b.period(),
        });
    }
    Ok(())
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl FromStr for BinarySequence {
    type Err = Error;

    /// Parses a string of `0`/`1` characters, index 0 leftmost.
    fn from_str(text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "invalid character {other:?} at position {i} in bitstring"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        BinarySequence::new(bits)
    }
}

impl Serialize for BinarySequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Serialize for SupportSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `d_{B,C}(w) = |(B + w) ∩ C|`.
pub fn difference_function(b: &SupportSet, c: &SupportSet, w: i64) -> Result<usize> {
    check_moduli(b, c)?;
    let n = b.modulus();
    let w = w.rem_euclid(n as i64) as usize;
    let mask = c.mask();
    Ok(b.members().iter().filter(|&&z| mask[(z + w) % n]).count())
}

/// `N - 4(|B| - d_{B,C}(w))`, the correlation of the characteristic sequences
/// computed from the supports. Requires `|B| = |C|`.
pub fn correlation_from_difference(b: &SupportSet, c: &SupportSet, w: i64) -> Result<i64> {
    check_moduli(b, c)?;
    if b.len() != c.len() {
        return Err(Error::WeightMismatch {
            left: b.len(),
            right: c.len(),
        });
    }
    let d = difference_function(b, c, w)? as i64;
    Ok(b.modulus() as i64 - 4 * (b.len() as i64 - d))
}

fn check_moduli(a: &SupportSet, b: &SupportSet) -> Result<()> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch {
            left: a.modulus(),
            right: b.modulus(),
        });
    }
    Ok(())
}

/// Per-shift correlation values and their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationSpectrum {
    values: Vec<i64>,
    histogram: BTreeMap<i64, usize>,
}

impl CorrelationSpectrum {
    pub fn from_values(values: Vec<i64>) -> Self {
        let mut histogram = BTreeMap::new();
        for &v in &values {
            *histogram.entry(v).or_insert(0) += 1;
        }
        CorrelationSpectrum { values, histogram }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, w: usize) -> i64 {
        self.values[w % self.values.len()]
    }

    /// Value -> multiplicity, ascending by value.
    pub fn histogram(&self) -> &BTreeMap<i64, usize> {
        &self.histogram
    }

    pub fn distinct_values(&self) -> Vec<i64> {
        self.histogram.keys().copied().collect()
    }
}

#[derive(Serialize)]
struct HistogramEntry {
    count: usize,
    value: i64,
}

pub(crate) fn histogram_entries(h: &BTreeMap<i64, usize>) -> impl Serialize + '_ {
    h.iter()
        .map(|(&value, &count)| HistogramEntry { count, value })
        .collect::<Vec<_>>()
}

impl Serialize for CorrelationSpectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("CorrelationSpectrum", 2)?;
        st.serialize_field("histogram", &histogram_entries(&self.histogram))?;
        st.serialize_field("values", &self.values)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PALEY19: &str = "0100111101010000110";
    const PALEY19_DEC2: &str = "0011000010101111001";
    const TWIN15: &str = "111011001010000";
    const TWIN15_DEC7: &str = "100001010011011";

    fn seq(s: &str) -> BinarySequence {
        s.parse().unwrap()
    }

    #[test]
    fn characteristic_sequence_examples() {
        let d = SupportSet::new(19, [1, 4, 5, 6, 7, 9, 11, 16, 17]).unwrap();
        assert_eq!(d.characteristic_sequence().to_string(), PALEY19);
        assert_eq!(
            SupportSet::empty(5)
                .unwrap()
                .characteristic_sequence()
                .to_string(),
            "00000"
        );
        assert_eq!(
            SupportSet::new(3, 0..3)
                .unwrap()
                .characteristic_sequence()
                .to_string(),
            "111"
        );
    }

    #[test]
    fn support_examples() {
        assert_eq!(seq("011").support(), SupportSet::new(3, [1, 2]).unwrap());
        assert_eq!(
            seq(PALEY19).support().members(),
            &[1, 4, 5, 6, 7, 9, 11, 16, 17]
        );
        assert!(seq("0000").support().is_empty());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(seq("010").shift(1).to_string(), "100");
        let s = seq(PALEY19);
        assert_eq!(s.shift(19), s);
        assert_eq!(s.shift(-1), s.shift(18));
        let mut t = s.clone();
        for _ in 0..19 {
            t = t.shift(1);
        }
        assert_eq!(t, s);
    }

    #[test]
    fn decimate_examples() {
        assert_eq!(seq(PALEY19).decimate(2).unwrap().to_string(), PALEY19_DEC2);
        assert_eq!(seq(TWIN15).decimate(7).unwrap().to_string(), TWIN15_DEC7);
        assert_eq!(seq(PALEY19).decimate(1).unwrap(), seq(PALEY19));
        assert_eq!(
            seq(TWIN15).decimate(5),
            Err(Error::NotCoprime { r: 5, n: 15 })
        );
    }

    #[test]
    fn phase_examples() {
        let s = seq(PALEY19);
        assert_eq!(s.phase_equivalent(&s.shift(3)), Ok(Some(3)));
        assert_eq!(s.phase_equivalent(&s), Ok(Some(0)));
        assert_eq!(s.phase_equivalent(&seq(PALEY19_DEC2)), Ok(None));
        assert_eq!(
            s.phase_equivalent(&seq("01")),
            Err(Error::PeriodMismatch { left: 19, right: 2 })
        );
        // periodic sequence: smallest offset is reduced by the minimal period
        let p = seq("011011");
        assert_eq!(p.minimal_period(), 3);
        assert_eq!(p.phase_equivalent(&p.shift(5)), Ok(Some(2)));
    }

    #[test]
    fn difference_function_examples() {
        let b = seq(PALEY19).support();
        for w in 1..19 {
            assert_eq!(difference_function(&b, &b, w), Ok(4));
        }
        assert_eq!(difference_function(&b, &b, 0), Ok(9));
        let c = SupportSet::new(19, (0..19).filter(|z| !b.contains(*z))).unwrap();
        assert_eq!(difference_function(&b, &c, 0), Ok(0));
        assert!(matches!(
            difference_function(&b, &SupportSet::empty(5).unwrap(), 0),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn correlation_examples() {
        let (s, t) = (seq(TWIN15), seq(TWIN15_DEC7));
        assert_eq!(s.cross_correlation(&t, 5), Ok(7));
        assert_eq!(s.cross_correlation(&s, 0), Ok(15));
        assert_eq!(
            seq(PALEY19).cross_correlation(&seq(PALEY19_DEC2), 0),
            Ok(-17)
        );
        assert!(seq("01").cross_correlation(&seq("011"), 0).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let spec = seq(TWIN15).correlation_spectrum(&seq(TWIN15_DEC7)).unwrap();
        assert_eq!(
            spec.values(),
            &[-1, -5, -5, 3, -5, 7, 3, -1, -5, 3, 7, -1, 3, -1, -1]
        );
        let expected: BTreeMap<i64, usize> = [(-5, 4), (-1, 5), (3, 4), (7, 2)].into();
        assert_eq!(spec.histogram(), &expected);

        let auto = seq(PALEY19).autocorrelation_spectrum();
        assert_eq!(auto.histogram(), &BTreeMap::from([(-1, 18), (19, 1)]));

        let zeros = seq("0000").autocorrelation_spectrum();
        assert_eq!(zeros.histogram(), &BTreeMap::from([(4, 4)]));
    }

    #[test]
    fn perfection() {
        assert!(seq(PALEY19).is_perfect());
        assert!(seq(TWIN15).is_perfect());
        assert!(!seq("0000").is_perfect());
        assert!(seq("1").is_perfect());
    }

    #[test]
    fn text_formats() {
        assert!("0120".parse::<BinarySequence>().is_err());
        assert!("".parse::<BinarySequence>().is_err());
        assert!(" 01".parse::<BinarySequence>().is_err());
        let d: SupportSet = "N=15: 0,1,2,4,5,8,10".parse().unwrap();
        assert_eq!(d.to_string(), "N=15: 0,1,2,4,5,8,10");
        assert_eq!(d.members(), &[0, 1, 2, 4, 5, 8, 10]);
        let e: SupportSet = "N=5:".parse().unwrap();
        assert!(e.is_empty());
        assert_eq!(e.to_string(), "N=5:");
        assert!("N=5: 3,1".parse::<SupportSet>().is_err());
        assert!("N=5: 1,1".parse::<SupportSet>().is_err());
        assert!("N=5: 5".parse::<SupportSet>().is_err());
        assert!("15: 0,1".parse::<SupportSet>().is_err());
        assert!("N=x: 0".parse::<SupportSet>().is_err());
        assert!("N=0:".parse::<SupportSet>().is_err());
    }

    fn arb_sequence(max_n: usize) -> impl Strategy<Value = BinarySequence> {
        prop::collection::vec(any::<bool>(), 1..=max_n)
            .prop_map(|bits| BinarySequence::new(bits).unwrap())
    }

    fn rotation_brute_force(s: &BinarySequence) -> BinarySequence {
        (0..s.period() as i64).map(|k| s.shift(k)).min().unwrap()
    }

    proptest! {
        #[test]
        fn support_round_trip(s in arb_sequence(64)) {
            prop_assert_eq!(s.support().characteristic_sequence(), s.clone());
            prop_assert_eq!(s.to_string().parse::<BinarySequence>().unwrap(), s);
        }

        #[test]
        fn shifts_compose(s in arb_sequence(40), a in -100i64..100, b in -100i64..100) {
            prop_assert_eq!(s.shift(a).shift(b), s.shift(a + b));
            prop_assert_eq!(s.shift(0), s);
        }

        #[test]
        fn least_rotation_is_minimal(s in arb_sequence(40)) {
            prop_assert_eq!(s.canonical_rotation(), rotation_brute_force(&s));
        }

        #[test]
        fn phase_offset_matches_search(s in arb_sequence(30), k in 0i64..30, flip in any::<bool>()) {
            let mut t = s.shift(k);
            if flip {
                let mut bits = t.bits().to_vec();
                bits[0] = !bits[0];
                t = BinarySequence::new(bits).unwrap();
            }
            let brute = (0..s.period()).find(|&y| s.shift(y as i64) == t);
            prop_assert_eq!(s.phase_equivalent(&t).unwrap(), brute);
        }

        #[test]
        fn decimations_compose(s in arb_sequence(60), a in 1usize..200, b in 1usize..200) {
            let n = s.period();
            prop_assume!(gcd(a as u64, n as u64) == 1 && gcd(b as u64, n as u64) == 1);
            let lhs = s.decimate(a).unwrap().decimate(b).unwrap();
            prop_assert_eq!(lhs, s.decimate(a * b % n.max(1)).unwrap());
        }

        #[test]
        fn swapped_correlation_is_reflected(s in arb_sequence(50), seed in any::<u64>()) {
            let n = s.period();
            let t = BinarySequence::new((0..n).map(|i| (seed >> (i % 64)) & 1 == 1).collect()).unwrap();
            let (b, c) = (s.support(), t.support());
            for w in 0..n as i64 {
                prop_assert_eq!(
                    s.cross_correlation(&t, w).unwrap(),
                    t.cross_correlation(&s, n as i64 - w).unwrap()
                );
                prop_assert_eq!(
                    difference_function(&b, &c, w).unwrap(),
                    difference_function(&c, &b, n as i64 - w).unwrap()
                );
            }
        }

        #[test]
        fn spectrum_parity_and_total(s in arb_sequence(50), seed in any::<u64>()) {
            let n = s.period();
            let t = BinarySequence::new((0..n).map(|i| (seed >> (i % 64)) & 1 == 1).collect()).unwrap();
            let spec = s.correlation_spectrum(&t).unwrap();
            prop_assert_eq!(spec.histogram().values().sum::<usize>(), n);
            for &v in spec.values() {
                prop_assert!(v.unsigned_abs() as usize <= n);
                prop_assert_eq!((v - n as i64).rem_euclid(2), 0);
            }
        }
    }
}
