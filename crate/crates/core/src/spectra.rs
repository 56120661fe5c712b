//! Closed-form cross-correlation spectra of Paley, twin-prime and Hall
//! sequence pairs, and a checker that compares them with direct computation.
//!
//! Every prediction is stated as a partition of `Z_N` into shift regions with
//! one correlation value per region. For Hall pairs the regions and the
//! difference-function values `d_{D_i,D_j}(w)` come from two tables (one for
//! pairs whose conjugates share one class, one for the three pairs `[i+3, i]`);
//! correlation values follow from `C = N - 4(k - d)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{is_prime, mod_pow, Modulus};
use crate::cyclotomy::{CyclotomicSystem, HallParameter};
use crate::diffset::{decimation_orbit, hall_system, multiplier_group, Family, FamilyDescriptor};
use crate::error::{Error, Result};
use crate::sequence::histogram_entries;

/// A shift region and the correlation value predicted on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PredictedValue {
    pub region: String,
    pub value: i64,
}

impl PredictedValue {
    fn new(region: impl Into<String>, value: i64) -> Self {
        PredictedValue {
            region: region.into(),
            value,
        }
    }
}

fn paley_checked(q: u64) -> Result<()> {
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

fn is_square_mod(z: u64, p: u64) -> bool {
    mod_pow(z, (p - 1) / 2, Modulus::new(p).expect("odd prime")) == 1
}

/// Region of `w` for the Paley pair (residues against non-residues).
pub fn paley_region(q: u64, w: i64) -> Result<PredictedValue> {
    paley_checked(q)?;
    let w = w.rem_euclid(q as i64) as u64;
    Ok(if w == 0 {
        PredictedValue::new("w=0", 2 - q as i64)
    } else if is_square_mod(w, q) {
        PredictedValue::new("w in C0", 3)
    } else {
        PredictedValue::new("w in C1", -1)
    })
}

pub fn predict_paley(q: u64, w: i64) -> Result<i64> {
    paley_region(q, w).map(|p| p.value)
}

/// Region of `w` in `Z_{q(q+2)}`, read through `w -> (w mod q, w mod q+2)`.
pub fn twin_prime_region(q: u64, w: i64) -> Result<PredictedValue> {
    if !(is_prime(q) && is_prime(q + 2)) {
        return Err(Error::NotTwinPrime { q });
    }
    let p = q + 2;
    let qi = q as i64;
    let w = w.rem_euclid((q * p) as i64) as u64;
    let (a, b) = (w % q, w % p);
    Ok(match (a, b) {
        (0, 0) => PredictedValue::new("w=(0,0)", -qi * qi + 2 * qi + 2),
        (_, 0) => PredictedValue::new("w=(a,0)", 2 * qi + 1),
        (0, _) => PredictedValue::new("w=(0,b)", 2 * qi - 3),
        _ if is_square_mod(a, q) == is_square_mod(b, p) => {
            PredictedValue::new("w in (C0xC'0)u(C1xC'1)", -5)
        }
        _ => PredictedValue::new("w in (C1xC'0)u(C0xC'1)", -1),
    })
}

pub fn predict_twin_prime(q: u64, w: i64) -> Result<i64> {
    twin_prime_region(q, w).map(|p| p.value)
}

/// Difference-function values as numerators over 36, `(a*q + b*x + c) / 36`.
#[derive(Debug, Clone, Copy)]
struct DiffFormula {
    q: i64,
    x: i64,
    c: i64,
}

impl DiffFormula {
    const fn new(q: i64, x: i64, c: i64) -> Self {
        DiffFormula { q, x, c }
    }

    fn eval(self, hp: &HallParameter) -> i64 {
        let num = self.q * hp.q() as i64 + self.x * hp.x() + self.c;
        debug_assert_eq!(num.rem_euclid(36), 0);
        num.div_euclid(36)
    }
}

struct HallRow {
    pair: (usize, usize),
    // class sets per column, in column order after the {0} column
    columns: &'static [&'static [usize]],
}

// Pairs whose conjugates share exactly one class: d(0) = (q-1)/6.
const TABLE2_ZERO: DiffFormula = DiffFormula::new(6, 0, -6);
const TABLE2_DIFFS: [DiffFormula; 5] = [
    DiffFormula::new(9, 6, -87),
    DiffFormula::new(9, 6, -15),
    DiffFormula::new(9, 6, 57),
    DiffFormula::new(9, -12, 21),
    DiffFormula::new(9, -12, -51),
];
const TABLE2: [HallRow; 12] = [
    HallRow {
        pair: (1, 0),
        columns: &[&[0], &[5, 4], &[3], &[2], &[1]],
    },
    HallRow {
        pair: (2, 0),
        columns: &[&[3], &[5, 2], &[1], &[4], &[0]],
    },
    HallRow {
        pair: (2, 1),
        columns: &[&[1], &[0, 5], &[4], &[3], &[2]],
    },
    HallRow {
        pair: (3, 1),
        columns: &[&[4], &[0, 3], &[2], &[5], &[1]],
    },
    HallRow {
        pair: (3, 2),
        columns: &[&[2], &[0, 1], &[5], &[4], &[3]],
    },
    HallRow {
        pair: (4, 0),
        columns: &[&[4], &[0, 3], &[2], &[5], &[1]],
    },
    HallRow {
        pair: (4, 2),
        columns: &[&[5], &[4, 1], &[3], &[0], &[2]],
    },
    HallRow {
        pair: (4, 3),
        columns: &[&[3], &[2, 1], &[0], &[5], &[4]],
    },
    HallRow {
        pair: (5, 0),
        columns: &[&[2], &[0, 1], &[5], &[4], &[3]],
    },
    HallRow {
        pair: (5, 1),
        columns: &[&[5], &[4, 1], &[3], &[0], &[2]],
    },
    HallRow {
        pair: (5, 3),
        columns: &[&[0], &[5, 2], &[4], &[1], &[3]],
    },
    HallRow {
        pair: (5, 4),
        columns: &[&[4], &[3, 2], &[1], &[0], &[5]],
    },
];

// Pairs [i+3, i], whose conjugates share two classes: d(0) = (q-1)/3.
const TABLE3_ZERO: DiffFormula = DiffFormula::new(12, 0, -12);
const TABLE3_DIFFS: [DiffFormula; 6] = [
    DiffFormula::new(9, -6, 33),
    DiffFormula::new(9, -6, -75),
    DiffFormula::new(9, 12, 33),
    DiffFormula::new(9, -6, -39),
    DiffFormula::new(9, -6, -3),
    DiffFormula::new(9, 12, -75),
];
const TABLE3: [HallRow; 3] = [
    HallRow {
        pair: (3, 0),
        columns: &[&[0], &[5], &[4], &[3], &[2], &[1]],
    },
    HallRow {
        pair: (4, 1),
        columns: &[&[1], &[0], &[5], &[4], &[3], &[2]],
    },
    HallRow {
        pair: (5, 2),
        columns: &[&[2], &[1], &[0], &[5], &[4], &[3]],
    },
];

/// Which of the two Hall tables covers the (ordered, `i > j`) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HallTable {
    /// Conjugates sharing one class; six values.
    OneShared,
    /// The pairs `[3,0]`, `[4,1]`, `[5,2]`; seven values.
    TwoShared,
}

fn hall_row(i: usize, j: usize) -> Option<(HallTable, &'static HallRow)> {
    TABLE2
        .iter()
        .find(|r| r.pair == (i, j))
        .map(|r| (HallTable::OneShared, r))
        .or_else(|| {
            TABLE3
                .iter()
                .find(|r| r.pair == (i, j))
                .map(|r| (HallTable::TwoShared, r))
        })
}

pub fn hall_table_of(i: usize, j: usize) -> Result<HallTable> {
    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
    hall_row(hi, lo)
        .map(|(t, _)| t)
        .ok_or(Error::BadPair { i, j })
}

fn correlation_from_d(q: u64, d: i64) -> i64 {
    let q = q as i64;
    q - 4 * ((q - 1) / 2 - d)
}

fn class_label(classes: &[usize]) -> String {
    classes
        .iter()
        .map(|c| format!("C{c}"))
        .collect::<Vec<_>>()
        .join("u")
}

/// Predictions for the conjugate pairs of one Hall difference set.
#[derive(Debug, Clone)]
pub struct HallPredictor {
    system: CyclotomicSystem,
    x: HallParameter,
}

impl HallPredictor {
    pub fn new(system: CyclotomicSystem, x: HallParameter) -> Result<Self> {
        if system.order() != 6 || system.q() != x.q() {
            return Err(Error::InvalidHallParameter {
                q: system.q(),
                x: x.x(),
            });
        }
        Ok(HallPredictor { system, x })
    }

    pub fn for_prime(q: u64, alpha: Option<u64>) -> Result<Self> {
        let (system, x) = hall_system(q, alpha)?;
        Ok(HallPredictor { system, x })
    }

    pub fn system(&self) -> &CyclotomicSystem {
        &self.system
    }

    pub fn x(&self) -> HallParameter {
        self.x
    }

    /// Region and value of `C_{s_i,s_j}(w)`; `i < j` is served through
    /// `C_{s_i,s_j}(w) = C_{s_j,s_i}(N - w)`.
    pub fn region(&self, i: usize, j: usize, w: i64) -> Result<PredictedValue> {
        if i == j || i >= 6 || j >= 6 {
            return Err(Error::BadPair { i, j });
        }
        let q = self.system.q();
        let w = w.rem_euclid(q as i64) as u64;
        if i < j {
            return self.region(j, i, (q - w) as i64);
        }
        let (table, row) = hall_row(i, j).ok_or(Error::BadPair { i, j })?;
        let (zero, diffs): (DiffFormula, &[DiffFormula]) = match table {
            HallTable::OneShared => (TABLE2_ZERO, &TABLE2_DIFFS),
            HallTable::TwoShared => (TABLE3_ZERO, &TABLE3_DIFFS),
        };
        if w == 0 {
            return Ok(PredictedValue::new(
                "w=0",
                correlation_from_d(q, zero.eval(&self.x)),
            ));
        }
        let class = self.system.class_of_nonzero(w);
        let col = row
            .columns
            .iter()
            .position(|cs| cs.contains(&class))
            .expect("each row partitions the six classes");
        Ok(PredictedValue::new(
            format!("w in {}", class_label(row.columns[col])),
            correlation_from_d(q, diffs[col].eval(&self.x)),
        ))
    }

    pub fn predict(&self, i: usize, j: usize, w: i64) -> Result<i64> {
        self.region(i, j, w).map(|p| p.value)
    }

    /// Distinct values the closed form allows for the pair.
    pub fn value_set(&self, i: usize, j: usize) -> Result<Vec<i64>> {
        let table = hall_table_of(i, j)?;
        let (zero, diffs): (DiffFormula, &[DiffFormula]) = match table {
            HallTable::OneShared => (TABLE2_ZERO, &TABLE2_DIFFS),
            HallTable::TwoShared => (TABLE3_ZERO, &TABLE3_DIFFS),
        };
        let q = self.system.q();
        let mut v: Vec<i64> = std::iter::once(zero)
            .chain(diffs.iter().copied())
            .map(|f| correlation_from_d(q, f.eval(&self.x)))
            .collect();
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }
}

/// `C_{s_i,s_j}(w)` for the Hall conjugates `D_i = C_i ∪ C_{i+1} ∪ C_{i+3}`,
/// with classes built from the default primitive root. `x` must agree with
/// the one those classes produce.
pub fn predict_hall(q: u64, x: HallParameter, i: usize, j: usize, w: i64) -> Result<i64> {
    let predictor = HallPredictor::for_prime(q, None)?;
    if predictor.x() != x {
        return Err(Error::InvalidHallParameter { q, x: x.x() });
    }
    predictor.predict(i, j, w)
}

/// Predicted against computed correlation for one ordered pair of conjugates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub family: Family,
    pub q: u64,
    pub x: Option<i64>,
    /// `(i, j)` for `C_{s_i, s_j}`.
    pub pair: (usize, usize),
    pub predicted: Vec<i64>,
    pub computed: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShiftDiff {
    pub w: usize,
    pub predicted: i64,
    pub computed: i64,
}

impl VerificationReport {
    pub fn mismatches(&self) -> usize {
        self.diffs().len()
    }

    pub fn diffs(&self) -> Vec<ShiftDiff> {
        self.predicted
            .iter()
            .zip(&self.computed)
            .enumerate()
            .filter(|(_, (p, c))| p != c)
            .map(|(w, (&predicted, &computed))| ShiftDiff {
                w,
                predicted,
                computed,
            })
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.predicted == self.computed
    }

    /// Histogram of the computed values.
    pub fn histogram(&self) -> BTreeMap<i64, usize> {
        let mut h = BTreeMap::new();
        for &v in &self.computed {
            *h.entry(v).or_insert(0) += 1;
        }
        h
    }

    pub fn distinct_values(&self) -> usize {
        self.histogram().len()
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "q": self.q,
            "x": self.x,
            "pair": [self.pair.0, self.pair.1],
            "mismatches": self.mismatches(),
            "distinct_values": self.distinct_values(),
            "values": histogram_entries(&self.histogram()),
            "diffs": self.diffs(),
            "status": self.status(),
        })
    }
}

impl fmt::Display for VerificationReport {
    /// One line: `hall q=31 x=-2 pair=[3,0] mismatches=0 distinct=6 values={-9:5,...} status=pass`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} q={}", self.family, self.q)?;
        if let Some(x) = self.x {
            write!(f, " x={x}")?;
        }
        let values = self
            .histogram()
            .iter()
            .map(|(v, c)| format!("{v}:{c}"))
            .collect::<Vec<_>>()
            .join(",");
        write!(
            f,
            " pair=[{},{}] mismatches={} distinct={} values={{{}}} status={}",
            self.pair.0,
            self.pair.1,
            self.mismatches(),
            self.distinct_values(),
            values,
            self.status()
        )
    }
}

/// Everything checked for one family member.
#[derive(Debug, Clone)]
pub struct FamilyVerification {
    pub descriptor: FamilyDescriptor,
    /// `phi(N) / |M|` as computed.
    pub orbit_size: usize,
    pub expected_orbit_size: usize,
    /// The computed orbit's conjugates coincide with the family's conjugates.
    pub orbit_matches_conjugates: bool,
    pub all_perfect: bool,
    pub reports: Vec<VerificationReport>,
}

impl FamilyVerification {
    pub fn passed(&self) -> bool {
        self.orbit_size == self.expected_orbit_size
            && self.orbit_matches_conjugates
            && self.all_perfect
            && self.reports.iter().all(VerificationReport::passed)
    }

    pub fn mismatches(&self) -> usize {
        self.reports
            .iter()
            .map(VerificationReport::mismatches)
            .sum()
    }

    /// Union of the computed values over all pairs.
    pub fn value_set(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .reports
            .iter()
            .flat_map(|r| r.computed.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn first_diff(&self) -> Option<(&VerificationReport, ShiftDiff)> {
        self.reports
            .iter()
            .find_map(|r| r.diffs().first().map(|d| (r, *d)))
    }

    pub fn to_json(&self) -> Value {
        let d = &self.descriptor;
        let p = d.parameters();
        json!({
            "family": d.family(),
            "q": d.q(),
            "x": d.hall_parameter().map(|x| x.x()),
            "alpha": d.alpha(),
            "v": p.v,
            "k": p.k,
            "lambda": p.lambda,
            "orbit_size": self.orbit_size,
            "expected_orbit_size": self.expected_orbit_size,
            "orbit_matches_conjugates": self.orbit_matches_conjugates,
            "all_perfect": self.all_perfect,
            "mismatches": self.mismatches(),
            "value_set": self.value_set(),
            "status": if self.passed() { "pass" } else { "fail" },
            "reports": self.reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Computes every conjugate pair's spectrum directly and compares it with
/// the closed form, together with the orbit size and perfection of each
/// conjugate.
pub fn verify_family(descriptor: &FamilyDescriptor) -> Result<FamilyVerification> {
    let d = descriptor.support();
    let group = multiplier_group(&d);
    let orbit = crate::diffset::orbit_with_group(&d, &group);
    let conjugates = descriptor.conjugates();

    // Conjugates are compared up to translation.
    let from_orbit: BTreeSet<_> = orbit
        .par_iter()
        .map(|c| c.sequence().canonical_rotation())
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let from_family: BTreeSet<_> = conjugates
        .par_iter()
        .map(|c| c.characteristic_sequence().canonical_rotation())
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let orbit_matches_conjugates = from_orbit == from_family;

    let sequences: Vec<_> = conjugates
        .iter()
        .map(|c| c.characteristic_sequence())
        .collect();
    let all_perfect = sequences.par_iter().all(|s| s.is_perfect());

    let n = descriptor.period();
    let x = descriptor.hall_parameter().map(|x| x.x());
    let q = descriptor.q();

    let pairs: Vec<(usize, usize)> = match descriptor.family() {
        Family::Paley | Family::TwinPrime => vec![(0, 1)],
        Family::Hall => (0..6).flat_map(|i| (0..i).map(move |j| (i, j))).collect(),
    };
    let hall = match descriptor.family() {
        Family::Hall => Some(HallPredictor::new(
            descriptor.hall_system().expect("hall").clone(),
            descriptor.hall_parameter().expect("hall"),
        )?),
        _ => None,
    };

    let reports = pairs
        .into_par_iter()
        .map(|(i, j)| {
            let computed = sequences[i]
                .correlation_spectrum(&sequences[j])?
                .values()
                .to_vec();
            let predicted = (0..n as i64)
                .map(|w| match descriptor.family() {
                    Family::Paley => predict_paley(q, w),
                    Family::TwinPrime => predict_twin_prime(q, w),
                    Family::Hall => hall.as_ref().expect("hall").predict(i, j, w),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(VerificationReport {
                family: descriptor.family(),
                q,
                x,
                pair: (i, j),
                predicted,
                computed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FamilyVerification {
        descriptor: descriptor.clone(),
        orbit_size: orbit.len(),
        expected_orbit_size: descriptor.expected_orbit_size(),
        orbit_matches_conjugates,
        all_perfect,
        reports,
    })
}

/// The decimation orbit size of a family member, via `phi(N) / |M|`.
pub fn orbit_size(descriptor: &FamilyDescriptor) -> usize {
    decimation_orbit(&descriptor.support()).len()
}
