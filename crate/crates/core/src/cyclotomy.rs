//! Cyclotomic classes of order `d` over a prime field and their cyclotomic numbers.
//!
//! With `alpha` a primitive root of `q = d*f + 1`, class `C_0` is the subgroup
//! generated by `alpha^d` and `C_i = alpha^i * C_0`. The cyclotomic number
//! `(i, j)` counts the elements `z` of `C_i` with `z + 1` in `C_j`.

use crate::arith::{exact_sqrt, is_prime, is_primitive_root, primitive_root};
use crate::error::{Error, Result};

/// The partition of `GF(q)*` into `d` cyclotomic classes for a fixed primitive root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicSystem {
    q: u64,
    d: u64,
    f: u64,
    alpha: u64,
    // class_index[z] for 1 <= z < q; slot 0 is unused.
    class_index: Vec<u32>,
}

impl CyclotomicSystem {
    /// Builds the classes of order `d` over `GF(q)`. `alpha` defaults to the
    /// smallest primitive root of `q`.
    pub fn new(q: u64, d: u64, alpha: Option<u64>) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if d == 0 || !(q - 1).is_multiple_of(d) {
            return Err(Error::OrderDoesNotDivide { q, d });
        }
        let alpha = match alpha {
            Some(a) => {
                if !is_primitive_root(a, q)? {
                    return Err(Error::NotPrimitiveRoot { alpha: a, q });
                }
                a % q
            }
            None => primitive_root(q)?,
        };
        let mut class_index = vec![u32::MAX; q as usize];
        let mut power = 1u64;
        for e in 0..q - 1 {
            class_index[power as usize] = (e % d) as u32;
            power = power * alpha % q;
        }
        Ok(CyclotomicSystem {
            q,
            d,
            f: (q - 1) / d,
            alpha,
            class_index,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    /// Class size `(q - 1) / d`.
    pub fn f(&self) -> u64 {
        self.f
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    /// Index of the class containing `z`.
    pub fn class_of(&self, z: u64) -> Result<usize> {
        let z = z % self.q;
        if z == 0 {
            return Err(Error::ZeroResidue(self.q));
        }
        Ok(self.class_index[z as usize] as usize)
    }

    pub(crate) fn class_of_nonzero(&self, z: u64) -> usize {
        self.class_index[(z % self.q) as usize] as usize
    }

    /// Members of class `i`, ascending.
    pub fn class(&self, i: usize) -> Result<Vec<u64>> {
        self.check_index(i)?;
        Ok((1..self.q)
            .filter(|&z| self.class_index[z as usize] as usize == i)
            .collect())
    }

    /// All `d` classes, each ascending.
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::with_capacity(self.f as usize); self.d as usize];
        for z in 1..self.q {
            out[self.class_index[z as usize] as usize].push(z);
        }
        out
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i as u64 >= self.d {
            return Err(Error::ClassIndexOutOfRange {
                index: i,
                d: self.d as usize,
            });
        }
        Ok(())
    }

    /// `(i, j) = |(C_i + 1) ∩ C_j|`, counted directly.
    pub fn cyclotomic_number(&self, i: usize, j: usize) -> Result<u64> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok((1..self.q - 1)
            .filter(|&z| {
                self.class_index[z as usize] as usize == i
                    && self.class_index[z as usize + 1] as usize == j
            })
            .count() as u64)
    }

    /// The full `d x d` matrix of cyclotomic numbers in one pass over the field.
    pub fn cyclotomic_matrix(&self) -> Vec<Vec<u64>> {
        let d = self.d as usize;
        let mut out = vec![vec![0u64; d]; d];
        for z in 1..self.q - 1 {
            let i = self.class_index[z as usize] as usize;
            let j = self.class_index[z as usize + 1] as usize;
            out[i][j] += 1;
        }
        out
    }

    /// Recovers the Hall parameter `x` from the counted `(0, 0)` and checks the
    /// whole order-6 table against the closed form.
    pub fn derive_hall_x(&self) -> Result<HallParameter> {
        let q = self.q;
        let root = match q.checked_sub(27).and_then(exact_sqrt) {
            Some(r) if r > 0 && q % 6 == 1 => r as i64,
            _ => return Err(Error::NotHallPrime(q)),
        };
        if self.d != 6 {
            return Err(Error::UnsupportedOrder(self.d));
        }
        // Integrality of the table admits exactly one sign of x.
        let admissible = HallParameter::new(q, root)
            .or_else(|_| HallParameter::new(q, -root))
            .map_err(|_| Error::NotHallPrime(q))?;
        let counted = self.cyclotomic_matrix();
        let a = counted[0][0] as i64;
        // (0,0) = (q - 11 - 8x)/36
        let numerator = q as i64 - 11 - 36 * a;
        if numerator != 8 * admissible.x() {
            return Err(Error::TableMismatch {
                q,
                i: 0,
                j: 0,
                expected: admissible.a(),
                computed: a,
            });
        }
        let x = admissible;
        let table = x.table();
        for (i, row) in counted.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if table[i][j] != c as i64 {
                    return Err(Error::TableMismatch {
                        q,
                        i,
                        j,
                        expected: table[i][j],
                        computed: c as i64,
                    });
                }
            }
        }
        Ok(x)
    }
}

/// The integer `x` with `q = x^2 + 27` that parametrises the order-6 table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HallParameter {
    q: u64,
    x: i64,
}

// Letters of the order-6 table, row i, column j.
const HALL_TABLE: [[Letter; 6]; 6] = {
    use Letter::*;
    [
        [A, B, B, C, D, D],
        [E, F, G, D, B, G],
        [F, G, E, D, G, B],
        [A, E, F, A, E, F],
        [E, D, G, B, F, G],
        [F, G, D, B, G, E],
    ]
};

#[derive(Debug, Clone, Copy)]
enum Letter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl HallParameter {
    /// Validates `x^2 + 27 = q`, `q = 1 mod 6` prime, and integrality of the table.
    pub fn new(q: u64, x: i64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let ok = q % 6 == 1
            && (x as i128) * (x as i128) + 27 == q as i128
            && (q as i64 - 11 - 8 * x).rem_euclid(36) == 0;
        if !ok {
            return Err(Error::InvalidHallParameter { q, x });
        }
        Ok(HallParameter { q, x })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    fn q_i(&self) -> i64 {
        self.q as i64
    }

    pub fn a(&self) -> i64 {
        (self.q_i() - 11 - 8 * self.x) / 36
    }
    pub fn b(&self) -> i64 {
        (self.q_i() + 37 - 2 * self.x) / 36
    }
    pub fn c(&self) -> i64 {
        (self.q_i() + 1 + 16 * self.x) / 36
    }
    pub fn d(&self) -> i64 {
        (self.q_i() - 35 - 2 * self.x) / 36
    }
    pub fn e(&self) -> i64 {
        (self.q_i() + 13 + 4 * self.x) / 36
    }
    pub fn f(&self) -> i64 {
        (self.q_i() - 23 + 4 * self.x) / 36
    }
    pub fn g(&self) -> i64 {
        (self.q_i() + 1 - 2 * self.x) / 36
    }

    fn letter(&self, l: Letter) -> i64 {
        match l {
            Letter::A => self.a(),
            Letter::B => self.b(),
            Letter::C => self.c(),
            Letter::D => self.d(),
            Letter::E => self.e(),
            Letter::F => self.f(),
            Letter::G => self.g(),
        }
    }

    /// The closed-form order-6 cyclotomic numbers.
    pub fn table(&self) -> [[i64; 6]; 6] {
        let mut out = [[0; 6]; 6];
        for (i, row) in HALL_TABLE.iter().enumerate() {
            for (j, &l) in row.iter().enumerate() {
                out[i][j] = self.letter(l);
            }
        }
        out
    }
}

/// Cyclotomic numbers of order 2 and 6 from their closed forms.
pub fn cyclotomic_number_closed_form(
    q: u64,
    d: u64,
    i: usize,
    j: usize,
    x: Option<HallParameter>,
) -> Result<u64> {
    if d != 2 && d != 6 {
        return Err(Error::UnsupportedOrder(d));
    }
    if !is_prime(q) || q == 2 {
        return Err(Error::NotPrime(q));
    }
    if !(q - 1).is_multiple_of(d) {
        return Err(Error::OrderDoesNotDivide { q, d });
    }
    if i as u64 >= d || j as u64 >= d {
        return Err(Error::ClassIndexOutOfRange {
            index: i.max(j),
            d: d as usize,
        });
    }
    let f = (q - 1) / d;
    if d == 2 {
        let v = if f.is_multiple_of(2) {
            if (i, j) == (0, 0) {
                (f - 2) / 2
            } else {
                f / 2
            }
        } else if (i, j) == (0, 1) {
            f.div_ceil(2)
        } else {
            (f - 1) / 2
        };
        return Ok(v);
    }
    let x = x.ok_or(Error::MissingHallParameter)?;
    if x.q() != q {
        return Err(Error::InvalidHallParameter { q, x: x.x() });
    }
    Ok(x.table()[i][j] as u64)
}

/// Primes `q <= limit` of the form `x^2 + 27`.
pub fn hall_primes(limit: u64) -> Vec<u64> {
    (1u64..)
        .map(|x| x * x + 27)
        .take_while(|&q| q <= limit)
        .filter(|&q| q % 6 == 1 && is_prime(q))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(q: u64, d: u64) -> CyclotomicSystem {
        CyclotomicSystem::new(q, d, None).unwrap()
    }

    #[test]
    fn q31_order6_classes() {
        let s = sys(31, 6);
        assert_eq!(s.alpha(), 3);
        assert_eq!(
            s.classes(),
            vec![
                vec![1, 2, 4, 8, 16],
                vec![3, 6, 12, 17, 24],
                vec![5, 9, 10, 18, 20],
                vec![15, 23, 27, 29, 30],
                vec![7, 14, 19, 25, 28],
                vec![11, 13, 21, 22, 26],
            ]
        );
        assert_eq!(s.class_of(16), Ok(0));
        assert_eq!(s.class_of(1), Ok(0));
        assert_eq!(s.class_of(26), Ok(5));
        assert_eq!(s.class_of(31), Err(Error::ZeroResidue(31)));
    }

    #[test]
    fn quadratic_residues_mod_19() {
        let squares: std::collections::BTreeSet<u64> = (1..19u64).map(|x| x * x % 19).collect();
        let s = sys(19, 2);
        assert_eq!(s.class(0).unwrap(), squares.into_iter().collect::<Vec<_>>());
        assert_eq!(s.class(0).unwrap(), vec![1, 4, 5, 6, 7, 9, 11, 16, 17]);
    }

    #[test]
    fn singleton_classes() {
        let s = sys(7, 6);
        assert_eq!(s.f(), 1);
        assert_eq!(s.class(0).unwrap(), vec![1]);
        assert!(s.classes().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(CyclotomicSystem::new(21, 2, None), Err(Error::NotPrime(21)));
        assert_eq!(
            CyclotomicSystem::new(19, 4, None),
            Err(Error::OrderDoesNotDivide { q: 19, d: 4 })
        );
        assert_eq!(
            CyclotomicSystem::new(31, 6, Some(2)),
            Err(Error::NotPrimitiveRoot { alpha: 2, q: 31 })
        );
        assert!(sys(31, 6).class(6).is_err());
    }

    #[test]
    fn class_structure() {
        for &(q, d) in &[(31, 6), (43, 6), (61, 4), (73, 8), (101, 5), (19, 2)] {
            let s = sys(q, d);
            let classes = s.classes();
            assert_eq!(classes.len() as u64, d);
            assert!(classes.iter().all(|c| c.len() as u64 == s.f()));
            assert_eq!(classes.iter().map(Vec::len).sum::<usize>() as u64, q - 1);
            // C_i = alpha^i C_0
            let mut shift = 1u64;
            for class in &classes {
                let mut scaled: Vec<u64> = classes[0].iter().map(|z| z * shift % q).collect();
                scaled.sort_unstable();
                assert_eq!(&scaled, class);
                shift = shift * s.alpha() % q;
            }
            // class indices add under multiplication
            for y in 1..q {
                for z in (1..q).step_by(7) {
                    let expected = (s.class_of(y).unwrap() + s.class_of(z).unwrap()) % d as usize;
                    assert_eq!(s.class_of(y * z % q).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(sys(19, 2).cyclotomic_number(0, 1), Ok(5));
        assert_eq!(sys(13, 2).cyclotomic_number(0, 0), Ok(2));
        let s31 = sys(31, 6);
        let x = HallParameter::new(31, -2).unwrap();
        assert_eq!(s31.cyclotomic_number(0, 0), Ok(x.a() as u64));
        assert_eq!(s31.cyclotomic_number(0, 0), Ok(1));
        assert_eq!(s31.cyclotomic_number(0, 3), Ok(0));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(cyclotomic_number_closed_form(19, 2, 0, 1, None), Ok(5));
        assert_eq!(cyclotomic_number_closed_form(13, 2, 0, 0, None), Ok(2));
        let x = HallParameter::new(31, -2).unwrap();
        assert_eq!(x.c(), 0);
        assert_eq!(cyclotomic_number_closed_form(31, 6, 0, 3, Some(x)), Ok(0));
        assert_eq!(
            cyclotomic_number_closed_form(31, 3, 0, 0, None),
            Err(Error::UnsupportedOrder(3))
        );
        assert_eq!(
            cyclotomic_number_closed_form(31, 6, 0, 0, None),
            Err(Error::MissingHallParameter)
        );
    }

    #[test]
    fn matrix_sums_to_q_minus_2() {
        for q in (3..600).filter(|&q| is_prime(q)) {
            for d in [2u64, 6] {
                if (q - 1) % d != 0 {
                    continue;
                }
                let total: u64 = sys(q, d).cyclotomic_matrix().iter().flatten().sum();
                assert_eq!(total, q - 2, "q = {q}, d = {d}");
            }
        }
    }

    #[test]
    fn derive_x() {
        assert_eq!(sys(31, 6).derive_hall_x().map(|x| x.x()), Ok(-2));
        let x43 = sys(43, 6).derive_hall_x().unwrap();
        assert_eq!(x43.x() * x43.x(), 16);
        assert_eq!(sys(29, 2).derive_hall_x(), Err(Error::NotHallPrime(29)));
        assert_eq!(sys(31, 2).derive_hall_x(), Err(Error::UnsupportedOrder(2)));
        assert_eq!(sys(37, 6).derive_hall_x(), Err(Error::NotHallPrime(37)));
        // alpha = 11 relabels C_i as C_{-i} for q = 31; the table no longer fits
        assert!(matches!(
            CyclotomicSystem::new(31, 6, Some(11))
                .unwrap()
                .derive_hall_x(),
            Err(Error::TableMismatch { .. })
        ));
    }

    #[test]
    fn hall_parameter_validation() {
        assert!(HallParameter::new(31, 2).is_err());
        assert!(HallParameter::new(31, -2).is_ok());
        assert!(HallParameter::new(37, 3).is_err());
    }

    #[test]
    fn hall_prime_list() {
        assert_eq!(hall_primes(500), vec![31, 43, 127, 223, 283]);
        assert_eq!(
            hall_primes(2000),
            vec![31, 43, 127, 223, 283, 811, 1051, 1471, 1627]
        );
    }
}
