//! Exact arithmetic and sign determination for Q-linear combinations of
//! `{1} ∪ {sqrt(d) : d squarefree >= 2}`.
//!
//! The zero test is purely symbolic: square roots of distinct squarefree
//! integers are linearly independent over Q (classical number theory,
//! assumed and not re-proved here), so a combination vanishes iff its
//! coefficient map is empty. Nonzero values get their sign from interval
//! refinement, which terminates because the value is provably nonzero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Q, QVec, Z};

/// Radicand of a basis symbol: 1 for the rational unit, otherwise a
/// squarefree integer >= 2.
pub type Radicand = u64;

/// Write n = s^2 * m with m squarefree; returns (s, m).
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    assert!(n >= 1, "radicand must be positive");
    let mut m = n;
    let mut s = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, m)
}

/// Ascending primes 2, 3, 5, ... used by the Zajceva constructor.
pub fn nth_prime(i: usize) -> u64 {
    let mut count = 0;
    let mut candidate = 1u64;
    while count <= i {
        candidate += 1;
        if (2..=((candidate as f64).sqrt() as u64)).all(|d| candidate % d != 0) {
            count += 1;
        }
    }
    candidate
}

/// Finite Q-linear combination of basis symbols; no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FormalReal {
    terms: BTreeMap<Radicand, Q>,
}

const START_BITS: u64 = 32;
const MAX_BITS: u64 = 1 << 16;

impl FormalReal {
    pub fn zero() -> Self {
        FormalReal::default()
    }

    pub fn one() -> Self {
        FormalReal::from_rational(Q::one())
    }

    pub fn from_rational(q: Q) -> Self {
        let mut r = FormalReal::zero();
        r.add_term(1, q);
        r
    }

    /// sqrt(d), with the radicand reduced to squarefree form
    /// (sqrt 8 -> 2*sqrt 2).
    pub fn sqrt(d: u64) -> Self {
        let (outer, rad) = squarefree_decompose(d);
        let mut r = FormalReal::zero();
        r.add_term(rad, Q::from_integer(Z::from(outer)));
        r
    }

    pub fn term(coeff: Q, radicand: u64) -> Self {
        FormalReal::sqrt(radicand).scale(&coeff)
    }

    fn add_term(&mut self, radicand: Radicand, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(radicand) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Radicand, &Q)> {
        self.terms.iter().map(|(&r, q)| (r, q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&r| r == 1)
    }

    pub fn rational_part(&self) -> Q {
        self.terms.get(&1).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coefficient(&self, radicand: Radicand) -> Q {
        self.terms.get(&radicand).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &FormalReal) -> FormalReal {
        let mut r = self.clone();
        for (rad, q) in other.terms() {
            r.add_term(rad, q.clone());
        }
        r
    }

    pub fn sub(&self, other: &FormalReal) -> FormalReal {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormalReal {
        FormalReal {
            terms: self.terms.iter().map(|(&r, q)| (r, -q)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> FormalReal {
        if s.is_zero() {
            return FormalReal::zero();
        }
        FormalReal {
            terms: self.terms.iter().map(|(&r, q)| (r, q * s)).collect(),
        }
    }

    /// Exact product; sqrt(d)*sqrt(e) = s*sqrt(m) with de = s^2 m.
    pub fn mul(&self, other: &FormalReal) -> FormalReal {
        let mut r = FormalReal::zero();
        for (d1, q1) in self.terms() {
            for (d2, q2) in other.terms() {
                let prod = (d1 as u128) * (d2 as u128);
                let prod = u64::try_from(prod).expect("radicand product overflow");
                let (s, m) = squarefree_decompose(prod);
                r.add_term(m, q1 * q2 * Q::from_integer(Z::from(s)));
            }
        }
        r
    }

    /// Rational enclosure [lo, hi] of the value with 2^-bits interval
    /// width per term.
    pub fn enclosure(&self, bits: u64) -> (Q, Q) {
        let mut lo = Q::zero();
        let mut hi = Q::zero();
        let scale_den: Z = Z::one() << bits;
        for (rad, coeff) in self.terms() {
            let (rlo, rhi) = if rad == 1 {
                (Q::one(), Q::one())
            } else {
                let shifted: Z = Z::from(rad) << (2 * bits);
                let s = shifted.sqrt();
                (
                    Q::new(s.clone(), scale_den.clone()),
                    Q::new(s + Z::one(), scale_den.clone()),
                )
            };
            if coeff.is_positive() {
                lo += coeff * &rlo;
                hi += coeff * &rhi;
            } else {
                lo += coeff * &rhi;
                hi += coeff * &rlo;
            }
        }
        (lo, hi)
    }

    /// Exact sign: 0 iff the coefficient map is empty; otherwise decided
    /// by adaptive-precision interval refinement.
    pub fn sign(&self) -> i8 {
        if self.terms.is_empty() {
            return 0;
        }
        if self.terms.len() == 1 {
            let (_, q) = self.terms.iter().next().unwrap();
            return if q.is_positive() { 1 } else { -1 };
        }
        let mut bits = START_BITS;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
            if bits > MAX_BITS {
                // Unreachable for nonzero values by construction.
                panic!("formal real sign refinement exceeded {} bits", MAX_BITS);
            }
        }
    }

    pub fn approx_f64(&self) -> f64 {
        self.terms()
            .map(|(rad, q)| {
                let qf = q.numer().to_string().parse::<f64>().unwrap_or(0.0)
                    / q.denom().to_string().parse::<f64>().unwrap_or(1.0);
                qf * (rad as f64).sqrt()
            })
            .sum()
    }

    /// Decimal string of an approximation accurate to `bits` fractional bits.
    pub fn decimal(&self, bits: u64) -> String {
        let (lo, hi) = self.enclosure(bits);
        let mid = (lo + hi) / Q::from_integer(Z::from(2));
        let digits = (bits as f64 * std::f64::consts::LOG10_2).ceil() as u32;
        let pow: Z = Z::from(10).pow(digits);
        let scaled = (mid * Q::from_integer(pow.clone())).floor().to_integer();
        let negative = scaled.is_negative();
        let abs = scaled.abs();
        let (int_part, frac_part) = abs.div_rem(&pow);
        let frac_str = format!("{:0width$}", frac_part, width = digits as usize);
        format!(
            "{}{}.{}",
            if negative { "-" } else { "" },
            int_part,
            frac_str
        )
    }
}

fn fmt_rational(q: &Q, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FormalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (rad, coeff)) in self.terms.iter().enumerate() {
            let neg = coeff.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let abs = coeff.abs();
            if *rad == 1 {
                fmt_rational(&abs, f)?;
            } else if abs.is_one() {
                write!(f, "sqrt{}", rad)?;
            } else {
                fmt_rational(&abs, f)?;
                write!(f, "*sqrt{}", rad)?;
            }
        }
        Ok(())
    }
}

/// Parse the literal grammar `term (("+"|"-") term)*` with
/// `term := rat ["*"] ["sqrt" INT] | "sqrt" INT`, e.g. `1+2*sqrt2-1/3*sqrt5`.
impl FromStr for FormalReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<FormalReal> {
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let err = |pos: usize, msg: &str| Error::Parse {
            line: 1,
            col: pos + 1,
            msg: msg.to_string(),
        };
        let mut result = FormalReal::zero();
        let mut first = true;
        while pos < bytes.len() {
            let mut sign = Q::one();
            if !first {
                match bytes[pos] {
                    b'+' => pos += 1,
                    b'-' => {
                        sign = -Q::one();
                        pos += 1;
                    }
                    _ => return Err(err(pos, "expected `+` or `-` between terms")),
                }
            } else if bytes[pos] == b'-' {
                sign = -Q::one();
                pos += 1;
            } else if bytes[pos] == b'+' {
                pos += 1;
            }
            first = false;

            let parse_uint = |pos: &mut usize| -> Result<Z> {
                let start = *pos;
                while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                if *pos == start {
                    return Err(err(start, "expected digits"));
                }
                Ok(BigInt::parse_bytes(&bytes[start..*pos], 10).unwrap())
            };

            let mut coeff = Q::one();
            let mut have_coeff = false;
            if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                let numer = parse_uint(&mut pos)?;
                let denom = if pos < bytes.len() && bytes[pos] == b'/' {
                    pos += 1;
                    let d = parse_uint(&mut pos)?;
                    if d.is_zero() {
                        return Err(err(pos, "zero denominator"));
                    }
                    d
                } else {
                    Z::one()
                };
                coeff = Q::new(numer, denom);
                have_coeff = true;
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                    if !(pos + 4 <= bytes.len() && &bytes[pos..pos + 4] == b"sqrt") {
                        return Err(err(pos, "expected `sqrt` after `*`"));
                    }
                }
            }
            if pos + 4 <= bytes.len() && &bytes[pos..pos + 4] == b"sqrt" {
                pos += 4;
                let rad = parse_uint(&mut pos)?;
                let rad: u64 = rad
                    .try_into()
                    .map_err(|_| err(pos, "radicand too large"))?;
                if rad == 0 {
                    return Err(err(pos, "radicand must be positive"));
                }
                result = result.add(&FormalReal::sqrt(rad).scale(&(sign * coeff)));
            } else if have_coeff {
                result = result.add(&FormalReal::from_rational(sign * coeff));
            } else {
                return Err(err(pos, "expected rational or `sqrt`"));
            }
        }
        if first {
            return Err(err(0, "empty formal real literal"));
        }
        Ok(result)
    }
}

/// Row vector of formal reals: a hyperplane functional on Q^n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Functional {
    entries: Vec<FormalReal>,
}

impl Functional {
    pub fn new(entries: Vec<FormalReal>) -> Self {
        Functional { entries }
    }

    pub fn from_rationals(v: &QVec) -> Self {
        Functional::new(
            v.iter()
                .map(|q| FormalReal::from_rational(q.clone()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[FormalReal] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FormalReal::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(FormalReal::is_rational)
    }

    /// Exact evaluation sum_i v_i * f_i.
    pub fn dot(&self, v: &QVec) -> Result<FormalReal> {
        v.check_dim(self.dim())?;
        let mut acc = FormalReal::zero();
        for (entry, coord) in self.entries.iter().zip(v.iter()) {
            acc = acc.add(&entry.scale(coord));
        }
        Ok(acc)
    }

    /// All radicands appearing in any entry.
    pub fn symbols(&self) -> Vec<Radicand> {
        let mut rads: Vec<Radicand> = self
            .entries
            .iter()
            .flat_map(|e| e.terms().map(|(r, _)| r))
            .collect();
        rads.sort_unstable();
        rads.dedup();
        rads
    }

    /// One rational row per basis symbol: a rational vector is in the
    /// kernel of this functional iff every row annihilates it.
    pub fn rational_rows(&self) -> Vec<QVec> {
        self.symbols()
            .into_iter()
            .map(|rad| QVec::new(self.entries.iter().map(|e| e.coefficient(rad)).collect()))
            .collect()
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", e)?;
        }
        Ok(())
    }
}
