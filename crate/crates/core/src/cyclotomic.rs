//! Cyclotomic polynomials and exact detection of vanishing sums of roots of
//! unity.
//!
//! `Σ ζ_N^e = 0` holds exactly when `Φ_N` divides `Σ X^e`. `Φ_N` is monic, so
//! the test is a long division over ℤ and the quotient doubles as a witness.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("order {base}^{exp} does not fit in 64 bits")]
    OrderOverflow { base: u64, exp: u32 },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
}

/// Integer polynomial stored as `(degree, coefficient)` pairs, ascending, with
/// no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    terms: Vec<(u64, BigInt)>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(degree: u64, coeff: impl Into<BigInt>) -> Self {
        Self::from_terms([(degree, coeff.into())])
    }

    /// Coefficients listed from degree 0 upwards.
    pub fn from_dense<T: Into<BigInt> + Clone>(coeffs: &[T]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as u64, c.clone().into())),
        )
    }

    /// Sums repeated degrees and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, BigInt)>) -> Self {
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (d, c) in terms {
            *acc.entry(d).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(map: BTreeMap<u64, BigInt>) -> Self {
        IntPolynomial {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(u64, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(d, _)| *d)
    }

    pub fn coeff(&self, degree: u64) -> BigInt {
        self.terms
            .binary_search_by_key(&degree, |(d, _)| *d)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Dense coefficient list, index = degree, trailing zeros trimmed.
    pub fn to_dense(&self) -> Vec<BigInt> {
        let len = self.degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![BigInt::zero(); len];
        for (d, c) in &self.terms {
            out[*d as usize] = c.clone();
        }
        out
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Substitutes `X ↦ X^s`.
    pub fn inflate(&self, s: u64) -> Self {
        IntPolynomial {
            terms: self.terms.iter().map(|(d, c)| (d * s, c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (da, ca) in &self.terms {
            for (db, cb) in &other.terms {
                *acc.entry(da + db).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Self::from_map(acc)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .cloned()
                .chain(other.terms.iter().map(|(d, c)| (*d, -c))),
        )
    }

    /// Long division by a monic divisor; returns `(quotient, remainder)`.
    ///
    /// Panics if the divisor is not monic.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        let (&(deg_d, ref lead), lower) = divisor
            .terms
            .split_last()
            .expect("divisor must be nonzero");
        assert!(lead.is_one(), "divisor must be monic");
        let mut rem: BTreeMap<u64, BigInt> = self.terms.iter().cloned().collect();
        let mut quot: BTreeMap<u64, BigInt> = BTreeMap::new();
        while let Some((&top, _)) = rem.last_key_value() {
            if top < deg_d {
                break;
            }
            let c = rem.remove(&top).expect("present");
            let shift = top - deg_d;
            for (j, dj) in lower {
                let slot = rem.entry(shift + j).or_insert_with(BigInt::zero);
                *slot -= &c * dj;
                if slot.is_zero() {
                    rem.remove(&(shift + j));
                }
            }
            quot.insert(shift, c);
        }
        (Self::from_map(quot), Self::from_map(rem))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            match (*d, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{mag}*X")?,
                (_, true) => write!(f, "X^{d}")?,
                (_, false) => write!(f, "{mag}*X^{d}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(u64, String)> = self.terms.iter().map(|(d, c)| (*d, c.to_string())).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(u64, String)>::deserialize(d)?;
        let terms = pairs
            .into_iter()
            .map(|(deg, c)| c.parse::<BigInt>().map(|c| (deg, c)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(IntPolynomial::from_terms(terms))
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<IntPolynomial>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<IntPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `N`-th cyclotomic polynomial `Φ_N`, memoized.
///
/// For square-free `N` this divides `X^N − 1` by every `Φ_d` with `d | N`,
/// `d < N`. Otherwise `Φ_N(X) = Φ_r(X^{N/r})` with `r` the radical of `N`;
/// for a prime power `p^k` that is `1 + X^{p^{k−1}} + … + X^{(p−1)p^{k−1}}`.
pub fn cyclotomic_poly(n: u64) -> Result<Arc<IntPolynomial>, CyclotomicError> {
    if n == 0 {
        return Err(CyclotomicError::ZeroOrder);
    }
    if let Some(hit) = cache().lock().expect("cache lock").get(&n) {
        return Ok(hit.clone());
    }
    let radical: u64 = prime_factors(n).iter().product();
    let poly = if n == 1 {
        IntPolynomial::from_dense(&[-1, 1])
    } else if radical < n {
        cyclotomic_poly(radical)?.inflate(n / radical)
    } else {
        let mut acc = IntPolynomial::from_terms([(n, BigInt::one()), (0, -BigInt::one())]);
        for d in divisors(n).into_iter().filter(|&d| d < n) {
            let (q, r) = acc.div_rem_monic(cyclotomic_poly(d)?.as_ref());
            debug_assert!(r.is_zero());
            acc = q;
        }
        acc
    };
    let poly = Arc::new(poly);
    cache()
        .lock()
        .expect("cache lock")
        .entry(n)
        .or_insert_with(|| poly.clone());
    Ok(poly)
}

/// Result of testing `Σ_e ζ_N^e = 0` by division by `Φ_N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishCertificate {
    pub order: u64,
    /// Exponents reduced into `[0, N)`, sorted, with repetition.
    pub exponents: Vec<u64>,
    pub vanishes: bool,
    /// `P / Φ_N` when the division is exact.
    pub quotient: Option<IntPolynomial>,
}

impl VanishCertificate {
    pub fn digit_polynomial(&self) -> IntPolynomial {
        IntPolynomial::from_terms(self.exponents.iter().map(|&e| (e, BigInt::one())))
    }

    /// Re-checks the certificate from scratch: the quotient times `Φ_N` must
    /// reproduce the digit polynomial, and a non-vanishing claim must leave a
    /// nonzero remainder.
    pub fn verify(&self) -> bool {
        let Ok(phi) = cyclotomic_poly(self.order) else {
            return false;
        };
        let p = self.digit_polynomial();
        match (&self.quotient, self.vanishes) {
            (Some(q), true) => q.mul(&phi) == p,
            (None, false) => !p.div_rem_monic(&phi).1.is_zero(),
            _ => false,
        }
    }
}

/// Decides whether `Σ_e exp(2πi·e/N)` vanishes, exactly.
pub fn vanishing_sum(exponents: &[i128], order: u64) -> Result<VanishCertificate, CyclotomicError> {
    if order == 0 {
        return Err(CyclotomicError::ZeroOrder);
    }
    let n = order as i128;
    let mut reduced: Vec<u64> = exponents.iter().map(|e| e.rem_euclid(n) as u64).collect();
    reduced.sort_unstable();
    let p = IntPolynomial::from_terms(reduced.iter().map(|&e| (e, BigInt::one())));
    let (q, r) = p.div_rem_monic(cyclotomic_poly(order)?.as_ref());
    let vanishes = r.is_zero();
    Ok(VanishCertificate {
        order,
        exponents: reduced,
        vanishes,
        quotient: vanishes.then_some(q),
    })
}

/// Largest `j` with `m^j | n`.
pub fn valuation(mut n: u64, m: u64) -> u32 {
    let mut j = 0;
    while n > 0 && n.is_multiple_of(m) {
        n /= m;
        j += 1;
    }
    j
}

/// Default search depth for frequency `n`: `v_m(n) + 3`.
pub fn default_k_limit(n: u64, m: u64) -> u32 {
    valuation(n, m) + 3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IxEntry {
    pub n: u64,
    /// Smallest level whose digit sum vanishes at this frequency.
    pub k: Option<u32>,
    /// Largest level that was tried.
    pub k_limit: u32,
}

/// Frequency → level table for the vanishing digit sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IxTable {
    pub modulus: u64,
    pub entries: Vec<IxEntry>,
}

impl IxTable {
    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|e| e.k.is_some())
    }

    pub fn failures(&self) -> Vec<u64> {
        self.entries.iter().filter(|e| e.k.is_none()).map(|e| e.n).collect()
    }

    pub fn lookup(&self, n: u64) -> Option<u32> {
        self.entries.iter().find(|e| e.n == n).and_then(|e| e.k)
    }
}

/// Exponents `n·σ mod m^k` for the digit sum at frequency `n`, level `k`.
pub fn ix_exponents(sigma_star: &[BigInt], n: u64, order: u64) -> Vec<i128> {
    let big_order = BigInt::from(order);
    sigma_star
        .iter()
        .map(|s| {
            (s * n)
                .mod_floor(&big_order)
                .to_i128()
                .expect("residue below a 64-bit order")
        })
        .collect()
}

/// For each `n` in `1..=n_max`, the smallest `k ≤ k_limit` such that
/// `Σ_σ exp(2πi·nσ/m^k) = 0` over the normalized digits. `k_max = None`
/// uses [`default_k_limit`] per frequency.
///
/// A missing entry is inconclusive: no general bound on `k` is known.
pub fn condition_ix_search(
    sigma_star: &[BigInt],
    m: u64,
    n_max: u64,
    k_max: Option<u32>,
) -> Result<IxTable, CyclotomicError> {
    if m < 2 {
        return Err(CyclotomicError::BadModulus(m));
    }
    let entries = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let k_limit = k_max.unwrap_or_else(|| default_k_limit(n, m));
            for k in 1..=k_limit {
                let order = m
                    .checked_pow(k)
                    .ok_or(CyclotomicError::OrderOverflow { base: m, exp: k })?;
                let cert = vanishing_sum(&ix_exponents(sigma_star, n, order), order)?;
                if cert.vanishes {
                    return Ok(IxEntry {
                        n,
                        k: Some(k),
                        k_limit,
                    });
                }
            }
            Ok(IxEntry { n, k: None, k_limit })
        })
        .collect::<Result<Vec<_>, CyclotomicError>>()?;
    Ok(IxTable { modulus: m, entries })
}
