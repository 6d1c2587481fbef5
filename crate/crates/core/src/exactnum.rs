//! Exact rational arithmetic and exact arithmetic in cyclotomic fields ℚ(ζ_m).
//!
//! An element of ℚ(ζ_m) is stored as its residue modulo the m-th cyclotomic
//! polynomial Φ_m, i.e. as the coefficient vector of a rational polynomial of
//! degree < φ(m) evaluated at ζ_m. Two elements are equal iff their vectors are.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Euler's totient.
pub fn totient(m: u32) -> usize {
    let mut result = m as u64;
    let mut n = m as u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn phi_table() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static TABLE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The m-th cyclotomic polynomial, coefficients in ascending degree order.
///
/// Computed as (x^m - 1) / ∏_{d | m, d < m} Φ_d by exact division and memoized.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic polynomial order must be positive");
    if let Some(p) = phi_table().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let divisor = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &divisor);
        }
    }
    let result = Arc::new(num);
    phi_table()
        .lock()
        .unwrap()
        .entry(m)
        .or_insert_with(|| result.clone())
        .clone()
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        q[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    q
}

// Dense univariate helpers over ℚ, ascending coefficients, no trailing zeros.

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn upoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn upoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn upoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= &c * y;
        }
        q[k] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut q);
    (q, rem)
}

/// Reduces an ascending coefficient vector modulo the monic integer polynomial `phi`.
fn reduce_mod(mut coeffs: Vec<Rational>, phi: &[i64]) -> Vec<Rational> {
    let deg = phi.len() - 1;
    while coeffs.len() > deg {
        let c = coeffs.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let k = coeffs.len() - deg;
        for (j, &p) in phi[..deg].iter().enumerate() {
            if p != 0 {
                coeffs[k + j] -= &c * BigInt::from(p);
            }
        }
    }
    coeffs.resize(deg, Rational::zero());
    coeffs
}

/// Exact element of the cyclotomic field ℚ(ζ_m).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    fn from_raw(order: u32, raw: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        CyclotomicNumber {
            order,
            coeffs: reduce_mod(raw, &phi),
        }
    }

    pub fn zero(order: u32) -> Self {
        CyclotomicNumber {
            order,
            coeffs: vec![Rational::zero(); totient(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, q: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); totient(order)];
        coeffs[0] = q;
        CyclotomicNumber { order, coeffs }
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rational(order, rational_int(n))
    }

    /// ζ_m^k for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        Self::from_raw(order, raw)
    }

    /// The primitive root ζ_m = exp(2πi/m).
    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(order, 1)
    }

    /// Builds Σ c_k ζ_m^k from the given rational coefficients (any length).
    pub fn from_powers(order: u32, coeffs: Vec<Rational>) -> Self {
        Self::from_raw(order, coeffs)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CyclotomicNumber {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CyclotomicNumber {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Product reduced mod Φ_m. Rejects operands of different orders.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let raw = upoly_mul(&self.coeffs, &other.coeffs);
        Ok(Self::from_raw(self.order, raw))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_m.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| rational_int(c))
            .collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // Invariant: s * self ≡ r (mod Φ_m).
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = upoly_divrem(&r0, &r1);
            let s = upoly_sub(&s0, &upoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Φ_m is irreducible, so the final remainder is a nonzero constant.
        let c = r1[0].clone();
        let inv: Vec<Rational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_raw(self.order, inv))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under ζ_m ↦ ζ_{m'}^{m'/m}.
    pub fn embed(&self, target: u32) -> Result<Self> {
        if target % self.order != 0 {
            return Err(Error::InvalidParameter(format!(
                "cannot embed Q(zeta_{}) into Q(zeta_{})",
                self.order, target
            )));
        }
        let step = (target / self.order) as usize;
        let mut raw = vec![Rational::zero(); step * self.coeffs.len().max(1)];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        Ok(Self::from_raw(target, raw))
    }

    /// The rational value, if this element lies in ℚ.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Σ a_i b_i with a single reduction at the end.
    pub fn dot<'a, I>(order: u32, pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a CyclotomicNumber, &'a CyclotomicNumber)>,
    {
        let n = totient(order);
        let mut raw = vec![Rational::zero(); 2 * n - 1];
        for (a, b) in pairs {
            debug_assert!(a.order == order && b.order == order);
            for (i, x) in a.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.coeffs.iter().enumerate() {
                    if !y.is_zero() {
                        raw[i + j] += x * y;
                    }
                }
            }
        }
        Self::from_raw(order, raw)
    }
}

/// Checked product, `cyc_mul` in the operation table.
pub fn cyc_mul(a: &CyclotomicNumber, b: &CyclotomicNumber) -> Result<CyclotomicNumber> {
    a.checked_mul(b)
}

pub fn cyc_inv(a: &CyclotomicNumber) -> Result<CyclotomicNumber> {
    a.inv()
}

pub fn cyc_embed(a: &CyclotomicNumber, target: u32) -> Result<CyclotomicNumber> {
    a.embed(target)
}

// Operator forms panic on order mismatch; use the checked_* methods at API boundaries.

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.checked_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    write!(f, "z{}", self.order)?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Least common multiple of two orders, used when mixing fields.
pub fn lcm_order(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::zeta_pow(m, k)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(20).len(), 9);
    }

    #[test]
    fn phi_12_by_independent_division() {
        // x^12 - 1 divided by Φ_1 Φ_2 Φ_3 Φ_4 Φ_6 written out by hand.
        let mut prod = vec![Rational::one()];
        let known: [&[i64]; 5] = [&[-1, 1], &[1, 1], &[1, 1, 1], &[1, 0, 1], &[1, -1, 1]];
        for f in known {
            let f: Vec<Rational> = f.iter().map(|&c| rational_int(c)).collect();
            prod = upoly_mul(&prod, &f);
        }
        let mut x12 = vec![Rational::zero(); 13];
        x12[0] = rational_int(-1);
        x12[12] = Rational::one();
        let (q, r) = upoly_divrem(&x12, &prod);
        assert!(r.is_empty());
        let q: Vec<i64> = q.iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        assert_eq!(q, vec![1, 0, -1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), q);
    }

    #[test]
    fn product_of_divisor_polynomials_is_x_m_minus_one() {
        for m in 1..=30u32 {
            let mut prod = vec![Rational::one()];
            for d in 1..=m {
                if m % d == 0 {
                    let f: Vec<Rational> =
                        cyclotomic_polynomial(d).iter().map(|&c| rational_int(c)).collect();
                    prod = upoly_mul(&prod, &f);
                }
            }
            let mut expect = vec![Rational::zero(); m as usize + 1];
            expect[0] = rational_int(-1);
            expect[m as usize] = Rational::one();
            assert_eq!(prod, expect, "m = {m}");
            assert_eq!(cyclotomic_polynomial(m).len() - 1, totient(m));
        }
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&z(4, 1) * &z(4, 1), CyclotomicNumber::from_int(4, -1));
        assert!((&z(8, 1) * &z(8, 7)).is_one());
        let s = &(&CyclotomicNumber::one(3) + &z(3, 1)) + &z(3, 2);
        assert!(s.is_zero());
    }

    #[test]
    fn order_mismatch_is_rejected() {
        let err = cyc_mul(&z(4, 1), &z(8, 1)).unwrap_err();
        assert!(matches!(err, Error::OrderMismatch { left: 4, right: 8 }));
        assert!(z(3, 1).checked_add(&z(5, 1)).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(cyc_inv(&z(8, 1)).unwrap(), z(8, 7));
        assert_eq!(
            cyc_inv(&CyclotomicNumber::from_int(5, 2)).unwrap(),
            CyclotomicNumber::from_rational(5, rational(1, 2))
        );
        let a = &CyclotomicNumber::one(4) + &z(4, 1);
        let expect = (&CyclotomicNumber::one(4) - &z(4, 1)).scale(&rational(1, 2));
        let got = cyc_inv(&a).unwrap();
        assert_eq!(got, expect);
        assert!((&a * &got).is_one());
        assert!(matches!(
            cyc_inv(&CyclotomicNumber::zero(7)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn embed_examples() {
        let minus_one = CyclotomicNumber::from_int(2, -1);
        assert_eq!(cyc_embed(&minus_one, 8).unwrap(), z(8, 4));
        assert_eq!(cyc_embed(&z(4, 1), 8).unwrap(), z(8, 2));
        let w = &z(3, 1) + &z(3, 2);
        assert_eq!(cyc_embed(&w, 12).unwrap(), CyclotomicNumber::from_int(12, -1));
        assert!(cyc_embed(&z(3, 1), 8).is_err());
    }

    #[test]
    fn rationality_detection() {
        assert_eq!(CyclotomicNumber::zero(8).to_rational(), Some(Rational::zero()));
        let s = &z(8, 1) + &z(8, -1);
        assert_eq!((&s * &s).to_rational(), Some(rational_int(2)));
        assert_eq!(z(8, 1).to_rational(), None);
    }

    #[test]
    fn zeta_has_exact_order() {
        for m in [1u32, 2, 3, 4, 5, 8, 12, 20] {
            let zeta = CyclotomicNumber::zeta(m);
            for k in 1..m {
                assert!(!zeta.pow(k as u64).is_one(), "zeta_{m}^{k} = 1");
            }
            assert!(zeta.pow(m as u64).is_one());
        }
    }

    #[test]
    fn display_is_readable() {
        let a = &CyclotomicNumber::from_int(8, 2) - &z(8, 3);
        assert_eq!(a.to_string(), "2 - z8^3");
        assert_eq!(CyclotomicNumber::zero(4).to_string(), "0");
    }

    use proptest::prelude::*;

    const ORDERS: [u32; 5] = [1, 4, 8, 12, 20];

    fn arb_elem(m: u32) -> impl Strategy<Value = CyclotomicNumber> {
        prop::collection::vec((-6i64..=6, 1i64..=4), totient(m)).prop_map(move |cs| {
            CyclotomicNumber::from_powers(m, cs.into_iter().map(|(n, d)| rational(n, d)).collect())
        })
    }

    fn arb_triple() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber, CyclotomicNumber)> {
        prop::sample::select(ORDERS.to_vec()).prop_flat_map(|m| (arb_elem(m), arb_elem(m), arb_elem(m)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(5000))]

        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            let m = a.order();
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &CyclotomicNumber::zero(m), a.clone());
            prop_assert_eq!(&a * &CyclotomicNumber::one(m), a.clone());
            prop_assert!((&a - &a).is_zero());
            if a.is_zero() {
                prop_assert!(matches!(a.inv(), Err(Error::DivisionByZero)));
            } else {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn embedding_is_a_ring_map((a, b, _c) in arb_triple(), k in 1u32..=3) {
            let target = a.order() * k * 2;
            let (ea, eb) = (a.embed(target).unwrap(), b.embed(target).unwrap());
            prop_assert_eq!((&a + &b).embed(target).unwrap(), &ea + &eb);
            prop_assert_eq!((&a * &b).embed(target).unwrap(), &ea * &eb);
            prop_assert_eq!(a.is_zero(), ea.is_zero());
        }
    }
}
