//! Exact arithmetic in cyclotomic fields.
//!
//! An element is stored in the Zumbroich basis of `Q(zeta_n)` for the
//! smallest possible conductor `n`, so structural equality is field equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{factorize, gcd, lcm, mod_inv, units};
use crate::error::{Error, Result};

pub type Q = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclo {
    n: u32,
    terms: Vec<(u32, Q)>,
}

fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo {
            n: 1,
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Cyclo::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Cyclo::from_rational(q_int(v))
    }

    pub fn from_rational(v: Q) -> Self {
        if v.is_zero() {
            Cyclo::zero()
        } else {
            Cyclo {
                n: 1,
                terms: vec![(0, v)],
            }
        }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Cyclo::from_rational(Q::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `zeta_n^e` with `zeta_n = exp(2 pi i / n)`.
    pub fn root_of_unity(n: u32, e: i64) -> Self {
        assert!(n > 0);
        let mut dense = vec![Q::zero(); n as usize];
        dense[e.rem_euclid(n as i64) as usize] = Q::one();
        canonical(n as u64, dense)
    }

    /// Build from coefficients of powers of `zeta_n` (any spanning set).
    pub fn from_terms(n: u32, terms: &[(i64, Q)]) -> Self {
        assert!(n > 0);
        let mut dense = vec![Q::zero(); n as usize];
        for (e, c) in terms {
            dense[e.rem_euclid(n as i64) as usize] += c;
        }
        canonical(n as u64, dense)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &[(u32, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.n != 1 {
            return None;
        }
        Some(self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Q::zero))
    }

    pub fn as_integer(&self) -> Option<i64> {
        let q = self.as_rational()?;
        if q.is_integer() {
            q.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Algebraic integers have integral coordinates in the Zumbroich basis.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    fn dense_at(&self, target: u64) -> Vec<Q> {
        let mut dense = vec![Q::zero(); target as usize];
        let scale = target / self.n as u64;
        for (e, c) in &self.terms {
            dense[(*e as u64 * scale) as usize] += c;
        }
        dense
    }

    pub fn scale(&self, q: &Q) -> Self {
        if q.is_zero() {
            return Cyclo::zero();
        }
        Cyclo {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    fn add_impl(&self, other: &Cyclo, sign: bool) -> Cyclo {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign { other.clone() } else { -other };
        }
        let l = lcm(self.n as u64, other.n as u64);
        let mut dense = self.dense_at(l);
        let scale = l / other.n as u64;
        for (e, c) in &other.terms {
            let slot = &mut dense[(*e as u64 * scale) as usize];
            if sign {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
        if l == self.n as u64 && l == other.n as u64 {
            reduce_conductor(l, dense)
        } else {
            canonical(l, dense)
        }
    }

    fn mul_impl(&self, other: &Cyclo) -> Cyclo {
        if self.is_zero() || other.is_zero() {
            return Cyclo::zero();
        }
        if let Some(q) = self.as_rational() {
            return other.scale(&q);
        }
        if let Some(q) = other.as_rational() {
            return self.scale(&q);
        }
        let l = lcm(self.n as u64, other.n as u64);
        let (s1, s2) = (l / self.n as u64, l / other.n as u64);
        let mut dense = vec![Q::zero(); l as usize];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = (*e1 as u64 * s1 + *e2 as u64 * s2) % l;
                dense[e as usize] += c1 * c2;
            }
        }
        canonical(l, dense)
    }

    /// Image under `zeta -> zeta^k`; `k` only matters modulo the conductor.
    pub fn galois(&self, k: i64) -> Result<Cyclo> {
        let n = self.n as i64;
        let kk = k.rem_euclid(n);
        if gcd(kk as u64, n as u64) != 1 && n > 1 {
            return Err(Error::NotCoprime { k, n: self.n });
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let mut dense = vec![Q::zero(); n as usize];
        for (e, c) in &self.terms {
            dense[((*e as i64 * kk) % n) as usize] += c;
        }
        Ok(canonical(n as u64, dense))
    }

    /// Galois action for a residue known to be coprime to the conductor.
    pub fn gal(&self, k: i64) -> Cyclo {
        self.galois(k).expect("Galois residue coprime to conductor")
    }

    pub fn conj(&self) -> Cyclo {
        self.gal(-1)
    }

    pub fn inverse(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclo::from_rational(q.recip()));
        }
        let n = self.n as u64;
        let mut prod = Cyclo::one();
        for k in units(n) {
            if k != 1 {
                prod = &prod * &self.gal(k as i64);
            }
        }
        let norm = (&prod * self)
            .as_rational()
            .expect("field norm is rational");
        Ok(prod.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Cyclo) -> Result<Cyclo> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Cyclo> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclo::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// `Some((m, e))` with `self = zeta_m^e`, `m` minimal, if `self` is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<(u32, u32)> {
        if self.is_zero() {
            return None;
        }
        let l = lcm(2, self.n as u64);
        if !self.pow(l as i64).ok()?.is_one() {
            return None;
        }
        let mut divisors: Vec<u64> = (1..=l).filter(|d| l.is_multiple_of(*d)).collect();
        divisors.sort();
        for m in divisors {
            if self.pow(m as i64).ok()?.is_one() {
                for e in 0..m {
                    if gcd(e, m) == 1 && Cyclo::root_of_unity(m as u32, e as i64) == *self {
                        return Some((m as u32, e as u32));
                    }
                }
            }
        }
        None
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.root_of_unity_order().is_some()
    }

    /// Floating-point value, for diagnostics and numeric test oracles only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (e, c) in &self.terms {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * *e as f64 / self.n as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

fn reduce_conductor(n: u64, mut dense: Vec<Q>) -> Cyclo {
    if n == 1 {
        return Cyclo::from_rational(dense.pop().unwrap_or_else(Q::zero));
    }
    for (p, k) in factorize(n) {
        if p == 2 && k == 1 {
            let half = n / 2;
            let next = (0..half).map(|e| std::mem::take(&mut dense[(2 * e) as usize])).collect();
            return reduce_conductor(half, next);
        }
        if k >= 2 {
            if dense.iter().enumerate().all(|(e, c)| c.is_zero() || (e as u64).is_multiple_of(p)) {
                let m = n / p;
                let next = (0..m).map(|e| std::mem::take(&mut dense[(e * p) as usize])).collect();
                return reduce_conductor(m, next);
            }
            continue;
        }
        // p odd, exactly dividing n
        let step = n / p;
        let m = n / p;
        let mut next = vec![Q::zero(); m as usize];
        let mut ok = true;
        for r in 0..step {
            let mut common: Option<&Q> = None;
            let mut bad = 0;
            for i in 0..p {
                let e = r + i * step;
                if e.is_multiple_of(p) {
                    bad = e;
                    continue;
                }
                match common {
                    None => common = Some(&dense[e as usize]),
                    Some(c) if *c == dense[e as usize] => {}
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break;
            }
            if let Some(c) = common {
                if !c.is_zero() {
                    next[(bad / p) as usize] -= c;
                }
            }
        }
        if ok {
            return canonical(m, next);
        }
    }
    let terms = dense
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e as u32, c))
        .collect();
    Cyclo { n: n as u32, terms }
}

fn canonical(n: u64, mut dense: Vec<Q>) -> Cyclo {
    for (p, k) in factorize(n) {
        let pk = p.pow(k);
        let m = n / pk;
        let inv = mod_inv(m % pk, pk).unwrap();
        let step = n / p;
        let top = pk / p;
        for e in 0..n {
            if dense[e as usize].is_zero() {
                continue;
            }
            let a = (e % pk) * inv % pk;
            let digit = a / top;
            let bad = if p == 2 { digit == 1 } else { digit == 0 };
            if bad {
                let v = std::mem::take(&mut dense[e as usize]);
                let reach = if p == 2 { 1 } else { p - 1 };
                for i in 1..=reach {
                    dense[((e + i * step) % n) as usize] -= &v;
                }
            }
        }
    }
    reduce_conductor(n, dense)
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $f(self, rhs: &Cyclo) -> Cyclo {
                $body(self, rhs)
            }
        }
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $f(self, rhs: Cyclo) -> Cyclo {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $f(self, rhs: &Cyclo) -> Cyclo {
                $body(&self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Cyclo, b: &Cyclo| a.add_impl(b, true));
binop!(Sub, sub, |a: &Cyclo, b: &Cyclo| a.add_impl(b, false));
binop!(Mul, mul, |a: &Cyclo, b: &Cyclo| a.mul_impl(b));

impl std::iter::Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if self.n == 1 {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            match e {
                1 => write!(f, "E({})", self.n)?,
                _ => write!(f, "E({})^{}", self.n, e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    n: u32,
    c: Vec<(i64, String)>,
}

impl Serialize for Cyclo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson {
            n: self.n,
            c: self
                .terms
                .iter()
                .map(|(e, c)| (*e as i64, c.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CycloJson::deserialize(d)?;
        if raw.n == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        let mut terms = Vec::with_capacity(raw.c.len());
        for (e, s) in raw.c {
            let q: Q = s
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad rational {s:?}")))?;
            terms.push((e, q));
        }
        Ok(Cyclo::from_terms(raw.n, &terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u32, e: i64) -> Cyclo {
        Cyclo::root_of_unity(n, e)
    }

    #[test]
    fn minimal_conductor() {
        // zeta_6 = -zeta_3^2
        assert_eq!(z(6, 1), -z(3, 2));
        assert_eq!(z(4, 2), Cyclo::from_int(-1));
        assert_eq!(z(8, 2), z(4, 1));
        assert_eq!(z(12, 4), z(3, 1));
        // 1 + zeta_3 + zeta_3^2 = 0
        assert!((Cyclo::one() + z(3, 1) + z(3, 2)).is_zero());
        let s = z(5, 1) + z(5, 4);
        assert_eq!(s.conductor(), 5);
        // sqrt(-3) = zeta_3 - zeta_3^2 lives at conductor 3
        let r = z(3, 1) - z(3, 2);
        assert_eq!((&r * &r), Cyclo::from_int(-3));
        // sqrt(2) = zeta_8 + zeta_8^-1
        let s2 = z(8, 1) + z(8, 7);
        assert_eq!(&s2 * &s2, Cyclo::from_int(2));
        assert_eq!(s2.conductor(), 8);
    }

    #[test]
    fn galois_and_roots() {
        let a = z(12, 5);
        assert_eq!(a.root_of_unity_order(), Some((12, 5)));
        assert_eq!(Cyclo::from_int(-1).root_of_unity_order(), Some((2, 1)));
        assert_eq!(Cyclo::from_int(2).root_of_unity_order(), None);
        assert!(matches!(z(12, 1).galois(2), Err(Error::NotCoprime { .. })));
        assert_eq!(z(7, 1).galois(3).unwrap(), z(7, 3));
        assert_eq!(Cyclo::from_int(5).galois(2).unwrap(), Cyclo::from_int(5));
    }

    #[test]
    fn inverse_and_serde() {
        let a = Cyclo::from_int(2) + z(5, 1);
        let b = a.inverse().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(Cyclo::zero().inverse(), Err(Error::DivisionByZero));
        let s = serde_json::to_string(&a).unwrap();
        let back: Cyclo = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        // non-canonical input is normalized
        let raw: Cyclo = serde_json::from_str(r#"{"n":6,"c":[[1,"1"]]}"#).unwrap();
        assert_eq!(raw, z(6, 1));
    }

    fn arb(n: u32) -> impl Strategy<Value = Cyclo> {
        proptest::collection::vec((0..n as i64, -3i64..4, 1i64..3), 0..5).prop_map(move |ts| {
            let terms: Vec<(i64, Q)> = ts
                .into_iter()
                .map(|(e, a, b)| (e, Q::new(a.into(), b.into())))
                .collect();
            Cyclo::from_terms(n, &terms)
        })
    }

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-8 && (a.1 - b.1).abs() < 1e-8
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ring_laws(a in arb(12), b in arb(15), c in arb(20)) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn numeric_agreement(a in arb(24), b in arb(9)) {
            let (x, y) = (a.approx(), b.approx());
            prop_assert!(close((&a + &b).approx(), (x.0 + y.0, x.1 + y.1)));
            prop_assert!(close((&a * &b).approx(), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
        }

        #[test]
        fn galois_is_hom(a in arb(20), b in arb(20), k in prop::sample::select(vec![1i64, 3, 7, 9, 11, 13, 17, 19])) {
            let ga = a.gal(k);
            let gb = b.gal(k);
            prop_assert_eq!((&a * &b).gal(k), &ga * &gb);
            prop_assert_eq!((&a + &b).gal(k), &ga + &gb);
        }

        #[test]
        fn field_inverse(a in arb(15)) {
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }

        #[test]
        fn canonical_conductor_is_minimal(e in 0i64..60, k in 1u32..5) {
            let a = z(60 * k, e * k as i64);
            let b = z(60, e);
            prop_assert_eq!(a.clone(), b);
            // the stored conductor never exceeds what the value needs
            let g = gcd(e.rem_euclid(60) as u64, 60);
            let ord = 60 / g;
            let want = if ord % 4 == 2 { ord / 2 } else { ord };
            prop_assert_eq!(a.conductor() as u64, want);
        }
    }
}
