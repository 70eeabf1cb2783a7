//! GF(2^n) arithmetic in polynomial basis, 2 ≤ n ≤ 28.
//!
//! An element is an n-bit mask over a fixed irreducible reduction polynomial.
//! Field construction is deterministic: by default the lexicographically
//! smallest irreducible polynomial of degree n and the smallest-bit-mask
//! primitive element are chosen, so any two runs agree on representations.

mod poly;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::Result;

/// A field element: bit i holds the coefficient of x^i.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub const fn from_bits(bits: u32) -> Elem {
        Elem(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::BitXor for Elem {
    type Output = Elem;
    /// Field addition.
    fn bitxor(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl std::ops::BitXorAssign for Elem {
    fn bitxor_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl FromStr for Elem {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> std::result::Result<Elem, Self::Err> {
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .unwrap_or(s);
        u32::from_str_radix(digits, 16).map(Elem)
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Elem, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// An exponent residue modulo 2^n - 1, valid for nonzero bases.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExpClass {
    value: u64,
    modulus: u64,
}

impl ExpClass {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

/// A concrete GF(2^n): degree, reduction polynomial, and a fixed generator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FieldSpec {
    n: u32,
    poly: u32,
    generator: Elem,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FieldSpec", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("poly", &format!("0x{:x}", self.poly))?;
        st.serialize_field("generator", &self.generator)?;
        st.end()
    }
}

impl FieldSpec {
    /// Build GF(2^n) over the smallest irreducible polynomial of degree n.
    pub fn new(n: u32) -> Result<FieldSpec> {
        Self::build(n, None)
    }

    /// Build GF(2^n) over a caller-supplied reduction polynomial.
    pub fn with_poly(n: u32, poly: u32) -> Result<FieldSpec> {
        Self::build(n, Some(poly))
    }

    fn build(n: u32, poly: Option<u32>) -> Result<FieldSpec> {
        if !(2..=28).contains(&n) {
            return Err(Error::InvalidField(format!(
                "degree n = {n} outside 2..=28"
            )));
        }
        let poly = match poly {
            Some(p) => {
                if poly::degree(p as u64) != n as i32 {
                    return Err(Error::InvalidField(format!(
                        "polynomial 0x{p:x} does not have degree {n}"
                    )));
                }
                if !poly::is_irreducible(p as u64, n) {
                    return Err(Error::InvalidField(format!(
                        "polynomial 0x{p:x} is reducible"
                    )));
                }
                p
            }
            None => poly::smallest_irreducible(n) as u32,
        };
        let mut f = FieldSpec {
            n,
            poly,
            generator: Elem::ONE,
        };
        let order = f.group_order();
        let cofactors: Vec<u64> = poly::prime_factors(order)
            .iter()
            .map(|p| order / p)
            .collect();
        f.generator = (2..=f.mask())
            .map(Elem)
            .find(|&g| cofactors.iter().all(|&c| f.pow_reduced(g, c) != Elem::ONE))
            .expect("the multiplicative group of a finite field is cyclic");
        Ok(f)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Number of field elements, 2^n.
    pub fn order(&self) -> u64 {
        1u64 << self.n
    }

    /// Order of the multiplicative group, 2^n - 1.
    pub fn group_order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    fn mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn contains(&self, e: Elem) -> bool {
        e.0 <= self.mask()
    }

    /// All 2^n elements, in ascending bit-mask order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order() as u32).map(Elem)
    }

    /// All nonzero elements, in ascending bit-mask order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.order() as u32).map(Elem)
    }

    fn reduce(&self, mut v: u64) -> Elem {
        let n = self.n;
        let poly = self.poly as u64;
        while v >> n != 0 {
            let d = 63 - v.leading_zeros();
            v ^= poly << (d - n);
        }
        Elem(v as u32)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let mut acc: u64 = 0;
        let a64 = a.0 as u64;
        let mut b = b.0;
        while b != 0 {
            let i = b.trailing_zeros();
            acc ^= a64 << i;
            b &= b - 1;
        }
        self.reduce(acc)
    }

    pub fn sq(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_reduced(a, self.group_order() - 1))
    }

    fn pow_reduced(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.sq(base);
            e >>= 1;
        }
        acc
    }

    /// a^e. For a != 0 the exponent acts modulo 2^n - 1; for a = 0 the sign of
    /// the unreduced exponent governs: 0^0 = 1, 0^positive = 0, 0^negative is
    /// a division by zero.
    pub fn pow(&self, a: Elem, e: i128) -> Result<Elem> {
        if a.is_zero() {
            return match e.signum() {
                -1 => Err(Error::DivisionByZero),
                0 => Ok(Elem::ONE),
                _ => Ok(Elem::ZERO),
            };
        }
        let m = self.group_order() as i128;
        Ok(self.pow_reduced(a, e.rem_euclid(m) as u64))
    }

    /// a^e for an already-reduced exponent class (a = 0 follows 0^0 = 1).
    pub fn pow_class(&self, a: Elem, e: ExpClass) -> Elem {
        debug_assert_eq!(e.modulus, self.group_order());
        if a.is_zero() {
            return if e.value == 0 { Elem::ONE } else { Elem::ZERO };
        }
        self.pow_reduced(a, e.value)
    }

    /// a^(2^i); i acts modulo n.
    pub fn frobenius(&self, a: Elem, i: i64) -> Elem {
        let steps = i.rem_euclid(self.n as i64);
        let mut v = a;
        for _ in 0..steps {
            v = self.sq(v);
        }
        v
    }

    /// Absolute trace, as a bit.
    pub fn trace(&self, a: Elem) -> u8 {
        let mut acc = a;
        let mut t = a;
        for _ in 1..self.n {
            t = self.sq(t);
            acc ^= t;
        }
        debug_assert!(acc.0 <= 1, "trace must land in GF(2)");
        acc.0 as u8
    }

    /// The residue of e modulo 2^n - 1.
    pub fn exp_class(&self, e: i128) -> ExpClass {
        let m = self.group_order();
        ExpClass {
            value: e.rem_euclid(m as i128) as u64,
            modulus: m,
        }
    }

    /// Inverse of e modulo 2^n - 1, when gcd(e, 2^n - 1) = 1.
    pub fn exp_inv(&self, e: i128) -> Result<ExpClass> {
        let m = self.group_order();
        let r = e.rem_euclid(m as i128) as u64;
        let (g, x, _) = egcd(r as i128, m as i128);
        if g != 1 {
            return Err(Error::NotInvertibleExponent {
                e: r,
                modulus: m,
                gcd: g as u64,
            });
        }
        Ok(ExpClass {
            value: x.rem_euclid(m as i128) as u64,
            modulus: m,
        })
    }

    /// All u with u^(2^k) + u = w, via Gaussian elimination over GF(2).
    /// For gcd(k, n) = 1 the kernel is {0, 1}, so there are 0 or 2 solutions.
    pub fn solve_frobenius_affine(&self, k: u32, w: Elem) -> Result<Vec<Elem>> {
        if gcd(k as u64, self.n as u64) != 1 {
            return Err(Error::NotCoprime { k, n: self.n });
        }
        let n = self.n as usize;
        // Augmented rows of [M | w], M the matrix of u -> u^(2^k) + u.
        let mut cols = vec![0u32; n];
        for (j, c) in cols.iter_mut().enumerate() {
            let bj = Elem(1 << j);
            *c = (self.frobenius(bj, k as i64) ^ bj).0;
        }
        let mut rows = vec![0u64; n];
        for (i, row) in rows.iter_mut().enumerate() {
            let mut r = 0u64;
            for (j, c) in cols.iter().enumerate() {
                r |= (((c >> i) & 1) as u64) << j;
            }
            r |= (((w.0 >> i) & 1) as u64) << n;
            *row = r;
        }
        let mut pivots = Vec::with_capacity(n);
        let mut rank = 0;
        for c in 0..n {
            if let Some(p) = (rank..n).find(|&i| rows[i] >> c & 1 == 1) {
                rows.swap(rank, p);
                for i in 0..n {
                    if i != rank && rows[i] >> c & 1 == 1 {
                        rows[i] ^= rows[rank];
                    }
                }
                pivots.push(c);
                rank += 1;
            }
        }
        debug_assert_eq!(rank, n - 1, "kernel of u -> u^q + u must be GF(2)");
        if rows[rank..].iter().any(|&r| r != 0) {
            return Ok(Vec::new()); // inconsistent: w is not in the image
        }
        let mut u0 = 0u32;
        for (ri, &c) in pivots.iter().enumerate() {
            if rows[ri] >> n & 1 == 1 {
                u0 |= 1 << c;
            }
        }
        let mut sols = vec![Elem(u0), Elem(u0 ^ 1)];
        sols.sort_unstable();
        debug_assert!(sols.iter().all(|&u| self.frobenius(u, k as i64) ^ u == w));
        Ok(sols)
    }

    /// Exhaustive check that trace takes each value exactly 2^(n-1) times.
    pub fn trace_balanced(&self) -> bool {
        let zeros = self.elements().filter(|&e| self.trace(e) == 0).count() as u64;
        zeros == self.order() / 2
    }

    /// Randomized field-axiom suite with a deterministic seed.
    pub fn check_axioms(&self, cases: u64, seed: u64) -> AxiomReport {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mask = self.mask();
        let mut failures = 0u64;
        for _ in 0..cases {
            let a = Elem(rng.gen::<u32>() & mask);
            let b = Elem(rng.gen::<u32>() & mask);
            let c = Elem(rng.gen::<u32>() & mask);
            let ok = self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                && self.mul(a, b) == self.mul(b, a)
                && self.mul(a, b ^ c) == (self.mul(a, b) ^ self.mul(a, c))
                && self.mul(a, Elem::ONE) == a
                && (a.is_zero() || {
                    let ai = self.inv(a).unwrap();
                    self.mul(a, ai) == Elem::ONE && self.inv(ai).unwrap() == a
                });
            if !ok {
                failures += 1;
            }
        }
        AxiomReport {
            n: self.n,
            cases,
            failures,
        }
    }
}

/// Outcome of a randomized axiom run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AxiomReport {
    pub n: u32,
    pub cases: u64,
    pub failures: u64,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

/// Whether `gcd(a, b) = 1` — the coprimality precondition shared by the
/// equation machinery (used to enumerate the valid `k` for a degree `n`).
pub fn coprime(a: u64, b: u64) -> bool {
    gcd(a, b) == 1
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn default_fields_are_deterministic() {
        let f = gf8();
        assert_eq!(f.poly(), 0xb);
        assert_eq!(f.generator(), Elem(0x2));
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(f2.poly(), 0x7);
        assert_eq!(f2.generator(), Elem(0x2));
        // The smallest degree-8 irreducible is not primitive, so the smallest
        // primitive element is x + 1, not x.
        let f8 = FieldSpec::new(8).unwrap();
        assert_eq!(f8.poly(), 0x11b);
        assert_eq!(f8.generator(), Elem(0x3));
    }

    #[test]
    fn generator_has_full_order_bruteforce() {
        for n in 2..=10 {
            let f = FieldSpec::new(n).unwrap();
            // Oracle: repeated multiplication, no pow involved.
            let order_of = |g: Elem| {
                let mut v = g;
                let mut ord = 1u64;
                while v != Elem::ONE {
                    v = f.mul(v, g);
                    ord += 1;
                }
                ord
            };
            assert_eq!(order_of(f.generator()), f.group_order());
            for smaller in 2..f.generator().bits() {
                assert_ne!(order_of(Elem(smaller)), f.group_order());
            }
        }
    }

    #[test]
    fn field_construction_rejects_bad_input() {
        assert!(matches!(FieldSpec::new(1), Err(Error::InvalidField(_))));
        assert!(matches!(FieldSpec::new(29), Err(Error::InvalidField(_))));
        // x^3 + 1 = (x + 1)(x^2 + x + 1) is reducible.
        assert!(matches!(
            FieldSpec::with_poly(3, 0x9),
            Err(Error::InvalidField(_))
        ));
        // Degree mismatch.
        assert!(matches!(
            FieldSpec::with_poly(4, 0xb),
            Err(Error::InvalidField(_))
        ));
        assert_eq!(FieldSpec::with_poly(3, 0xb).unwrap(), gf8());
    }

    #[test]
    fn gf8_products_and_inverses() {
        let f = gf8();
        let alpha = Elem(0x2);
        assert_eq!(f.mul(alpha, f.sq(alpha)), Elem(0x3)); // x * x^2 = x + 1
        assert_eq!(f.inv(alpha).unwrap(), Elem(0x5));
        assert_eq!(f.mul(alpha, Elem(0x5)), Elem::ONE);
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn aes_field_known_inverse_pair() {
        // GF(256) over 0x11b: 0x53 * 0xca = 1 is a standard table value.
        let f = FieldSpec::new(8).unwrap();
        assert_eq!(f.mul(Elem(0x53), Elem(0xca)), Elem::ONE);
        assert_eq!(f.inv(Elem(0x53)).unwrap(), Elem(0xca));
    }

    #[test]
    fn pow_zero_base_follows_unreduced_exponent() {
        let f = gf8();
        assert_eq!(f.pow(Elem::ZERO, 0).unwrap(), Elem::ONE);
        assert_eq!(f.pow(Elem::ZERO, 1).unwrap(), Elem::ZERO);
        // 2^n - 1 would reduce to 0, but the unreduced sign governs.
        assert_eq!(f.pow(Elem::ZERO, 7).unwrap(), Elem::ZERO);
        assert_eq!(f.pow(Elem::ZERO, -1), Err(Error::DivisionByZero));
    }

    #[test]
    fn pow_reduces_exponents_for_nonzero_base() {
        let f = gf8();
        let a = Elem(0x6);
        assert_eq!(f.pow(a, 7).unwrap(), Elem::ONE);
        assert_eq!(f.pow(a, 8).unwrap(), a);
        assert_eq!(f.pow(a, -1).unwrap(), f.inv(a).unwrap());
        assert_eq!(f.pow(a, -6).unwrap(), f.pow(a, 1).unwrap());
        // Wide exponents reduce correctly.
        assert_eq!(
            f.pow(a, (1i128 << 81) + 1).unwrap(),
            f.pow(a, (1i128 << 81) % 7 + 1).unwrap()
        );
    }

    #[test]
    fn frobenius_wraps_and_matches_pow() {
        let f = gf8();
        for e in f.elements() {
            assert_eq!(f.frobenius(e, 3), e);
            assert_eq!(f.frobenius(e, -1), f.frobenius(e, 2));
            assert_eq!(f.frobenius(e, 1), f.sq(e));
            if !e.is_zero() {
                assert_eq!(f.frobenius(e, 2), f.pow(e, 4).unwrap());
            }
        }
    }

    #[test]
    fn gf8_trace_values() {
        let f = gf8();
        assert_eq!(f.trace(Elem::ONE), 1); // n odd
        assert_eq!(f.trace(Elem(0x2)), 0);
        assert_eq!(f.trace(Elem(0x3)), 1);
    }

    #[test]
    fn trace_is_balanced_on_small_fields() {
        for n in 2..=12 {
            assert!(FieldSpec::new(n).unwrap().trace_balanced());
        }
    }

    #[test]
    fn exp_inverse_examples() {
        let f3 = gf8();
        assert_eq!(f3.exp_inv(3).unwrap().value(), 5); // 3 * 5 = 15 = 1 mod 7
        let f4 = FieldSpec::new(4).unwrap();
        assert_eq!(
            f4.exp_inv(3),
            Err(Error::NotInvertibleExponent {
                e: 3,
                modulus: 15,
                gcd: 3
            })
        );
        // Applying an inverse class undoes the power map.
        let e = f3.exp_inv(3).unwrap();
        for a in f3.nonzero_elements() {
            assert_eq!(f3.pow_class(f3.pow(a, 3).unwrap(), e), a);
        }
    }

    #[test]
    fn frobenius_affine_solver_examples() {
        let f = gf8();
        assert_eq!(
            f.solve_frobenius_affine(1, Elem::ZERO).unwrap(),
            vec![Elem::ZERO, Elem::ONE]
        );
        assert_eq!(
            f.solve_frobenius_affine(1, Elem(0x2)).unwrap(),
            vec![Elem(0x4), Elem(0x5)]
        );
        assert_eq!(
            f.solve_frobenius_affine(1, Elem::ONE).unwrap(),
            Vec::<Elem>::new()
        );
        let f4 = FieldSpec::new(4).unwrap();
        assert_eq!(
            f4.solve_frobenius_affine(2, Elem::ONE),
            Err(Error::NotCoprime { k: 2, n: 4 })
        );
    }

    #[test]
    fn frobenius_affine_solver_matches_scan() {
        for (n, k) in [(4u32, 1u32), (5, 2), (6, 5), (7, 3)] {
            let f = FieldSpec::new(n).unwrap();
            for w in f.elements() {
                let expect: Vec<Elem> = f
                    .elements()
                    .filter(|&u| f.frobenius(u, k as i64) ^ u == w)
                    .collect();
                assert_eq!(f.solve_frobenius_affine(k, w).unwrap(), expect);
            }
        }
    }

    #[test]
    fn axiom_suite_is_clean_and_deterministic() {
        let f = FieldSpec::new(8).unwrap();
        let r = f.check_axioms(2_000, 7);
        assert!(r.pass());
        assert_eq!(r.cases, 2_000);
    }

    #[test]
    fn elem_hex_round_trip() {
        let e: Elem = "0x1a".parse().unwrap();
        assert_eq!(e, Elem(0x1a));
        assert_eq!(e.to_string(), "0x1a");
        assert_eq!("1A".parse::<Elem>().unwrap(), Elem(0x1a));
        assert!("zz".parse::<Elem>().is_err());
    }
}
