//! The substitution chain tying solutions of the Kasami derivative system to
//! roots of the reduced affine equation `(v+1)^(q+1) + c v = 0`, `c = b + 1`,
//! and the per-`b` count equivalence between the two sides.

use super::even::Gf4Embedding;
use super::odd::AffineRootIndex;
use crate::equations::gold_params;
use crate::gf2n::{Elem, FieldSpec};
use crate::{Error, Result};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use std::collections::BTreeSet;

/// Which of the two substitution chains applies; must match the parity of
/// the field degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// One solution tuple of the intermediate system, with its images under the
/// substitution chain: `z = x + y` and the reduced variable `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionPair {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
    pub v: Elem,
}

/// Everything the chain produces for one difference value `b`: the solution
/// tuples, and the number of admissible roots on the reduced side.
///
/// In odd degree each unordered solution pair carries exactly one tuple and
/// one distinct `v`. In even degree the GF(4)-scalings `(ηx, η'y)` of a
/// solution are solutions too, so one underlying value pair contributes nine
/// tuples projecting onto three distinct `v` — precisely the full root triple
/// of the reduced equation, all of them admissible. The reduced side
/// therefore counts each even-degree value pair three times, and the match
/// is checked at both granularities ([`ReductionRecord::counts_match`]).
#[derive(Clone, Debug)]
pub struct ReductionRecord {
    pub parity: Parity,
    pub b: Elem,
    pub c: Elem,
    pub pairs: Vec<ReductionPair>,
    pub admissible_v_count: usize,
    /// Distinct reduced images `v` among the tuples.
    pub distinct_v_count: usize,
    /// Distinct value pairs `{ω x^(q+1), ω y^(q+1)}` of the original system
    /// (`ω` is recovered from each tuple as `1/(x^(q+1) + y^(q+1))`).
    pub value_pair_count: usize,
}

impl ReductionRecord {
    /// The equivalence under test: the admissible-root count of the reduced
    /// equation accounts for the original system's solution pairs — one
    /// admissible root per pair in odd degree, the full root triple per pair
    /// in even degree — and coincides with the distinct reduced images.
    pub fn counts_match(&self) -> bool {
        let per_pair = match self.parity {
            Parity::Odd => 1,
            Parity::Even => 3,
        };
        self.distinct_v_count == self.admissible_v_count
            && per_pair * self.value_pair_count == self.admissible_v_count
    }
}

impl Serialize for ReductionRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ReductionRecord", 8)?;
        s.serialize_field("parity", &self.parity)?;
        s.serialize_field("b", &self.b)?;
        s.serialize_field("c", &self.c)?;
        s.serialize_field("pairs", &self.pairs)?;
        s.serialize_field("value_pair_count", &self.value_pair_count)?;
        s.serialize_field("distinct_v_count", &self.distinct_v_count)?;
        s.serialize_field("admissible_v_count", &self.admissible_v_count)?;
        s.serialize_field("counts_match", &self.counts_match())?;
        s.end()
    }
}

/// Whole-field checker: enumerates every solution tuple of the intermediate
/// system once, bucketed by `b`, alongside the root index of the reduced
/// equation.
pub struct ReductionChecker {
    index: AffineRootIndex,
    parity: Parity,
    pairs_by_b: Vec<Vec<ReductionPair>>,
}

impl ReductionChecker {
    pub fn new(f: &FieldSpec, k: u32) -> Result<ReductionChecker> {
        let p = gold_params(f, k)?;
        let index = AffineRootIndex::new(f, p.k)?;
        let size = 1usize << f.n();
        let k_i = p.k as i64;
        let q = p.q;
        let mut q1 = vec![Elem::ZERO; size];
        let mut q3 = vec![Elem::ZERO; size];
        for x in f.elements() {
            q1[x.bits() as usize] = f.mul(f.frobenius(x, k_i), x);
            q3[x.bits() as usize] = f.mul(f.frobenius(x, 3 * k_i), x);
        }
        let mut pairs_by_b: Vec<Vec<ReductionPair>> = vec![Vec::new(); size];

        if f.n() % 2 == 1 {
            // x -> x^(q+1) is a bijection in odd degree, so for each x there
            // is exactly one y with x^(q+1) + y^(q+1) = 1.
            let inv_q1 = f.exp_inv((q + 1) as i128)?;
            for x in f.elements() {
                let y = f.pow_class(q1[x.bits() as usize] ^ Elem::ONE, inv_q1);
                if x.bits() < y.bits() {
                    let z = x ^ y;
                    let v = f.pow(z, (q * q - 1) as i128).expect("z is nonzero");
                    let b = q3[x.bits() as usize] ^ q3[y.bits() as usize];
                    pairs_by_b[b.bits() as usize].push(ReductionPair { x, y, z, v });
                }
            }
            Ok(ReductionChecker {
                index,
                parity: Parity::Odd,
                pairs_by_b,
            })
        } else {
            // In even degree x -> x^(q+1) is 3-to-1 onto the cubes; nonzero
            // values split into the three cube-cosets, labelled by ω. The
            // labelling needs the GF(4) units to hit all three cosets, which
            // fails exactly when 6 divides n (the units are cubes then).
            if f.n().is_multiple_of(6) {
                return Err(Error::CosetCollapse { n: f.n() });
            }
            // The matching-coset system is x^(q+1) + y^(q+1) = ϖ with
            // ϖ = 1/ω, over nonzero x, y.
            let emb = Gf4Embedding::new(f, Elem::ONE)?;
            let mut pre_counts = vec![0u8; size];
            let mut pre_slots = vec![[Elem::ZERO; 3]; size];
            for x in f.nonzero_elements() {
                let slot = q1[x.bits() as usize].bits() as usize;
                let held = pre_counts[slot] as usize;
                if held == 3 {
                    return Err(Error::UnexpectedRootCount {
                        a: q1[x.bits() as usize],
                        count: held + 1,
                    });
                }
                pre_slots[slot][held] = x;
                pre_counts[slot] += 1;
            }
            for omega in emb.omegas {
                let varpi = f.inv(omega)?;
                let varpi_sq = f.mul(varpi, varpi);
                for x in f.nonzero_elements() {
                    let xi = x.bits() as usize;
                    let target = q1[xi] ^ varpi;
                    if target.is_zero() {
                        continue;
                    }
                    let ti = target.bits() as usize;
                    for &y in &pre_slots[ti][..pre_counts[ti] as usize] {
                        if x.bits() < y.bits() {
                            let z = x ^ y;
                            let v = f.mul(
                                varpi_sq,
                                f.pow(z, (q * q - 1) as i128).expect("z is nonzero"),
                            );
                            let b = q3[xi] ^ q3[y.bits() as usize];
                            pairs_by_b[b.bits() as usize].push(ReductionPair { x, y, z, v });
                        }
                    }
                }
            }
            Ok(ReductionChecker {
                index,
                parity: Parity::Even,
                pairs_by_b,
            })
        }
    }

    pub fn field(&self) -> &FieldSpec {
        self.index.field()
    }

    pub fn k(&self) -> u32 {
        self.index.k()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Assemble the record for one difference value `b`.
    pub fn check_b(&self, b: Elem) -> ReductionRecord {
        let f = self.index.field();
        let c = b ^ Elem::ONE;
        let mut pairs = self.pairs_by_b[b.bits() as usize].clone();
        pairs.sort_by_key(|p| (p.x.bits(), p.y.bits()));
        let admissible_v_count = self
            .index
            .roots(c)
            .iter()
            .filter(|&&v| {
                // In even degree the root v = 1 (which occurs only at c = 0,
                // that is b = 1) is the image of the solutions with x = 0 or
                // y = 0 of the unrestricted system; the coset parameterization
                // requires x, y nonzero, so that root has no pair to match
                // and is excluded from the reduced-side count.
                self.index.is_admissible(v) && (self.parity == Parity::Odd || v != Elem::ONE)
            })
            .count();
        let distinct_v: BTreeSet<Elem> = pairs.iter().map(|p| p.v).collect();
        let k_i = self.index.k() as i64;
        let value_pairs: BTreeSet<[Elem; 2]> = pairs
            .iter()
            .map(|p| {
                let q1x = f.mul(f.frobenius(p.x, k_i), p.x);
                let q1y = f.mul(f.frobenius(p.y, k_i), p.y);
                let omega = f
                    .inv(q1x ^ q1y)
                    .expect("value pair sums to a unit multiple of 1");
                let (a, b) = (f.mul(omega, q1x), f.mul(omega, q1y));
                if a.bits() <= b.bits() {
                    [a, b]
                } else {
                    [b, a]
                }
            })
            .collect();
        ReductionRecord {
            parity: self.parity,
            b,
            c,
            pairs,
            admissible_v_count,
            distinct_v_count: distinct_v.len(),
            value_pair_count: value_pairs.len(),
        }
    }
}

/// Build the chain for a single `b`. `parity` documents which chain the
/// caller expects and must match the degree of `f`, otherwise
/// [`Error::ParityMismatch`] is returned. Costs a full-field enumeration;
/// use [`ReductionChecker`] to amortize sweeps over many `b`.
pub fn reduction_equivalence(
    f: &FieldSpec,
    k: u32,
    b: Elem,
    parity: Parity,
) -> Result<ReductionRecord> {
    let n_parity = if f.n() % 2 == 1 {
        Parity::Odd
    } else {
        Parity::Even
    };
    if parity != n_parity {
        return Err(Error::ParityMismatch {
            n: f.n(),
            requested: if parity == Parity::Odd { "odd" } else { "even" },
        });
    }
    Ok(ReductionChecker::new(f, k)?.check_b(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> FieldSpec {
        FieldSpec::new(n).unwrap()
    }

    #[test]
    fn odd_chain_over_gf8() {
        let f = field(3);
        let checker = ReductionChecker::new(&f, 1).unwrap();
        assert_eq!(checker.parity(), Parity::Odd);
        for b in f.elements() {
            let record = checker.check_b(b);
            assert!(record.counts_match(), "counts differ at b={b}");
            // The Kasami map here is APN, so each b carries at most one pair;
            // exactly the odd-bit b values are reached.
            let expected = if b.bits() % 2 == 1 { 1 } else { 0 };
            assert_eq!(record.value_pair_count, expected, "pair count at b={b}");
            assert_eq!(record.distinct_v_count, expected);
        }
    }

    #[test]
    fn odd_chain_includes_the_zero_one_pair_at_b_one() {
        let f = field(3);
        let record = reduction_equivalence(&f, 1, Elem::ONE, Parity::Odd).unwrap();
        assert_eq!(record.c, Elem::ZERO);
        assert_eq!(record.pairs.len(), 1);
        let p = record.pairs[0];
        assert_eq!(
            (p.x, p.y, p.z, p.v),
            (Elem::ZERO, Elem::ONE, Elem::ONE, Elem::ONE)
        );
        assert_eq!(record.admissible_v_count, 1);
    }

    #[test]
    fn odd_chain_matches_for_larger_fields() {
        for (n, k) in [(5u32, 1u32), (5, 2), (7, 3)] {
            let f = field(n);
            let checker = ReductionChecker::new(&f, k).unwrap();
            for b in f.elements() {
                assert!(
                    checker.check_b(b).counts_match(),
                    "mismatch at n={n} k={k} b={b}"
                );
            }
        }
    }

    #[test]
    fn even_chain_spreads_each_value_pair_over_the_root_triple() {
        let f = field(4);
        let checker = ReductionChecker::new(&f, 1).unwrap();
        assert_eq!(checker.parity(), Parity::Even);
        let mut solvable = 0;
        for b in f.elements() {
            let record = checker.check_b(b);
            assert!(record.counts_match(), "counts differ at b={b}");
            if record.value_pair_count > 0 {
                solvable += 1;
                // One value pair: nine scaled tuples, landing on all three
                // roots of the reduced cubic.
                assert_eq!(record.pairs.len(), 9 * record.value_pair_count);
                assert_eq!(record.distinct_v_count, 3 * record.value_pair_count);
                assert_eq!(record.admissible_v_count, 3 * record.value_pair_count);
            }
        }
        assert!(solvable > 0);
    }

    #[test]
    fn even_chain_is_empty_on_the_subfield_gf2_values_of_b() {
        // b = 1 comes only from solutions with x = 0 or y = 0, which the
        // coset parameterization excludes; b = 0 would need x = y.
        let f = field(4);
        let checker = ReductionChecker::new(&f, 3).unwrap();
        for b in [Elem::ZERO, Elem::ONE] {
            let record = checker.check_b(b);
            assert_eq!(record.pairs.len(), 0);
            assert_eq!(record.admissible_v_count, 0);
            assert!(record.counts_match());
        }
    }

    #[test]
    fn even_chain_matches_for_gf256_and_gf1024() {
        for (n, k) in [(8u32, 3u32), (8, 5), (10, 3)] {
            let f = field(n);
            let checker = ReductionChecker::new(&f, k).unwrap();
            for b in f.elements() {
                assert!(
                    checker.check_b(b).counts_match(),
                    "mismatch at n={n} k={k} b={b}"
                );
            }
        }
    }

    #[test]
    fn even_chain_refuses_degrees_divisible_by_six() {
        // The GF(4) units are cubes there, so they cannot label the three
        // cube cosets and the chain is not defined.
        for (n, k) in [(6u32, 1u32), (6, 5), (12, 5)] {
            assert!(matches!(
                ReductionChecker::new(&field(n), k),
                Err(Error::CosetCollapse { .. })
            ));
        }
        // Odd multiples of 3 use the odd chain and stay available.
        assert!(ReductionChecker::new(&field(9), 2).is_ok());
    }

    #[test]
    fn parity_must_match_the_degree() {
        assert!(matches!(
            reduction_equivalence(&field(4), 1, Elem::ZERO, Parity::Odd),
            Err(Error::ParityMismatch {
                n: 4,
                requested: "odd"
            })
        ));
        assert!(matches!(
            reduction_equivalence(&field(5), 1, Elem::ZERO, Parity::Even),
            Err(Error::ParityMismatch {
                n: 5,
                requested: "even"
            })
        ));
    }

    #[test]
    fn record_serializes_with_derived_counts() {
        let record = reduction_equivalence(&field(3), 1, Elem::ONE, Parity::Odd).unwrap();
        let json = serde_json::to_string(&record).unwrap();
        assert_eq!(
            json,
            r#"{"parity":"odd","b":"0x1","c":"0x0","pairs":[{"x":"0x0","y":"0x1","z":"0x1","v":"0x1"}],"value_pair_count":1,"distinct_v_count":1,"admissible_v_count":1,"counts_match":true}"#
        );
    }
}
