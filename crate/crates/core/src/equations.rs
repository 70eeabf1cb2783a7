//! The projective-polynomial equation X^(q+1) + X + a = 0 over GF(2^n) with
//! q = 2^k and gcd(k, n) = 1, plus its affine variant (v+1)^(q+1) + cv = 0.
//!
//! For a != 0 the equation has 0, 1, or 3 roots; in the three-root case the
//! roots are parameterized by a witness element u through closed formulas, and
//! the witness can be recovered from any root via the linearized solver.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, UExclusion};
use crate::gf2n::{gcd, Elem, FieldSpec};
use crate::Result;

/// Validated equation parameters: k normalized into 1..n (the equation only
/// depends on k mod n) and q = 2^k.
#[derive(Clone, Copy, Debug)]
pub(crate) struct GoldParams {
    pub k: u32,
    pub q: u128,
}

pub(crate) fn gold_params(f: &FieldSpec, k: u32) -> Result<GoldParams> {
    let n = f.n();
    if gcd(k as u64, n as u64) != 1 {
        return Err(Error::NotCoprime { k, n });
    }
    let k = k % n; // nonzero: k = 0 mod n would share the factor n
    Ok(GoldParams { k, q: 1u128 << k })
}

/// X^(q+1) + X, the left-hand side with a moved across.
fn phi(f: &FieldSpec, k: u32, x: Elem) -> Elem {
    f.mul(f.frobenius(x, k as i64), x) ^ x
}

/// Roots of X^(q+1) + X + a = 0 for one value of a.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSet {
    pub k: u32,
    pub a: Elem,
    pub roots: BTreeSet<Elem>,
}

/// Root-count census over all nonzero a for fixed (n, k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionHistogram {
    pub n: u32,
    pub k: u32,
    #[serde(rename = "N0")]
    pub n0: u64,
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "N3")]
    pub n3: u64,
}

/// The three-root parameterization attached to a witness u.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub u: Elem,
    pub a: Elem,
    pub x1: Elem,
    pub x2: Elem,
    pub x3: Elem,
}

impl Witness {
    pub fn roots(&self) -> BTreeSet<Elem> {
        BTreeSet::from([self.x1, self.x2, self.x3])
    }
}

/// Roots of the affine variant (v+1)^(q+1) + cv = 0, together with the
/// substituted equation they were solved through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineSolution {
    pub c: Elem,
    /// c^(-1/q); zero by convention when c = 0.
    pub reduced_a: Elem,
    /// Roots of V^(q+1) + V + reduced_a = 0; empty by convention when c = 0.
    #[serde(rename = "V_roots")]
    pub reduced_roots: BTreeSet<Elem>,
    pub v_roots: BTreeSet<Elem>,
}

/// Exhaustive scan for the roots of X^(q+1) + X + a = 0.
///
/// This is the oracle the rest of the crate is checked against: one pass over
/// the field, no algebraic shortcuts.
pub fn roots_bruteforce(f: &FieldSpec, k: u32, a: Elem) -> Result<RootSet> {
    let p = gold_params(f, k)?;
    let roots: BTreeSet<Elem> = f.elements().filter(|&x| phi(f, p.k, x) == a).collect();
    check_root_count(a, roots.len())?;
    Ok(RootSet { k, a, roots })
}

fn check_root_count(a: Elem, count: usize) -> Result<()> {
    let ok = if a.is_zero() {
        count == 2
    } else {
        matches!(count, 0 | 1 | 3)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnexpectedRootCount { a, count })
    }
}

/// Root sets for every a at once: one exhaustive pass bucketing X by
/// X^(q+1) + X. Index a -> slice of roots.
pub struct GoldRootTable {
    f: FieldSpec,
    k: u32,
    counts: Vec<u8>,
    slots: Vec<[Elem; 3]>,
}

impl GoldRootTable {
    pub fn build(f: &FieldSpec, k: u32) -> Result<GoldRootTable> {
        let p = gold_params(f, k)?;
        let size = f.order() as usize;
        let mut counts = vec![0u8; size];
        let mut slots = vec![[Elem::ZERO; 3]; size];
        for x in f.elements() {
            let a = phi(f, p.k, x).bits() as usize;
            let c = counts[a] as usize;
            if c == 3 {
                return Err(Error::UnexpectedRootCount {
                    a: Elem::from_bits(a as u32),
                    count: 4,
                });
            }
            slots[a][c] = x;
            counts[a] += 1;
        }
        Ok(GoldRootTable {
            f: *f,
            k: p.k,
            counts,
            slots,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn roots(&self, a: Elem) -> &[Elem] {
        let i = a.bits() as usize;
        &self.slots[i][..self.counts[i] as usize]
    }

    pub fn field(&self) -> &FieldSpec {
        &self.f
    }
}

/// Census of root counts over all a != 0 (one table pass).
pub fn count_histogram(f: &FieldSpec, k: u32) -> Result<SolutionHistogram> {
    let table = GoldRootTable::build(f, k)?;
    let (mut n0, mut n1, mut n3) = (0u64, 0u64, 0u64);
    for a in f.nonzero_elements() {
        match table.roots(a).len() {
            0 => n0 += 1,
            1 => n1 += 1,
            3 => n3 += 1,
            c => return Err(Error::UnexpectedRootCount { a, count: c }),
        }
    }
    debug_assert_eq!(n0 + n1 + n3, f.group_order());
    debug_assert_eq!(n1 + 3 * n3, f.order() - 2);
    Ok(SolutionHistogram {
        n: f.n(),
        k,
        n0,
        n1,
        n3,
    })
}

pub(crate) fn validate_u(f: &FieldSpec, u: Elem) -> Result<()> {
    if u == Elem::ZERO || u == Elem::ONE {
        return Err(Error::InvalidU {
            u,
            reason: UExclusion::Gf2,
        });
    }
    if f.n().is_multiple_of(2) && f.frobenius(u, 2) == u {
        return Err(Error::InvalidU {
            u,
            reason: UExclusion::Gf4,
        });
    }
    Ok(())
}

/// Build the three roots of X^(q+1) + X + a = 0 from a witness u, where
/// a = (u + u^q)^(q^2+1) / (u + u^(q^2))^(q+1). The result is substitution-
/// checked before it is returned.
pub fn witness_from_u(f: &FieldSpec, k: u32, u: Elem) -> Result<Witness> {
    let p = gold_params(f, k)?;
    validate_u(f, u)?;
    let q = p.q;
    let uq = f.frobenius(u, p.k as i64);
    let uq2 = f.frobenius(uq, p.k as i64);
    if u ^ uq2 == Elem::ZERO {
        return Err(Error::DegenerateU { u });
    }
    let w = u ^ uq; // nonzero: the kernel of x -> x + x^q is GF(2)
    let a = f.mul(
        f.pow(w, (q * q + 1) as i128)?,
        f.inv(f.pow(u ^ uq2, (q + 1) as i128)?)?,
    );
    let x1 = f.inv(Elem::ONE ^ f.pow(w, (q - 1) as i128)?)?;
    let scale = f.exp_class((q * q - q) as i128);
    let x2 = f.mul(f.pow_class(u, scale), x1);
    let x3 = f.mul(f.pow_class(u ^ Elem::ONE, scale), x1);
    let wit = Witness { u, a, x1, x2, x3 };
    for x in [x1, x2, x3] {
        assert_eq!(phi(f, p.k, x), a, "witness substitution failed at u = {u}");
    }
    assert_eq!(
        wit.roots().len(),
        3,
        "witness roots must be pairwise distinct"
    );
    Ok(wit)
}

/// Recover a witness u for a three-root value a: for each root x, the quantity
/// (1/x + 1)^(1/(q-1)) equals u + u^q for a suitable relabeling, so the
/// linearized solver yields candidates which are then filtered by the
/// a-formula. Returns the smallest valid u by bit-mask order.
pub fn recover_u(f: &FieldSpec, k: u32, a: Elem) -> Result<Elem> {
    let _ = gold_params(f, k)?;
    if a.is_zero() {
        return Err(Error::OutsideLemmaScope);
    }
    let rs = roots_bruteforce(f, k, a)?;
    if rs.roots.len() != 3 {
        return Err(Error::NoThreeSolutions {
            a,
            count: rs.roots.len(),
        });
    }
    let roots: Vec<Elem> = rs.roots.iter().copied().collect();
    recover_u_from_roots(f, k, a, &roots)
}

/// recover_u when the caller already holds the three roots.
pub(crate) fn recover_u_from_roots(f: &FieldSpec, k: u32, a: Elem, roots: &[Elem]) -> Result<Elem> {
    let p = gold_params(f, k)?;
    let inv_qm1 = f.exp_inv((p.q - 1) as i128)?;
    let want: BTreeSet<Elem> = roots.iter().copied().collect();
    let mut best: Option<Elem> = None;
    for &x in roots {
        // x = 0 or 1 would force a = 0, which was rejected above.
        let w = f.pow_class(f.inv(x)? ^ Elem::ONE, inv_qm1);
        for u in f.solve_frobenius_affine(p.k, w)? {
            match witness_from_u(f, k, u) {
                Ok(wit) if wit.a == a && wit.roots() == want => {
                    best = Some(best.map_or(u, |b| b.min(u)));
                }
                _ => {}
            }
        }
    }
    Ok(best.expect("every three-root value admits a witness"))
}

/// The closed-form v-triple attached to a witness u for the affine variant
/// (odd n): 1/(u+u^q)^(q^2-q) and its u- and (u+1)-scaled siblings.
pub fn closed_form_triple(f: &FieldSpec, k: u32, u: Elem) -> Result<[Elem; 3]> {
    let p = gold_params(f, k)?;
    validate_u(f, u)?;
    let q = p.q;
    let w = u ^ f.frobenius(u, p.k as i64);
    let v1 = f.inv(f.pow(w, (q * q - q) as i128)?)?;
    let scale = f.exp_class((q * q * q - q) as i128);
    let v2 = f.mul(f.pow_class(u, scale), v1);
    let v3 = f.mul(f.pow_class(u ^ Elem::ONE, scale), v1);
    Ok([v1, v2, v3])
}

/// Solve (v+1)^(q+1) + cv = 0 by substituting v = c^(1/q) V + 1, which turns
/// the equation into V^(q+1) + V + c^(-1/q) = 0, and mapping the brute-force
/// roots back. c = 0 yields the single root v = 1 by convention.
pub fn solve_affine_form(f: &FieldSpec, k: u32, c: Elem) -> Result<AffineSolution> {
    let p = gold_params(f, k)?;
    if c.is_zero() {
        return Ok(AffineSolution {
            c,
            reduced_a: Elem::ZERO,
            reduced_roots: BTreeSet::new(),
            v_roots: BTreeSet::from([Elem::ONE]),
        });
    }
    let back = (f.n() - p.k) as i64; // x -> x^(2^(n-k)) is the q-th root
    let reduced_a = f.frobenius(f.inv(c)?, back);
    let rs = roots_bruteforce(f, k, reduced_a)?;
    let c_qth_root = f.frobenius(c, back);
    let v_roots: BTreeSet<Elem> = rs
        .roots
        .iter()
        .map(|&bigv| f.mul(c_qth_root, bigv) ^ Elem::ONE)
        .collect();
    for &v in &v_roots {
        let lhs = f.mul(f.frobenius(v ^ Elem::ONE, p.k as i64), v ^ Elem::ONE) ^ f.mul(c, v);
        assert!(lhs.is_zero(), "affine substitution must preserve roots");
    }
    assert_eq!(v_roots.len(), rs.roots.len());
    if f.n() % 2 == 1 && v_roots.len() == 3 {
        // Consistency with the closed forms through the recovered witness.
        let roots: Vec<Elem> = rs.roots.iter().copied().collect();
        let u = recover_u_from_roots(f, k, reduced_a, &roots)?;
        let forms: BTreeSet<Elem> = closed_form_triple(f, k, u)?.into_iter().collect();
        assert_eq!(forms, v_roots, "closed forms must match the solved roots");
    }
    Ok(AffineSolution {
        c,
        reduced_a,
        reduced_roots: rs.roots,
        v_roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn gf8_root_sets() {
        let f = gf8();
        let rs = roots_bruteforce(&f, 1, Elem::ONE).unwrap();
        let expect: BTreeSet<Elem> = [0x2, 0x4, 0x6].map(Elem::from_bits).into();
        assert_eq!(rs.roots, expect);
        assert_eq!(
            roots_bruteforce(&f, 1, Elem::ZERO).unwrap().roots,
            BTreeSet::from([Elem::ZERO, Elem::ONE])
        );
        assert!(roots_bruteforce(&f, 1, Elem::from_bits(0x2))
            .unwrap()
            .roots
            .is_empty());
        assert_eq!(
            roots_bruteforce(&f, 1, Elem::from_bits(0x7)).unwrap().roots,
            BTreeSet::from([Elem::from_bits(0x3)])
        );
        assert_eq!(
            roots_bruteforce(&f, 3, Elem::ONE),
            Err(Error::NotCoprime { k: 3, n: 3 })
        );
    }

    #[test]
    fn root_table_agrees_with_scans() {
        for (n, k) in [(3u32, 1u32), (4, 3), (5, 2), (6, 5), (7, 4)] {
            let f = FieldSpec::new(n).unwrap();
            let table = GoldRootTable::build(&f, k).unwrap();
            for a in f.elements() {
                let scan = roots_bruteforce(&f, k, a).unwrap();
                let from_table: BTreeSet<Elem> = table.roots(a).iter().copied().collect();
                assert_eq!(from_table, scan.roots, "n={n} k={k} a={a}");
            }
        }
    }

    #[test]
    fn histograms_partition_the_field() {
        let f = gf8();
        let h = count_histogram(&f, 1).unwrap();
        assert_eq!((h.n0, h.n1, h.n3), (3, 3, 1));
        // Frozen from an independent tabulation of X^5 + X over GF(32).
        let f5 = FieldSpec::new(5).unwrap();
        let h5 = count_histogram(&f5, 2).unwrap();
        assert_eq!((h5.n0, h5.n1, h5.n3), (11, 15, 5));
        for (n, k) in [(4u32, 1u32), (6, 1), (7, 3), (8, 3), (9, 2)] {
            let f = FieldSpec::new(n).unwrap();
            let h = count_histogram(&f, k).unwrap();
            assert_eq!(h.n0 + h.n1 + h.n3, f.group_order());
            assert_eq!(h.n1 + 3 * h.n3, f.order() - 2);
        }
    }

    #[test]
    fn gf8_witness_golden() {
        let f = gf8();
        let wit = witness_from_u(&f, 1, Elem::from_bits(0x2)).unwrap();
        assert_eq!(wit.a, Elem::ONE);
        assert_eq!(
            (wit.x1, wit.x2, wit.x3),
            (
                Elem::from_bits(0x4),
                Elem::from_bits(0x6),
                Elem::from_bits(0x2)
            )
        );
    }

    #[test]
    fn witness_rejects_excluded_u() {
        let f = gf8();
        for u in [Elem::ZERO, Elem::ONE] {
            assert_eq!(
                witness_from_u(&f, 1, u),
                Err(Error::InvalidU {
                    u,
                    reason: UExclusion::Gf2
                })
            );
        }
        // In GF(16) the GF(4) subfield is {0, 1, 0x6, 0x7}.
        let f4 = FieldSpec::new(4).unwrap();
        for u in [0x6u32, 0x7].map(Elem::from_bits) {
            assert_eq!(
                witness_from_u(&f4, 1, u),
                Err(Error::InvalidU {
                    u,
                    reason: UExclusion::Gf4
                })
            );
        }
        assert!(witness_from_u(&f4, 1, Elem::from_bits(0x2)).is_ok());
    }

    #[test]
    fn every_admissible_u_produces_the_full_root_set() {
        for (n, k) in [(4u32, 1u32), (5, 1), (5, 2), (6, 1), (7, 2)] {
            let f = FieldSpec::new(n).unwrap();
            for u in f.elements() {
                match witness_from_u(&f, k, u) {
                    Ok(wit) => {
                        let rs = roots_bruteforce(&f, k, wit.a).unwrap();
                        assert_eq!(rs.roots, wit.roots(), "n={n} k={k} u={u}");
                    }
                    Err(Error::InvalidU { .. } | Error::DegenerateU { .. }) => {}
                    Err(e) => panic!("unexpected error at u={u}: {e}"),
                }
            }
        }
    }

    #[test]
    fn recover_round_trips() {
        let f = gf8();
        assert_eq!(recover_u(&f, 1, Elem::ONE).unwrap(), Elem::from_bits(0x2));
        assert_eq!(
            recover_u(&f, 1, Elem::from_bits(0x7)),
            Err(Error::NoThreeSolutions {
                a: Elem::from_bits(0x7),
                count: 1
            })
        );
        assert_eq!(recover_u(&f, 1, Elem::ZERO), Err(Error::OutsideLemmaScope));

        for (n, k) in [(4u32, 3u32), (5, 2), (6, 5)] {
            let f = FieldSpec::new(n).unwrap();
            for a in f.nonzero_elements() {
                let rs = roots_bruteforce(&f, k, a).unwrap();
                if rs.roots.len() != 3 {
                    continue;
                }
                let u = recover_u(&f, k, a).unwrap();
                let wit = witness_from_u(&f, k, u).unwrap();
                assert_eq!(wit.a, a);
                assert_eq!(wit.roots(), rs.roots);
                // Smallest valid witness: nothing below u reproduces a.
                for smaller in (2..u.bits()).map(Elem::from_bits) {
                    if let Ok(w2) = witness_from_u(&f, k, smaller) {
                        assert_ne!(w2.a, a, "u={u} is not minimal for a={a}");
                    }
                }
            }
        }
    }

    #[test]
    fn affine_form_golden_and_conventions() {
        let f = gf8();
        let sol = solve_affine_form(&f, 1, Elem::ONE).unwrap();
        assert_eq!(sol.reduced_a, Elem::ONE);
        assert_eq!(
            sol.reduced_roots,
            [0x2, 0x4, 0x6].map(Elem::from_bits).into()
        );
        assert_eq!(sol.v_roots, [0x3, 0x5, 0x7].map(Elem::from_bits).into());
        let zero = solve_affine_form(&f, 1, Elem::ZERO).unwrap();
        assert_eq!(zero.v_roots, BTreeSet::from([Elem::ONE]));
        assert!(zero.reduced_roots.is_empty());
        assert_eq!(zero.reduced_a, Elem::ZERO);
    }

    #[test]
    fn affine_roots_match_direct_scan() {
        for (n, k) in [(3u32, 1u32), (4, 1), (5, 3), (6, 1), (7, 5)] {
            let f = FieldSpec::new(n).unwrap();
            for c in f.elements() {
                let sol = solve_affine_form(&f, k, c).unwrap();
                let scan: BTreeSet<Elem> = f
                    .elements()
                    .filter(|&v| {
                        let vp1 = v ^ Elem::ONE;
                        (f.mul(f.frobenius(vp1, k as i64), vp1) ^ f.mul(c, v)).is_zero()
                    })
                    .collect();
                assert_eq!(sol.v_roots, scan, "n={n} k={k} c={c}");
            }
        }
    }

    #[test]
    fn gf8_closed_forms() {
        let f = gf8();
        let forms = closed_form_triple(&f, 1, Elem::from_bits(0x2)).unwrap();
        assert_eq!(forms.map(Elem::bits), [0x5, 0x7, 0x3]);
    }

    #[test]
    fn serialization_shapes() {
        let f = gf8();
        let rs = roots_bruteforce(&f, 1, Elem::ONE).unwrap();
        assert_eq!(
            serde_json::to_string(&rs).unwrap(),
            r#"{"k":1,"a":"0x1","roots":["0x2","0x4","0x6"]}"#
        );
        let h = count_histogram(&f, 1).unwrap();
        assert_eq!(
            serde_json::to_string(&h).unwrap(),
            r#"{"n":3,"k":1,"N0":3,"N1":3,"N3":1}"#
        );
        let wit = witness_from_u(&f, 1, Elem::from_bits(0x2)).unwrap();
        assert_eq!(
            serde_json::to_string(&wit).unwrap(),
            r#"{"u":"0x2","a":"0x1","x1":"0x4","x2":"0x6","x3":"0x2"}"#
        );
    }
}
