//! Reference catalog of the known APN power-function exponent families.

use super::kasami_exponent;
use crate::gf2n::gcd;
use serde::Serialize;
use std::fmt;

/// The six classical families of APN exponents over GF(2^n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Gold,
    Kasami,
    Welch,
    Niho,
    Inverse,
    Dobbertin,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Gold => "Gold",
            Family::Kasami => "Kasami",
            Family::Welch => "Welch",
            Family::Niho => "Niho",
            Family::Inverse => "Inverse",
            Family::Dobbertin => "Dobbertin",
        };
        f.write_str(name)
    }
}

/// One catalog row: a family, its free parameter, the side condition that
/// makes it applicable at the chosen degree, and the resulting exponent.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyEntry {
    pub family: Family,
    /// The family parameter: `i` for Gold/Kasami, `t` otherwise.
    pub param: u32,
    pub condition: &'static str,
    pub d: u64,
}

/// All known-APN exponent entries applicable at degree `n`:
///
/// * Gold `2^i + 1` and Kasami `2^(2i) - 2^i + 1` for every `i` in `1..n`
///   with `gcd(i, n) = 1` (conjugate parameters both listed; the maps they
///   give are equivalent in pairs),
/// * Welch `2^t + 3`, Niho (`2^t + 2^(t/2) - 1` for even `t`, else
///   `2^t + 2^((3t+1)/2) - 1`), and Inverse `2^(2t) - 1`, each at odd
///   `n = 2t + 1`,
/// * Dobbertin `2^(4t) + 2^(3t) + 2^(2t) + 2^t - 1` when `n = 5t`.
///
/// Panics if `n < 3` (below that no nontrivial entry exists and the odd-`n`
/// parameter `t` would be zero).
pub fn catalog_table1(n: u32) -> Vec<FamilyEntry> {
    assert!(n >= 3, "catalog requires degree at least 3");
    let mut entries = Vec::new();
    for i in 1..n {
        if gcd(i as u64, n as u64) == 1 {
            entries.push(FamilyEntry {
                family: Family::Gold,
                param: i,
                condition: "gcd(i,n)=1",
                d: (1u64 << i) + 1,
            });
            entries.push(FamilyEntry {
                family: Family::Kasami,
                param: i,
                condition: "gcd(i,n)=1",
                d: kasami_exponent(i),
            });
        }
    }
    if n % 2 == 1 {
        let t = (n - 1) / 2;
        entries.push(FamilyEntry {
            family: Family::Welch,
            param: t,
            condition: "n=2t+1",
            d: (1u64 << t) + 3,
        });
        if t.is_multiple_of(2) {
            entries.push(FamilyEntry {
                family: Family::Niho,
                param: t,
                condition: "n=2t+1, t even",
                d: (1u64 << t) + (1u64 << (t / 2)) - 1,
            });
        } else {
            // 3t + 1 is even for odd t, so the division below is exact.
            #[allow(clippy::manual_div_ceil)]
            entries.push(FamilyEntry {
                family: Family::Niho,
                param: t,
                condition: "n=2t+1, t odd",
                d: (1u64 << t) + (1u64 << ((3 * t + 1) / 2)) - 1,
            });
        }
        entries.push(FamilyEntry {
            family: Family::Inverse,
            param: t,
            condition: "n=2t+1",
            d: (1u64 << (2 * t)) - 1,
        });
    }
    if n.is_multiple_of(5) {
        let t = n / 5;
        entries.push(FamilyEntry {
            family: Family::Dobbertin,
            param: t,
            condition: "n=5t",
            d: (1u64 << (4 * t)) + (1u64 << (3 * t)) + (1u64 << (2 * t)) + (1u64 << t) - 1,
        });
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2n::FieldSpec;
    use crate::kasami::PowerFunction;

    fn find(entries: &[FamilyEntry], family: Family) -> Vec<u64> {
        entries
            .iter()
            .filter(|e| e.family == family)
            .map(|e| e.d)
            .collect()
    }

    #[test]
    fn degree_five_includes_all_six_families() {
        let entries = catalog_table1(5);
        assert_eq!(find(&entries, Family::Gold), vec![3, 5, 9, 17]);
        assert_eq!(find(&entries, Family::Kasami), vec![3, 13, 57, 241]);
        assert_eq!(find(&entries, Family::Welch), vec![7]);
        assert_eq!(find(&entries, Family::Niho), vec![5]);
        assert_eq!(find(&entries, Family::Inverse), vec![15]);
        assert_eq!(find(&entries, Family::Dobbertin), vec![29]);
    }

    #[test]
    fn even_degree_has_no_odd_only_families() {
        let entries = catalog_table1(4);
        for family in [
            Family::Welch,
            Family::Niho,
            Family::Inverse,
            Family::Dobbertin,
        ] {
            assert!(find(&entries, family).is_empty());
        }
        assert_eq!(find(&entries, Family::Gold), vec![3, 9]);
        assert_eq!(find(&entries, Family::Kasami), vec![3, 57]);
    }

    #[test]
    fn niho_parity_split() {
        // n = 7: t = 3 is odd, so d = 2^3 + 2^5 - 1 = 39.
        let entries = catalog_table1(7);
        assert_eq!(find(&entries, Family::Niho), vec![39]);
        assert!(entries
            .iter()
            .any(|e| e.family == Family::Niho && e.condition.contains("t odd")));
    }

    #[test]
    fn dobbertin_appears_at_multiples_of_five() {
        assert_eq!(find(&catalog_table1(10), Family::Dobbertin), vec![339]);
        assert!(find(&catalog_table1(12), Family::Dobbertin).is_empty());
    }

    #[test]
    #[should_panic]
    fn degree_below_three_is_rejected() {
        catalog_table1(2);
    }

    #[test]
    fn every_entry_at_small_degrees_is_apn_by_full_table() {
        for n in 3..=8 {
            let spec = FieldSpec::new(n).unwrap();
            for entry in catalog_table1(n) {
                let f = PowerFunction::new(spec, entry.d);
                assert!(
                    f.is_apn_full(),
                    "{} d={} over GF(2^{n}) is not 2-uniform",
                    entry.family,
                    entry.d
                );
            }
        }
    }

    #[test]
    fn entry_serializes_with_family_name() {
        let entries = catalog_table1(5);
        let welch = entries.iter().find(|e| e.family == Family::Welch).unwrap();
        let json = serde_json::to_string(welch).unwrap();
        assert_eq!(
            json,
            r#"{"family":"Welch","param":2,"condition":"n=2t+1","d":7}"#
        );
    }
}
