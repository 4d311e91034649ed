//! Built-in instance families with known imbalance and boundary values.
//!
//! Each family produces monotone consistent sums with a full first line and
//! carries the values the construction or the oracle is expected to hit, so
//! they double as golden tests and as convenient CLI inputs.

use std::fmt;

use thiserror::Error;

use crate::sums::LineSums;

/// The five built-in families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `ex51`: square with sums `(n, n-1, n-1, n-3, n-3, ..., 2, 2)` for odd
    /// `n`; both boundary minima are `3n - 1`.
    Alternating,
    /// `ex52`: square with sums `(n, 2, 2, ..., 2)`; both boundary minima
    /// are `4n - 4`.
    Spike,
    /// `ex53`: tall grid with columns `(kn-k+1, k+1, ..., k+1)` and rows
    /// `(n, 2, ..., 2)`; minimal horizontal boundary `4n - 4`.
    TallSpike,
    /// `ex54`: square of side `2k + 1` with sums `(2k+1, k+1, ..., k+1)`;
    /// imbalance exactly `k^2`.
    Plateau,
    /// `ex55`: `(3k+1) x 3k` grid whose construction output has vertical
    /// boundary `4k^2 + 4k + 2`, superlinear in the side length.
    TallPlateau,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Alternating,
        Family::Spike,
        Family::TallSpike,
        Family::Plateau,
        Family::TallPlateau,
    ];

    /// Stable CLI name.
    pub fn name(&self) -> &'static str {
        match self {
            Family::Alternating => "ex51",
            Family::Spike => "ex52",
            Family::TallSpike => "ex53",
            Family::Plateau => "ex54",
            Family::TallPlateau => "ex55",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// How many parameters [`generate`] expects.
    pub fn parameter_count(&self) -> usize {
        match self {
            Family::TallSpike => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BadParameter {
    #[error("{family} expects {expected} parameter(s), got {got}")]
    Arity {
        family: Family,
        expected: usize,
        got: usize,
    },
    #[error("{family} parameter {value} is invalid: {reason}")]
    Invalid {
        family: Family,
        value: u64,
        reason: &'static str,
    },
}

/// An expected quantity together with where it comes from, so a failing
/// check can name the claim that broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedValue {
    pub value: u64,
    pub source: &'static str,
}

/// Expected quantities attached to a generated instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectations {
    pub alpha: Option<ExpectedValue>,
    /// Exact minimum horizontal boundary over all images with these margins.
    pub min_horizontal: Option<ExpectedValue>,
    /// Exact minimum vertical boundary over all images with these margins.
    pub min_vertical: Option<ExpectedValue>,
    /// Vertical boundary of the image this crate's construction produces.
    pub construction_vertical: Option<ExpectedValue>,
}

/// A generated family instance.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub family: Family,
    pub parameters: Vec<u64>,
    pub sums: LineSums,
    pub expected: Expectations,
}

/// Builds the instance of `family` for the given parameters: `n` for
/// `ex51`/`ex52`, `k` then `n` for `ex53`, `k` for `ex54`/`ex55`.
pub fn generate(family: Family, parameters: &[u64]) -> Result<FamilyInstance, BadParameter> {
    if parameters.len() != family.parameter_count() {
        return Err(BadParameter::Arity {
            family,
            expected: family.parameter_count(),
            got: parameters.len(),
        });
    }
    let invalid = |value: u64, reason: &'static str| BadParameter::Invalid {
        family,
        value,
        reason,
    };
    let cap = crate::sums::MAX_DIMENSION as u64;
    let build = |rows: Vec<u32>, cols: Vec<u32>| {
        LineSums::new(rows, cols).expect("family sums are monotone and within the size cap")
    };
    let (sums, expected) = match family {
        Family::Alternating => {
            let n = parameters[0];
            if n < 3 || n.is_multiple_of(2) {
                return Err(invalid(n, "n must be odd and at least 3"));
            }
            if n > cap {
                return Err(invalid(n, "instance exceeds the size cap"));
            }
            let mut line = vec![n as u32];
            let mut value = n as u32 - 1;
            while value >= 2 {
                line.push(value);
                line.push(value);
                value -= 2;
            }
            let sums = build(line.clone(), line);
            let expected = Expectations {
                alpha: Some(ExpectedValue {
                    value: (n - 1) / 2,
                    source: "alternating family: alpha = (n - 1) / 2",
                }),
                min_horizontal: Some(ExpectedValue {
                    value: 3 * n - 1,
                    source: "alternating family: minimal boundary 3n - 1",
                }),
                min_vertical: Some(ExpectedValue {
                    value: 3 * n - 1,
                    source: "alternating family: minimal boundary 3n - 1",
                }),
                construction_vertical: None,
            };
            (sums, expected)
        }
        Family::Spike => {
            let n = parameters[0];
            if n < 2 {
                return Err(invalid(n, "n must be at least 2"));
            }
            if n > cap {
                return Err(invalid(n, "instance exceeds the size cap"));
            }
            let mut line = vec![n as u32];
            line.extend(vec![2u32; n as usize - 1]);
            let sums = build(line.clone(), line);
            let expected = Expectations {
                alpha: Some(ExpectedValue {
                    value: n - 2,
                    source: "spike family: alpha = n - 2",
                }),
                min_horizontal: Some(ExpectedValue {
                    value: 4 * n - 4,
                    source: "spike family: minimal boundary 4n - 4",
                }),
                min_vertical: Some(ExpectedValue {
                    value: 4 * n - 4,
                    source: "spike family: minimal boundary 4n - 4",
                }),
                construction_vertical: None,
            };
            (sums, expected)
        }
        Family::TallSpike => {
            let (k, n) = (parameters[0], parameters[1]);
            if k < 1 {
                return Err(invalid(k, "k must be at least 1"));
            }
            if n < 2 {
                return Err(invalid(n, "n must be at least 2"));
            }
            // Cap the raw parameters before multiplying so the dimension
            // arithmetic cannot wrap.
            if k > cap || n > cap || k * (n - 1) + 1 > cap {
                return Err(invalid(k, "instance exceeds the size cap"));
            }
            let m = k * (n - 1) + 1;
            let mut rows = vec![n as u32];
            rows.extend(vec![2u32; m as usize - 1]);
            let mut cols = vec![m as u32];
            cols.extend(vec![k as u32 + 1; n as usize - 1]);
            let sums = build(rows, cols);
            let expected = Expectations {
                alpha: Some(ExpectedValue {
                    value: k * (n - 2),
                    source: "tall spike family: alpha = k(n - 2)",
                }),
                min_horizontal: Some(ExpectedValue {
                    value: 4 * n - 4,
                    source: "tall spike family: minimal horizontal boundary 4n - 4",
                }),
                min_vertical: None,
                construction_vertical: None,
            };
            (sums, expected)
        }
        Family::Plateau => {
            let k = parameters[0];
            if k < 1 {
                return Err(invalid(k, "k must be at least 1"));
            }
            if k > cap || 2 * k + 1 > cap {
                return Err(invalid(k, "instance exceeds the size cap"));
            }
            let side = 2 * k + 1;
            let mut line = vec![side as u32];
            line.extend(vec![k as u32 + 1; side as usize - 1]);
            let sums = build(line.clone(), line);
            let expected = Expectations {
                alpha: Some(ExpectedValue {
                    value: k * k,
                    source: "plateau family: alpha = k^2 = (m - 1)(n - 1) / 4",
                }),
                ..Expectations::default()
            };
            (sums, expected)
        }
        Family::TallPlateau => {
            let k = parameters[0];
            if k < 1 {
                return Err(invalid(k, "k must be at least 1"));
            }
            if k > cap || 3 * k + 1 > cap {
                return Err(invalid(k, "instance exceeds the size cap"));
            }
            let (m, n) = (3 * k + 1, 3 * k);
            let mut rows = vec![n as u32];
            rows.extend(vec![k as u32 + 1; 2 * k as usize]);
            rows.extend(vec![k as u32; k as usize]);
            let mut cols = vec![m as u32];
            cols.extend(vec![k as u32 + 1; n as usize - 1]);
            let sums = build(rows, cols);
            let expected = Expectations {
                alpha: Some(ExpectedValue {
                    value: 2 * k * k - k,
                    source: "tall plateau family: alpha = 2k^2 - k",
                }),
                construction_vertical: Some(ExpectedValue {
                    value: 4 * k * k + 4 * k + 2,
                    source: "tall plateau family: construction L_v = 4k^2 + 4k + 2",
                }),
                ..Expectations::default()
            };
            (sums, expected)
        }
    };
    Ok(FamilyInstance {
        family,
        parameters: parameters.to_vec(),
        sums,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate::alpha;
    use crate::ryser::is_consistent;

    #[test]
    fn alternating_instance_for_n_nine() {
        let instance = generate(Family::Alternating, &[9]).unwrap();
        assert_eq!(instance.sums.rows(), &[9, 8, 8, 6, 6, 4, 4, 2, 2]);
        assert_eq!(instance.sums.cols(), instance.sums.rows());
        assert_eq!(instance.expected.alpha.unwrap().value, 4);
        assert_eq!(instance.expected.min_horizontal.unwrap().value, 26);
    }

    #[test]
    fn alternating_rejects_even_n() {
        assert!(matches!(
            generate(Family::Alternating, &[4]),
            Err(BadParameter::Invalid { .. })
        ));
    }

    #[test]
    fn spike_instance_for_n_nine() {
        let instance = generate(Family::Spike, &[9]).unwrap();
        assert_eq!(instance.sums.rows(), &[9, 2, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(instance.expected.min_horizontal.unwrap().value, 32);
    }

    #[test]
    fn plateau_instance_for_k_two() {
        let instance = generate(Family::Plateau, &[2]).unwrap();
        assert_eq!(instance.sums.rows(), &[5, 3, 3, 3, 3]);
        assert_eq!(alpha(&instance.sums).unwrap(), 4);
    }

    #[test]
    fn tall_plateau_instance_for_k_one() {
        let instance = generate(Family::TallPlateau, &[1]).unwrap();
        assert_eq!(instance.sums.rows(), &[3, 2, 2, 1]);
        assert_eq!(instance.sums.cols(), &[4, 2, 2]);
        assert_eq!(instance.expected.construction_vertical.unwrap().value, 10);
    }

    #[test]
    fn tall_spike_exposes_both_parameters() {
        let instance = generate(Family::TallSpike, &[2, 5]).unwrap();
        assert_eq!(instance.sums.m(), 9);
        assert_eq!(instance.sums.cols(), &[9, 3, 3, 3, 3]);
        assert!(matches!(
            generate(Family::TallSpike, &[2]),
            Err(BadParameter::Arity { .. })
        ));
    }

    #[test]
    fn all_families_generate_valid_direct_instances() {
        let cases: Vec<(Family, Vec<u64>)> = vec![
            (Family::Alternating, vec![3]),
            (Family::Alternating, vec![11]),
            (Family::Spike, vec![2]),
            (Family::Spike, vec![10]),
            (Family::TallSpike, vec![1, 2]),
            (Family::TallSpike, vec![3, 6]),
            (Family::Plateau, vec![1]),
            (Family::Plateau, vec![6]),
            (Family::TallPlateau, vec![1]),
            (Family::TallPlateau, vec![4]),
        ];
        for (family, params) in cases {
            let instance = generate(family, &params).unwrap();
            assert!(
                instance.sums.has_full_first_line(),
                "{family} {params:?} lacks a full first line"
            );
            assert!(
                is_consistent(&instance.sums).is_consistent(),
                "{family} {params:?} is inconsistent"
            );
            if let Some(expected) = instance.expected.alpha {
                assert_eq!(
                    alpha(&instance.sums).unwrap(),
                    expected.value,
                    "{family} {params:?}: {}",
                    expected.source
                );
            }
        }
    }

    #[test]
    fn oversized_parameters_are_rejected_without_overflow() {
        for (family, params) in [
            (Family::Alternating, vec![u64::MAX]),
            (Family::Spike, vec![u64::MAX - 1]),
            (Family::TallSpike, vec![u64::MAX, 2]),
            (Family::TallSpike, vec![2, u64::MAX]),
            (Family::Plateau, vec![u64::MAX]),
            (Family::TallPlateau, vec![u64::MAX]),
        ] {
            assert!(
                matches!(
                    generate(family, &params),
                    Err(BadParameter::Invalid { .. })
                ),
                "{family} accepted {params:?}"
            );
        }
    }

    #[test]
    fn family_names_round_trip() {
        for family in Family::ALL {
            assert_eq!(Family::from_name(family.name()), Some(family));
        }
        assert_eq!(Family::from_name("ex99"), None);
    }
}
