//! Test functions that measures are evaluated on, `Pf = ∫ f dP`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A measurable function on the real line with closed-form integrals under
/// every law in [`crate::laws`].
///
/// Boundary conventions are part of the definition (the discrete laws put
/// atoms on integers, so they matter):
///
/// * `IndicatorAbove { a }` is `1` on `[a, ∞)` — the left endpoint counts;
/// * `TwoSided { a }` is `+1` on `(a, ∞)` and `−1` on `(−∞, a]`;
/// * `IndicatorInterval { a, b }` is `1` on `(a, b]` — open left, closed right;
/// * `Identity` is `f(x) = x` (the only unbounded variant).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Functional {
    IndicatorAbove { a: f64 },
    TwoSided { a: f64 },
    IndicatorInterval { a: f64, b: f64 },
    Identity,
}

impl Functional {
    /// Checks the variant's own invariants (finiteness, `a < b`).
    pub fn validate(&self) -> Result<()> {
        match *self {
            Functional::IndicatorAbove { a } | Functional::TwoSided { a } => {
                if !a.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "functional threshold must be finite, got {a}"
                    )));
                }
            }
            Functional::IndicatorInterval { a, b } => {
                if !a.is_finite() || !b.is_finite() || !(a < b) {
                    return Err(Error::InvalidParameter(format!(
                        "indicator interval requires finite a < b, got ({a}, {b})"
                    )));
                }
            }
            Functional::Identity => {}
        }
        Ok(())
    }

    #[inline]
    pub fn evaluate(&self, x: f64) -> f64 {
        match *self {
            Functional::IndicatorAbove { a } => {
                if x >= a {
                    1.0
                } else {
                    0.0
                }
            }
            Functional::TwoSided { a } => {
                if x > a {
                    1.0
                } else {
                    -1.0
                }
            }
            Functional::IndicatorInterval { a, b } => {
                if x > a && x <= b {
                    1.0
                } else {
                    0.0
                }
            }
            Functional::Identity => x,
        }
    }

    /// True for every variant except `Identity`.
    pub fn is_bounded(&self) -> bool {
        !matches!(self, Functional::Identity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_conventions() {
        let above = Functional::IndicatorAbove { a: 2.0 };
        assert_eq!(above.evaluate(2.0), 1.0);
        assert_eq!(above.evaluate(1.9999999), 0.0);

        let two = Functional::TwoSided { a: 1.0 };
        assert_eq!(two.evaluate(1.0), -1.0);
        assert_eq!(two.evaluate(1.0 + 1e-12), 1.0);
        assert_eq!(two.evaluate(0.0), -1.0);

        let iv = Functional::IndicatorInterval { a: 1.0, b: 4.0 };
        assert_eq!(iv.evaluate(1.0), 0.0);
        assert_eq!(iv.evaluate(4.0), 1.0);
        assert_eq!(iv.evaluate(4.0 + 1e-12), 0.0);

        assert_eq!(Functional::Identity.evaluate(-3.5), -3.5);
    }

    #[test]
    fn interval_requires_ordered_endpoints() {
        assert!(Functional::IndicatorInterval { a: 4.0, b: 1.0 }.validate().is_err());
        assert!(Functional::IndicatorInterval { a: 1.0, b: 1.0 }.validate().is_err());
        assert!(Functional::IndicatorInterval { a: 1.0, b: 4.0 }.validate().is_ok());
    }

    #[test]
    fn json_round_trip() {
        let f: Functional = serde_json::from_str(r#"{"kind":"indicator_above","a":2.0}"#).unwrap();
        assert_eq!(f, Functional::IndicatorAbove { a: 2.0 });
        let f: Functional = serde_json::from_str(r#"{"kind":"identity"}"#).unwrap();
        assert_eq!(f, Functional::Identity);
    }
}
