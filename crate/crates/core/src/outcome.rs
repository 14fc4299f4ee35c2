//! Values that may be undefined for structural reasons (empty graph, zero
//! denominator, ...). Reports render the undefined case as an explicit
//! `{"value": null, "reason": "..."}` object instead of dropping the field.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Undefined};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric<T> {
    Value(T),
    Undefined(Undefined),
}

impl<T> Metric<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Metric::Value(v) => Some(v),
            Metric::Undefined(_) => None,
        }
    }

    pub fn reason(&self) -> Option<Undefined> {
        match self {
            Metric::Value(_) => None,
            Metric::Undefined(r) => Some(*r),
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Metric::Value(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Metric<U> {
        match self {
            Metric::Value(v) => Metric::Value(f(v)),
            Metric::Undefined(r) => Metric::Undefined(r),
        }
    }

    /// Converts a fallible computation, keeping only undefined-metric errors
    /// as sentinels. Any other error is handed back.
    pub fn from_result(result: Result<T, Error>) -> Result<Self, Error> {
        match result {
            Ok(v) => Ok(Metric::Value(v)),
            Err(Error::Undefined(r)) => Ok(Metric::Undefined(r)),
            Err(e) => Err(e),
        }
    }
}

impl<T> From<Result<T, Undefined>> for Metric<T> {
    fn from(r: Result<T, Undefined>) -> Self {
        match r {
            Ok(v) => Metric::Value(v),
            Err(reason) => Metric::Undefined(reason),
        }
    }
}

impl<T: Serialize> Serialize for Metric<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Metric::Value(v) => v.serialize(serializer),
            Metric::Undefined(reason) => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("reason", reason)?;
                map.serialize_entry("value", &())?;
                map.end()
            }
        }
    }
}

/// `log10(numerator / denominator)` for non-negative inputs.
///
/// A zero denominator with a positive numerator is `on_zero_denominator`;
/// both zero is `ZeroDenominator`; a zero numerator is `ZeroNumerator`.
/// Computed as a difference of logs so that swapping the arguments negates
/// the result exactly.
pub fn log10_ratio(
    numerator: f64,
    denominator: f64,
    on_zero_denominator: Undefined,
) -> Metric<f64> {
    if denominator <= 0.0 {
        if numerator > 0.0 {
            Metric::Undefined(on_zero_denominator)
        } else {
            Metric::Undefined(Undefined::ZeroDenominator)
        }
    } else if numerator <= 0.0 {
        Metric::Undefined(Undefined::ZeroNumerator)
    } else {
        Metric::Value(numerator.log10() - denominator.log10())
    }
}
