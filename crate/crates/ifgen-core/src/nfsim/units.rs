//! Unit conversions between the tags of the shared vocabulary.
//!
//! Conversions exist within three dimensions — power (dBm↔mW), data rate
//! (Mbps↔kbps), and time (ms↔s) — plus the identity on every unit.
//! `unitless` converts only to itself.

use thiserror::Error;

use crate::doc::Unit;

#[derive(Debug, Error, PartialEq)]
pub enum UnitError {
    #[error("no conversion from {from} to {to}")]
    Incompatible { from: Unit, to: Unit },
    #[error("conversion from {from} to {to} produced a non-finite value from input {input}")]
    NonFinite { from: Unit, to: Unit, input: f64 },
}

/// The physical dimension a unit measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Power,
    Rate,
    Time,
    None,
}

pub fn dimension(unit: Unit) -> Dimension {
    match unit {
        Unit::Dbm | Unit::Mw => Dimension::Power,
        Unit::Mbps | Unit::Kbps => Dimension::Rate,
        Unit::Ms | Unit::S => Dimension::Time,
        Unit::Unitless => Dimension::None,
    }
}

/// Whether a conversion between the two units exists.
pub fn convertible(from: Unit, to: Unit) -> bool {
    from == to || (dimension(from) == dimension(to) && dimension(from) != Dimension::None)
}

/// Convert a value between units.
///
/// Power conversions follow `mW = 10^(dBm/10)`; rate follows
/// `kbps = 1000 · Mbps`; time follows `ms = 1000 · s`.
pub fn convert(value: f64, from: Unit, to: Unit) -> Result<f64, UnitError> {
    if from == to {
        return Ok(value);
    }
    let out = match (from, to) {
        (Unit::Dbm, Unit::Mw) => 10f64.powf(value / 10.0),
        (Unit::Mw, Unit::Dbm) => 10.0 * value.log10(),
        (Unit::Mbps, Unit::Kbps) => value * 1000.0,
        (Unit::Kbps, Unit::Mbps) => value / 1000.0,
        (Unit::S, Unit::Ms) => value * 1000.0,
        (Unit::Ms, Unit::S) => value / 1000.0,
        (from, to) => return Err(UnitError::Incompatible { from, to }),
    };
    if out.is_finite() {
        Ok(out)
    } else {
        // log10 of a non-positive power reading is the realistic way to
        // land here; surface it rather than letting NaN propagate.
        Err(UnitError::NonFinite {
            from,
            to,
            input: value,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_dbm_is_exactly_one_milliwatt() {
        assert_eq!(convert(0.0, Unit::Dbm, Unit::Mw).unwrap(), 1.0);
    }

    #[test]
    fn known_power_points() {
        assert!((convert(10.0, Unit::Dbm, Unit::Mw).unwrap() - 10.0).abs() < 1e-12);
        assert!((convert(20.0, Unit::Dbm, Unit::Mw).unwrap() - 100.0).abs() < 1e-10);
        assert!((convert(100.0, Unit::Mw, Unit::Dbm).unwrap() - 20.0).abs() < 1e-12);
        // Negative dBm values are fine: -30 dBm is a microwatt.
        assert!((convert(-30.0, Unit::Dbm, Unit::Mw).unwrap() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn linear_factors() {
        assert_eq!(convert(2.5, Unit::Mbps, Unit::Kbps).unwrap(), 2500.0);
        assert_eq!(convert(1500.0, Unit::Kbps, Unit::Mbps).unwrap(), 1.5);
        assert_eq!(convert(2.0, Unit::S, Unit::Ms).unwrap(), 2000.0);
        assert_eq!(convert(250.0, Unit::Ms, Unit::S).unwrap(), 0.25);
    }

    #[test]
    fn cross_dimension_is_rejected() {
        assert_eq!(
            convert(1.0, Unit::Dbm, Unit::Kbps),
            Err(UnitError::Incompatible {
                from: Unit::Dbm,
                to: Unit::Kbps
            })
        );
        assert!(!convertible(Unit::Unitless, Unit::Ms));
        assert!(convertible(Unit::Unitless, Unit::Unitless));
    }

    #[test]
    fn nonpositive_milliwatts_cannot_become_dbm() {
        assert!(matches!(
            convert(0.0, Unit::Mw, Unit::Dbm),
            Err(UnitError::NonFinite { .. })
        ));
        assert!(matches!(
            convert(-5.0, Unit::Mw, Unit::Dbm),
            Err(UnitError::NonFinite { .. })
        ));
    }
}
