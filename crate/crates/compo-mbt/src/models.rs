//! The bundled parking-assist component models: a distance sensor and an
//! autopark controller, in the original and the adapted (mutually
//! accepting) variants, each with a spec and an input-enabled
//! implementation.

use crate::format::parse;
use crate::lts::Lts;

/// Raw text of the original parking bundle (`models/parking.mbt`).
pub fn bundle_text() -> &'static str {
    include_str!("../models/parking.mbt")
}

/// Raw text of the adapted parking bundle (`models/parking_adapted.mbt`).
pub fn adapted_bundle_text() -> &'static str {
    include_str!("../models/parking_adapted.mbt")
}

fn pick(text: &str, name: &str) -> Lts {
    parse(text)
        .expect("bundled models parse")
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, m)| m)
        .unwrap_or_else(|| panic!("bundled model `{name}` exists"))
}

pub fn sensor_spec() -> Lts {
    pick(bundle_text(), "Sensor")
}

pub fn sensor_impl() -> Lts {
    pick(bundle_text(), "SensorImpl")
}

pub fn autopark_spec() -> Lts {
    pick(bundle_text(), "Autopark")
}

pub fn autopark_impl() -> Lts {
    pick(bundle_text(), "AutoparkImpl")
}

pub fn adapted_sensor_spec() -> Lts {
    pick(adapted_bundle_text(), "Sensor")
}

pub fn adapted_sensor_impl() -> Lts {
    pick(adapted_bundle_text(), "SensorImpl")
}

pub fn adapted_autopark_spec() -> Lts {
    pick(adapted_bundle_text(), "Autopark")
}

pub fn adapted_autopark_impl() -> Lts {
    pick(adapted_bundle_text(), "AutoparkImpl")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_model_is_valid() {
        for text in [bundle_text(), adapted_bundle_text()] {
            for (name, m) in parse(text).unwrap() {
                assert!(m.raw().validate().is_valid(), "{name} must validate");
            }
        }
    }

    #[test]
    fn implementations_extend_their_specs() {
        for (spec, imp) in [
            (sensor_spec(), sensor_impl()),
            (autopark_spec(), autopark_impl()),
            (adapted_sensor_spec(), adapted_sensor_impl()),
            (adapted_autopark_spec(), adapted_autopark_impl()),
        ] {
            assert!(spec.transitions().is_subset(imp.transitions()));
            assert_eq!(spec.inputs(), imp.inputs());
            assert_eq!(spec.outputs(), imp.outputs());
        }
    }
}
