//! Named example polynomials on `H¹`.

use crate::error::Result;
use crate::group::GroupSpec;
use crate::polycalc::{parse_poly, Poly};

pub const PRESETS: &[(&str, &str)] = &[
    ("paper-f", "x + 6*y*s - x^3"),
    ("paper-fmia", "x^3 + x*y^2 - 8*y*s - x"),
    ("p1", "x"),
    ("p3", "6*y*s - x^3"),
];

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A preset name or polynomial text.
pub fn resolve(text_or_name: &str, spec: &GroupSpec) -> Result<Poly> {
    parse_poly(preset_text(text_or_name).unwrap_or(text_or_name), spec)
}
