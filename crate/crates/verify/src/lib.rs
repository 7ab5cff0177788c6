//! Acceptance checks for carnot-core; see tests/acceptance.rs.
