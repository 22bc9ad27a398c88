// Shared helpers for the integration-test binaries; not every binary
// uses every item.
#![allow(dead_code)]

pub mod fixtures;
pub mod oracle;
