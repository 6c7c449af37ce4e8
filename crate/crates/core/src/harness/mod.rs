//! File formats, the claim catalog and population sweeps.

pub mod format;
pub mod verify;

pub use format::{
    parse_choice_table, parse_margins, parse_profile, serialize_choice_table, serialize_margins,
    serialize_profile, FormatError,
};
pub use verify::{
    find_claim, replay, verify, verify_claim, Claim, Counterexample, Mode, Sweep, VerifyError,
    VerifyReport, CLAIMS,
};
