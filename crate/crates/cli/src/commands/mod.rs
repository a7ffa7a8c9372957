mod decay;
mod lemma;
mod multiplier;
mod polydeg;
mod verify;

pub use decay::{cmd_decay, PART1_RATE_BOUND};
pub use lemma::cmd_lemma;
pub use multiplier::cmd_multiplier;
pub use polydeg::{cmd_polydeg, MIN_GROWTH};
pub use verify::{cmd_verify, middle_closed_form, tail_closed_form, Check};

use pcarleson::kernels::SqrtBranch;

use crate::error::CliError;

pub(crate) fn positive(x: f64) -> Result<(), String> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(format!("must be positive, got {x}"))
    }
}

pub(crate) fn parse_branch(s: &str) -> Result<SqrtBranch, CliError> {
    match s {
        "abs" => Ok(SqrtBranch::Abs),
        "signed" => Ok(SqrtBranch::Signed),
        other => Err(CliError::InvalidConfig(format!("branch must be abs or signed, got '{other}'"))),
    }
}

#[cfg(test)]
mod tests;
