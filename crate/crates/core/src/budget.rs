use thiserror::Error;

/// Default number of candidate pairs (or operands) an exhaustive procedure
/// may enumerate over, i.e. at most `2^12` requests.
pub const DEFAULT_LIMIT: usize = 12;

/// An exhaustive enumeration would exceed its budget. Procedures never fall
/// back to sampling silently.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} needs {required} but the enumeration limit is {limit}")]
pub struct BudgetExceeded {
    pub what: &'static str,
    pub required: usize,
    pub limit: usize,
}

pub(crate) fn check(what: &'static str, required: usize, limit: usize) -> Result<(), BudgetExceeded> {
    // Masks are u32; anything past that is out of reach regardless of limit.
    if required > limit || required > 30 {
        return Err(BudgetExceeded {
            what,
            required,
            limit,
        });
    }
    Ok(())
}
