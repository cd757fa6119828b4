/// Caps that turn exponential blow-ups into refusals instead of crashes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of colors accepted by the bitmask methods.
    pub k_cap: usize,
    /// Node budget of the bounded minimax oracle.
    pub minimax_budget: u64,
    /// Node budget of the minimal-memory search.
    pub search_budget: u64,
    /// Largest number of variables accepted by the brute-force QBF evaluator.
    pub qbf_var_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            k_cap: 20,
            minimax_budget: 20_000_000,
            search_budget: 50_000_000,
            qbf_var_cap: 20,
        }
    }
}

impl Limits {
    pub(crate) fn check_k(&self, k: usize) -> crate::Result<()> {
        if k > self.k_cap {
            Err(crate::Error::CapExceeded(k, self.k_cap))
        } else {
            Ok(())
        }
    }
}
