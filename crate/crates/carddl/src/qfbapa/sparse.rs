//! Upper bound on the number of non-empty Venn regions needed by a solution.

use super::Formula;
use crate::config::Config;

/// `min(2^n, d·(4 + k·(2 + bits)))` where `n` is the number of variables, `k`
/// the number of cardinality atoms, `bits` the bit length of the largest
/// constant and `d` the configured multiplier.
pub fn sparse_bound(f: &Formula, cfg: &Config) -> u64 {
    let total = if f.vars.len() >= 63 { u64::MAX } else { 1u64 << f.vars.len() };
    let k = f.body.card_atom_count() as u64;
    let bits = (64 - f.max_const().leading_zeros()).max(1) as u64;
    let bound = cfg.sparse_multiplier.saturating_mul(4u64.saturating_add(k.saturating_mul(2 + bits)));
    total.min(bound).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfbapa::{card, var};
    use crate::syntax::{card_ge, PaExpr};

    #[test]
    fn capped_by_region_count() {
        let mut f = Formula::new();
        let a = f.var("a", None);
        f.body = card_ge(card(var(a)), PaExpr::Const(4));
        assert_eq!(sparse_bound(&f, &Config::default()), 2);
    }

    #[test]
    fn grows_with_atoms() {
        let mut f = Formula::new();
        for i in 0..10 {
            f.var(format!("v{i}"), None);
        }
        f.body = card_ge(card(var(0)), PaExpr::Const(4));
        assert_eq!(sparse_bound(&f, &Config::default()), 2 * (4 + (2 + 3)));
    }
}
