//! Which subcommand exposes each library operation.

/// `(operation, subcommand)`; every operation appears exactly once.
pub const REGISTRY: &[(&str, &str)] = &[
    ("load_graph", "apply"),
    ("degree", "apply"),
    ("boundary", "apply"),
    ("is_connected", "apply"),
    ("phi_p", "apply"),
    ("gradient", "apply"),
    ("p_laplacian", "apply"),
    ("schroedinger_apply", "apply"),
    ("greens_residual", "apply"),
    ("classify", "apply"),
    ("energy", "energy"),
    ("bracket", "energy"),
    ("simplified_energy", "energy"),
    ("simplified_energy_1", "energy"),
    ("simplified_energy_2", "energy"),
    ("simplified_energy_3", "energy"),
    ("gsr_check", "gsr"),
    ("corollary_bounds_check", "gsr"),
    ("gsr_display_check", "gsr"),
    ("picone_residual", "picone"),
    ("capacity", "capacity"),
    ("null_sequence_search", "null-seq"),
    ("ground_state_trend", "null-seq"),
    ("harnack_constant", "harnack"),
    ("harnack_verify", "harnack"),
    ("hardy_witness", "hardy"),
    ("proper_subset_check", "hardy"),
    ("liouville_check", "liouville"),
    ("gsr_criticality_transfer", "liouville"),
    ("ineq2_sides", "ineq-scan"),
    ("ineq1_check", "ineq-scan"),
    ("ineq34_check", "ineq-scan"),
    ("ineq5_check", "ineq-scan"),
    ("lindqvist_check", "ineq-scan"),
    ("constant_cp", "ineq-scan"),
    ("scan_equivalence", "ineq-scan"),
    ("nat_line", "model-check"),
    ("int_line", "model-check"),
    ("grid2d", "model-check"),
    ("weighted_line", "model-check"),
    ("hardy_u", "model-check"),
    ("alpha_seq", "model-check"),
];

pub const SUBCOMMANDS: &[&str] = &[
    "apply",
    "energy",
    "gsr",
    "picone",
    "capacity",
    "null-seq",
    "harnack",
    "hardy",
    "liouville",
    "ineq-scan",
    "model-check",
];

/// Operations of the library plus the file loader.
pub fn all_operations() -> Vec<&'static str> {
    let mut ops: Vec<&'static str> = pgraph_core::OPERATIONS.to_vec();
    ops.push("load_graph");
    ops
}

pub fn subcommand_of(op: &str) -> Option<&'static str> {
    REGISTRY.iter().find(|(o, _)| *o == op).map(|(_, s)| *s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn registry_covers_operations_once() {
        let ops: BTreeSet<&str> = all_operations().into_iter().collect();
        let registered: Vec<&str> = REGISTRY.iter().map(|(o, _)| *o).collect();
        let unique: BTreeSet<&str> = registered.iter().copied().collect();
        assert_eq!(unique.len(), registered.len());
        assert_eq!(unique, ops);
        assert!(REGISTRY.iter().all(|(_, s)| SUBCOMMANDS.contains(s)));
        assert_eq!(subcommand_of("capacity"), Some("capacity"));
    }
}
