//! Capacities, null sequences and the tests built on them.

pub mod capacity;
pub mod hardy;
pub mod harnack;
pub mod liouville;
pub mod nullseq;

pub use capacity::{capacity, CapacityOptions, CapacityResult, CapacityStatus};
pub use hardy::{
    certified_hardy_witness, hardy_slack, hardy_witness, proper_subset_check, verify_hardy, HardyCertificate,
    HardyVerification, ProperSubsetReport,
};
pub use harnack::{harnack_constant, harnack_verify, HarnackResult, HarnackVerification};
pub use liouville::{
    gsr_criticality_transfer, harmonic_line_weights, liouville_check, CoordFn, HypothesisOutcome, LiouvilleConstants,
    LiouvilleReport, LiouvilleVerdict, TransferReport, TransferStep,
};
pub use nullseq::{
    assess, ground_state_trend, loglog_slope, null_sequence_search, trend, Classification, CriticalityVerdict,
    GroundStateTrend, NullSequenceEvidence, NullSequenceStep, TrendCriteria, TrendSummary,
};
