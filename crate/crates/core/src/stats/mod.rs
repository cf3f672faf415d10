//! Summary tables, hypothesis tests and the race-consistency matrix.

mod consistency;
mod hypothesis;
mod tables;

pub use consistency::{race_consistency, ConsistencyMatrix};
pub use hypothesis::{
    agreement_rate, bonferroni, midranks, rank_sum_variance, two_proportion_test,
    wilcoxon_rank_sum, RankSumResult, TestResult,
};
pub use tables::{
    group_labels, histogram, initial_distribution, partition, proportion_affected, rate_table,
    AffectedTable, Component, ComponentRow, Group, GroupRule, Histogram, RateTable,
    DEFAULT_ALPHA,
};
