//! Classical inference on finite experiments.
//!
//! Sufficiency and ancillarity checks, Birnbaum's mixture, confidence
//! distributions, REML, a multinomial with competing ancillaries, a Monte
//! Carlo for correlated spin components and entropy correlation.

pub mod bayes;
pub mod birnbaum;
pub mod confidence;
pub mod entropy;
pub mod experiment;
pub mod multinomial;
pub mod reml;

pub use bayes::{conditional_positive, example17_bayes, example17_group_value, ConditionalEstimate};
pub use birnbaum::{birnbaum_mixture, birnbaum_statistic, likelihoods_proportional};
pub use confidence::{
    attainment_distribution, confidence_distribution, upper_bound_rule, ConfidenceDistribution, UpperBoundRule,
};
pub use entropy::{entropy, entropy_correlation, JointPmf};
pub use experiment::{
    is_ancillary, is_sufficient, likelihood_ratio_partition, partition_depends_on_context, DiscreteExperiment,
    Statistic,
};
pub use multinomial::{multinomial_conditional_analysis, MultinomialReport};
pub use reml::{reml_estimate, reml_with_basis};
