use std::borrow::Borrow;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::corpus::DocId;
use crate::error::{Error, Result};
use crate::metrics::config::{EvalConfig, Rational};
use crate::metrics::probability::{Probability, RankAssignment, ReadModel};

/// Per-document utilities of one system on one query, plus their sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityScore {
    /// `(doc, U_d)` in document order.
    pub per_document: Vec<(DocId, f64)>,
    pub total: f64,
    /// Exact product of `p_system / p_pool` over the documents, so that
    /// `total` is its logarithm. Systems are ordered by this value.
    #[serde(skip)]
    pub ratio: BigRational,
}

impl UtilityScore {
    pub fn zero() -> Self {
        Self {
            per_document: Vec::new(),
            total: 0.0,
            ratio: BigRational::from_integer(1.into()),
        }
    }

    /// Adds one document with utility `u` and exact probability ratio `ratio`.
    pub fn push(&mut self, doc: DocId, u: f64, ratio: Rational) {
        self.total += u;
        self.per_document.push((doc, u));
        self.ratio *= to_big(ratio);
    }
}

pub(crate) fn to_big(r: Rational) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn ratio_of(p_system: Probability, p_pool: Probability, config: &EvalConfig) -> Result<Rational> {
    if p_pool.is_zero() {
        return Err(Error::Domain(
            "pooled probability is zero; floor it before computing utility".into(),
        ));
    }
    let p_system = p_system.floored(config.epsilon.system_floor(config.depth));
    Ok(p_system.ratio() / p_pool.ratio())
}

/// `log(p_system / p_pool)`, with a zero `p_system` floored at `ε`.
///
/// `p_pool` is expected to be floored already (see
/// [`pooled_probability`](crate::metrics::pooled_probability)).
pub fn document_utility(
    p_system: Probability,
    p_pool: Probability,
    config: &EvalConfig,
) -> Result<f64> {
    let ratio = ratio_of(p_system, p_pool, config)?;
    Ok(config
        .log_base
        .log(*ratio.numer() as f64 / *ratio.denom() as f64))
}

/// Sum of [`document_utility`] over `relevant`, with the breakdown retained.
pub fn total_utility<A: Borrow<RankAssignment>>(
    evaluated: &RankAssignment,
    pool: &[A],
    relevant: &BTreeSet<DocId>,
    config: &EvalConfig,
) -> Result<UtilityScore> {
    let model = ReadModel::build(evaluated, pool, relevant, config)?;
    utility_from_model(&model, config)
}

pub fn utility_from_model(model: &ReadModel, config: &EvalConfig) -> Result<UtilityScore> {
    let mut score = UtilityScore::zero();
    for entry in &model.entries {
        let ratio = ratio_of(entry.p_system, entry.p_pool, config)?;
        let u = config
            .log_base
            .log(*ratio.numer() as f64 / *ratio.denom() as f64);
        score.push(entry.doc.clone(), u, ratio);
    }
    Ok(score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::config::{LogBase, Rational};

    fn p(n: i128, d: i128) -> Probability {
        Probability::new(Rational::new(n, d)).unwrap()
    }

    fn doc(s: &str) -> DocId {
        s.parse().unwrap()
    }

    fn assign(depth: u32, pairs: &[(&str, u32)]) -> RankAssignment {
        RankAssignment::new(depth, pairs.iter().map(|&(d, r)| (doc(d), r))).unwrap()
    }

    #[test]
    fn document_utility_examples() {
        let config = EvalConfig::default();
        assert_eq!(document_utility(p(2, 5), p(2, 5), &config).unwrap(), 0.0);
        let u = document_utility(Probability::ONE, p(1, 2), &config).unwrap();
        assert!((u - std::f64::consts::LN_2).abs() < 1e-15);

        // missed doc floored at 1/(2N) = 0.05
        let config = EvalConfig::with_depth(10);
        let u = document_utility(Probability::ZERO, Probability::ONE, &config).unwrap();
        assert!((u - (0.05f64).ln()).abs() < 1e-15);
        assert!((u - -2.995732273553991).abs() < 1e-12);
    }

    #[test]
    fn zero_pool_is_domain_error() {
        let config = EvalConfig::default();
        assert!(document_utility(Probability::ONE, Probability::ZERO, &config).is_err());
    }

    #[test]
    fn total_utility_examples() {
        let config = EvalConfig::with_depth(10);
        let x = assign(10, &[("a", 1)]);
        let pool = [assign(10, &[("a", 1)])];

        let empty = total_utility(&x, &pool, &BTreeSet::new(), &config).unwrap();
        assert_eq!(empty, UtilityScore::zero());

        let rel: BTreeSet<DocId> = [doc("a")].into();
        let same = total_utility(&x, &pool, &rel, &config).unwrap();
        assert_eq!(same.total, 0.0);

        // ln(1.0/0.1) + ln(0.9/0.05)
        let x = assign(10, &[("a", 1), ("b", 2)]);
        let pool = [assign(10, &[("a", 10)])];
        let rel: BTreeSet<DocId> = [doc("a"), doc("b")].into();
        let score = total_utility(&x, &pool, &rel, &config).unwrap();
        let expected = 10f64.ln() + 18f64.ln();
        assert!((score.total - expected).abs() < 1e-12);
        assert!((score.total - 5.192956850890211).abs() < 1e-12);
        assert_eq!(score.per_document.len(), 2);
        assert_eq!(score.ratio, BigRational::from_integer(180.into()));
    }

    #[test]
    fn log_base_rescales() {
        let mut config = EvalConfig::with_depth(10);
        let x = assign(10, &[("a", 1), ("b", 2)]);
        let pool = [assign(10, &[("a", 10)])];
        let rel: BTreeSet<DocId> = [doc("a"), doc("b")].into();
        let nats = total_utility(&x, &pool, &rel, &config).unwrap().total;
        config.log_base = LogBase::Other(2.0);
        let bits = total_utility(&x, &pool, &rel, &config).unwrap().total;
        assert!((bits - nats / std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn empty_pool_errors_even_without_relevant_docs() {
        let config = EvalConfig::with_depth(10);
        let x = assign(10, &[("a", 1)]);
        assert!(total_utility::<RankAssignment>(&x, &[], &BTreeSet::new(), &config).is_err());
    }
}
