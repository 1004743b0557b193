use num_rational::Ratio;

use super::AnalysisError;
use crate::ingest::MediaRegistry;
use crate::metrics::{modality, Fraction};
use crate::model::MediaType;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeComparison {
    pub media_type: MediaType,
    pub share_a: Fraction,
    pub share_b: Fraction,
    /// `share_a - share_b`, exact.
    pub delta: Ratio<i64>,
}

/// One row per media type in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalityComparison {
    pub label_a: String,
    pub label_b: String,
    pub rows: Vec<TypeComparison>,
}

impl ModalityComparison {
    /// Sum of absolute deltas over the four types.
    pub fn l1_distance(&self) -> Ratio<i64> {
        self.rows
            .iter()
            .fold(Ratio::from_integer(0), |acc, r| acc + abs(r.delta))
    }
}

fn abs(r: Ratio<i64>) -> Ratio<i64> {
    if r < Ratio::from_integer(0) {
        -r
    } else {
        r
    }
}

fn signed(r: Fraction) -> Ratio<i64> {
    Ratio::new(*r.numer() as i64, *r.denom() as i64)
}

pub fn compare_spaces(
    a: (&MediaRegistry, &str),
    b: (&MediaRegistry, &str),
) -> Result<ModalityComparison, AnalysisError> {
    let ma = modality(a.0).map_err(|_| AnalysisError::EmptyRegistry)?;
    let mb = modality(b.0).map_err(|_| AnalysisError::EmptyRegistry)?;
    let rows = MediaType::ALL
        .into_iter()
        .map(|t| {
            let (sa, sb) = (ma.share(t), mb.share(t));
            TypeComparison {
                media_type: t,
                share_a: sa,
                share_b: sb,
                delta: signed(sa) - signed(sb),
            }
        })
        .collect();
    Ok(ModalityComparison {
        label_a: a.1.to_string(),
        label_b: b.1.to_string(),
        rows,
    })
}
