use super::SurveyReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationTag {
    Positive,
    Negative,
    None,
    /// Fewer than two distinct values on either side.
    Undefined,
}

impl CorrelationTag {
    pub fn name(self) -> &'static str {
        match self {
            CorrelationTag::Positive => "positive",
            CorrelationTag::Negative => "negative",
            CorrelationTag::None => "none",
            CorrelationTag::Undefined => "undefined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    pub x_label: String,
    pub y_label: String,
    pub n: usize,
    /// In [-1, 1]; `None` iff the tag is `Undefined`.
    pub rho: Option<f64>,
    pub tag: CorrelationTag,
}

/// 1-based ranks; tied values share the mean of their positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = mean;
        }
        i = j + 1;
    }
    ranks
}

fn distinct(values: &[f64]) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

/// Spearman's rho as the Pearson correlation of average ranks. `None` when
/// either side has fewer than two distinct values.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len(), "paired samples");
    if distinct(xs) < 2 || distinct(ys) < 2 {
        return None;
    }
    let (rx, ry) = (average_ranks(xs), average_ranks(ys));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Media use against activity over participants who answered group F.
pub fn correlate_activity(report: &SurveyReport) -> CorrelationResult {
    let pairs: Vec<(f64, f64)> = report
        .participants
        .iter()
        .filter(|p| p.answered_f)
        .map(|p| (p.media_use as f64, p.activity as f64))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let rho = spearman(&xs, &ys);
    let tag = match rho {
        None => CorrelationTag::Undefined,
        Some(r) if r > 1e-12 => CorrelationTag::Positive,
        Some(r) if r < -1e-12 => CorrelationTag::Negative,
        Some(_) => CorrelationTag::None,
    };
    CorrelationResult {
        x_label: "media_use".into(),
        y_label: "activity".into(),
        n: xs.len(),
        rho,
        tag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_is_one() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[9.0, 5.0, 1.0]), Some(-1.0));
    }

    #[test]
    fn constant_is_undefined() {
        assert_eq!(spearman(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]), None);
        assert_eq!(spearman(&[], &[]), None);
    }

    #[test]
    fn ties_use_average_ranks() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
        let rho = spearman(&[1.0, 1.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((rho - 0.866_025_403_784_438_6).abs() < 1e-12);
    }
}
