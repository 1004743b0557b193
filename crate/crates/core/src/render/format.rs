//! Number formatting for reports. Inputs are exact ratios; nothing here
//! goes through floating point.

use num_rational::Ratio;

use crate::metrics::Fraction;

/// Decimal separator used in human-facing output. CSV always uses `Point`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decimal {
    #[default]
    Point,
    Comma,
}

impl Decimal {
    pub fn from_comma_flag(comma: bool) -> Self {
        if comma {
            Decimal::Comma
        } else {
            Decimal::Point
        }
    }

    fn separator(self) -> char {
        match self {
            Decimal::Point => '.',
            Decimal::Comma => ',',
        }
    }
}

fn pow10(decimals: u32) -> u128 {
    10u128.pow(decimals)
}

/// `r * 100 * 10^decimals`, rounded half away from zero.
pub fn percent_units(r: Fraction, decimals: u32) -> u128 {
    let scale = 100 * pow10(decimals);
    let (n, d) = (*r.numer() as u128, *r.denom() as u128);
    (2 * n * scale + d) / (2 * d)
}

/// Writes `units / 10^decimals` with a fixed number of decimals.
pub fn format_units(units: u128, decimals: u32, sep: Decimal) -> String {
    if decimals == 0 {
        return units.to_string();
    }
    let p = pow10(decimals);
    format!(
        "{}{}{:0width$}",
        units / p,
        sep.separator(),
        units % p,
        width = decimals as usize
    )
}

/// `3/4` at 0 decimals is `75%`; `3/14` at 2 decimals is `21.43%`.
pub fn format_percent(r: Fraction, decimals: u32, sep: Decimal) -> String {
    format!("{}%", format_units(percent_units(r, decimals), decimals, sep))
}

/// Percentage-point delta with an explicit sign; zero is unsigned.
pub fn format_signed_points(delta: Ratio<i64>, decimals: u32, sep: Decimal) -> String {
    let magnitude = if delta < Ratio::from_integer(0) { -delta } else { delta };
    let units = percent_units(
        Ratio::new(*magnitude.numer() as u64, *magnitude.denom() as u64),
        decimals,
    );
    let body = format_units(units, decimals, sep);
    match (units, delta < Ratio::from_integer(0)) {
        (0, _) => body,
        (_, true) => format!("-{body}"),
        (_, false) => format!("+{body}"),
    }
}

/// Largest-remainder apportionment of shares to percent units at the given
/// decimals. When the shares sum to 1 the result sums to exactly
/// `100 * 10^decimals`. Equal remainders favour the earlier part.
pub fn apportion_percent(parts: &[Fraction], decimals: u32) -> Vec<u128> {
    let scale = 100 * pow10(decimals);
    let total: Ratio<u128> = parts
        .iter()
        .map(|r| Ratio::new(*r.numer() as u128, *r.denom() as u128))
        .fold(Ratio::from_integer(0), |a, b| a + b);
    let target = (2 * total.numer() * scale + total.denom()) / (2 * total.denom());
    let mut floors = Vec::with_capacity(parts.len());
    let mut remainders = Vec::with_capacity(parts.len());
    for (i, r) in parts.iter().enumerate() {
        let q = Ratio::new(*r.numer() as u128 * scale, *r.denom() as u128);
        floors.push(q.to_integer());
        remainders.push((q.fract(), i));
    }
    let assigned: u128 = floors.iter().sum();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in remainders.iter().take(target.saturating_sub(assigned) as usize) {
        floors[i] += 1;
    }
    floors
}
