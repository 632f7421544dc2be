use alloc::string::String;
use core::fmt::Write;

use super::driver::StudyRow;
use crate::math::ln;

pub const CSV_HEADER: &str = "level,h,ndof,err_l2,err_h1,rate_l2,rate_h1";

/// log(e0/e1) / log(h0/h1), undefined for non-positive errors or equal h.
pub fn rate(e0: f64, e1: f64, h0: f64, h1: f64) -> Option<f64> {
    if !(e0 > 0.0 && e1 > 0.0 && h0 > 0.0 && h1 > 0.0) || h0 == h1 {
        return None;
    }
    let r = ln(e0 / e1) / ln(h0 / h1);
    r.is_finite().then_some(r)
}

pub fn fill_rates(rows: &mut [StudyRow]) {
    if let Some(first) = rows.first_mut() {
        first.rate_l2 = None;
        first.rate_h1 = None;
    }
    for i in 1..rows.len() {
        let (a, b) = (rows[i - 1].clone(), &mut rows[i]);
        b.rate_l2 = rate(a.err_l2, b.err_l2, a.h, b.h);
        b.rate_h1 = rate(a.err_h1, b.err_h1, a.h, b.h);
    }
}

/// Mean of the last two pairwise rates (the last one alone with two rows).
pub fn terminal_rate(rows: &[StudyRow], pick: impl Fn(&StudyRow) -> Option<f64>) -> Option<f64> {
    let rates: alloc::vec::Vec<f64> = rows.iter().skip(1).map(&pick).collect::<Option<_>>()?;
    match rates.len() {
        0 => None,
        1 => Some(rates[0]),
        n => Some(0.5 * (rates[n - 2] + rates[n - 1])),
    }
}

pub fn study_csv(rows: &[StudyRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    let opt = |r: Option<f64>| r.map(|v| alloc::format!("{v}")).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.level,
            r.h,
            r.ndof,
            r.err_l2,
            r.err_h1,
            opt(r.rate_l2),
            opt(r.rate_h1)
        );
    }
    s
}
