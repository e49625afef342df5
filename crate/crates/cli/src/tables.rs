//! Theory tables printed by `ptw laws`.

use ptw_core::{LimitLaw, Result};

use crate::report::TableRow;
use crate::selftest::law_name;

/// Largest moment order in the tables.
pub const TABLE_MAX_MOMENT: usize = 8;

/// Moments, supports, atoms and densities on `bins + 1` equispaced points for
/// `SC(0,1)`, `SC(1,1/α)`, `MP(α)` and the product of two semicircles.
pub fn law_tables(alpha: f64, bins: usize) -> Result<Vec<TableRow>> {
    let laws = [
        LimitLaw::semicircle(0.0, 1.0)?,
        LimitLaw::semicircle(1.0, 1.0 / alpha)?,
        LimitLaw::marchenko_pastur(alpha)?,
        LimitLaw::ProductSemicircle,
    ];
    let mut rows = Vec::new();
    for law in &laws {
        let name = law_name(law);
        let row = |statistic: String, x: Option<f64>, value: f64| TableRow {
            law: name.clone(),
            statistic,
            x,
            value,
        };
        for k in 0..=TABLE_MAX_MOMENT {
            rows.push(row(format!("moment_{k}"), None, law.moment(k)?));
        }
        let (lo, hi) = law.support()?;
        rows.push(row("support_low".into(), None, lo));
        rows.push(row("support_high".into(), None, hi));
        rows.push(row("atom_at_zero".into(), None, law.atom_at_zero()));
        if matches!(law, LimitLaw::ProductSemicircle) {
            continue;
        }
        for i in 0..=bins {
            let x = lo + (hi - lo) * i as f64 / bins as f64;
            rows.push(row("density".into(), Some(x), law.density(x)?));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_contain_catalan_moments() {
        let rows = law_tables(4.0, 10).unwrap();
        let find = |law: &str, stat: &str| {
            rows.iter()
                .find(|r| r.law == law && r.statistic == stat)
                .unwrap()
                .value
        };
        assert_eq!(find("sc(0,1)", "moment_4"), 2.0);
        assert_eq!(find("product_sc", "moment_4"), 4.0);
        assert_eq!(find("mp(4)", "moment_1"), 1.0);
        let densities = rows
            .iter()
            .filter(|r| r.law == "mp(4)" && r.statistic == "density")
            .count();
        assert_eq!(densities, 11);
    }
}
