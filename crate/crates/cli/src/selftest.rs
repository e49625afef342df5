//! Exhaustive combinatorics and law checks run by `ptw selftest`.

use std::collections::HashSet;

use ptw_core::combinatorics::{
    catalan, count_admissible_classes, enumerate_nc, enumerate_nc2, interleave, kreweras,
    wishart_admissible_classes, wishart_matching_classes,
};
use ptw_core::laws::{mp_moment, sc_moment};
use ptw_core::{LimitLaw, Partition, Result};

use crate::report::Check;
use crate::thresholds as th;

/// Largest order of the NC and Kreweras items.
pub const NC_MAX_K: usize = 8;
/// Largest half-order of the chording counts.
pub const CHORDING_MAX_K: usize = 6;
/// Largest order of the Wishart-admissible bijection item.
pub const WISHART_MAX_K: usize = 6;
/// Largest order of the Wishart inequality item.
pub const WISHART_INEQ_MAX_K: usize = 5;
/// Largest order of the admissible-triple counts.
pub const TRIPLE_MAX_K: usize = 6;

/// Every item of the self-test, in a fixed order.
pub fn selftest_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for k in 1..=NC_MAX_K {
        let count = enumerate_nc(k)?.count() as f64;
        checks.push(Check::equal(
            format!("nc_count_k{k}"),
            count,
            catalan(k)? as f64,
        ));
    }
    for k in 1..=CHORDING_MAX_K {
        let count = enumerate_nc2(2 * k)?.count() as f64;
        checks.push(Check::equal(
            format!("nc2_count_k{}", 2 * k),
            count,
            catalan(k)? as f64,
        ));
    }
    for k in 1..=NC_MAX_K {
        checks.push(Check::equal(
            format!("kreweras_violations_k{k}"),
            kreweras_violations(k)? as f64,
            0.0,
        ));
    }
    for k in 1..=WISHART_INEQ_MAX_K {
        checks.push(Check::equal(
            format!("wishart_inequality_violations_k{k}"),
            wishart_inequality_violations(k)? as f64,
            0.0,
        ));
    }
    for k in 1..=WISHART_MAX_K {
        let (count, violations) = wishart_bijection(k)?;
        checks.push(Check::equal(
            format!("wishart_admissible_count_k{k}"),
            count as f64,
            catalan(k)? as f64,
        ));
        checks.push(Check::equal(
            format!("wishart_admissible_violations_k{k}"),
            violations as f64,
            0.0,
        ));
    }
    for k in 1..=TRIPLE_MAX_K {
        let expected = if k % 2 == 0 { catalan(k / 2)? } else { 0 };
        checks.push(Check::equal(
            format!("admissible_triples_k{k}"),
            count_admissible_classes(k)? as f64,
            expected as f64,
        ));
    }
    let sc = LimitLaw::semicircle(0.0, 1.0)?;
    let mut identity_gap: f64 = 0.0;
    for k in 0..=8 {
        identity_gap = identity_gap
            .max((sc_moment(&sc, 2 * k)? - catalan(k)? as f64).abs())
            .max((mp_moment(1.0, k)? - catalan(k)? as f64).abs());
    }
    checks.push(Check::equal("semicircle_square_is_mp1", identity_gap, 0.0));
    for law in reference_laws()? {
        let mass = law.expectation(|_| 1.0)?;
        checks.push(Check::within(
            format!("{}_mass", law_name(&law)),
            mass,
            1.0,
            th::LAW_MASS,
        ));
        let mut gap: f64 = 0.0;
        for k in 0..=8 {
            let quad = law.expectation(|x| x.powi(k as i32))?;
            gap = gap.max((quad - law.moment(k)?).abs());
        }
        checks.push(Check::at_most(
            format!("{}_moment_quadrature", law_name(&law)),
            gap,
            th::LAW_MOMENT,
        ));
    }
    Ok(checks)
}

/// Laws cross-checked by quadrature.
pub fn reference_laws() -> Result<Vec<LimitLaw>> {
    Ok(vec![
        LimitLaw::semicircle(0.0, 1.0)?,
        LimitLaw::semicircle(1.0, 0.25)?,
        LimitLaw::marchenko_pastur(0.5)?,
        LimitLaw::marchenko_pastur(1.0)?,
        LimitLaw::marchenko_pastur(4.0)?,
    ])
}

pub fn law_name(law: &LimitLaw) -> String {
    match *law {
        LimitLaw::Semicircle { mean, variance } => format!("sc({mean},{variance})"),
        LimitLaw::MarchenkoPastur { alpha } => format!("mp({alpha})"),
        LimitLaw::ProductSemicircle => "product_sc".into(),
    }
}

/// Failures of bijectivity, non-crossingness, the block-count identity and
/// the singleton / pair characterisations over `NC(k)`.
pub fn kreweras_violations(k: usize) -> Result<usize> {
    let mut bad = 0;
    let mut images: HashSet<Partition> = HashSet::new();
    let mut total = 0;
    for pi in enumerate_nc(k)? {
        total += 1;
        let kp = kreweras(&pi)?;
        bad += usize::from(!kp.is_noncrossing());
        bad += usize::from(!interleave(&pi, &kp)?.is_noncrossing());
        bad += usize::from(pi.block_count() + kp.block_count() != k + 1);
        let sizes = kp.block_sizes();
        let size_of = |i: usize| sizes[kp.rgs()[i]];
        for i in 0..k {
            let next = (i + 1) % k;
            bad += usize::from((size_of(i) == 1) != pi.same_block(i, next));
            for j in (0..k).filter(|&j| j != i) {
                let pair = size_of(i) == 2 && kp.same_block(i, j);
                let expected =
                    pi.same_block(i, (j + 1) % k) && pi.same_block(next, j) && !pi.same_block(i, j);
                bad += usize::from(pair != expected);
            }
        }
        images.insert(kp);
    }
    bad += total - images.len();
    Ok(bad)
}

/// Matching pairs of order `k` violating `ℓ_W ≤ d_W + 1 ≤ k + 1` or `n_+ ≤ 4(k + 1 − ℓ_W)`.
pub fn wishart_inequality_violations(k: usize) -> Result<usize> {
    Ok(wishart_matching_classes(k)?
        .iter()
        .filter(|cl| {
            let s = cl.stats;
            !(s.l_w <= s.d_w + 1 && s.d_w <= k && s.nplus + 4 * s.l_w <= 4 * (k + 1))
        })
        .count())
}

/// Number of Wishart-admissible classes and the violations of the
/// non-crossing / Kreweras-complement structure and of bijectivity onto `NC(k)`.
pub fn wishart_bijection(k: usize) -> Result<(usize, usize)> {
    let classes = wishart_admissible_classes(k)?;
    let mut bad = 0;
    let mut images = HashSet::new();
    for cl in &classes {
        bad += usize::from(!cl.a.is_noncrossing() || !cl.c.is_noncrossing());
        if cl.a.is_noncrossing() {
            bad += usize::from(kreweras(&cl.a)? != cl.c);
        }
        images.insert(cl.c.clone());
    }
    bad += classes.len() - images.len();
    let nc: HashSet<Partition> = enumerate_nc(k)?.collect();
    bad += usize::from(images != nc);
    Ok((classes.len(), bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_items_pass() {
        let checks = selftest_checks().unwrap();
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        let names: HashSet<&str> = checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names.len(), checks.len());
        let nc4 = checks.iter().find(|c| c.name == "nc_count_k4").unwrap();
        assert_eq!(nc4.observed, 14.0);
        let t6 = checks
            .iter()
            .find(|c| c.name == "admissible_triples_k6")
            .unwrap();
        assert_eq!(t6.observed, 5.0);
    }
}
