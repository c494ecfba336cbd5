//! Dimension formulas on fixed instances and a self-similar test set.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use padic_approx::dimension::{
    boxdim_estimate, jb_dimension, manifold_lower_bound, rynne_dimension, waterfill, ww_exponent,
    ManifoldBound, WWInstance, WWVariant,
};
use padic_approx::exact::{int, rat};
use padic_approx::{BallSpec, ClopenSet};

#[test]
fn named_values() {
    assert_eq!(jb_dimension(&[int(3), int(2)]).unwrap(), rat(4, 3));
    assert_eq!(rynne_dimension(&[int(3), int(2)]).unwrap().value, int(1));
    assert_eq!(
        manifold_lower_bound(&[rat(8, 5)], 1, 1, ManifoldBound::Uniform).unwrap().value,
        rat(7, 8)
    );
    assert_eq!(jb_dimension(&[rat(5, 2)]).unwrap(), rat(4, 5));
}

#[test]
fn floats_and_rationals_agree() {
    let exact = jb_dimension(&[rat(7, 3), rat(3, 2), rat(6, 5)]).unwrap();
    let float = jb_dimension(&[7.0 / 3.0, 1.5, 1.2]).unwrap();
    let exact_f = exact.to_f64().unwrap();
    assert!((exact_f - float).abs() < 1e-12);
}

#[test]
fn ww_with_waterfilled_levels() {
    let tau = vec![int(3), int(2)];
    let fill = waterfill(&tau, &int(3)).unwrap();
    assert_eq!(fill.values.iter().sum::<BigRational>(), int(3));
    let t: Vec<BigRational> = tau.iter().zip(&fill.values).map(|(x, a)| x - a).collect();
    let inst = WWInstance::new(fill.values.clone(), t).unwrap();
    assert_eq!(ww_exponent(&inst, WWVariant::K2Sum).value, rat(4, 3));
}

#[test]
fn hypothesis_failures_name_the_condition() {
    let err = jb_dimension(&[int(1), int(1)]).unwrap_err().to_string();
    assert!(err.contains("Σ τ_i > n+1"), "{err}");
}

#[test]
fn middle_thirds_set_has_dimension_log2_log3() {
    let depth = 9;
    let rects: Vec<BallSpec> = (0..1u64 << depth)
        .map(|bits| {
            let x: u64 = (0..depth).map(|i| ((bits >> i) & 1) * 2 * 3u64.pow(i)).sum();
            BallSpec::cube(vec![int(x as i64)], depth)
        })
        .collect();
    let set = ClopenSet::from_rectangles(3, 1, depth, &rects).unwrap();
    let counts: Vec<(u32, BigUint)> = (1..=depth).map(|k| (k, set.box_count(k).unwrap())).collect();
    let fit = boxdim_estimate(&counts, 3).unwrap();
    assert!((fit.slope - 2f64.ln() / 3f64.ln()).abs() < 1e-9);
}
