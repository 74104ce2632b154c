use ontodem_cli::{mann_whitney_u, Alternative};
use proptest::prelude::*;

/// P-value by enumerating every split of the pooled sample into groups of
/// the original sizes.
fn enumerated_p(a: &[f64], b: &[f64], alt: Alternative) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (n, total) = (a.len(), pooled.len());
    let u_of = |mask: u32| {
        let mut u = 0.0;
        for i in (0..total).filter(|i| mask & (1 << i) != 0) {
            for j in (0..total).filter(|j| mask & (1 << j) == 0) {
                u += match pooled[i].partial_cmp(&pooled[j]).unwrap() {
                    std::cmp::Ordering::Greater => 1.0,
                    std::cmp::Ordering::Equal => 0.5,
                    std::cmp::Ordering::Less => 0.0,
                };
            }
        }
        u
    };
    let observed = u_of((1 << n) - 1);
    let mean = (n * (total - n)) as f64 / 2.0;
    let (mut hits, mut count) = (0usize, 0usize);
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n {
            continue;
        }
        count += 1;
        let u = u_of(mask);
        let eps = 1e-9;
        let hit = match alt {
            Alternative::Greater => u >= observed - eps,
            Alternative::Less => u <= observed + eps,
            Alternative::TwoSided => (u - mean).abs() >= (observed - mean).abs() - eps,
        };
        hits += hit as usize;
    }
    hits as f64 / count as f64
}

fn sample(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u8..6).prop_map(f64::from), 1..=max)
}

proptest! {
    #[test]
    fn u_statistics_sum_to_product(a in sample(30), b in sample(30)) {
        prop_assume!(a.iter().chain(&b).any(|&x| x != a[0]));
        let r = mann_whitney_u(&a, &b, Alternative::TwoSided).unwrap();
        prop_assert!((r.u_a + r.u_b - (a.len() * b.len()) as f64).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&r.p));
    }

    #[test]
    fn exact_p_matches_enumeration(a in sample(6), b in sample(6)) {
        prop_assume!(a.iter().chain(&b).any(|&x| x != a[0]));
        for alt in [Alternative::TwoSided, Alternative::Greater, Alternative::Less] {
            let r = mann_whitney_u(&a, &b, alt).unwrap();
            prop_assert!(r.exact);
            let want = enumerated_p(&a, &b, alt);
            prop_assert!((r.p - want).abs() < 1e-9, "{alt}: {} vs {want}", r.p);
        }
    }

    #[test]
    fn swapping_samples_swaps_tails(a in sample(8), b in sample(8)) {
        prop_assume!(a.iter().chain(&b).any(|&x| x != a[0]));
        let g = mann_whitney_u(&a, &b, Alternative::Greater).unwrap();
        let l = mann_whitney_u(&b, &a, Alternative::Less).unwrap();
        prop_assert!((g.p - l.p).abs() < 1e-12);
    }
}

#[test]
fn shifted_samples_are_significant() {
    let a: Vec<f64> = (0..10).map(|k| 10.0 + k as f64).collect();
    let b: Vec<f64> = (0..10).map(f64::from).collect();
    let r = mann_whitney_u(&a, &b, Alternative::Greater).unwrap();
    assert!(r.p < 1e-4);
    assert_eq!(r.u_a, 100.0);
}
