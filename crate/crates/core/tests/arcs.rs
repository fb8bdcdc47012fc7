use dhlab::arcs::minor_sup_sweep;
use dhlab::*;
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn brute_hl(alpha: f64, w: f64, qmax: u64) -> Vec<(i64, u64)> {
    let mut hits = Vec::new();
    for q in 1..=qmax {
        let c = alpha * q as f64;
        for a in (c.floor() as i64 - 2)..=(c.ceil() as i64 + 2) {
            if gcd(a.unsigned_abs(), q) == 1 && (q as f64 * alpha - a as f64).abs() <= w {
                hits.push((a, q));
            }
        }
    }
    hits
}

proptest! {
    #[test]
    fn dh_labels_partition_the_line(alpha in -200.0..200.0f64, p in 10.0..500.0f64, t in 1.0..100.0f64) {
        let d = ArcDissection::dh(p, 3, Growth::Constant(1.0), Growth::Constant(t)).unwrap();
        let label = dh_classify(alpha, &d).unwrap();
        let x = alpha.abs();
        let major = x <= d.major_cut();
        let minor = x > d.major_cut() && x <= d.t_value();
        let trivial = x > d.t_value();
        prop_assert_eq!(major as u8 + minor as u8 + trivial as u8, 1);
        let expect = if major { ArcLabel::Major } else if minor { ArcLabel::Minor } else { ArcLabel::Trivial };
        prop_assert_eq!(label, expect);
    }

    #[test]
    fn hl_matches_brute_force(alpha in 0.0..1.0f64, p in 12.0..200.0f64, k in 2u32..=4) {
        let d = ArcDissection::hl(p, k, ArcFamily::HlN).unwrap();
        let (w, qmax) = d.hl_shape().unwrap();
        prop_assert!(qmax <= 50);
        let hits = brute_hl(alpha, w, qmax);
        prop_assert!(hits.len() <= 1);
        let label = hl_classify(alpha, &d).unwrap();
        match hits.first() {
            None => prop_assert_eq!(label, ArcLabel::Complement),
            Some(&(a, q)) => {
                let wit = label.witness().unwrap();
                prop_assert_eq!((wit.a, wit.q), (a, q));
            }
        }
    }

    #[test]
    fn hl_hits_near_rationals((a, q) in (1u64..50).prop_flat_map(|q| (0..=q, Just(q))), p in 100.0..300.0f64) {
        prop_assume!(gcd(a, q) == 1);
        let d = ArcDissection::hl(p, 3, ArcFamily::HlN).unwrap();
        let (w, qmax) = d.hl_shape().unwrap();
        prop_assume!(q <= qmax);
        let alpha = a as f64 / q as f64 + 0.5 * w / q as f64;
        let label = hl_classify(alpha, &d).unwrap();
        let wit = label.witness().unwrap();
        prop_assert_eq!((wit.a as u64, wit.q), (a, q));
    }
}

#[test]
fn hl_examples() {
    let d = ArcDissection::hl(12.0, 3, ArcFamily::HlN).unwrap();
    let wit = hl_classify(0.5, &d).unwrap().witness().unwrap();
    assert_eq!((wit.a, wit.q, wit.residual), (1, 2, 0.0));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let d = ArcDissection::hl(1.0e4, 3, ArcFamily::HlN).unwrap();
    assert_eq!(hl_classify(phi, &d).unwrap(), ArcLabel::Complement);
    let d = ArcDissection::hl(100.0, 3, ArcFamily::VSec8).unwrap();
    let wit = hl_classify(1.0 / 3.0 + 1e-6, &d)
        .unwrap()
        .witness()
        .unwrap();
    assert_eq!((wit.a, wit.q), (1, 3));
}

#[test]
fn hl_arcs_are_disjoint_at_small_p() {
    for p in [12.0, 30.0, 60.0, 120.0, 240.0] {
        let d = ArcDissection::hl(p, 3, ArcFamily::HlN).unwrap();
        let arcs = d.arcs_in_unit().unwrap();
        let (w, qmax) = d.hl_shape().unwrap();
        let mut total = 0.0;
        for q in 1..=qmax {
            for a in 0..=q {
                if gcd(a, q) == 1 {
                    let lo = (a as f64 - w) / q as f64;
                    let hi = (a as f64 + w) / q as f64;
                    total += hi.min(1.0) - lo.max(0.0);
                }
            }
        }
        assert!((arcs.measure() - total).abs() < 1e-12, "P = {p}");
    }
}

#[test]
fn t_choice_is_monotone_and_clamped() {
    let mut prev = 0.0;
    for e in 1..=8 {
        let p = 10f64.powi(e) / 2.0;
        let c = choose_t(1.0, 2f64.sqrt(), &Growth::LOG, p, 3).unwrap();
        assert!(c.t >= prev);
        assert!(c.t >= Growth::LOG.eval(p) && c.t <= p.powi(3));
        assert!(c.warning.is_none());
        prev = c.t;
    }
    let c = choose_t(2f64.sqrt(), 1.0, &Growth::LOG, 1.0e4, 3).unwrap();
    assert_eq!(c.t, 470_832.0);
    let r = choose_t(2.0, 4.0, &Growth::LOG, 1.0e4, 3).unwrap();
    assert!(r.warning.is_some());
}

#[test]
fn minor_sup_profile_fixture() {
    // regression values from a full run at grid 1000
    let frozen = [
        (64.0, 239.0, 0.260_927_333_886_927_6),
        (256.0, 3363.0, 0.122_855_935_272_874_08),
        (1024.0, 19601.0, 0.058_199_974_579_993_21),
    ];
    let form = DiagonalForm::new(3, vec![1.0, 2f64.sqrt()]).unwrap();
    let profiles = minor_sup_sweep(&form, &[64.0, 256.0, 1024.0], Growth::LOG, 1000).unwrap();
    for (pr, (p, t, sup)) in profiles.iter().zip(frozen) {
        assert_eq!((pr.p, pr.t), (p, t));
        assert!(
            (pr.sup_ratio - sup).abs() < 1e-12,
            "P = {p}: {}",
            pr.sup_ratio
        );
        assert!(pr.rows.iter().all(|r| r.class == ArcLabel::Minor));
    }
    assert!(profiles.windows(2).all(|w| w[1].sup_ratio < w[0].sup_ratio));
    let d = ArcDissection::dh(64.0, 3, Growth::LOG, Growth::Constant(239.0)).unwrap();
    let single = minor_sup_profile(&form, &d, 1).unwrap();
    assert_eq!(single.rows.len(), 1);
}

#[test]
fn rational_ratio_is_coherent_at_rationals() {
    let form = DiagonalForm::new(3, vec![1.0, 2.0]).unwrap();
    let d = ArcDissection::dh(200.0, 3, Growth::Constant(1.0), Growth::Constant(3.0)).unwrap();
    let pr = minor_sup_profile(&form, &d, 1000).unwrap();
    let at_one = pr.rows.iter().find(|r| r.alpha == 1.0).unwrap();
    assert!((at_one.sup_ratio - 1.0).abs() < 1e-9);
}
