use dhlab::*;
use proptest::prelude::*;

#[test]
fn p_from_n_examples() {
    assert!((p_from_n(1000.0, 3) - 10.0).abs() < 1e-12);
    assert_eq!(p_from_n(1.0, 5), 1.0);
    assert!((p_from_n(1.0e6, 4) - 31.6228).abs() < 1e-4);
}

#[test]
fn diminishing_examples() {
    let r = diminishing_ranges(1000.0, 3, 2, 2.0).unwrap();
    assert!((r.ranges[0] - 500.0).abs() < 1e-9);
    assert!((r.ranges[1] - 25.0).abs() < 1e-9);
    assert!((r.m_max - 625.0).abs() < 1e-6);
    assert!(diminishing_ranges(15.0, 3, 2, 4.0).is_err());
    assert!(diminishing_ranges(100.0, 3, 1, 1.0).is_err());
}

proptest! {
    #[test]
    fn diminishing_ranges_decrease(p in 10.0..1e8f64, k in 2u32..=8, t in 1u32..=5, c in 1.01..6.0f64) {
        prop_assume!(p > c.powi(t as i32));
        let r = diminishing_ranges(p, k, t, c).unwrap();
        prop_assert_eq!(r.ranges.len(), t as usize);
        for (j, w) in r.ranges.windows(2).enumerate() {
            prop_assert!(w[1] < w[0], "P_{} ≥ P_{}", j + 2, j + 1);
        }
        let e = (1.0 - 1.0 / k as f64).powi(t as i32 - 1);
        let expect = c.powi(-(t as i32)) * p.powf(e);
        prop_assert!((r.ranges[t as usize - 1] - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn box_cost_accounting_is_exact(ranges in prop::collection::vec((-50i64..50, 0i64..40), 1..=6)) {
        let lo: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let hi: Vec<i64> = ranges.iter().map(|r| r.0 + r.1).collect();
        let b = SearchBox::new(lo, hi).unwrap();
        let sides: Vec<u128> = ranges.iter().map(|r| r.1 as u128 + 1).collect();
        prop_assert_eq!(b.volume(), sides.iter().product::<u128>());
        let cost = b.split();
        let left: u128 = sides[..cost.split].iter().product();
        let right: u128 = sides[cost.split..].iter().product();
        prop_assert_eq!((cost.left, cost.right), (left, right));
        prop_assert_eq!(cost.total(), b.volume());
    }

    #[test]
    fn permuting_form_and_box_preserves_values(lambda in prop::collection::vec(0.1..5.0f64, 3), x in prop::collection::vec(-20i64..20, 3)) {
        let f = DiagonalForm::new(3, lambda).unwrap();
        let perm = [2usize, 0, 1];
        let g = f.permuted(&perm);
        let y: Vec<i64> = perm.iter().map(|&i| x[i]).collect();
        prop_assert!((f.eval(&x) - g.eval(&y)).abs() <= 1e-9 * f.eval(&x).abs().max(1.0));
    }
}

#[test]
fn parameter_tables() {
    assert_eq!(
        parameter_lookup(4, TableId::Table1).unwrap(),
        TableRecord::Table1(dhlab::forms::Table1Row {
            k: 4,
            s0: 12,
            u0: 4,
            sigma_inv: 8
        })
    );
    let TableRecord::Table2(r) = parameter_lookup(3, TableId::Table2 { s: 7 }).unwrap() else {
        panic!("wrong record kind")
    };
    assert_eq!(r.beta(), 1.0 / 3.0);
    assert_eq!(
        parameter_lookup(5, TableId::Table3).unwrap(),
        TableRecord::Table3(dhlab::forms::Table3Row {
            k: 5,
            u: 8,
            v: 20,
            w: 12
        })
    );
    assert!(parameter_lookup(99, TableId::Table1).is_err());
    let t = ParameterTable::standard();
    for row in &t.table1 {
        assert!(row.s0 >= 2 * row.k);
    }
    assert!((t.delta_33 - ((2833f64).sqrt() - 43.0) / 41.0).abs() < 1e-15);
}

#[test]
fn parameter_table_serialization_round_trips() {
    let t = ParameterTable::standard();
    let json = serde_json::to_string(&t).unwrap();
    let back: ParameterTable = serde_json::from_str(&json).unwrap();
    assert_eq!(back, t);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
}

#[test]
fn form_validation() {
    assert!(DiagonalForm::new(3, vec![]).is_err());
    assert!(DiagonalForm::new(3, vec![1.0, 0.0]).is_err());
    assert!(DiagonalForm::new(1, vec![1.0]).is_err());
    let f = DiagonalForm::new(3, vec![1.0, 2.0]).unwrap();
    assert!(f.clone().with_irrational_pair(0, 1).is_err());
    let g = DiagonalForm::new(3, vec![1.0, 2f64.sqrt()])
        .unwrap()
        .with_irrational_pair(0, 1)
        .unwrap();
    assert_eq!(g.irrational_pair(), Some((0, 1)));
    assert!(ToleranceParams::new(0.0).is_err());
    assert!(ToleranceParams::new(1.5).is_err());
    let tp = ToleranceParams::new(0.5).unwrap();
    assert!(tp.delta(1.0e6) <= tp.tau);
    assert!(Window::new(0.0, 0.0).is_err());
}
