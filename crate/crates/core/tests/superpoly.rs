use superschur::superlinalg::SuperDim;
use superschur::superpoly::{
    bidegree_dimension, span_inclusion, CoordinateRing, DEFAULT_SPAN_LIMIT,
};

#[test]
fn inverse_identities_and_cramer() {
    for (m, n) in [(1, 0), (1, 1), (2, 1), (0, 2)] {
        let c = CoordinateRing::new(SuperDim::new(m, n));
        assert!(c.verify_inverse_identities(), "({m}|{n})");
        assert!(c.verify_cramer().unwrap(), "({m}|{n})");
    }
}

#[test]
fn tensor_square_inverse_and_counit() {
    for (m, n) in [(1, 1), (2, 1)] {
        let c = CoordinateRing::new(SuperDim::new(m, n));
        assert!(c.verify_delta_inverse(), "({m}|{n})");
        assert!(c.verify_inverse_counit(), "({m}|{n})");
        assert!(c.verify_coassociativity());
        assert!(c.verify_counit_laws());
        assert!(c.twist_isomorphism_check());
    }
}

#[test]
fn bidegree_dimensions() {
    let c = CoordinateRing::new(SuperDim::new(1, 1));
    assert_eq!(bidegree_dimension(&c, 1, 0, DEFAULT_SPAN_LIMIT).unwrap(), 4);
    assert!(span_inclusion(&c, 1, 0, DEFAULT_SPAN_LIMIT).unwrap());
    let c = CoordinateRing::new(SuperDim::new(2, 0));
    assert_eq!(
        bidegree_dimension(&c, 1, 1, DEFAULT_SPAN_LIMIT).unwrap(),
        10
    );
    assert!(span_inclusion(&c, 0, 1, DEFAULT_SPAN_LIMIT).unwrap());
}

#[test]
fn mixed_bidegree_dimensions() {
    let c = CoordinateRing::new(SuperDim::new(1, 1));
    assert_eq!(bidegree_dimension(&c, 1, 1, DEFAULT_SPAN_LIMIT).unwrap(), 8);
    assert_eq!(
        bidegree_dimension(&c, 2, 1, DEFAULT_SPAN_LIMIT).unwrap(),
        12
    );
    let c = CoordinateRing::new(SuperDim::new(3, 1));
    assert_eq!(
        bidegree_dimension(&c, 1, 1, DEFAULT_SPAN_LIMIT).unwrap(),
        226
    );
}

#[test]
fn evaluated_delta_inverse() {
    use superschur::rational::Q;
    for (m, n) in [(1, 1), (2, 1), (1, 3)] {
        let c = CoordinateRing::new(SuperDim::new(m, n));
        assert!(
            c.delta_inverse_failure_random(2, 7).unwrap().is_none(),
            "({m}|{n})"
        );
    }
    // every even generator at zero kills d1
    let c = CoordinateRing::new(SuperDim::new(1, 1));
    assert!(c.delta_inverse_failure_at(&vec![Q::from(0u32); 4]).is_err());
}

#[test]
fn failures_name_no_entry_when_identities_hold() {
    let c = CoordinateRing::new(SuperDim::new(2, 1));
    assert_eq!(c.inverse_identity_failure(), None);
    assert_eq!(c.cramer_failure().unwrap(), None);
    assert_eq!(c.delta_inverse_failure(), None);
    assert_eq!(c.inverse_counit_failure(), None);
}
