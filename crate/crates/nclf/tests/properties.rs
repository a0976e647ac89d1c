//! Property tests for the arithmetic layers.

use nclf::ff::{FieldExtension, FqField};
use nclf::ring::{GroupTable, Ring};
use nclf::series::SeriesRing;
use proptest::prelude::*;

fn f8() -> FqField {
    FqField::new(2, 3).unwrap()
}

fn f25() -> (FqField, FieldExtension) {
    let f5 = FqField::new(5, 1).unwrap();
    let ext = FieldExtension::new(&f5, 2).unwrap();
    (f5, ext)
}

proptest! {
    #[test]
    fn frobenius_is_a_ring_map(i in 0u64..8, j in 0u64..8) {
        let f = f8();
        let (a, b) = (f.element_from_index(i), f.element_from_index(j));
        let frob = |x: &nclf::ff::FqElem| f.frobenius_power(x, 1);
        prop_assert_eq!(frob(&a.add(&b)), frob(&a).add(&frob(&b)));
        prop_assert_eq!(frob(&a.mul(&b)), frob(&a).mul(&frob(&b)));
    }

    #[test]
    fn norm_is_multiplicative(i in 0u64..25, j in 0u64..25) {
        let (_, ext) = f25();
        let (a, b) = (ext.top().element_from_index(i), ext.top().element_from_index(j));
        prop_assert_eq!(
            ext.norm(&a.mul(&b)).unwrap(),
            ext.norm(&a).unwrap().mul(&ext.norm(&b).unwrap())
        );
    }

    #[test]
    fn lagrange_in_extension(i in 1u64..25) {
        let (_, ext) = f25();
        let a = ext.top().element_from_index(i);
        prop_assert!(a.pow(24).unwrap().is_one());
    }

    #[test]
    fn embedding_commutes_with_arithmetic(i in 0u64..5, j in 0u64..5) {
        let (f5, ext) = f25();
        let (a, b) = (f5.element_from_index(i), f5.element_from_index(j));
        prop_assert_eq!(ext.embed(&a.add(&b)), ext.embed(&a).add(&ext.embed(&b)));
        prop_assert_eq!(ext.embed(&a.mul(&b)), ext.embed(&a).mul(&ext.embed(&b)));
    }

    #[test]
    fn series_mul_is_associative_and_distributive(
        fi in prop::collection::vec(0u128..81, 4),
        gi in prop::collection::vec(0u128..81, 4),
        hi in prop::collection::vec(0u128..81, 4),
    ) {
        let ring = Ring::group_ring(9, GroupTable::cyclic(2)).unwrap();
        let sring = SeriesRing::new(&ring, 4);
        let mk = |v: &[u128]| {
            sring.from_coeffs(v.iter().map(|&i| ring.element_from_index(i)).collect())
        };
        let (f, g, h) = (mk(&fi), mk(&gi), mk(&hi));
        prop_assert_eq!(
            f.mul(&g).unwrap().mul(&h).unwrap(),
            f.mul(&g.mul(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
    }

    #[test]
    fn series_inverse_is_two_sided(
        c0 in 0u128..81,
        rest in prop::collection::vec(0u128..81, 5),
    ) {
        let ring = Ring::group_ring(9, GroupTable::cyclic(2)).unwrap();
        let sring = SeriesRing::new(&ring, 6);
        let head = ring.element_from_index(c0);
        prop_assume!(ring.is_unit(&head));
        let mut coeffs = vec![head];
        coeffs.extend(rest.iter().map(|&i| ring.element_from_index(i)));
        let f = sring.from_coeffs(coeffs);
        let g = f.inverse().unwrap();
        prop_assert!(f.mul(&g).unwrap().is_one());
        prop_assert!(g.mul(&f).unwrap().is_one());
    }
}
