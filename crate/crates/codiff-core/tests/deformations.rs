use codiff_core::coderivation::{bracket, is_codifferential};
use codiff_core::deformations::*;
use codiff_core::equivalence::CatalogIndex;
use codiff_core::hochschild::{cohomology, Cohomology};
use codiff_core::poly::{ideals_equal, Monomial};
use codiff_core::{catalog, Error, Parity, Scalar};

#[test]
fn versal_families_close() {
    for k in 1..=catalog::COUNT {
        let d = catalog::codifferential(k).unwrap();
        let f = DeformationFamily::versal(&d, 6).unwrap();
        assert!(f.is_closed(), "d{}", k);
        assert_eq!(f.parameter_count(), cohomology(&d, 2).unwrap().odd_dim, "d{}", k);
        let expected_order = match k {
            24 => 3,
            28 => 4,
            21 | 22 | 25 | 26 | 27 => 2,
            _ => 1,
        };
        assert_eq!(f.order(), expected_order, "d{}", k);
    }
}

#[test]
fn d24_has_higher_order_terms() {
    let f = DeformationFamily::versal(&catalog::codifferential(24).unwrap(), 6).unwrap();
    assert!(f.higher_order_terms().count() > 0);
}

/// The degree-2 relations equal the `H^3` coordinates of `1/2 [F, F]` for
/// `F = sum_i t_i delta_i`, computed here term by term.
#[test]
fn order_two_obstructions_by_direct_expansion() {
    for k in 1..=catalog::COUNT {
        let d = catalog::codifferential(k).unwrap();
        let f = DeformationFamily::infinitesimal_universal(&d).unwrap().extend_order(2).unwrap();
        let h3 = Cohomology::new(&d, 3, Parity::Even).unwrap();
        let dirs = f.directions();
        let r = dirs.len();
        for i in 0..r {
            for j in i..r {
                let mut b = bracket(&dirs[i], &dirs[j]);
                if i == j {
                    b = b.scale(&Scalar::from_frac(1, 2));
                }
                let coords = h3.coordinates(&b).unwrap();
                let m = Monomial::var(r, i).mul(&Monomial::var(r, j));
                for (a, rel) in f.relations().iter().enumerate() {
                    assert_eq!(rel.coeff(&m), coords[a], "d{} t{} t{} class {}", k, i + 1, j + 1, a);
                }
            }
        }
    }
}

#[test]
fn stated_relation_ideals() {
    for k in [21, 22, 23, 24, 27] {
        let d = catalog::codifferential(k).unwrap();
        let f = DeformationFamily::versal(&d, 6).unwrap();
        let frame = Frame::new(&d, relation_frame(k).unwrap()).unwrap();
        let computed: Vec<_> = f.relations_of_degree(2).iter().map(|p| frame.pull_back(p)).collect();
        let stated = reference_relations(k).unwrap();
        assert!(ideals_equal(&computed, &stated), "d{}: {:?}", k, computed.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    }
}

#[test]
fn d25_relation_count() {
    let f = DeformationFamily::versal(&catalog::codifferential(25).unwrap(), 6).unwrap();
    let mut distinct: Vec<_> = f.relation_ideal().into_iter().map(|p| p.monic()).collect();
    distinct.sort_by_key(|p| p.to_string());
    distinct.dedup();
    assert_eq!(distinct.len(), 5);
    assert_eq!(f.obstruction_classes().len(), 8);
}

#[test]
fn evaluation_checks_relations() {
    let d = catalog::codifferential(21).unwrap();
    let f = DeformationFamily::versal(&d, 6).unwrap();
    let frame = Frame::new(&d, relation_frame(21).unwrap()).unwrap();
    let on = frame.to_canonical(&[Scalar::from_int(2), Scalar::from_int(2)]);
    assert!(is_codifferential(&f.evaluate_at(&on).unwrap()));
    let off = frame.to_canonical(&[Scalar::from_int(1), Scalar::from_int(2)]);
    assert!(matches!(f.evaluate_at(&off), Err(Error::RelationViolated { .. })));
    assert!(matches!(f.evaluate_at(&[Scalar::one()]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn reference_directions_are_cocycles_spanning_h2() {
    for k in 1..=catalog::COUNT {
        let Some(dirs) = reference_directions(k) else { continue };
        let d = catalog::codifferential(k).unwrap();
        let frame = Frame::new(&d, dirs).unwrap();
        let m = codiff_core::linalg::ExactMatrix::from_dense(&frame.matrix).unwrap();
        assert_eq!(codiff_core::linalg::rank(&m), frame.len(), "d{}", k);
    }
}

#[test]
fn jump_graph_is_loop_free_and_transitive() {
    let g = JumpGraph::build(&SamplePlan::default(), 6).unwrap();
    assert!(g.self_loops().is_empty());
    assert!(g.transitivity_violations().is_empty(), "{:?}", g.transitivity_violations());
    let e = g.edges();
    assert_eq!(e[&2], [1].into());
    assert_eq!(e[&26], [1, 2, 8, 9].into());
    assert!(g.to_dot().contains("d27 -> d26;"));
}

#[test]
fn every_branch_sample_is_identified() {
    let idx = CatalogIndex::new().unwrap();
    for k in 1..=catalog::COUNT {
        let rep = catalog_jumps(k, &SamplePlan::default(), &idx, 6).unwrap();
        for b in &rep.branches {
            assert!(matches!(b.outcome, BranchOutcome::Jump(_) | BranchOutcome::NoJump), "d{} {}: {:?}", k, b.name, b.outcome);
        }
    }
}
