//! Wick-contraction moments against independent closed forms.

use entspec::diagrams::genus_expansion;
use entspec::{
    asymptotic_spec, catalan, enumerate_pairings, finite_moment_exact, loop_structure, normalized_moment,
    planar_moment, ConstraintSpec, ModelKind, GOLDEN,
};

fn blockaded(phi: f64) -> ConstraintSpec {
    asymptotic_spec(ModelKind::Blockaded { phi }).unwrap()
}

#[test]
fn unconstrained_planar_moments_are_catalan() {
    let spec = ConstraintSpec::unconstrained();
    for n in 1..=8 {
        assert_eq!(planar_moment(&spec, n).unwrap(), catalan(n) as f64);
    }
}

/// Complex Wishart `E Tr W^n` for square `N x N` with entries of variance
/// `1/N`, from the Hanlon-Stanley-Stembridge formulas:
/// `n = 3`: `5N + 1/N`; `n = 4`: `14N + 10/N`.
#[test]
fn genus_expansion_matches_wishart() {
    let spec = ConstraintSpec::unconstrained();
    assert_eq!(genus_expansion(&spec, 3).unwrap(), vec![(1, 5.0), (-1, 1.0)]);
    assert_eq!(genus_expansion(&spec, 4).unwrap(), vec![(1, 14.0), (-1, 10.0)]);
}

/// `E Tr (X X^dagger)^2 = a b (a + b) / N^2` for an `a x b` block.
#[test]
fn rectangular_block_second_moment() {
    let m = finite_moment_exact(&[3], &[5], &[vec![1]], 2, 2).unwrap();
    assert_eq!(m, 30.0);
}

#[test]
fn six_site_chain_oracle() {
    let c = vec![vec![1, 1], vec![1, 0]];
    assert_eq!(finite_moment_exact(&[13, 8], &[13, 8], &c, 8, 2).unwrap(), 221.40625);
}

#[test]
fn blockaded_anchors() {
    for phi in [0.5, 1.0, GOLDEN, 3.0] {
        let spec = blockaded(phi);
        let m1 = planar_moment(&spec, 1).unwrap();
        let m2 = planar_moment(&spec, 2).unwrap();
        assert!((m1 - (phi * phi + 2.0 * phi)).abs() < 1e-12);
        assert!((m2 - 2.0 * (phi.powi(3) + 3.0 * phi * phi + phi)).abs() < 1e-11);
    }
    let mu2 = normalized_moment(&blockaded(GOLDEN), 2).unwrap();
    assert!((mu2 - (12.0 * GOLDEN + 8.0) / (5.0 * (GOLDEN + 1.0))).abs() < 1e-12);
}

#[test]
fn planar_pairings_have_unit_euler_characteristic() {
    for n in 1..=6 {
        let all = enumerate_pairings(n, false).unwrap();
        let planar = all.iter().filter(|p| loop_structure(p).chi == 1).count();
        assert_eq!(planar as u64, catalan(n));
        assert!(all.iter().all(|p| loop_structure(p).chi <= 1));
    }
}
