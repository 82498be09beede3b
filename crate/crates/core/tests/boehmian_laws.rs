use gboehm_core::boehmian::{
    axiom_suite, big_delta_convergence_check, delta_convergence_check, equivalent, make_quotient, padded_quotient,
    AxiomConfig, QuotientSettings,
};
use gboehm_core::delta::{product_family, DeltaSequence, FamilyKind};
use gboehm_core::grid::linear_combine;
use gboehm_core::{Boehmian, Error, GridFunction, GridSpec, Preset, Product};

fn grid() -> GridSpec {
    GridSpec::desk_default()
}

fn sample(p: Preset) -> GridFunction {
    p.sample(&grid(), 1e-12).unwrap()
}

fn family(k: FamilyKind) -> DeltaSequence {
    DeltaSequence::make_family(k, grid()).unwrap()
}

fn gaussian() -> GridFunction {
    sample(Preset::Gaussian { sigma: 1.0 })
}

fn unit_box() -> GridFunction {
    sample(Preset::Box { a: 0.0, b: 1.0 })
}

#[test]
fn default_suite_matches_expectations() {
    let report = axiom_suite(&AxiomConfig::default());
    for c in &report.checks {
        println!(
            "{:>12} holds={} residual={:.3e} cases={} witness={:?}",
            c.name, c.holds, c.max_residual, c.cases, c.witness
        );
    }
    assert!(report.all_as_expected, "{report:#?}");
    for name in ["A1", "A2", "A3", "A4'", "A_c", "Δ1", "Δ2", "transitivity"] {
        assert!(report.check(name).unwrap().holds, "{name}");
    }
    let a4 = report.check("A4").unwrap();
    assert!(!a4.holds);
    assert!((a4.witness.unwrap() - 1.0).abs() <= 1e-3);
    assert!(report.check("transitivity").unwrap().max_residual <= 3.0);
}

#[test]
fn classical_suite_commutes() {
    let cfg = AxiomConfig {
        op: Product::Classical,
        ..Default::default()
    };
    let report = axiom_suite(&cfg);
    assert!(report.all_as_expected, "{report:#?}");
    let a4 = report.check("A4").unwrap();
    assert!(a4.holds && a4.expected_to_hold);
    assert!(a4.witness.unwrap() < 1e-12);
}

#[test]
fn embeddings_through_different_families_agree() {
    let f = gaussian();
    for (a, b) in [
        (FamilyKind::TriangleSym, FamilyKind::BoxRight),
        (FamilyKind::BumpSym, FamilyKind::BoxRight),
        (FamilyKind::TriangleSym, FamilyKind::BumpSym),
    ] {
        let e = Boehmian::embed(&f, &family(a))
            .unwrap()
            .equivalent_to(&Boehmian::embed(&f, &family(b)).unwrap())
            .unwrap();
        assert!(e.equivalent, "{a} vs {b}: {e:?}");
    }
}

#[test]
fn padded_quotient_is_equivalent() {
    let f = unit_box();
    let (d, psi) = (family(FamilyKind::TriangleSym), family(FamilyKind::BoxRight));
    let q1 = Boehmian::embed(&f, &d).unwrap();
    let q2 = padded_quotient(&f, &d, &psi, QuotientSettings::default()).unwrap();
    let e = equivalent(q1.repr(), &q2, 8, 1e-6).unwrap();
    assert!(e.equivalent, "{e:?}");
}

#[test]
fn different_functions_are_not_equivalent() {
    let d = family(FamilyKind::TriangleSym);
    let a = Boehmian::embed(&unit_box(), &d).unwrap();
    let b = Boehmian::embed(&gaussian(), &d).unwrap();
    let e = a.equivalent_to(&b).unwrap();
    assert!(!e.equivalent);
    // Oracle at m = n = 1: ‖(box − gauss)⋆δ₁⋆δ₁‖₁ relative to the larger product of norms.
    let diff = unit_box().sub(&gaussian()).unwrap();
    let d1 = d.term(1).unwrap();
    let lower = Product::Sharp
        .apply(&Product::Sharp.apply(&diff, &d1).unwrap(), &d1)
        .unwrap()
        .l1_norm();
    assert!(e.max_residual >= lower / (gaussian().l1_norm() * 1.0) * (1.0 - 1e-9));
}

#[test]
fn sum_matches_embedding_of_sum() {
    let d = family(FamilyKind::BoxRight);
    let (f, g) = (gaussian(), unit_box());
    let sum = Boehmian::embed(&f, &d)
        .unwrap()
        .add(&Boehmian::embed(&g, &d).unwrap())
        .unwrap();
    let dd = product_family(Product::Sharp, &d, &d).unwrap();
    let fg = linear_combine(1.0, &f, 1.0, &g).unwrap();
    let direct = Boehmian::embed(&fg, &dd).unwrap();
    assert!(sum.equivalent_to(&direct).unwrap().equivalent);
    assert!(sum.reverify().unwrap() <= 1e-6);
}

#[test]
fn embedding_is_linear() {
    let d = family(FamilyKind::TriangleSym);
    let (f, g) = (gaussian(), sample(Preset::ExpRight));
    let lhs = Boehmian::embed(&linear_combine(2.0, &f, -0.5, &g).unwrap(), &d).unwrap();
    let rhs = Boehmian::embed(&f, &d)
        .unwrap()
        .scale(2.0)
        .unwrap()
        .add(&Boehmian::embed(&g, &d).unwrap().scale(-0.5).unwrap())
        .unwrap();
    assert!(lhs.equivalent_to(&rhs).unwrap().equivalent);
}

#[test]
fn scaling_identities() {
    let d = family(FamilyKind::BumpSym);
    let b = Boehmian::embed(&unit_box(), &d).unwrap();
    assert!(b.scale(1.0).unwrap().equivalent_to(&b).unwrap().equivalent);
    let zero = Boehmian::zero(&d, QuotientSettings::default()).unwrap();
    assert!(b.scale(0.0).unwrap().equivalent_to(&zero).unwrap().equivalent);
    let embedded_zero = Boehmian::embed(&GridFunction::zeros(grid()), &d).unwrap();
    assert!(embedded_zero.equivalent_to(&zero).unwrap().equivalent);
}

#[test]
fn star_extend_identities() {
    let d = family(FamilyKind::TriangleSym);
    let f = gaussian();
    let t = family(FamilyKind::BoxRight).term(10).unwrap();
    let ext = Boehmian::embed(&f, &d).unwrap().star_extend(&t).unwrap();
    let direct = Boehmian::embed(&Product::Sharp.apply(&f, &t).unwrap(), &d).unwrap();
    assert!(ext.equivalent_to(&direct).unwrap().equivalent);
    let zero = Boehmian::zero(&d, QuotientSettings::default()).unwrap();
    assert!(zero.star_extend(&t).unwrap().equivalent_to(&zero).unwrap().max_residual == 0.0);
}

#[test]
fn star_extend_by_a_narrow_kernel_approaches_the_original() {
    let d = family(FamilyKind::TriangleSym);
    let b = Boehmian::embed(&gaussian(), &d).unwrap();
    let narrow = family(FamilyKind::TriangleSym);
    let residuals: Vec<f64> = [2, 8, 32]
        .iter()
        .map(|&n| {
            b.star_extend(&narrow.term(n).unwrap())
                .unwrap()
                .equivalent_to(&b)
                .unwrap()
                .max_residual
        })
        .collect();
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
    assert!(residuals[2] < 1e-3);
}

#[test]
fn quotient_residuals_scale_absolutely() {
    // Scaling the numerator by c leaves the relative residual unchanged: the
    // absolute residual and the normalizing norms both scale by |c|.
    let d = family(FamilyKind::TriangleSym);
    let b = Boehmian::embed(&unit_box(), &d).unwrap();
    let r = b.repr().max_residual();
    let r3 = b.scale(-3.0).unwrap().repr().max_residual();
    assert!((r - r3).abs() <= 1e-12 + 1e-6 * r, "{r} {r3}");
}

#[test]
fn rejection_names_the_pair() {
    let d = family(FamilyKind::BoxRight);
    let g = gaussian();
    match make_quotient(move |_| Ok(g.clone()), d, QuotientSettings::default()) {
        Err(Error::QuotientViolation {
            m,
            n,
            residual,
            tolerance,
        }) => {
            assert_eq!((m, n), (1, 2));
            assert!(residual > tolerance);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn delta_convergence_examples() {
    let d = family(FamilyKind::TriangleSym);
    let f = gaussian();
    let g = sample(Preset::Triangle {
        center: 1.0,
        half_width: 0.1,
    });
    let limit = Boehmian::embed(&f, &d).unwrap();
    let moving = |m: usize| Boehmian::embed(&linear_combine(1.0, &f, 1.0 / m as f64, &g)?, &d);
    let r = delta_convergence_check(&moving, &limit, 8, 64, 1e-3).unwrap();
    assert!(r.pass, "{r:#?}");

    let constant = |_: usize| Ok(limit.clone());
    let r = delta_convergence_check(&constant, &limit, 8, 64, 1e-3).unwrap();
    assert!(r.pass);
    assert!(r.rows.iter().all(|row| row.residuals.iter().all(|&(_, v)| v == 0.0)));

    let big = sample(Preset::Box { a: 0.0, b: 1.0 });
    let stuck = |_: usize| Boehmian::embed(&linear_combine(1.0, &f, 1.0, &big)?, &d);
    let r = delta_convergence_check(&stuck, &limit, 8, 64, 1e-3).unwrap();
    assert!(!r.pass);
    let last = r.rows[0].residuals.last().unwrap().1;
    assert!(last > 0.3, "{last}");
}

#[test]
fn big_delta_convergence_examples() {
    let d = family(FamilyKind::BoxRight);
    let f = gaussian();
    let g = sample(Preset::Triangle {
        center: 1.0,
        half_width: 0.05,
    });
    let limit = Boehmian::embed(&f, &d).unwrap();
    let moving = |m: usize| Boehmian::embed(&linear_combine(1.0, &f, 1.0 / m as f64, &g)?, &d);
    assert!(big_delta_convergence_check(&moving, &limit, 32, 1e-3).unwrap().pass);
    let constant = |_: usize| Ok(limit.clone());
    assert!(big_delta_convergence_check(&constant, &limit, 32, 1e-3).unwrap().pass);
    let stuck = |_: usize| Boehmian::embed(&linear_combine(1.0, &f, 1.0, &unit_box())?, &d);
    assert!(!big_delta_convergence_check(&stuck, &limit, 32, 1e-3).unwrap().pass);
}

#[test]
fn convergence_requires_a_shared_family() {
    let f = gaussian();
    let limit = Boehmian::embed(&f, &family(FamilyKind::TriangleSym)).unwrap();
    let other = family(FamilyKind::BumpSym);
    let seq = |_: usize| Boehmian::embed(&f, &other);
    assert!(matches!(
        delta_convergence_check(&seq, &limit, 4, 8, 1e-3),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        big_delta_convergence_check(&seq, &limit, 8, 1e-3),
        Err(Error::Precondition(_))
    ));
}
