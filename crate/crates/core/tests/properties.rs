use awg_core::link::{relative_index_difference, MTDM_FACTOR};
use awg_core::waveguide::{dnc_dt, effective_index, normalized_frequency, resolve_indices, wavelength_shift, B_KNEE_V};
use awg_core::{
    dispersion_sample, DerivativeMode, EffectiveIndexModel, IndexMode, LinkBudget, Materials, WaveguideDesign, YFactor,
};
use proptest::prelude::*;

fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn index_mode() -> impl Strategy<Value = IndexMode> {
    prop_oneof![Just(IndexMode::DesignAnchored), Just(IndexMode::MaterialDerived)]
}

fn nc_model() -> impl Strategy<Value = EffectiveIndexModel> {
    prop_oneof![Just(EffectiveIndexModel::Literal), Just(EffectiveIndexModel::Mode)]
}

prop_compose! {
    fn design()(n2 in 1.40f64..1.70, gap in 0.05f64..1.0, a in 0.5f64..10.0, alpha in 1e-6f64..2e-5,
                lambda0 in 1.2f64..1.65, t0 in 15.0f64..40.0, index_mode in index_mode(), nc_model in nc_model())
        -> WaveguideDesign {
        WaveguideDesign {
            core_width_a: a,
            n1_design: n2 + gap,
            n2_design: n2,
            alpha_sub: alpha,
            lambda0,
            t0,
            index_mode,
            nc_model,
        }
    }
}

proptest! {
    #[test]
    fn linbo3_derivatives_match_differences(l in 1.0f64..1.64, t in 20.0f64..70.0) {
        let m = Materials::default();
        let s = m.core_sample(l, t).unwrap();
        let n = |l: f64, t: f64| m.linbo3.index(l, t).unwrap();
        prop_assert!(rel(s.dn_dlambda, central(|x| n(x, t), l, 1e-5)) < 1e-5);
        prop_assert!(rel(s.dn_dt, central(|x| n(l, x), t, 1e-3)) < 1e-5);
        let h = 1e-4;
        let fd2 = (n(l + h, t) - 2.0 * s.n + n(l - h, t)) / (h * h);
        prop_assert!(rel(s.d2n_dlambda2, fd2) < 1e-4);
    }

    #[test]
    fn pmma_derivatives_match_differences(l in 1.0f64..1.64, t in 20.0f64..70.0) {
        let m = Materials::default();
        let s = m.cladding_sample(l, t).unwrap();
        let n = |l: f64, t: f64| m.pmma.index(l, t).unwrap();
        prop_assert!(rel(s.dn_dlambda, central(|x| n(x, t), l, 1e-5)) < 1e-5);
        prop_assert!(rel(s.dn_dt, central(|x| n(l, x), t, 1e-3)) < 1e-5);
    }

    #[test]
    fn shift_vanishes_at_reference(d in design()) {
        let m = Materials::default();
        prop_assert_eq!(wavelength_shift(&m, &d, d.t0).unwrap(), 0.0);
    }

    #[test]
    fn effective_index_rate_matches_difference(d in design(), t in 20.0f64..70.0) {
        let m = Materials::default();
        // b(V) has a kink at the knee
        let g = resolve_indices(&m, &d, d.lambda0, t).unwrap();
        let v = normalized_frequency(d.core_width_a, d.lambda0, g.n1, g.n2);
        prop_assume!(d.nc_model == EffectiveIndexModel::Literal || (v - B_KNEE_V).abs() > 1e-2);
        let nc = |x: f64| effective_index(&m, &d, x).unwrap();
        let analytic = dnc_dt(&m, &d, t).unwrap();
        let h = 1e-3;
        let fd = central(nc, t, h);
        // relative tolerance plus the difference quotient's roundoff floor
        let floor = 8.0 * f64::EPSILON * nc(t).abs() / h;
        prop_assert!((analytic - fd).abs() < 1e-6 * fd.abs() + floor, "analytic {analytic:e} fd {fd:e}");
    }

    #[test]
    fn rate_times_broadening_is_constant(nl in 1u32..=24, nch in 1u32..64, len in 0.1f64..100.0,
                                         l in 1.0f64..1.64, t in 20.0f64..70.0) {
        let budget = LinkBudget { num_links: nl, num_channels: nch, fiber_length_km: len, temperature: t,
                                  ..Default::default() };
        let s = dispersion_sample(&Materials::default(), &WaveguideDesign::default(), &budget, l).unwrap();
        prop_assert!((s.brm_gbps * s.delta_tau_ns - MTDM_FACTOR).abs() <= f64::EPSILON * MTDM_FACTOR);
        prop_assert!((s.brlink_gbps - f64::from(nch) * s.brm_gbps).abs() <= 4.0 * f64::EPSILON * s.brlink_gbps);
    }

    #[test]
    fn waveguide_dispersion_scales_with_contrast(n2a in 1.40f64..1.55, gap in 0.01f64..0.1, l in 1.0f64..1.64) {
        let m = Materials::default();
        let budget = LinkBudget::default();
        let low = WaveguideDesign { n2_design: n2a + gap, ..Default::default() };
        let high = WaveguideDesign { n2_design: n2a, ..Default::default() };
        prop_assert!(relative_index_difference(2.33, n2a).unwrap() > relative_index_difference(2.33, n2a + gap).unwrap());
        let dl = dispersion_sample(&m, &low, &budget, l).unwrap().dw;
        let dh = dispersion_sample(&m, &high, &budget, l).unwrap().dw;
        prop_assert!(dh.abs() > dl.abs());
    }
}

#[test]
fn derivative_modes_agree_on_everything_but_curvature() {
    let exact = Materials::default();
    let paper = Materials {
        derivative_mode: DerivativeMode::PaperLiteral,
        ..exact
    };
    let (e, p) = (
        exact.core_sample(1.3, 27.0).unwrap(),
        paper.core_sample(1.3, 27.0).unwrap(),
    );
    assert_eq!((e.n, e.dn_dlambda, e.dn_dt), (p.n, p.dn_dlambda, p.dn_dt));
    let gap = p.d2n_dlambda2 - e.d2n_dlambda2;
    assert!((gap - e.dn_dlambda * e.dn_dlambda / e.n).abs() < 1e-15);
}

#[test]
fn auto_y_tracks_operating_point() {
    let m = Materials::default();
    let d = WaveguideDesign::default();
    let cutoff = dispersion_sample(&m, &d, &LinkBudget::default(), 1.55).unwrap();
    let auto = dispersion_sample(
        &m,
        &d,
        &LinkBudget {
            y_factor: YFactor::Auto,
            ..Default::default()
        },
        1.55,
    )
    .unwrap();
    assert_eq!(cutoff.dm, auto.dm);
    assert_ne!(cutoff.dw, auto.dw);
}
