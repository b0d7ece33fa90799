//! The single conversion boundary between SI internals and the engineering
//! units used on every public surface (μm, nm, ps/(nm·km), ns, Gbit/s).

/// Speed of light as used by the dispersion formulas, m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

pub const UM_PER_M: f64 = 1.0e6;
pub const NM_PER_UM: f64 = 1.0e3;
pub const PS_PER_NS: f64 = 1.0e3;

/// 1 s/m² = 1e12 ps / (1e9 nm · 1e-3 km).
pub const PS_PER_NM_KM_PER_S_PER_M2: f64 = 1.0e6;

#[inline]
pub fn um_to_m(um: f64) -> f64 {
    um / UM_PER_M
}

#[inline]
pub fn um_to_nm(um: f64) -> f64 {
    um * NM_PER_UM
}

/// Converts a curvature in μm⁻² to m⁻².
#[inline]
pub fn per_um2_to_per_m2(x: f64) -> f64 {
    x * UM_PER_M * UM_PER_M
}

#[inline]
pub fn s_per_m2_to_ps_per_nm_km(d: f64) -> f64 {
    d * PS_PER_NM_KM_PER_S_PER_M2
}

#[inline]
pub fn ps_to_ns(ps: f64) -> f64 {
    ps / PS_PER_NS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_unit_round_trip() {
        // 17 ps/(nm·km) expressed in s/m²
        let si = 17.0e-12 / (1.0e-9 * 1.0e3);
        assert!((s_per_m2_to_ps_per_nm_km(si) - 17.0).abs() < 1e-12);
    }

    #[test]
    fn length_conversions() {
        assert_eq!(um_to_nm(0.65), 650.0);
        assert_eq!(um_to_m(1.55), 1.55e-6);
        assert_eq!(per_um2_to_per_m2(1.0), 1.0e12);
        assert_eq!(ps_to_ns(170.0), 0.17);
    }
}
