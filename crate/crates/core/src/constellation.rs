//! Rotated M-ary constellations with Gray labelling.
//!
//! CIOD transmission reaches full diversity only when the coordinate
//! product distance (CPD) of the symbol set is nonzero, so square QAM and
//! QPSK are rotated by a fixed angle before use.

use crate::{is_power_of_two, log2_exact, Complex64, Error, Result};
use std::f64::consts::PI;
use std::fmt;

/// CPD-maximizing rotation for QPSK, in degrees.
pub const QPSK_ROTATION_DEG: f64 = 13.2885;
/// CPD-maximizing rotation for square lattice constellations, in degrees.
pub const SQUARE_QAM_ROTATION_DEG: f64 = 31.7175;

/// Base (unrotated) constellation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseKind {
    Psk,
    SquareQam,
}

impl BaseKind {
    pub fn name(&self) -> &'static str {
        match self {
            BaseKind::Psk => "psk",
            BaseKind::SquareQam => "qam",
        }
    }
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BaseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "psk" => Ok(BaseKind::Psk),
            "qam" | "squareqam" | "square_qam" => Ok(BaseKind::SquareQam),
            other => Err(Error::Config(format!("unknown base kind `{other}`"))),
        }
    }
}

/// A power-normalized, rotated M-ary symbol set.
///
/// `points[k]` carries the bit label `labels[k]`; `index_of_label` is the
/// inverse map.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Complex64>,
    labels: Vec<usize>,
    index_of_label: Vec<usize>,
    base_kind: BaseKind,
    rotation_deg: f64,
    energy: f64,
}

fn gray(k: usize) -> usize {
    k ^ (k >> 1)
}

impl Constellation {
    /// Builds the base set scaled to `target_energy`, Gray-labels it, then
    /// rotates every point by `rotation_deg`.
    ///
    /// PSK points sit at `2*pi*k/M` (QPSK is `{1, j, -1, -j}`), which is the
    /// orientation the tabulated QPSK rotation angle refers to.
    pub fn build(base_kind: BaseKind, m: usize, rotation_deg: f64, target_energy: f64) -> Result<Self> {
        if !(target_energy > 0.0) || !target_energy.is_finite() {
            return Err(Error::NonPositiveEnergy(target_energy));
        }
        let (base, labels) = match base_kind {
            BaseKind::Psk => {
                if m < 2 || !is_power_of_two(m) {
                    return Err(Error::InvalidOrder { kind: "PSK", m });
                }
                let pts: Vec<Complex64> = (0..m)
                    .map(|k| {
                        let p = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
                        // exact zeros on the axes so unrotated sets have CPD exactly 0
                        let snap = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
                        Complex64::new(snap(p.re), snap(p.im))
                    })
                    .collect();
                let labels = (0..m).map(gray).collect();
                (pts, labels)
            }
            BaseKind::SquareQam => {
                let bits = log2_exact(m);
                if m < 4 || !is_power_of_two(m) || !bits.is_multiple_of(2) {
                    return Err(Error::InvalidOrder { kind: "square QAM", m });
                }
                let side = 1usize << (bits / 2);
                let level = |i: usize| 2.0 * i as f64 - (side as f64 - 1.0);
                let mut pts = Vec::with_capacity(m);
                let mut labels = Vec::with_capacity(m);
                for a in 0..side {
                    for b in 0..side {
                        pts.push(Complex64::new(level(a), level(b)));
                        labels.push((gray(a) << (bits / 2)) | gray(b));
                    }
                }
                (pts, labels)
            }
        };
        let mean_energy = base.iter().map(|p| p.norm_sqr()).sum::<f64>() / m as f64;
        let scale = (target_energy / mean_energy).sqrt();
        let phasor = Complex64::from_polar(1.0, rotation_deg.to_radians());
        let points: Vec<Complex64> = base.into_iter().map(|p| p * scale * phasor).collect();
        let mut index_of_label = vec![0; m];
        for (idx, &lab) in labels.iter().enumerate() {
            index_of_label[lab] = idx;
        }
        Ok(Self { points, labels, index_of_label, base_kind, rotation_deg, energy: target_energy })
    }

    /// Same as [`Constellation::build`] with the CPD-optimal rotation.
    pub fn with_optimal_rotation(base_kind: BaseKind, m: usize, target_energy: f64) -> Result<Self> {
        Self::build(base_kind, m, optimal_rotation(base_kind, m)?, target_energy)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        log2_exact(self.points.len())
    }

    pub fn base_kind(&self) -> BaseKind {
        self.base_kind
    }

    pub fn rotation_deg(&self) -> f64 {
        self.rotation_deg
    }

    /// Configured average symbol energy.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn label(&self, index: usize) -> usize {
        self.labels[index]
    }

    pub fn index_of_label(&self, label: usize) -> usize {
        self.index_of_label[label]
    }

    pub fn point(&self, index: usize) -> Complex64 {
        self.points[index]
    }

    /// Copy of the constellation with every point multiplied by a real `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut c = self.clone();
        c.points.iter_mut().for_each(|p| *p *= s);
        c.energy *= s * s;
        c
    }

    /// Coordinate product distance: the minimum over distinct pairs of
    /// `|dRe| * |dIm|`.
    pub fn cpd(&self) -> f64 {
        cpd_of(&self.points)
    }
}

/// CPD of an arbitrary point set; `+inf` for fewer than two points.
pub fn cpd_of(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (a, p) in points.iter().enumerate() {
        for q in &points[a + 1..] {
            let d = p - q;
            best = best.min(d.re.abs() * d.im.abs());
        }
    }
    best
}

/// CPD-maximizing rotation angle in degrees for the supported families.
pub fn optimal_rotation(base_kind: BaseKind, m: usize) -> Result<f64> {
    match base_kind {
        BaseKind::Psk if m == 4 => Ok(QPSK_ROTATION_DEG),
        BaseKind::SquareQam if m >= 4 && is_power_of_two(m) && log2_exact(m).is_multiple_of(2) => {
            Ok(SQUARE_QAM_ROTATION_DEG)
        }
        _ => Err(Error::UnsupportedRotation(format!("{}-{}", m, base_kind.name().to_uppercase()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unrotated_qpsk_is_unit_energy_axis_points() {
        let c = Constellation::build(BaseKind::Psk, 4, 0.0, 1.0).unwrap();
        let expected = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (p, (re, im)) in c.points().iter().zip(expected) {
            assert!((p.re - re).abs() < 1e-15 && (p.im - im).abs() < 1e-15);
        }
        // neighbours differ in exactly one bit
        for k in 0..4 {
            let diff = c.label(k) ^ c.label((k + 1) % 4);
            assert_eq!(diff.count_ones(), 1);
        }
        assert_eq!(c.cpd(), 0.0);
    }

    #[test]
    fn rotated_qpsk_is_rotated_copy() {
        let base = Constellation::build(BaseKind::Psk, 4, 0.0, 1.0).unwrap();
        let rot = Constellation::build(BaseKind::Psk, 4, QPSK_ROTATION_DEG, 1.0).unwrap();
        let ph = Complex64::from_polar(1.0, QPSK_ROTATION_DEG.to_radians());
        for (a, b) in base.points().iter().zip(rot.points()) {
            assert!((a * ph - b).norm() < 1e-15);
        }
    }

    #[test]
    fn rotated_qpsk_cpd_matches_enumeration() {
        let c = Constellation::build(BaseKind::Psk, 4, QPSK_ROTATION_DEG, 1.0).unwrap();
        // all 6 unordered pairs by hand
        let p = c.points();
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let oracle = pairs
            .iter()
            .map(|&(a, b)| (p[a].re - p[b].re).abs() * (p[a].im - p[b].im).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(oracle > 0.0);
        assert_eq!(c.cpd(), oracle);
    }

    #[test]
    fn qam16_rotation_is_grid_optimal() {
        let best = Constellation::build(BaseKind::SquareQam, 16, SQUARE_QAM_ROTATION_DEG, 1.0).unwrap().cpd();
        assert!(best > 0.0);
        for step in 1..450 {
            let deg = step as f64 * 0.1;
            let probe = Constellation::build(BaseKind::SquareQam, 16, deg, 1.0).unwrap().cpd();
            assert!(best >= probe - 1e-12, "angle {deg}: {probe} > {best}");
        }
    }

    #[test]
    fn qpsk_rotation_is_grid_optimal() {
        let best = Constellation::build(BaseKind::Psk, 4, QPSK_ROTATION_DEG, 1.0).unwrap().cpd();
        for step in 1..450 {
            let deg = step as f64 * 0.1;
            let probe = Constellation::build(BaseKind::Psk, 4, deg, 1.0).unwrap().cpd();
            assert!(best >= probe - 1e-12, "angle {deg}");
        }
    }

    #[test]
    fn optimal_rotation_table() {
        assert_eq!(optimal_rotation(BaseKind::Psk, 4).unwrap(), 13.2885);
        assert_eq!(optimal_rotation(BaseKind::SquareQam, 16).unwrap(), 31.7175);
        assert_eq!(optimal_rotation(BaseKind::SquareQam, 64).unwrap(), 31.7175);
        assert!(matches!(optimal_rotation(BaseKind::Psk, 8), Err(Error::UnsupportedRotation(_))));
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(Constellation::build(BaseKind::Psk, 3, 0.0, 1.0).is_err());
        assert!(Constellation::build(BaseKind::SquareQam, 8, 0.0, 1.0).is_err());
        assert!(Constellation::build(BaseKind::SquareQam, 2, 0.0, 1.0).is_err());
        assert_eq!(Constellation::build(BaseKind::Psk, 4, 0.0, 0.0), Err(Error::NonPositiveEnergy(0.0)));
        assert!(Constellation::build(BaseKind::Psk, 4, 0.0, -1.0).is_err());
    }

    #[test]
    fn labels_are_a_bijection() {
        for (kind, m) in [(BaseKind::Psk, 2), (BaseKind::Psk, 8), (BaseKind::SquareQam, 16), (BaseKind::SquareQam, 64)]
        {
            let c = Constellation::build(kind, m, 0.0, 1.0).unwrap();
            let mut seen = vec![false; m];
            for k in 0..m {
                assert!(!seen[c.label(k)]);
                seen[c.label(k)] = true;
                assert_eq!(c.index_of_label(c.label(k)), k);
            }
        }
    }

    #[test]
    fn qam_gray_neighbours_differ_by_one_bit() {
        let c = Constellation::build(BaseKind::SquareQam, 16, 0.0, 10.0).unwrap();
        let d_min = 2.0 * (10.0f64 / 10.0).sqrt();
        for a in 0..16 {
            for b in 0..16 {
                if ((c.point(a) - c.point(b)).norm() - d_min).abs() < 1e-9 {
                    assert_eq!((c.label(a) ^ c.label(b)).count_ones(), 1);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rotation_preserves_energy_and_distances(
            deg in -180.0f64..180.0,
            energy in 0.01f64..10.0,
            qam in any::<bool>(),
        ) {
            let (kind, m) = if qam { (BaseKind::SquareQam, 16) } else { (BaseKind::Psk, 8) };
            let base = Constellation::build(kind, m, 0.0, energy).unwrap();
            let rot = Constellation::build(kind, m, deg, energy).unwrap();
            let mean = rot.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / m as f64;
            prop_assert!(((mean - energy) / energy).abs() < 1e-12);
            for a in 0..m {
                for b in 0..m {
                    let d0 = (base.point(a) - base.point(b)).norm();
                    let d1 = (rot.point(a) - rot.point(b)).norm();
                    prop_assert!((d0 - d1).abs() < 1e-12 * (1.0 + energy));
                }
            }
        }

        #[test]
        fn cpd_translation_invariant_and_quadratic_in_scale(
            deg in 0.0f64..45.0,
            s in 0.1f64..5.0,
            tr in -3.0f64..3.0,
            ti in -3.0f64..3.0,
        ) {
            let c = Constellation::build(BaseKind::SquareQam, 16, deg, 1.0).unwrap();
            let base = c.cpd();
            let shifted: Vec<Complex64> = c.points().iter().map(|p| p + Complex64::new(tr, ti)).collect();
            prop_assert!((cpd_of(&shifted) - base).abs() < 1e-9);
            prop_assert!((c.scaled(s).cpd() - s * s * base).abs() < 1e-9 * (1.0 + s * s));
        }
    }
}
