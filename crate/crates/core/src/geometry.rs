//! Array geometry and the deterministic line-of-sight channel.
//!
//! The BS carries a uniform linear array (ULA), the IRS a uniform rectangular
//! array (URA) of `N = N1 * N2` reflecting elements. Both arrays are oriented
//! by a boresight azimuth/elevation pair `(phi, theta)`: the element axes are
//! the tangent-frame unit vectors orthogonal to the boresight direction, so a
//! `(pi/2, 0)` boresight (both arrays facing each other along +y) yields a
//! horizontal first axis and a vertical second axis. Under the spherical wave
//! model the LoS channel entry for each antenna/element pair is a pure phase
//! set by their exact Euclidean distance, so no far-field rank-one structure
//! is imposed.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::{CMat, Cplx};

/// Unit vectors of the two principal array axes for a boresight direction
/// `(azimuth phi, elevation theta)`.
///
/// `n1` is the horizontal tangent `(-sin phi, cos phi, 0)` and `n2` the
/// elevation tangent `(-sin theta cos phi, -sin theta sin phi, cos theta)`.
/// Both are unit length and mutually orthogonal for every angle pair; angles
/// wrap modulo `2 pi`.
pub fn principal_unit_vectors(azimuth: f64, elevation: f64) -> (Vector3<f64>, Vector3<f64>) {
    let (sp, cp) = azimuth.sin_cos();
    let (st, ct) = elevation.sin_cos();
    let n1 = Vector3::new(-sp, cp, 0.0);
    let n2 = Vector3::new(-st * cp, -st * sp, ct);
    (n1, n2)
}

/// Boresight (array normal) for the same angle convention.
pub fn boresight(azimuth: f64, elevation: f64) -> Vector3<f64> {
    let (sp, cp) = azimuth.sin_cos();
    let (st, ct) = elevation.sin_cos();
    Vector3::new(ct * cp, ct * sp, st)
}

/// Linear (BS) or rectangular (IRS) element lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrayKind {
    /// `count` elements spaced `spacing` meters along the first principal axis.
    Ula { count: usize, spacing: f64 },
    /// `n1 x n2` elements spaced `spacing1`/`spacing2` meters along the two
    /// principal axes. Element `(i1, i2)` has flat index `i1 * n2 + i2`.
    Ura { n1: usize, n2: usize, spacing1: f64, spacing2: f64 },
}

/// Placement and orientation of one array, plus the carrier wavelength.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    pub origin: Vector3<f64>,
    pub azimuth: f64,
    pub elevation: f64,
    pub kind: ArrayKind,
    pub wavelength: f64,
}

impl ArrayGeometry {
    pub fn ula(
        origin: Vector3<f64>,
        azimuth: f64,
        elevation: f64,
        count: usize,
        spacing: f64,
        wavelength: f64,
    ) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("ULA needs at least one element".into()));
        }
        if spacing <= 0.0 || wavelength <= 0.0 {
            return Err(Error::InvalidArgument("spacing and wavelength must be positive".into()));
        }
        Ok(Self { origin, azimuth, elevation, kind: ArrayKind::Ula { count, spacing }, wavelength })
    }

    pub fn ura(
        origin: Vector3<f64>,
        azimuth: f64,
        elevation: f64,
        n1: usize,
        n2: usize,
        spacing1: f64,
        spacing2: f64,
        wavelength: f64,
    ) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidArgument("URA needs at least one element per axis".into()));
        }
        if spacing1 <= 0.0 || spacing2 <= 0.0 || wavelength <= 0.0 {
            return Err(Error::InvalidArgument("spacing and wavelength must be positive".into()));
        }
        Ok(Self {
            origin,
            azimuth,
            elevation,
            kind: ArrayKind::Ura { n1, n2, spacing1, spacing2 },
            wavelength,
        })
    }

    pub fn len(&self) -> usize {
        match self.kind {
            ArrayKind::Ula { count, .. } => count,
            ArrayKind::Ura { n1, n2, .. } => n1 * n2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Center-to-center separation from this array's origin to another's.
    pub fn separation(&self, other: &ArrayGeometry) -> f64 {
        (self.origin - other.origin).norm()
    }
}

/// 3D position of every element, in flat index order.
pub fn element_positions(geom: &ArrayGeometry) -> Vec<Vector3<f64>> {
    let (n1, n2) = principal_unit_vectors(geom.azimuth, geom.elevation);
    match geom.kind {
        ArrayKind::Ula { count, spacing } => {
            (0..count).map(|m| geom.origin + n1 * (m as f64 * spacing)).collect()
        }
        ArrayKind::Ura { n1: c1, n2: c2, spacing1, spacing2 } => {
            let mut out = Vec::with_capacity(c1 * c2);
            for i1 in 0..c1 {
                for i2 in 0..c2 {
                    out.push(geom.origin + n1 * (i1 as f64 * spacing1) + n2 * (i2 as f64 * spacing2));
                }
            }
            out
        }
    }
}

/// Deterministic LoS channel between a BS ULA and an IRS URA.
#[derive(Debug, Clone)]
pub struct LosChannel {
    /// `M x N` matrix of unit-modulus entries `exp(j 2 pi l / lambda)`.
    pub h1: CMat,
}

/// Builds the spherical-wave LoS matrix from exact element distances.
///
/// Errors if the arrays use different wavelengths or if any antenna/element
/// pair coincides (a zero path length has no physical phase).
pub fn los_channel(bs: &ArrayGeometry, irs: &ArrayGeometry) -> Result<LosChannel> {
    if (bs.wavelength - irs.wavelength).abs() > 1e-12 * bs.wavelength.abs() {
        return Err(Error::InvalidArgument(format!(
            "arrays disagree on wavelength: {} vs {}",
            bs.wavelength, irs.wavelength
        )));
    }
    let lambda = bs.wavelength;
    let bs_pos = element_positions(bs);
    let irs_pos = element_positions(irs);
    let mut h1 = CMat::zeros(bs_pos.len(), irs_pos.len());
    for (m, pb) in bs_pos.iter().enumerate() {
        for (n, pe) in irs_pos.iter().enumerate() {
            let l = (pe - pb).norm();
            if l == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "BS antenna {m} and IRS element {n} coincide"
                )));
            }
            let phase = 2.0 * std::f64::consts::PI * l / lambda;
            h1[(m, n)] = Cplx::new(phase.cos(), phase.sin());
        }
    }
    Ok(LosChannel { h1 })
}
