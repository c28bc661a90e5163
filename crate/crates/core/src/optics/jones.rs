//! Jones calculus for fully polarized light.
//!
//! A [`JonesVector`] holds the complex field amplitudes on the horizontal
//! and vertical axes; its squared norm carries relative optical power.
//! Global phase is physically meaningless, so state comparisons go
//! through [`projection_probability`], never component equality.

use num_complex::Complex64;

use super::OpticsError;

/// Complex 2-component polarization amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    pub e_h: Complex64,
    pub e_v: Complex64,
}

impl JonesVector {
    pub fn new(e_h: Complex64, e_v: Complex64) -> Self {
        Self { e_h, e_v }
    }

    /// Vector with real amplitudes.
    pub fn from_real(e_h: f64, e_v: f64) -> Self {
        Self::new(Complex64::new(e_h, 0.0), Complex64::new(e_v, 0.0))
    }

    /// Optical power, `|e_h|² + |e_v|²`.
    pub fn power(&self) -> f64 {
        self.e_h.norm_sqr() + self.e_v.norm_sqr()
    }

    /// Scales to unit power; the zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let p = self.power();
        if p == 0.0 {
            return *self;
        }
        let s = 1.0 / p.sqrt();
        Self::new(self.e_h * s, self.e_v * s)
    }

    /// Hermitian inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.e_h.conj() * other.e_h + self.e_v.conj() * other.e_v
    }
}

/// Transmission probability of `input` through an analyzer aligned with
/// `analyzer` (Born rule), normalized so both vectors act as states.
pub fn projection_probability(
    analyzer: &JonesVector,
    input: &JonesVector,
) -> Result<f64, OpticsError> {
    let pa = analyzer.power();
    let pi = input.power();
    if pa == 0.0 || pi == 0.0 {
        return Err(OpticsError::ZeroPowerVector);
    }
    Ok(analyzer.inner(input).norm_sqr() / (pa * pi))
}

/// 2×2 complex polarization transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix {
    pub m_hh: Complex64,
    pub m_hv: Complex64,
    pub m_vh: Complex64,
    pub m_vv: Complex64,
}

impl JonesMatrix {
    pub fn identity() -> Self {
        Self {
            m_hh: Complex64::new(1.0, 0.0),
            m_hv: Complex64::new(0.0, 0.0),
            m_vh: Complex64::new(0.0, 0.0),
            m_vv: Complex64::new(1.0, 0.0),
        }
    }

    /// Real rotation of the polarization plane by `theta` radians.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            m_hh: Complex64::new(c, 0.0),
            m_hv: Complex64::new(-s, 0.0),
            m_vh: Complex64::new(s, 0.0),
            m_vv: Complex64::new(c, 0.0),
        }
    }

    /// SU(2) element parameterized by a rotation angle and two phases:
    ///
    /// ```text
    /// [  e^{iφa}·cosθ   -e^{iφb}·sinθ ]
    /// [  e^{-iφb}·sinθ   e^{-iφa}·cosθ ]
    /// ```
    ///
    /// Satisfies `M†M = I` for any arguments.
    pub fn rotation_unitary(theta: f64, phi_a: f64, phi_b: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let ea = Complex64::from_polar(1.0, phi_a);
        let eb = Complex64::from_polar(1.0, phi_b);
        Self {
            m_hh: ea * c,
            m_hv: -eb * s,
            m_vh: eb.conj() * s,
            m_vv: ea.conj() * c,
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &JonesVector) -> JonesVector {
        JonesVector::new(
            self.m_hh * v.e_h + self.m_hv * v.e_v,
            self.m_vh * v.e_h + self.m_vv * v.e_v,
        )
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            m_hh: self.m_hh * other.m_hh + self.m_hv * other.m_vh,
            m_hv: self.m_hh * other.m_hv + self.m_hv * other.m_vv,
            m_vh: self.m_vh * other.m_hh + self.m_vv * other.m_vh,
            m_vv: self.m_vh * other.m_hv + self.m_vv * other.m_vv,
        }
    }

    /// Conjugate transpose. For a unitary matrix this is the inverse.
    pub fn dagger(&self) -> Self {
        Self {
            m_hh: self.m_hh.conj(),
            m_hv: self.m_vh.conj(),
            m_vh: self.m_hv.conj(),
            m_vv: self.m_vv.conj(),
        }
    }

    /// Frobenius-norm distance to another matrix.
    pub fn distance(&self, other: &Self) -> f64 {
        ((self.m_hh - other.m_hh).norm_sqr()
            + (self.m_hv - other.m_hv).norm_sqr()
            + (self.m_vh - other.m_vh).norm_sqr()
            + (self.m_vv - other.m_vv).norm_sqr())
        .sqrt()
    }
}

/// BB84 measurement/preparation basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// H/V basis (polarization angles 0° and 90°).
    Rectilinear,
    /// D/A basis (polarization angles +45° and -45°).
    Diagonal,
}

/// The four BB84 polarization states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolarizationState {
    H,
    V,
    D,
    A,
}

impl PolarizationState {
    /// All states, in detector-index order.
    pub const ALL: [Self; 4] = [Self::H, Self::V, Self::D, Self::A];

    /// Dense index used for detector arrays.
    pub fn index(self) -> usize {
        match self {
            Self::H => 0,
            Self::V => 1,
            Self::D => 2,
            Self::A => 3,
        }
    }

    pub fn basis(self) -> Basis {
        match self {
            Self::H | Self::V => Basis::Rectilinear,
            Self::D | Self::A => Basis::Diagonal,
        }
    }

    /// Unit-power Jones vector of the state:
    /// H→(1,0), V→(0,1), D→(1,1)/√2, A→(1,−1)/√2.
    pub fn jones(self) -> JonesVector {
        const R: f64 = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Self::H => JonesVector::from_real(1.0, 0.0),
            Self::V => JonesVector::from_real(0.0, 1.0),
            Self::D => JonesVector::from_real(R, R),
            Self::A => JonesVector::from_real(R, -R),
        }
    }
}

impl std::fmt::Display for PolarizationState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::H => "H",
            Self::V => "V",
            Self::D => "D",
            Self::A => "A",
        };
        f.write_str(s)
    }
}
