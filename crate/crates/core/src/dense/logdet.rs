use super::Scalar;

/// A determinant stored as a unit-modulus phase and the natural log of its magnitude.
///
/// A zero determinant has phase `0` and `log_abs == -inf`; these two always go together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    phase: Scalar,
    log_abs: f64,
}

impl LogDet {
    pub const ZERO: LogDet = LogDet { phase: Scalar::new(0.0, 0.0), log_abs: f64::NEG_INFINITY };

    /// Positive determinant with the given log magnitude.
    pub fn positive(log_abs: f64) -> Self {
        LogDet { phase: Scalar::new(1.0, 0.0), log_abs }
    }

    pub fn from_parts(phase: Scalar, log_abs: f64) -> Self {
        if phase.norm() == 0.0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogDet { phase, log_abs }
        }
    }

    /// Converts a plain complex value.
    pub fn from_value(z: Scalar) -> Self {
        let r = z.norm();
        if r == 0.0 {
            Self::ZERO
        } else {
            LogDet { phase: z / r, log_abs: r.ln() }
        }
    }

    pub fn phase(&self) -> Scalar {
        self.phase
    }

    pub fn log_abs(&self) -> f64 {
        self.log_abs
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    /// Real sign `{-1, 0, +1}` taken from the real part of the phase.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.phase.re >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// Product of two determinants.
    pub fn mul(&self, other: &LogDet) -> LogDet {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        let p = self.phase * other.phase;
        LogDet { phase: p / p.norm(), log_abs: self.log_abs + other.log_abs }
    }

    /// Reconstructs the value; overflows to infinity for large magnitudes.
    pub fn value(&self) -> Scalar {
        if self.is_zero() {
            Scalar::new(0.0, 0.0)
        } else {
            self.phase * self.log_abs.exp()
        }
    }
}
