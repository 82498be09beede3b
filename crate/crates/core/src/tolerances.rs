/// Numeric tolerances shared by the verification routines.
///
/// Relative tolerances are measured against the product of the L¹ norms of
/// the operands involved; when that product is below [`Tolerances::DEGENERATE_NORM`]
/// the comparison is absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    /// Quotient cross-condition and equivalence, relative L¹.
    pub eps_quot: f64,
    /// δ-/Δ-convergence threshold, relative to the limit's L¹ norm.
    pub eps_conv: f64,
    /// Convolution-theorem residuals, relative to `‖f‖₁‖g‖₁`.
    pub tol_conv: f64,
    /// Associativity and mixed-associativity residuals, relative L¹.
    pub tol_assoc: f64,
    /// Smallest admissible `|𝓒(δₖ)(t)|` when dividing in the extended transform.
    pub c_min: f64,
    /// Magnitude below which a preset's tail is truncated.
    pub tail_cutoff: f64,
}

impl Tolerances {
    pub const DEGENERATE_NORM: f64 = 1e-12;

    /// Returns `residual / scale`, or `residual` itself when `scale` is degenerate.
    pub fn relative(residual: f64, scale: f64) -> f64 {
        if scale < Self::DEGENERATE_NORM {
            residual
        } else {
            residual / scale
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            ("eps_quot", self.eps_quot),
            ("eps_conv", self.eps_conv),
            ("tol_conv", self.tol_conv),
            ("tol_assoc", self.tol_assoc),
            ("c_min", self.c_min),
            ("tail_cutoff", self.tail_cutoff),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::Error::Config(alloc::format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.c_min >= 1.0 {
            return Err(crate::Error::Config(alloc::format!(
                "c_min must lie in (0, 1), got {}",
                self.c_min
            )));
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_quot: 1e-6,
            eps_conv: 1e-3,
            tol_conv: 1e-6,
            tol_assoc: 1e-6,
            c_min: 0.5,
            tail_cutoff: 1e-12,
        }
    }
}
