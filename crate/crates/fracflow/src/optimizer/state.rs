//! Solution state and solve reports.

use std::io::Write;

/// Coefficient arrays of the five unknown fields. The pressure arrays are
/// full-length (Dirichlet values in place), the interface arrays hold one
/// value per triangle of the interface mesh.
#[derive(Debug, Clone)]
pub struct FiveFieldState {
    pub h_d: Vec<f64>,
    pub h_f: Vec<f64>,
    pub psi_plus: Vec<f64>,
    pub psi_minus: Vec<f64>,
    pub psi_frac: Vec<f64>,
}

impl FiveFieldState {
    pub fn psi_len(&self) -> usize {
        self.psi_plus.len() + self.psi_minus.len() + self.psi_frac.len()
    }
}

/// Outcome of a constrained minimization solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
    /// Mismatch functional by interface quadrature (authoritative value).
    pub j_delta: f64,
    /// Quadratic-form value with unweighted cross terms; equals `j_delta`
    /// up to quadrature round-off.
    pub j_gram_metric: f64,
    /// Quadratic-form value with transmissibility-weighted cross terms, for
    /// the discrepancy log.
    pub j_gram_transmissibility: f64,
    /// Multipliers of the two constraint blocks, full-length `N_D + N_F`.
    pub lambda: Vec<f64>,
    pub wall_time: f64,
}

impl SolveReport {
    /// Plain-text `key=value` serialization. The wall time is emitted last so
    /// the deterministic fields form a stable prefix.
    pub fn write_key_values<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "iterations={}", self.iterations)?;
        writeln!(out, "relative_residual={:.17e}", self.relative_residual)?;
        writeln!(out, "converged={}", self.converged)?;
        writeln!(out, "j_delta={:.17e}", self.j_delta)?;
        writeln!(out, "j_gram_metric={:.17e}", self.j_gram_metric)?;
        writeln!(
            out,
            "j_gram_transmissibility={:.17e}",
            self.j_gram_transmissibility
        )?;
        let lambda_norm = self.lambda.iter().map(|v| v * v).sum::<f64>().sqrt();
        writeln!(out, "lambda_norm={:.17e}", lambda_norm)?;
        writeln!(out, "wall_time_s={:.3}", self.wall_time)?;
        Ok(())
    }
}
