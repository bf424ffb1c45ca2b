use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violates its domain invariant.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// Malformed call-site input (grid ordering, indices, shapes).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The four-node circuit has zero total island capacitance.
    #[error("degenerate circuit: C_1 + C_2 + C_C = 0")]
    DegenerateCircuit,

    /// The oscillator basis did not converge even after doubling.
    #[error(
        "eigenvalues not converged at n_basis = {n_basis}: max change {max_change:.3e} GHz"
    )]
    NotConverged {
        n_basis: usize,
        max_change: f64,
        coarse: Vec<f64>,
        fine: Vec<f64>,
    },

    /// A tunnel-split doublet could not be singled out in the spectrum.
    #[error("cannot identify the {0} doublet at half flux")]
    DoubletNotFound(&'static str),

    /// A requested state label does not occur at this flux point.
    #[error("no state labelled {0} at this flux point")]
    LabelNotFound(String),

    /// The Liouvillian kernel is more than one-dimensional.
    #[error("steady state is not unique: kernel dimension {kernel_dim}")]
    DegenerateSteadyState { kernel_dim: usize },

    /// A computed density matrix violates trace, hermiticity or positivity bounds.
    #[error("density matrix invariant violated: {0}")]
    InvalidDensityMatrix(String),

    /// Time step too coarse for the fastest Liouvillian scale.
    #[error("time step {dt} ns exceeds limit {limit:.3e} ns (0.1 / fastest rate)")]
    StepTooLarge { dt: f64, limit: f64 },

    /// A sweep exceeds the configured cell budget.
    #[error("grid of {cells} cells exceeds budget of {budget}")]
    BudgetExceeded { cells: usize, budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
