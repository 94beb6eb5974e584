use thiserror::Error;

use crate::dataset::{DatasetError, Location};
use crate::milp::{self, MilpError, MilpProblem, MilpSolution, Status};

/// Failures of the efficiency models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("solver failure for DMU '{dmu}': {source}")]
    Solver {
        dmu: String,
        #[source]
        source: MilpError,
    },
    #[error(
        "solver reported {status} for DMU '{dmu}' on a model that is always feasible and bounded"
    )]
    UnexpectedStatus { dmu: String, status: Status },
    #[error("crisp model needs degenerate data; first interval cell is {0}")]
    NotCrisp(Location),
    #[error("DMU '{dmu}' is not efficient (score {score}); super-efficiency applies to efficient DMUs only")]
    NotEfficient { dmu: String, score: f64 },
    #[error("DMU '{dmu}': super model infeasible on the reduced reference set")]
    SuperInfeasible { dmu: String },
    #[error("super-efficiency needs at least 2 DMUs, dataset has {0}")]
    TooFewDmus(usize),
    #[error("DMU '{dmu}', variable '{variable}': slack-based target {from_slacks:?} disagrees with intensity-based target {from_lambda:?}")]
    TargetMismatch {
        dmu: String,
        variable: String,
        from_slacks: [f64; 2],
        from_lambda: [f64; 2],
    },
    #[error("big-M resolution: {0}")]
    BigM(String),
    #[error("assessment is for DMU {found}, expected DMU {expected}")]
    WrongDmu { expected: usize, found: usize },
}

impl ModelError {
    /// True for failures caused by the solver rather than by the input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            ModelError::Solver { .. }
                | ModelError::UnexpectedStatus { .. }
                | ModelError::TargetMismatch { .. }
        )
    }
}

/// Solves `problem` for DMU `dmu`, insisting on an optimal status.
pub(crate) fn solve_optimal(problem: &MilpProblem, dmu: &str) -> Result<MilpSolution, ModelError> {
    let sol = solve(problem, dmu)?;
    if sol.is_optimal() {
        Ok(sol)
    } else {
        Err(ModelError::UnexpectedStatus {
            dmu: dmu.to_string(),
            status: sol.status,
        })
    }
}

pub(crate) fn solve(problem: &MilpProblem, dmu: &str) -> Result<MilpSolution, ModelError> {
    milp::solve_milp(problem).map_err(|source| ModelError::Solver {
        dmu: dmu.to_string(),
        source,
    })
}
