//! Names of view operators and initial states accepted on the command line.

use tomwalk::quantum::operators::{basis_ket, ket_imag, ket_plus, qutrit_fourier_kets};
use tomwalk::quantum::{SubNormalizedState, ViewOperator};
use tomwalk::WalkSpec;

use crate::error::CliError;

/// `e3` is only meaningful on the four-dimensional walk.
pub const VIEW_KEYS: [&str; 10] = ["identity", "e0", "e1", "e2", "e3", "x", "y", "z", "plus", "imag"];

pub const INITIAL_KEYS: [&str; 3] = ["default", "maximally-mixed", "ket-x"];

fn wrong_dim(key: &str, dim: usize, needs: &str) -> CliError {
    CliError::config(format!(
        "view '{key}' needs a {needs} walk, this walk has internal dimension {dim}"
    ))
}

/// Keys that resolve for a walk of internal dimension `dim`.
pub fn views_for(dim: usize) -> Vec<&'static str> {
    VIEW_KEYS.into_iter().filter(|k| view(k, dim).is_ok()).collect()
}

pub fn view(key: &str, dim: usize) -> Result<ViewOperator, CliError> {
    let from_ket = |ket| ViewOperator::from_ket(&ket).expect("registered kets are normalized");
    match key {
        "identity" => Ok(ViewOperator::identity(dim)),
        "e0" | "e1" | "e2" | "e3" => {
            let k = usize::from(key.as_bytes()[1] - b'0');
            if k >= dim {
                return Err(CliError::config(format!(
                    "view '{key}' is undefined in dimension {dim}"
                )));
            }
            Ok(from_ket(basis_ket(dim, k)))
        }
        "x" | "y" | "z" => {
            if dim != 3 {
                return Err(wrong_dim(key, dim, "qutrit"));
            }
            let [x, y, z] = qutrit_fourier_kets();
            Ok(from_ket(match key {
                "x" => x,
                "y" => y,
                _ => z,
            }))
        }
        "plus" | "imag" => {
            if dim != 2 {
                return Err(wrong_dim(key, dim, "qubit"));
            }
            Ok(from_ket(if key == "plus" { ket_plus() } else { ket_imag() }))
        }
        _ => Err(CliError::config(format!(
            "unknown view '{key}', expected one of {}",
            VIEW_KEYS.join(", ")
        ))),
    }
}

pub fn initial(key: &str, spec: &WalkSpec) -> Result<SubNormalizedState, CliError> {
    let dim = spec.internal_dim();
    match key {
        "default" => Ok(spec.default_initial().clone()),
        "maximally-mixed" => Ok(SubNormalizedState::maximally_mixed(dim)),
        "ket-x" => {
            if dim != 3 {
                return Err(CliError::config(format!(
                    "initial state 'ket-x' needs a qutrit walk, this walk has internal dimension {dim}"
                )));
            }
            let [x, _, _] = qutrit_fourier_kets();
            Ok(SubNormalizedState::pure(&x).expect("unit ket"))
        }
        _ => Err(CliError::config(format!(
            "unknown initial state '{key}', expected one of {}",
            INITIAL_KEYS.join(", ")
        ))),
    }
}
