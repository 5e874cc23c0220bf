//! Two- and four-state chains over V/C symbols and Markov's dispersion
//! coefficients.
//!
//! The four-state chain uses the previous two symbols as its state:
//!
//! | state | context          | P(next = V) |
//! |-------|------------------|-------------|
//! | VV    | X(t-2)=V, X(t-1)=V | `p11`     |
//! | VC    | X(t-2)=V, X(t-1)=C | `p10`     |
//! | CV    | X(t-2)=C, X(t-1)=V | `p01`     |
//! | CC    | X(t-2)=C, X(t-1)=C | `p00`     |

mod counts;
mod dispersion;
mod model;
mod simulate;

pub use counts::{count_ngrams, trigram_discrepancy, NgramCounts};
pub use dispersion::{cf_simple_from_d, dispersion_report, CfKind, DispersionReport};
pub use model::{fit_models, fit_symbols, FittedModels, FourStateModel, TwoStateModel};
pub use simulate::{
    simulate_ensemble, simulate_sequence, simulate_symbols, EnsembleRun, EnsembleSummary, Init,
};
