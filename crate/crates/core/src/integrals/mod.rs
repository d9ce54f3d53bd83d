//! The measure `dt/t²` on `(1, ∞)`: first moments of dilated fractional
//! parts, the moment identity for B* functions, `p`-norms and Gram systems.

mod constants;
mod gram;
mod moment;
mod segments;

pub use constants::{constants_report, euler_gamma, lambda, lambda_n, ConstantsReport};
pub use gram::{gram_entry, gram_system, GramEntry, GramSystem, MAX_PERIOD_SEGMENTS};
pub use moment::{
    bstar_moment, lemma1_moment, mstar_measure, mstar_norm, mstar_norm_of_constant, MomentReport, NormReport,
    MAX_SEGMENTS, NORM_GAUSS_ORDER,
};
