mod airy;
mod ode;
mod solution;

pub use airy::{airy, airy_asymptotic, airy_mp, AiryEval, AiryMp, AIRY_RANGE};
pub use ode::{CollocationStepper, State, Stepper, TaylorStepper};
pub use solution::{
    f1, f1_complement, f1_prime, f1_stats, hastings_mcleod, hastings_mcleod_with, log_f1_interp, matching_data, F1Stats,
    F1Table, PIISolution, PiiOptions, PiiPoint, DEFAULT_X_LEFT, DEFAULT_X_RIGHT, MAX_TAIL_MASS,
};
