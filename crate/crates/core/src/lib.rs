//! Cyclotomic difference sets (Paley, twin-prime, Hall), their characteristic
//! binary sequences, multiplier groups, decimation orbits and periodic
//! correlation spectra, with closed-form spectra checked against direct
//! computation.

pub mod arith;
pub mod cyclotomy;
pub mod diffset;
mod error;
pub mod sequence;
pub mod spectra;

pub use arith::{euler_phi, is_prime, mod_inverse, mod_pow, primitive_root, units, Modulus};
pub use cyclotomy::{cyclotomic_number_closed_form, hall_primes, CyclotomicSystem, HallParameter};
pub use diffset::{
    decimation_orbit, hall_set, multiplier_group, paley_set, twin_prime_set, verify_difference_set,
    Conjugate, DesignParameters, Family, FamilyDescriptor, MultiplierGroup,
};
pub use error::{Error, Result};
pub use sequence::{
    correlation_from_difference, difference_function, BinarySequence, CorrelationSpectrum,
    SupportSet,
};
pub use spectra::{
    predict_hall, predict_paley, predict_twin_prime, verify_family, FamilyVerification,
    HallPredictor, PredictedValue, VerificationReport,
};
