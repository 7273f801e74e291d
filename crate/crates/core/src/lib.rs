//! Fuzzy gate for IoT temperature/humidity telemetry.
//!
//! A two-phase cascade of Mamdani subsystems decides, per reading, whether a
//! monitoring node should transmit. The crate also replays telemetry CSVs
//! through the cascade and compares transmit energy against sending every
//! reading.
//!
//! The inference engine is generic over the scalar type (`f32` or `f64`);
//! the aliases below fix it to `f64`, which is what the loaders, the
//! simulator and the CLI use.

pub mod bundled;
pub mod cascade;
pub mod dsl;
pub mod energy;
pub mod fuzzy;
pub mod report;
pub mod scalar;
pub mod telemetry;

pub use scalar::Scalar;

pub type MembershipFunction = fuzzy::MembershipFunction<f64>;
pub type LinguisticVariable = fuzzy::LinguisticVariable<f64>;
pub type FuzzySubsystem = fuzzy::FuzzySubsystem<f64>;
pub type AggregatedOutput = fuzzy::AggregatedOutput<f64>;
pub type Cascade = cascade::Cascade<f64>;
pub type DecisionTrace = cascade::DecisionTrace<f64>;
pub type Reading = cascade::Reading<f64>;
pub type RadioSpec = energy::RadioSpec<f64>;
pub type EnergyMode = energy::EnergyMode<f64>;

pub type FuzzySubsystem32 = fuzzy::FuzzySubsystem<f32>;
pub type Cascade32 = cascade::Cascade<f32>;

/// The bundled three-subsystem cascade in `f64`.
pub fn bundled_cascade() -> Cascade {
    cascade::Manifest::bundled()
        .build_bundled()
        .expect("bundled definitions are valid")
}
