pub mod atoms;
pub mod cli;
pub mod error;
pub mod fit;
pub mod graphene;
pub mod lifshitz;
pub mod quadrature;
pub mod reference;
pub mod report;
pub mod reproduce;
pub mod sweep;
pub mod units;
