//! Availability modelling for edge deployments.
//!
//! Stochastic activity networks ([`san`]) are written in code or as `.san`
//! documents ([`document`]), expanded to a CTMC ([`statespace`]) and solved
//! exactly ([`solver`]) or simulated ([`sim`]). Element unavailabilities feed
//! a fault tree ([`ft`]) for the whole system. [`models`] holds the element
//! nets and their default intensities, [`experiments`] the sweeps built on
//! them, and [`cli`] the command-line front end.

pub mod document;
pub mod expr;
pub mod ft;
pub mod models;
pub mod san;
pub mod sim;
pub mod solver;
pub mod statespace;
pub mod experiments;
pub mod cli;
