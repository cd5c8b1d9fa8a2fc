//! Simulation and control-planning toolkit for developmental PDEs: a radius
//! field on a half-circle grows at the rate of a signal that diffuses under
//! the geometry-dependent Laplace-Beltrami operator, driven by boundary
//! controls.

pub mod controls;
pub mod dynamics;
pub mod equilibria;
pub mod geometry;
pub mod planner;
