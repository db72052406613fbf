//! Samplers for the continuum objects.
//!
//! `W_λ(t) = W(t) + λt - t²/2` is sampled on a grid; its excursions above
//! the running minimum code R-trees, and Poisson points under each excursion
//! glue pairs of points, giving the components of `𝒢_λ`. Cutting those at
//! random points gives `𝓜_λ`. Brownian CRTs and the two explicit
//! constructions of a component with prescribed mass, surplus and kernel
//! live here too.
//!
//! Everything is discretised: the mass measure of a component is the grid
//! measure pushed to tree vertices, so glue points may carry mass of order
//! the mesh even though the continuum measure has no atoms.

mod brownian;
mod constructions;
mod crt;
mod gluing;
mod tree;

pub use brownian::{extract_excursions, sample_w_lambda, Excursion, GridPath};
pub use constructions::{construction1_core, construction2_component, dirichlet, random_3regular_kernel};
pub use crt::{normalized_excursion, sample_crt, theta_series_tail};
pub use gluing::{
    glue_excursion, poisson_glue_plan, sample_g_lambda, sample_m_lambda, ContinuumComponent, ContinuumParams,
    GluePlan, GluePoint,
};
pub use tree::{tree_from_excursion, ExcursionTree};
