//! Simulation and control library for programmable wireless environments:
//! walls tiled with software-controlled metasurfaces, a ray-launching
//! propagation engine, an electromagnetic compiler for tile switch states and
//! a controller that routes "air paths" over the tile graph.

pub mod controller;
pub mod emcompiler;
pub mod error;
pub mod geometry;
pub mod propagation;
pub mod scenario;
pub mod tilenet;
