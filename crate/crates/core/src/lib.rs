//! Temporal graph exploration: interval-membership widths, temporal Euler
//! circuits, star exploration, MinReachDelete, and the hardness
//! constructions that relate them.
//!
//! ```
//! use tempo_core::{solve_temp_euler, verify_euler_circuit, TemporalGraph};
//!
//! let g = TemporalGraph::from_triples(3, vec![(0, 1, vec![1]), (1, 2, vec![2]), (2, 0, vec![3])]).unwrap();
//! let circuit = solve_temp_euler(&g).unwrap().expect("eulerian");
//! assert!(verify_euler_circuit(&g, &circuit).is_ok());
//! ```

pub mod euler;
pub mod exploration;
pub mod gen;
pub mod graph;
pub mod io;
pub mod reach;
pub mod reductions;
pub mod star;
pub mod verify;
pub mod width;

pub use euler::{
    brute_force_temp_euler, run_temp_euler, solve_temp_euler, solve_temp_euler_winwin, EulerConfig, EulerError,
    EulerRun, WinWin, WinWinError,
};
pub use exploration::{Exploration, StarError, StarInstance, Visit};
pub use gen::{generate, Family, GenSpec};
pub use graph::{Edge, EdgeId, GraphError, StaticGraph, TemporalGraph, TemporalWalk, Time, TimeEdge, VertexId};
pub use io::{parse_instance, read_instance, write_instance, Instance, ParseError};
pub use reach::{
    brute_force_mrd, run_min_reach_delete, solve_min_reach_delete, temporal_reach, MrdConfig, MrdError, MrdInstance,
};
pub use star::{brute_force_star_exp, normalize_star, reduce_star_to_euler, solve_star_exp, solve_star_winwin};
pub use verify::{verify_euler_circuit, verify_star_exploration, CapExceeded};
pub use width::{edge_bag_sequence, imw, vertex_bag_sequence, vimw, EdgeBagSequence, VertexBagSequence};
