pub mod aut;
pub mod cayley;
pub mod classify;
pub mod construct;
pub mod digraph;
pub mod group;
pub mod perm;
pub mod prop24;
pub mod sweep;
