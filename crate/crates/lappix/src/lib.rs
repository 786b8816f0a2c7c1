//! File formats and command line front end for the lappix codec.

pub mod cli;
pub mod io;
