//! Core of the lappix still image codec.
//!
//! Everything in this crate is pure computation over owned buffers and builds
//! without `std` (an allocator is required). File formats, the command line
//! front end and anything touching the filesystem live in the `lappix` crate.
//!
//! Pipeline overview, encoder side:
//!
//! 1. pad the image to whole 32x32 superblocks,
//! 2. lap the superblock edges, then pick a block partition per superblock
//!    with a bottom-up dynamic programming search ([`partition`]),
//! 3. lap the interior edges of the chosen partition ([`transform`]),
//! 4. transform every block, build a frequency-domain predictor ([`predict`])
//!    and code the AC bands with gain-shape PVQ ([`pvq`]),
//! 5. entropy code the symbols ([`entropy`]).
//!
//! The decoder mirrors this and then runs the directional deringing filter
//! ([`dering`]) followed by the bilinear smoothing filter ([`smooth`]).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod codec;
pub mod dering;
pub mod entropy;
pub mod partition;
pub mod plane;
pub mod predict;
pub mod pvq;
pub mod smooth;
pub mod transform;

pub use codec::{decode, encode, psnr, DecodeError, EncodeError, EncoderOptions, Psnr};
pub use plane::{ChromaFormat, Image, Plane, PlaneError};
