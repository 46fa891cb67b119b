// SPDX-License-Identifier: Apache-2.0

//! Discrete tokens for atomic documents.
//!
//! A coordinate pair is a single token, colors use 4 bits per channel and a
//! finite automaton describes every legal sequence. The per-path fill rule
//! travels beside the ids rather than in them.

mod baseline;
mod codec;
mod grammar;
pub mod io;
pub mod vocab;

pub use baseline::digit_baseline_len;
pub use codec::{decode, encode, TokenError, TokenSeq};
pub use grammar::{advance, distance_to_done, legal_next, ClassSet, GrammarState, IllegalToken};
pub use vocab::{class_of, TokenClass, VOCAB_SIZE};
