// SPDX-License-Identifier: Apache-2.0

//! The element graph: agents, AI and dataset packages, and their relationships.

#[macro_use]
mod fields;
mod document;
mod element;
mod types;

pub use document::*;
pub use element::*;
pub use fields::{FieldSlot, FieldState, ItemRepr};
pub use types::*;
