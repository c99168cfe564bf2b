// SPDX-License-Identifier: Apache-2.0

//! AI bill-of-materials documents built on the SPDX 3.0 AI and Dataset profiles.

#[macro_use]
mod macros;

pub mod catalog;
pub mod compliance;
pub mod conformance;
mod datafile;
pub mod findings;
pub mod hub;
pub mod io;
pub mod license;
pub mod model;
pub mod rate;
pub mod syntax;
