// SPDX-License-Identifier: Apache-2.0

pub mod atomize;
pub mod bench;
pub mod curate;
pub mod geom;
pub mod metrics;
pub mod ngram;
pub mod raster;
pub mod scene;
pub mod token;
