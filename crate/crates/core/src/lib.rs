//! Dictionary-free political event coding.
//!
//! A document is cleaned and filtered, scored for event categories, modes
//! and contexts, then questioned by an extractive QA backend to find the
//! actor, recipient, location and date. Actors are linked to an offline
//! entity index and coded by country and role; locations are geocoded
//! against an offline gazetteer; dates are resolved against the publication
//! date.
//!
//! All model-backed steps sit behind the traits in [`backend`]. The builtin
//! implementations (lexicon scorers, heuristic or recorded QA, n-gram
//! embedder) need no model service.

pub mod actor;
pub mod assign;
pub mod attribute;
pub mod backend;
pub mod classify;
pub mod embed;
pub mod entity;
pub mod error;
pub mod eval;
pub mod exec;
pub mod geo;
pub mod kb;
pub mod lexicon;
pub mod model;
pub mod pipeline;
pub mod preprocess;
pub mod qa;
pub mod service;
pub mod temporal;
pub mod text;

pub use error::{BackendError, Error, Result};
pub use model::{Document, EventRecord, Ontology, Span};
pub use pipeline::{Engine, PipelineConfig};
