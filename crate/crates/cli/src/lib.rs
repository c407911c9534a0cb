//! Library surface of the kmx CLI: the JSON wire schemas and their
//! parsers, shared with the integration tests.

pub mod schema;
