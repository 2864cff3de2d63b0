//! Benchmark harness for the `rbsm` placer: loads GSRC Bookshelf circuits or
//! synthetic stand-ins, runs the optimizers and the legalizer, and reports
//! oracle-checked metrics as CSV and SVG.

pub mod bench;
pub mod oracle;
pub mod reference;
pub mod report;
pub mod svg;
