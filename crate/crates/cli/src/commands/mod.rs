pub mod analyze;
pub mod distances;
pub mod eval_model;
pub mod impact;
pub mod infer_grants;
pub mod ingest;
pub mod regress;
pub mod score;
pub mod synth;
pub mod train;
