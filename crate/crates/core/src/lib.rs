pub mod battery;
pub mod bicat;
pub mod decomp;
pub mod factor;
pub mod fincat;
pub mod formcore;
pub mod lattice;
pub mod orean;
pub mod report;
pub mod subobjects;
pub mod zoo;
