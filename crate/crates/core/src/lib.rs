//! List decoding for insertion and deletion errors: combinatorial bounds,
//! prime-field Reed-Solomon machinery, and a concatenated code with windowed
//! list decoders.

pub mod bounds;
pub mod channel;
pub mod concat;
pub mod inner;
pub mod metric;
pub mod oracle;
pub mod rational;
pub mod reed_solomon;
