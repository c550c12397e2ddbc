pub mod app;
pub mod canon;
pub mod moding;
pub mod modes;
pub mod parser;
pub mod render;
pub mod term;
pub mod unify;
pub mod nsto;
pub mod sld;
pub mod corpus;
