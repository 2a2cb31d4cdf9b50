pub mod bar;
pub mod corpus;
pub mod dual;
pub mod element;
pub mod field;
pub mod format;
pub mod free;
pub mod generators;
pub mod ideal;
pub mod linalg;
pub mod order;
pub mod perm;
pub mod presentation;
pub mod rewrite;
pub mod symmetrize;
pub mod tree;
