pub mod arrangement;
pub mod candidates;
pub mod cli;
pub mod field;
pub mod fpres;
pub mod matching;
pub mod persistence;
pub mod presentation;
pub mod rational;
pub mod slices;
pub mod decision;
pub mod oracle;
pub mod random;
