use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("surface is not connected")]
    NotConnected,
    #[error("surface is not in H(2)")]
    NotInH2,
    #[error("surface is not primitive")]
    NotPrimitive,
    #[error("invalid cylinder diagram: {0}")]
    InvalidDiagram(String),
    #[error("malformed surface: {0}")]
    MalformedSurface(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported level {0}: only level 2 can be verified")]
    UnsupportedLevel(u64),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
