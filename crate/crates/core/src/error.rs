use num_complex::Complex64 as C64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spanning columns have numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("evaluation exactly at the pole {alpha}")]
    PoleEvaluation { alpha: C64 },

    #[error("evaluation at {lambda} is within {distance:e} of the pole {alpha}")]
    NearPole { alpha: C64, lambda: C64, distance: f64 },

    #[error("input is not off-diagonal: diagonal residue {residue:e}")]
    NotOffDiagonal { residue: f64 },

    #[error("grid has {points} points along an axis, at least {required} required")]
    GridTooSmall { points: usize, required: usize },

    #[error("exponent {exponent:e} exceeds the overflow guard")]
    Overflow { exponent: f64 },

    #[error("frame is numerically singular (condition number {condition:e}){}", fmt_location(.location))]
    SingularFrame { condition: f64, location: Vec<f64> },

    #[error("pole {alpha} collides with an existing pole or its conjugate")]
    DuplicatePole { alpha: C64 },

    #[error("pole {alpha} lies on the real axis")]
    RealPole { alpha: C64 },

    #[error("projection is not real: defect {defect:e}")]
    NotRealProjection { defect: f64 },

    #[error("Grassmannian map drops rank at w = {w}: rank {rank}, expected {expected}")]
    Degenerate { w: C64, rank: usize, expected: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn fmt_location(location: &[f64]) -> String {
    if location.is_empty() {
        String::new()
    } else {
        format!(" at {location:?}")
    }
}

impl Error {
    /// Stable variant name, used on the CLI diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::RankDeficient { .. } => "RankDeficient",
            Error::PoleEvaluation { .. } => "PoleEvaluation",
            Error::NearPole { .. } => "NearPole",
            Error::NotOffDiagonal { .. } => "NotOffDiagonal",
            Error::GridTooSmall { .. } => "GridTooSmall",
            Error::Overflow { .. } => "Overflow",
            Error::SingularFrame { .. } => "SingularFrame",
            Error::DuplicatePole { .. } => "DuplicatePole",
            Error::RealPole { .. } => "RealPole",
            Error::NotRealProjection { .. } => "NotRealProjection",
            Error::Degenerate { .. } => "Degenerate",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    pub(crate) fn at(self, coords: &[f64]) -> Self {
        match self {
            Error::SingularFrame { condition, .. } => Error::SingularFrame {
                condition,
                location: coords.to_vec(),
            },
            other => other,
        }
    }
}
