use crate::descent::DescentError;
use crate::enriched::EnrichedError;
use crate::factor::FactorError;
use crate::functor::FunctorError;
use crate::limits::LimitError;
use crate::ncat::ValidationError;
use crate::search::SearchLimit;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Enriched(#[from] EnrichedError),
    #[error(transparent)]
    Search(#[from] SearchLimit),
}
