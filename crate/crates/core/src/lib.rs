//! Aspect-robustness probes for aspect-based sentiment test sets.
//!
//! The crate is organised around five layers:
//!
//! * [`corpus`]: aspect-annotated corpora, their file formats and the
//!   offset-preserving tokenizer.
//! * [`lexicon`]: antonym lookup, POS fallback tagging and degree adverbs.
//! * [`editgraph`]: span edits with offset remapping, plus negation,
//!   conjunction repair and adverb insertion.
//! * [`strategies`]: target reversal, non-target reversal, appended
//!   distractor aspects and the batch generator.
//! * [`analytics`]: accuracy, aspect robustness score, Welch's t-test and
//!   dataset statistics.
//!
//! All spans are byte offsets into UTF-8 text. File formats carry character
//! offsets; conversion happens at the I/O boundary.

pub mod analytics;
pub mod corpus;
pub mod editgraph;
pub mod lexicon;
pub mod strategies;

mod rng;

pub use corpus::{AspectInstance, Dataset, Polarity, Sentence, Span, Split};
pub use rng::instance_rng;
