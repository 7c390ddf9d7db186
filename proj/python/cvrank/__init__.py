"""Score and rank resumes against weighted job profiles."""

from ._cvrank import (
    AmbiguityError,
    Agreement,
    ConflictError,
    ConversionError,
    DataError,
    EncodingError,
    Error,
    IoError,
    JobProfile,
    JobStore,
    LemmaStream,
    LimitError,
    NotFoundError,
    PhraseEntry,
    RankingEntry,
    RankingReport,
    ScoreBreakdown,
    TextPipeline,
    UsageError,
    ValidationError,
    WordEntry,
    agreement,
    classify,
    generate_corpus,
    kgram_ac,
    lemmatize_token,
    normalize_stream,
    normalize_term,
    parse_job_document,
    permutation_set,
    phrase_ac,
    rank_resumes,
    render_job_document,
    resume_score,
    sample_jobs,
    score_directory,
    slugify,
    strip_text,
    tokenize,
    validate_profile,
    word_ac,
)

__all__ = [name for name in dir() if not name.startswith("_")]
