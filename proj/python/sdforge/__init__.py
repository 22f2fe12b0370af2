"""Python surface of the dataset forge.

Everything is implemented in the C++ core; this package re-exports the
extension module's symbols.
"""

from ._sdforge import (  # noqa: F401
    Box3D,
    QARecord,
    bleu,
    calibrate_threshold,
    classify_question,
    cosine,
    evaluate,
    iou3d,
    reference_embed,
    reference_nli,
    run_pipeline,
    semantic_similarity,
    stem,
    synonym_replace,
    tokenize,
)

__all__ = [
    "Box3D",
    "QARecord",
    "bleu",
    "calibrate_threshold",
    "classify_question",
    "cosine",
    "evaluate",
    "iou3d",
    "reference_embed",
    "reference_nli",
    "run_pipeline",
    "semantic_similarity",
    "stem",
    "synonym_replace",
    "tokenize",
]
