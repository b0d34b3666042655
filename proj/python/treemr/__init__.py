"""Tree-structured meaning representations with constrained beam search."""

from ._treemr import (
    NGramModel,
    TreeMrError,
    bleu4,
    canonicalize,
    check_tree,
    delexicalize,
    diversity,
    ellipsis_options,
    relexicalize,
    synthesize,
)

__all__ = [
    "NGramModel",
    "TreeMrError",
    "bleu4",
    "canonicalize",
    "check_tree",
    "delexicalize",
    "diversity",
    "ellipsis_options",
    "relexicalize",
    "synthesize",
]
