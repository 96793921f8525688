"""Exception hierarchy.

``InputError`` means the caller handed us something malformed (CLI exit 2).
``StageError`` means a well-formed input hit a mathematical failure mode in a
named pipeline stage (CLI exit 3); the stage tag makes the failure point
machine-readable.
"""

from __future__ import annotations


class QuarticError(Exception):
    """Base class for everything raised deliberately by this package."""


class InputError(QuarticError):
    """Malformed input: bad JSON, wrong degree, non-symmetric matrices, ..."""


class StageError(QuarticError):
    """A pipeline stage failed for a mathematical reason."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class CommonComponentError(StageError):
    """Two curves share a component; finite intersection does not exist."""

    def __init__(self, message: str = "curves share a common component"):
        super().__init__("intersection", message)


class MultiplicityVoteError(StageError):
    """Cluster-size and algebraic multiplicity votes disagree."""

    def __init__(self, message: str):
        super().__init__("multiplicity", message)


class NodePathDisagreementError(StageError):
    """Multistart and projection-lift node sets disagree on a transversal input."""

    def __init__(self, message: str):
        super().__init__("node-crosscheck", message)


class LineThroughNodeError(StageError):
    """The symmetroid contains a line through the chosen node; the generic
    reconstruction pipeline does not apply."""

    def __init__(self, message: str):
        super().__init__("line-through-node", message)
