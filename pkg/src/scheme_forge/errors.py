"""Exception hierarchy shared by every module."""
from __future__ import annotations

from typing import Sequence, Tuple

Pair = Tuple[int, int]


class SchemeForgeError(Exception):
    """Base class; ``code`` is the stable name used in reports."""

    code = "SchemeForgeError"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


# -- scheme axioms -----------------------------------------------------------

class AxiomError(SchemeForgeError, ValueError):
    code = "AxiomError"


class NotPartition(AxiomError):
    code = "NotPartition"


class NotTransposeClosed(AxiomError):
    code = "NotTransposeClosed"

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"transpose of relation {index} is not a relation")

    def to_dict(self) -> dict:
        return {**super().to_dict(), "index": self.index}


class NonConstantIntersection(AxiomError):
    """Two pairs of the same relation ``h`` see different counts for (i, j)."""

    code = "NonConstantIntersection"

    def __init__(self, i: int, j: int, h: int, witnesses: Sequence[Pair], counts: Sequence[int]):
        self.i, self.j, self.h = i, j, h
        self.witnesses = [tuple(int(v) for v in w) for w in witnesses]
        self.counts = [int(c) for c in counts]
        super().__init__(
            f"|R_{i}(x) & R_{j}*(y)| is not constant on R_{h}: "
            + ", ".join(f"{w} -> {c}" for w, c in zip(self.witnesses, self.counts))
        )

    def to_dict(self) -> dict:
        return {
            **super().to_dict(),
            "triple": [self.i, self.j, self.h],
            "pairs": [list(w) for w in self.witnesses],
            "counts": self.counts,
        }


class IdentityViolation(SchemeForgeError):
    code = "IdentityViolation"

    def __init__(self, identity: str, indices: Sequence[int]):
        self.identity = identity
        self.indices = tuple(int(v) for v in indices)
        super().__init__(f"identity {identity} fails at {self.indices}")

    def to_dict(self) -> dict:
        return {**super().to_dict(), "identity": self.identity, "indices": list(self.indices)}


class IndexOutOfRange(SchemeForgeError, IndexError):
    code = "IndexOutOfRange"


class SchemeTooLarge(SchemeForgeError, ValueError):
    code = "SchemeTooLarge"


# -- digraphs ----------------------------------------------------------------

class NotStronglyConnected(SchemeForgeError, ValueError):
    code = "NotStronglyConnected"


class NotAPartition(SchemeForgeError, ValueError):
    code = "NotAPartition"


class UnequalBlockSizes(SchemeForgeError, ValueError):
    code = "UnequalBlockSizes"


class SizeMismatch(SchemeForgeError, ValueError):
    code = "SizeMismatch"


# -- closed subsets / recognition -------------------------------------------

class NotClosed(SchemeForgeError, ValueError):
    code = "NotClosed"


class NotNested(SchemeForgeError, ValueError):
    code = "NotNested"


class PreconditionViolated(SchemeForgeError, ValueError):
    code = "PreconditionViolated"

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)

    def to_dict(self) -> dict:
        return {**super().to_dict(), "hypothesis": self.hypothesis}


class InternalError(SchemeForgeError, RuntimeError):
    """A computation contradicted a theorem the library relies on."""

    code = "InternalError"


class DecompositionFailure(InternalError):
    code = "DecompositionFailure"


# -- generators / io ---------------------------------------------------------

class BadSpec(SchemeForgeError, ValueError):
    code = "BadSpec"


class BadRange(SchemeForgeError, ValueError):
    code = "BadRange"


class UnknownName(SchemeForgeError, KeyError):
    code = "UnknownName"

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class BadParams(SchemeForgeError, ValueError):
    code = "BadParams"


class InputError(SchemeForgeError, ValueError):
    """Malformed input document; ``pointer`` is a JSON pointer to the bad field."""

    code = "InputError"

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        self.detail = message
        super().__init__(f"{pointer or '/'}: {message}")

    def to_dict(self) -> dict:
        return {"error": self.code, "message": self.detail, "pointer": self.pointer}
