"""Fixpoint resolution: an untrusted iterator whose result is checked before use."""

from __future__ import annotations

from typing import Callable, Dict, Iterator, Mapping, Optional

from .checker import check_fxp
from .iterate import IterationBudgetExceeded, iterate
from .wto import Component, Vertex, compute_wto, format_wto

__all__ = ["FixpointResult", "IterationBudgetExceeded", "check_fxp", "compute_wto",
           "format_wto", "iterate", "solve_pfp", "Component", "Vertex"]


class FixpointResult(Mapping):
    """Total map from nodes to abstract values (missing nodes read as ``default``).

    ``accepted`` is False when the candidate was rejected (or the iterator
    failed) and every node maps to top.
    """

    def __init__(self, values: Dict, default, accepted: bool, diagnostic: Optional[str] = None):
        self.values = values
        self.default = default
        self.accepted = accepted
        self.diagnostic = diagnostic

    def __getitem__(self, node):
        return self.values.get(node, self.default)

    def __call__(self, node):
        return self.values.get(node, self.default)

    def __iter__(self) -> Iterator:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


def solve_pfp(ab, graph: Mapping, entry, transfer: Callable, init,
              iterator: Callable = iterate) -> FixpointResult:
    """The iterator's candidate if :func:`check_fxp` accepts it, else constant top."""
    try:
        candidate = iterator(ab, graph, entry, transfer, init)
    except IterationBudgetExceeded as exc:
        return FixpointResult({}, ab.top, False, str(exc))
    except Exception as exc:  # the iterator is untrusted; any failure means top
        return FixpointResult({}, ab.top, False, f"iterator failed: {exc!r}")
    fxp = FixpointResult(dict(candidate), ab.top, True)
    if check_fxp(entry, ab, graph, transfer, init, fxp):
        return fxp
    return FixpointResult({}, ab.top, False, "candidate rejected by check_fxp")
