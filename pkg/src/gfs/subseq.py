"""Subsequence extraction driven by antiderivative decay.

A system whose antiderivatives decay pointwise admits subsequences (n_k) with
sup |F_{n_k}| < 1/k^2; the greedy smallest-index scan below finds the
canonical one.  The module also provides the Parseval prefix sums that justify
the selection for complete systems, the n * sup decay series, and the
growth-envelope admissibility check for candidate multiplier sequences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .multipliers import MultiplierSeq, kahan_running_sums
from .systems import OrthonormalSystem, RemappedSystem

#: Greedy scans give up (loudly) past this index.
DEFAULT_SCAN_CAP = 2 ** 22


def parseval_prefix_series(system: OrthonormalSystem, x: float, N: int) -> np.ndarray:
    """Running sums of F_n(x)^2 for n = 1..N; converges to x for complete systems."""
    if not system.is_complete:
        raise ValueError(
            f"Parseval prefix requires a complete system (one including the constant); got {system.name}"
        )
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    x = float(x)
    terms = np.empty(N)
    for n in range(1, N + 1):
        F = system.antiderivative(n, x)
        terms[n - 1] = F * F
    return kahan_running_sums(terms)


def parseval_prefix(system: OrthonormalSystem, x: float, N: int) -> float:
    """sum_{n<=N} F_n(x)^2."""
    return float(parseval_prefix_series(system, x, N)[-1])


@dataclass(frozen=True)
class SubseqSelection:
    base: str
    K: int
    indices: tuple[int, ...]
    witnesses: tuple[float, ...]  # sup |F_{n_k}|, strictly below 1/k^2

    def to_json_dict(self) -> dict:
        return {
            "base": self.base,
            "K": self.K,
            "indices": list(self.indices),
            "witnesses": list(self.witnesses),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def select_subsequence(system: OrthonormalSystem, K: int,
                       scan_cap: int = DEFAULT_SCAN_CAP) -> SubseqSelection:
    """Greedy smallest-index subsequence with sup |F_{n_k}| < 1/k^2 strictly.

    Deterministic: scanning n = 1, 2, ... and keeping the first index past the
    previous pick whose antiderivative sup beats the 1/k^2 bound.  Raises when
    the scan cap is exceeded, naming the position k that failed.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    indices: list[int] = []
    witnesses: list[float] = []
    n = 0
    for k in range(1, K + 1):
        bound = 1.0 / (k * k)
        n += 1
        while n <= scan_cap:
            s = system.sup_antiderivative(n)
            if s < bound:
                break
            n += 1
        else:
            raise ValueError(
                f"selection exhausted at k={k}: no index in ({indices[-1] if indices else 0}, "
                f"{scan_cap}] has sup |F_n| < 1/{k}^2"
            )
        indices.append(n)
        witnesses.append(s)
    return SubseqSelection(
        base=system.name,
        K=K,
        indices=tuple(indices),
        witnesses=tuple(witnesses),
    )


def selection_system(system: OrthonormalSystem, selection: SubseqSelection) -> RemappedSystem:
    """Realise a selection as a remapped system usable by every other module."""
    return RemappedSystem(system, selection.indices)


def decay_series(system: OrthonormalSystem, N: int) -> np.ndarray:
    """Array of n * sup |F_n| for n = 1..N (bounded iff F_n = O(1/n))."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return np.array([n * system.sup_antiderivative(n) for n in range(1, N + 1)])


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    constant: float            # calibrated envelope constant
    argmax: int                # index where h_n * log2(n+1) / sqrt(n) peaks
    ratios: np.ndarray         # the ratio series itself
    margins: np.ndarray        # constant * envelope - h_n (>= 0, 0 at the peak)


def sqrtlog_admissible(h: MultiplierSeq, N: int) -> AdmissibilityReport:
    """Check h_n against the envelope sqrt(n)/log2(n+1) on 1..N.

    The ratio r_n = h_n log2(n+1)/sqrt(n) of a sequence inside the envelope
    peaks at some interior index and stops growing; a sequence that outgrows
    the envelope has its running maximum at the end of the window.  The check
    therefore calibrates C = max r_n and reports admissible exactly when the
    (first) peak lies strictly before N.

    A candidate that is nonincreasing across the whole window and ends below
    its start is rejected outright (it cannot tend to infinity); the envelope
    itself dips slightly before growing, so pointwise monotonicity is not
    demanded.
    """
    if N < 2:
        raise ValueError(f"need N >= 2 to judge growth, got {N}")
    hv = h.values(N)
    if hv[-1] < hv[0] and np.all(hv[1:] <= hv[:-1]):
        raise ValueError("admissibility check requires a non-decreasing candidate")
    n = np.arange(1, N + 1, dtype=float)
    envelope = np.sqrt(n) / np.log2(n + 1.0)
    ratios = hv / envelope
    argmax = int(np.argmax(ratios)) + 1
    constant = float(ratios[argmax - 1])
    margins = constant * envelope - hv
    return AdmissibilityReport(
        admissible=argmax < N,
        constant=constant,
        argmax=argmax,
        ratios=ratios,
        margins=margins,
    )
