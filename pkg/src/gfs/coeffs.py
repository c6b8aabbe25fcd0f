"""Exact Fourier coefficients of piecewise-linear functions.

The integrand f * phi_n is (linear) x (constant) on each cell for the dyadic
families and (linear) x (sinusoid) for the trigonometric family, so every
coefficient is a finite closed-form sum: the interval is split at the union of
the function's nodes and the element's breakpoints and each cell contributes
slope * moment + intercept * integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bv import BVFunction
from .systems import OrthonormalSystem, TrigSystem, WalshSystem


def _merge_breakpoints(f: BVFunction, pts) -> np.ndarray:
    return np.union1d(np.asarray(f.nodes), np.asarray(pts))


def restricted_inner(f: BVFunction, system: OrthonormalSystem, n: int, a: float, b: float) -> float:
    """Exact integral of f * phi_n over [a, b]."""
    a = float(a)
    b = float(b)
    if not 0.0 <= a <= b <= 1.0:
        raise ValueError(f"bounds must satisfy 0 <= a <= b <= 1, got [{a}, {b}]")
    if a == b:
        return 0.0
    cuts = _merge_breakpoints(f, system.breakpoints(n))
    cuts = cuts[(cuts > a) & (cuts < b)]
    grid = np.concatenate(([a], cuts, [b]))
    pieces = list(f.pieces())
    parts = []
    p = 0
    for u, v in zip(grid[:-1], grid[1:]):
        while p < len(pieces) - 1 and pieces[p][1] <= u:
            p += 1
        x0, x1, f0, f1 = pieces[p]
        slope = (f1 - f0) / (x1 - x0)
        intercept = f0 - slope * x0
        parts.append(slope * system.moment(n, u, v) + intercept * system.integral(n, u, v))
    return math.fsum(parts)


def fourier_coefficient(f: BVFunction, system: OrthonormalSystem, n: int) -> float:
    """C_n(f): exact integral of f * phi_n over [0, 1]."""
    return restricted_inner(f, system, n, 0.0, 1.0)


@dataclass
class CoeffVector:
    system: str
    function_name: str
    N: int
    values: np.ndarray = field(repr=False)  # values[k-1] = C_k
    method: str = "exact-piecewise"
    tol: float = 0.0  # closed-form integration: no error beyond rounding

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.N,):
            raise ValueError("coefficient storage must have length N")

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= self.N:
            raise ValueError(f"coefficient index {n} outside 1..{self.N}")
        return float(self.values[n - 1])

    def bessel_sum(self) -> float:
        return math.fsum(float(c) * float(c) for c in self.values)

    def to_rows(self) -> list[tuple[int, float]]:
        return [(k + 1, float(c)) for k, c in enumerate(self.values)]

    def to_json_dict(self) -> dict:
        return {
            "system": self.system,
            "function": self.function_name,
            "N": self.N,
            "method": self.method,
            "tol": self.tol,
            "values": [float(c) for c in self.values],
        }


def _walsh_batch(f: BVFunction, system: WalshSystem, N: int) -> np.ndarray:
    """All C_1..C_N against Walsh via per-level cell masses of f."""
    out = np.empty(N)
    masses: dict[int, np.ndarray] = {}
    shift = 1 if system.include_constant else 0
    for n in range(1, N + 1):
        r = n - shift
        if r == 0:
            out[n - 1] = f.integral()
            continue
        m = r.bit_length()
        if m not in masses:
            count = 1 << m
            edges = np.arange(count + 1) / count
            masses[m] = np.diff(f.antiderivative(edges))
        mass = masses[m]
        count = len(mass)
        cells = np.arange(count, dtype=np.int64)
        parity = np.zeros(count, dtype=np.int64)
        for j in range(m):
            if (r >> j) & 1:
                parity ^= (cells >> (m - 1 - j)) & 1
        signs = 1.0 - 2.0 * parity.astype(float)
        out[n - 1] = float(signs @ mass)
    return out


def coefficient_vector(f: BVFunction, system: OrthonormalSystem, N: int) -> CoeffVector:
    """C_1..C_N for a fixed (f, system), deterministic and exact."""
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    if isinstance(system, WalshSystem):
        values = _walsh_batch(f, system, N)
    else:
        values = np.array([fourier_coefficient(f, system, n) for n in range(1, N + 1)])
    method = "closed-form-trig" if isinstance(system, TrigSystem) else "exact-piecewise"
    return CoeffVector(
        system=system.name,
        function_name=f.name,
        N=N,
        values=values,
        method=method,
    )
