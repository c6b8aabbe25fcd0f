"""Convergence-multiplier machinery over an orthonormal system.

Given a multiplier sequence (d_n), a square-summable sequence (a_n) and a
system (phi_n), the central objects are the weighted polynomial

    p_n(x) = sum_{k<=n} d_k^2 a_k w(k)^2 phi_k(x),       w(k) = log2 k,

its prefix integrals, the grid maximum G_n = max_i |int_0^{i/n} p_n|, the
weighted coefficient norm T_n = (sum d_k^2 a_k^2 w(k)^2)^(1/2), and the
running weighted sums S_n = sum_{k<=n} d_k^2 C_k(f)^2 w(k)^2 built from the
Fourier coefficients of a bounded-variation function.

The weight follows the literal log2 convention, so index 1 never contributes;
pass weight_mode="shifted" to use log2(k+1) instead.  Long reductions use
compensated summation (math.fsum for scalars, a Kahan carry for running
series) to keep 1e-10 scale identities intact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bv import BVFunction, plateau
from .coeffs import coefficient_vector, restricted_inner
from .report import DiagnosticsReport
from .systems import OrthonormalSystem, _PiecewiseConstantSystem

WEIGHT_MODES = ("paper", "shifted")

#: Ratios G/T are suppressed below this to avoid 0/0 from the w(1) = 0 convention.
T_FLOOR = 1e-14

#: Cauchy gaps below this count as converged when judging monotone decrease.
GAP_FLOOR = 1e-12


def weight(k: int, mode: str = "paper") -> float:
    """Menshov-Rademacher weight: log2(k), or log2(k+1) in shifted mode."""
    if k < 1:
        raise ValueError(f"weight index must be >= 1, got {k}")
    if mode == "paper":
        return math.log2(k)
    if mode == "shifted":
        return math.log2(k + 1)
    raise ValueError(f"unknown weight mode {mode!r}; expected one of {WEIGHT_MODES}")


def _log_weights(n: int, mode: str) -> np.ndarray:
    k = np.arange(1, n + 1, dtype=float)
    if mode == "paper":
        return np.log2(k)
    if mode == "shifted":
        return np.log2(k + 1.0)
    raise ValueError(f"unknown weight mode {mode!r}; expected one of {WEIGHT_MODES}")


class _KahanVector:
    """Compensated elementwise accumulation of many same-shape arrays."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self._carry = np.zeros(shape)

    def add(self, term):
        y = term - self._carry
        t = self.total + y
        self._carry = (t - self.total) - y
        self.total = t


def kahan_running_sums(terms) -> np.ndarray:
    """Prefix sums with a compensated carry; terms is a 1-d array."""
    out = np.empty(len(terms))
    total = 0.0
    carry = 0.0
    for i, v in enumerate(terms):
        y = float(v) - carry
        t = total + y
        carry = (t - total) - y
        total = t
        out[i] = total
    return out


# ---------------------------------------------------------------------------
# multiplier and coefficient sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierSeq:
    """Rule producing the multiplier values d_1, d_2, ...

    Rules: constant c, power n^gamma, sqrt(n)/log2(n+1), or an explicit table.
    """

    rule: str
    c: float = 1.0
    gamma: float = 0.0
    table: tuple[float, ...] | None = None

    @classmethod
    def constant(cls, c: float = 1.0) -> "MultiplierSeq":
        return cls(rule="const", c=float(c))

    @classmethod
    def power(cls, gamma: float) -> "MultiplierSeq":
        return cls(rule="power", gamma=float(gamma))

    @classmethod
    def sqrt_over_log(cls) -> "MultiplierSeq":
        return cls(rule="sqrtlog")

    @classmethod
    def from_table(cls, values) -> "MultiplierSeq":
        table = tuple(float(v) for v in values)
        if not table:
            raise ValueError("multiplier table must be nonempty")
        return cls(rule="table", table=table)

    def value(self, k: int) -> float:
        if k < 1:
            raise ValueError(f"multiplier index must be >= 1, got {k}")
        if self.rule == "const":
            return self.c
        if self.rule == "power":
            return float(k) ** self.gamma
        if self.rule == "sqrtlog":
            return math.sqrt(k) / math.log2(k + 1)
        if self.rule == "table":
            if k > len(self.table):
                raise ValueError(f"multiplier table has {len(self.table)} entries, index {k} requested")
            return self.table[k - 1]
        raise ValueError(f"unknown multiplier rule {self.rule!r}")

    def values(self, n: int) -> np.ndarray:
        if self.rule == "const":
            return np.full(n, self.c)
        if self.rule == "power":
            return np.arange(1, n + 1, dtype=float) ** self.gamma
        if self.rule == "sqrtlog":
            k = np.arange(1, n + 1, dtype=float)
            return np.sqrt(k) / np.log2(k + 1.0)
        if self.rule == "table":
            if n > len(self.table):
                raise ValueError(f"multiplier table has {len(self.table)} entries, {n} requested")
            return np.array(self.table[:n])
        raise ValueError(f"unknown multiplier rule {self.rule!r}")

    def describe(self) -> str:
        if self.rule == "const":
            return f"const:{self.c:g}"
        if self.rule == "power":
            return f"power:{self.gamma:g}"
        if self.rule == "sqrtlog":
            return "sqrtlog"
        return f"table[{len(self.table)}]"

    @classmethod
    def parse(cls, spec: str) -> "MultiplierSeq":
        """Parse "const:<c>", "power:<gamma>" or "sqrtlog"."""
        spec = spec.strip()
        if spec == "sqrtlog":
            return cls.sqrt_over_log()
        if spec.startswith("const:"):
            return cls.constant(float(spec.split(":", 1)[1]))
        if spec.startswith("power:"):
            return cls.power(float(spec.split(":", 1)[1]))
        raise ValueError(f"cannot parse multiplier rule {spec!r}")


@dataclass
class L2Sequence:
    """Finite square-summable sequence a_1..a_N with a provenance descriptor."""

    values: np.ndarray
    descriptor: str = "table"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or len(self.values) == 0:
            raise ValueError("sequence must be a nonempty 1-d array")

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_values(cls, values, descriptor: str = "table") -> "L2Sequence":
        return cls(np.asarray(values, dtype=float), descriptor)

    @classmethod
    def unit_basis(cls, k: int, N: int) -> "L2Sequence":
        if not 1 <= k <= N:
            raise ValueError(f"unit basis index must satisfy 1 <= k <= N, got k={k}, N={N}")
        v = np.zeros(N)
        v[k - 1] = 1.0
        return cls(v, f"unit:{k}")

    @classmethod
    def seeded_random(cls, seed: int, N: int, alpha: float = 0.75) -> "L2Sequence":
        """Deterministic draw: z_k standard normal from PCG64(seed), a_k = z_k / k^alpha,
        then normalised to unit l2 norm."""
        rng = np.random.Generator(np.random.PCG64(int(seed)))
        z = rng.standard_normal(int(N))
        a = z / np.arange(1, N + 1, dtype=float) ** float(alpha)
        norm = math.sqrt(math.fsum(float(v) * float(v) for v in a))
        return cls(a / norm, f"random:seed={int(seed)},alpha={float(alpha):g}")


def _poly_coeffs(d: MultiplierSeq, a: L2Sequence, n: int, weight_mode: str) -> np.ndarray:
    """Term weights d_k^2 a_k w(k)^2 of the polynomial, k = 1..n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > len(a):
        raise ValueError(f"sequence has {len(a)} entries, n={n} requested")
    dv = d.values(n)
    lw = _log_weights(n, weight_mode)
    return dv * dv * a.values[:n] * lw * lw


# ---------------------------------------------------------------------------
# the weighted polynomial and its functionals
# ---------------------------------------------------------------------------


def weighted_poly_eval(system, d, a, n: int, x, weight_mode: str = "paper"):
    """p_n(x) = sum_{k<=n} d_k^2 a_k w(k)^2 phi_k(x); scalar or ndarray x."""
    coeffs = _poly_coeffs(d, a, n, weight_mode)
    if np.ndim(x) == 0:
        return math.fsum(c * system.value(k + 1, x) for k, c in enumerate(coeffs) if c != 0.0)
    acc = _KahanVector(np.shape(x))
    for k, c in enumerate(coeffs):
        if c != 0.0:
            acc.add(c * system.value(k + 1, x))
    return acc.total


def weighted_poly_prefix(system, d, a, n: int, t, weight_mode: str = "paper"):
    """Prefix integral of the weighted polynomial over [0, t], exact via antiderivatives."""
    coeffs = _poly_coeffs(d, a, n, weight_mode)
    if np.ndim(t) == 0:
        return math.fsum(c * system.antiderivative(k + 1, t) for k, c in enumerate(coeffs) if c != 0.0)
    acc = _KahanVector(np.shape(t))
    for k, c in enumerate(coeffs):
        if c != 0.0:
            acc.add(c * system.antiderivative(k + 1, t))
    return acc.total


def prefix_argmax(system, d, a, n: int, weight_mode: str = "paper", upto: int | None = None):
    """Largest |prefix integral| over the grid i/n, i = 1..upto (default n).

    Returns (i_star, value); ties resolve to the smallest index.
    """
    upto = n if upto is None else int(upto)
    if not 1 <= upto <= n:
        raise ValueError(f"upto must satisfy 1 <= upto <= n, got {upto}")
    grid = np.arange(1, upto + 1, dtype=float) / n
    vals = np.abs(weighted_poly_prefix(system, d, a, n, grid, weight_mode))
    i = int(np.argmax(vals))
    return i + 1, float(vals[i])


def max_prefix_integral(system, d, a, n: int, weight_mode: str = "paper") -> float:
    """G_n: max over i = 1..n of |int_0^{i/n} p_n|."""
    return prefix_argmax(system, d, a, n, weight_mode)[1]


def weighted_coeff_norm(d, a, n: int, weight_mode: str = "paper") -> float:
    """T_n = (sum_{k<=n} d_k^2 a_k^2 w(k)^2)^(1/2)."""
    coeffs = _poly_coeffs(d, a, n, weight_mode)
    return math.sqrt(math.fsum(float(c) * float(av) for c, av in zip(coeffs, a.values[:n])))


def ratio_sweep(system, d, a, n_list, weight_mode: str = "paper") -> DiagnosticsReport:
    """Rows (n, G_n, T_n, G_n/T_n); the empirical boundedness check.

    Ratios are reported only where T_n exceeds a small floor; if every
    requested n has T_n at the floor the report is empty and flagged.
    """
    n_list = [int(n) for n in n_list]
    if any(n < 1 for n in n_list):
        raise ValueError("all n must be >= 1")
    rows = []
    any_positive = False
    for n in n_list:
        G = max_prefix_integral(system, d, a, n, weight_mode)
        T = weighted_coeff_norm(d, a, n, weight_mode)
        ratio = G / T if T > T_FLOOR else None
        any_positive = any_positive or T > T_FLOOR
        rows.append((n, G, T, ratio, None, None))
    metadata = {
        "system": system.name,
        "multiplier": d.describe(),
        "sequence": a.descriptor,
        "weight_mode": weight_mode,
    }
    if not any_positive:
        return DiagnosticsReport(
            columns=DiagnosticsReport.STANDARD_COLUMNS,
            rows=[],
            metadata=metadata,
            warning="all-T-zero",
        )
    return DiagnosticsReport(columns=DiagnosticsReport.STANDARD_COLUMNS, rows=rows, metadata=metadata)


def weighted_log_sum(f: BVFunction, system, d, N: int, weight_mode: str = "paper") -> np.ndarray:
    """Running sums S_n = sum_{k<=n} d_k^2 C_k(f)^2 w(k)^2 for n = 1..N."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    C = coefficient_vector(f, system, N).values
    dv = d.values(N)
    lw = _log_weights(N, weight_mode)
    terms = dv * dv * C * C * lw * lw
    return kahan_running_sums(terms)


# ---------------------------------------------------------------------------
# combinations of system elements (single phi_k, or the weighted polynomial)
# ---------------------------------------------------------------------------


@dataclass
class SystemCombination:
    """Finite combination g = sum_k coeffs[k-1] * phi_k with exact integrals."""

    system: OrthonormalSystem
    coeffs: np.ndarray
    label: str = "combo"

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.ndim != 1 or len(self.coeffs) == 0:
            raise ValueError("combination weights must be a nonempty 1-d array")

    def _terms(self):
        for k, c in enumerate(self.coeffs):
            if c != 0.0:
                yield k + 1, float(c)

    def prefix(self, t):
        """Integral of g over [0, t]; scalar or ndarray t."""
        if np.ndim(t) == 0:
            return math.fsum(c * self.system.antiderivative(k, t) for k, c in self._terms())
        acc = _KahanVector(np.shape(t))
        for k, c in self._terms():
            acc.add(c * self.system.antiderivative(k, t))
        return acc.total

    def integral(self, a: float, b: float) -> float:
        return math.fsum(c * self.system.integral(k, a, b) for k, c in self._terms())

    def inner_with(self, f: BVFunction, a: float, b: float) -> float:
        """Exact integral of f * g over [a, b]."""
        return math.fsum(c * restricted_inner(f, self.system, k, a, b) for k, c in self._terms())

    def inner_total(self, f: BVFunction) -> float:
        return self.inner_with(f, 0.0, 1.0)


def element_combo(system, k: int) -> SystemCombination:
    """The single element phi_k as a combination."""
    coeffs = np.zeros(k)
    coeffs[k - 1] = 1.0
    return SystemCombination(system, coeffs, label=f"{system.name}:{k}")


def poly_combo(system, d, a, n: int, weight_mode: str = "paper") -> SystemCombination:
    """The weighted polynomial p_n as a combination."""
    return SystemCombination(
        system,
        _poly_coeffs(d, a, n, weight_mode),
        label=f"poly:{n}:{d.describe()}:{a.descriptor}",
    )


# ---------------------------------------------------------------------------
# decomposition identity and the pairing functional
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Split of int f g over the grid i/n into boundary-difference, local and
    endpoint terms; the residual is lhs - (term1 + term2 + term3)."""

    n: int
    lhs: float
    term1: float
    term2: float
    term3: float

    @property
    def residual(self) -> float:
        return self.lhs - (self.term1 + self.term2 + self.term3)


def decompose_inner_product(f: BVFunction, g: SystemCombination, n: int) -> Decomposition:
    """Exact three-term decomposition of int_0^1 f g over the grid i/n.

    term1 pairs the grid differences of f with prefix integrals of g, term2
    collects the within-cell deviations of f from its right grid value, and
    term3 is f(1) times the full integral of g.  The identity is algebraic, so
    the residual is rounding noise.
    """
    if n < 2:
        raise ValueError(f"grid size n must be >= 2, got {n}")
    lhs = g.inner_total(f)
    fv = [f.value(i / n) for i in range(n + 1)]
    grid = np.arange(1, n, dtype=float) / n
    prefixes = np.atleast_1d(g.prefix(grid))
    term1 = math.fsum(
        (fv[i] - fv[i + 1]) * float(prefixes[i - 1]) for i in range(1, n)
    )
    term2 = math.fsum(
        g.inner_with(f, (i - 1) / n, i / n) - fv[i] * g.integral((i - 1) / n, i / n)
        for i in range(1, n + 1)
    )
    term3 = fv[n] * g.integral(0.0, 1.0)
    return Decomposition(n=n, lhs=lhs, term1=term1, term2=term2, term3=term3)


def pairing_functional(f: BVFunction, system, d, b: L2Sequence, n: int,
                       weight_mode: str = "paper") -> float:
    """Normalised pairing (1/T_n) int f p_n, expanded exactly through C_k(f).

    Raises when the weighted norm T_n vanishes (the functional is undefined).
    """
    T = weighted_coeff_norm(d, b, n, weight_mode)
    if T <= T_FLOOR:
        raise ValueError(f"pairing functional undefined: weighted norm T_{n} is zero")
    C = coefficient_vector(f, system, n).values
    coeffs = _poly_coeffs(d, b, n, weight_mode)
    return math.fsum(float(c) * float(Ck) for c, Ck in zip(coeffs, C)) / T


def poly_cells(system, d, a, n: int, weight_mode: str = "paper"):
    """Piecewise-constant representation (edges, values) of the polynomial.

    Only available over piecewise-constant systems (Walsh, Haar).
    """
    if not isinstance(system, _PiecewiseConstantSystem):
        raise ValueError("polynomial cells require a piecewise-constant system")
    coeffs = _poly_coeffs(d, a, n, weight_mode)
    edges = np.array([0.0, 1.0])
    for k, c in enumerate(coeffs):
        if c != 0.0:
            edges = np.union1d(edges, system.breakpoints(k + 1))
    mids = 0.5 * (edges[:-1] + edges[1:])
    acc = _KahanVector(mids.shape)
    for k, c in enumerate(coeffs):
        if c != 0.0:
            acc.add(c * system.value(k + 1, mids))
    return edges, acc.total


def cell_abs_integrals(system, d, a, n: int, weight_mode: str = "paper") -> np.ndarray:
    """Exact integral of |p_n| over each grid cell ((i-1)/n, i/n), i = 1..n."""
    edges, values = poly_cells(system, d, a, n, weight_mode)
    out = np.empty(n)
    for i in range(1, n + 1):
        lo = np.clip(edges[:-1], (i - 1) / n, i / n)
        hi = np.clip(edges[1:], (i - 1) / n, i / n)
        out[i - 1] = float(np.sum(np.abs(values) * (hi - lo)))
    return out


def plateau_pairing_experiment(system, d, b: L2Sequence, n: int,
                               weight_mode: str = "paper") -> dict:
    """Evaluate the pairing functional at the ramp aligned with the prefix argmax.

    Picks i = argmax over 1..n-1 of the polynomial's |prefix integral|, builds
    the 0-to-1 ramp across ((i)/n, (i+1)/n), and reports the functional value
    together with G_n and T_n.
    """
    if n < 2:
        raise ValueError(f"experiment needs n >= 2, got {n}")
    i_star, _ = prefix_argmax(system, d, b, n, weight_mode, upto=n - 1)
    G = max_prefix_integral(system, d, b, n, weight_mode)
    T = weighted_coeff_norm(d, b, n, weight_mode)
    f = plateau(n, i_star)
    U = pairing_functional(f, system, d, b, n, weight_mode)
    return {"n": n, "i": i_star, "U": U, "G": G, "T": T}


# ---------------------------------------------------------------------------
# series diagnostics
# ---------------------------------------------------------------------------


def weighted_partial_sum(f: BVFunction, system, d, N: int, x, weight_mode: str = "paper"):
    """sigma_N(x) = sum_{k<=N} d_k C_k(f) phi_k(x); scalar or ndarray x."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    C = coefficient_vector(f, system, N).values
    dv = d.values(N)
    terms = dv * C
    if np.ndim(x) == 0:
        return math.fsum(t * system.value(k + 1, x) for k, t in enumerate(terms) if t != 0.0)
    acc = _KahanVector(np.shape(x))
    for k, t in enumerate(terms):
        if t != 0.0:
            acc.add(t * system.value(k + 1, x))
    return acc.total


def midpoint_grid(grid_size: int) -> np.ndarray:
    """Sample points (2j+1)/(2*grid_size): they avoid every dyadic breakpoint."""
    if grid_size < 1:
        raise ValueError(f"grid size must be >= 1, got {grid_size}")
    return (2.0 * np.arange(grid_size) + 1.0) / (2.0 * grid_size)


def convergence_probe(f: BVFunction, system, d, N_list, grid_size: int = 64,
                      weight_mode: str = "paper", slack: float = 0.10) -> DiagnosticsReport:
    """Cauchy-gap trend of partial sums along N_list on a dyadic-free grid.

    Rows pair each N_j with max over the grid of |sigma_{N_{j+1}} - sigma_{N_j}|
    and with the running weighted sum S_{N_j}.  The report is flagged
    consistent-with-convergence when successive gaps shrink within the given
    slack (gaps at rounding scale count as shrunk).  This is a trend
    diagnostic, never a convergence verdict.
    """
    N_list = [int(n) for n in N_list]
    if len(N_list) < 2:
        raise ValueError("need at least two partial-sum sizes")
    if any(b <= a for a, b in zip(N_list, N_list[1:])) or N_list[0] < 1:
        raise ValueError("partial-sum sizes must be strictly increasing and positive")
    grid = midpoint_grid(grid_size)
    N_max = N_list[-1]
    C = coefficient_vector(f, system, N_max).values
    terms = d.values(N_max) * C

    acc = _KahanVector(grid.shape)
    snapshots = []
    targets = set(N_list)
    for k in range(1, N_max + 1):
        t = terms[k - 1]
        if t != 0.0:
            acc.add(t * system.value(k, grid))
        if k in targets:
            snapshots.append(acc.total.copy())
    gaps = [float(np.max(np.abs(b - a))) for a, b in zip(snapshots, snapshots[1:])]

    S = weighted_log_sum(f, system, d, N_max, weight_mode)
    rows = [
        (N_list[j], None, None, None, float(S[N_list[j] - 1]), gaps[j])
        for j in range(len(gaps))
    ]
    consistent = all(
        g2 <= (1.0 + slack) * g1 or g2 <= GAP_FLOOR
        for g1, g2 in zip(gaps, gaps[1:])
    )
    metadata = {
        "system": system.name,
        "function": f.name,
        "multiplier": d.describe(),
        "weight_mode": weight_mode,
        "grid_size": int(grid_size),
        "N_list": N_list,
        "slack": slack,
        "consistent_with_convergence": bool(consistent),
    }
    return DiagnosticsReport(columns=DiagnosticsReport.STANDARD_COLUMNS, rows=rows, metadata=metadata)
