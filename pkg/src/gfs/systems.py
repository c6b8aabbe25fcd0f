"""Orthonormal systems on [0,1] with exact evaluation and exact antiderivatives.

Three families are provided, each in a zero-mean variant (default) and a
complete variant that prepends the constant function 1:

* trigonometric: interleaved sqrt(2)cos(2*pi*k*x), sqrt(2)sin(2*pi*k*x)
* Walsh (Paley order): products of Rademacher functions
* Haar: dyadic step wavelets of amplitude 2^(j/2)

Conventions, fixed for determinism:

* Piecewise-constant families are right-continuous at dyadic breakpoints;
  the value at x = 1 is the limit from the left.
* The antiderivative F_n(x) = integral of phi_n over [0, x] is closed form
  for the trigonometric family and an exact dyadic prefix sum for Walsh and
  Haar, so F_n(1) = 0 holds exactly (to rounding for trig) whenever the
  element has zero mean.

All per-element integrals (plain, first moment, pairwise products) are exact:
no quadrature appears anywhere in this module.
"""

from __future__ import annotations

import math

import numpy as np

SQRT2 = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi


def _check_index(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ValueError(f"element index must be a positive integer, got {n!r}")
    if n < 1:
        raise ValueError(f"element index must be >= 1, got {n}")
    return int(n)


def _check_domain(x):
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0) or np.any(xs > 1.0) or not np.all(np.isfinite(xs)):
        raise ValueError("argument must lie in [0, 1]")
    return xs


def _check_interval(a: float, b: float) -> tuple[float, float]:
    a = float(a)
    b = float(b)
    if not (0.0 <= a <= b <= 1.0):
        raise ValueError(f"integration bounds must satisfy 0 <= a <= b <= 1, got [{a}, {b}]")
    return a, b


class OrthonormalSystem:
    """Common interface: evaluation, antiderivatives and exact integrals.

    Public element indices n = 1, 2, ... are mapped to a raw index into the
    full family (raw 0 resp. 1 being the constant function), so that the
    zero-mean variant skips the constant and the "+const" variant keeps it.
    """

    kind = "abstract"
    _raw_shift = 0  # raw index of the constant element

    def __init__(self, include_constant: bool = False):
        self.include_constant = bool(include_constant)

    # -- naming ---------------------------------------------------------

    @property
    def name(self) -> str:
        return self.kind + ("+const" if self.include_constant else "")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"

    def __eq__(self, other):
        return (
            isinstance(other, OrthonormalSystem)
            and self.kind == other.kind
            and self.include_constant == other.include_constant
        )

    def __hash__(self):
        return hash((self.kind, self.include_constant))

    @property
    def is_complete(self) -> bool:
        """True when the family contains the constant (complete in L2)."""
        return self.include_constant

    def _raw(self, n) -> int:
        n = _check_index(n)
        return n - int(self.include_constant) + self._raw_shift

    # -- public operations ------------------------------------------------

    def value(self, n, x):
        """phi_n(x); accepts a scalar or an ndarray of points in [0, 1]."""
        r = self._raw(n)
        xs = _check_domain(x)
        out = self._value_raw(r, xs)
        return float(out) if np.ndim(x) == 0 else out

    def antiderivative(self, n, x):
        """F_n(x) = integral of phi_n over [0, x]; scalar or ndarray."""
        r = self._raw(n)
        xs = _check_domain(x)
        out = self._antiderivative_raw(r, xs)
        return float(out) if np.ndim(x) == 0 else out

    def sup_antiderivative(self, n) -> float:
        """max over [0,1] of |F_n|, exact (closed form or node enumeration)."""
        return self._sup_raw(self._raw(n))

    def breakpoints(self, n) -> np.ndarray:
        """Sorted segment endpoints within [0,1] between which phi_n is smooth."""
        return self._breakpoints_raw(self._raw(n))

    def integral(self, n, a: float, b: float) -> float:
        """Exact integral of phi_n over [a, b]."""
        r = self._raw(n)
        a, b = _check_interval(a, b)
        return self._integral_raw(r, a, b)

    def moment(self, n, a: float, b: float) -> float:
        """Exact integral of x * phi_n(x) over [a, b]."""
        r = self._raw(n)
        a, b = _check_interval(a, b)
        return self._moment_raw(r, a, b)

    def pair_integral(self, n1, n2) -> float:
        """Exact integral of phi_n1 * phi_n2 over [0, 1]."""
        return self._pair_raw(self._raw(n1), self._raw(n2))

    def gram_matrix(self, N) -> np.ndarray:
        """N x N matrix of pairwise products; identity up to rounding."""
        N = _check_index(N)
        G = np.empty((N, N))
        for i in range(1, N + 1):
            for j in range(i, N + 1):
                v = self.pair_integral(i, j)
                G[i - 1, j - 1] = v
                G[j - 1, i - 1] = v
        return G


class _PiecewiseConstantSystem(OrthonormalSystem):
    """Shared machinery for families that are constant on dyadic cells.

    Subclasses provide `_cells_raw(r) -> (edges, values)` with edges[0] = 0,
    edges[-1] = 1.  Antiderivatives are prefix sums over the cells (exact in
    binary floating point), extrema of the piecewise-linear antiderivative are
    attained at cell edges, and integrals reduce to cell overlaps.
    """

    def _cells_raw(self, r):
        raise NotImplementedError

    def _value_raw(self, r, xs):
        edges, values = self._cells_raw(r)
        idx = np.minimum(np.searchsorted(edges, xs, side="right") - 1, len(values) - 1)
        return values[idx]

    def _antiderivative_raw(self, r, xs):
        edges, values = self._cells_raw(r)
        prefix = np.concatenate(([0.0], np.cumsum(values * np.diff(edges))))
        idx = np.minimum(np.searchsorted(edges, xs, side="right") - 1, len(values) - 1)
        return prefix[idx] + values[idx] * (xs - edges[idx])

    def _sup_raw(self, r) -> float:
        edges, values = self._cells_raw(r)
        acc = 0.0
        best = 0.0
        for v, w in zip(values.tolist(), np.diff(edges).tolist()):
            acc += v * w
            if abs(acc) > best:
                best = abs(acc)
        return best

    def _breakpoints_raw(self, r):
        return self._cells_raw(r)[0]

    def _integral_raw(self, r, a, b) -> float:
        edges, values = self._cells_raw(r)
        lo = np.clip(edges[:-1], a, b)
        hi = np.clip(edges[1:], a, b)
        return float(np.sum(values * (hi - lo)))

    def _moment_raw(self, r, a, b) -> float:
        edges, values = self._cells_raw(r)
        lo = np.clip(edges[:-1], a, b)
        hi = np.clip(edges[1:], a, b)
        return float(np.sum(values * (hi * hi - lo * lo)) * 0.5)

    def _pair_raw(self, r1, r2) -> float:
        e1 = self._cells_raw(r1)[0]
        e2 = self._cells_raw(r2)[0]
        edges = np.union1d(e1, e2)
        mids = 0.5 * (edges[:-1] + edges[1:])
        prod = self._value_raw(r1, mids) * self._value_raw(r2, mids)
        return float(np.sum(prod * np.diff(edges)))


class TrigSystem(OrthonormalSystem):
    """Trigonometric family, cos/sin interleaved so odd/even indices pair up.

    Zero-mean variant: phi_{2k-1} = sqrt(2)cos(2 pi k x),
    phi_{2k} = sqrt(2)sin(2 pi k x).  The "+const" variant shifts these up by
    one and puts the constant 1 at index 1.
    """

    kind = "trig"
    _raw_shift = 0

    @staticmethod
    def _decode(r):
        # raw 0 -> constant; raw 2k-1 -> cos with frequency k; raw 2k -> sin.
        if r == 0:
            return 0, False
        if r % 2 == 1:
            return (r + 1) // 2, False
        return r // 2, True

    def _value_raw(self, r, xs):
        k, is_sin = self._decode(r)
        if k == 0:
            return np.ones_like(xs)
        c = TWO_PI * k
        return SQRT2 * (np.sin(c * xs) if is_sin else np.cos(c * xs))

    def _antiderivative_raw(self, r, xs):
        k, is_sin = self._decode(r)
        if k == 0:
            return xs + 0.0
        c = TWO_PI * k
        if is_sin:
            return SQRT2 * (1.0 - np.cos(c * xs)) / c
        return SQRT2 * np.sin(c * xs) / c

    def _sup_raw(self, r) -> float:
        k, is_sin = self._decode(r)
        if k == 0:
            return 1.0
        c = TWO_PI * k
        return 2.0 * SQRT2 / c if is_sin else SQRT2 / c

    def _breakpoints_raw(self, r):
        return np.array([0.0, 1.0])

    def _integral_raw(self, r, a, b) -> float:
        return float(self._antiderivative_raw(r, np.float64(b)) - self._antiderivative_raw(r, np.float64(a)))

    def _moment_raw(self, r, a, b) -> float:
        k, is_sin = self._decode(r)
        if k == 0:
            return 0.5 * (b * b - a * a)
        c = TWO_PI * k

        if is_sin:
            def F(x):
                return SQRT2 * (math.sin(c * x) / (c * c) - x * math.cos(c * x) / c)
        else:
            def F(x):
                return SQRT2 * (math.cos(c * x) / (c * c) + x * math.sin(c * x) / c)

        return F(b) - F(a)

    @staticmethod
    def _int_cos(m: int) -> float:
        # integral over [0,1] of cos(2 pi m x)
        if m == 0:
            return 1.0
        return math.sin(TWO_PI * m) / (TWO_PI * m)

    @staticmethod
    def _int_sin(m: int) -> float:
        # integral over [0,1] of sin(2 pi m x)
        if m == 0:
            return 0.0
        return (1.0 - math.cos(TWO_PI * m)) / (TWO_PI * m)

    def _pair_raw(self, r1, r2) -> float:
        k1, s1 = self._decode(r1)
        k2, s2 = self._decode(r2)
        if k1 == 0 and k2 == 0:
            return 1.0
        if k1 == 0 or k2 == 0:
            r = r1 if k1 != 0 else r2
            return float(self._antiderivative_raw(r, np.float64(1.0)))
        # product-to-sum; each factor carries sqrt(2)
        if not s1 and not s2:
            return self._int_cos(k1 - k2) + self._int_cos(k1 + k2)
        if s1 and s2:
            return self._int_cos(k1 - k2) - self._int_cos(k1 + k2)
        # one cos (frequency kc), one sin (frequency ks)
        ks, kc = (k1, k2) if s1 else (k2, k1)
        return self._int_sin(ks + kc) + self._int_sin(ks - kc)


class WalshSystem(_PiecewiseConstantSystem):
    """Walsh functions in Paley order.

    Raw element r >= 1 is the product of Rademacher functions picked by the
    binary digits of r; it is constant on the 2^m dyadic cells of width 2^-m,
    m = floor(log2 r) + 1.  Raw 0 is the constant 1.
    """

    kind = "walsh"
    _raw_shift = 0

    def _cells_raw(self, r):
        if r == 0:
            return np.array([0.0, 1.0]), np.array([1.0])
        m = r.bit_length()
        count = 1 << m
        edges = np.arange(count + 1) / count
        cells = np.arange(count, dtype=np.int64)
        parity = np.zeros(count, dtype=np.int64)
        for j in range(m):
            if (r >> j) & 1:
                parity ^= (cells >> (m - 1 - j)) & 1
        return edges, 1.0 - 2.0 * parity.astype(float)

    def _value_raw(self, r, xs):
        # O(log r) per point instead of materialising all 2^m cells
        if r == 0:
            return np.ones_like(xs)
        m = r.bit_length()
        count = 1 << m
        cell = np.minimum(np.floor(xs * count).astype(np.int64), count - 1)
        parity = np.zeros_like(cell)
        for j in range(m):
            if (r >> j) & 1:
                parity ^= (cell >> (m - 1 - j)) & 1
        return 1.0 - 2.0 * parity.astype(float)


class HaarSystem(_PiecewiseConstantSystem):
    """Haar wavelets; raw index r >= 2 decodes as r = 2^j + i, 1 <= i <= 2^j.

    The element takes +2^(j/2) on the left half of its support cell
    [(i-1)/2^j, i/2^j), -2^(j/2) on the right half, and 0 elsewhere.  Raw 1 is
    the constant 1.  The zero-mean variant indexes phi_n by raw n + 1.
    """

    kind = "haar"
    _raw_shift = 1

    def _cells_raw(self, r):
        if r == 1:
            return np.array([0.0, 1.0]), np.array([1.0])
        j = (r - 1).bit_length() - 1
        i = r - (1 << j)
        amp = math.sqrt(float(1 << j))
        half = 0.5 ** (j + 1)
        left = (i - 1) * 2.0 * half
        mid = left + half
        right = mid + half
        edges = [0.0]
        values = []
        if left > 0.0:
            values.append(0.0)
            edges.append(left)
        values.append(amp)
        edges.append(mid)
        values.append(-amp)
        edges.append(right)
        if right < 1.0:
            values.append(0.0)
            edges.append(1.0)
        return np.array(edges), np.array(values)


class RemappedSystem(OrthonormalSystem):
    """View of a base system through a strictly increasing index subsequence.

    Element n of the view is element indices[n-1] of the base system, so every
    operation (values, antiderivatives, integrals, Gram matrices) transparently
    realises the remapped family.
    """

    def __init__(self, base: OrthonormalSystem, indices):
        idx = [int(i) for i in indices]
        if not idx:
            raise ValueError("index map must be nonempty")
        if any(i < 1 for i in idx) or any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("index map must be strictly increasing positive integers")
        self.base = base
        self.indices = tuple(idx)
        self.include_constant = base.include_constant and self.indices[0] == 1

    kind = "remap"

    @property
    def name(self) -> str:
        return f"remap({self.base.name})"

    @property
    def is_complete(self) -> bool:
        return False

    def __eq__(self, other):
        return (
            isinstance(other, RemappedSystem)
            and self.base == other.base
            and self.indices == other.indices
        )

    def __hash__(self):
        return hash((self.base, self.indices))

    def __len__(self):
        return len(self.indices)

    def _map(self, n) -> int:
        n = _check_index(n)
        if n > len(self.indices):
            raise ValueError(f"index {n} exceeds the map length {len(self.indices)}")
        return self.indices[n - 1]

    def value(self, n, x):
        return self.base.value(self._map(n), x)

    def antiderivative(self, n, x):
        return self.base.antiderivative(self._map(n), x)

    def sup_antiderivative(self, n) -> float:
        return self.base.sup_antiderivative(self._map(n))

    def breakpoints(self, n):
        return self.base.breakpoints(self._map(n))

    def integral(self, n, a, b) -> float:
        return self.base.integral(self._map(n), a, b)

    def moment(self, n, a, b) -> float:
        return self.base.moment(self._map(n), a, b)

    def pair_integral(self, n1, n2) -> float:
        return self.base.pair_integral(self._map(n1), self._map(n2))


_KINDS = {"trig": TrigSystem, "walsh": WalshSystem, "haar": HaarSystem}


def make_system(kind: str, include_constant: bool = False) -> OrthonormalSystem:
    try:
        cls = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown system kind {kind!r}; expected one of {sorted(_KINDS)}") from None
    return cls(include_constant)


def parse_system(spec: str) -> OrthonormalSystem:
    """Parse "trig", "walsh", "haar", optionally suffixed with "+const"."""
    spec = spec.strip().lower()
    include = spec.endswith("+const")
    kind = spec[: -len("+const")] if include else spec
    return make_system(kind, include)


def remap(base: OrthonormalSystem, indices) -> RemappedSystem:
    """Realise the subsequence (phi_{n_k}) of `base` as a system of its own."""
    return RemappedSystem(base, indices)
