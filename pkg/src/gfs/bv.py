"""Piecewise-linear functions of bounded variation on [0,1].

A function is stored by its nodes 0 = x_0 < ... < x_m = 1 together with the
one-sided limits at each node: on the open interval (x_{i-1}, x_i) it is the
straight line from right_vals[i-1] to left_vals[i-1].  Pointwise values follow
the right-continuity convention (f(x_i) = right limit at interior nodes),
except f(1) which is the left limit, matching how the dyadic systems are
evaluated.  All derived quantities (total variation, sup norm, integrals of f
and f^2) are closed form.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BVFunction:
    nodes: tuple[float, ...]
    right_vals: tuple[float, ...]  # limits from the right at x_0 .. x_{m-1}
    left_vals: tuple[float, ...]   # limits from the left at x_1 .. x_m
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        right_vals = tuple(float(v) for v in self.right_vals)
        left_vals = tuple(float(v) for v in self.left_vals)
        if len(nodes) < 2:
            raise ValueError("need at least the two endpoint nodes")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("nodes must start at 0 and end at 1")
        if any(b <= a for a, b in zip(nodes, nodes[1:])):
            raise ValueError("nodes must be strictly increasing")
        m = len(nodes) - 1
        if len(right_vals) != m or len(left_vals) != m:
            raise ValueError(f"expected {m} right values and {m} left values")
        if not all(math.isfinite(v) for v in right_vals + left_vals + nodes):
            raise ValueError("nodes and values must be finite")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "right_vals", right_vals)
        object.__setattr__(self, "left_vals", left_vals)

    # -- pointwise -------------------------------------------------------

    def value(self, x: float) -> float:
        x = float(x)
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"argument {x} outside [0, 1]")
        if x == 1.0:
            return self.left_vals[-1]
        i = bisect_right(self.nodes, x) - 1
        if x == self.nodes[i]:
            return self.right_vals[i]
        x0, x1 = self.nodes[i], self.nodes[i + 1]
        f0, f1 = self.right_vals[i], self.left_vals[i]
        return f0 + (f1 - f0) * (x - x0) / (x1 - x0)

    def pieces(self):
        """Yield (x0, x1, f0, f1): each open segment with its one-sided values."""
        for i in range(len(self.nodes) - 1):
            yield self.nodes[i], self.nodes[i + 1], self.right_vals[i], self.left_vals[i]

    def right_limit(self, x: float) -> float:
        x = float(x)
        if not 0.0 <= x < 1.0:
            raise ValueError("right limit exists on [0, 1) only")
        i = bisect_right(self.nodes, x) - 1
        if x == self.nodes[i]:
            return self.right_vals[i]
        x0, x1 = self.nodes[i], self.nodes[i + 1]
        f0, f1 = self.right_vals[i], self.left_vals[i]
        return f0 + (f1 - f0) * (x - x0) / (x1 - x0)

    def left_limit(self, x: float) -> float:
        x = float(x)
        if not 0.0 < x <= 1.0:
            raise ValueError("left limit exists on (0, 1] only")
        i = bisect_right(self.nodes, x) - 1
        if x == self.nodes[i]:
            return self.left_vals[i - 1]
        x0, x1 = self.nodes[i], self.nodes[i + 1]
        f0, f1 = self.right_vals[i], self.left_vals[i]
        return f0 + (f1 - f0) * (x - x0) / (x1 - x0)

    # -- variation and norms ----------------------------------------------

    def jumps(self) -> list[float]:
        """Jump right_vals[i] - left_vals[i-1] at each interior node."""
        return [
            self.right_vals[i] - self.left_vals[i - 1]
            for i in range(1, len(self.nodes) - 1)
        ]

    @property
    def is_continuous(self) -> bool:
        return all(j == 0.0 for j in self.jumps())

    def total_variation(self) -> float:
        segs = math.fsum(abs(f1 - f0) for _, _, f0, f1 in self.pieces())
        return segs + math.fsum(abs(j) for j in self.jumps())

    def sup_norm(self) -> float:
        return max(abs(v) for v in self.right_vals + self.left_vals)

    def norm_a(self) -> float:
        """Total variation of the derivative part plus the sup norm.

        Defined for continuous (hence absolutely continuous) functions only.
        """
        if not self.is_continuous:
            raise ValueError("norm_a requires a continuous function (no jumps)")
        return self.total_variation() + self.sup_norm()

    # -- exact integrals ---------------------------------------------------

    def integral(self) -> float:
        return math.fsum(0.5 * (f0 + f1) * (x1 - x0) for x0, x1, f0, f1 in self.pieces())

    def square_integral(self) -> float:
        return math.fsum(
            (x1 - x0) * (f0 * f0 + f0 * f1 + f1 * f1) / 3.0
            for x0, x1, f0, f1 in self.pieces()
        )

    def antiderivative(self, x):
        """Integral of f over [0, t] for scalar or ndarray t (exact, piecewise quadratic)."""
        xs = np.asarray(x, dtype=float)
        if np.any(xs < 0.0) or np.any(xs > 1.0):
            raise ValueError("argument must lie in [0, 1]")
        nodes = np.asarray(self.nodes)
        f0 = np.asarray(self.right_vals)
        f1 = np.asarray(self.left_vals)
        widths = np.diff(nodes)
        piece_masses = 0.5 * (f0 + f1) * widths
        prefix = np.concatenate(([0.0], np.cumsum(piece_masses)))
        idx = np.minimum(np.searchsorted(nodes, xs, side="right") - 1, len(widths) - 1)
        t = xs - nodes[idx]
        slope = (f1[idx] - f0[idx]) / widths[idx]
        partial = f0[idx] * t + 0.5 * slope * t * t
        out = prefix[idx] + partial
        return float(out) if np.ndim(x) == 0 else out

    # -- construction helpers ----------------------------------------------

    def refined(self, x: float) -> "BVFunction":
        """Insert an extra node at x on a linear piece; same function."""
        x = float(x)
        if not 0.0 < x < 1.0:
            raise ValueError("refinement node must be interior")
        if x in self.nodes:
            return self
        i = bisect_right(self.nodes, x) - 1
        v = self.value(x)
        nodes = self.nodes[: i + 1] + (x,) + self.nodes[i + 1 :]
        right = self.right_vals[: i + 1] + (v,) + self.right_vals[i + 1 :]
        left = self.left_vals[:i] + (v,) + self.left_vals[i:]
        return BVFunction(nodes, right, left, name=self.name)

    def scaled(self, c: float, name: str | None = None) -> "BVFunction":
        c = float(c)
        return BVFunction(
            self.nodes,
            tuple(c * v for v in self.right_vals),
            tuple(c * v for v in self.left_vals),
            name=name or f"{c}*{self.name}",
        )

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "left": list(self.left_vals),
            "right": list(self.right_vals),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict, name: str = "custom") -> "BVFunction":
        return cls(
            tuple(data["nodes"]),
            tuple(data["right"]),
            tuple(data["left"]),
            name=name,
        )

    @classmethod
    def from_json(cls, text: str, name: str = "custom") -> "BVFunction":
        return cls.from_json_dict(json.loads(text), name=name)


def linear_combination(alpha: float, f: BVFunction, beta: float, g: BVFunction,
                       name: str = "combination") -> BVFunction:
    """alpha*f + beta*g on the merged node set (one-sided limits add)."""
    nodes = sorted(set(f.nodes) | set(g.nodes))
    right = tuple(
        alpha * f.right_limit(x) + beta * g.right_limit(x) for x in nodes[:-1]
    )
    left = tuple(
        alpha * f.left_limit(x) + beta * g.left_limit(x) for x in nodes[1:]
    )
    return BVFunction(tuple(nodes), right, left, name=name)


def from_samples(nodes, values, name: str = "custom") -> BVFunction:
    """Continuous piecewise-linear interpolant of point samples."""
    values = [float(v) for v in values]
    if len(values) != len(nodes):
        raise ValueError("need one value per node")
    return BVFunction(tuple(nodes), tuple(values[:-1]), tuple(values[1:]), name=name)


def step(position: float, low: float = 0.0, high: float = 1.0, name: str = "step") -> BVFunction:
    """Right-continuous step: `low` before `position`, `high` from it on."""
    position = float(position)
    if not 0.0 < position < 1.0:
        raise ValueError("step position must be interior")
    return BVFunction(
        (0.0, position, 1.0),
        (low, high),
        (low, high),
        name=name,
    )


def plateau(n: int, i: int) -> BVFunction:
    """Ramp function: 0 on [0, i/n], 1 on [(i+1)/n, 1], linear between.

    Continuous with total variation 1 and norm_a exactly 2.
    """
    if not isinstance(n, (int, np.integer)) or not isinstance(i, (int, np.integer)):
        raise ValueError("plateau parameters must be integers")
    n = int(n)
    i = int(i)
    if n < 2 or not 1 <= i < n:
        raise ValueError(f"plateau requires 1 <= i < n, got n={n}, i={i}")
    lo = i / n
    hi = (i + 1) / n
    xs = [0.0, lo, hi, 1.0]
    vals = [0.0, 0.0, 1.0, 1.0]
    if hi == 1.0:
        xs.pop()
        vals.pop()
    return from_samples(xs, vals, name=f"plateau({n},{i})")


def catalog() -> dict[str, BVFunction]:
    """Named corpus of test functions with known total variation."""
    saw_nodes = [k / 8 for k in range(9)]
    saw_vals = [k % 2 for k in range(9)]
    return {
        "const1": from_samples([0.0, 1.0], [1.0, 1.0], name="const1"),
        "identity": from_samples([0.0, 1.0], [0.0, 1.0], name="identity"),
        "step13": step(1.0 / 3.0, name="step13"),
        "hat": from_samples([0.0, 0.5, 1.0], [0.0, 1.0, 0.0], name="hat"),
        "saw8": from_samples(saw_nodes, saw_vals, name="saw8"),
        "stair3": BVFunction(
            (0.0, 0.25, 0.5, 0.75, 1.0),
            (0.0, 1.0, 2.0, 3.0),
            (0.0, 1.0, 2.0, 3.0),
            name="stair3",
        ),
    }


#: Exact total variation of each catalog entry, for reference and testing.
CATALOG_VARIATION = {
    "const1": 0.0,
    "identity": 1.0,
    "step13": 1.0,
    "hat": 2.0,
    "saw8": 8.0,
    "stair3": 3.0,
}
