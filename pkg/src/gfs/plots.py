"""Figure rendering for CLI reports.

Each report kind gets a single PNG next to its CSV.  Rendering is optional
(the CLI only calls in with --plot) and deterministic: fixed size, fixed dpi,
fixed PNG metadata, no timestamps.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE_KW = {"dpi": 150, "metadata": {"Software": "gfs"}}


def _column(columns, rows, name):
    i = columns.index(name)
    return [row[i] for row in rows]


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def _series_plot(columns, rows, xcol, ycol, title, logx=False, logy=False):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    xs = _column(columns, rows, xcol)
    pairs = [(x, y) for x, y in zip(xs, _column(columns, rows, ycol)) if y is not None]
    if pairs:
        ax.plot([p[0] for p in pairs], [p[1] for p in pairs], marker="o", ms=3, lw=1)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xcol)
    ax.set_ylabel(ycol)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return fig


def _render_coeffs(columns, rows, meta):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ns = _column(columns, rows, "n")
    cs = np.abs(np.array(_column(columns, rows, "coefficient"), dtype=float))
    positive = cs > 0
    ax.semilogy(np.array(ns)[positive], cs[positive], ls="none", marker="o", ms=3)
    ax.set_xlabel("n")
    ax.set_ylabel("|coefficient|")
    ax.set_title(f"Fourier coefficients: {meta['params'].get('function')} / {meta['params'].get('system')}")
    ax.grid(alpha=0.3)
    return fig


def _render_gram(columns, rows, meta):
    N = int(meta["params"]["N"])
    M = np.zeros((N, N))
    for i, j, v in rows:
        M[i - 1, j - 1] = v
    dev = np.abs(M - np.eye(N))
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    im = ax.imshow(dev, origin="lower", extent=(0.5, N + 0.5, 0.5, N + 0.5))
    fig.colorbar(im, ax=ax, label="|entry - identity|")
    ax.set_xlabel("j")
    ax.set_ylabel("i")
    ax.set_title(f"Gram deviation: {meta['params'].get('system')}")
    return fig


def _render_subseq(columns, rows, meta):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ks = np.array(_column(columns, rows, "k"), dtype=float)
    ws = np.array(_column(columns, rows, "witness"), dtype=float)
    ax.loglog(ks, ws, ls="none", marker="o", ms=4, label="sup |F_{n_k}|")
    ax.loglog(ks, 1.0 / ks**2, lw=1, label="1/k^2")
    ax.set_xlabel("k")
    ax.set_ylabel("sup of |prefix integral|")
    ax.set_title(f"Subsequence witnesses: {meta['params'].get('system')}")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    return fig


def _render_plateau(columns, rows, meta):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    xs = _column(columns, rows, "node")
    rights = _column(columns, rows, "right")
    lefts = _column(columns, rows, "left")
    for i in range(len(xs) - 1):
        ax.plot([xs[i], xs[i + 1]], [rights[i], lefts[i + 1]], color="C0", lw=1.5)
    ax.set_xlabel("x")
    ax.set_ylabel("f(x)")
    ax.set_title(f"plateau(n={meta['params'].get('n')}, i={meta['params'].get('i')})")
    ax.grid(alpha=0.3)
    return fig


def _render_lemma(columns, rows, meta):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    residuals = np.abs(np.array(_column(columns, rows, "residual"), dtype=float))
    floor = 1e-18
    ax.semilogy(np.arange(1, len(residuals) + 1), np.maximum(residuals, floor),
                ls="none", marker="o", ms=3)
    ax.set_xlabel("case")
    ax.set_ylabel("|residual|")
    ax.set_title(f"Decomposition residuals, grid n={meta['params'].get('n')}")
    ax.grid(alpha=0.3)
    return fig


def _render_un(columns, rows, meta):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ns = np.array(_column(columns, rows, "n"), dtype=float)
    us = np.abs(np.array(_column(columns, rows, "U"), dtype=float))
    gs = np.array(_column(columns, rows, "G"), dtype=float)
    ts = np.array(_column(columns, rows, "T"), dtype=float)
    ax.plot(ns, us, marker="o", ms=4, label="|pairing|")
    with np.errstate(divide="ignore", invalid="ignore"):
        ax.plot(ns, gs / ts, marker="s", ms=4, label="G/T")
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_title("Pairing functional sweep")
    ax.legend()
    ax.grid(alpha=0.3)
    return fig


def render(command: str, columns, rows, meta: dict, path: str) -> None:
    title = f"{command}: {meta['params'].get('system', '')}"
    if command == "coeffs":
        fig = _render_coeffs(columns, rows, meta)
    elif command == "gram":
        fig = _render_gram(columns, rows, meta)
    elif command == "decay":
        fig = _series_plot(columns, rows, "n", "n_times_sup", title, logx=True)
    elif command == "ratio":
        fig = _series_plot(columns, rows, "n", "ratio", title, logx=True)
    elif command == "logsum":
        fig = _series_plot(columns, rows, "n", "S", title, logx=True)
    elif command == "converge":
        fig = _series_plot(columns, rows, "n", "cauchy_gap", title, logx=True, logy=True)
    elif command == "parseval":
        fig = _series_plot(columns, rows, "n", "prefix", title, logx=True)
        fig.axes[0].axhline(float(meta["params"]["x"]), color="C3", lw=1, ls="--")
    elif command == "subseq":
        fig = _render_subseq(columns, rows, meta)
    elif command == "plateau":
        fig = _render_plateau(columns, rows, meta)
    elif command == "lemma":
        fig = _render_lemma(columns, rows, meta)
    elif command == "un":
        fig = _render_un(columns, rows, meta)
    else:  # fall back to the first two columns
        fig = _series_plot(columns, rows, columns[0], columns[1], title)
    _finish(fig, path)
