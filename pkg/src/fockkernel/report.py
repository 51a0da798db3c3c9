"""Serialized reports: atomic JSON/CSV writers and matplotlib figure rendering.

JSON floats use Python's shortest round-trip repr (bit-faithful on re-parse);
CSV floats are printed with 17 significant digits.  Reports never embed
timestamps or absolute paths, so reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import json
import os
import tempfile

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SCHEMA_VERSION = 1


def fmt17(x) -> str:
    """17-significant-digit float formatting for delimited output."""
    return "%.17g" % float(x)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON-serializable: {type(o)}")


def _write_atomic(path, data: bytes):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_report(path, report: dict):
    """Write the report atomically (temp file in the same directory + rename)."""
    payload = {"schema_version": SCHEMA_VERSION, **report}
    text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    _write_atomic(path, text.encode("utf-8"))
    return payload


def write_csv(path, header, rows):
    """Comma-delimited output; floats via fmt17, everything else via str."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, bool):
                cells.append("true" if cell else "false")
            elif isinstance(cell, (float, np.floating)):
                cells.append(fmt17(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    _write_atomic(path, ("\n".join(lines) + "\n").encode("utf-8"))


def json_error(exc: Exception) -> str:
    return json.dumps(
        {"error": {"type": type(exc).__name__, "message": str(exc)}},
        default=_json_default,
    )


# -- figures ---------------------------------------------------------------


def plot_spectrum(path, eigenvalues, tolerance=None, title="eigenvalue spectrum"):
    """Sorted eigenvalues on a symlog axis with the tolerance floor marked."""
    eigs = np.sort(np.asarray(eigenvalues, dtype=float))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(np.arange(1, eigs.size + 1), eigs, "o-", ms=4, lw=1)
    ax.axhline(0.0, color="gray", lw=0.8)
    if tolerance is not None and np.isfinite(tolerance):
        ax.axhline(tolerance, color="tab:red", lw=0.8, ls="--", label=f"tol = {tolerance:.2e}")
        ax.legend(loc="best", fontsize=8)
    scale = float(np.max(np.abs(eigs))) if eigs.size else 1.0
    ax.set_yscale("symlog", linthresh=max(1e-16, scale * 1e-14))
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_fit(path, x, f, model):
    """Target vs model plus the pointwise absolute error (1-d grids only)."""
    x = np.asarray(x, dtype=float).ravel()
    f = np.asarray(f, dtype=float)
    model = np.asarray(model, dtype=float)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 5.5), sharex=True)
    ax1.plot(x, f, lw=1.5, label="target")
    ax1.plot(x, model, lw=1.0, ls="--", label="model")
    ax1.set_ylabel("value")
    ax1.legend(loc="best", fontsize=8)
    err = np.abs(model - f)
    ax2.semilogy(x, np.maximum(err, 1e-18), lw=1.0, color="tab:red")
    ax2.set_xlabel("x")
    ax2.set_ylabel("|model - target|")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_embedding_check(path, word_lengths, dist_sqs):
    """Pairwise ||Phi(g)-Phi(h)||^2 against |h^-1 g|; everything must sit on y = x."""
    lengths = np.asarray(word_lengths)
    d2 = np.asarray(dist_sqs)
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    lim = max(1, int(lengths.max()) if lengths.size else 1)
    ax.plot([0, lim], [0, lim], color="gray", lw=0.8, label="y = x")
    ax.plot(lengths, d2, "o", ms=4, alpha=0.6)
    ax.set_xlabel("word length |h$^{-1}$g|")
    ax.set_ylabel("embedding distance$^2$")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_separation(path, values):
    """Separating-functional values in the complex plane."""
    v = np.asarray(values, dtype=complex)
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.plot(v.real, v.imag, "o", ms=6)
    for i, z in enumerate(v):
        ax.annotate(str(i), (z.real, z.imag), fontsize=8, xytext=(3, 3), textcoords="offset points")
    ax.set_xlabel("Re psi")
    ax.set_ylabel("Im psi")
    ax.set_title("separating functional values")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
