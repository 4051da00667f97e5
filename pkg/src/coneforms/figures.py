"""Matplotlib renderings saved next to the delimited report output."""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .cones import Link
from .smooth import RadialFunction, TangentCone

_SAVE_OPTS = {"dpi": 130, "bbox_inches": "tight", "metadata": {}}


def _finish(fig, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path


def homology_figure(ranks: dict, path: str, title: str) -> str:
    """Grouped bars of per-degree ranks, one group per labelled rank vector."""
    fig, ax = plt.subplots(figsize=(6, 3.2))
    labels = list(ranks)
    degrees = max(len(v) for v in ranks.values())
    width = 0.8 / max(len(labels), 1)
    for k, label in enumerate(labels):
        xs = [p + k * width for p in range(degrees)]
        ax.bar(xs, ranks[label], width=width, label=label)
    ax.set_xticks([p + 0.4 - width / 2 for p in range(degrees)])
    ax.set_xticklabels([str(p) for p in range(degrees)])
    ax.set_xlabel("form degree")
    ax.set_ylabel("rank")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def link_figure(link: Link, tc: TangentCone | None, path: str) -> str:
    """Height profile of the link over the angle, with flat rays marked."""
    fig = plt.figure(figsize=(8, 3.2))
    ax0 = fig.add_subplot(1, 2, 1)
    ax1 = fig.add_subplot(1, 2, 2, projection="polar")
    phis = np.linspace(0.0, 2.0 * math.pi, 720)
    points = link.direction_samples(phis)
    if link.ambient_dim >= 3:
        ax0.plot(phis, points[:, 2], lw=1.5)
        ax0.set_ylabel("height z")
    else:
        ax0.plot(phis, np.zeros_like(phis), lw=1.5)
        ax0.set_ylabel("height z (planar link)")
    ax0.set_xlabel("angle")
    ax0.axhline(0.0, color="gray", lw=0.6)
    ax0.set_title(link.name)
    radial = np.hypot(points[:, 0], points[:, 1])
    ax1.plot(phis, radial, lw=1.2)
    if tc is not None and not tc.flat_everywhere:
        for phi in tc.flat_angles:
            ax1.plot([phi, phi], [0, 1], color="crimson", lw=1.0)
    elif tc is not None:
        ax1.fill_between(phis, 0, radial, color="crimson", alpha=0.15)
    ax1.set_title("flat rays" if tc is not None else "horizontal radius")
    return _finish(fig, path)


def bump_figure(bump: RadialFunction, chi: RadialFunction, eps: float,
                path: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 3.2))
    rs = np.linspace(0.0, eps * 1.2, 1200)
    ax.plot(rs, bump(rs), label=bump.label)
    ax.plot(rs, chi(rs), label=chi.label, ls="--")
    for k in range(1, 5):
        ax.axvline(k * eps / 5.0, color="gray", lw=0.5)
    ax.axvline(eps, color="black", lw=0.8)
    ax.set_xlabel("radius")
    ax.set_ylim(-0.05, 1.05)
    ax.legend(fontsize=8)
    ax.set_title("apex bump and plateau profile")
    return _finish(fig, path)


def partition_figure(functions: list[RadialFunction], radius: float,
                     path: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 3.2))
    rs = np.linspace(0.0, radius * 0.999, 1200)
    total = np.zeros_like(rs)
    for f in functions:
        vals = f(rs)
        total = total + vals
        ax.plot(rs, vals, lw=1.0, label=f.label)
    ax.plot(rs, total, lw=1.5, color="black", label="sum")
    ax.set_xlabel("radius")
    ax.set_ylim(-0.05, 1.1)
    ax.legend(fontsize=7)
    ax.set_title("partition of unity")
    return _finish(fig, path)


def membership_figure(decisions: dict, theta, path: str) -> str:
    """Bidegree lattice: accepted (filled) vs rejected (open) probes."""
    fig, ax = plt.subplots(figsize=(5, 4))
    for (a, b), accepted in decisions.items():
        color = "tab:blue" if accepted else "white"
        ax.scatter([b], [a], s=60, facecolors=color, edgecolors="tab:blue",
                   zorder=3)
    top = max(a for a, _ in decisions) + 1
    ax.plot([0, top], [0, top], color="gray", lw=0.7)
    ax.set_xlabel("Fourier mode b")
    ax.set_ylabel("radial exponent a")
    ax.set_title(f"smooth membership, theta = {theta}")
    ax.set_xlim(-0.5, top)
    ax.set_ylim(-0.5, top)
    return _finish(fig, path)
