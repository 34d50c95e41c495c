"""Figure rendering for the report commands.

Figures land next to the CSV hand-off files; CSV stays the canonical
machine format, the PNGs are for eyeballs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_verification_figure(report, outfile) -> None:
    """Residual convergence (log-log, with an h^2 guide) next to the raw
    invariants against their snapped integers."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))

    hs = np.array([h for h, _ in report.tension_residuals])
    rs = np.array([r for _, r in report.tension_residuals])
    ax1.loglog(hs, rs, "o-", label="residual")
    guide = rs[0] * (hs / hs[0]) ** 2
    ax1.loglog(hs, guide, "k--", alpha=0.5, label=r"$h^2$ guide")
    ax1.set_xlabel("grid spacing h")
    ax1.set_ylabel("max commutator norm")
    ax1.set_title(f"harmonicity residual (order {report.tension_order:.2f})")
    ax1.legend()
    ax1.invert_xaxis()

    names = ["degree", "energy", "e_prime", "e_doubleprime"]
    raw = [report.degree_num, report.energy_num, report.e_prime, report.e_doubleprime]
    snapped = [report.snapped[n] for n in names]
    xs = np.arange(len(names))
    ax2.bar(xs - 0.18, raw, width=0.36, label="quadrature")
    ax2.bar(xs + 0.18, snapped, width=0.36, label="snapped", alpha=0.7)
    ax2.set_xticks(xs, names, rotation=20)
    ax2.errorbar(xs - 0.18, raw, yerr=report.error_est, fmt="none", ecolor="k", capsize=3)
    ax2.set_title("invariants")
    ax2.legend()

    fig.tight_layout()
    fig.savefig(outfile, dpi=140)
    plt.close(fig)


def save_path_figure(path, report, outfile) -> None:
    """Per-step stratum margins and the sampled invariants along the path."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))

    idx = np.arange(len(path.steps))
    margins = np.array([s.flags["index_margin"] for s in path.steps])
    ax1.semilogy(idx, margins, ".-", label="(r+1)-th singular value")
    ax1.axhline(1e-8, color="r", linestyle="--", alpha=0.6, label="threshold")
    ax1.set_xlabel("step")
    ax1.set_ylabel("relative margin")
    ax1.set_title(f"index-{path.r} criterion along the path")
    ax1.legend()

    if report.quadrature:
        qi = [row[0] for row in report.quadrature]
        qd = [row[1] for row in report.quadrature]
        qe = [row[2] for row in report.quadrature]
        ax2.plot(qi, qd, "o-", label="degree")
        ax2.plot(qi, qe, "s-", label="energy")
        k, r = path.k, path.r
        ax2.axhline(k - 2 - r, color="C0", linestyle=":", alpha=0.6)
        ax2.axhline(3 * k - 2 - r, color="C1", linestyle=":", alpha=0.6)
        ax2.set_xlabel("step")
        ax2.set_title("sampled invariants")
        ax2.legend()

    fig.tight_layout()
    fig.savefig(outfile, dpi=140)
    plt.close(fig)


def save_table_figure(rows, outfile) -> None:
    """Critical energy levels against the index, one line per degree."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    by_k: dict = {}
    for d in rows:
        by_k.setdefault(d.k_prime, []).append((d.r, d.energy))
    for kp in sorted(by_k, key=lambda x: (abs(x), x < 0)):
        pts = sorted(by_k[kp])
        ax.plot([r for r, _ in pts], [e for _, e in pts], "o-", label=f"k'={kp}")
    ax.set_xlabel("ramification index r")
    ax.set_ylabel("critical energy")
    ax.set_title("non-minimal energy levels")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(outfile, dpi=140)
    plt.close(fig)
