"""Figure and table output for the family separation diagnostic.

Plots the removal stage of the final node across growing size classes for
both family kinds: flat for E (pinned by the anchor), linear in the largest
size for U.  Writes a delimited table next to the figure.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .tripleu import FamilyConfig, gen_family, placement_stage


def separation_rows(anchor: int, sizes: list[int], mult: int) -> list[dict]:
    rows = []
    for s in sizes:
        for kind in ("E", "U"):
            fam = gen_family(FamilyConfig(kind, (anchor, s), mult))
            rows.append({"kind": kind, "anchor": anchor, "size": s,
                         "multiplicity": mult,
                         "final_node_stage": placement_stage(fam, fam.final_label)})
    return rows


def family_separation_report(anchor: int, sizes: list[int], mult: int,
                             out_dir: str) -> list[str]:
    rows = separation_rows(anchor, sizes, mult)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "separation.csv")
    with open(csv_path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["kind", "anchor", "size",
                                          "multiplicity", "final_node_stage"])
        w.writeheader()
        w.writerows(rows)

    fig, ax = plt.subplots(figsize=(6, 4))
    for kind, marker in (("E", "o"), ("U", "s")):
        xs = [r["size"] for r in rows if r["kind"] == kind]
        ys = [r["final_node_stage"] for r in rows if r["kind"] == kind]
        ax.plot(xs, ys, marker=marker, label=f"{kind} family")
    ax.set_xlabel("largest chain length")
    ax.set_ylabel("final-node removal stage")
    ax.set_title(f"final-node stage vs size (anchor {anchor}, x{mult})")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    png_path = os.path.join(out_dir, "separation.png")
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return [csv_path, png_path]
