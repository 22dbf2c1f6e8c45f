"""Plot campaign CSV output against link utilization.

usage: python3 scripts/plot.py results.csv [out.png]
"""

import sys

import matplotlib.pyplot as plt
import pandas as pd

PANELS = [
    ("p_establish", "establishment probability"),
    ("relaxations", "relaxations per search"),
    ("connection_length", "connection length (km)"),
    ("connection_slices", "slices per connection"),
]


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__.strip())
    rows = pd.read_csv(sys.argv[1])
    out = sys.argv[2] if len(sys.argv) > 2 else "campaign.png"
    fig, axes = plt.subplots(2, 2, figsize=(11, 8))
    for ax, (column, label) in zip(axes.flat, PANELS):
        for (router, policy), group in rows.groupby(["router", "policy"]):
            group = group.sort_values("lambda")
            ax.plot(group["utilization"], group[column], marker=".", label=f"{router}/{policy}")
        ax.set_xlabel("utilization")
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
    axes.flat[0].legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
