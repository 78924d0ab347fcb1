"""Example of plotting catbell CSV output with matplotlib (documentation only).

    catbell run --config configs/bell_q3.cfg --out out/bell_q
    python3 scripts/plot_example.py out/bell_q/q_cat_ta1.570796_tb0.785398.csv q.png
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def load_long_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    xs, ys = np.unique(data[:, 0]), np.unique(data[:, 1])
    return xs, ys, data[:, 2].reshape(xs.size, ys.size)


def main(src, dst):
    with open(src) as fh:
        header = fh.readline().strip().split(",")
    fig, ax = plt.subplots(figsize=(5, 4))
    if len(header) == 2:
        x, y = np.loadtxt(src, delimiter=",", skiprows=1, unpack=True)
        ax.plot(x, y, marker="o")
    else:
        xs, ys, v = load_long_csv(src)
        cs = ax.contourf(xs, ys, v.T, levels=30)
        fig.colorbar(cs, ax=ax)
    ax.set_xlabel(header[0])
    ax.set_ylabel(header[1])
    fig.tight_layout()
    fig.savefig(dst, dpi=120)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "plot.png")
