#!/usr/bin/env python3
"""Render the CSV reports emitted by the polarcomp CLI.

Usage:
  plot_results.py cdf out.png file.csv            value,cum_fraction columns
  plot_results.py polarize out.png file.csv       one CDF line per output index
  plot_results.py lines out.png file.csv x y...   arbitrary columns, x then ys
"""

import csv
import sys


def read_table(path):
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows


def column(header, rows, name):
    i = header.index(name)
    return [r[i] for r in rows]


def main():
    if len(sys.argv) < 4:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    mode, out, path = sys.argv[1], sys.argv[2], sys.argv[3]
    header, rows = read_table(path)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    if mode == "cdf":
        ax.plot(column(header, rows, "value"), column(header, rows, "cum_fraction"))
        ax.set_xlabel("value")
        ax.set_ylabel("cumulative fraction")
    elif mode == "polarize":
        outputs = sorted({r[header.index("output")] for r in rows})
        for o in outputs:
            sel = [r for r in rows if r[header.index("output")] == o]
            ax.plot([r[header.index("value")] for r in sel],
                    [r[header.index("cum_fraction")] for r in sel],
                    label=f"output {int(o)}")
        ax.set_xlabel("time")
        ax.set_ylabel("cumulative fraction")
        ax.legend()
    elif mode == "lines":
        if len(sys.argv) < 6:
            print("lines mode needs x and at least one y column", file=sys.stderr)
            return 2
        x = column(header, rows, sys.argv[4])
        for name in sys.argv[5:]:
            ax.plot(x, column(header, rows, name), label=name)
        ax.set_xlabel(sys.argv[4])
        ax.legend()
    else:
        print(f"unknown mode: {mode}", file=sys.stderr)
        return 2
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
