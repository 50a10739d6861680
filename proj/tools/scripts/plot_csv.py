#!/usr/bin/env python3
"""Render sdpp CSV output (trajectory, ensemble or sweep index) to PNG."""

import argparse
import csv
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_rows(path):
    with open(path, newline="") as handle:
        lines = [line for line in handle if not line.startswith("#")]
    return list(csv.DictReader(lines))


def plot_trajectory(ax, rows, label=""):
    t = [float(r["t"]) for r in rows]
    for species in "xyz":
        ax.plot(t, [float(r[species]) for r in rows], label=f"{species}{label}")


def plot_ensemble(ax, rows):
    t = [float(r["t"]) for r in rows]
    for species in "xyz":
        ax.plot(t, [float(r[f"q500_{species}"]) for r in rows], label=f"median {species}")
        ax.fill_between(
            t,
            [float(r[f"q025_{species}"]) for r in rows],
            [float(r[f"q975_{species}"]) for r in rows],
            alpha=0.25,
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", type=pathlib.Path)
    parser.add_argument("-o", "--output", type=pathlib.Path)
    args = parser.parse_args()

    fig, ax = plt.subplots(figsize=(8, 4.5))
    rows = read_rows(args.csv)
    header = rows[0].keys() if rows else []
    if "file" in header:
        for row in rows:
            if row["status"] == "ok":
                plot_trajectory(ax, read_rows(args.csv.parent / pathlib.Path(row["file"]).name), f" ({row['value']})")
    elif "q500_x" in header:
        plot_ensemble(ax, rows)
    else:
        plot_trajectory(ax, rows)
    ax.set_xlabel("t (days)")
    ax.set_ylabel("population")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output or args.csv.with_suffix(".png"), dpi=120)


if __name__ == "__main__":
    main()
