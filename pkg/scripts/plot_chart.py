"""
Draws a stability chart written by ``rcpdyn chart``.

    python scripts/plot_chart.py chart.csv chart.png
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from rcp_dynamics.emitters import read_csv  # noqa: E402
from rcp_dynamics.management.commands.chart import BOUNDARY_SUFFIX  # noqa: E402


def plot_chart(path: str, save_path: str) -> None:
    header, rows = read_csv(path)
    second_name = header[1]
    a = np.array([float(row[0]) for row in rows])
    second = np.array([float(row[1]) for row in rows])
    stable = np.array([row[2] == 'true' for row in rows])

    fig, ax = plt.subplots(figsize=(7, 5))
    ax.scatter(a[stable], second[stable], s=4, color='tab:green', label='stable')
    ax.scatter(a[~stable], second[~stable], s=4, color='tab:red', alpha=0.3, label='unstable')

    boundary = Path(path + BOUNDARY_SUFFIX)
    if boundary.exists():
        _, points = read_csv(boundary)
        if points:
            ax.plot([float(p[0]) for p in points], [float(p[1]) for p in points], color='black', lw=1.5,
                    label='boundary')

    ax.set_xlabel('a')
    ax.set_ylabel(second_name)
    ax.legend(loc='upper right')
    ax.grid(True, alpha=0.3)
    plt.tight_layout()
    plt.savefig(save_path, dpi=150, bbox_inches='tight')
    plt.close(fig)


def main():
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument('chart', help='CSV written by rcpdyn chart')
    parser.add_argument('output', help='image file, format taken from the suffix')
    args = parser.parse_args()
    plot_chart(args.chart, args.output)


if __name__ == '__main__':
    main()
