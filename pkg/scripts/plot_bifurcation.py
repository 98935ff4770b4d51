"""
Draws the diagram written by ``rcpdyn bifurcate``: cycle extrema against the
gain, plus every phase portrait found next to it.

    python scripts/plot_bifurcation.py sweep.csv sweep.png
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from rcp_dynamics.emitters import read_csv  # noqa: E402

COLORS = {'converged': 'tab:green', 'limit-cycle': 'tab:blue', 'diverged': 'tab:red'}


def _float(text: str) -> float:
    return float(text) if text else float('nan')


def plot_bifurcation(path: str, save_path: str) -> None:
    _, rows = read_csv(path)
    portraits = sorted(Path(path).parent.glob(Path(path).name + '.phase-*.csv'))

    fig, axes = plt.subplots(1, 2 if portraits else 1, figsize=(13 if portraits else 7, 5), squeeze=False)
    ax = axes[0][0]
    for name, color in COLORS.items():
        selected = [row for row in rows if row[1] == name]
        if not selected:
            continue
        a = [_float(row[0]) for row in selected]
        ax.scatter(a, [_float(row[2]) for row in selected], s=10, color=color, label=name)
        ax.scatter(a, [_float(row[3]) for row in selected], s=10, color=color)
    ax.set_xlabel('a')
    ax.set_ylabel('rate extrema')
    ax.legend()
    ax.grid(True, alpha=0.3)

    if portraits:
        ax = axes[0][1]
        for portrait in portraits:
            header, pairs = read_csv(portrait)
            label = portrait.name[len(Path(path).name) + len('.phase-'):-len('.csv')]
            ax.plot([float(p[0]) for p in pairs], [float(p[1]) for p in pairs], lw=0.8, label=f'a={label}')
        ax.set_xlabel('rate')
        ax.set_ylabel('second coordinate')
        ax.legend()
        ax.grid(True, alpha=0.3)

    plt.tight_layout()
    plt.savefig(save_path, dpi=150, bbox_inches='tight')
    plt.close(fig)


def main():
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument('sweep', help='CSV written by rcpdyn bifurcate')
    parser.add_argument('output', help='image file, format taken from the suffix')
    args = parser.parse_args()
    plot_bifurcation(args.sweep, args.output)


if __name__ == '__main__':
    main()
