#!/usr/bin/env python3
"""Sweep the lattice convergence study over a grid of exponents and sizes.

Emits one combined CSV on stdout; columns match the `asymptotics`
subcommand plus a leading p column.  Example:

    python scripts/convergence_table.py --p-list 1,2,4,inf --n-list 100,1000,10000
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from eigencond.extremal import convergence_study
from eigencond.lattice import first_n_lattice_points


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p-list", default="1,2,4,inf",
                        help="comma-separated exponents (inf allowed)")
    parser.add_argument("--n-list", default="100,1000,10000",
                        help="comma-separated configuration sizes")
    args = parser.parse_args()

    p_values = [float(tok) for tok in args.p_list.split(",") if tok.strip()]
    n_values = sorted({int(tok) for tok in args.n_list.split(",") if tok.strip()})

    # one shared configuration per n across all p values
    configs = {n: first_n_lattice_points(n) for n in n_values}

    print("p,n,raw,scale,ratio,target,rel_deviation")
    for p in p_values:
        rows = convergence_study(p, n_values, generator=lambda n: configs[n])
        for row in rows:
            deviation = abs(row.ratio - row.target) / row.target
            print(f"{p!r},{row.n},{row.raw!r},{row.scale!r},{row.ratio!r},"
                  f"{row.target!r},{deviation!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
