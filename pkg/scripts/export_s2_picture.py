#!/usr/bin/env python3
"""Export the full 2x2 cone picture as CSV files.

Writes cone cross-sections (affine vs translation for a few openings,
plus the half-space plane) at a chosen base point, and a family of
constant-determinant hyperboloid leaves.  Plot with any tool that reads
x,y,z columns.
"""

import argparse
from pathlib import Path

from spdorders import (
    cone_cross_section,
    half_space_affine,
    hyperboloid_leaf,
    phi,
    quadratic_affine,
    quadratic_translation,
    spd_validate,
)
from spdorders.io import leaf_filename, read_matrix_file, section_filename, write_rows_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="out_s2")
    parser.add_argument("--at", default=None, help="base point matrix document (default diag(2, 1))")
    parser.add_argument("--resolution", type=int, default=128)
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    base = spd_validate(read_matrix_file(args.at) if args.at else [[2.0, 0.0], [0.0, 1.0]])
    point = phi(base)

    specs = [quadratic_affine(mu, 2) for mu in (0.5, 1.0, 1.5)]
    specs += [quadratic_translation(mu, 2) for mu in (0.5, 1.0, 1.5)]
    specs.append(half_space_affine(2))
    for spec in specs:
        section = cone_cross_section(spec, point, args.resolution)
        path = outdir / section_filename(spec)
        write_rows_csv(path, section, header=("dx", "dy", "dz"))
        print(f"wrote {path}")

    for c in (0.0, 1.0, 2.0, 4.0):
        grid = hyperboloid_leaf(c, args.resolution)
        path = outdir / leaf_filename(c)
        write_rows_csv(path, grid.reshape(-1, 3), header=("x", "y", "z"))
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
