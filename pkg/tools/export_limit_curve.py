#!/usr/bin/env python3
"""
Export the limit curve of a pair of octagon surface groups as meridian JSON.

Run this script from the project directory:
    python tools/export_limit_curve.py out/limit.json [word_length] [d0,d1,d2,d3]

The right group is the octagon group deformed by the optional four numbers;
the left group is the regular one. The written file loads with
`main.py domain --meridian`.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from engine.errors import AdsError
from engine.mgh_holonomy import FuchsianPair, export_limit_curve, fuchsian_octagon, limit_curve


def export(output_file: str, word_length: int = 6, deformation=(0.0, 0.0, 0.0, 0.0)):
    """Build both groups, sample the equivariant map and write it."""
    pair = FuchsianPair(fuchsian_octagon("left"), fuchsian_octagon("right", deformation))
    curve = limit_curve(pair, word_length)
    path = export_limit_curve(curve, output_file)
    print(f"Created {path} with {len(curve.left)} samples")
    return path


if __name__ == "__main__":
    if len(sys.argv) < 2:
        print("Usage: python export_limit_curve.py OUTPUT.json [word_length] [d0,d1,d2,d3]")
        sys.exit(1)

    length = int(sys.argv[2]) if len(sys.argv) > 2 else 6
    deform = tuple(float(v) for v in sys.argv[3].split(",")) if len(sys.argv) > 3 else (0.0,) * 4
    if len(deform) != 4:
        print(f"Error: expected four deformation parameters, got {len(deform)}")
        sys.exit(1)

    try:
        export(sys.argv[1], length, deform)
    except AdsError as e:
        print(f"Error: {type(e).__name__}: {e}")
        sys.exit(1)
