"""Render a few Julia sets and the two McMullen parameter planes into ./gallery.

Images are binary PPM with a JSON sidecar describing the window and overlay.
"""

import sys
from pathlib import Path

from juliasym.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "gallery")
out.mkdir(exist_ok=True)

JULIA = {
    "circle": "z^2",
    "rabbit": "z^2-0.12+0.75i",
    "cantor_circles": "mcmullen(2,2,0.1)",
    "dihedral": "mcmullen(2,2,1)",
    "cyclic3": "mcmullen(2,1,0.5)",
}

for name, spec in JULIA.items():
    main(["render-julia", "--map", spec, "--res", "400x400", "--out", str(out / f"{name}.ppm")])

# Newton's method: infinity is not superattracting, so only basins are coloured
main(["render-julia", "--map", "newton(z^3+1)", "--escape-radius", "inf", "--window", "0,0,3",
      "--res", "400x400", "--out", str(out / "newton.ppm")])

# m = d = 2 gets the |lambda| = 1 circle overlay, m = 2, d = 1 does not
main(["render-param", "--m", "2", "--d", "2", "--window", "0,0,2.5", "--res", "400x400",
      "--out", str(out / "param_22.ppm")])
main(["render-param", "--m", "2", "--d", "1", "--window", "0,0,2.5", "--res", "400x400",
      "--out", str(out / "param_21.ppm")])
