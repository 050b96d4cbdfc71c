"""Sign tables of Im theta, Im g_c and Im g (the data behind the figures).

One CSV per phase and xi is written to ``sigtables/``; each holds a header
line with the grid ranges and a matrix of signs (-1, 0, 1), rows in
increasing Im k.

    python3 demos/signature_tables.py
"""

import os

from mkdvshock.phase import signature_grid

os.makedirs("sigtables", exist_ok=True)
cases = [
    ("theta", -1.0),   # plateau region, real axis plus hyperbola
    ("gc", -1.0),      # plateau region
    ("gc", -0.5),      # left edge: two zero curves meet at the origin
    ("g", 0.0),        # elliptic region
]
for which, xi in cases:
    grid = signature_grid(which, xi, 1.0, (-2.0, 2.0), (-2.0, 2.0), (161, 161))
    path = os.path.join("sigtables", f"{which}_xi{xi:+.2f}.csv")
    with open(path, "w") as fh:
        grid.to_csv(fh)
    zeros = int((grid.values == 0).sum())
    print(f"{path}: {zeros} zero nodes of {grid.values.size}")
