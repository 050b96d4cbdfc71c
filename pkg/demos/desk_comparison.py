"""Direct MKdV run at desk scale compared with the asymptotic solution.

c = 1, L = 512, n = 8192, eps = 0.5, slices at t = 20 and 40, with the
seam absorber enabled.  Takes about two minutes.

    python3 demos/desk_comparison.py
"""

import time

from mkdvshock.oracle import (
    GridSpec,
    compare_envelope,
    compare_wavelength,
    solve_mkdv,
    window_max_abs,
    window_mean,
)

grid = GridSpec(t_end=40.0, absorber=True)
limit = 0.6 * grid.half_length
start = time.perf_counter()
for s in solve_mkdv(1.0, grid, eps=0.5, snapshots=[20.0, 40.0]):
    env = compare_envelope(s, 1.0, limit=limit)
    lam = compare_wavelength(s, 1.0, limit=limit)
    print(f"t={s.t:g}  ({time.perf_counter() - start:.0f}s)")
    print(f"  plateau mean on (-6t-40, -6t-10): {window_mean(s, (-6 * s.t - 40, -6 * s.t - 10)):.5f}")
    print(f"  envelope error: median {env.median:.3%}, max {env.max:.3%} over {len(env.errors)} extrema")
    print(f"  wavelength error: median {lam.median:.3%}, max {lam.max:.3%}")
    print(f"  max |q| for x in (170, {limit:g}): {window_max_abs(s, (170, limit)):.3e}")
