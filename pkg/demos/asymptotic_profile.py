"""Leading-order profile q(x, t) at t = 40 for c = 1, with modulation constants.

Writes ``profile_t40.csv`` and ``profile_t40.svg`` into the current
directory and prints a few rows of the modulation table.

    python3 demos/asymptotic_profile.py
"""

import sys

import numpy as np

from mkdvshock.modulation import modulation_table, write_modulation_table
from mkdvshock.wavefield import q_asymptotic, write_profile, write_profile_svg

t = 40.0
xs = np.linspace(-300.0, 200.0, 1201)
samples = [q_asymptotic(float(x), t) for x in xs]
with open("profile_t40.csv", "w") as fh:
    write_profile(samples, fh)
with open("profile_t40.svg", "w") as fh:
    write_profile_svg(samples, fh)

write_modulation_table(modulation_table(np.linspace(-0.45, 0.3, 6)), sys.stdout)
counts = {}
for s in samples:
    counts[s.region.tag.value] = counts.get(s.region.tag.value, 0) + 1
print("samples per region:", counts)
