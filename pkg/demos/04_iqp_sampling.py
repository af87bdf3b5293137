"""
Random IQP instances on a chain
===============================

All-to-all ZZ couplings are brought onto a line with an odd-even SWAP network.
Two schedule shapes are built: one with the X field always on everywhere, and
one where the field can be switched off on every other qubit during SWAPs.
"""

import numpy as np

from vzmodel.simulate import output_distribution, run_schedule, tvd
from vzmodel.supremacy import compile_alternating, compile_homogeneous, gen_iqp, iqp_distribution

for n in range(3, 7):
    inst = gen_iqp(n, seed=n)
    hom, _ = compile_homogeneous(inst)
    alt, _ = compile_alternating(inst)
    print(f"n={n}: {len(hom)} layers (40n+10={40 * n + 10}), "
          f"{len(alt)} layers (28n+10={28 * n + 10})")

inst = gen_iqp(4, seed=7)
p = iqp_distribution(inst)
for build in (compile_homogeneous, compile_alternating):
    sched, report = build(inst)
    q = output_distribution(run_schedule(sched))
    print(f"{report.details['variant']}: TVD {tvd(p, q):.1e}, categories {report.per_category}")

# draw a few samples from the exact distribution
rng = np.random.default_rng(0)
print("samples:", [format(int(s), "04b")[::-1] for s in rng.choice(len(p), size=8, p=p)])
