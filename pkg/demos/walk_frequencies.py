"""
Visit frequencies of random walks
=================================

How often does a simple random walk on Z sit in 3Z? The quotient chain on
Z/3 answers exactly; Monte Carlo agrees to within three standard errors.
The same machinery checks the mass transport identity for marks on Z.
"""

from cberlab.groups import Z
from cberlab.walks import (IidMarks, NonnegativeMarks, ResidueClass, TransportConfig, WalkConfig,
                           freq_estimate, mass_transport_check, quotient_frequency, sample_walk,
                           successor_transport, visit_profile)

cfg = WalkConfig(Z, steps=200_000, seed=7)
target = ResidueClass(3)
est = freq_estimate(target, cfg, walks=20)
exact = quotient_frequency(target, cfg)
print(f"3Z: estimate {est.estimate:.5f} +- {est.se:.5f}, exact {exact}, within 3 SE: {est.within(float(exact))}")

# The plain walk alternates parity, so the evens are visited exactly half the
# time in Cesaro average anyway; the lazy walk is aperiodic as well.
lazy = WalkConfig(Z, steps=200_000, seed=7, lazy=0.5)
print("lazy walk, evens:", round(freq_estimate(ResidueClass(2), lazy, 20).estimate, 5))

# Visit profiles: top-k class counts are subadditive along the walk.
path = sample_walk(WalkConfig(Z, steps=50_000, seed=3))
vp = visit_profile(lambda pts: pts % 4, path, K=4, splits=20_000)
print("F^n_k:", vp.F, " subadditivity violations:", vp.subadditivity_violations)

# Mass transport: each marked point sends mass 1 to the next marked point on its right.
good = mass_transport_check(IidMarks(0.5), successor_transport, TransportConfig(samples=200_000))
print(f"iid marks: out {good.lhs:.4f}, in {good.rhs:.4f}, verdict {good.verdict}")

# Marks only on the nonnegative half-line are not shift invariant; the
# pre-test notices and the two sides disagree.
bad = mass_transport_check(NonnegativeMarks(0.5), successor_transport, TransportConfig(samples=200_000))
print(f"half-line marks: out {bad.lhs:.4f}, in {bad.rhs:.4f}, verdict {bad.verdict}")
print("warning:", bad.warnings[0])
