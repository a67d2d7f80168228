"""Amplitude damping: noise with no known optimum.

No closed-form optimum is known for this non-unital noise, so the optimizer
runs in exploratory mode. It finds protocols that beat both doing nothing
and measuring, so here the best correction is not one of the classical
strategies.
"""

from noisegate import OptimizerConfig, amplitude_damping, certify_upper_bound, optimize

cfg = OptimizerConfig(n_outcomes=2, kraus_rank=2, restarts=8)
print(f"{'gamma':>6} {'do nothing':>11} {'measure':>8} {'optimizer':>10}  status")
for gamma in (0.1, 0.3, 0.5, 0.7, 0.9):
    n = amplitude_damping(gamma)
    res = optimize(n, cfg)
    rep = certify_upper_bound(n, res)
    b = rep.baselines
    print(f"{gamma:6.1f} {b['do_nothing']:11.5f} {b['discriminate_reprepare']:8.5f} "
          f"{res.best_fbar:10.5f}  {rep.status}")
