"""Depolarizing noise: doing nothing beats measuring until eps = d/(d+1).

Against rho -> (1-eps) rho + eps I/d, the best protocol is either to leave
the state alone (fidelity 1 - eps (d-1)/d) or to measure in a basis and
reprepare the outcome (fidelity 2/(d+1), whatever the noise). The two lines
cross at eps = d/(d+1), where the noise becomes entanglement breaking. The
numerical optimizer, free to use any instrument and recovery, lands on the
same curve and never above it.
"""

from noisegate import OptimizerConfig, depolarizing, is_qcq, optimize, predict_optimum
from noisegate.protocols import discriminate_reprepare, do_nothing
from noisegate.fidelity import protocol_fidelity

for d in (2, 3):
    print(f"\nd = {d}, threshold eps = {d / (d + 1):.4f}")
    print(f"{'eps':>5} {'do nothing':>11} {'measure':>8} {'predicted':>10} {'optimizer':>10}  EB")
    cfg = OptimizerConfig(n_outcomes=d, kraus_rank=d, restarts=6)
    for k in range(0, 11, 2):
        eps = k / 10
        n = depolarizing(d, eps)
        dn = protocol_fidelity(do_nothing(d), n).value
        dr = protocol_fidelity(discriminate_reprepare(d=d), n).value
        pred = predict_optimum(n)[1]
        best = optimize(n, cfg).best_fbar
        print(f"{eps:5.1f} {dn:11.5f} {dr:8.5f} {pred:10.5f} {best:10.5f}  {is_qcq(n).is_eb}")
