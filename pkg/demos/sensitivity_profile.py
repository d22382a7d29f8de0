"""Profile how fragile the optimal throughput is to each risk budget.

Central finite differences of the optimum t_star along each budget axis give
the marginal value of admitting more covertness risk versus more reliability
risk.  The estimator also raises flags when the finite-difference window
straddles a probability atom or a regime where the occupancy cap binds, both
of which invalidate a smooth-derivative reading.
"""

import numpy as np

from covertq import (
    ProtocolParams,
    StochasticChannelSpec,
    TruncatedGaussianSpec,
    TruncatedLognormalSpec,
    generate_sample_set,
    sensitivities_symmetric,
)

K = 200_000
SEED = 1


def make_channel():
    return StochasticChannelSpec(
        eta=TruncatedLognormalSpec(mu_ln=-0.0126, sigma_ln=0.05),
        nb=TruncatedGaussianSpec(mu=0.005, sigma=0.001, upper=0.5),
    )


def main():
    samples = generate_sample_set(make_channel(), K=K, seed=SEED, workers=1)
    protocol = ProtocolParams(n=10**7, delta=0.05)

    eps_grid = np.logspace(-4, -1, 13)
    points = sensitivities_symmetric(samples, protocol, eps_grid)

    print(f"K={K} channel draws, n={protocol.n:.0e}, delta={protocol.delta}")
    print()
    print(f"{'eps':>9} {'s_cov':>12} {'s_rel':>12} {'s_cov/s_rel':>12} flags")
    for pt in points:
        ratio = pt.s_cov / pt.s_rel if pt.s_rel > 0 else float("inf")
        flags = ",".join(pt.flags) if pt.flags else "-"
        print(f"{pt.eps:9.2e} {pt.s_cov:12.4e} {pt.s_rel:12.4e} "
              f"{ratio:12.3f} {flags}")

    # On this channel both budgets buy comparable payload; the marginal
    # value of admitted risk falls as the budgets loosen.
    elastic = [(pt.eps, pt.eps * (pt.s_cov + pt.s_rel)) for pt in points]
    print()
    print("combined elasticity eps * (s_cov + s_rel):")
    for eps, e in elastic[::4]:
        print(f"  eps={eps:9.2e}: {e:.4e}")


if __name__ == "__main__":
    main()
