"""Monte Carlo likelihood-ratio detection at finite block length.

Simulates the two-hypothesis test for photon counting and for heterodyne
at K=2, E=1, printing the fitted type-II decay rate next to the analytic
rate.  Photon counting reaches its asymptote quickly; the heterodyne
record needs block lengths far beyond what a 10^4-shot calibration can
resolve, and the printout shows the deficit instead of hiding it.
"""

import math

from correxp import EnergyParams, LogBase
from correxp.simulate import Strategy, analytic_exponent, estimate_exponent

BITS = LogBase.BITS
NATS = LogBase.NATS


def main():
    shots, epsilon, seed = 10000, 0.1, 1
    for kind, grid in (("photon_counting", [3, 5, 7]), ("heterodyne", [6, 12, 18])):
        strat = Strategy(kind, EnergyParams(2, 1.0))
        target = analytic_exponent(strat, BITS)
        largest = int(math.log(shots / 3.0) / (1.5 * analytic_exponent(strat, NATS)))
        print(f"{kind}: analytic exponent {target:.4f} bits, "
              f"largest calibratable n at {shots} shots is {largest}")
        outcomes = estimate_exponent(strat, epsilon, grid, shots, seed)
        print(f"  {'n':>4} {'alpha_hat':>10} {'beta_hat':>10} {'fitted':>8} {'of rate':>8}")
        for o in outcomes:
            share = o.exponent_hat / target
            print(f"  {o.n:>4} {o.alpha_hat:>10.4f} {o.beta_hat:>10.4f} "
                  f"{o.exponent_hat:>8.4f} {share:>7.1%}")
        print()
    print("beta_hat falls roughly geometrically with n while alpha_hat stays")
    print("pinned near the calibrated false-alarm budget")


if __name__ == "__main__":
    main()
