"""Independent evaluation of the interference constant tau, the grid
separation K and the per-cell bound omega for randomized parameter draws.

Writes ../fixtures/constants_oracle.json. Uses mpmath at 50 digits so the
frozen values do not share any floating-point path with the Rust code.
"""
import json
import os
import random

import mpmath as mp

mp.mp.dps = 50


def tau(kappa):
    k = mp.mpf(kappa)
    return k * (1 + mp.power(2, -k / 2)) / (k - 1) + mp.pi * mp.power(2, -k / 2) / (2 * (k - 2))


def cap_k(kappa, beta, sigma, xi, c, eta, rmax):
    k = mp.mpf(kappa)
    slack = 1 / mp.mpf(sigma) - mp.mpf(xi) / (mp.mpf(c) * mp.mpf(eta)) * mp.power(rmax, k - mp.mpf(beta))
    assert slack > 0
    x = mp.power(slack / (4 * tau(kappa)), -1 / k)
    return int(mp.ceil(mp.sqrt(2) * x + mp.sqrt(2))), x


def omega(kappa, pmax, sigma, xi):
    if xi == 0:
        return None
    v = mp.power(2, mp.mpf(kappa)) * mp.mpf(pmax) / (mp.mpf(sigma) ** 2 * mp.mpf(xi)) + 1
    return int(mp.ceil(v))


def main():
    rng = random.Random(20240611)
    draws = []
    while len(draws) < 20:
        kappa = round(rng.uniform(2.2, 5.0), 6)
        linear = rng.random() < 0.4
        beta = kappa if linear else round(rng.uniform(0.3, kappa), 6)
        sigma = round(rng.uniform(0.5, 4.0), 6)
        c = round(rng.uniform(0.5, 3.0), 6)
        eta = round(rng.uniform(0.2, 2.0), 6)
        pmax = round(rng.uniform(1.0, 50.0), 6)
        rmax = round(rng.uniform(0.2, 3.0), 6)
        xi = 0.0 if rng.random() < 0.25 else round(rng.uniform(1e-4, 0.2), 6)
        slack = 1 / sigma - xi / (c * eta) * rmax ** (kappa - beta)
        if slack <= 1e-6:
            continue
        k, x = cap_k(kappa, beta, sigma, xi, c, eta, rmax)
        draws.append({
            "kappa": kappa, "beta": beta, "sigma": sigma, "xi": xi, "c": c,
            "eta": eta, "pmax": pmax, "rmax": rmax,
            "tau": float(tau(kappa)),
            "cap_k": k,
            "separation_threshold": float(x),
            "omega": omega(kappa, pmax, sigma, xi),
        })
    # fixed point from the worked example: kappa=4, beta=kappa, sigma=2, xi=0
    out = os.path.join(os.path.dirname(__file__), "..", "fixtures", "constants_oracle.json")
    with open(out, "w") as f:
        json.dump(draws, f, indent=1)
    print("tau(4) =", mp.nstr(tau(4), 20))
    print("K(kappa=4, sigma=2, xi=0) =", cap_k(4, 4, 2, 0, 1, 1, 1)[0])
    print("omega(kappa=3, P=2, sigma=1, xi=1) =", omega(3, 2, 1, 1))
    print("0.5 * 1.7^-4 =", mp.nstr(mp.mpf("0.5") * mp.power(mp.mpf("1.7"), -4), 20))


if __name__ == "__main__":
    main()
