"""Admissibility survey: compute the curvature aggregate H(r), its
limit at infinity, and the three structural conditions for every
built-in metric profile, then stress a perturbed profile."""

import numpy as np

from equiwave import check_admissibility, check_perturbation, compute_H, metric_profile

KINDS = [
    ("flat", 3),
    ("flat", 5),
    ("hyperbolic", 3),
    ("hyperbolic", 5),
    ("polynomial-growth", 3),
    ("smoothed-polynomial", 3),
    ("exp-growth", 3),
    ("smoothed-exponential", 3),
    ("sinh-perturbed", 3),
    ("sin", 3),
]

print(f"{'profile':24s} {'n':>2s} {'H(1)':>10s} {'h_inf':>8s} {'delta0':>7s} verdict")
for kind, n in KINDS:
    profile = metric_profile(kind)
    rep = check_admissibility(profile, n)
    h1 = compute_H(profile, n, 1.0)
    d0 = f"{rep.delta0:.2f}" if rep.delta0 is not None else "-"
    hi = f"{rep.h_infinity:.4f}" if rep.h_infinity is not None else "none"
    verdict = "ADMISSIBLE" if rep.admissible else "REJECTED"
    print(f"{kind:24s} {n:2d} {h1:10.5f} {hi:>8s} {d0:>7s} {verdict}")
    if not rep.admissible:
        for cond in (rep.cond_i, rep.cond_ii, rep.cond_iii):
            if not cond.passed and cond.witness_r is not None:
                print(f"{'':24s}    failure witness at r = {cond.witness_r:.4f}")

# a small admissible perturbation of sinh: h = sinh r + 0.01 r e^(-r) (1+r)^(-3)
print("\nperturbation check (exponential mode):")
base = metric_profile("hyperbolic")
pert = metric_profile("sinh-perturbed")
rep = check_perturbation(base, pert, "exponential", 3)
print(f"  epsilon = {rep.epsilon:.4f}  ->  {'PASS' if rep.passed else 'FAIL'}")

# the same machinery rejects a rescaled flat profile in polynomial mode
bad = metric_profile("custom", expr=["*", 1.5, "r"])
rep = check_perturbation(metric_profile("flat"), bad, "polynomial", 3)
print(f"  h = 1.5 r against flat   ->  {'PASS' if rep.passed else 'FAIL'} (expected FAIL)")
