"""Tolerance curves: zones of comfort/tolerance/viability, and BBAs.

Shows how a scalar observation turns into a belief assignment over the
system states, either through possibility curves (max rule, consonant
result) or through likelihoods (product rule).
"""

from evimon import (
    Frame,
    normal_likelihood,
    ramp_down,
    singleton_likelihoods_to_bba,
    singleton_possibilities_to_bba,
    trapezoid,
)

frame = Frame(["low", "high"])

speed_ok = ramp_down(90.0, 94.5)  # comfortable to 90, tolerated to 94.5
print("A one-sided tolerance curve (speed limit 90, 5% radar margin):")
for v in (85.0, 90.0, 92.0, 94.5, 100.0):
    print(f"   possibility({v:>5}) = {speed_ok(v):.3f}")

comfortable_accel = trapezoid(-2.5, -2.0, 2.0, 2.5)
print("\nA two-sided curve (passenger-comfort acceleration):")
for v in (-3.0, -2.25, 0.0, 2.25, 3.0):
    print(f"   possibility({v:>5}) = {comfortable_accel(v):.3f}")

print("\nPossibility route (max over members, consonant masses):")
for poss in ([1.0, 0.0], [0.75, 0.0], [0.75, 0.4], [1.0, 1.0], [0.0, 0.0]):
    m = singleton_possibilities_to_bba(frame, poss)
    print(f"   poss {poss} -> {m}")
print("   note: the empty set always carries 1 - max(poss)")

print("\nLikelihood route (product over members):")
for lik in ([1.0, 0.0], [0.8, 0.4], [0.5, 0.5]):
    m = singleton_likelihoods_to_bba(frame, lik)
    print(f"   lik {lik} -> {m}")

print("\nGaussian densities feed the likelihood route directly:")
observation = 7.0
lik = [
    normal_likelihood(observation, mean=5.0, stddev=2.0),
    normal_likelihood(observation, mean=10.0, stddev=2.0),
]
print(f"   densities at {observation}: {[round(v, 4) for v in lik]}")
print("   ->", singleton_likelihoods_to_bba(frame, lik))
