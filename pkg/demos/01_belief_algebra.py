"""Belief-function basics: masses, transforms, combination, conflict.

Walks through the core algebra on a three-state frame: how evidence is
expressed as masses over subsets, how the four equivalent forms relate,
and what conjunctive/disjunctive combination and conflict redistribution
do.
"""

from evimon import (
    Frame,
    MassFunction,
    categorical,
    combine_conjunctive,
    combine_conjunctive_normalized,
    combine_disjunctive,
    conflict_mass,
    mass_to_belief,
    mass_to_commonality,
    mass_to_plausibility,
    normalize,
    vacuous,
)

frame = Frame(["nominal", "degraded", "failed"])
print("Frame:", frame.labels, f"-> {frame.n_subsets} subsets\n")

# A vibration sensor mostly suggests 'degraded' but cannot exclude 'failed'.
m_vibration = MassFunction.from_dict(
    frame,
    {
        ("degraded",): 0.6,
        ("degraded", "failed"): 0.3,
        ("nominal", "degraded", "failed"): 0.1,
    },
)
print("Vibration evidence:", m_vibration)

# A temperature sensor points at 'nominal', with some ignorance.
m_temperature = MassFunction.from_dict(
    frame, {("nominal",): 0.7, ("nominal", "degraded", "failed"): 0.3}
)
print("Temperature evidence:", m_temperature)

print("\nThe same information in its other forms (vibration):")
for transform in (mass_to_belief, mass_to_plausibility, mass_to_commonality):
    sf = transform(m_vibration)
    shown = {
        frame.format_subset(a): round(float(sf.values[a]), 4) for a in (1, 2, 4, 7)
    }
    print(f"  {sf.kind:<13} {shown}")

print("\nConjunctive combination (both sensors reliable):")
both = combine_conjunctive(m_vibration, m_temperature)
print("  ", both)
print("   conflict m({}) =", round(both.conflict, 4))
print("   cross-check:", round(conflict_mass(m_vibration, m_temperature), 4))

print("\nDisjunctive combination (at least one sensor reliable):")
either = combine_disjunctive(m_vibration, m_temperature)
print("  ", either)

print("\nThe vacuous BBA is neutral for the conjunctive rule:")
print("  ", combine_conjunctive(m_vibration, vacuous(frame)))

print("\nThree ways to redistribute the conflict:")
print("   dempster    ", normalize(both, "dempster"))
print("   yager       ", normalize(both, "yager"))
print(
    "   dubois_prade",
    combine_conjunctive_normalized(m_vibration, m_temperature, "dubois_prade"),
)

print("\nTotally conflicting categorical evidence:")
k = conflict_mass(categorical(frame, ("nominal",)), categorical(frame, ("failed",)))
print("   conflict =", k)
dp = combine_conjunctive_normalized(
    categorical(frame, ("nominal",)), categorical(frame, ("failed",)), "dubois_prade"
)
print("   dubois_prade keeps the union:", dp)
