"""Non-uniqueness: shearing the central cylinder of A_1 by a small bump.

The perturbed body keeps volume and diameter, so it has the same ratio.
Off-centre bumps leave the rotationally invariant class.

Run: python demos/03_perturbations.py   (about 15 s)
"""

from heisodiam import canonical, sets

adm = canonical.admissibility(1.0)
print("admissibility:", adm.to_dict())

base = canonical.build_A_perturbed(1.0)
for kind, center in (("radial_cone", 0.0), ("offcenter_cone", 0.3 * adm.r_adm)):
    f = canonical.make_bump(kind, center=center, adm=adm)
    s = canonical.build_A_perturbed(1.0, f, adm=adm)
    print(f"{kind:15s} volume {sets.volume(s):.12f} (base {sets.volume(base):.12f})"
          f"  diameter {sets.diameter(s).value:.9f}  in class R: {canonical.in_class_R(s)}")

try:
    canonical.check_bump(canonical.make_bump("radial_cone", lipschitz=1.0, adm=adm), 1.0, adm)
except canonical.InadmissibleBumpError as exc:
    print("rejected:", exc)
