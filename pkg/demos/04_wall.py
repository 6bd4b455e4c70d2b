"""
Trapping an object against a wall
=================================

Five fixed fingers stand in for a wall segment twice as wide as the object.
Two free fingers must finish the cage from below. The object is mushroom
shaped so the free fingers can hook under its cap.
"""

import math

from cagemip import (CageOptions, CageProblem, Pose, cross_validate, decompose, make_slice_plan, synthesize)
from cagemip.scenarios import wall_above

mushroom = decompose([(-0.8, 0.0), (-0.5, 0.0), (-0.5, -0.5), (0.5, -0.5), (0.5, 0.0), (0.8, 0.0),
                      (0.8, 0.5), (-0.8, 0.5)])
q = Pose(0.0, 0.0, 0.0)

# The wall touches the top of the object; its fingers take indices 0..4.
wall = wall_above(mushroom, count=5, span_factor=2.0, clearance=0.0, first=0)
print("wall fingers:", [tuple(round(c, 2) for c in p) for _, p in sorted(wall.fixed_fingers().items())])

# The wall blocks rotation quickly, so the slices are packed into +-40 degrees.
# The wall spans far past the object, and the closing-slice rule would need
# far-apart wall fingers to overlap; it is switched off here and the oracle
# has the last word instead.
plan = make_slice_plan(q, 9, math.radians(-40), math.radians(40))
problem = CageProblem(mushroom, q, 7, plan, fixed_fingers=wall.fixed_fingers(), scenarios=[wall],
                      options=CageOptions(closure=False))
result = synthesize(problem, "highs", timeout=300)
print("status:", result.status, f"({result.solve_time:.1f} s)")
print("free fingers:", result.certificate.fingers[5:].round(3).tolist())
print("oracle:", cross_validate(result.certificate, mushroom).verdict)
