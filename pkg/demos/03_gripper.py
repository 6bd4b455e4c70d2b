"""
Two parallel grippers
=====================

Task constraints enter as extra rows of the same program. Here fingers 0 and 2
belong to one gripper: they must stay level and open between given bounds.
"""

from cagemip import CageProblem, Pose, ScenarioConstraint, decompose, make_slice_plan, synthesize, verify_cage

square = decompose([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])
q = Pose(0.0, 0.0, 0.0)


def solve_with_opening(lo, hi):
    grip = ScenarioConstraint("gripper-pair", {"pair": (0, 2), "opening": (lo, hi)})
    problem = CageProblem(square, q, 4, make_slice_plan(q, 9), scenarios=[grip])
    return synthesize(problem, "highs", timeout=120)


# A gripper that opens wider than the square can straddle it.
wide = solve_with_opening(0.4, 1.2)
f = wide.certificate.fingers
print("opening 0.4..1.2:", wide.status, f"- gripper fingers at y={f[0, 1]:.3f} and y={f[2, 1]:.3f},",
      f"opening {f[2, 0] - f[0, 0]:.3f}")
print("  oracle:", verify_cage(square, q, f).verdict)

# One that cannot open past 0.3 has no cage at all, and the solver proves it.
narrow = solve_with_opening(0.1, 0.3)
print("opening 0.1..0.3:", narrow.status, "- certificate:", narrow.certificate)
