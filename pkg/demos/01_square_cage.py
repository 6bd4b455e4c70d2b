"""
Caging a square with four fingers
=================================

Build the caging program for a unit square, solve it, and check the answer
with the flood-fill oracle. Writes ``square.svg`` next to this script.
"""

import math
from pathlib import Path

from cagemip import CageProblem, Pose, decompose, make_slice_plan, render_svg, synthesize, verify_cage

# The object is a polygon outline; decomposition splits it into convex pieces.
square = decompose([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])
q = Pose(0.0, 0.0, 0.0)

# Nine orientation slices between -90 and 90 degrees; the q slice sits in the middle.
problem = CageProblem(square, q, n_fingers=4, slice_plan=make_slice_plan(q, 9))

# The sweep tries caged slice intervals narrowest first and stops at the first feasible one.
result = synthesize(problem, "highs", timeout=120)
print("status:", result.status, f"({result.solve_time:.1f} s)")
cert = result.certificate
for n, (x, y) in enumerate(cert.fingers):
    print(f"  finger {n}: ({x:+.3f}, {y:+.3f})")
lo, hi = cert.theta_interval
print(f"  caged slices: {math.degrees(lo):.1f} .. {math.degrees(hi):.1f} deg")

# The oracle knows nothing about the program: it grids (x, y, theta) and flood-fills from q.
report = verify_cage(square, q, cert.fingers, theta_step=math.radians(2))
print("oracle:", report.verdict)
if report.theta_extent is not None:
    print("  reachable orientations: %.1f .. %.1f deg" % tuple(math.degrees(t) for t in report.theta_extent))

# Workspace, C-slice and connection graph side by side.
out = Path(__file__).with_name("square.svg")
render_svg(cert, square, out)
print("figure:", out)
