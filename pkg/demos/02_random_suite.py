"""
A seeded campaign over random polygons
======================================

Draws star-shaped polygons from a fixed seed, synthesizes a four-finger cage
for each and lets the oracle judge every certificate. To keep the demo short
it only runs the four polygons of the seed-7 suite that HiGHS solves in under
half a minute; ``cagemip suite`` runs all ten.
"""

import statistics

from cagemip import CageProblem, Pose, cross_validate, make_slice_plan, random_polygon_suite, synthesize

q = Pose(0.0, 0.0, 0.0)
objects = random_polygon_suite(seed=7, count=10, vertex_range=(5, 10))
quick = [3, 5, 6, 8]

times = []
for k in quick:
    obj = objects[k]
    result = synthesize(CageProblem(obj, q, 4, make_slice_plan(q, 9)), "highs", timeout=60)
    times.append(result.solve_time)
    line = f"{k}: {len(obj.outline)} vertices, {obj.n_pieces} pieces -> {result.status} in {result.solve_time:.1f} s"
    if result.certificate is not None:
        # cross_validate also compares the oracle's orientation range with the caged slices
        report = cross_validate(result.certificate, obj)
        line += f", oracle says {report.verdict}"
        line += "".join(f"; {note}" for note in report.notes)
    print(line)

print(f"median solve time {statistics.median(times):.1f} s")
