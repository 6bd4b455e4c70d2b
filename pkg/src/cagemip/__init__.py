"""Cage synthesis for point fingers around planar polygons, with a flood-fill cage checker."""

from .cage import CageCertificate, CageOptions, CageProblem, SynthesisResult, assemble_mip1, synthesize
from .cspace import make_slice_plan
from .geometry import Pose, decompose
from .io import load_certificate, load_problem, save_certificate, save_problem
from .render import render_svg
from .scenarios import ScenarioConstraint, make_wall, random_polygon_suite
from .verifier import VerifyReport, cross_validate, verify_cage

__version__ = "0.1.0"

__all__ = [
    "CageCertificate", "CageOptions", "CageProblem", "SynthesisResult", "assemble_mip1", "synthesize",
    "make_slice_plan", "Pose", "decompose", "load_certificate", "load_problem", "save_certificate",
    "save_problem", "render_svg", "ScenarioConstraint", "make_wall", "random_polygon_suite",
    "VerifyReport", "cross_validate", "verify_cage",
]
