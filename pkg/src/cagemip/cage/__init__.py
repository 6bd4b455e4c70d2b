"""The caging program: problem definition, encoders, assembly and certificates."""

from .assemble import assemble_mip1
from .certificate import CageCertificate, CertificateError, decode_certificate
from .encoders import (BuildContext, arc_apex_matrix, encode_boundary_variation, encode_closure,
                       encode_enclosing, encode_limit, encode_loop, encode_loop_structure,
                       encode_nonpenetration, finger_triangles, make_context)
from .problem import CageOptions, CageProblem, CageVariables
from .synthesize import SynthesisResult, synthesize

__all__ = [
    "assemble_mip1", "CageCertificate", "CertificateError", "decode_certificate", "BuildContext",
    "arc_apex_matrix", "encode_boundary_variation", "encode_closure", "encode_enclosing", "encode_limit",
    "encode_loop", "encode_loop_structure", "encode_nonpenetration", "finger_triangles", "make_context",
    "CageOptions", "CageProblem", "CageVariables", "SynthesisResult", "synthesize",
]
