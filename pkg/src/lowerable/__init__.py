"""Exact computation of lowerable vector fields for finitely 𝓛-determined polynomial multigerms."""

from .determinacy import DeterminacyCertificate, find_ell, tl_jet_image, tr_jet_image
from .errors import (
    DeltaNotCertified,
    GermValidationError,
    LowerableError,
    NotFinitelyDetermined,
    PolyParseError,
)
from .generators import GeneratorSet, analyze, generating_set, prune
from .germ import Branch, FieldAlongGerm, MultiGerm, SourceField, TargetField, tf_apply, validate, wf_apply
from .localalgebra import LocalAlgebraData, local_algebra
from .poly import Jet, Poly, parse_poly, render, truncate
from .verification import VerificationReport, brute_intersection_jet, verify_generators

__all__ = [
    "DeterminacyCertificate",
    "find_ell",
    "tl_jet_image",
    "tr_jet_image",
    "DeltaNotCertified",
    "GermValidationError",
    "LowerableError",
    "NotFinitelyDetermined",
    "PolyParseError",
    "GeneratorSet",
    "analyze",
    "generating_set",
    "prune",
    "Branch",
    "FieldAlongGerm",
    "MultiGerm",
    "SourceField",
    "TargetField",
    "tf_apply",
    "validate",
    "wf_apply",
    "LocalAlgebraData",
    "local_algebra",
    "Jet",
    "Poly",
    "parse_poly",
    "render",
    "truncate",
    "VerificationReport",
    "brute_intersection_jet",
    "verify_generators",
]

__version__ = "0.1.0"
