"""Exact classification engine for constant Ricci spectra of conformally flat metrics."""

from .certificates import (
    Certificate,
    check_candidate,
    cubic_exclusion,
    einstein_certificate,
    exclude_l3,
    l3_coefficients,
    multiplicity_filters,
    product_certificate,
    simple_triple_chain,
    simple_triple_cubic,
)
from .classify import ClassificationReport, classify, classify_shape, partitions
from .constraints import (
    CandidateError,
    IdentityReport,
    SpectrumCandidate,
    check_identities,
    frac_str,
    product_spectrum,
    residual_system,
    to_u,
)
from .poly import RationalPoly, square_free_part, sturm_chain, sturm_real_root_count
from .search import search_candidates
from .verify import CertificateInvalid, verify_rejection
