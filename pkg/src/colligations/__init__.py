"""Colligations, their product, characteristic functions, divisors and invariants."""

from .charfn import Subspace, charfn_eval, charfn_oracle, det_identity_residual, grassmann_map
from .core import (
    Colligation,
    InnerGroupElement,
    Shape,
    amplify,
    conjugate,
    embed,
    identity,
    iota,
    neutral,
    random_colligation,
    random_inner,
    validate,
)
from .divisor import delta_multiplicity, det_lambda_multiplicity, divisor_summary, p_eval, p_poly
from .errors import (
    CapExceededError,
    ColligationError,
    ModeError,
    PoleError,
    ReconstructionError,
    ShapeError,
    SingularError,
)
from .invariants import (
    InvariantFingerprint,
    SpectralData,
    conjugacy_oracle,
    cwb_invariant,
    fingerprint,
    reconstruct_cwb,
    reconstruct_trace_words,
    sl_det_invariants,
    trace_word,
)
from .poly import SparsePoly
from .scalars import EXACT, FLOAT, GaussRat
from .semigroup import circ, circ_chain

__version__ = "0.1.0"
