"""Quadratic forms over Q: invariants, local-global decisions, distinguishing
subforms and the commensurability of standard arithmetic hyperbolic orbifolds."""

from .arith import INF, Place, SquareClass, is_local_square, legendre_symbol, padic_valuation, squarefree_part
from .errors import *  # noqa: F401,F403
from .forms import (
    DiagonalForm,
    InvariantProfile,
    delete_entries,
    direct_sum,
    global_invariants,
    hasse_variants,
    order_form,
    rediagonalize,
    scale,
)
from .global_theory import (
    Isogroupy,
    SquareClassConstraint,
    SynthesisProfile,
    globally_isometric,
    globally_isotropic,
    is_subform,
    isogroupic,
    similar,
    square_existence,
    synthesize_form,
)
from .hilbert import hilbert_support, hilbert_symbol, nonsquare_partner
from .hyperbolic import (
    commensurable,
    contains_as_subspace,
    dichotomy_report,
    distinguishing_place,
    is_admissible,
    maclachlan_enumerate,
    maclachlan_form_to_primes,
    maclachlan_parity_ok,
    maclachlan_primes_to_form,
)
from .local_theory import (
    LocalInvariants,
    TitsIndex,
    local_form_exists,
    local_invariants,
    local_isometric,
    local_isotropic,
    local_subform,
    local_witt_index,
    tits_index,
)
from .subforms import (
    SubformCertificate,
    distinguishing_subform_even_codim1,
    distinguishing_subform_even_codim2,
    distinguishing_subform_odd,
    real_distinguishing_subform,
    transfer_subform,
    verify_certificate,
)

__version__ = "0.1.0"
