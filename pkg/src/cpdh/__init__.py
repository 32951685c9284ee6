"""Abelian group law on the projective plane minus a cubic curve, over F_p and Z/pqZ."""

from .cubic import CompanionMatrix, CubicParams, chi_is_irreducible, find_root, q_eval, q_factorization, q_via_matrix
from .dh import KeyPair, SharedSecret, SystemParams, derive_shared, keygen, run_exchange_over_socket, system_setup
from .dlog import DlogInstance, dlog_bruteforce, dlog_bsgs, dlog_extension, dlog_pohlig_hellman, dlog_via_extension
from .errors import CPDHError
from .ext import ExtElement, ExtOrderData, ext_is_generator, ext_mul, ext_norm, ext_order, ext_pow
from .field import FieldElement, FieldParams, OpCounter, fp_add, fp_inv, fp_mul, fp_pow
from .group import (
    GroupOrder,
    GroupVector,
    ProjPoint,
    canonicalize,
    count_cubic_points,
    find_generator,
    group_order,
    invert,
    is_generator,
    oplus,
    parse_point,
    scalar_mul,
)

__version__ = "0.1.0"
