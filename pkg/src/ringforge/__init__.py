"""Arithmetic matrices for orders of number fields and the GL2(Z)
parametrisation of rank-n rings by binary forms of degree n."""

from .arithmat import (
    OrderContext,
    RingElement,
    StructureConstants,
    arithmetic_matrix,
    cubic_form_from_order,
    element_add,
    element_inverse,
    element_mul,
    multiplication_table,
    norm,
    normalized_cubic_table,
    trace,
)
from .exactalg import PolyMatrix, PolyRing, Polynomial, det_fraction_free, matrix_mul, triangular_scaled_inverse
from .forms import BinaryForm, UnimodularMatrix, act, discriminant, irreducibility_certificate
from .param import ParamSystem, build_B_coeffs, build_P, build_Q, build_T, isomorphism_check, transport_element
from .verify import Certificate, quartic_covariants, special_matrix, syzygy_check, verify_identity

__version__ = "0.1.0"
