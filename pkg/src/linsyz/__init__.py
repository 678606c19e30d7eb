"""Gröbner bases, graded free resolutions, doubled rational normal curves and plethysm."""

from .arith import GREVLEX, LEX, QQ, MonomialOrder, ParseError, PrimeField, Poly, RationalField, Ring
from .groebner import FreeElt, FreeModule, GroebnerBasis, buchberger, elim_kernel, normal_form, syzygies
from .resolve import (BettiTable, HilbertData, Resolution, ResPoly, betti, hilbert, min_resolution, minimalize,
                      res_poly, res_poly_mul)
from .curves import (DoublingSpec, check_double_exact_sequences, expected_betti, ferrand_double_ideal,
                     koszul_nonvanishing, linear_embed, points_scheme_ideal, rnc_ideal, twist_module_presentation,
                     verify_double_curve, veronese_ideal)
from .plethysm import (Decomp, Partition, cg_product, lambda_sym_dim2, lr_product, schur_dim, sl_reduce,
                       sym_sym_dim2, sym_sym_oracle, sym_sym_recurrence)

__version__ = "0.1.0"
