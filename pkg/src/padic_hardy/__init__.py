"""Exact shell-by-shell evaluation of weighted multilinear p-adic Hardy operators."""

from __future__ import annotations

from .errors import (DivergenceError, InconclusiveSupError, OverlapError, PadicHardyError,
                     PrecisionExhausted, PreconditionError, TruncationError, ZeroVectorError)
from .hardy import (ConstantResult, MCResult, MultilinearParams, OperatorResult, ShellWeight,
                    apply_dual_hardy, apply_hardy, char_const, char_const_herz,
                    char_const_herz_dual, char_const_mh, char_const_mh_dual, mc_char_const)
from .herz import (HerzParams, MorreyHerzParams, herz_norm, lq_norm, morrey_herz_norm,
                   morrey_herz_sup)
from .padic import (PadicContext, PadicScalar, PadicVector, UnitSampler, ball_measure,
                    norm_scalar, norm_vector, sample_unit, shell_of, sphere_measure, valuation)
from .radial import (RadialFunction, Segment, from_table, indicator, power_law, radial_power,
                     restrict_norm, shift)
from .series import Estimate, Term, ToleranceSpec

__version__ = "0.1.0"
