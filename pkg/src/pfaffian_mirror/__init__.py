"""Exact mirror-symmetry computations for one-parameter pfaffian Calabi-Yau threefolds.

Periods, Picard-Fuchs operators, P-schemes, mirror maps, Yukawa couplings,
genus 0 and 1 BPS numbers, operator transforms, and the commutative algebra
(Hilbert series, degree, c2.H, h^{1,2}) of the threefolds themselves.
"""
from .exact_series import Series, SeriesError, series_arith, series_calculus, series_reversion
from .numberfield import NumberFieldElement, numberfield_arith
from .theta_operator import (
    INFINITY,
    PScheme,
    ThetaOperator,
    fit_operator,
    indicial_exponents,
    leading_coefficient_factor,
    operator_equal,
    recurrence_solve,
    riemann_scheme,
)
from .frobenius import FrobeniusBasis, frobenius_basis, inverse_mirror_map, mirror_map
from .enumerative import (
    EnumerativeInputs,
    GVTable,
    bcov_genus1,
    conifold_discriminant,
    gv_genus0,
    gw_bps_convert,
    virtual_invariants,
    yukawa_phi,
    yukawa_q,
)
from .family_registry import FamilySpec, closed_form_period, get_family, list_families
from .geometry import (
    GradedResolution,
    SkewPolyMatrix,
    WeightedSpace,
    c2h,
    degree_from_hilbert,
    hilbert_series,
    hodge_h12,
    pfaffian,
    sub_pfaffians,
    weighted_h0,
)
from .residue_oracle import LaurentMonomialSystem, constant_term_coefficient, solution_basis_check, x13_system

__version__ = "0.1.0"
