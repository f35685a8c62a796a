"""Exact zeta functions and monodromy of quasi-ordinary singularities."""

from .cones import (
    EdgeData,
    GeneralFaceFan,
    NewtonPath,
    SimplicialCone,
    build_general_fan,
    build_newton_path,
    genfun,
    j_edge,
    j_vertex,
)
from .errors import QOZetaError
from .exactalg import QQ, AlgNum, FieldTower, UniPoly, adjoin_root, factor_irreducible
from .monodromy import (
    CycloProduct,
    PoleVerdict,
    Status,
    check_conjecture,
    eigenvalue_check,
    zeta_monodromy_curve,
    zeta_monodromy_qo,
)
from .mpoly import MPoly, QOPair, make_pair, parse
from .rings import MotivicExpr, RatFuncS, chi_specialize
from .zeta import (
    PoleSet,
    candidate_poles,
    depth,
    newton_tree,
    strong_candidate_poles,
    zmot_curve,
    zmot_nondeg_qo,
    ztop_base,
    ztop_nondeg,
    ztop_qo,
)

__version__ = "0.1.0"
