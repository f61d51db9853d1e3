"""Subshifts of finite type on finitely generated groups.

Build SFTs by lifting through quotients, inducing from subgroups and taking
products, then check them at desk scale: bounded emptiness on Cayley balls,
periodic points on tori, stabilizers, and automorphism window tests.
"""

from .automorphism import AutMatrix, DivVerdict, apply_automorphism, div_witness_check, shear
from .constructions import (
    automorphism_free_product,
    column_base,
    extend_periodic,
    full_shift,
    mod3_marker,
    mod3_point,
    product,
    quotient_lift,
    reduce_to_group,
    subgroup_induce,
)
from .groups import (
    GroupDescriptor,
    GroupElement,
    Homomorphism,
    apply_hom,
    ball,
    check_hom,
    free_abelian,
    heisenberg3,
    inverse,
    multiply,
    semidirect,
)
from .lattice import Lattice
from .sft import (
    Alphabet,
    Configuration,
    Domain,
    Pattern,
    Sft,
    WangTile,
    WangTileSet,
    is_locally_admissible,
    occurs,
    translate,
    wang_to_sft,
)
from .solver import (
    EmptinessVerdict,
    check_ball_emptiness,
    find_periodic,
    search_periods,
    stabilizer,
    to_dimacs,
)

__all__ = [name for name in dir() if not name.startswith("_")]
