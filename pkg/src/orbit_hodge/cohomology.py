"""Sheaf cohomology of coherent sheaves on projective space via local duality.

For a graded module M over S = k[x_1..x_v] (so Proj S is P^{v-1}) and the
sheaf F = M~ twisted by d:

    h^q(F(d)) = dim Ext^{v-q-1}(M, S)_{-d-v}          for q >= 1,
    h^0(F(d)) = dim M_d - dim Ext^v(M, S)_{-d-v}
                        + dim Ext^{v-1}(M, S)_{-d-v},

the q = 0 case correcting the module's degree-d piece by the local
cohomology in homological degrees 0 and 1.
"""
from __future__ import annotations

from collections import Counter
from math import comb

from .poly import UsageError
from .resolve import (
    FreeResolution,
    PresentedModule,
    free_resolution,
    map_rank_in_degree,
    minimized_boundary,
)


def _hom_component_dim(twists, v: int, e: int) -> int:
    """dim of the degree-e part of Hom(sum S(-a_i), S) = sum S(a_i)."""
    return sum(comb(e + a + v - 1, v - 1) for a in twists if e + a >= 0)


def ext_graded_dim(M: PresentedModule, i: int, e: int,
                   resolution: FreeResolution = None) -> int:
    """dim_k Ext^i(M, S)_e: degree-e homology of the dualized resolution.

    Without an explicit resolution this works on the raw Schreyer levels and
    minimizes only the two differentials d_i, d_{i+1} the answer needs
    (see minimized_boundary); the minimal rank of F_i is recovered from the
    twist multisets, since each cancelled unit removes one source generator
    of d_i and one target generator of d_{i+1} of matching twist."""
    if i < 0:
        return 0
    rc = M.ring
    v = rc.nvars
    if resolution is not None:
        if i > resolution.length and not resolution.capped:
            return 0
        if i > resolution.length:
            raise UsageError("resolution too short for requested Ext degree")
        F_i = resolution.module(i)
        if F_i is None or F_i.rank == 0:
            return 0
        total = _hom_component_dim(F_i.twists, v, e)
        rank_in = 0   # Hom(d_i): Hom(F_{i-1}) -> Hom(F_i)
        rank_out = 0  # Hom(d_{i+1}): Hom(F_i) -> Hom(F_{i+1})
        if i >= 1 and i - 1 <= resolution.length:
            rank_in = map_rank_in_degree(resolution.maps[i - 1].transpose(), e)
        if i + 1 <= resolution.length:
            rank_out = map_rank_in_degree(resolution.maps[i].transpose(), e)
        return total - rank_in - rank_out

    raw = free_resolution(M, cap=min(v, i + 1), minimal=False)
    if i > raw.length:
        if raw.capped:
            raise UsageError("resolution too short for requested Ext degree")
        return 0
    F_i = raw.module(i)
    if F_i is None or F_i.rank == 0:
        return 0
    twists = Counter(F_i.twists)
    rank_in = 0
    rank_out = 0
    if i >= 1:
        d_i = minimized_boundary(M, i)
        twists -= Counter(F_i.twists) - Counter(d_i.source.twists)
        rank_in = map_rank_in_degree(d_i.transpose(), e)
    if i + 1 <= raw.length:
        d_next = minimized_boundary(M, i + 1)
        raw_next_tgt = raw.maps[i].target.twists
        twists -= Counter(raw_next_tgt) - Counter(d_next.target.twists)
        rank_out = map_rank_in_degree(d_next.transpose(), e)
    total = _hom_component_dim(twists.elements(), v, e)
    return total - rank_in - rank_out


def sheaf_cohomology_dim(M: PresentedModule, q: int, d: int,
                         resolution: FreeResolution = None) -> int:
    """h^q of the sheaf M~(d) on P^{v-1}."""
    if q < 0:
        raise UsageError("cohomological degree must be non-negative")
    rc = M.ring
    v = rc.nvars
    if q > v - 1:
        return 0
    e = -d - v
    if q == 0:
        return (M.component_dim(d)
                - ext_graded_dim(M, v, e, resolution)
                + ext_graded_dim(M, v - 1, e, resolution))
    return ext_graded_dim(M, v - q - 1, e, resolution)
