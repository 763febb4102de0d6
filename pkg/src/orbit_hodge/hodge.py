"""Cotangent modules, Hodge numbers, and Hodge diamonds.

The cotangent module of a projective variety X = Proj S/I is built from the
Euler/conormal sequence: the kernel K of (S/I)(-1)^v -> S/I, e_i -> x_i,
modulo the column span of the transposed Jacobian of the defining equations.
Hodge numbers are h^{p,q} = h^q(X, wedge^p of that sheaf).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .cohomology import sheaf_cohomology_dim
from .gb import IdealHandle
from .invariants import InvariantReport, invariant_report
from .poly import ComputationError, Polynomial, UsageError
from .resolve import (
    GradedMap,
    PresentedModule,
    free_module,
    prune_presentation,
    syzygies,
)


@dataclass
class HodgeDiamond:
    """h^{p,q} grid of a d-dimensional variety with per-cell provenance
    ("computed" or "symmetry-filled")."""

    dim: int
    entries: list  # entries[p][q]
    provenance: list

    def h(self, p: int, q: int) -> int:
        return self.entries[p][q]

    def rows(self) -> list:
        """Diamond rows: row k lists h^{p,q} with p+q = k, p ascending."""
        d = self.dim
        out = []
        for k in range(2 * d + 1):
            lo, hi = max(0, k - d), min(k, d)
            out.append([self.entries[p][k - p] for p in range(lo, hi + 1)])
        return out

    def text(self) -> str:
        rows = self.rows()
        rendered = ["  ".join(str(x) for x in r) for r in rows]
        width = max(len(r) for r in rendered)
        return "\n".join(r.center(width).rstrip() for r in rendered)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "hodge": [list(r) for r in self.entries],
            "provenance": [list(r) for r in self.provenance],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HodgeDiamond":
        return cls(dim=data["dim"],
                   entries=[list(r) for r in data["hodge"]],
                   provenance=[list(r) for r in data["provenance"]])

    def is_symmetric(self) -> bool:
        d = self.dim
        for p in range(d + 1):
            for q in range(d + 1):
                if self.entries[p][q] != self.entries[q][p]:
                    return False
                if self.entries[p][q] != self.entries[d - p][d - q]:
                    return False
        return True


def cotangent_module(I: IdealHandle) -> PresentedModule:
    """Module whose sheafification is the cotangent sheaf of Proj(S/I).

    Generators: the kernel K of (S/I)(-1)^v -> S/I, e_i -> x_i (computed as
    projected syzygies of the row (x_1 .. x_v f_1 .. f_m)).  Relations: the
    Jacobian columns of the defining equations together with I·K; the Euler
    identity sum x_i df/dx_i = deg(f)·f puts the Jacobian columns inside K,
    which is asserted."""
    rc = I.ring
    v = rc.nvars
    p = rc.field.modulus
    gens = I.groebner_basis()
    # Euler identity check (also catches characteristic dividing a degree)
    for f in gens:
        euler = rc.zero()
        for i in range(v):
            euler = euler + rc.var(i) * f.derivative(i)
        if euler != f * rc.constant(f.degree()):
            raise ComputationError(
                "Euler identity failed; characteristic divides a generator degree")

    # K = first-v-coordinate projections of syzygies of (x_1..x_v | f_1..f_m)
    tgt = free_module(rc, [0])
    src = free_module(rc, [1] * v + [f.degree() for f in gens])
    cols = [{(0, rc.var(i).lm()): 1} for i in range(v)]
    cols += [{(0, m): c for m, c in f.terms.items()} for f in gens]
    syz = syzygies(GradedMap(src, tgt, cols))
    k_vectors = []
    for col in syz.columns:
        proj = {(i, m): c for (i, m), c in col.items() if i < v}
        if proj:
            k_vectors.append(proj)
    ambient = free_module(rc, [1] * v)

    def vec_deg(vec):
        (i, m) = next(iter(vec))
        return sum(m) + 1

    k_gens = free_module(rc, [vec_deg(vec) for vec in k_vectors])

    # relation columns inside S^v: Jacobian transpose columns and I * e_i
    jac_cols = []
    for f in gens:
        col = {}
        for i in range(v):
            df = f.derivative(i)
            for m, c in df.terms.items():
                col[(i, m)] = c
        jac_cols.append(col)
    ideal_cols = []
    for f in gens:
        for i in range(v):
            ideal_cols.append({(i, m): c for m, c in f.terms.items()})

    # every Jacobian column must lie in K (Euler identity)
    all_cols = k_vectors + jac_cols + ideal_cols
    twists = (list(k_gens.twists)
              + [f.degree() for f in gens]
              + [f.degree() + 1 for f in gens for _ in range(v)])
    big = GradedMap(free_module(rc, twists), ambient, all_cols)
    rel = syzygies(big)
    g = len(k_vectors)
    rel_cols = []
    rel_twists = []
    for j, col in enumerate(rel.columns):
        proj = {(i, m): c for (i, m), c in col.items() if i < g}
        if proj:
            rel_cols.append(proj)
            rel_twists.append(rel.source.twists[j])
    pres = GradedMap(free_module(rc, rel_twists), k_gens, rel_cols)
    return prune_presentation(PresentedModule(pres, base_ideal=I))


def cotangent_power_module(I: IdealHandle, p: int) -> PresentedModule:
    """Module whose sheafification is wedge^p of the cotangent sheaf.

    Instead of wedging the cotangent module (whose generator count grows as
    a p-th power), this presents the p-th syzygy sheaf of projective space
    on its contracted-Koszul generators kappa(e_T) = sum_k (-1)^k x_{T_k}
    e_{T - T_k}, one per (p+1)-subset T of the variables, then restricts to
    X and divides out df ^ (wedge^{p-1}) for the defining equations f.  The
    wedge columns use kappa(df ^ e_b) = deg(f)·f·e_b - df ^ kappa(e_b), so
    modulo I the class of df ^ kappa(e_b) is -kappa(df ^ e_b), which is an
    explicit combination of the generators with Jacobian coefficients."""
    rc = I.ring
    v = rc.nvars
    if p == 1:
        return cotangent_module(I)
    char = rc.field.modulus
    gens_I = I.groebner_basis()
    tuples_p = list(itertools.combinations(range(v), p))
    tuples_p1 = list(itertools.combinations(range(v), p + 1))
    idx_p = {t: i for i, t in enumerate(tuples_p)}
    idx_p1 = {t: i for i, t in enumerate(tuples_p1)}
    if not tuples_p1:
        empty = free_module(rc, [])
        return PresentedModule(GradedMap(empty, empty, []), base_ideal=I)
    ambient = free_module(rc, [p] * len(tuples_p))

    def kappa_col(T):
        col = {}
        for k, i in enumerate(T):
            rest = T[:k] + T[k + 1:]
            col[(idx_p[rest], rc.var(i).lm())] = 1 if k % 2 == 0 else char - 1
        return col

    # syzygies of (kappa columns | I * ambient basis), projected onto the
    # kappa coordinates: all relations among the generators modulo I
    k_cols = [kappa_col(T) for T in tuples_p1]
    ideal_cols = []
    for f in gens_I:
        for j in range(len(tuples_p)):
            ideal_cols.append({(j, m): c for m, c in f.terms.items()})
    big_twists = ([p + 1] * len(tuples_p1)
                  + [p + f.degree() for f in gens_I for _ in tuples_p])
    syz = syzygies(GradedMap(free_module(rc, big_twists), ambient,
                             k_cols + ideal_cols))
    g = len(tuples_p1)
    rel_cols = []
    rel_twists = []
    for j, col in enumerate(syz.columns):
        proj = {(i, m): c for (i, m), c in col.items() if i < g}
        if proj:
            rel_cols.append(proj)
            rel_twists.append(syz.source.twists[j])

    # wedge columns kappa(df ^ e_b) over generators f and p-subsets b
    for f in gens_I:
        for b in tuples_p:
            col = {}
            for i in range(v):
                if i in b:
                    continue
                sgn = sum(1 for j in b if j < i) % 2
                T = tuple(sorted(b + (i,)))
                for m, c in f.derivative(i).terms.items():
                    cc = (char - c if sgn else c) % char
                    if cc:
                        col[(idx_p1[T], m)] = cc
            if col:
                rel_cols.append(col)
                rel_twists.append(p + f.degree())

    pres = GradedMap(free_module(rc, rel_twists),
                     free_module(rc, [p + 1] * g), rel_cols)
    return prune_presentation(PresentedModule(pres, base_ideal=I))


class _DiamondContext:
    """Shared exterior powers and smoothness certificate for one variety."""

    def __init__(self, I: IdealHandle, report: InvariantReport = None):
        self.ideal = I
        self.report = report if report is not None else invariant_report(I)
        if self.report.proj_dim < 0:
            raise UsageError("empty variety has no Hodge diamond")
        self._omega = None
        self._powers = {}

    @property
    def dim(self) -> int:
        return self.report.proj_dim

    @property
    def smooth(self) -> bool:
        return self.report.smooth

    def power(self, p: int) -> PresentedModule:
        if p not in self._powers:
            if p == 0:
                from .resolve import presented_from_ideal
                self._powers[0] = presented_from_ideal(self.ideal)
            else:
                if self._omega is None:
                    self._omega = cotangent_module(self.ideal)
                if p == 1:
                    self._powers[1] = self._omega
                else:
                    self._powers[p] = cotangent_power_module(self.ideal, p)
        return self._powers[p]

    def cell(self, p: int, q: int) -> int:
        """h^q(wedge^p Omega), computed directly."""
        return sheaf_cohomology_dim(self.power(p), q, 0)

    def cell_routed(self, p: int, q: int) -> int:
        """Directly computed value, reached through Serre duality
        h^{p,q} = h^{d-p,d-q} when that halves the exterior power degree.
        Only sound on a certified-smooth variety."""
        d = self.dim
        if not self.smooth:
            return self.cell(p, q)
        if 2 * p > d:
            return self.cell(d - p, d - q)
        if 2 * p == d and 2 * q < d:
            # same exterior power, but the higher q needs a shallower Ext
            return self.cell(p, d - q)
        return self.cell(p, q)


def hodge_number(I: IdealHandle, p: int, q: int,
                 context: _DiamondContext = None) -> int:
    """h^{p,q} = h^q(X, wedge^p Omega_X) for the smooth variety X = V(I)."""
    ctx = context if context is not None else _DiamondContext(I)
    d = ctx.dim
    if not (0 <= p <= d and 0 <= q <= d):
        raise UsageError(f"(p,q) must lie in [0,{d}]^2")
    if not ctx.smooth:
        raise UsageError(
            "smoothness not certified; Hodge numbers of a singular variety "
            "are only available through hodge_diamond in full-verify mode")
    return ctx.cell_routed(p, q)


def hodge_diamond(I: IdealHandle, mode: str = "symmetry-fill",
                  report: InvariantReport = None) -> HodgeDiamond:
    """Assemble the full diamond.

    symmetry-fill (the default) computes the wedge p >= q, p + q <= d and
    fills the rest from h^{q,p} = h^{p,q} and h^{d-p,d-q} = h^{p,q}; it
    requires a certified-smooth variety.  full-verify computes every cell
    directly and errors if the symmetries fail to hold."""
    if mode not in ("symmetry-fill", "full-verify"):
        raise UsageError(f"unknown diamond mode {mode!r}")
    ctx = _DiamondContext(I, report)
    d = ctx.dim
    entries = [[None] * (d + 1) for _ in range(d + 1)]
    prov = [[None] * (d + 1) for _ in range(d + 1)]

    if mode == "symmetry-fill":
        if not ctx.smooth:
            raise UsageError(
                "smoothness not certified; refusing symmetry-fill "
                "(rerun in full-verify mode)")
        for p in range(d + 1):
            for q in range(p + 1):
                if p + q <= d:
                    entries[p][q] = ctx.cell_routed(p, q)
                    prov[p][q] = "computed"
        for p in range(d + 1):
            for q in range(d + 1):
                if entries[p][q] is not None:
                    continue
                for (a, b) in ((q, p), (d - p, d - q), (d - q, d - p)):
                    if entries[a][b] is not None:
                        entries[p][q] = entries[a][b]
                        prov[p][q] = "symmetry-filled"
                        break
                else:
                    raise ComputationError(f"cell ({p},{q}) unreachable by symmetry")
    else:
        for p in range(d + 1):
            for q in range(d + 1):
                entries[p][q] = ctx.cell(p, q)
                prov[p][q] = "computed"
        dia = HodgeDiamond(dim=d, entries=entries, provenance=prov)
        if not dia.is_symmetric():
            raise ComputationError(
                "Hodge symmetries fail on the computed grid "
                "(characteristic-p pathology, singularity, or a bug)")
        return dia
    return HodgeDiamond(dim=d, entries=entries, provenance=prov)
