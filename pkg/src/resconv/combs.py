"""Combs: circuit fragments with holes for resource processes.

A one-hole comb is a sandwich (ancilla Z, pre, post) with pre: A' -> A*Z
and post: B*Z -> B'; plugging a process f: A -> B yields
post . (f tensor id_Z) . pre.  Equality of the behavior on every plugged
process is decided through the induced four-index tensor, which the
plugged process is contracted against linearly.

Multi-hole combs chain stages and ancillas around an ordered sequence of
holes; they plug into each other like a multicategory, and allocation
transformations distribute a tuple of processes over several combs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import InputError
from .stoch import (UNIT, CompositionError, FinSet, StochMap, compose_par,
                    compose_seq, identity, swap, tensor)

F0 = Fraction(0)

HoleType = tuple[FinSet, FinSet]


@dataclass(frozen=True)
class OneComb:
    """One-hole comb.  The pre/post maps are expected to come from the
    free subtheory; constructors that build combs from circuits enforce
    this, direct construction trusts the caller."""

    ancilla: FinSet
    pre: StochMap
    post: StochMap
    hole_dom: FinSet
    hole_cod: FinSet

    def __post_init__(self) -> None:
        want_pre_cod = tensor(self.hole_dom, self.ancilla)
        if self.pre.cod.elements != want_pre_cod.elements:
            raise CompositionError(
                f"pre map must land in {want_pre_cod}, got {self.pre.cod}")
        want_post_dom = tensor(self.hole_cod, self.ancilla)
        if self.post.dom.elements != want_post_dom.elements:
            raise CompositionError(
                f"post map must accept {want_post_dom}, got {self.post.dom}")

    @property
    def outer_dom(self) -> FinSet:
        return self.pre.dom

    @property
    def outer_cod(self) -> FinSet:
        return self.post.cod


def identity_comb(a: FinSet, b: FinSet) -> OneComb:
    return OneComb(UNIT, identity(a), identity(b), a, b)


def symmetry_comb(first: HoleType, second: HoleType) -> OneComb:
    """The comb turning a process on the joint type into the swapped one."""
    (a1, b1), (a2, b2) = first, second
    return OneComb(UNIT,
                   swap(a2, a1),
                   swap(b1, b2),
                   tensor(a1, a2), tensor(b1, b2))


def apply_comb(k: OneComb, f: StochMap) -> StochMap:
    if f.dom.elements != k.hole_dom.elements or f.cod.elements != k.hole_cod.elements:
        raise CompositionError(
            f"hole expects {k.hole_dom} -> {k.hole_cod}, got {f.dom} -> {f.cod}")
    return compose_seq(k.post, compose_seq(compose_par(f, identity(k.ancilla)), k.pre))


def apply_comb_in_context(k: OneComb, h: StochMap,
                          side_in: FinSet, side_out: FinSet) -> StochMap:
    """Plug a process h: hole_dom*side_in -> hole_cod*side_out, with the comb
    acting only on the hole factors.  This is the defining behavior that
    comb equivalence quantifies over."""
    if h.dom.elements != tensor(k.hole_dom, side_in).elements:
        raise CompositionError(f"context process input {h.dom} does not match")
    if h.cod.elements != tensor(k.hole_cod, side_out).elements:
        raise CompositionError(f"context process output {h.cod} does not match")
    z = k.ancilla
    stage = compose_par(k.pre, identity(side_in))
    stage = compose_seq(compose_par(identity(k.hole_dom), swap(z, side_in)), stage)
    stage = compose_seq(compose_par(h, identity(z)), stage)
    stage = compose_seq(compose_par(identity(k.hole_cod), swap(side_out, z)), stage)
    return compose_seq(compose_par(k.post, identity(side_out)), stage)


def comb_tensor(k: OneComb) -> tuple[tuple[Fraction, ...], ...]:
    """Four-index behavior tensor W[(a,b')][(a',b)] = sum over z of
    pre((a,z)|a') * post(b'|(b,z)).  Two combs act identically on every
    plugged process iff their tensors agree entrywise."""
    na, nb = len(k.hole_dom), len(k.hole_cod)
    nap, nbp = len(k.outer_dom), len(k.outer_cod)
    nz = len(k.ancilla)
    rows = []
    for a in range(na):
        for bp in range(nbp):
            row = []
            for ap in range(nap):
                for b in range(nb):
                    total = F0
                    for z in range(nz):
                        total += k.pre.matrix[a * nz + z][ap] * k.post.matrix[bp][b * nz + z]
                    row.append(total)
            rows.append(tuple(row))
    return tuple(rows)


def comb_equivalent(k1: OneComb, k2: OneComb) -> bool:
    """Same operational behavior on every plugged process."""
    if (k1.hole_dom.elements, k1.hole_cod.elements) != (k2.hole_dom.elements, k2.hole_cod.elements):
        raise CompositionError("combs have different hole types")
    if (k1.outer_dom.elements, k1.outer_cod.elements) != (k2.outer_dom.elements, k2.outer_cod.elements):
        raise CompositionError("combs have different outer types")
    return comb_tensor(k1) == comb_tensor(k2)


def compose_combs_seq(k2: OneComb, k1: OneComb) -> OneComb:
    """First transform with k1, then feed the result into k2."""
    if (k2.hole_dom.elements, k2.hole_cod.elements) != (k1.outer_dom.elements, k1.outer_cod.elements):
        raise CompositionError(
            f"outer type {k1.outer_dom} -> {k1.outer_cod} of the first comb does not "
            f"match the hole {k2.hole_dom} -> {k2.hole_cod} of the second")
    z2 = k2.ancilla
    pre = compose_seq(compose_par(k1.pre, identity(z2)), k2.pre)
    post = compose_seq(k2.post, compose_par(k1.post, identity(z2)))
    return OneComb(tensor(k1.ancilla, z2), pre, post, k1.hole_dom, k1.hole_cod)


def compose_combs_par(k1: OneComb, k2: OneComb) -> OneComb:
    """Side-by-side comb acting on a process of the joint hole type."""
    a1, b1, z1 = k1.hole_dom, k1.hole_cod, k1.ancilla
    a2, b2, z2 = k2.hole_dom, k2.hole_cod, k2.ancilla
    pre = compose_par(k1.pre, k2.pre)  # -> A1*Z1*A2*Z2
    pre = compose_seq(_mid_shuffle(a1, z1, a2, z2), pre)  # -> A1*A2*Z1*Z2
    post = compose_seq(compose_par(k1.post, k2.post),
                       _mid_shuffle_back(b1, b2, z1, z2))  # B1*B2*Z1*Z2 -> B1'*B2'
    return OneComb(tensor(z1, z2), pre, post, tensor(a1, a2), tensor(b1, b2))


def _mid_shuffle(a1: FinSet, z1: FinSet, a2: FinSet, z2: FinSet) -> StochMap:
    # A1*Z1*A2*Z2 -> A1*A2*Z1*Z2 by swapping the middle blocks.
    return compose_par(compose_par(identity(a1), swap(z1, a2)), identity(z2))


def _mid_shuffle_back(b1: FinSet, b2: FinSet, z1: FinSet, z2: FinSet) -> StochMap:
    # B1*B2*Z1*Z2 -> B1*Z1*B2*Z2.
    return compose_par(compose_par(identity(b1), swap(b2, z1)), identity(z2))


@dataclass(frozen=True)
class NComb:
    """Comb with several holes, filled in the order given by `order`.

    stages[0] feeds the first hole and its ancilla, stages[i] routes hole
    output i-1 to hole input i, stages[n] emits the overall output.
    holes[j] is the process type of hole j; order[i] names the hole
    sitting at chain position i (a permutation of 0..n-1).
    """

    holes: tuple[HoleType, ...]
    order: tuple[int, ...]
    stages: tuple[StochMap, ...]
    ancillas: tuple[FinSet, ...]

    def __post_init__(self) -> None:
        n = len(self.holes)
        if n < 1:
            raise InputError("a comb needs at least one hole")
        if sorted(self.order) != list(range(n)):
            raise InputError(f"order {self.order} is not a permutation of 0..{n - 1}")
        if len(self.stages) != n + 1 or len(self.ancillas) != n:
            raise InputError("need n+1 stages and n ancillas for n holes")
        for i in range(n):
            dom_i, cod_i = self.holes[self.order[i]]
            want_in = tensor(dom_i, self.ancillas[i])
            if self.stages[i].cod.elements != want_in.elements:
                raise CompositionError(
                    f"stage {i} must produce {want_in}, got {self.stages[i].cod}")
            want_out = tensor(cod_i, self.ancillas[i])
            if self.stages[i + 1].dom.elements != want_out.elements:
                raise CompositionError(
                    f"stage {i + 1} must accept {want_out}, got {self.stages[i + 1].dom}")

    @property
    def arity(self) -> int:
        return len(self.holes)

    @property
    def outer_dom(self) -> FinSet:
        return self.stages[0].dom

    @property
    def outer_cod(self) -> FinSet:
        return self.stages[-1].cod


def one_comb_as_ncomb(k: OneComb) -> NComb:
    return NComb(((k.hole_dom, k.hole_cod),), (0,), (k.pre, k.post), (k.ancilla,))


def ncomb_of_identity(a: FinSet, b: FinSet) -> NComb:
    return one_comb_as_ncomb(identity_comb(a, b))


def apply_ncomb(k: NComb, fs: Sequence[StochMap]) -> StochMap:
    if len(fs) != k.arity:
        raise CompositionError(f"comb has {k.arity} holes, got {len(fs)} processes")
    for j, f in enumerate(fs):
        dom_j, cod_j = k.holes[j]
        if f.dom.elements != dom_j.elements or f.cod.elements != cod_j.elements:
            raise CompositionError(
                f"hole {j} expects {dom_j} -> {cod_j}, got {f.dom} -> {f.cod}")
    cur = k.stages[0]
    for i in range(k.arity):
        f = fs[k.order[i]]
        cur = compose_seq(compose_par(f, identity(k.ancillas[i])), cur)
        cur = compose_seq(k.stages[i + 1], cur)
    return cur


def plug_ncombs(outer: NComb, inner: Sequence[NComb]) -> NComb:
    """Fill every hole of the outer comb with an inner comb.

    Inner comb j must produce processes of outer hole j's type; the
    result is a comb on the concatenated inner holes (grouped by outer
    hole index) whose application equals nested application exactly.
    """
    if len(inner) != outer.arity:
        raise CompositionError(
            f"outer comb has {outer.arity} holes, got {len(inner)} inner combs")
    for j, inn in enumerate(inner):
        dom_j, cod_j = outer.holes[j]
        if inn.outer_dom.elements != dom_j.elements or inn.outer_cod.elements != cod_j.elements:
            raise CompositionError(
                f"inner comb {j} yields {inn.outer_dom} -> {inn.outer_cod}, "
                f"hole expects {dom_j} -> {cod_j}")

    offsets = []
    acc = 0
    for inn in inner:
        offsets.append(acc)
        acc += inn.arity

    holes: list[HoleType] = []
    for inn in inner:
        holes.extend(inn.holes)

    stages: list[StochMap] = []
    ancillas: list[FinSet] = []
    order: list[int] = []
    pending = outer.stages[0]
    for i in range(outer.arity):
        j = outer.order[i]
        inn = inner[j]
        z_out = outer.ancillas[i]
        stage = compose_seq(compose_par(inn.stages[0], identity(z_out)), pending)
        for kk in range(inn.arity):
            stages.append(stage)
            ancillas.append(tensor(inn.ancillas[kk], z_out))
            order.append(offsets[j] + inn.order[kk])
            if kk + 1 < inn.arity:
                stage = compose_par(inn.stages[kk + 1], identity(z_out))
        pending = compose_seq(outer.stages[i + 1],
                              compose_par(inn.stages[inn.arity], identity(z_out)))
    stages.append(pending)
    return NComb(tuple(holes), tuple(order), tuple(stages), tuple(ancillas))


@dataclass(frozen=True)
class UCTransformation:
    """Distribute n resource processes over m combs, one comb per output.

    allocation[i] names the output that consumes input i; every input is
    consumed exactly once.  combs[j] is applied to the inputs allocated
    to j, in ascending input order.
    """

    allocation: tuple[int, ...]
    combs: tuple[NComb, ...]

    def __post_init__(self) -> None:
        m = len(self.combs)
        for i, j in enumerate(self.allocation):
            if not 0 <= j < m:
                raise InputError(f"input {i} allocated to unknown output {j}")
        for j, comb in enumerate(self.combs):
            take = [i for i, jj in enumerate(self.allocation) if jj == j]
            if len(take) != comb.arity:
                raise InputError(
                    f"output {j} receives {len(take)} inputs but its comb has "
                    f"{comb.arity} holes")


def apply_uc(t: UCTransformation, fs: Sequence[StochMap]) -> list[StochMap]:
    if len(fs) != len(t.allocation):
        raise CompositionError(
            f"expected {len(t.allocation)} processes, got {len(fs)}")
    outputs = []
    for j, comb in enumerate(t.combs):
        take = [fs[i] for i in range(len(fs)) if t.allocation[i] == j]
        outputs.append(apply_ncomb(comb, take))
    return outputs
