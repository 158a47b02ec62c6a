"""Finitely presented strict symmetric monoidal theories and their collapse
to a theory of resource convertibility.

Terms of the collapsed theory are multisets of object generators; the
order is bounded reachability by rewriting with the morphism generators,
applied inside any ambient multiset (tensoring with identities) and
chained sequentially.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .core import Decision, InputError, TheoryOracle
from .linalg import in_span, orthogonal_residual

# A multiset is canonically a sorted tuple of (name, count) pairs, counts > 0.
Multiset = tuple[tuple[str, int], ...]


def ms_make(items: dict[str, int] | list[str] | tuple[str, ...]) -> Multiset:
    counts: dict[str, int] = {}
    if isinstance(items, dict):
        pairs = items.items()
    else:
        pairs = ((name, 1) for name in items)
    for name, k in pairs:
        if k < 0:
            raise InputError(f"negative multiplicity for {name!r}")
        if k:
            counts[name] = counts.get(name, 0) + k
    return tuple(sorted(counts.items()))


def ms_add(a: Multiset, b: Multiset) -> Multiset:
    counts = dict(a)
    for name, k in b:
        counts[name] = counts.get(name, 0) + k
    return tuple(sorted(counts.items()))


def ms_contains(a: Multiset, b: Multiset) -> bool:
    counts = dict(a)
    return all(counts.get(name, 0) >= k for name, k in b)


def ms_sub(a: Multiset, b: Multiset) -> Multiset:
    counts = dict(a)
    for name, k in b:
        have = counts.get(name, 0)
        if have < k:
            raise InputError(f"cannot remove {k} x {name!r} from {a}")
        counts[name] = have - k
    return tuple(sorted((n, k) for n, k in counts.items() if k))


def ms_size(a: Multiset) -> int:
    return sum(k for _, k in a)


def ms_format(a: Multiset) -> str:
    if not a:
        return "{}"
    return "{" + ", ".join(f"{k}*{name}" if k > 1 else name for name, k in a) + "}"


@dataclass(frozen=True)
class MorphismGenerator:
    name: str
    source: Multiset
    target: Multiset


@dataclass(frozen=True)
class PresentedSMC:
    """Finite presentation: named object generators plus rewrite rules whose
    source/target are multisets over the generators.  The unit object is the
    empty multiset."""

    objects: tuple[str, ...]
    morphisms: tuple[MorphismGenerator, ...]

    def __post_init__(self) -> None:
        if len(set(self.objects)) != len(self.objects):
            raise InputError("duplicate object generator names")
        declared = set(self.objects)
        for m in self.morphisms:
            for name, _ in m.source + m.target:
                if name not in declared:
                    raise InputError(f"morphism {m.name!r} references undeclared object {name!r}")


@dataclass(frozen=True)
class MultisetTheory(TheoryOracle):
    """The decategorified theory of a presentation.

    combine is multiset union, zero the empty multiset, and geq bounded
    breadth-first reachability (shortest rewrite traces first).  States
    larger than `state_cap` are pruned.  With `refute_by_conservation`
    the query is first tested against the rational span of the rule
    deltas: a target outside the reachable affine lattice is Refuted with
    a conserved linear functional as certificate.
    """

    presentation: PresentedSMC
    bound: int
    state_cap: int | None = None
    refute_by_conservation: bool = False

    def combine(self, a: Multiset, b: Multiset) -> Multiset:
        return ms_add(a, b)

    def zero(self) -> Multiset:
        return ()

    def validate_term(self, a: Multiset) -> None:
        declared = set(self.presentation.objects)
        for name, _ in a:
            if name not in declared:
                raise InputError(f"undeclared species {name!r}")

    def _delta_vectors(self) -> list[list[Fraction]]:
        objs = self.presentation.objects
        idx = {o: i for i, o in enumerate(objs)}
        deltas = []
        for m in self.presentation.morphisms:
            v = [Fraction(0)] * len(objs)
            for name, k in m.target:
                v[idx[name]] += k
            for name, k in m.source:
                v[idx[name]] -= k
            deltas.append(v)
        return deltas

    def conservation_certificate(self, a: Multiset, b: Multiset) -> tuple[tuple[str, Fraction], ...] | None:
        """A linear functional constant on every rule but separating a from b."""
        objs = self.presentation.objects
        idx = {o: i for i, o in enumerate(objs)}
        diff = [Fraction(0)] * len(objs)
        for name, k in b:
            diff[idx[name]] += k
        for name, k in a:
            diff[idx[name]] -= k
        deltas = self._delta_vectors()
        if in_span(deltas, diff):
            return None
        w = orthogonal_residual(deltas, diff)
        if w is None:
            return None
        return tuple((o, c) for o, c in zip(objs, w) if c != 0)

    def geq(self, a: Multiset, b: Multiset) -> Decision:
        self.validate_term(a)
        self.validate_term(b)
        if a == b:
            return Decision.proven(())
        if self.refute_by_conservation:
            cert = self.conservation_certificate(a, b)
            if cert is not None:
                return Decision.refuted(("conserved-functional", cert))
        cap = self.state_cap
        if cap is None:
            cap = max(ms_size(a), ms_size(b)) + self.bound
        seen = {a}
        frontier: deque[tuple[Multiset, tuple[str, ...]]] = deque([(a, ())])
        depth = 0
        while frontier and depth < self.bound:
            depth += 1
            for _ in range(len(frontier)):
                state, trace = frontier.popleft()
                for rule in self.presentation.morphisms:
                    if not ms_contains(state, rule.source):
                        continue
                    nxt = ms_add(ms_sub(state, rule.source), rule.target)
                    if nxt in seen or ms_size(nxt) > cap:
                        continue
                    nxt_trace = trace + (rule.name,)
                    if nxt == b:
                        return Decision.proven(nxt_trace)
                    seen.add(nxt)
                    frontier.append((nxt, nxt_trace))
        return Decision.unknown(self.bound)

    def enumerate_up_to(self, bound: int) -> list[Multiset]:
        objs = self.presentation.objects
        out: list[Multiset] = []

        def rec(i: int, remaining: int, acc: list[tuple[str, int]]) -> None:
            out.append(tuple(acc))
            if i == len(objs):
                return
            for k in range(1, remaining + 1):
                acc.append((objs[i], k))
                rec(i + 1, remaining - k, acc)
                acc.pop()
            rec(i + 1, remaining, acc)

        rec(0, bound, [])
        # rec() emits unsorted suffix choices; canonicalize and dedupe.
        canon = sorted({tuple(sorted(m)) for m in out}, key=lambda m: (ms_size(m), m))
        return canon

    def format_term(self, a: Multiset) -> str:
        return ms_format(a)


def decategorify(s: PresentedSMC, bound: int, state_cap: int | None = None,
                 refute_by_conservation: bool = False) -> MultisetTheory:
    """Collapse a presentation to its theory of resource convertibility."""
    return MultisetTheory(s, bound, state_cap, refute_by_conservation)
