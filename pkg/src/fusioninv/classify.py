"""Gauge and monoidal equivalence, zero-set orbits and classification reports."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import mpmath
from scipy.cluster.hierarchy import DisjointSet

from .invariants import InvariantBasis, evaluate_basis, evaluate_monomial, invariant_basis
from .numeric import DEFAULT_TOL, DEFAULT_ZERO_TOL, close, format_complex, to_complex
from .ring import Automorphism, BasedRing, automorphism_group, is_automorphism
from .symbols import (Monomial, NotAnAutomorphism, PhiIndex, Solution, apply_automorphism, sorted_zeros,
                      verify_solution, zero_set)

SCHEMA_VERSION = 1


@dataclass(eq=False)
class Profile:
    """What classification needs to know about a point: its zero set, the
    reference monomials with their values, and a way to evaluate any other
    invariant monomial supported off the zero set.

    Built either from a full solution or directly from invariant data.
    """
    name: str
    zeros: frozenset[PhiIndex]
    monomials: tuple[Monomial, ...]
    values: tuple
    lookup: Callable[[Monomial], object]
    solution: Solution | None = None

    def evaluate(self, m: Monomial):
        return self.lookup(m)

    @classmethod
    def from_solution(cls, ring: BasedRing, sol: Solution, basis: InvariantBasis | None = None,
                      zero_tol: float = DEFAULT_ZERO_TOL) -> Profile:
        zeros = zero_set(sol, zero_tol)
        if basis is None or basis.zeros != zeros:
            basis = invariant_basis(ring, zeros)
        record = evaluate_basis(sol, basis, zero_tol)
        return cls(sol.name, zeros, tuple(basis.monomials), tuple(record.values),
                   lambda m: evaluate_monomial(sol, m, zero_tol), sol)

    @classmethod
    def from_values(cls, name: str, zeros: Iterable[PhiIndex], monomials: Sequence[Monomial],
                    values: Sequence) -> Profile:
        table = dict(zip(monomials, values))

        def lookup(m):
            try:
                return table[m]
            except KeyError:
                raise KeyError(f"profile {name!r} has no value for {m}") from None
        return cls(name, frozenset(zeros), tuple(monomials), tuple(values), lookup)


def _profiles(ring: BasedRing, items, zero_tol: float, cache: dict) -> list[Profile]:
    out = []
    for item in items:
        if isinstance(item, Profile):
            out.append(item)
            continue
        zeros = zero_set(item, zero_tol)
        if zeros not in cache:
            cache[zeros] = invariant_basis(ring, zeros)
        out.append(Profile.from_solution(ring, item, cache[zeros], zero_tol))
    return out


def _same_values(p1: Profile, p2: Profile, tol: float) -> bool:
    if p1.monomials != p2.monomials:
        raise ValueError(f"profiles {p1.name!r} and {p2.name!r} use different reference monomials")
    return all(close(x, y, tol) for x, y in zip(p1.values, p2.values))


def gauge_equivalent(ring: BasedRing, s1, s2, tol: float = DEFAULT_TOL,
                     zero_tol: float = DEFAULT_ZERO_TOL) -> bool:
    """Equal zero sets and equal basis evaluations."""
    p1, p2 = _profiles(ring, [s1, s2], zero_tol, {})
    return p1.zeros == p2.zeros and _same_values(p1, p2, tol)


def _group(ring: BasedRing, group: Sequence[Automorphism] | None) -> list[Automorphism]:
    if group is None:
        return automorphism_group(ring)
    bad = [rho for rho in group if not is_automorphism(ring, rho)]
    if bad:
        raise NotAnAutomorphism(f"{bad[0]} is not an automorphism of {ring.name or 'the ring'}")
    return list(group)


def _witness(p1: Profile, p2: Profile, group: Sequence[Automorphism], ring: BasedRing, tol: float,
             images: Sequence[frozenset] | None = None):
    if images is None:
        images = [apply_automorphism(p1.zeros, rho) for rho in group]
    for rho, image in zip(group, images):
        if image != p2.zeros:
            continue
        try:
            if all(close(v, p2.evaluate(apply_automorphism(m, rho)), tol)
                   for m, v in zip(p1.monomials, p1.values)):
                return rho
        except KeyError:
            continue
    return None


def monoidal_equivalent(ring: BasedRing, s1, s2, tol: float = DEFAULT_TOL, zero_tol: float = DEFAULT_ZERO_TOL,
                        group: Sequence[Automorphism] | None = None) -> Automorphism | None:
    """An automorphism ``rho`` with ``rho·Z1 = Z2`` and ``F1(m) = F2(rho·m)`` for
    every basis monomial ``m`` of ``Z1``, or None.

    Automorphisms are tried in the order of :func:`automorphism_group`.
    """
    p1, p2 = _profiles(ring, [s1, s2], zero_tol, {})
    return _witness(p1, p2, _group(ring, group), ring, tol)


@dataclass
class OrbitReport:
    stabilizer: list[Automorphism]
    orbit: list[frozenset[PhiIndex]]

    def to_dict(self, ring: BasedRing) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "stabilizer_order": len(self.stabilizer),
            "orbit_size": len(self.orbit),
            "stabilizer": [rho.cycle_string() for rho in self.stabilizer],
            "orbit": [[p.to_dict() for p in sorted_zeros(ring, z)] for z in self.orbit],
        }


def zero_set_orbit(ring: BasedRing, zeros: Iterable[PhiIndex],
                   group: Sequence[Automorphism] | None = None) -> OrbitReport:
    """Stabilizer and orbit of a zero set; orbit members in order of first appearance."""
    zeros = frozenset(zeros)
    group = _group(ring, group)
    stab, orbit, seen = [], [], set()
    for rho in group:
        image = apply_automorphism(zeros, rho)
        if image == zeros:
            stab.append(rho)
        if image not in seen:
            seen.add(image)
            orbit.append(image)
    return OrbitReport(stab, orbit)


@dataclass
class SymmetrizedSum:
    """The sum of the distinct monomials in the Aut-orbits of some monomials."""
    terms: list[Monomial]

    def evaluate(self, target, zero_tol: float = DEFAULT_ZERO_TOL):
        if isinstance(target, Profile):
            vals = [target.evaluate(m) for m in self.terms]
        else:
            vals = [evaluate_monomial(target, m, zero_tol) for m in self.terms]
        if all(not isinstance(v, mpmath.mpc) for v in vals):
            return sum(vals)  # exact data stays exact
        return mpmath.fsum(to_complex(v) for v in vals)


def symmetrize(ring: BasedRing, monomials: Iterable[Monomial],
               group: Sequence[Automorphism] | None = None) -> SymmetrizedSum:
    group = _group(ring, group)
    terms: list[Monomial] = []
    seen = set()
    for m in monomials:
        for rho in group:
            image = apply_automorphism(m, rho)
            if image not in seen:
                seen.add(image)
                terms.append(image)
    return SymmetrizedSum(terms)


# classification ---------------------------------------------------------------

def _grid(values, tol: float) -> tuple:
    out = []
    for v in values:
        z = to_complex(v)
        out.append((int(mpmath.nint(z.real / tol)), int(mpmath.nint(z.imag / tol))))
    return tuple(out)


def _near(k1: tuple, k2: tuple) -> bool:
    return all(abs(a - b) <= 1 and abs(c - d) <= 1 for (a, c), (b, d) in zip(k1, k2))


def _digest(values) -> str:
    # rounded so that members of one class share a digest
    text = ";".join(mpmath.nstr(to_complex(v), 10) for v in values)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


@dataclass
class GaugeClass:
    id: int
    representative: str
    members: list[str]
    zero_set_id: int
    digest: str
    values: tuple


@dataclass
class MonoidalClass:
    id: int
    members: list[str]
    gauge_classes: list[int]
    witnesses: list[tuple[str, str, str]]  # (from, to, rho)


@dataclass
class Classification:
    gauge_classes: list[GaugeClass]
    monoidal_classes: list[MonoidalClass]
    zero_sets: list[frozenset[PhiIndex]]
    quarantine: list[tuple[str, str]] = field(default_factory=list)

    def summary(self) -> str:
        g, m = len(self.gauge_classes), len(self.monoidal_classes)
        return f"{g} gauge class{'es' * (g != 1)}, {m} monoidal class{'es' * (m != 1)}"

    def to_dict(self, ring: BasedRing) -> dict:
        def value(v):
            if isinstance(v, mpmath.mpc):
                re, im = format_complex(v)
                return {"re": re, "im": im}
            return {"exact": str(v)}
        return {
            "schema": SCHEMA_VERSION,
            "summary": self.summary(),
            "gauge_classes": [{"id": c.id, "representative": c.representative, "members": c.members,
                               "zero_set_id": c.zero_set_id, "digest": c.digest,
                               "values": [value(v) for v in c.values]} for c in self.gauge_classes],
            "monoidal_classes": [{"id": c.id, "members": c.members, "gauge_classes": c.gauge_classes,
                                  "witnesses": [{"from": a, "to": b, "rho": r} for a, b, r in c.witnesses]}
                                 for c in self.monoidal_classes],
            "zero_sets": [{"id": i, "size": len(z), "zeros": [p.to_dict() for p in sorted_zeros(ring, z)]}
                          for i, z in enumerate(self.zero_sets)],
            "quarantine": [{"name": n, "reason": r} for n, r in self.quarantine],
        }

    def format_table(self) -> str:
        lines = ["gauge classes", "id\tzero set\tdigest\tmembers"]
        for c in self.gauge_classes:
            lines.append(f"{c.id}\t{c.zero_set_id}\t{c.digest}\t{', '.join(c.members)}")
        lines += ["", "monoidal classes", "id\tgauge classes\tmembers\twitnesses"]
        for c in self.monoidal_classes:
            wit = "; ".join(f"{a} -> {b} by {r}" for a, b, r in c.witnesses) or "-"
            lines.append(f"{c.id}\t{','.join(map(str, c.gauge_classes))}\t{', '.join(c.members)}\t{wit}")
        if self.quarantine:
            lines += ["", "quarantine"] + [f"{n}\t{r}" for n, r in self.quarantine]
        lines += ["", self.summary()]
        return "\n".join(lines) + "\n"


def classify(ring: BasedRing, items: Sequence, tol: float = DEFAULT_TOL, zero_tol: float = DEFAULT_ZERO_TOL,
             group: Sequence[Automorphism] | None = None, verify: bool = True) -> Classification:
    """Partition solutions (or profiles) into gauge and then monoidal classes.

    Solutions failing verification are quarantined. Within a zero set, items
    are first matched against class representatives on the same tolerance
    grid cell, then against neighbouring cells with the exact pairwise test.
    """
    quarantine, kept = [], []
    for item in items:
        if verify and isinstance(item, Solution):
            report = verify_solution(ring, item, tol)
            if not report.ok:
                quarantine.append((item.name, report.summary()))
                continue
        kept.append(item)
    profiles = _profiles(ring, kept, zero_tol, {})

    zero_ids: dict[frozenset, int] = {}
    for p in profiles:
        zero_ids.setdefault(p.zeros, len(zero_ids))

    gauge = DisjointSet(range(len(profiles)))
    reps: dict[frozenset, list[tuple[int, tuple]]] = {}
    for i, p in enumerate(profiles):
        key = _grid(p.values, tol)
        bucket = reps.setdefault(p.zeros, [])
        same_cell = [r for r, k in bucket if k == key]
        nearby = [r for r, k in bucket if k != key and _near(k, key)]
        match = next((r for r in same_cell + nearby if _same_values(profiles[r], p, tol)), None)
        if match is None:
            bucket.append((i, key))
        else:
            gauge.merge(match, i)

    subsets = sorted((sorted(s) for s in gauge.subsets()), key=lambda s: s[0])
    gclasses = [GaugeClass(n, profiles[s[0]].name, [profiles[i].name for i in s], zero_ids[profiles[s[0]].zeros],
                           _digest(profiles[s[0]].values), profiles[s[0]].values) for n, s in enumerate(subsets)]

    group = _group(ring, group)
    rep = [profiles[s[0]] for s in subsets]
    images = [[apply_automorphism(p.zeros, rho) for rho in group] for p in rep]
    monoidal = DisjointSet(range(len(rep)))
    witnesses: list[tuple[int, int, Automorphism]] = []
    for i in range(len(rep)):
        for j in range(i + 1, len(rep)):
            if monoidal.connected(i, j):
                continue
            rho = _witness(rep[i], rep[j], group, ring, tol, images[i])
            if rho is not None:
                monoidal.merge(i, j)
                witnesses.append((i, j, rho))

    mclasses = []
    for n, s in enumerate(sorted((sorted(s) for s in monoidal.subsets()), key=lambda s: s[0])):
        members = [name for g in s for name in gclasses[g].members]
        wit = [(rep[i].name, rep[j].name, rho.cycle_string()) for i, j, rho in witnesses if i in s]
        mclasses.append(MonoidalClass(n, members, list(s), wit))
    return Classification(gclasses, mclasses, list(zero_ids), quarantine)
