"""F-symbol variables, pentagon equations, solutions and the group actions on them."""
from __future__ import annotations

import json
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple

import mpmath

from .numeric import DEFAULT_TOL, DEFAULT_ZERO_TOL, format_complex, parse_complex, to_complex
from .ring import Automorphism, BasedRing, FusionTriple, gamma_set, is_automorphism


class SolutionDomainError(ValueError):
    """A solution's index set does not match the ring's F-symbol variables."""


class ZeroGaugeEntry(ValueError):
    pass


class NotAnAutomorphism(ValueError):
    pass


class PhiIndex(NamedTuple):
    """The variable ``Φ_{abc}^{d;ef}``: entry ``(e, f)`` of the matrix ``Φ_{abc}^d``."""
    a: str
    b: str
    c: str
    d: str
    e: str
    f: str

    def __str__(self):
        return f"Φ[{self.a} {self.b} {self.c}; {self.d}; {self.e} {self.f}]"

    def triples(self) -> tuple[FusionTriple, FusionTriple, FusionTriple, FusionTriple]:
        """``(γ_ab^e, γ_ec^d, γ_bc^f, γ_af^d)``; the first two enter the gauge weight
        with exponent +1 and the last two with -1."""
        a, b, c, d, e, f = self
        return (FusionTriple(a, b, e), FusionTriple(e, c, d),
                FusionTriple(b, c, f), FusionTriple(a, f, d))

    def to_dict(self) -> dict[str, str]:
        return self._asdict()


def phi_key(ring: BasedRing, phi: PhiIndex) -> tuple[int, ...]:
    """Canonical sort key: basis positions of (a, b, c, d, f, e).

    The column label ``f`` is compared before the row label ``e``; this is the
    order under which the Fibonacci exponent matrix comes out as published.
    """
    p = ring.position
    return (p[phi.a], p[phi.b], p[phi.c], p[phi.d], p[phi.f], p[phi.e])


def is_admissible(ring: BasedRing, phi: PhiIndex) -> bool:
    return all(ring.n(*t) for t in phi.triples())


def phi_set(ring: BasedRing) -> list[PhiIndex]:
    """All admissible F-symbol variables of a multiplicity-free ring, canonically ordered."""
    ring.require_multiplicity_free()
    out = []
    for a in ring.basis:
        for b in ring.basis:
            for c in ring.basis:
                for f in ring.products(b, c):
                    for e in ring.products(a, b):
                        for d in ring.products(e, c):
                            if ring.n(a, f, d):
                                out.append(PhiIndex(a, b, c, d, e, f))
    out.sort(key=lambda phi: phi_key(ring, phi))
    return out


class Monomial(Mapping):
    """A Laurent monomial in the F-symbol variables: a sparse map ``PhiIndex -> int``."""

    __slots__ = ("_exp", "_hash")

    def __init__(self, exponents: Mapping | Iterable = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        exp: dict[PhiIndex, int] = {}
        for phi, k in items:
            phi = PhiIndex(*phi)
            exp[phi] = exp.get(phi, 0) + int(k)
        self._exp = {phi: k for phi, k in exp.items() if k}
        self._hash = None

    def __getitem__(self, phi):
        return self._exp[phi]

    def __iter__(self):
        return iter(self._exp)

    def __len__(self):
        return len(self._exp)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._exp.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Monomial):
            return self._exp == other._exp
        return NotImplemented

    def __mul__(self, other: Monomial) -> Monomial:
        exp = dict(self._exp)
        for phi, k in other.items():
            exp[phi] = exp.get(phi, 0) + k
        return Monomial(exp)

    def __pow__(self, n: int) -> Monomial:
        return Monomial({phi: k * n for phi, k in self._exp.items()})

    def inverse(self) -> Monomial:
        return self ** -1

    def __truediv__(self, other: Monomial) -> Monomial:
        return self * other.inverse()

    def __repr__(self):
        body = " ".join(f"{phi}^{k}" for phi, k in self._exp.items())
        return f"Monomial({body or '1'})"

    @classmethod
    def of(cls, *phis: PhiIndex) -> Monomial:
        """Product of the given variables (repeats raise the power)."""
        return cls((phi, 1) for phi in phis)

    def sorted_items(self, ring: BasedRing) -> list[tuple[PhiIndex, int]]:
        """Positive exponents first, each group in canonical variable order."""
        key = lambda item: (item[1] < 0, phi_key(ring, item[0]))
        return sorted(self._exp.items(), key=key)

    def format(self, ring: BasedRing) -> str:
        parts = [str(phi) if k == 1 else f"{phi}^{k}" for phi, k in self.sorted_items(ring)]
        return " · ".join(parts) or "1"

    def to_list(self, ring: BasedRing) -> list[dict]:
        return [{**phi.to_dict(), "k": k} for phi, k in self.sorted_items(ring)]

    @classmethod
    def from_list(cls, entries: Iterable[Mapping]) -> Monomial:
        return cls((PhiIndex(*(e[x] for x in "abcdef")), e["k"]) for e in entries)


@dataclass(frozen=True)
class Solution:
    """An assignment ``F: Φ(ring) -> k``; a candidate point of the fusion variety."""
    ring: BasedRing
    values: Mapping[PhiIndex, mpmath.mpc]
    name: str = ""
    note: str = ""

    def __getitem__(self, phi: PhiIndex) -> mpmath.mpc:
        return self.values[phi]

    def replace(self, values=None, name=None, note=None) -> Solution:
        return Solution(self.ring, self.values if values is None else values,
                        self.name if name is None else name, self.note if note is None else note)

    def check_domain(self) -> None:
        expected = set(phi_set(self.ring))
        got = set(self.values)
        if got != expected:
            missing = sorted(expected - got, key=lambda p: phi_key(self.ring, p))
            extra = sorted(got - expected)
            detail = f"missing {missing[0]}" if missing else f"not admissible {extra[0]}"
            raise SolutionDomainError(f"solution {self.name!r}: {detail}")

    def to_dict(self, ring_ref: str | None = None) -> dict:
        rows = []
        for phi in phi_set(self.ring):
            re, im = format_complex(self.values[phi])
            rows.append({**phi.to_dict(), "re": re, "im": im})
        return {"ring": ring_ref or self.ring.name, "name": self.name, "note": self.note, "values": rows}


def solution_from_dict(ring: BasedRing, data: Mapping, name: str = "") -> Solution:
    values = {}
    for i, row in enumerate(data.get("values", [])):
        try:
            phi = PhiIndex(*(row[x] for x in "abcdef"))
        except KeyError as exc:
            raise SolutionDomainError(f"values[{i}]: missing field {exc.args[0]!r}") from None
        if phi in values:
            raise SolutionDomainError(f"values[{i}]: duplicate entry for {phi}")
        values[phi] = parse_complex(row.get("re", "0"), row.get("im", "0"))
    sol = Solution(ring, values, name=data.get("name") or name, note=data.get("note", ""))
    sol.check_domain()
    return sol


def load_solution(path, ring: BasedRing) -> Solution:
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    return solution_from_dict(ring, data, name=path.stem)


def dump_solution(sol: Solution, path, ring_ref: str | None = None) -> None:
    Path(path).write_text(json.dumps(sol.to_dict(ring_ref), indent=1, ensure_ascii=False) + "\n",
                          encoding="utf-8")


class PentagonLabels(NamedTuple):
    """Outer labels of one pentagon instance.

    Left tree ((ab)c)d uses a⊗b→f, f⊗c→i, i⊗d→e; right tree a(b(cd)) uses
    c⊗d→h, b⊗h→j, a⊗j→e.
    """
    a: str
    b: str
    c: str
    d: str
    e: str
    f: str
    h: str
    i: str
    j: str


@dataclass(frozen=True)
class PentagonEquation:
    """``Σ lhs = Σ rhs``; each term is a product of F-symbol variables.

    ``lhs`` holds ``F_{fcd}^{e;ih} F_{abh}^{e;fj}`` when that product is
    admissible and is empty otherwise (the left side then vanishes).
    ``rhs`` holds ``F_{abc}^{i;fg} F_{agd}^{e;ij} F_{bcd}^{j;gh}`` for each
    admissible internal label ``g`` listed in ``internal``.
    """
    outer: PentagonLabels
    lhs: tuple[tuple[PhiIndex, ...], ...]
    rhs: tuple[tuple[PhiIndex, ...], ...]
    internal: tuple[str, ...]

    def terms(self) -> list[tuple[int, tuple[PhiIndex, ...]]]:
        """Signed terms of ``lhs - rhs`` in canonical order (lhs first, then rhs by g)."""
        return [(1, t) for t in self.lhs] + [(-1, t) for t in self.rhs]

    def residual(self, values: Mapping[PhiIndex, mpmath.mpc]) -> mpmath.mpc:
        total = mpmath.mpc(0)
        for sign, term in self.terms():
            prod = mpmath.mpc(1)
            for phi in term:
                prod *= values[phi]
            total += sign * prod
        return total


def pentagon_instances(ring: BasedRing) -> list[PentagonEquation]:
    """Every pentagon equation of a multiplicity-free ring with at least one term."""
    ring.require_multiplicity_free()
    B, P, n = ring.basis, ring.products, ring.n
    out = []
    for a in B:
        for b in B:
            for c in B:
                for d in B:
                    for f in P(a, b):
                        for i in P(f, c):
                            for e in P(i, d):
                                for h in P(c, d):
                                    for j in P(b, h):
                                        if not n(a, j, e):
                                            continue
                                        lhs = ()
                                        if n(f, h, e):
                                            lhs = ((PhiIndex(f, c, d, e, i, h), PhiIndex(a, b, h, e, f, j)),)
                                        rhs, gs = [], []
                                        for g in P(b, c):
                                            if n(a, g, i) and n(g, d, j):
                                                rhs.append((PhiIndex(a, b, c, i, f, g),
                                                            PhiIndex(a, g, d, e, i, j),
                                                            PhiIndex(b, c, d, j, g, h)))
                                                gs.append(g)
                                        if lhs or rhs:
                                            out.append(PentagonEquation(
                                                PentagonLabels(a, b, c, d, e, f, h, i, j),
                                                lhs, tuple(rhs), tuple(gs)))
    return out


def f_blocks(ring: BasedRing) -> dict[tuple[str, str, str, str], tuple[list[str], list[str]]]:
    """Row labels ``e`` and column labels ``f`` of each matrix ``F_{abc}^d``."""
    blocks: dict = {}
    for phi in phi_set(ring):
        rows, cols = blocks.setdefault((phi.a, phi.b, phi.c, phi.d), ([], []))
        if phi.e not in rows:
            rows.append(phi.e)
        if phi.f not in cols:
            cols.append(phi.f)
    for rows, cols in blocks.values():
        rows.sort(key=ring.position.__getitem__)
        cols.sort(key=ring.position.__getitem__)
    return blocks


@dataclass
class VerificationReport:
    unit_violations: list[tuple[PhiIndex, mpmath.mpc]] = field(default_factory=list)
    vanishing_violations: list[PhiIndex] = field(default_factory=list)
    pentagon_violations: list[tuple[PentagonEquation, mpmath.mpf]] = field(default_factory=list)
    singular_blocks: list[tuple[tuple[str, str, str, str], mpmath.mpf]] = field(default_factory=list)
    equations_checked: int = 0
    max_residual: mpmath.mpf = mpmath.mpf(0)

    @property
    def ok(self) -> bool:
        return not (self.unit_violations or self.vanishing_violations
                    or self.pentagon_violations or self.singular_blocks)

    def summary(self) -> str:
        return (f"{len(self.unit_violations)} unit, {len(self.vanishing_violations)} vanishing, "
                f"{len(self.pentagon_violations)} pentagon, {len(self.singular_blocks)} singular "
                f"(of {self.equations_checked} pentagon equations; max residual "
                f"{mpmath.nstr(self.max_residual, 3)})")


def verify_solution(ring: BasedRing, sol: Solution, tol: float = DEFAULT_TOL,
                    equations: list[PentagonEquation] | None = None) -> VerificationReport:
    """Check unit constraints, ``F_{aa*a}^{a;11} != 0``, pentagons and invertibility."""
    if sol.ring != ring:
        raise SolutionDomainError(f"solution {sol.name!r} belongs to a different ring")
    sol.check_domain()
    F = sol.values
    report = VerificationReport()
    for phi, v in F.items():
        if phi.b == ring.unit and abs(v - 1) >= tol:
            report.unit_violations.append((phi, v))
    for a in ring.basis:
        phi = PhiIndex(a, ring.dual[a], a, a, ring.unit, ring.unit)
        if abs(F[phi]) < tol:
            report.vanishing_violations.append(phi)
    if equations is None:
        equations = pentagon_instances(ring)
    report.equations_checked = len(equations)
    for eq in equations:
        r = abs(eq.residual(F))
        report.max_residual = max(report.max_residual, r)
        if r > tol:
            report.pentagon_violations.append((eq, r))
    for abcd, (rows, cols) in f_blocks(ring).items():
        a, b, c, d = abcd
        m = mpmath.matrix(len(rows), len(cols))
        for r, e in enumerate(rows):
            for s, f in enumerate(cols):
                m[r, s] = F[PhiIndex(a, b, c, d, e, f)]
        det = abs(mpmath.det(m)) if len(rows) == len(cols) else mpmath.mpf(0)
        if det < tol:
            report.singular_blocks.append((abcd, det))
    return report


def zero_set(sol: Solution, zero_tol: float = DEFAULT_ZERO_TOL) -> frozenset[PhiIndex]:
    """``F^{-1}(0)`` under the zero threshold."""
    return frozenset(phi for phi, v in sol.values.items() if abs(v) < zero_tol)


def sorted_zeros(ring: BasedRing, zeros: Iterable[PhiIndex]) -> list[PhiIndex]:
    return sorted(zeros, key=lambda p: phi_key(ring, p))


def zeros_to_dict(ring: BasedRing, zeros: Iterable[PhiIndex], ring_ref: str | None = None) -> dict:
    return {"ring": ring_ref or ring.name, "zeros": [phi.to_dict() for phi in sorted_zeros(ring, zeros)]}


def zeros_from_dict(ring: BasedRing, data: Mapping) -> frozenset[PhiIndex]:
    zeros = frozenset(PhiIndex(*(z[x] for x in "abcdef")) for z in data["zeros"])
    bad = [phi for phi in zeros if not is_admissible(ring, phi)]
    if bad:
        raise SolutionDomainError(f"zero set entry {bad[0]} is not an F-symbol variable")
    return zeros


GaugeVector = dict  # FusionTriple -> nonzero number


def gauge_factor(g: Mapping[FusionTriple, object], phi: PhiIndex):
    """Multiplier of ``F(phi)`` under the gauge ``g``; missing entries count as 1."""
    up1, up2, down1, down2 = (g.get(t, 1) for t in phi.triples())
    return up1 * up2 / (down1 * down2)


def apply_gauge(sol: Solution, g: Mapping[FusionTriple, object]) -> Solution:
    """``(g·F)_{abc}^{d;ef} = g_ab^e g_ec^d F_{abc}^{d;ef} / (g_bc^f g_af^d)``."""
    for t, v in g.items():
        if v == 0:
            raise ZeroGaugeEntry(f"gauge entry at {t} is zero")
    g = {t: (v if isinstance(v, (int, Fraction)) else to_complex(v)) for t, v in g.items()}
    values = {phi: to_complex(gauge_factor(g, phi)) * v for phi, v in sol.values.items()}
    return sol.replace(values=values)


def compose_gauges(g: Mapping, h: Mapping) -> dict:
    return {t: g.get(t, 1) * h.get(t, 1) for t in set(g) | set(h)}


def sample_normalized_gauge(ring: BasedRing, seed: int) -> dict[FusionTriple, Fraction]:
    """Random gauge with entries ±p/q (p, q in 1..100), fixed to 1 on unit triples."""
    rng = random.Random(seed)
    g = {}
    for t in gamma_set(ring):
        if ring.unit in (t.a, t.b):
            g[t] = Fraction(1)
        else:
            p, q = rng.randint(1, 100), rng.randint(1, 100)
            g[t] = Fraction(p, q) * rng.choice((1, -1))
    return g


def _check_rho(ring: BasedRing | None, rho: Automorphism) -> None:
    if ring is not None and not is_automorphism(ring, rho):
        raise NotAnAutomorphism(f"{rho} is not an automorphism of {ring.name or 'the ring'}")


def act_phi(rho: Automorphism, phi: PhiIndex) -> PhiIndex:
    return PhiIndex(*(rho(x) for x in phi))


def apply_automorphism(target, rho: Automorphism, ring: BasedRing | None = None):
    """Act with ``rho`` on a Solution, PhiIndex, zero set or Monomial.

    Indices map labelwise, ``ρ·Φ_{abc}^{d;ef} = Φ_{ρa ρb ρc}^{ρd;ρe ρf}``; a
    solution is transported along, ``(ρ·F)(ρ·φ) = F(φ)``.
    """
    if isinstance(target, Solution):
        _check_rho(target.ring, rho)
        return target.replace(values={act_phi(rho, phi): v for phi, v in target.values.items()})
    _check_rho(ring, rho)
    if isinstance(target, PhiIndex):
        return act_phi(rho, target)
    if isinstance(target, Monomial):
        return Monomial({act_phi(rho, phi): k for phi, k in target.items()})
    if isinstance(target, (frozenset, set)):
        return frozenset(act_phi(rho, phi) for phi in target)
    raise TypeError(f"cannot apply an automorphism to {type(target).__name__}")
