"""Based (fusion) rings: parsing, validation, fusion triples and automorphisms."""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence


class RingParseError(ValueError):
    """Malformed ring description; the message names the offending location."""


class NotMultiplicityFree(ValueError):
    pass


class FusionTriple(NamedTuple):
    """``gamma_{ab}^c``: a nonzero structure constant ``N_{ab}^c``."""
    a: str
    b: str
    c: str

    def __str__(self):
        return f"γ[{self.a},{self.b};{self.c}]"


class BasedRing:
    """A unital based ring with duality.

    ``N`` maps label triples to nonnegative integers; absent triples are 0.
    Construction does not check the ring axioms, see :func:`validate_ring`.
    """

    def __init__(self, basis: Sequence[str], unit: str, dual: Mapping[str, str],
                 N: Mapping[tuple[str, str, str], int], name: str = ""):
        self.basis = tuple(basis)
        self.unit = unit
        self.dual = dict(dual)
        self.N = {tuple(k): int(v) for k, v in N.items() if v}
        self.name = name
        self.position = {x: i for i, x in enumerate(self.basis)}
        self._products: dict[tuple[str, str], tuple[str, ...]] = {}
        for x in self.basis:
            for y in self.basis:
                self._products[x, y] = tuple(z for z in self.basis if self.N.get((x, y, z), 0))

    def __repr__(self):
        return f"BasedRing({self.name or list(self.basis)!r}, rank={len(self.basis)})"

    def __eq__(self, other):
        if not isinstance(other, BasedRing):
            return NotImplemented
        return (self.basis, self.unit, self.dual, self.N) == (other.basis, other.unit, other.dual, other.N)

    def __hash__(self):
        return hash((self.basis, self.unit, len(self.N)))

    def __len__(self):
        return len(self.basis)

    def n(self, x: str, y: str, z: str) -> int:
        return self.N.get((x, y, z), 0)

    def products(self, x: str, y: str) -> tuple[str, ...]:
        """Labels ``z`` with ``N_{xy}^z != 0``, in basis order."""
        return self._products[x, y]

    @property
    def multiplicity_free(self) -> bool:
        return all(v == 1 for v in self.N.values())

    def require_multiplicity_free(self) -> None:
        if not self.multiplicity_free:
            bad = sorted((k for k, v in self.N.items() if v > 1), key=self.triple_key)
            raise NotMultiplicityFree(f"ring {self.name!r} has N>1 at {bad[0]}")

    def triple_key(self, t: Sequence[str]) -> tuple[int, ...]:
        return tuple(self.position[x] for x in t)

    def to_dict(self) -> dict:
        fusion = []
        for t in sorted(self.N, key=self.triple_key):
            v = self.N[t]
            fusion.append(list(t) if v == 1 else [*t, v])
        return {"name": self.name, "basis": list(self.basis), "unit": self.unit,
                "dual": {x: self.dual[x] for x in self.basis}, "fusion": fusion}


def parse_ring(text: str, name: str = "") -> BasedRing:
    """Parse the JSON ring format; ring axioms are *not* checked here."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RingParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return ring_from_dict(data, name=name)


def ring_from_dict(data: Mapping, name: str = "") -> BasedRing:
    if not isinstance(data, Mapping):
        raise RingParseError("top level: expected a JSON object")
    for key in ("basis", "unit", "dual", "fusion"):
        if key not in data:
            raise RingParseError(f"missing field {key!r}")
    basis = data["basis"]
    if not isinstance(basis, list) or not basis or not all(isinstance(x, str) for x in basis):
        raise RingParseError("field 'basis': expected a nonempty list of strings")
    seen = set()
    for x in basis:
        if x in seen:
            raise RingParseError(f"field 'basis': duplicate label {x!r}")
        seen.add(x)

    def check(label, where):
        if label not in seen:
            raise RingParseError(f"{where}: unknown label {label!r}")
        return label

    unit = check(data["unit"], "field 'unit'")
    if not isinstance(data["dual"], Mapping):
        raise RingParseError("field 'dual': expected an object")
    dual = {check(k, "field 'dual'"): check(v, f"field 'dual'[{k!r}]") for k, v in data["dual"].items()}
    missing = [x for x in basis if x not in dual]
    if missing:
        raise RingParseError(f"field 'dual': no dual given for {missing[0]!r}")

    N = {}
    for i, entry in enumerate(data["fusion"]):
        where = f"field 'fusion'[{i}]"
        if not isinstance(entry, list) or len(entry) not in (3, 4):
            raise RingParseError(f"{where}: expected [a, b, c] or [a, b, c, N]")
        a, b, c = (check(x, where) for x in entry[:3])
        mult = entry[3] if len(entry) == 4 else 1
        if not isinstance(mult, int) or isinstance(mult, bool) or mult < 0:
            raise RingParseError(f"{where}: multiplicity must be a nonnegative integer")
        if (a, b, c) in N:
            raise RingParseError(f"{where}: duplicate triple ({a}, {b}, {c})")
        N[a, b, c] = mult
    return BasedRing(basis, unit, dual, N, name=name or data.get("name", ""))


def load_ring(path) -> BasedRing:
    from pathlib import Path
    path = Path(path)
    return parse_ring(path.read_text(encoding="utf-8"), name=path.stem)


@dataclass(frozen=True)
class Violation:
    kind: str  # "dual", "unit", "associativity", "duality"
    witness: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.kind} at ({', '.join(map(str, self.witness))}): {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    multiplicity_free: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def validate_ring(ring: BasedRing, strict_duality: bool = False) -> ValidationReport:
    """Check the based-ring axioms, listing every violation with a witness.

    With ``strict_duality`` the full symmetry ``N_{xy}^z = N_{y*x*}^{z*}``
    is checked in addition to ``N_{xy}^1 = δ_{y,x*}``.
    """
    report = ValidationReport(multiplicity_free=ring.multiplicity_free)
    B, one, dual, n = ring.basis, ring.unit, ring.dual, ring.n
    add = report.violations.append

    if dual.get(one) != one:
        add(Violation("dual", (one,), "dual of the unit must be the unit"))
    if sorted(dual.values()) != sorted(B):
        add(Violation("dual", tuple(B), "dual is not a bijection"))
    for x in B:
        if dual.get(dual.get(x)) != x:
            add(Violation("dual", (x,), "dual is not an involution"))

    for x, y in itertools.product(B, B):
        expected = int(x == y)
        if n(one, x, y) != expected:
            add(Violation("unit", (one, x, y), f"N = {n(one, x, y)}, expected {expected}"))
        if x != one and n(x, one, y) != expected:
            add(Violation("unit", (x, one, y), f"N = {n(x, one, y)}, expected {expected}"))

    for X, Y, Z, W in itertools.product(B, repeat=4):
        lhs = sum(n(X, Y, U) * n(U, Z, W) for U in ring.products(X, Y))
        rhs = sum(n(Y, Z, V) * n(X, V, W) for V in ring.products(Y, Z))
        if lhs != rhs:
            add(Violation("associativity", (X, Y, Z, W), f"{lhs} != {rhs}"))

    for x, y in itertools.product(B, B):
        expected = int(dual.get(x) == y)
        if n(x, y, one) != expected:
            add(Violation("duality", (x, y, one), f"N = {n(x, y, one)}, expected {expected}"))
    if strict_duality:
        for (x, y, z), v in ring.N.items():
            if {x, y, z} <= dual.keys() and n(dual[y], dual[x], dual[z]) != v:
                add(Violation("duality", (x, y, z), "N not symmetric under the anti-involution"))
    return report


def gamma_set(ring: BasedRing) -> list[FusionTriple]:
    """All nonzero triples, lexicographic by basis position."""
    return [FusionTriple(*t) for t in sorted(ring.N, key=ring.triple_key)]


def n_extended(ring: BasedRing, factors: Sequence[str], target: str) -> int:
    """``N_{X_1...X_n}^Y`` by left-to-right contraction."""
    if not factors:
        raise ValueError("factors must be nonempty")
    # coefficient vector of X_1 ... X_k in the basis
    vec = Counter({factors[0]: 1})
    for x in factors[1:]:
        nxt: Counter = Counter()
        for z, c in vec.items():
            for w in ring.products(z, x):
                nxt[w] += c * ring.n(z, x, w)
        vec = nxt
    return vec.get(target, 0)


@dataclass(frozen=True)
class Automorphism:
    """A basis permutation; ``images[i]`` is the image of ``basis[i]``."""
    basis: tuple[str, ...]
    images: tuple[str, ...]

    def __call__(self, x: str) -> str:
        return self.images[self.basis.index(x)]

    @classmethod
    def identity(cls, ring: BasedRing) -> Automorphism:
        return cls(ring.basis, ring.basis)

    @classmethod
    def from_mapping(cls, ring: BasedRing, mapping: Mapping[str, str]) -> Automorphism:
        """Build from a partial mapping; unmapped labels are fixed."""
        return cls(ring.basis, tuple(mapping.get(x, x) for x in ring.basis))

    @classmethod
    def from_cycles(cls, ring: BasedRing, cycles: Iterable[Sequence[str]]) -> Automorphism:
        mapping = {}
        for cyc in cycles:
            for x, y in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                mapping[x] = y
        return cls.from_mapping(ring, mapping)

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.basis, self.images))

    def compose(self, other: Automorphism) -> Automorphism:
        """``self ∘ other``: apply ``other`` first."""
        return Automorphism(self.basis, tuple(self(other(x)) for x in self.basis))

    __mul__ = compose

    def inverse(self) -> Automorphism:
        inv = {y: x for x, y in zip(self.basis, self.images)}
        return Automorphism(self.basis, tuple(inv[x] for x in self.basis))

    def is_identity(self) -> bool:
        return self.basis == self.images

    def cycles(self) -> list[tuple[str, ...]]:
        m, seen, out = self.as_dict(), set(), []
        for x in self.basis:
            if x in seen or m[x] == x:
                continue
            cyc = [x]
            seen.add(x)
            y = m[x]
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = m[y]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cyc = self.cycles()
        return "".join(f"({' '.join(c)})" for c in cyc) if cyc else "()"

    def __str__(self):
        return self.cycle_string()


def is_automorphism(ring: BasedRing, rho: Automorphism) -> bool:
    if rho.basis != ring.basis or sorted(rho.images) != sorted(ring.basis):
        return False
    if rho(ring.unit) != ring.unit:
        return False
    if any(rho(ring.dual[x]) != ring.dual[rho(x)] for x in ring.basis):
        return False
    return all(ring.n(rho(x), rho(y), rho(z)) == v for (x, y, z), v in ring.N.items()) and \
        len(ring.N) == len({(rho(x), rho(y), rho(z)) for (x, y, z) in ring.N})


def _signature(ring: BasedRing, x: str) -> tuple:
    # permutation-invariant data of the left and right fusion matrices of x
    B = ring.basis
    left = sorted(tuple(sorted(ring.n(x, y, z) for z in B)) for y in B)
    right = sorted(tuple(sorted(ring.n(y, x, z) for z in B)) for y in B)
    trace = sum(ring.n(x, y, y) for y in B)
    return (x == ring.unit, ring.dual[x] == x, trace, tuple(left), tuple(right))


def automorphism_group(ring: BasedRing) -> list[Automorphism]:
    """All based-ring automorphisms, sorted by image positions (identity first)."""
    B = ring.basis
    sig = {x: _signature(ring, x) for x in B}
    candidates = {x: [y for y in B if sig[y] == sig[x]] for x in B}
    found: list[Automorphism] = []
    images: dict[str, str] = {}
    used: set[str] = set()

    def consistent(x: str) -> bool:
        y = images[x]
        d = ring.dual[x]
        if d in images and images[d] != ring.dual[y]:
            return False
        assigned = list(images)
        for u, v, w in itertools.product(assigned, repeat=3):
            if x in (u, v, w) and ring.n(u, v, w) != ring.n(images[u], images[v], images[w]):
                return False
        return True

    def search(k: int) -> None:
        if k == len(B):
            found.append(Automorphism(B, tuple(images[x] for x in B)))
            return
        x = B[k]
        for y in candidates[x]:
            if y in used:
                continue
            images[x] = y
            used.add(y)
            if consistent(x):
                search(k + 1)
            used.discard(y)
            del images[x]

    search(0)
    found.sort(key=lambda r: ring.triple_key(r.images))
    return found
