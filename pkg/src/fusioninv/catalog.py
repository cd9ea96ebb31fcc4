"""Built-in rings, solution fixtures and the encoded Rep(D(S3)) data.

The Rep(D(S3)) F-symbol solutions themselves are not available, so the zero
patterns and the invariant values of the eight distinguishing products are
stored here as data and turned into invariant-level stand-in profiles.
"""
from __future__ import annotations

import itertools
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .classify import Profile, zero_set_orbit
from .ring import Automorphism, BasedRing, automorphism_group, ring_from_dict
from .symbols import Monomial, PhiIndex, Solution, apply_automorphism, solution_from_dict

BUILTIN_RINGS = ("trivial", "fib", "z3", "repds3")
BUILTIN_SOLUTIONS = {"trivial": "trivial", "fib": "fib", "yanglee": "fib"}


def _read(name: str) -> dict:
    return json.loads(resources.files("fusioninv.data").joinpath(name).read_text(encoding="utf-8"))


def builtin_ring(name: str) -> BasedRing:
    if name not in BUILTIN_RINGS:
        raise KeyError(f"no built-in ring {name!r}; known: {', '.join(BUILTIN_RINGS)}")
    return ring_from_dict(_read(f"{name}.json"), name)


def builtin_solution(name: str, ring: BasedRing | None = None) -> Solution:
    if name not in BUILTIN_SOLUTIONS:
        raise KeyError(f"no built-in solution {name!r}; known: {', '.join(BUILTIN_SOLUTIONS)}")
    ring = ring or builtin_ring(BUILTIN_SOLUTIONS[name])
    return solution_from_dict(ring, _read(f"{name}_solution.json"), name)


def _builtin_stem(ref: str) -> str:
    stem = Path(ref).name
    for suffix in (".json", ".ring", ".sol"):
        if stem.endswith(suffix):
            stem = stem[: -len(suffix)]
    return stem.removesuffix("_solution")


def resolve_ring(ref: str) -> BasedRing:
    """A ring file path, or the name of a built-in ring (``fib``, ``fib.ring``)."""
    from .ring import load_ring
    if Path(ref).is_file():
        return load_ring(ref)
    stem = _builtin_stem(ref)
    if stem in BUILTIN_RINGS:
        return builtin_ring(stem)
    raise FileNotFoundError(f"{ref}: no such ring file or built-in ring")


def resolve_solution(ref: str, ring: BasedRing) -> Solution:
    from .symbols import load_solution
    if Path(ref).is_file():
        return load_solution(ref, ring)
    stem = _builtin_stem(ref)
    if stem in BUILTIN_SOLUTIONS:
        return builtin_solution(stem, ring)
    raise FileNotFoundError(f"{ref}: no such solution file or built-in solution")


# Z3 pointed ring ------------------------------------------------------------

def z3_remark_monomials(ring: BasedRing) -> tuple[Monomial, Monomial]:
    """Two invariant products swapped by the involution w <-> w2."""
    m1 = Monomial.of(PhiIndex("w", "w", "w", "1", "w2", "w2"), PhiIndex("w", "w2", "w", "w", "1", "1"),
                     PhiIndex("w", "1", "w", "w2", "w", "w"))
    rho = Automorphism.from_cycles(ring, [("w", "w2")])
    return m1, apply_automorphism(m1, rho, ring)


# Rep(D(S3)) -------------------------------------------------------------------

ALPHAS = ("a+", "a-")
BETAS = ("b1", "b2", "b3", "b4")

# index pairs (i, j) of the two-dimensional objects carrying the extra zeros
ZERO_PATTERN_PAIRS = {
    1: ((1, 2), (2, 1), (3, 3), (4, 4)),
    2: ((1, 2), (2, 1), (3, 4), (4, 3)),
    3: ((1, 1), (2, 2), (3, 3), (4, 4)),
}


def _b(i: int) -> str:
    return f"b{i}"


def repds3_common_zeros() -> frozenset[PhiIndex]:
    """Zeros shared by every solution: those of the adjoint subcategory."""
    z = {PhiIndex(*(6 * (_b(i),))) for i in range(1, 5)}
    for i, j, k in itertools.permutations(range(1, 5), 3):
        z.add(PhiIndex(_b(i), _b(j), _b(i), _b(j), _b(k), _b(k)))
    return frozenset(z)


def repds3_zero_pattern(k: int) -> frozenset[PhiIndex]:
    """Zero set number ``k`` (1, 2 or 3) in its unpermuted form."""
    z = set(repds3_common_zeros())
    for s, t in (("a+", "a-"), ("a-", "a+")):
        for i, j in ZERO_PATTERN_PAIRS[k]:
            bi, bj = _b(i), _b(j)
            z |= {PhiIndex(bi, s, bj, s, s, t), PhiIndex(bi, s, bj, s, t, s),
                  PhiIndex(bi, s, bj, t, s, s), PhiIndex(bi, s, bj, t, t, t),
                  PhiIndex(s, bi, s, bj, s, t), PhiIndex(s, bi, s, bj, t, s),
                  PhiIndex(s, bi, t, bj, s, s), PhiIndex(s, bi, t, bj, t, t),
                  PhiIndex(s, s, s, t, bi, bj), PhiIndex(s, s, t, s, bi, bj),
                  PhiIndex(s, t, s, s, bi, bj), PhiIndex(t, s, s, s, bi, bj)}
    return frozenset(z)


def repds3_zero_sets(ring: BasedRing, group: list[Automorphism] | None = None) -> list[frozenset[PhiIndex]]:
    """All zero sets: the Aut-orbits of the three patterns, in a fixed order."""
    group = group or automorphism_group(ring)
    out = []
    for k in ZERO_PATTERN_PAIRS:
        out.extend(zero_set_orbit(ring, repds3_zero_pattern(k), group).orbit)
    return out


def repds3_inv_monomials() -> list[Monomial]:
    """The eight products, ordered a+ (b1..b4) then a- (b1..b4)."""
    return [Monomial.of(PhiIndex(s, s, s, s, b, b), PhiIndex(s, b, s, b, s, s)) for s in ALPHAS for b in BETAS]


_L, _S = Fraction(2, 3), Fraction(1, 6)

# (zero pattern, permutation cycles, values of the eight products up to an overall sign)
STANDIN_ROWS = [
    (1, (), (_L, _L, _S, _S)),
    (1, (("b2", "b3"),), (_L, _S, _L, _S)),
    (1, (("b2", "b3", "b4"),), (_L, _S, _S, _L)),
    (1, (("b1", "b3", "b2"),), (_S, _L, _L, _S)),
    (1, (("b1", "b3", "b4", "b2"),), (_S, _L, _S, _L)),
    (1, (("b1", "b3"), ("b2", "b4")), (_S, _S, _L, _L)),
]


def _row_name(k: int, cycles, extra: str = "") -> str:
    perm = "".join("(" + " ".join(c) + ")" for c in cycles) or "unpermuted"
    return f"zero set {k}, {perm}{extra}"


def repds3_standins(ring: BasedRing, group: list[Automorphism] | None = None) -> list[Profile]:
    """Twenty invariant-level stand-ins, one per gauge class.

    A row labelled by a permutation sigma carries the zero set sigma^-1 applied
    to the unpermuted pattern; this is the reading under which each row's
    large values sit on the labels of the off-diagonal pair.
    """
    group = group or automorphism_group(ring)
    monos = repds3_inv_monomials()
    out: list[Profile] = []

    def add(name, zeros, vals):
        out.append(Profile.from_values(name, zeros, monos, vals))

    for k, cycles, vals in STANDIN_ROWS:
        sigma = Automorphism.from_cycles(ring, cycles)
        zeros = apply_automorphism(repds3_zero_pattern(k), sigma.inverse(), ring)
        for sign in (1, -1):
            add(_row_name(k, cycles, " +" if sign > 0 else " -"), zeros, [sign * v for v in vals * 2])
    for n, zeros in enumerate(zero_set_orbit(ring, repds3_zero_pattern(2), group).orbit):
        for sign in (1, -1):
            add(f"zero set 2, orbit member {n + 1}" + (" +" if sign > 0 else " -"), zeros, [sign * _S] * 8)
    z3 = repds3_zero_pattern(3)
    add(_row_name(3, ()), z3, [_L] * 4 + [-_L] * 4)
    add(_row_name(3, (("a+", "a-"),)), z3, [-_L] * 4 + [_L] * 4)
    return out
