"""Gauge-invariant monomials: basis computation, evaluation and localization."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import mpmath

from .lattice import ExponentMatrix, TransformPair, build_exponent_matrix, hnf_with_transform, kernel_basis, t_image
from .numeric import DEFAULT_MAX_DENOMINATOR, DEFAULT_TOL, DEFAULT_ZERO_TOL, format_complex, reconstruct_rational
from .ring import BasedRing, gamma_set
from .symbols import (Monomial, PentagonEquation, PhiIndex, Solution, SolutionDomainError, pentagon_instances,
                      zero_set, zeros_from_dict, zeros_to_dict)

SCHEMA_VERSION = 1

InvariantMonomial = Monomial


class ZeroSetMismatch(ValueError):
    """The solution's zero set differs from the one the basis was computed for."""


class InternalConsistencyError(RuntimeError):
    pass


class _Undefined:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


@dataclass
class InvariantBasis:
    """A basis of the invariant monomials supported off ``zeros``."""
    ring: BasedRing
    zeros: frozenset[PhiIndex]
    monomials: list[Monomial]
    matrix: ExponentMatrix
    pair: TransformPair

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def exponent_vector(self, m: Monomial) -> dict[int, int] | None:
        """``m`` as a sparse vector over the nonzero variables, None if it touches a zero."""
        index = self._row_index()
        out = {}
        for phi, k in m.items():
            if phi not in index:
                return None
            out[index[phi]] = k
        return out

    def _row_index(self) -> dict[PhiIndex, int]:
        if not hasattr(self, "_index"):
            self._index = {phi: i for i, phi in enumerate(self.matrix.row_labels)}
        return self._index

    def coordinates(self, m: Monomial) -> dict[int, int] | None:
        """Integer coordinates of ``m`` over the basis monomials, or None if ``m``
        is not a gauge-invariant monomial on the nonzero variables."""
        v = self.exponent_vector(m)
        if v is None:
            return None
        return self.pair.kernel_coordinates(v)

    def to_dict(self, ring_ref: str | None = None) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "ring": ring_ref or self.ring.name,
            "zero_set": zeros_to_dict(self.ring, self.zeros)["zeros"],
            "monomials": [{"exponents": m.to_list(self.ring)} for m in self.monomials],
        }


def invariant_basis(ring: BasedRing, zeros: Iterable[PhiIndex] = ()) -> InvariantBasis:
    """Exponent matrix -> Hermite normal form -> kernel rows -> monomials."""
    ring.require_multiplicity_free()
    zeros = frozenset(zeros)
    A = build_exponent_matrix(ring, zeros)
    pair = hnf_with_transform(A)
    monomials = [Monomial({A.row_labels[i]: k for i, k in v.items()}) for v in kernel_basis(pair)]
    return InvariantBasis(ring, zeros, monomials, A, pair)


def basis_from_dict(ring: BasedRing, data: Mapping) -> InvariantBasis:
    """Rebuild a basis from its file form; it must match the canonical basis."""
    zeros = zeros_from_dict(ring, {"zeros": data["zero_set"]})
    basis = invariant_basis(ring, zeros)
    stored = [Monomial.from_list(m["exponents"]) for m in data["monomials"]]
    if stored != basis.monomials:
        raise InternalConsistencyError("stored monomials differ from the basis computed for this zero set")
    return basis


def is_invariant(ring: BasedRing, m: Monomial) -> bool:
    col_index = {t: j for j, t in enumerate(gamma_set(ring))}
    total: dict[int, int] = {}
    for phi, k in m.items():
        for j, x in t_image(phi, col_index).items():
            total[j] = total.get(j, 0) + k * x
    return not any(total.values())


def evaluate_monomial(sol: Solution, m: Monomial, zero_tol: float = DEFAULT_ZERO_TOL):
    """``F(m) = Π F(φ)^k``; UNDEFINED when a negative power hits a zero value."""
    result = mpmath.mpc(1)
    vanishes = False
    for phi, k in m.items():
        try:
            v = sol.values[phi]
        except KeyError:
            raise SolutionDomainError(f"{phi} is not a variable of solution {sol.name!r}") from None
        if abs(v) < zero_tol:
            if k < 0:
                return UNDEFINED
            vanishes = True
            continue
        result *= v ** k
    return mpmath.mpc(0) if vanishes else result


@dataclass
class EvaluationRecord:
    values: list
    basis: InvariantBasis
    solution_name: str = ""

    def to_dict(self) -> dict:
        rows = []
        for i, v in enumerate(self.values):
            if v is UNDEFINED:
                rows.append({"monomial_index": i, "undefined": True})
            else:
                re, im = format_complex(v)
                rows.append({"monomial_index": i, "re": re, "im": im})
        return {"schema": SCHEMA_VERSION, "solution": self.solution_name, "values": rows}


def evaluate_basis(sol: Solution, basis: InvariantBasis, zero_tol: float = DEFAULT_ZERO_TOL) -> EvaluationRecord:
    if zero_set(sol, zero_tol) != basis.zeros:
        raise ZeroSetMismatch(f"solution {sol.name!r} has a different zero set; compute a basis for it")
    return EvaluationRecord([evaluate_monomial(sol, m, zero_tol) for m in basis.monomials], basis, sol.name)


@dataclass(frozen=True)
class LocalizedEquation:
    """``Σ sign · Π s_k^{c_k} = constant`` over the basis monomials ``s_k``.

    Obtained by dividing a pentagon equation by its first nonvanishing term.
    """
    source: PentagonEquation
    terms: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]
    constant: int

    def residual(self, basis_values: Sequence) -> mpmath.mpc:
        total = mpmath.mpc(0)
        for sign, coords in self.terms:
            prod = mpmath.mpc(1)
            for k, c in coords:
                prod *= mpmath.mpc(basis_values[k]) ** c
            total += sign * prod
        return total - self.constant

    def format(self) -> str:
        def mono(coords):
            return "·".join(f"s{k + 1}" if c == 1 else f"s{k + 1}^{c}" for k, c in coords) or "1"
        flip = -1 if self.terms and self.terms[0][0] < 0 else 1
        parts = []
        for i, (s, c) in enumerate(self.terms):
            s *= flip
            parts.append(("" if s > 0 else "-") + mono(c) if i == 0 else ("+ " if s > 0 else "- ") + mono(c))
        return f"{' '.join(parts) or '0'} = {flip * self.constant}"


def localize_pentagon(ring: BasedRing, zeros: Iterable[PhiIndex], basis: InvariantBasis,
                      equations: list[PentagonEquation] | None = None) -> list[LocalizedEquation]:
    """Rewrite every pentagon equation with a surviving term in basis coordinates."""
    zeros = frozenset(zeros)
    if zeros != basis.zeros:
        raise ZeroSetMismatch("basis was computed for a different zero set")
    if equations is None:
        equations = pentagon_instances(ring)
    out = []
    for eq in equations:
        live = [(s, Monomial.of(*t)) for s, t in eq.terms() if not zeros.intersection(t)]
        if not live:
            continue
        den_sign, den = live[0]
        terms = []
        for sign, m in live[1:]:
            coords = basis.coordinates(m / den)
            if coords is None:
                raise InternalConsistencyError(f"term ratio in {eq.outer} is not in the invariant lattice")
            terms.append((sign, tuple(sorted(coords.items()))))
        out.append(LocalizedEquation(eq, tuple(terms), -den_sign))
    return out


@dataclass
class RationalityVerdict:
    rational: bool
    values: list  # Fraction or None per monomial

    def __bool__(self):
        return self.rational


def rationality_check(record: EvaluationRecord | Sequence, max_denominator: int = DEFAULT_MAX_DENOMINATOR,
                      tol: float = DEFAULT_TOL) -> RationalityVerdict:
    """All basis evaluations rational? Then the category is gauge equivalent to
    its Galois conjugates."""
    values = record.values if isinstance(record, EvaluationRecord) else list(record)
    if any(v is UNDEFINED for v in values):
        raise ValueError("rationality check needs every evaluation to be defined")
    verdicts = [reconstruct_rational(v, tol, max_denominator) for v in values]
    return RationalityVerdict(all(q is not None for q in verdicts), verdicts)


def phi_coverage_check(basis: InvariantBasis) -> tuple[bool, list[PhiIndex]]:
    """Does every nonzero variable carry a nonzero power in some basis monomial?"""
    covered = set()
    for m in basis.monomials:
        covered.update(m)
    uncovered = [phi for phi in basis.matrix.row_labels if phi not in covered]
    return not uncovered, uncovered
