"""Exact integer lattice algebra: exponent matrices, row Hermite normal form, kernels.

Vectors and matrix rows are kept sparse (``dict[int, int]`` column -> value)
because the exponent matrices of interest have thousands of rows with at most
four nonzero entries each. All arithmetic uses Python integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .ring import BasedRing, FusionTriple, gamma_set
from .symbols import PhiIndex, phi_set

SparseVec = dict  # column index -> nonzero int
Vector = Union[Sequence[int], Mapping[int, int]]


def sparse(v: Vector) -> SparseVec:
    if isinstance(v, Mapping):
        return {int(j): int(x) for j, x in v.items() if x}
    return {j: int(x) for j, x in enumerate(v) if x}


def dense(v: Mapping[int, int], n: int) -> list[int]:
    out = [0] * n
    for j, x in v.items():
        out[j] = x
    return out


@dataclass(frozen=True)
class ExponentMatrix:
    """Row ``i`` is the gauge weight of ``row_labels[i]`` over the fusion triples."""
    rows: list[list[int]]
    row_labels: list[PhiIndex]
    col_labels: list[FusionTriple]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.col_labels)

    def to_tsv(self, ring: BasedRing | None = None) -> str:
        lines = ["# rows: " + str(len(self.rows)) + ", cols: " + str(len(self.col_labels)),
                 "# cols\t" + "\t".join(map(str, self.col_labels))]
        for phi, row in zip(self.row_labels, self.rows):
            lines.append(f"{phi}\t" + "\t".join(map(str, row)))
        return "\n".join(lines) + "\n"


def t_image(phi: PhiIndex, col_index: Mapping[FusionTriple, int]) -> SparseVec:
    """Net exponent of each fusion triple in ``γ_ab^e γ_ec^d (γ_bc^f γ_af^d)^{-1}``."""
    out: SparseVec = {}
    up1, up2, down1, down2 = phi.triples()
    for t, s in ((up1, 1), (up2, 1), (down1, -1), (down2, -1)):
        j = col_index[t]
        out[j] = out.get(j, 0) + s
    return {j: x for j, x in out.items() if x}


def build_exponent_matrix(ring: BasedRing, zeros: Iterable[PhiIndex] = ()) -> ExponentMatrix:
    zeros = frozenset(zeros)
    cols = gamma_set(ring)
    col_index = {t: j for j, t in enumerate(cols)}
    labels = [phi for phi in phi_set(ring) if phi not in zeros]
    rows = [dense(t_image(phi, col_index), len(cols)) for phi in labels]
    return ExponentMatrix(rows, labels, cols)


@dataclass
class TransformPair:
    """``H · A = HA`` with ``H`` unimodular and ``HA`` in row Hermite normal form.

    ``H``, ``HA`` and ``H_inv`` are stored as lists of sparse rows. The first
    ``rank`` rows of ``HA`` are the nonzero ones; ``pivots[k]`` is the pivot
    column of row ``k``.
    """
    H: list[SparseVec]
    HA: list[SparseVec]
    H_inv: list[SparseVec]
    pivots: list[int]
    ncols: int

    @property
    def nrows(self) -> int:
        return len(self.H)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def H_dense(self) -> list[list[int]]:
        return [dense(r, self.nrows) for r in self.H]

    def HA_dense(self) -> list[list[int]]:
        return [dense(r, self.ncols) for r in self.HA]

    def coordinates(self, v: Vector) -> SparseVec:
        """``y`` with ``y · H = v`` (exact, since ``H`` is unimodular)."""
        y: SparseVec = {}
        for r, x in sparse(v).items():
            for k, h in self.H_inv[r].items():
                y[k] = y.get(k, 0) + x * h
        return {k: x for k, x in y.items() if x}

    def kernel_coordinates(self, v: Vector) -> SparseVec | None:
        """Coordinates of ``v`` over :func:`kernel_basis`, or None if ``v·A != 0``."""
        y = self.coordinates(v)
        if any(k < self.rank for k in y):
            return None
        return {k - self.rank: x for k, x in y.items()}


class _Eliminator:
    def __init__(self, rows: Sequence[Vector], ncols: int, track: bool):
        self.a = [sparse(r) for r in rows]
        self.ncols = ncols
        self.track = track
        m = len(self.a)
        self.h = [{i: 1} for i in range(m)] if track else None
        self.hinv = [{i: 1} for i in range(m)] if track else None  # columns of H^{-1}
        self.colrows: list[set[int]] = [set() for _ in range(ncols)]
        for i, r in enumerate(self.a):
            for j in r:
                if not 0 <= j < ncols:
                    raise ValueError(f"column index {j} out of range")
                self.colrows[j].add(i)

    def addmul(self, i: int, p: int, q: int) -> None:
        """row_i += q * row_p."""
        if not q:
            return
        ai = self.a[i]
        for j, x in self.a[p].items():
            v = ai.get(j, 0) + q * x
            if v:
                if j not in ai:
                    self.colrows[j].add(i)
                ai[j] = v
            else:
                del ai[j]
                self.colrows[j].discard(i)
        if self.track:
            _axpy(self.h[i], q, self.h[p])
            _axpy(self.hinv[p], -q, self.hinv[i])

    def negate(self, i: int) -> None:
        self.a[i] = {j: -x for j, x in self.a[i].items()}
        if self.track:
            self.h[i] = {j: -x for j, x in self.h[i].items()}
            self.hinv[i] = {j: -x for j, x in self.hinv[i].items()}

    def run(self) -> list[tuple[int, int]]:
        pivoted: set[int] = set()
        pivots: list[tuple[int, int]] = []  # (row, column)
        for j in range(self.ncols):
            cand = sorted(i for i in self.colrows[j] if i not in pivoted)
            while len(cand) > 1:
                p = min(cand, key=lambda i: (abs(self.a[i][j]), i))
                x = self.a[p][j]
                for i in cand:
                    if i != p:
                        self.addmul(i, p, -(self.a[i][j] // x))
                cand = [i for i in cand if j in self.a[i]]
            if cand:
                p = cand[0]
                if self.a[p][j] < 0:
                    self.negate(p)
                pivoted.add(p)
                pivots.append((p, j))
        # reduce entries above each pivot into [0, pivot)
        for k, (p, j) in enumerate(pivots):
            x = self.a[p][j]
            for p2, _ in pivots[:k]:
                y = self.a[p2].get(j, 0)
                if y < 0 or y >= x:
                    self.addmul(p2, p, -(y // x))
        return pivots


def _axpy(y: SparseVec, q: int, x: Mapping[int, int]) -> None:
    for j, v in x.items():
        w = y.get(j, 0) + q * v
        if w:
            y[j] = w
        else:
            y.pop(j, None)


def _matrix_rows(A) -> tuple[list, int]:
    if isinstance(A, ExponentMatrix):
        return A.rows, len(A.col_labels)
    rows = list(A)
    ncols = max((len(r) for r in rows if not isinstance(r, Mapping)), default=0)
    return rows, ncols


def hnf_with_transform(A, ncols: int | None = None) -> TransformPair:
    """Row Hermite normal form of ``A`` together with a unimodular ``H``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)`` and zero
    rows come last; ties are broken by row index so the result is deterministic.
    """
    rows, n = _matrix_rows(A)
    ncols = n if ncols is None else ncols
    el = _Eliminator(rows, ncols, track=True)
    pivots = el.run()
    order = [p for p, _ in pivots]
    seen = set(order)
    order += [i for i in range(len(rows)) if i not in seen]
    where = {old: new for new, old in enumerate(order)}
    H = [el.h[i] for i in order]
    HA = [el.a[i] for i in order]
    # permuting the rows of H permutes the columns of H^{-1}; store H^{-1} by rows
    H_inv: list[SparseVec] = [{} for _ in order]
    for old, col in enumerate(el.hinv):
        k = where[old]
        for r, x in col.items():
            H_inv[r][k] = x
    return TransformPair(H, HA, H_inv, [j for _, j in pivots], ncols)


def row_hnf(rows: Sequence[Vector], ncols: int) -> list[SparseVec]:
    """Nonzero rows of the Hermite normal form of the lattice spanned by ``rows``."""
    el = _Eliminator(rows, ncols, track=False)
    pivots = el.run()
    return [el.a[p] for p, _ in pivots]


def kernel_basis(pair: TransformPair) -> list[SparseVec]:
    """Rows of ``H`` whose ``HA`` row vanishes: a basis of the left kernel of ``A``."""
    return [h for h, ha in zip(pair.H, pair.HA) if not ha]


def lattice_equal(B1: Sequence[Vector], B2: Sequence[Vector], ncols: int | None = None) -> bool:
    """True iff the integer row spans of ``B1`` and ``B2`` coincide."""
    lens = {len(v) for v in list(B1) + list(B2) if not isinstance(v, Mapping)}
    if len(lens) > 1:
        raise ValueError(f"dimension mismatch: vector lengths {sorted(lens)}")
    if ncols is None:
        if lens:
            ncols = lens.pop()
        else:
            ncols = 1 + max((j for v in list(B1) + list(B2) for j in v), default=-1)
    return row_hnf(B1, ncols) == row_hnf(B2, ncols)
