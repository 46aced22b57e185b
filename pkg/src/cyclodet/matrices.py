"""Constructors for the Legendre-symbol and cyclotomic matrix families.

Size conventions for an odd prime p with m = (p-1)/2:

* C, S, SD are m x m, indexed by j, k = 1..m;
* D, DD (the twisted D), Dtilde, E, F, T are (m+1) x (m+1), indexed from 0.

All constructors are pure and return immutable matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cycring import CycElt, geometric_quotient
from .modarith import legendre, require_odd_prime
from .subfield import gauss_sum


@dataclass(frozen=True)
class MatrixMeta:
    p: int
    family: str
    delta: int | None = None


class ExactMatrix:
    """A square matrix with exact entries: Python ints or CycElts."""

    __slots__ = ("n", "kind", "rows", "meta")

    def __init__(self, kind: str, rows, meta: MatrixMeta) -> None:
        if kind not in ("int", "cyc"):
            raise ValueError(f"unknown matrix kind {kind!r}")
        rows = tuple(tuple(row) for row in rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        if kind == "cyc":
            for row in rows:
                for e in row:
                    if not isinstance(e, CycElt) or e.p != meta.p:
                        raise ValueError("cyclotomic entries must share the same p")
        self.n = n
        self.kind = kind
        self.rows = rows
        self.meta = meta

    def entry(self, j: int, k: int):
        return self.rows[j][k]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.kind == other.kind and self.rows == other.rows

    def __hash__(self):
        return hash((self.kind, self.rows))

    def __repr__(self):
        return f"ExactMatrix({self.meta.family}, p={self.meta.p}, n={self.n})"


def _require_nonresidue(p: int, delta: int) -> None:
    if legendre(delta, p) != -1:
        raise ValueError(f"delta={delta} is not a quadratic non-residue mod {p}")


def build_C(p: int) -> ExactMatrix:
    """Entries (1 - zeta^(j^2 k^2)) / (1 - zeta^(j^2)), built as geometric sums."""
    require_odd_prime(p)
    m = (p - 1) // 2
    rows = [
        [geometric_quotient(p, j * j, k * k) for k in range(1, m + 1)]
        for j in range(1, m + 1)
    ]
    return ExactMatrix("cyc", rows, MatrixMeta(p, "C"))


def build_D(p: int) -> ExactMatrix:
    """Entries zeta^(j^2 k^2) for 0 <= j, k <= m."""
    require_odd_prime(p)
    m = (p - 1) // 2
    rows = [
        [CycElt.zeta(p, j * j * k * k) for k in range(m + 1)] for j in range(m + 1)
    ]
    return ExactMatrix("cyc", rows, MatrixMeta(p, "D"))


def build_D_delta(p: int, delta: int) -> ExactMatrix:
    """Entries zeta^(delta j^2 k^2), delta a quadratic non-residue."""
    require_odd_prime(p)
    _require_nonresidue(p, delta)
    m = (p - 1) // 2
    rows = [
        [CycElt.zeta(p, delta * j * j * k * k) for k in range(m + 1)]
        for j in range(m + 1)
    ]
    return ExactMatrix("cyc", rows, MatrixMeta(p, "DD", delta))


def build_D_tilde(p: int) -> ExactMatrix:
    """Column 0 all ones, other entries 2*zeta^(j^2 k^2)."""
    require_odd_prime(p)
    m = (p - 1) // 2
    one = CycElt.one(p)
    rows = [
        [one if k == 0 else 2 * CycElt.zeta(p, j * j * k * k) for k in range(m + 1)]
        for j in range(m + 1)
    ]
    return ExactMatrix("cyc", rows, MatrixMeta(p, "Dtilde"))


def build_E(p: int) -> ExactMatrix:
    """Corner -g, all other entries the Legendre symbol ((j^2+k^2)/p)."""
    require_odd_prime(p)
    if p % 4 != 3:
        raise ValueError(f"E requires p = 3 mod 4, got {p}")
    m = (p - 1) // 2
    corner = -gauss_sum(p)
    rows = [
        [
            corner
            if j == k == 0
            else CycElt.rational(p, legendre(j * j + k * k, p))
            for k in range(m + 1)
        ]
        for j in range(m + 1)
    ]
    return ExactMatrix("cyc", rows, MatrixMeta(p, "E"))


def build_F(p: int, delta: int) -> ExactMatrix:
    """Corner g, all other entries the Legendre symbol ((j^2+delta*k^2)/p)."""
    require_odd_prime(p)
    if p % 4 != 1:
        raise ValueError(f"F requires p = 1 mod 4, got {p}")
    _require_nonresidue(p, delta)
    m = (p - 1) // 2
    corner = gauss_sum(p)
    rows = [
        [
            corner
            if j == k == 0
            else CycElt.rational(p, legendre(j * j + delta * k * k, p))
            for k in range(m + 1)
        ]
        for j in range(m + 1)
    ]
    return ExactMatrix("cyc", rows, MatrixMeta(p, "F", delta))


def build_S(p: int) -> ExactMatrix:
    """Legendre symbols ((j^2+k^2)/p) for 1 <= j, k <= m."""
    require_odd_prime(p)
    m = (p - 1) // 2
    rows = [
        [legendre(j * j + k * k, p) for k in range(1, m + 1)] for j in range(1, m + 1)
    ]
    return ExactMatrix("int", rows, MatrixMeta(p, "S"))


def build_T(p: int, delta: int) -> ExactMatrix:
    """Legendre symbols ((j^2+delta*k^2)/p) for 0 <= j, k <= m."""
    require_odd_prime(p)
    _require_nonresidue(p, delta)
    m = (p - 1) // 2
    rows = [
        [legendre(j * j + delta * k * k, p) for k in range(m + 1)]
        for j in range(m + 1)
    ]
    return ExactMatrix("int", rows, MatrixMeta(p, "T", delta))


def build_S_delta(p: int, delta: int) -> ExactMatrix:
    """Legendre symbols ((j^2+delta*k^2)/p) for 1 <= j, k <= m."""
    require_odd_prime(p)
    _require_nonresidue(p, delta)
    m = (p - 1) // 2
    rows = [
        [legendre(j * j + delta * k * k, p) for k in range(1, m + 1)]
        for j in range(1, m + 1)
    ]
    return ExactMatrix("int", rows, MatrixMeta(p, "SD", delta))


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact matrix product; used by the identity checks and tests."""
    if a.n != b.n or a.kind != b.kind:
        raise ValueError("incompatible matrices")
    n = a.n
    rows = []
    for j in range(n):
        arow = a.rows[j]
        out = []
        for k in range(n):
            acc = arow[0] * b.rows[0][k]
            for t in range(1, n):
                acc = acc + arow[t] * b.rows[t][k]
            out.append(acc)
        rows.append(out)
    meta = MatrixMeta(a.meta.p, f"{a.meta.family}*{b.meta.family}", a.meta.delta or b.meta.delta)
    return ExactMatrix(a.kind, rows, meta)


def scale(m: ExactMatrix, factor) -> ExactMatrix:
    rows = [[factor * e for e in row] for row in m.rows]
    return ExactMatrix(m.kind, rows, m.meta)
