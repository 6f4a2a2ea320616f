"""Structured quartic programs: sums of weighted squared quadratics.

A program holds m terms 0.5*alpha_i*(0.5 x'A_i x + b_i'x + c_i)^2 plus a
quadratic tail 0.5 x'Qx - x'f.  Construction is permissive so that malformed
programs can be represented and reported by :func:`validate`; the evaluation
operations raise :class:`DimensionMismatchError` instead of computing on
inconsistent shapes.

All types are immutable after construction and every operation is a pure
function, so values may be shared freely between threads.
"""

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatchError


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class QuadraticMap:
    """Quadratic function x -> 0.5 x'Ax + b'x + c with A stored symmetric.

    Asymmetric A input is replaced by its symmetric part (A + A')/2 and the
    substitution is recorded in ``symmetrized``; only the symmetric part can
    contribute to the quadratic form.
    """

    A: np.ndarray
    b: np.ndarray
    c: float
    symmetrized: bool = False

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        sym = not np.array_equal(A, A.T)
        if sym:
            A = 0.5 * (A + A.T)
        b = np.atleast_1d(np.array(self.b, dtype=float))
        object.__setattr__(self, "A", _freeze(A))
        object.__setattr__(self, "b", _freeze(b))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "symmetrized", sym)

    @property
    def dim(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class QuarticTerm:
    """One weighted squared quadratic, 0.5*alpha*(quad(x))^2."""

    alpha: float
    quad: QuadraticMap

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))


class PackedProgram(NamedTuple):
    """Contiguous-array view of a program, the form the kernels consume."""

    alpha: np.ndarray
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    Q: np.ndarray
    f: np.ndarray


@dataclass(frozen=True, eq=False)
class QuarticProgram:
    """m squared-quadratic terms plus a quadratic tail on R^n."""

    n: int
    terms: tuple
    Q: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "terms", tuple(self.terms))
        Q = np.atleast_2d(np.array(self.Q, dtype=float))
        if Q.ndim == 2 and Q.shape[0] == Q.shape[1]:
            Q = 0.5 * (Q + Q.T)
        f = np.atleast_1d(np.array(self.f, dtype=float))
        object.__setattr__(self, "Q", _freeze(Q))
        object.__setattr__(self, "f", _freeze(f))
        object.__setattr__(self, "_packed_cache", None)

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def packed(self) -> PackedProgram:
        """Packed arrays for kernel calls; raises on inconsistent shapes."""
        cached = getattr(self, "_packed_cache")
        if cached is not None:
            return cached
        problems = [d for d in validate(self) if "dimension mismatch" in d]
        if problems:
            raise DimensionMismatchError("; ".join(problems))
        n, m = self.n, self.m
        packed = PackedProgram(
            alpha=np.ascontiguousarray([t.alpha for t in self.terms], dtype=float),
            A=np.ascontiguousarray([t.quad.A for t in self.terms], dtype=float).reshape(m, n, n),
            b=np.ascontiguousarray([t.quad.b for t in self.terms], dtype=float).reshape(m, n),
            c=np.ascontiguousarray([t.quad.c for t in self.terms], dtype=float),
            Q=np.ascontiguousarray(self.Q),
            f=np.ascontiguousarray(self.f),
        )
        object.__setattr__(self, "_packed_cache", packed)
        return packed


def _check_x(prog: QuarticProgram, x) -> np.ndarray:
    x = np.ascontiguousarray(np.atleast_1d(x), dtype=float)
    if x.shape != (prog.n,):
        raise DimensionMismatchError(
            f"x has shape {x.shape}, expected ({prog.n},)"
        )
    return x


def eval_primal(prog: QuarticProgram, x) -> float:
    """Objective value at x."""
    x = _check_x(prog, x)
    p = prog.packed
    return kernels.quartic_value(p.alpha, p.A, p.b, p.c, p.Q, p.f, x)


def canonical_measure(prog: QuarticProgram, x) -> np.ndarray:
    """Vector of the m quadratic measures 0.5 x'A_i x + b_i'x + c_i at x."""
    x = _check_x(prog, x)
    p = prog.packed
    return np.asarray(kernels.quartic_measure(p.A, p.b, p.c, x))


def grad_primal(prog: QuarticProgram, x) -> np.ndarray:
    """Analytic gradient: sum_i alpha_i xi_i (A_i x + b_i) + Qx - f."""
    x = _check_x(prog, x)
    p = prog.packed
    _, g = kernels.quartic_value_grad(p.alpha, p.A, p.b, p.c, p.Q, p.f, x)
    return np.asarray(g)


def hess_primal(prog: QuarticProgram, x) -> np.ndarray:
    """Analytic Hessian: sum_i alpha_i (xi_i A_i + g_i g_i') + Q."""
    x = _check_x(prog, x)
    p = prog.packed
    H = p.Q.copy()
    if prog.m:
        xi = np.asarray(kernels.quartic_measure(p.A, p.b, p.c, x))
        G = p.A @ x + p.b
        H = H + np.einsum("i,ijk->jk", p.alpha * xi, p.A)
        H = H + np.einsum("i,ij,ik->jk", p.alpha, G, G)
    return 0.5 * (H + H.T)


def validate(prog: QuarticProgram) -> list[str]:
    """Structural diagnostics; an empty list means the program is well formed."""
    n = prog.n
    out: list[str] = []
    for i, term in enumerate(prog.terms):
        if term.alpha == 0.0:
            out.append(f"zero alpha at index {i}")
        if not np.isfinite(term.alpha):
            out.append(f"non-finite alpha at index {i}")
        q = term.quad
        if q.A.shape != (n, n):
            out.append(
                f"dimension mismatch: term {i} A has shape {q.A.shape}, expected ({n}, {n})"
            )
        if q.b.shape != (n,):
            out.append(
                f"dimension mismatch: term {i} b has length {q.b.shape[0]}, expected {n}"
            )
        if not (np.all(np.isfinite(q.A)) and np.all(np.isfinite(q.b)) and np.isfinite(q.c)):
            out.append(f"non-finite entries in term {i}")
    if prog.Q.shape != (n, n):
        out.append(f"dimension mismatch: Q has shape {prog.Q.shape}, expected ({n}, {n})")
    if prog.f.shape != (n,):
        out.append(f"dimension mismatch: f has length {prog.f.shape[0]}, expected {n}")
    if not (np.all(np.isfinite(prog.Q)) and np.all(np.isfinite(prog.f))):
        out.append("non-finite entries in quadratic tail")
    return out


def make_program(terms: Sequence[tuple[float, np.ndarray, np.ndarray, float]],
                 Q, f) -> QuarticProgram:
    """Convenience constructor from (alpha, A, b, c) tuples."""
    f = np.atleast_1d(np.array(f, dtype=float))
    built = tuple(
        QuarticTerm(alpha, QuadraticMap(A, b, c)) for alpha, A, b, c in terms
    )
    return QuarticProgram(n=f.shape[0], terms=built, Q=Q, f=f)
