"""Fibril chain replication, transform fitting, RMSD and contact screening.

A fibril model is built from one template chain: an orthogonal sheet
transform produces the opposing chain, and integer multiples of a stacking
offset translate both along the fibril axis.  Chains are named with single
letters following the conventional ten-chain layout (A..E on one sheet,
F..J on the other), extending alphabetically for deeper stacks.
"""

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class Chain:
    """Named atom set: parallel tuples of atom labels and (N,3) coordinates."""

    name: str
    atom_names: tuple
    coords: np.ndarray

    def __post_init__(self):
        names = tuple(self.atom_names)
        coords = np.atleast_2d(np.array(self.coords, dtype=float))
        if coords.size == 0:
            coords = coords.reshape(0, 3)
        if coords.shape != (len(names), 3):
            raise ValueError(
                f"chain {self.name!r}: {len(names)} atom names but coordinate shape {coords.shape}"
            )
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"chain {self.name!r}: duplicate atom names {dupes}")
        coords.flags.writeable = False
        object.__setattr__(self, "atom_names", names)
        object.__setattr__(self, "coords", coords)

    def __len__(self) -> int:
        return len(self.atom_names)

    def position(self, atom_name: str) -> np.ndarray:
        return self.coords[self.atom_names.index(atom_name)]


@dataclass(frozen=True, eq=False)
class AffineTransform:
    """Rigid map p -> R p + t with R orthogonal."""

    R: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        R = np.array(self.R, dtype=float).reshape(3, 3)
        t = np.array(self.t, dtype=float).reshape(3)
        if np.linalg.norm(R.T @ R - np.eye(3)) > 1e-10:
            raise ValueError("rotation part is not orthogonal")
        R.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "t", t)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.R.T + self.t


@dataclass(eq=False)
class FibrilModel:
    """Chains keyed by name plus a note on how each one was produced."""

    chains: dict
    provenance: dict = field(default_factory=dict)
    family: str | None = None

    def names(self) -> list[str]:
        return sorted(self.chains)


def apply_transform(chain: Chain, transform: AffineTransform, new_name: str) -> Chain:
    """New chain with every position mapped through the transform."""
    return Chain(name=new_name, atom_names=chain.atom_names,
                 coords=transform(chain.coords))


def fit_translation(R, pairs: Sequence[tuple]) -> np.ndarray:
    """Translation t minimizing sum ||R s_i + t - t_i||^2 over (source, target)
    pairs: the mean of the per-pair offsets t_i - R s_i.  Exact for one pair.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("at least one (source, target) pair is required")
    R = np.array(R, dtype=float).reshape(3, 3)
    offsets = [np.asarray(tgt, dtype=float) - R @ np.asarray(src, dtype=float)
               for src, tgt in pairs]
    return np.mean(offsets, axis=0)


# Chain letters for stacking levels 0, +1, +2, -1, -2 on the template sheet
# and its transformed partner; deeper levels continue from K.
_A_SHEET = {0: "A", 1: "C", 2: "B", -1: "D", -2: "E"}
_H_SHEET = {0: "H", 1: "G", 2: "F", -1: "I", -2: "J"}


def _level_names(level: int, counter: Iterable[str]) -> tuple[str, str]:
    if abs(level) <= 2:
        return _A_SHEET[level], _H_SHEET[level]
    return next(counter), next(counter)


def _letters_from_k():
    code = ord("K")
    while True:
        if code > ord("Z"):
            raise ValueError("stacking depth exceeds the single-letter naming range")
        yield chr(code)
        code += 1


def replicate_fibril(chain_a: Chain, sheet: AffineTransform, stack,
                     levels: int, family: str | None = None) -> FibrilModel:
    """Build the fibril: the sheet partner of chain A plus +-levels stacked
    copies of both, offset by integer multiples of the stacking vector."""
    if levels < 0:
        raise ValueError("levels must be nonnegative")
    stack = np.asarray(stack, dtype=float).reshape(3)
    chain_h = apply_transform(chain_a, sheet, "H")
    chains = {}
    provenance = {}
    letters = _letters_from_k()
    order = [0]
    for j in range(1, levels + 1):
        order.extend([j, -j])
    for level in order:
        name_a, name_h = _level_names(level, letters)
        offset = level * stack
        for src, name in ((chain_a, name_a), (chain_h, name_h)):
            chains[name] = Chain(name=name, atom_names=src.atom_names,
                                 coords=src.coords + offset)
            base = "A" if src is chain_a else "sheet(A)"
            provenance[name] = base if level == 0 else f"{base} {level:+d}*stack"
    return FibrilModel(chains=chains, provenance=provenance, family=family)


def rmsd(a: Chain, b: Chain, atom_filter: Callable[[str], bool] | None = None) -> float:
    """Root mean square deviation over name-matched atoms, with no
    superposition step: plain per-atom displacement in the shared frame."""
    names_a = [n for n in a.atom_names if atom_filter is None or atom_filter(n)]
    names_b = {n for n in b.atom_names if atom_filter is None or atom_filter(n)}
    if set(names_a) != names_b:
        missing = sorted(set(names_a) ^ names_b)
        raise ValueError(f"atom names do not match between chains: {missing}")
    if not names_a:
        raise ValueError("no atoms selected")
    pa = np.array([a.position(n) for n in names_a])
    pb = np.array([b.position(n) for n in names_a])
    diff = pa - pb
    return float(np.sqrt(np.sum(diff * diff) / len(names_a)))


@dataclass(frozen=True)
class Contact:
    chain_a: str
    atom_a: str
    chain_b: str
    atom_b: str
    distance: float


def contact_report(model: FibrilModel, threshold: float = 3.4) -> list[Contact]:
    """All inter-chain atom pairs closer than the threshold, nearest first.

    Chain pairs are scanned in name order so the output is independent of
    insertion order.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    names = model.names()
    out = []
    for i, na in enumerate(names):
        ca = model.chains[na]
        for nb in names[i + 1:]:
            cb = model.chains[nb]
            d = np.linalg.norm(ca.coords[:, None, :] - cb.coords[None, :, :], axis=2)
            for ia, ib in zip(*np.nonzero(d < threshold)):
                out.append(Contact(na, ca.atom_names[ia], nb, cb.atom_names[ib],
                                   float(d[ia, ib])))
    out.sort(key=lambda c: (c.distance, c.chain_a, c.atom_a, c.chain_b, c.atom_b))
    return out
