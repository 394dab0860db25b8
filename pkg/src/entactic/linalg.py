"""Dense complex tensor algebra for n-qudit systems.

Parties are numbered 1..n. A computational-basis index is read as n base-d
digits with party 1 most significant; this convention is fixed globally so
that serialized states are unambiguous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-12
PSD_TOL = 1e-10


class ShapeError(ValueError):
    """Raised when operands do not share (n, d) metadata."""


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over n parties of local dimension d."""

    n: int
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.d < 2:
            raise ValueError(f"invalid system shape n={self.n}, d={self.d}")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.d**self.n,):
            raise ValueError(
                f"expected {self.d**self.n} amplitudes, got {amps.shape}"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(nrm - 1):.3e}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.d**self.n

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to an n-axis tensor, axis k = party k+1."""
        return self.amplitudes.reshape((self.d,) * self.n)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.n, self.d, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "PureState") -> complex:
        if (self.n, self.d) != (other.n, other.d):
            raise ShapeError("overlap requires identical (n, d)")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace Hermitian PSD matrix with (n, d) shape metadata."""

    n: int
    d: int
    entries: np.ndarray

    def __post_init__(self):
        dim = self.d**self.n
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > NORM_TOL:
            raise ValueError("matrix not Hermitian")
        if abs(np.trace(m).real - 1.0) > NORM_TOL:
            raise ValueError(f"trace != 1: {np.trace(m).real}")
        if np.linalg.eigvalsh(m)[0] < -PSD_TOL:
            raise ValueError(f"negative eigenvalue {np.linalg.eigvalsh(m)[0]:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.d**self.n


@dataclass(frozen=True)
class Bipartition:
    """One unordered cut M | complement, stored canonically.

    The stored side is the one containing party 1, so each of the
    2^(n-1) - 1 cuts appears exactly once.
    """

    n: int
    parties: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        m = frozenset(self.parties)
        if not m or not m < set(range(1, self.n + 1)):
            raise ValueError(f"cut must be a nonempty proper subset of 1..{self.n}")
        if 1 not in m:
            m = frozenset(range(1, self.n + 1)) - m
        object.__setattr__(self, "parties", m)

    @property
    def complement(self) -> frozenset:
        return frozenset(range(1, self.n + 1)) - self.parties

    def __str__(self):
        a = ",".join(map(str, sorted(self.parties)))
        b = ",".join(map(str, sorted(self.complement)))
        return f"{{{a}}}|{{{b}}}"


def all_bipartitions(n: int) -> list[Bipartition]:
    """Every canonical cut of an n-party system (2^(n-1) - 1 of them)."""
    out = []
    rest = list(range(2, n + 1))
    for k in range(0, n - 1):
        for extra in combinations(rest, k):
            out.append(Bipartition(n, frozenset((1,) + extra)))
    return out


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Squared Schmidt coefficients across a cut, sorted descending."""

    cut: Bipartition
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if abs(v.sum() - 1.0) > 1e-10:
            raise ValueError(f"Schmidt spectrum sums to {v.sum()}")
        if np.any(np.diff(v) > 1e-14):
            raise ValueError("Schmidt spectrum not sorted descending")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def tensor_product(a: PureState, b: PureState) -> PureState:
    if a.d != b.d:
        raise ShapeError(f"local dimensions differ: {a.d} vs {b.d}")
    return PureState(a.n + b.n, a.d, np.kron(a.amplitudes, b.amplitudes))


def _check_subset(n: int, keep: Iterable[int]) -> tuple[int, ...]:
    keep = tuple(sorted(set(keep)))
    if not keep or any(p < 1 or p > n for p in keep):
        raise ValueError(f"party subset {keep} invalid for n={n}")
    return keep


def cut_matrix(psi: PureState, cut: Bipartition) -> np.ndarray:
    """Amplitudes reshaped to a d^|M| x d^|complement| matrix for the cut."""
    m = sorted(cut.parties)
    rest = sorted(cut.complement)
    t = psi.tensor().transpose([p - 1 for p in m + rest])
    return t.reshape(psi.d ** len(m), psi.d ** len(rest))


def schmidt_spectrum(psi: PureState, cut: Bipartition) -> SchmidtSpectrum:
    sv = np.linalg.svd(cut_matrix(psi, cut), compute_uv=False)
    vals = np.sort(sv**2)[::-1]
    # clip float dust so the sum-to-one invariant holds verbatim
    vals = vals / vals.sum()
    return SchmidtSpectrum(cut, vals)


def reduced_density(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Partial trace onto the given parties."""
    keep = _check_subset(rho.n, keep)
    n, d = rho.n, rho.d
    t = rho.entries.reshape((d,) * (2 * n))
    traced = [p for p in range(1, n + 1) if p not in keep]
    for p in sorted(traced, reverse=True):
        t = np.trace(t, axis1=p - 1, axis2=t.ndim // 2 + p - 1)
    dim = d ** len(keep)
    out = t.reshape(dim, dim)
    out = (out + out.conj().T) / 2
    return DensityMatrix(len(keep), d, out)


def reduced_density_pure(psi: PureState, keep: Sequence[int]) -> DensityMatrix:
    """Marginal of a pure state, without forming the full projector."""
    keep = _check_subset(psi.n, keep)
    rest = [p for p in range(1, psi.n + 1) if p not in keep]
    t = psi.tensor().transpose([p - 1 for p in list(keep) + rest])
    a = t.reshape(psi.d ** len(keep), psi.d ** len(rest))
    m = a @ a.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(len(keep), psi.d, m)


def partial_transpose(rho: DensityMatrix, subset: Sequence[int]) -> np.ndarray:
    """Transpose the indices of the chosen parties; returns a Hermitian array."""
    subset = _check_subset(rho.n, subset)
    n, d = rho.n, rho.d
    t = rho.entries.reshape((d,) * (2 * n))
    perm = list(range(2 * n))
    for p in subset:
        perm[p - 1], perm[n + p - 1] = perm[n + p - 1], perm[p - 1]
    return t.transpose(perm).reshape(rho.dim, rho.dim)


def is_ppt(rho: DensityMatrix, subset: Sequence[int], tol: float = PSD_TOL) -> bool:
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    w = np.linalg.eigvalsh(partial_transpose(rho, subset))
    return bool(w[0] >= -tol)


def min_pt_eigenvalue(rho: DensityMatrix, subset: Sequence[int]) -> float:
    return float(np.linalg.eigvalsh(partial_transpose(rho, subset))[0])


def apply_channel(prep_map, rho: DensityMatrix) -> DensityMatrix:
    """Apply a filter-and-prepare channel.

    The map acts as
        rho -> p tr(psi1 rho) psi2 + tr[(1 - psi1) rho] mixer
               + (1 - p) tr(psi1 rho) mixer
    which is the CPTP completion of the probabilistic preparation branch.
    """
    psi1, psi2 = prep_map.psi1, prep_map.psi2
    if (psi1.n, psi1.d) != (rho.n, rho.d):
        raise ShapeError("channel and input dimensions differ")
    v = psi1.amplitudes
    q = float(np.real(v.conj() @ rho.entries @ v))
    q = min(max(q, 0.0), 1.0)
    p = prep_map.p
    out = (
        p * q * np.outer(psi2.amplitudes, psi2.amplitudes.conj())
        + ((1.0 - q) + (1.0 - p) * q) * prep_map.mixer.entries
    )
    out = (out + out.conj().T) / 2
    return DensityMatrix(rho.n, rho.d, out)


# ---------------------------------------------------------------------------
# JSON wire format


def state_to_json(psi: PureState) -> str:
    return json.dumps(
        {
            "n": psi.n,
            "d": psi.d,
            "amplitudes": [[z.real, z.imag] for z in psi.amplitudes],
        }
    )


def state_from_json(text: str) -> PureState:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed state JSON: {exc}") from exc
    for key in ("n", "d", "amplitudes"):
        if key not in obj:
            raise ValueError(f"malformed state JSON: missing field '{key}'")
    amps = np.array([complex(re, im) for re, im in obj["amplitudes"]])
    return PureState(int(obj["n"]), int(obj["d"]), amps)


def density_to_json(rho: DensityMatrix) -> str:
    flat = rho.entries.reshape(-1)
    return json.dumps(
        {
            "n": rho.n,
            "d": rho.d,
            "entries": [[z.real, z.imag] for z in flat],
        }
    )


def density_from_json(text: str) -> DensityMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed density JSON: {exc}") from exc
    for key in ("n", "d", "entries"):
        if key not in obj:
            raise ValueError(f"malformed density JSON: missing field '{key}'")
    dim = int(obj["d"]) ** int(obj["n"])
    flat = np.array([complex(re, im) for re, im in obj["entries"]])
    return DensityMatrix(int(obj["n"]), int(obj["d"]), flat.reshape(dim, dim))
