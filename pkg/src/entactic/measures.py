"""Entanglement measures and separability certificates.

Geometric measures for the biseparable free set (closed form over cuts) and
the fully separable one (alternating product-state optimization), bipartite
pure-state robustness, and upper bounds on the fully separable robustness
through certified mixtures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional

import numpy as np
from scipy.optimize import nnls

from . import ghz_symmetric as gs
from .catalog import w_bar, w_state
from .linalg import (
    Bipartition,
    DensityMatrix,
    PureState,
    all_bipartitions,
    is_ppt,
    min_pt_eigenvalue,
    schmidt_spectrum,
)

CERTIFIED_FS = "certified_fs"
CERTIFIED_NOT_FS = "certified_not_fs"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 32
    max_iterations: int = 500
    tolerance: float = 1e-12
    seed: int = 2024

    def __post_init__(self):
        if self.restarts < 1 or self.tolerance <= 0:
            raise ValueError("restarts must be >= 1 and tolerance > 0")


@dataclass(frozen=True)
class MeasureResult:
    value: float
    certificate: object = None
    iterations: int = 0
    converged: bool = True


@dataclass(frozen=True)
class FsCertifierOptions:
    ppt_tol: float = 1e-10
    structure_tol: float = 1e-10
    fit_terms: int = 20
    fit_tol: float = 1e-6
    fit_rounds: int = 8
    fit_dictionary: int = 600
    seed: int = 2024


@dataclass(frozen=True)
class CertResult:
    verdict: str
    route: str
    detail: dict = field(default_factory=dict)


class RobustnessCapError(RuntimeError):
    """No mixing weight below the configured cap makes the state free."""


# ---------------------------------------------------------------------------
# Geometric measures


def geometric_bs(psi: PureState) -> MeasureResult:
    """1 - (largest Schmidt value over all cuts); closed form, deterministic."""
    best_cut, best_l1 = None, -1.0
    for cut in all_bipartitions(psi.n):
        l1 = float(schmidt_spectrum(psi, cut).values[0])
        if l1 > best_l1:
            best_cut, best_l1 = cut, l1
    return MeasureResult(value=1.0 - best_l1, certificate=best_cut)


def _random_local_units(n, d, rng):
    vecs = []
    for _ in range(n):
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        vecs.append(v / np.linalg.norm(v))
    return vecs


def _contract_except(tensor, vecs, k):
    """Contract conj(vecs[j]) into every axis j != k; returns a d-vector."""
    t = tensor
    # contract from the last axis down so earlier axis numbers stay valid
    for j in range(len(vecs) - 1, -1, -1):
        if j == k:
            continue
        t = np.tensordot(t, vecs[j].conj(), axes=([j], [0]))
    return t


def geometric_fs(psi: PureState, opts: OptimizerOptions = OptimizerOptions()) -> MeasureResult:
    """1 - squared maximal overlap with product states.

    Alternating single-party updates (higher-order power iteration): holding
    all parties but one fixed, the optimal local vector is the normalized
    contraction of the state tensor.  Best over seeded random restarts.
    """
    t = psi.tensor()
    rng = np.random.default_rng(opts.seed)
    best = (-1.0, None, 0, False)
    for r in range(opts.restarts):
        vecs = _random_local_units(psi.n, psi.d, rng)
        prev = 0.0
        converged = False
        sweeps = 0
        for sweeps in range(1, opts.max_iterations + 1):
            c = 0.0
            for k in range(psi.n):
                w = _contract_except(t, vecs, k)
                c = np.linalg.norm(w)
                if c < 1e-15:
                    vecs[k] = _random_local_units(1, psi.d, rng)[0]
                else:
                    vecs[k] = w / c
            if c - prev < opts.tolerance:
                converged = True
                break
            prev = c
        overlap = float(abs(np.vdot(vecs[0], _contract_except(t, vecs, 0))))
        if overlap > best[0]:
            best = (overlap, [v.copy() for v in vecs], sweeps, converged)
    value = max(0.0, 1.0 - best[0] ** 2)
    return MeasureResult(
        value=value, certificate=best[1], iterations=best[2], converged=best[3]
    )


def robustness_bipartite_pure(psi: PureState, cut: Bipartition) -> float:
    """(sum of Schmidt coefficients)^2 - 1 across the cut."""
    vals = schmidt_spectrum(psi, cut).values
    return float(np.sum(np.sqrt(np.clip(vals, 0.0, None))) ** 2 - 1.0)


def robustness_bs_upper(psi: PureState) -> MeasureResult:
    """Upper bound on the biseparable robustness: the minimum over cuts of
    the bipartite pure-state robustness."""
    best_cut, best = None, math.inf
    for cut in all_bipartitions(psi.n):
        r = robustness_bipartite_pure(psi, cut)
        if r < best:
            best_cut, best = cut, r
    return MeasureResult(value=best, certificate=best_cut)


# ---------------------------------------------------------------------------
# Fixed fully separable 3-qubit states in the diagonal {000, 111, W, Wbar}
# family, used for the W-state robustness bound.


def diag_family_state(w000, w111, ww, wwb) -> DensityMatrix:
    """Mixture of |000>, |111>, W and Wbar projectors with given weights."""
    weights = [float(w) for w in (w000, w111, ww, wwb)]
    if min(weights) < -1e-14 or abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError(f"bad weight vector {weights}")
    m = np.zeros((8, 8), dtype=complex)
    m[0, 0] = weights[0]
    m[7, 7] = weights[1]
    w = w_state().amplitudes
    wb = w_bar().amplitudes
    m += weights[2] * np.outer(w, w.conj())
    m += weights[3] * np.outer(wb, wb.conj())
    return DensityMatrix(3, 2, m)


def w_robustness_mixer() -> DensityMatrix:
    """The fully separable state whose 1:2 mixture with the W state is the
    separability boundary point; gives the tight upper bound 2."""
    return diag_family_state(
        Fraction(9, 16), Fraction(3, 16), Fraction(1, 16), Fraction(3, 16)
    )


def w_robustness_boundary() -> DensityMatrix:
    """(W + 2 * mixer) / 3: the fully separable boundary mixture itself."""
    return diag_family_state(
        Fraction(3, 8), Fraction(1, 8), Fraction(3, 8), Fraction(1, 8)
    )


# ---------------------------------------------------------------------------
# Full-separability certification


def _is_permutation_symmetric(rho: DensityMatrix, tol: float) -> bool:
    n, d = rho.n, rho.d
    t = rho.entries.reshape((d,) * (2 * n))
    for perm in permutations(range(n)):
        p = list(perm) + [n + i for i in perm]
        if np.max(np.abs(t.transpose(p) - t)) > tol:
            return False
    return True


def _diag_family_weights(rho: DensityMatrix, tol: float):
    """Weights if rho lies in the diagonal {000, 111, W, Wbar} family."""
    w = w_state().amplitudes
    wb = w_bar().amplitudes
    weights = [
        float(np.real(rho.entries[0, 0])),
        float(np.real(rho.entries[7, 7])),
        float(np.real(w.conj() @ rho.entries @ w)),
        float(np.real(wb.conj() @ rho.entries @ wb)),
    ]
    recon = diag_family_state(*[max(x, 0.0) / max(sum(weights), 1e-300) for x in weights])
    if np.max(np.abs(recon.entries - rho.entries)) > tol:
        return None
    return weights


def _hayashi_feasible(weights, tol):
    """Check weights = c0 |000> + c1 |111> + cf * (phi^x3 diagonal family).

    The family member with local state cos(a)|0> + e^(ib) sin(a)|1> has
    weights (c^6, s^6, 3c^4 s^2, 3c^2 s^4); the phase b drops out.  The W
    and Wbar components fix a; leftover population may sit on the product
    projectors |000> and |111>.
    """
    w000, w111, ww, wwb = weights
    if ww < tol and wwb < tol:
        return {"alpha": None}  # basis-diagonal mixture, trivially separable
    tot = ww + wwb
    s2 = wwb / tot  # sin^2(alpha)
    c2 = 1.0 - s2
    if c2 < 1e-15 or s2 < 1e-15:
        return None
    kappa = ww / (3 * c2**2 * s2)
    r000 = w000 - kappa * c2**3
    r111 = w111 - kappa * s2**3
    if r000 >= -tol and r111 >= -tol:
        return {"alpha": math.asin(math.sqrt(s2)), "scale": kappa}
    return None


def _fit_product_decomposition(rho: DensityMatrix, opts: FsCertifierOptions):
    """Heuristic constructive fit: nonnegative mixture of random product
    projectors, refined by nonnegative least squares over a dictionary.

    Sufficient-only: a small residual certifies separability constructively,
    a large one proves nothing.
    """
    rng = np.random.default_rng(opts.seed)
    n, d, dim = rho.n, rho.d, rho.dim
    target = np.concatenate([rho.entries.real.reshape(-1), rho.entries.imag.reshape(-1)])

    def product_vec(vecs):
        v = vecs[0]
        for u in vecs[1:]:
            v = np.kron(v, u)
        return v

    def columns(states):
        cols = np.empty((2 * dim * dim, len(states)))
        for j, v in enumerate(states):
            p = np.outer(v, v.conj())
            cols[:, j] = np.concatenate([p.real.reshape(-1), p.imag.reshape(-1)])
        return cols

    # seed the dictionary with computational-basis products plus random draws
    states = []
    for i in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[i] = 1.0
        states.append(v)
    best_x, best_states, best_res = None, None, math.inf
    for _ in range(opts.fit_rounds):
        while len(states) < opts.fit_dictionary:
            states.append(product_vec(_random_local_units(n, d, rng)))
        a = columns(states)
        x, res = nnls(a, target)
        if res < best_res:
            best_x, best_states, best_res = x, list(states), res
        if res < opts.fit_tol:
            break
        # keep the heavy terms, resample the rest near them
        order = np.argsort(x)[::-1]
        keep = [states[i] for i in order[: opts.fit_terms] if x[i] > 1e-12]
        states = list(keep)
        for v in keep:
            for _ in range(4):
                noise = product_vec(_random_local_units(n, d, rng))
                u = v + 0.15 * noise
                states.append(u / np.linalg.norm(u))
    terms = [
        (float(p), v) for p, v in zip(best_x, best_states) if p > 1e-12
    ]
    return best_res, terms


def fs_certificate(
    rho: DensityMatrix, opts: FsCertifierOptions = FsCertifierOptions()
) -> CertResult:
    """Decide full separability where a sufficient route applies.

    Routes, in order: exact criterion on the GHZ-symmetric family; negative
    partial transpose across any cut; symmetric 3-qubit + PPT; the diagonal
    single-qubit-power family; constructive product-decomposition fit.
    Returns UNKNOWN when no route fires; that is a value, not an error.
    """
    cuts = all_bipartitions(rho.n)

    if (rho.n, rho.d) == (3, 2):
        params = gs.twirl(rho)
        recon = gs.params_to_density(params)
        if np.max(np.abs(recon.entries - rho.entries)) <= opts.structure_tol:
            fs = gs.is_fs_symmetric(params, tol=opts.ppt_tol)
            return CertResult(
                CERTIFIED_FS if fs else CERTIFIED_NOT_FS,
                route="ghz-symmetric-polytope",
                detail={"params": params.as_floats()},
            )

    for cut in cuts:
        lam = min_pt_eigenvalue(rho, sorted(cut.parties))
        if lam < -opts.ppt_tol:
            return CertResult(
                CERTIFIED_NOT_FS,
                route="npt-cut",
                detail={"cut": str(cut), "min_eigenvalue": lam},
            )

    if (rho.n, rho.d) == (3, 2) and _is_permutation_symmetric(rho, opts.structure_tol):
        # all cuts already verified PPT above; for symmetric 3-qubit states
        # PPT is sufficient for full separability
        return CertResult(CERTIFIED_FS, route="symmetric-ppt", detail={})

    if (rho.n, rho.d) == (3, 2):
        weights = _diag_family_weights(rho, opts.structure_tol)
        if weights is not None:
            feas = _hayashi_feasible(weights, opts.ppt_tol)
            if feas is not None:
                return CertResult(
                    CERTIFIED_FS, route="diagonal-family", detail=feas
                )

    res, terms = _fit_product_decomposition(rho, opts)
    if res < opts.fit_tol:
        return CertResult(
            CERTIFIED_FS,
            route="decomposition-fit",
            detail={"residual": res, "terms": len(terms)},
        )
    return CertResult(UNKNOWN, route="none", detail={"fit_residual": res})


def robustness_fs_upper_via_mix(
    psi: DensityMatrix,
    mixer: DensityMatrix,
    certifier: FsCertifierOptions = FsCertifierOptions(),
    s_max: float = 16.0,
    bisect_tol: float = 1e-6,
) -> float:
    """Minimal s (bisection) with (psi + s mixer) / (1 + s) certified fully
    separable.  Upper-bounds the separability robustness for this mixer."""
    cert = fs_certificate(mixer, certifier)
    if cert.verdict != CERTIFIED_FS:
        raise ValueError(f"mixer not certified fully separable: {cert.verdict}")

    def mix(s):
        m = (psi.entries + s * mixer.entries) / (1.0 + s)
        return DensityMatrix(psi.n, psi.d, (m + m.conj().T) / 2)

    if fs_certificate(psi, certifier).verdict == CERTIFIED_FS:
        return 0.0
    if fs_certificate(mix(s_max), certifier).verdict != CERTIFIED_FS:
        raise RobustnessCapError(f"no certified mixture below s = {s_max}")
    lo, hi = 0.0, s_max
    while hi - lo > bisect_tol:
        mid = (lo + hi) / 2
        if fs_certificate(mix(mid), certifier).verdict == CERTIFIED_FS:
            hi = mid
        else:
            lo = mid
    return hi


def ppt_all_cuts_min_eigenvalue(rho: DensityMatrix) -> float:
    """Smallest partial-transpose eigenvalue over all canonical cuts."""
    return min(
        min_pt_eigenvalue(rho, sorted(cut.parties)) for cut in all_bipartitions(rho.n)
    )
