"""Instance-level verification of the spectral statements about token graphs:
Johnson spectra, spectrum containment, the complement pairing and its level
partition, the algebraic-connectivity conjecture, the degree threshold and
edge-collapse monotonicity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from . import batch
from .corpus import MAX_EXHAUSTIVE_N, graph_from_mask
from .graph6 import emit_graph6
from .graphs import Graph, collapse_edge, complement
from .multiset import EigMultiset
from .spectral import (
    algebraic_connectivity,
    eig_sym,
    laplacian,
    laplacian_spectrum,
    spectral_tol,
)
from .tokens import binomial_matrix, check_guard, token_graph


class InvarianceError(RuntimeError):
    """A Johnson eigenspace is not invariant under L(F_k(G)); no certificate is possible."""


class NoMatchError(LookupError):
    pass


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def token_laplacian(g: Graph, k: int, guard: int | None = None) -> np.ndarray:
    return laplacian(token_graph(g, k, guard).graph)


def token_spectrum(g: Graph, k: int, solver: str = "jacobi", guard: int | None = None) -> EigMultiset:
    return EigMultiset.from_values(laplacian_spectrum(token_graph(g, k, guard).graph, solver))


def johnson_level_value(n: int, j: int) -> int:
    return j * (n + 1 - j)


def johnson_spectrum(n: int, k: int) -> EigMultiset:
    """Laplacian spectrum of J(n,k): eigenvalue j(n+1-j) with multiplicity
    C(n,j) - C(n,j-1), for j = 0..min(k, n-k)."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    top = min(k, n - k)
    return EigMultiset.of(
        {johnson_level_value(n, j): comb(n, j) - (comb(n, j - 1) if j else 0) for j in range(top + 1)}
    )


# ---------------------------------------------------------------- containment


@dataclass
class ContainmentReport:
    k: int
    spectra: dict[int, EigMultiset]
    base_contained: bool
    chain_contained: bool | None  # None when k > n/2: the chain only grows up to n/2
    new_eigenvalues: EigMultiset
    missing: EigMultiset

    @property
    def ok(self) -> bool:
        return self.base_contained and self.chain_contained is not False


def check_containment(g: Graph, k: int, solver: str = "jacobi", guard: int | None = None) -> ContainmentReport:
    if not 1 <= k <= max(1, g.n - 1):
        raise ValueError(f"need 1 <= k <= n-1, got n={g.n}, k={k}")
    check_guard(g.n, k, guard)
    spectra = {1: token_spectrum(g, 1, solver)}
    if k > 1:
        spectra[k - 1] = token_spectrum(g, k - 1, solver, guard)
        spectra[k] = token_spectrum(g, k, solver, guard)
    top = spectra[k]
    base_ok = top.contains(spectra[1])
    prev = spectra[k - 1] if k > 1 else spectra[1]
    new, missing = top.difference(prev)
    chain: bool | None = missing.total == 0
    if 2 * k > g.n:
        chain = None
    return ContainmentReport(k, spectra, base_ok, chain, new, missing)


# -------------------------------------------------------------------- pairing


@dataclass(frozen=True)
class PairTriple:
    lam: float
    lam_bar: float
    level: int
    lam_j: float

    @property
    def residual(self) -> float:
        return abs(self.lam + self.lam_bar - self.lam_j)


@dataclass
class PairingCertificate:
    n: int
    k: int
    triples: list[PairTriple]
    invariance: dict[int, float]
    tol: float
    level_vectors: dict[int, np.ndarray] = field(default=None, repr=False)

    @property
    def residuals(self) -> list[float]:
        return [t.residual for t in self.triples]

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def lam_values(self, level: int | None = None) -> EigMultiset:
        return EigMultiset.from_values(
            [t.lam for t in self.triples if level is None or t.level == level]
        )

    def lam_bar_values(self, level: int | None = None) -> EigMultiset:
        return EigMultiset.from_values(
            [t.lam_bar for t in self.triples if level is None or t.level == level]
        )

    def level_sums(self) -> EigMultiset:
        return EigMultiset.from_values([t.lam_j for t in self.triples])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "tol": self.tol,
            "max_residual": self.max_residual,
            "invariance": {str(j): v for j, v in sorted(self.invariance.items())},
            "triples": [
                {"lambda": t.lam, "lambda_bar": t.lam_bar, "level": t.level, "lambda_J": t.lam_j}
                for t in self.triples
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@lru_cache(maxsize=16)
def johnson_eigenspaces(n: int, k: int) -> dict[int, np.ndarray]:
    """Orthonormal bases P_j of the J(n,k) Laplacian eigenspaces, keyed by level j.

    Eigenvectors are assigned to the nearest closed-form eigenvalue j(n+1-j); a
    numerical eigenvalue farther than the tolerance from every centre, or a
    dimension differing from the closed-form multiplicity, is an error.
    """
    res = eig_sym(token_laplacian(complete_graph(n), k))
    expected = johnson_spectrum(n, k)
    centres = np.array([johnson_level_value(n, j) for j in range(len(expected.clusters))], float)
    tol = spectral_tol(centres)
    levels = np.argmin(np.abs(res.eigenvalues[:, None] - centres[None, :]), axis=1)
    dist = np.abs(res.eigenvalues - centres[levels])
    if dist.max() > tol:
        raise InvarianceError(f"J({n},{k}) eigenvalue off its closed form by {dist.max():.3e}")
    spaces = {}
    for j, (_, mult) in enumerate(expected.clusters):
        basis = res.eigenvectors[:, levels == j]
        if basis.shape[1] != mult:
            raise InvarianceError(
                f"J({n},{k}) level {j} has dimension {basis.shape[1]}, expected {mult}"
            )
        basis.setflags(write=False)
        spaces[j] = basis
    return spaces


def check_pairing(g: Graph, k: int, tol: float = 1e-8, guard: int | None = None) -> PairingCertificate:
    """Certify that spec F_k(G) and spec F_k(complement G) pair up to spec J(n,k).

    Each Johnson eigenspace V_j is tested for invariance under L = L(F_k(G));
    L restricted to V_j is diagonalised to give the lambda values, and the
    partner lambda_bar is the Rayleigh quotient of L(F_k(complement G)) on the
    same vector. Both multisets are then checked against direct eigensolves.
    """
    n = g.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    check_guard(n, k, guard)
    lap = token_laplacian(g, k)
    lap_bar = token_laplacian(complement(g), k)
    scale = max(1.0, float(np.linalg.norm(lap)))

    triples: list[PairTriple] = []
    invariance: dict[int, float] = {}
    vectors: dict[int, np.ndarray] = {}
    for j, basis in johnson_eigenspaces(n, k).items():
        lam_j = float(johnson_level_value(n, j))
        image = lap @ basis
        restricted = basis.T @ image
        restricted = 0.5 * (restricted + restricted.T)
        leak = float(np.linalg.norm(image - basis @ restricted))
        invariance[j] = leak
        if leak > tol * scale:
            raise InvarianceError(
                f"level {j} eigenspace of J({n},{k}) not invariant: leak {leak:.3e} > {tol * scale:.3e}"
            )
        sub = eig_sym(restricted)
        vecs = basis @ sub.eigenvectors
        vectors[j] = vecs
        for lam, u in zip(sub.eigenvalues, vecs.T):
            lam_bar = float(u @ lap_bar @ u)
            triples.append(PairTriple(float(lam), lam_bar, j, lam_j))

    cert = PairingCertificate(n, k, triples, invariance, tol, vectors)
    bad = [t for t in triples if t.residual > tol * max(1.0, t.lam_j)]
    if bad:
        raise InvarianceError(f"pair sums off the Johnson eigenvalue: {bad[:3]}")
    direct = EigMultiset.from_values(np.linalg.eigvalsh(lap))
    direct_bar = EigMultiset.from_values(np.linalg.eigvalsh(lap_bar))
    if not cert.lam_values().matches(direct, tol=tol * scale):
        raise InvarianceError(f"lambda values {cert.lam_values()} differ from spec F_k(G) {direct}")
    if not cert.lam_bar_values().matches(direct_bar, tol=tol * scale):
        raise InvarianceError(
            f"lambda_bar values {cert.lam_bar_values()} differ from spec F_k(co-G) {direct_bar}"
        )
    return cert


def pairing_exists(
    spec_g: EigMultiset, spec_bar: EigMultiset, spec_j: EigMultiset, tol: float = 1e-7
) -> bool:
    """Backtracking search for a pairing lambda + lambda_bar = lambda_J that uses
    every element of each multiset exactly once. Independent of eigenvectors."""
    left = [[v, m] for v, m in spec_g.clusters]
    right = [[v, m] for v, m in spec_bar.clusters]
    targets = [[v, m] for v, m in spec_j.clusters]
    if not spec_g.total == spec_bar.total == spec_j.total:
        return False

    def solve(i: int) -> bool:
        while i < len(left) and left[i][1] == 0:
            i += 1
        if i == len(left):
            return True
        lam = left[i][0]
        for r in right:
            if r[1] == 0:
                continue
            for t in targets:
                if t[1] and abs(lam + r[0] - t[0]) <= tol:
                    left[i][1] -= 1
                    r[1] -= 1
                    t[1] -= 1
                    if solve(i):
                        return True
                    left[i][1] += 1
                    r[1] += 1
                    t[1] += 1
        return False

    return solve(0)


def _fmt(x: float) -> str:
    r = round(x)
    return str(int(r)) if abs(x - r) < 1e-6 else f"{x:.4g}"


def render_pairing_table(cert: PairingCertificate) -> str:
    """Grid with spec F_k(G) across the top and spec F_k(co-G) down the side;
    each paired cell holds lambda_J. Level-j entries carry j-1 primes for j >= 2
    (' for the second level, '' for the third, ...)."""

    def mark(x: float, level: int) -> str:
        return _fmt(x) + "'" * max(0, level - 1)

    cols = sorted(range(len(cert.triples)), key=lambda i: (round(cert.triples[i].lam, 6), cert.triples[i].level))
    rows = sorted(range(len(cert.triples)), key=lambda i: (round(cert.triples[i].lam_bar, 6), cert.triples[i].level))
    col_of = {t: c for c, t in enumerate(cols)}
    header = [f"F{cert.k}(co-G)\\F{cert.k}(G)"] + [
        mark(cert.triples[i].lam, cert.triples[i].level) for i in cols
    ]
    grid = [header]
    for i in rows:
        t = cert.triples[i]
        line = [mark(t.lam_bar, t.level)] + [""] * len(cols)
        line[1 + col_of[i]] = mark(t.lam_j, t.level)
        grid.append(line)
    widths = [max(len(r[c]) for r in grid) for c in range(len(header))]
    out = [" | ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in grid]
    out.insert(1, "-+-".join("-" * w for w in widths))
    legend = "levels: plain = 0/1, ' = 2, '' = 3, ..."
    return "\n".join(out + [legend])


# ------------------------------------------------------------- level partition


@dataclass
class LambdaPartition:
    n: int
    k: int
    levels: dict[int, list[tuple[float, float]]]
    status: str  # "pass", "fail" or "hypothesis-unmet"
    mismatches: list[str]
    max_projection: float

    def lam_values(self, j: int) -> EigMultiset:
        return EigMultiset.from_values([p[0] for p in self.levels[j]])

    def lam_bar_values(self, j: int) -> EigMultiset:
        return EigMultiset.from_values([p[1] for p in self.levels[j]])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "status": self.status,
            "mismatches": self.mismatches,
            "max_projection": self.max_projection,
            "levels": {
                str(j): {
                    "sum": johnson_level_value(self.n, j),
                    "pairs": [[a, b] for a, b in pairs],
                }
                for j, pairs in sorted(self.levels.items())
            },
        }


def _new_at_level(g: Graph, j: int, solver: str) -> EigMultiset:
    """spec F_j(G) minus spec F_{j-1}(G), with F_0 the one-vertex graph (spectrum {0})."""
    upper = token_spectrum(g, j, solver)
    lower = token_spectrum(g, j - 1, solver) if j > 1 else EigMultiset.of({0.0: 1})
    return upper.difference(lower)[0]


def lambda_partition(g: Graph, k: int, tol: float = 1e-8, solver: str = "jacobi") -> LambdaPartition:
    n = g.n
    if not 1 <= k or 2 * k > n:
        raise ValueError(f"need 1 <= k <= n/2, got n={n}, k={k}")
    cert = check_pairing(g, k, tol)
    levels: dict[int, list[tuple[float, float]]] = {}
    for t in cert.triples:
        levels.setdefault(t.level, []).append((t.lam, t.lam_bar))

    mismatches = []
    scale_tol = 1e-7 * max(1.0, n)
    zero = levels.get(0, [])
    if len(zero) != 1 or max(abs(zero[0][0]), abs(zero[0][1])) > scale_tol:
        mismatches.append(f"level 0 is {zero}, expected [(0, 0)]")
    gbar = complement(g)
    for j in range(1, k + 1):
        lam = EigMultiset.from_values([p[0] for p in levels[j]])
        lam_bar = EigMultiset.from_values([p[1] for p in levels[j]])
        want = _new_at_level(g, j, solver)
        want_bar = _new_at_level(gbar, j, solver)
        if not lam.matches(want, tol=scale_tol):
            mismatches.append(f"level {j}: lambda {lam} but spec F_{j} minus spec F_{j-1} is {want}")
        if not lam_bar.matches(want_bar, tol=scale_tol):
            mismatches.append(
                f"level {j}: lambda_bar {lam_bar} but co-G difference is {want_bar}"
            )

    b = binomial_matrix(n, k)
    proj = 0.0
    for j in range(2, k + 1):
        vecs = cert.level_vectors[j]
        norms = np.linalg.norm(b.T @ vecs, axis=0) / np.linalg.norm(vecs, axis=0)
        proj = max(proj, float(norms.max()))
    if proj > tol:
        mismatches.append(f"level eigenvectors have |B^T u| / |u| = {proj:.3e} > {tol}")

    if not (g.is_connected() and gbar.is_connected()):
        status = "hypothesis-unmet"
    else:
        status = "fail" if mismatches else "pass"
    return LambdaPartition(n, k, levels, status, mismatches, proj)


# ----------------------------------------------------------------- conjecture


def phi_threshold(n: int, k: int) -> Fraction:
    """Degree threshold k(n+k-3)/(2k-1), exact."""
    if not 1 <= k <= n // 2:
        raise ValueError(f"need 1 <= k <= floor(n/2), got n={n}, k={k}")
    return Fraction(k * (n + k - 3), 2 * k - 1)


def theorem7_applicable(g: Graph, k: int) -> bool:
    """Max degree at least the threshold (the level k-1 hypothesis is the caller's job)."""
    if not 1 <= k <= g.n // 2:
        return False
    return g.max_degree >= phi_threshold(g.n, k)


@dataclass
class ConjectureVerdict:
    graph6: str
    n: int
    k: int
    alpha_g: float
    alpha_fk: float
    tol: float
    theorem7_applicable: bool
    wall_ms: float | None = None

    @property
    def gap(self) -> float:
        return self.alpha_fk - self.alpha_g

    @property
    def holds(self) -> bool:
        return abs(self.gap) <= self.tol

    def to_dict(self) -> dict:
        return {
            "graph6": self.graph6,
            "n": self.n,
            "k": self.k,
            "alpha_G": self.alpha_g,
            "alpha_FkG": self.alpha_fk,
            "gap": self.gap,
            "holds": self.holds,
            "thm7_applicable": self.theorem7_applicable,
        }


def check_conjecture(
    g: Graph, k: int, tol: float = 1e-8, solver: str = "jacobi", guard: int | None = None
) -> ConjectureVerdict:
    if g.n < 2 or not 1 <= k <= g.n - 1:
        raise ValueError(f"need n >= 2 and 1 <= k <= n-1, got n={g.n}, k={k}")
    check_guard(g.n, k, guard)
    alpha = algebraic_connectivity(g, solver)
    alpha_k = float(laplacian_spectrum(token_graph(g, k, guard).graph, solver)[1])
    return ConjectureVerdict(emit_graph6(g), g.n, k, alpha, alpha_k, tol, theorem7_applicable(g, k))


# ------------------------------------------------------------- degree bounds


@dataclass
class DegreeBoundsReport:
    graph6: str
    k: int
    max_degree: int
    token_max_degree: int
    lambda_max: float
    token_lambda_max: float
    eq1_ok: bool
    eq2_ok: bool | None  # None: no edges, bound not applicable
    eq2_token_ok: bool | None
    tol: float

    @property
    def ok(self) -> bool:
        return self.eq1_ok and self.eq2_ok is not False and self.eq2_token_ok is not False

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def _radius_bounds_ok(delta: int, lam_max: float, tol: float) -> bool | None:
    if delta == 0:
        return None
    return 1 + delta - tol <= lam_max <= 2 * delta + tol


def check_degree_bounds(
    g: Graph, k: int, tol: float = 1e-9, solver: str = "jacobi", guard: int | None = None
) -> DegreeBoundsReport:
    if not 1 <= k <= max(1, g.n):
        raise ValueError(f"need 1 <= k <= n, got n={g.n}, k={k}")
    fk = token_graph(g, k, guard).graph
    lam = float(laplacian_spectrum(g, solver)[-1]) if g.n else 0.0
    lam_k = float(laplacian_spectrum(fk, solver)[-1]) if fk.n else 0.0
    return DegreeBoundsReport(
        emit_graph6(g),
        k,
        g.max_degree,
        fk.max_degree,
        lam,
        lam_k,
        fk.max_degree <= k * g.max_degree,
        _radius_bounds_ok(g.max_degree, lam, tol),
        _radius_bounds_ok(fk.max_degree, lam_k, tol),
        tol,
    )


# ------------------------------------------------------------ edge collapse


@dataclass
class CollapseReport:
    edge: tuple[int, int]
    alpha_tree: float
    alpha_collapsed: float
    ok: bool


def check_collapse_monotonicity(t: Graph, e, tol: float = 1e-9, solver: str = "jacobi") -> CollapseReport:
    if t.n < 3:
        raise ValueError("edge collapse needs a tree with at least 3 vertices")
    if not t.is_tree():
        raise ValueError("graph is not a tree")
    before = algebraic_connectivity(t, solver)
    after = algebraic_connectivity(collapse_edge(t, e), solver)
    return CollapseReport(tuple(sorted(e)), before, after, after >= before - tol)


# ------------------------------------------------------------ spectra search


def find_graph_by_spectra(
    target: EigMultiset, target_complement: EigMultiset, n: int, tol: float = 1e-7, chunk: int = 4096
) -> Graph:
    """First labelled graph (edge-bitmask order) on n vertices whose Laplacian
    spectrum matches ``target`` and whose complement matches ``target_complement``."""
    if not 1 <= n <= MAX_EXHAUSTIVE_N:
        raise ValueError(f"spectra search supports 1 <= n <= {MAX_EXHAUSTIVE_N}, got {n}")
    if target.total != n or target_complement.total != n:
        raise NoMatchError(f"targets must each have {n} eigenvalues")
    want = np.sort(target.values())
    want_bar = np.sort(target_complement.values())
    m = n * (n - 1) // 2
    full = (1 << m) - 1
    # the edge count is fixed by the trace of the Laplacian
    edges2 = round(float(want.sum()))
    for start in range(0, 1 << m, chunk):
        ints = np.arange(start, min(start + chunk, 1 << m), dtype=np.int64)
        masks = batch.masks_from_ints(n, ints)
        keep = masks.sum(axis=1) * 2 == edges2
        if not keep.any():
            continue
        ints, masks = ints[keep], masks[keep]
        spec = batch.token_spectra(masks, n, 1)
        hit = np.all(np.abs(spec - want) <= tol, axis=1)
        if not hit.any():
            continue
        bar = batch.token_spectra(batch.masks_from_ints(n, full ^ ints[hit]), n, 1)
        ok = np.all(np.abs(bar - want_bar) <= tol, axis=1)
        for mask in ints[hit][ok]:
            g = graph_from_mask(n, int(mask))
            # confirm with the Jacobi solver before returning
            if EigMultiset.from_values(laplacian_spectrum(g)).matches(target, tol) and \
                    EigMultiset.from_values(laplacian_spectrum(complement(g))).matches(target_complement, tol):
                return g
    raise NoMatchError(f"no graph on {n} vertices has spectrum {target} with complement {target_complement}")

