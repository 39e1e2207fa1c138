"""End-to-end fractional clique decomposition pipeline.

Enumerates the K_s copies of G, applies the defect operator matrix-free,
runs the contractive fixed-point iteration for the block system, extracts
per-clique weights, and verifies the decomposition edge by edge.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .graph_core import (
    GraphError,
    MultipartiteGraph,
    binom,
    check_admissible,
    threshold_c,
)
from .scheme import EdgeVector, apply_idempotent, eigenmatrices
from .spectral import (
    apply_mgamma,
    apply_mgamma_eta_inverse,
    apply_mgamma_inverse,
    eta_star,
)

Clique = tuple  # s vertices (part, idx), sorted by part


class SolveError(GraphError):
    pass


class NonConvergence(SolveError):
    pass


class NegativeWeight(SolveError):
    pass


@dataclass
class CliqueList:
    """All K_s copies of G plus their per-edge incidence (G-first edge indices)."""

    cliques: list[Clique]
    incidence: np.ndarray  # shape (len(cliques), C(s,2))

    def __len__(self):
        return len(self.cliques)


def enumerate_cliques(graph: MultipartiteGraph) -> CliqueList:
    """Backtracking over part subsets of size s, one vertex per part.

    Joins parts one at a time with vectorized adjacency masks; complete and
    duplicate-free by construction.
    """
    st = graph.structure
    r, s, n = st.r, st.s, st.n
    allowed = {}
    for p1, p2 in st.part_pairs():
        mask = np.ones((n, n), dtype=bool)
        for (a, i1), (b, i2) in graph.missing:
            if (a, b) == (p1, p2):
                mask[i1, i2] = False
        allowed[(p1, p2)] = mask

    cliques: list[Clique] = []
    rows = []
    ed = graph.indexing
    pair_pos = {pp: t for t, pp in enumerate(st.part_pairs())}
    for parts in combinations(range(r), s):
        partial = np.arange(n, dtype=np.int64).reshape(n, 1)
        for t in range(1, s):
            ok = np.ones((partial.shape[0], n), dtype=bool)
            for j in range(t):
                ok &= allowed[(parts[j], parts[t])][partial[:, j], :]
            who, nxt = np.nonzero(ok)
            partial = np.concatenate(
                [partial[who], nxt.reshape(-1, 1)], axis=1)
            if partial.shape[0] == 0:
                break
        if partial.shape[0] == 0:
            continue
        # base lex edge indices, then the G-first permutation
        idx_cols = []
        for a, b in combinations(range(s), 2):
            base = (pair_pos[(parts[a], parts[b])] * n * n
                    + partial[:, a] * n + partial[:, b])
            idx_cols.append(ed.pos[base])
        rows.append(np.stack(idx_cols, axis=1))
        cliques.extend(
            tuple((parts[j], int(row[j])) for j in range(s)) for row in partial)

    if not rows:
        return CliqueList(cliques=[], incidence=np.zeros((0, binom(s, 2)), dtype=np.int64))
    return CliqueList(cliques=cliques, incidence=np.concatenate(rows, axis=0))


def apply_mg(y: np.ndarray, cliques: CliqueList, num_graph_edges: int) -> np.ndarray:
    """Clique-pair operator of G: accumulate each clique's edge sum onto its edges."""
    inc = cliques.incidence
    if inc.shape[0] == 0:
        return np.zeros(num_graph_edges)
    sigma = y[inc].sum(axis=1)
    out = np.bincount(
        inc.ravel(),
        weights=np.repeat(sigma, inc.shape[1]),
        minlength=num_graph_edges)
    return out[:num_graph_edges]


def apply_delta(z: np.ndarray, graph: MultipartiteGraph, cliques: CliqueList,
                em=None) -> np.ndarray:
    """Defect operator on a full host vector; missing-edge rows are zero."""
    st = graph.structure
    ng = graph.indexing.num_graph_edges
    vec = EdgeVector(graph.indexing, z)
    host_part = apply_mgamma(st.r, st.s, st.n, vec, em)
    out = np.zeros_like(z)
    out[:ng] = apply_mg(z[:ng], cliques, ng) - host_part[:ng]
    return out


def apply_delta_eta(z: np.ndarray, graph: MultipartiteGraph, cliques: CliqueList,
                    eta, em=None) -> np.ndarray:
    """Eta-shifted defect operator.

    The shift cancels on the E(G) x E(G) block; only the E_2 block against
    the missing edges survives, applied here to z restricted to them.
    """
    out = apply_delta(z, graph, cliques, em)
    ng = graph.indexing.num_graph_edges
    zhat = np.zeros_like(z)
    zhat[ng:] = z[ng:]
    e2_tail = apply_idempotent(2, EdgeVector(graph.indexing, zhat), em)
    out[:ng] -= float(eta) * e2_tail[:ng]
    return out


@dataclass
class SolveReport:
    iterations: int = 0
    final_residual_inf: float = float("nan")
    measured_contraction: float = float("nan")
    guarantee: str = "attempted"  # "certified" | "attempted"
    c_actual: float = float("nan")
    c_bound: float = float("nan")
    admissible: bool = True
    converged: bool = False
    min_weight: float = float("nan")
    max_edge_sum_error: float = float("nan")
    eta: float | None = None
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["timings"] = dict(self.timings)
        return d


def neumann_solve(graph: MultipartiteGraph, cliques: CliqueList | None = None,
                  eta=None, tol: float = 1e-10, max_iter: int = 200,
                  report: SolveReport | None = None) -> tuple[np.ndarray, SolveReport]:
    """Fixed-point iteration z <- Minv(1 - Delta z) for the block system.

    M is the host operator (eta-shifted when eta is given); geometric
    convergence at the contraction rate of Minv Delta, which the certified
    regime bounds by 1/2. Stops on the true residual of the block system.
    """
    st = graph.structure
    r, s, n = st.r, st.s, st.n
    if report is None:
        report = SolveReport()
    if cliques is None:
        cliques = enumerate_cliques(graph)
    em = eigenmatrices(r, n)
    if eta is None:
        if r < s + 2:
            raise SolveError(
                "host operator singular at r = s+1; use the eta path")
        minv = lambda v: apply_mgamma_inverse(r, s, n, EdgeVector(graph.indexing, v), em)
        delta = lambda v: apply_delta(v, graph, cliques, em)
        mfull = lambda v: apply_mgamma(r, s, n, EdgeVector(graph.indexing, v), em)
    else:
        eta_f = float(eta)
        report.eta = eta_f
        minv = lambda v: apply_mgamma_eta_inverse(
            r, s, n, eta, EdgeVector(graph.indexing, v), em)
        delta = lambda v: apply_delta_eta(v, graph, cliques, eta, em)
        mfull = lambda v: (apply_mgamma(r, s, n, EdgeVector(graph.indexing, v), em)
                           + eta_f * apply_idempotent(2, EdgeVector(graph.indexing, v), em))

    m = graph.indexing.num_edges
    ones = np.ones(m)
    z = minv(ones)
    prev_step = None
    contraction = 0.0
    for it in range(1, max_iter + 1):
        z_next = minv(ones - delta(z))
        step = np.abs(z_next - z).max()
        if prev_step is not None and prev_step > 0:
            contraction = max(contraction, step / prev_step)
        prev_step = step
        z = z_next
        residual = np.abs(mfull(z) + delta(z) - ones).max()
        report.iterations = it
        report.final_residual_inf = float(residual)
        report.measured_contraction = float(contraction)
        if residual < tol:
            report.converged = True
            return z, report
    raise NonConvergence(
        f"no convergence after {max_iter} iterations "
        f"(residual {report.final_residual_inf:.3e})")


@dataclass
class FractionalDecomposition:
    """Nonnegative weights on the K_s copies of G; edge sums should be 1."""

    cliques: CliqueList
    weights: np.ndarray

    def items(self):
        return zip(self.cliques.cliques, self.weights)


CLIP_TOL = 1e-12


def extract_weights(y: np.ndarray, cliques: CliqueList) -> FractionalDecomposition:
    """Clique weights w(K) = sum of y over the edges of K.

    Entries of y in [-CLIP_TOL, 0) are floating-point noise and are clipped;
    anything more negative is a hard failure.
    """
    worst = float(y.min()) if y.size else 0.0
    if worst < -CLIP_TOL:
        raise NegativeWeight(
            f"edge solution has entry {worst:.3e} below -{CLIP_TOL:.0e}")
    inc = cliques.incidence
    w = y[inc].sum(axis=1) if inc.shape[0] else np.zeros(0)
    return FractionalDecomposition(cliques=cliques, weights=np.clip(w, 0.0, None))


def verify_decomposition(graph: MultipartiteGraph,
                         decomp: FractionalDecomposition) -> float:
    """Max deviation of any per-edge weight sum from 1, recomputed from scratch.

    Walks the weight map clique by clique, resolving edge indices
    independently of the solver's incidence arrays.
    """
    ed = graph.indexing
    cover = np.zeros(ed.num_graph_edges)
    for K, w in decomp.items():
        for u, v in combinations(K, 2):
            cover[ed.index((u, v))] += w
    return float(np.abs(cover - 1.0).max()) if cover.size else 0.0


def decompose(graph: MultipartiteGraph, tol: float = 1e-10, max_iter: int = 200,
              eta=None, force: bool = False,
              ) -> tuple[FractionalDecomposition, SolveReport]:
    """Full pipeline: admissibility, certification, solve, weights, verification."""
    st = graph.structure
    r, s, n = st.r, st.s, st.n
    if r < s + 1:
        raise SolveError(f"r = s is out of scope, got r={r}, s={s}")
    report = SolveReport()
    t0 = time.perf_counter()

    adm = check_admissible(graph)
    report.admissible = adm.admissible
    c_actual = Fraction(n - graph.min_partite_degree(), n)
    c_bound, _ = threshold_c(r, s)
    report.c_actual = float(c_actual)
    report.c_bound = float(c_bound)
    certified = adm.admissible and c_actual <= c_bound
    report.guarantee = "certified" if certified else "attempted"

    if r == s + 1:
        if not adm.admissible:
            raise SolveError(
                "inadmissible input on the r = s+1 path: "
                f"nec1 violations {adm.nec1_violations[:3]}, "
                f"nec2 violations {adm.nec2_violations[:3]}")
        if eta is None:
            eta = eta_star(s, n)
    report.timings["admissibility"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    cliques = enumerate_cliques(graph)
    report.timings["enumerate"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    z, report = neumann_solve(graph, cliques, eta=eta, tol=tol,
                              max_iter=max_iter, report=report)
    report.timings["solve"] = time.perf_counter() - t2

    t3 = time.perf_counter()
    ng = graph.indexing.num_graph_edges
    y = z[:ng]
    decomp = extract_weights(y, cliques)
    report.min_weight = float(y.min()) if y.size else 0.0
    report.max_edge_sum_error = verify_decomposition(graph, decomp)
    report.timings["verify"] = time.perf_counter() - t3
    return decomp, report
