"""End-to-end acceptance checks. Each test records one PASS/FAIL line that is
printed in the pytest terminal summary."""

from math import comb, cos, pi

import numpy as np
import pytest

from token_spectra import batch
from token_spectra.corpus import edge_order, enumerate_labeled_graphs, enumerate_labeled_trees, graph_from_mask, prufer_decode
from token_spectra.graph6 import parse_graph6, read_graph6
from token_spectra.graphs import FamilySpec, Graph, build_family, collapse_edge, complement
from token_spectra.harness import SweepConfig, builtin_corpus, sweep
from token_spectra.jacobi import jacobi_eigh
from token_spectra.multiset import EigMultiset
from token_spectra.spectral import (
    algebraic_connectivity,
    eig_sym,
    extend_embedding,
    fiedler_vector,
    laplacian,
    lift_eigenvector,
    rayleigh_quotient,
)
from token_spectra.theory import (
    check_conjecture,
    check_degree_bounds,
    check_pairing,
    complete_graph,
    find_graph_by_spectra,
    johnson_spectrum,
    token_spectrum,
)
from token_spectra.tokens import binomial_matrix, restrict_by_element, token_graph

M = EigMultiset.of


def test_johnson_closed_form(record):
    worst = 0.0
    for n in range(4, 9):
        for k in range(1, min(4, n - 1) + 1):
            got = np.sort(token_spectrum(complete_graph(n), k).values())
            want = np.sort(johnson_spectrum(n, k).values())
            worst = max(worst, float(np.abs(got - want).max()))
    f2k4 = token_spectrum(complete_graph(4), 2)
    j63 = token_spectrum(complete_graph(6), 3)
    ok = worst <= 1e-8 and f2k4.matches(M({0: 1, 4: 3, 6: 2}), 1e-8) and j63.matches(
        M({0: 1, 6: 5, 10: 9, 12: 5}), 1e-8
    )
    record("1 johnson-closed-form", ok, f"max deviation {worst:.2e} over 4<=n<=8, k<=4")
    assert ok


def test_six_vertex_example(record):
    g = find_graph_by_spectra(M({0: 1, 2: 1, 4: 3, 6: 1}), M({0: 2, 2: 3, 4: 1}), 6)
    gbar = complement(g)
    tol = 1e-7
    printed = {
        "F2(G)": (g, 2, M({0: 1, 2: 1, 4: 5, 6: 4, 8: 3, 10: 1})),
        "F3(G)": (g, 3, M({0: 1, 2: 1, 4: 6, 6: 4, 8: 5, 10: 3})),
        "F2(coG)": (gbar, 2, M({0: 3, 2: 6, 4: 4, 6: 2})),
    }
    ok = True
    for name, (h, k, want) in printed.items():
        ok &= token_spectrum(h, k).matches(want, tol)
    # the printed F3(coG) multiset lists 19 of the 20 values; the pairing grid
    # alongside it includes the missing eigenvalue 8
    f3bar = token_spectrum(gbar, 3)
    listed = M({0: 3, 2: 8, 4: 6, 6: 2})
    rest, missing = f3bar.difference(listed, tol)
    ok &= missing.total == 0 and rest.matches(M({8: 1}), tol)
    ok &= f3bar.matches(M({0: 3, 2: 8, 4: 6, 6: 2, 8: 1}), tol)

    cert = check_pairing(g, 3)
    ok &= cert.level_sums().matches(M({0: 1, 6: 5, 10: 9, 12: 5}), tol)
    ok &= cert.lam_values(3).matches(M({4: 1, 8: 2, 10: 2}), tol)
    ok &= cert.max_residual <= tol
    record(
        "2 six-vertex-example",
        bool(ok),
        f"G edges {g.edges}; F3(coG) extra beyond listed: {rest}; pair residual {cert.max_residual:.1e}",
    )
    assert ok


def test_conjecture_sweep_small_graphs(record):
    tol = 1e-6
    graphs = rows = fails = 0
    for n in range(3, 7):
        rep = sweep(SweepConfig(source="exhaustive", n=n, ks=(2,), tol=tol), keep_rows=False)
        graphs += rep.summary.graphs
        rows += rep.summary.rows
        fails += rep.summary.fails
    rep7 = sweep(SweepConfig(source="graph6", path="builtin:graphs7", ks=(2,), tol=tol), keep_rows=False)
    # independent route on a sample: Jacobi on the explicit token graph
    spot = 0
    for mask in range(0, 1 << 15, 331):
        spot += not check_conjecture(graph_from_mask(6, mask), 2, tol=tol).holds
    ok = fails == 0 and rep7.summary.fails == 0 and rep7.summary.graphs == 1044 and spot == 0
    record(
        "3 conjecture-k2-sweep",
        ok,
        f"{graphs} labelled graphs 3<=n<=6 ({rows} rows) + {rep7.summary.graphs} graphs n=7: "
        f"{fails + rep7.summary.fails} failures, max |gap| {max(rep.summary.max_abs_gap, rep7.summary.max_abs_gap):.1e}",
    )
    assert ok


def test_trees(record):
    tol = 1e-6
    graphs = rows = fails = 0
    gap = 0.0
    for n in range(2, 9):
        rep = sweep(SweepConfig(source="trees", n=n, tol=tol), keep_rows=False)
        graphs += rep.summary.graphs
        rows += rep.summary.rows
        fails += rep.summary.fails
        gap = max(gap, rep.summary.max_abs_gap)
    ok = fails == 0 and graphs == sum(n ** (n - 2) for n in range(2, 9))
    record("4 trees", ok, f"{graphs} labelled trees n<=8, {rows} (tree, k) rows, {fails} failures, max |gap| {gap:.1e}")
    assert ok


def family_alpha(kind, g):
    n = g.n
    if kind == "complete":
        return float(n)
    if kind == "star":
        return 1.0
    if kind == "path":
        return 2 * (1 - cos(pi / n))
    # K_{n1,n2} with n1 <= n2 and n2 >= 2
    return float(min(len(g.neighbors(1)), n - len(g.neighbors(1))))


def test_named_families(record):
    tol = 1e-7
    worst = 0.0
    rows = 0
    for kind, n0 in [("complete", 2), ("star", 3), ("path", 2), ("complete_multipartite", 3)]:
        rep = sweep(SweepConfig(source="family", family=kind, n=n0, n_max=10, tol=tol))
        for row in rep.rows:
            g = parse_graph6(row.graph6)
            want = family_alpha(kind, g)
            worst = max(worst, abs(row.alpha_fk - want), abs(row.alpha_g - want))
            rows += 1
    # the largest instances again through the Jacobi path
    for kind, params in [("complete", (10,)), ("star", (10,)), ("path", (10,)), ("complete_multipartite", (4, 6))]:
        g = build_family(FamilySpec(kind, params))
        worst = max(worst, abs(check_conjecture(g, 5).alpha_fk - family_alpha(kind, g)))
    ok = worst <= tol
    record("5 named-families", ok, f"{rows} (graph, k) rows n<=10, max deviation from closed form {worst:.1e}")
    assert ok


def test_degree_threshold_implication(record):
    checked = violations = unmet = 0
    for n in range(2, 7):
        rep = sweep(SweepConfig(source="exhaustive", n=n), keep_rows=False)
        checked += rep.summary.thm7_checked
        violations += rep.summary.thm7_violations
        unmet += rep.summary.thm7_hypothesis_unmet
    ok = violations == 0 and checked > 0
    record("6 degree-threshold-implication", ok, f"{checked} instances checked, {violations} violations, {unmet} with lower level unverified")
    assert ok


def collapsed_masks(n):
    """For each edge position of K_n, the position weights after collapsing that edge."""
    pairs = edge_order(n)
    small = {p: i for i, p in enumerate(edge_order(n - 1))}
    weights = np.zeros((len(pairs), len(pairs)), dtype=np.int64)
    for ei, (u, v) in enumerate(pairs):

        def relabel(x):
            x = u if x == v else x
            return x - 1 if x > v else x

        for pi_, (i, j) in enumerate(pairs):
            a, b = sorted((relabel(i), relabel(j)))
            if pi_ != ei and a != b:
                weights[ei, pi_] = 1 << small[(a, b)]
    return weights


def mask_ints(masks):
    return masks.astype(np.int64) @ (1 << np.arange(masks.shape[1], dtype=np.int64))


def collapse_suite(rng):
    bad = 0
    alpha_small = {}
    for n in range(2, 9):
        trees = list(enumerate_labeled_trees(n))
        masks = np.array([batch.edge_mask(t) for t in trees])
        alpha = np.linalg.eigvalsh(batch.token_laplacians(masks, n, 1))[:, 1]
        if n >= 3:
            bits = masks.astype(np.int64)
            weights = collapsed_masks(n)
            for ei in range(len(weights)):
                has = bits[:, ei] == 1
                after = bits[has] @ weights[ei]
                lookup = np.array([alpha_small[int(m)] for m in after])
                bad += int(np.sum(lookup < alpha[has] - 1e-9))
            # the mask arithmetic agrees with collapse_edge on a sample
            for i in rng.choice(len(trees), size=min(200, len(trees)), replace=False):
                t = trees[i]
                for e in t.edges[:2]:
                    c = collapse_edge(t, e)
                    key = int(mask_ints(batch.edge_mask(c)[None, :])[0])
                    bad += abs(algebraic_connectivity(c) - alpha_small[key]) > 1e-9
        alpha_small = dict(zip(mask_ints(masks).tolist(), alpha.tolist()))
    return bad


def test_property_suites(record):
    rng = np.random.default_rng(20261015)
    report = {}

    # max-degree and spectral-radius bounds
    bad = 0
    cases = 0
    for n in range(1, 6):
        for g in enumerate_labeled_graphs(n):
            for k in range(1, max(1, n - 1) + 1):
                bad += not check_degree_bounds(g, k, solver="lapack").ok
                cases += 1
    for g in read_graph6(open(builtin_corpus("graphs7")).readlines()):
        for k in (2, 3):
            bad += not check_degree_bounds(g, k, solver="lapack").ok
            cases += 1
    report["degree bounds"] = (bad, cases)

    # lifted eigenvectors stay eigenvectors
    worst = 0.0
    for n in range(2, 6):
        for g in enumerate_labeled_graphs(n):
            res = eig_sym(laplacian(g))
            for k in range(2, n):
                lk = laplacian(token_graph(g, k).graph)
                b = binomial_matrix(n, k)
                lifted = np.column_stack([lift_eigenvector(b, v) for v in res.eigenvectors.T])
                worst = max(worst, float(np.abs(lk @ lifted - lifted * res.eigenvalues).max()))
    report["lift residual"] = (int(worst > 1e-8), f"{worst:.1e}")

    # eigenvectors with zero projection sum to zero on both sides of every restriction
    worst = 0.0
    for n, k in [(4, 2), (5, 2), (6, 3)]:
        graphs = enumerate_labeled_graphs(n) if n < 6 else (graph_from_mask(6, int(m)) for m in rng.integers(0, 1 << 15, 300))
        for g in graphs:
            cert = check_pairing(g, k)
            t = token_graph(g, k)
            vecs = np.hstack([cert.level_vectors[j] for j in range(2, k + 1)])
            for a in range(1, n + 1):
                r = restrict_by_element(t, a)
                worst = max(worst, float(np.abs(vecs[list(r.in_a)].sum(axis=0)).max()),
                            float(np.abs(vecs[list(r.out_a)].sum(axis=0)).max()))
    report["restriction zero-sum"] = (int(worst > 1e-8), f"{worst:.1e}")

    report["edge collapse"] = (collapse_suite(rng), "all trees n<=8")

    # pendant extension of 1000 random Fiedler vectors
    bad = 0
    worst_sum = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 10))
        # a random tree plus random extra edges, so G is connected
        tree = prufer_decode(rng.integers(1, n + 1, n - 2).tolist(), n)
        extra = graph_from_mask(n, int(rng.integers(0, 1 << comb(n, 2))))
        g = Graph.from_edges(n, set(tree.edges) | set(extra.edges))
        a = int(rng.integers(1, n + 1))
        v = fiedler_vector(g)
        w = extend_embedding(v, attach_at=a)
        g_plus = Graph.from_edges(n + 1, g.edges + [(a, n + 1)])
        worst_sum = max(worst_sum, abs(w.sum()))
        q = rayleigh_quotient(g_plus, w)
        bad += not (algebraic_connectivity(g_plus) - 1e-9 <= q <= algebraic_connectivity(g) + 1e-9)
    report["pendant extension"] = (bad + int(worst_sum > 1e-10), f"max |sum w| {worst_sum:.1e}")

    ok = all(v[0] == 0 for v in report.values())
    detail = "; ".join(f"{name}: {'ok' if v[0] == 0 else 'FAIL'} ({v[1]})" for name, v in report.items())
    record("7 property-suites", ok, detail)
    assert ok, detail


def test_eigensolver_oracle(record):
    rng = np.random.default_rng(7)
    orders = np.linspace(2, 300, 100).round().astype(int)
    worst_rec = worst_orth = 0.0
    for n in orders:
        p = rng.uniform(0.05, 0.9)
        upper = np.triu(rng.random((n, n)) < p, 1)
        adj = (upper | upper.T).astype(float)
        a = np.diag(adj.sum(axis=1)) - adj
        w, q, _ = jacobi_eigh(a)
        worst_rec = max(worst_rec, np.linalg.norm(a - q @ np.diag(w) @ q.T) / max(np.linalg.norm(a), 1e-300))
        worst_orth = max(worst_orth, np.linalg.norm(q.T @ q - np.eye(n)))
    ok = worst_rec <= 1e-10 and worst_orth <= 1e-10
    record("8 eigensolver-oracle", ok, f"100 Laplacians, orders 2..300: reconstruction {worst_rec:.1e}, orthogonality {worst_orth:.1e}")
    assert ok
