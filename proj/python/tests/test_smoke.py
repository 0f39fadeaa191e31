import math
import os
import subprocess

import numpy as np
import pytest

import instant_embedding as ie


def test_hash_reference_values():
    assert ie.mix64(0) == 0
    assert [ie.hash_dim(k, 42, 8) for k in (0, 1, 2, 3, 12345)] == [4, 4, 1, 1, 3]
    assert ie.hash_sign(12345, 42) == 1
    assert ie.hash_sign(0, 42) == -1


def test_k2_embedding():
    g = ie.Graph.from_edges(2, [(0, 1)])
    w = ie.instant_embedding(g, 0, dim=8, epsilon=1e-6, seed=42)
    assert w.shape == (8,)
    assert abs(w[4] + 0.07796154146971171) < 3e-6
    assert np.count_nonzero(w) == 1


def test_ppr_matches_exact_within_epsilon():
    g = ie.erdos_renyi(300, 0.03, seed=5)
    eps = 1e-4
    masses, stats = ie.approximate_ppr(g, 7, epsilon=eps)
    exact = ie.exact_ppr(g, 7)
    for u in range(g.node_count):
        gap = exact[u] - masses.get(u, 0.0)
        assert -1e-10 <= gap < eps * max(g.degree(u), 1) + 1e-10
    assert stats["nodes_touched"] <= 2 / (0.85 * eps)


def test_graph_embedding_rows_are_instant_embeddings(tmp_path):
    g, blocks = ie.stochastic_block_model([30, 30], 0.3, 0.02, seed=1)
    assert len(blocks) == 60
    path = tmp_path / "g.iecs"
    g.save(path)
    mapped = ie.Graph.open(path)
    assert mapped.file_backed
    m = ie.graph_embedding(mapped, dim=32, epsilon=1e-3, seed=3, workers=2)
    assert m.shape == (60, 32)
    for v in (0, 17, 59):
        row = ie.instant_embedding(mapped, v, dim=32, epsilon=1e-3, seed=3)
        assert row.tobytes() == m[v].tobytes()


def test_project_and_features():
    h = ie.project([(5, 2.0), (9, -1.0)], 3, 16)
    assert h.shape == (16,)
    assert ie.edge_feature([1.0, 2.0], [3.0, 4.0], "dot") == 11.0
    assert list(ie.edge_feature([1.0, 2.0], [3.0, 4.0], "l1")) == [2.0, 2.0]
    assert ie.roc_auc([0.9, 0.8, 0.7, 0.1], [True, False, True, False]) == 0.75
    assert ie.transform_mass(0.5, 4) == pytest.approx(math.log(2.0))


def test_errors():
    g = ie.Graph.from_edges(2, [(0, 1)])
    with pytest.raises(IndexError):
        ie.instant_embedding(g, 5)
    with pytest.raises(ValueError):
        ie.instant_embedding(g, 0, alpha=1.5)
    with pytest.raises(OSError):
        ie.Graph.open("/nonexistent/graph.iecs")


@pytest.mark.skipif("IEMB_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_help():
    out = subprocess.run([os.environ["IEMB_CLI"], "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "linkpred" in out.stdout
