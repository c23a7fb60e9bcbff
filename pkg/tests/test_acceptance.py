"""Acceptance suite: every criterion as one test, printing one PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines alongside the pytest verdicts.
"""

import contextlib
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import (FIXTURE_DIR, GaussJordanBasis, brute_force_closed, fixture_path,
                      invoke, random_superposition, random_valid_automaton)
from lqca import fixtures
from lqca.affine import DynamicBasis, decide_closed
from lqca.automaton import Configuration, expand_to_simple
from lqca.border import border_vectors, kleene_closure
from lqca.cli import run_check
from lqca.evolution import Superposition, step, truncated_row_norm
from lqca.numerics import INF
from lqca.transfer import build_transfer_operators, row_norm_squared


@contextlib.contextmanager
def criterion(num: int, text: str):
    try:
        yield
    except BaseException:
        print(f"\n[criterion {num:2d}] FAIL  {text}")
        raise
    print(f"\n[criterion {num:2d}] PASS  {text}")


def run_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "lqca", *args],
                          capture_output=True, text=True)


def test_criterion_01_check_qflip_unitary():
    with criterion(1, "check qflip.json reports UNITARY, exit 0, under 1 s"):
        start = time.perf_counter()
        proc = run_cli("check", fixture_path("qflip"))
        elapsed = time.perf_counter() - start
        assert proc.returncode == 0
        assert "verdict: UNITARY" in proc.stdout
        assert elapsed < 1.0, f"took {elapsed:.2f} s"


def test_criterion_02_check_xor_not_unitary():
    with criterion(2, "check xor.json reports NOT_UNITARY with witness '1', exit 1"):
        proc = run_cli("check", fixture_path("xor"), "--format", "json")
        assert proc.returncode == 1
        data = json.loads(proc.stdout)
        assert data["verdict"] == "NOT_UNITARY"
        assert data["witness_word"] == "1"


def test_criterion_03_borders_qflip():
    with criterion(3, "borders of qflip are l=(1,1), r=(1,0) within 1e-9"):
        bv = border_vectors(fixtures.qflip())
        assert np.allclose(bv.l, [1.0, 1.0], atol=1e-9)
        assert np.allclose(bv.r, [1.0, 0.0], atol=1e-9)
        proc = run_cli("borders", fixture_path("qflip"), "--format", "json")
        data = json.loads(proc.stdout)
        assert data["l"]["a"] == pytest.approx(1.0, abs=1e-9)
        assert data["l"]["b"] == pytest.approx(1.0, abs=1e-9)
        assert data["r"]["a"] == pytest.approx(1.0, abs=1e-9)
        assert data["r"]["b"] == pytest.approx(0.0, abs=1e-9)


def test_criterion_04_inner_product_one():
    with criterion(4, "<l|r> = 1 within 1e-9 for qflip, xor, shift, identity"):
        for name in ("qflip", "xor", "shift", "identity"):
            bv = border_vectors(fixtures.ALL[name]())
            assert bv.inner() == pytest.approx(1.0, abs=1e-9), name


def test_criterion_05_row_norm_convergence():
    with criterion(5, "qflip truncated row norms are 1 - 2^-K and converge to 1"):
        a = fixtures.qflip()
        d = Configuration.from_items({-1: 1})
        for K in range(1, 13):
            value = truncated_row_norm(a, d, (-K, 0))
            assert value == pytest.approx(1.0 - 2.0**-K, abs=1e-9), K
        bv = border_vectors(a)
        exact = row_norm_squared(build_transfer_operators(a), bv.l, bv.r, d)
        assert exact == pytest.approx(1.0, abs=1e-9)


def test_criterion_06_closure_matches_word_enumeration(rng):
    with criterion(6, "decide_closed agrees with word enumeration on 200 random automata"):
        compared = 0
        closed_seen = 0
        attempts = 0
        while compared < 200:
            attempts += 1
            assert attempts < 2000, "generator failed to produce enough finite instances"
            a = random_valid_automaton(rng)
            bv = border_vectors(a)
            if bv.any_infinite:
                continue
            ops = build_transfer_operators(a)
            verdict = decide_closed(bv.l, bv.r, ops)
            expected, _ = brute_force_closed(bv.l, bv.r, ops, a.alphabet_size,
                                             a.m + 1, tol=1e-6)
            assert verdict.closed == expected
            compared += 1
            closed_seen += int(expected)
        assert closed_seen > 0  # both outcomes must actually occur
        assert closed_seen < compared


def test_criterion_07_kleene_vs_enumeration(rng):
    with criterion(7, "path-weight solver matches truncated enumeration; "
                      "weight-1 cycles give inf"):
        for _ in range(100):
            n = int(rng.integers(2, 7))
            adj = rng.uniform(0.0, 0.9, size=(n, n)) * (rng.random((n, n)) < 0.6)
            cap = rng.uniform(0.3, 0.6)
            rowsums = adj.sum(axis=1, keepdims=True)
            adj = np.where(rowsums > cap, adj * cap / np.maximum(rowsums, 1e-12), adj)
            closed = kleene_closure(adj)
            total = np.zeros_like(adj)
            power = np.eye(n)
            for _ in range(40):
                power = power @ adj
                total += power
            for i in range(n):
                for j in range(n):
                    assert not closed[i][j].infinite
                    assert float(closed[i][j]) == pytest.approx(total[i, j], abs=1e-6)
        for _ in range(20):
            n = int(rng.integers(4, 7))
            adj = rng.uniform(0.0, 0.9, size=(n, n)) * (rng.random((n, n)) < 0.4)
            i, c1, c2, j = rng.choice(n, size=4, replace=False)
            adj[i, c1] = 0.5
            adj[c1, c2] = 1.0
            adj[c2, c1] = 1.0
            adj[c2, j] = 0.5
            assert kleene_closure(adj)[i][j] == INF


def test_criterion_08_dynamic_basis_vs_elimination(rng):
    with criterion(8, "dynamic basis agrees with Gauss-Jordan on 1000 request "
                      "sequences and stays within the O(m(m-d)) cost bound"):
        c = 6
        for _ in range(1000):
            m = int(rng.integers(2, 21))
            basis = DynamicBasis(m)
            oracle = GaussJordanBasis(m)
            for _ in range(int(rng.integers(3, 13))):
                roll = rng.random()
                if roll < 0.5 or not basis.vectors:
                    u = rng.normal(size=m)
                else:
                    coeffs = rng.normal(size=len(basis.vectors))
                    u = np.sum([w * v for w, v in zip(coeffs, basis.vectors)], axis=0)
                    if roll >= 0.8:
                        u = u + 1e-3 * rng.normal(size=m)
                d = basis.dim
                got = basis.member(u)
                assert basis.last_request_mults <= c * m * (m - d + 1)
                assert got == oracle.member(u)
                if not got:
                    d = basis.dim
                    basis.add(u)
                    assert basis.last_request_mults <= c * m * (m - d + 1)
                    oracle.add(u)


def test_criterion_09_norm_preservation(rng):
    with criterion(9, "steps preserve norms within 1e-9 on 50 random "
                      "superpositions per well-formed fixture"):
        for name in ("qflip", "xor", "shift", "identity", "qflip_gap", "r1_unitary"):
            a = fixtures.ALL[name]()
            for _ in range(50):
                u = random_superposition(rng, a, width=8, terms=3)
                assert step(a, u).norm() == pytest.approx(u.norm(), abs=1e-9), name


def test_criterion_10_expansion_correctness(rng):
    with criterion(10, "non-simple neighborhood: verdict and step outputs agree "
                       "with the expanded automaton; report carries the "
                       "expansion factor"):
        gapped = fixtures.qflip_gap()
        expanded = expand_to_simple(gapped)
        direct = run_check(gapped)
        image = run_check(expanded)
        assert direct.verdict == image.verdict == "UNITARY"
        assert direct.witness_word == image.witness_word is None
        assert direct.expansion_factor == pytest.approx((3 + 1) / (2 + 1))
        code, out, _ = invoke("check", fixture_path("qflip02"))
        assert code == 0 and "expansion factor: 1.33333" in out
        for _ in range(20):
            cells = {int(i): int(rng.integers(0, 2)) for i in rng.integers(0, 6, size=4)}
            u = Superposition.pure(Configuration.from_items(cells))
            out_g = step(gapped, u)
            out_e = step(expanded, u)
            keys = set(out_g.terms) | set(out_e.terms)
            for dcfg in keys:
                assert out_e.amplitude(dcfg) == pytest.approx(
                    out_g.amplitude(dcfg), abs=1e-12)
