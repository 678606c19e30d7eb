from __future__ import annotations

import os
import subprocess
import sys
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from linsyz import _kernels
from linsyz._kernels import multiset_weight_counts, nullspace_mod_p, rank_mod_p, rref_mod_p

P = 32003


def fraction_rank_mod_p(rows, p):
    # textbook elimination over F_p with Python ints, independent of both kernels
    mat = [[int(x) % p for x in r] for r in rows]
    rank = 0
    for c in range(len(mat[0]) if mat else 0):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c] * inv % p
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_matches_textbook_elimination(rows):
    assert rank_mod_p(np.array(rows), P) == fraction_rank_mod_p(rows, P)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_loop_and_numpy_paths_agree(rows):
    a = np.array(rows, dtype=np.int64) % 101
    b = a.copy()
    piv_a = _kernels._rref_impl(a, np.int64(101))
    piv_b = _kernels.rref_numpy(b, 101)
    assert list(piv_a) == list(piv_b)
    assert (a == b).all()
    c = np.array(rows, dtype=np.int64) % 101
    piv_c = _kernels.rref_loops_python(c, 101)
    assert list(piv_c) == list(piv_a) and (c == a).all()


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_nullspace(rows):
    a = np.array(rows, dtype=np.int64)
    ns = nullspace_mod_p(a, P)
    assert ns.shape[0] == a.shape[1] - rank_mod_p(a, P)
    if ns.size:
        assert not ((a @ ns.T) % P).any()


def test_rref_shape():
    r, piv = rref_mod_p([[2, 4], [1, 2]], 7)
    assert list(piv) == [0]
    assert r.tolist() == [[1, 2], [0, 0]]


def brute_counts(weights, t):
    out = {}
    for combo in combinations_with_replacement(range(len(weights)), t):
        key = sum(weights[i] for i in combo)
        out[key] = out.get(key, 0) + 1
    return out


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=5), st.integers(0, 4))
def test_multiset_counts_against_brute_force(weights, t):
    length = 6 * t + 1
    got = multiset_weight_counts(weights, t, length)[t]
    want = brute_counts(weights, t)
    assert {int(k): int(v) for k, v in enumerate(got) if v} == want
    alt = _kernels.multiset_counts_numpy(np.array(weights, dtype=np.int64), t, length)
    assert (alt == multiset_weight_counts(weights, t, length)).all()


def test_env_flag_selects_numpy_path():
    code = ("from linsyz import _kernels, plethysm, curves, resolve; "
            "print(_kernels.USE_NUMBA, plethysm.sym_sym_oracle(3, 3, 2).sl_reduced()); "
            "g = curves.ferrand_double_ideal(2); "
            "print(resolve.koszul_betti(g, [(0, 0), (1, 2), (2, 3), (3, 4)]).totals())")
    env = dict(os.environ, LINSYZ_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.splitlines() == ["False S9 + S5 + S3", "[1, 6, 8, 3]"]


def test_benchmark_smoke():
    bench = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(bench), "--sizes", "20", "--multiset", "5", "--t", "3", "--repeat", "1",
                          "--no-e2e"], capture_output=True, text=True, check=True).stdout
    assert out.splitlines()[0].split()[:3] == ["case", "numpy", "s"]
    assert any(line.startswith("rref 20x30") for line in out.splitlines())
