"""Depth-first sphere-search kernels.

The tree walk is scalar and branch-heavy, so it is compiled with numba
when available.  Setting WDS_NUMBA=0 skips compilation entirely and runs
the same source in plain Python; `backend()` reports which one is live.
Both paths share one implementation, so results agree bit for bit.
"""
from __future__ import annotations

import os

import numpy as np


def _sd_one(U, p, alphabet, g):
    """Closest lattice point to p under the metric ||U(p-s)||^2, searched
    depth-first from the last dimension with closest-first child ordering
    and radius g.  Returns (index vector, found flag, accepted nodes).

    Ties on the child-ordering distances keep the lower constellation
    index first (stable sort), so equal-metric leaves resolve to the
    lowest index deterministically.
    """
    n = p.shape[0]
    k_card = alphabet.shape[0]
    best = np.zeros(n, np.int8)
    found = False
    best_metric = g
    cent = np.zeros(n, np.complex128)
    partial = np.zeros(n + 1, np.float64)
    order = np.zeros((n, k_card), np.int8)
    child = np.zeros(n, np.int64)
    choice = np.zeros(n, np.int8)
    dist = np.zeros(k_card, np.float64)
    visited = 0

    i = n - 1
    descend = True
    while True:
        if descend:
            acc = 0.0 + 0.0j
            for l in range(i + 1, n):
                acc += U[i, l] * (p[l] - alphabet[choice[l]])
            cent[i] = p[i] + acc / U[i, i]
            for k in range(k_card):
                dr = cent[i].real - alphabet[k].real
                di = cent[i].imag - alphabet[k].imag
                dist[k] = dr * dr + di * di
                order[i, k] = k
            for k in range(1, k_card):
                j = k
                while j > 0 and dist[order[i, j]] < dist[order[i, j - 1]]:
                    swap = order[i, j]
                    order[i, j] = order[i, j - 1]
                    order[i, j - 1] = swap
                    j -= 1
            child[i] = 0

        moved = False
        while child[i] < k_card:
            k = order[i, child[i]]
            child[i] += 1
            dr = cent[i].real - alphabet[k].real
            di = cent[i].imag - alphabet[k].imag
            uii = U[i, i]
            step = (uii.real * uii.real + uii.imag * uii.imag) * (dr * dr + di * di)
            t = partial[i + 1] + step
            if t > best_metric:
                # children are ordered by distance: the rest only grow
                break
            visited += 1
            choice[i] = k
            partial[i] = t
            if i == 0:
                if t < best_metric:
                    best_metric = t
                    found = True
                    for l in range(n):
                        best[l] = choice[l]
            else:
                i -= 1
                descend = True
                moved = True
                break
        if moved:
            continue
        i += 1
        descend = False
        if i >= n:
            return best, found, visited


def _make_batch(sd_one):
    def sd_batch(U, P, SZF, alphabet, slack):
        """Run the search for every row of P.  The radius comes from the
        sliced zero-forcing point, inflated by slack so the starting point
        itself always lies inside; rows where the search reports no leaf
        fall back to that starting point and are flagged."""
        n_rows, n = P.shape
        out = np.empty((n_rows, n), np.int8)
        visited = np.zeros(n_rows, np.int64)
        fallback = np.zeros(n_rows, np.bool_)
        for t in range(n_rows):
            g = 0.0
            for i in range(n - 1, -1, -1):
                acc = 0.0 + 0.0j
                for l in range(i, n):
                    acc += U[i, l] * (P[t, l] - alphabet[SZF[t, l]])
                g += acc.real * acc.real + acc.imag * acc.imag
            g = g * (1.0 + slack) + 1e-300
            best, found, vis = sd_one(U, P[t], alphabet, g)
            visited[t] = vis
            if found:
                out[t] = best
            else:
                out[t] = SZF[t]
                fallback[t] = True
        return out, visited, fallback

    return sd_batch


_flag = os.environ.get("WDS_NUMBA", "").strip().lower()
_want_jit = _flag not in ("0", "false", "no", "off")
_backend = "python"

sd_one_py = _sd_one
sd_batch_py = _make_batch(_sd_one)
sd_one = sd_one_py
sd_batch = sd_batch_py

if _want_jit:
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        sd_one_jit = njit(cache=True)(_sd_one)
        # the batch driver closes over the jitted search, which numba
        # cannot cache; it is tiny, so recompiling per process is fine
        sd_batch_jit = njit(cache=False)(_make_batch(sd_one_jit))
        sd_one = sd_one_jit
        sd_batch = sd_batch_jit
        _backend = "numba"


def backend() -> str:
    return _backend
