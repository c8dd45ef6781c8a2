"""Jit-compiled inner loops shared by both engines.

These kernels implement the per-generation play phase, the reproduction
step and cooperator-component labeling over flat numpy arrays, drawing
from a numpy Generator in the documented order (see ineqsim.rng). The
scalar operations in the engine modules mirror the same logic for small
inputs; the recorded-transcript equivalence tests hold the two paths
together.

Array conventions: strategies are int8 (1 cooperator, 0 defector),
sensitivities float64, reward counts int64 pairs (units, cb_units).
Neighbor tables are int64 [n_cells, 4] padded with -1, with per-cell
counts alongside; neighbor order is up, down, left, right.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _randbelow(rng, k):
    j = int(rng.random() * k)
    if j >= k:
        j = k - 1
    return j


@njit(cache=True, nogil=True)
def _shuffle_identity(rng, order):
    n = order.shape[0]
    for t in range(n):
        order[t] = t
    for t in range(n - 1, 0, -1):
        j = _randbelow(rng, t + 1)
        tmp = order[t]
        order[t] = order[j]
        order[j] = tmp


@njit(cache=True, nogil=True)
def _choose_partner(rng, i, cands, ncand, lam, units, cbu, cb):
    """Partner index from the candidate list, per the tie-break contract.

    Returns (j, d) where d is the played pair's reward distance.
    """
    vi = units[i] + cbu[i] * cb
    li = lam[i]
    best = -1.0  # negative sentinel: every candidate ties (lambda_i == 0)
    m = ncand
    if li != 0.0:
        best = np.inf
        m = 0
        for t in range(ncand):
            c = cands[t]
            d = abs(vi - (units[c] + cbu[c] * cb))
            if d < best:
                best = d
                m = 1
            elif d == best:
                m += 1
    pick = _randbelow(rng, m) if m > 1 else 0
    if best < 0.0:
        j = cands[pick]
    else:
        j = -1
        seen = 0
        for t in range(ncand):
            c = cands[t]
            d = abs(vi - (units[c] + cbu[c] * cb))
            if d == best:
                if seen == pick:
                    j = c
                    break
                seen += 1
    dj = abs(vi - (units[j] + cbu[j] * cb))
    return j, dj


@njit(cache=True, nogil=True)
def _apply_game(i, j, strat, units, cbu, counts):
    si = strat[i]
    sj = strat[j]
    if si == 1 and sj == 1:
        units[i] += 1
        units[j] += 1
        counts[0] += 1
    elif si == 1:
        units[j] += 1
        cbu[j] += 1
        counts[1] += 1
    elif sj == 1:
        units[i] += 1
        cbu[i] += 1
        counts[1] += 1
    else:
        cbu[i] += 1
        cbu[j] += 1
        counts[2] += 1


@njit(cache=True, nogil=True)
def play_generation_mixed(rng, strat, lam, units, cbu, ns, cb, order, pool, counts):
    """One complete-mixing play phase; counts = [cc, cd, dd, declined]."""
    n = strat.shape[0]
    _shuffle_identity(rng, order)
    for k in range(n):
        i = order[k]
        # candidate pool: all indices except i, then a partial shuffle
        m = 0
        for a in range(n):
            if a != i:
                pool[m] = a
                m += 1
        for t in range(ns):
            j = t + _randbelow(rng, m - t)
            tmp = pool[t]
            pool[t] = pool[j]
            pool[j] = tmp
        j, dj = _choose_partner(rng, i, pool, ns, lam, units, cbu, cb)
        p = math.exp(-(lam[i] + lam[j]) * dj)
        if rng.random() < p:
            _apply_game(i, j, strat, units, cbu, counts)
        else:
            counts[3] += 1


@njit(cache=True, nogil=True)
def play_generation_lattice(
    rng, strat, lam, units, cbu, cb, order, nbr, ncnt, labels, counts
):
    """One lattice play phase; counts = [cc, cd, dd, declined, within_cc].

    labels holds the cooperator-component id of each cell (-1 for
    defectors), computed from this generation's strategies; a played game
    whose endpoints share a component increments counts[4].
    """
    n = strat.shape[0]
    _shuffle_identity(rng, order)
    for k in range(n):
        i = order[k]
        j, dj = _choose_partner(rng, i, nbr[i], ncnt[i], lam, units, cbu, cb)
        p = math.exp(-(lam[i] + lam[j]) * dj)
        if rng.random() < p:
            _apply_game(i, j, strat, units, cbu, counts)
            if strat[i] == 1 and strat[j] == 1 and labels[i] == labels[j]:
                counts[4] += 1
        else:
            counts[3] += 1


@njit(cache=True, nogil=True)
def _mutate_offspring(rng, s, new_strat, new_lam, mu):
    if rng.random() < mu:
        new_strat[s] = 1 if rng.random() < 0.5 else 0
    if rng.random() < mu:
        val = new_lam[s] + rng.standard_normal()
        if val < 0.0:
            val = 0.0
        elif val > 5.0:
            val = 5.0
        new_lam[s] = val


@njit(cache=True, nogil=True)
def reproduce_mixed(rng, strat, lam, units, cbu, mu, cb, new_strat, new_lam):
    """Fill new_strat/new_lam with N binary-tournament offspring."""
    n = strat.shape[0]
    for s in range(n):
        a = _randbelow(rng, n)
        b = _randbelow(rng, n - 1)
        if b >= a:
            b += 1
        va = units[a] + cbu[a] * cb
        vb = units[b] + cbu[b] * cb
        if va > vb:
            w = a
        elif vb > va:
            w = b
        else:
            w = a if rng.random() < 0.5 else b
        new_strat[s] = strat[w]
        new_lam[s] = lam[w]
        _mutate_offspring(rng, s, new_strat, new_lam, mu)


@njit(cache=True, nogil=True)
def reproduce_lattice(
    rng, strat, lam, units, cbu, mu, cb, nbr, ncnt, include_self, new_strat, new_lam
):
    """Synchronous local-tournament replacement; reads only the old grid."""
    n = strat.shape[0]
    for cell in range(n):
        psize = ncnt[cell] + (1 if include_self else 0)
        a = _randbelow(rng, psize)
        b = _randbelow(rng, psize - 1)
        if b >= a:
            b += 1
        ca = nbr[cell, a] if a < ncnt[cell] else cell
        cb_idx = nbr[cell, b] if b < ncnt[cell] else cell
        va = units[ca] + cbu[ca] * cb
        vb = units[cb_idx] + cbu[cb_idx] * cb
        if va > vb:
            w = ca
        elif vb > va:
            w = cb_idx
        else:
            w = ca if rng.random() < 0.5 else cb_idx
        new_strat[cell] = strat[w]
        new_lam[cell] = lam[w]
        _mutate_offspring(rng, cell, new_strat, new_lam, mu)


@njit(cache=True, nogil=True)
def label_components(coop, nbr, ncnt, labels, stack):
    """Flood-fill cooperator cells into components under the neighbor table.

    labels[i] becomes the 0-based component id for cooperator cells and -1
    otherwise; returns the number of components.
    """
    n = coop.shape[0]
    for i in range(n):
        labels[i] = -1
    comp = 0
    for start in range(n):
        if coop[start] == 0 or labels[start] >= 0:
            continue
        top = 0
        stack[top] = start
        top += 1
        labels[start] = comp
        while top > 0:
            top -= 1
            cell = stack[top]
            for t in range(ncnt[cell]):
                nb = nbr[cell, t]
                if coop[nb] == 1 and labels[nb] < 0:
                    labels[nb] = comp
                    stack[top] = nb
                    top += 1
        comp += 1
    return comp
