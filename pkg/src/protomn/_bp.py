"""Numba kernels: flooding belief propagation and Monte Carlo frame loops."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _bp_core(L, vn_ptr, vn_edges, cn_ptr, cn_edges, inst_vn,
             max_iter, clip, early_stop, v2c, c2v, fwd, decisions):
    """One decode. Returns (iterations_used, syndrome_ok)."""
    nv = vn_ptr.shape[0] - 1
    nc = cn_ptr.shape[0] - 1
    c2v[:] = 0.0
    it_used = max_iter
    synd_ok = False
    for it in range(1, max_iter + 1):
        for v in range(nv):
            total = L[v]
            for idx in range(vn_ptr[v], vn_ptr[v + 1]):
                total += c2v[vn_edges[idx]]
            for idx in range(vn_ptr[v], vn_ptr[v + 1]):
                e = vn_edges[idx]
                m = total - c2v[e]
                if m > clip:
                    m = clip
                elif m < -clip:
                    m = -clip
                v2c[e] = m
        for c in range(nc):
            lo = cn_ptr[c]
            hi = cn_ptr[c + 1]
            prod = 1.0
            for idx in range(lo, hi):
                fwd[idx - lo] = prod
                prod *= math.tanh(0.5 * v2c[cn_edges[idx]])
            back = 1.0
            for idx in range(hi - 1, lo - 1, -1):
                e = cn_edges[idx]
                t = fwd[idx - lo] * back
                if t >= 1.0:
                    m = clip
                elif t <= -1.0:
                    m = -clip
                else:
                    m = math.atanh(t) * 2.0
                    if m > clip:
                        m = clip
                    elif m < -clip:
                        m = -clip
                c2v[e] = m
                back *= math.tanh(0.5 * v2c[e])
        for v in range(nv):
            total = L[v]
            for idx in range(vn_ptr[v], vn_ptr[v + 1]):
                total += c2v[vn_edges[idx]]
            decisions[v] = 1 if total < 0.0 else 0
        ok = True
        for c in range(nc):
            par = 0
            for idx in range(cn_ptr[c], cn_ptr[c + 1]):
                par ^= decisions[inst_vn[cn_edges[idx]]]
            if par:
                ok = False
                break
        if ok:
            it_used = it
            synd_ok = True
            if early_stop:
                return it_used, synd_ok
    return it_used, synd_ok


@njit(cache=True)
def bp_flood(L, vn_ptr, vn_edges, cn_ptr, cn_edges, inst_vn,
             max_iter, clip, early_stop, decisions):
    n_e = vn_edges.shape[0]
    v2c = np.zeros(n_e, dtype=np.float64)
    c2v = np.zeros(n_e, dtype=np.float64)
    maxdeg = 0
    for c in range(cn_ptr.shape[0] - 1):
        d = cn_ptr[c + 1] - cn_ptr[c]
        if d > maxdeg:
            maxdeg = d
    fwd = np.empty(maxdeg, dtype=np.float64)
    return _bp_core(L, vn_ptr, vn_edges, cn_ptr, cn_edges, inst_vn,
                    max_iter, clip, early_stop, v2c, c2v, fwd, decisions)


@njit(cache=True)
def _encode_frame(v_bits, h1_indptr, h1_indices, inv_rows, c_bits):
    """c = H2^-1 H1 v via packed-row XOR accumulate; fills c_bits."""
    n = h1_indptr.shape[0] - 1
    w = inv_rows.shape[1]
    acc = np.zeros(w, dtype=np.uint64)
    for row in range(n):
        par = 0
        for idx in range(h1_indptr[row], h1_indptr[row + 1]):
            par ^= v_bits[h1_indices[idx]]
        if par:
            for t in range(w):
                acc[t] ^= inv_rows[row, t]
    for j in range(n):
        c_bits[j] = np.uint8((acc[j >> 6] >> np.uint64(j & 63)) & np.uint64(1))


@njit(cache=True, nogil=True)
def mc_chunk(supports, noise, sigma, delta, epc_mode,
             h, n, h1_indptr, h1_indices, inv_rows,
             vn_ptr, vn_edges, cn_ptr, cn_edges, inst_vn,
             max_iter, clip, err_out, undet_out, iters_out):
    """Simulate one chunk of frames; fills per-frame error/undetected/iteration arrays.

    supports[f] holds the k support positions of the sparse outer word. In
    epc_mode the all-zero codeword is sent and the support acts as the
    a-priori channel flip pattern; otherwise the frame is encoded and
    BPSK-modulated. noise[f] are standard normal draws for the transmitted
    part.
    """
    frames = supports.shape[0]
    k = supports.shape[1]
    nv = h + n
    n_e = vn_edges.shape[0]
    two_over_var = 2.0 / (sigma * sigma)
    v_bits = np.zeros(h, dtype=np.uint8)
    c_bits = np.zeros(n, dtype=np.uint8)
    L = np.empty(nv, dtype=np.float64)
    decisions = np.zeros(nv, dtype=np.uint8)
    v2c = np.zeros(n_e, dtype=np.float64)
    c2v = np.zeros(n_e, dtype=np.float64)
    maxdeg = 0
    for c in range(cn_ptr.shape[0] - 1):
        d = cn_ptr[c + 1] - cn_ptr[c]
        if d > maxdeg:
            maxdeg = d
    fwd = np.empty(maxdeg, dtype=np.float64)
    for f in range(frames):
        for t in range(k):
            v_bits[supports[f, t]] = 1
        if epc_mode:
            for i in range(h):
                L[i] = delta
            for t in range(k):
                L[supports[f, t]] = -delta
            for j in range(n):
                L[h + j] = two_over_var * (1.0 + sigma * noise[f, j])
        else:
            _encode_frame(v_bits, h1_indptr, h1_indices, inv_rows, c_bits)
            for i in range(h):
                L[i] = delta
            for j in range(n):
                x = 1.0 - 2.0 * c_bits[j]
                L[h + j] = two_over_var * (x + sigma * noise[f, j])
        iters, synd_ok = _bp_core(L, vn_ptr, vn_edges, cn_ptr, cn_edges, inst_vn,
                                  max_iter, clip, True, v2c, c2v, fwd, decisions)
        err = False
        wt = 0
        if epc_mode:
            for i in range(h):
                if decisions[i] != 0:
                    err = True
                wt += decisions[i] ^ v_bits[i]
        else:
            for i in range(h):
                if decisions[i] != v_bits[i]:
                    err = True
                wt += decisions[i]
        err_out[f] = 1 if err else 0
        undet_out[f] = 1 if (err and synd_ok and wt == k) else 0
        iters_out[f] = iters
        for t in range(k):
            v_bits[supports[f, t]] = 0
