# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Statement-for-statement mirror of ``semtoken.kernels.pure``; compiled
with -ffp-contract=off so both backends produce bit-identical float64
output.  Keep the two files in sync: the cross-backend equality test in
tests/test_kernels.py guards the pairing.
"""

from libc.math cimport ceil, sqrt
from libc.stdint cimport int32_t, int64_t, uint64_t

import numpy as np

cdef uint64_t _MASK = <uint64_t> 0xFFFFFFFFFFFFFFFF
cdef uint64_t _FNV_OFFSET = <uint64_t> 0xCBF29CE484222325
cdef uint64_t _FNV_PRIME = <uint64_t> 0x100000001B3
cdef double _NORM_EPS = 1e-12


cdef inline uint64_t _splitmix64(uint64_t x) nogil:
    cdef uint64_t z = x + <uint64_t> 0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t> 0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _fnv1a64(const unsigned char[::1] buf, Py_ssize_t start, Py_ssize_t length) nogil:
    cdef uint64_t h = _FNV_OFFSET
    cdef Py_ssize_t i
    for i in range(start, start + length):
        h = (h ^ <uint64_t> buf[i]) * _FNV_PRIME
    return h


def surface_features(encoded, seed):
    """See ``semtoken.kernels.pure.surface_features``."""
    cdef uint64_t seed_mix = _splitmix64(<uint64_t> (seed & 0xFFFFFFFFFFFFFFFF))
    cdef Py_ssize_t nsurf = len(encoded)
    offsets_arr = np.zeros(nsurf + 1, dtype=np.int64)
    cdef int64_t[::1] offsets = offsets_arr
    cdef Py_ssize_t i, nchars, ngrams
    cdef const unsigned char[::1] buf
    for i in range(nsurf):
        buf = encoded[i]
        nchars = buf.shape[0] // 4
        ngrams = nchars - 2 if nchars > 2 else 0
        offsets[i + 1] = offsets[i] + 1 + ngrams
    flat_arr = np.empty(offsets_arr[nsurf], dtype=np.uint64)
    cdef uint64_t[::1] flat = flat_arr
    cdef Py_ssize_t pos = 0, g
    for i in range(nsurf):
        buf = encoded[i]
        nchars = buf.shape[0] // 4
        ngrams = nchars - 2 if nchars > 2 else 0
        flat[pos] = _splitmix64(_fnv1a64(buf, 0, buf.shape[0]) ^ seed_mix)
        pos += 1
        for g in range(ngrams):
            flat[pos] = _splitmix64(_fnv1a64(buf, 4 * g, 12) ^ seed_mix)
            pos += 1
    return flat_arr, offsets_arr


def embed_rows(flat, offsets, sids, d, k):
    """See ``semtoken.kernels.pure.embed_rows``."""
    cdef uint64_t[::1] flat_v = flat
    cdef int64_t[::1] offs = offsets
    cdef int32_t[::1] sids_v = sids
    cdef Py_ssize_t n = sids_v.shape[0]
    cdef Py_ssize_t dd = d
    cdef Py_ssize_t kk = k
    out_arr = np.zeros((n, dd), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t nsurf = offs.shape[0] - 1

    idx1_arr = np.empty(flat_v.shape[0], dtype=np.int64)
    sgn1_arr = np.empty(flat_v.shape[0], dtype=np.float64)
    cdef int64_t[::1] idx1 = idx1_arr
    cdef double[::1] sgn1 = sgn1_arr
    cdef Py_ssize_t s, f, lo, hi
    cdef uint64_t u
    for s in range(nsurf):
        lo = offs[s]
        hi = offs[s + 1]
        for f in range(hi - lo):
            u = flat_v[lo + f]
            idx1[lo + f] = <int64_t> (u % <uint64_t> dd)
            sgn1[lo + f] = -1.0 if (u >> 63) else 1.0

    seen_arr = np.empty(2 * kk + 1, dtype=np.int64)
    cdef int64_t[::1] seen = seen_arr
    cdef Py_ssize_t i, t, j, p, q, nseen, npos
    cdef Py_ssize_t positions[2]
    cdef Py_ssize_t sid, occ, e, rot
    cdef double w, v, normsq, nrm
    for i in range(n):
        nseen = 0
        for t in range(kk + 1):
            w = 1.0 / (1.0 + t)
            if t == 0:
                positions[0] = i
                npos = 1
            else:
                npos = 0
                if i - t >= 0:
                    positions[npos] = i - t
                    npos += 1
                if i + t < n:
                    positions[npos] = i + t
                    npos += 1
            for q in range(npos):
                j = positions[q]
                sid = sids_v[j]
                occ = 1
                for p in range(nseen):
                    if seen[p] == sid:
                        occ += 1
                seen[nseen] = sid
                nseen += 1
                lo = offs[sid]
                hi = offs[sid + 1]
                if occ == 1:
                    for f in range(hi - lo):
                        out[i, idx1[lo + f]] += w * sgn1[lo + f]
                else:
                    rot = occ - 1
                    for f in range(hi - lo):
                        e = (idx1[lo + f] + rot) % dd
                        out[i, e] += w * sgn1[lo + f]
        normsq = 0.0
        for e in range(dd):
            v = out[i, e]
            normsq += v * v
        if normsq < _NORM_EPS * _NORM_EPS:
            for e in range(dd):
                out[i, e] = 0.0
            out[i, 0] = 1.0
        else:
            nrm = sqrt(normsq)
            for e in range(dd):
                out[i, e] = out[i, e] / nrm
    return out_arr


def row_norms(fp):
    """See ``semtoken.kernels.pure.row_norms``."""
    cdef double[:, ::1] fp_v = fp
    cdef Py_ssize_t n = fp_v.shape[0]
    cdef Py_ssize_t d = fp_v.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, e
    cdef double acc, v
    for i in range(n):
        acc = 0.0
        for e in range(d):
            v = fp_v[i, e]
            acc += v * v
        out[i] = sqrt(acc)
    return out_arr


cdef inline double _quantize_up(double s, Py_ssize_t bins) nogil:
    cdef double w = 2.0 / bins
    cdef double ci = ceil((s + 1.0) / w)
    if ci < 0:
        ci = 0
    if ci > bins:
        ci = bins
    cdef double q = -1.0 + ci * w
    if q > 1.0:
        q = 1.0
    if q < -1.0:
        q = -1.0
    return q


def span_boundaries(fp, norms, tau, bins, chained, cap):
    """See ``semtoken.kernels.pure.span_boundaries``."""
    cdef double[:, ::1] fp_v = fp
    cdef double[::1] norms_v = norms
    cdef double tau_c = tau
    cdef Py_ssize_t bins_c = bins
    cdef bint chained_c = chained
    cdef Py_ssize_t cap_c = cap
    cdef Py_ssize_t n = fp_v.shape[0]
    cdef Py_ssize_t d = fp_v.shape[1]
    starts_arr = np.empty(n, dtype=np.int64)
    ends_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] starts = starts_arr
    cdef int64_t[::1] ends = ends_arr
    cdef Py_ssize_t m = 0, t = 0, end, j, ref, e
    cdef double s, acc, den
    while t < n:
        end = t + 1
        j = t + 1
        while j < n:
            if cap_c > 0 and (j - t) >= cap_c:
                break
            ref = (j - 1) if chained_c else t
            if norms_v[ref] < _NORM_EPS or norms_v[j] < _NORM_EPS:
                s = 0.0
            else:
                acc = 0.0
                for e in range(d):
                    acc += fp_v[ref, e] * fp_v[j, e]
                den = norms_v[ref] * norms_v[j]
                s = acc / den
            if bins_c > 0:
                s = _quantize_up(s, bins_c)
            if s > tau_c:
                end = j + 1
                j += 1
            else:
                break
        starts[m] = t
        ends[m] = end
        m += 1
        t = end
    return starts_arr[:m].copy(), ends_arr[:m].copy()


def span_stats(fp, starts, ends):
    """See ``semtoken.kernels.pure.span_stats``."""
    cdef double[:, ::1] fp_v = fp
    cdef int64_t[::1] starts_v = starts
    cdef int64_t[::1] ends_v = ends
    cdef Py_ssize_t m = starts_v.shape[0]
    cdef Py_ssize_t d = fp_v.shape[1]
    means_arr = np.zeros((m, d), dtype=np.float64)
    ents_arr = np.zeros(m, dtype=np.float64)
    cdef double[:, ::1] means = means_arr
    cdef double[::1] ents = ents_arr
    cdef Py_ssize_t s, a, b, cnt, r, e
    cdef bint is_const
    cdef double ss, dv, ent
    for s in range(m):
        a = starts_v[s]
        b = ends_v[s]
        cnt = b - a
        is_const = True
        for r in range(a + 1, b):
            for e in range(d):
                if fp_v[r, e] != fp_v[a, e]:
                    is_const = False
                    break
            if not is_const:
                break
        if is_const:
            for e in range(d):
                means[s, e] = fp_v[a, e]
            ents[s] = 0.0
            continue
        for r in range(a, b):
            for e in range(d):
                means[s, e] += fp_v[r, e]
        for e in range(d):
            means[s, e] = means[s, e] / cnt
        ss = 0.0
        for r in range(a, b):
            for e in range(d):
                dv = fp_v[r, e] - means[s, e]
                ss += dv * dv
        ent = ss / cnt
        ents[s] = ent if ent > 0.0 else 0.0
    return means_arr, ents_arr
