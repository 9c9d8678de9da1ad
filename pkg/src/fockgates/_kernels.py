"""Numba kernels for the recurrence fills.

Each kernel writes into preallocated arrays so the Python layer owns all
allocation and shape logic. The rank-4 selection-rule gates are filled in a
compact blockwise layout (one dense block per conserved quantum number) and
scattered into the dense tensor afterwards; the compact fill is the part that
scales as N^3.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def fill_general(data, C, mu, Sigma, N, dim):
    """General Gaussian recurrence over the flat direct-sum index.

    ``data`` is the flat complex array of length N**dim in C order, which is
    lexicographic over the multi-index, so every neighbour referenced by the
    recurrence precedes its consumer.
    """
    strides = np.empty(dim, np.int64)
    s = 1
    for i in range(dim - 1, -1, -1):
        strides[i] = s
        s *= N
    total = s
    k = np.zeros(dim, np.int64)
    data[0] = C
    for flat in range(1, total):
        i = dim - 1
        while True:
            k[i] += 1
            if k[i] < N:
                break
            k[i] = 0
            i -= 1
        p = 0
        while k[p] == 0:
            p += 1
        kp = k[p] - 1  # pivot entry of the predecessor index
        base = flat - strides[p]
        val = data[base] * mu[p]
        for l in range(dim):
            kl = kp if l == p else k[l]
            if kl > 0:
                val -= np.sqrt(kl) * Sigma[p, l] * data[base - strides[l]]
        data[flat] = val / np.sqrt(kp + 1.0)


@njit(cache=True)
def fill_single_mode(out, C, mu1, mu2, s11, s12, s21, s22, N):
    """First-column-then-rows fill of a single-mode Gaussian matrix."""
    out[0, 0] = C
    for m in range(N - 1):
        v = out[m, 0] * mu1
        if m > 0:
            v -= np.sqrt(m) * s11 * out[m - 1, 0]
        out[m + 1, 0] = v / np.sqrt(m + 1.0)
    for n in range(N - 1):
        rn = 1.0 / np.sqrt(n + 1.0)
        for m in range(N):
            v = out[m, n] * mu2
            if m > 0:
                v -= np.sqrt(m) * s21 * out[m - 1, n]
            if n > 0:
                v -= np.sqrt(n) * s22 * out[m, n - 1]
            out[m, n + 1] = v * rn


@njit(cache=True)
def fill_displacement(out, gamma, N):
    """Displacement fill, stable to large cutoffs.

    The first row and column decay by one-term recurrences. Interior
    entries march away from the diagonal: the lower triangle steps in m,
    the upper in n, so every coupling coefficient sqrt(n/m) or sqrt(m/n)
    stays <= 1 and roundoff cannot be amplified into the far corner.
    """
    out[0, 0] = np.exp(-0.5 * (gamma.real**2 + gamma.imag**2))
    gc = np.conj(gamma)
    for m in range(N - 1):
        out[m + 1, 0] = gamma / np.sqrt(m + 1.0) * out[m, 0]
    for n in range(N - 1):
        out[0, n + 1] = -gc / np.sqrt(n + 1.0) * out[0, n]
    for m in range(1, N):
        for n in range(1, N):
            if m >= n:
                out[m, n] = (
                    gamma / np.sqrt(m) * out[m - 1, n]
                    + np.sqrt(n / m) * out[m - 1, n - 1]
                )
            else:
                out[m, n] = (
                    -gc / np.sqrt(n) * out[m, n - 1]
                    + np.sqrt(m / n) * out[m - 1, n - 1]
                )


@njit(cache=True)
def fill_squeezer(out, r, delta, N):
    eit = np.exp(1j * delta) * np.tanh(r)
    sech = 1.0 / np.cosh(r)
    out[0, 0] = np.sqrt(sech)
    for m in range(1, N - 1):
        out[m + 1, 0] = -np.sqrt(m / (m + 1.0)) * eit * out[m - 1, 0]
    for n in range(N - 1):
        rn = 1.0 / np.sqrt(n + 1.0)
        for m in range(N):
            v = 0.0 + 0.0j
            if m > 0:
                v += np.sqrt(m) * sech * out[m - 1, n]
            if n > 0:
                v += np.sqrt(n) * np.conj(eit) * out[m, n - 1]
            out[m, n + 1] = v * rn


@njit(cache=True)
def fill_beamsplitter_blocks(buf, offsets, v11, v12, v21, v22, N):
    """Blockwise beamsplitter fill.

    Block T (total photon number) is a c x c matrix, c = N - |T - (N-1)|,
    stored row-major at ``offsets[T]``; rows enumerate the bra pair
    (m, T - m) with m starting at max(0, T - N + 1), columns the ket pair
    likewise. Every block is produced from the previous one.
    """
    buf[offsets[0]] = 1.0
    for T in range(1, 2 * N - 1):
        lo = max(0, T - N + 1)
        c = N - abs(T - (N - 1))
        lop = max(0, T - N)
        cp = N - abs(T - N)
        base = offsets[T]
        prev = offsets[T - 1]
        for a in range(c):
            m = lo + a
            n = T - m
            # ket (p, q): column b=0 is p = lo (q = T - lo)
            for b in range(c):
                p = lo + b
                q = T - p
                v = 0.0 + 0.0j
                if q == 0:
                    # B_{m,n,T,0} from ket (T-1, 0) in the previous block
                    bp = T - 1 - lop
                    if m > 0:
                        v += np.sqrt(m) * v11 * buf[prev + (m - 1 - lop) * cp + bp]
                    if n > 0:
                        v += np.sqrt(n) * v21 * buf[prev + (m - lop) * cp + bp]
                    buf[base + a * c + b] = v / np.sqrt(T)
                else:
                    # B_{m,n,p,q} from ket (p, q-1) in the previous block
                    bp = p - lop
                    if m > 0 and m - 1 >= lop:
                        v += np.sqrt(m) * v12 * buf[prev + (m - 1 - lop) * cp + bp]
                    if n > 0 and m - lop < cp:
                        v += np.sqrt(n) * v22 * buf[prev + (m - lop) * cp + bp]
                    buf[base + a * c + b] = v / np.sqrt(q)


@njit(cache=True)
def fill_two_mode_squeezer_blocks(buf, offsets, eit, sech, N):
    """Blockwise two-mode-squeezer fill.

    Block d (photon-number difference, d = -(N-1)..N-1, stored at index
    d + N - 1) is a c x c matrix, c = N - |d|; rows enumerate the bra pair
    (m, m - d) with m starting at lo = max(0, d), columns the ket pair
    (p, p - d) likewise. ``eit`` is e^{i delta} tanh r.
    """
    eitc = np.conj(eit)
    # pass 1: the q = 0 column of every block with d >= 0
    buf[offsets[N - 1]] = sech  # d = 0, (0,0,0,0)
    c0 = N
    for nn in range(1, N):
        buf[offsets[N - 1] + nn * c0] = eit * buf[offsets[N - 1] + (nn - 1) * c0]
    for d in range(1, N):
        c = N - d
        cp = N - d + 1
        base = offsets[d + N - 1]
        prev = offsets[d - 1 + N - 1]
        for a in range(c):
            m = d + a  # n = a
            buf[base + a * c] = np.sqrt(m / d) * sech * buf[prev + a * cp]
    # pass 2: remaining kets, layer d built from layer d+1
    for d in range(N - 2, -N, -1):
        lo = max(0, d)
        c = N - abs(d)
        lou = max(0, d + 1)
        cu = N - abs(d + 1)
        base = offsets[d + N - 1]
        up = offsets[d + 1 + N - 1]
        bstart = 1 if d >= 0 else 0
        for b in range(bstart, c):
            p = lo + b
            q = p - d
            for a in range(c):
                m = lo + a
                n = m - d
                v = 0.0 + 0.0j
                if n > 0:
                    # source (m, n-1, p, q-1) lives in layer d+1
                    v += np.sqrt(n) * sech * buf[up + (m - lou) * cu + (p - lou)]
                if p > 0 and b > 0:
                    v -= np.sqrt(p) * eitc * buf[base + a * c + (b - 1)]
                buf[base + a * c + b] = v / np.sqrt(q)


@njit(cache=True)
def fill_interferometer(data, V, N, ell):
    """Passive l-mode transformation over the flat (m, n) index."""
    dim = 2 * ell
    strides = np.empty(dim, np.int64)
    s = 1
    for i in range(dim - 1, -1, -1):
        strides[i] = s
        s *= N
    total = s
    k = np.zeros(dim, np.int64)
    data[0] = 1.0
    for flat in range(1, total):
        i = dim - 1
        while True:
            k[i] += 1
            if k[i] < N:
                break
            k[i] = 0
            i -= 1
        # pivot: first bra mode with m_i > 0; if the bra is empty the entry
        # is zero by particle conservation
        piv = -1
        for i in range(ell):
            if k[i] > 0:
                piv = i
                break
        if piv < 0:
            data[flat] = 0.0
            continue
        base = flat - strides[piv]
        v = 0.0 + 0.0j
        for j in range(ell):
            nj = k[ell + j]
            if nj > 0:
                v += V[piv, j] * np.sqrt(nj) * data[base - strides[ell + j]]
        data[flat] = v / np.sqrt(k[piv])


# Batched wrappers for benchmarking: a single dispatch runs the fill many
# times so per-call overhead cannot contaminate scaling measurements.


@njit(cache=True)
def bench_displacement(out, gamma, N, iters):
    for _ in range(iters):
        fill_displacement(out, gamma, N)


@njit(cache=True)
def bench_squeezer(out, r, delta, N, iters):
    for _ in range(iters):
        fill_squeezer(out, r, delta, N)


@njit(cache=True)
def bench_single_mode(out, C, mu1, mu2, s11, s12, s21, s22, N, iters):
    for _ in range(iters):
        fill_single_mode(out, C, mu1, mu2, s11, s12, s21, s22, N)


@njit(cache=True)
def bench_beamsplitter_blocks(buf, offsets, v11, v12, v21, v22, N, iters):
    for _ in range(iters):
        fill_beamsplitter_blocks(buf, offsets, v11, v12, v21, v22, N)


@njit(cache=True)
def bench_two_mode_squeezer_blocks(buf, offsets, eit, sech, N, iters):
    for _ in range(iters):
        fill_two_mode_squeezer_blocks(buf, offsets, eit, sech, N)
