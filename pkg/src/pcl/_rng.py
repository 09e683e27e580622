"""Counter-based random streams for reproducible parallel trajectories.

Philox4x64-10, bit-compatible with ``numpy.random.Philox``.  Each
trajectory owns one stream keyed by (master seed, trajectory index), so
ensemble statistics do not depend on scheduling or worker count.  The
generator state lives in a plain uint64 array so the numba kernels can
carry it across checkpoint boundaries.

State layout (length STATE_SIZE, dtype uint64):
    [0:4]   128-bit block counter
    [4:6]   key
    [6:10]  current output block
    [10]    position of the next unread word in the block (4 = empty)
"""

import math

import numpy as np
from numba import njit

STATE_SIZE = 11

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_U64_INV = 1.0 / 18446744073709551616.0


def splitmix64(x: int) -> int:
    """One splitmix64 scrambling step (pure-python, used for key derivation)."""
    mask = (1 << 64) - 1
    x = (x + 0x9E3779B97F4A7C15) & mask
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & mask
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & mask
    return x ^ (x >> 31)


def derive_key(master_seed: int, trajectory_index: int, channel: int = 0):
    """Derive the (k0, k1) Philox key of one trajectory stream.

    The mapping depends only on its arguments, never on execution order.
    """
    k0 = splitmix64(master_seed & ((1 << 64) - 1))
    k1 = splitmix64(k0 ^ splitmix64((trajectory_index << 16) ^ channel))
    return np.uint64(k0), np.uint64(k1)


def new_state(master_seed: int, trajectory_index: int, channel: int = 0) -> np.ndarray:
    """Fresh generator state positioned at counter zero."""
    k0, k1 = derive_key(master_seed, trajectory_index, channel)
    st = np.zeros(STATE_SIZE, dtype=np.uint64)
    st[4] = k0
    st[5] = k1
    st[10] = 4  # block buffer empty
    return st


@njit(cache=True, inline="always")
def _mulhilo(a, b):
    lo = a * b
    a_lo = a & _MASK32
    a_hi = a >> np.uint64(32)
    b_lo = b & _MASK32
    b_hi = b >> np.uint64(32)
    t = a_lo * b_lo
    x = a_hi * b_lo + (t >> np.uint64(32))
    y = (x & _MASK32) + a_lo * b_hi
    hi = a_hi * b_hi + (x >> np.uint64(32)) + (y >> np.uint64(32))
    return hi, lo


@njit(cache=True)
def _philox_block(st):
    # pre-increment of the 128-bit counter, as numpy's Philox does
    st[0] = st[0] + np.uint64(1)
    if st[0] == np.uint64(0):
        st[1] = st[1] + np.uint64(1)
        if st[1] == np.uint64(0):
            st[2] = st[2] + np.uint64(1)
            if st[2] == np.uint64(0):
                st[3] = st[3] + np.uint64(1)
    c0 = st[0]
    c1 = st[1]
    c2 = st[2]
    c3 = st[3]
    k0 = st[4]
    k1 = st[5]
    for _ in range(10):
        hi0, lo0 = _mulhilo(_M0, c0)
        hi1, lo1 = _mulhilo(_M1, c2)
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + _W0
        k1 = k1 + _W1
    st[6] = c0
    st[7] = c1
    st[8] = c2
    st[9] = c3
    st[10] = np.uint64(0)


@njit(cache=True)
def next_u64(st):
    if st[10] >= np.uint64(4):
        _philox_block(st)
    pos = st[10]
    out = st[np.uint64(6) + pos]
    st[10] = pos + np.uint64(1)
    return out


@njit(cache=True)
def next_double(st):
    """Uniform double in [0, 1) with 64-bit resolution."""
    return next_u64(st) * _U64_INV


@njit(cache=True)
def next_exponential(st):
    u = next_double(st)
    return -math.log1p(-u)


@njit(cache=True)
def next_normal_pair(st):
    """Box-Muller pair of independent standard normals."""
    u1 = next_double(st)
    while u1 <= 0.0:
        u1 = next_double(st)
    u2 = next_double(st)
    r = math.sqrt(-2.0 * math.log(u1))
    phi = 2.0 * math.pi * u2
    return r * math.cos(phi), r * math.sin(phi)


@njit(cache=True)
def next_poisson(st, lam):
    """Poisson sample; Knuth product method below lam=30, else clipped normal.

    Kernel step sizes are chosen so lam stays O(1); the normal branch is a
    guard for pathological parameter choices, accurate to ~1% there.
    """
    if lam <= 0.0:
        return np.int64(0)
    if lam < 30.0:
        limit = math.exp(-lam)
        k = np.int64(0)
        p = next_double(st)
        while p > limit:
            k += np.int64(1)
            p *= next_double(st)
        return k
    z1, _ = next_normal_pair(st)
    value = lam + math.sqrt(lam) * z1
    if value < 0.0:
        return np.int64(0)
    return np.int64(round(value))
