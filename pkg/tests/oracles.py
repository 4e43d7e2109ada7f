"""Brute-force reference computations used by the tests."""
import itertools

import numpy as np


def golden_words(n):
    return [w for w in itertools.product((0, 1), repeat=n) if all(not (a and b) for a, b in zip(w, w[1:]))]


def even_periodic(w):
    """Whether ``w^inf`` lies in the even shift: every cyclic run of 1s between 0s is even."""
    if 0 not in w:
        return True
    k = w.index(0)
    rot = w[k:] + w[:k]
    runs = "".join(map(str, rot)).split("0")
    return all(len(r) % 2 == 0 for r in runs)


def trace_power(m, p):
    return int(np.trace(np.linalg.matrix_power(np.array(m, dtype=object), p)))


def eca_apply(n, word):
    return tuple(n >> (4 * a + 2 * b + c) & 1 for a, b, c in zip(word, word[1:], word[2:]))


def eca_images(n, length):
    """All length-``length`` outputs of the elementary rule ``n``."""
    return {eca_apply(n, w) for w in itertools.product((0, 1), repeat=length + 2)}


def eca_me_pair(n, length):
    """Two distinct words agreeing on two cells at each end with equal images, if any."""
    seen = {}
    for w in itertools.product((0, 1), repeat=length):
        key = (w[:2], w[-2:], eca_apply(n, w))
        if key in seen:
            return seen[key], w
        seen[key] = w
    return None


def ledrappier_local_count(n):
    """Patterns on the n x n cube satisfying every rule triangle inside it."""
    cells = [(i, j) for i in range(n) for j in range(n)]
    count = 0
    for vals in itertools.product((0, 1), repeat=len(cells)):
        x = dict(zip(cells, vals))
        if all(x[(i, j)] ^ x[(i + 1, j)] ^ x[(i, j + 1)] == 0
               for i in range(n - 1) for j in range(n - 1)):
            count += 1
    return count


def gf2_kernel_size(rows, nvars):
    return sum(1 for x in range(1 << nvars) if all(bin(r & x).count("1") % 2 == 0 for r in rows))
