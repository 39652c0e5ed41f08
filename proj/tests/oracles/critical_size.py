"""Independent N_c oracle: smallest even N whose strong-defect OBC chain
(N_d = N / 2) has no hybrid state besides the zero mode.

hybrid: weight within w sites of the defect > theta_d and weight in the
w outermost sites of either end > theta_b.
"""
import sys

import numpy as np

from hn_oracle import hn_matrix


def hybrids(n, t4, t2=0.6, theta_b=0.25, theta_d=0.2, w=5):
    d = n // 2 - 1
    h = hn_matrix(n, 1, t2, 1, t4, defect=n // 2)
    vals, vecs = np.linalg.eig(h)
    count = 0
    for e, v in zip(vals, vecs.T):
        if abs(e) < 1e-8:
            continue
        p = abs(v) ** 2
        p /= p.sum()
        wd = p[max(d - w, 0):d + w + 1].sum()
        wb = max(p[:w].sum(), p[-w:].sum())
        count += wd > theta_d and wb > theta_b
    return count


def n_c(t4, sizes=range(22, 241, 2), **kw):
    for n in sizes:
        if hybrids(n, t4, **kw) == 0:
            return n
    return None


if __name__ == "__main__":
    grid = [0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.8, 0.9] if len(sys.argv) < 2 else map(float, sys.argv[1:])
    for t4 in grid:
        print(t4, n_c(t4))
    print("reciprocal", n_c(1.0, t2=1.0), [hybrids(n, 1.0, t2=1.0) for n in (22, 40, 80)])
