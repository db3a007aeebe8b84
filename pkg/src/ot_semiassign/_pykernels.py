"""Pure-Python search kernels.

Reference implementation of the hot loops; ``_kernels.pyx`` mirrors it line
for line so both backends return identical matchings, labels and op counts.

Op-count rules shared by every exact kernel: +1 per weight read, +1 per slack
comparison, +1 per slack assignment, +1 per label update.  The tight-row scan
counts one comparison per row examined; refreshing a slack against a new tree
node counts a weight read plus a comparison.
"""

import math

import numpy as np

from .errors import Stalled

BACKEND = "python"


def greedy_match(w, row_labels, col_labels, caps, eps, row_to_col, col_usage):
    """Assign each free row, in index order, to its lowest tight column with room."""
    wl = np.asarray(w).tolist()
    rl = row_labels.tolist()
    cl = col_labels.tolist()
    cap = caps.tolist()
    r2c = row_to_col.tolist()
    usage = col_usage.tolist()
    m = len(rl)
    n = len(cl)
    ops = 0
    for i in range(m):
        if r2c[i] >= 0:
            continue
        li = rl[i]
        wi = wl[i]
        for j in range(n):
            if usage[j] >= cap[j]:
                continue
            ops += 1
            if li + cl[j] - wi[j] <= eps:
                r2c[i] = j
                usage[j] += 1
                break
    row_to_col[:] = r2c
    col_usage[:] = usage
    return ops


class ModifiedSearch:
    """Alternating-tree search rooted at free columns (capacitated side).

    ``S`` holds tree columns, ``T`` tree rows.  ``slack[i]`` tracks
    ``min_{j in S} l(i) + l(j) - w[i, j]`` for rows outside ``T``.
    """

    def __init__(self, w, caps, row_labels, col_labels, row_to_col, col_usage, eps):
        w = np.asarray(w, dtype=np.float64)
        self.m, self.n = w.shape
        self.wt = w.T.tolist()
        self.caps = [int(c) for c in caps]
        self.rl = row_labels.tolist()
        self.cl = col_labels.tolist()
        self.r2c = [int(c) for c in row_to_col]
        self.usage = [int(u) for u in col_usage]
        self.eps = float(eps)
        m, n = self.m, self.n
        self.in_T = [False] * m
        self.slack = [0.0] * m
        self.slack_arg = [-1] * m
        self.prev_col = [-1] * m
        self.prev_row = [-1] * n
        self.S = []
        self.T = []
        self.root = -1

    def free_column(self):
        for j in range(self.n):
            if self.usage[j] < self.caps[j]:
                return j
        return -1

    def step(self, on_update=None):
        """Run one outer loop: grow the tree until a free row is reached, then flip.

        Returns ``(ops, path, label_updates)`` where ``path`` lists the
        ``(row, new_col, old_col)`` reassignments applied, root side last.
        """
        m = self.m
        wt = self.wt
        rl = self.rl
        cl = self.cl
        r2c = self.r2c
        in_T = self.in_T
        slack = self.slack
        slack_arg = self.slack_arg
        prev_col = self.prev_col
        prev_row = self.prev_row
        eps = self.eps
        ops = 0
        n_alpha = 0

        root = self.free_column()
        if root < 0:
            raise Stalled("no free column: matching already perfect")
        self.root = root
        S = [root]
        T = []
        for i in range(m):
            prev_col[i] = -1
            if r2c[i] == root:
                in_T[i] = True
                T.append(i)
            else:
                in_T[i] = False
        for j in range(self.n):
            prev_row[j] = -1
        wr = wt[root]
        lroot = cl[root]
        for i in range(m):
            if not in_T[i]:
                slack[i] = rl[i] + lroot - wr[i]
                slack_arg[i] = root
                ops += 2
        self.S = S
        self.T = T

        while True:
            v1 = -1
            for i in range(m):
                if in_T[i]:
                    continue
                ops += 1
                if slack[i] <= eps:
                    v1 = i
                    break
            if v1 < 0:
                alpha = math.inf
                for i in range(m):
                    if not in_T[i]:
                        ops += 1
                        if slack[i] < alpha:
                            alpha = slack[i]
                if alpha == math.inf:
                    raise Stalled("dual update has no finite step")
                for j in S:
                    cl[j] -= alpha
                for i in T:
                    rl[i] += alpha
                ops += len(S) + len(T)
                for i in range(m):
                    if not in_T[i]:
                        slack[i] -= alpha
                        ops += 1
                n_alpha += 1
                if on_update is not None:
                    on_update(self, alpha)
                continue

            prev_col[v1] = slack_arg[v1]
            z = r2c[v1]
            if z < 0:
                path = []
                i = v1
                while True:
                    c = prev_col[i]
                    path.append((i, c, r2c[i]))
                    r2c[i] = c
                    if c == root:
                        break
                    i = prev_row[c]
                self.usage[root] += 1
                return ops, path, n_alpha

            # v1 is matched to z: z joins S, v1 and every row on z join T
            prev_row[z] = v1
            S.append(z)
            for i in range(m):
                if not in_T[i] and r2c[i] == z:
                    in_T[i] = True
                    T.append(i)
            wz = wt[z]
            lz = cl[z]
            for i in range(m):
                if not in_T[i]:
                    s = rl[i] + lz - wz[i]
                    ops += 2
                    if s < slack[i] or (s == slack[i] and z < slack_arg[i]):
                        slack[i] = s
                        slack_arg[i] = z

    def write_back(self, row_labels, col_labels, row_to_col, col_usage):
        row_labels[:] = self.rl
        col_labels[:] = self.cl
        row_to_col[:] = self.r2c
        col_usage[:] = self.usage


def modified_augment_all(w, caps, row_labels, col_labels, row_to_col, col_usage, eps):
    """Augment until the pseudo-matching is perfect; arrays are updated in place."""
    search = ModifiedSearch(w, caps, row_labels, col_labels, row_to_col, col_usage, eps)
    ops = 0
    n_aug = 0
    n_alpha = 0
    while search.free_column() >= 0:
        o, _, a = search.step()
        ops += o
        n_alpha += a
        n_aug += 1
    search.write_back(row_labels, col_labels, row_to_col, col_usage)
    return ops, n_aug, n_alpha


def hungarian_augment_all(w, row_labels, col_labels, row_to_col, col_to_row, eps):
    """Classic Kuhn-Munkres on a square matrix, trees rooted at free rows."""
    wl = np.asarray(w, dtype=np.float64).tolist()
    rl = row_labels.tolist()
    cl = col_labels.tolist()
    r2c = [int(c) for c in row_to_col]
    c2r = [int(r) for r in col_to_row]
    k = len(rl)
    eps = float(eps)
    in_S = [False] * k
    in_T = [False] * k
    slack = [0.0] * k
    slack_arg = [-1] * k
    prev_row = [-1] * k
    ops = 0
    n_aug = 0
    n_alpha = 0
    while True:
        root = -1
        for i in range(k):
            if r2c[i] < 0:
                root = i
                break
        if root < 0:
            break
        for t in range(k):
            in_S[t] = False
            in_T[t] = False
            prev_row[t] = -1
        in_S[root] = True
        S = [root]
        T = []
        wr = wl[root]
        lroot = rl[root]
        for j in range(k):
            slack[j] = lroot + cl[j] - wr[j]
            slack_arg[j] = root
            ops += 2
        while True:
            c = -1
            for j in range(k):
                if in_T[j]:
                    continue
                ops += 1
                if slack[j] <= eps:
                    c = j
                    break
            if c < 0:
                alpha = math.inf
                for j in range(k):
                    if not in_T[j]:
                        ops += 1
                        if slack[j] < alpha:
                            alpha = slack[j]
                if alpha == math.inf:
                    raise Stalled("dual update has no finite step")
                for i in S:
                    rl[i] -= alpha
                for j in T:
                    cl[j] += alpha
                ops += len(S) + len(T)
                for j in range(k):
                    if not in_T[j]:
                        slack[j] -= alpha
                        ops += 1
                n_alpha += 1
                continue
            prev_row[c] = slack_arg[c]
            r = c2r[c]
            if r < 0:
                j = c
                while True:
                    i = prev_row[j]
                    nxt = r2c[i]
                    r2c[i] = j
                    c2r[j] = i
                    if i == root:
                        break
                    j = nxt
                n_aug += 1
                break
            in_T[c] = True
            T.append(c)
            in_S[r] = True
            S.append(r)
            wr = wl[r]
            lr_ = rl[r]
            for j in range(k):
                if not in_T[j]:
                    s = lr_ + cl[j] - wr[j]
                    ops += 2
                    if s < slack[j] or (s == slack[j] and r < slack_arg[j]):
                        slack[j] = s
                        slack_arg[j] = r
    row_labels[:] = rl
    col_labels[:] = cl
    row_to_col[:] = r2c
    col_to_row[:] = c2r
    return ops, n_aug, n_alpha
