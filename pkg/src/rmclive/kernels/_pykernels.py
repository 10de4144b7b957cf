"""Pure-Python explicit-state kernels.

Same signatures and results as the compiled module; used when the
extension is not built or ``RMCLIVE_PURE=1`` is set.
"""

import numpy as np


def successors(words, table, accepting, initial):
    """Successor codes of every word under a letter-to-letter DFA.

    ``words`` is an ``(N, n)`` uint8 matrix, ``table[q, a, b]`` the target of
    letter ``a/b`` from ``q`` (``-1`` if absent).  Returns ``(indptr, codes)``
    where ``codes[indptr[i]:indptr[i+1]]`` are the base-K codes of the
    successors of word ``i`` in increasing order.
    """
    words = np.asarray(words)
    N, n = words.shape
    Q, K, _ = table.shape
    tab = table.tolist()
    acc = [bool(x) for x in accepting]
    rows = words.tolist()
    indptr = [0]
    out = []
    for w in rows:
        # alive[i]: states at position i from which the rest of w can be read
        alive = [None] * (n + 1)
        alive[n] = acc
        for i in range(n - 1, -1, -1):
            nxt = alive[i + 1]
            a = w[i]
            alive[i] = [any(r >= 0 and nxt[r] for r in tab[q][a]) for q in range(Q)]
        if not alive[0][initial]:
            indptr.append(len(out))
            continue
        found = []
        stack = [(initial, 0, 0)]
        while stack:
            q, i, code = stack.pop()
            if i == n:
                found.append(code)
                continue
            nxt = alive[i + 1]
            row = tab[q][w[i]]
            for b in range(K - 1, -1, -1):
                r = row[b]
                if r >= 0 and nxt[r]:
                    stack.append((r, i + 1, code * K + b))
        found.sort()
        # a DFA yields each output at most once
        out.extend(found)
        indptr.append(len(out))
    return np.asarray(indptr, dtype=np.int64), np.asarray(out, dtype=np.int64)


def attractor(indptr, idx, pred_ptr, pred_idx, owner, final):
    """Configurations from which player 2 forces a visit to ``final``.

    Player 1 nodes without successors count as won by player 2; player 2
    nodes without successors are lost.
    """
    N = len(owner)
    ip = indptr.tolist()
    pp = pred_ptr.tolist()
    pi = pred_idx.tolist()
    own = owner.tolist()
    win = [False] * N
    count = [ip[s + 1] - ip[s] for s in range(N)]
    queue = []
    for s in range(N):
        if final[s] or (own[s] == 1 and count[s] == 0):
            win[s] = True
            queue.append(s)
    head = 0
    while head < len(queue):
        t = queue[head]
        head += 1
        for k in range(pp[t], pp[t + 1]):
            s = pi[k]
            if win[s]:
                continue
            if own[s] == 2:
                win[s] = True
                queue.append(s)
            else:
                count[s] -= 1
                if count[s] == 0:
                    win[s] = True
                    queue.append(s)
    return np.asarray(win, dtype=np.uint8)


def trap(indptr, idx, pred_ptr, pred_idx, owner, final):
    """Largest set avoiding ``final`` that the scheduler can keep the play in
    with probability one: scheduler nodes need one successor inside, random
    nodes need all successors inside.  Scheduler dead ends are excluded.
    """
    N = len(owner)
    ip = indptr.tolist()
    ix = idx.tolist()
    pp = pred_ptr.tolist()
    pi = pred_idx.tolist()
    own = owner.tolist()
    inside = [not final[s] for s in range(N)]
    # scheduler nodes: number of successors still inside
    count = [0] * N
    for s in range(N):
        count[s] = sum(1 for k in range(ip[s], ip[s + 1]) if inside[ix[k]])
    queue = []
    for s in range(N):
        if not inside[s]:
            continue
        if own[s] == 1 and count[s] == 0:
            inside[s] = False
            queue.append(s)
        elif own[s] == 2 and count[s] < ip[s + 1] - ip[s]:
            inside[s] = False
            queue.append(s)
    head = 0
    while head < len(queue):
        t = queue[head]
        head += 1
        for k in range(pp[t], pp[t + 1]):
            s = pi[k]
            if not inside[s]:
                continue
            if own[s] == 2:
                inside[s] = False
                queue.append(s)
            else:
                count[s] -= 1
                if count[s] == 0:
                    inside[s] = False
                    queue.append(s)
    return np.asarray(inside, dtype=np.uint8)


def bfs(indptr, idx, sources, allowed):
    """Nodes reachable from ``sources`` entering only ``allowed`` nodes."""
    N = len(sources)
    ip = indptr.tolist()
    ix = idx.tolist()
    ok = [bool(x) for x in allowed]
    seen = [bool(x) for x in sources]
    queue = [s for s in range(N) if seen[s]]
    head = 0
    while head < len(queue):
        t = queue[head]
        head += 1
        for k in range(ip[t], ip[t + 1]):
            s = ix[k]
            if not seen[s] and ok[s]:
                seen[s] = True
                queue.append(s)
    return np.asarray(seen, dtype=np.uint8)


def value_iteration(indptr, idx, owner, final, p, tol, max_iter):
    """Minimal probability of reaching ``final`` (Gauss-Seidel sweeps from 0).

    Scheduler nodes take the minimum over successors, random nodes the
    average (a two-way split uses ``p`` for the first successor).  Returns
    ``(values, sweeps, converged)``.
    """
    N = len(owner)
    ip = indptr.tolist()
    ix = idx.tolist()
    own = owner.tolist()
    fin = [bool(x) for x in final]
    v = [1.0 if fin[s] else 0.0 for s in range(N)]
    for s in range(N):
        if not fin[s] and ip[s] == ip[s + 1]:
            v[s] = 1.0 if own[s] == 1 else 0.0
    active = [s for s in range(N) if not fin[s] and ip[s] != ip[s + 1]]
    for sweep in range(1, max_iter + 1):
        delta = 0.0
        for s in active:
            lo, hi = ip[s], ip[s + 1]
            if own[s] == 1:
                x = min(v[ix[k]] for k in range(lo, hi))
            elif hi - lo == 2:
                x = p * v[ix[lo]] + (1.0 - p) * v[ix[lo + 1]]
            else:
                x = sum(v[ix[k]] for k in range(lo, hi)) / (hi - lo)
            d = x - v[s]
            if d > delta:
                delta = d
            elif -d > delta:
                delta = -d
            v[s] = x
        if delta <= tol:
            return np.asarray(v), sweep, True
    return np.asarray(v), max_iter, False
