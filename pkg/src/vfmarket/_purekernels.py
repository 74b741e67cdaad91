"""Pure-Python kernels; the reference behaviour for ``_speedups.pyx``.

Programs are flat node arrays produced by :func:`vfmarket.fol.compile.compile_matrix`:
node ``i`` has an opcode ``kind[i]`` and up to three operands ``a[i]``,
``b[i]``, ``c[i]`` (child indices, a slot number or a constant).
Variables live in ``env`` slots.  Values are Python ints, so nothing here
can overflow.
"""

OP_CONST, OP_VAR, OP_ADD, OP_MUL, OP_SUB = 0, 1, 2, 3, 4
OP_EQ, OP_NE, OP_LT, OP_LE, OP_GT, OP_GE = 10, 11, 12, 13, 14, 15
OP_AND, OP_OR, OP_BEX, OP_BALL = 20, 21, 22, 23

FALSE, TRUE, UNKNOWN = 0, 1, 2


def _term(kind, a, b, i, env):
    k = kind[i]
    if k == OP_CONST:
        return a[i]
    if k == OP_VAR:
        return env[a[i]]
    x = _term(kind, a, b, a[i], env)
    y = _term(kind, a, b, b[i], env)
    if k == OP_ADD:
        return x + y
    if k == OP_MUL:
        return x * y
    return x - y if x > y else 0


def evaluate(kind, a, b, c, root, env):
    """Truth value of the matrix at ``root`` under ``env`` (short-circuiting)."""
    k = kind[root]
    if k < OP_AND:
        x = _term(kind, a, b, a[root], env)
        y = _term(kind, a, b, b[root], env)
        if k == OP_EQ:
            return x == y
        if k == OP_NE:
            return x != y
        if k == OP_LT:
            return x < y
        if k == OP_LE:
            return x <= y
        if k == OP_GT:
            return x > y
        return x >= y
    if k == OP_AND:
        return evaluate(kind, a, b, c, a[root], env) and evaluate(kind, a, b, c, b[root], env)
    if k == OP_OR:
        return evaluate(kind, a, b, c, a[root], env) or evaluate(kind, a, b, c, b[root], env)
    slot = a[root]
    bound = _term(kind, a, b, b[root], env)
    want = k == OP_BEX
    for v in range(bound + 1):
        env[slot] = v
        if evaluate(kind, a, b, c, c[root], env) == want:
            return want
    return not want


def _term_cost(kind, a, b, i):
    k = kind[i]
    if k <= OP_VAR:
        return 1
    return 1 + _term_cost(kind, a, b, a[i]) + _term_cost(kind, a, b, b[i])


def cost(kind, a, b, c, root, env, cap):
    """Node visits of a full (non-short-circuit) evaluation, saturating at ``cap``.

    Symmetric under negation: the negated matrix has the same shape and
    the same bounds.
    """
    k = kind[root]
    if k < OP_AND:
        return min(cap, 1 + _term_cost(kind, a, b, a[root]) + _term_cost(kind, a, b, b[root]))
    if k == OP_AND or k == OP_OR:
        left = cost(kind, a, b, c, a[root], env, cap)
        if left >= cap:
            return cap
        return min(cap, 1 + left + cost(kind, a, b, c, b[root], env, cap))
    slot = a[root]
    total = 1 + _term_cost(kind, a, b, b[root])
    bound = _term(kind, a, b, b[root], env)
    for v in range(bound + 1):
        env[slot] = v
        total += cost(kind, a, b, c, c[root], env, cap)
        if total >= cap:
            return cap
    return total


def prefix_bounded(kind, a, b, c, root, env, quants, bound):
    """Two-valued truth with prefix variable ``j`` ranging over ``0..bound`` in slot ``j``."""
    return _prefix_bounded(kind, a, b, c, root, env, quants, bound, 0)


def _prefix_bounded(kind, a, b, c, root, env, quants, bound, depth):
    if depth == len(quants):
        return evaluate(kind, a, b, c, root, env)
    want = quants[depth] == 0  # 0 = exists
    for v in range(bound + 1):
        env[depth] = v
        if _prefix_bounded(kind, a, b, c, root, env, quants, bound, depth + 1) == want:
            return want
    return not want


def prefix_tarski(kind, a, b, c, root, env, quants, bound):
    """Three-valued bounded verdict: TRUE/FALSE only when certified by witnesses."""
    return _prefix_tarski(kind, a, b, c, root, env, quants, bound, 0)


def _prefix_tarski(kind, a, b, c, root, env, quants, bound, depth):
    if depth == len(quants):
        return TRUE if evaluate(kind, a, b, c, root, env) else FALSE
    decisive = TRUE if quants[depth] == 0 else FALSE
    for v in range(bound + 1):
        env[depth] = v
        if _prefix_tarski(kind, a, b, c, root, env, quants, bound, depth + 1) == decisive:
            return decisive
    return UNKNOWN


def valuation_sums(tables, weights, consistent, nworlds):
    """Sorted distinct values of ``sum(w_i * [world satisfies i])`` over consistent worlds.

    ``tables[i]`` and ``consistent`` are little-endian bitsets (bytes) over
    world indices ``0..nworlds-1``.
    """
    if len(tables) < 20 and 2 ** len(tables) * 64 <= nworlds:
        return _sums_by_refinement(tables, weights, consistent)
    seen = set()
    for w in range(nworlds):
        byte, bit = w >> 3, w & 7
        if not (consistent[byte] >> bit) & 1:
            continue
        total = 0
        for tbl, wt in zip(tables, weights):
            if (tbl[byte] >> bit) & 1:
                total += wt
        seen.add(total)
    return sorted(seen)


def _sums_by_refinement(tables, weights, consistent):
    # split the consistent world set by each sentence's truth table;
    # every nonempty cell is one realisable truth pattern
    cells = [(int.from_bytes(consistent, "little"), 0)]
    for tbl, wt in zip(tables, weights):
        t = int.from_bytes(tbl, "little")
        nxt = []
        for mask, total in cells:
            yes = mask & t
            no = mask & ~t
            if yes:
                nxt.append((yes, total + wt))
            if no:
                nxt.append((no, total))
        cells = nxt
    return sorted({total for mask, total in cells if mask})
