# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_purekernels``.

Arithmetic is done in signed 64-bit integers.  Any overflow raises
``OverflowError`` and the dispatcher in ``vfmarket.kernels`` re-runs the
call on the pure-Python backend, which works with unbounded ints.
"""
from libc.stdint cimport int64_t

cdef extern from *:
    bint _add_ovf "__builtin_add_overflow"(int64_t, int64_t, int64_t*) nogil
    bint _mul_ovf "__builtin_mul_overflow"(int64_t, int64_t, int64_t*) nogil

cdef enum:
    OP_CONST = 0
    OP_VAR = 1
    OP_ADD = 2
    OP_MUL = 3
    OP_SUB = 4
    OP_EQ = 10
    OP_NE = 11
    OP_LT = 12
    OP_LE = 13
    OP_GT = 14
    OP_GE = 15
    OP_AND = 20
    OP_OR = 21
    OP_BEX = 22
    OP_BALL = 23


cdef struct Prog:
    const int64_t* kind
    const int64_t* a
    const int64_t* b
    const int64_t* c
    int64_t* env
    int overflow


cdef int64_t _term(Prog* p, int64_t i) noexcept nogil:
    cdef int64_t k = p.kind[i]
    cdef int64_t x, y, r
    if k == OP_CONST:
        return p.a[i]
    if k == OP_VAR:
        return p.env[p.a[i]]
    x = _term(p, p.a[i])
    y = _term(p, p.b[i])
    if p.overflow:
        return 0
    if k == OP_ADD:
        if _add_ovf(x, y, &r):
            p.overflow = 1
            return 0
        return r
    if k == OP_MUL:
        if _mul_ovf(x, y, &r):
            p.overflow = 1
            return 0
        return r
    return x - y if x > y else 0


cdef bint _eval(Prog* p, int64_t i) noexcept nogil:
    cdef int64_t k = p.kind[i]
    cdef int64_t x, y, v, bound, slot
    cdef bint want
    if k < OP_AND:
        x = _term(p, p.a[i])
        y = _term(p, p.b[i])
        if p.overflow:
            return 0
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
        return _eval(p, p.a[i]) and not p.overflow and _eval(p, p.b[i])
    if k == OP_OR:
        return (_eval(p, p.a[i]) and not p.overflow) or (not p.overflow and _eval(p, p.b[i]))
    slot = p.a[i]
    bound = _term(p, p.b[i])
    want = k == OP_BEX
    v = 0
    while v <= bound and not p.overflow:
        p.env[slot] = v
        if _eval(p, p.c[i]) == want:
            return want
        v += 1
    return not want


cdef int64_t _term_cost(Prog* p, int64_t i) noexcept nogil:
    if p.kind[i] <= OP_VAR:
        return 1
    return 1 + _term_cost(p, p.a[i]) + _term_cost(p, p.b[i])


cdef int64_t _cost(Prog* p, int64_t i, int64_t cap) noexcept nogil:
    cdef int64_t k = p.kind[i]
    cdef int64_t total, left, bound, v
    if k < OP_AND:
        total = 1 + _term_cost(p, p.a[i]) + _term_cost(p, p.b[i])
        return cap if total > cap else total
    if k == OP_AND or k == OP_OR:
        left = _cost(p, p.a[i], cap)
        if left >= cap:
            return cap
        total = 1 + left + _cost(p, p.b[i], cap)
        return cap if total > cap else total
    total = 1 + _term_cost(p, p.b[i])
    bound = _term(p, p.b[i])
    v = 0
    while v <= bound and not p.overflow:
        p.env[p.a[i]] = v
        total += _cost(p, p.c[i], cap)
        if total >= cap:
            return cap
        v += 1
    return total


cdef int _prefix(Prog* p, int64_t root, const int64_t* quants, int64_t nq,
                 int64_t bound, int64_t depth, bint three) noexcept nogil:
    cdef int64_t v
    cdef int r, decisive
    if depth == nq:
        return 1 if _eval(p, root) else 0
    decisive = 1 if quants[depth] == 0 else 0
    v = 0
    while v <= bound:
        p.env[depth] = v
        r = _prefix(p, root, quants, nq, bound, depth + 1, three)
        if p.overflow:
            return 0
        if r == decisive:
            return decisive
        v += 1
    if three:
        return 2
    return 1 - decisive


cdef class _Buffers:
    cdef int64_t[::1] kind, a, b, c, env, quants

    def __init__(self, kind, a, b, c, env, quants=()):
        self.kind = _as_i64(kind)
        self.a = _as_i64(a)
        self.b = _as_i64(b)
        self.c = _as_i64(c)
        self.env = _as_i64(env if len(env) else [0])
        self.quants = _as_i64(quants if len(quants) else [0])

    cdef Prog prog(self):
        cdef Prog p
        p.kind = &self.kind[0]
        p.a = &self.a[0]
        p.b = &self.b[0]
        p.c = &self.c[0]
        p.env = &self.env[0]
        p.overflow = 0
        return p


cdef int64_t[::1] _as_i64(seq):
    import array
    return array.array("q", seq)


def evaluate(kind, a, b, c, int64_t root, env):
    cdef _Buffers buf = _Buffers(kind, a, b, c, env)
    cdef Prog p = buf.prog()
    cdef bint r
    with nogil:
        r = _eval(&p, root)
    if p.overflow:
        raise OverflowError("int64 overflow in compiled evaluator")
    return bool(r)


def cost(kind, a, b, c, int64_t root, env, int64_t cap):
    cdef _Buffers buf = _Buffers(kind, a, b, c, env)
    cdef Prog p = buf.prog()
    cdef int64_t r
    with nogil:
        r = _cost(&p, root, cap)
    if p.overflow:
        raise OverflowError("int64 overflow in compiled evaluator")
    return r


def prefix_bounded(kind, a, b, c, int64_t root, env, quants, int64_t bound):
    cdef _Buffers buf = _Buffers(kind, a, b, c, env, quants)
    cdef Prog p = buf.prog()
    cdef int r
    cdef int64_t nq = len(quants)
    with nogil:
        r = _prefix(&p, root, &buf.quants[0], nq, bound, 0, False)
    if p.overflow:
        raise OverflowError("int64 overflow in compiled evaluator")
    return r == 1


def prefix_tarski(kind, a, b, c, int64_t root, env, quants, int64_t bound):
    cdef _Buffers buf = _Buffers(kind, a, b, c, env, quants)
    cdef Prog p = buf.prog()
    cdef int r
    cdef int64_t nq = len(quants)
    with nogil:
        r = _prefix(&p, root, &buf.quants[0], nq, bound, 0, True)
    if p.overflow:
        raise OverflowError("int64 overflow in compiled evaluator")
    return r


def valuation_sums(tables, weights, const unsigned char[::1] consistent, int64_t nworlds):
    cdef Py_ssize_t m = len(tables)
    cdef Py_ssize_t i
    cdef int64_t w, total, bound = 0
    cdef int64_t[::1] wts = _as_i64(list(weights) or [0])
    for x in weights:
        bound += abs(x)
        if bound >= (1 << 62):
            raise OverflowError("valuation weights too large for int64")
    joined = b"".join(bytes(t) for t in tables) or b"\0"
    cdef const unsigned char[::1] tbl = joined
    cdef Py_ssize_t stride = len(consistent)
    seen = set()
    cdef int64_t last
    cdef bint have_last = False
    for w in range(nworlds):
        if not (consistent[w >> 3] >> (w & 7)) & 1:
            continue
        total = 0
        for i in range(m):
            if (tbl[i * stride + (w >> 3)] >> (w & 7)) & 1:
                total += wts[i]
        if not have_last or total != last:
            seen.add(total)
            last = total
            have_last = True
    return sorted(seen)
