# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled enumeration kernels over 64-bit vertex masks (n <= 64).

Mirror of ``_kernels_py``; the dispatch layer in ``kernels`` keeps the two
interchangeable and routes wider graphs to the pure version.
"""

from .errors import CapExceeded

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_ctzll(unsigned long long)


cdef inline int _lowest(u64 x):
    return __builtin_ctzll(x)


cdef int _load(list masks, u64* out) except -1:
    cdef int n = len(masks)
    cdef int i
    if n > 64:
        raise ValueError("compiled kernels support at most 64 vertices")
    for i in range(n):
        out[i] = <u64> masks[i]
    return n


def is_forest(list masks, object alive_obj):
    cdef u64 am[64]
    cdef int n = _load(masks, am)
    cdef u64 alive = <u64> alive_obj
    cdef u64 seen = 0, nbrs, rbit, wbit
    cdef int stack_v[64]
    cdef int stack_p[64]
    cdef int top, root, u, par, w
    for root in range(n):
        rbit = (<u64> 1) << root
        if not (alive & rbit) or (seen & rbit):
            continue
        seen |= rbit
        top = 0
        stack_v[top] = root
        stack_p[top] = -1
        top += 1
        while top:
            top -= 1
            u = stack_v[top]
            par = stack_p[top]
            nbrs = am[u] & alive
            while nbrs:
                w = _lowest(nbrs)
                nbrs &= nbrs - 1
                if w == par:
                    par = -1
                    continue
                wbit = (<u64> 1) << w
                if seen & wbit:
                    return False
                seen |= wbit
                stack_v[top] = w
                stack_p[top] = u
                top += 1
    return True


cdef u64 _reach(u64* am, u64 alive, int src):
    cdef u64 sbit = (<u64> 1) << src
    if not (alive & sbit):
        return 0
    cdef u64 seen = sbit, frontier = sbit, nxt, f
    cdef int u
    while frontier:
        nxt = 0
        f = frontier
        while f:
            u = _lowest(f)
            f &= f - 1
            nxt |= am[u] & alive & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def reachable(list masks, object alive_obj, int src):
    cdef u64 am[64]
    _load(masks, am)
    return _reach(am, <u64> alive_obj, src)


def st_paths(list masks, int s, int t, object alive_obj, object cap_obj):
    cdef u64 am[64]
    cdef int n = _load(masks, am)
    cdef u64 alive = <u64> alive_obj
    cdef long long cap = <long long> cap_obj
    if not (alive >> s) & 1 or not (alive >> t) & 1:
        return []
    if s == t:
        return [(s,)]
    out = []
    cdef int path[65]
    cdef u64 rem[65]
    cdef u64 used = (<u64> 1) << s
    cdef int depth = 0, w, i
    path[0] = s
    rem[0] = am[s] & alive
    while depth >= 0:
        if rem[depth] == 0:
            used &= ~((<u64> 1) << path[depth])
            depth -= 1
            continue
        w = _lowest(rem[depth])
        rem[depth] &= rem[depth] - 1
        if (used >> w) & 1:
            continue
        if w == t:
            out.append(tuple([path[i] for i in range(depth + 1)]) + (t,))
            if len(out) > cap:
                raise CapExceeded(
                    f"more than {cap} simple s-t paths; raise the cap to proceed"
                )
            continue
        depth += 1
        path[depth] = w
        rem[depth] = am[w] & alive
        used |= (<u64> 1) << w
    return out


def simple_cycles(list masks, object alive_obj, object cap_obj):
    cdef u64 am[64]
    cdef int n = _load(masks, am)
    cdef u64 alive = <u64> alive_obj
    cdef long long cap = <long long> cap_obj
    out = []
    cdef int path[65]
    cdef u64 rem[65]
    cdef u64 used, above
    cdef int root, depth, w, i
    for root in range(n):
        if not (alive >> root) & 1:
            continue
        above = alive
        if root < 63:
            above &= ~(((<u64> 1) << (root + 1)) - 1)
        else:
            above = 0
        path[0] = root
        used = (<u64> 1) << root
        rem[0] = am[root] & above
        depth = 0
        while depth >= 0:
            if rem[depth] == 0:
                used &= ~((<u64> 1) << path[depth])
                depth -= 1
                continue
            w = _lowest(rem[depth])
            rem[depth] &= rem[depth] - 1
            if (used >> w) & 1:
                continue
            if (am[w] >> root) & 1 and depth >= 1 and path[1] < w:
                out.append(tuple([path[i] for i in range(depth + 1)]) + (w,))
                if len(out) > cap:
                    raise CapExceeded(
                        f"more than {cap} simple cycles; raise the cap to proceed"
                    )
            depth += 1
            path[depth] = w
            rem[depth] = am[w] & above
            used |= (<u64> 1) << w
    return out


def disjoint_paths(list masks, object alive_obj, int a1, int b1, int a2, int b2):
    cdef u64 am[64]
    cdef int n = _load(masks, am)
    cdef u64 alive = <u64> alive_obj
    cdef int v
    for v in (a1, b1, a2, b2):
        if not (alive >> v) & 1:
            return False
    if a1 == b1:
        return bool((_reach(am, alive & ~((<u64> 1) << a1), a2) >> b2) & 1)
    if a2 == b2:
        return bool((_reach(am, alive & ~((<u64> 1) << a2), a1) >> b1) & 1)

    cdef u64 allowed = alive & ~((<u64> 1) << a2) & ~((<u64> 1) << b2)
    if not ((allowed >> a1) & 1 and (allowed >> b1) & 1):
        return False

    cdef int stack[65]
    cdef u64 rem[65]
    cdef u64 path_mask = (<u64> 1) << a1
    cdef u64 new_mask
    cdef int depth = 0, w
    stack[0] = a1
    rem[0] = am[a1] & allowed
    while depth >= 0:
        if rem[depth] == 0:
            path_mask &= ~((<u64> 1) << stack[depth])
            depth -= 1
            continue
        w = _lowest(rem[depth])
        rem[depth] &= rem[depth] - 1
        if (path_mask >> w) & 1:
            continue
        if w == b1:
            if (_reach(am, alive & ~(path_mask | ((<u64> 1) << b1)), a2) >> b2) & 1:
                return True
            continue
        new_mask = path_mask | ((<u64> 1) << w)
        if not (_reach(am, alive & ~new_mask, a2) >> b2) & 1:
            continue
        path_mask = new_mask
        depth += 1
        stack[depth] = w
        rem[depth] = am[w] & allowed
    return False
