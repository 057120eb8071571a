# cython: language_level=3
"""Compiled search kernels.

Mirrors `_fallback.py` operation for operation; see that module for the
semantics (tie-breaking, lazy invalidation, re-expansion, fmin bookkeeping).
Expansion order and results must be identical across the two backends.

Layout notes:
  - cells are linear indices x + X*(y + Y*z), int32, < 2^26
  - per-cell state lives in epoch-gated arrays so one Kernel is reused
    across many searches without clearing
  - heap keys pack (f, g desc, push order) resp. (visits, f, g desc, push
    order) into two int64 words compared lexicographically
"""

from cpython cimport array
from libc.stdlib cimport malloc, realloc, free, qsort
from libc.string cimport memset

import array as _array
from time import monotonic as _monotonic

from .errors import SearchTimeout

BACKEND = "cython"

cdef int INF_I32 = 0x7FFFFFFF
cdef long long CELL_CEIL = (<long long>1) << 26   # max cells per grid
cdef long long F_CEIL = (<long long>1) << 27      # f = g + h < 2^27
cdef long long ID_BITS = 31
cdef long long ID_MASK = ((<long long>1) << 31) - 1
cdef long long ID_CEIL = (<long long>1) << 31
cdef int DEADLINE_MASK = 4095
cdef int MAX_SCAN_ROUTES = 1024

_INT_TEMPLATE = _array.array("i", [])


cdef array.array _as_int_array(object seq):
    if isinstance(seq, _array.array):
        return <array.array>seq
    return _array.array("i", seq)


# ---------------------------------------------------------------------------
# two-word keyed binary min-heap
# ---------------------------------------------------------------------------

cdef struct Heap:
    long long* a
    long long* b
    long long size
    long long cap


cdef int heap_init(Heap* h, long long cap) except -1:
    h.a = <long long*>malloc(cap * sizeof(long long))
    h.b = <long long*>malloc(cap * sizeof(long long))
    if h.a == NULL or h.b == NULL:
        raise MemoryError()
    h.size = 0
    h.cap = cap
    return 0


cdef void heap_free(Heap* h) noexcept:
    if h.a != NULL:
        free(h.a)
        h.a = NULL
    if h.b != NULL:
        free(h.b)
        h.b = NULL
    h.size = 0
    h.cap = 0


cdef inline int heap_push(Heap* h, long long ka, long long kb) except -1:
    cdef long long i, p
    cdef long long* a
    cdef long long* b
    if h.size == h.cap:
        h.cap *= 2
        h.a = <long long*>realloc(h.a, h.cap * sizeof(long long))
        h.b = <long long*>realloc(h.b, h.cap * sizeof(long long))
        if h.a == NULL or h.b == NULL:
            raise MemoryError()
    a = h.a
    b = h.b
    i = h.size
    h.size += 1
    while i > 0:
        p = (i - 1) >> 1
        if a[p] < ka or (a[p] == ka and b[p] <= kb):
            break
        a[i] = a[p]
        b[i] = b[p]
        i = p
    a[i] = ka
    b[i] = kb
    return 0


cdef inline void heap_pop(Heap* h, long long* ka, long long* kb) noexcept nogil:
    # caller checks size > 0
    cdef long long* a = h.a
    cdef long long* b = h.b
    cdef long long la, lb, i, c, n
    ka[0] = a[0]
    kb[0] = b[0]
    h.size -= 1
    n = h.size
    if n == 0:
        return
    la = a[n]
    lb = b[n]
    i = 0
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and (a[c + 1] < a[c] or (a[c + 1] == a[c] and b[c + 1] < b[c])):
            c += 1
        if a[c] < la or (a[c] == la and b[c] < lb):
            a[i] = a[c]
            b[i] = b[c]
            i = c
        else:
            break
    a[i] = la
    b[i] = lb


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

cdef class Kernel:
    """Single-pipe searches over one grid; reusable across many calls."""

    cdef int X, Y, Z
    cdef long long n
    cdef bytes blocked_obj
    cdef const unsigned char* blocked
    # per-cell state, gated by ep_[v] == epoch
    cdef int* ep_
    cdef int* g_
    cdef int* xg_
    cdef int* par_
    cdef int* ban_
    cdef int* occ_
    cdef int epoch
    # entry pool
    cdef int* ev_
    cdef int* eg_
    cdef int* en_
    cdef int* enext_
    cdef long long ecap, esz
    # f-bucket index for the focal OPEN (linked lists + live counts)
    cdef int* fhead_
    cdef int* fep_
    cdef long long* flc_
    cdef long long fcap
    cdef Heap heap

    def __cinit__(self, dims, blocked):
        self.X, self.Y, self.Z = dims
        self.n = <long long>self.X * self.Y * self.Z
        self.blocked_obj = bytes(blocked)
        if len(self.blocked_obj) != self.n:
            raise ValueError("blocked mask size does not match dims")
        if self.n >= CELL_CEIL:
            raise ValueError("grid too large for compiled kernel")
        self.blocked = self.blocked_obj
        self.ep_ = <int*>malloc(self.n * sizeof(int))
        self.g_ = <int*>malloc(self.n * sizeof(int))
        self.xg_ = <int*>malloc(self.n * sizeof(int))
        self.par_ = <int*>malloc(self.n * sizeof(int))
        self.ban_ = <int*>malloc(self.n * sizeof(int))
        self.occ_ = <int*>malloc(self.n * sizeof(int))
        if (self.ep_ == NULL or self.g_ == NULL or self.xg_ == NULL
                or self.par_ == NULL or self.ban_ == NULL or self.occ_ == NULL):
            raise MemoryError()
        memset(self.ep_, 0, self.n * sizeof(int))
        memset(self.ban_, 0, self.n * sizeof(int))
        memset(self.occ_, 0, self.n * sizeof(int))
        self.epoch = 0
        self.ecap = 4096
        self.ev_ = <int*>malloc(self.ecap * sizeof(int))
        self.eg_ = <int*>malloc(self.ecap * sizeof(int))
        self.en_ = <int*>malloc(self.ecap * sizeof(int))
        self.enext_ = <int*>malloc(self.ecap * sizeof(int))
        if self.ev_ == NULL or self.eg_ == NULL or self.en_ == NULL or self.enext_ == NULL:
            raise MemoryError()
        self.esz = 0
        self.fcap = 1024
        self.fhead_ = <int*>malloc(self.fcap * sizeof(int))
        self.fep_ = <int*>malloc(self.fcap * sizeof(int))
        self.flc_ = <long long*>malloc(self.fcap * sizeof(long long))
        if self.fhead_ == NULL or self.fep_ == NULL or self.flc_ == NULL:
            raise MemoryError()
        memset(self.fep_, 0, self.fcap * sizeof(int))
        heap_init(&self.heap, 4096)

    def __dealloc__(self):
        free(self.ep_)
        free(self.g_)
        free(self.xg_)
        free(self.par_)
        free(self.ban_)
        free(self.occ_)
        free(self.ev_)
        free(self.eg_)
        free(self.en_)
        free(self.enext_)
        free(self.fhead_)
        free(self.fep_)
        free(self.flc_)
        heap_free(&self.heap)

    # -- internal helpers ----------------------------------------------------

    cdef inline int _h(self, long long v, int gx, int gy, int gz) nogil:
        cdef int x = <int>(v % self.X)
        cdef long long rest = v // self.X
        cdef int y = <int>(rest % self.Y)
        cdef int z = <int>(rest // self.Y)
        cdef int d = x - gx
        cdef int s = -d if d < 0 else d
        d = y - gy
        s += -d if d < 0 else d
        d = z - gz
        s += -d if d < 0 else d
        return s

    cdef inline int _neighbors(self, int v, int* out) nogil:
        # fixed order: +x, -x, +y, -y, +z, -z
        cdef int X = self.X, Y = self.Y, Z = self.Z
        cdef int x = v % X
        cdef int rest = v // X
        cdef int y = rest % Y
        cdef int z = rest // Y
        cdef int nn = 0
        if x + 1 < X:
            out[nn] = v + 1
            nn += 1
        if x > 0:
            out[nn] = v - 1
            nn += 1
        if y + 1 < Y:
            out[nn] = v + X
            nn += 1
        if y > 0:
            out[nn] = v - X
            nn += 1
        if z + 1 < Z:
            out[nn] = v + X * Y
            nn += 1
        if z > 0:
            out[nn] = v - X * Y
            nn += 1
        return nn

    cdef long long _new_entry(self, int v, int g, int nv) except -1:
        cdef long long eid = self.esz
        if eid >= ID_CEIL:
            raise RuntimeError("entry pool overflow")
        if eid == self.ecap:
            self.ecap *= 2
            self.ev_ = <int*>realloc(self.ev_, self.ecap * sizeof(int))
            self.eg_ = <int*>realloc(self.eg_, self.ecap * sizeof(int))
            self.en_ = <int*>realloc(self.en_, self.ecap * sizeof(int))
            self.enext_ = <int*>realloc(self.enext_, self.ecap * sizeof(int))
            if (self.ev_ == NULL or self.eg_ == NULL or self.en_ == NULL
                    or self.enext_ == NULL):
                raise MemoryError()
        self.ev_[eid] = v
        self.eg_[eid] = g
        self.en_[eid] = nv
        self.enext_[eid] = -1
        self.esz += 1
        return eid

    cdef int _grow_f(self, long long f) except -1:
        cdef long long old = self.fcap
        if f < old:
            return 0
        while self.fcap <= f:
            self.fcap *= 2
        self.fhead_ = <int*>realloc(self.fhead_, self.fcap * sizeof(int))
        self.fep_ = <int*>realloc(self.fep_, self.fcap * sizeof(int))
        self.flc_ = <long long*>realloc(self.flc_, self.fcap * sizeof(long long))
        if self.fhead_ == NULL or self.fep_ == NULL or self.flc_ == NULL:
            raise MemoryError()
        memset(self.fep_ + old, 0, (self.fcap - old) * sizeof(int))
        return 0

    cdef inline void _touch_f(self, long long f) nogil:
        if self.fep_[f] != self.epoch:
            self.fep_[f] = self.epoch
            self.fhead_[f] = -1
            self.flc_[f] = 0

    cdef int _mark(self, object cells, int* arr) except -1:
        cdef long long c
        for obj in cells:
            c = obj
            if c < 0 or c >= self.n:
                raise ValueError("cell index out of range")
            arr[c] = self.epoch
        return 0

    cdef int _mark_array(self, array.array cells, int* arr) except -1:
        cdef long long i, m
        cdef int* data = cells.data.as_ints
        m = len(cells)
        for i in range(m):
            if data[i] < 0 or data[i] >= self.n:
                raise ValueError("cell index out of range")
            arr[data[i]] = self.epoch
        return 0

    cdef array.array _rebuild(self, int goal):
        cdef int v = goal
        cdef long long m = 1
        while self.par_[v] >= 0:
            v = self.par_[v]
            m += 1
        cdef array.array out = array.clone(_INT_TEMPLATE, m, zero=False)
        cdef int* data = out.data.as_ints
        cdef long long i = m - 1
        v = goal
        data[i] = v
        while self.par_[v] >= 0:
            v = self.par_[v]
            i -= 1
            data[i] = v
        return out

    # -- plain A* ------------------------------------------------------------

    def astar(self, start, goal, banned=frozenset(), deadline=None):
        """Min-cost route avoiding blocked and banned cells, or None."""
        cdef int s = start
        cdef int t = goal
        cdef double dl = -1.0
        cdef bint has_dl = deadline is not None
        if has_dl:
            dl = deadline
        self.epoch += 1
        cdef int ep = self.epoch
        self._mark(banned, self.ban_)
        if (self.blocked[s] or self.blocked[t]
                or self.ban_[s] == ep or self.ban_[t] == ep):
            return None
        cdef array.array single
        if s == t:
            single = array.clone(_INT_TEMPLATE, 1, zero=False)
            single.data.as_ints[0] = s
            return single

        cdef int gx = t % self.X
        cdef long long rest = t // self.X
        cdef int gy = <int>(rest % self.Y)
        cdef int gz = <int>(rest // self.Y)

        self.esz = 0
        self.heap.size = 0
        cdef long long eid, eid2, expansions = 0
        cdef long long ka, kb
        cdef int v, gv, g2, u, k, nn
        cdef int nbr[6]

        self.ep_[s] = ep
        self.g_[s] = 0
        self.xg_[s] = INF_I32
        self.par_[s] = -1
        eid = self._new_entry(s, 0, 0)
        heap_push(&self.heap, self._h(s, gx, gy, gz),
                  ((CELL_CEIL - 1) << ID_BITS) | eid)

        while self.heap.size > 0:
            heap_pop(&self.heap, &ka, &kb)
            eid = kb & ID_MASK
            v = self.ev_[eid]
            gv = self.eg_[eid]
            if self.g_[v] != gv or self.xg_[v] <= gv:
                continue
            self.xg_[v] = gv
            expansions += 1
            if (expansions & DEADLINE_MASK) == 0 and has_dl:
                if _monotonic() > dl:
                    raise SearchTimeout()
            if v == t:
                return self._rebuild(t)
            g2 = gv + 1
            nn = self._neighbors(v, nbr)
            for k in range(nn):
                u = nbr[k]
                if self.blocked[u] or self.ban_[u] == ep:
                    continue
                if self.ep_[u] != ep:
                    self.ep_[u] = ep
                    self.g_[u] = INF_I32
                    self.xg_[u] = INF_I32
                if g2 < self.g_[u]:
                    self.g_[u] = g2
                    self.par_[u] = v
                    eid2 = self._new_entry(u, g2, 0)
                    heap_push(&self.heap,
                              g2 + self._h(u, gx, gy, gz),
                              ((CELL_CEIL - 1 - g2) << ID_BITS) | eid2)
        return None

    # -- focal A* --------------------------------------------------------------

    def focal(self, start, goal, banned, w, occupied, deadline=None):
        """Route with cost <= w * fmin, preferring unoccupied cells.

        Returns (route, fmin) or None; fmin is the smallest f in OPEN at
        termination.  `occupied` is a flat int array of cells used by other
        pipes' current routes.
        """
        cdef int s = start
        cdef int t = goal
        cdef double wf = w
        cdef double dl = -1.0
        cdef bint has_dl = deadline is not None
        if has_dl:
            dl = deadline
        self.epoch += 1
        cdef int ep = self.epoch
        self._mark(banned, self.ban_)
        self._mark_array(_as_int_array(occupied), self.occ_)
        if (self.blocked[s] or self.blocked[t]
                or self.ban_[s] == ep or self.ban_[t] == ep):
            return None
        cdef array.array single
        if s == t:
            single = array.clone(_INT_TEMPLATE, 1, zero=False)
            single.data.as_ints[0] = s
            return single, 0

        cdef int gx = t % self.X
        cdef long long rest = t // self.X
        cdef int gy = <int>(rest % self.Y)
        cdef int gz = <int>(rest // self.Y)

        self.esz = 0
        self.heap.size = 0
        cdef long long total_live = 0
        cdef long long expansions = 0
        cdef long long fmin = self._h(s, gx, gy, gz)
        cdef long long thr = <long long>(wf * fmin)  # floor: operands non-negative
        cdef long long new_thr, f, ff, eid, eid2, cand, ka, kb
        cdef int v, gv, g2, u, k, old, nv, nn
        cdef int nbr[6]

        self._grow_f(fmin)
        self._touch_f(fmin)
        self.ep_[s] = ep
        self.g_[s] = 0
        self.xg_[s] = INF_I32
        self.par_[s] = -1
        nv = 1 if self.occ_[s] == ep else 0
        eid = self._new_entry(s, 0, nv)
        self.flc_[fmin] += 1
        total_live += 1
        if fmin <= thr:
            heap_push(&self.heap, (<long long>nv) * F_CEIL + fmin,
                      ((CELL_CEIL - 1) << ID_BITS) | eid)
        else:
            self.enext_[eid] = self.fhead_[fmin]
            self.fhead_[fmin] = <int>eid

        while total_live > 0:
            self._touch_f(fmin)
            while self.flc_[fmin] == 0:
                fmin += 1
                self._grow_f(fmin)
                self._touch_f(fmin)
            new_thr = <long long>(wf * fmin)
            if new_thr > thr:
                self._grow_f(new_thr)
                for f in range(thr + 1, new_thr + 1):
                    self._touch_f(f)
                    cand = self.fhead_[f]
                    self.fhead_[f] = -1
                    while cand != -1:
                        eid = cand
                        cand = self.enext_[eid]
                        v = self.ev_[eid]
                        if (self.ep_[v] == ep and self.g_[v] == self.eg_[eid]
                                and self.xg_[v] > self.eg_[eid]):
                            heap_push(&self.heap,
                                      (<long long>self.en_[eid]) * F_CEIL + f,
                                      ((CELL_CEIL - 1 - self.eg_[eid]) << ID_BITS) | eid)
                thr = new_thr

            eid = -1
            while self.heap.size > 0:
                heap_pop(&self.heap, &ka, &kb)
                cand = kb & ID_MASK
                v = self.ev_[cand]
                if (self.ep_[v] == ep and self.g_[v] == self.eg_[cand]
                        and self.xg_[v] > self.eg_[cand]):
                    eid = cand
                    break
            if eid < 0:
                raise RuntimeError("focal underflow: live entries exist but none eligible")

            v = self.ev_[eid]
            gv = self.eg_[eid]
            ff = gv + self._h(v, gx, gy, gz)
            self.xg_[v] = gv
            self.flc_[ff] -= 1
            total_live -= 1
            expansions += 1
            if (expansions & DEADLINE_MASK) == 0 and has_dl:
                if _monotonic() > dl:
                    raise SearchTimeout()
            if v == t:
                return self._rebuild(t), fmin

            g2 = gv + 1
            nn = self._neighbors(v, nbr)
            for k in range(nn):
                u = nbr[k]
                if self.blocked[u] or self.ban_[u] == ep:
                    continue
                if self.ep_[u] != ep:
                    self.ep_[u] = ep
                    self.g_[u] = INF_I32
                    self.xg_[u] = INF_I32
                old = self.g_[u]
                if g2 < old:
                    if old != INF_I32 and self.xg_[u] > old:
                        # strictly better path: the previous entry goes stale
                        f = old + self._h(u, gx, gy, gz)
                        self._touch_f(f)
                        self.flc_[f] -= 1
                        total_live -= 1
                    self.g_[u] = g2
                    self.par_[u] = v
                    nv = self.en_[eid] + (1 if self.occ_[u] == ep else 0)
                    eid2 = self._new_entry(u, g2, nv)
                    f = g2 + self._h(u, gx, gy, gz)
                    self._grow_f(f)
                    self._touch_f(f)
                    self.flc_[f] += 1
                    total_live += 1
                    if f <= thr:
                        heap_push(&self.heap, (<long long>nv) * F_CEIL + f,
                                  ((CELL_CEIL - 1 - g2) << ID_BITS) | eid2)
                    else:
                        self.enext_[eid2] = self.fhead_[f]
                        self.fhead_[f] = <int>eid2
        return None


# ---------------------------------------------------------------------------
# conflict scan
# ---------------------------------------------------------------------------

cdef int _cmp_ll(const void* pa, const void* pb) noexcept nogil:
    cdef long long a = (<const long long*>pa)[0]
    cdef long long b = (<const long long*>pb)[0]
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


def conflict_scan(routes):
    """Count (pipe pair, vertex) collisions and find the first one.

    Returns (count, (i, j, index of vertex along pipe i) or None), where the
    reported conflict is lexicographically smallest in (i, j, index).
    """
    cdef long long nroutes = len(routes)
    if nroutes >= MAX_SCAN_ROUTES:
        raise ValueError("too many routes for conflict scan")
    cdef long long total_cells = 0
    cdef long long i, m, p, pos
    cdef long long total = 0
    cdef long long best_i = -1, best_j = -1, best_idx = -1
    cdef long long run_start, run_len, v, a, b, pa, pb, ia
    cdef array.array ar
    cdef int* data
    cdef long long* keys

    for i in range(nroutes):
        total_cells += len(routes[i])
    if total_cells == 0:
        return 0, None
    keys = <long long*>malloc(total_cells * sizeof(long long))
    if keys == NULL:
        raise MemoryError()
    try:
        pos = 0
        for i in range(nroutes):
            ar = _as_int_array(routes[i])
            data = ar.data.as_ints
            m = len(ar)
            for p in range(m):
                # (cell << 36) | (pipe << 26) | position-on-pipe
                keys[pos] = ((<long long>data[p]) << 36) | (i << 26) | p
                pos += 1
        qsort(keys, total_cells, sizeof(long long), _cmp_ll)

        i = 0
        while i < total_cells:
            v = keys[i] >> 36
            run_start = i
            while i < total_cells and (keys[i] >> 36) == v:
                i += 1
            run_len = i - run_start
            if run_len > 1:
                total += run_len * (run_len - 1) // 2
                for a in range(run_start, i):
                    pa = (keys[a] >> 26) & 1023
                    ia = keys[a] & ((1 << 26) - 1)
                    for b in range(a + 1, i):
                        pb = (keys[b] >> 26) & 1023
                        if pa == pb:
                            continue
                        # keys sorted, so pa < pb within a run
                        if (best_i < 0 or pa < best_i
                                or (pa == best_i
                                    and (pb < best_j
                                         or (pb == best_j and ia < best_idx)))):
                            best_i = pa
                            best_j = pb
                            best_idx = ia
        if total == 0:
            return 0, None
        return total, (best_i, best_j, best_idx)
    finally:
        free(keys)
