# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixpoint kernel.

Mirrors hornforge._fckernel_py.Formula.  Clause bodies are stored CSR-style
(flat variable array plus offsets); closures run with per-call counter and
membership buffers so a Formula is safe to share between threads.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset


cdef class Formula:
    cdef public int n
    cdef int nclauses
    cdef int body_len
    cdef int nunits
    # clause arrays
    cdef int *c_heads
    cdef int *c_offs          # nclauses + 1
    cdef int *c_body
    cdef int *c_counts0
    cdef int *c_units
    # occurrence lists, CSR by variable
    cdef int *o_offs          # n + 1
    cdef int *o_clause
    cdef public object heads
    cdef public object bodies

    def __cinit__(self, n, bodies, heads):
        cdef int i, j, k, v, total
        self.n = n
        self.heads = list(heads)
        self.bodies = [tuple(b) for b in bodies]
        self.nclauses = len(self.bodies)
        total = 0
        for b in self.bodies:
            total += len(b)
        self.body_len = total

        self.c_heads = <int *> malloc(sizeof(int) * max(1, self.nclauses))
        self.c_offs = <int *> malloc(sizeof(int) * (self.nclauses + 1))
        self.c_body = <int *> malloc(sizeof(int) * max(1, total))
        self.c_counts0 = <int *> malloc(sizeof(int) * max(1, self.nclauses))
        self.o_offs = <int *> malloc(sizeof(int) * (n + 2))

        k = 0
        self.c_offs[0] = 0
        for i in range(self.nclauses):
            self.c_heads[i] = self.heads[i]
            b = self.bodies[i]
            self.c_counts0[i] = len(b)
            for v in b:
                self.c_body[k] = v
                k += 1
            self.c_offs[i + 1] = k

        self.nunits = 0
        for i in range(self.nclauses):
            if self.c_counts0[i] == 0:
                self.nunits += 1
        self.c_units = <int *> malloc(sizeof(int) * max(1, self.nunits))
        j = 0
        for i in range(self.nclauses):
            if self.c_counts0[i] == 0:
                self.c_units[j] = i
                j += 1

        # build occurrence CSR: count, prefix-sum, fill in clause order
        memset(self.o_offs, 0, sizeof(int) * (n + 2))
        for i in range(total):
            self.o_offs[self.c_body[i] + 1] += 1
        for i in range(n):
            self.o_offs[i + 1] += self.o_offs[i]
        self.o_clause = <int *> malloc(sizeof(int) * max(1, total))
        cdef int *fill = <int *> malloc(sizeof(int) * max(1, n))
        memset(fill, 0, sizeof(int) * max(1, n))
        for i in range(self.nclauses):
            for j in range(self.c_offs[i], self.c_offs[i + 1]):
                v = self.c_body[j]
                self.o_clause[self.o_offs[v] + fill[v]] = i
                fill[v] += 1
        free(fill)

    def __dealloc__(self):
        free(self.c_heads)
        free(self.c_offs)
        free(self.c_body)
        free(self.c_counts0)
        free(self.c_units)
        free(self.o_offs)
        free(self.o_clause)

    cdef int _run(self, int *queue, char *inset, int *counts, int nq,
                  int target) nogil:
        """Propagate; queue[0:nq] pre-seeded.  Returns final queue length."""
        cdef int qi = 0, v, ci, h, j
        memcpy(counts, self.c_counts0, sizeof(int) * max(1, self.nclauses))
        for j in range(self.nunits):
            ci = self.c_units[j]
            h = self.c_heads[ci]
            if not inset[h]:
                inset[h] = 1
                queue[nq] = h
                nq += 1
        if target >= 0 and inset[target]:
            return nq
        while qi < nq:
            v = queue[qi]
            qi += 1
            for j in range(self.o_offs[v], self.o_offs[v + 1]):
                ci = self.o_clause[j]
                counts[ci] -= 1
                if counts[ci] == 0:
                    h = self.c_heads[ci]
                    if not inset[h]:
                        inset[h] = 1
                        queue[nq] = h
                        nq += 1
                        if h == target:
                            return nq
        return nq

    cdef (int *, char *, int *) _alloc_bufs(self):
        cdef int *queue = <int *> malloc(sizeof(int) * max(1, self.n))
        cdef char *inset = <char *> malloc(max(1, self.n))
        cdef int *counts = <int *> malloc(sizeof(int) * max(1, self.nclauses))
        return queue, inset, counts

    def closure_list(self, query):
        cdef int *queue
        cdef char *inset
        cdef int *counts
        queue, inset, counts = self._alloc_bufs()
        memset(inset, 0, max(1, self.n))
        cdef int nq = 0, v
        for v in sorted(query):
            if not inset[v]:
                inset[v] = 1
                queue[nq] = v
                nq += 1
        nq = self._run(queue, inset, counts, nq, -1)
        out = sorted(queue[i] for i in range(nq))
        free(queue)
        free(inset)
        free(counts)
        return out

    def derives(self, body, head):
        return self.derives_all([(body, head)])

    def derives_flags(self, checks):
        cdef int *queue
        cdef char *inset
        cdef int *counts
        queue, inset, counts = self._alloc_bufs()
        flags = []
        cdef int nq, v, h
        for body, head in checks:
            memset(inset, 0, max(1, self.n))
            nq = 0
            for v in sorted(body):
                if not inset[v]:
                    inset[v] = 1
                    queue[nq] = v
                    nq += 1
            h = head
            self._run(queue, inset, counts, nq, h)
            flags.append(bool(inset[h]))
        free(queue)
        free(inset)
        free(counts)
        return flags

    def derives_all(self, checks):
        cdef int *queue
        cdef char *inset
        cdef int *counts
        queue, inset, counts = self._alloc_bufs()
        cdef int nq, v, h
        cdef bint ok = True
        for body, head in checks:
            memset(inset, 0, max(1, self.n))
            nq = 0
            for v in sorted(body):
                if not inset[v]:
                    inset[v] = 1
                    queue[nq] = v
                    nq += 1
            h = head
            self._run(queue, inset, counts, nq, h)
            if not inset[h]:
                ok = False
                break
        free(queue)
        free(inset)
        free(counts)
        return bool(ok)

    def closure_mask(self, qmask):
        cdef int *queue
        cdef char *inset
        cdef int *counts
        queue, inset, counts = self._alloc_bufs()
        memset(inset, 0, max(1, self.n))
        cdef int nq = 0, v
        for v in range(self.n):
            if (qmask >> v) & 1:
                inset[v] = 1
                queue[nq] = v
                nq += 1
        nq = self._run(queue, inset, counts, nq, -1)
        out = 0
        for i in range(nq):
            out |= 1 << queue[i]
        free(queue)
        free(inset)
        free(counts)
        return out

    def agree_on_all_subsets(self, Formula other):
        """-1 if closures agree on every subset of [0,n), else the first
        differing query mask.  Caller guarantees n <= 25 or so."""
        if other.n != self.n:
            raise ValueError("formulas must share a variable count")
        cdef int n = self.n
        cdef int *queue_a
        cdef char *inset_a
        cdef int *counts_a
        cdef int *queue_b
        cdef char *inset_b
        cdef int *counts_b
        queue_a, inset_a, counts_a = self._alloc_bufs()
        queue_b, inset_b, counts_b = other._alloc_bufs()
        cdef unsigned long long qmask, nmasks = 1ULL << n
        cdef int nq, v
        cdef long long bad = -1
        for qmask in range(nmasks):
            memset(inset_a, 0, n)
            memset(inset_b, 0, n)
            nq = 0
            for v in range(n):
                if (qmask >> v) & 1:
                    inset_a[v] = 1
                    inset_b[v] = 1
                    queue_a[nq] = v
                    queue_b[nq] = v
                    nq += 1
            self._run(queue_a, inset_a, counts_a, nq, -1)
            other._run(queue_b, inset_b, counts_b, nq, -1)
            for v in range(n):
                if inset_a[v] != inset_b[v]:
                    bad = <long long> qmask
                    break
            if bad >= 0:
                break
        free(queue_a)
        free(inset_a)
        free(counts_a)
        free(queue_b)
        free(inset_b)
        free(counts_b)
        return bad
