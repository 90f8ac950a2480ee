"""Pure-Python fixpoint kernel.

Same interface as the Cython module ``hornforge._fckernel``; selected by
``hornforge.kernel`` when the extension is unavailable or when the
HORNFORGE_KERNEL environment variable forces it.

The closure routine is the linear-time unit-propagation scheme: one counter
of unsatisfied body literals per clause, occurrence lists from variable to
clauses, and a FIFO queue of newly derived variables.  The queue is seeded
with the query in ascending order and occurrence lists follow stored clause
order, so the trigger sequence is reproducible.
"""


class Formula:
    """Immutable clause-array form of a pure Horn CNF for closure queries."""

    def __init__(self, n, bodies, heads):
        self.n = n
        self.heads = list(heads)
        self.bodies = [tuple(b) for b in bodies]
        self._counts0 = [len(b) for b in self.bodies]
        occurs = [[] for _ in range(n)]
        for ci, body in enumerate(self.bodies):
            for v in body:
                occurs[v].append(ci)
        self._occurs = occurs
        self._units = [ci for ci, c in enumerate(self._counts0) if c == 0]

    def _run(self, query, target=-1):
        """Propagate to the least fixpoint; stops early once ``target`` is in.

        Returns (queue, inset) where queue lists members in derivation order.
        """
        inset = bytearray(self.n)
        queue = []
        for v in query:
            if not inset[v]:
                inset[v] = 1
                queue.append(v)
        heads = self.heads
        counts = self._counts0[:]
        occurs = self._occurs
        for ci in self._units:
            h = heads[ci]
            if not inset[h]:
                inset[h] = 1
                queue.append(h)
        if target >= 0 and inset[target]:
            return queue, inset
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for ci in occurs[v]:
                counts[ci] -= 1
                if counts[ci] == 0:
                    h = heads[ci]
                    if not inset[h]:
                        inset[h] = 1
                        queue.append(h)
                        if h == target:
                            return queue, inset
        return queue, inset

    def closure_list(self, query):
        """Sorted list of variables in the least fixpoint of ``query``."""
        queue, _ = self._run(sorted(query))
        return sorted(queue)

    def derives(self, body, head):
        """True iff ``head`` is forward-chaining-derivable from ``body``."""
        _, inset = self._run(sorted(body), target=head)
        return bool(inset[head])

    def derives_flags(self, checks):
        """One flag per (body, head) pair."""
        return [self.derives(b, h) for b, h in checks]

    def derives_all(self, checks):
        for b, h in checks:
            if not self.derives(b, h):
                return False
        return True

    def closure_mask(self, qmask):
        """Closure as an int bitmask; query given as an int bitmask."""
        query = []
        m = qmask
        while m:
            low = m & -m
            query.append(low.bit_length() - 1)
            m ^= low
        queue, _ = self._run(query)
        out = 0
        for v in queue:
            out |= 1 << v
        return out

    def agree_on_all_subsets(self, other):
        """Compare closures of every subset of [0, n); -1 if all equal,
        otherwise the first differing query mask."""
        if other.n != self.n:
            raise ValueError("formulas must share a variable count")
        for qmask in range(1 << self.n):
            if self.closure_mask(qmask) != other.closure_mask(qmask):
                return qmask
        return -1
