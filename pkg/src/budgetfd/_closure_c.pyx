# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled closure kernel for hypergraphs with at most 64 vertices and edges.

Same counter-based algorithm as ``budgetfd._closure_py`` with all state in
fixed C arrays; masks travel as uint64.
"""

from libc.stdint cimport uint64_t


cdef class ClosureKernel:
    cdef uint64_t tails[64]
    cdef uint64_t heads[64]
    cdef int adj_start[65]
    cdef int adj_edges[4096]
    cdef int n_edges
    cdef int n_vertices

    is_compiled = True

    def __init__(self, tail_masks, head_masks, n_vertices):
        cdef int e, v, pos
        if len(tail_masks) != len(head_masks):
            raise ValueError("tail/head lists differ in length")
        if len(tail_masks) > 64 or n_vertices > 64:
            raise ValueError("compiled kernel handles at most 64 vertices/edges")
        self.n_edges = len(tail_masks)
        self.n_vertices = n_vertices
        for e in range(self.n_edges):
            self.tails[e] = tail_masks[e]
            self.heads[e] = head_masks[e]
        # CSR adjacency: vertex -> edges having it as a tail
        cdef int counts[64]
        for v in range(n_vertices):
            counts[v] = 0
        for e in range(self.n_edges):
            for v in range(n_vertices):
                if self.tails[e] >> v & 1:
                    counts[v] += 1
        self.adj_start[0] = 0
        for v in range(n_vertices):
            self.adj_start[v + 1] = self.adj_start[v] + counts[v]
            counts[v] = 0
        for e in range(self.n_edges):
            for v in range(n_vertices):
                if self.tails[e] >> v & 1:
                    pos = self.adj_start[v] + counts[v]
                    self.adj_edges[pos] = e
                    counts[v] += 1

    cpdef uint64_t closure(self, uint64_t edge_mask, uint64_t start):
        cdef uint64_t reached = start
        cdef uint64_t missing[64]
        cdef uint64_t pending = 0
        cdef uint64_t new, bit
        cdef int queue[64]
        cdef int head = 0, tail = 0
        cdef int e, v, k

        for e in range(self.n_edges):
            if not (edge_mask >> e & 1):
                continue
            missing[e] = self.tails[e] & ~start
            if missing[e]:
                pending |= <uint64_t>1 << e
            else:
                new = self.heads[e] & ~reached
                if new:
                    reached |= new
                    while new:
                        bit = new & (~new + 1)
                        queue[tail] = _bit_index(bit)
                        tail += 1
                        new ^= bit

        while head < tail:
            v = queue[head]
            head += 1
            for k in range(self.adj_start[v], self.adj_start[v + 1]):
                e = self.adj_edges[k]
                if not (pending >> e & 1):
                    continue
                missing[e] &= ~(<uint64_t>1 << v)
                if missing[e] == 0:
                    pending &= ~(<uint64_t>1 << e)
                    new = self.heads[e] & ~reached
                    if new:
                        reached |= new
                        while new:
                            bit = new & (~new + 1)
                            queue[tail] = _bit_index(bit)
                            tail += 1
                            new ^= bit
        return reached


cdef inline int _bit_index(uint64_t bit):
    cdef int i = 0
    while bit > 1:
        bit >>= 1
        i += 1
    return i
