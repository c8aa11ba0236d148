"""Pure-Python flood kernel; reference semantics for ``_flood_core``."""

import numpy as np


ANY = 0
FIRST = 1


def flood(indptr, indices, edge_ok, node_ok, source, rule=FIRST):
    """Level-synchronous broadcast from ``source``.

    A node first reached at hop ``h`` retransmits iff ``node_ok[v]`` and the
    edge it was reached over has ``edge_ok[e]`` set. With ``rule == FIRST``
    that edge is the one from the lowest-id hop ``h - 1`` transmitter; with
    ``rule == ANY`` any hop ``h - 1`` transmitter's edge will do. Returns
    ``(hops, sent)``: hop of first reception (-1 if never reached, 0 for the
    source) and a 0/1 retransmit flag.
    """
    ptr = indptr.tolist()
    idx = indices.tolist()
    eok = edge_ok.tolist()
    nok = node_ok.tolist()
    n = len(ptr) - 1
    hops = [-1] * n
    sent = [0] * n
    hops[source] = 0
    sent[source] = 1
    frontier = [source]
    h = 0
    while frontier:
        reached = []
        parent = {}
        eligible = set()
        for u in frontier:
            for e in range(ptr[u], ptr[u + 1]):
                v = idx[e]
                if hops[v] == -1:
                    hops[v] = h + 1
                    reached.append(v)
                if hops[v] != h + 1:
                    continue
                if rule == ANY:
                    if eok[e]:
                        eligible.add(v)
                elif v not in parent or u < parent[v]:
                    parent[v] = u
                    if eok[e]:
                        eligible.add(v)
                    else:
                        eligible.discard(v)
        frontier = [v for v in reached if v in eligible and nok[v]]
        for v in frontier:
            sent[v] = 1
        h += 1
    return np.array(hops, dtype=np.int32), np.array(sent, dtype=np.uint8)
