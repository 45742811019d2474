import functools

from lfgraph import build, field_from_order


@functools.cache
def graph_for(q, n):
    """One shared graph per (q, n); instances are immutable."""
    return build(field_from_order(q), n)
