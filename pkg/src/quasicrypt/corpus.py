"""Small test corpora: every loop of a given order and a handful of groups."""
from __future__ import annotations

from itertools import permutations
from typing import Iterator, List, Tuple

from . import kernels
from .algebra import CayleyTable
from .keedwell import AbelianGroupSpec, build_abelian_group


def loops_of_order(n: int) -> List[CayleyTable]:
    """All loop tables of order n with identity 0 and bordered rows/columns.

    These are the reduced Latin squares; every loop of order n is isomorphic
    to at least one of them.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    return [CayleyTable(sq) for sq in kernels.active.reduced_latin_squares(n)]


def loops_up_to(max_order: int) -> Iterator[Tuple[int, int, CayleyTable]]:
    """Yield ``(order, index, table)`` for orders 1..max_order."""
    for n in range(1, max_order + 1):
        for i, q in enumerate(loops_of_order(n)):
            yield n, i, q


def trivial_group() -> CayleyTable:
    return CayleyTable([[0]])


def symmetric_group_table(k: int = 3) -> CayleyTable:
    """Cayley table of S_k acting on the right, elements in lexicographic order."""
    perms = sorted(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return CayleyTable([[index[tuple(q[v] for v in p)] for q in perms] for p in perms])


def group_corpus() -> List[Tuple[str, CayleyTable]]:
    groups = [("C1", trivial_group())]
    groups += [(f"C{n}", build_abelian_group(AbelianGroupSpec((n,)))) for n in range(2, 9)]
    groups.append(("C2xC2", build_abelian_group(AbelianGroupSpec((2, 2)))))
    groups.append(("S3", symmetric_group_table(3)))
    return groups
