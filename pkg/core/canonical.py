"""Canonical forms of family pairs under relabeling of [m] and swapping the two sides."""

import logging
from typing import Dict, List, Set, Tuple

import pynauty
from pydantic import BaseModel, ConfigDict

from core.universe import Family, iter_bits, require_same_universe

logger = logging.getLogger(__name__)

Ranks = Tuple[int, ...]


class PairCanonicalForm(BaseModel):
    """Sorted rank lists of the canonically relabeled pair."""

    model_config = ConfigDict(frozen=True)

    first: Ranks
    second: Ranks

    def as_key(self) -> Tuple[Ranks, Ranks]:
        return (self.first, self.second)


def pair_graph(first: Family, second: Family) -> pynauty.Graph:
    """Coloured graph of an ordered pair.

    Vertices 0..m-1 are the ground elements. Every member of either side gets a vertex
    coloured by its side, joined to the elements of multiplicity 1. An element of
    multiplicity c >= 2 is reached through a private vertex coloured c.
    """
    m = first.m
    adjacency: Dict[int, List[int]] = {i: [] for i in range(m)}
    sides: List[Set[int]] = [set(), set()]
    repeated: Dict[int, Set[int]] = {}
    vertex = m
    for side, family in enumerate((first, second)):
        for vector in family.vectors():
            member = vertex
            vertex += 1
            sides[side].add(member)
            adjacency[member] = []
            for i, x in enumerate(vector):
                if x == 1:
                    adjacency[member].append(i)
                elif x > 1:
                    adjacency[member].append(vertex)
                    adjacency[vertex] = [i]
                    repeated.setdefault(x, set()).add(vertex)
                    vertex += 1

    cells = [set(range(m))] + sides + [repeated[c] for c in sorted(repeated)]
    return pynauty.Graph(
        vertex,
        directed=False,
        adjacency_dict=adjacency,
        vertex_coloring=[cell for cell in cells if cell],
    )


def _canonical_image(first: Family, second: Family) -> Tuple[Ranks, Ranks]:
    labels = pynauty.canon_label(pair_graph(first, second))
    perm = [0] * first.m
    for position, element in enumerate(v for v in labels if v < first.m):
        perm[element] = position
    perm = tuple(perm)
    return (
        tuple(iter_bits(relabel_family(first, perm).mask)),
        tuple(iter_bits(relabel_family(second, perm).mask)),
    )


def canonicalize_pair(A: Family, B: Family) -> PairCanonicalForm:
    """Equal for two pairs exactly when one is a relabeling of the other, possibly swapped"""
    require_same_universe(A, B)
    best = min(_canonical_image(A, B), _canonical_image(B, A))
    return PairCanonicalForm(first=best[0], second=best[1])


def relabel_family(A: Family, perm: Tuple[int, ...]) -> Family:
    """Apply the relabeling i+1 -> perm[i]+1 to every member of A"""
    universe = A.universe
    mask = 0
    for vector in A.vectors():
        image = [0] * universe.m
        for i, x in enumerate(vector):
            image[perm[i]] = x
        mask |= 1 << universe.rank_vector(tuple(image))
    return Family(universe, mask)
