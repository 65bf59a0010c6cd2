"""Tour of the tenth-resolution allocation space and its cost model.

Allocations split ten effort units over n targets, so the space is the
stars-and-bars simplex; `neighbors` moves one unit between two targets,
which is the move set the greedy baseline climbs on.  The closing table
prices a full nested solve per n and makes the case for desk-scale runs.
"""

from arasim.strategies import (
    SpaceIndex,
    count,
    enumerate_space,
    format_allocation,
    neighbors,
)
from arasim.experiments import size_report


def main() -> None:
    print("allocation counts by number of targets")
    for n in range(1, 6):
        print(f"  n={n}: {count(n):5d} allocations")
    print()

    space = SpaceIndex.build(3)
    print(f"n=3 space holds {len(space)} allocations; the first five:")
    for alloc in space.strategies[:5]:
        print(f"  {alloc}  ->  {format_allocation(alloc)}")
    print()

    center = (3, 3, 4)
    moves = neighbors(center)
    print(f"one-unit moves from {center} ({len(moves)} neighbors):")
    print(f"  {moves}")
    print()

    print("nested-simulation work per exhaustive solve")
    print("  n  allocations  trait draws  nodes  inner evaluations")
    for n, count_n, n_r, n_s, total in size_report(range(1, 6)):
        print(f"  {n}  {count_n:11d}  {n_r:11d}  {n_s:5d}  {total:,}")
    print()
    print("the n=5 row explains why full-scale runs need cluster time;")
    print("the desk profile caps trait draws at 1000 to stay interactive")


if __name__ == "__main__":
    main()
