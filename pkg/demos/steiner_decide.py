"""Randomized Steiner Tree decisions on a grid, with an exact cross-check."""
import argparse

from ecml import Decider, Graph, Instance, greedy_decomposition, make_nice, make_problem
from ecml.search import search_decide


def grid(rows: int, cols: int) -> Graph:
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = [(idx(r, c), idx(r, c + 1)) for r in range(rows) for c in range(cols - 1)]
    edges += [(idx(r, c), idx(r + 1, c)) for r in range(rows - 1) for c in range(cols)]
    return Graph(rows * cols, tuple(edges))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=3)
    ap.add_argument("--cols", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = grid(args.rows, args.cols)
    terminals = {0, g.n - 1}
    spec = make_problem("steiner-tree")
    nice = make_nice(g, greedy_decomposition(g))
    print(f"{args.rows}x{args.cols} grid, terminals {sorted(terminals)}, width {nice.width}")
    # the shortest connection uses rows + cols - 1 vertices, so rows + cols - 3 extra ones
    for k in range(args.rows + args.cols - 5, args.rows + args.cols - 2):
        inst = Instance(g, {"T": terminals}, params={"k": k})
        result = Decider(inst, nice, spec).decide(seed=args.seed)
        exact = search_decide(inst, spec)
        print(f"k={k}: randomized {'yes' if result.answer else 'no'} after {result.repetitions} "
              f"of {result.planned_repetitions} trials, exact {'yes' if exact else 'no'}")


if __name__ == "__main__":
    main()
