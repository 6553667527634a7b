"""Build a short-cycle deletion instance from a 3CNF and check it agrees with SAT."""
import argparse
from pathlib import Path

from ecml.hardness import check_equivalence, generate, parse_dimacs

HERE = Path(__file__).parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("cnf", nargs="?", default=str(HERE / "data" / "tiny.cnf"))
    ap.add_argument("--l", type=int, default=5)
    args = ap.parse_args()

    cnf = parse_dimacs(Path(args.cnf).read_text())
    inst = generate(cnf, args.l)
    report = check_equivalence(inst, cnf)
    print(f"{cnf.n} variables, {cnf.m} clauses -> {inst.graph.n} vertices, {inst.graph.m} edges, k={inst.k}")
    print(f"path decomposition width {report.width} (bound {report.width_bound})")
    print(f"satisfiable: {report.satisfiable}; C_{args.l} deletion: {report.cl_deletion}; "
          f"girth > {args.l} deletion: {report.girth_deletion}")
    print("consistent" if report.ok else "INCONSISTENT")


if __name__ == "__main__":
    main()
