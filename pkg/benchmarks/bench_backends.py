"""Steps per second of the compiled and numpy kernels on the three presets.

    python benchmarks/bench_backends.py [--steps 2000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from arteryflow._backend import BACKENDS
from arteryflow.integrator import Solver
from arteryflow.scenarios import PRESETS, preset


def time_steps(problem, backend, steps):
    solver = Solver(problem.grid, problem.geometry, problem.params, problem.left, problem.right,
                    flux=problem.flux, n_cfl=problem.n_cfl, backend=backend)
    state = problem.initial.copy()
    start = time.perf_counter()
    for _ in range(steps):
        state, _ = solver.step(state)
    return time.perf_counter() - start, state


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    names = [b for b in ("compiled", "python") if b in BACKENDS]
    print(f"{'scenario':20s} {'J':>5s} " + " ".join(f"{n + ' steps/s':>18s}" for n in names)
          + ("   speedup  identical" if len(names) == 2 else ""))
    for scenario in PRESETS:
        problem = preset(scenario).build()
        rates, finals = [], []
        for name in names:
            best = min(time_steps(problem, name, args.steps)[0] for _ in range(args.repeat))
            rates.append(args.steps / best)
            finals.append(time_steps(problem, name, args.steps)[1])
        line = f"{scenario:20s} {problem.grid.j_cells:5d} " + " ".join(f"{r:18.0f}" for r in rates)
        if len(names) == 2:
            same = all(np.array_equal(x, y) for x, y in zip(finals[0].cells, finals[1].cells))
            line += f"   {rates[0] / rates[1]:7.1f}x  {same}"
        print(line)


if __name__ == "__main__":
    main()
