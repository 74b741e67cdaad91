"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

from vfmarket import _purekernels as pure
from vfmarket import kernels
from vfmarket.fol import parse_sentence
from vfmarket.fol.compile import compile_sentence
from vfmarket.garrabrant import Atom, truth_table


def _program(text):
    prog = compile_sentence(parse_sentence(text))
    return prog, (*prog.arrays, prog.root)


def cases():
    prog, head = _program("A x<=150. A y<=150. (x*y >= y*x & x+y+1 > 0)")
    yield "evaluate (151^2 bounded)", "evaluate", (*head, prog.env())

    prog, head = _program("E x<=9. A y<=9. E z<=9. x*y+z=y*x+9")
    yield "cost (triple loop)", "cost", (*head, prog.env(), 10**7)

    # no witness and no counterexample: both scans visit every assignment
    prog, head = _program("A x. A y. A z. x+y*z+1 > z*y")
    yield "prefix_tarski (41^3)", "prefix_tarski", (*head, prog.env(), prog.quants, 40)
    yield "prefix_bounded (41^3)", "prefix_bounded", (*head, prog.env(), prog.quants, 40)

    k = 14
    index = {i: i - 1 for i in range(1, k + 1)}
    nbytes = (1 << k) // 8
    tables = [truth_table(Atom(i), index, k).to_bytes(nbytes, "little") for i in range(1, k + 1)]
    weights = list(range(1, len(tables) + 1))
    consistent = ((1 << (1 << k)) - 1).to_bytes(nbytes, "little")
    yield f"valuation_sums ({k} primes)", "valuation_sums", (tables, weights, consistent, 1 << k)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled is None:
        print("compiled extension not available; only the Python timings are shown")
    print(f"{'kernel':32} {'python (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    for label, name, call_args in cases():
        slow = getattr(pure, name)
        t_py = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        if kernels.compiled is None:
            print(f"{label:32} {t_py:11.4f} {'-':>11} {'-':>8}")
            continue
        fast = getattr(kernels.compiled, name)
        assert list(fast(*call_args)) == list(slow(*call_args)) if name == "valuation_sums" \
            else fast(*call_args) == slow(*call_args)
        t_cy = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        print(f"{label:32} {t_py:11.4f} {t_cy:11.4f} {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
