"""Reproduce the non-closed face and the pure-integer strict-containment
examples for a few parameter choices."""

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from cornerlab import examples


@dataclass
class Config:
    omegas: list[str] = field(default_factory=lambda: ["sqrt2", "sqrt3", "sqrt5"])
    epsilons: list[str] = field(default_factory=lambda: ["1/2", "1/10", "1/100", "1/1000"])
    bs: list[str] = field(default_factory=lambda: ["1/2", "1/3"])


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--omegas", nargs="+", default=Config().omegas)
    p.add_argument("--epsilons", nargs="+", default=Config().epsilons)
    p.add_argument("--bs", nargs="+", default=Config().bs)
    cfg = Config(**vars(p.parse_args()))

    print("non-closed face: k with frac(k w) <= eps")
    print(f"{'omega':>6} {'b':>4} {'eps':>7} {'k':>6} {'dist <=':>12} verified")
    for om in cfg.omegas:
        for b in cfg.bs:
            for e in cfg.epsilons:
                w = examples.not_closed_sequence(Fraction(e), omega=om, b=Fraction(b))
                print(f"{om:>6} {b:>4} {e:>7} {w.k:>6} {float(w.distance[1]):>12.3e} {w.verified}")

    print("\npure-integer example, coordinates (y_b, y_w, y_1-w)")
    for om in cfg.omegas:
        for b in cfg.bs:
            rep = examples.pure_integer_example(Fraction(b), om)
            print(f"{om:>6} {b:>4} E={list(rep.cp.E)} rays={list(rep.cp.rays)} "
                  f"witness={rep.witness} verified={rep.verified}")


if __name__ == "__main__":
    main()
