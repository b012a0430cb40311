"""How fast the running minimum of pi(k a)/k approaches the additive
coefficient c(a) for GMIC plus a shift."""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from cornerlab import gjfun
from cornerlab.numctx import NumberContext, enclose


@dataclass
class Config:
    b: str = "2/5"
    symbol: str = "sqrt2"
    coeff: str = "1/3"
    Ks: tuple[int, ...] = (1, 10, 100, 1000)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--b", default=Config.b)
    p.add_argument("--symbol", default=Config.symbol)
    p.add_argument("--coeff", default=Config.coeff)
    p.add_argument("--Ks", type=int, nargs="+", default=list(Config.Ks))
    cfg = Config(**vars(p.parse_args()))
    ctx = NumberContext.from_symbols([cfg.symbol])
    g = gjfun.ShiftedFunction(gjfun.gmic(Fraction(cfg.b)),
                              gjfun.AdditiveFunction({cfg.symbol: Fraction(cfg.coeff)}, ctx))
    print(f"{'K':>6} {'scan_min - c':>14} {'c - dual':>14} {'bound':>10}")
    for K in cfg.Ks:
        est = gjfun.extract_theta(g, K)[cfg.symbol]
        gap_up = enclose(est.scan_min - est.exact, Fraction(1, 10**9))[1]
        gap_dn = enclose(est.exact - est.scan_max_dual, Fraction(1, 10**9))[1]
        print(f"{K:>6} {float(gap_up):>14.3e} {float(gap_dn):>14.3e} {float(est.error_bound):>10.1e}")


if __name__ == "__main__":
    main()
