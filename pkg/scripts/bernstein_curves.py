"""Dump plateau, peak and Bernstein-approximation curves for plotting, plus the
sup-norm error as a function of the degree m."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from sievelab import REPORT_HEADER
from sievelab.bernstein import bernstein_approx, discretize_F, peaks, plateau, sup_error


@dataclass
class CurveConfig:
    beta: float = 0.2
    gamma: float = 0.8
    eps: float = 0.05
    smoothness: int = 10
    degrees: tuple[int, ...] = (10, 20, 50, 100, 200, 400)
    points: int = 501


def curves(cfg: CurveConfig, out) -> None:
    F = plateau(cfg.beta, cfg.gamma, cfg.eps, cfg.smoothness)
    Fb, Fg = peaks(cfg.beta, cfg.gamma, cfg.eps, cfg.smoothness)
    x = np.linspace(0.0, 1.0, cfg.points)
    cols = {"x": x, "F": F(x), "F_beta": Fb(x), "F_gamma": Fg(x)}
    for m in cfg.degrees:
        cols[f"B_{m}"] = bernstein_approx(F, m, x)
    out.write(REPORT_HEADER + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(list(cols))
    for i in range(cfg.points):
        w.writerow([repr(float(v[i])) for v in cols.values()])


def errors(cfg: CurveConfig, out) -> None:
    F = plateau(cfg.beta, cfg.gamma, cfg.eps, cfg.smoothness)
    out.write(REPORT_HEADER + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["m", "sup_error", "alpha_total"])
    for m in cfg.degrees:
        w.writerow([m, repr(sup_error(F, m)), repr(discretize_F(F, m).total)])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("what", choices=["curves", "errors"])
    ap.add_argument("--beta", type=float, default=0.2)
    ap.add_argument("--gamma", type=float, default=0.8)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--smoothness", type=int, default=10)
    ap.add_argument("--degrees", type=int, nargs="+", default=[10, 20, 50, 100, 200, 400])
    a = ap.parse_args(argv)
    cfg = CurveConfig(a.beta, a.gamma, a.eps, a.smoothness, tuple(a.degrees))
    (curves if a.what == "curves" else errors)(cfg, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
