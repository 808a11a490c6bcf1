"""Tour of the stationary side of the library.

Sweeps the feedback gain at fixed device parameters and prints how the
detected noise spectrum and the mirror's effective temperature respond.
Run with no arguments; pass --plot to also write a PNG next to the script.
"""

import argparse
from pathlib import Path

import numpy as np

from coolspec import (
    ModelParams,
    Scheme,
    stationary_spectrum,
    stationary_variances,
)

DEVICE = dict(quality_factor=1e4, input_power=10.0,
              detection_efficiency=0.8, temperature=1e5)
GAINS = (0.0, 10.0, 1e2, 1e3)


def cooled_params(gain):
    scheme = Scheme.COLD_DAMPING if gain else Scheme.NO_FEEDBACK
    return ModelParams(gain=gain, scheme=scheme, **DEVICE)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    grid = np.linspace(0.5, 1.5, 400)
    curves = {}
    print(f"{'gain':>8} {'peak S(1)':>12} {'<Q^2>':>10} {'T_eff/T':>10}")
    for g in GAINS:
        p = cooled_params(g)
        spec = stationary_spectrum(grid, p)
        state = stationary_variances(p)
        # effective temperature from the position variance, relative to the
        # bath: equipartition at the bath temperature would give theta/2
        t_eff = 2.0 * state.q_var / p.temperature
        curves[g] = spec
        print(f"{g:8g} {spec.max():12.4g} {state.q_var:10.4g} "
              f"{t_eff:10.3g}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(6, 4))
        for g, spec in curves.items():
            ax.semilogy(grid, spec, label=f"g = {g:g}")
        ax.set_xlabel("frequency (units of the mechanical frequency)")
        ax.set_ylabel("detected position noise spectrum")
        ax.legend()
        out = Path(__file__).with_suffix(".png")
        fig.savefig(out, dpi=150, bbox_inches="tight")
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
