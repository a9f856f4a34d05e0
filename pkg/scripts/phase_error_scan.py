"""Mean and worst-case fidelity over a grid of phase errors, written as CSV.

    python scripts/phase_error_scan.py --case 2 --span 0.5 --steps 21 > phase_errors.csv
"""
import argparse
import csv
import sys

from faraday_swap.analysis import Axis, SweepSpec, sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--case", type=int, choices=(1, 2), default=1)
    parser.add_argument("--span", type=float, default=0.5, help="max |offset| in radians")
    parser.add_argument("--steps", type=int, default=21)
    args = parser.parse_args()

    spec = SweepSpec(
        (
            Axis("phi_offset", -args.span, args.span, args.steps),
            Axis("phi0_offset", -args.span, args.span, args.steps),
        ),
        case=args.case,
    )
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["phi_offset", "phi0_offset", "mean_fidelity", "worst_fidelity"])
    for row in sweep(spec):
        writer.writerow(
            [repr(row.params["phi_offset"]), repr(row.params["phi0_offset"]), repr(row.mean_fidelity), repr(row.worst_fidelity)]
        )


if __name__ == "__main__":
    main()
