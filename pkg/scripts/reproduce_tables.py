"""Print both swapping protocols' outcome tables at the ideal phases."""
from faraday_swap import CavityParams, phase_shifts
from faraday_swap.protocols import run_case


def main():
    pp = phase_shifts(CavityParams.canonical())
    print(f"phi = {pp.phi:.6f}, phi0 = {pp.phi0:.6f}")
    for case in (1, 2):
        report = run_case(case, pp)
        print(f"\ncase {case}: success probability {report.success_probability:.12f}")
        print(f"{'outcome':>8} {'prob':>8} {'AO':>4} {'fidelity':>10}")
        for b in report.branches:
            print(f"{b.outcome:>8} {b.probability:8.4f} {b.correction:>4} {b.fidelity:10.6f}")


if __name__ == "__main__":
    main()
