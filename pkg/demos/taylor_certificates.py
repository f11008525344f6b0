"""Certified Taylor re-expansion of an exponential sum.

Builds a 40-term geometric-coefficient sum with a certified tail, expands it
around a center, and tabulates measured truncation error against the
certificate order by order. Then walks the expansion center downward
(analytic continuation): each step re-expands inside the previous disc and
the values agree within the combined certificates.
"""

from expseries.series import DirichletSeries, TailModel, evaluate
from expseries.taylor import (
    evaluate_via_expansion,
    expand,
    order_for_tolerance,
    partial_sums,
    remainder_bound,
)


def build_series() -> DirichletSeries:
    terms = [(2.0**-j, float(j)) for j in range(1, 41)]
    # Everything beyond 40 terms sums to exactly 2^-40 in absolute value.
    tail = TailModel(sum_bound=2.0**-40, lambda_floor=41.0)
    return DirichletSeries(terms, tail)


def main() -> None:
    series = build_series()
    tau, t = 0.8, 0.5
    expansion = expand(series, tau, 25)
    truth = evaluate(series, t)
    partials = partial_sums(expansion, t)

    print(f"phi(t) = sum 2^-j e^(-j t), expanded at tau = {tau}, evaluated at t = {t}")
    print(f"direct value {truth.value:.15f} (tail bound {truth.error_bound:.2e})")
    print(f"{'n':>3} {'measured remainder':>20} {'certified bound':>18}")
    for n in (1, 3, 5, 8, 12, 16, 20, 25):
        measured = abs(truth.value - partials[n])
        certified = remainder_bound(expansion, n, t).bound
        marker = "ok" if measured <= certified else "VIOLATION"
        print(f"{n:>3} {measured:>20.3e} {certified:>18.3e}  {marker}")

    tol = 1e-10
    n_needed = order_for_tolerance(expansion, t, tol)
    print(f"\nsmallest certified order for tolerance {tol:.0e} at t = {t}: n = {n_needed}")

    print("\nanalytic continuation walk: re-center 0.8 -> 0.5 -> 0.3 -> 0.2")
    centers = [0.8, 0.5, 0.3, 0.2]
    probe = 0.25
    for c1, c2 in zip(centers, centers[1:]):
        e1 = expand(series, c1, 30)
        e2 = expand(series, c2, 30)
        if not (0 < probe < 2 * c1 and 0 < probe < 2 * c2):
            continue
        v1 = evaluate_via_expansion(e1, probe)
        v2 = evaluate_via_expansion(e2, probe)
        gap = abs(v1.value - v2.value)
        budget = v1.error_bound + v2.error_bound
        print(
            f"  centers {c1} and {c2} at t = {probe}: |difference| = {gap:.2e}"
            f" <= combined certificate {budget:.2e}"
        )
    print(f"  direct evaluation at t = {probe}: {evaluate(series, probe).value:.12f}")


if __name__ == "__main__":
    main()
