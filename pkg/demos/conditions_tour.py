"""Tour of the pointwise condition checks on the built-in mapping gallery.

Run:  python3 demos/conditions_tour.py

Every check scans ordered sample pairs and either passes or hands back the
first violating pair as a witness you can re-evaluate yourself. The star of
the tour is the 1-d step function on [0, 4] (zero everywhere except at the
right endpoint, where it jumps to 2): it is *not* nonexpansive, yet it
satisfies the two-parameter relaxed condition for admissible parameters.
"""
from fixedlab import (
    BGammaMu,
    SamplePlan,
    builtin_gallery,
    check_condition_B,
    check_condition_C,
    check_nonexpansive,
    check_quasi_nonexpansive,
    dist,
    evaluate,
    example1_map,
)


def show(verdict):
    mark = "pass" if verdict.passed else "FAIL"
    line = f"  [{mark}] {verdict.condition_label:<22} pairs={verdict.checked_pairs}"
    if verdict.params:
        line += f" params={dict(verdict.params)}"
    print(line)
    if verdict.witness is not None:
        w = verdict.witness
        print(f"         witness x={w.x} y={w.y}")
        print(f"         lhs={w.lhs!r} > rhs={w.rhs!r}")
    return verdict


def main():
    step_map = example1_map()
    plan = SamplePlan.grid(9)   # grid step 0.5 on [0, 4]

    print("== the step function: nonexpansive? ==")
    v = show(check_nonexpansive(step_map, plan))

    print("\nre-evaluating the witness from scratch:")
    w = v.witness
    lhs = dist(evaluate(step_map, w.x), evaluate(step_map, w.y), "l2")
    rhs = dist(w.x, w.y, "l2")
    print(f"  ||T{w.x} - T{w.y}|| = {lhs},  ||x - y|| = {rhs}  -> violation confirmed")

    print("\n== the half-displacement premise does not rescue it ==")
    show(check_condition_C(step_map, plan))

    print("\n== but the relaxed two-parameter condition holds ==")
    show(check_condition_B(step_map, BGammaMu(0.7, 0.35), SamplePlan.grid(201)))

    print("\n== it is also quasi-nonexpansive around its fixed point 0 ==")
    show(check_quasi_nonexpansive(step_map, plan))

    print("\n== gallery sweep: plain nonexpansiveness ==")
    for m in builtin_gallery():
        res = 17 if m.domain.dimension == 1 else 6
        v = check_nonexpansive(m, SamplePlan.grid(res))
        print(f"  {'pass' if v.passed else 'FAIL':<4}  {m.label}")


if __name__ == "__main__":
    main()
