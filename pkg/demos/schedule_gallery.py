"""Blend-weight schedules and what the tail-window report says about them.

Run:  python3 demos/schedule_gallery.py

The multi-map engines draw a value alpha_n in [0, 1/2] from a schedule each
step. The compliance report checks three tail properties over the last
quarter of a horizon: the values must come back near zero (liminf proxy),
must keep reaching a positive level (limsup proxy), and must change slowly
(increment proxy). Constant schedules fail the first, decaying schedules
fail the second; the tent schedule — linear ramps up and down over blocks
of geometrically growing length — satisfies all three.
"""
from fixedlab import (
    ConstantSchedule,
    DEFAULT_TENT,
    DecaySchedule,
    TentSchedule,
    verify_schedule,
)


def report(label, schedule, horizon):
    rep = verify_schedule(schedule, horizon)
    print(f"== {label} @ horizon {horizon} ==")
    print(f"  liminf proxy {rep.liminf_proxy:.6g}   "
          f"limsup proxy {rep.limsup_proxy:.6g}   "
          f"increment proxy {rep.diff_proxy:.6g}")
    if rep.compliant:
        print("  compliant")
    for flag in rep.flags():
        print(f"  flag: {flag}")
    print()


def main():
    small = TentSchedule(peak=0.25, first_block_length=4, growth=2.0)
    print("tent(peak=1/4, first block 4, growth 2), first three blocks:")
    n = 0
    for length in (4, 8, 16):
        vals = ", ".join(f"{small.alpha(n + t):g}" for t in range(length))
        print(f"  block of {length:2d}: {vals}")
        n += length
    print()

    report("constant 0.1", ConstantSchedule(0.1), 10000)
    report("decay 0.5/(n+1)", DecaySchedule(0.5, rate=1.0), 10000)
    report("small tent", small, 10000)
    report("default tent (first block 343, growth 1.6)", DEFAULT_TENT, 100000)

    print("the default tent at a 10**5 horizon sits inside one long block,")
    print("so its limsup proxy equals the peak exactly while the increment")
    print("proxy shrinks with the block length.")


if __name__ == "__main__":
    main()
