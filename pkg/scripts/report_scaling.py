from __future__ import annotations

import argparse

from kmix.harness.selftest import doubling, space_report


def main() -> None:
    ap = argparse.ArgumentParser(
        description="Compact-index terminal counts for doubling n against n log^(k-1) n"
    )
    ap.add_argument("--start", type=int, default=2**10)
    ap.add_argument("--stop", type=int, default=2**16)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--sigma", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    frame = space_report(doubling(args.start, args.stop), args.k, args.sigma, args.seed)
    print(frame.to_string(index=False))

    # each doubling should stay within a factor 2 of the model's growth
    steps = (frame["growth"] / frame["model_growth"]).dropna()
    off = steps[(steps > 2) | (steps < 0.5)]
    if off.empty:
        print(f"\nall {len(steps)} doublings within a factor 2 of the model")
    else:
        print(f"\n{len(off)} of {len(steps)} doublings outside a factor 2 of the model")


if __name__ == "__main__":
    main()
