"""Print mean attack impact over replications for a set of scenario overrides.

    python3 scripts/calibrate_sim.py --attack fdff --reps 10 fdff_period=55
"""

import argparse
import statistics

from sdwsn_cusum.sim import ScenarioConfig, _parse_value, attack_impact, simulate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--attack", default="fdff")
    ap.add_argument("--nodes", type=int, default=100)
    ap.add_argument("--attackers-pct", type=float, default=20.0)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("overrides", nargs="*", help="key=value scenario overrides")
    args = ap.parse_args()
    extra = {k: _parse_value(v) for k, v in (o.split("=", 1) for o in args.overrides)}
    ratios, drops = [], []
    for seed in range(args.reps):
        cfg = ScenarioConfig(
            node_count=args.nodes,
            attacker_fraction=args.attackers_pct / 100.0,
            attack_kind=args.attack,
            seed=seed,
            **extra,
        )
        imp = attack_impact(simulate(cfg))
        ratios.append(imp.control_ratio)
        drops.append(imp.delivery_drop_points)
    print(
        f"{args.attack} {args.nodes} nodes {args.attackers_pct:g}% {extra}: "
        f"control ratio {statistics.mean(ratios):.2f} (min {min(ratios):.2f} max {max(ratios):.2f}), "
        f"delivery drop {statistics.mean(drops):.1f} pts (min {min(drops):.1f} max {max(drops):.1f})"
    )


if __name__ == "__main__":
    main()
