#!/usr/bin/env python3
"""Street-environment comparison pipeline.

Runs the same ten-resident street under two planting conditions (bare
vacant lot vs community garden), administers the three-item 7-point
questionnaire (distrust, exploitation, indifference) to every resident,
exports both runs, and compares the per-agent scores: paired t-test and
Cohen's d (with bootstrap CI) per item.

Usage: python3 scripts/run_study1.py [--rounds N] [--seed N] [--out DIR]
"""

from __future__ import annotations

import argparse
import sys
import time
from importlib import resources
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ethnosim.session import Session
from ethnosim.stats import DegenerateDataError, cohens_d, paired_t_test

VARIANTS = ("study1_low_veg", "study1_high_veg")


def scenario_path(name: str) -> str:
    return str(resources.files("ethnosim") / "scenarios" / f"{name}.json")


def run_variant(name: str, rounds: int, seed: int, out_dir: Path) -> Session:
    session = Session.create(scenario_path(name), backend="mock", seed=seed)
    session.run_until(rounds)
    for agent_id in sorted(session.sim.agents):
        for item in session.scenario.questionnaire:
            session.questionnaire(agent_id, item)
    session.export(out_dir / name)
    return session


def scores_by_item(session: Session) -> dict[str, dict[str, int]]:
    out: dict[str, dict[str, int]] = {}
    for m in session.measurements:
        if m.get("kind") == "questionnaire":
            out.setdefault(m["item"], {})[m["agent"]] = m["answer"]
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rounds", type=int, default=15)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", default="runs/study1")
    args = parser.parse_args()

    out_dir = Path(args.out)
    t0 = time.perf_counter()
    sessions = {
        name: run_variant(name, args.rounds, args.seed, out_dir) for name in VARIANTS
    }
    low, high = (scores_by_item(sessions[name]) for name in VARIANTS)

    print(f"\n== environment comparison after {args.rounds} rounds "
          f"(seed {args.seed}, n=10 paired by resident) ==")
    for item_id in ("distrust", "exploitation", "indifference"):
        agents = sorted(set(low[item_id]) & set(high[item_id]))
        xs = [float(low[item_id][a]) for a in agents]
        ys = [float(high[item_id][a]) for a in agents]
        mean_low = sum(xs) / len(xs)
        mean_high = sum(ys) / len(ys)
        line = (
            f"  {item_id:13s} low={mean_low:4.2f} high={mean_high:4.2f} "
            f"diff={mean_high - mean_low:+5.2f}"
        )
        try:
            t = paired_t_test(xs, ys)
            line += f"  t({t.df:.0f})={t.statistic:+.3f} p={t.p_value:.4f}"
        except DegenerateDataError as exc:
            line += f"  paired t: degenerate ({exc})"
        try:
            d = cohens_d(ys, xs, seed=args.seed)
            lo, hi_ci, level = d.ci
            line += f"  d={d.statistic:+.3f} [{lo:+.2f}, {hi_ci:+.2f}]"
        except DegenerateDataError as exc:
            line += f"  d: degenerate ({exc})"
        print(line)

    print(f"\nexports under {out_dir}/ — done in {time.perf_counter() - t0:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
