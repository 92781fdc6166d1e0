"""Roster generation: per-group demographic sampling (probabilistic or
exact-count marginals), identity rendering, and relationship seeding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .agents import AgentRecord, Demographics, Goals
from .memory import WorkingMemory

STANDARD_VARIABLES = ("gender", "age_band", "education", "occupation")

DEFAULT_SELF_AWARENESS = (
    "You are {name}, {age_band}, {gender}, {education} education, "
    "working as {occupation}. You belong to the {group} group. {stance}"
)

DEFAULT_SHORT_TERM_GOAL = "Get oriented and observe the surroundings."

_ATTITUDE_WORDING = {
    "positive": "{name} is someone I like and trust.",
    "neutral": "{name} is an acquaintance I feel neutral about.",
    "negative": "{name} is someone I distrust and would rather avoid.",
}


class PopulationError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """One demographic group.

    Exactly one of `distributions` (per-variable category→probability)
    or `exact_counts` (per-variable category→count, counts summing to
    `size`) drives each variable; variables present in neither fall back
    to free-text defaults.
    """

    name: str
    size: int
    stance_label: str = ""
    long_term_goal_template: str = ""
    self_awareness_template: str = DEFAULT_SELF_AWARENESS
    short_term_goal_template: str = DEFAULT_SHORT_TERM_GOAL
    initial_items: tuple[str, ...] = ()
    initial_region: str | None = None
    distributions: dict[str, dict[str, float]] = field(default_factory=dict)
    exact_counts: dict[str, dict[str, int]] = field(default_factory=dict)
    names: tuple[str, ...] = ()
    occupations: tuple[str, ...] = ()
    roles: tuple[str, ...] = ()

    def __post_init__(self):
        if self.size <= 0:
            raise PopulationError(f"group {self.name!r}: size must be positive")
        for var, table in self.distributions.items():
            if not table:
                raise PopulationError(f"group {self.name!r}: empty distribution for {var!r}")
            total = sum(table.values())
            if abs(total - 1.0) > 1e-9:
                raise PopulationError(
                    f"group {self.name!r}: {var!r} probabilities sum to {total}, not 1"
                )
        for var, counts in self.exact_counts.items():
            if any(c < 0 for c in counts.values()):
                raise PopulationError(f"group {self.name!r}: negative count in {var!r}")
            if sum(counts.values()) != self.size:
                raise PopulationError(
                    f"group {self.name!r}: {var!r} counts sum to "
                    f"{sum(counts.values())}, expected {self.size}"
                )


@dataclass(frozen=True)
class RelationshipSeed:
    """Initial attitude from one agent/group toward another, installed
    as an object-memory impression before round 0."""

    from_ref: str
    to_ref: str
    attitude: str

    def __post_init__(self):
        if self.attitude not in _ATTITUDE_WORDING:
            raise PopulationError(f"unknown attitude {self.attitude!r}")
        if self.from_ref == self.to_ref:
            raise PopulationError("relationship seeds must not be self-edges")


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")


def _draw_column(
    group: GroupSpec, var: str, rng: np.random.Generator
) -> list[str] | None:
    """The per-member category assignment for one variable, or None if
    the group does not constrain it."""
    if var in group.exact_counts:
        pool: list[str] = []
        for category, count in group.exact_counts[var].items():
            pool.extend([category] * count)
        rng.shuffle(pool)
        return pool
    if var in group.distributions:
        table = group.distributions[var]
        categories = list(table.keys())
        probs = np.array([table[c] for c in categories], dtype=float)
        probs = probs / probs.sum()
        idx = rng.choice(len(categories), size=group.size, p=probs)
        return [categories[i] for i in idx]
    return None


def sample_population(
    specs: list[GroupSpec],
    relationships: list[RelationshipSeed],
    seed: int,
    *,
    wm_capacity: int = 10,
) -> list[AgentRecord]:
    """Deterministic roster generation: exact group sizes, per-variable
    draws, rendered identity text, and relationship-seeded impressions."""
    rng = np.random.default_rng(seed)
    roster: list[AgentRecord] = []
    seen_ids: set[str] = set()

    for group in specs:
        variables = list(
            dict.fromkeys(
                list(STANDARD_VARIABLES)
                + list(group.exact_counts)
                + list(group.distributions)
            )
        )
        columns = {var: _draw_column(group, var, rng) for var in variables}
        for i in range(group.size):
            if i < len(group.names):
                name = group.names[i]
            else:
                name = f"{group.name} {i + 1:02d}"
            agent_id = f"{_slug(name)}"
            if agent_id in seen_ids:
                agent_id = f"{agent_id}-{len(seen_ids)}"
            seen_ids.add(agent_id)

            values: dict[str, str] = {}
            for var in variables:
                column = columns[var]
                if column is not None:
                    values[var] = column[i]
            if "occupation" not in values:
                if group.occupations:
                    values["occupation"] = group.occupations[i % len(group.occupations)]
                else:
                    values["occupation"] = "resident"
            extra = tuple(
                sorted((k, v) for k, v in values.items() if k not in STANDARD_VARIABLES)
            )
            if i < len(group.roles):
                extra = extra + (("role", group.roles[i]),)
            profile = Demographics(
                gender=values.get("gender", ""),
                age_band=values.get("age_band", ""),
                education=values.get("education", ""),
                occupation=values["occupation"],
                extra=extra,
            )
            fields = dict(profile.as_dict())
            fields.update(
                name=name, group=group.name, stance=group.stance_label
            )
            self_awareness = group.self_awareness_template.format(**fields).strip()
            long_term = (group.long_term_goal_template or "Live a steady life.").format(
                **fields
            ).strip()
            short_term = group.short_term_goal_template.format(**fields).strip()
            roster.append(
                AgentRecord(
                    id=agent_id,
                    name=name,
                    group=group.name,
                    profile=profile,
                    self_awareness=self_awareness,
                    goals=Goals(long_term=long_term, short_term=short_term),
                    wm=WorkingMemory(capacity=wm_capacity),
                    inventory=list(group.initial_items),
                    spawn_region=group.initial_region,
                )
            )

    _install_relationships(roster, relationships)
    return roster


def _resolve_members(ref: str, roster: list[AgentRecord]) -> list[AgentRecord]:
    by_id = [a for a in roster if a.id == ref]
    if by_id:
        return by_id
    by_name = [a for a in roster if a.name == ref]
    if by_name:
        return by_name
    by_group = [a for a in roster if a.group == ref]
    if by_group:
        return by_group
    raise PopulationError(f"relationship ref {ref!r} matches no agent or group")


def _install_relationships(
    roster: list[AgentRecord], relationships: list[RelationshipSeed]
) -> None:
    for seed_spec in relationships:
        sources = _resolve_members(seed_spec.from_ref, roster)
        targets = _resolve_members(seed_spec.to_ref, roster)
        wording = _ATTITUDE_WORDING[seed_spec.attitude]
        for src in sources:
            for dst in targets:
                if src.id == dst.id:
                    continue
                src.om.remember(dst.id, wording.format(name=dst.name))


def roster_census(roster: list[AgentRecord]) -> dict:
    """Counts and percentages per variable per group.

    Shape: {"groups": [...], "total": N, "variables": {var: [
    {"category", "per_group": [...], "total", "percent"}...]}} with
    groups in roster order and categories in first-appearance order.
    """
    if not roster:
        return {"groups": [], "total": 0, "variables": {}}
    groups = list(dict.fromkeys(agent.group for agent in roster))
    variables = ("gender", "age_band", "education")
    out: dict = {"groups": groups, "total": len(roster), "variables": {}}
    for var in variables:
        categories = list(
            dict.fromkeys(getattr(agent.profile, var) for agent in roster)
        )
        rows = []
        for category in categories:
            per_group = [
                sum(
                    1
                    for agent in roster
                    if agent.group == group and getattr(agent.profile, var) == category
                )
                for group in groups
            ]
            total = sum(per_group)
            rows.append(
                {
                    "category": category,
                    "per_group": per_group,
                    "total": total,
                    "percent": round(100.0 * total / len(roster)),
                }
            )
        out["variables"][var] = rows
    return out


def render_census(census: dict) -> str:
    """Plain-text census table (variables x groups)."""
    lines = []
    header = ["variable", "category", *census["groups"], "total", "%"]
    lines.append("\t".join(header))
    for var, rows in census["variables"].items():
        for row in rows:
            lines.append(
                "\t".join(
                    [
                        var,
                        str(row["category"]),
                        *[str(c) for c in row["per_group"]],
                        str(row["total"]),
                        str(row["percent"]),
                    ]
                )
            )
    return "\n".join(lines)
