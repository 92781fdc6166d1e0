"""Session lifecycle around a Simulation: creation from a scenario
file, the run loop (including scheduled mid-run arrivals), measurement
calls that must never perturb the run (interviews, questionnaires),
export, persistence, and digest-verified replay.

On-disk layout, one directory per session::

    sessions/<id>/scenario.json      original scenario document
    sessions/<id>/meta.json          id, seed, backend, rounds, digest
    sessions/<id>/runlog.jsonl       chained round records
    sessions/<id>/measurements.json  interviews / questionnaire answers
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .actions import ActionKind, MoveAction, StandardAction
from .agents import AgentRecord, Demographics, Goals, update_interior
from .analytics import export_run
from .decision import (
    Backend,
    CannedBackend,
    MockBackend,
    RemoteBackend,
    RemoteConfig,
    assemble_request,
)
from .engine import Simulation
from .memory import WorkingMemory
from .population import RelationshipSeed, _slug
from .runlog import GENESIS_ROUND, RunLog
from .scenario import (
    QuestionnaireItem,
    Scenario,
    agent_from_seed,
    build_simulation,
    install_resolvable_relationships,
    load_scenario,
)

BACKENDS = ("mock", "canned", "remote")


class SessionError(Exception):
    pass


def make_backend(kind: str, seed: int, replies_path: str | Path | None = None) -> Backend:
    if kind == "mock":
        return MockBackend(seed=seed)
    if kind == "canned":
        if replies_path is not None:
            return CannedBackend.from_file(replies_path)
        return CannedBackend({})
    if kind == "remote":
        return RemoteBackend(RemoteConfig.from_env())
    raise SessionError(f"unknown backend {kind!r}; expected one of {BACKENDS}")


@dataclass
class ReplayReport:
    rounds_replayed: int
    divergence_round: int | None
    chain_corrupt_round: int | None

    @property
    def ok(self) -> bool:
        return self.divergence_round is None and self.chain_corrupt_round is None


class Session:
    def __init__(
        self,
        session_id: str,
        scenario_doc: dict,
        scenario: Scenario,
        sim: Simulation,
        backend_kind: str,
        seed: int,
        pending_relationships: list[RelationshipSeed],
        replies_path: str | None = None,
    ):
        self.id = session_id
        self.scenario_doc = scenario_doc
        self.scenario = scenario
        self.sim = sim
        self.backend_kind = backend_kind
        self.seed = seed
        self.backend = make_backend(backend_kind, seed, replies_path)
        self.replies_path = replies_path
        self.pending_relationships = pending_relationships
        self.measurements: list[dict] = []

    # ----- creation ------------------------------------------------------

    @classmethod
    def create(
        cls,
        scenario_source: str | Path | dict,
        backend: str = "mock",
        seed: int = 0,
        session_id: str | None = None,
        replies_path: str | None = None,
    ) -> "Session":
        if isinstance(scenario_source, dict):
            doc = scenario_source
        else:
            doc = json.loads(Path(scenario_source).read_text(encoding="utf-8"))
        scenario = load_scenario(doc)
        if backend not in BACKENDS:
            raise SessionError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
        sim, pending = build_simulation(scenario, seed)
        sid = session_id or f"{_slug(scenario.name)}-s{seed}"
        sim.commit_genesis(
            meta={
                "scenario": scenario.name,
                "seed": seed,
                "backend": backend,
                "session": sid,
            }
        )
        return cls(sid, doc, scenario, sim, backend, seed, pending, replies_path)

    # ----- run loop -------------------------------------------------------

    def _admit_arrivals(self) -> None:
        for arrival in self.scenario.arrivals:
            if arrival.round == self.sim.round_index:
                agent = agent_from_seed(
                    arrival.agent, wm_capacity=self.sim.config.wm_capacity
                )
                if agent.id in self.sim.agents:
                    continue  # already admitted (e.g. rebuilt by replay)
                self.sim.add_agent(agent)
                self.pending_relationships = install_resolvable_relationships(
                    list(self.sim.agents.values()), self.pending_relationships
                )

    def step(self) -> None:
        self._admit_arrivals()
        self.sim.step_all(self.backend)

    def run_until(self, target_round: int) -> int:
        """Advance to the given round index (exclusive upper bound on
        completed rounds); returns rounds executed."""
        executed = 0
        while self.sim.round_index < target_round:
            self.step()
            executed += 1
        return executed

    # ----- measurement (never perturbs the run) ---------------------------

    def interview(self, agent_id: str, question: str) -> str:
        """Out-of-band interview: reads a snapshot, stores the exchange
        outside the run log, leaves the digest chain untouched."""
        agent = self._agent(agent_id)
        request = assemble_request(self.sim, agent, self.sim.build_perception(agent_id))
        answer = self.backend.interview(request, question)
        self.measurements.append(
            {
                "kind": "interview",
                "round": self.sim.round_index,
                "agent": agent_id,
                "prompt": question,
                "answer": answer,
            }
        )
        return answer

    def questionnaire(
        self,
        agent_id: str,
        item: QuestionnaireItem,
        target: str | None = None,
    ) -> int:
        agent = self._agent(agent_id)
        request = assemble_request(self.sim, agent, self.sim.build_perception(agent_id))
        prompt = item.prompt if target is None else item.prompt.format(
            target=self._display_name(target)
        )
        answer = self.backend.answer_rating(request, prompt, item.low, item.high)
        self.measurements.append(
            {
                "kind": "questionnaire",
                "round": self.sim.round_index,
                "agent": agent_id,
                "item": item.id,
                "prompt": prompt,
                "answer": answer,
            }
        )
        if target is not None:
            agent.trust_ledger[target] = answer
            self.measurements.append(
                {
                    "kind": "trust",
                    "round": self.sim.round_index,
                    "agent": agent_id,
                    "target": target,
                    "answer": answer,
                }
            )
        return answer

    def _display_name(self, ref: str) -> str:
        if ref in self.sim.agents:
            return self.sim.agents[ref].name
        if ref in self.sim.objects:
            return self.sim.objects[ref].name
        return ref

    def _agent(self, agent_id: str) -> AgentRecord:
        agent = self.sim.agents.get(agent_id)
        if agent is None:
            raise SessionError(f"unknown agent {agent_id!r}")
        return agent

    # ----- snapshots -------------------------------------------------------

    def state_snapshot(self) -> dict:
        sim = self.sim
        return {
            "session": self.id,
            "round": sim.round_index,
            "width": sim.world.width,
            "height": sim.world.height,
            "digest": sim.runlog.final_digest,
            "agents": [
                {
                    "id": a.id,
                    "name": a.name,
                    "group": a.group,
                    "x": a.position[0],
                    "y": a.position[1],
                    "region": sim.region_at(a.position),
                    "emotion": list(a.emotion.as_tuple()),
                    "states": sorted(a.states),
                    "inventory": list(a.inventory),
                    "human": a.human_controlled,
                }
                for a in sorted(sim.agents.values(), key=lambda a: a.id)
            ],
            "objects": [
                {
                    "id": o.id,
                    "name": o.name,
                    "kind": o.kind.value,
                    "location": list(o.location) if o.placed else o.location,
                    "states": sorted(o.states),
                }
                for o in sorted(sim.objects.values(), key=lambda o: o.id)
            ],
            "regions": [
                {"name": r.name, "cells": sorted(map(list, r.cells))}
                for r in sim.world.regions
            ],
            "walls": sorted(map(list, sim.world.wall_coords)),
        }

    # ----- persistence ------------------------------------------------------

    def save(self, directory: str | Path) -> Path:
        root = Path(directory)
        root.mkdir(parents=True, exist_ok=True)
        (root / "scenario.json").write_text(
            json.dumps(self.scenario_doc, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        meta = {
            "id": self.id,
            "scenario_name": self.scenario.name,
            "seed": self.seed,
            "backend": self.backend_kind,
            "rounds_completed": self.sim.round_index,
            "final_digest": self.sim.runlog.final_digest,
        }
        if self.replies_path:
            meta["replies_path"] = str(self.replies_path)
        (root / "meta.json").write_text(
            json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        self.sim.runlog.save(root / "runlog.jsonl")
        (root / "measurements.json").write_text(
            json.dumps(self.measurements, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        return root

    @classmethod
    def load(cls, directory: str | Path) -> "Session":
        root = Path(directory)
        meta = json.loads((root / "meta.json").read_text(encoding="utf-8"))
        doc = json.loads((root / "scenario.json").read_text(encoding="utf-8"))
        recorded = RunLog.load(root / "runlog.jsonl")
        corrupt = recorded.verify_chain()
        if corrupt is not None:
            raise SessionError(f"run log digest chain broken at round {corrupt}")
        session, report = replay_records(doc, recorded, backend=meta["backend"])
        if not report.ok:
            raise SessionError(
                f"replay diverged from stored log at round {report.divergence_round}"
            )
        session.id = meta["id"]
        measurements_path = root / "measurements.json"
        if measurements_path.exists():
            session.measurements = json.loads(
                measurements_path.read_text(encoding="utf-8")
            )
        if meta.get("replies_path"):
            session.replies_path = meta["replies_path"]
            session.backend = make_backend(
                meta["backend"], meta["seed"], meta["replies_path"]
            )
        return session

    # ----- export ------------------------------------------------------------

    def export(self, out_dir: str | Path) -> dict:
        return export_run(
            out_dir,
            self.sim.world,
            self.sim.trajectory,
            self.sim.runlog.records,
            self.measurements,
            self.sim.runlog.final_digest,
        )


# ----- replay ------------------------------------------------------------


def _agent_from_spawn_delta(delta: dict, wm_capacity: int) -> AgentRecord:
    profile_doc = delta.get("profile", {})
    profile = Demographics(
        gender=profile_doc.get("gender", ""),
        age_band=profile_doc.get("age_band", ""),
        education=profile_doc.get("education", ""),
        occupation=profile_doc.get("occupation", ""),
        extra=tuple((k, v) for k, v in profile_doc.get("extra", ())),
    )
    return AgentRecord(
        id=delta["id"],
        name=delta["name"],
        group=delta["group"],
        profile=profile,
        self_awareness=delta.get("self_awareness", ""),
        goals=Goals(
            long_term=delta.get("long_term", ""),
            short_term=delta.get("short_term", ""),
        ),
        wm=WorkingMemory(capacity=wm_capacity),
        spawn_region=delta.get("spawn_region"),
        human_controlled=bool(delta.get("human", False)),
    )


def _movement_from(doc: dict) -> MoveAction:
    target = doc["target"]
    if isinstance(target, list):
        target = (int(target[0]), int(target[1]))
    return MoveAction(target=target)


def _standard_from(doc: dict) -> StandardAction:
    return StandardAction(
        kind=ActionKind(doc["kind"]),
        object_ref=doc.get("object"),
        target_ref=doc.get("target"),
        utterance=doc.get("utterance"),
        chat_peers=tuple(doc.get("peers", ())),
        preposition=doc.get("preposition"),
        text=doc.get("text", ""),
    )


def replay_records(
    scenario_source: str | Path | dict,
    recorded: RunLog,
    backend: str = "mock",
) -> tuple[Session, ReplayReport]:
    """Re-execute a recorded run from its scenario file, comparing the
    rebuilt digest chain round by round. Decisions are taken from the
    recorded submissions, so no decision backend is consulted."""
    corrupt = recorded.verify_chain()
    if corrupt is not None:
        return (
            Session.create(scenario_source, backend=backend, seed=0),
            ReplayReport(0, None, corrupt),
        )
    if not recorded.records or recorded.records[0].get("round") != GENESIS_ROUND:
        raise SessionError("run log has no genesis record")
    genesis = recorded.records[0]
    meta = genesis.get("meta", {})
    seed = int(meta.get("seed", 0))
    session = Session.create(
        scenario_source,
        backend=meta.get("backend", backend),
        seed=seed,
        session_id=meta.get("session"),
    )
    sim = session.sim
    if sim.runlog.records[0]["digest"] != genesis["digest"]:
        return session, ReplayReport(0, GENESIS_ROUND, None)

    rounds = 0
    for record in recorded.records[1:]:
        for delta in record.get("deltas", ()):
            if delta.get("kind") == "spawn" and delta["id"] not in sim.agents:
                agent = _agent_from_spawn_delta(delta, sim.config.wm_capacity)
                sim.add_agent(agent, at=(delta["at"][0], delta["at"][1]))
                session.pending_relationships = install_resolvable_relationships(
                    list(sim.agents.values()), session.pending_relationships
                )
        for sub in record.get("submissions", ()):
            agent_id = sub["agent"]
            movement = _movement_from(sub["move"]) if "move" in sub else None
            standard = _standard_from(sub["standard"]) if "standard" in sub else None
            decision = sub.get("decision")
            if decision is not None:
                agent = sim.agents[agent_id]
                if decision.get("short_term_goal"):
                    agent.goals.short_term = decision["short_term_goal"]
                update_interior(
                    agent,
                    decision.get("cognition") or "Carrying on.",
                    sim.lexicon,
                    round_index=sim.round_index,
                    action_text=decision.get("action_text", ""),
                    embedder=sim.embedder,
                )
            if "free" in sub:
                sim.submit_free(
                    agent_id,
                    movement=movement,
                    standard=standard,
                    source=sub.get("source", "human"),
                )
            else:
                sim.submit(
                    agent_id,
                    movement=movement,
                    standard=standard,
                    source=sub.get("source", "backend"),
                    decision=decision,
                )
        sim.resolve_round()
        rounds += 1
        rebuilt = sim.runlog.records[-1]
        if rebuilt["digest"] != record["digest"]:
            return session, ReplayReport(rounds, record.get("round"), None)
    return session, ReplayReport(rounds, None, None)


def replay_paths(
    scenario_path: str | Path, runlog_path: str | Path
) -> tuple[Session, ReplayReport]:
    return replay_records(scenario_path, RunLog.load(runlog_path))


# ----- session store -------------------------------------------------------


class SessionStore:
    """Directory of saved sessions keyed by id."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path_of(self, session_id: str) -> Path:
        return self.root / session_id

    def unique_id(self, base: str) -> str:
        if not self.path_of(base).exists():
            return base
        n = 2
        while self.path_of(f"{base}-{n}").exists():
            n += 1
        return f"{base}-{n}"

    def create(
        self,
        scenario_source: str | Path | dict,
        backend: str = "mock",
        seed: int = 0,
        replies_path: str | None = None,
    ) -> Session:
        session = Session.create(
            scenario_source, backend=backend, seed=seed, replies_path=replies_path
        )
        session.id = self.unique_id(session.id)
        session.save(self.path_of(session.id))
        return session

    def open(self, session_id: str) -> Session:
        directory = self.path_of(session_id)
        if not directory.exists():
            raise SessionError(f"no such session {session_id!r}")
        return Session.load(directory)

    def save(self, session: Session) -> Path:
        return session.save(self.path_of(session.id))

    def list_ids(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(p.name for p in self.root.iterdir() if (p / "meta.json").exists())
