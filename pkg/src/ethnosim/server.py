"""Researcher console endpoint: newline-delimited JSON over TCP.

Every message, both directions, is one JSON object per line::

    {"type": <message type>, "session": <id or null>,
     "payload": {...}, "seq": <client-chosen integer>}

Replies echo the request's ``type`` and ``seq``; failures come back as
``{"type": "error", payload: {"message", "request_type"}}`` with the
same ``seq``. Message types:

    create_session  attach  detach  perception  submit  free_action
    interview  questionnaire  run_control  event_inject  state_snapshot
    error (server -> client only)
"""

from __future__ import annotations

import asyncio
import json
from pathlib import Path

from .actions import ActionParseError, MoveAction, parse_action
from .engine import Perception, SubmissionError
from .scenario import QuestionnaireItem, _event_from
from .session import Session, SessionError, SessionStore

PROTOCOL_TYPES = (
    "create_session",
    "attach",
    "detach",
    "perception",
    "submit",
    "free_action",
    "interview",
    "questionnaire",
    "run_control",
    "event_inject",
    "state_snapshot",
    "error",
)


class ProtocolError(Exception):
    pass


def _perception_payload(session: Session, agent_id: str, perception: Perception) -> dict:
    agent = session.sim.agents[agent_id]
    return {
        "agent": agent_id,
        "round": perception.round_index,
        "position": list(agent.position),
        "region": session.sim.region_at(agent.position),
        "visible_cells": sorted(map(list, perception.visible_cells)),
        "visible_agents": [
            {
                "id": v.id,
                "name": v.name,
                "x": v.coord[0],
                "y": v.coord[1],
                "description": v.description,
            }
            for v in perception.visible_agents
        ],
        "visible_objects": [
            {
                "id": v.id,
                "name": v.name,
                "kind": v.kind,
                "states": list(v.states),
                "x": v.coord[0],
                "y": v.coord[1],
            }
            for v in perception.visible_objects
        ],
        "heard_chat": list(perception.heard_chat),
        "own_failures": list(perception.own_failures),
        "own_state_changes": list(perception.own_state_changes),
    }


class ConsoleServer:
    """One instance per process; sessions are shared across
    connections, attachments are per connection."""

    def __init__(self, sessions_dir: str | Path, host: str = "127.0.0.1", port: int = 0):
        self.store = SessionStore(sessions_dir)
        self.host = host
        self.port = port
        self.sessions: dict[str, Session] = {}
        self._server: asyncio.AbstractServer | None = None

    # -- session plumbing --------------------------------------------------

    def _session(self, session_id: str | None) -> Session:
        if not session_id:
            raise ProtocolError("message carries no session id")
        if session_id in self.sessions:
            return self.sessions[session_id]
        session = self.store.open(session_id)
        self.sessions[session.id] = session
        return session

    def _parse_submission(self, session: Session, agent_id: str, text: str):
        if agent_id not in session.sim.agents:
            raise ProtocolError(f"unknown agent {agent_id!r}")
        parsed = parse_action(text, session.sim.registry)
        if isinstance(parsed, MoveAction):
            return parsed, None
        return None, parsed

    # -- handlers ------------------------------------------------------------

    def handle(self, message: dict, attachments: dict[str, str]) -> dict:
        mtype = message.get("type")
        payload = message.get("payload") or {}
        session_id = message.get("session")

        if mtype == "create_session":
            scenario = payload.get("scenario")
            if isinstance(scenario, str):
                scenario_source: str | dict = scenario
            elif isinstance(scenario, dict):
                scenario_source = scenario
            else:
                raise ProtocolError("create_session needs a scenario (path or document)")
            session = self.store.create(
                scenario_source,
                backend=payload.get("backend", "mock"),
                seed=int(payload.get("seed", 0)),
                replies_path=payload.get("replies"),
            )
            self.sessions[session.id] = session
            return {
                "session": session.id,
                "round": session.sim.round_index,
                "digest": session.sim.runlog.final_digest,
            }

        session = self._session(session_id)

        if mtype == "attach":
            agent_id = payload.get("agent")
            agent = session.sim.agents.get(agent_id)
            if agent is None:
                raise ProtocolError(f"unknown agent {agent_id!r}")
            agent.human_controlled = True
            attachments[session.id] = agent_id
            return {"agent": agent_id, "attached": True}

        if mtype == "detach":
            agent_id = attachments.pop(session.id, None)
            return {"agent": agent_id, "attached": False}

        if mtype == "perception":
            agent_id = payload.get("agent") or attachments.get(session.id)
            if agent_id not in session.sim.agents:
                raise ProtocolError(f"unknown agent {agent_id!r}")
            perception = session.sim.build_perception(agent_id)
            return _perception_payload(session, agent_id, perception)

        if mtype == "submit":
            agent_id = payload.get("agent") or attachments.get(session.id)
            movement, standard = self._parse_submission(
                session, agent_id, payload.get("text", "")
            )
            seq = session.sim.submit(
                agent_id, movement=movement, standard=standard, source="human"
            )
            return {"agent": agent_id, "receipt_seq": seq, "queued": True}

        if mtype == "free_action":
            agent_id = payload.get("agent") or attachments.get(session.id)
            movement, standard = self._parse_submission(
                session, agent_id, payload.get("text", "")
            )
            outcome = session.sim.submit_free(
                agent_id, movement=movement, standard=standard, source="human"
            )
            self.store.save(session)
            return {"agent": agent_id, "outcome": outcome}

        if mtype == "interview":
            agent_id = payload.get("agent")
            answer = session.interview(agent_id, payload.get("question", ""))
            self.store.save(session)
            return {
                "agent": agent_id,
                "answer": answer,
                "digest": session.sim.runlog.final_digest,
            }

        if mtype == "questionnaire":
            agent_id = payload.get("agent")
            item = QuestionnaireItem(
                id=payload.get("item", "adhoc"),
                prompt=payload.get("prompt", ""),
                low=int(payload.get("low", 1)),
                high=int(payload.get("high", 7)),
            )
            answer = session.questionnaire(agent_id, item, target=payload.get("target"))
            self.store.save(session)
            return {"agent": agent_id, "answer": answer}

        if mtype == "run_control":
            command = payload.get("command", "step")
            if command == "step":
                session.step()
            elif command == "run":
                session.run_until(int(payload.get("until", session.sim.round_index + 1)))
            else:
                raise ProtocolError(f"unknown run_control command {command!r}")
            self.store.save(session)
            return {
                "round": session.sim.round_index,
                "digest": session.sim.runlog.final_digest,
            }

        if mtype == "event_inject":
            event_doc = payload.get("event")
            if not isinstance(event_doc, dict):
                raise ProtocolError("event_inject needs an event document")
            spec = _event_from(event_doc, "event_inject.event")
            session.sim.event_specs.append(spec)
            return {"event": spec.id, "injected": True}

        if mtype == "state_snapshot":
            return session.state_snapshot()

        raise ProtocolError(f"unknown message type {mtype!r}")

    # -- wire loop -------------------------------------------------------------

    async def _client_loop(
        self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter
    ) -> None:
        attachments: dict[str, str] = {}
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                reply = self._dispatch_line(line, attachments)
                writer.write((json.dumps(reply, ensure_ascii=False) + "\n").encode("utf-8"))
                await writer.drain()
        finally:
            writer.close()

    def _dispatch_line(self, line: bytes, attachments: dict[str, str]) -> dict:
        seq = None
        mtype = None
        session_id = None
        try:
            message = json.loads(line.decode("utf-8"))
            seq = message.get("seq")
            mtype = message.get("type")
            session_id = message.get("session")
            payload = self.handle(message, attachments)
            if mtype == "create_session":
                session_id = payload["session"]
            return {
                "type": mtype,
                "session": session_id,
                "payload": payload,
                "seq": seq,
            }
        except (
            ProtocolError,
            SessionError,
            SubmissionError,
            ActionParseError,
            json.JSONDecodeError,
            KeyError,
            ValueError,
        ) as exc:
            return {
                "type": "error",
                "session": session_id,
                "payload": {"message": str(exc), "request_type": mtype},
                "seq": seq,
            }

    async def start(self) -> tuple[str, int]:
        self._server = await asyncio.start_server(
            self._client_loop, host=self.host, port=self.port
        )
        sock = self._server.sockets[0]
        addr = sock.getsockname()
        self.port = addr[1]
        return addr[0], addr[1]

    async def serve_forever(self) -> None:
        if self._server is None:
            await self.start()
        async with self._server:
            await self._server.serve_forever()


def serve(sessions_dir: str | Path, host: str = "127.0.0.1", port: int = 7465) -> None:
    """Blocking entry point used by the command line."""
    server = ConsoleServer(sessions_dir, host=host, port=port)

    async def _main() -> None:
        bound_host, bound_port = await server.start()
        print(f"listening on {bound_host}:{bound_port}", flush=True)
        await server.serve_forever()

    asyncio.run(_main())
