"""Decision plumbing: request assembly carries only agent-visible
state, the mock backend is a pure deterministic function, canned
replies replay, and the remote adapter parses/retries without a
network."""

from __future__ import annotations

import pytest

from conftest import furniture, make_agent, make_sim, map_doc
from ethnosim.actions import ActionParseError, parse_action
from ethnosim.memory import LongTermMemoryEntry
from ethnosim.decision import (
    CannedBackend,
    MockBackend,
    RemoteBackend,
    RemoteConfig,
    assemble_request,
    parse_remote_reply,
    render_prompt,
)


def sim_with_two_agents():
    doc = map_doc(
        12,
        8,
        regions=[
            {"name": "West Yard", "description": "w", "cells": [[1, 1], [2, 1], [1, 2]]},
            {"name": "East Yard", "description": "e", "cells": [[9, 5], [10, 5]]},
        ],
        objects=[furniture("bench-1", "Bench", 2, 2)],
    )
    ada = make_agent("ada", "Ada")
    bo = make_agent("bo", "Bo")
    sim = make_sim(doc, [])
    sim.add_agent(ada, at=(1, 1))
    sim.add_agent(bo, at=(2, 1))
    sim.commit_genesis()
    return sim


def request_for(sim, agent_id):
    agent = sim.agents[agent_id]
    return assemble_request(sim, agent, sim.build_perception(agent_id))


def test_request_contains_only_visible_referents():
    sim = sim_with_two_agents()
    req = request_for(sim, "ada")
    assert req.agent_id == "ada"
    assert {va.id for va in req.perception.visible_agents} == {"bo"}
    assert req.current_region == "West Yard"
    # Every region is static map knowledge; agents and objects enter
    # only via perception.
    assert {name for name, _ in req.region_directory} == {"West Yard", "East Yard"}
    assert req.referents.agent("Bo") == "bo"
    assert req.referents.object("Bench") == "bench-1"


def test_request_recall_is_bounded_by_k():
    sim = sim_with_two_agents()
    agent = sim.agents["ada"]
    for i in range(12):
        agent.ltm.append(
            LongTermMemoryEntry(
                round=i,
                cognition_text=f"thought {i}",
                action_text="use Bench",
                embedding=sim.embedder.embed(f"thought {i}"),
            )
        )
    req = request_for(sim, "ada")
    assert len(req.recalled) == sim.config.retrieval_k


def test_mock_decide_is_pure_and_seed_sensitive():
    sim = sim_with_two_agents()
    req = request_for(sim, "ada")
    a = MockBackend(seed=0).decide(req)
    b = MockBackend(seed=0).decide(req)
    assert a == b
    texts = {MockBackend(seed=s).decide(req).action_text for s in range(12)}
    assert len(texts) > 1  # seeds actually steer the choice


def test_mock_actions_always_parse():
    sim = sim_with_two_agents()
    backend = MockBackend(seed=3)
    for round_index in range(8):
        sim.round_index = round_index
        for agent_id in ("ada", "bo"):
            req = request_for(sim, agent_id)
            resp = backend.decide(req)
            if resp is None:
                continue
            act = parse_action(resp.action_text, req.referents)
            assert act is not None
            assert resp.new_cognition
            assert resp.new_short_term_goal


def test_mock_idles_when_no_options():
    doc = map_doc(4, 4)  # no regions, no objects
    sim = make_sim(doc, [make_agent("solo")])
    req = request_for(sim, "solo")
    assert MockBackend(seed=0).decide(req) is None


def test_mock_rating_is_deterministic_and_in_range():
    sim = sim_with_two_agents()
    req = request_for(sim, "ada")
    backend = MockBackend(seed=1)
    vals = [backend.answer_rating(req, "How safe do you feel?", 1, 7) for _ in range(3)]
    assert len(set(vals)) == 1
    assert 1 <= vals[0] <= 7


def test_mock_interview_reflects_interior():
    sim = sim_with_two_agents()
    req = request_for(sim, "ada")
    answer = MockBackend(seed=1).interview(req, "How are you?")
    assert "West Yard" in answer
    assert req.short_term_goal in answer


def test_mock_impressions_are_stable_per_pair():
    backend = MockBackend(seed=5)
    a = backend.describe_impression("ada", "bo", "Bo")
    b = backend.describe_impression("ada", "bo", "Bo")
    assert a == b and "Bo" in a


def test_canned_backend_replays_and_idles():
    backend = CannedBackend(
        {
            "0:ada": {"action_text": "use Bench", "new_cognition": "Sitting."},
            "rating:ada:prompt-x": 6,
            "interview:ada": "All well.",
        }
    )
    sim = sim_with_two_agents()
    req = request_for(sim, "ada")
    resp = backend.decide(req)
    assert resp.action_text == "use Bench"
    assert backend.decide(request_for(sim, "bo")) is None
    assert backend.answer_rating(req, "prompt-x", 1, 7) == 6
    assert backend.interview(req, "q") == "All well."


def test_remote_config_from_env_never_raises(monkeypatch):
    monkeypatch.delenv("MODEL_BASE_URL", raising=False)
    monkeypatch.delenv("MODEL_API_KEY", raising=False)
    cfg = RemoteConfig.from_env()
    assert cfg.base_url == "" and cfg.api_key == ""
    monkeypatch.setenv("MODEL_BASE_URL", "https://example.invalid/v1")
    assert RemoteConfig.from_env().base_url == "https://example.invalid/v1"
    assert RemoteConfig.from_env(model="other").model == "other"


def test_parse_remote_reply_happy_and_error():
    resp = parse_remote_reply(
        "ACTION: go to West Yard\nGOAL: wander\nCOGNITION: Feeling calm."
    )
    assert resp.action_text == "go to West Yard"
    assert resp.new_short_term_goal == "wander"
    with pytest.raises(ActionParseError):
        parse_remote_reply("no structured lines here")


def test_render_prompt_mentions_perception_and_memories():
    sim = sim_with_two_agents()
    req = request_for(sim, "ada")
    prompt = render_prompt(req)
    assert "Bo" in prompt and "Bench" in prompt
    assert "Long-term:" in prompt and "== Task ==" in prompt


def test_remote_backend_uses_injected_transport_and_retries():
    calls = []

    def transport(url, headers, payload, timeout):
        calls.append(payload)
        if len(calls) == 1:
            content = "gibberish with no action line"
        else:
            content = "ACTION: go to West Yard\nGOAL: g\nCOGNITION: Calm walk."
        return {
            "choices": [{"message": {"content": content}}],
            "usage": {"prompt_tokens": 10, "completion_tokens": 5},
        }

    backend = RemoteBackend(
        config=RemoteConfig(base_url="https://example.invalid/v1", api_key="k"),
        transport=transport,
    )
    sim = sim_with_two_agents()
    resp = backend.decide(request_for(sim, "ada"))
    assert resp.action_text == "go to West Yard"
    assert backend.stats["retries"] == 1
    assert backend.stats["prompt_tokens"] == 20
    assert backend.stats["cost_usd"] > 0
