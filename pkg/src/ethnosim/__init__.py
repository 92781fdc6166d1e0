"""Turn-based grid-world simulation engine for agent societies with an
embedded human-controlled participant: world model, per-round action
scheduling, agent interiors (memory, emotion, goals), an event system,
measurement exports, and a deterministic mock decision backend for
reproducible experiments.
"""

from .actions import (
    ActionKind,
    ActionParseError,
    MoveAction,
    ReferentRegistry,
    StandardAction,
    count_words,
    parse_action,
    truncate_utterance,
)
from .affect import (
    VadLexicon,
    VadVector,
    default_lexicon,
    overall_emotion,
    score_vad,
    vad_to_words,
)
from .agents import AgentRecord, Demographics, Goals, render_cognition, update_interior
from .analytics import export_run, fit_linear
from .decision import (
    Backend,
    CannedBackend,
    DecisionRequest,
    DecisionResponse,
    MockBackend,
    RemoteBackend,
    RemoteConfig,
    assemble_request,
    mock_decide,
)
from .engine import (
    ActionSubmission,
    EngineConfig,
    Perception,
    RoundReport,
    Simulation,
    SubmissionError,
    VisibleAgent,
    VisibleObject,
)
from .events import (
    Activation,
    ActionFact,
    EventOutcome,
    EventSpec,
    FiredEvent,
    TargetSelector,
    resolve_chain,
)
from .grid import chebyshev, compute_path, line_of_sight, supercover_line, visible_cells
from .memory import (
    LongTermMemoryEntry,
    ObjectMemory,
    SeededProjectionEmbedder,
    WorkingMemory,
    cosine_similarity,
    push_working_memory,
    retrieve_memories,
)
from .population import (
    GroupSpec,
    PopulationError,
    RelationshipSeed,
    roster_census,
    sample_population,
)
from .runlog import RunLog, canonical_json, first_divergence, record_digest
from .scenario import (
    QuestionnaireItem,
    Scenario,
    ScenarioError,
    build_simulation,
    load_scenario,
)
from .session import ReplayReport, Session, SessionError, SessionStore, replay_records
from .stats import (
    DegenerateDataError,
    StatResult,
    cohens_d,
    paired_t_test,
    studentized_range_sf,
    tukey_hsd,
    two_way_anova,
)
from .world import (
    CELL_SCALE_FEET,
    Coord,
    EffectTarget,
    EffectVerb,
    GridCell,
    MapError,
    RegionArea,
    StateEffect,
    Texture,
    TextureCategory,
    Violation,
    WorldMap,
    WorldObject,
    apply_state_effect,
    dump_map,
    load_map,
    region_of,
    validate_map,
)

__version__ = "0.1.0"
