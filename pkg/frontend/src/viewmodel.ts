/**
 * Pure view model: a state snapshot in, drawing primitives out. Keeping
 * this free of sockets and DOM means a full reload rebuilds the identical
 * view from the same snapshot, and tests can assert on scenes directly.
 */

import type { SnapshotAgent, StateSnapshot } from "./protocol.js";

export type Texture = "ground" | "wall" | "furniture" | "item";

export interface CellSprite {
  x: number;
  y: number;
  texture: Texture;
}

export interface AgentToken {
  id: string;
  name: string;
  group: string;
  x: number;
  y: number;
  color: string;
  human: boolean;
}

export interface RegionOverlay {
  name: string;
  cells: [number, number][];
}

export interface MoodBadge {
  region: string;
  /** Mean overall emotion of the agents inside; null when empty. */
  value: number | null;
  /** Rendered text: the mean to two decimals, or an em dash when empty. */
  label: string;
}

export interface WorldScene {
  width: number;
  height: number;
  cells: CellSprite[];
  tokens: AgentToken[];
  overlays: RegionOverlay[];
  badges: MoodBadge[];
}

export interface Camera {
  panX: number;
  panY: number;
  zoom: number;
}

export type Selection =
  | { kind: "agent"; id: string }
  | { kind: "object"; id: string }
  | { kind: "region"; name: string }
  | { kind: "cell"; x: number; y: number }
  | null;

export type PanelId = "map" | "inspector" | "perception" | "composer" | "interview" | "charts";

/** Everything the shell needs to redraw itself after a reload. */
export interface ViewState {
  sessionId: string | null;
  controlledAgent: string | null;
  camera: Camera;
  selection: Selection;
  panels: PanelId[];
}

export function initialViewState(): ViewState {
  return {
    sessionId: null,
    controlledAgent: null,
    camera: { panX: 0, panY: 0, zoom: 1 },
    selection: null,
    panels: ["map", "inspector", "perception", "composer"],
  };
}

export const EMPTY_BADGE = "—";

const GROUP_PALETTE = [
  "#4e79a7",
  "#f28e2b",
  "#e15759",
  "#76b7b2",
  "#59a14f",
  "#edc948",
  "#b07aa1",
  "#ff9da7",
  "#9c755f",
  "#bab0ac",
] as const;

/** Stable group -> color assignment: groups sorted by name, palette cycled. */
export function groupColors(agents: SnapshotAgent[]): Map<string, string> {
  const groups = [...new Set(agents.map((a) => a.group))].sort();
  return new Map(
    groups.map((g, i) => [g, GROUP_PALETTE[i % GROUP_PALETTE.length]!]),
  );
}

function overallEmotion(emotion: [number, number, number]): number {
  return emotion[0] + emotion[1] + emotion[2];
}

/** Per-region ambient mood: mean overall emotion of the agents inside. */
export function moodBadges(snapshot: StateSnapshot): MoodBadge[] {
  return snapshot.regions.map((region) => {
    const values = snapshot.agents
      .filter((a) => a.region === region.name)
      .map((a) => overallEmotion(a.emotion));
    if (values.length === 0) {
      return { region: region.name, value: null, label: EMPTY_BADGE };
    }
    const mean = values.reduce((s, v) => s + v, 0) / values.length;
    return { region: region.name, value: mean, label: mean.toFixed(2) };
  });
}

/** Render one snapshot to drawing primitives, cells in row-major order. */
export function renderWorld(snapshot: StateSnapshot): WorldScene {
  const textures = new Map<string, Texture>();
  for (const [x, y] of snapshot.walls) textures.set(`${x},${y}`, "wall");
  for (const obj of snapshot.objects) {
    if (!Array.isArray(obj.location)) continue; // held items have no cell
    const key = `${obj.location[0]},${obj.location[1]}`;
    if (obj.kind === "furniture") {
      textures.set(key, "furniture");
    } else if (textures.get(key) === undefined) {
      textures.set(key, "item");
    }
  }

  const cells: CellSprite[] = [];
  for (let y = 0; y < snapshot.height; y++) {
    for (let x = 0; x < snapshot.width; x++) {
      cells.push({ x, y, texture: textures.get(`${x},${y}`) ?? "ground" });
    }
  }

  const colors = groupColors(snapshot.agents);
  const tokens: AgentToken[] = snapshot.agents.map((a) => ({
    id: a.id,
    name: a.name,
    group: a.group,
    x: a.x,
    y: a.y,
    color: colors.get(a.group)!,
    human: a.human,
  }));

  const overlays: RegionOverlay[] = snapshot.regions.map((r) => ({
    name: r.name,
    cells: r.cells,
  }));

  return {
    width: snapshot.width,
    height: snapshot.height,
    cells,
    tokens,
    overlays,
    badges: moodBadges(snapshot),
  };
}

/**
 * Per-agent movement history, one point per recorded snapshot. Recording
 * the genesis snapshot and then one per resolved round makes each
 * agent's polyline line up row-for-row with the exported positions
 * table.
 */
export class TrajectoryTrail {
  private readonly points = new Map<string, [number, number][]>();
  private lastRound: number | null = null;

  record(snapshot: StateSnapshot): void {
    if (snapshot.round === this.lastRound) return; // mid-round refresh
    this.lastRound = snapshot.round;
    for (const agent of snapshot.agents) {
      const line = this.points.get(agent.id) ?? [];
      line.push([agent.x, agent.y]);
      this.points.set(agent.id, line);
    }
  }

  polyline(agentId: string): [number, number][] {
    return [...(this.points.get(agentId) ?? [])];
  }
}
