/** Pure render model: scanpath payloads -> SVG layer descriptions.
 *
 * Coordinates are server pixels inside the stimulus plane viewBox; the only
 * transform the browser applies is uniform viewport scaling.
 */
import type { PathPayload, ScanpathResponse } from "./types.js";
import type { ViewState } from "./state.js";

export const CURRENT_COLOR = "#2a9d8f"; // blue/green for the participant on screen
export const BENCHMARK_COLOR = "#ec4899"; // pink for the benchmark overlay
export const MARKER_RADIUS = 5;

export interface PathLayer {
  id: "self" | "benchmark";
  d: string;
  stroke: string;
  strokeWidth: number;
  markers: [number, number][];
  knotCount: number;
  pathLength: number;
}

export interface PlotModel {
  viewBox: string;
  stimulusUrl: string;
  densityUrl: string | null;
  layers: PathLayer[];
  pointCount: number;
}

export function svgPath(vertices: [number, number][]): string {
  if (vertices.length === 0) return "";
  const [first, ...rest] = vertices as [[number, number], ...[number, number][]];
  let d = `M ${first[0]} ${first[1]}`;
  for (const [x, y] of rest) d += ` L ${x} ${y}`;
  return d;
}

function layerFrom(id: "self" | "benchmark", payload: PathPayload, stroke: string): PathLayer {
  const markers = payload.knot_indices.map((i) => payload.vertices[i]!);
  return {
    id,
    d: svgPath(payload.vertices),
    stroke,
    strokeWidth: id === "benchmark" ? 2.5 : 2,
    markers,
    knotCount: payload.knot_count,
    pathLength: payload.path_length,
  };
}

export function buildPlotModel(state: ViewState, scanpath: ScanpathResponse): PlotModel {
  const stim = scanpath.stimulus;
  const layers: PathLayer[] = [];
  if (scanpath.benchmark && state.benchmarkVisible) {
    layers.push(layerFrom("benchmark", scanpath.benchmark, BENCHMARK_COLOR));
  }
  layers.push(layerFrom("self", scanpath.self, CURRENT_COLOR));
  const density = state.densityVisible
    ? `/api/density/${scanpath.self.participant}/${stim.name}?window=${encodeURIComponent(
        state.windowLabel,
      )}`
    : null;
  return {
    viewBox: `0 0 ${stim.width} ${stim.height}`,
    stimulusUrl: `/api/stimuli/${stim.key}/image`,
    densityUrl: density,
    layers,
    pointCount: scanpath.self.knot_count,
  };
}
