/** Dashboard view state and its pure transitions.
 *
 * Every option a control offers comes from the server's capability and
 * participant listings; transitions reject values outside those lists, so
 * the state can never drift away from what the backend can serve.
 */
import type { Capabilities, ParticipantSummary } from "./types.js";

export interface ViewState {
  participantId: number | null;
  stimulus: string;
  language: string | null; // participant list filter, null = all
  windowLabel: string;
  lineMode: string;
  benchmarkId: number | null;
  benchmarkVisible: boolean;
  densityVisible: boolean;
}

export function initialState(caps: Capabilities, participants: ParticipantSummary[]): ViewState {
  const first = participants[0];
  return {
    participantId: first ? first.id : null,
    stimulus: caps.stimuli[0] ?? "rectangle",
    language: null,
    windowLabel: caps.windows[0]?.label ?? "50",
    lineMode: caps.modes[0] ?? "linear",
    benchmarkId: null,
    benchmarkVisible: false,
    densityVisible: false,
  };
}

/** Keep the selection valid against the currently filtered participant list. */
export function selectParticipant(
  state: ViewState,
  id: number,
  available: ParticipantSummary[],
): ViewState {
  const ids = available.map((p) => p.id);
  const participantId = ids.includes(id) ? id : (ids[0] ?? null);
  return { ...state, participantId };
}

export function selectLanguage(
  state: ViewState,
  language: string | null,
  caps: Capabilities,
  filtered: ParticipantSummary[],
): ViewState {
  if (language !== null && !caps.languages.includes(language)) return state;
  const next = { ...state, language };
  const ids = filtered.map((p) => p.id);
  if (next.participantId === null || !ids.includes(next.participantId)) {
    next.participantId = ids[0] ?? null;
  }
  if (next.benchmarkId !== null && !ids.includes(next.benchmarkId)) {
    next.benchmarkId = null;
    next.benchmarkVisible = false;
  }
  return next;
}

export function selectStimulus(state: ViewState, stimulus: string, caps: Capabilities): ViewState {
  if (!caps.stimuli.includes(stimulus)) return state;
  return { ...state, stimulus };
}

export function setWindow(state: ViewState, label: string, caps: Capabilities): ViewState {
  if (!caps.windows.some((w) => w.label === label)) return state;
  return { ...state, windowLabel: label };
}

export function setLineMode(state: ViewState, mode: string, caps: Capabilities): ViewState {
  if (!caps.modes.includes(mode)) return state;
  return { ...state, lineMode: mode };
}

export function setBenchmark(state: ViewState, id: number | null): ViewState {
  if (id === null) {
    return { ...state, benchmarkId: null, benchmarkVisible: false };
  }
  return { ...state, benchmarkId: id };
}

/** Involution when a benchmark is set; a no-op (with no id) otherwise. */
export function toggleBenchmark(state: ViewState): ViewState {
  if (state.benchmarkId === null) return state;
  return { ...state, benchmarkVisible: !state.benchmarkVisible };
}

export function toggleDensity(state: ViewState): ViewState {
  return { ...state, densityVisible: !state.densityVisible };
}

/** Query string for the scanpath request implied by a view state. */
export function scanpathQuery(state: ViewState): string {
  const params = new URLSearchParams({
    window: state.windowLabel,
    mode: state.lineMode,
  });
  if (state.benchmarkVisible && state.benchmarkId !== null) {
    params.set("benchmark", String(state.benchmarkId));
  }
  return params.toString();
}
