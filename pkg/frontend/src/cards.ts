/** Metadata cards: every record field becomes a labeled row, unknowns "—". */
import type { MetadataResponse } from "./types.js";

export const UNKNOWN = "—";

export interface CardRow {
  label: string;
  value: string;
}

function show(value: string | number | null | undefined): string {
  if (value === null || value === undefined || value === "") return UNKNOWN;
  return String(value);
}

function perTrial(map: Record<string, unknown>, stimuli: string[]): string {
  if (stimuli.length === 0) return UNKNOWN;
  return stimuli
    .map((s) => {
      const v = map[s];
      const shown = v === undefined || v === null ? UNKNOWN : String(v);
      return `${s}: ${shown}`;
    })
    .join(", ");
}

export function buildCards(response: MetadataResponse): CardRow[] {
  const m = response.metadata;
  if (response.missing || m === null) {
    return [
      { label: "id", value: String(response.id) },
      { label: "metadata", value: "missing for this participant" },
    ];
  }
  const trialNames = Object.keys(m.experiment_languages).length
    ? Object.keys(m.experiment_languages).sort()
    : ["rectangle", "vehicle"];
  const correctness: Record<string, string> = {};
  for (const name of trialNames) {
    const v = m.correctness[name];
    correctness[name] = v === undefined ? UNKNOWN : v ? "correct" : "incorrect";
  }
  return [
    { label: "id", value: show(m.id) },
    { label: "age", value: show(m.age) },
    { label: "gender", value: show(m.gender) },
    { label: "english level", value: show(m.english_level) },
    { label: "visual aid", value: show(m.visual_aid) },
    { label: "makeup", value: show(m.makeup) },
    { label: "mother tongue", value: show(m.mother_tongue) },
    { label: "expertise", value: show(m.expertise) },
    { label: "experiment languages", value: perTrial(m.experiment_languages, trialNames) },
    { label: "order", value: m.trial_order.length ? m.trial_order.join(" → ") : UNKNOWN },
    { label: "time programming", value: show(m.time_programming_overall) },
    { label: "time in language", value: show(m.time_programming_language) },
    { label: "responses", value: perTrial(m.responses, trialNames) },
    { label: "result", value: perTrial(correctness, trialNames) },
  ];
}
