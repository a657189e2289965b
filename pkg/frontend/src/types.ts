/** Payload shapes of the read-only analytics API. */

export interface WindowOption {
  label: string;
  window_len: number;
}

export interface Capabilities {
  version: string;
  windows: WindowOption[];
  modes: string[];
  languages: string[];
  stimuli: string[];
  plane: { width: number; height: number };
  participant_count: number;
}

export interface ParticipantSummary {
  id: number;
  languages: string[];
  stimuli: string[];
  expertise: string | null;
  correctness: Record<string, boolean | null>;
  metadata_missing: boolean;
}

export interface PathPayload {
  participant: number;
  vertices: [number, number][];
  knot_indices: number[];
  knot_times: number[];
  knot_count: number;
  path_length: number;
}

export interface ScanpathResponse {
  window: WindowOption;
  mode: string;
  stimulus: {
    name: string;
    language: string;
    key: string;
    width: number;
    height: number;
  };
  duration_s: number;
  self: PathPayload;
  benchmark: PathPayload | null;
}

export interface MetadataRecord {
  id: number;
  age: number | null;
  gender: string | null;
  english_level: string | null;
  visual_aid: string | null;
  makeup: string | null;
  mother_tongue: string | null;
  expertise: string | null;
  experiment_languages: Record<string, string>;
  trial_order: string[];
  time_programming_overall: string | null;
  time_programming_language: string | null;
  responses: Record<string, string>;
  correctness: Record<string, boolean>;
}

export interface MetadataResponse {
  id: number;
  missing: boolean;
  metadata: MetadataRecord | null;
}
