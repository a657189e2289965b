import { describe, expect, it } from "vitest";

import { UNKNOWN, buildCards } from "../src/cards.js";
import type { MetadataResponse } from "../src/types.js";

const full: MetadataResponse = {
  id: 7,
  missing: false,
  metadata: {
    id: 7,
    age: 29,
    gender: "female",
    english_level: "high",
    visual_aid: "glasses",
    makeup: "no",
    mother_tongue: "finnish",
    expertise: "medium",
    experiment_languages: { rectangle: "java", vehicle: "java" },
    trial_order: ["rectangle", "vehicle"],
    time_programming_overall: "8 years",
    time_programming_language: "3 years",
    responses: { rectangle: "A", vehicle: "B" },
    correctness: { rectangle: true, vehicle: false },
  },
};

const sparse: MetadataResponse = {
  id: 9,
  missing: false,
  metadata: {
    id: 9,
    age: null,
    gender: null,
    english_level: null,
    visual_aid: null,
    makeup: null,
    mother_tongue: null,
    expertise: null,
    experiment_languages: {},
    trial_order: [],
    time_programming_overall: null,
    time_programming_language: null,
    responses: {},
    correctness: {},
  },
};

const FIELD_LABELS = [
  "id", "age", "gender", "english level", "visual aid", "makeup",
  "mother tongue", "expertise", "experiment languages", "order",
  "time programming", "time in language", "responses", "result",
];

describe("metadata cards (S2)", () => {
  it("shows every record field", () => {
    const rows = buildCards(full);
    expect(rows.map((r) => r.label)).toEqual(FIELD_LABELS);
    const byLabel = Object.fromEntries(rows.map((r) => [r.label, r.value]));
    expect(byLabel["age"]).toBe("29");
    expect(byLabel["result"]).toBe("rectangle: correct, vehicle: incorrect");
    expect(byLabel["order"]).toBe("rectangle → vehicle");
  });

  it("renders unknowns explicitly, never blank", () => {
    const rows = buildCards(sparse);
    expect(rows.map((r) => r.label)).toEqual(FIELD_LABELS);
    for (const row of rows) {
      expect(row.value.length).toBeGreaterThan(0);
      if (row.label !== "id") {
        expect(row.value).toContain(UNKNOWN);
      }
    }
  });

  it("marks participants without any metadata record", () => {
    const rows = buildCards({ id: 3, missing: true, metadata: null });
    expect(rows[0]).toEqual({ label: "id", value: "3" });
    expect(rows[1]!.value).toContain("missing");
  });
});
