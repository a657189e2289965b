/** Typed API client with latest-wins cancellation per request channel. */
import type {
  Capabilities,
  MetadataResponse,
  ParticipantSummary,
  ScanpathResponse,
} from "./types.js";

const inflight = new Map<string, AbortController>();

async function fetchJson<T>(channel: string, url: string): Promise<T> {
  inflight.get(channel)?.abort();
  const controller = new AbortController();
  inflight.set(channel, controller);
  const response = await fetch(url, { signal: controller.signal });
  if (!response.ok) {
    throw new Error(`${url} -> ${response.status}`);
  }
  return (await response.json()) as T;
}

export const api = {
  capabilities: () => fetchJson<Capabilities>("caps", "/api/capabilities"),
  participants: (language: string | null) =>
    fetchJson<ParticipantSummary[]>(
      "participants",
      language ? `/api/participants?language=${encodeURIComponent(language)}` : "/api/participants",
    ),
  randomParticipant: (language: string | null) =>
    fetchJson<{ id: number }>(
      "random",
      language
        ? `/api/participants/random?language=${encodeURIComponent(language)}`
        : "/api/participants/random",
    ),
  scanpath: (id: number, stimulus: string, query: string) =>
    fetchJson<ScanpathResponse>("scanpath", `/api/scanpath/${id}/${stimulus}?${query}`),
  metadata: (id: number) => fetchJson<MetadataResponse>("metadata", `/api/metadata/${id}`),
};
