/** DOM wiring: header menu, metadata cards, and the overlay plot. */
import { api } from "./api.js";
import { buildCards } from "./cards.js";
import { buildPlotModel, MARKER_RADIUS } from "./render.js";
import {
  ViewState,
  initialState,
  scanpathQuery,
  selectLanguage,
  selectParticipant,
  selectStimulus,
  setBenchmark,
  setLineMode,
  setWindow,
  toggleBenchmark,
  toggleDensity,
} from "./state.js";
import type { Capabilities, ParticipantSummary } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

class Dashboard {
  private caps!: Capabilities;
  private participants: ParticipantSummary[] = [];
  private state!: ViewState;

  async start(): Promise<void> {
    this.caps = await api.capabilities();
    this.participants = await api.participants(null);
    this.state = initialState(this.caps, this.participants);
    this.buildStaticControls();
    this.syncControls();
    this.bind();
    await this.refresh();
  }

  private buildStaticControls(): void {
    const langSel = el<HTMLSelectElement>("language-select");
    langSel.innerHTML = "";
    langSel.append(new Option("all languages", ""));
    for (const lang of this.caps.languages) langSel.append(new Option(lang, lang));

    const stimBox = el("stimulus-buttons");
    stimBox.innerHTML = "";
    for (const name of this.caps.stimuli) {
      const b = document.createElement("button");
      b.textContent = name;
      b.dataset.stimulus = name;
      stimBox.append(b);
    }

    const windowBox = el("window-options");
    windowBox.innerHTML = "";
    for (const w of this.caps.windows) {
      const b = document.createElement("button");
      b.textContent = w.label;
      b.dataset.window = w.label;
      windowBox.append(b);
    }

    const modeBox = el("mode-options");
    modeBox.innerHTML = "";
    for (const mode of this.caps.modes) {
      const b = document.createElement("button");
      b.textContent = mode;
      b.dataset.mode = mode;
      modeBox.append(b);
    }
  }

  private populateParticipantSelects(): void {
    const partSel = el<HTMLSelectElement>("participant-select");
    const benchSel = el<HTMLSelectElement>("benchmark-select");
    partSel.innerHTML = "";
    benchSel.innerHTML = "";
    benchSel.append(new Option("no benchmark", ""));
    for (const p of this.participants) {
      partSel.append(new Option(`participant ${p.id}`, String(p.id)));
      benchSel.append(new Option(`participant ${p.id}`, String(p.id)));
    }
  }

  private syncControls(): void {
    this.populateParticipantSelects();
    el<HTMLSelectElement>("language-select").value = this.state.language ?? "";
    el<HTMLSelectElement>("participant-select").value = String(this.state.participantId ?? "");
    el<HTMLSelectElement>("benchmark-select").value = String(this.state.benchmarkId ?? "");
    el<HTMLInputElement>("toggle-benchmark").checked = this.state.benchmarkVisible;
    el<HTMLInputElement>("toggle-density").checked = this.state.densityVisible;
    for (const b of document.querySelectorAll<HTMLButtonElement>("[data-stimulus]")) {
      b.classList.toggle("active", b.dataset.stimulus === this.state.stimulus);
    }
    for (const b of document.querySelectorAll<HTMLButtonElement>("[data-window]")) {
      b.classList.toggle("active", b.dataset.window === this.state.windowLabel);
    }
    for (const b of document.querySelectorAll<HTMLButtonElement>("[data-mode]")) {
      b.classList.toggle("active", b.dataset.mode === this.state.lineMode);
    }
  }

  private bind(): void {
    el<HTMLSelectElement>("language-select").addEventListener("change", (e) => {
      const value = (e.target as HTMLSelectElement).value || null;
      void this.changeLanguage(value);
    });
    el<HTMLSelectElement>("participant-select").addEventListener("change", (e) => {
      const id = Number((e.target as HTMLSelectElement).value);
      this.apply(selectParticipant(this.state, id, this.participants));
    });
    el<HTMLSelectElement>("benchmark-select").addEventListener("change", (e) => {
      const raw = (e.target as HTMLSelectElement).value;
      this.apply(setBenchmark(this.state, raw ? Number(raw) : null));
    });
    el<HTMLInputElement>("toggle-benchmark").addEventListener("change", () => {
      const next = toggleBenchmark(this.state);
      if (next === this.state) {
        this.notify("pick a benchmark participant first");
        el<HTMLInputElement>("toggle-benchmark").checked = false;
        return;
      }
      this.apply(next);
    });
    el<HTMLInputElement>("toggle-density").addEventListener("change", () => {
      this.apply(toggleDensity(this.state));
    });
    el("random-button").addEventListener("click", () => void this.pickRandom());
    el("stimulus-buttons").addEventListener("click", (e) => {
      const name = (e.target as HTMLElement).dataset?.stimulus;
      if (name) this.apply(selectStimulus(this.state, name, this.caps));
    });
    el("window-options").addEventListener("click", (e) => {
      const label = (e.target as HTMLElement).dataset?.window;
      if (label) this.apply(setWindow(this.state, label, this.caps));
    });
    el("mode-options").addEventListener("click", (e) => {
      const mode = (e.target as HTMLElement).dataset?.mode;
      if (mode) this.apply(setLineMode(this.state, mode, this.caps));
    });
  }

  private async changeLanguage(language: string | null): Promise<void> {
    try {
      const filtered = await api.participants(language);
      this.participants = filtered;
      this.apply(selectLanguage(this.state, language, this.caps, filtered));
    } catch (err) {
      this.notify(`language filter failed: ${String(err)}`);
    }
  }

  private async pickRandom(): Promise<void> {
    try {
      const pick = await api.randomParticipant(this.state.language);
      this.apply(selectParticipant(this.state, pick.id, this.participants));
    } catch {
      this.notify("no participant matches the current filter");
    }
  }

  private apply(next: ViewState): void {
    this.state = next;
    this.syncControls();
    void this.refresh();
  }

  private notify(message: string): void {
    const banner = el("error-banner");
    banner.textContent = message;
    banner.classList.add("visible");
    window.setTimeout(() => banner.classList.remove("visible"), 4000);
  }

  private async refresh(): Promise<void> {
    const pid = this.state.participantId;
    if (pid === null) {
      this.notify("no participant available for this filter");
      return;
    }
    try {
      const [scanpath, metadata] = await Promise.all([
        api.scanpath(pid, this.state.stimulus, scanpathQuery(this.state)),
        api.metadata(pid),
      ]);
      const model = buildPlotModel(this.state, scanpath);
      this.drawPlot(model);
      this.drawCards(buildCards(metadata));
      el("point-count").textContent =
        `${model.pointCount} points · path ${Math.round(scanpath.self.path_length)} px`;
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      this.notify(`fetch failed: ${String(err)}`);
    }
  }

  private drawPlot(model: ReturnType<typeof buildPlotModel>): void {
    const svg = el<HTMLElement>("plot-svg") as unknown as SVGSVGElement;
    svg.setAttribute("viewBox", model.viewBox);
    svg.innerHTML = "";

    const image = document.createElementNS(SVG_NS, "image");
    image.setAttribute("href", model.stimulusUrl);
    image.setAttribute("width", "100%");
    image.setAttribute("height", "100%");
    svg.append(image);

    if (model.densityUrl) {
      const density = document.createElementNS(SVG_NS, "image");
      density.setAttribute("href", model.densityUrl);
      density.setAttribute("width", "100%");
      density.setAttribute("height", "100%");
      svg.append(density);
    }

    for (const layer of model.layers) {
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute("d", layer.d);
      path.setAttribute("fill", "none");
      path.setAttribute("stroke", layer.stroke);
      path.setAttribute("stroke-width", String(layer.strokeWidth));
      path.setAttribute("data-layer", layer.id);
      svg.append(path);
      for (const [x, y] of layer.markers) {
        const dot = document.createElementNS(SVG_NS, "circle");
        dot.setAttribute("cx", String(x));
        dot.setAttribute("cy", String(y));
        dot.setAttribute("r", String(MARKER_RADIUS));
        dot.setAttribute("fill", layer.stroke);
        dot.setAttribute("data-marker", layer.id);
        svg.append(dot);
      }
    }
  }

  private drawCards(rows: ReturnType<typeof buildCards>): void {
    const box = el("cards");
    box.innerHTML = "";
    for (const row of rows) {
      const card = document.createElement("div");
      card.className = "card";
      const label = document.createElement("span");
      label.className = "card-label";
      label.textContent = row.label;
      const value = document.createElement("span");
      value.className = "card-value";
      value.textContent = row.value;
      card.append(label, value);
      box.append(card);
    }
  }
}

void new Dashboard().start().catch((err) => {
  const banner = document.getElementById("error-banner");
  if (banner) {
    banner.textContent = `dashboard failed to start: ${String(err)}`;
    banner.classList.add("visible");
  }
});
