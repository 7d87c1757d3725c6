// Application wiring: sliders drive client-side regrouping (never a
// server call), the apply button and run controls are the only paths
// that mutate server state, and snapshots arrive push-first with a 1 s
// polling fallback.

import { SessionClient, rangesFromWire } from "./api.js";
import { groupSolutions, type Solution } from "./grouping.js";
import { SliderState, extendSliders, slidersFromData, slidersToRanges } from "./sliders.js";
import { renderColumns, renderToolbox } from "./render.js";
import { ViewState } from "./view.js";

export class App {
  client: SessionClient;
  solutions: Solution[] = [];
  sliders: SliderState[] = [];
  view: ViewState;
  k: number;
  private regroupQueued = false;

  constructor(
    baseUrl: string,
    k: number,
    private doc: Document,
    private columnsRoot: HTMLElement,
    private toolboxRoot: HTMLElement,
    private errorBadge: HTMLElement,
  ) {
    this.client = new SessionClient(baseUrl);
    this.k = k;
    this.view = new ViewState(k);
  }

  async boot(): Promise<void> {
    const state = await this.client.getState();
    this.solutions = state.solutions;
    this.sliders = slidersFromData(this.solutions, this.k);
    this.view.applied = rangesFromWire(state.ranges);
    renderToolbox(this.toolboxRoot, state);
    this.regroup();
    void this.listen();
  }

  /** Slider edit: clamp, then coalesce regroups to one per frame. */
  onSliderChange(objective: number, side: "lower" | "upper", value: number): void {
    const slider = this.sliders[objective];
    if (side === "lower") slider.setLower(value);
    else slider.setUpper(value);
    this.view.pending = slidersToRanges(this.sliders);
    if (this.regroupQueued) return;
    this.regroupQueued = true;
    requestAnimationFrame(() => {
      this.regroupQueued = false;
      this.regroup();
    });
  }

  regroup(): void {
    const grouped = groupSolutions(this.solutions, slidersToRanges(this.sliders));
    renderColumns(this.doc, this.columnsRoot, this.solutions, grouped, this.k, this.view);
  }

  async applyRanges(): Promise<void> {
    try {
      await this.client.postRanges(this.view.pending);
      this.view.markApplied();
      this.errorBadge.textContent = "";
    } catch (err) {
      // applied state unchanged on rejection
      this.errorBadge.textContent = `ranges rejected: ${err}`;
    }
  }

  async start(): Promise<void> {
    try {
      await this.client.start();
      this.errorBadge.textContent = "";
    } catch (err) {
      this.errorBadge.textContent = "budget exhausted, raise it to continue";
    }
  }

  async stop(): Promise<void> {
    await this.client.stop();
  }

  async setBudget(evals: number): Promise<void> {
    await this.client.setBudget(evals);
  }

  async refresh(): Promise<void> {
    const state = await this.client.getState();
    this.solutions = state.solutions;
    extendSliders(this.sliders, this.solutions);
    renderToolbox(this.toolboxRoot, state);
    this.regroup();
  }

  /** Push-driven refresh with a polling fallback when the stream drops. */
  private async listen(): Promise<void> {
    for (;;) {
      try {
        await this.client.subscribeEvents(() => void this.refresh());
      } catch {
        // stream gone; poll once, then retry the stream
        try {
          await this.refresh();
        } catch {}
      }
      await new Promise((resolve) => setTimeout(resolve, 1000));
    }
  }
}

export function mount(doc: Document, baseUrl: string, k: number): App {
  const app = new App(
    baseUrl,
    k,
    doc,
    doc.getElementById("columns")!,
    doc.getElementById("toolbox")!,
    doc.getElementById("error-badge")!,
  );
  void app.boot();
  return app;
}
