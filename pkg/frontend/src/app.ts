// Playground application: load a page, filter it through the service,
// inspect and reverse verdicts, and tune the profile with live re-filtering.
//
// The view always derives from the latest /v1/filter response plus the
// reinstates the user clicked this session; at most one filter request is
// in flight and later edits supersede earlier ones.

import { ApiError, ConflictError, DetoxApi } from "./api.js";
import { FIXTURE_SERP_HTML } from "./fixture.js";
import {
  ProfileDraft,
  draftFromProfile,
  validateDraft,
} from "./profile.js";
import type { FilterResponse, Profile } from "./types.js";
import { decorateDocument, renderScanResult, summarize } from "./view.js";

const SHELL_HTML = `
<header class="dx-header">
  <h1>detox playground</h1>
  <div id="dx-status" class="dx-status" hidden></div>
</header>
<main class="dx-main">
  <section class="dx-loader">
    <h2>Document</h2>
    <button id="dx-load-fixture">Load fixture SERP</button>
    <label>mode
      <select id="dx-mode">
        <option value="search" selected>search</option>
        <option value="page">page</option>
      </select>
    </label>
    <textarea id="dx-paste" rows="4" placeholder="…or paste HTML here"></textarea>
    <button id="dx-load-paste">Filter pasted HTML</button>
  </section>
  <section class="dx-results">
    <h2>Filtered view</h2>
    <div id="dx-summary" class="dx-summary"></div>
    <div id="dx-doc" class="dx-doc"></div>
  </section>
  <aside class="dx-profile">
    <h2>Profile</h2>
    <div id="dx-conflict" class="dx-conflict" hidden></div>
    <label>sensitivity
      <input id="dx-sensitivity" type="range" min="-5" max="5" step="1" value="0">
      <input id="dx-sensitivity-value" type="text" size="3" value="0">
    </label>
    <fieldset>
      <legend>polarity overrides</legend>
      <div id="dx-overrides"></div>
      <input id="dx-override-term" placeholder="term">
      <input id="dx-override-score" placeholder="score" size="3">
      <button id="dx-override-add">add</button>
    </fieldset>
    <fieldset>
      <legend>blacklist</legend>
      <div id="dx-blacklist"></div>
      <input id="dx-blacklist-term" placeholder="word or phrase">
      <button id="dx-blacklist-add">add</button>
    </fieldset>
    <label><input id="dx-blur" type="checkbox" checked> blur matches (remove when off)</label>
    <label><input id="dx-profanity" type="checkbox" checked> filter profanity</label>
    <fieldset>
      <legend>disabled sites</legend>
      <div id="dx-disabled"></div>
      <input id="dx-disabled-site" placeholder="hostname suffix">
      <button id="dx-disabled-add">add</button>
    </fieldset>
    <button id="dx-save">Save &amp; re-filter</button>
    <ul id="dx-profile-errors" class="dx-errors"></ul>
  </aside>
  <section class="dx-scan">
    <h2>External content check</h2>
    <textarea id="dx-scan-text" rows="3" placeholder="page text or HTML"></textarea>
    <input id="dx-scan-site" placeholder="hostname">
    <button id="dx-scan-run">Scan</button>
    <div id="dx-scan-result"></div>
  </section>
</main>
`;

export class PlaygroundApp {
  readonly root: HTMLElement;
  readonly api: DetoxApi;

  sourceHtml: string | null = null;
  siteId = "serp";
  lastResponse: FilterResponse | null = null;
  reinstated = new Set<number>();
  draft: ProfileDraft;

  private filterSeq = 0;
  private controller: AbortController | null = null;
  private inflight: Promise<void> = Promise.resolve();

  constructor(root: HTMLElement, api: DetoxApi) {
    this.root = root;
    this.api = api;
    this.draft = {
      sensitivity: "0",
      overrides: [],
      blacklist: [],
      blur_enabled: true,
      profanity_enabled: true,
      disabled_sites: [],
      version: 0,
    };
    root.innerHTML = SHELL_HTML;
    this.wire();
  }

  // --- element access -------------------------------------------------------

  private el<T extends HTMLElement>(id: string): T {
    const found = this.root.querySelector<T>(`#${id}`);
    if (!found) throw new Error(`missing element #${id}`);
    return found;
  }

  private wire(): void {
    this.el("dx-load-fixture").addEventListener("click", () => void this.loadFixture());
    this.el("dx-load-paste").addEventListener("click", () => {
      const pasted = this.el<HTMLTextAreaElement>("dx-paste").value;
      void this.loadPasted(pasted);
    });
    const slider = this.el<HTMLInputElement>("dx-sensitivity");
    const sliderValue = this.el<HTMLInputElement>("dx-sensitivity-value");
    slider.addEventListener("input", () => {
      sliderValue.value = slider.value;
      this.draft.sensitivity = slider.value;
    });
    sliderValue.addEventListener("input", () => {
      this.draft.sensitivity = sliderValue.value;
    });
    this.el("dx-override-add").addEventListener("click", () => {
      const term = this.el<HTMLInputElement>("dx-override-term").value;
      const score = this.el<HTMLInputElement>("dx-override-score").value;
      this.draft.overrides.push({ term, score });
      this.renderProfileLists();
    });
    this.el("dx-blacklist-add").addEventListener("click", () => {
      const term = this.el<HTMLInputElement>("dx-blacklist-term").value;
      this.draft.blacklist.push(term);
      this.renderProfileLists();
    });
    this.el("dx-disabled-add").addEventListener("click", () => {
      const site = this.el<HTMLInputElement>("dx-disabled-site").value;
      this.draft.disabled_sites.push(site);
      this.renderProfileLists();
    });
    this.el<HTMLInputElement>("dx-blur").addEventListener("change", (event) => {
      this.draft.blur_enabled = (event.target as HTMLInputElement).checked;
    });
    this.el<HTMLInputElement>("dx-profanity").addEventListener("change", (event) => {
      this.draft.profanity_enabled = (event.target as HTMLInputElement).checked;
    });
    this.el("dx-save").addEventListener("click", () => void this.saveProfile());
    this.el("dx-scan-run").addEventListener("click", () => {
      const content = this.el<HTMLTextAreaElement>("dx-scan-text").value;
      const site = this.el<HTMLInputElement>("dx-scan-site").value;
      void this.runScan(content, site);
    });
  }

  // --- status banner ----------------------------------------------------------

  private setStatus(message: string | null): void {
    const banner = this.el("dx-status");
    if (message === null) {
      banner.hidden = true;
      banner.textContent = "";
    } else {
      banner.hidden = false;
      banner.textContent = message;
    }
  }

  // --- lifecycle ----------------------------------------------------------------

  async init(): Promise<void> {
    try {
      await this.api.health();
      const profile = await this.api.getProfile();
      this.adoptProfile(profile);
      this.setStatus(null);
    } catch {
      this.setStatus("service unreachable — start `detox serve` and reload");
    }
  }

  private adoptProfile(profile: Profile): void {
    this.draft = draftFromProfile(profile);
    this.el<HTMLInputElement>("dx-sensitivity").value = String(profile.sensitivity);
    this.el<HTMLInputElement>("dx-sensitivity-value").value = String(profile.sensitivity);
    this.el<HTMLInputElement>("dx-blur").checked = profile.blur_enabled;
    this.el<HTMLInputElement>("dx-profanity").checked = profile.profanity_enabled;
    this.renderProfileLists();
  }

  private renderProfileLists(): void {
    const render = (
      host: HTMLElement,
      entries: string[],
      onRemove: (index: number) => void,
    ) => {
      host.textContent = "";
      entries.forEach((entry, index) => {
        const row = host.ownerDocument.createElement("div");
        row.className = "dx-row";
        const label = host.ownerDocument.createElement("span");
        label.textContent = entry;
        const remove = host.ownerDocument.createElement("button");
        remove.textContent = "×";
        remove.className = "dx-remove";
        remove.addEventListener("click", () => {
          onRemove(index);
          this.renderProfileLists();
        });
        row.append(label, remove);
        host.appendChild(row);
      });
    };
    render(
      this.el("dx-overrides"),
      this.draft.overrides.map((o) => `${o.term} → ${o.score}`),
      (index) => this.draft.overrides.splice(index, 1),
    );
    render(this.el("dx-blacklist"), [...this.draft.blacklist], (index) =>
      this.draft.blacklist.splice(index, 1),
    );
    render(this.el("dx-disabled"), [...this.draft.disabled_sites], (index) =>
      this.draft.disabled_sites.splice(index, 1),
    );
  }

  // --- document loading and filtering ----------------------------------------------

  loadFixture(): Promise<void> {
    return this.loadPasted(FIXTURE_SERP_HTML);
  }

  loadPasted(html: string): Promise<void> {
    this.sourceHtml = html;
    this.reinstated.clear();
    return this.refilter();
  }

  get mode(): string {
    return this.el<HTMLSelectElement>("dx-mode").value;
  }

  refilter(): Promise<void> {
    if (this.sourceHtml === null) return Promise.resolve();
    const sequence = ++this.filterSeq;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const run = (async () => {
      try {
        const response = await this.api.filter(
          this.sourceHtml as string,
          this.siteId,
          this.mode,
          controller.signal,
        );
        if (sequence !== this.filterSeq) return; // superseded
        this.lastResponse = response;
        this.setStatus(null);
        await this.renderFiltered();
      } catch (error) {
        if (sequence !== this.filterSeq) return;
        if (error instanceof ApiError) {
          this.setStatus(`filter failed: ${error.message}`);
        } else if ((error as Error).name !== "AbortError") {
          this.setStatus("service unreachable — view preserved");
        }
      }
    })();
    this.inflight = this.inflight.then(() => run);
    return run;
  }

  private async renderFiltered(): Promise<void> {
    const response = this.lastResponse;
    if (!response) return;
    const docHost = this.el("dx-doc");
    docHost.innerHTML = response.html;
    decorateDocument(docHost, response, (itemId) => void this.reinstate(itemId));
    this.el("dx-summary").textContent = summarize(response);
    // local reinstates survive re-filtering: swap their originals back in
    for (const itemId of [...this.reinstated]) {
      await this.applyReinstate(itemId);
    }
  }

  async reinstate(itemId: number): Promise<void> {
    const run = (async () => {
      await this.applyReinstate(itemId);
      this.reinstated.add(itemId);
    })();
    this.inflight = this.inflight.then(() => run);
    return run;
  }

  private async applyReinstate(itemId: number): Promise<void> {
    const marker = this.el("dx-doc").querySelector<HTMLElement>(
      `[data-detox][data-item="${itemId}"]`,
    );
    if (!marker) return;
    try {
      const original = await this.api.original(itemId);
      const holder = marker.ownerDocument.createElement("div");
      holder.innerHTML = original.html;
      marker.replaceWith(...Array.from(holder.childNodes));
    } catch (error) {
      if (error instanceof ApiError) this.setStatus(`reinstate failed: ${error.message}`);
      else this.setStatus("service unreachable — view preserved");
    }
  }

  // --- profile editing ----------------------------------------------------------------

  async saveProfile(): Promise<void> {
    const errorHost = this.el("dx-profile-errors");
    errorHost.textContent = "";
    this.el("dx-conflict").hidden = true;

    const { errors, profile } = validateDraft(this.draft);
    if (errors.length > 0 || profile === null) {
      for (const message of errors) {
        const item = errorHost.ownerDocument.createElement("li");
        item.textContent = message;
        errorHost.appendChild(item);
      }
      return; // invalid draft: no PUT
    }
    try {
      const stored = await this.api.putProfile(profile);
      this.adoptProfile(stored);
      await this.refilter();
    } catch (error) {
      if (error instanceof ConflictError) {
        const stored = await this.api.getProfile();
        this.adoptProfile(stored);
        const notice = this.el("dx-conflict");
        notice.hidden = false;
        notice.textContent =
          "profile changed elsewhere — reloaded the stored settings, please re-apply your edit";
      } else if (error instanceof ApiError) {
        this.setStatus(`profile save failed: ${error.message}`);
      } else {
        this.setStatus("service unreachable — view preserved");
      }
    }
  }

  // --- scanning --------------------------------------------------------------------------

  async runScan(content: string, site: string): Promise<void> {
    const target = this.el("dx-scan-result");
    if (!content.trim()) {
      renderScanResult(target, false, []);
      return;
    }
    try {
      const report = await this.api.scan(content, site);
      renderScanResult(target, report.warn, report.hits);
      this.setStatus(null);
    } catch (error) {
      if (error instanceof ApiError) this.setStatus(`scan failed: ${error.message}`);
      else this.setStatus("service unreachable — view preserved");
    }
  }

  whenIdle(): Promise<void> {
    return this.inflight;
  }
}

export async function bootstrap(root: HTMLElement, baseUrl: string): Promise<PlaygroundApp> {
  const app = new PlaygroundApp(root, new DetoxApi(baseUrl));
  await app.init();
  return app;
}
